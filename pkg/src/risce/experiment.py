"""Seeded Monte Carlo experiment engine behind the command-line interface.

Runs estimation-error sweeps over training lengths and end-to-end rate
evaluations, writing one CSV row per (trial, method, T) cell plus a
gnuplot-friendly summary file.  All randomness is derived from the master
seed through per-purpose streams, so results are byte-reproducible and
adding methods or training lengths never perturbs other cells.
"""

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import admm, baselines, channel, sampling, tuning

KNOWN_METHODS = ("admm", "ls", "omp")

# purpose tags for the per-(trial, T) random streams; link 2 of the rate
# evaluation uses tag + _LINK2
_TAG_CHANNEL = 1
_TAG_CODEBOOK = 2
_TAG_SCHEDULE = 3
_TAG_NOISE = 4
_LINK2 = 16

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

ROW_HEADER = "trial,method,t,nmse,rate_bps_hz,seed,wall_ms"
RATE_HEADER = "trial,t,rate_perfect_bps_hz,rate_estimated_bps_hz,ratio,seed,wall_ms"


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment knobs; every field has a documented default."""

    n_h: int = 8
    n_v: int = 4
    b: int = 4
    m: int | None = None  # None means M = N
    t_list: tuple[int, ...] = (20, 60, 100)
    snr_db: float = 5.0
    n_p: int = 3
    trials: int = 100
    master_seed: int = 1
    methods: tuple[str, ...] = ("admm", "ls", "omp")
    tau_r: float | None = None  # None means data-driven default
    tau_z: float | None = None
    gamma: float = 0.5
    i_max: int = 600
    tol: float = 1e-6
    ista_steps: int = 20
    output_path: str = "results.csv"

    def __post_init__(self):
        geometry = self.geometry  # validates n_h, n_v
        if not 1 <= self.b <= 8:
            raise ValueError("b must lie in [1, 8]")
        if self.m is not None and not 1 <= self.m <= (1 << self.b) ** geometry.n:
            raise ValueError("m must lie in [1, (2**b)**N]")
        if len(self.t_list) == 0:
            raise ValueError("t_list must be nonempty")
        if any(t < 1 for t in self.t_list):
            raise ValueError("training lengths must be positive")
        if any(a >= b for a, b in zip(self.t_list, self.t_list[1:])):
            raise ValueError("t_list must be strictly increasing")
        if self.n_p < 1:
            raise ValueError("n_p must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= self.master_seed < (1 << 64):
            raise ValueError("master_seed must fit in 64 bits")
        if len(self.methods) == 0:
            raise ValueError("methods must be nonempty")
        for method in self.methods:
            if method not in KNOWN_METHODS:
                raise ValueError(f"unknown method '{method}'")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("methods must not repeat")
        for name in ("tau_r", "tau_z"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValueError(f"{name} must be positive when given")
        # remaining iteration knobs are validated by AdmmParams on use
        _ = admm.AdmmParams(1.0, 1.0, self.gamma, self.i_max, self.tol, self.ista_steps)

    @property
    def geometry(self) -> channel.RisGeometry:
        return channel.RisGeometry(self.n_h, self.n_v)

    @property
    def codebook_size(self) -> int:
        return self.geometry.n if self.m is None else self.m

    @property
    def snr_linear(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)


@dataclass
class ResultRow:
    trial: int
    method: str
    t: int
    nmse: float
    rate_bps_hz: float | None
    seed: int
    wall_ms: float


_PARSERS = {
    "n_h": int,
    "n_v": int,
    "b": int,
    "m": int,
    "t_list": lambda v: tuple(int(x) for x in v.split(",") if x.strip() != ""),
    "snr_db": float,
    "n_p": int,
    "trials": int,
    "master_seed": int,
    "methods": lambda v: tuple(x.strip() for x in v.split(",") if x.strip() != ""),
    "tau_r": float,
    "tau_z": float,
    "gamma": float,
    "i_max": int,
    "tol": float,
    "ista_steps": int,
    "output_path": str,
}


class ConfigError(ValueError):
    """Malformed or invalid experiment configuration document."""


def parse_config(text: str) -> ExperimentConfig:
    """Parse a flat key=value document into a validated config.

    Blank lines and lines starting with '#' are ignored.  Unknown and
    duplicate keys are rejected with the offending line number and key.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got '{raw}'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for key '{key}': {exc}") from None
    try:
        return ExperimentConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def trial_seed(master_seed: int, trial: int) -> int:
    """64-bit per-trial seed; distinct trials always map to distinct seeds."""
    x = (master_seed + _GOLDEN * (trial + 1)) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def _stream(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *tags]))


def _admm_params(config: ExperimentConfig, obs: sampling.ObservationMatrix) -> admm.AdmmParams:
    tau_r, tau_z = config.tau_r, config.tau_z
    if tau_r is None or tau_z is None:
        auto_r, auto_z = admm.default_weights(obs, config.n_p)
        tau_r = auto_r if tau_r is None else tau_r
        tau_z = auto_z if tau_z is None else tau_z
    return admm.AdmmParams(
        tau_r, tau_z, config.gamma, config.i_max, config.tol, config.ista_steps
    )


def _draw_link(config, seed, t, link_offset=0):
    """Channel, codebook, schedule, pilots, and observations for one training phase."""
    geometry = config.geometry
    dictionary = channel.dft_dictionary(geometry)
    phases = sampling.phase_set(config.b)
    ch_rng = _stream(seed, _TAG_CHANNEL + link_offset)
    paths = channel.draw_paths(ch_rng, config.n_p)
    realization = channel.assemble_channel(paths, geometry, dictionary)
    cb_rng = _stream(seed, _TAG_CODEBOOK + link_offset)
    codebook = sampling.draw_codebook(cb_rng, config.codebook_size, geometry, phases)
    sch_rng = _stream(seed, t, _TAG_SCHEDULE + link_offset)
    schedule = sampling.draw_schedule(sch_rng, codebook.m, t)
    pilots = sampling.constant_pilots(t)
    noise_rng = _stream(seed, t, _TAG_NOISE + link_offset)
    obs = sampling.simulate_training(
        realization, codebook, schedule, pilots, config.snr_linear, noise_rng
    )
    return realization, dictionary, codebook, schedule, pilots, obs


def _estimate(method, config, realization, dictionary, codebook, schedule, pilots, obs):
    if method == "admm":
        result = admm.run(obs, codebook, schedule, dictionary, pilots, _admm_params(config, obs))
        return result.z_hat
    stacked = baselines.stack(obs, codebook, schedule, dictionary, pilots)
    if method == "ls":
        return baselines.ls_estimate(stacked)
    if method == "omp":
        sparsity = min(config.n_p, stacked.t, stacked.n)
        return baselines.omp_estimate(stacked, sparsity)
    raise ValueError(f"unknown method '{method}'")


def run_nmse_sweep(config: ExperimentConfig, measure_time: bool = False) -> tuple[Path, Path]:
    """Estimation-error sweep; returns the row CSV path and the summary path.

    The channel and codebook are drawn once per trial and shared across all
    training lengths; schedule and noise are redrawn per (trial, T).  With
    ``measure_time`` left off, wall_ms is written as 0.0 so repeated runs
    produce byte-identical files.
    """
    rows = []
    for trial in range(config.trials):
        seed = trial_seed(config.master_seed, trial)
        for t in config.t_list:
            realization, dictionary, codebook, schedule, pilots, obs = _draw_link(
                config, seed, t
            )
            for method in config.methods:
                start = time.perf_counter()
                try:
                    z_hat = _estimate(
                        method, config, realization, dictionary, codebook, schedule,
                        pilots, obs,
                    )
                    error = admm.nmse(realization.beamspace, z_hat)
                except (ValueError, np.linalg.LinAlgError):
                    error = float("nan")
                wall_ms = (time.perf_counter() - start) * 1e3 if measure_time else 0.0
                rows.append(ResultRow(trial, method, t, error, None, seed, wall_ms))
    rows_path = Path(config.output_path)
    _write_rows(rows_path, rows)
    summary_path = _summary_target(rows_path)
    _write_nmse_summary(summary_path, config, rows)
    return rows_path, summary_path


def run_rate_eval(config: ExperimentConfig, measure_time: bool = False) -> tuple[Path, Path]:
    """Rate comparison between exhaustive tuning on estimated and true channels.

    Both hops are trained independently (separate codebooks, schedules, and
    noise).  Both tunings are evaluated on the true channels, so the
    perfect-knowledge rate upper-bounds the estimated one per trial.
    """
    phases = sampling.phase_set(config.b)
    n = config.geometry.n
    candidates = tuning.num_candidates(phases, n)
    if candidates > tuning.SEARCH_BUDGET:
        raise ValueError(
            f"exhaustive search needs {candidates} candidates but the budget is "
            f"{tuning.SEARCH_BUDGET}; reduce N or b"
        )
    records = []
    for trial in range(config.trials):
        seed = trial_seed(config.master_seed, trial)
        for t in config.t_list:
            start = time.perf_counter()
            estimates = {}
            truths = {}
            for link_offset in (0, _LINK2):
                realization, dictionary, codebook, schedule, pilots, obs = _draw_link(
                    config, seed, t, link_offset
                )
                result = admm.run(
                    obs, codebook, schedule, dictionary, pilots, _admm_params(config, obs)
                )
                truths[link_offset] = realization.spatial
                estimates[link_offset] = result.h_hat
            h1, h2 = truths[0], truths[_LINK2]
            config_true = tuning.exhaustive_search(h1, h2, phases, n)
            config_est = tuning.exhaustive_search(estimates[0], estimates[_LINK2], phases, n)
            rate_perfect = tuning.achievable_rate(h1, h2, config_true, config.snr_linear)
            rate_estimated = tuning.achievable_rate(h1, h2, config_est, config.snr_linear)
            ratio = rate_estimated / rate_perfect if rate_perfect > 0 else float("nan")
            wall_ms = (time.perf_counter() - start) * 1e3 if measure_time else 0.0
            records.append((trial, t, rate_perfect, rate_estimated, ratio, seed, wall_ms))
    rows_path = Path(config.output_path)
    lines = [RATE_HEADER]
    for trial, t, rp, re_, ratio, seed, wall_ms in records:
        lines.append(
            f"{trial},{t},{_fmt(rp)},{_fmt(re_)},{_fmt(ratio)},{seed},{_fmt(wall_ms)}"
        )
    _write_text(rows_path, lines)
    summary_path = _summary_target(rows_path)
    slines = ["# t mean_rate_perfect_bps_hz mean_rate_estimated_bps_hz ratio_of_means trials"]
    for t in config.t_list:
        perfect = [r[2] for r in records if r[1] == t]
        estimated = [r[3] for r in records if r[1] == t]
        mp, me = float(np.mean(perfect)), float(np.mean(estimated))
        ratio = me / mp if mp > 0 else float("nan")
        slines.append(f"{t} {_fmt(mp)} {_fmt(me)} {_fmt(ratio)} {len(perfect)}")
    _write_text(summary_path, slines)
    return rows_path, summary_path


@dataclass
class SingleRunReport:
    method: str
    t: int
    nmse: float
    wall_ms: float
    iterations: int | None = None
    final_residuals: tuple[float, float] | None = None


def estimate_once(config: ExperimentConfig, trial: int = 0) -> list[SingleRunReport]:
    """Run one seeded instance per (method, T) and report errors and diagnostics."""
    reports = []
    seed = trial_seed(config.master_seed, trial)
    for t in config.t_list:
        realization, dictionary, codebook, schedule, pilots, obs = _draw_link(config, seed, t)
        for method in config.methods:
            start = time.perf_counter()
            iterations = None
            final_residuals = None
            if method == "admm":
                result = admm.run(
                    obs, codebook, schedule, dictionary, pilots, _admm_params(config, obs)
                )
                z_hat = result.z_hat
                iterations = result.iterations_used
                last = result.primal_residuals[-1]
                final_residuals = (float(last[0]), float(last[1]))
            else:
                z_hat = _estimate(
                    method, config, realization, dictionary, codebook, schedule, pilots, obs
                )
            wall_ms = (time.perf_counter() - start) * 1e3
            error = admm.nmse(realization.beamspace, z_hat)
            reports.append(
                SingleRunReport(method, t, error, wall_ms, iterations, final_residuals)
            )
    return reports


def _fmt(x: float) -> str:
    return f"{x:.12e}"


def _summary_target(rows_path: Path) -> Path:
    return rows_path.with_name(rows_path.stem + ".summary.dat")


def _write_rows(path: Path, rows: list[ResultRow]) -> None:
    lines = [ROW_HEADER]
    for row in rows:
        rate = "" if row.rate_bps_hz is None else _fmt(row.rate_bps_hz)
        lines.append(
            f"{row.trial},{row.method},{row.t},{_fmt(row.nmse)},{rate},"
            f"{row.seed},{_fmt(row.wall_ms)}"
        )
    _write_text(path, lines)


def _write_nmse_summary(path: Path, config: ExperimentConfig, rows: list[ResultRow]) -> None:
    lines = ["# method t mean_nmse trials"]
    for method in config.methods:
        for t in config.t_list:
            errors = [r.nmse for r in rows if r.method == method and r.t == t]
            lines.append(f"{method} {t} {_fmt(float(np.mean(errors)))} {len(errors)}")
    _write_text(path, lines)


def _write_text(path: Path, lines: list[str]) -> None:
    try:
        path = Path(path)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise RuntimeError(f"cannot write output file {path}: {exc}") from exc
