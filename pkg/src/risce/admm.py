"""ADMM estimator for the sparsely observed single-RF training matrix.

The training observations form an M x T matrix with one known entry per
column.  The noiseless combined matrix is rank one (outer product of the
combined channel and the pilot row), and the channel is sparse in beamspace.
The estimator therefore minimizes, over the completed matrix and the
beamspace vector jointly, a nuclear norm plus an l1 penalty plus quadratic
data-fit terms, split with two auxiliary matrices and solved by alternating
proximal steps with scaled dual ascent:

* a singular-value-thresholding step completes the matrix,
* a diagonal linear solve reconciles the completed matrix with the data,
* proximal-gradient (ISTA) steps pull the beamspace vector toward the
  completed matrix through the codebook-dictionary product B = W D,
* a closed-form shrink updates the slack matrix, then the duals move along
  the two constraint residuals.

All steps are deterministic; running twice on the same inputs is
bit-reproducible.
"""

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .channel import BeamspaceDictionary
from .sampling import ConfigCodebook, ObservationMatrix, SamplingSchedule, TrainingSequence

# Data-driven default penalty weights, in units of ||R||_F / sqrt(M T) * sqrt(N_p).
# Calibrated on held-out seeds so that the estimator neither fits noise nor
# collapses to zero at the low per-measurement SNRs this front end produces.
TAU_R_SCALE = 0.5
TAU_Z_SCALE = 6.0


@dataclass(frozen=True)
class AdmmParams:
    """Penalty weights and iteration controls.

    ``tau_r`` weighs the nuclear norm, ``tau_z`` the l1 penalty, ``gamma``
    is the dual step size in (0, 1), ``ista_steps`` the number of inner
    proximal-gradient steps per outer iteration.  Iterations stop at
    ``i_max`` or once both constraint residuals fall below ``tol``.
    """

    tau_r: float
    tau_z: float
    gamma: float = 0.5
    i_max: int = 600
    tol: float = 1e-6
    ista_steps: int = 20

    def __post_init__(self):
        if not self.tau_r > 0 or not self.tau_z > 0:
            raise ValueError("tau_r and tau_z must be positive")
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must lie in (0, 1)")
        if self.i_max < 1:
            raise ValueError("i_max must be at least 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.ista_steps < 1:
            raise ValueError("ista_steps must be at least 1")


@dataclass
class AdmmState:
    """Iterates of the splitting; all matrices share the M x T shape."""

    y_tilde: np.ndarray
    x: np.ndarray
    c: np.ndarray
    z: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    iteration: int = 0

    @classmethod
    def zeros(cls, m: int, t: int, n: int) -> "AdmmState":
        shape = (m, t)
        return cls(
            y_tilde=np.zeros(shape, dtype=complex),
            x=np.zeros(shape, dtype=complex),
            c=np.zeros(shape, dtype=complex),
            z=np.zeros(n, dtype=complex),
            v1=np.zeros(shape, dtype=complex),
            v2=np.zeros(shape, dtype=complex),
        )


class IterationStats(NamedTuple):
    residual_completion: float  # ||X - Y~||_F
    residual_coupling: float    # ||C - X + B z q||_F
    objective: float


@dataclass(frozen=True)
class EstimateResult:
    """Final beamspace/spatial estimates plus per-iteration diagnostics."""

    z_hat: np.ndarray
    h_hat: np.ndarray
    iterations_used: int
    primal_residuals: np.ndarray  # shape (iterations_used, 2)
    objective_trace: np.ndarray


@dataclass(frozen=True)
class TrainingOperator:
    """Cached products of B = W D shared across iterations."""

    b: np.ndarray
    bhb: np.ndarray
    lipschitz: float

    @classmethod
    def build(cls, codebook: ConfigCodebook, dictionary: BeamspaceDictionary) -> "TrainingOperator":
        if codebook.n != dictionary.n:
            raise ValueError("codebook width does not match dictionary size")
        b = codebook.matrix @ dictionary.matrix
        bhb = b.conj().T @ b
        lipschitz = float(np.linalg.eigvalsh(bhb)[-1])
        if lipschitz <= 0:
            raise ValueError("codebook-dictionary product has no energy")
        return cls(b, bhb, lipschitz)


def svt(matrix: np.ndarray, threshold: float) -> np.ndarray:
    """Singular value thresholding, the proximal operator of the nuclear norm."""
    shrunk, _ = _svt_with_values(matrix, threshold)
    return shrunk


def _svt_with_values(matrix, threshold):
    matrix = np.asarray(matrix)
    if not np.all(np.isfinite(matrix)):
        raise ValueError("svt input must be finite")
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    u, s, vh = np.linalg.svd(matrix, full_matrices=False)
    shrunk = np.maximum(s - threshold, 0.0)
    return (u * shrunk) @ vh, shrunk


def soft_threshold(xi: np.ndarray, threshold: float) -> np.ndarray:
    """Complex soft thresholding, applied to real and imaginary parts separately."""
    xi = np.asarray(xi)
    if not np.all(np.isfinite(xi)):
        raise ValueError("soft_threshold input must be finite")
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    re = np.sign(xi.real) * np.maximum(np.abs(xi.real) - threshold, 0.0)
    im = np.sign(xi.imag) * np.maximum(np.abs(xi.imag) - threshold, 0.0)
    return re + 1j * im


def x_update(
    state: AdmmState,
    obs: ObservationMatrix,
    params: AdmmParams,
    coupling: np.ndarray | None = None,
) -> np.ndarray:
    """Minimize the quadratic terms over X; the system is diagonal.

    The normal equations have the diagonal matrix mask + 2*gamma, so each
    entry of X is the matching right-hand-side entry of
    gamma*Y~ + R + V1 + V2 + gamma*C divided by that scalar.  ``coupling``
    optionally adds gamma * (B z q) to the right-hand side, which completes
    the exact minimizer of the coupled quadratic; :func:`iterate` passes it.
    """
    gamma = params.gamma
    rhs = gamma * state.y_tilde + obs.to_dense() + state.v1 + state.v2 + gamma * state.c
    if coupling is not None:
        rhs = rhs + gamma * coupling
    return rhs / (obs.mask() + 2.0 * gamma)


def z_update(
    state: AdmmState,
    codebook: ConfigCodebook,
    dictionary: BeamspaceDictionary,
    pilots: TrainingSequence,
    params: AdmmParams,
    operator: TrainingOperator | None = None,
) -> np.ndarray:
    """Proximal-gradient steps on the l1-penalized coupling term.

    Starting from the state's current z, runs ``ista_steps`` iterations of

        z <- soft(z - mu*gamma*(||q||^2 B^H B z - B^H G q^H), mu*tau_z)

    with G = X - C - V2/gamma and step size mu = 1/(gamma ||q||^2 L), L the
    largest eigenvalue of B^H B.
    """
    if operator is None:
        operator = TrainingOperator.build(codebook, dictionary)
    q = pilots.symbols
    qn2 = float(np.real(np.vdot(q, q)))
    gamma = params.gamma
    mu = 1.0 / (gamma * qn2 * operator.lipschitz)
    g = state.x - state.c - state.v2 / gamma
    bh_g_qh = operator.b.conj().T @ (g @ q.conj())
    z = state.z
    for _ in range(params.ista_steps):
        grad = gamma * (qn2 * (operator.bhb @ z) - bh_g_qh)
        z = soft_threshold(z - mu * grad, mu * params.tau_z)
    return z


def iterate(
    obs: ObservationMatrix,
    codebook: ConfigCodebook,
    schedule: SamplingSchedule,
    dictionary: BeamspaceDictionary,
    pilots: TrainingSequence,
    params: AdmmParams,
) -> Iterator[tuple[AdmmState, IterationStats]]:
    """Yield the state and residuals after each outer iteration, up to i_max.

    Two transcription defects in the derivation's printed step list are
    corrected here, both required for convergence: the first dual variable
    ascends along its own constraint residual Y~ - X (not its negation), and
    the X step's right-hand side carries the gamma * B z q coupling term of
    the exact minimizer.
    """
    _check_dimensions(obs, codebook, schedule, dictionary, pilots)
    operator = TrainingOperator.build(codebook, dictionary)
    q = pilots.symbols
    gamma = params.gamma
    svt_threshold = params.tau_r / gamma
    state = AdmmState.zeros(obs.m, obs.t, dictionary.n)
    r_dense = obs.to_dense()
    mask = obs.mask()
    for it in range(1, params.i_max + 1):
        state.y_tilde, sv = _svt_with_values(state.x - state.v1 / gamma, svt_threshold)
        coupling = np.outer(operator.b @ state.z, q)
        state.x = x_update(state, obs, params, coupling=coupling)
        state.z = z_update(state, codebook, dictionary, pilots, params, operator=operator)
        bzq = np.outer(operator.b @ state.z, q)
        state.c = gamma / (1.0 + gamma) * (state.x - bzq - state.v2 / gamma)
        state.v1 = state.v1 + gamma * (state.y_tilde - state.x)
        state.v2 = state.v2 + gamma * (state.c - state.x + bzq)
        state.iteration = it
        r1 = float(np.linalg.norm(state.x - state.y_tilde))
        r2 = float(np.linalg.norm(state.c - state.x + bzq))
        objective = (
            params.tau_r * float(np.sum(np.maximum(sv - svt_threshold, 0.0)))
            + params.tau_z * float(np.sum(np.abs(state.z.real) + np.abs(state.z.imag)))
            + 0.5 * float(np.linalg.norm(state.c)) ** 2
            + 0.5 * float(np.linalg.norm(mask * state.x - r_dense)) ** 2
        )
        yield state, IterationStats(r1, r2, objective)


def run(
    obs: ObservationMatrix,
    codebook: ConfigCodebook,
    schedule: SamplingSchedule,
    dictionary: BeamspaceDictionary,
    pilots: TrainingSequence,
    params: AdmmParams,
) -> EstimateResult:
    """Run the estimator to convergence and return estimates plus diagnostics."""
    residuals = []
    objectives = []
    state = None
    for state, stats in iterate(obs, codebook, schedule, dictionary, pilots, params):
        residuals.append((stats.residual_completion, stats.residual_coupling))
        objectives.append(stats.objective)
        if stats.residual_completion < params.tol and stats.residual_coupling < params.tol:
            break
    z_hat = state.z.copy()
    return EstimateResult(
        z_hat=z_hat,
        h_hat=dictionary.matrix @ z_hat,
        iterations_used=state.iteration,
        primal_residuals=np.asarray(residuals),
        objective_trace=np.asarray(objectives),
    )


def nmse(z_true: np.ndarray, z_hat: np.ndarray) -> float:
    """Estimation error ||z - z_hat|| / ||z|| (ratio of norms, not squared)."""
    z_true = np.asarray(z_true)
    z_hat = np.asarray(z_hat)
    if z_true.shape != z_hat.shape:
        raise ValueError("vectors must have equal length")
    denom = np.linalg.norm(z_true)
    if denom == 0:
        raise ValueError("reference vector must be nonzero")
    return float(np.linalg.norm(z_true - z_hat) / denom)


def default_weights(obs: ObservationMatrix, n_paths: int) -> tuple[float, float]:
    """Data-driven penalty weights scaled by the observation energy and sqrt(N_p)."""
    if n_paths < 1:
        raise ValueError("n_paths must be at least 1")
    scale = float(np.linalg.norm(obs.entries)) / np.sqrt(obs.m * obs.t) * np.sqrt(n_paths)
    if scale == 0:
        # all-zero observations carry no scale information; any positive weight works
        scale = 1.0
    return TAU_R_SCALE * scale, TAU_Z_SCALE * scale


def _check_dimensions(obs, codebook, schedule, dictionary, pilots):
    if obs.m != codebook.m:
        raise ValueError("observation rows do not match codebook size")
    if codebook.n != dictionary.n:
        raise ValueError("codebook width does not match dictionary size")
    if pilots.t != obs.t:
        raise ValueError("pilot sequence length does not match observations")
    if schedule.t != obs.t or not np.array_equal(schedule.selection, obs.schedule.selection):
        raise ValueError("schedule does not match the one that produced the observations")
