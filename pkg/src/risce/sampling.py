"""Behavioral model of the single-RF-chain front end used for training.

During a training slot the surface applies one row of a random configuration
codebook ``W`` (entries drawn from a b-bit unit-modulus phase alphabet), sums
the element outputs into the single receive chain, and stores one complex
scalar.  Over T slots this yields a sparsely observed M x T matrix with
exactly one entry per column, the input to the estimators.

Using more than one configuration per training symbol needs no extra code
path: repeat the symbol in the pilot sequence and extend the schedule.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, RisGeometry


@dataclass(frozen=True)
class PhaseSet:
    """The 2**bits unit-modulus reflection coefficients a cell can take."""

    bits: int
    values: np.ndarray

    @property
    def cardinality(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class ConfigCodebook:
    """M x N matrix of candidate element configurations (unit-modulus entries)."""

    matrix: np.ndarray

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class SamplingSchedule:
    """Per-slot choice of codebook row; entry t selects the row used in slot t."""

    selection: np.ndarray
    m: int

    def __post_init__(self):
        selection = np.asarray(self.selection, dtype=np.int64)
        if selection.ndim != 1 or selection.size < 1:
            raise ValueError("selection must be a nonempty vector")
        if np.any(selection < 0) or np.any(selection >= self.m):
            raise ValueError("selection entries must lie in [0, m)")
        object.__setattr__(self, "selection", selection)

    @property
    def t(self) -> int:
        return self.selection.size


@dataclass(frozen=True)
class TrainingSequence:
    """Unit-modulus pilot symbols, one per training slot."""

    symbols: np.ndarray

    def __post_init__(self):
        symbols = np.asarray(self.symbols, dtype=complex)
        if symbols.ndim != 1 or symbols.size < 1:
            raise ValueError("pilot sequence must be a nonempty vector")
        if np.any(np.abs(np.abs(symbols) - 1.0) > 1e-12):
            raise ValueError("pilot symbols must have unit modulus")
        object.__setattr__(self, "symbols", symbols)

    @property
    def t(self) -> int:
        return self.symbols.size


@dataclass(frozen=True)
class ObservationMatrix:
    """Sparse M x T training observations: one stored entry per slot column.

    ``entries[t]`` is the RF-chain input of slot t, located at row
    ``schedule.selection[t]`` of the dense M x T matrix.
    """

    entries: np.ndarray
    schedule: SamplingSchedule

    @property
    def m(self) -> int:
        return self.schedule.m

    @property
    def t(self) -> int:
        return self.schedule.t

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.m, self.t), dtype=complex)
        dense[self.schedule.selection, np.arange(self.t)] = self.entries
        return dense

    def mask(self) -> np.ndarray:
        """0/1 matrix with a single one per column at the selected row."""
        mask = np.zeros((self.m, self.t))
        mask[self.schedule.selection, np.arange(self.t)] = 1.0
        return mask


def phase_set(bits: int) -> PhaseSet:
    """All 2**bits-th roots of unity, in increasing phase order from 1."""
    if not 1 <= bits <= 8:
        raise ValueError("bits must lie in [1, 8]")
    card = 1 << bits
    values = np.exp(2j * np.pi * np.arange(card) / card)
    return PhaseSet(bits, values)


def draw_codebook(
    rng: np.random.Generator,
    m: int,
    geometry: RisGeometry,
    phases: PhaseSet,
) -> ConfigCodebook:
    """Draw an M x N codebook with i.i.d. uniform entries from the alphabet."""
    # python ints: the bound (2**bits)**N may exceed any fixed-width type
    if not 1 <= m <= phases.cardinality ** geometry.n:
        raise ValueError("m must lie in [1, cardinality**N]")
    idx = rng.integers(0, phases.cardinality, size=(m, geometry.n))
    return ConfigCodebook(phases.values[idx])


def draw_schedule(rng: np.random.Generator, m: int, t: int) -> SamplingSchedule:
    """Draw T independent uniform row choices over [0, m)."""
    if m < 1 or t < 1:
        raise ValueError("m and t must be at least 1")
    return SamplingSchedule(rng.integers(0, m, size=t), m)


def constant_pilots(t: int) -> TrainingSequence:
    """All-ones pilot sequence (the default)."""
    return TrainingSequence(np.ones(t, dtype=complex))


def qpsk_pilots(rng: np.random.Generator, t: int) -> TrainingSequence:
    """Random unit-modulus QPSK pilot sequence."""
    return TrainingSequence(np.exp(0.5j * np.pi * rng.integers(0, 4, size=t)))


def received_training_signals(
    channel: ChannelRealization,
    pilots: TrainingSequence,
    snr_linear: float,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """N x T element-level signals: pilot-scaled channel plus per-element noise.

    Noise entries are i.i.d. circular complex Gaussian with variance
    1/snr_linear.  Pass ``snr_linear = numpy.inf`` for the noiseless case
    (then no random source is needed).
    """
    if not snr_linear > 0:
        raise ValueError("snr_linear must be positive")
    h = np.asarray(channel.spatial)
    y = np.outer(h, pilots.symbols)
    if np.isfinite(snr_linear):
        if rng is None:
            raise ValueError("a random source is required when noise is present")
        shape = y.shape
        scale = 1.0 / np.sqrt(2.0 * snr_linear)
        y = y + scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return y


def observe(
    signals: np.ndarray,
    codebook: ConfigCodebook,
    schedule: SamplingSchedule,
) -> ObservationMatrix:
    """Apply the codebook and keep, per slot, only the selected row's output."""
    signals = np.asarray(signals)
    if signals.shape[0] != codebook.n:
        raise ValueError("signal dimension does not match codebook width")
    if signals.shape[1] != schedule.t:
        raise ValueError("slot count does not match schedule length")
    if schedule.m != codebook.m:
        raise ValueError("schedule row range does not match codebook size")
    combined = codebook.matrix @ signals
    entries = combined[schedule.selection, np.arange(schedule.t)]
    return ObservationMatrix(entries, schedule)


def simulate_training(
    channel: ChannelRealization,
    codebook: ConfigCodebook,
    schedule: SamplingSchedule,
    pilots: TrainingSequence,
    snr_linear: float,
    rng: np.random.Generator | None = None,
) -> ObservationMatrix:
    """Simulate one training phase and return the sparse observations."""
    if channel.spatial.size != codebook.n:
        raise ValueError("channel length does not match codebook width")
    if pilots.t != schedule.t:
        raise ValueError("pilot sequence length does not match schedule length")
    signals = received_training_signals(channel, pilots, snr_linear, rng)
    return observe(signals, codebook, schedule)
