"""Reference estimators over the stacked per-slot measurements.

Stacking flattens the training model into a standard linear system: slot t
contributes one scalar observation and one sensing row q_t * [W D]_{sel(t),:},
so the observation vector is approximately A z + noise.  Least squares and
orthogonal matching pursuit then serve as comparison points for the ADMM
estimator.
"""

from dataclasses import dataclass

import numpy as np

from .channel import BeamspaceDictionary
from .sampling import ConfigCodebook, ObservationMatrix, SamplingSchedule, TrainingSequence

PINV_CUTOFF = 1e-10


@dataclass(frozen=True)
class StackedMeasurements:
    """T x N sensing matrix and the matching length-T observation vector."""

    sensing: np.ndarray
    observations: np.ndarray

    @property
    def t(self) -> int:
        return self.sensing.shape[0]

    @property
    def n(self) -> int:
        return self.sensing.shape[1]


def stack(
    obs: ObservationMatrix,
    codebook: ConfigCodebook,
    schedule: SamplingSchedule,
    dictionary: BeamspaceDictionary,
    pilots: TrainingSequence,
) -> StackedMeasurements:
    """Flatten the sparse observations into a linear model in the beamspace vector."""
    if codebook.n != dictionary.n:
        raise ValueError("codebook width does not match dictionary size")
    if obs.m != codebook.m:
        raise ValueError("observation rows do not match codebook size")
    if pilots.t != obs.t or schedule.t != obs.t:
        raise ValueError("pilot/schedule length does not match observations")
    combined = codebook.matrix @ dictionary.matrix
    sensing = combined[schedule.selection, :] * pilots.symbols[:, None]
    return StackedMeasurements(sensing, obs.entries.copy())


def ls_estimate(measurements: StackedMeasurements) -> np.ndarray:
    """Minimum-norm least-squares solution via the pseudo-inverse.

    Singular values below PINV_CUTOFF times the largest are treated as zero.
    """
    a = measurements.sensing
    if not np.any(a):
        raise ValueError("sensing matrix is identically zero")
    return np.linalg.pinv(a, rcond=PINV_CUTOFF) @ measurements.observations


def omp_estimate(measurements: StackedMeasurements, sparsity: int) -> np.ndarray:
    """Greedy sparse recovery with least-squares refits.

    Each round picks the column most correlated with the current residual and
    refits on the support so far; at most ``sparsity`` entries are nonzero.
    """
    a = measurements.sensing
    y = measurements.observations
    t, n = a.shape
    if not 1 <= sparsity <= min(t, n):
        raise ValueError("sparsity must lie in [1, min(T, N)]")
    support: list[int] = []
    residual = y.copy()
    coef = np.zeros(0, dtype=complex)
    for _ in range(sparsity):
        scores = np.abs(a.conj().T @ residual)
        scores[support] = -1.0  # residual is orthogonal to chosen columns already
        support.append(int(np.argmax(scores)))
        coef, *_ = np.linalg.lstsq(a[:, support], y, rcond=None)
        residual = y - a[:, support] @ coef
    estimate = np.zeros(n, dtype=complex)
    estimate[support] = coef
    return estimate
