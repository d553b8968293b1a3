"""Reflection-phase selection from channel estimates and rate evaluation.

The end-to-end cascade gain of the two hops under element phases ``phi`` is
sum_n h2[n] * h1[n] * phi[n]; the achievable rate is log2(1 + snr |gain|^2).
Phases can be aligned in closed form (continuous), quantized to the cell
alphabet, or found by exhaustive enumeration of all alphabet^N candidates.
"""

from dataclasses import dataclass

import numpy as np

from .sampling import PhaseSet

SEARCH_BUDGET = 1 << 24
_CHUNK = 1 << 16


@dataclass(frozen=True)
class PhaseConfig:
    """Unit-modulus reflection coefficients, one per surface element."""

    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.asarray(self.coefficients, dtype=complex)
        if coefficients.ndim != 1 or coefficients.size < 1:
            raise ValueError("coefficients must be a nonempty vector")
        if np.any(np.abs(np.abs(coefficients) - 1.0) > 1e-12):
            raise ValueError("coefficients must have unit modulus")
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def n(self) -> int:
        return self.coefficients.size


def effective_gain(h1: np.ndarray, h2: np.ndarray, config: PhaseConfig) -> complex:
    """Cascade gain sum_n h2[n] h1[n] phi[n]."""
    h1 = np.asarray(h1)
    h2 = np.asarray(h2)
    if h1.shape != h2.shape or h1.shape != config.coefficients.shape:
        raise ValueError("channel vectors and phase config must have equal length")
    return complex(np.sum(h1 * h2 * config.coefficients))


def achievable_rate(
    h1: np.ndarray, h2: np.ndarray, config: PhaseConfig, snr_linear: float
) -> float:
    """Rate log2(1 + snr |gain|^2) in bits/s/Hz."""
    if not snr_linear > 0:
        raise ValueError("snr_linear must be positive")
    gain = effective_gain(h1, h2, config)
    return float(np.log2(1.0 + snr_linear * abs(gain) ** 2))


def closed_form_phases(h1_hat: np.ndarray, h2_hat: np.ndarray) -> PhaseConfig:
    """Continuous phases -arg(h1[n] h2[n]) that align every cascade term.

    Elements whose product is zero contribute nothing; their phase is set to 0.
    """
    h1_hat = np.asarray(h1_hat)
    h2_hat = np.asarray(h2_hat)
    if h1_hat.shape != h2_hat.shape:
        raise ValueError("channel vectors must have equal length")
    product = h1_hat * h2_hat
    theta = np.where(product == 0, 0.0, -np.angle(product))
    return PhaseConfig(np.exp(1j * theta))


def quantize_phases(config: PhaseConfig, phases: PhaseSet) -> PhaseConfig:
    """Map each coefficient to the alphabet member of smallest angular distance.

    Exact ties go to the alphabet member with the smaller phase angle in
    [0, 2*pi); the alphabet is ordered that way, so the first minimum wins.
    """
    distances = np.abs(np.angle(config.coefficients[:, None] * phases.values[None, :].conj()))
    nearest = np.argmin(distances, axis=1)
    return PhaseConfig(phases.values[nearest])


def num_candidates(phases: PhaseSet, n: int) -> int:
    """Size of the exhaustive search space, cardinality**n, as a python int."""
    return phases.cardinality ** n


def exhaustive_search(
    h1_hat: np.ndarray,
    h2_hat: np.ndarray,
    phases: PhaseSet,
    n: int,
    budget: int = SEARCH_BUDGET,
) -> PhaseConfig:
    """Enumerate every alphabet^n phase vector and maximize |cascade gain|^2.

    Candidates are scanned in lexicographic index order (element 0 most
    significant) and compared strictly, so exact ties resolve to the
    lexicographically smallest index vector.  Refuses to run beyond
    ``budget`` candidates.
    """
    h1_hat = np.asarray(h1_hat)
    h2_hat = np.asarray(h2_hat)
    if h1_hat.shape != h2_hat.shape or h1_hat.shape != (n,):
        raise ValueError("channel vectors must both have length n")
    total = num_candidates(phases, n)
    if total > budget:
        raise ValueError(
            f"exhaustive search needs {total} candidates but the budget is {budget}"
        )
    cascade = h1_hat * h2_hat
    card = phases.cardinality
    divisors = card ** np.arange(n - 1, -1, -1, dtype=np.int64)
    best_gain2 = -1.0
    best_digits = None
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (idx[:, None] // divisors[None, :]) % card
        gains = phases.values[digits] @ cascade
        gain2 = gains.real**2 + gains.imag**2
        j = int(np.argmax(gain2))
        if gain2[j] > best_gain2:
            best_gain2 = float(gain2[j])
            best_digits = digits[j]
    return PhaseConfig(phases.values[best_digits])
