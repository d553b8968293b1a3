"""Geometric multipath channels between a planar reflecting surface and the link ends.

Both hops (base station to surface, surface to user) are narrowband multipath
channels over the same N-element surface.  A channel is a sum of a few steering
vectors with complex gains, and has an equivalent beamspace representation
``z = D^H h`` under a unitary 2-D DFT dictionary ``D``.  For few paths and
large N the beamspace vector is approximately sparse, which is what the
estimators in :mod:`risce.admm` and :mod:`risce.baselines` exploit.
"""

from dataclasses import dataclass

import numpy as np

ANGLE_MIN = -np.pi / 2
ANGLE_MAX = np.pi / 2


@dataclass(frozen=True)
class RisGeometry:
    """Planar surface with ``n_h`` horizontal and ``n_v`` vertical elements."""

    n_h: int
    n_v: int

    def __post_init__(self):
        if self.n_h < 1 or self.n_v < 1:
            raise ValueError("element counts must be positive integers")

    @property
    def n(self) -> int:
        """Total number of unit elements."""
        return self.n_h * self.n_v


@dataclass(frozen=True)
class PathParams:
    """Gains and angles of the propagation paths of one hop.

    ``gains`` are complex path amplitudes, ``azimuth``/``elevation`` are in
    radians within [-pi/2, pi/2] (the half-space seen by the surface), and
    ``path_loss`` is the large-scale loss the gain variance was scaled by.
    """

    gains: np.ndarray
    azimuth: np.ndarray
    elevation: np.ndarray
    path_loss: float

    def __post_init__(self):
        gains = np.atleast_1d(np.asarray(self.gains, dtype=complex))
        azimuth = np.atleast_1d(np.asarray(self.azimuth, dtype=float))
        elevation = np.atleast_1d(np.asarray(self.elevation, dtype=float))
        if gains.size < 1:
            raise ValueError("at least one path is required")
        if not (gains.size == azimuth.size == elevation.size):
            raise ValueError("gains and angles must have equal length")
        for name, ang in (("azimuth", azimuth), ("elevation", elevation)):
            if np.any(ang < ANGLE_MIN) or np.any(ang > ANGLE_MAX):
                raise ValueError(f"{name} angles must lie in [-pi/2, pi/2]")
        if not self.path_loss > 0:
            raise ValueError("path_loss must be positive")
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "azimuth", azimuth)
        object.__setattr__(self, "elevation", elevation)

    @property
    def count(self) -> int:
        return self.gains.size


@dataclass(frozen=True)
class BeamspaceDictionary:
    """Unitary N x N dictionary mapping beamspace vectors to spatial ones."""

    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("dictionary must be a square matrix")
        object.__setattr__(self, "matrix", matrix)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class ChannelRealization:
    """One hop: spatial vector ``h``, its beamspace image ``z``, and the paths."""

    spatial: np.ndarray
    beamspace: np.ndarray
    paths: PathParams


def steering_vector(geometry: RisGeometry, azimuth: float, elevation: float) -> np.ndarray:
    """Unit-norm array response of the surface for one far-field direction.

    Half-wavelength element spacing is assumed, so the element at grid
    position (p, q) sees the phase pi * (p*sin(el)*cos(az) + q*sin(el)*sin(az)).
    Elements are flattened with the horizontal index varying slowest, matching
    the column ordering of :func:`dft_dictionary`.
    """
    if not (ANGLE_MIN <= azimuth <= ANGLE_MAX and ANGLE_MIN <= elevation <= ANGLE_MAX):
        raise ValueError("azimuth and elevation must lie in [-pi/2, pi/2]")
    u = np.sin(elevation) * np.cos(azimuth)
    v = np.sin(elevation) * np.sin(azimuth)
    p = np.arange(geometry.n_h)
    q = np.arange(geometry.n_v)
    phase = np.pi * (p[:, None] * u + q[None, :] * v)
    return np.exp(1j * phase).reshape(geometry.n) / np.sqrt(geometry.n)


def dft_dictionary(geometry: RisGeometry) -> BeamspaceDictionary:
    """Kronecker product of the unitary DFT matrices of the two array axes.

    Columns are the steering vectors of the directions on the DFT angle grid,
    so on-grid channels have exactly sparse beamspace representations.
    """
    d_h = _unitary_dft(geometry.n_h)
    d_v = _unitary_dft(geometry.n_v)
    return BeamspaceDictionary(np.kron(d_h, d_v))


def _unitary_dft(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def draw_paths(rng: np.random.Generator, count: int, path_loss: float = 1.0) -> PathParams:
    """Draw path gains and angles for one hop.

    Gains are i.i.d. circular complex Gaussian with variance 1/(2*path_loss);
    azimuth and elevation are i.i.d. uniform over [-pi/2, pi/2].
    """
    if count < 1:
        raise ValueError("path count must be at least 1")
    if not path_loss > 0:
        raise ValueError("path_loss must be positive")
    scale = 1.0 / (2.0 * np.sqrt(path_loss))
    gains = scale * (rng.standard_normal(count) + 1j * rng.standard_normal(count))
    azimuth = rng.uniform(ANGLE_MIN, ANGLE_MAX, count)
    elevation = rng.uniform(ANGLE_MIN, ANGLE_MAX, count)
    return PathParams(gains, azimuth, elevation, path_loss)


def assemble_channel(
    paths: PathParams,
    geometry: RisGeometry,
    dictionary: BeamspaceDictionary,
) -> ChannelRealization:
    """Superpose the steering vectors of ``paths`` and attach the beamspace image."""
    if dictionary.n != geometry.n:
        raise ValueError(
            f"dictionary size {dictionary.n} does not match geometry N={geometry.n}"
        )
    spatial = np.zeros(geometry.n, dtype=complex)
    for gain, az, el in zip(paths.gains, paths.azimuth, paths.elevation):
        spatial += gain * steering_vector(geometry, az, el)
    beamspace = dictionary.matrix.conj().T @ spatial
    return ChannelRealization(spatial, beamspace, paths)
