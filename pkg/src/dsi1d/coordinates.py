"""Sector, Jacobi and hyperspherical coordinates for n particles on a line.

Positions are mapped to the ordered sector x_1 > ... > x_n, rotated to
orthonormal Jacobi coordinates, and split into the hyperradius and a
unit hyperangular vector. Full (anti)symmetric wavefunctions are assembled
from separated factors evaluated in the ordered sector.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Callable

import numpy as np

from .exceptions import CoincidenceError, DegenerateInputError, ValidationError

__all__ = [
    "HypersphericalPoint",
    "ParticleConfig",
    "SectorDecomposition",
    "Statistics",
    "assemble_wavefunction",
    "coupling_profile",
    "hyperspherical",
    "jacobi_matrix",
    "jacobi_transform",
    "pairwise_sign",
    "sector_map",
]

COINCIDENCE_RTOL = 1e-12
# Both hyperradius formulas must agree to this relative tolerance.
_HYPERRADIUS_RTOL = 1e-10


class Statistics(str, Enum):
    BOSE = "bose"
    FERMI = "fermi"


@dataclass(frozen=True)
class ParticleConfig:
    """Positions of n >= 2 identical particles (any length unit)."""

    positions: tuple
    coincidence_rtol: float = COINCIDENCE_RTOL

    def __post_init__(self):
        pos = tuple(float(x) for x in self.positions)
        if len(pos) < 2:
            raise ValidationError(f"need at least 2 positions, got {len(pos)}")
        if not all(math.isfinite(x) for x in pos):
            raise ValidationError(f"non-finite position in {pos}")
        if not self.coincidence_rtol >= 0.0:
            raise ValidationError("coincidence_rtol must be non-negative")
        object.__setattr__(self, "positions", pos)

    @property
    def n(self):
        return len(self.positions)

    def as_array(self):
        return np.array(self.positions)

    @property
    def on_coincidence_locus(self):
        """Two coordinates are exactly equal."""
        return len(set(self.positions)) < self.n

    @property
    def near_coincidence(self):
        """Smallest gap is within ``coincidence_rtol`` of the position scale."""
        xs = sorted(self.positions)
        gap = min(b - a for a, b in zip(xs, xs[1:]))
        scale = max(abs(xs[0]), abs(xs[-1]), np.finfo(float).tiny)
        return gap <= self.coincidence_rtol * scale


@dataclass(frozen=True)
class SectorDecomposition:
    """Descending sort of the positions.

    ``permutation[i]`` is the input slot holding ``sorted[i]``; ``sign`` is
    the parity of that permutation.
    """

    sorted: tuple
    permutation: tuple
    sign: int

    def unsort(self):
        """Positions in their original order."""
        out = [0.0] * len(self.sorted)
        for value, slot in zip(self.sorted, self.permutation):
            out[slot] = value
        return tuple(out)


@dataclass(frozen=True)
class HypersphericalPoint:
    """Centre-of-mass coordinate, hyperradius, unit relative direction.

    ``theta`` is set only for three particles.
    """

    xi_n: float
    r: float
    hat_xi: tuple
    theta: float | None = None


def jacobi_matrix(n):
    """Orthogonal matrix whose rows are the Jacobi unit vectors e_1, ..., e_n."""
    n = int(n)
    if n < 2:
        raise ValidationError(f"n must be >= 2, got {n}")
    m = np.zeros((n, n))
    for j in range(1, n):
        m[j - 1, :j] = 1.0
        m[j - 1, j] = -j
        m[j - 1] /= math.sqrt(j * (j + 1))
    m[n - 1] = 1.0 / math.sqrt(n)
    return m


def jacobi_transform(config):
    """Jacobi coordinates (xi_1, ..., xi_n); xi_n is the scaled centre of mass."""
    x = config.as_array() if isinstance(config, ParticleConfig) else np.asarray(config, float)
    if x.ndim != 1 or x.size < 2:
        raise ValidationError(f"expected a 1-d sequence of >= 2 positions, got shape {x.shape}")
    return jacobi_matrix(x.size) @ x


def hyperspherical(jacobi, config=None):
    """Split Jacobi coordinates into (xi_n, r, hat_xi[, theta]).

    If the source ``config`` is given, ``r`` is cross-checked against the
    pairwise form r^2 = (1/n) sum_{j<k} (x_j - x_k)^2.
    """
    xi = np.asarray(jacobi, dtype=float)
    if xi.ndim != 1 or xi.size < 2:
        raise ValidationError(f"expected >= 2 Jacobi coordinates, got shape {xi.shape}")
    rel = xi[:-1]
    r = float(np.linalg.norm(rel))
    if r == 0.0:
        raise DegenerateInputError("all relative Jacobi coordinates vanish (total coincidence)")
    if config is not None:
        if config.n != xi.size:
            raise ValidationError(f"config has {config.n} particles, Jacobi vector {xi.size}")
        x = config.as_array()
        r_pair = math.sqrt(sum((a - b) ** 2 for a, b in combinations(x, 2)) / x.size)
        if abs(r_pair - r) > _HYPERRADIUS_RTOL * max(r, r_pair):
            raise ValidationError(f"hyperradius mismatch: {r} vs pairwise {r_pair}")
    hat = tuple(float(v) for v in rel / r)
    theta = math.atan2(hat[0], hat[1]) if xi.size == 3 else None
    return HypersphericalPoint(float(xi[-1]), r, hat, theta)


def pairwise_sign(positions):
    """Product of sgn(x_j - x_k) over j < k; zero on the coincidence locus."""
    s = 1
    for a, b in combinations(positions, 2):
        if a == b:
            return 0
        s = s if a > b else -s
    return s


def sector_map(positions):
    """Sort positions into the sector x_1 > ... > x_n.

    Raises
    ------
    CoincidenceError
        Two positions are exactly equal.
    """
    pos = positions.positions if isinstance(positions, ParticleConfig) else tuple(positions)
    pos = tuple(float(x) for x in pos)
    if len(set(pos)) < len(pos):
        raise CoincidenceError(f"positions {pos} lie on the coincidence locus")
    perm = tuple(sorted(range(len(pos)), key=lambda i: pos[i], reverse=True))
    # Parity from the cycle decomposition.
    seen = [False] * len(perm)
    transpositions = 0
    for start in range(len(perm)):
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        if length:
            transpositions += length - 1
    sign = -1 if transpositions % 2 else 1
    return SectorDecomposition(tuple(pos[i] for i in perm), perm, sign)


def assemble_wavefunction(
    point: ParticleConfig,
    cm_momentum: float,
    radial: Callable[[float], complex],
    angular: Callable[[HypersphericalPoint], complex],
    statistics: Statistics | str = Statistics.BOSE,
) -> complex:
    """Full n-body wavefunction from separated factors.

    ``radial`` maps r to R(r); ``angular`` maps the sector-ordered
    :class:`HypersphericalPoint` to the hyperangular factor. The centre of
    mass carries the plane wave exp(i P xi_n). Fermionic values pick up the
    pairwise sign of the input ordering.
    """
    stats = Statistics(statistics)
    if not isinstance(point, ParticleConfig):
        point = ParticleConfig(tuple(point))
    sector = sector_map(point)
    n = point.n
    hs = hyperspherical(jacobi_transform(sector.sorted))
    cm = cmath.exp(1j * float(cm_momentum) * hs.xi_n)
    value = cm * complex(radial(hs.r)) * complex(angular(hs)) * hs.r ** (-(n - 2) / 2.0)
    value /= math.sqrt(math.factorial(n))
    return value * sector.sign if stats is Statistics.FERMI else value


def coupling_profile(j, g, point):
    """Scale-covariant coupling a_j = r g_j(hat_xi).

    ``g`` is a constant or a callable of ``hat_xi``; ``j`` indexes the
    boundary x_j = x_{j+1}, 1 <= j <= n - 1.
    """
    n = len(point.hat_xi) + 1
    if not 1 <= int(j) <= n - 1:
        raise ValidationError(f"boundary index {j} outside 1..{n - 1}")
    if point.r <= 0.0:
        raise ValidationError("hyperradius must be positive")
    gval = g(point.hat_xi) if callable(g) else float(g)
    return point.r * gval
