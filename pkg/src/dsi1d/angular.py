r"""Three-body hyperangular eigenproblem with Robin boundary conditions.

On :math:`\theta \in (0, \pi/3)` we solve :math:`-\Theta'' = \lambda\Theta` with

.. math::
    g_1\Theta'(0) - \Theta(0) = 0, \qquad g_2\Theta'(\pi/3) + \Theta(\pi/3) = 0.

Each condition is stored as a unit vector :math:`(p, q) = (\sin\beta, \cos\beta)`
with :math:`g = \tan\beta`, :math:`\beta \in [0, \pi)`, so Dirichlet
(:math:`g = 0`) and Neumann (:math:`g = \infty`) need no special casing.
Eigenvalues are isolated per index with an exact Pruefer-angle count and
polished with Brent's method on the entire characteristic function

.. math::
    F(\lambda) = \frac{\sin(\sqrt\lambda L)}{\sqrt\lambda}(p_1p_2\lambda - q_1q_2)
                 - \cos(\sqrt\lambda L)(q_1p_2 + p_1q_2),

which is the tangent quantization condition multiplied through by the
cosine, so it has no poles and no spurious zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .exceptions import BracketExhaustedError, ChannelMismatchError, OverflowRangeError, ValidationError

__all__ = [
    "ANGLE_SPAN",
    "CRITICAL_LAMBDA_3",
    "AngularChannel",
    "CouplingPair",
    "PhaseRegion",
    "PhaseVerdict",
    "angular_eigenvalues",
    "boundary_residuals",
    "classify_phase",
    "count_below",
    "dimer_extent",
    "eigenfunction",
    "eigenfunction_derivative",
    "in_region_d0",
    "in_region_d1",
    "make_channel",
    "quantization_residual",
    "sheet_eigenvalue",
    "symmetric_channel_roots",
]

ANGLE_SPAN = math.pi / 3.0
CRITICAL_LAMBDA_3 = 0.0
# Below this |lambda| the trigonometric factors switch to their Taylor series.
_SERIES_CUTOFF = 1e-6
_SNAP_ZERO = 1e-12
_MISMATCH_TOL = 1e-8


@dataclass(frozen=True)
class CouplingPair:
    """Robin parameters of the two boundaries.

    ``0`` is Dirichlet; ``math.inf`` (either sign) is Neumann.
    """

    g1: float
    g2: float

    def __post_init__(self):
        for name in ("g1", "g2"):
            g = float(getattr(self, name))
            if math.isnan(g):
                raise ValidationError(f"{name} is NaN")
            object.__setattr__(self, name, math.inf if math.isinf(g) else g)

    @staticmethod
    def _unit(g):
        if math.isinf(g):
            return 1.0, 0.0
        # (sin b, cos b) with g = tan b, b in [0, pi); built from g directly so
        # tiny couplings keep their relative precision.
        s = math.copysign(1.0 / math.hypot(1.0, g), g) if g else 1.0
        return g * s, s

    @property
    def left(self):
        """(p1, q1) for the condition at theta = 0."""
        return self._unit(self.g1)

    @property
    def right(self):
        """(p2, q2) for the condition at theta = pi/3."""
        return self._unit(self.g2)

    def swapped(self):
        return CouplingPair(self.g2, self.g1)


def _trig_pair(lam, theta=ANGLE_SPAN):
    """Entire functions (cos(k*theta), sin(k*theta)/k) with k = sqrt(lam)."""
    z = lam * theta * theta
    if abs(z) < _SERIES_CUTOFF:
        c = 1.0 - z / 2.0 + z * z / 24.0
        s = theta * (1.0 - z / 6.0 + z * z / 120.0)
        return c, s
    if lam > 0:
        k = math.sqrt(lam)
        return math.cos(k * theta), math.sin(k * theta) / k
    nu = math.sqrt(-lam)
    return math.cosh(nu * theta), math.sinh(nu * theta) / nu


@dataclass(frozen=True)
class _Interval:
    """Robin problem on (0, span): p1 T'(0) = q1 T(0), p2 T'(span) = -q2 T(span)."""

    left: tuple
    right: tuple
    span: float


_NEUMANN = (1.0, 0.0)
_DIRICHLET = (0.0, 1.0)


def _residual(lam, prob):
    p1, q1 = prob.left
    p2, q2 = prob.right
    L = prob.span
    if lam < 0 and -lam * L * L >= _SERIES_CUTOFF:
        # Exponential-basis determinant divided by (1 + e^2) nu; same function
        # as below, but the exponentially small splitting term keeps full precision.
        nu = math.sqrt(-lam)
        e2 = math.exp(-2.0 * nu * L)
        det = -(nu * p1 + q1) * (nu * p2 + q2) + e2 * (nu * p1 - q1) * (nu * p2 - q2)
        return det / ((1.0 + e2) * nu)
    cs, sn = _trig_pair(lam, L)
    w = math.cosh(math.sqrt(-lam) * L) if lam < 0 else 1.0
    return (sn * (p1 * p2 * lam - q1 * q2) - cs * (q1 * p2 + p1 * q2)) / w


def quantization_residual(lam, c):
    r"""Continuous residual whose zeros are the angular eigenvalues.

    Equal to :math:`F(\lambda)` for :math:`\lambda \ge 0` and to
    :math:`F(\lambda)/\cosh(\nu\pi/3)` for :math:`\lambda = -\nu^2 < 0`; the
    positive rescaling keeps the residual O(1) for deep channels and is
    continuous through :math:`\lambda = 0`.
    """
    return _residual(float(lam), _Interval(c.left, c.right, ANGLE_SPAN))


def _pruefer_end(lam, prob):
    """Pruefer angle at the right end, with the end vector (Theta', Theta) it came from."""
    p1, q1 = prob.left
    L = prob.span
    if lam > 0:
        k = math.sqrt(lam)
        phi = math.atan2(k * p1, q1) + k * L
        n = math.floor(phi / math.pi)
        r = phi - n * math.pi
        x, y = k * math.cos(r), math.sin(r)
        sign = -1.0 if n % 2 else 1.0
        return n * math.pi + math.atan2(y, x), sign * x, sign * y
    # lam <= 0: at most one zero in (0, L]; scale by exp(-nu L) to avoid overflow.
    nu = math.sqrt(-lam)
    if nu * L < 1e-3:
        cs, sn = _trig_pair(lam, L)
        th, dth = p1 * cs + q1 * sn, -lam * p1 * sn + q1 * cs
    else:
        e = math.exp(-2.0 * nu * L)
        cs, sn = 0.5 * (1.0 + e), 0.5 * (1.0 - e) / nu
        th, dth = p1 * cs + q1 * sn, nu * nu * p1 * sn + q1 * cs
    return math.atan2(th, dth) % (2.0 * math.pi), dth, th


def _count(lam, prob):
    p2, q2 = prob.right
    target = math.pi - math.atan2(p2, q2)
    phi, x, y = _pruefer_end(float(lam), prob)
    # phi - target loses everything near an eigenvalue once phi is large or the
    # end vector nearly aligns; the relative angle keeps it, phi picks the branch.
    delta = math.atan2(-q2 * y - p2 * x, -q2 * x + p2 * y)
    coarse = phi - target
    delta += 2.0 * math.pi * round((coarse - delta) / (2.0 * math.pi))
    return max(0, math.ceil(delta / math.pi))


def count_below(lam, c):
    """Number of angular eigenvalues strictly below ``lam``."""
    return _count(lam, _Interval(c.left, c.right, ANGLE_SPAN))


def _bracket(index, prob, lam_floor=-1e300):
    lo = -1.0
    while _count(lo, prob) > index:
        lo *= 4.0
        if lo < lam_floor:
            raise OverflowRangeError(f"eigenvalue {index} lies below {lam_floor:.0e}")
    hi = (math.pi / prob.span) ** 2 * (index + 1) ** 2 + 1.0
    while _count(hi, prob) <= index:
        hi = 2.0 * hi + 1.0
        if hi > 1e300:
            raise BracketExhaustedError(
                f"no upper bracket for eigenvalue {index}", interval=(lo, hi)
            )
    for _ in range(4000):
        if _count(lo, prob) == index and _count(hi, prob) == index + 1:
            return lo, hi
        if lo < -1.0 and hi < 0.0 and lo < 4.0 * hi:
            mid = -math.sqrt(lo * hi)
        else:
            mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            # Adjacent doubles: the neighbouring eigenvalue is unresolvable.
            return lo, hi
        if _count(mid, prob) <= index:
            lo = mid
        else:
            hi = mid
    raise BracketExhaustedError(f"could not isolate eigenvalue {index}", interval=(lo, hi))


def _solve_interval(index, prob):
    lo, hi = _bracket(index, prob)
    f_lo = _residual(lo, prob)
    f_hi = _residual(hi, prob)
    if f_hi == 0.0:
        lam = hi
    elif f_lo == 0.0:
        lam = lo
    elif (f_lo > 0) == (f_hi > 0):
        # Degenerate to machine precision; take the better endpoint.
        lam = lo if abs(f_lo) <= abs(f_hi) else hi
    else:
        lam = brentq(_residual, lo, hi, args=(prob,), xtol=1e-300, rtol=1e-15, maxiter=500)
    if abs(lam) < _SNAP_ZERO and abs(_residual(0.0, prob)) <= abs(_residual(lam, prob)):
        lam = 0.0
    return lam


def _solve_index(index, c):
    if c.g1 == c.g2:
        # Even/odd about pi/6 decouple; eigenvalues alternate even, odd, even, ...
        right = _NEUMANN if index % 2 == 0 else _DIRICHLET
        return _solve_interval(index // 2, _Interval(c.left, right, 0.5 * ANGLE_SPAN))
    return _solve_interval(index, _Interval(c.left, c.right, ANGLE_SPAN))


@dataclass(frozen=True)
class AngularChannel:
    r"""One hyperangular eigenpair.

    ``coeff_a``/``coeff_b`` are the unit-norm coefficients of
    :math:`\Theta = A e^{i\sqrt\lambda\theta} + B e^{i\sqrt\lambda(\pi/3-\theta)}`;
    for :math:`\lambda = 0` exactly they instead hold
    :math:`\Theta = A + B\theta`.
    """

    lam: float
    channel_index: int
    coupling: CouplingPair
    coeff_a: complex
    coeff_b: complex
    nu: float | None = None
    _initial: tuple = field(default=(0.0, 0.0), repr=False, compare=False)

    @property
    def subcritical(self):
        return self.lam < CRITICAL_LAMBDA_3

    @property
    def in_extension_window(self):
        """True when 0 < lambda < 1, where the radial operator is not uniquely self-adjoint."""
        return 0.0 < self.lam < 1.0


def _exp_basis(lam):
    # The decaying-exponential pair is well conditioned only once nu*L is O(1).
    return lam < 0 and math.sqrt(-lam) * ANGLE_SPAN >= 1.0


def _initial_value(lam, a0, a1, th):
    """Solution with Theta(0) = a0, Theta'(0) = a1, and its derivative."""
    if abs(lam) * ANGLE_SPAN**2 < _SERIES_CUTOFF:
        val = a0 * (1.0 - lam * th**2 / 2.0) + a1 * th * (1.0 - lam * th**2 / 6.0)
        der = -lam * a0 * th + a1 * (1.0 - lam * th**2 / 2.0)
    elif lam > 0:
        k = math.sqrt(lam)
        val = a0 * np.cos(k * th) + a1 * np.sin(k * th) / k
        der = -a0 * k * np.sin(k * th) + a1 * np.cos(k * th)
    else:
        nu = math.sqrt(-lam)
        val = a0 * np.cosh(nu * th) + a1 * np.sinh(nu * th) / nu
        der = a0 * nu * np.sinh(nu * th) + a1 * np.cosh(nu * th)
    return val, der


def _gauss_norm2(lam, a0, a1):
    k = math.sqrt(abs(lam))
    nodes, weights = np.polynomial.legendre.leggauss(48 + int(2 * k * ANGLE_SPAN))
    th = 0.5 * ANGLE_SPAN * (nodes + 1.0)
    vals, _ = _initial_value(lam, a0, a1, th)
    return 0.5 * ANGLE_SPAN * float(np.dot(weights, vals**2))


def make_channel(lam, c, index):
    """Build the normalized :class:`AngularChannel` for a known eigenvalue."""
    p1, q1 = c.left
    p2, q2 = c.right
    L = ANGLE_SPAN
    if _exp_basis(lam):
        nu = math.sqrt(-lam)
        e = math.exp(-nu * L)
        # Null vector of the 2x2 boundary system, from its better-conditioned row.
        row1 = (e * (nu * p1 - q1), nu * p1 + q1)
        row2 = (nu * p2 + q2, -e * (q2 - nu * p2))
        if c.g1 == c.g2:
            # Parity is exact here; rows are pure rounding noise once e underflows.
            a, b = (1.0, 1.0) if index % 2 == 0 else (1.0, -1.0)
        else:
            a, b = max(row1, row2, key=lambda v: math.hypot(*v))
            if math.hypot(a, b) <= 1e-12 * (nu * (p1 + p2) + abs(q1) + abs(q2)):
                # Both ends resonate; localize at the end whose factor vanishes better.
                a, b = (1.0, 0.0) if abs(nu * p1 + q1) <= abs(nu * p2 + q2) else (0.0, 1.0)
        norm2 = (a * a + b * b) * (-math.expm1(-2.0 * nu * L)) / (2.0 * nu) + 2.0 * a * b * L * e
        scale = 1.0 / math.sqrt(norm2)
        a, b = a * scale, b * scale
        if a + b * e < 0 or (a + b * e == 0 and b < 0):
            a, b = -a, -b
        init = (a + b * e, -nu * (a - b * e))
        return AngularChannel(lam, index, c, complex(a), complex(b), nu, init)
    a0, a1 = p1, q1
    scale = 1.0 / math.sqrt(_gauss_norm2(lam, a0, a1))
    a0, a1 = a0 * scale, a1 * scale
    if lam == 0.0:
        return AngularChannel(lam, index, c, complex(a0), complex(a1), None, (a0, a1))
    if lam < 0:
        nu = math.sqrt(-lam)
        A = 0.5 * (a0 - a1 / nu)
        B = 0.5 * (a0 + a1 / nu) * math.exp(nu * L)
        return AngularChannel(lam, index, c, complex(A), complex(B), nu, (a0, a1))
    k = math.sqrt(lam)
    A = 0.5 * (a0 - 1j * a1 / k)
    B = 0.5 * (a0 + 1j * a1 / k) * complex(math.cos(k * L), -math.sin(k * L))
    return AngularChannel(lam, index, c, A, B, None, (a0, a1))


def angular_eigenvalues(c, count):
    """Lowest ``count`` angular channels in increasing order of eigenvalue.

    Parameters
    ----------
    c : CouplingPair
    count : int
        Number of channels, at least 1.

    Returns
    -------
    list of AngularChannel
    """
    if int(count) < 1:
        raise ValidationError(f"count must be >= 1, got {count}")
    return [make_channel(_solve_index(m, c), c, m) for m in range(int(count))]


def eigenfunction(ch, c, theta):
    r"""Evaluate the unit-norm eigenfunction :math:`\Theta_\lambda(\theta)`.

    Raises
    ------
    ChannelMismatchError
        ``ch.lam`` does not solve the quantization condition of ``c``.
    """
    if abs(quantization_residual(ch.lam, c)) > _MISMATCH_TOL:
        raise ChannelMismatchError(f"lambda={ch.lam} is not an eigenvalue for {c}")
    th = np.asarray(theta, dtype=float)
    L = ANGLE_SPAN
    if _exp_basis(ch.lam):
        a, b = ch.coeff_a.real, ch.coeff_b.real
        out = a * np.exp(-ch.nu * th) + b * np.exp(-ch.nu * (L - th))
    else:
        out, _ = _initial_value(ch.lam, *ch._initial, th)
    out = np.asarray(out).astype(complex)
    return out if out.ndim else complex(out)


def eigenfunction_derivative(ch, theta):
    r""":math:`\Theta_\lambda'(\theta)` from the stored coefficients."""
    th = np.asarray(theta, dtype=float)
    L = ANGLE_SPAN
    if _exp_basis(ch.lam):
        a, b = ch.coeff_a.real, ch.coeff_b.real
        out = -ch.nu * (a * np.exp(-ch.nu * th) - b * np.exp(-ch.nu * (L - th)))
    else:
        _, out = _initial_value(ch.lam, *ch._initial, th)
    return out if np.ndim(out) else float(out)


def boundary_residuals(ch, c=None):
    """Residuals of both Robin conditions, in the unit (p, q) normalization."""
    c = c or ch.coupling
    p1, q1 = c.left
    p2, q2 = c.right
    t0 = eigenfunction(ch, c, 0.0).real
    tL = eigenfunction(ch, c, ANGLE_SPAN).real
    return (
        p1 * eigenfunction_derivative(ch, 0.0) - q1 * t0,
        p2 * eigenfunction_derivative(ch, ANGLE_SPAN) + q2 * tL,
    )


def symmetric_channel_roots(g):
    r"""Closed-form negative channels for equal couplings ``g1 = g2 = g``.

    Returns ``(nu0, nu1)`` solving :math:`g = -\coth(\pi\nu/6)/\nu` (even
    channel) and :math:`g = -\tanh(\pi\nu/6)/\nu` (odd channel).
    """
    g = float(g)
    if not -math.pi / 6.0 < g < 0.0:
        raise ValidationError(f"g={g} must lie strictly inside (-pi/6, 0)")
    a = -g
    h = math.pi / 6.0

    def even(nu):
        return a * nu * math.tanh(h * nu) - 1.0

    def odd(nu):
        return a * nu - math.tanh(h * nu)

    roots = []
    for f in (even, odd):
        lo, hi = 1e-300, 1.0
        while f(hi) <= 0.0:
            lo, hi = hi, 2.0 * hi
        roots.append(brentq(f, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=500))
    return roots[0], roots[1]


def dimer_extent(nu, r):
    r"""Spatial size :math:`\sqrt2\,r\sin(1/\nu)` of a boundary-localized "dimer"."""
    if nu <= 0 or r <= 0:
        raise ValidationError("nu and r must be positive")
    return math.sqrt(2.0) * r * math.sin(1.0 / nu)


class PhaseRegion(str, Enum):
    D0_ONLY = "D0 only"
    D1_ONLY = "D1 only"
    D0_AND_D1 = "D0∩D1"
    UNBROKEN = "unbroken"


def in_region_d0(c):
    """Both couplings strictly attractive: g1 < 0 and g2 < 0."""
    return c.g1 < 0 and c.g2 < 0


def in_region_d1(c):
    """-pi/3 < g1 + g2 < |g1 - g2|; an infinite coupling is the g -> +inf limit."""
    g1, g2 = c.g1, c.g2
    if math.isinf(g1) and math.isinf(g2):
        return False
    if math.isinf(g1) or math.isinf(g2):
        return (g2 if math.isinf(g1) else g1) < 0
    return -math.pi / 3.0 < g1 + g2 < abs(g1 - g2)


def sheet_eigenvalue(c, sheet, channels=None):
    """Eigenvalue on the lambda_sheet surface of the phase diagram.

    The lambda_0 sheet exists only over D0; elsewhere the lowest eigenvalue
    belongs to the lambda_1 sheet, so sheet ``s`` maps to index
    ``s - 1 + [c in D0]``.  Returns ``None`` for sheet 0 outside D0.
    """
    index = sheet - 1 + int(in_region_d0(c))
    if index < 0:
        return None
    if channels is None or len(channels) <= index:
        channels = angular_eigenvalues(c, index + 1)
    return channels[index].lam


@dataclass(frozen=True)
class PhaseVerdict:
    broken: bool
    channels: list
    region: PhaseRegion

    @property
    def consistent(self):
        """Numerical negative-root count agrees with closed-form region membership."""
        expected = {
            PhaseRegion.UNBROKEN: 0,
            PhaseRegion.D0_ONLY: 1,
            PhaseRegion.D1_ONLY: 1,
            PhaseRegion.D0_AND_D1: 2,
        }[self.region]
        return expected == len(self.channels)


def classify_phase(c):
    """Decide whether continuous scale invariance breaks for coupling pair ``c``."""
    d0, d1 = in_region_d0(c), in_region_d1(c)
    region = {
        (True, True): PhaseRegion.D0_AND_D1,
        (True, False): PhaseRegion.D0_ONLY,
        (False, True): PhaseRegion.D1_ONLY,
        (False, False): PhaseRegion.UNBROKEN,
    }[(d0, d1)]
    chans = [ch for ch in angular_eigenvalues(c, 3) if ch.lam < CRITICAL_LAMBDA_3]
    return PhaseVerdict(bool(chans), chans, region)
