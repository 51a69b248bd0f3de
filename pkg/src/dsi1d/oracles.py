"""Brute-force reference solvers.

None of these share code paths with the closed forms they check:
finite differences for the angular problem, a walled log-grid
discretization for the radial tower, and extended-precision quadrature
for the special functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy.linalg import eigh_tridiagonal

from .angular import ANGLE_SPAN
from .exceptions import ConvergenceError, InsufficientLevelsError, ValidationError

__all__ = [
    "GridSpec",
    "fd_angular_eigenvalues",
    "fd_radial_spectrum",
    "overlap_quadrature",
    "quadrature_bessel_k",
    "quadrature_hankel",
    "tower_ratios",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on [lower, upper]; the point count doubles per level."""

    points: int = 256
    lower: float = 0.0
    upper: float = ANGLE_SPAN
    refinement_levels: int = 3

    def __post_init__(self):
        if int(self.points) < 16:
            raise ValidationError(f"need at least 16 grid points, got {self.points}")
        if not self.lower < self.upper:
            raise ValidationError(f"lower={self.lower} must be below upper={self.upper}")
        if int(self.refinement_levels) < 2:
            raise ValidationError("Richardson extrapolation needs refinement_levels >= 2")

    def level_points(self):
        return [int(self.points) * 2**j for j in range(int(self.refinement_levels))]


def _richardson(rows, order=2, step=2):
    """Extrapolate arrays computed at h, h/2, h/4, ...; error ~ h^order, h^(order+step), ..."""
    table = [np.asarray(r, dtype=float) for r in rows]
    p = order
    while len(table) > 1:
        f = 2.0**p
        table = [(f * b - a) / (f - 1.0) for a, b in zip(table, table[1:])]
        p += step
    return table[0]


# ---------------------------------------------------------------- angular


def _fd_angular_level(c, n_cells, count):
    p1, q1 = c.left
    p2, q2 = c.right
    h = ANGLE_SPAN / n_cells
    # Nodes 0..n_cells; Robin ends closed with a ghost point, Dirichlet ends dropped.
    diag = np.full(n_cells + 1, 2.0 / h**2)
    mass = np.ones(n_cells + 1)
    lo, hi = 0, n_cells + 1
    if p1 == 0.0:
        lo = 1
    else:
        diag[0] = (1.0 + h * q1 / p1) / h**2
        mass[0] = 0.5
    if p2 == 0.0:
        hi = n_cells
    else:
        diag[-1] = (1.0 + h * q2 / p2) / h**2
        mass[-1] = 0.5
    diag, mass = diag[lo:hi], mass[lo:hi]
    s = 1.0 / np.sqrt(mass)
    d = diag * s * s
    off = -s[:-1] * s[1:] / h**2
    return eigh_tridiagonal(d, off, eigvals_only=True, select="i", select_range=(0, count - 1))


def fd_angular_eigenvalues(c, grid=None, count=5):
    """Lowest ``count`` eigenvalues of -d^2/dtheta^2 with Robin ends, by finite differences.

    Second-order ghost-point closure, extrapolated over the grid levels.
    """
    grid = grid or GridSpec()
    if abs(grid.lower) > 1e-15 or abs(grid.upper - ANGLE_SPAN) > 1e-12:
        raise ValidationError("the angular grid must span (0, pi/3)")
    count = int(count)
    if count < 1:
        raise ValidationError("count must be >= 1")
    rows = [_fd_angular_level(c, n, count) for n in grid.level_points()]
    return [float(v) for v in _richardson(rows)]


# ---------------------------------------------------------------- radial


def _radial_level(nu_sq, u, count):
    h = u[1] - u[0]
    # -phi'' - nu^2 phi = E e^{2u} phi  with phi = r^{-1/2} R, walls at both ends;
    # congruence by e^{-u} keeps the tridiagonal symmetric with the same inertia.
    w = np.exp(-u)
    d = (2.0 / h**2 - nu_sq) * w * w
    off = -w[:-1] * w[1:] / h**2
    vals = eigh_tridiagonal(
        d, off, eigvals_only=True, select="v", select_range=(-np.inf, 0.0),
        lapack_driver="stebz", tol=np.finfo(float).tiny,
    )
    vals = np.sort(vals[vals < 0.0])
    if vals.size < count:
        raise InsufficientLevelsError(f"only {vals.size} negative levels, {count} requested")
    return vals[:count]


def fd_radial_spectrum(nu, r_min, r_max, grid=None, count=6, nu_squared=None):
    r"""Lowest negative levels of :math:`-R'' - (\nu^2+1/4)R/r^2` between hard walls.

    The grid is uniform in log r from ``r_min`` to ``r_max``; ``grid.points``
    interior nodes at the coarsest level, extrapolated across levels on
    the relative scale. ``nu_squared`` overrides nu**2 and may be negative
    (a channel above the critical value).

    Returns
    -------
    ndarray
        ``count`` energies in increasing order (deepest first).
    """
    if not 0.0 < r_min < r_max:
        raise ValidationError("need 0 < r_min < r_max")
    nu_sq = float(nu) ** 2 if nu_squared is None else float(nu_squared)
    grid = grid or GridSpec(points=1024, lower=math.log(r_min), upper=math.log(r_max))
    rows = []
    for n in grid.level_points():
        u = np.linspace(math.log(r_min), math.log(r_max), n + 2)[1:-1]
        rows.append(np.log(-_radial_level(nu_sq, u, count)))
    return -np.exp(_richardson(rows))


def tower_ratios(energies, skip_deep=1, skip_shallow=1, minimum=3):
    """Ratios E_{l+1}/E_l of consecutive levels, dropping cutoff-dominated ends.

    Raises
    ------
    InsufficientLevelsError
        Fewer than ``minimum`` ratios remain.
    """
    e = np.asarray(energies, dtype=float)
    ratios = e[1:] / e[:-1]
    kept = ratios[skip_deep : len(ratios) - skip_shallow]
    if kept.size < minimum:
        raise InsufficientLevelsError(
            f"{kept.size} mid-tower ratios available, {minimum} required"
        )
    return kept


# ---------------------------------------------------------------- special functions


@lru_cache(maxsize=None)
def _gl_rule(n, dps):
    with mp.workdps(dps):
        return mp.gauss_quadrature(n, "legendre")


def _panel_gl(f, edges, n):
    nodes, weights = _gl_rule(n, mp.mp.dps)
    total = mp.mpf(0)
    for a, b in zip(edges, edges[1:]):
        half, mid = (b - a) / 2, (a + b) / 2
        total += half * mp.fsum(w * f(mid + half * t) for t, w in zip(nodes, weights))
    return total


def quadrature_bessel_k(nu, x, digits=20):
    r"""Reference :math:`K_{i\nu}(x) = \int_0^\infty e^{-x\cosh t}\cos(\nu t)\,dt`.

    Fixed 14- and 20-point Gauss-Legendre panels in extended precision; the
    working precision grows with the :math:`e^{\nu\pi/2}` cancellation.

    Returns
    -------
    (float, float)
        Value and absolute error estimate: the gap between the two rules
        plus an analytic tail bound.
    """
    nu, x = float(nu), float(x)
    if not x > 0 or nu < 0:
        raise ValidationError("need x > 0 and nu >= 0")
    extra = int(nu * math.pi / 2 / math.log(10)) + 1
    with mp.workdps(digits + extra + 10):
        nu_m, x_m = mp.mpf(nu), mp.mpf(x)
        cut = (digits + extra + 5) * mp.log(10)
        t_max = mp.acosh(max(cut / x_m, 1) + 1)
        # Panels resolve the oscillation, the 1/sqrt(x) peak width and the
        # O(1)-wide cutoff near t = log(2/x).
        step = 0.5 * min(math.pi / nu if nu > 0 else math.inf, 1.0 / math.sqrt(x), 1.0)
        edges = list(mp.linspace(0, t_max, max(int(float(t_max) / step) + 2, 4)))

        def f(t):
            return mp.exp(-x_m * mp.cosh(t)) * mp.cos(nu_m * t)

        val = _panel_gl(f, edges, 20)
        err = abs(val - _panel_gl(f, edges, 14))
        err += mp.exp(-x_m * mp.cosh(t_max)) / (x_m * mp.sinh(t_max))
        scale = abs(val)
        if 0 < nu and x < nu:
            # Oscillatory region: measure against the amplitude, not a value near a zero.
            scale = max(scale, mp.sqrt(mp.pi / (nu_m * mp.sinh(nu_m * mp.pi))))
        if err > mp.mpf(10) ** (-digits + 2) * scale and err > 1e-300:
            raise ConvergenceError(f"K quadrature at nu={nu}, x={x}: error {float(err):.3g}")
        return float(val), float(err)


def quadrature_hankel(kind, nu, x, digits=25):
    r""":math:`H^{(kind)}_{i\nu}(x) = J_{i\nu}(x) \pm iY_{i\nu}(x)` from Schlaefli integrals.

    .. math::
        \pi J_\mu = \int_0^\pi\cos(\mu\tau - x\sin\tau)d\tau
                    - \sin\mu\pi\int_0^\infty e^{-x\sinh t-\mu t}dt

        \pi Y_\mu = \int_0^\pi\sin(x\sin\tau - \mu\tau)d\tau
                    - \int_0^\infty(e^{\mu t}+e^{-\mu t}\cos\mu\pi)e^{-x\sinh t}dt
    """
    if kind not in (1, 2):
        raise ValidationError(f"kind must be 1 or 2, got {kind!r}")
    nu, x = float(nu), float(x)
    with mp.workdps(digits + int(nu * math.pi / math.log(10)) + 10):
        mu, xm = 1j * mp.mpf(nu), mp.mpf(x)
        a_pts = list(mp.linspace(0, mp.pi, int((x + nu) / 2) + 4))
        i_cos = mp.quad(lambda t: mp.cos(mu * t - xm * mp.sin(t)), a_pts, method="gauss-legendre")
        i_sin = mp.quad(lambda t: mp.sin(xm * mp.sin(t) - mu * t), a_pts, method="gauss-legendre")
        t_max = mp.asinh((digits + 10) * mp.log(10) / xm) + 1
        step = min(math.pi / nu, 1.0)
        b_pts = list(mp.linspace(0, t_max, int(float(t_max) / step) + 3))
        j_tail = mp.quad(lambda t: mp.exp(-xm * mp.sinh(t) - mu * t), b_pts, method="gauss-legendre")
        y_tail = mp.quad(
            lambda t: (mp.exp(mu * t) + mp.exp(-mu * t) * mp.cos(mu * mp.pi)) * mp.exp(-xm * mp.sinh(t)),
            b_pts, method="gauss-legendre",
        )
        j = (i_cos - mp.sin(mu * mp.pi) * j_tail) / mp.pi
        y = (i_sin - y_tail) / mp.pi
        return complex(j + 1j * y) if kind == 1 else complex(j - 1j * y)


# ---------------------------------------------------------------- overlaps

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)
_GL_NODES_LO, _GL_WEIGHTS_LO = np.polynomial.legendre.leggauss(14)


def _panel_edges(r_min, r_max, du, dr):
    """Panels uniform in log r near the origin and at most ``dr`` wide further out."""
    edges = [r_min]
    while edges[-1] < r_max:
        r = edges[-1]
        edges.append(min(r_max, r * math.exp(du), r + dr))
    return np.array(edges)


def _panel_sum(integrand, edges, nodes, weights):
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    r = (a + half * (nodes[None, :] + 1.0)).ravel()
    vals = np.asarray(integrand(r)).reshape(len(edges) - 1, -1)
    return np.sum(half * (vals @ weights)[:, None])


def overlap_quadrature(f, g, r_max, r_min=1e-30, window=None, du=0.3, dr=None, conjugate=True):
    r"""Overlap :math:`\int_0^{r_{max}} \overline{f(r)}\,g(r)\,dr` by panel Gauss-Legendre.

    ``f`` and ``g`` map arrays of radii to values. Panels are log-uniform near
    the origin, where bound states oscillate log-periodically, and at most
    ``dr`` wide further out (default r_max/100). The estimate is the 20-point
    sum; the 14-point sum gives the error estimate.

    ``window`` = (eps0, levels) damps the integrand by exp(-eps r) for
    eps0, eps0/2, ... and extrapolates to eps = 0, for conditionally
    convergent integrands.

    Returns
    -------
    (complex, float)
        Overlap and error estimate.
    """
    if not 0 < r_min < r_max:
        raise ValidationError("need 0 < r_min < r_max")
    edges = _panel_edges(r_min, r_max, du, dr or r_max / 100.0)

    def integrand(eps):
        def h(r):
            fv = np.asarray(f(r))
            fv = np.conj(fv) if conjugate else fv
            return fv * np.asarray(g(r)) * np.exp(-eps * r)
        return h

    def estimate(eps):
        hi = _panel_sum(integrand(eps), edges, _GL_NODES, _GL_WEIGHTS)
        lo = _panel_sum(integrand(eps), edges, _GL_NODES_LO, _GL_WEIGHTS_LO)
        return complex(hi), abs(hi - lo)

    if window is None:
        return estimate(0.0)
    eps0, levels = window
    if int(levels) < 2:
        raise ValidationError("window extrapolation needs at least 2 widths")
    vals, errs = zip(*(estimate(eps0 * 0.5**j) for j in range(int(levels))))
    # Damping error is linear in eps at leading order.
    re = _richardson([[v.real] for v in vals], order=1, step=1)[0]
    im = _richardson([[v.imag] for v in vals], order=1, step=1)[0]
    last = complex(re, im)
    spread = abs(last - vals[-1])
    if not math.isfinite(spread):
        raise ConvergenceError("window extrapolation produced a non-finite value")
    return last, max(errs) + spread
