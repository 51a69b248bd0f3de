r"""Bessel-type functions of purely imaginary order.

Only two functions are needed by the closed forms of this package:
the Macdonald function :math:`K_{i\nu}(x)` (real for real :math:`\nu`
and :math:`x > 0`) and the Hankel function :math:`H^{(1)}_{i\nu}(x)`,
from which :math:`H^{(2)}_{i\nu}` follows through

.. math::
    H^{(2)}_{i\nu}(x) = e^{-\nu\pi}\,\overline{H^{(1)}_{i\nu}(x)}.

Both are computed from integral representations evaluated along shifted
contours with the trapezoidal rule.  The integrands are entire and decay
double-exponentially, so the rule converges geometrically in the step;
the step is halved until two consecutive sums agree.

``K`` uses :math:`2K_{i\nu}(x)=\int_{\mathbb R} e^{-x\cosh t + i\nu t}dt`
moved to the line :math:`\operatorname{Im} t=\alpha`, with
:math:`\sin\alpha=\nu/x` (the saddle) when :math:`x>\nu` and
:math:`\alpha` close to :math:`\pi/2` otherwise.  On that line the
integrand is no larger than the result's envelope, which removes the
:math:`e^{\nu\pi/2}` cancellation of the naive real-axis integral.

``H1`` uses :math:`K_\mu(-ix)` on a path through the real saddle
:math:`\sinh t_0=\nu/x` whose ends tend to :math:`\pm i\pi/2`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from .exceptions import (
    ConvergenceError,
    NumericalRangeError,
    OverflowRangeError,
    UnderflowRangeError,
)

__all__ = [
    "ImagOrderParams",
    "NU_RANGE",
    "X_RANGE",
    "bessel_k_imag",
    "bessel_k_imag_asymptotic",
    "bessel_k_imag_envelope",
    "bessel_k_imag_small_x",
    "hankel_imag",
    "hankel_imag_pair",
]

# Supported domain; covers the documented minimum nu in (0, 20], x in [1e-6, 700].
NU_RANGE = (0.0, 60.0)
X_RANGE = (0.0, 1e4)
# Below this x the small-argument form of K is exact to O(x^2) ~ 1e-16.
_SMALL_X = 1e-8
# Hankel paths are only set up down to this argument.
_HANKEL_X_MIN = 1e-8

# Integrands are truncated once their log-magnitude drops this far below the peak.
_TAIL_LOG = 46.0
_TRAP_RTOL = 1e-14
_MAX_HALVINGS = 24
_LOG_TINY = math.log(np.finfo(float).tiny)
_LOG_HUGE = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class ImagOrderParams:
    """Validated (order magnitude, argument) pair."""

    nu: float
    x: float

    def __post_init__(self):
        nu, x = float(self.nu), float(self.x)
        if not (math.isfinite(nu) and math.isfinite(x)):
            raise NumericalRangeError(f"non-finite input nu={nu!r}, x={x!r}")
        if not NU_RANGE[0] < nu <= NU_RANGE[1]:
            raise NumericalRangeError(f"nu={nu} outside supported range {NU_RANGE}")
        if not X_RANGE[0] < x <= X_RANGE[1]:
            raise NumericalRangeError(f"x={x} outside supported range {X_RANGE}")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "x", x)


def _trapezoid(f, lo, hi, h0, rtol=_TRAP_RTOL):
    """Trapezoid sums on [lo, hi] with step halving until convergence.

    ``f`` maps an array of nodes to a tuple of complex/real arrays; the
    first component drives convergence.  Returns the integrals and the
    L1 norm estimate of the first component.
    """
    n = max(8, int(math.ceil((hi - lo) / h0)))
    h = (hi - lo) / n
    vals = f(lo + h * np.arange(n + 1))
    sums = [v.sum() - 0.5 * (v[0] + v[-1]) for v in vals]
    l1 = np.abs(vals[0]).sum()
    prev = h * sums[0]
    for _ in range(_MAX_HALVINGS):
        mids = f(lo + h * (np.arange(n) + 0.5))
        sums = [s + m.sum() for s, m in zip(sums, mids)]
        l1 += np.abs(mids[0]).sum()
        n *= 2
        h *= 0.5
        cur = h * sums[0]
        if abs(cur - prev) <= rtol * max(h * l1, abs(cur)):
            return [h * s for s in sums], h * l1
        prev = cur
    raise ConvergenceError(f"trapezoid rule did not converge after {_MAX_HALVINGS} halvings")


def _k_line(nu, x):
    """Return (log_prefactor, integral) with K = exp(log_prefactor) * integral."""
    delta = min(0.5 * math.pi, 1.0 / nu)
    alpha = min(math.asin(min(nu / x, 1.0)), 0.5 * math.pi - delta)
    a = x * math.cos(alpha)
    b = x * math.sin(alpha)
    span = math.acosh(1.0 + _TAIL_LOG / a)

    def integrand(s):
        return (np.exp(-a * (np.cosh(s) - 1.0)) * np.cos(nu * s - b * np.sinh(s)),)

    # Even integrand: the half-line sum with a half weight at s = 0.
    h0 = min(0.5, span / 8.0, 0.5 / math.sqrt(a + nu * nu + 1.0))
    (val,), _ = _trapezoid(integrand, 0.0, span, h0)
    return -nu * alpha - a, float(val)


def bessel_k_imag(nu, x, scaled=False):
    r"""Macdonald function :math:`K_{i\nu}(x)` of imaginary order.

    Parameters
    ----------
    nu : float
        Order magnitude, ``0 < nu <= 60``.
    x : float or array_like
        Positive argument(s) up to ``1e4``.
    scaled : bool
        Return :math:`e^{x} K_{i\nu}(x)` instead, which stays representable
        for large ``x``.

    Returns
    -------
    float or ndarray
        Real values; arrays keep the shape of ``x``.

    Raises
    ------
    NumericalRangeError
        Inputs outside the supported domain.
    UnderflowRangeError
        The unscaled value is below the smallest normal double.
    """
    if np.ndim(x):
        arr = np.asarray(x, dtype=float)
        out = np.array([bessel_k_imag(nu, xi, scaled) for xi in arr.ravel()])
        return out.reshape(arr.shape)
    p = ImagOrderParams(nu, x)
    if p.x < _SMALL_X:
        val = bessel_k_imag_small_x(p.nu, p.x)
        return val * math.exp(p.x) if scaled else val
    logpre, val = _k_line(p.nu, p.x)
    if scaled:
        return math.exp(logpre + p.x) * val
    if val != 0.0 and logpre + math.log(abs(val)) < _LOG_TINY:
        raise UnderflowRangeError(f"K_(i{p.nu})({p.x}) underflows double precision")
    return math.exp(logpre) * val


def bessel_k_imag_envelope(nu, x):
    r"""Magnitude scale against which :math:`K_{i\nu}` errors are measured.

    For ``x >= nu`` the function is positive and monotone and the scale is
    :math:`|K|` itself.  In the oscillatory region ``x < nu`` relative error
    is meaningless near the zeros, so the amplitude
    :math:`\sqrt{\pi/(\nu\sinh\nu\pi)}` of the small-argument form is used.
    """
    k = abs(bessel_k_imag(nu, x))
    if x >= nu:
        return k
    return max(k, math.sqrt(math.pi / (nu * math.sinh(nu * math.pi))))


def bessel_k_imag_small_x(nu, x):
    r"""Leading small-argument form of :math:`K_{i\nu}(x)`.

    .. math::
        K_{i\nu}(x) \approx -\sqrt{\frac{\pi}{\nu\sinh\nu\pi}}
        \sin\bigl(\nu\log(x/2) - \arg\Gamma(1+i\nu)\bigr),

    accurate to :math:`O(x^2)`.
    """
    arg_gamma = float(np.imag(loggamma(1.0 + 1j * nu)))
    amp = math.sqrt(math.pi / (nu * math.sinh(nu * math.pi)))
    return -amp * math.sin(nu * math.log(0.5 * x) - arg_gamma)


def bessel_k_imag_asymptotic(nu, x, terms=1):
    r"""Large-argument Hankel expansion of :math:`K_{i\nu}(x)`.

    ``terms=1`` gives :math:`\sqrt{\pi/(2x)}e^{-x}`; each further term adds
    :math:`a_k(i\nu)/x^k` with
    :math:`a_k = \prod_{j\le k}(-4\nu^2-(2j-1)^2)/(k!\,8^k)`.
    """
    total, term = 1.0, 1.0
    for k in range(1, terms):
        term *= (-4.0 * nu * nu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        total += term
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * total


def _hankel1_line(nu, x):
    """Return (H1, dH1/dx) from the saddle-point path integral."""
    t0 = math.asinh(nu / x)
    c = 0.5 * math.pi

    def path(s):
        t = t0 + s + 1j * c * np.tanh(s / c)
        dt = 1.0 + 1j / np.cosh(s / c) ** 2
        return t, dt

    def log_mag(s):
        t, _ = path(np.asarray(s, dtype=float))
        return float(np.real(1j * x * np.cosh(t) - 1j * nu * t))

    lo = -1.0
    while log_mag(lo) > -_TAIL_LOG:
        lo *= 2.0
    hi = 1.0
    while log_mag(hi) > -_TAIL_LOG:
        hi *= 2.0

    def integrand(s):
        t, dt = path(s)
        e = np.exp(1j * x * np.cosh(t) - 1j * nu * t) * dt
        return e, 1j * np.cosh(t) * e

    h0 = min(0.25, 0.25 / math.sqrt(x * math.cosh(t0) + 1.0))
    (val, dval), _ = _trapezoid(integrand, lo, hi, h0)
    pre = math.exp(0.5 * nu * math.pi) / (1j * math.pi)
    return complex(pre * val), complex(pre * dval)


def hankel_imag_pair(kind, nu, x):
    r"""Hankel function :math:`H^{(kind)}_{i\nu}(x)` and its x-derivative.

    Parameters
    ----------
    kind : {1, 2}
    nu : float
        Order magnitude, ``0 < nu <= 60``.
    x : float
        Positive argument.

    Returns
    -------
    (complex, complex)
    """
    if kind not in (1, 2):
        raise NumericalRangeError(f"Hankel kind must be 1 or 2, got {kind!r}")
    p = ImagOrderParams(nu, x)
    if p.x < _HANKEL_X_MIN:
        raise NumericalRangeError(f"x={p.x} below the Hankel range [{_HANKEL_X_MIN}, {X_RANGE[1]}]")
    if 0.5 * p.nu * math.pi > _LOG_HUGE - 10.0:
        raise OverflowRangeError(f"H_(i{p.nu}) overflows double precision")
    h, dh = _hankel1_line(p.nu, p.x)
    if kind == 1:
        return h, dh
    damp = math.exp(-p.nu * math.pi)
    return damp * h.conjugate(), damp * dh.conjugate()


def hankel_imag(kind, nu, x):
    r"""Hankel function :math:`H^{(kind)}_{i\nu}(x)`; ``x`` may be an array."""
    if np.ndim(x):
        arr = np.asarray(x, dtype=float)
        out = np.array([hankel_imag_pair(kind, nu, xi)[0] for xi in arr.ravel()])
        return out.reshape(arr.shape)
    return hankel_imag_pair(kind, nu, x)[0]
