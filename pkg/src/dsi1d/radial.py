r"""Hyperradial bound states and scattering in a subcritical channel.

With :math:`\hbar^2/2m = 1` the hyperradial equation of a channel with
angular eigenvalue :math:`\lambda < \lambda_c = -(n-3)^2/4` is

.. math::
    -R'' - \frac{\nu^2 + 1/4}{r^2} R = E R, \qquad \nu = \sqrt{\lambda_c - \lambda}.

Its spectrum is the geometric tower :math:`\kappa_\ell = \kappa_* e^{-\ell\pi/\nu}`
fixed by one emergent scale :math:`\kappa_*`, and the S-matrix is
log-periodic in :math:`k`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    ConvergenceError,
    OverflowRangeError,
    UnderflowRangeError,
    ValidationError,
)
from .special import bessel_k_imag, hankel_imag_pair

__all__ = [
    "BoundState",
    "ChannelParams",
    "ProblemConfig",
    "ScatteringPoint",
    "bound_radial_wavefunction",
    "bound_state",
    "critical_lambda",
    "residue_check",
    "s_matrix",
    "s_matrix_value",
    "scattering_radial_wavefunction",
]

UNIT_CONVENTION = "hbar^2/(2m) = 1"
_LOG_MAX = math.log(np.finfo(float).max)
_LOG_TINY = math.log(np.finfo(float).tiny)
_X_ZERO = 760.0


def critical_lambda(n):
    """Threshold -(n-3)^2/4 below which a channel supports a geometric tower."""
    if int(n) != n or n < 3:
        raise ValidationError(f"particle number must be an integer >= 3, got {n}")
    return -((n - 3) ** 2) / 4.0


@dataclass(frozen=True)
class ProblemConfig:
    """Particle number, output energy unit and emergent scale.

    Energies are computed with hbar^2/(2m) = 1; ``energy_unit`` is the value
    of that combination in the caller's units and multiplies reported energies.
    """

    n: int = 3
    energy_unit: float = 1.0
    kappa_star: float = 1.0

    def __post_init__(self):
        critical_lambda(self.n)
        if not (self.energy_unit > 0 and math.isfinite(self.energy_unit)):
            raise ValidationError(f"energy_unit must be positive, got {self.energy_unit}")
        if not (self.kappa_star > 0 and math.isfinite(self.kappa_star)):
            raise ValidationError(f"kappa_star must be positive, got {self.kappa_star}")

    def channel(self, lam):
        return ChannelParams.from_lambda(self.n, lam, self.kappa_star)


@dataclass(frozen=True)
class ChannelParams:
    """A strictly subcritical channel: n, lambda, nu and kappa_star."""

    n: int
    lam: float
    nu: float
    kappa_star: float = 1.0

    def __post_init__(self):
        lc = critical_lambda(self.n)
        if not (self.nu > 0 and math.isfinite(self.nu)):
            raise ValidationError(f"nu must be positive and finite, got {self.nu}")
        if not self.lam < lc:
            raise ValidationError(f"lambda={self.lam} is not below the critical value {lc}")
        if abs(self.nu**2 + self.lam - lc) > 1e-12 * max(1.0, abs(self.lam)):
            raise ValidationError(f"nu^2 + lambda = {self.nu**2 + self.lam}, expected {lc}")
        if not (self.kappa_star > 0 and math.isfinite(self.kappa_star)):
            raise ValidationError(f"kappa_star must be positive, got {self.kappa_star}")

    @classmethod
    def from_lambda(cls, n, lam, kappa_star=1.0):
        lc = critical_lambda(n)
        if not lam < lc:
            raise ValidationError(f"lambda={lam} is not below the critical value {lc}")
        return cls(int(n), float(lam), math.sqrt(lc - lam), float(kappa_star))

    @classmethod
    def from_nu(cls, nu, n=3, kappa_star=1.0):
        return cls(int(n), critical_lambda(n) - float(nu) ** 2, float(nu), float(kappa_star))


@dataclass(frozen=True)
class BoundState:
    ell: int
    kappa: float
    energy: float
    norm: float


@dataclass(frozen=True)
class ScatteringPoint:
    k: float
    s_value: complex


def bound_state(p, ell):
    """Level ``ell`` of the tower; ``ell`` may be any integer.

    Raises
    ------
    OverflowRangeError, UnderflowRangeError
        kappa^2 or |N|^2 is not representable.
    """
    ell = int(ell)
    log_kappa = math.log(p.kappa_star) - ell * math.pi / p.nu
    if 2.0 * log_kappa > _LOG_MAX:
        raise OverflowRangeError(f"level {ell}: energy overflows (log kappa = {log_kappa:.1f})")
    if 2.0 * log_kappa < _LOG_TINY:
        raise UnderflowRangeError(f"level {ell}: energy underflows (log kappa = {log_kappa:.1f})")
    if p.nu * math.pi > _LOG_MAX:
        raise OverflowRangeError(f"sinh(nu pi) overflows for nu={p.nu}")
    kappa = math.exp(log_kappa)
    norm = math.sqrt(kappa * math.sinh(p.nu * math.pi) / p.nu)
    return BoundState(ell, kappa, -kappa * kappa, norm)


def bound_radial_wavefunction(p, kappa, r):
    r"""Unit-norm bound state :math:`N\sqrt{2\kappa r/\pi}\,K_{i\nu}(\kappa r)`.

    ``N`` is taken real and positive. ``r`` may be an array.
    """
    if not kappa > 0:
        raise ValidationError(f"kappa must be positive, got {kappa}")
    norm = math.sqrt(kappa * math.sinh(p.nu * math.pi) / p.nu)
    x = kappa * np.asarray(r, dtype=float)
    if np.any(x <= 0):
        raise ValidationError("r must be positive")
    # Scaled K keeps the product finite where K alone would underflow; beyond
    # _X_ZERO the value is below the smallest subnormal and is returned as 0.
    live = x < _X_ZERO
    out = np.zeros_like(x)
    xl = x[live] if np.ndim(x) else x
    if np.any(live):
        val = norm * np.sqrt(2.0 * xl / math.pi) * bessel_k_imag(p.nu, xl, scaled=True) * np.exp(-xl)
        if np.ndim(x):
            out[live] = val
        else:
            out = val
    return float(out) if np.ndim(out) == 0 else out


def _log_ratio_phase(p, k):
    return p.nu * math.log(k / p.kappa_star)


def s_matrix_value(p, k):
    """S(k) for real or complex k off the poles."""
    if isinstance(k, complex) and k.imag != 0.0:
        arg = 1j * p.nu * cmath.log(k / p.kappa_star)
        half = 0.5 * p.nu * math.pi
        return 1j * cmath.sinh(half - arg) / cmath.sinh(half + arg)
    k = float(k.real if isinstance(k, complex) else k)
    if not k > 0:
        raise ValidationError(f"k must be positive, got {k}")
    # S = i conj(d)/d with d = sinh(nu pi/2 + i b) / cosh(nu pi/2); b mod pi keeps
    # the period exact.
    b = math.remainder(_log_ratio_phase(p, k), math.pi)
    d = complex(math.tanh(0.5 * p.nu * math.pi) * math.cos(b), math.sin(b))
    return 1j * d.conjugate() / d


def s_matrix(p, k):
    """Unimodular S-matrix element at real wavenumber ``k > 0``."""
    return ScatteringPoint(float(k), s_matrix_value(p, float(k)))


def scattering_radial_wavefunction(p, k, r):
    r"""Scattering solution normalized to :math:`e^{-ikr} + S e^{ikr}` at large r."""
    if not k > 0:
        raise ValidationError(f"k must be positive, got {k}")
    s = s_matrix_value(p, k)
    damp = math.exp(-0.5 * p.nu * math.pi)

    def one(ri):
        if not ri > 0:
            raise ValidationError("r must be positive")
        x = k * ri
        h1, _ = hankel_imag_pair(1, p.nu, x)
        # e^{nu pi/2} H2 = e^{-nu pi/2} conj(H1)
        u = cmath.exp(0.25j * math.pi) * damp * h1
        return math.sqrt(0.5 * math.pi * x) * (u.conjugate() + s * u)

    if np.ndim(r):
        arr = np.asarray(r, dtype=float)
        return np.array([one(ri) for ri in arr.ravel()]).reshape(arr.shape)
    return one(float(r))


def residue_check(p, ell, delta0=1e-3, levels=8, rtol=1e-9):
    r"""Residue of S at the bound-state pole :math:`k = i\kappa_\ell`.

    Samples :math:`(k - i\kappa_\ell)S(k)` along :math:`k = i\kappa_\ell(1+\delta)`,
    halving delta, and extrapolates to delta = 0 with a Neville table.

    Returns
    -------
    (complex, complex)
        Numerical residue and :math:`i\kappa_\ell\sinh(\nu\pi)/\nu`.
    """
    level = bound_state(p, ell)
    pole = 1j * level.kappa
    deltas = [delta0 * 0.5**j for j in range(levels)]
    vals = [(pole * d) * s_matrix_value(p, pole * (1.0 + d)) for d in deltas]
    table = [vals]
    for m in range(1, levels):
        prev = table[-1]
        row = [
            (deltas[i] * prev[i + 1] - deltas[i + m] * prev[i]) / (deltas[i] - deltas[i + m])
            for i in range(levels - m)
        ]
        table.append(row)
    best, check = table[-1][0], table[-2][-1]
    if abs(best - check) > rtol * abs(best):
        raise ConvergenceError(f"residue extrapolation did not settle: {best} vs {check}")
    return best, 1j * level.kappa * math.sinh(p.nu * math.pi) / p.nu
