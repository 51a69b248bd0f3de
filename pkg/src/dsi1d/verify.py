"""Closed form versus oracle comparison suites.

Each suite returns :class:`CheckResult` rows carrying the measured error
and the tolerance it was held to; thresholds come from
:mod:`dsi1d.tolerances` only.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import permutations

import numpy as np

from . import angular as ang
from . import oracles, radial, special
from .coordinates import ParticleConfig, Statistics, assemble_wavefunction, pairwise_sign, sector_map
from .tolerances import profile

__all__ = ["CheckResult", "SUITES", "VerifyReport", "run_suites"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    measured: float
    tolerance: float
    tolerance_key: str
    passed: bool


@dataclass
class VerifyReport:
    profile: str
    results: list = field(default_factory=list)

    @property
    def ok(self):
        return all(r.passed for r in self.results)

    def as_dict(self):
        return {
            "profile": self.profile,
            "ok": self.ok,
            "checks": [asdict(r) for r in self.results],
        }


class _Recorder:
    def __init__(self, suite, tols):
        self.suite, self.tols, self.rows = suite, tols, []

    def __call__(self, name, measured, key):
        measured = float(measured)
        tol = self.tols[key]
        ok = math.isfinite(measured) and measured <= tol
        self.rows.append(CheckResult(self.suite, name, measured, tol, key, ok))


def _angular(rec, perturb_nu):
    for c, first in ((ang.CouplingPair(math.inf, math.inf), 0), (ang.CouplingPair(0.0, 0.0), 1)):
        lams = [ch.lam for ch in ang.angular_eigenvalues(c, 4)]
        err = max(abs(lam - 9.0 * (m + first) ** 2) for m, lam in enumerate(lams))
        rec(f"9m^2 limit g={c.g1}", err, "angular.limits")
    for g in (-0.1, -0.3, -0.5):
        nus = ang.symmetric_channel_roots(g)
        chans = ang.angular_eigenvalues(ang.CouplingPair(g, g), 3)
        err = max(abs(ch.lam + nu * nu) / (nu * nu) for ch, nu in zip(chans, nus))
        rec(f"symmetric closed form g={g}", err, "angular.closed_form")
        rec(f"negative count g={g}", abs(sum(ch.lam < 0 for ch in chans) - 2), "count.exact")
    sample = [(-0.3, 0.4), (1.0, -2.0), (-1.0, -1.0), (0.5, 0.5), (-0.5, -0.5)]
    nodes, weights = np.polynomial.legendre.leggauss(200)
    theta = 0.5 * ang.ANGLE_SPAN * (nodes + 1.0)
    w = 0.5 * ang.ANGLE_SPAN * weights
    for g1, g2 in sample:
        c = ang.CouplingPair(g1, g2)
        chans = ang.angular_eigenvalues(c, 5)
        res = max(abs(ang.quantization_residual(ch.lam, c)) for ch in chans)
        bnd = max(max(map(abs, ang.boundary_residuals(ch))) for ch in chans)
        rec(f"residual {c.g1},{c.g2}", res, "angular.residual")
        rec(f"boundary {c.g1},{c.g2}", bnd, "angular.boundary")
        vals = np.array([ang.eigenfunction(ch, c, theta).real for ch in chans])
        gram = (vals * w) @ vals.T
        rec(f"orthonormality {c.g1},{c.g2}", np.abs(gram - np.eye(len(chans))).max(), "angular.orthogonality")
    worst = 0.0
    for g1 in np.linspace(-2.0, 2.0, 4):
        for g2 in np.linspace(-2.0, 2.0, 4):
            c = ang.CouplingPair(g1, g2)
            a = [ch.lam for ch in ang.angular_eigenvalues(c, 5)]
            b = oracles.fd_angular_eigenvalues(c, count=5)
            worst = max(worst, max(abs(x - y) for x, y in zip(a, b)))
    rec("finite-difference oracle, 4x4 grid", worst, "angular.fd_oracle")
    on_line, flips = 0.0, 0
    for d in np.linspace(-2.0, 2.0, 20):
        g1, g2 = -math.pi / 6 + d / 2, -math.pi / 6 - d / 2
        on_line = max(on_line, abs(ang.sheet_eigenvalue(ang.CouplingPair(g1, g2), 1)))
        up = ang.sheet_eigenvalue(ang.CouplingPair(g1 + 5e-7, g2 + 5e-7), 1)
        down = ang.sheet_eigenvalue(ang.CouplingPair(g1 - 5e-7, g2 - 5e-7), 1)
        flips += not (up * down < 0)
    rec("|lambda_1| on g1+g2=-pi/3", on_line, "angular.phase_line")
    rec("lambda_1 sign changes across g1+g2=-pi/3 (misses)", flips, "count.exact")


def _radial(rec, perturb_nu):
    for nu, r_min, r_max, count in ((1.0, 1e-10, 1e6, 9), (0.5, 1e-20, 1e12, 8)):
        levels = oracles.fd_radial_spectrum(nu, r_min, r_max, count=count)
        ratios = oracles.tower_ratios(levels)
        err = np.abs(ratios / math.exp(-2.0 * math.pi / nu) - 1.0).max()
        rec(f"tower ratio nu={nu}", err, "radial.tower_ratio")
    try:
        oracles.fd_radial_spectrum(1.0, 1e-6, 1e4, count=1, nu_squared=-(0.25 - 0.01))
        found = 1
    except oracles.InsufficientLevelsError:
        found = 0
    rec("no tower above the critical value", found, "count.exact")


def _special(rec, perturb_nu):
    worst = 0.0
    for nu in np.geomspace(0.1, 20.0, 5):
        for x in np.geomspace(1e-6, 700.0, 5):
            ref, _ = oracles.quadrature_bessel_k(nu, x)
            got = special.bessel_k_imag(nu, x)
            worst = max(worst, abs(got - ref) / special.bessel_k_imag_envelope(nu, x))
    rec("K_(i nu) vs quadrature, 5x5 grid", worst, "special.k_oracle")
    worst = 0.0
    for nu, x in ((1.0, 3.0), (0.3, 0.5), (3.0, 10.0)):
        ref = oracles.quadrature_hankel(1, nu, x)
        worst = max(worst, abs(special.hankel_imag(1, nu, x) - ref) / abs(ref))
    rec("H1_(i nu) vs quadrature", worst, "special.hankel_oracle")
    worst = 0.0
    for nu in (0.3, 1.0, 3.0, 10.0):
        for x in (0.01, 1.0, 30.0, 300.0):
            h1, d1 = special.hankel_imag_pair(1, nu, x)
            h2, d2 = special.hankel_imag_pair(2, nu, x)
            target = -4j / (math.pi * x)
            worst = max(worst, abs(h1 * d2 - h2 * d1 - target) / abs(target))
    rec("Hankel Wronskian", worst, "special.wronskian")


def _orthogonality(rec, perturb_nu):
    for nu in (0.3, 1.0, 3.0):
        p = radial.ChannelParams.from_nu(nu)
        b0, b1 = radial.bound_state(p, 0), radial.bound_state(p, 1)

        def f(r):
            return radial.bound_radial_wavefunction(p, b0.kappa, r)

        def g(r):
            return radial.bound_radial_wavefunction(p, b1.kappa, r)

        norm, _ = oracles.overlap_quadrature(f, f, 60.0 / b0.kappa, 1e-12 / b0.kappa, conjugate=False)
        rec(f"normalization nu={nu}", abs(norm - 1.0), "radial.normalization")
        cross, _ = oracles.overlap_quadrature(f, g, 60.0 / b1.kappa, 1e-12 / b1.kappa, conjugate=False)
        rec(f"bound-bound overlap nu={nu}", abs(cross), "radial.orthogonality")

        def s(r):
            return radial.scattering_radial_wavefunction(p, p.kappa_star, r)

        scat, _ = oracles.overlap_quadrature(f, s, 60.0 / b0.kappa, 1e-8 / b0.kappa)
        rec(f"bound-scattering overlap nu={nu}", abs(scat), "radial.scattering_orthogonality")


def _smatrix(rec, perturb_nu):
    for nu in (0.3, 1.0, 3.0):
        p = radial.ChannelParams.from_nu(nu)
        # Test mode: evaluate S with a perturbed nu, but judge it against the nominal period.
        q = radial.ChannelParams.from_nu(nu * (1.0 + perturb_nu)) if perturb_nu else p
        ks = np.geomspace(1e-4, 1e4, 2000)
        s = np.array([radial.s_matrix_value(q, k) for k in ks])
        shifted = np.array([radial.s_matrix_value(q, k * math.exp(math.pi / nu)) for k in ks])
        mirror = np.array([radial.s_matrix_value(q, p.kappa_star**2 / k) for k in ks])
        rec(f"unitarity nu={nu}", np.abs(np.abs(s) - 1.0).max(), "smatrix.unitarity")
        rec(f"log-periodicity nu={nu}", np.abs(shifted - s).max(), "smatrix.periodicity")
        rec(f"conjugation identity nu={nu}", np.abs(s.conj() + mirror).max(), "smatrix.conjugation")
        worst = 0.0
        for ell in (-1, 0, 1):
            got, _ = radial.residue_check(q, ell)
            level = radial.bound_state(p, ell)
            expected = 1j * level.kappa * math.sinh(nu * math.pi) / nu
            worst = max(worst, abs(got - expected) / abs(expected))
        rec(f"pole residues nu={nu}", worst, "smatrix.residue")


def _statistics(rec, perturb_nu):
    base = (0.3, -1.2, 2.5, 0.9)
    misses = sum(sector_map(perm).sign != pairwise_sign(perm) for perm in permutations(base))
    rec("24 permutation signs at n=4", misses, "count.exact")
    c = ang.CouplingPair(-0.5, -0.5)
    ch = ang.angular_eigenvalues(c, 1)[0]
    p = radial.ChannelParams.from_nu(ch.nu)

    def rad(r):
        return radial.bound_radial_wavefunction(p, 1.0, r)

    def angf(point):
        return ang.eigenfunction(ch, c, point.theta)

    worst = 0.0
    x = (0.7, -0.4, 1.3)
    for stats, sign in ((Statistics.BOSE, 1), (Statistics.FERMI, -1)):
        ref = assemble_wavefunction(ParticleConfig(x), 0.4, rad, angf, stats)
        for i, j in ((0, 1), (0, 2), (1, 2)):
            y = list(x)
            y[i], y[j] = y[j], y[i]
            val = assemble_wavefunction(ParticleConfig(y), 0.4, rad, angf, stats)
            worst = max(worst, abs(val - sign * ref) / abs(ref))
    rec("exchange (anti)symmetry at n=3", worst, "statistics.exchange")


SUITES = {
    "angular": _angular,
    "radial": _radial,
    "special": _special,
    "orthogonality": _orthogonality,
    "smatrix": _smatrix,
    "statistics": _statistics,
}


def run_suites(names=None, profile_name="default", perturb_nu=0.0):
    """Run the named suites (all when ``names`` is empty) and collect results."""
    names = list(names or SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    tols = profile(profile_name)
    report = VerifyReport(profile_name)
    for name in names:
        rec = _Recorder(name, tols)
        SUITES[name](rec, float(perturb_nu))
        report.results.extend(rec.rows)
    return report
