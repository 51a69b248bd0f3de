"""The single table of verification tolerances.

Every check in :mod:`dsi1d.verify` looks its threshold up here, so a
report can always be traced back to one number.
"""

from types import MappingProxyType

__all__ = ["PROFILES", "tolerance", "profile"]

_DEFAULT = {
    "angular.limits": 1e-10,
    "angular.residual": 1e-10,
    "angular.boundary": 1e-10,
    "angular.closed_form": 1e-10,
    "angular.fd_oracle": 1e-4,
    "angular.orthogonality": 1e-8,
    "angular.phase_line": 1e-4,
    "radial.tower_ratio": 1e-2,
    "radial.normalization": 1e-6,
    "radial.orthogonality": 1e-6,
    "radial.scattering_orthogonality": 1e-5,
    "radial.bound_asymptotic": 1e-3,
    "radial.scattering_asymptotic": 1e-2,
    "special.k_oracle": 1e-10,
    "special.hankel_oracle": 1e-9,
    "special.wronskian": 1e-9,
    "smatrix.unitarity": 1e-12,
    "smatrix.periodicity": 1e-12,
    "smatrix.conjugation": 1e-12,
    "smatrix.residue": 1e-6,
    "statistics.exchange": 1e-12,
    # Integer counts (roots, sign mismatches) must agree exactly.
    "count.exact": 0,
}

# Tighter bounds that the implementation is expected to meet with margin.
_STRICT = dict(
    _DEFAULT,
    **{
        "angular.fd_oracle": 1e-7,
        "angular.phase_line": 1e-8,
        "radial.tower_ratio": 1e-4,
        "radial.normalization": 1e-10,
        "radial.orthogonality": 1e-10,
        "radial.scattering_orthogonality": 1e-10,
        "special.k_oracle": 1e-10,
        "special.hankel_oracle": 1e-12,
        "special.wronskian": 1e-12,
        "smatrix.residue": 1e-8,
    },
)

PROFILES = MappingProxyType(
    {"default": MappingProxyType(_DEFAULT), "strict": MappingProxyType(_STRICT)}
)


def profile(name="default"):
    try:
        return PROFILES[name]
    except KeyError:
        raise KeyError(f"unknown tolerance profile {name!r}; choose from {sorted(PROFILES)}") from None


def tolerance(key, profile_name="default"):
    return profile(profile_name)[key]
