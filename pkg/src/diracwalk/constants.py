"""Numerical tolerances and shared validation helpers.

All simulation code works in natural units (hbar = c = m = 1), double
precision throughout.  Every tolerance that appears in a runtime check
lives in the single ``Tolerances`` record below so that the numerical
budget of the whole pipeline can be audited (and tightened) in one place.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    # spinor / matrix identities
    spinor_identity: float = 1e-12      # orthonormality, eigen-relations of u+-(p)
    matrix_algebra: float = 1e-14       # Pauli/Dirac algebra in floating point
    factor_mixing: float = 1e-12        # second-factor contamination in 4-spinors

    # initial-state construction
    profile_norm: float = 1e-10         # L2 norm of a momentum profile
    profile_tail: float = 1e-12         # probability mass beyond the cutoff
    coeff_norm: float = 1e-8            # combined norm of c+-(x)
    window_rel: float = 1e-14           # lattice window cut, relative to peak

    # lattice walk
    norm_drift_abort: float = 1e-9      # cumulative unitarity budget of a run

    # spectral / exact evolution
    propagator_unitary: float = 1e-13
    projector_idempotent: float = 1e-13
    leakage_exact: float = 1e-10

    # weak-limit machinery
    eigen_modulus: float = 1e-13        # | |lambda(phi)| - 1 |
    completeness: float = 1e-8          # eigenbasis completeness of g+-
    cdf_total: float = 1e-6             # limit CDF over the full interval
    density_norm: float = 1e-8          # closed-form density normalization


TOL = Tolerances()


def require_finite(name, value):
    """Reject NaN/inf inputs up front (they poison every closed form)."""
    arr = np.asarray(value)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


class NumericalHealthError(RuntimeError):
    """A numerical invariant (unitarity, aliasing, quadrature) failed.

    CLI commands translate this into exit status 2, separating genuine
    numerical trouble from usage errors (exit status 1).
    """
