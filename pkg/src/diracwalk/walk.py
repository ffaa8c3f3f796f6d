"""Discrete-time quantum walk engine: coin rotation, conditional shift,
n-step evolution, position distribution and empirical moments.

The walker lives on one lattice fiber {x0 + m*dt : m integer}; the coin is
the 2-dimensional spin space.  One step applies the coin first and then the
conditional shift.  In the "plus" branch spin-up amplitude moves one site
toward +x and spin-down one site toward -x; the "minus" branch swaps the
directions.  Arrays grow by exactly one site per side per step, so the
light-cone bound (zero amplitude beyond the initial support widened by n
sites) holds bit-exactly.  Site-index arithmetic never mixes fibers.

Evolution monitors the total probability after every step and aborts when
the cumulative drift exceeds the unitarity budget; it never renormalizes
silently.  States are values; a single evolution is sequential, but
independent evolutions share nothing and may run concurrently.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .constants import TOL, NumericalHealthError

BRANCHES = ("plus", "minus")


@dataclass
class LatticeState:
    """Spin-up/spin-down amplitudes on a contiguous window of lattice sites.

    ``m_min`` is the site index of array element 0; site m corresponds to
    position x0 + m*dt.  Invariant: sum(|a+|^2 + |a-|^2) = 1 within the
    unitarity budget.
    """

    dt: float
    m_min: int
    a_plus: np.ndarray
    a_minus: np.ndarray
    x0: float = 0.0
    norm_drift: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.a_plus = np.asarray(self.a_plus, dtype=complex)
        self.a_minus = np.asarray(self.a_minus, dtype=complex)
        if self.a_plus.shape != self.a_minus.shape or self.a_plus.ndim != 1:
            raise ValueError("spin component arrays must be 1-d and equally long")
        if self.dt <= 0:
            raise ValueError("dt must be positive")

    @property
    def n_sites(self) -> int:
        return self.a_plus.size

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.m_min, self.m_min + self.n_sites)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.sites * self.dt

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.a_plus) ** 2 + np.abs(self.a_minus) ** 2))

    def copy(self) -> "LatticeState":
        return replace(self, a_plus=self.a_plus.copy(), a_minus=self.a_minus.copy())


@dataclass
class WalkConfig:
    """Parameters of one walk run plus the recorded per-step norm drift."""

    dt: float
    n_steps: int
    branch: str = "plus"
    norm_drift: np.ndarray | None = None

    def __post_init__(self):
        if self.n_steps < 0:
            raise ValueError("n_steps must be >= 0")
        if self.branch not in BRANCHES:
            raise ValueError(f"branch must be one of {BRANCHES}")


def coin_matrix(dt: float) -> np.ndarray:
    """The coin c = exp(-i*dt*sigma2) = [[cos dt, -sin dt], [sin dt, cos dt]]."""
    c, s = np.cos(dt), np.sin(dt)
    return np.array([[c, -s], [s, c]], dtype=complex)


def coin_step(state: LatticeState) -> LatticeState:
    """Rotate the spin at every site: (a+, a-) <- (c*a+ - s*a-, s*a+ + c*a-)."""
    c, s = np.cos(state.dt), np.sin(state.dt)
    return replace(
        state,
        a_plus=c * state.a_plus - s * state.a_minus,
        a_minus=s * state.a_plus + c * state.a_minus,
        norm_drift=None,
    )


def shift_step(state: LatticeState, branch: str = "plus") -> LatticeState:
    """Conditional shift; the window grows by one site on each side.

    branch "plus":  spin-up m -> m+1, spin-down m -> m-1
    branch "minus": spin-up m -> m-1, spin-down m -> m+1
    """
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}")
    n = state.n_sites
    ap = np.zeros(n + 2, dtype=complex)
    am = np.zeros(n + 2, dtype=complex)
    if branch == "plus":
        ap[2:] = state.a_plus
        am[:n] = state.a_minus
    else:
        ap[:n] = state.a_plus
        am[2:] = state.a_minus
    return replace(state, m_min=state.m_min - 1, a_plus=ap, a_minus=am,
                   norm_drift=None)


def step(state: LatticeState, branch: str = "plus") -> LatticeState:
    """One walk step: coin first, then the conditional shift."""
    return shift_step(coin_step(state), branch)


def step_adjoint(state: LatticeState, branch: str = "plus") -> LatticeState:
    """The inverse of ``step``: undo the shift, then the inverse coin."""
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}")
    n = state.n_sites
    if n < 2:
        raise ValueError("state too narrow to unshift")
    if branch == "plus":
        ap, am = state.a_plus[2:], state.a_minus[: n - 2]
    else:
        ap, am = state.a_plus[: n - 2], state.a_minus[2:]
    c, s = np.cos(state.dt), np.sin(state.dt)
    return replace(
        state,
        m_min=state.m_min + 1,
        a_plus=c * ap + s * am,
        a_minus=-s * ap + c * am,
        norm_drift=None,
    )


def evolve(state: LatticeState, n_steps: int, branch: str = "plus",
           drift_tol: float = TOL.norm_drift_abort) -> LatticeState:
    """Apply ``n_steps`` walk steps, recording |norm^2 - 1| after each.

    Drift is monitored, never repaired: exceeding ``drift_tol`` raises
    ``NumericalHealthError``.  The returned state carries the per-step
    drift record in ``norm_drift``.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    drift0 = abs(state.norm_sq() - 1.0)
    if drift0 > drift_tol:
        raise NumericalHealthError(
            f"initial state norm off by {drift0:.3e} (budget {drift_tol:.1e})"
        )
    drift = np.empty(n_steps)
    out = state
    for k in range(n_steps):
        out = step(out, branch)
        drift[k] = abs(out.norm_sq() - 1.0)
        if drift[k] > drift_tol:
            raise NumericalHealthError(
                f"norm drift {drift[k]:.3e} after step {k + 1} "
                f"exceeds budget {drift_tol:.1e}"
            )
    out = replace(out, norm_drift=drift)
    return out


def evolve_adjoint(state: LatticeState, n_steps: int,
                   branch: str = "plus") -> LatticeState:
    """Apply the adjoint step ``n_steps`` times (time reversal)."""
    out = state
    for _ in range(n_steps):
        out = step_adjoint(out, branch)
    return out


def run_walk(state: LatticeState, config: WalkConfig) -> LatticeState:
    """Evolve per a WalkConfig, storing the drift record on the config."""
    if abs(config.dt - state.dt) > 1e-12 * state.dt:
        raise ValueError("config dt does not match the lattice spacing")
    out = evolve(state, config.n_steps, config.branch)
    config.norm_drift = out.norm_drift
    return out


def position_distribution(state: LatticeState) -> np.ndarray:
    """P[m] = |a+[m]|^2 + |a-[m]|^2, aligned with ``state.sites``."""
    return np.abs(state.a_plus) ** 2 + np.abs(state.a_minus) ** 2


def empirical_moment(state: LatticeState, k: int) -> float:
    """k-th moment of the walker position on the fiber: sum (m*dt)^k P[m]."""
    if k < 0:
        raise ValueError("moment order must be >= 0")
    prob = position_distribution(state)
    x = state.sites * state.dt
    return float(np.sum(x ** k * prob))
