"""Heating of a vibrational mode and its effect on the encoded Bell pair.

The reservoir model is the balanced pair of dissipators
gamma (D[a] + D[a+]), which leaves the mean amplitude <a> constant while the
occupancy grows linearly, d<n>/dt = gamma.  Unraveled as jumps, it is a pair
of point processes: upward events a+ at rate gamma <a a+> and downward events
a at rate gamma <a+ a>.  Either event flips the phonon-number parity, so a
cat-encoded Bell pair decays toward an incoherent parity-flipped mixture; the
small-probability single-jump picture gives the standard two-component
mixture used by the correlation tests.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import ceil, exp

import numpy as np

from . import bell as _bell
from .encoding import EncodingParams, bell_target
from .errors import ContractError
from .hilbert import DensityMatrix, SpaceLayout, StateVector

TRACE_TOL = 1e-6


@dataclass(frozen=True)
class HeatingParams:
    """Reservoir strength and integration settings."""

    gamma: float
    duration: float
    steps: int | None = None          # None picks a step count from the size
    constant_rate: bool = False       # freeze jump rates at their initial values

    def __post_init__(self) -> None:
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if self.duration < 0:
            raise ValueError("duration must be nonnegative")
        if self.steps is not None and self.steps < 1:
            raise ValueError("steps must be positive")


def _ladder(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), 1)


def _require_single_mode(layout: SpaceLayout) -> int:
    if layout.nsites != 1:
        raise ValueError(
            "the integrator works on a single-mode layout; "
            "trajectories support embedded modes via mode_index"
        )
    return layout.dims[0]


def lindblad_rhs(rho: np.ndarray, gamma: float) -> np.ndarray:
    """Right-hand side of the balanced heating master equation."""
    dim = rho.shape[0]
    a = _ladder(dim)
    ad = a.conj().T
    n_op = ad @ a
    aad = a @ ad
    gain = a @ rho @ ad + ad @ rho @ a
    loss = 0.5 * ((n_op + aad) @ rho + rho @ (n_op + aad))
    return gamma * (gain - loss)


def auto_steps(gamma: float, duration: float, dim: int) -> int:
    # fourth-order error ~ (gamma (2 dim + 2) h)^5 per step; this keeps the
    # accumulated error orders below the 1e-6 integration contract
    return max(100, int(ceil(200.0 * gamma * duration * (2 * dim + 2))))


@dataclass
class NoiseResult:
    """Deterministic evolution record."""

    final: DensityMatrix
    times: np.ndarray
    n_trace: np.ndarray
    a_trace: np.ndarray
    parity_trace: np.ndarray
    trace_drift: float


def evolve_lindblad(rho0: DensityMatrix, params: HeatingParams) -> NoiseResult:
    """Fixed-step fourth-order integration of the heating equation."""
    dim = _require_single_mode(rho0.layout)
    steps = params.steps or auto_steps(params.gamma, params.duration, dim)
    h = params.duration / steps
    n_diag = np.arange(dim, dtype=np.float64)
    parity_diag = (-1.0) ** np.arange(dim)

    rho = rho0.matrix.copy()
    times = np.linspace(0.0, params.duration, steps + 1)
    n_trace = np.empty(steps + 1)
    a_trace = np.empty(steps + 1, dtype=np.complex128)
    p_trace = np.empty(steps + 1)

    def record(i: int, m: np.ndarray) -> None:
        d = np.diag(m)
        n_trace[i] = float((n_diag * d).sum().real)
        a_trace[i] = complex((np.diag(m, k=-1) * np.sqrt(n_diag[1:])).sum())
        p_trace[i] = float((parity_diag * d).sum().real)

    record(0, rho)
    for i in range(steps):
        k1 = lindblad_rhs(rho, params.gamma)
        k2 = lindblad_rhs(rho + 0.5 * h * k1, params.gamma)
        k3 = lindblad_rhs(rho + 0.5 * h * k2, params.gamma)
        k4 = lindblad_rhs(rho + h * k3, params.gamma)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        record(i + 1, rho)

    drift = abs(float(np.trace(rho).real) - 1.0)
    if not np.isfinite(drift) or drift > TRACE_TOL:
        raise ContractError(
            f"trace drifted by {drift:.3e} over the integration; "
            f"increase steps (used {steps})"
        )
    return NoiseResult(DensityMatrix(rho0.layout, rho), times,
                       n_trace, a_trace, p_trace, drift)


def delta_of(gamma: float, alpha: float, duration: float) -> float:
    """Single-jump probability scale delta = gamma |alpha|^2 t."""
    return gamma * abs(alpha) ** 2 * duration


def parity_flip_probability(gamma: float, alpha: float, duration: float) -> float:
    """Odd-total-jump probability of the merged up/down processes.

    Both processes run at about gamma |alpha|^2, so the merged intensity is
    close to 2 gamma |alpha|^2 t = 2 delta, and a parity flip needs an odd
    number of events.
    """
    lam = 2.0 * gamma * abs(alpha) ** 2 * duration
    return (1.0 - exp(-2.0 * lam)) / 2.0


@dataclass
class TrajectoryResult:
    final: StateVector
    jumps: list  # list of (time, '+') for a+ events, (time, '-') for a
    parity_flipped: bool

    @property
    def n_jumps(self) -> int:
        return len(self.jumps)


def sample_trajectory(state: StateVector, params: HeatingParams,
                      seed_or_rng, mode_index: int = 0) -> TrajectoryResult:
    """One jump-process realization of the heating channel.

    Between jumps the state is left unchanged (the no-jump drift is dropped,
    consistent with the small gamma*t regime the model is built for).  Rates
    are recomputed from the current state after every jump unless
    constant_rate froze them at their initial values.  A downward event drawn
    against a state with no support above the vacuum would annihilate it;
    such events are resampled (skipped), which only matters under frozen
    rates.  Deterministic for a given seed.
    """
    rng = (seed_or_rng if isinstance(seed_or_rng, np.random.Generator)
           else np.random.default_rng(seed_or_rng))
    layout = state.layout
    dim = layout.dims[mode_index]
    sq = np.sqrt(np.arange(1, dim, dtype=np.float64))

    def occupancy(psi: np.ndarray) -> float:
        t = psi.reshape(layout.dims)
        w = np.abs(t) ** 2
        marg = w.sum(axis=tuple(i for i in range(layout.nsites) if i != mode_index))
        return float((np.arange(dim) * marg).sum())

    def jump(psi: np.ndarray, up: bool) -> np.ndarray | None:
        t = np.moveaxis(psi.reshape(layout.dims), mode_index, 0).copy()
        out = np.zeros_like(t)
        if up:
            out[1:] = sq[:, None].reshape((dim - 1,) + (1,) * (layout.nsites - 1)) * t[:-1]
        else:
            out[:-1] = sq.reshape((dim - 1,) + (1,) * (layout.nsites - 1)) * t[1:]
        out = np.moveaxis(out, 0, mode_index)
        flat = out.reshape(-1)
        nrm = np.linalg.norm(flat)
        if nrm == 0.0:
            return None
        return flat / nrm

    psi = state.amps.copy()
    n0 = occupancy(psi)
    if params.gamma * params.duration * n0 >= 0.5:
        warnings.warn(
            f"gamma*duration*<n> = {params.gamma * params.duration * n0:.3g} "
            "is not small; single-jump statistics are unreliable at this depth",
            stacklevel=2,
        )
    jumps: list = []
    t = 0.0
    while True:
        if params.constant_rate:
            r_up = r_down = params.gamma * n0
        else:
            n_mean = occupancy(psi)
            r_up = params.gamma * (n_mean + 1.0)
            r_down = params.gamma * n_mean
        total = r_up + r_down
        if total <= 0.0:
            break
        t += rng.exponential(1.0 / total)
        if t >= params.duration:
            break
        up = rng.random() < r_up / total
        kicked = jump(psi, up)
        if kicked is None:
            continue
        psi = kicked
        jumps.append((t, "+" if up else "-"))
    return TrajectoryResult(StateVector(layout, psi), jumps, len(jumps) % 2 == 1)


def trajectory_rng(master_seed: int, index: int) -> np.random.Generator:
    """Independent per-trajectory stream keyed by (master seed, index)."""
    return np.random.default_rng([master_seed, index])


def mixed_bell(delta: float) -> DensityMatrix:
    """Electronic two-qubit mixture (1-delta)|phi+><phi+| + delta|psi+><psi+|.

    Both components are unit-normalized Bell projectors, so the weights are
    exactly (1-delta, delta).
    """
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must be in [0, 1], got {delta}")
    phi = _bell.electronic_bell("phi_plus")
    psi = _bell.electronic_bell("psi_plus")
    m = ((1.0 - delta) * np.outer(phi.amps, phi.amps.conj())
         + delta * np.outer(psi.amps, psi.amps.conj()))
    return DensityMatrix(phi.layout, m)


def lifted_mixed_bell(delta: float, params: EncodingParams) -> DensityMatrix:
    """The same mixture written on the cat-encoded register."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must be in [0, 1], got {delta}")
    phi = bell_target("phi_plus", params)
    psi = bell_target("psi_plus", params)
    m = ((1.0 - delta) * np.outer(phi.amps, phi.amps.conj())
         + delta * np.outer(psi.amps, psi.amps.conj()))
    return DensityMatrix(phi.layout, m)
