"""Cat-state logical qubits on two vibrational modes plus two electronic qubits.

Logical |0> is the even cat, logical |1> the odd cat; their equal-weight
combinations (the two-level discrete Fourier pair) approach the coherent
states |alpha> and |-alpha> for large amplitude.  The joint layout is fixed
as [mode a, mode b, ion 1, ion 2], electronic factors last.

A displacement i*eps on a mode rotates the logical qubit about x by the angle
2*alpha*eps: each coherent branch of a cat sits a distance 2*alpha from the
other in the displaced quadrature, so the momentum kick eps advances the
branch phases by +-alpha*eps and their difference by twice that.  The branch
fidelity against the ideal rotation is exp(-eps^2) up to terms of order
exp(-2 alpha^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, exp, pi, sin, sqrt

import numpy as np

from . import bosonic
from .bosonic import EVEN, ODD, ModeParams
from .errors import ContractError
from .hilbert import (
    OperatorMatrix,
    SpaceLayout,
    StateVector,
    apply,
    on_layout,
    overlap,
    state_fidelity,
    tensor,
)

MODE_A, MODE_B, ION_1, ION_2 = 0, 1, 2, 3

QUBIT = SpaceLayout((2,))


@dataclass(frozen=True)
class EncodingParams:
    """Cat amplitudes and truncation settings for the two-mode register."""

    alpha: float
    beta: float
    mode_a: ModeParams
    mode_b: ModeParams
    epsilon: float | None = None  # explicit displacement scale, optional

    def __post_init__(self) -> None:
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("cat amplitudes must be positive")
        if self.epsilon is not None and self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.epsilon is not None and self.epsilon * self.alpha > pi:
            raise ValueError(
                f"epsilon*alpha must lie in [0, pi], got {self.epsilon * self.alpha:.4g}"
            )

    @classmethod
    def for_amplitudes(cls, alpha: float, beta: float | None = None,
                       cutoff: int | None = None,
                       leak_tol: float = 1e-10) -> "EncodingParams":
        beta = alpha if beta is None else beta
        if cutoff is None:
            ma = bosonic.mode_for(alpha, leak_tol)
            mb = bosonic.mode_for(beta, leak_tol)
        else:
            ma = ModeParams(cutoff, leak_tol)
            mb = ModeParams(cutoff, leak_tol)
        return cls(alpha, beta, ma, mb)

    def mode(self, which: str) -> ModeParams:
        return {"a": self.mode_a, "b": self.mode_b}[which]

    def amplitude(self, which: str) -> float:
        return {"a": self.alpha, "b": self.beta}[which]


def full_layout(params: EncodingParams) -> SpaceLayout:
    return SpaceLayout((params.mode_a.cutoff, params.mode_b.cutoff, 2, 2))


def qubit_state(bit: int) -> StateVector:
    v = np.zeros(2, dtype=np.complex128)
    v[bit] = 1.0
    return StateVector(QUBIT, v)


@dataclass
class LogicalBasis:
    """Cat-code basis of one mode: logical pair plus its Fourier combinations."""

    zero: StateVector       # even cat
    one: StateVector        # odd cat
    dft_zero: StateVector   # (|0_L> + |1_L>)/sqrt(2), near |+alpha>
    dft_one: StateVector    # (|0_L> - |1_L>)/sqrt(2), near |-alpha>

    def projector(self) -> OperatorMatrix:
        """Rank-2 projector onto the logical subspace."""
        m = (np.outer(self.zero.amps, self.zero.amps.conj())
             + np.outer(self.one.amps, self.one.amps.conj()))
        return OperatorMatrix(self.zero.layout, (0,), m)

    def subspace_unitary(self, m2: np.ndarray) -> OperatorMatrix:
        """Lift a 2x2 unitary to the mode: act on the code, fix the rest."""
        m2 = np.asarray(m2, dtype=np.complex128)
        basis = np.column_stack([self.zero.amps, self.one.amps])
        dim = self.zero.layout.total_dim
        full = np.eye(dim, dtype=np.complex128)
        full -= basis @ basis.conj().T
        full += basis @ m2 @ basis.conj().T
        return OperatorMatrix(self.zero.layout, (0,), full)


def logical_basis(which_mode: str, params: EncodingParams) -> LogicalBasis:
    mode = params.mode(which_mode)
    amp = params.amplitude(which_mode)
    zero = bosonic.cat(amp, EVEN, mode)
    one = bosonic.cat(amp, ODD, mode)
    dz = StateVector(mode.layout, (zero.amps + one.amps) / sqrt(2.0))
    do = StateVector(mode.layout, (zero.amps - one.amps) / sqrt(2.0))
    return LogicalBasis(zero, one, dz, do)


def logical_state(bit: int, which_mode: str, params: EncodingParams) -> StateVector:
    basis = logical_basis(which_mode, params)
    return basis.zero if bit == 0 else basis.one


def dft_state(bit: int, which_mode: str, params: EncodingParams) -> StateVector:
    basis = logical_basis(which_mode, params)
    return basis.dft_zero if bit == 0 else basis.dft_one


def prepare_entangled(params: EncodingParams, chi_t: float = pi) -> StateVector:
    """Cross-phase entangling step on a pair of coherent states.

    Starts from |alpha>_a |beta>_b with both ions in |0> and applies the
    diagonal two-mode phase exp(-i chi_t n_a n_b) directly to the amplitude
    grid.  At chi_t = pi the result is the coherent/cat entangled pair.
    """
    psi = tensor([
        bosonic.coherent(params.alpha, params.mode_a),
        bosonic.coherent(params.beta, params.mode_b),
        qubit_state(0),
        qubit_state(0),
    ])
    grid = psi.as_tensor().copy()
    phases = bosonic.kerr_phases(chi_t, params.mode_a, params.mode_b)
    grid *= phases[:, :, None, None]
    return StateVector(psi.layout, grid.reshape(-1))


def entangled_target(params: EncodingParams) -> StateVector:
    """The entangled pair built directly from coherent components.

    Normalized four-term form (|a,b> + |-a,b> + |a,-b> - |-a,-b>)/2 with both
    ions in |0>; equals the chi_t = pi preparation exactly, truncation aside.
    """
    ca_p = bosonic.coherent(params.alpha, params.mode_a).amps
    ca_m = bosonic.coherent(-params.alpha, params.mode_a).amps
    cb_p = bosonic.coherent(params.beta, params.mode_b).amps
    cb_m = bosonic.coherent(-params.beta, params.mode_b).amps
    grid = 0.5 * (np.outer(ca_p, cb_p) + np.outer(ca_m, cb_p)
                  + np.outer(ca_p, cb_m) - np.outer(ca_m, cb_m))
    grid /= np.linalg.norm(grid)
    psi = np.kron(grid.reshape(-1), np.array([1, 0, 0, 0], dtype=np.complex128))
    return StateVector(full_layout(params), psi)


def entangled_target_cat_form(params: EncodingParams, side: str = "b") -> StateVector:
    """Same state written with cats on one side and coherent kets on the other.

    side "b": sum over |+-alpha>_a (x) cat_+-(beta)_b with the cat
    normalization constants carried explicitly; side "a" mirrors it.  Used to
    check that both factorizations describe one and the same vector.
    """
    if side == "b":
        k_p = bosonic.coherent(params.alpha, params.mode_a).amps
        k_m = bosonic.coherent(-params.alpha, params.mode_a).amps
        c_p = bosonic.cat(params.beta, EVEN, params.mode_b).amps
        c_m = bosonic.cat(params.beta, ODD, params.mode_b).amps
        w_p = 0.5 / bosonic.cat_norm(params.beta, EVEN)
        w_m = 0.5 / bosonic.cat_norm(params.beta, ODD)
        grid = w_p * np.outer(k_p, c_p) + w_m * np.outer(k_m, c_m)
    elif side == "a":
        c_p = bosonic.cat(params.alpha, EVEN, params.mode_a).amps
        c_m = bosonic.cat(params.alpha, ODD, params.mode_a).amps
        k_p = bosonic.coherent(params.beta, params.mode_b).amps
        k_m = bosonic.coherent(-params.beta, params.mode_b).amps
        w_p = 0.5 / bosonic.cat_norm(params.alpha, EVEN)
        w_m = 0.5 / bosonic.cat_norm(params.alpha, ODD)
        grid = w_p * np.outer(c_p, k_p) + w_m * np.outer(c_m, k_m)
    else:
        raise ValueError(f"side must be 'a' or 'b', got {side!r}")
    grid /= np.linalg.norm(grid)
    psi = np.kron(grid.reshape(-1), np.array([1, 0, 0, 0], dtype=np.complex128))
    return StateVector(full_layout(params), psi)


BELL_KINDS = ("phi_plus", "psi_plus")


def bell_target(kind: str, params: EncodingParams) -> StateVector:
    """Logical Bell state of the two modes, ions in |00>."""
    if kind not in BELL_KINDS:
        raise ValueError(f"kind must be one of {BELL_KINDS}, got {kind!r}")
    a = logical_basis("a", params)
    b = logical_basis("b", params)
    if kind == "phi_plus":
        pairs = [(a.zero, b.zero), (a.one, b.one)]
    else:
        pairs = [(a.zero, b.one), (a.one, b.zero)]
    grid = sum(np.outer(x.amps, y.amps) for x, y in pairs) / sqrt(2.0)
    psi = np.kron(grid.reshape(-1), np.array([1, 0, 0, 0], dtype=np.complex128))
    return StateVector(full_layout(params), psi)


def hadamard_matrix() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=np.complex128) / sqrt(2.0)


def rx_matrix(theta: float) -> np.ndarray:
    return np.array(
        [[cos(theta), 1j * sin(theta)], [1j * sin(theta), cos(theta)]],
        dtype=np.complex128,
    )


def ideal_logical_rotation(kind: str, which_mode: str, params: EncodingParams,
                           theta: float | None = None) -> OperatorMatrix:
    """Exact code-space unitary on one mode: 'hadamard' or 'rx' (needs theta).

    Acts as the 2x2 matrix on the cat pair and as identity on the rest of the
    Fock space; returned on the single-mode layout (lift with lift_to_full to
    place it in the four-factor register).
    """
    basis = logical_basis(which_mode, params)
    if kind == "hadamard":
        m2 = hadamard_matrix()
    elif kind == "rx":
        if theta is None:
            raise ValueError("rx rotation needs theta")
        m2 = rx_matrix(theta)
    else:
        raise ValueError(f"kind must be 'hadamard' or 'rx', got {kind!r}")
    return basis.subspace_unitary(m2)


def displacement_rotation(theta: float | None, which_mode: str,
                          params: EncodingParams,
                          epsilon: float | None = None) -> OperatorMatrix:
    """Approximate rx(theta) on one mode by the displacement D(i eps).

    The displacement scale is eps = theta / (2 alpha): the kick advances the
    two coherent branches by opposite phases alpha*eps, which is a logical x
    rotation by 2*alpha*eps.  Passing epsilon directly (or setting it on the
    params) bypasses the angle dictionary.  Returned on the single-mode
    layout.
    """
    amp = params.amplitude(which_mode)
    if epsilon is None:
        if theta is not None:
            epsilon = theta / (2.0 * amp)
        elif params.epsilon is not None:
            epsilon = params.epsilon
        else:
            raise ValueError("need either theta or an explicit epsilon")
    elif theta is not None:
        raise ValueError("give theta or epsilon, not both")
    return bosonic.displacement(1j * epsilon, params.mode(which_mode))


def lift_to_full(op: OperatorMatrix, which: int | str,
                 params: EncodingParams) -> OperatorMatrix:
    """Place a single-factor operator at a named slot of the full register."""
    index = {"a": MODE_A, "b": MODE_B, 1: ION_1, 2: ION_2,
             "ion1": ION_1, "ion2": ION_2}.get(which, which)
    return on_layout(op, full_layout(params), (int(index),))


@dataclass
class RotationFidelity:
    """Numerical branch fidelities of a displacement rotation vs exp(-eps^2)."""

    theta: float
    epsilon: float
    f_zero_branch: float
    f_one_branch: float
    analytic: float


def rotation_fidelity(theta: float, params: EncodingParams,
                      which_mode: str = "a") -> RotationFidelity:
    """Fidelity of D(i eps) against the ideal rx(theta) on both code branches."""
    basis = logical_basis(which_mode, params)
    eps = theta / (2.0 * params.amplitude(which_mode))
    d = displacement_rotation(None, which_mode, params, epsilon=eps)
    tgt0 = StateVector(basis.zero.layout,
                       cos(theta) * basis.zero.amps + 1j * sin(theta) * basis.one.amps)
    tgt1 = StateVector(basis.zero.layout,
                       1j * sin(theta) * basis.zero.amps + cos(theta) * basis.one.amps)
    f0 = state_fidelity(tgt0, apply(d, basis.zero))
    f1 = state_fidelity(tgt1, apply(d, basis.one))
    return RotationFidelity(theta, eps, f0, f1, exp(-eps * eps))


def dft_logical_amplitudes(state: StateVector, params: EncodingParams) -> np.ndarray:
    """Project a register state onto DFT(a) (x) logical(b), ions in |00>.

    Returns the 2x2 complex table amp[x, y] = <x_dft, y_logical, 0, 0|state>.
    """
    if state.layout != full_layout(params):
        raise ContractError("state does not live on the register layout")
    a = logical_basis("a", params)
    b = logical_basis("b", params)
    out = np.zeros((2, 2), dtype=np.complex128)
    for x, xa in enumerate((a.dft_zero, a.dft_one)):
        for y, yb in enumerate((b.zero, b.one)):
            probe = tensor([xa, yb, qubit_state(0), qubit_state(0)])
            out[x, y] = overlap(probe, state)
    return out
