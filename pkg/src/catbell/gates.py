"""Entanglement-transfer gates between a vibrational mode and its ion.

Each gate lives on the compact pair layout [mode, ion]; lift_pair places it
on the four-factor register.  Two controlled-flip constructions are provided
for the vibration-controlled gate:

* u_ve_ideal: parity projectors routing an electronic flip, an exact CNOT
  with the mode's phonon parity as control.
* u_ve_literal: the product exp(-i pi n sigma_y) exp(i pi n |1><1|) taken at
  face value.  On an odd-phonon state exp(-i pi n sigma_y) equals -1, not an
  electronic flip, so this operator is diagonal in parity and does not
  perform the flip its construction suggests.  Its report records how far
  each truth-table row lands from the intended action; no claim is made that
  it matches the ideal variant.

The electron-controlled gate u_ev is the conditional displacement
exp(i eps (a + a+) |1><1|) followed by exp(-i pi |1><1| / 2).  A full logical
flip needs the displacement-rotation angle 2*alpha*eps to equal pi/2, so the
default scale is eps = pi/(4 alpha); the flipped rows then reach the ideal
targets with fidelity exp(-eps^2).  The trailing electronic phase exactly
cancels the i of the rotated branch, which is what makes the three-gate
sequence u_ve u_ev u_ve an exchange of the mode and ion qubits.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

from . import bosonic, encoding
from .encoding import EncodingParams
from .hilbert import (
    OperatorMatrix,
    SpaceLayout,
    StateVector,
    apply,
    matrix_exp,
    on_layout,
    overlap,
    tensor,
    unitarity_residual,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
EXCITED = np.diag([0.0, 1.0]).astype(np.complex128)


def pair_layout(which_mode: str, params: EncodingParams) -> SpaceLayout:
    return SpaceLayout((params.mode(which_mode).cutoff, 2))


def lift_pair(op: OperatorMatrix, which_mode: str,
              params: EncodingParams) -> OperatorMatrix:
    """Place a [mode, ion] pair operator on the full register layout."""
    slots = (encoding.MODE_A, encoding.ION_1) if which_mode == "a" \
        else (encoding.MODE_B, encoding.ION_2)
    return on_layout(op, encoding.full_layout(params), slots)


def u_ve_ideal(which_mode: str, params: EncodingParams) -> OperatorMatrix:
    """CNOT with phonon parity as control: flip the ion on odd parity."""
    mode = params.mode(which_mode)
    even, odd = bosonic.parity_projectors(mode)
    m = np.kron(even.matrix, np.eye(2)) + np.kron(odd.matrix, SIGMA_X)
    return OperatorMatrix(pair_layout(which_mode, params), (0, 1), m)


def u_ve_literal(which_mode: str, params: EncodingParams) -> OperatorMatrix:
    """The two-exponential construction evaluated exactly as written."""
    mode = params.mode(which_mode)
    n = bosonic.number_op(mode).matrix
    layout = pair_layout(which_mode, params)
    first = matrix_exp(
        OperatorMatrix(layout, (0, 1), np.kron(n, SIGMA_Y)), scale=-1j * pi
    )
    second = matrix_exp(
        OperatorMatrix(layout, (0, 1), np.kron(n, EXCITED)), scale=1j * pi
    )
    return OperatorMatrix(layout, (0, 1), first.matrix @ second.matrix)


def electronic_phase() -> np.ndarray:
    """exp(-i pi |1><1| / 2) on one ion."""
    return np.diag([1.0, np.exp(-1j * pi / 2.0)]).astype(np.complex128)


def u_ev(which_mode: str, params: EncodingParams,
         epsilon: float | None = None) -> OperatorMatrix:
    """CNOT with the ion as control, realized by a conditional displacement.

    epsilon defaults to pi / (4 alpha), the scale at which D(i eps) rotates
    the cat qubit by pi/2.
    """
    mode = params.mode(which_mode)
    amp = params.amplitude(which_mode)
    if epsilon is None:
        epsilon = pi / (4.0 * amp)
    d = bosonic.displacement(1j * epsilon, mode).matrix
    eye = np.eye(mode.cutoff, dtype=np.complex128)
    cond = np.kron(eye, np.diag([1.0, 0.0])) + np.kron(d, EXCITED)
    m = cond @ np.kron(eye, electronic_phase())
    return OperatorMatrix(pair_layout(which_mode, params), (0, 1), m)


def u_ev_ideal(which_mode: str, params: EncodingParams) -> OperatorMatrix:
    """Surrogate with the exact code-space rx(pi/2) in place of the displacement."""
    mode = params.mode(which_mode)
    rx = encoding.ideal_logical_rotation("rx", which_mode, params, theta=pi / 2.0)
    eye = np.eye(mode.cutoff, dtype=np.complex128)
    cond = np.kron(eye, np.diag([1.0, 0.0])) + np.kron(rx.matrix, EXCITED)
    m = cond @ np.kron(eye, electronic_phase())
    return OperatorMatrix(pair_layout(which_mode, params), (0, 1), m)


VE_VARIANTS = ("ideal", "literal")
EV_VARIANTS = ("displacement", "ideal")


def u_swap(which_mode: str, params: EncodingParams,
           ve_variant: str = "ideal", ev_variant: str = "displacement",
           epsilon: float | None = None) -> OperatorMatrix:
    """Three-step exchange of the mode qubit and its ion qubit."""
    if ve_variant not in VE_VARIANTS:
        raise ValueError(f"ve_variant must be one of {VE_VARIANTS}")
    if ev_variant not in EV_VARIANTS:
        raise ValueError(f"ev_variant must be one of {EV_VARIANTS}")
    ve = (u_ve_ideal if ve_variant == "ideal" else u_ve_literal)(which_mode, params)
    if ev_variant == "displacement":
        ev = u_ev(which_mode, params, epsilon=epsilon)
    else:
        ev = u_ev_ideal(which_mode, params)
    m = ve.matrix @ ev.matrix @ ve.matrix
    return OperatorMatrix(ve.layout, (0, 1), m)


def carrier_rotation(k: float, phase: float) -> OperatorMatrix:
    """Carrier-pulse rotation exp[-i k pi/2 (|1><0| e^{-i phase} + h.c.)].

    The generator is the equatorial axis (cos phase, -sin phase) on the Bloch
    sphere; conjugating sigma_z with the k = 1/2 pulse therefore lands on an
    equatorial measurement axis set by the pulse phase.
    """
    g = np.array(
        [[0.0, np.exp(1j * phase)], [np.exp(-1j * phase), 0.0]],
        dtype=np.complex128,
    )
    return matrix_exp(
        OperatorMatrix(SpaceLayout((2,)), (0,), g), scale=-1j * k * pi / 2.0
    )


@dataclass
class RowReport:
    input_label: str
    target_label: str
    fidelity: float
    amplitude: complex  # phase-aware overlap <target|U|input>


@dataclass
class GateReport:
    """Truth-table fidelities and a unitarity check for one gate build."""

    gate: str
    rows: list[RowReport]
    unitarity: float

    @property
    def min_fidelity(self) -> float:
        return min(r.fidelity for r in self.rows)


def _pair_basis(which_mode: str, params: EncodingParams) -> dict[str, StateVector]:
    basis = encoding.logical_basis(which_mode, params)
    out = {}
    for vlabel, vstate in (("0L", basis.zero), ("1L", basis.one)):
        for elabel, bit in (("0e", 0), ("1e", 1)):
            out[f"{vlabel},{elabel}"] = tensor([vstate, encoding.qubit_state(bit)])
    return out


def _report(gate: OperatorMatrix, name: str, which_mode: str,
            params: EncodingParams, table: list[tuple[str, str]]) -> GateReport:
    states = _pair_basis(which_mode, params)
    rows = []
    for in_label, tgt_label in table:
        out = apply(gate, states[in_label])
        amp = overlap(states[tgt_label], out)
        rows.append(RowReport(in_label, tgt_label, float(abs(amp) ** 2), amp))
    return GateReport(name, rows, unitarity_residual(gate))


CNOT_VE_TABLE = [("0L,0e", "0L,0e"), ("0L,1e", "0L,1e"),
                 ("1L,0e", "1L,1e"), ("1L,1e", "1L,0e")]
CNOT_EV_TABLE = [("0L,0e", "0L,0e"), ("0L,1e", "1L,1e"),
                 ("1L,0e", "1L,0e"), ("1L,1e", "0L,1e")]
SWAP_TABLE = [("0L,0e", "0L,0e"), ("0L,1e", "1L,0e"),
              ("1L,0e", "0L,1e"), ("1L,1e", "1L,1e")]


def report_u_ve(variant: str, which_mode: str, params: EncodingParams) -> GateReport:
    """Row-by-row comparison of a ve build against the intended CNOT action."""
    gate = (u_ve_ideal if variant == "ideal" else u_ve_literal)(which_mode, params)
    return _report(gate, f"u_ve[{variant}]", which_mode, params, CNOT_VE_TABLE)


def report_u_ev(which_mode: str, params: EncodingParams,
                epsilon: float | None = None) -> GateReport:
    gate = u_ev(which_mode, params, epsilon=epsilon)
    return _report(gate, "u_ev[displacement]", which_mode, params, CNOT_EV_TABLE)


def report_u_swap(which_mode: str, params: EncodingParams,
                  ve_variant: str = "ideal",
                  ev_variant: str = "displacement") -> GateReport:
    gate = u_swap(which_mode, params, ve_variant, ev_variant)
    return _report(gate, f"u_swap[{ve_variant},{ev_variant}]",
                   which_mode, params, SWAP_TABLE)
