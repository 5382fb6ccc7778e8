"""Cat-code logical states, the entangling step, and logical rotations."""

from __future__ import annotations

import numpy as np
import pytest

from catbell.bosonic import EVEN, ODD, ModeParams, cat, coherent, parity_op
from catbell.encoding import (
    BELL_KINDS,
    EncodingParams,
    bell_target,
    dft_logical_amplitudes,
    dft_state,
    displacement_rotation,
    entangled_target,
    entangled_target_cat_form,
    full_layout,
    hadamard_matrix,
    ideal_logical_rotation,
    lift_to_full,
    logical_basis,
    logical_state,
    prepare_entangled,
    qubit_state,
    rotation_fidelity,
    rx_matrix,
)
from catbell.errors import ContractError
from catbell.hilbert import (
    apply,
    expectation,
    overlap,
    partial_trace,
    state_fidelity,
    unitarity_residual,
)


class TestParams:
    def test_beta_defaults_to_alpha(self):
        enc = EncodingParams.for_amplitudes(2.0)
        assert enc.beta == 2.0
        assert enc.mode("a") == enc.mode("b")

    def test_explicit_cutoff(self):
        enc = EncodingParams.for_amplitudes(2.0, cutoff=30)
        assert enc.mode_a.cutoff == 30

    def test_nonpositive_amplitude_rejected(self):
        with pytest.raises(ValueError):
            EncodingParams.for_amplitudes(0.0)
        with pytest.raises(ValueError):
            EncodingParams.for_amplitudes(2.0, beta=-1.0)

    def test_negative_epsilon_rejected(self):
        with pytest.raises(ValueError):
            EncodingParams(2.0, 2.0, ModeParams(26), ModeParams(26), epsilon=-0.1)

    def test_epsilon_alpha_window(self):
        EncodingParams(2.0, 2.0, ModeParams(26), ModeParams(26), epsilon=np.pi / 8)
        with pytest.raises(ValueError, match="epsilon\\*alpha"):
            EncodingParams(2.0, 2.0, ModeParams(26), ModeParams(26), epsilon=2.0)

    def test_accessors(self):
        enc = EncodingParams.for_amplitudes(2.0, beta=3.0)
        assert enc.amplitude("b") == 3.0
        with pytest.raises(KeyError):
            enc.mode("c")

    def test_full_layout(self):
        enc = EncodingParams.for_amplitudes(2.0, cutoff=30)
        assert full_layout(enc).dims == (30, 30, 2, 2)


class TestLogicalBasis:
    def test_codewords_are_cats(self, enc2):
        basis = logical_basis("a", enc2)
        assert state_fidelity(basis.zero, cat(2.0, EVEN, enc2.mode_a)) == pytest.approx(1.0)
        assert state_fidelity(basis.one, cat(2.0, ODD, enc2.mode_a)) == pytest.approx(1.0)

    def test_codewords_orthogonal(self, enc2):
        basis = logical_basis("a", enc2)
        assert overlap(basis.zero, basis.one) == 0.0

    def test_parity_grading(self, enc2):
        p = parity_op(enc2.mode_a)
        assert expectation(p, logical_state(0, "a", enc2)).real == pytest.approx(1.0, abs=1e-10)
        assert expectation(p, logical_state(1, "a", enc2)).real == pytest.approx(-1.0, abs=1e-10)

    def test_gram_orthonormal(self):
        for alpha, beta in ((0.5, 0.5), (2.0, 3.0), (4.0, 1.0)):
            enc = EncodingParams.for_amplitudes(alpha, beta=beta)
            for which in ("a", "b"):
                basis = logical_basis(which, enc)
                vecs = np.column_stack(
                    [basis.zero.amps, basis.one.amps, basis.dft_zero.amps, basis.dft_one.amps]
                )
                gram = vecs[:, :2].conj().T @ vecs[:, :2]
                assert np.abs(gram - np.eye(2)).max() < 1e-12

    def test_dft_states_near_coherent(self, enc3):
        basis = logical_basis("a", enc3)
        f = state_fidelity(basis.dft_zero, coherent(3.0, enc3.mode_a))
        assert f > 1.0 - 1e-7
        f = state_fidelity(basis.dft_one, coherent(-3.0, enc3.mode_a))
        assert f > 1.0 - 1e-7

    def test_dft_orthogonal(self, enc3):
        basis = logical_basis("a", enc3)
        assert abs(overlap(basis.dft_zero, basis.dft_one)) < 1e-10

    def test_dft_logical_overlap_half(self, enc3):
        f = state_fidelity(dft_state(0, "a", enc3), logical_state(0, "a", enc3))
        assert abs(f - 0.5) < 1e-6

    def test_projector_rank_two(self, enc2):
        proj = logical_basis("a", enc2).projector().matrix
        w = np.linalg.eigvalsh(proj)
        assert np.sum(w > 0.5) == 2
        assert np.abs(proj @ proj - proj).max() < 1e-12

    def test_subspace_unitary_is_unitary(self, enc2):
        op = logical_basis("a", enc2).subspace_unitary(rx_matrix(0.3))
        assert unitarity_residual(op) < 1e-10


class TestEntangledPreparation:
    def test_matches_direct_target(self):
        enc = EncodingParams.for_amplitudes(2.0, cutoff=30)
        f = state_fidelity(prepare_entangled(enc), entangled_target(enc))
        assert f >= 1.0 - 1e-8

    def test_cat_form_factorizations_agree(self, enc2):
        psi = prepare_entangled(enc2)
        for side in ("a", "b"):
            f = state_fidelity(psi, entangled_target_cat_form(enc2, side=side))
            assert f >= 1.0 - 1e-10

    def test_bad_side(self, enc2):
        with pytest.raises(ValueError):
            entangled_target_cat_form(enc2, side="c")

    def test_amplitude_pattern(self, enc2, enc3):
        # the 2x2 projection table is a balanced diagonal; off-balance decays
        # with the coherent branch overlap exp(-2 alpha^2)/(2 sqrt(2))
        amp2 = np.abs(dft_logical_amplitudes(prepare_entangled(enc2), enc2))
        assert abs(amp2[0, 0] - 2 ** -0.5) < 2e-4
        assert abs(amp2[1, 1] - 2 ** -0.5) < 2e-4
        assert amp2[0, 1] < 2e-4 and amp2[1, 0] < 2e-4
        amp3 = np.abs(dft_logical_amplitudes(prepare_entangled(enc3), enc3))
        assert abs(amp3[0, 0] - 2 ** -0.5) < 1e-6
        assert abs(amp3[1, 1] - 2 ** -0.5) < 1e-6
        assert amp3[0, 1] < 1e-6 and amp3[1, 0] < 1e-6

    def test_reduced_mode_maximally_mixed(self, enc3):
        red = partial_trace(prepare_entangled(enc3), (0,))
        w = np.sort(np.linalg.eigvalsh(red.matrix))[::-1]
        assert abs(w[0] - 0.5) < 1e-6
        assert abs(w[1] - 0.5) < 1e-6
        assert w[2] < 1e-8

    def test_amplitude_table_requires_register_layout(self, enc2, enc3):
        with pytest.raises(ContractError):
            dft_logical_amplitudes(prepare_entangled(enc3), enc2)


class TestBellTargets:
    def test_kinds(self, enc2):
        with pytest.raises(ValueError):
            bell_target("phi_minus", enc2)
        assert BELL_KINDS == ("phi_plus", "psi_plus")

    def test_orthogonal_pair(self, enc2):
        phi = bell_target("phi_plus", enc2)
        psi = bell_target("psi_plus", enc2)
        assert abs(overlap(phi, psi)) < 1e-12

    def test_parity_correlation(self, enc2):
        pa = lift_to_full(parity_op(enc2.mode_a), "a", enc2)
        pb = lift_to_full(parity_op(enc2.mode_b), "b", enc2)
        for kind, sign in (("phi_plus", 1.0), ("psi_plus", -1.0)):
            state = bell_target(kind, enc2)
            corr = overlap(apply(pa, state), apply(pb, state)).real
            assert abs(corr - sign) < 1e-10

    def test_hadamard_turns_preparation_into_phi_plus(self, enc2, enc3):
        for enc, floor in ((enc2, 1e-7), (enc3, 1e-8)):
            h = lift_to_full(ideal_logical_rotation("hadamard", "a", enc), "a", enc)
            rotated = apply(h, prepare_entangled(enc))
            assert state_fidelity(bell_target("phi_plus", enc), rotated) >= 1.0 - floor

    def test_mode_entropy_one_bit(self, enc2):
        red = partial_trace(bell_target("phi_plus", enc2), (0,))
        w = np.linalg.eigvalsh(red.matrix)
        w = w[w > 1e-12]
        entropy = float(-(w * np.log2(w)).sum())
        assert abs(entropy - 1.0) < 1e-6


class TestRotations:
    def test_rx_zero_is_identity(self, enc2):
        op = ideal_logical_rotation("rx", "a", enc2, theta=0.0)
        assert np.abs(op.matrix - np.eye(enc2.mode_a.cutoff)).max() < 1e-12

    def test_rx_needs_theta(self, enc2):
        with pytest.raises(ValueError):
            ideal_logical_rotation("rx", "a", enc2)

    def test_unknown_kind(self, enc2):
        with pytest.raises(ValueError):
            ideal_logical_rotation("ry", "a", enc2, theta=0.1)

    def test_hadamard_squares_to_identity(self, enc2):
        h = ideal_logical_rotation("hadamard", "a", enc2)
        zero = logical_state(0, "a", enc2)
        assert state_fidelity(apply(h, apply(h, zero)), zero) > 1.0 - 1e-12

    def test_rx_half_turn_flips_with_phase(self, enc2):
        out = apply(ideal_logical_rotation("rx", "a", enc2, theta=np.pi / 2),
                    logical_state(0, "a", enc2))
        assert overlap(logical_state(1, "a", enc2), out) == pytest.approx(1j, abs=1e-12)

    def test_hadamard_matrix_involution(self):
        h = hadamard_matrix()
        assert np.abs(h @ h - np.eye(2)).max() < 1e-15


class TestDisplacementRotation:
    def test_angle_dictionary(self, enc2):
        # eps = theta / (2 alpha)
        from catbell.bosonic import displacement

        got = displacement_rotation(np.pi / 2, "a", enc2)
        want = displacement(1j * np.pi / 8, enc2.mode_a)
        assert np.abs(got.matrix - want.matrix).max() < 1e-14

    def test_explicit_epsilon_bypasses_theta(self, enc2):
        from catbell.bosonic import displacement

        got = displacement_rotation(None, "a", enc2, epsilon=0.1)
        want = displacement(0.1j, enc2.mode_a)
        assert np.abs(got.matrix - want.matrix).max() < 1e-14

    def test_theta_and_epsilon_conflict(self, enc2):
        with pytest.raises(ValueError):
            displacement_rotation(0.3, "a", enc2, epsilon=0.1)

    def test_needs_some_scale(self, enc2):
        with pytest.raises(ValueError):
            displacement_rotation(None, "a", enc2)

    def test_params_epsilon_fallback(self):
        from catbell.bosonic import displacement

        enc = EncodingParams(2.0, 2.0, ModeParams(26), ModeParams(26), epsilon=0.2)
        got = displacement_rotation(None, "a", enc)
        assert np.abs(got.matrix - displacement(0.2j, enc.mode_a).matrix).max() < 1e-14

    @pytest.mark.parametrize("eps,law", [(0.1, 0.990050), (0.2, 0.960789)])
    def test_branch_fidelity_law(self, enc3, eps, law):
        rep = rotation_fidelity(2.0 * 3.0 * eps, enc3)
        assert abs(rep.f_zero_branch - law) < 1e-5
        assert abs(rep.f_one_branch - law) < 1e-5
        assert rep.analytic == pytest.approx(np.exp(-eps * eps), abs=1e-12)

    def test_zero_angle_perfect(self, enc2):
        rep = rotation_fidelity(0.0, enc2)
        assert rep.f_zero_branch == pytest.approx(1.0, abs=1e-12)

    def test_law_sharpens_with_alpha(self):
        # finite-alpha correction to exp(-eps^2) decays like exp(-2 alpha^2);
        # the 1e-10 floor is the basis truncation tail, which dominates once
        # the physical correction drops below it
        for alpha in (2.0, 3.0, 4.0):
            enc = EncodingParams.for_amplitudes(alpha)
            rep = rotation_fidelity(np.pi / 4, enc)
            bound = max(1e-10, 5.0 * np.exp(-2.0 * alpha * alpha))
            assert abs(rep.f_zero_branch - rep.analytic) <= bound
            assert abs(rep.f_one_branch - rep.analytic) <= bound


def test_lift_to_full_slots(enc2):
    op = ideal_logical_rotation("hadamard", "b", enc2)
    lifted = lift_to_full(op, "b", enc2)
    assert lifted.acts_on == (1,)
    sx = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    from catbell.hilbert import OperatorMatrix, SpaceLayout

    qubit_op = OperatorMatrix(SpaceLayout((2,)), (0,), sx)
    assert lift_to_full(qubit_op, "ion2", enc2).acts_on == (3,)
    assert lift_to_full(qubit_op, 1, enc2).acts_on == (2,)


def test_qubit_state_basis():
    np.testing.assert_array_equal(qubit_state(1).amps, [0, 1])
