"""Tests for state maps, the SU(2)/SO(3) bridge, and the isometry harness."""

import math

import numpy as np
import pytest

from qwasser.errors import DomainError
from qwasser.isometry import (
    MAP_FAMILIES,
    antiunitary_conj_map,
    apply_state_map,
    bloch_action_matrix,
    bloch_self_map,
    check_isometry,
    discontinuous_z_phase_field_map,
    dz_condition_report,
    orthogonal_bloch_map,
    rotation_to_unitary,
    sample_wigner_map,
    satisfies_dz_condition,
    theorem_crosscheck_dz,
    unitary_conj_map,
    z_phase_field_map,
    z_phase_unitary,
)
from qwasser.sampling import derived_rng, random_bloch_in_ball, random_rotation, random_unitary
from qwasser.states import PAULI, bloch_from_state, state_from_bloch
from qwasser.cost import z_cost
from qwasser.transport import solve_min_coupling


def rot_x(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


class TestApply:
    def test_sx_flips_poles(self):
        m = unitary_conj_map(PAULI[1], "sx")
        out = apply_state_map(m, state_from_bloch([0, 0, 1]))
        np.testing.assert_allclose(out, state_from_bloch([0, 0, -1]), atol=1e-14)

    def test_conjugation_bloch_action(self):
        m = antiunitary_conj_map(np.eye(2, dtype=complex), "K")
        out = apply_state_map(m, state_from_bloch([0.3, 0.4, 0.5]))
        np.testing.assert_allclose(bloch_from_state(out), [0.3, -0.4, 0.5], atol=1e-14)

    def test_constant_zero_phase_field_is_identity(self):
        m = z_phase_field_map(lambda rho: 0.0, "zero")
        rho = state_from_bloch([0.2, -0.1, 0.6])
        np.testing.assert_allclose(apply_state_map(m, rho), rho, atol=1e-14)

    def test_bloch_map_outside_ball_rejected(self):
        m = bloch_self_map(lambda b: 2.0 * b + np.array([1.0, 0, 0]), "bad")
        with pytest.raises(DomainError):
            apply_state_map(m, state_from_bloch([0.9, 0, 0]))


class TestRotationToUnitary:
    def test_identity_rotation(self):
        u = rotation_to_unitary(np.eye(3))
        assert np.allclose(u, np.eye(2)) or np.allclose(u, -np.eye(2))

    def test_pi_about_z(self):
        u = rotation_to_unitary(np.diag([-1.0, -1.0, 1.0]))
        # up to global phase this is sigma_z; the Bloch action is what matters
        act = bloch_action_matrix(u)
        np.testing.assert_allclose(act, np.diag([-1.0, -1.0, 1.0]), atol=1e-12)

    def test_quarter_turn_about_x(self):
        u = rotation_to_unitary(rot_x(math.pi / 2))
        rho = state_from_bloch([0, 0, 1])
        out = bloch_from_state(u @ rho @ u.conj().T)
        np.testing.assert_allclose(out, [0.0, -1.0, 0.0], atol=1e-12)

    def test_bloch_action_faithful(self):
        rng = np.random.default_rng(0)
        worst = 0.0
        for _ in range(100):
            o = random_rotation(rng)
            u = rotation_to_unitary(o)
            for _ in range(5):
                b = random_bloch_in_ball(rng)
                rho = state_from_bloch(b)
                out = bloch_from_state(u @ rho @ u.conj().T)
                worst = max(worst, float(np.abs(out - o @ b).max()))
        assert worst <= 1e-8

    def test_rejects_reflections(self):
        with pytest.raises(DomainError):
            rotation_to_unitary(np.diag([1.0, 1.0, -1.0]))

    def test_rejects_non_orthogonal(self):
        with pytest.raises(DomainError):
            rotation_to_unitary(np.eye(3) * 1.1)


class TestDzCondition:
    def test_sx_negates_sign(self):
        holds, detail = dz_condition_report(unitary_conj_map(PAULI[1], "sx"))
        assert holds and detail["sign"] == -1

    def test_z_rotation_keeps_sign(self):
        holds, detail = dz_condition_report(unitary_conj_map(z_phase_unitary(0.8), "zrot"))
        assert holds and detail["sign"] == +1

    def test_quarter_x_rotation_fails(self):
        assert not satisfies_dz_condition(orthogonal_bloch_map(rot_x(math.pi / 2), "xr"))

    def test_radial_shrink_fails_on_length(self):
        holds, detail = dz_condition_report(bloch_self_map(lambda b: 0.5 * b, "shrink"))
        assert not holds and detail["reason"] == "bloch-length-changed"


class TestCheckIsometry:
    def test_unitary_conjugation_preserves_dsym(self):
        u = random_unitary(derived_rng(1, 0))
        report = check_isometry(unitary_conj_map(u, "u"), "D_sym", n_samples=8, seed=2)
        assert report.verdict == "isometry_within_tol"
        assert report.max_abs_deviation <= 1e-6

    def test_z_phase_field_preserves_dz(self):
        def t_fn(rho):
            b = bloch_from_state(rho)
            return 0.4 + 1.3 * b[2] + 0.7 * float(b @ b)

        report = check_isometry(z_phase_field_map(t_fn, "field"), "D_z", n_samples=8, seed=3)
        assert report.verdict == "isometry_within_tol"

    def test_discontinuous_phase_field_still_dz_isometry(self):
        report = check_isometry(discontinuous_z_phase_field_map(), "D_z", n_samples=8, seed=4)
        assert report.verdict == "isometry_within_tol"

    def test_length_changing_swap_violates_dz(self):
        def fn(b):
            swapped = np.array([b[1], b[0], b[2]])
            return 0.6 * swapped

        report = check_isometry(bloch_self_map(fn, "swap+shrink"), "D_z", n_samples=8, seed=5)
        assert report.verdict == "violated"
        assert report.witness_pair is not None
        rho, omega, dev = report.witness_pair
        assert dev > 1e-5

    def test_unknown_metric(self):
        with pytest.raises(DomainError):
            check_isometry(unitary_conj_map(np.eye(2), "id"), "D_xz")


class TestWignerClosure:
    def test_compositions_remain_dsym_isometries(self):
        rng = derived_rng(6, 0)
        u1, u2 = random_unitary(rng), random_unitary(rng)
        # antiunitary(u2) after unitary(u1) is antiunitary with u2 conj(u1)
        composite = antiunitary_conj_map(u2 @ u1.conj(), "antiunitary-after-unitary")
        direct_then = check_isometry(composite, "d_sym", n_samples=8, seed=7)
        assert direct_then.verdict == "isometry_within_tol"
        # two antiunitaries compose to a unitary
        composite2 = unitary_conj_map(u1 @ u2.conj(), "two-antiunitaries")
        assert (
            check_isometry(composite2, "d_sym", n_samples=8, seed=8).verdict
            == "isometry_within_tol"
        )


class TestCrosscheck:
    @pytest.mark.parametrize("family", sorted(MAP_FAMILIES))
    def test_families_agree(self, family):
        report = theorem_crosscheck_dz(MAP_FAMILIES[family], n_maps=8, n_samples=8, seed=9)
        assert report.all_agree, report.disagreements

    def test_adversarial_produce_witnesses(self):
        report = theorem_crosscheck_dz(MAP_FAMILIES["adversarial"], n_maps=8, n_samples=8, seed=10)
        for r in report.per_map:
            assert r.isometry_verdict == "violated"
            assert not r.condition_holds
            assert r.witness is not None


class TestDiameter:
    def test_sampled_pairs_within_diameter(self):
        rng = np.random.default_rng(11)
        c = z_cost()
        worst = 0.0
        for _ in range(200):
            rho = state_from_bloch(random_bloch_in_ball(rng))
            omega = state_from_bloch(random_bloch_in_ball(rng))
            val = solve_min_coupling(rho, omega, c).optimal_value
            worst = max(worst, val)
        assert worst <= 4.0 + 1e-9

    def test_wigner_map_sampler_runs(self):
        m = sample_wigner_map(derived_rng(12, 0))
        assert m.kind in ("unitary_conj", "antiunitary_conj")
