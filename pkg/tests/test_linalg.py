"""Unit tests for the 2x2/4x4 linear algebra layer."""

import numpy as np
import pytest

from qwasser.errors import ContractViolation
from qwasser.linalg import (
    bra_cost_ket,
    eig_hermitian,
    partial_trace_first,
    partial_trace_second,
    sqrt_psd,
    tensor,
    transpose_op,
    vec,
)
from qwasser.states import PAULI

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)

C_SYM = np.array(
    [[4, 0, 0, -4], [0, 8, 0, 0], [0, 0, 8, 0], [-4, 0, 0, 4]], dtype=complex
)
C_Z = np.diag([0.0, 4.0, 4.0, 0.0]).astype(complex)


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (m + m.conj().T)


def random_psd2(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return m @ m.conj().T


class TestTensor:
    def test_identity(self):
        assert np.array_equal(tensor(I2, I2), I4)

    def test_sz_sz(self):
        assert np.array_equal(tensor(PAULI[3], PAULI[3]), np.diag([1.0, -1.0, -1.0, 1.0]))

    def test_sx_identity_entrywise(self):
        # direct expansion of the row-major convention
        expected = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    for l in range(2):
                        expected[2 * i + k, 2 * j + l] = PAULI[1][i, j] * I2[k, l]
        assert np.array_equal(tensor(PAULI[1], I2), expected)

    def test_dimension_mismatch(self):
        with pytest.raises(ContractViolation):
            tensor(I4, I2)


class TestTransposeOp:
    def test_sy_antisymmetric(self):
        assert np.array_equal(transpose_op(PAULI[2]), -PAULI[2])

    def test_sz_diagonal(self):
        assert np.array_equal(transpose_op(PAULI[3]), PAULI[3])

    def test_sx_symmetric(self):
        assert np.array_equal(transpose_op(PAULI[1]), PAULI[1])


class TestPartialTraces:
    def test_product_factorization(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            a, b = random_hermitian(rng, 2), random_hermitian(rng, 2)
            m = tensor(a, b)
            np.testing.assert_allclose(partial_trace_second(m), a * np.trace(b), atol=1e-12)
            np.testing.assert_allclose(partial_trace_first(m), b * np.trace(a), atol=1e-12)

    def test_identity(self):
        np.testing.assert_allclose(partial_trace_second(I4), 2 * I2)
        np.testing.assert_allclose(partial_trace_first(I4), 2 * I2)

    def test_c_sym_partial_trace(self):
        # termwise: sum_j (s_j^2 tr I + I tr s_j^2 - 2 s_j tr s_j) = 12 I
        termwise = sum(
            PAULI[j] @ PAULI[j] * 2 + I2 * np.trace(PAULI[j] @ PAULI[j]) - 2 * PAULI[j] * np.trace(PAULI[j])
            for j in (1, 2, 3)
        )
        np.testing.assert_allclose(termwise, 12 * I2, atol=1e-12)
        np.testing.assert_allclose(partial_trace_second(C_SYM), 12 * I2, atol=1e-12)

    def test_trace_consistency(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            t1 = np.trace(partial_trace_first(m))
            t2 = np.trace(partial_trace_second(m))
            assert abs(t1 - np.trace(m)) < 1e-12
            assert abs(t2 - np.trace(m)) < 1e-12


class TestEigHermitian:
    def test_sz(self):
        w, _ = eig_hermitian(PAULI[3])
        np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-14)

    def test_c_z_spectrum(self):
        w, _ = eig_hermitian(C_Z)
        np.testing.assert_allclose(w, [0.0, 0.0, 4.0, 4.0], atol=1e-12)

    def test_c_sym_spectrum(self):
        w, _ = eig_hermitian(C_SYM)
        np.testing.assert_allclose(w, [0.0, 8.0, 8.0, 8.0], atol=1e-12)

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(2)
        for k in range(1000):
            dim = 2 if k % 2 else 4
            m = random_hermitian(rng, dim)
            w, v = eig_hermitian(m)
            assert np.all(np.diff(w) >= -1e-14)
            recon = (v * w) @ v.conj().T
            norm = np.linalg.norm(m)
            assert np.linalg.norm(m - recon) <= 1e-10 * (1 + norm)
            assert np.abs(v.conj().T @ v - np.eye(dim)).max() <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(ContractViolation):
            eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestSqrtPsd:
    def test_maximally_mixed(self):
        np.testing.assert_allclose(sqrt_psd(I2 / 2), I2 / np.sqrt(2), atol=1e-14)

    def test_pure_state_idempotent(self):
        rho = 0.5 * (I2 + PAULI[1])
        np.testing.assert_allclose(sqrt_psd(rho), rho, atol=1e-12)

    def test_half_z_state(self):
        rho = 0.5 * (I2 + 0.5 * PAULI[3])
        lam = 0.75
        plus = 0.5 * (I2 + PAULI[3])
        minus = 0.5 * (I2 - PAULI[3])
        expected = np.sqrt(lam) * plus + np.sqrt(1 - lam) * minus
        np.testing.assert_allclose(sqrt_psd(rho), expected, atol=1e-12)
        np.testing.assert_allclose(sqrt_psd(rho) @ sqrt_psd(rho), rho, atol=1e-12)

    def test_square_back_random(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            m = random_psd2(rng)
            s = sqrt_psd(m)
            assert np.linalg.norm(s @ s - m) <= 1e-10 * (1 + np.linalg.norm(m))

    def test_rejects_negative(self):
        with pytest.raises(ContractViolation):
            sqrt_psd(np.diag([1.0, -1e-6]))


class TestVecAndBraKet:
    def test_pauli_orthogonality(self):
        for i in range(4):
            for j in range(4):
                inner = np.vdot(vec(PAULI[i]), vec(PAULI[j]))
                assert inner == (2.0 if i == j else 0.0)

    def test_bra_cost_ket_sx(self):
        assert bra_cost_ket(PAULI[1], C_Z) == pytest.approx(8.0, abs=1e-12)

    def test_bra_cost_ket_identity_kernel(self):
        assert bra_cost_ket(I2 / np.sqrt(2), C_Z) == pytest.approx(0.0, abs=1e-12)

    def test_bra_cost_ket_sz(self):
        assert bra_cost_ket(PAULI[3], C_Z) == pytest.approx(0.0, abs=1e-12)
