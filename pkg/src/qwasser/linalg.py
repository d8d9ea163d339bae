"""Dense complex linear algebra on 2x2 and 4x4 matrices.

Conventions fixed here and relied on by every other module:

* ``tensor(a, b)[2*i + k, 2*j + l] = a[i, j] * b[k, l]`` (row-major Kronecker),
* ``vec`` flattens row-major, so ``vec(a @ x @ b) = tensor(a, transpose_op(b)) @ vec(x)``
  and ``vec(x)^dag vec(y) = tr[x^dag y]``,
* dual-space objects are plain entrywise transposes in the computational basis.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractViolation, InternalConsistencyError

HERMITIAN_TOL = 1e-12
PSD_CLAMP = 1e-10


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def hermiticity_defect(m: np.ndarray) -> float:
    """max_ij |m[i,j] - conj(m[j,i])|."""
    return float(np.abs(m - m.conj().T).max())


def require_square(m, dims=(2, 4), what: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in dims:
        raise ContractViolation(
            f"{what}: expected a square matrix with dimension in {dims}, got shape {m.shape}"
        )
    return m


def require_hermitian(m, tol: float = HERMITIAN_TOL, what: str = "matrix") -> np.ndarray:
    m = require_square(m, (2, 4), what)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise ContractViolation(f"{what}: not Hermitian (defect {defect:.3e} > {tol:.1e})")
    return m


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 matrices in the row-major convention."""
    a = require_square(a, (2,), "tensor: first factor")
    b = require_square(b, (2,), "tensor: second factor")
    return np.kron(a, b)


def transpose_op(a) -> np.ndarray:
    """Entrywise transpose (no conjugation) in the computational basis."""
    return require_square(a, (2, 4), "transpose_op").T.copy()


def partial_trace_second(m) -> np.ndarray:
    """Trace out the second tensor factor: out[i,j] = sum_k m[2i+k, 2j+k]."""
    m = require_square(m, (4,), "partial_trace_second")
    return np.einsum("ikjk->ij", m.reshape(2, 2, 2, 2))


def partial_trace_first(m) -> np.ndarray:
    """Trace out the first tensor factor: out[k,l] = sum_i m[2i+k, 2i+l]."""
    m = require_square(m, (4,), "partial_trace_first")
    return np.einsum("ikil->kl", m.reshape(2, 2, 2, 2))


def eig_hermitian(m, tol: float = HERMITIAN_TOL):
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix."""
    m = require_hermitian(m, tol, "eig_hermitian")
    w, v = np.linalg.eigh(m)
    return w, v


def sqrt_psd(m) -> np.ndarray:
    """Hermitian PSD square root of a 2x2 PSD matrix.

    Eigenvalues in [-PSD_CLAMP, 0) are treated as roundoff and clamped to zero;
    anything more negative is a contract violation.
    """
    m = require_square(m, (2,), "sqrt_psd")
    w, v = eig_hermitian(m)
    if w[0] < -PSD_CLAMP:
        raise ContractViolation(f"sqrt_psd: eigenvalue {w[0]:.3e} below -{PSD_CLAMP:.1e}")
    s = np.sqrt(np.maximum(w, 0.0))
    return (v * s) @ v.conj().T


def vec(x) -> np.ndarray:
    """Row-major flattening of a 2x2 operator into a length-4 vector."""
    x = require_square(x, (2,), "vec")
    return x.reshape(-1)


def bra_cost_ket(x, c) -> float:
    """vec(x)^dag @ c @ vec(x); must be real for Hermitian c."""
    v = vec(x)
    c = require_square(c, (4,), "bra_cost_ket: cost")
    val = complex(np.vdot(v, c @ v))
    if abs(val.imag) > 1e-8:
        raise InternalConsistencyError(f"bra_cost_ket: imaginary part {val.imag:.3e}")
    return float(val.real)
