"""Qubit states, Bloch-ball coordinates, and the Pauli constants."""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .linalg import HERMITIAN_TOL, hermiticity_defect, require_square

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)

#: default tolerance on | |b| - 1 | separating pure from mixed
PURITY_TOL = 1e-8
#: Bloch norms in (1, 1 + BLOCH_CLAMP] are radially clamped; beyond is rejected
BLOCH_CLAMP = 1e-6
#: smallest admissible eigenvalue of a state matrix
STATE_EIG_FLOOR = -1e-10

NAMED_BLOCH = {
    "plus_z": (0.0, 0.0, 1.0),
    "minus_z": (0.0, 0.0, -1.0),
    "plus_x": (1.0, 0.0, 0.0),
    "plus_y": (0.0, 1.0, 0.0),
    "maximally_mixed": (0.0, 0.0, 0.0),
}


def pauli(j: int) -> np.ndarray:
    """Pauli matrix sigma_j; j = 0 gives the identity."""
    if j not in (0, 1, 2, 3):
        raise DomainError(f"pauli: index must be in 0..3, got {j!r}")
    return PAULI[j].copy()


def state_from_bloch(b) -> np.ndarray:
    """Density matrix (I + b . sigma) / 2 for a point b of the closed unit ball."""
    b = np.asarray(b, dtype=float)
    if b.shape != (3,):
        raise DomainError(f"state_from_bloch: expected 3 real coordinates, got shape {b.shape}")
    norm = float(np.linalg.norm(b))
    if norm > 1.0 + BLOCH_CLAMP:
        raise DomainError(f"state_from_bloch: Bloch norm {norm:.12g} outside the unit ball")
    if norm > 1.0:
        b = b / norm
    return 0.5 * (PAULI[0] + b[0] * PAULI[1] + b[1] * PAULI[2] + b[2] * PAULI[3])


def bloch_from_state(rho) -> np.ndarray:
    """Pauli expectation values (tr[sigma_j rho])_{j=1..3}."""
    rho = np.asarray(rho, dtype=complex)
    return np.array(
        [2.0 * rho[1, 0].real, 2.0 * rho[1, 0].imag, (rho[0, 0] - rho[1, 1]).real]
    )


def validate_state(m, what: str = "state") -> np.ndarray:
    """Check Hermiticity, unit trace, and positivity; return the matrix."""
    m = require_square(m, (2,), what)
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        raise DomainError(f"{what}: not Hermitian (defect {defect:.3e})")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > 1e-12:
        raise DomainError(f"{what}: trace {tr:.15g} is not 1")
    w = np.linalg.eigvalsh(m)
    if w[0] < STATE_EIG_FLOOR:
        raise DomainError(f"{what}: negative eigenvalue {w[0]:.3e}")
    return m


def is_pure(rho, tol: float = PURITY_TOL) -> bool:
    """True iff the Bloch vector has unit length within tol."""
    b = bloch_from_state(np.asarray(rho, dtype=complex))
    return abs(float(np.linalg.norm(b)) - 1.0) <= tol


def named_state(name: str) -> np.ndarray:
    """One of the distinguished states: plus_z, minus_z, plus_x, plus_y, maximally_mixed."""
    if name not in NAMED_BLOCH:
        raise DomainError(f"unknown named state {name!r}; choose from {sorted(NAMED_BLOCH)}")
    return state_from_bloch(NAMED_BLOCH[name])
