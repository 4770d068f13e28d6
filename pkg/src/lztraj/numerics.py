"""Small dense linear algebra for two-level systems.

States are complex128 arrays of shape (2,), operators of shape (2, 2).
Everything here is specialized to dimension 2 on purpose; the closed-form
eigenvalue formulas below are exact and branch-free.
"""

from __future__ import annotations

import numpy as np

IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
# Basis ordering is (|e>, |g>): sigma_minus maps |e> to |g>.
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=np.complex128)

KET_E = np.array([1.0, 0.0], dtype=np.complex128)
KET_G = np.array([0.0, 1.0], dtype=np.complex128)


def dagger(op: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return op.conj().T


def matvec(op: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Apply a 2x2 operator to a state vector."""
    return op @ vec


def expectation(op: np.ndarray, phi: np.ndarray) -> complex:
    """<phi|op|phi> for a (not necessarily normalized) state."""
    return complex(np.vdot(phi, op @ phi))


def outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """|a><b|."""
    return np.outer(a, b.conj())


def norm(phi: np.ndarray) -> float:
    """Euclidean norm of a state vector."""
    return float(np.sqrt(np.vdot(phi, phi).real))


def hermiticity_defect(op: np.ndarray) -> float:
    """Largest absolute entry of op - op^dagger."""
    return float(np.abs(op - op.conj().T).max())


def herm_eigvals(op: np.ndarray) -> tuple[float, float]:
    """Eigenvalues (low, high) of a Hermitian 2x2 matrix, closed form.

    For H = [[a, c], [c*, b]] the eigenvalues are m -+ r with
    m = (a + b)/2 and r = sqrt((a - b)^2/4 + |c|^2).
    """
    a = op[0, 0].real
    b = op[1, 1].real
    c = op[0, 1]
    m = 0.5 * (a + b)
    r = np.hypot(0.5 * (a - b), abs(c))
    return float(m - r), float(m + r)


def herm_norm(op: np.ndarray) -> float:
    """Spectral norm of a Hermitian 2x2 matrix."""
    lo, hi = herm_eigvals(op)
    return max(abs(lo), abs(hi))


def trace_distance(rho: np.ndarray, sigma: np.ndarray, herm_tol: float = 1e-8) -> float:
    """Trace distance (1/2)*sum |eig(rho - sigma)| between density matrices.

    Rejects inputs whose Hermiticity defect exceeds herm_tol; callers are
    expected to hand in honest density matrices, not arbitrary operators.
    """
    for name, op in (("rho", rho), ("sigma", sigma)):
        defect = hermiticity_defect(op)
        if not np.isfinite(defect) or defect > herm_tol:
            raise ValueError(f"{name} is not Hermitian within {herm_tol:g} (defect {defect:g})")
    lo, hi = herm_eigvals(rho - sigma)
    return 0.5 * (abs(lo) + abs(hi))


def density_checks(rho: np.ndarray) -> tuple[float, float, float]:
    """Return (hermiticity defect, |trace - 1|, most negative eigenvalue).

    The third entry is min(eig, 0), i.e. 0 for a positive semidefinite matrix.
    """
    defect = hermiticity_defect(rho)
    tr_err = abs(complex(rho[0, 0] + rho[1, 1]) - 1.0)
    sym = 0.5 * (rho + rho.conj().T)
    lo, _ = herm_eigvals(sym)
    return defect, float(tr_err), min(lo, 0.0)
