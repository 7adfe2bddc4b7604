"""Dense linear algebra helpers for few-qubit product-state problems."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared across the package.

    All comparisons in the library route through one of these fields so a
    single record controls the numerics end to end.
    """

    orthogonality: float = 1e-10
    psd: float = 1e-10
    eigen_reconstruction: float = 1e-9
    unit_norm: float = 1e-12
    hermiticity: float = 1e-12
    zero_det: float = 1e-9
    rank: float = 1e-9
    witness: float = 1e-8
    gradient: float = 1e-4


DEFAULT_TOL = Tolerances()


def canonical_angle(t: float) -> float:
    """Reduce an angle to the fundamental domain [0, 2*pi)."""
    t = float(t)
    if not np.isfinite(t):
        raise ValueError("angle must be finite")
    return t % TWO_PI


def qubit_from_angle(t: float) -> np.ndarray:
    """Real qubit state (sin t, cos t); t = 0 gives the basis vector (0, 1)."""
    return np.array([np.sin(t), np.cos(t)])


def complement(v: np.ndarray) -> np.ndarray:
    """Orthogonal partner of a qubit state: (a, b) -> (-b*, a*).

    Applying it twice returns the negative of the input.
    """
    v = np.asarray(v)
    if v.shape != (2,):
        raise ValueError("complement is defined for single-qubit vectors")
    return np.array([-np.conj(v[1]), np.conj(v[0])])


def tensor(factors) -> np.ndarray:
    """Kronecker product of a sequence of vectors, first factor slowest."""
    factors = list(factors)
    if not factors:
        raise ValueError("tensor of an empty sequence")
    return reduce(np.kron, factors)


def hermitian_eigen(h: np.ndarray, tol: Tolerances = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues ascending and
    eigenvectors as columns.  Raises if the input is not Hermitian within
    ``tol.hermiticity``.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, np.abs(h).max())
    if np.abs(h - h.conj().T).max() > tol.hermiticity * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    return w, v


def _det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def det4(m: np.ndarray):
    """Determinant of a 4x4 matrix by cofactor expansion along the first row."""
    m = np.asarray(m)
    if m.shape != (4, 4):
        raise ValueError("det4 expects a 4x4 matrix")
    rows = m.tolist()
    total = 0.0
    sign = 1.0
    for j in range(4):
        minor = [[rows[i][k] for k in range(4) if k != j] for i in (1, 2, 3)]
        total = total + sign * rows[0][j] * _det3(minor)
        sign = -sign
    return total


def null_space(m: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the kernel of ``m`` as columns of a (d, k) array.

    Rank is counted as the number of singular values above ``atol``, so the
    kernel dimension is ``d - rank``.
    """
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError("expected a matrix")
    if m.shape[0] == 0:
        return np.eye(m.shape[1])
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    rank = int(np.sum(s > atol))
    return vh[rank:].conj().T
