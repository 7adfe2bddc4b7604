"""The bundled seven-qubit product basis and its bound entangled state.

Eleven mutually orthogonal product vectors on seven qubits that no further
product vector is orthogonal to.  The normalized projector onto their
orthogonal complement is a state of rank 117 = 2**7 - 11 that stays
positive under partial transposition across every bipartition yet carries
entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .linalg import DEFAULT_TOL, Tolerances, hermitian_eigen
from .uom import ConcreteProductSet, N_COLS

N_QUBITS = 7
DIM = 2**N_QUBITS
N_VECTORS = 11
COMPLEMENT_RANK = DIM - N_VECTORS

# Single-qubit states used by the bundled basis.  Lowercase letters are
# (|0> + c|1>)/norm for c in {1, sqrt(2), sqrt(3), 2}; the uppercase letter
# is the orthogonal partner of its lowercase one.
_R2, _R3, _R5 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(5.0)
_KETS = {
    "0": np.array([1.0, 0.0]),
    "1": np.array([0.0, 1.0]),
    "p": np.array([1.0, 1.0]) / _R2,
    "P": np.array([1.0, -1.0]) / _R2,
    "q": np.array([1.0, _R2]) / _R3,
    "Q": np.array([_R2, -1.0]) / _R3,
    "r": np.array([1.0, _R3]) / 2.0,
    "R": np.array([_R3, -1.0]) / 2.0,
    "s": np.array([1.0, 2.0]) / _R5,
    "S": np.array([2.0, -1.0]) / _R5,
}

# One row per product vector, one code letter per qubit.
_UPB_CODES = (
    "0000000",
    "0+++1++",
    "1+0q+qq",
    "10+rqrQ",
    "+1q-rQr",
    "+10Qs-R",
    "-q-s-1s",
    "-Q-Qss1",
    "qQ1RRS-",
    "qq1SQ-R",
    "Q-Q1SRS",
)
_ALIASES = {"+": "p", "-": "P"}


def builtin_upb() -> ConcreteProductSet:
    """The bundled unextendible product basis, one singleton block per qubit."""
    vectors = tuple(
        tuple(_KETS[_ALIASES.get(ch, ch)].copy() for ch in row)
        for row in _UPB_CODES
    )
    blocks = tuple((s,) for s in range(1, N_COLS + 1))
    return ConcreteProductSet(blocks, vectors)


def projector_from_set(
    pset: ConcreteProductSet, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Orthogonal projector onto the span of a product set's global vectors.

    Raises if the vectors are not orthonormal within ``tol.orthogonality``.
    """
    m = pset.global_matrix()
    gram = m.conj() @ m.T
    if np.abs(gram - np.eye(pset.n_vectors)).max() > tol.orthogonality:
        raise ValueError("product set is not orthonormal within tolerance")
    return m.T @ m.conj()


def build_state(pset: ConcreteProductSet, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Normalized projector onto the orthogonal complement of the set's span."""
    q = projector_from_set(pset, tol)
    d = q.shape[0]
    return (np.eye(d) - q) / (d - pset.n_vectors)


def partial_transpose(rho: np.ndarray, subset, n_qubits: int = N_QUBITS) -> np.ndarray:
    """Partial transpose of a multi-qubit operator on the given systems.

    Systems are 1-based with system 1 the slowest tensor index.  Applying
    the same transpose twice returns the input exactly.
    """
    d = 2**n_qubits
    rho = np.asarray(rho)
    if rho.shape != (d, d):
        raise ValueError(f"expected a {d} x {d} operator")
    subset = sorted(set(subset))
    if any(not 1 <= s <= n_qubits for s in subset):
        raise ValueError("subset must name systems between 1 and n_qubits")
    t = rho.reshape((2,) * (2 * n_qubits))
    axes = list(range(2 * n_qubits))
    for s in subset:
        axes[s - 1], axes[s - 1 + n_qubits] = axes[s - 1 + n_qubits], axes[s - 1]
    return t.transpose(axes).reshape(d, d)


def canonical_cuts(n_qubits: int = N_QUBITS) -> list:
    """All 63 bipartitions of the systems, as the side containing system 1."""
    rest = range(2, n_qubits + 1)
    cuts = []
    for k in range(n_qubits):
        for extra in combinations(rest, k):
            cut = (1,) + extra
            if len(cut) < n_qubits:
                cuts.append(cut)
    return cuts


@dataclass(frozen=True)
class PPTReport:
    """Minimum partial-transpose eigenvalue for every canonical bipartition."""

    cuts: tuple
    minima: tuple
    tolerance: float

    @property
    def minimum(self) -> float:
        return min(self.minima)

    @property
    def is_ppt(self) -> bool:
        return self.minimum >= -self.tolerance

    def as_records(self) -> list:
        return [
            {"cut": "".join(str(s) for s in c), "lambda_min": v}
            for c, v in zip(self.cuts, self.minima)
        ]


def ppt_report(rho: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> PPTReport:
    """Check positivity of the partial transpose across all canonical cuts."""
    cuts = canonical_cuts()
    minima = []
    for cut in cuts:
        w, _ = hermitian_eigen(partial_transpose(rho, cut), tol)
        minima.append(float(w[0]))
    return PPTReport(tuple(cuts), tuple(minima), tol.psd)


def state_diagnostics(rho: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Trace, rank and spectrum summary of a Hermitian operator."""
    w, _ = hermitian_eigen(rho, tol)
    rank = int(np.sum(w > tol.orthogonality))
    return {
        "trace": float(np.real(np.trace(rho))),
        "rank": rank,
        "eigenvalue_min": float(w[0]),
        "eigenvalue_max": float(w[-1]),
        "spectrum": [float(x) for x in w],
    }


def write_state_csv(rho: np.ndarray, path) -> None:
    """Row-major CSV dump with interleaved real and imaginary cell parts."""
    rho = np.asarray(rho, dtype=complex)
    with open(path, "w") as fh:
        for row in rho:
            cells = []
            for z in row:
                cells.append(repr(float(z.real)))
                cells.append(repr(float(z.imag)))
            fh.write(",".join(cells) + "\n")
