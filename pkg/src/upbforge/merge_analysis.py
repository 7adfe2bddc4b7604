"""Classification of merged-system product bases.

Given a concrete set of eleven orthogonal product vectors on seven qubits,
merging systems into blocks may or may not destroy unextendibility.  The
tools here decide that question: column-pair determinant analysis locates
row quadruples that become linearly dependent after a merge, a structural
search either constructs a product vector orthogonal to all eleven rows
(a witness of extendibility) or exhausts, and a multistart alternating
minimizer bounds the smallest achievable total overlap.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

import numpy as np

from .linalg import DEFAULT_TOL, Tolerances, complement, det4, null_space
from .uom import (
    ConcreteProductSet,
    Partition,
    SymbolicUOM,
    instantiate_entry,
    N_ROWS,
)

# Row quadruple whose determinant the closed form below evaluates.
CLOSED_FORM_QUADRUPLE = (1, 3, 5, 11)


@dataclass(frozen=True)
class PairSubmatrix:
    """The 11 x 2 slice of a symbolic grid at two grid positions."""

    columns: tuple
    rows: tuple

    @property
    def symbols(self) -> set:
        return {(e.column, e.symbol_id) for pair in self.rows for e in pair}


def pair_submatrix(u: SymbolicUOM, positions) -> PairSubmatrix:
    """Extract the two-column slice of ``u`` at the given 1-based positions."""
    c1, c2 = positions
    if c1 == c2:
        raise ValueError("positions must be distinct")
    rows = tuple((u.entry(r, c1), u.entry(r, c2)) for r in range(1, N_ROWS + 1))
    return PairSubmatrix((c1, c2), rows)


def quadruple_matrix(
    sub: PairSubmatrix, quadruple, assignment: Mapping
) -> np.ndarray:
    """4 x 4 matrix whose rows are the merged two-qubit vectors of a quadruple.

    Each row is the Kronecker product of the two instantiated entries, first
    column slowest.  Rows are 1-based and must be distinct.
    """
    if len(set(quadruple)) != 4:
        raise ValueError("quadruple must contain four distinct rows")
    rows = []
    for r in quadruple:
        if not 1 <= r <= N_ROWS:
            raise ValueError(f"row out of range: {r}")
        e1, e2 = sub.rows[r - 1]
        rows.append(
            np.kron(
                instantiate_entry(e1, assignment),
                instantiate_entry(e2, assignment),
            )
        )
    return np.array(rows)


def closed_form_quadruple_det(a1, a2, a3, b1, b2):
    """Determinant of rows (1, 3, 5, 11) of the first column pair, closed form.

    Matches ``det4`` of :func:`quadruple_matrix` for that quadruple with
    column-1 angles (a1, a2, a3) and column-2 angles (b1, b2).
    """
    return -0.25 * (
        np.cos(2.0 * a1 - a2 - a3)
        + 3.0 * np.cos(a2 - a3)
        + 2.0 * np.cos(2.0 * (b1 - b2)) * np.sin(a1 - a2) * np.sin(a1 - a3)
    )


def closed_form_det_roots(
    a1: float, a2: float, a3: float, b1: float, n_grid: int = 10_000,
    tol: float = 1e-10,
) -> np.ndarray:
    """Roots in b2 of the closed-form determinant over [0, 2*pi).

    Scans a uniform grid of ``n_grid`` points, brackets sign changes and
    refines each bracket by bisection to width ``tol``.
    """

    def f(b2):
        return closed_form_quadruple_det(a1, a2, a3, b1, b2)

    grid = np.linspace(0.0, 2.0 * np.pi, n_grid + 1)
    vals = f(grid)
    roots = []
    for k in range(n_grid):
        lo, hi = grid[k], grid[k + 1]
        flo, fhi = vals[k], vals[k + 1]
        if flo == 0.0:
            roots.append(lo)
            continue
        if flo * fhi >= 0.0:
            continue
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            fmid = f(mid)
            if fmid == 0.0:
                lo = hi = mid
                break
            if flo * fmid < 0.0:
                hi = mid
            else:
                lo, flo = mid, fmid
        roots.append(0.5 * (lo + hi))
    out = []
    for r in sorted(r % (2.0 * np.pi) for r in roots):
        if not out or r - out[-1] > 10.0 * tol:
            out.append(r)
    return np.array(out)


@dataclass(frozen=True)
class QuadrupleClassification:
    """Which row quadruples of a column pair have identically zero determinant.

    A quadruple is recorded as zero when its determinant stays below
    ``tolerance`` at every one of ``samples`` random angle assignments.
    """

    columns: tuple
    zero_quadruples: frozenset
    samples: int
    tolerance: float

    def sorted_quadruples(self) -> list:
        return sorted(self.zero_quadruples)


def classify_zero_quadruples(
    sub: PairSubmatrix,
    samples: int = 20,
    tol: float = DEFAULT_TOL.zero_det,
    rng: np.random.Generator | None = None,
) -> QuadrupleClassification:
    """Scan all 330 row quadruples of a column pair for vanishing determinants."""
    if samples < 10:
        raise ValueError("need at least 10 samples for a stable verdict")
    if rng is None:
        rng = np.random.default_rng()
    symbols = sorted(sub.symbols)
    quads = list(combinations(range(1, N_ROWS + 1), 4))
    worst = {q: 0.0 for q in quads}
    for _ in range(samples):
        assignment = {s: rng.uniform(0.0, 2.0 * np.pi) for s in symbols}
        merged = [
            np.kron(
                instantiate_entry(e1, assignment),
                instantiate_entry(e2, assignment),
            )
            for e1, e2 in sub.rows
        ]
        for q in quads:
            d = abs(det4(np.array([merged[r - 1] for r in q])))
            if d > worst[q]:
                worst[q] = d
    zero = frozenset(q for q in quads if worst[q] <= tol)
    return QuadrupleClassification(sub.columns, zero, samples, tol)


def zero_quintuples(c: QuadrupleClassification) -> frozenset:
    """Row quintuples all of whose quadruples vanish identically."""
    out = set()
    for q in combinations(range(1, N_ROWS + 1), 5):
        if all(sub in c.zero_quadruples for sub in combinations(q, 4)):
            out.add(q)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Witness search


class SearchBudgetExceeded(RuntimeError):
    """The structural witness search ran out of its node budget."""


@dataclass(frozen=True)
class Witness:
    """A product vector orthogonal to every row of a merged product set."""

    partition: Partition
    block_vectors: tuple
    residuals: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max())


def _overlap_rows(block_vectors, factors):
    """Per-row absolute overlaps of a product vector with every row."""
    m = len(factors)
    res = np.ones(m)
    for b, w in enumerate(block_vectors):
        for i in range(m):
            res[i] *= abs(np.vdot(w, factors[i][b]))
    return res


def _parallel_classes(vectors, tol=1e-9):
    """Group unit vectors into classes of pairwise parallel ones."""
    classes = []
    for i, v in enumerate(vectors):
        for cls in classes:
            if abs(np.vdot(vectors[cls[0]], v)) >= 1.0 - tol:
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


def find_witness(
    pset: ConcreteProductSet,
    partition: Partition,
    budget: int = 1_000_000,
    tol: Tolerances = DEFAULT_TOL,
    refine_starts: int = 16,
    rng: np.random.Generator | None = None,
):
    """Search for a product vector orthogonal to all rows under a partition.

    The search assigns every row to a block that annihilates it: a
    two-dimensional block can only annihilate one parallel class of its
    column, while a larger block of dimension d can absorb any row set
    whose vectors span at most d - 1 dimensions (solved by a null-space
    vector).  All class choices and row assignments are enumerated, most
    annihilating first.

    Returns a :class:`Witness`, or None once the enumeration (plus a short
    alternating-minimization refinement) exhausts without one.  Raises
    :class:`SearchBudgetExceeded` when more than ``budget`` assignments
    would be examined, which is distinct from a no-witness verdict.
    """
    if partition.n_blocks < 2:
        raise ValueError("witness search needs at least two blocks")
    merged = pset.merge(partition)
    m = merged.n_vectors
    factors = [[np.asarray(v) for v in row] for row in merged.vectors]
    dims = merged.block_dims
    full_mask = (1 << m) - 1

    qubit_blocks = [b for b, d in enumerate(dims) if d == 2]
    big_blocks = [b for b, d in enumerate(dims) if d > 2]

    # Candidate annihilation choices per qubit block: one parallel class
    # (vector fixed up to phase) or nothing.
    options = []
    for b in qubit_blocks:
        col = [factors[i][b] for i in range(m)]
        classes = _parallel_classes(col)
        classes.sort(key=len, reverse=True)
        opts = []
        for cls in classes:
            mask = 0
            for i in cls:
                mask |= 1 << i
            opts.append((mask, complement(col[cls[0]])))
        opts.append((0, None))
        options.append(opts)

    nodes = 0
    rank_cache: dict = {}

    def spend():
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(
                f"witness search exceeded {budget} nodes"
            )

    def feasible(b, mask):
        """Rows in ``mask`` leave a null direction in block ``b``."""
        key = (b, mask)
        if key not in rank_cache:
            rows = [factors[i][b] for i in range(m) if mask >> i & 1]
            if len(rows) < dims[b]:
                rank_cache[key] = True
            else:
                s = np.linalg.svd(np.array(rows), compute_uv=False)
                rank_cache[key] = bool(s[dims[b] - 1] <= tol.rank)
        return rank_cache[key]

    def split_leftover(idx, rows_left, assigned):
        """Assign leftover rows to big blocks, pruning infeasible prefixes."""
        if idx == len(rows_left):
            return dict(assigned)
        row = rows_left[idx]
        for b in big_blocks:
            spend()
            trial = assigned[b] | (1 << row)
            if feasible(b, trial):
                assigned[b] = trial
                found = split_leftover(idx + 1, rows_left, assigned)
                if found is not None:
                    return found
                assigned[b] = trial & ~(1 << row)
        return None

    def build(choice, big_assignment):
        vectors = [None] * len(dims)
        for b, (mask, w) in zip(qubit_blocks, choice):
            vectors[b] = w if w is not None else np.array([1.0, 0.0])
        for b in big_blocks:
            mask = big_assignment[b]
            rows = [factors[i][b] for i in range(m) if mask >> i & 1]
            if rows:
                basis = null_space(np.array(rows), atol=tol.rank)
                if basis.shape[1] == 0:
                    return None
                vectors[b] = basis[:, 0]
            else:
                vectors[b] = np.eye(dims[b])[:, 0]
        res = _overlap_rows(vectors, factors)
        if res.max() <= tol.witness:
            return Witness(partition, tuple(vectors), res)
        return None

    def search(level, killed, choice):
        if level == len(qubit_blocks):
            spend()
            leftover = full_mask & ~killed
            if not big_blocks:
                if leftover:
                    return None
                return build(choice, {})
            rows_left = [i for i in range(m) if leftover >> i & 1]
            assigned = {b: 0 for b in big_blocks}
            found = split_leftover(0, rows_left, assigned)
            if found is None:
                return None
            return build(choice, found)
        for opt in options[level]:
            spend()
            choice.append(opt)
            w = search(level + 1, killed | opt[0], choice)
            if w is not None:
                return w
            choice.pop()
        return None

    witness = search(0, 0, [])
    if witness is not None:
        return witness

    # Structural enumeration exhausted; polish with a short local search in
    # case a witness exists without block-level annihilation structure.
    refined = min_overlap_product(
        pset, partition, starts=refine_starts,
        rng=rng if rng is not None else np.random.default_rng(0),
    )
    if refined.value <= tol.witness**2:
        res = _overlap_rows(refined.block_vectors, factors)
        if res.max() <= tol.witness:
            return Witness(partition, tuple(refined.block_vectors), res)
    return None


# ---------------------------------------------------------------------------
# Alternating minimization of the total squared overlap


@dataclass(frozen=True)
class MinOverlapResult:
    """Best value and argument of the total-squared-overlap minimization."""

    value: float
    block_vectors: tuple


def _alternating_descent(vmats, w0, max_sweeps, ftol):
    """Minimize sum_i prod_b |<v_ib|w_b>|^2 by cyclic eigenvector updates."""
    w = [x.copy() for x in w0]
    amps = [vm.conj() @ wb for vm, wb in zip(vmats, w)]
    prod = np.prod(np.array(amps), axis=0)
    f = float(np.sum(np.abs(prod) ** 2))
    for _ in range(max_sweeps):
        f_prev = f
        for b, vm in enumerate(vmats):
            others = np.ones(vm.shape[0], dtype=complex)
            for b2, amp in enumerate(amps):
                if b2 != b:
                    others *= amp
            weights = np.abs(others) ** 2
            env = (vm * weights[:, None]).T @ vm.conj()
            env = 0.5 * (env + env.conj().T)
            _, vecs = np.linalg.eigh(env)
            w[b] = vecs[:, 0]
            amps[b] = vm.conj() @ w[b]
        prod = np.prod(np.array(amps), axis=0)
        f = float(np.sum(np.abs(prod) ** 2))
        if f_prev - f <= ftol:
            break
    return f, w


def min_overlap_product(
    pset: ConcreteProductSet,
    partition: Partition,
    starts: int = 200,
    rng: np.random.Generator | None = None,
    init=None,
    complex_field: bool = True,
    max_sweeps: int = 500,
    ftol: float = 1e-17,
) -> MinOverlapResult:
    """Multistart lower-bound search for the minimal total squared overlap.

    Each start draws unit block vectors (complex by default) and runs the
    alternating eigenvector descent, which never increases the objective.
    ``init`` may supply one extra deterministic start, e.g. a witness.
    """
    if rng is None:
        rng = np.random.default_rng()
    merged = pset.merge(partition)
    m = merged.n_vectors
    dims = merged.block_dims
    vmats = [
        np.array([merged.vectors[i][b] for i in range(m)])
        for b in range(len(dims))
    ]

    def draw(d):
        if complex_field:
            z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        else:
            z = rng.standard_normal(d)
        return z / np.linalg.norm(z)

    best = None
    starts_list = []
    if init is not None:
        w0 = [np.asarray(v, dtype=complex) for v in init]
        w0 = [v / np.linalg.norm(v) for v in w0]
        starts_list.append(w0)
    for _ in range(starts):
        starts_list.append([draw(d) for d in dims])
    for w0 in starts_list:
        f, w = _alternating_descent(vmats, w0, max_sweeps, ftol)
        if best is None or f < best[0]:
            best = (f, w)
    return MinOverlapResult(best[0], tuple(best[1]))
