"""Symbolic unextendible orthogonal grids and their concrete product bases.

An 11 x 7 grid of symbol entries encodes a family of seven-qubit product
bases: each entry names a qubit state drawn from a column-scoped alphabet,
with an optional prime marking the orthogonal partner.  Two rows are
symbolically orthogonal when some column holds the same symbol primed in
one row and unprimed in the other.  Instantiating every symbol with an
angle turns a grid into a concrete set of product vectors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

import numpy as np

from .linalg import complement, qubit_from_angle, tensor

N_ROWS = 11
N_COLS = 7

_ENTRY_RE = re.compile(r"^a(\d+),(\d+)(')?$")


@dataclass(frozen=True, order=True)
class SymbolEntry:
    """One grid cell: symbol ``symbol_id`` scoped to ``column``, maybe primed."""

    column: int
    symbol_id: int
    primed: bool = False

    def __post_init__(self):
        if not 1 <= self.column <= N_COLS:
            raise ValueError(f"column out of range: {self.column}")
        if self.symbol_id < 1:
            raise ValueError(f"symbol_id must be positive: {self.symbol_id}")

    @property
    def partner(self) -> "SymbolEntry":
        """Same symbol with the prime flipped."""
        return SymbolEntry(self.column, self.symbol_id, not self.primed)

    def clashes(self, other: "SymbolEntry") -> bool:
        """True when the two entries are orthogonal by construction."""
        return (
            self.column == other.column
            and self.symbol_id == other.symbol_id
            and self.primed != other.primed
        )

    def __str__(self):
        return f"a{self.symbol_id},{self.column}" + ("'" if self.primed else "")


def parse_entry(token: str) -> SymbolEntry:
    m = _ENTRY_RE.match(token.strip())
    if m is None:
        raise ValueError(f"malformed grid entry: {token!r}")
    return SymbolEntry(int(m.group(2)), int(m.group(1)), m.group(3) == "'")


@dataclass(frozen=True)
class SymbolicUOM:
    """An 11 x 7 grid of symbol entries with a provenance label.

    Construction only checks the shape; orthogonality is verified
    separately so that corrupted grids can be loaded and diagnosed.
    """

    rows: tuple
    provenance: str = "derived"

    def __post_init__(self):
        if len(self.rows) != N_ROWS or any(len(r) != N_COLS for r in self.rows):
            raise ValueError("grid must have 11 rows of 7 entries")

    def entry(self, row: int, position: int) -> SymbolEntry:
        """Entry at 1-based (row, grid position)."""
        return self.rows[row - 1][position - 1]

    def symbols(self) -> set:
        """All distinct unprimed symbols appearing in the grid."""
        return {
            SymbolEntry(e.column, e.symbol_id)
            for row in self.rows
            for e in row
        }

    def __str__(self):
        return format_uom(self)


def parse_uom(text: str, provenance: str = "derived") -> SymbolicUOM:
    """Parse a whitespace-separated grid of entries like ``a1,3`` / ``a1,3'``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != N_ROWS:
        raise ValueError(f"expected {N_ROWS} rows, got {len(lines)}")
    rows = tuple(tuple(parse_entry(tok) for tok in ln.split()) for ln in lines)
    return SymbolicUOM(rows, provenance)


def format_uom(u: SymbolicUOM) -> str:
    """Render a grid in the plain-text format accepted by :func:`parse_uom`."""
    width = max(len(str(e)) for row in u.rows for e in row)
    return "\n".join(
        " ".join(str(e).ljust(width) for e in row).rstrip() for row in u.rows
    )


_A_GRID = """
a1,1  a1,2  a1,3  a1,4  a1,5  a1,6  a1,7
a1,1  a2,2  a2,3  a2,4  a1,5' a2,6  a2,7
a1,1' a2,2  a1,3  a3,4  a3,5  a3,6  a3,7
a1,1' a1,2  a2,3  a4,4  a4,5  a4,6  a3,7'
a4,1  a1,2' a5,3  a2,4' a5,5  a3,6' a5,7
a4,1  a1,2' a1,3  a3,4' a6,5  a2,6' a5,7'
a4,1' a7,2  a2,3' a7,4  a3,5' a1,6' a7,7
a4,1' a7,2' a2,3' a3,4' a6,5  a8,6  a1,7'
a9,1  a7,2' a1,3' a4,4' a5,5' a8,6' a2,7'
a9,1  a7,2  a1,3' a7,4' a4,5' a2,6' a5,7'
a9,1' a2,2' a5,3' a1,4' a6,5' a4,6' a7,7'
"""

_A_TILDE_GRID = """
a1,3  a1,1  a1,2  a1,4  a1,5  a1,6  a1,7
a1,3  a1,1' a2,2  a3,4  a3,5  a3,6  a3,7
a1,3  a4,1  a1,2' a3,4' a6,5  a2,6' a5,7'
a1,3' a9,1  a7,2' a4,4' a5,5' a8,6' a2,7'
a1,3' a9,1  a7,2  a7,4' a4,5' a2,6' a5,7'
a2,3  a1,1' a1,2  a4,4  a4,5  a4,6  a3,7'
a2,3  a1,1  a2,2  a2,4  a1,5' a2,6  a2,7
a2,3' a4,1' a7,2  a7,4  a3,5' a1,6' a7,7
a2,3' a4,1' a7,2' a3,4' a6,5  a8,6  a1,7'
a5,3  a4,1  a1,2' a2,4' a5,5  a3,6' a5,7
a5,3' a9,1' a2,2' a1,4' a6,5' a4,6' a7,7'
"""

# The second builtin equals the first after reading columns in the order
# below and rows in the order below.  Both are stored as data; a test pins
# the equivalence rather than recomputing it here.
A_TILDE_COLUMN_ORDER = (3, 1, 2, 4, 5, 6, 7)
A_TILDE_ROW_ORDER = (1, 3, 6, 9, 10, 4, 2, 7, 8, 5, 11)


def builtin_a() -> SymbolicUOM:
    """The bundled 11 x 7 grid in its primary system order."""
    return parse_uom(_A_GRID, provenance="A")


def builtin_a_tilde() -> SymbolicUOM:
    """The bundled grid with the third column promoted to the front."""
    return parse_uom(_A_TILDE_GRID, provenance="A-tilde")


def verify_symbolic_orthogonality(u: SymbolicUOM) -> list:
    """Row pairs (1-based, i < j) with no clashing column.

    An empty list certifies that every pair of rows is orthogonal for all
    symbol instantiations.
    """
    bad = []
    for i, j in combinations(range(N_ROWS), 2):
        if not any(u.rows[i][c].clashes(u.rows[j][c]) for c in range(N_COLS)):
            bad.append((i + 1, j + 1))
    return bad


def multiplicity_profile(u: SymbolicUOM, position: int) -> dict:
    """Occurrence rows of each signed entry at a 1-based grid position.

    Maps each :class:`SymbolEntry` appearing in that position to the
    frozenset of 1-based rows carrying it.
    """
    if not 1 <= position <= N_COLS:
        raise ValueError(f"grid position out of range: {position}")
    profile: dict = {}
    for r in range(N_ROWS):
        e = u.rows[r][position - 1]
        profile.setdefault(e, set()).add(r + 1)
    return {e: frozenset(rows) for e, rows in profile.items()}


# ---------------------------------------------------------------------------
# Angle assignments


def random_assignment(u: SymbolicUOM, rng: np.random.Generator) -> dict:
    """Uniform angle in [0, 2*pi) for every unprimed symbol of the grid."""
    return {
        (s.column, s.symbol_id): rng.uniform(0.0, 2.0 * np.pi)
        for s in sorted(u.symbols())
    }


def column_pair_assignment(
    a1: float, a2: float, a3: float, b1: float, b2: float, b3: float
) -> dict:
    """Angles for the six symbols of the first two columns of the primary grid.

    Column 1 hosts symbols 1, 4, 9 (angles a1, a2, a3) and column 2 hosts
    symbols 1, 2, 7 (angles b1, b2, b3).
    """
    return {
        (1, 1): a1,
        (1, 4): a2,
        (1, 9): a3,
        (2, 1): b1,
        (2, 2): b2,
        (2, 7): b3,
    }


def instantiate_entry(e: SymbolEntry, assignment: Mapping) -> np.ndarray:
    """Concrete qubit state for one entry under an angle assignment."""
    key = (e.column, e.symbol_id)
    if key not in assignment:
        raise ValueError(f"no angle assigned to symbol a{e.symbol_id},{e.column}")
    v = qubit_from_angle(assignment[key])
    return complement(v) if e.primed else v


# ---------------------------------------------------------------------------
# Partitions of the seven systems


def _parse_blocks(spec: str):
    blocks = []
    for part in spec.split("|"):
        part = part.strip()
        if not part or not part.isdigit():
            raise ValueError(f"malformed partition spec: {spec!r}")
        blocks.append(tuple(int(ch) for ch in part))
    return tuple(blocks)


@dataclass(frozen=True)
class Partition:
    """Ordered partition of the systems 1..7 into disjoint blocks."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = [s for b in blocks for s in b]
        if sorted(seen) != list(range(1, N_COLS + 1)):
            raise ValueError("blocks must partition the systems 1..7")

    @classmethod
    def singletons(cls) -> "Partition":
        return cls(tuple((s,) for s in range(1, N_COLS + 1)))

    @classmethod
    def merge_pair(cls, i: int, j: int) -> "Partition":
        """Six-block partition with systems i and j merged, merged block last."""
        if i == j:
            raise ValueError("cannot merge a system with itself")
        i, j = min(i, j), max(i, j)
        rest = tuple((s,) for s in range(1, N_COLS + 1) if s not in (i, j))
        return cls(rest + ((i, j),))

    @classmethod
    def from_spec(cls, spec: str) -> "Partition":
        """Parse a partition written as blocks of digits, e.g. ``12|3|4|5|6|7``."""
        return cls(_parse_blocks(spec))

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def block_dims(self) -> tuple:
        return tuple(2 ** len(b) for b in self.blocks)

    @property
    def shape(self) -> tuple:
        return tuple(sorted(len(b) for b in self.blocks))

    def __str__(self):
        return "|".join("".join(str(s) for s in b) for b in self.blocks)


def enumerate_merge_pairs() -> list:
    """All 21 unordered system pairs, as (i, j) with i < j."""
    return list(combinations(range(1, N_COLS + 1), 2))


# ---------------------------------------------------------------------------
# Concrete product sets


@dataclass(frozen=True, eq=False)
class ConcreteProductSet:
    """Product vectors over an ordered block structure on systems 1..7.

    ``vectors[i][b]`` is the i-th vector's factor on block ``blocks[b]``,
    a complex or real array of dimension ``2**len(blocks[b])``.  Treated
    as immutable after construction.
    """

    blocks: tuple
    vectors: tuple

    def __post_init__(self):
        dims = self.block_dims
        for row in self.vectors:
            if len(row) != len(self.blocks):
                raise ValueError("factor count does not match block count")
            for v, d in zip(row, dims):
                if np.asarray(v).shape != (d,):
                    raise ValueError("factor dimension does not match block")

    @property
    def n_vectors(self) -> int:
        return len(self.vectors)

    @property
    def block_dims(self) -> tuple:
        return tuple(2 ** len(b) for b in self.blocks)

    @property
    def partition(self) -> Partition:
        return Partition(self.blocks)

    def global_vector(self, i: int) -> np.ndarray:
        """Full 128-dimensional vector of row ``i`` (0-based), systems in order."""
        v = tensor(self.vectors[i])
        order = [s for b in self.blocks for s in b]
        axes = [order.index(s) for s in range(1, N_COLS + 1)]
        return v.reshape((2,) * N_COLS).transpose(axes).reshape(-1)

    def global_matrix(self) -> np.ndarray:
        return np.array([self.global_vector(i) for i in range(self.n_vectors)])

    def gram(self) -> np.ndarray:
        m = self.global_matrix()
        return m.conj() @ m.T

    def max_pairwise_overlap(self) -> float:
        g = self.gram()
        off = g - np.diag(np.diag(g))
        return float(np.abs(off).max())

    def merge(self, p: Partition) -> "ConcreteProductSet":
        """Coarsen the block structure to ``p`` by tensoring factors.

        Every block of ``p`` must be a union of current blocks.  The global
        vectors are unchanged.
        """
        groups = []
        for target in p.blocks:
            remaining = set(target)
            members = []
            for bi, block in enumerate(self.blocks):
                if set(block) <= remaining:
                    members.append(bi)
                    remaining -= set(block)
            if remaining:
                raise ValueError(
                    f"block {target} is not a union of existing blocks"
                )
            groups.append(members)
        new_blocks = tuple(
            tuple(s for bi in g for s in self.blocks[bi]) for g in groups
        )
        new_vectors = tuple(
            tuple(tensor([row[bi] for bi in g]) for g in groups)
            for row in self.vectors
        )
        return ConcreteProductSet(new_blocks, new_vectors)


def instantiate(u: SymbolicUOM, assignment: Mapping) -> ConcreteProductSet:
    """Concrete product set of a grid under a full angle assignment.

    For a grid passing :func:`verify_symbolic_orthogonality` the resulting
    vectors are pairwise orthogonal for any assignment.
    """
    vectors = tuple(
        tuple(instantiate_entry(e, assignment) for e in row) for row in u.rows
    )
    blocks = tuple((s,) for s in range(1, N_COLS + 1))
    return ConcreteProductSet(blocks, vectors)


def merge(pset: ConcreteProductSet, p: Partition) -> ConcreteProductSet:
    """Module-level alias of :meth:`ConcreteProductSet.merge`."""
    return pset.merge(p)
