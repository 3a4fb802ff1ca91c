"""Dense linear algebra over GF(2).

Rows are packed into Python integers (bit ``j`` of a row is column ``j``),
so elimination is a sequence of XORs on machine-word sized chunks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Sequence

from gsdist.errors import SizeLimitExceeded, UnknownVertex

if TYPE_CHECKING:
    from gsdist.graph import LabeledGraph

MIN_RANK_LIMIT = 20
EXPECTED_CUT_RANK_LIMIT = 16


@dataclass(frozen=True)
class BitVector:
    """Fixed-length bit vector; ``bits`` holds entry ``i`` at bit ``i``."""

    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.bits >> self.length:
            raise IndexError("bits set beyond vector length")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> BitVector:
        bits = 0
        for i, e in enumerate(entries):
            if e not in (0, 1):
                raise ValueError(f"entry {e!r} is not a bit")
            bits |= e << i
        return cls(len(entries), bits)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]


@dataclass(frozen=True)
class BitMatrix:
    """Dense ``nrows x ncols`` matrix over GF(2) with bit-packed rows."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.nrows:
            raise ValueError("row count does not match nrows")
        for r in self.rows:
            if r < 0 or r >> self.ncols:
                raise IndexError("row has bits outside the column range")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> BitMatrix:
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        packed = []
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged rows")
            packed.append(BitVector.from_list(list(row)).bits)
        return cls(nrows, ncols, tuple(packed))

    def __getitem__(self, idx: tuple[int, int]) -> int:
        r, c = idx
        if not (0 <= r < self.nrows and 0 <= c < self.ncols):
            raise IndexError(idx)
        return (self.rows[r] >> c) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> c) & 1 for c in range(self.ncols)] for r in self.rows]

    def transpose(self) -> BitMatrix:
        cols = []
        for c in range(self.ncols):
            col = 0
            for r, row in enumerate(self.rows):
                col |= ((row >> c) & 1) << r
            cols.append(col)
        return BitMatrix(self.ncols, self.nrows, tuple(cols))

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return BitMatrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def with_diagonal(self, diag: BitVector | int) -> BitMatrix:
        """Return ``self + D`` for the diagonal matrix ``D`` given as a bit mask."""
        bits = diag.bits if isinstance(diag, BitVector) else diag
        return BitMatrix(
            self.nrows,
            self.ncols,
            tuple(row ^ (((bits >> i) & 1) << i) for i, row in enumerate(self.rows)),
        )

    def diagonal(self) -> BitVector:
        n = min(self.nrows, self.ncols)
        return BitVector(n, sum(((self.rows[i] >> i) & 1) << i for i in range(n)))

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self == self.transpose()

    def is_adjacency(self) -> bool:
        return self.is_symmetric() and self.diagonal().bits == 0


def rank_rows(rows: Iterable[int]) -> int:
    """GF(2) rank of bit-packed rows."""
    # basis keyed by leading bit
    basis: dict[int, int] = {}
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            b = basis.get(lead)
            if b is None:
                basis[lead] = row
                break
            row ^= b
    return len(basis)


def rank(M: BitMatrix) -> int:
    """Return the GF(2) rank of ``M``; the input is not modified."""
    return rank_rows(M.rows)


def _check_adjacency(A: BitMatrix) -> None:
    if not A.is_adjacency():
        raise ValueError("expected a symmetric 0/1 matrix with zero diagonal")


def min_rank_f2(
    A: BitMatrix, limit: int = MIN_RANK_LIMIT, *, nonzero_diagonal: bool = False
) -> tuple[int, BitVector]:
    """Minimum of ``rank(A + D)`` over all binary diagonal matrices ``D``.

    Exhaustive over the ``2**n`` diagonals; the first minimizer in increasing
    integer order of the diagonal mask is returned as the witness.

    Parameters
    ----------
    A : BitMatrix
        Adjacency matrix of a simple graph.
    limit : int
        Largest ``n`` accepted before raising :class:`SizeLimitExceeded`.
    nonzero_diagonal : bool
        Restrict the search to ``D != 0`` (``A + D`` non-alternating).
    """
    _check_adjacency(A)
    n = A.nrows
    if n > limit:
        raise SizeLimitExceeded(f"n={n} exceeds exhaustive min-rank limit {limit}")
    if n == 0:
        return 0, BitVector(0, 0)
    rows = A.rows
    floor = 1 if (nonzero_diagonal or any(rows)) else 0
    best = n + 1
    witness = 0
    for mask in range(1 if nonzero_diagonal else 0, 1 << n):
        r = rank_rows(row ^ (((mask >> i) & 1) << i) for i, row in enumerate(rows))
        if r < best:
            best, witness = r, mask
            if best == floor:
                break
    return best, BitVector(n, witness)


def biadjacency_rows(G: LabeledGraph, X: Iterable[int]) -> list[int]:
    """Rows of the ``X x (V \\ X)`` adjacency matrix, columns in sorted vertex order."""
    X = set(X)
    missing = X - G.vertices
    if missing:
        raise UnknownVertex(sorted(missing)[0])
    rest = sorted(G.vertices - X)
    col = {v: j for j, v in enumerate(rest)}
    rows = []
    for u in sorted(X):
        row = 0
        for w in G.neighbors(u):
            j = col.get(w)
            if j is not None:
                row |= 1 << j
        rows.append(row)
    return rows


def cut_rank(G: LabeledGraph, X: Iterable[int]) -> int:
    """GF(2) rank of the biadjacency matrix between ``X`` and its complement."""
    return rank_rows(biadjacency_rows(G, X))


def expected_cut_rank(G: LabeledGraph, limit: int = EXPECTED_CUT_RANK_LIMIT) -> Fraction:
    """Exact mean cut-rank over all ``2**n`` vertex subsets."""
    vs = sorted(G.vertices)
    n = len(vs)
    if n > limit:
        raise SizeLimitExceeded(f"n={n} exceeds expected cut-rank limit {limit}")
    idx = {v: i for i, v in enumerate(vs)}
    nbr = [sum(1 << idx[w] for w in G.neighbors(v)) for v in vs]
    full = (1 << n) - 1
    total = 0
    for mask in range(1 << n):
        comp = full & ~mask
        total += rank_rows(nbr[i] & comp for i in range(n) if (mask >> i) & 1)
    return Fraction(total, 1 << n)


def symmetric_factor(M: BitMatrix) -> list[int]:
    """Factor a symmetric non-alternating ``M`` as ``B @ B.T`` over GF(2).

    Returns the columns of ``B`` as bit masks; there are exactly ``rank(M)``
    of them. Diagonal pivots peel off rank-one terms; a leftover alternating
    part is absorbed two ranks at a time using
    ``m m^T + x y^T + y x^T = (m+x)(m+x)^T + (m+y)(m+y)^T + (m+x+y)(m+x+y)^T``.
    An all-zero ``M`` yields an empty list.
    """
    if not M.is_symmetric():
        raise ValueError("matrix must be symmetric")
    n = M.nrows
    rows = list(M.rows)
    if any(rows) and not M.diagonal().bits:
        raise ValueError("alternating matrix has no factorization with rank(M) columns")
    terms: list[int] = []
    while True:
        i = next((i for i in range(n) if (rows[i] >> i) & 1), None)
        if i is None:
            break
        m = rows[i]  # column i == row i by symmetry
        for j in range(n):
            if (m >> j) & 1:
                rows[j] ^= m
        terms.append(m)
    if any(rows):
        pairs = []
        while any(rows):
            j = next(j for j in range(n) if rows[j])
            k = (rows[j] & -rows[j]).bit_length() - 1
            x, y = rows[j], rows[k]
            for a in range(n):
                upd = (y if (x >> a) & 1 else 0) ^ (x if (y >> a) & 1 else 0)
                rows[a] ^= upd
            pairs.append((x, y))
        m = terms.pop()
        for x, y in pairs:
            terms.append(m ^ x)
            terms.append(m ^ y)
            m ^= x ^ y
        terms.append(m)
    return terms


def outer_sum(columns: Iterable[int], n: int) -> BitMatrix:
    """``B @ B.T`` for ``B`` given by bit-mask columns."""
    rows = [0] * n
    for col in columns:
        for j in range(n):
            if (col >> j) & 1:
                rows[j] ^= col
    return BitMatrix(n, n, tuple(rows))
