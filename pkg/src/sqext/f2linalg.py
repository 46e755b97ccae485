"""Dense linear algebra over F2 with rows packed into Python integers.

Bit ``j`` of a row is column ``j``.  Python ints are arbitrary-width bitsets,
so XOR of two rows is a single word-parallel operation regardless of width.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple


@dataclass(frozen=True)
class F2Vector:
    bits: int
    len: int

    def __post_init__(self):
        if self.len < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.len:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "F2Vector":
        bits = 0
        for j, e in enumerate(entries):
            if e & 1:
                bits |= 1 << j
        return cls(bits, len(entries))

    def to_list(self) -> List[int]:
        return [(self.bits >> j) & 1 for j in range(self.len)]

    def __getitem__(self, j: int) -> int:
        return (self.bits >> j) & 1

    def __add__(self, other: "F2Vector") -> "F2Vector":
        if other.len != self.len:
            raise ValueError("length mismatch")
        return F2Vector(self.bits ^ other.bits, self.len)

    def is_zero(self) -> bool:
        return self.bits == 0


@dataclass(frozen=True)
class F2Matrix:
    rows: Tuple[int, ...]
    ncols: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        limit = self.ncols
        for r in self.rows:
            if r < 0 or r >> limit:
                raise ValueError("row wider than ncols")

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls((0,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "F2Matrix":
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        return cls(tuple(F2Vector.from_list(r).bits for r in entries), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def to_lists(self) -> List[List[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def transpose(self) -> "F2Matrix":
        out = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return F2Matrix(tuple(out), self.nrows)

    def mul_vec(self, v: F2Vector) -> F2Vector:
        """Return ``self · v`` for a column vector ``v`` of length ``ncols``."""
        if v.len != self.ncols:
            raise ValueError(f"vector length {v.len} != ncols {self.ncols}")
        bits = 0
        for i, r in enumerate(self.rows):
            if bin(r & v.bits).count("1") & 1:
                bits |= 1 << i
        return F2Vector(bits, self.nrows)

    def matmul(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        return F2Matrix(tuple(combine(other.rows, r) for r in self.rows), other.ncols)

    def rank(self) -> int:
        return row_reduce(self)[2]


def combine(rows: Sequence[int], mask: int) -> int:
    """XOR of ``rows[i]`` over the set bits ``i`` of ``mask``."""
    acc = 0
    while mask:
        low = mask & -mask
        acc ^= rows[low.bit_length() - 1]
        mask ^= low
    return acc


def iter_bits(x: int) -> Iterable[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def row_reduce(m: F2Matrix) -> Tuple[F2Matrix, List[int], int]:
    """Reduced row echelon form, pivot columns, rank.

    Pivots are taken column by column from the left; within a column the
    lowest-index remaining row wins.  Zero rows are kept at the bottom so the
    shape is preserved.
    """
    rows = list(m.rows)
    pivots: List[int] = []
    r = 0
    for col in range(m.ncols):
        bit = 1 << col
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i] & bit:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= prow
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return F2Matrix(tuple(rows), m.ncols), pivots, len(pivots)


def kernel_basis(m: F2Matrix) -> F2Matrix:
    """Basis of ``{v : m·v = 0}`` as the rows of the returned matrix."""
    rref, pivots, rank = row_reduce(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        v = 1 << free
        for i, pc in enumerate(pivots):
            if (rref.rows[i] >> free) & 1:
                v |= 1 << pc
        basis.append(v)
    return F2Matrix(tuple(basis), m.ncols)


def solve(m: F2Matrix, b: F2Vector) -> Optional[F2Vector]:
    """Some ``x`` with ``m·x = b``, or ``None`` when ``b`` is not in the image."""
    if b.len != m.nrows:
        raise ValueError(f"right-hand side has length {b.len}, matrix has {m.nrows} rows")
    n = m.ncols
    aug = F2Matrix(tuple(r | (((b.bits >> i) & 1) << n) for i, r in enumerate(m.rows)), n + 1)
    rref, pivots, _ = row_reduce(aug)
    if n in pivots:
        return None
    x = 0
    for i, pc in enumerate(pivots):
        if (rref.rows[i] >> n) & 1:
            x |= 1 << pc
    return F2Vector(x, n)


def rank_of_rows(rows: Iterable[int]) -> int:
    """Rank of a collection of packed rows."""
    space = RowSpace()
    for r in rows:
        space.add(r)
    return space.rank


def left_kernel(rows: Sequence[int]) -> List[int]:
    """Combinations (as masks over row indices) of ``rows`` that sum to zero."""
    space = RowSpace(track=True)
    kernel = []
    for i, r in enumerate(rows):
        residual, combo = space.reduce_tracked(r)
        combo ^= 1 << i
        if residual:
            space._insert(residual, combo)
        else:
            kernel.append(combo)
    return kernel


class RowSpace:
    """Incrementally maintained echelon basis of a span of packed rows.

    Each stored row has a distinct lowest set bit (its pivot), and no other
    stored row has that bit set, so reduction is a single pass.  With
    ``track=True`` each stored row remembers which inserted vectors it is a
    combination of, which lets :meth:`express` recover coordinates.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self.pivots: dict = {}
        self.combos: dict = {}
        self._count = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: int) -> int:
        """Residual of ``v`` modulo the span."""
        pivots = self.pivots
        x = v
        scan = x
        while scan:
            low = scan & -scan
            p = pivots.get(low)
            if p is not None:
                x ^= p
                scan = x & ~((low << 1) - 1)
            else:
                scan ^= low
        return x

    def reduce_tracked(self, v: int) -> Tuple[int, int]:
        pivots = self.pivots
        combos = self.combos
        x = v
        combo = 0
        scan = x
        while scan:
            low = scan & -scan
            p = pivots.get(low)
            if p is not None:
                x ^= p
                combo ^= combos[low]
                scan = x & ~((low << 1) - 1)
            else:
                scan ^= low
        return x, combo

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def _insert(self, residual: int, combo: int) -> None:
        low = residual & -residual
        # keep the basis fully reduced: clear the new pivot from older rows
        for key, row in list(self.pivots.items()):
            if row & low:
                self.pivots[key] = row ^ residual
                if self.track:
                    self.combos[key] ^= combo
        self.pivots[low] = residual
        if self.track:
            self.combos[low] = combo

    def add(self, v: int) -> bool:
        """Insert ``v``; return ``True`` if it enlarged the span."""
        index = self._count
        self._count += 1
        if self.track:
            residual, combo = self.reduce_tracked(v)
            combo ^= 1 << index
        else:
            residual, combo = self.reduce(v), 0
        if residual == 0:
            return False
        self._insert(residual, combo)
        return True

    def add_or_relation(self, v: int) -> Optional[int]:
        """Insert ``v``; if it was dependent, return the relation it completes.

        The relation is a mask over insertion indices (including ``v``'s own)
        of inserted vectors summing to zero.  Requires ``track=True``.
        """
        index = self._count
        self._count += 1
        residual, combo = self.reduce_tracked(v)
        combo ^= 1 << index
        if residual == 0:
            return combo
        self._insert(residual, combo)
        return None

    def express(self, v: int) -> Optional[int]:
        """Mask over inserted vectors summing to ``v``, or ``None``."""
        if not self.track:
            raise ValueError("RowSpace was built without tracking")
        residual, combo = self.reduce_tracked(v)
        return None if residual else combo

    def basis(self) -> List[int]:
        return [self.pivots[k] for k in sorted(self.pivots)]


def intersect(rows_a: Sequence[int], rows_b: Sequence[int]) -> List[int]:
    """Basis of ``span(rows_a) ∩ span(rows_b)``."""
    rows = list(rows_a) + list(rows_b)
    na = len(rows_a)
    low_a = (1 << na) - 1
    out = RowSpace()
    for combo in left_kernel(rows):
        v = combine(rows_a, combo & low_a)
        if v:
            out.add(v)
    return out.basis()
