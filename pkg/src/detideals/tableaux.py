"""Partitions, tableaux and the substitution operators on them.

A tableau is a tuple of rows.  It is standard when every row is strictly
increasing and every column is weakly increasing; with entries in
``1..n`` this matches the usual convention for bitableaux.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import InputError, ShapeOutOfBounds

Partition = Tuple[int, ...]


def partition(parts: Sequence[int]) -> Partition:
    p = tuple(int(v) for v in parts if int(v) != 0)
    if any(v < 0 for v in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise InputError(f"not a partition: {list(parts)}")
    return p


def transpose(shape: Sequence[int]) -> Partition:
    shape = partition(shape)
    if not shape:
        return ()
    return tuple(sum(1 for p in shape if p > i) for i in range(shape[0]))


def partitions(total: int, max_part: Optional[int] = None, max_len: Optional[int] = None) -> Iterator[Partition]:
    """Partitions of ``total`` in lex-descending order."""
    max_part = total if max_part is None else min(max_part, total)
    if total == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(max_part, 0, -1):
        for rest in partitions(total - first, first, None if max_len is None else max_len - 1):
            yield (first,) + rest


@dataclass(frozen=True, order=True)
class Tableau:
    rows: Tuple[Tuple[int, ...], ...]

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "Tableau":
        return cls(tuple(tuple(int(v) for v in r) for r in rows if len(r)))

    @property
    def shape(self) -> Partition:
        return tuple(len(r) for r in self.rows)

    def entries(self) -> List[int]:
        return [v for r in self.rows for v in r]

    def content(self, n: int) -> Tuple[int, ...]:
        counts = [0] * n
        for v in self.entries():
            counts[v - 1] += 1
        return tuple(counts)

    def is_standard(self, n: Optional[int] = None) -> bool:
        rows = self.rows
        for i, r in enumerate(rows):
            if any(v < 1 or (n is not None and v > n) for v in r):
                return False
            if any(r[k] >= r[k + 1] for k in range(len(r) - 1)):
                return False
            if i and (len(r) > len(rows[i - 1]) or any(rows[i - 1][k] > r[k] for k in range(len(r)))):
                return False
        return True

    def __str__(self) -> str:
        return "|".join(" ".join(str(v) for v in r) for r in self.rows)


@dataclass(frozen=True, order=True)
class Bitableau:
    left: Tableau
    right: Tableau

    def __post_init__(self):
        if self.left.shape != self.right.shape:
            raise InputError("bitableau sides have different shapes")

    @property
    def shape(self) -> Partition:
        return self.left.shape

    @property
    def width(self) -> int:
        s = self.shape
        return s[0] if s else 0

    def __str__(self) -> str:
        return f"({self.left} ; {self.right})"


def k_tableau(shape: Sequence[int]) -> Tableau:
    """Row i holds 1..shape[i]."""
    return Tableau(tuple(tuple(range(1, p + 1)) for p in partition(shape)))


def kbar_tableau(shape: Sequence[int], n: int) -> Tableau:
    """Row i holds the last shape[i] elements of 1..n."""
    shape = partition(shape)
    if shape and shape[0] > n:
        raise ShapeOutOfBounds(f"row of length {shape[0]} does not fit in 1..{n}")
    return Tableau(tuple(tuple(range(n - p + 1, n + 1)) for p in shape))


def sub_op(t: Tableau, i: int, j: int) -> Tuple[Tableau, int]:
    """Replace i by j in every row that has i but not j.

    Returns the reordered tableau and the number of rows changed.
    """
    if i == j:
        return t, 0
    rows = []
    changed = 0
    for r in t.rows:
        if i in r and j not in r:
            rows.append(tuple(sorted(j if v == i else v for v in r)))
            changed += 1
        else:
            rows.append(r)
    return Tableau(tuple(rows)), changed


def chain_pairs(n: int) -> List[Tuple[int, int]]:
    """(1,2),(1,3),...,(1,n),(2,3),...,(n-1,n)."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def sub_chain(t: Tableau, n: int) -> Tuple[Tableau, List[int]]:
    """Apply the operators in ``chain_pairs`` order; returns the h-vector."""
    hs = []
    for i, j in chain_pairs(n):
        t, h = sub_op(t, i, j)
        hs.append(h)
    return t, hs


def enumerate_standard(
    shape: Sequence[int],
    n: int,
    content: Optional[Sequence[int]] = None,
    even_rows: bool = False,
) -> Iterator[Tableau]:
    """Standard tableaux of ``shape`` with entries in 1..n.

    Yielded in row-major lexicographic order.  ``content`` fixes how often
    each entry occurs.
    """
    shape = partition(shape)
    if shape and shape[0] > n:
        raise ShapeOutOfBounds(f"shape {shape} does not fit entries 1..{n}")
    if even_rows and any(p % 2 for p in shape):
        return
    cells = [(i, k) for i, p in enumerate(shape) for k in range(p)]
    grid = [[0] * p for p in shape]
    left = list(content) if content is not None else None
    if left is not None and (len(left) != n or sum(left) != len(cells)):
        return

    def rec(pos: int):
        if pos == len(cells):
            yield Tableau(tuple(tuple(r) for r in grid))
            return
        i, k = cells[pos]
        lo = 1
        if k:
            lo = grid[i][k - 1] + 1
        if i:
            lo = max(lo, grid[i - 1][k])
        # room for the rest of the row
        hi = n - (shape[i] - 1 - k)
        for v in range(lo, hi + 1):
            if left is not None:
                if not left[v - 1]:
                    continue
                left[v - 1] -= 1
            grid[i][k] = v
            yield from rec(pos + 1)
            if left is not None:
                left[v - 1] += 1
        grid[i][k] = 0

    yield from rec(0)


def standard_bitableaux(
    n: int,
    m: int,
    row_content: Sequence[int],
    col_content: Sequence[int],
) -> List[Bitableau]:
    """All standard bitableaux with the given row and column content."""
    d = sum(row_content)
    if d != sum(col_content):
        return []
    out = []
    for shape in partitions(d, max_part=min(n, m)):
        lefts = list(enumerate_standard(shape, n, row_content))
        if not lefts:
            continue
        rights = list(enumerate_standard(shape, m, col_content))
        for s in lefts:
            for t in rights:
                out.append(Bitableau(s, t))
    return out


def shape_key(shape: Partition):
    """Sort key putting bigger partitions (lex) first."""
    return tuple(-p for p in shape)
