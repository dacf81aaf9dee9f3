"""Substrate shared by every solver: tie-broken reals, the comparison
ledger, Fredman-trick comparators, and Cartesian-sum fragment sorting.

A solver's "cost" here is the number of sign queries it issues on linear
forms of the input reals.  Every such query must go through a
:class:`ComparisonLedger` tick; index arithmetic and tie-breaking tag
comparisons are free.  The tag scheme makes every Cartesian sum totally
ordered, so downstream search logic never branches on equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence


@dataclass(frozen=True, order=True)
class TaggedReal:
    """A real number with two integer tie-break tags.

    Ordering is lexicographic on ``(u, r, c)`` and addition/subtraction is
    pointwise, so a list tagged as rows ``(u, i, 0)`` plus a list tagged as
    columns ``(u, 0, j)`` yields pairwise-distinct sums whose order extends
    the raw order of the untagged sums.
    """

    u: float
    r: int = 0
    c: int = 0

    def __add__(self, other: "TaggedReal") -> "TaggedReal":
        return TaggedReal(self.u + other.u, self.r + other.r, self.c + other.c)

    def __sub__(self, other: "TaggedReal") -> "TaggedReal":
        return TaggedReal(self.u - other.u, self.r - other.r, self.c - other.c)

    def __neg__(self) -> "TaggedReal":
        return TaggedReal(-self.u, -self.r, -self.c)

    def key(self) -> tuple[float, int, int]:
        return (self.u, self.r, self.c)


def tag_rows(values: Sequence[float]) -> list[TaggedReal]:
    """Tag a list for use as Cartesian-sum rows: value i becomes (v, i, 0)."""
    return [TaggedReal(float(v), i, 0) for i, v in enumerate(values)]


def tag_cols(values: Sequence[float]) -> list[TaggedReal]:
    """Tag a list for use as Cartesian-sum columns: value j becomes (v, 0, j)."""
    return [TaggedReal(float(v), 0, j) for j, v in enumerate(values)]


def sign(x: float) -> int:
    if x < 0:
        return -1
    if x > 0:
        return 1
    return 0


def cmp_tagged(a: TaggedReal, b: TaggedReal) -> int:
    if a < b:
        return -1
    if b < a:
        return 1
    return 0


class ComparisonLedger:
    """Counts sign queries on linear forms of input reals, by arity.

    Arity is the number of distinct input reals appearing in the queried
    form.  Counts are monotone; :meth:`snapshot` freezes a labelled copy so
    phases of an algorithm can be audited after the fact.
    """

    def __init__(self) -> None:
        self._counts: dict[int, int] = {}
        self.snapshots: list[tuple[str, dict[int, int]]] = []

    def tick(self, arity: int, n: int = 1) -> None:
        if n < 0:
            raise ValueError("ledger counts are monotone")
        if n:
            self._counts[arity] = self._counts.get(arity, 0) + n

    @property
    def count_3linear(self) -> int:
        return self._counts.get(3, 0)

    @property
    def count_4linear(self) -> int:
        return self._counts.get(4, 0)

    @property
    def count_klinear(self) -> dict[int, int]:
        return dict(self._counts)

    def count(self, arity: int) -> int:
        return self._counts.get(arity, 0)

    def total(self) -> int:
        return sum(self._counts.values())

    def other_total(self) -> int:
        """Ticks at every arity other than 3 and 4."""
        return sum(v for k, v in self._counts.items() if k not in (3, 4))

    def snapshot(self, label: str) -> dict[int, int]:
        counts = dict(self._counts)
        self.snapshots.append((label, counts))
        return counts

    def snapshot_counts(self, label: str) -> dict[int, int]:
        for name, counts in self.snapshots:
            if name == label:
                return counts
        raise KeyError(label)

    def delta(self, label_from: str, label_to: str) -> dict[int, int]:
        a = self.snapshot_counts(label_from)
        b = self.snapshot_counts(label_to)
        return {k: b.get(k, 0) - a.get(k, 0) for k in set(a) | set(b)}


def compare_sum(a: TaggedReal, b: TaggedReal, c: TaggedReal, d: TaggedReal,
                ledger: ComparisonLedger) -> int:
    """Sign of (a+b) - (c+d), evaluated as (a-c) versus (d-b).

    One 4-linear ledger tick per call.
    """
    ledger.tick(4)
    return cmp_tagged(a - c, d - b)


def merge_sort_counted(items: Sequence, compare: Callable) -> list:
    """Canonical bottom-up stable mergesort; `compare` is charged per call.

    This is the reference sorting procedure for every instrumented sort in
    the package: runs double from width 1, merges take the left element on
    ties, and the trailing run is flushed without comparisons.  The
    vectorised tick counters mirror exactly this procedure.
    """
    out = list(items)
    n = len(out)
    width = 1
    buf = [None] * n
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            if mid >= hi:
                continue
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if compare(out[i], out[j]) <= 0:
                    buf[k] = out[i]
                    i += 1
                else:
                    buf[k] = out[j]
                    j += 1
                k += 1
            while i < mid:
                buf[k] = out[i]
                i += 1
                k += 1
            while j < hi:
                buf[k] = out[j]
                j += 1
                k += 1
            out[lo:hi] = buf[lo:hi]
        width *= 2
    return out


def sorted_counted(values: Sequence[float], ledger: ComparisonLedger,
                   arity: int = 2) -> list[float]:
    """Sort raw input reals, charging one tick of `arity` per comparison."""

    def compare(x, y):
        ledger.tick(arity)
        return sign(x - y)

    return merge_sort_counted(values, compare)


@dataclass(frozen=True)
class Fragment:
    """A set of positions inside an |A| x |B| Cartesian-sum matrix."""

    positions: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(set(self.positions)) != len(self.positions):
            raise ValueError("fragment positions must be distinct")

    def validate(self, nrows: int, ncols: int) -> None:
        for (x, y) in self.positions:
            if not (0 <= x < nrows and 0 <= y < ncols):
                raise ValueError(f"position {(x, y)} out of range")


class DifferenceIndex:
    """Sorted union of within-group differences plus a rank lookup.

    Built by :func:`sort_differences`.  ``rank(group, x, y)`` is the
    position of ``groups[group][x] - groups[group][y]`` in the sorted
    difference list.  Two ranks answer a four-variable sum comparison by
    Fredman's trick without touching the ledger again.
    """

    def __init__(self, diffs: list[TaggedReal], ranks: dict[tuple[int, int, int], int],
                 ledger: ComparisonLedger, group_sizes: list[int]):
        self.diffs = diffs
        self._ranks = ranks
        self.ledger = ledger
        self.group_sizes = group_sizes

    def rank(self, group: int, x: int, y: int) -> int:
        return self._ranks[(group, x, y)]

    def __len__(self) -> int:
        return len(self.diffs)


def sort_differences(groups: Sequence[Sequence[TaggedReal]],
                     ledger: ComparisonLedger, arity: int = 4) -> DifferenceIndex:
    """Sort the union of all within-group difference lists.

    Every comparison made during the sort is a sign query on a difference
    of differences and ticks the ledger once; for plain inputs that form
    touches four reals, for composite inputs the caller passes the wider
    arity.
    """
    if not groups:
        raise ValueError("groups must be nonempty")
    entries: list[tuple[TaggedReal, int, int, int]] = []
    for gi, grp in enumerate(groups):
        for x in range(len(grp)):
            gx = grp[x]
            for y in range(len(grp)):
                entries.append((gx - grp[y], gi, x, y))

    def compare(e1, e2):
        ledger.tick(arity)
        return cmp_tagged(e1[0], e2[0])

    ordered = merge_sort_counted(entries, compare)
    ranks = {(gi, x, y): pos for pos, (_, gi, x, y) in enumerate(ordered)}
    return DifferenceIndex([e[0] for e in ordered], ranks, ledger,
                           [len(g) for g in groups])


class CartesianResolver:
    """Maps global (row, col) positions onto a DifferenceIndex.

    Row spans and column spans name which index group covers which
    contiguous run of the row/column generator lists.  When both rows fall
    in one row span and both columns in one column span, a sum comparison
    resolves through two stored ranks, costing nothing.
    """

    def __init__(self, index: Optional[DifferenceIndex],
                 row_spans: Iterable[tuple[int, int, int]] = (),
                 col_spans: Iterable[tuple[int, int, int]] = ()):
        self.index = index
        self._rows = sorted(row_spans, key=lambda s: s[1])
        self._cols = sorted(col_spans, key=lambda s: s[1])

    def _locate(self, spans, pos):
        for gid, start, length in spans:
            if start <= pos < start + length:
                return gid, pos - start
        return None

    def resolve(self, x: int, xp: int, y: int, yp: int) -> Optional[int]:
        """Sign of (A[x]+B[y]) - (A[xp]+B[yp]) if the index can answer it."""
        if self.index is None:
            return None
        rx = self._locate(self._rows, x)
        rxp = self._locate(self._rows, xp)
        if rx is None or rxp is None or rx[0] != rxp[0]:
            return None
        cy = self._locate(self._cols, y)
        cyp = self._locate(self._cols, yp)
        if cy is None or cyp is None or cy[0] != cyp[0]:
            return None
        # a_x + b_y < a_xp + b_yp  iff  a_x - a_xp < b_yp - b_y
        r1 = self.index.rank(rx[0], rx[1], rxp[1])
        r2 = self.index.rank(cy[0], cyp[1], cy[1])
        if r1 == r2:
            return 0
        return -1 if r1 < r2 else 1


def sort_fragment(A: Sequence[TaggedReal], B: Sequence[TaggedReal],
                  fragment: Fragment, resolver: Optional[CartesianResolver],
                  ledger: Optional[ComparisonLedger] = None
                  ) -> list[tuple[int, int]]:
    """Sort fragment positions by ascending tagged sum A[x] + B[y].

    Comparisons answered by the resolver's difference index are free; the
    rest go through :func:`compare_sum` and cost one 4-linear tick each.
    """
    fragment.validate(len(A), len(B))
    if ledger is None:
        if resolver is None or resolver.index is None:
            raise ValueError("need a ledger when no difference index is given")
        ledger = resolver.index.ledger

    def compare(p1, p2):
        if p1 == p2:
            return 0
        if resolver is not None:
            r = resolver.resolve(p1[0], p2[0], p1[1], p2[1])
            if r is not None:
                return r
        return compare_sum(A[p1[0]], B[p1[1]], A[p2[0]], B[p2[1]], ledger)

    return merge_sort_counted(fragment.positions, compare)


# -- vectorised tick counting -------------------------------------------------
#
# The fast solver paths never run the Python mergesort above; they compute
# the exact number of comparisons it would make.  For a stable two-way merge
# of sorted runs L and R (ties go left), the comparison count is
# |L| + |R| - t where t is the length of the run flushed after the other
# side empties.  Both t and run maxima are permutation-invariant, so the
# count needs only the *unsorted* chunk contents at every width.

import numpy as np


def _merge_comparisons(lu, lt, ru, rt):
    """Comparison count of merging two sorted runs given as (value, tag) arrays."""
    la, lb = len(lu), len(ru)
    if la == 0 or lb == 0:
        return 0
    lmax_u = lu.max()
    lmax_t = lt[lu == lmax_u].max()
    rmax_u = ru.max()
    rmax_t = rt[ru == rmax_u].max()
    if (lmax_u, lmax_t) <= (rmax_u, rmax_t):
        cnt = int(((ru < lmax_u) | ((ru == lmax_u) & (rt < lmax_t))).sum())
        return la + cnt
    cnt = int(((lu < rmax_u) | ((lu == rmax_u) & (lt <= rmax_t))).sum())
    return lb + cnt


def mergesort_tick_count(u: np.ndarray, tags: Optional[np.ndarray] = None) -> int:
    """Comparisons the canonical mergesort makes on (u, tags) lex keys.

    Matches :func:`merge_sort_counted` with a comparator ordering by value
    then tag.  ``tags=None`` means all ties compare equal, which is what an
    instrumented raw-value comparator reports.
    """
    u = np.asarray(u, dtype=np.float64)
    n = len(u)
    if tags is None:
        tags = np.zeros(n, dtype=np.int64)
    else:
        tags = np.asarray(tags, dtype=np.int64)
    total = 0
    width = 1
    while width < n:
        nblocks = (n + 2 * width - 1) // (2 * width)
        full = 2 * width * (nblocks - 1)
        if nblocks > 1:
            bu = u[:full].reshape(nblocks - 1, 2 * width)
            bt = tags[:full].reshape(nblocks - 1, 2 * width)
            lu, ru = bu[:, :width], bu[:, width:]
            lt, rt = bt[:, :width], bt[:, width:]
            lmax_u = lu.max(axis=1)
            lmax_t = np.where(lu == lmax_u[:, None], lt, np.iinfo(np.int64).min).max(axis=1)
            rmax_u = ru.max(axis=1)
            rmax_t = np.where(ru == rmax_u[:, None], rt, np.iinfo(np.int64).min).max(axis=1)
            left_first = (lmax_u < rmax_u) | ((lmax_u == rmax_u) & (lmax_t <= rmax_t))
            cnt_r = ((ru < lmax_u[:, None]) |
                     ((ru == lmax_u[:, None]) & (rt < lmax_t[:, None]))).sum(axis=1)
            cnt_l = ((lu < rmax_u[:, None]) |
                     ((lu == rmax_u[:, None]) & (lt <= rmax_t[:, None]))).sum(axis=1)
            total += int(np.where(left_first, width + cnt_r, width + cnt_l).sum())
        # trailing block: left run of `width`, right run possibly short
        lo = full
        mid = min(lo + width, n)
        hi = n
        if mid < hi:
            lu1, ru1 = u[lo:mid], u[mid:hi]
            lt1, rt1 = tags[lo:mid], tags[mid:hi]
            total += _merge_comparisons(lu1, lt1, ru1, rt1)
        width *= 2
    return total
