"""3SUM solvers with instrumented comparison counts.

Four solver families share the same staircase search over a grid of
group-pair boxes:

* ``solve_quadratic`` - the classic two-pointer walk, one 3-linear tick
  per step.
* ``solve_decision_tree`` - groups the sorted input, pays for one sorted
  difference list, deduces every box's order from it for free, then
  binary-searches boxes.
* ``solve_subquadratic_simple`` - sorts boxes by enumerating all sorting
  permutations of a tiny box and matching boxes to permutations through
  bichromatic dominance.
* ``solve_subquadratic`` - the contour-catalog algorithm: boxes are
  certified piecewise by pairs of search contours anchored at a fixed
  position set, legal pairs are enumerated once per parameter choice, and
  dominance matching assigns a certified layer structure to every box.

The decision-tree solver has a vectorised fast path that computes the
exact tick counts of the reference implementation without materialising
tagged objects; equivalence is asserted in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from .core import (
    ComparisonLedger,
    TaggedReal,
    cmp_tagged,
    merge_sort_counted,
    mergesort_tick_count,
    sort_differences,
    sorted_counted,
)
from .dominance import BLUE, RED, LabeledPoint, report_dominating_pairs

SOUTHERN = "southern"
WESTERN = "western"

_REFERENCE_LIMIT = 256  # largest n the pure-Python decision tree handles by default


def default_group_size(n: int) -> int:
    """Group size sqrt(n log2(n+2)), the sweet spot for the grouped search."""
    if n <= 1:
        return 1
    return max(1, math.ceil(math.sqrt(n * math.log2(n + 2))))


# ---------------------------------------------------------------------------
# groups and boxes


@dataclass(frozen=True)
class Grouping:
    """Sorted input values cut into runs of `group_size` (last may be short)."""

    values: tuple[float, ...]
    group_size: int

    def __post_init__(self):
        if self.group_size < 1:
            raise ValueError("group size must be >= 1")
        if any(self.values[i] > self.values[i + 1] for i in range(len(self.values) - 1)):
            raise ValueError("values must be sorted ascending")

    @property
    def num_groups(self) -> int:
        n = len(self.values)
        return max(0, -(-n // self.group_size))

    def bounds(self, i: int) -> tuple[int, int]:
        n = len(self.values)
        start = i * self.group_size
        if not (0 <= start < n):
            raise IndexError(f"group {i} out of range")
        return start, min(start + self.group_size, n)

    def group_len(self, i: int) -> int:
        a, b = self.bounds(i)
        return b - a

    def group_values(self, i: int) -> tuple[float, ...]:
        a, b = self.bounds(i)
        return self.values[a:b]

    def value(self, i: int, local: int) -> float:
        a, b = self.bounds(i)
        if not (0 <= local < b - a):
            raise IndexError("local index out of range")
        return self.values[a + local]

    def gmin(self, i: int) -> float:
        a, _ = self.bounds(i)
        return self.values[a]

    def gmax(self, i: int) -> float:
        _, b = self.bounds(i)
        return self.values[b - 1]

    def row_tagged(self, i: int) -> list[TaggedReal]:
        return [TaggedReal(v, x, 0) for x, v in enumerate(self.group_values(i))]

    def col_tagged(self, i: int) -> list[TaggedReal]:
        return [TaggedReal(v, 0, y) for y, v in enumerate(self.group_values(i))]


class BoxView:
    """One group-pair box of a Cartesian sum, totally ordered via tags."""

    def __init__(self, rows: Sequence[TaggedReal], cols: Sequence[TaggedReal]):
        self.rows = list(rows)
        self.cols = list(cols)

    @classmethod
    def from_grouping(cls, grouping: Grouping, i: int, j: int) -> "BoxView":
        return cls(grouping.row_tagged(i), grouping.col_tagged(j))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.cols)

    def tagged(self, x: int, y: int) -> TaggedReal:
        return self.rows[x] + self.cols[y]

    def raw(self, x: int, y: int) -> float:
        return self.rows[x].u + self.cols[y].u

    def positions(self):
        for x in range(self.nrows):
            for y in range(self.ncols):
                yield (x, y)


# ---------------------------------------------------------------------------
# contours


@dataclass(frozen=True)
class Contour:
    """The staircase a two-pointer search traces through a box.

    ``steps`` are the visited positions starting at the NE corner;
    ``moves[t]`` is 'S' (value <= key, row pointer advances) or 'W'
    (value > key, column pointer retreats) at ``steps[t]``.
    """

    steps: tuple[tuple[int, int], ...]
    moves: tuple[str, ...]
    nrows: int
    ncols: int

    def __post_init__(self):
        if len(self.steps) != len(self.moves) or not self.steps:
            raise ValueError("steps and moves must align and be nonempty")
        if self.steps[0] != (0, self.ncols - 1):
            raise ValueError("contour must start at the NE corner")
        for t in range(len(self.steps) - 1):
            lo, hi = self.steps[t]
            nxt = (lo + 1, hi) if self.moves[t] == "S" else (lo, hi - 1)
            if self.steps[t + 1] != nxt:
                raise ValueError("contour steps must follow the moves")
        lo, hi = self.steps[-1]
        end = (lo + 1, hi) if self.moves[-1] == "S" else (lo, hi - 1)
        if not (end[0] == self.nrows or end[1] == -1):
            raise ValueError("contour must terminate off-grid")

    @property
    def exit(self) -> str:
        return SOUTHERN if self.moves[-1] == "S" else WESTERN

    def contains(self, pos: tuple[int, int]) -> bool:
        return pos in self.steps


def compute_contour(box: BoxView, key: TaggedReal) -> Contour:
    """Trace the two-pointer search for `key` through a tagged box.

    Every occurrence of the key lies on the returned path; positions the
    path classifies as <= key / > key match the box contents exactly.
    """
    steps = []
    moves = []
    lo, hi = 0, box.ncols - 1
    while lo < box.nrows and hi >= 0:
        steps.append((lo, hi))
        if key < box.tagged(lo, hi):
            moves.append("W")
            hi -= 1
        else:
            moves.append("S")
            lo += 1
    return Contour(tuple(steps), tuple(moves), box.nrows, box.ncols)


def leq_positions(contour: Contour) -> frozenset:
    """Positions whose value is <= the contour's key.

    On-path positions follow their move (S means <=); a column the path
    never reached (possible only on a southern exit) lies entirely on the
    <= side; otherwise everything above the path's rows in that column is
    <= and everything below is >.
    """
    move_at = dict(zip(contour.steps, contour.moves))
    col_rows: dict[int, list[int]] = {}
    for (r, c) in contour.steps:
        span = col_rows.setdefault(c, [r, r])
        span[0] = min(span[0], r)
        span[1] = max(span[1], r)
    min_col = min(col_rows)
    out = set()
    for i in range(contour.nrows):
        for j in range(contour.ncols):
            mv = move_at.get((i, j))
            if mv is not None:
                if mv == "S":
                    out.add((i, j))
            elif j < min_col:
                out.add((i, j))
            elif i < col_rows[j][0]:
                out.add((i, j))
    return frozenset(out)


@dataclass(frozen=True)
class Tripartition:
    """Box positions split by two nested contours: <= lower key, strictly
    between the keys, >= upper key."""

    low: frozenset
    mid: frozenset
    high: frozenset

    def validate(self, nrows: int, ncols: int) -> None:
        every = {(i, j) for i in range(nrows) for j in range(ncols)}
        if self.low | self.mid | self.high != every:
            raise ValueError("tripartition must cover the box")
        if self.low & self.mid or self.mid & self.high or self.low & self.high:
            raise ValueError("tripartition parts must be disjoint")


def make_tripartition(tau: Contour, anchor: tuple[int, int],
                      tau_prime: Contour, anchor_prime: tuple[int, int]
                      ) -> Tripartition:
    leq1 = leq_positions(tau)
    leq2 = leq_positions(tau_prime)
    if not leq1 <= leq2:
        raise ValueError("lower contour must lie above the upper contour")
    every = frozenset((i, j) for i in range(tau.nrows) for j in range(tau.ncols))
    mid = leq2 - leq1 - {anchor_prime}
    high = (every - leq2) | {anchor_prime}
    return Tripartition(leq1, frozenset(mid), frozenset(high))


# ---------------------------------------------------------------------------
# oracle and quadratic baseline


def oracle_3sum(values: Sequence[float]) -> Optional[tuple[float, float, float]]:
    """Exhaustive scan over all ordered triples (repeats allowed)."""
    arr = np.asarray(values, dtype=np.float64)
    n = len(arr)
    if n == 0:
        return None
    if n > 400:
        raise ValueError("oracle capped at n=400")
    sums = arr[:, None, None] + arr[None, :, None] + arr[None, None, :]
    idx = np.argwhere(sums == 0.0)
    if len(idx) == 0:
        return None
    i, j, k = idx[0]
    return (float(arr[i]), float(arr[j]), float(arr[k]))


def _sort_unique_counted(values, ledger):
    """Sort then deduplicate, both instrumented at arity 2."""
    svals = sorted_counted([float(v) for v in values], ledger)
    if not svals:
        return []
    out = [svals[0]]
    for t in range(1, len(svals)):
        ledger.tick(2)
        if svals[t] != svals[t - 1]:
            out.append(svals[t])
    return out


def solve_quadratic(a_vals, b_vals, c_vals, ledger: ComparisonLedger,
                    first_only: bool = False):
    """Two-pointer walk; returns the list of witness value triples.

    One 3-linear tick per walk step (the step's sign query answers both
    the equality test and the direction choice).  Equal sums report a
    witness and advance the low pointer.  Inputs are deduplicated so rows
    and columns of the implicit sum matrix hold distinct values, which
    makes the witness list complete.
    """
    ua = _sort_unique_counted(a_vals, ledger)
    ub = _sort_unique_counted(b_vals, ledger)
    witnesses = []
    if not ua or not ub:
        return witnesses
    for c in c_vals:
        key = -float(c)
        lo, hi = 0, len(ub) - 1
        while lo < len(ua) and hi >= 0:
            ledger.tick(3)
            s = ua[lo] + ub[hi]
            if s == key:
                witnesses.append((ua[lo], ub[hi], float(c)))
                if first_only:
                    return witnesses
                lo += 1
            elif key < s:
                hi -= 1
            else:
                lo += 1
    return witnesses


def quadratic_tick_count(a_vals, b_vals, c_vals, ledger: ComparisonLedger) -> bool:
    """Fast twin of :func:`solve_quadratic`: identical ledger counts and
    decision, no witness enumeration."""
    a = np.asarray(a_vals, dtype=np.float64)
    b = np.asarray(b_vals, dtype=np.float64)
    c = np.asarray(c_vals, dtype=np.float64)
    for arr in (a, b):
        ledger.tick(2, mergesort_tick_count(arr))
        if len(arr) > 1:
            ledger.tick(2, len(arr) - 1)
    ua = np.unique(a)
    ub = np.unique(b)
    if len(ua) == 0 or len(ub) == 0 or len(c) == 0:
        return False
    na, nb = len(ua), len(ub)
    keys = -c
    lend = np.searchsorted(ua, keys - ub[0], side="right")
    hend = np.searchsorted(ub, keys - ua[-1], side="right") - 1
    iters = np.where(lend < na, lend + nb, na + (nb - 1) - hend)
    ledger.tick(3, int(iters.sum()))
    found = False
    chunk = max(1, (1 << 22) // max(1, na))
    for base in range(0, len(keys), chunk):
        diff = keys[base:base + chunk, None] - ua[None, :]
        pos = np.searchsorted(ub, diff.ravel())
        ok = pos < nb
        if np.any(ub[np.minimum(pos, nb - 1)][ok] == diff.ravel()[ok]):
            found = True
            break
    return found


# ---------------------------------------------------------------------------
# instrumented binary search (the probe rule every path must follow)


def ternary_search(raws: Sequence[float], key: float, ledger: ComparisonLedger,
                   arity: int = 3):
    """Canonical three-way binary search; one tick per probe.

    Returns ('hit', index) or ('miss', insertion_point).
    """
    lo, hi = 0, len(raws) - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        ledger.tick(arity)
        v = raws[mid]
        if v == key:
            return ("hit", mid)
        if v < key:
            lo = mid + 1
        else:
            hi = mid - 1
    return ("miss", lo)


@lru_cache(maxsize=32)
def _binsearch_depths(length: int):
    """Probe counts of `ternary_search` on a length-`length` array of
    distinct values: per hit index and per miss insertion point."""
    node = np.zeros(length, dtype=np.int32)
    gap = np.zeros(length + 1, dtype=np.int32)
    stack = [(0, length - 1, 0)]
    while stack:
        lo, hi, made = stack.pop()
        if lo > hi:
            gap[lo] = made
            continue
        mid = (lo + hi) // 2
        node[mid] = made + 1
        stack.append((lo, mid - 1, made + 1))
        stack.append((mid + 1, hi, made + 1))
    return node, gap


# ---------------------------------------------------------------------------
# decision-tree solver


def solve_decision_tree(values, group_size: Optional[int], ledger: ComparisonLedger,
                        mode: str = "auto", debug: bool = False):
    """Grouped 3SUM search: sort, pay once for the difference list, deduce
    all box orders for free, then walk the group grid binary-searching
    each visited box.

    Snapshot labels step1_sorted / step2_differences / step3_boxes /
    step4_done mark the phases; the step2 -> step3 ledger delta is always
    zero.  Returns a witness triple or None.
    """
    arr = [float(v) for v in values]
    n = len(arr)
    if n == 0:
        return None
    g = group_size if group_size is not None else default_group_size(n)
    if g < 1:
        raise ValueError("group size must be >= 1")
    if mode == "auto":
        mode = "reference" if n <= _REFERENCE_LIMIT else "fast"
    if mode == "reference":
        return _decision_tree_reference(arr, g, ledger, debug)
    if mode == "fast":
        return _decision_tree_fast(np.asarray(arr, dtype=np.float64), g, ledger)
    raise ValueError(f"unknown mode {mode!r}")


def _decision_tree_reference(arr, g, ledger, debug):
    svals = sorted_counted(arr, ledger)
    ledger.snapshot("step1_sorted")
    n = len(svals)
    grouping = Grouping(tuple(svals), g)
    m = grouping.num_groups
    groups = [grouping.row_tagged(i) for i in range(m)] \
        + [grouping.col_tagged(i) for i in range(m)]
    dindex = sort_differences(groups, ledger)
    ledger.snapshot("step2_differences")

    # Deduce every box's sorted order from the difference ranks: a row-role
    # rank against a col-role rank answers each sum comparison, so no
    # comparison below touches the ledger.
    perms = {}
    raws = {}
    for i in range(m):
        vi = grouping.group_values(i)
        for j in range(m):
            vj = grouping.group_values(j)

            def cmp(p, q, i=i, j=j):
                if p == q:
                    return 0
                r1 = dindex.rank(i, p[0], q[0])
                r2 = dindex.rank(m + j, q[1], p[1])
                return -1 if r1 < r2 else (1 if r1 > r2 else 0)

            positions = [(x, y) for x in range(len(vi)) for y in range(len(vj))]
            order = merge_sort_counted(positions, cmp)
            perms[(i, j)] = order
            raws[(i, j)] = [vi[x] + vj[y] for (x, y) in order]
    ledger.snapshot("step3_boxes")

    witness = None
    for k in range(n):
        key = -svals[k]
        lo, hi = 0, k // g
        while lo <= hi:
            if debug:
                _assert_walk_invariant(svals, k, g, lo, hi)
            res, pos = ternary_search(raws[(lo, hi)], key, ledger)
            if res == "hit":
                x, y = perms[(lo, hi)][pos]
                witness = (grouping.value(lo, x), grouping.value(hi, y), svals[k])
                break
            ledger.tick(3)
            if grouping.gmax(lo) + grouping.gmin(hi) > key:
                hi -= 1
            else:
                lo += 1
        if witness is not None:
            break
    ledger.snapshot("step4_done")
    return witness


def _assert_walk_invariant(svals, k, g, lo, hi):
    # Any remaining witness value pair with both summands <= A(k) must keep
    # a representative of each value inside groups lo..hi.
    key = -svals[k]
    limit = svals[k]
    groups_of: dict = {}
    for idx, v in enumerate(svals):
        if v <= limit:
            groups_of.setdefault(v, set()).add(idx // g)
    for va, pgroups in groups_of.items():
        qgroups = groups_of.get(key - va)
        if qgroups is None:
            continue
        assert any(lo <= p <= hi for p in pgroups) \
            and any(lo <= q <= hi for q in qgroups), \
            f"walk invariant violated at k={k} lo={lo} hi={hi}"


def _decision_tree_fast(arr0: np.ndarray, g: int, ledger: ComparisonLedger):
    n = len(arr0)
    ledger.tick(2, mergesort_tick_count(arr0))
    arr = np.sort(arr0, kind="stable")
    ledger.snapshot("step1_sorted")

    m = -(-n // g)
    if m >= (1 << 20):
        raise ValueError("too many groups for the fast path")
    base = 2 * g + 2
    d_u = []
    d_t = []
    for role in (0, 1):
        for i in range(m):
            seg = arr[i * g:min((i + 1) * g, n)]
            d_u.append(np.subtract.outer(seg, seg).ravel())
            dt = np.subtract.outer(np.arange(len(seg)), np.arange(len(seg))).ravel()
            d_t.append(dt * base if role == 0 else dt)
    ledger.tick(4, mergesort_tick_count(np.concatenate(d_u), np.concatenate(d_t)))
    ledger.snapshot("step2_differences")
    ledger.snapshot("step3_boxes")

    gmins = arr[np.arange(m) * g].tolist()
    gmaxs = arr[np.minimum((np.arange(m) + 1) * g, n) - 1].tolist()
    visits = []
    for k in range(n):
        key = -arr[k]
        lo, hi = 0, k // g
        while lo <= hi:
            visits.append((k, lo, hi))
            if gmaxs[lo] + gmins[hi] > key:
                hi -= 1
            else:
                lo += 1

    nv = len(visits)
    probes = np.zeros(nv, dtype=np.int64)
    hits = np.zeros(nv, dtype=bool)
    by_box: dict[tuple[int, int], list[int]] = {}
    for vi, (k, lo, hi) in enumerate(visits):
        by_box.setdefault((lo, hi), []).append(vi)
    for (lo, hi), vidx in by_box.items():
        seg_r = arr[lo * g:min((lo + 1) * g, n)]
        seg_c = arr[hi * g:min((hi + 1) * g, n)]
        sums = np.sort(np.add.outer(seg_r, seg_c).ravel())
        length = len(sums)
        keys = np.array([-arr[visits[vi][0]] for vi in vidx])
        vidx_arr = np.asarray(vidx)
        if length > 1 and bool(np.any(sums[1:] == sums[:-1])):
            scratch = ComparisonLedger()
            for t, vi in enumerate(vidx):
                before = scratch.count(3)
                res, _ = ternary_search(sums, keys[t], scratch)
                probes[vi] = scratch.count(3) - before
                hits[vi] = res == "hit"
        else:
            node, gap = _binsearch_depths(length)
            pos = np.searchsorted(sums, keys)
            clipped = np.minimum(pos, length - 1)
            h = (pos < length) & (sums[clipped] == keys)
            probes[vidx_arr] = np.where(h, node[clipped], gap[pos])
            hits[vidx_arr] = h

    witness = None
    if hits.any():
        first = int(np.argmax(hits))
        ticks3 = int(probes[:first].sum()) + first + int(probes[first])
        k, lo, hi = visits[first]
        key = -arr[k]
        seg_r = arr[lo * g:min((lo + 1) * g, n)]
        seg_c = arr[hi * g:min((hi + 1) * g, n)]
        where = np.argwhere(np.add.outer(seg_r, seg_c) == key)
        x, y = where[0]
        witness = (float(seg_r[x]), float(seg_c[y]), float(arr[k]))
    else:
        ticks3 = int(probes.sum()) + nv
    ledger.tick(3, ticks3)
    ledger.snapshot("step4_done")
    return witness


# ---------------------------------------------------------------------------
# position sets


@dataclass(frozen=True)
class PointSet:
    """Anchor positions in a width x width box; both corners are mandatory."""

    width: int
    positions: frozenset

    def __post_init__(self):
        g = self.width
        if g < 1:
            raise ValueError("width must be >= 1")
        for (x, y) in self.positions:
            if not (0 <= x < g and 0 <= y < g):
                raise ValueError(f"position {(x, y)} out of range")
        if (0, 0) not in self.positions or (g - 1, g - 1) not in self.positions:
            raise ValueError("corner positions are mandatory")

    @property
    def count(self) -> int:
        return len(self.positions)


def random_point_set(width: int, count: int, rng: np.random.Generator) -> PointSet:
    """Corners plus count-2 distinct uniform positions."""
    corners = {(0, 0), (width - 1, width - 1)}
    if count < len(corners) or count > width * width:
        raise ValueError(f"count {count} infeasible for width {width}")
    rest = sorted({(x, y) for x in range(width) for y in range(width)} - corners)
    need = count - len(corners)
    chosen = rng.choice(len(rest), size=need, replace=False) if need else []
    positions = corners | {rest[int(t)] for t in chosen}
    return PointSet(width, frozenset(positions))


def grid_spacing(width: int, grid_side: int) -> int:
    return -(-(width + 1) // (grid_side + 1))


def grid_span(width: int, grid_side: int) -> int:
    """Largest between-region size any legal contour pair can have when the
    anchor set is the evenly spaced grid; with this span no box is ever bad."""
    return 2 * width * (grid_spacing(width, grid_side) - 1)


def deterministic_point_set(width: int, grid_side: int) -> PointSet:
    """Corners plus an evenly spaced grid_side x grid_side grid."""
    if grid_side < 0:
        raise ValueError("grid side must be >= 0")
    positions = {(0, 0), (width - 1, width - 1)}
    if grid_side > 0:
        delta = grid_spacing(width, grid_side)
        top = grid_side * delta - 1
        if top > width - 1:
            raise ValueError(f"grid {grid_side}x{grid_side} does not fit width {width}")
        for k in range(1, grid_side + 1):
            for l in range(1, grid_side + 1):
                positions.add((k * delta - 1, l * delta - 1))
    return PointSet(width, frozenset(positions))


def default_point_count(width: int, span: int) -> int:
    """Random-mode anchor count making a box bad with probability <~ 1/width."""
    g = width
    if g <= 1:
        return 1
    raw = 2 + math.ceil(3.0 * g * g * math.log(max(g, 2)) / (span + 1))
    return max(min(4, g * g), min(raw, g * g))


def _order_is_bad(order, positions, span) -> bool:
    run = 0
    for pos in order:
        if pos in positions:
            run = 0
        else:
            run += 1
            if run > span:
                return True
    return False


def is_bad(box: BoxView, point_set: PointSet, span: int) -> bool:
    """True iff more than `span` consecutive elements of the box's sorted
    order avoid the point set."""
    order = sorted(box.positions(), key=lambda p: box.tagged(*p).key())
    return _order_is_bad(order, point_set.positions, span)


# ---------------------------------------------------------------------------
# legal contour-pair catalog


@lru_cache(maxsize=16)
def _all_contours(width: int) -> tuple[Contour, ...]:
    out = []

    def walk(lo, hi, steps, moves):
        steps.append((lo, hi))
        for mv in ("S", "W"):
            moves.append(mv)
            nlo, nhi = (lo + 1, hi) if mv == "S" else (lo, hi - 1)
            if nlo == width or nhi == -1:
                out.append(Contour(tuple(steps), tuple(moves), width, width))
            else:
                walk(nlo, nhi, steps, moves)
            moves.pop()
        steps.pop()

    walk(0, width - 1, [], [])
    return tuple(out)


@dataclass(frozen=True)
class CatalogEntry:
    tau: Contour
    tau_prime: Contour
    anchor: tuple[int, int]
    anchor_prime: tuple[int, int]
    order: tuple  # mid-region positions in claimed ascending order
    parts: Tripartition
    key: bytes


@dataclass
class LegalPairCatalog:
    """All legal anchored contour pairs with all orderings of the between
    region; immutable after construction and reusable across instances."""

    width: int
    point_set: PointSet
    span: int
    entries: dict


def enumerate_legal_pairs(width: int, point_set: PointSet, span: int,
                          budget: int = 1_000_000) -> LegalPairCatalog:
    """Enumerate every (tau, tau', pi) with tau above tau', both anchored at
    point-set positions, and a between region avoiding the point set with at
    most `span` cells; for each, every ordering of the between region."""
    if span < 0:
        raise ValueError("span must be >= 0")
    if point_set.width != width:
        raise ValueError("point set width mismatch")
    g = width
    contours = _all_contours(g)
    pset = point_set.positions
    masks = []
    anchors = []
    for ct in contours:
        leq = leq_positions(ct)
        bits = 0
        for (x, y) in leq:
            bits |= 1 << (x * g + y)
        masks.append((leq, bits))
        anchors.append([pos for pos, mv in zip(ct.steps, ct.moves)
                        if mv == "S" and pos in pset])

    entries: dict[bytes, CatalogEntry] = {}
    for a, tau in enumerate(contours):
        if not anchors[a]:
            continue
        leq1, bits1 = masks[a]
        for b, tau_p in enumerate(contours):
            if not anchors[b]:
                continue
            leq2, bits2 = masks[b]
            if bits1 & ~bits2:
                continue  # tau must lie weakly above tau'
            mid_base = leq2 - leq1
            for anchor in anchors[a]:
                for anchor_p in anchors[b]:
                    if anchor == anchor_p or anchor_p in leq1:
                        continue
                    mid = mid_base - {anchor_p}
                    if len(mid) > span or mid & pset:
                        continue
                    parts = Tripartition(leq1, frozenset(mid),
                                         frozenset(
                                             (i, j) for i in range(g) for j in range(g)
                                             if (i, j) not in leq2 or (i, j) == anchor_p))
                    for pi in permutations(sorted(mid)):
                        key = repr((tau.moves, anchor, tau_p.moves, anchor_p, pi)).encode()
                        entries[key] = CatalogEntry(tau, tau_p, anchor, anchor_p,
                                                    pi, parts, key)
                        if len(entries) > budget:
                            raise ValueError(
                                f"catalog exceeds budget of {budget} entries; "
                                "reduce width or span")
    return LegalPairCatalog(g, point_set, span, entries)


_catalog_cache: dict = {}


def cached_catalog(width: int, point_set: PointSet, span: int,
                   budget: int = 1_000_000) -> LegalPairCatalog:
    key = (width, point_set.positions, span, budget)
    cat = _catalog_cache.get(key)
    if cat is None:
        cat = enumerate_legal_pairs(width, point_set, span, budget)
        _catalog_cache[key] = cat
    return cat


def _contour_coords(contour, anchor, vals, side):
    """Dominance coordinates certifying `contour` as the search path of the
    value at `anchor`.  Lexicographic (value, row tag, col tag) triples keep
    the certificate exact under ties."""
    l, m_ = anchor
    out = []
    for (pos, mv) in zip(contour.steps, contour.moves):
        if pos == anchor:
            continue
        tr, tc = pos
        sigma = 1 if mv == "W" else -1
        if side == "col":  # red point, built from a column group
            out.append((sigma * (vals[tc] - vals[m_]), 0, sigma * (tc - m_)))
        else:  # blue point, built from a row group
            out.append((sigma * (vals[l] - vals[tr]), sigma * (l - tr), 0))
    return out


def _order_coords(order, vals, side):
    out = []
    for t in range(len(order) - 1):
        (x0, y0), (x1, y1) = order[t], order[t + 1]
        if side == "col":
            out.append((vals[y1] - vals[y0], 0, y1 - y0))
        else:
            out.append((vals[x0] - vals[x1], x0 - x1, 0))
    return out


def _entry_coords(entry, vals, side):
    coords = _contour_coords(entry.tau, entry.anchor, vals, side)
    coords += _contour_coords(entry.tau_prime, entry.anchor_prime, vals, side)
    coords += _order_coords(entry.order, vals, side)
    return tuple(coords)


def match_boxes(grouping: Grouping, catalog: LegalPairCatalog,
                report=report_dominating_pairs) -> dict:
    """Assign catalog entries to boxes via bichromatic dominance.

    For each entry, every full column group becomes a red point and every
    full row group a blue point; a dominating pair certifies that the
    entry's contours and ordering are correct for that box.  Returns
    {(i, j): {(anchor, anchor'): entry}}.
    """
    g = catalog.width
    m = grouping.num_groups
    full = [i for i in range(m) if grouping.group_len(i) == g]
    assignments: dict = {}
    if not full:
        return assignments
    vals = {i: grouping.group_values(i) for i in full}
    max_dim = 4 * g - 4 + max(0, catalog.span - 1)
    for entry in catalog.entries.values():
        reds = [LabeledPoint(_entry_coords(entry, vals[j], "col"), RED, j)
                for j in full]
        blues = [LabeledPoint(_entry_coords(entry, vals[i], "row"), BLUE, i)
                 for i in full]
        if g >= 2:
            assert len(reds[0].coords) <= max_dim

        def sink(red, blue, entry=entry):
            box = (blue.id, red.id)
            slot = assignments.setdefault(box, {})
            pair = (entry.anchor, entry.anchor_prime)
            assert pair not in slot, "two catalog entries matched one box layer"
            slot[pair] = entry

        report(reds + blues, sink)
    return assignments


# ---------------------------------------------------------------------------
# per-box searchers for the catalog solvers


class _ChainSearch:
    """Search structure of a certified box: anchor values in ascending
    order, plus the ordered between-region for each consecutive gap."""

    def __init__(self, chain_positions, chain_raws, gap_orders, gap_raws, box):
        self.chain_positions = chain_positions
        self.chain_raws = chain_raws
        self.gap_orders = gap_orders
        self.gap_raws = gap_raws
        self.box = box

    def search(self, key, ledger):
        res, pos = ternary_search(self.chain_raws, key, ledger)
        if res == "hit":
            return self.chain_positions[pos]
        if pos == 0 or pos == len(self.chain_raws):
            return None
        order = self.gap_orders[pos - 1]
        if not order:
            return None
        res, idx = ternary_search(self.gap_raws[pos - 1], key, ledger)
        if res == "hit":
            return order[idx]
        return None


class _SortedSearch:
    """Fallback for short or uncertified boxes: sort outright, charging one
    4-linear tick per comparison, then binary search."""

    def __init__(self, box: BoxView, ledger: ComparisonLedger):
        def cmp(p, q):
            if p == q:
                return 0
            ledger.tick(4)
            return cmp_tagged(box.tagged(*p), box.tagged(*q))

        self.order = merge_sort_counted(list(box.positions()), cmp)
        self.raws = [box.raw(*p) for p in self.order]

    def search(self, key, ledger):
        res, pos = ternary_search(self.raws, key, ledger)
        if res == "hit":
            return self.order[pos]
        return None


def _build_box_searcher(grouping, i, j, point_set, assignments, ledger):
    g = grouping.group_size
    box = BoxView.from_grouping(grouping, i, j)
    if box.nrows != g or box.ncols != g:
        return _SortedSearch(box, ledger)
    links = assignments.get((i, j), {})
    nxt = {a: (b, e) for (a, b), e in links.items()}
    chain = [(0, 0)]
    entries = []
    while chain[-1] != (g - 1, g - 1) and len(chain) <= point_set.count:
        step = nxt.get(chain[-1])
        if step is None:
            break
        chain.append(step[0])
        entries.append(step[1])
    complete = (chain[-1] == (g - 1, g - 1)
                and len(chain) == point_set.count
                and len(links) == point_set.count - 1)
    if not complete:
        # bad box: its layer structure was not certified, sort it directly
        return _SortedSearch(box, ledger)
    chain_raws = [box.raw(*p) for p in chain]
    gap_orders = [e.order for e in entries]
    gap_raws = [[box.raw(*p) for p in e.order] for e in entries]
    return _ChainSearch(chain, chain_raws, gap_orders, gap_raws, box)


# ---------------------------------------------------------------------------
# subquadratic solvers


@dataclass
class SubquadraticParams:
    """Knobs for :func:`solve_subquadratic`.

    Deterministic mode anchors boxes at an evenly spaced grid (never bad);
    randomized mode draws the anchors, optionally screening several
    candidate sets against a sample of the recorded query list.
    """

    group_size: Optional[int] = None
    span: Optional[int] = None
    mode: str = "deterministic"
    epsilon: float = 0.5
    seed: int = 0
    point_count: Optional[int] = None
    grid_side: Optional[int] = None
    candidates: int = 1
    samples: int = 64
    catalog_budget: int = 1_000_000


def _fit_grid_side(width: int, wanted: Optional[int]) -> int:
    q = wanted if wanted is not None else math.ceil(math.sqrt(width))
    while q > 0 and q * grid_spacing(width, q) - 1 > width - 1:
        q -= 1
    return q


def _staircase_walk(n, g, svals, grouping, membership, ledger):
    for k in range(n):
        key = -svals[k]
        lo, hi = 0, k // g
        while lo <= hi:
            w = membership(lo, hi, key)
            if w is not None:
                x, y = w
                return (grouping.value(lo, x), grouping.value(hi, y), svals[k])
            ledger.tick(3)
            if grouping.gmax(lo) + grouping.gmin(hi) > key:
                hi -= 1
            else:
                lo += 1
    return None


def solve_subquadratic(values, params: Optional[SubquadraticParams],
                       ledger: ComparisonLedger):
    """Contour-catalog 3SUM.

    Pipeline: sort, group, pick the anchor point set, enumerate the legal
    contour-pair catalog (cached across calls), assign certified layers to
    boxes via dominance, then run the grouped staircase walk answering
    membership queries through each box's chain of anchors and ordered
    gaps.  Uncertified (bad) and short boxes are sorted directly at
    4-linear cost.
    """
    params = params or SubquadraticParams()
    arr = [float(v) for v in values]
    n = len(arr)
    if n == 0:
        return None
    g = params.group_size if params.group_size is not None else (2 if n < 512 else 3)
    if g < 1:
        raise ValueError("group size must be >= 1")

    if params.mode == "deterministic":
        q = _fit_grid_side(g, params.grid_side)
        point_set = deterministic_point_set(g, q)
        span = params.span if params.span is not None else grid_span(g, q)
        params.grid_side = q
    elif params.mode == "randomized":
        span = params.span if params.span is not None else g
        count = params.point_count if params.point_count is not None \
            else default_point_count(g, span)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(params.seed)))
        if params.candidates > 1:
            point_set = select_best_point_set(arr, g, count, span,
                                              params.candidates, params.samples, rng)
        else:
            point_set = random_point_set(g, count, rng)
        params.point_count = count
    else:
        raise ValueError(f"unknown mode {params.mode!r}")
    # record the resolved parameters so callers can report them
    params.group_size = g
    params.span = span

    catalog = cached_catalog(g, point_set, span, params.catalog_budget)

    svals = sorted_counted(arr, ledger)
    ledger.snapshot("step1_sorted")
    grouping = Grouping(tuple(svals), g)
    assignments = match_boxes(grouping, catalog)
    ledger.snapshot("matched_boxes")

    searchers: dict = {}

    def membership(lo, hi, key):
        s = searchers.get((lo, hi))
        if s is None:
            s = _build_box_searcher(grouping, lo, hi, point_set, assignments, ledger)
            searchers[(lo, hi)] = s
        return s.search(key, ledger)

    witness = _staircase_walk(n, g, svals, grouping, membership, ledger)
    ledger.snapshot("step4_done")
    return witness


def solve_subquadratic_simple(values, group_size: Optional[int], epsilon: float,
                              ledger: ComparisonLedger, perm_budget: int = 400_000):
    """Whole-box permutation matching: enumerate every sorting permutation
    of a full box and match boxes to permutations via dominance, then walk.

    Feasible only for tiny group sizes ((g*g)! permutations)."""
    del epsilon  # cost-model knob; the reporting algorithm needs no tuning here
    arr = [float(v) for v in values]
    n = len(arr)
    if n == 0:
        return None
    g = group_size if group_size is not None else (1 if n < 4 else 2)
    if g < 1:
        raise ValueError("group size must be >= 1")
    if math.factorial(g * g) > perm_budget:
        raise ValueError(f"group size {g} needs {math.factorial(g*g)} permutations; "
                         "raise perm_budget or shrink the group")

    svals = sorted_counted(arr, ledger)
    ledger.snapshot("step1_sorted")
    grouping = Grouping(tuple(svals), g)
    m = grouping.num_groups
    full = [i for i in range(m) if grouping.group_len(i) == g]
    vals = {i: grouping.group_values(i) for i in full}

    assigned: dict = {}
    for pi in permutations(range(g * g)):
        pos = [divmod(t, g) for t in pi]
        reds = []
        blues = []
        for j in full:
            vj = vals[j]
            coords = tuple((vj[pos[t + 1][1]] - vj[pos[t][1]], 0,
                            pos[t + 1][1] - pos[t][1])
                           for t in range(g * g - 1))
            reds.append(LabeledPoint(coords, RED, j))
        for i in full:
            vi = vals[i]
            coords = tuple((vi[pos[t][0]] - vi[pos[t + 1][0]],
                            pos[t][0] - pos[t + 1][0], 0)
                           for t in range(g * g - 1))
            blues.append(LabeledPoint(coords, BLUE, i))

        def sink(red, blue, pos=pos):
            box = (blue.id, red.id)
            assert box not in assigned, "two permutations matched one box"
            assigned[box] = pos

        report_dominating_pairs(reds + blues, sink)
    for i in full:
        for j in full:
            assert (i, j) in assigned, "full box left unmatched"
    ledger.snapshot("matched_boxes")

    searchers: dict = {}

    def membership(lo, hi, key):
        s = searchers.get((lo, hi))
        if s is None:
            box = BoxView.from_grouping(grouping, lo, hi)
            if (lo, hi) in assigned:
                order = assigned[(lo, hi)]
                raws = [box.raw(*p) for p in order]
                s = ("order", order, raws)
            else:
                s = ("sorted", _SortedSearch(box, ledger))
            searchers[(lo, hi)] = s
        if s[0] == "order":
            res, idx = ternary_search(s[2], key, ledger)
            return s[1][idx] if res == "hit" else None
        return s[1].search(key, ledger)

    witness = _staircase_walk(n, g, svals, grouping, membership, ledger)
    ledger.snapshot("step4_done")
    return witness


def select_best_point_set(values, group_size: int, count: int, span: int,
                          candidates: int, samples: int,
                          rng: np.random.Generator) -> PointSet:
    """Draw several random anchor sets and keep the one whose estimated bad
    fraction over the recorded query list is smallest.

    The truncated run records every membership query (k, i, j) the walk
    would ask without answering it; each candidate is scored by sampling
    queries and sorting the sampled box to test badness.
    """
    if candidates < 1 or samples < 1:
        raise ValueError("candidates and samples must be >= 1")
    g = group_size
    svals = sorted(float(v) for v in values)
    n = len(svals)
    grouping = Grouping(tuple(svals), g)

    queries = []
    for k in range(n):
        key = -svals[k]
        lo, hi = 0, k // g
        while lo <= hi:
            queries.append((k, lo, hi))
            if grouping.gmax(lo) + grouping.gmin(hi) > key:
                hi -= 1
            else:
                lo += 1

    cands = [random_point_set(g, count, rng) for _ in range(candidates)]
    if not queries:
        return cands[0]

    order_cache: dict = {}

    def box_order(i, j):
        key = (i, j)
        if key not in order_cache:
            box = BoxView.from_grouping(grouping, i, j)
            order_cache[key] = sorted(box.positions(),
                                      key=lambda p: box.tagged(*p).key())
        return order_cache[key]

    best = None
    for idx, ps in enumerate(cands):
        picks = rng.integers(0, len(queries), size=samples)
        bad = 0
        for t in picks:
            _, i, j = queries[int(t)]
            if _order_is_bad(box_order(i, j), ps.positions, span):
                bad += 1
        estimate = bad / samples
        if best is None or estimate < best[0]:
            best = (estimate, idx, ps)
    return best[2]
