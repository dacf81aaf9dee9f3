"""Convolution form of 3SUM: is A(i) + A(j) = A(i+j) for some i, j?

The blocked solver cuts the implicit (unsorted) sum matrix A+A into
index-aligned boxes, pays once to sort the within-block difference lists,
deduces every box's order for free, and then looks for each A(k) only in
the boxes its antidiagonal crosses.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from .core import ComparisonLedger, TaggedReal, merge_sort_counted, sort_differences


def oracle_conv3sum(values: Sequence[float]) -> Optional[tuple[int, int]]:
    """First (i, j) in lexicographic order with A(i) + A(j) = A(i+j)."""
    arr = [float(v) for v in values]
    n = len(arr)
    for i in range(n):
        for j in range(n - i):
            if arr[i] + arr[j] == arr[i + j]:
                return (i, j)
    return None


def antidiagonal_cells(n: int, k: int) -> list[tuple[int, int]]:
    """All in-range cells (i, k-i); rows and columns are pairwise distinct."""
    lo = max(0, k - (n - 1))
    hi = min(k, n - 1)
    return [(i, k - i) for i in range(lo, hi + 1)]


def _lower_bound(raws, key, ledger, arity=3):
    lo, hi = 0, len(raws)
    while lo < hi:
        mid = (lo + hi) // 2
        ledger.tick(arity)
        if raws[mid] >= key:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _upper_bound(raws, key, ledger, arity=3):
    lo, hi = 0, len(raws)
    while lo < hi:
        mid = (lo + hi) // 2
        ledger.tick(arity)
        if raws[mid] <= key:
            lo = mid + 1
        else:
            hi = mid
    return lo


def solve_conv_blocked(values: Sequence[float], group_size: Optional[int],
                       ledger: ComparisonLedger, probe_log: Optional[dict] = None):
    """Blocked search; returns a witness (i, j) or None.

    For each k the key A(k) is located inside each crossed box via a pair
    of boundary binary searches over the box's deduced order (3-linear
    ticks per probe); the matching run is then filtered to antidiagonal
    cells by index arithmetic alone.  When several cells on one
    antidiagonal match, the lexicographically least pair is reported.

    `probe_log`, when given, maps k to the list of candidate cells
    examined for that key.
    """
    arr = [float(v) for v in values]
    n = len(arr)
    if n == 0:
        return None
    g = group_size if group_size is not None else max(1, math.ceil(math.sqrt(n)))
    if g < 1:
        raise ValueError("group size must be >= 1")
    m = -(-n // g)

    def block_vals(b):
        return arr[b * g:min((b + 1) * g, n)]

    groups = [[TaggedReal(v, x, 0) for x, v in enumerate(block_vals(b))] for b in range(m)] \
        + [[TaggedReal(v, 0, y) for y, v in enumerate(block_vals(b))] for b in range(m)]
    dindex = sort_differences(groups, ledger)
    ledger.snapshot("differences_sorted")

    boxes: dict = {}

    def box(bi, bj):
        cached = boxes.get((bi, bj))
        if cached is None:
            vi = block_vals(bi)
            vj = block_vals(bj)

            def cmp(p, q, bi=bi, bj=bj):
                if p == q:
                    return 0
                r1 = dindex.rank(bi, p[0], q[0])
                r2 = dindex.rank(m + bj, q[1], p[1])
                return -1 if r1 < r2 else (1 if r1 > r2 else 0)

            order = merge_sort_counted(
                [(x, y) for x in range(len(vi)) for y in range(len(vj))], cmp)
            raws = [vi[x] + vj[y] for (x, y) in order]
            cached = (order, raws)
            boxes[(bi, bj)] = cached
        return cached

    for k in range(n):
        key = arr[k]
        cells = antidiagonal_cells(n, k)
        if probe_log is not None:
            probe_log[k] = list(cells)
        hits = []
        idx = 0
        while idx < len(cells):
            bi, bj = cells[idx][0] // g, cells[idx][1] // g
            run = [cells[idx]]
            idx += 1
            while idx < len(cells) and cells[idx][0] // g == bi and cells[idx][1] // g == bj:
                run.append(cells[idx])
                idx += 1
            order, raws = box(bi, bj)
            lb = _lower_bound(raws, key, ledger)
            ub = _upper_bound(raws, key, ledger)
            if lb >= ub:
                continue
            matched = {(bi * g + x, bj * g + y) for (x, y) in order[lb:ub]}
            hits.extend(cell for cell in run if cell in matched)
        if hits:
            return min(hits)
    return None
