import numpy as np

from threebench.conv3sum import antidiagonal_cells, oracle_conv3sum, solve_conv_blocked
from threebench.core import ComparisonLedger


def test_oracle_zero_singleton():
    assert oracle_conv3sum([0.0]) == (0, 0)


def test_oracle_no_witness():
    assert oracle_conv3sum([1.0, 2.0, 3.0]) is None


def test_oracle_finds_shifted_sum():
    # (1,1) precedes (1,2) lexicographically: A(1)+A(1) = 2 = A(2)
    assert oracle_conv3sum([5.0, 1.0, 2.0, 3.0]) == (1, 1)
    assert oracle_conv3sum([9.0, 1.0, 8.0, 9.0]) == (1, 2)  # 1 + 8 = A(3) = 9


def test_blocked_width_one_matches_oracle():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n = int(rng.integers(1, 40))
        vals = rng.integers(-10, 11, size=n).astype(float).tolist()
        led = ComparisonLedger()
        got = solve_conv_blocked(vals, 1, led)
        assert (got is None) == (oracle_conv3sum(vals) is None)


def test_blocked_finds_planted_witness():
    rng = np.random.default_rng(1)
    vals = rng.integers(-10 ** 6, 10 ** 6, size=64).astype(float)
    vals[40] = vals[15] + vals[25]
    led = ComparisonLedger()
    got = solve_conv_blocked(vals.tolist(), 4, led)
    assert got is not None
    i, j = got
    assert vals[i] + vals[j] == vals[i + j]


def test_blocked_matches_oracle_across_widths():
    rng = np.random.default_rng(2)
    for trial in range(60):
        n = int(rng.integers(1, 80))
        uni = int(rng.choice([4, 25, 10 ** 6]))
        vals = rng.integers(-uni, uni + 1, size=n).astype(float).tolist()
        g = (1, 2, 4, 8)[trial % 4]
        led = ComparisonLedger()
        got = solve_conv_blocked(vals, g, led)
        want = oracle_conv3sum(vals)
        assert (got is None) == (want is None)
        if got is not None:
            i, j = got
            assert vals[i] + vals[j] == vals[i + j]


def test_probed_cells_are_exactly_the_antidiagonal():
    rng = np.random.default_rng(3)
    n = 48
    vals = rng.integers(10 ** 5, 10 ** 6, size=n).astype(float).tolist()
    log: dict = {}
    led = ComparisonLedger()
    solve_conv_blocked(vals, 4, led, probe_log=log)
    assert set(log) == set(range(n))
    for k, cells in log.items():
        want = {(i, k - i) for i in range(max(0, k - n + 1), min(k, n - 1) + 1)}
        assert set(cells) == want
        rows = [i for (i, _) in cells]
        cols = [j for (_, j) in cells]
        assert len(set(rows)) == len(rows) and len(set(cols)) == len(cols)
        assert set(cells) == set(antidiagonal_cells(n, k))


def test_only_3linear_probes_after_difference_sort():
    rng = np.random.default_rng(4)
    vals = rng.integers(-50, 51, size=32).astype(float).tolist()
    led = ComparisonLedger()
    solve_conv_blocked(vals, 4, led)
    diff_phase = led.snapshot_counts("differences_sorted")
    assert set(diff_phase) <= {4}
    tail = {a: led.count(a) - diff_phase.get(a, 0) for a in led.count_klinear}
    assert all(v == 0 for a, v in tail.items() if a != 3)


def test_empty_input():
    led = ComparisonLedger()
    assert solve_conv_blocked([], 2, led) is None
