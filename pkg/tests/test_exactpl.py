from fractions import Fraction
from math import log

import mpmath
import numpy as np
import pytest

from ordent import InvalidArgumentError, ResourceLimitError
from ordent.exactpl import (Cell, IntervalCellPartition, Piece, PiecewiseLinearMap, binary_partition,
                            compose, entropy_rate_table, exact_orbit, identity_map, iterate, join,
                            level_set_partition, ordinal_cells, partition_entropy, partition_rate_table,
                            pullback_refine, tent_map)
from ordent.intervals import Interval
from ordent.labels import label, label_sequence
from ordent.systems import SystemSpec, example1_observable, orbit

F = Fraction
LN2 = mpmath.log(2)


def close(a, b, tol=1e-25):
    with mpmath.workdps(50):
        return abs(mpmath.mpf(a) - b) < tol


def test_tent_evaluation():
    T = tent_map()
    assert T(F(0)) == 0 and T(F(1, 2)) == 1 and T(F(1)) == 0 and T(F(5, 6)) == F(1, 3)
    assert T.is_self_map()
    assert T.preimages(F(1, 2)) == {F(1, 4), F(3, 4)}


def test_map_validation():
    with pytest.raises(InvalidArgumentError):
        PiecewiseLinearMap([Piece(Interval(0, F(1, 2)), 1, 0), Piece(Interval(F(1, 2), 1), 1, 0)])
    with pytest.raises(InvalidArgumentError):
        PiecewiseLinearMap.from_breakpoints([0, F(1, 2)], [(1, 0)])
    with pytest.raises(InvalidArgumentError):
        PiecewiseLinearMap.from_breakpoints([0, 1], [(1, 0), (1, 0)])


def test_compose_tent_twice():
    T2 = compose(tent_map(), tent_map())
    assert T2.breakpoints == [0, F(1, 4), F(1, 2), F(3, 4), 1]
    assert [p.slope for p in T2.pieces] == [4, -4, 4, -4]
    assert compose(identity_map(), tent_map()) == tent_map()
    assert compose(tent_map(), identity_map()) == tent_map()


@pytest.mark.parametrize("t", range(0, 13))
def test_tent_iterate_piece_count(t):
    assert len(iterate(tent_map(), t)) == 2**t


def test_exact_orbit():
    assert exact_orbit(tent_map(), F(5, 6), 5) == [F(5, 6), F(1, 3), F(2, 3), F(2, 3), F(2, 3)]


def test_tent_p1_cells():
    cells = ordinal_cells(tent_map(), None, 1, "P")
    m = {c.label.outcomes: c for c in cells}
    assert m["<"].support == (Interval.open(0, F(2, 3)),)
    assert m["<"].measure == F(2, 3) and m["G"].measure == F(1, 3)
    with mpmath.workdps(50):
        assert close(partition_entropy(cells), mpmath.log(3) - mpmath.mpf(2) / 3 * mpmath.log(2))


def test_p1_matches_dense_grid():
    cells = ordinal_cells(tent_map(), None, 1, "P")
    T = tent_map()
    for k in range(0, 3001):
        x = F(k, 3000)
        assert cells.label_at(x) == label([[x, T(x)]], "P")


def test_identity_map_single_r_cell():
    for d in (1, 3):
        cells = ordinal_cells(identity_map(), None, d, "R")
        assert len(cells) == 1 and cells.cells[0].measure == 1
        assert set(cells.cells[0].label.outcomes) == {"="}


def test_cells_are_exact_partition():
    for fam in ("P", "Ptilde", "Q", "R"):
        cells = ordinal_cells(tent_map(), None, 3, fam)
        assert sum((c.measure for c in cells), F(0)) == 1
        assert all(isinstance(c.measure, Fraction) for c in cells)


def test_cells_with_step_observable():
    cells = ordinal_cells(tent_map(), example1_observable(), 2, "R")
    T = tent_map()
    Y = example1_observable()
    for k in range(0, 1201):
        x = F(k, 1200)
        row = [Y(x), Y(T(x)), Y(T(T(x)))]
        assert cells.label_at(x) == label([row], "R")


def test_monotone_conjugation_invariance():
    # a strictly increasing rational PL homeomorphism applied to the observable
    h = PiecewiseLinearMap.from_breakpoints([0, F(1, 3), 1], [(F(1, 2), 0), (F(5, 4), F(-1, 4))])
    for d in (1, 2, 3):
        a = ordinal_cells(tent_map(), None, d, "P")
        b = ordinal_cells(tent_map(), h, d, "P")
        assert a.measures == b.measures


def test_order_monotonicity():
    hs = [partition_entropy(ordinal_cells(tent_map(), None, d, "P")) for d in (1, 2, 3, 4)]
    assert all(b >= a for a, b in zip(hs, hs[1:]))


def test_binary_pullback_dyadic():
    base = binary_partition()
    for t in range(1, 9):
        ref = pullback_refine(base, tent_map(), t)
        assert len(ref) == 2**t
        assert all(c.measure == F(1, 2**t) for c in ref)


def test_pullback_t1_unchanged_and_p1_t2():
    p1 = ordinal_cells(tent_map(), None, 1, "P")
    assert pullback_refine(p1, tent_map(), 1) is p1
    ref = pullback_refine(p1, tent_map(), 2)
    assert sum((c.measure for c in ref), F(0)) == 1
    assert len(ref) <= 4 * len(p1)
    with pytest.raises(InvalidArgumentError):
        pullback_refine(p1, tent_map(), 0)


def test_partition_entropy_simple():
    one = level_set_partition(PiecewiseLinearMap.from_breakpoints([0, 1], [(0, 5)]))
    assert partition_entropy(one) == 0
    cells = pullback_refine(binary_partition(), tent_map(), 5)
    with mpmath.workdps(50):
        assert close(partition_entropy(cells, 40), 5 * mpmath.log(2), mpmath.mpf(10) ** -35)


def test_level_sets_need_steps():
    with pytest.raises(InvalidArgumentError):
        level_set_partition(tent_map())


def test_join():
    a = binary_partition()
    b = level_set_partition(PiecewiseLinearMap.from_breakpoints([0, F(1, 4), 1], [(0, 1), (0, 2)]))
    j = join(a, b)
    assert sorted(j.measures.values()) == [F(1, 4), F(1, 4), F(1, 2)]


def test_partition_validation():
    with pytest.raises(InvalidArgumentError):
        IntervalCellPartition([Cell("a", (Interval(0, F(1, 2)),), F(1, 2))])
    with pytest.raises(InvalidArgumentError):
        IntervalCellPartition([Cell("a", (Interval(0, 1),), F(1, 2))])


def test_rate_table_binary():
    rows = partition_rate_table(binary_partition(), tent_map(), 6)
    with mpmath.workdps(50):
        ln2 = mpmath.log(2)
        for r in rows:
            assert close(r.rate, ln2) and close(r.increment, ln2)


def test_rate_table_identity_decays():
    rows = entropy_rate_table(identity_map(), example1_observable(), 1, "R", 5)
    h1 = rows[0].block_entropy
    for r in rows:
        assert close(r.block_entropy, h1) and close(r.rate, h1 / r.t)


def test_tent_ordinal_rate_properties():
    tables = {d: entropy_rate_table(tent_map(), None, d, "P", 6) for d in (1, 2, 3)}
    for d, rows in tables.items():
        inc = [r.increment for r in rows]
        assert all(b <= a + mpmath.mpf(1e-9) for a, b in zip(inc[1:], inc[2:]))
        assert max(inc[1:]) <= LN2 + 1e-9
    last = [tables[d][-1].increment for d in (1, 2, 3)]
    assert last[0] <= last[1] + 1e-9 <= last[2] + 2e-9
    assert float(tables[1][-1].increment) == pytest.approx(2 / 3 * log(2), abs=1e-12)
    assert float(tables[2][-1].increment) == pytest.approx(0.8 * log(2), abs=1e-12)


def test_budget():
    with pytest.raises(ResourceLimitError):
        ordinal_cells(tent_map(), None, 6, "P", budget=100)
    with pytest.raises(ResourceLimitError):
        pullback_refine(binary_partition(), tent_map(), 8, budget=64)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("ORDENT_BUDGET", "40")
    with pytest.raises(ResourceLimitError):
        ordinal_cells(tent_map(), None, 4, "P")


def test_cells_text_format():
    text = ordinal_cells(tent_map(), None, 1, "P").to_text()
    assert text.splitlines()[1] == "P|1|1|<\t0/1\t2/3\t()\t2/3"


@pytest.mark.slow
def test_orbit_frequencies_match_measures_float_orbit():
    # float orbit through the conjugate logistic map, coarse check only
    x = orbit(SystemSpec("tent", "0.3", 200_000))
    cells = ordinal_cells(tent_map(), None, 2, "P")
    windows = np.lib.stride_tricks.sliding_window_view(x, 3)[:, None, :]
    labs = label_sequence(windows, "P")
    for c in cells.positive_cells():
        freq = sum(1 for lab in labs if lab == c.label) / len(labs)
        assert abs(freq - float(c.measure)) < 0.01
