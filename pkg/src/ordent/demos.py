"""Two worked separation examples on the tent map, computed exactly.

``separation_demo``: the observable ``Y = 2 on [0,1/3], 3 on (1/3,2/3],
1 on (2/3,1]`` and the states 1 and 5/6.  Comparisons against time 0 never
separate them, although ``Y o T`` separates them at order 1.

``ordered_observables_demo``: ``X < Y`` in the observable order, yet
``P_d`` of ``X`` separates 1/4 and 3/4 while ``P_d`` of ``Y`` never does,
so ``P_d^Y`` does not refine ``P_d^X``.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .labels import check_observable_order, separated
from .systems import SystemSpec, example1_observable, example2_observables, observe, orbit


def _rows(x0, observables, length):
    states = orbit(SystemSpec("tent", x0, length, mode="exact"))
    return observe(states, observables)


def separation_demo(d_max: int = 12) -> dict:
    Y = example1_observable()
    w1, w2 = Fraction(1), Fraction(5, 6)
    r1 = _rows(w1, [Y], d_max + 2)
    r2 = _rows(w2, [Y], d_max + 2)
    # Y o T rows are the Y rows shifted by one step
    yt1, yt2 = r1[:, 1:], r2[:, 1:]
    return {
        "states": [str(w1), str(w2)],
        "rows": [[int(v) for v in r1[0]], [int(v) for v in r2[0]]],
        "ptilde_separated": {d: separated(r1[:, :d + 1], r2[:, :d + 1], "Ptilde")
                             for d in range(1, d_max + 1)},
        "p_YoT_separated_d1": separated(yt1[:, :2], yt2[:, :2], "P"),
    }


def ordered_observables_demo(d_max: int = 12, grid: int = 10_000) -> dict:
    X, Y = example2_observables()
    w1, w2 = Fraction(1, 4), Fraction(3, 4)
    length = d_max + 1
    x1, x2 = _rows(w1, [X], length), _rows(w2, [X], length)
    y1, y2 = _rows(w1, [Y], length), _rows(w2, [Y], length)
    pts = [Fraction(k, grid - 1) for k in range(grid)]
    xs = np.array([float(X(p)) for p in pts])
    ys = np.array([float(Y(p)) for p in pts])
    return {
        "states": [str(w1), str(w2)],
        "rows": {
            "X": [[int(v) for v in x1[0]], [int(v) for v in x2[0]]],
            "Y": [[int(v) for v in y1[0]], [int(v) for v in y2[0]]],
        },
        "x_precedes_y": check_observable_order(xs, ys),
        "p_X_separated_d1": separated(x1[:, :2], x2[:, :2], "P"),
        "p_Y_separated": {d: separated(y1[:, :d + 1], y2[:, :d + 1], "P")
                          for d in range(1, d_max + 1)},
    }
