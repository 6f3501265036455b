"""Example dynamical systems, orbit generators and step observables."""
from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from ._errors import InvalidArgumentError
from .exactpl import Piece, PiecewiseLinearMap, identity_map, tent_map
from .intervals import Interval, as_fraction, intersect, merge_adjacent, parse_interval

__all__ = [
    "MAPS",
    "GOLDEN_ROTATION",
    "EXACT_TENT_SEED",
    "SystemSpec",
    "StepObservable",
    "IDENTITY",
    "orbit",
    "tent_orbit_numerators",
    "observe",
    "observation_windows",
    "refine_observable",
    "example1_observable",
    "example2_observables",
    "system_map",
]

MAPS = ("tent", "logistic", "rotation", "identity", "noise")

GOLDEN_ROTATION = (math.sqrt(5) - 1) / 2

# 2 is a primitive root mod this prime, so tent orbits of p/q have period ~ q/2
EXACT_TENT_DENOMINATOR = 1152921504606846883
EXACT_TENT_SEED = Fraction(712544676207699847, EXACT_TENT_DENOMINATOR)

FLOAT_TENT_DIRECT_LIMIT = 1000


@dataclass
class SystemSpec:
    """Declarative description of an orbit.

    Attributes
    ----------
    map : str
        One of ``tent``, ``logistic``, ``rotation``, ``identity``, ``noise``.
    initial : str, float or Fraction
        Initial state; strings such as ``"5/6"`` are read exactly.
    length : int
        Number of states, including the initial one.
    mode : {"float", "exact"}
        Exact mode keeps every state a ``Fraction`` (tent, rotation with a
        rational angle, identity).
    params : dict
        ``r`` for logistic (default 4), ``alpha`` for rotation (default the
        golden-ratio fractional part).
    seed : int or None
        RNG seed, used only by ``noise``.
    """

    map: str = "tent"
    initial: Any = "0.1"
    length: int = 1000
    mode: str = "float"
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.map not in MAPS:
            raise InvalidArgumentError(f"unknown map {self.map!r}; expected one of {MAPS}")
        if self.mode not in ("float", "exact"):
            raise InvalidArgumentError(f"mode must be 'float' or 'exact', got {self.mode!r}")
        if int(self.length) < 1:
            raise InvalidArgumentError("orbit length must be >= 1")
        self.length = int(self.length)
        if self.mode == "exact" and self.map in ("logistic", "noise"):
            raise InvalidArgumentError(f"exact mode is not available for {self.map}")

    @classmethod
    def parse(cls, text: str) -> "SystemSpec":
        """Read a JSON object or ``key=value`` pairs (whitespace, comma or newline separated).

        Unknown keys other than the dataclass fields go into ``params``.
        """
        text = text.strip()
        if text.startswith("{"):
            try:
                raw = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InvalidArgumentError(f"bad system JSON: {exc}") from exc
        else:
            raw = {}
            for tok in text.replace(",", " ").split():
                if "=" not in tok:
                    raise InvalidArgumentError(f"expected key=value, got {tok!r}")
                k, v = tok.split("=", 1)
                raw[k.strip()] = v.strip()
        known = {"map", "initial", "length", "mode", "seed"}
        kw = {k: raw[k] for k in known if k in raw}
        params = dict(raw.get("params", {}))
        params.update({k: v for k, v in raw.items() if k not in known and k != "params"})
        if "length" in kw:
            kw["length"] = int(kw["length"])
        if kw.get("seed") is not None:
            kw["seed"] = int(kw["seed"])
        return cls(params=params, **kw)


def _initial(spec: SystemSpec, exact: bool):
    x = spec.initial
    if exact:
        return as_fraction(x)
    if isinstance(x, str):
        return float(Fraction(x))
    return float(x)


def tent_orbit_numerators(p: int, q: int, length: int) -> np.ndarray:
    """Exact tent orbit of ``p/q`` as numerators over the fixed denominator ``q``.

    ``T(p/q)`` is ``2p/q`` or ``(2q - 2p)/q``, so the denominator never grows
    and comparisons between states are comparisons of integers.
    """
    if not 0 <= p <= q:
        raise InvalidArgumentError("need 0 <= p <= q")
    dtype = np.int64 if 2 * q < 2**63 else object
    out = np.empty(length, dtype=dtype)
    two_q = 2 * q
    for i in range(length):
        out[i] = p
        p = 2 * p if 2 * p <= q else two_q - 2 * p
    return out


def _logistic(x0: float, r: float, n: int) -> np.ndarray:
    out = np.empty(n)
    x = x0
    for i in range(n):
        out[i] = x
        x = r * x * (1.0 - x)
    return out


def orbit(spec: SystemSpec):
    """States ``(w, T(w), ..., T^{length-1}(w))``.

    Returns a list of ``Fraction`` in exact mode and a float array otherwise.
    Float tent orbits longer than 1000 states are produced through the
    logistic map and the order-preserving conjugacy
    ``y = (2/pi) * arcsin(sqrt(x))``, since direct float iteration of the
    tent map collapses onto 0 after about 50 steps.
    """
    n = spec.length
    exact = spec.mode == "exact"
    m = spec.map
    if m == "noise":
        return np.random.default_rng(spec.seed).random(n)
    x0 = _initial(spec, exact)
    if not (0 <= x0 <= 1):
        raise InvalidArgumentError(f"initial state {spec.initial} outside [0, 1]")
    if m == "identity":
        return [x0] * n if exact else np.full(n, x0)
    if m == "tent":
        if exact:
            p, q = x0.numerator, x0.denominator
            return [Fraction(int(v), q) for v in tent_orbit_numerators(p, q, n)]
        if n <= FLOAT_TENT_DIRECT_LIMIT:
            out = np.empty(n)
            x = x0
            for i in range(n):
                out[i] = x
                x = 2 * x if x <= 0.5 else 2 - 2 * x
            return out
        xs = _logistic(math.sin(math.pi * x0 / 2) ** 2, 4.0, n)
        return (2 / math.pi) * np.arcsin(np.sqrt(np.clip(xs, 0.0, 1.0)))
    if m == "logistic":
        r = float(spec.params.get("r", 4.0))
        if not 0 <= r <= 4:
            raise InvalidArgumentError("logistic parameter r must lie in [0, 4]")
        return _logistic(x0, r, n)
    if m == "rotation":
        alpha = spec.params.get("alpha", GOLDEN_ROTATION)
        if exact:
            a = as_fraction(alpha)
            out, x = [], x0
            for _ in range(n):
                out.append(x)
                x = (x + a) % 1
            return out
        a = float(Fraction(alpha)) if isinstance(alpha, str) else float(alpha)
        # x0 + k*alpha computed directly avoids accumulated rounding
        return np.mod(x0 + a * np.arange(n), 1.0)
    raise InvalidArgumentError(f"unknown map {m!r}")


class StepObservable:
    """Piecewise-constant observable on [0, 1].

    Parameters
    ----------
    pieces : sequence of (interval, value)
        Intervals (``Interval`` or strings like ``"(1/3,2/3]"``) tiling
        [0, 1]; several intervals may share a value.
    """

    def __init__(self, pieces: Sequence[tuple[Any, Any]]):
        items = []
        for iv, val in pieces:
            if isinstance(iv, str):
                iv = parse_interval(iv)
            if isinstance(val, (int, Fraction)):
                val = Fraction(val)
            elif isinstance(val, float) and val.is_integer():
                val = Fraction(int(val))
            items.append((iv, val))
        items.sort(key=lambda e: (e[0].lo, not e[0].lo_closed))
        self.pieces = tuple(items)
        # validate tiling through the PL representation
        self._pl = PiecewiseLinearMap(Piece(iv, 0, Fraction(v)) for iv, v in items)
        self._los = [iv.lo for iv, _ in items]

    @classmethod
    def from_levels(cls, levels: dict) -> "StepObservable":
        """``{value: [interval, ...]}`` form, as written in ``sum a_l * 1_{C_l}``."""
        return cls([(iv, v) for v, ivs in levels.items() for iv in ivs])

    @property
    def values(self) -> list:
        return sorted({v for _, v in self.pieces})

    def level_set(self, value) -> list[Interval]:
        return merge_adjacent(iv for iv, v in self.pieces if v == value)

    def partition(self) -> dict:
        """Level sets keyed by value."""
        return {v: self.level_set(v) for v in self.values}

    def __call__(self, x):
        """Exact evaluation at a scalar (Fraction, int or float)."""
        i = bisect_right(self._los, x) - 1
        for k in (i, i - 1, i - 2):
            if 0 <= k < len(self.pieces) and x in self.pieces[k][0]:
                return self.pieces[k][1]
        raise InvalidArgumentError(f"{x} outside [0, 1]")

    def evaluate(self, xs) -> np.ndarray:
        """Vectorised float evaluation; each state is compared against exact breakpoints."""
        if isinstance(xs, np.ndarray) and xs.dtype != object:
            out = np.empty(len(xs))
            for iv, v in self.pieces:
                lo, hi = float(iv.lo), float(iv.hi)
                lo_ok = xs >= lo if iv.lo_closed else xs > lo
                hi_ok = xs <= hi if iv.hi_closed else xs < hi
                out[lo_ok & hi_ok] = float(v)
            return out
        return np.array([self(x) for x in xs], dtype=object)

    def to_pl(self) -> PiecewiseLinearMap:
        return self._pl

    def __repr__(self):
        body = ", ".join(f"{iv}: {v}" for iv, v in self.pieces)
        return f"StepObservable({body})"


IDENTITY = "id"


def _apply(observable, states):
    if observable is None or observable == IDENTITY:
        if isinstance(states, np.ndarray):
            return states.astype(float) if states.dtype != object else states
        return np.array(states, dtype=object)
    if isinstance(observable, StepObservable):
        return observable.evaluate(states if isinstance(states, np.ndarray) else list(states))
    if isinstance(observable, PiecewiseLinearMap):
        return np.array([observable(as_fraction(x)) for x in states], dtype=object)
    if callable(observable):
        return np.array([observable(x) for x in states])
    raise InvalidArgumentError(f"unsupported observable {observable!r}")


def observe(states, observables=(IDENTITY,)) -> np.ndarray:
    """Value rows ``values[i][t] = X_i(states[t])``, shape ``(n, len(states))``.

    Exact states (Fractions) give an object array of exact values.
    """
    if isinstance(observables, (StepObservable, PiecewiseLinearMap, str)) or observables is None:
        observables = [observables]
    rows = [_apply(obs, states) for obs in observables]
    if any(r.dtype == object for r in rows):
        return np.array([list(r) for r in rows], dtype=object)
    return np.vstack(rows)


def observation_windows(values: np.ndarray, d: int) -> np.ndarray:
    """Observation tables for every window start, shape ``(L - d, n, d + 1)``."""
    values = np.asarray(values)
    if values.ndim == 1:
        values = values[None, :]
    L = values.shape[1]
    if d < 1 or L < d + 1:
        raise InvalidArgumentError(f"need at least d+1={d + 1} observations, got {L}")
    idx = np.arange(L - d)[:, None] + np.arange(d + 1)[None, :]
    return np.transpose(values[:, idx], (1, 0, 2))


def refine_observable(x: StepObservable, refinement: Sequence, m: int | None = None) -> StepObservable:
    """Observable whose level sets are ``refinement`` and which is above ``x`` in order.

    Each refinement part ``D`` lies in one level set ``C_l`` of ``x`` (value
    ``a_l``); the ``j``-th part inside ``C_l`` (ordered by left endpoint,
    ``j = 1..m_l``) receives the value ``a_l * m + j``.

    Parameters
    ----------
    x : StepObservable
        Values must be distinct natural numbers per level set.
    refinement : sequence of parts
        Each part is an ``Interval``, an interval string, or a sequence of
        them (a finite union).  Parts must tile [0, 1].
    m : int, optional
        Must exceed every ``m_l``; defaults to ``max m_l + 1``.
    """
    for v in x.values:
        if not (isinstance(v, Fraction) and v.denominator == 1 and v >= 1):
            raise InvalidArgumentError(f"observable values must be natural numbers, got {v}")
    parts = []
    for part in refinement:
        if isinstance(part, (Interval, str)):
            part = [part]
        ivs = merge_adjacent(parse_interval(p) if isinstance(p, str) else p for p in part)
        parts.append(ivs)

    grouped: dict[Fraction, list[list[Interval]]] = {}
    for ivs in parts:
        owners = set()
        for iv in ivs:
            for piv, val in x.pieces:
                if intersect(iv, piv) is not None:
                    owners.add(val)
        if len(owners) != 1:
            raise InvalidArgumentError(
                f"part {[str(i) for i in ivs]} is not inside a single level set of x; "
                "refinement must be finer than x's partition")
        grouped.setdefault(owners.pop(), []).append(ivs)

    counts = {v: len(g) for v, g in grouped.items()}
    if m is None:
        m = max(counts.values()) + 1
    if m <= max(counts.values()):
        raise InvalidArgumentError(f"m={m} must exceed every part count {max(counts.values())}")
    pieces = []
    for val, group in grouped.items():
        group.sort(key=lambda ivs: (ivs[0].lo, not ivs[0].lo_closed))
        for j, ivs in enumerate(group, start=1):
            for iv in ivs:
                pieces.append((iv, val * m + j))
    # StepObservable validates that the parts tile [0, 1]
    return StepObservable(pieces)


def example1_observable() -> StepObservable:
    """``2 on [0,1/3]``, ``3 on (1/3,2/3]``, ``1 on (2/3,1]``."""
    return StepObservable([("[0,1/3]", 2), ("(1/3,2/3]", 3), ("(2/3,1]", 1)])


def example2_observables() -> tuple[StepObservable, StepObservable]:
    """The pair ``X < Y`` with ``X = 2 on [0,5/8], 1 on (5/8,1]``."""
    X = StepObservable([("[0,5/8]", 2), ("(5/8,1]", 1)])
    Y = StepObservable([("[0,1/8]", 4), ("(1/8,3/8)", 3), ("[3/8,5/8]", 4), ("(5/8,1]", 1)])
    return X, Y


def system_map(name: str) -> PiecewiseLinearMap:
    """Exact PL map for ``tent`` or ``identity``."""
    if name == "tent":
        return tent_map()
    if name in ("identity", "id"):
        return identity_map()
    raise InvalidArgumentError(f"no exact PL form for map {name!r}")
