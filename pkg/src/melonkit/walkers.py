"""Exact enumeration of p-watermelons by dynamic programming over walker gaps.

Walkers sit on the 45-degree rotated square lattice and move by +-1 in
ordinate per time step.  Only the gaps ``g_i = y_{i+1} - y_i`` matter, and
these change by ``s_{i+1} - s_i`` for step signs ``s``, so they stay even.

Four interaction rules are supported:

``vicious``
    no shared vertices (every gap >= 2); start and finish at gaps all 2.
``super``
    anything goes (gaps >= 0); start and finish with all walkers together.
``friendly``
    terminal-friendly model: start and finish together, never all p walkers
    on one interior vertex, and no edge shared by all p walkers.
``inf-friendly``
    at most two walkers per vertex, pairs may share edges; start and finish
    at gaps all 2.
"""

from __future__ import annotations

import enum
import itertools
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from melonkit.series import LaurentSeries

__all__ = [
    "Rule",
    "WalkerModel",
    "GapStateTable",
    "UnsupportedModel",
    "dp_step",
    "initial_table",
    "enumerate_counts",
    "enumerate_series",
    "bijection_check",
    "move_deltas",
]


class UnsupportedModel(ValueError):
    pass


class Rule(enum.Enum):
    VICIOUS = "vicious"
    SUPER_FRIENDLY = "super"
    FRIENDLY_TERMINAL = "friendly"
    INFINITY_FRIENDLY = "inf-friendly"

    @classmethod
    def parse(cls, name: "str | Rule") -> "Rule":
        if isinstance(name, Rule):
            return name
        aliases = {
            "vicious": cls.VICIOUS,
            "super": cls.SUPER_FRIENDLY,
            "super-friendly": cls.SUPER_FRIENDLY,
            "superfriendly": cls.SUPER_FRIENDLY,
            "friendly": cls.FRIENDLY_TERMINAL,
            "friendly-terminal": cls.FRIENDLY_TERMINAL,
            "inf-friendly": cls.INFINITY_FRIENDLY,
            "infinity-friendly": cls.INFINITY_FRIENDLY,
            "infinityfriendly": cls.INFINITY_FRIENDLY,
        }
        try:
            return aliases[name.lower()]
        except KeyError:
            raise UnsupportedModel(f"unknown walker model {name!r}") from None


@dataclass(frozen=True)
class WalkerModel:
    p: int
    rule: Rule

    def __post_init__(self):
        object.__setattr__(self, "rule", Rule.parse(self.rule))
        if self.p < 1:
            raise UnsupportedModel("need at least one walker")
        if self.rule is Rule.FRIENDLY_TERMINAL and self.p < 2:
            raise UnsupportedModel("the terminal-friendly rule needs p >= 2")

    @property
    def start_gap(self) -> int:
        """Common value of every gap at the start (and the end)."""
        if self.rule in (Rule.VICIOUS, Rule.INFINITY_FRIENDLY):
            return 2
        return 0

    @property
    def start(self) -> tuple[int, ...]:
        return (self.start_gap,) * (self.p - 1)

    def allowed(self, gaps: tuple[int, ...]) -> bool:
        """Occupancy rule for an interior configuration (gaps already >= 0)."""
        if self.rule is Rule.VICIOUS:
            return all(g > 0 for g in gaps)
        if self.rule is Rule.INFINITY_FRIENDLY:
            return not any(a == 0 and b == 0 for a, b in zip(gaps, gaps[1:]))
        if self.rule is Rule.FRIENDLY_TERMINAL:
            # all p walkers on one vertex only at the terminals
            return any(gaps)
        return True


@dataclass
class GapStateTable:
    """Counts of partial configurations keyed by the gap tuple, at time ``t``."""

    counts: dict[tuple[int, ...], int] = field(default_factory=dict)
    t: int = 0

    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, gaps):
        return self.counts.get(tuple(gaps), 0)


def move_deltas(p: int) -> dict[tuple[int, ...], int]:
    """Gap changes of the 2**p joint moves, aggregated with multiplicity."""
    out: dict[tuple[int, ...], int] = defaultdict(int)
    for signs in itertools.product((1, -1), repeat=p):
        out[tuple(b - a for a, b in zip(signs, signs[1:]))] += 1
    return dict(out)


def _return_distance(gaps, target) -> int:
    # any y_j - y_i moves by at most 2 per step
    diffs = [g - t for g, t in zip(gaps, target)]
    best = 0
    for i in range(len(diffs)):
        s = 0
        for j in range(i, len(diffs)):
            s += diffs[j]
            best = max(best, abs(s))
    return best // 2


def initial_table(model: WalkerModel) -> GapStateTable:
    return GapStateTable({model.start: 1}, 0)


def dp_step(model: WalkerModel, table: GapStateTable, horizon: int | None = None) -> GapStateTable:
    """Advance every partial configuration by one time step.

    All 2**p joint moves are applied; images with a negative gap (crossing)
    or violating the model's occupancy rule are dropped.  For the
    terminal-friendly rule, arrivals at the all-together state are kept as
    completed returns, and such a state is never propagated further.

    ``horizon`` is the number of steps left after this one; states that
    can no longer reach the terminal configuration in time are pruned.
    """
    deltas = move_deltas(model.p)
    target = model.start
    terminal = model.rule is Rule.FRIENDLY_TERMINAL
    new: dict[tuple[int, ...], int] = defaultdict(int)
    for gaps, c in table.counts.items():
        if terminal and table.t > 0 and gaps == target:
            continue
        for d, mult in deltas.items():
            g = tuple(a + b for a, b in zip(gaps, d))
            if any(v < 0 for v in g):
                continue
            if not model.allowed(g) and not (terminal and g == target):
                continue
            if horizon is not None and _return_distance(g, target) > horizon:
                continue
            new[g] += mult * c
    return GapStateTable(dict(new), table.t + 1)


def _enumerate_generic(model: WalkerModel, N: int) -> list[int]:
    table = initial_table(model)
    out = [1]
    for t in range(1, N + 1):
        table = dp_step(model, table, horizon=N - t)
        out.append(table[model.start])
    return out


def _enumerate_three(model: WalkerModel, N: int) -> list[int]:
    """p = 3 in half-gap coordinates, vectorised over object arrays.

    Array index ``i`` holds half-gap ``i - 1``; index 0 is a zero border that
    absorbs moves to negative gaps.
    """
    h0 = model.start_gap // 2
    size = h0 + N // 2 + 4
    bufs = [np.zeros((size, size), dtype=object), np.zeros((size, size), dtype=object)]
    extent = [0, 0]
    a = bufs[0]
    a[h0 + 1, h0 + 1] = 1
    extent[0] = h0 + 2
    s = h0 + 1
    rule = model.rule
    out = [1]
    cur = 0
    for t in range(1, N + 1):
        src, dst = bufs[cur], bufs[1 - cur]
        r = h0 + 2 + min(t, N - t)
        old = extent[1 - cur]
        if old > r:
            dst[r:old, :] = 0
            dst[:, r:old] = 0
        c = dst[1:r, 1:r]
        np.multiply(src[1:r, 1:r], 2, out=c)
        c += src[1:r, 2 : r + 1]
        c += src[1:r, 0 : r - 1]
        c += src[2 : r + 1, 0 : r - 1]
        c += src[0 : r - 1, 2 : r + 1]
        c += src[2 : r + 1, 1:r]
        c += src[0 : r - 1, 1:r]
        extent[1 - cur] = r
        if rule is Rule.VICIOUS:
            dst[1, :] = 0
            dst[:, 1] = 0
        elif rule is Rule.INFINITY_FRIENDLY:
            dst[1, 1] = 0
        if rule is Rule.FRIENDLY_TERMINAL:
            out.append(int(dst[1, 1]))
            dst[1, 1] = 0
        else:
            out.append(int(dst[s, s]))
        cur = 1 - cur
    return out


def enumerate_counts(model: WalkerModel, N: int) -> list[int]:
    """Number of watermelons of length 0..N for ``model``.

    The terminal-friendly list has ``c_0 = 1`` and ``c_1 = 0`` (the two
    length-1 configurations would put all walkers on one edge); from n = 2
    on it counts first returns to the all-together state.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    if model.p == 3 and N > 0:
        out = _enumerate_three(model, N)
    else:
        out = _enumerate_generic(model, N)
    if model.rule is Rule.FRIENDLY_TERMINAL and N >= 1:
        out[1] = 0
    return out


def enumerate_series(model: WalkerModel, N: int) -> LaurentSeries:
    """Generating function of ``enumerate_counts`` known through ``x**N``."""
    return LaurentSeries(enumerate_counts(model, N), 0, N)


def bijection_check(p: int, N: int) -> bool:
    """True iff vicious and super-friendly p-watermelon counts agree through n = N."""
    v = enumerate_counts(WalkerModel(p, Rule.VICIOUS), N)
    s = enumerate_counts(WalkerModel(p, Rule.SUPER_FRIENDLY), N)
    return v == s
