"""Single-round walk semantics and finite-horizon value iteration.

Each stroke the piecer sees a breakage summary and walks to repair every
broken thread.  When the breaks straddle the current position there are two
sweeps (left first or right first); the round therefore offers up to two
choices of (distance walked, end position).  Value iteration minimises the
expected cumulative distance over a fixed number of rounds and reports it
relative to ``max_rounds * width``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from .breakage import (
    SummaryDistribution,
    Summary,
    bernoulli_distribution,
    extremes_distribution,
    fixed_n_distribution,
)
from .numerics import Number, NumberMode


class RoundChoice(NamedTuple):
    """One way to finish a repair round: total distance and final position."""

    distance: int
    end_pos: int


def resolve_round(pos: int, summary: Summary, width: int) -> Tuple[RoundChoice, ...]:
    """The piecer's possible rounds from ``pos`` given a breakage summary.

    No break: stand still.  Breaks all on one side: a single sweep to the far
    break, ending there.  Breaks on both sides: sweep left first (ending at
    the right break) or right first (ending at the left break).  Coinciding
    guards (l = r = pos) collapse to the single zero-distance choice.
    """
    if not 0 <= pos <= width - 1:
        raise ValueError(f"position {pos} outside 0..{width - 1}")
    if summary is None:
        return (RoundChoice(0, pos),)
    left, right = summary
    if not 0 <= left <= right <= width - 1:
        raise ValueError(f"span {summary} invalid for width {width}")
    if pos <= left and pos >= right:  # l = r = pos
        return (RoundChoice(0, pos),)
    if pos <= left:
        return (RoundChoice(right - pos, right),)
    if pos >= right:
        return (RoundChoice(pos - left, left),)
    return (
        RoundChoice(pos + right - 2 * left, right),  # left sweep first
        RoundChoice(2 * right - pos - left, left),   # right sweep first
    )


@dataclass(frozen=True)
class MuleModel:
    """A mule of ``width`` threads with a per-stroke breakage distribution.

    ``kind`` is one of "fixed-n", "natural", "natural-opt"; ``param`` is the
    corresponding n or breakage probability.
    """

    width: int
    distribution: SummaryDistribution
    kind: str
    param: object
    mode: NumberMode

    def __post_init__(self):
        if self.distribution.width != self.width:
            raise ValueError("distribution width does not match model width")
        if self.kind == "fixed-n" and None in self.distribution:
            raise ValueError("fixed-n model must not contain the no-break summary")


def fixed_n_model(width: int, n: int, mode: NumberMode = NumberMode.FLOAT) -> MuleModel:
    return MuleModel(width, fixed_n_distribution(width, n, mode), "fixed-n", n, mode)


def natural_model(width: int, p, mode: NumberMode = NumberMode.FLOAT) -> MuleModel:
    return MuleModel(width, bernoulli_distribution(width, p, mode), "natural", p, mode)


def optimized_model(width: int, p, mode: NumberMode = NumberMode.FLOAT) -> MuleModel:
    return MuleModel(width, extremes_distribution(width, p, mode), "natural-opt", p, mode)


class ValueTable(NamedTuple):
    """Minimal expected cumulative distances per start position at one horizon."""

    horizon: int
    values: Tuple[Number, ...]


def _choice_arrays(model: MuleModel):
    """Vectorised round choices: distances/end positions per (position, summary).

    The second choice duplicates the first where a round offers only one.
    """
    probs = np.array([float(p) for _, p in model.distribution.items()])
    m = len(probs)
    w = model.width
    d1 = np.empty((w, m))
    e1 = np.empty((w, m), dtype=np.intp)
    d2 = np.empty((w, m))
    e2 = np.empty((w, m), dtype=np.intp)
    for j, (summary, _) in enumerate(model.distribution.items()):
        for pos in range(w):
            choices = resolve_round(pos, summary, w)
            d1[pos, j], e1[pos, j] = choices[0]
            d2[pos, j], e2[pos, j] = choices[-1]
    return probs, d1, e1, d2, e2


def _iter_value_tables_float(model: MuleModel, horizon: int):
    probs, d1, e1, d2, e2 = _choice_arrays(model)
    v = np.zeros(model.width)
    yield v
    for _ in range(horizon):
        v = ((np.minimum(d1 + v[e1], d2 + v[e2])) @ probs)
        yield v


def _iter_value_tables_exact(model: MuleModel, horizon: int):
    w = model.width
    per_pos: List[List[Tuple[Number, Tuple[RoundChoice, ...]]]] = [
        [(p, resolve_round(pos, s, w)) for s, p in model.distribution.items()]
        for pos in range(w)
    ]
    v: List[Number] = [Fraction(0)] * w
    yield v
    for _ in range(horizon):
        v = [
            sum((p * min(d + v[end] for d, end in choices)
                 for p, choices in per_pos[pos]), Fraction(0))
            for pos in range(w)
        ]
        yield v


def compute_value_table(model: MuleModel, horizon: int) -> ValueTable:
    """Run ``horizon`` backward-induction steps from the all-zero table."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if model.mode.is_exact:
        for v in _iter_value_tables_exact(model, horizon):
            pass
        return ValueTable(horizon, tuple(v))
    for v in _iter_value_tables_float(model, horizon):
        pass
    return ValueTable(horizon, tuple(float(x) for x in v))


def value_iteration(model: MuleModel, init_pos: int, max_rounds: int) -> Number:
    """Minimal expected distance per round, relative to the mule width.

    Computes V_0 = 0, V_k(pos) = sum_s P(s) * min over the round's choices of
    (distance + V_{k-1}(end)), and returns V_max(init) / (max_rounds * width).
    The minimisation looks through the value function, so the piecer may take
    the longer sweep of a round when it pays off later.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    if not 0 <= init_pos <= model.width - 1:
        raise ValueError(f"init_pos {init_pos} outside 0..{model.width - 1}")
    table = compute_value_table(model, max_rounds)
    if model.mode.is_exact:
        return table.values[init_pos] / Fraction(max_rounds * model.width)
    return table.values[init_pos] / (max_rounds * model.width)


def per_round_values(model: MuleModel, init_pos: int,
                     horizons: Sequence[int]) -> List[Number]:
    """Relative distance at each horizon; used to judge convergence of round counts."""
    if len(horizons) == 0:
        raise ValueError("horizons must be nonempty")
    if list(horizons) != sorted(horizons) or min(horizons) < 1:
        raise ValueError("horizons must be ascending and >= 1")
    if not 0 <= init_pos <= model.width - 1:
        raise ValueError(f"init_pos {init_pos} outside 0..{model.width - 1}")
    wanted = set(horizons)
    iterator = (_iter_value_tables_exact if model.mode.is_exact
                else _iter_value_tables_float)
    out = {}
    for k, v in enumerate(iterator(model, max(horizons))):
        if k in wanted:
            if model.mode.is_exact:
                out[k] = v[init_pos] / Fraction(k * model.width)
            else:
                out[k] = float(v[init_pos]) / (k * model.width)
    return [out[h] for h in horizons]


def simulate_relative_distance(model: MuleModel, init_pos: int, max_rounds: int,
                               episodes: int = 1_000_000, seed: int = 0
                               ) -> Tuple[float, float]:
    """Monte Carlo estimate of value_iteration with the optimal policy.

    Per round the piecer picks the choice minimising distance + V_remaining(end),
    with V the float value table (one-step lookahead through the optimum).
    Returns (mean relative distance, standard error of the mean).
    """
    probs, d1, e1, d2, e2 = _choice_arrays(model)
    tables = list(_iter_value_tables_float(model, max_rounds))
    # Optimal choice per (remaining rounds, position, summary).
    best_d = np.empty((max_rounds, model.width, len(probs)))
    best_e = np.empty((max_rounds, model.width, len(probs)), dtype=np.intp)
    for remaining in range(1, max_rounds + 1):
        v = tables[remaining - 1]
        first = (d1 + v[e1]) <= (d2 + v[e2])
        best_d[remaining - 1] = np.where(first, d1, d2)
        best_e[remaining - 1] = np.where(first, e1, e2)
    cum = np.cumsum(probs)
    cum[-1] = 1.0
    rng = np.random.default_rng(seed)
    pos = np.full(episodes, init_pos, dtype=np.intp)
    total = np.zeros(episodes)
    for step in range(max_rounds):
        remaining = max_rounds - step
        draw = np.searchsorted(cum, rng.random(episodes), side="right")
        total += best_d[remaining - 1][pos, draw]
        pos = best_e[remaining - 1][pos, draw]
    rel = total / (max_rounds * model.width)
    return float(rel.mean()), float(rel.std(ddof=1) / np.sqrt(episodes))
