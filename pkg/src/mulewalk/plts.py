"""Probabilistic transition systems, bisimulation and quotients.

A mule model unrolls into an alternating graph: probabilistic states carry a
distribution over action states, action states carry labelled transitions.
Per round the shape is

    distribution state --P(s)--> pre-threads state --threads--> post-threads
    state --walk(d)--> distribution state of the end position

``threads`` is emitted with its parameters erased so that models with
different breakage bookkeeping become comparable; ``walk`` keeps its distance
since that is the observable cost.  Every walk lands on a shared per-position
distribution state, distinct from the initial state, so refinement gets to
discover that the initial state is equivalent to the interior ones.

Strong probabilistic bisimilarity is decided by plain signature-refinement:
action states split on their set of (label, target block) pairs, probabilistic
states split on the mass they assign to each block, compared exactly in EXACT
mode.  Desk-scale state spaces make the simple global re-split per pass the
right trade-off over an optimised splitter queue.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple

from .numerics import Number, NumberMode
from .piecer import MuleModel, resolve_round

Label = Tuple  # ("threads",) or ("walk", d)

THREADS: Label = ("threads",)


def walk(distance: int) -> Label:
    return ("walk", distance)


def label_str(label: Label) -> str:
    if label == THREADS:
        return "threads"
    return f"walk({label[1]})"


@dataclass(frozen=True)
class Plts:
    """Alternating probabilistic labelled transition system.

    States share one 0-based index space; ``kinds[i]`` is 'p' or 'a'.
    ``dists[i]`` (probabilistic states) lists (target, probability) pairs over
    action states; ``trans[i]`` (action states) lists (label, target) pairs.
    """

    kinds: Tuple[str, ...]
    dists: Tuple[Optional[Tuple[Tuple[int, Number], ...]], ...]
    trans: Tuple[Optional[Tuple[Tuple[Label, int], ...]], ...]
    initial: int
    mode: NumberMode

    @property
    def n_states(self) -> int:
        return len(self.kinds)

    @property
    def n_prob_states(self) -> int:
        return sum(1 for k in self.kinds if k == "p")

    @property
    def n_action_states(self) -> int:
        return sum(1 for k in self.kinds if k == "a")


def build_plts(model: MuleModel, init_pos: int = 0) -> Plts:
    """Unroll a mule model into its alternating transition system.

    Only states reachable from the initial distribution state are built.
    Pre/post-threads action states are shared per (position, summary); walk
    targets are shared per position.
    """
    if not 0 <= init_pos <= model.width - 1:
        raise ValueError(f"init_pos {init_pos} outside 0..{model.width - 1}")
    kinds: List[str] = []
    payload: List[tuple] = []  # build-time descriptor per state
    dists: List[Optional[tuple]] = []
    trans: List[Optional[tuple]] = []
    a_idx: Dict[tuple, int] = {}
    b_idx: Dict[tuple, int] = {}
    g_idx: Dict[int, int] = {}

    def new_state(kind: str, descr: tuple) -> int:
        kinds.append(kind)
        payload.append(descr)
        dists.append(None)
        trans.append(None)
        return len(kinds) - 1

    def ensure_a(pos: int, summary) -> int:
        key = (pos, summary)
        if key not in a_idx:
            a_idx[key] = new_state("a", ("A", pos, summary))
        return a_idx[key]

    def ensure_b(pos: int, summary) -> int:
        key = (pos, summary)
        if key not in b_idx:
            b_idx[key] = new_state("a", ("B", pos, summary))
        return b_idx[key]

    def ensure_g(pos: int) -> int:
        if pos not in g_idx:
            g_idx[pos] = new_state("p", ("G", pos))
        return g_idx[pos]

    new_state("p", ("G", init_pos, "initial"))  # state 0, the initial state
    i = 0
    while i < len(kinds):
        tag = payload[i]
        if tag[0] == "G":
            pos = tag[1]
            dists[i] = tuple((ensure_a(pos, s), p)
                             for s, p in model.distribution.items())
        elif tag[0] == "A":
            _, pos, summary = tag
            trans[i] = ((THREADS, ensure_b(pos, summary)),)
        else:  # post-threads state
            _, pos, summary = tag
            trans[i] = tuple(
                (walk(d), ensure_g(end))
                for d, end in resolve_round(pos, summary, model.width))
        i += 1
    return Plts(tuple(kinds), tuple(dists), tuple(trans), 0, model.mode)


class Partition(NamedTuple):
    """Blocks of bisimilar states (each sorted; blocks ordered by least member)."""

    blocks: Tuple[Tuple[int, ...], ...]
    history: Tuple[int, ...]  # block count after each refinement pass

    def block_of(self) -> Dict[int, int]:
        return {s: b for b, states in enumerate(self.blocks) for s in states}


def _prob_signature(plts: Plts, state: int, block_of: List[int]):
    masses: Dict[int, Number] = {}
    for target, p in plts.dists[state]:
        b = block_of[target]
        masses[b] = masses.get(b, plts.mode.zero()) + p
    if plts.mode.is_exact:
        return tuple(sorted(masses.items()))
    # float masses are bucketed at 1e-9; bisimulation in FLOAT mode is
    # best-effort and excluded from exactness guarantees
    return tuple(sorted((b, round(float(m), 9)) for b, m in masses.items()))


def _action_signature(plts: Plts, state: int, block_of: List[int]):
    return frozenset((label, block_of[target]) for label, target in plts.trans[state])


def coarsest_partition(plts: Plts) -> Partition:
    """Signature refinement from the kind partition down to the coarsest bisimulation."""
    block_of = [0 if k == "p" else 1 for k in plts.kinds]
    n_blocks = len(set(block_of))
    history = [n_blocks]
    while True:
        groups: Dict[tuple, List[int]] = {}
        for s in range(plts.n_states):
            if plts.kinds[s] == "p":
                sig = ("p", block_of[s], _prob_signature(plts, s, block_of))
            else:
                sig = ("a", block_of[s], _action_signature(plts, s, block_of))
            groups.setdefault(sig, []).append(s)
        ordered = sorted(groups.values(), key=lambda states: states[0])
        new_block_of = [0] * plts.n_states
        for b, states in enumerate(ordered):
            for s in states:
                new_block_of[s] = b
        history.append(len(ordered))
        if len(ordered) == n_blocks:
            blocks = tuple(tuple(states) for states in ordered)
            return Partition(blocks, tuple(history))
        block_of = new_block_of
        n_blocks = len(ordered)


def disjoint_union(a: Plts, b: Plts) -> Plts:
    if a.mode is not b.mode:
        raise ValueError("cannot union systems with different number modes")
    offset = a.n_states
    dists = list(a.dists)
    trans = list(a.trans)
    for i in range(b.n_states):
        if b.kinds[i] == "p":
            dists.append(tuple((t + offset, p) for t, p in b.dists[i]))
            trans.append(None)
        else:
            dists.append(None)
            trans.append(tuple((lab, t + offset) for lab, t in b.trans[i]))
    return Plts(a.kinds + b.kinds, tuple(dists), tuple(trans), a.initial, a.mode)


def bisimilar(a: Plts, b: Plts) -> bool:
    """Whether the initial states of two systems are strongly probabilistically bisimilar."""
    union = disjoint_union(a, b)
    block_of = coarsest_partition(union).block_of()
    return block_of[a.initial] == block_of[b.initial + a.n_states]


def quotient(p: Plts) -> Plts:
    """Quotient by the coarsest bisimulation, blocks numbered by least member."""
    partition = coarsest_partition(p)
    block_of = partition.block_of()
    kinds = []
    dists: List[Optional[tuple]] = []
    trans: List[Optional[tuple]] = []
    for states in partition.blocks:
        rep = states[0]
        kinds.append(p.kinds[rep])
        if p.kinds[rep] == "p":
            masses: Dict[int, Number] = {}
            for target, prob in p.dists[rep]:
                b = block_of[target]
                masses[b] = masses.get(b, p.mode.zero()) + prob
            dists.append(tuple(sorted(masses.items())))
            trans.append(None)
        else:
            dists.append(None)
            moved = {(label, block_of[target]) for label, target in p.trans[rep]}
            trans.append(tuple(sorted(moved)))
    return Plts(tuple(kinds), tuple(dists), tuple(trans), block_of[p.initial], p.mode)


def format_plts(p: Plts) -> str:
    """Textual form: one `P <from> <prob> <to>` line per distribution entry and
    one `T <from> <label> <to>` line per transition, deterministically ordered."""
    lines = []
    for i in range(p.n_states):
        if p.kinds[i] == "p":
            for target, prob in sorted(p.dists[i]):
                prob_str = str(prob) if p.mode.is_exact else repr(float(prob))
                lines.append(f"P {i} {prob_str} {target}")
    for i in range(p.n_states):
        if p.kinds[i] == "a":
            for label, target in sorted(p.trans[i]):
                lines.append(f"T {i} {label_str(label)} {target}")
    return "\n".join(lines) + "\n"


def minimal_expected_distance(p: Plts, max_rounds: int, width: int) -> Number:
    """Value iteration on the transition system itself.

    Walk labels are costs, threads steps are free, nondeterminism is
    minimised; the result is relative to ``max_rounds * width`` like
    ``piecer.value_iteration``.  Rounds are counted by walk actions.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    zero = p.mode.zero()
    v = {i: zero for i in range(p.n_states) if p.kinds[i] == "p"}
    for _ in range(max_rounds):
        memo: Dict[int, Number] = {}

        def action_value(state: int, pending=None) -> Number:
            if state in memo:
                return memo[state]
            pending = pending or set()
            if state in pending:
                raise ValueError("cycle of threads transitions has no round cost")
            pending.add(state)
            best = None
            for label, target in p.trans[state]:
                if label[0] == "walk":
                    cand = label[1] + v[target]
                else:
                    cand = action_value(target, pending)
                if best is None or cand < best:
                    best = cand
            memo[state] = best
            return best

        v_new = {}
        for i in v:
            total = zero
            for target, prob in p.dists[i]:
                total += prob * action_value(target)
            v_new[i] = total
        v = v_new
    if p.mode.is_exact:
        return v[p.initial] / Fraction(max_rounds * width)
    return v[p.initial] / (max_rounds * width)
