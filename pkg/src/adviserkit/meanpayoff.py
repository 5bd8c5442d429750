"""Exact mean-payoff solving over restricted arenas.

The translation is standard: every protagonist edge weighs minus the number of
forbidden inputs at its target adversary state, every adversary edge weighs
zero, the protagonist maximizes the long-run average and the adversary
minimizes it. Values are reported per round (a protagonist move plus the
adversary reply), in weight units, as exact fractions with denominators
bounded by the state count. The limitation of an adviser is the negated value
at the initial state.

The solver is strategy improvement with an exact one-player evaluator. Fixing
the protagonist's memoryless strategy leaves a graph where only the adversary
chooses; its optimal gain per state comes from strongly connected component
analysis with Karp's minimum cycle mean, and a bias potential comes from
shortest paths to the critical (gain-attaining) cycles. Protagonist choices
improving the (gain, bias) pair lexicographically are switched until none is
left. The result self-certifies: the adversary witness extracted from the
final evaluation is evaluated from the protagonist's side, and both sides
must agree on every state, otherwise SolverError is raised rather than
returning an unproven number.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arena import (
    ADVERSARY,
    PROTAGONIST,
    Adviser,
    Arena,
    InvalidAdviserError,
    enabled_inputs,
    nonblocking_restricted,
    normalize_adviser,
    prune_blocking,
)
from .safety import adversary_attractor


# One input per protagonist state; adversary witnesses use the same shape.
MemorylessStrategy = dict[str, str]


class SolverError(RuntimeError):
    """Internal consistency failure; indicates a bug, never bad user input."""


class NotGoodAdviserError(ValueError):
    """The adviser leaves the protagonist without a winning strategy."""


class InvalidStrategyError(ValueError):
    """A strategy misses a protagonist state or picks a disabled input."""


@dataclass(frozen=True)
class WeightedArena:
    """A non-blocking restricted arena plus the per-edge integer weights."""

    base: Arena
    weight: dict[tuple[str, str], int]


@dataclass(frozen=True)
class ValueReport:
    """Solver output: per-round values, optimal strategy, adversary witness."""

    per_state: dict[str, Fraction]
    strategy: dict[str, str]
    adversary_witness: dict[str, str]


_Edge = tuple[str, str, int]  # (input, target, weight)
_Adj = dict[str, tuple[_Edge, ...]]


def build_meanpayoff(restricted: Arena, adviser: Adviser) -> WeightedArena:
    """Attach weights per the forbidden-set sizes of the original adviser.

    ``adviser`` must carry an entry for every adversary state of the restricted
    arena; the sizes are taken from the adviser as given (they count inputs
    forbidden in the original arena, which are exactly the edges missing here).
    """
    weight: dict[tuple[str, str], int] = {}
    for (src, inp), dst in restricted.transitions.items():
        if restricted.owner(src) == PROTAGONIST:
            if dst not in adviser:
                raise InvalidAdviserError(
                    f"adviser has no entry for reachable adversary state {dst!r}")
            weight[(src, inp)] = -len(adviser[dst])
        else:
            weight[(src, inp)] = 0
    return WeightedArena(restricted, weight)


# ---------------------------------------------------------------------------
# one-player evaluation


def _tarjan_sccs(nodes: tuple[str, ...], adj: _Adj) -> list[list[str]]:
    """Iterative Tarjan; components are emitted sinks-first."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[list[str]] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            v, ei = work[-1]
            if ei == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            edges = adj[v]
            while ei < len(edges):
                w = edges[ei][1]
                ei += 1
                if w not in index:
                    work[-1] = (v, ei)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return sccs


def _karp_min_mean(component: list[str], adj: _Adj, members: set[str]) -> Fraction | None:
    """Minimum cycle mean inside one strongly connected component, or None."""
    inner = {u: [(v, w) for (_, v, w) in adj[u] if v in members] for u in component}
    if not any(inner.values()):
        return None
    n = len(component)
    pos = {v: i for i, v in enumerate(component)}
    source = component[0]
    prev: list[int | None] = [None] * n
    prev[pos[source]] = 0
    table: list[list[int | None]] = [prev]
    for _ in range(n):
        cur: list[int | None] = [None] * n
        for u in component:
            du = table[-1][pos[u]]
            if du is None:
                continue
            for v, w in inner[u]:
                cand = du + w
                j = pos[v]
                if cur[j] is None or cand < cur[j]:
                    cur[j] = cand
        table.append(cur)
    best: Fraction | None = None
    last = table[n]
    for v in component:
        j = pos[v]
        if last[j] is None:
            continue
        worst: Fraction | None = None
        for k in range(n):
            dk = table[k][j]
            if dk is None:
                continue
            mean = Fraction(last[j] - dk, n - k)
            if worst is None or mean > worst:
                worst = mean
        if worst is not None and (best is None or worst < best):
            best = worst
    return best


@dataclass
class _Evaluation:
    gain: dict[str, Fraction]
    bias: dict[str, Fraction]


def _evaluate_min(nodes: tuple[str, ...], adj: _Adj, with_bias: bool = True) -> _Evaluation:
    """Optimal gain (and bias) when a single minimizing player owns every choice."""
    sccs = _tarjan_sccs(nodes, adj)
    comp_of: dict[str, int] = {}
    for i, comp in enumerate(sccs):
        for v in comp:
            comp_of[v] = i
    comp_gain: list[Fraction] = []
    for i, comp in enumerate(sccs):
        members = set(comp)
        options: list[Fraction] = []
        mean = _karp_min_mean(comp, adj, members)
        if mean is not None:
            options.append(mean)
        for u in comp:
            for _, v, _ in adj[u]:
                if v not in members:
                    options.append(comp_gain[comp_of[v]])
        if not options:
            raise SolverError(f"dead end at {comp!r}; arena is not non-blocking")
        comp_gain.append(min(options))
    gain = {v: comp_gain[comp_of[v]] for v in nodes}
    if not with_bias:
        return _Evaluation(gain, {})

    bias: dict[str, Fraction] = {}
    for level in sorted(set(gain.values())):
        level_nodes = [v for v in nodes if gain[v] == level]
        scale = level.denominator
        offset = level.numerator
        ladj = {
            u: [(v, w * scale - offset) for (_, v, w) in adj[u] if gain[v] == level]
            for u in level_nodes
        }
        # Forward potentials from a virtual all-zero source; reduced costs
        # become non-negative and zero-mean cycles become all-tight.
        phi = {u: 0 for u in level_nodes}
        for _ in range(len(level_nodes) + 1):
            changed = False
            for u in level_nodes:
                base = phi[u]
                for v, w in ladj[u]:
                    if base + w < phi[v]:
                        phi[v] = base + w
                        changed = True
            if not changed:
                break
        else:
            raise SolverError("negative reduced cycle; gain computation is inconsistent")
        tight = {
            u: [(v, w) for v, w in ladj[u] if phi[u] + w == phi[v]]
            for u in level_nodes
        }
        tight_adj: _Adj = {u: tuple(("", v, w) for v, w in tight[u]) for u in level_nodes}
        anchors: list[str] = []
        for comp in _tarjan_sccs(tuple(level_nodes), tight_adj):
            members = set(comp)
            cyclic = any(v in members for u in comp for _, v, _ in tight_adj[u])
            if cyclic:
                anchors.append(min(comp, key=level_nodes.index))
        if not anchors:
            raise SolverError("gain level without a critical cycle")
        dist: dict[str, int | None] = {u: (0 if u in anchors else None) for u in level_nodes}
        for _ in range(len(level_nodes) + 1):
            changed = False
            for u in level_nodes:
                for v, w in ladj[u]:
                    dv = dist[v]
                    if dv is None:
                        continue
                    cand = w + dv
                    if dist[u] is None or cand < dist[u]:
                        dist[u] = cand
                        changed = True
            if not changed:
                break
        else:
            raise SolverError("bias relaxation failed to settle")
        for u in level_nodes:
            du = dist[u]
            if du is None:
                raise SolverError(f"state {u!r} cannot reach a critical cycle of its level")
            bias[u] = Fraction(du, scale)
    return _Evaluation(gain, bias)


def _one_player_max_gain(nodes: tuple[str, ...], adj: _Adj) -> dict[str, Fraction]:
    negated = {u: tuple((inp, v, -w) for (inp, v, w) in adj[u]) for u in nodes}
    ev = _evaluate_min(nodes, negated, with_bias=False)
    return {v: -g for v, g in ev.gain.items()}


# ---------------------------------------------------------------------------
# the game solver


def solve(weighted: WeightedArena) -> ValueReport:
    """Optimal per-round values plus strategies for both sides, exactly."""
    arena = weighted.base
    nodes = arena.state_ids
    full_adj: _Adj = {
        s: tuple((inp, dst, weighted.weight[(s, inp)]) for inp, dst in arena.out_edges(s))
        for s in nodes
    }
    for s in nodes:
        if not full_adj[s]:
            raise SolverError(f"state {s!r} has no moves; prune the arena first")
    p_states = arena.protagonist_states
    a_states = arena.adversary_states

    sigma = {s: full_adj[s][0][0] for s in p_states}
    evaluation: _Evaluation | None = None
    cap = 20 + 4 * len(nodes)
    for _ in range(cap):
        adj: _Adj = {}
        for s in nodes:
            if s in sigma:
                chosen = sigma[s]
                adj[s] = tuple(e for e in full_adj[s] if e[0] == chosen)
            else:
                adj[s] = full_adj[s]
        evaluation = _evaluate_min(nodes, adj)
        switched = False
        for s in p_states:
            best_inp = None
            best_key = (evaluation.gain[s], evaluation.bias[s])
            for inp, t, w in full_adj[s]:
                key = (evaluation.gain[t], w - evaluation.gain[t] + evaluation.bias[t])
                if key > best_key:
                    best_key = key
                    best_inp = inp
            if best_inp is not None and best_inp != sigma[s]:
                sigma[s] = best_inp
                switched = True
        if not switched:
            break
    else:
        raise SolverError("strategy improvement did not converge within its cap")
    assert evaluation is not None

    witness: dict[str, str] = {}
    for s in a_states:
        for inp, t, w in full_adj[s]:
            if evaluation.gain[t] != evaluation.gain[s]:
                continue
            if evaluation.bias[s] == w - evaluation.gain[s] + evaluation.bias[t]:
                witness[s] = inp
                break
        else:
            raise SolverError(f"no value-attaining adversary edge at {s!r}")

    response_adj: _Adj = {}
    for s in nodes:
        if s in witness:
            chosen = witness[s]
            response_adj[s] = tuple(e for e in full_adj[s] if e[0] == chosen)
        else:
            response_adj[s] = full_adj[s]
    counter_gain = _one_player_max_gain(nodes, response_adj)
    if counter_gain != evaluation.gain:
        raise SolverError("certification failed: strategy and witness disagree on values")

    per_state = {s: 2 * evaluation.gain[s] for s in nodes}
    return ValueReport(per_state, dict(sigma), witness)


# ---------------------------------------------------------------------------
# adviser-level quantities


def _winning_slice(restricted: Arena) -> Arena | None:
    """Cut a restricted arena down to the protagonist's winning region.

    Returns None when the initial state is outside it. Restricted arenas of
    nominal-superset advisers contain no unsafe state, so for them this is the
    identity; general advisers may keep unsafe states structurally reachable
    and lose them here.
    """
    unsafe_inside = frozenset(s for s in restricted.state_ids if not restricted.is_safe(s))
    if not unsafe_inside:
        return restricted
    attr = adversary_attractor(restricted, unsafe_inside)
    if restricted.initial in attr:
        return None
    states = tuple(s for s in restricted.states if s.id not in attr)
    transitions = {
        (src, inp): dst
        for (src, inp), dst in restricted.transitions.items()
        if src not in attr and dst not in attr
    }
    carved = Arena(states, restricted.initial, transitions,
                   restricted.protagonist_inputs, restricted.adversary_inputs)
    pruned = prune_blocking(carved)
    if pruned is None:
        return None
    return pruned[0]


def solve_adviser(arena: Arena, adviser: dict[str, frozenset[str] | set[str]]) -> tuple[Arena, ValueReport]:
    """Solve the restricted game of a good adviser.

    Returns the winning slice of the restricted arena together with the value
    report on it; raises NotGoodAdviserError when the adviser is not good.
    """
    full = normalize_adviser(arena, adviser)
    restricted = nonblocking_restricted(arena, full)
    if restricted is None:
        raise NotGoodAdviserError("the restricted arena admits no play")
    winning = _winning_slice(restricted)
    if winning is None:
        raise NotGoodAdviserError("no winning protagonist strategy under this adviser")
    return winning, solve(build_meanpayoff(winning, full))


def limitation(arena: Arena, adviser: dict[str, frozenset[str] | set[str]]) -> Fraction:
    """Worst-case long-run advice burden per round under best protagonist play."""
    winning, report = solve_adviser(arena, adviser)
    return -report.per_state[winning.initial]


def worst_case_average(arena: Arena, adviser: dict[str, frozenset[str] | set[str]],
                       strategy: dict[str, str]) -> Fraction:
    """Worst-case per-round advice pressure of one fixed protagonist strategy.

    The adversary freely steers inside the restricted arena while the strategy
    pins the protagonist; the result is the largest per-round forbidden-input
    average over cycles reachable from the initial state. No safety credit or
    penalty applies here, the number is pure advice pressure.
    """
    full = normalize_adviser(arena, adviser)
    restricted = nonblocking_restricted(arena, full)
    if restricted is None:
        raise NotGoodAdviserError("the restricted arena admits no play")
    weighted = build_meanpayoff(restricted, full)
    adj: _Adj = {}
    for s in restricted.state_ids:
        edges = tuple((inp, dst, weighted.weight[(s, inp)]) for inp, dst in restricted.out_edges(s))
        if restricted.owner(s) == PROTAGONIST:
            if s not in strategy:
                raise InvalidStrategyError(f"strategy has no choice at {s!r}")
            chosen = strategy[s]
            if chosen not in enabled_inputs(restricted, s):
                raise InvalidStrategyError(f"strategy picks disabled input {chosen!r} at {s!r}")
            edges = tuple(e for e in edges if e[0] == chosen)
        adj[s] = edges
    ev = _evaluate_min(tuple(restricted.state_ids), adj, with_bias=False)
    return -2 * ev.gain[restricted.initial]
