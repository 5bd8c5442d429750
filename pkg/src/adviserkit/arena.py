"""Turn-based game arenas and advisers.

The data model follows a strict two-player shape: states are owned either by
the protagonist (the controllable side) or the adversary, ownership alternates
along every transition, and play starts at a protagonist-owned initial state.
An adviser marks, per adversary state, the inputs the adversary is asked not
to use; restricting an arena by an adviser deletes exactly those edges.

Everything here is immutable after construction and safe to share across
threads. Algorithms iterate states and transitions in insertion order, so all
derived artifacts are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

PROTAGONIST = "protagonist"
ADVERSARY = "adversary"

PASS_INPUT = "ε_pass"

#: An adviser maps adversary state ids to the set of forbidden input labels.
Adviser = dict[str, frozenset[str]]


class InvalidArenaError(ValueError):
    """Raised when an operation needs a structurally valid arena and got none."""


class InvalidAdviserError(ValueError):
    """Raised for advisers that forbid unknown inputs or touch non-adversary states."""


@dataclass(frozen=True)
class State:
    id: str
    owner: str
    safe: bool = True
    label: str | None = None


@dataclass(frozen=True)
class Finding:
    """One validation result; ``kind`` is ``"error"`` or ``"warning"``."""

    kind: str
    code: str
    message: str


@dataclass(frozen=True)
class Arena:
    """A finite turn-based game graph.

    ``transitions`` maps ``(state_id, input_label)`` to the target state id.
    ``protagonist_inputs`` / ``adversary_inputs`` are the declared alphabets;
    when omitted they are inferred from the transitions by source ownership.
    The two alphabets may overlap (a shared pass label is common).
    """

    states: tuple[State, ...]
    initial: str
    transitions: dict[tuple[str, str], str]
    protagonist_inputs: tuple[str, ...] = ()
    adversary_inputs: tuple[str, ...] = ()
    _by_id: dict[str, State] = field(init=False, repr=False, compare=False)
    _out: dict[str, tuple[tuple[str, str], ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_id = {s.id: s for s in self.states}
        out: dict[str, list[tuple[str, str]]] = {s.id: [] for s in self.states}
        for (src, inp), dst in self.transitions.items():
            if src in out:
                out[src].append((inp, dst))
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_out", {s: tuple(edges) for s, edges in out.items()})
        if not self.protagonist_inputs or not self.adversary_inputs:
            inferred_p: list[str] = []
            inferred_a: list[str] = []
            for (src, inp), _ in self.transitions.items():
                owner = by_id[src].owner if src in by_id else None
                pool = inferred_p if owner == PROTAGONIST else inferred_a
                if inp not in pool:
                    pool.append(inp)
            if not self.protagonist_inputs:
                object.__setattr__(self, "protagonist_inputs", tuple(inferred_p))
            if not self.adversary_inputs:
                object.__setattr__(self, "adversary_inputs", tuple(inferred_a))

    # -- lookups ------------------------------------------------------------

    def state(self, sid: str) -> State:
        try:
            return self._by_id[sid]
        except KeyError:
            raise InvalidArenaError(f"unknown state id {sid!r}") from None

    def has_state(self, sid: str) -> bool:
        return sid in self._by_id

    def owner(self, sid: str) -> str:
        return self.state(sid).owner

    def is_safe(self, sid: str) -> bool:
        return self.state(sid).safe

    def out_edges(self, sid: str) -> tuple[tuple[str, str], ...]:
        """(input, target) pairs leaving ``sid``, in insertion order."""
        self.state(sid)
        return self._out.get(sid, ())

    def target(self, sid: str, inp: str) -> str:
        try:
            return self.transitions[(sid, inp)]
        except KeyError:
            raise InvalidArenaError(f"no transition from {sid!r} on {inp!r}") from None

    @property
    def state_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.states)

    @property
    def protagonist_states(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.states if s.owner == PROTAGONIST)

    @property
    def adversary_states(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.states if s.owner == ADVERSARY)

    @property
    def unsafe_states(self) -> frozenset[str]:
        return frozenset(s.id for s in self.states if not s.safe)


def enabled_inputs(arena: Arena, sid: str) -> tuple[str, ...]:
    """Inputs with a transition out of ``sid``, in declaration order."""
    return tuple(inp for inp, _ in arena.out_edges(sid))


def validate(arena: Arena, strict: bool = False) -> list[Finding]:
    """Check the arena invariants and return findings instead of raising.

    An empty list means the arena is well formed. ``strict`` additionally
    reports transition-target sharing as warnings: the model treats the
    transition map as a partial function and tolerates two edges reaching the
    same state, but some modelling styles want to know about it.
    """
    findings: list[Finding] = []
    seen: set[str] = set()
    for s in arena.states:
        if s.id in seen:
            findings.append(Finding("error", "duplicate-state", f"state id {s.id!r} appears twice"))
        seen.add(s.id)
        if s.owner not in (PROTAGONIST, ADVERSARY):
            findings.append(Finding("error", "bad-owner", f"state {s.id!r} has owner {s.owner!r}"))

    if arena.initial not in seen:
        findings.append(Finding("error", "initial-missing", f"initial state {arena.initial!r} does not exist"))
    elif arena._by_id[arena.initial].owner != PROTAGONIST:
        findings.append(Finding("error", "initial-not-protagonist",
                                f"initial state {arena.initial!r} is adversary-owned"))

    targets: dict[str, list[tuple[str, str]]] = {}
    for (src, inp), dst in arena.transitions.items():
        if src not in seen:
            findings.append(Finding("error", "unknown-source", f"transition from unknown state {src!r}"))
            continue
        if dst not in seen:
            findings.append(Finding("error", "unknown-target", f"transition {src!r} --{inp}--> unknown {dst!r}"))
            continue
        src_owner = arena._by_id[src].owner
        dst_owner = arena._by_id[dst].owner
        if src_owner == dst_owner and src_owner in (PROTAGONIST, ADVERSARY):
            findings.append(Finding("error", "no-alternation",
                                    f"transition {src!r} --{inp}--> {dst!r} stays with the {src_owner}"))
        alphabet = arena.protagonist_inputs if src_owner == PROTAGONIST else arena.adversary_inputs
        if inp not in alphabet:
            side = "protagonist" if src_owner == PROTAGONIST else "adversary"
            findings.append(Finding("error", "input-not-in-alphabet",
                                    f"input {inp!r} used at {src!r} is not a declared {side} input"))
        targets.setdefault(dst, []).append((src, inp))

    if strict:
        for dst, sources in targets.items():
            if len(sources) > 1:
                pairs = ", ".join(f"({src}, {inp})" for src, inp in sources)
                findings.append(Finding("warning", "shared-target",
                                        f"state {dst!r} is reached by more than one transition: {pairs}"))
    return findings


def normalize_adviser(arena: Arena, adviser: dict[str, frozenset[str] | set[str]]) -> Adviser:
    """Materialize an adviser over every adversary state and check it.

    Missing adversary states get an empty forbidden set. Raises
    InvalidAdviserError when a key is not an adversary state or a forbidden
    input is not enabled where it is forbidden.
    """
    full: Adviser = {}
    for sid in arena.adversary_states:
        full[sid] = frozenset(adviser.get(sid, frozenset()))
    for sid, forbidden in adviser.items():
        if not arena.has_state(sid) or arena.owner(sid) != ADVERSARY:
            raise InvalidAdviserError(f"adviser key {sid!r} is not an adversary state")
        extra = frozenset(forbidden) - set(enabled_inputs(arena, sid))
        if extra:
            raise InvalidAdviserError(
                f"adviser forbids inputs not enabled at {sid!r}: {sorted(extra)}")
    return full


def restrict(arena: Arena, adviser: dict[str, frozenset[str] | set[str]]) -> Arena:
    """Drop exactly the forbidden adversary edges; protagonist edges survive."""
    full = normalize_adviser(arena, adviser)
    kept = {
        (src, inp): dst
        for (src, inp), dst in arena.transitions.items()
        if not (arena.owner(src) == ADVERSARY and inp in full.get(src, frozenset()))
    }
    return Arena(arena.states, arena.initial, kept,
                 arena.protagonist_inputs, arena.adversary_inputs)


def prune_blocking(arena: Arena) -> tuple[Arena, frozenset[str]] | None:
    """Remove dead ends and everything the initial state cannot reach.

    A state is blocking when it has no enabled input left, or when every
    remaining input leads to an already removed state; removal is iterated to
    a fixpoint. States the initial state can no longer reach afterwards carry
    no play and are dropped too. Returns None when the initial state itself
    dies, meaning the arena admits no play at all; otherwise the surviving
    arena has the same play set as the input.
    """
    removed: set[str] = set()
    changed = True
    while changed:
        changed = False
        for s in arena.states:
            if s.id in removed:
                continue
            if all(dst in removed for _, dst in arena.out_edges(s.id)):
                removed.add(s.id)
                changed = True
    if arena.initial in removed:
        return None

    reachable: set[str] = set()
    queue: deque[str] = deque([arena.initial])
    while queue:
        sid = queue.popleft()
        if sid in reachable:
            continue
        reachable.add(sid)
        for _, dst in arena.out_edges(sid):
            if dst not in removed and dst not in reachable:
                queue.append(dst)
    removed.update(s.id for s in arena.states if s.id not in reachable)

    states = tuple(s for s in arena.states if s.id not in removed)
    transitions = {
        (src, inp): dst
        for (src, inp), dst in arena.transitions.items()
        if src not in removed and dst not in removed
    }
    pruned = Arena(states, arena.initial, transitions,
                   arena.protagonist_inputs, arena.adversary_inputs)
    return pruned, frozenset(removed)


def nonblocking_restricted(arena: Arena, adviser: dict[str, frozenset[str] | set[str]]) -> Arena | None:
    """The restricted arena with dead ends pruned, or None if no play survives."""
    result = prune_blocking(restrict(arena, adviser))
    if result is None:
        return None
    return result[0]


def alternation_transform(raw: Arena) -> Arena:
    """Repair same-owner transitions by splitting them through a fresh state.

    Each offending edge (s, u, s') becomes (s, u, m) and (m, pass, s') where m
    is a fresh state of the opposite owner inheriting s's safety flag. Arenas
    that already alternate come back unchanged.
    """
    offending = [
        (src, inp, dst)
        for (src, inp), dst in raw.transitions.items()
        if raw.owner(src) == raw.owner(dst)
    ]
    if not offending:
        return raw

    states = list(raw.states)
    ids = {s.id for s in states}
    transitions = dict(raw.transitions)
    p_inputs = list(raw.protagonist_inputs)
    a_inputs = list(raw.adversary_inputs)
    for src, inp, dst in offending:
        mid_owner = ADVERSARY if raw.owner(src) == PROTAGONIST else PROTAGONIST
        mid = f"{src}__via__{inp}"
        while mid in ids:
            mid = mid + "_"
        ids.add(mid)
        states.append(State(mid, mid_owner, safe=raw.is_safe(src)))
        del transitions[(src, inp)]
        transitions[(src, inp)] = mid
        transitions[(mid, PASS_INPUT)] = dst
        pool = a_inputs if mid_owner == ADVERSARY else p_inputs
        if PASS_INPUT not in pool:
            pool.append(PASS_INPUT)
    return Arena(tuple(states), raw.initial, transitions, tuple(p_inputs), tuple(a_inputs))


def is_play_prefix(arena: Arena, sequence: list[str] | tuple[str, ...]) -> bool:
    """True when the id sequence is a path from the initial state.

    Checks the start, the transition relation, and owner alternation starting
    with the protagonist; the empty sequence counts as a prefix.
    """
    if not sequence:
        return True
    if sequence[0] != arena.initial:
        return False
    for i, sid in enumerate(sequence):
        if not arena.has_state(sid):
            return False
        expected = PROTAGONIST if i % 2 == 0 else ADVERSARY
        if arena.owner(sid) != expected:
            return False
    for a, b in zip(sequence, sequence[1:]):
        if b not in {dst for _, dst in arena.out_edges(a)}:
            return False
    return True
