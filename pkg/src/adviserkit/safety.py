"""Losing-region analysis and the nominal adviser.

The losing region collects the states from which unsafe territory cannot be
avoided no matter what either side does: unsafe states seed it, and a state
joins when every enabled input leads into it (a state with no enabled input
joins vacuously). The nominal adviser forbids, at each adversary state,
exactly the inputs pointing into that region, and everything at unsafe
adversary states. It is the most conservative adviser worth considering and
the fallback the guided runtime can always switch to.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arena import ADVERSARY, Adviser, Arena, enabled_inputs


class NoGoodAdviserError(ValueError):
    """The initial state already sits in the losing region; nothing can help."""


@dataclass(frozen=True)
class LosingLadder:
    """The increasing level sets of the losing fixpoint, last level repeated."""

    levels: tuple[frozenset[str], ...]
    final: frozenset[str]

    @property
    def iterations(self) -> int:
        return len(self.levels) - 1


def compute_losing(arena: Arena) -> LosingLadder:
    """Run the both-owner fixpoint from the unsafe set upward."""
    current = frozenset(arena.unsafe_states)
    levels = [current]
    while True:
        grown = set(current)
        for s in arena.states:
            if s.id in current:
                continue
            if all(dst in current for _, dst in arena.out_edges(s.id)):
                grown.add(s.id)
        nxt = frozenset(grown)
        levels.append(nxt)
        if nxt == current:
            break
        current = nxt
    return LosingLadder(tuple(levels), current)


def nominal_adviser(arena: Arena) -> tuple[Adviser, LosingLadder]:
    """Forbid every input into the losing region, everything at unsafe adversary states.

    The adviser carries an entry for every adversary state, empty where nothing
    is forbidden, so advisers compare as plain total maps.
    """
    ladder = compute_losing(arena)
    losing = ladder.final
    adviser: Adviser = {}
    for sid in arena.adversary_states:
        enabled = enabled_inputs(arena, sid)
        if not arena.is_safe(sid):
            adviser[sid] = frozenset(enabled)
        else:
            adviser[sid] = frozenset(u for u in enabled if arena.target(sid, u) in losing)
    return adviser, ladder


def exists_good_adviser(arena: Arena) -> bool:
    """True iff the initial state stays out of the losing region."""
    return arena.initial not in compute_losing(arena).final


def adversary_attractor(arena: Arena, targets: frozenset[str] | set[str]) -> frozenset[str]:
    """States from which the adversary can force a visit to ``targets``.

    Adversary states join when some enabled input leads in, protagonist states
    when all of them do (including the vacuous no-input case). Used to carve
    the protagonist's winning region out of a restricted arena when an adviser
    leaves unsafe states structurally reachable.
    """
    known = set(arena.state_ids)
    for t in targets:
        if t not in known:
            raise KeyError(f"unknown target state {t!r}")
    attr = set(targets)
    changed = True
    while changed:
        changed = False
        for s in arena.states:
            if s.id in attr:
                continue
            edges = arena.out_edges(s.id)
            if s.owner == ADVERSARY:
                hit = any(dst in attr for _, dst in edges)
            else:
                hit = all(dst in attr for _, dst in edges)
            if hit:
                attr.add(s.id)
                changed = True
    return frozenset(attr)
