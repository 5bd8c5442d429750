"""Built-in example arenas.

Three small hand-written games exercise every interesting shape the toolkit
has to handle: an arena whose only safe region is a two-state shuttle guarded
by one restricted junction (fig1, alias "escalate"), one where the cheapest
good adviser steers play into a branch that costs nothing in the long run
(fig2, alias "detour"), and a larger one with two disjoint safe loops where
guided execution can switch advisers mid-play (fig3, alias "switchback").
"""

from __future__ import annotations

from .arena import ADVERSARY, PROTAGONIST, Arena, State


def _arena(spec: list[tuple[str, str, bool]], initial: str,
           edges: list[tuple[str, str, str]]) -> Arena:
    states = tuple(State(sid, owner, safe) for sid, owner, safe in spec)
    transitions = {(src, inp): dst for src, inp, dst in edges}
    return Arena(states, initial, transitions)


def escalate() -> Arena:
    """Seven states; the adversary can push play toward a three-state unsafe trap."""
    p, a = PROTAGONIST, ADVERSARY
    return _arena(
        [
            ("s1", p, True),
            ("s2", a, True),
            ("s3", p, True),
            ("s4", a, True),
            ("s5", p, False),
            ("s6", a, False),
            ("s7", p, False),
        ],
        "s1",
        [
            ("s1", "u_p1", "s2"),
            ("s1", "u_p2", "s4"),
            ("s2", "u_a1", "s1"),
            ("s2", "u_a2", "s3"),
            ("s2", "u_a3", "s5"),
            ("s3", "u_p3", "s2"),
            ("s3", "u_p4", "s4"),
            ("s4", "u_a4", "s5"),
            ("s4", "u_a5", "s7"),
            ("s5", "u_p5", "s6"),
            ("s6", "u_a6", "s5"),
            ("s6", "u_a7", "s7"),
            ("s7", "u_p6", "s6"),
            ("s7", "u_p7", "s4"),
        ],
    )


def detour() -> Arena:
    """Two branches from one junction; only the right-hand loop is free of advice."""
    p, a = PROTAGONIST, ADVERSARY
    return _arena(
        [
            ("s1", p, True),
            ("s2", a, True),
            ("s3", p, True),
            ("s4", p, False),
            ("s5", p, True),
            ("s6", a, True),
            ("s7", a, True),
        ],
        "s1",
        [
            ("s1", "u_p1", "s2"),
            ("s2", "u_a1", "s3"),
            ("s2", "u_a2", "s4"),
            ("s2", "u_a3", "s5"),
            ("s3", "u_p2", "s6"),
            ("s4", "u_p3", "s6"),
            ("s5", "u_p4", "s7"),
            ("s6", "u_a4", "s3"),
            ("s6", "u_a5", "s4"),
            ("s7", "u_a6", "s5"),
        ],
    )


def switchback() -> Arena:
    """Twelve states, two safe loops of different advice cost, one deep trap."""
    p, a = PROTAGONIST, ADVERSARY
    return _arena(
        [
            ("s1", p, True),
            ("s2", a, True),
            ("s3", p, True),
            ("s4", p, False),
            ("s5", p, True),
            ("s6", a, True),
            ("s7", a, True),
            ("s8", a, True),
            ("s9", p, True),
            ("s10", p, True),
            ("s11", a, True),
            ("s12", p, False),
        ],
        "s1",
        [
            ("s1", "u_p1", "s2"),
            ("s2", "u_a1", "s3"),
            ("s2", "u_a2", "s4"),
            ("s2", "u_a3", "s5"),
            ("s3", "u_p2", "s6"),
            ("s3", "u_p3", "s7"),
            ("s4", "u_p4", "s7"),
            ("s5", "u_p5", "s8"),
            ("s6", "u_a4", "s3"),
            ("s7", "u_a5", "s4"),
            ("s8", "u_a6", "s9"),
            ("s8", "u_a7", "s10"),
            ("s8", "u_a8", "s12"),
            ("s9", "u_p6", "s8"),
            ("s10", "u_p8", "s11"),
            ("s11", "u_a9", "s12"),
            ("s12", "u_p7", "s8"),
        ],
    )


_BUILDERS = {
    "fig1": escalate,
    "fig2": detour,
    "fig3": switchback,
    "escalate": escalate,
    "detour": detour,
    "switchback": switchback,
}

FIXTURE_NAMES = ("fig1", "fig2", "fig3")
FIXTURE_ALIASES = {"escalate": "fig1", "detour": "fig2", "switchback": "fig3"}


def fixture(name: str) -> Arena:
    """Look up a built-in arena by canonical name or alias."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        known = ", ".join(sorted(_BUILDERS))
        raise KeyError(f"unknown fixture {name!r}; known: {known}") from None
    return builder()
