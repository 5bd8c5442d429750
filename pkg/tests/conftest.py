import random

import pytest

from adviserkit import ADVERSARY, PROTAGONIST, Arena, State, fixture


def build_arena(spec: str, initial: str, edges: list[tuple[str, str, str]]) -> Arena:
    """Compact arena builder for tests.

    ``spec`` is a whitespace list of tokens like "s1:p" or "s4:a!" where '!'
    marks an unsafe state; ``edges`` are (src, input, dst) triples.
    """
    states = []
    for token in spec.split():
        name, owner = token.split(":")
        unsafe = owner.endswith("!")
        owner = owner.rstrip("!")
        states.append(State(
            id=name,
            owner=PROTAGONIST if owner == "p" else ADVERSARY,
            safe=not unsafe,
        ))
    return Arena(
        states=tuple(states),
        initial=initial,
        transitions={(s, i): d for s, i, d in edges},
    )


def random_alternating_arena(rng: random.Random, max_side: int = 5,
                             p_degree: tuple[int, int] = (1, 2),
                             a_degree: tuple[int, int] = (1, 3),
                             unsafe_prob: float = 0.25) -> Arena:
    """Random valid arena: alternating, non-blocking, protagonist initial."""
    n_p = rng.randint(1, max_side)
    n_a = rng.randint(1, max_side)
    p_ids = [f"p{i}" for i in range(n_p)]
    a_ids = [f"a{i}" for i in range(n_a)]
    states = [State(id=s, owner=PROTAGONIST, safe=(s == "p0" or rng.random() > unsafe_prob))
              for s in p_ids]
    states += [State(id=s, owner=ADVERSARY, safe=rng.random() > unsafe_prob)
               for s in a_ids]
    transitions: dict[tuple[str, str], str] = {}
    for s in p_ids:
        for j in range(rng.randint(*p_degree)):
            transitions[(s, f"m{j}")] = rng.choice(a_ids)
    for s in a_ids:
        for j in range(rng.randint(*a_degree)):
            transitions[(s, f"m{j}")] = rng.choice(p_ids)
    return Arena(states=tuple(states), initial="p0", transitions=transitions)


def as_oracle_tables(arena: Arena):
    """Project an Arena onto the plain dicts the oracle module works with."""
    states = {s.id: (s.owner, s.safe) for s in arena.states}
    return states, dict(arena.transitions)


@pytest.fixture
def fig1() -> Arena:
    return fixture("fig1")


@pytest.fixture
def fig2() -> Arena:
    return fixture("fig2")


@pytest.fixture
def fig3() -> Arena:
    return fixture("fig3")
