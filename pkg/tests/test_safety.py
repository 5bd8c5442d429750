"""Losing-region ladder, nominal adviser construction, and attractors.

The random-arena checks here run the library against the independent
fixpoint in tests/oracles.py, which shrinks a safe set instead of growing
an unsafe one.
"""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adviserkit import (
    adversary_attractor,
    compute_losing,
    exists_good_adviser,
    nominal_adviser,
    nonblocking_restricted,
)
from conftest import as_oracle_tables, build_arena, random_alternating_arena
from oracles import oracle_losing


def test_fig1_ladder_levels(fig1):
    ladder = compute_losing(fig1)
    assert ladder.levels[0] == frozenset({"s5", "s6", "s7"})
    assert ladder.levels[1] == frozenset({"s4", "s5", "s6", "s7"})
    assert ladder.final == frozenset({"s4", "s5", "s6", "s7"})
    assert ladder.iterations == 2


def test_fig2_losing_is_only_the_unsafe_state(fig2):
    assert compute_losing(fig2).final == frozenset({"s4"})


def test_fig3_losing(fig3):
    assert compute_losing(fig3).final == frozenset({"s4", "s7", "s10", "s11", "s12"})


def test_ladder_shape_invariants(fig1, fig2, fig3):
    for arena in (fig1, fig2, fig3):
        ladder = compute_losing(arena)
        unsafe = frozenset(s for s in arena.state_ids if not arena.is_safe(s))
        assert ladder.levels[0] == unsafe
        for lo, hi in zip(ladder.levels, ladder.levels[1:]):
            assert lo <= hi
        assert ladder.levels[-1] == ladder.final
        assert ladder.iterations <= len(arena.state_ids)


def test_dead_end_is_doomed_even_when_safe():
    # A dead end carries no infinite play, so it cannot appear in any
    # winning play even though it is never unsafe itself, and the doom
    # propagates to every state forced through it.
    arena = build_arena("p0:p a0:a a1:a p1:p", "p0",
                        [("p0", "go", "a0"), ("p0", "risk", "a1"),
                         ("a0", "u", "p0"), ("a1", "u", "p1")])
    assert compute_losing(arena).final == frozenset({"a1", "p1"})


def test_nominal_forbids_losing_targets(fig1):
    adviser, ladder = nominal_adviser(fig1)
    assert ladder.final == frozenset({"s4", "s5", "s6", "s7"})
    assert adviser == {
        "s2": frozenset({"u_a3"}),
        "s4": frozenset({"u_a4", "u_a5"}),
        "s6": frozenset({"u_a6", "u_a7"}),
    }


def test_nominal_fig2(fig2):
    adviser, _ = nominal_adviser(fig2)
    assert adviser == {
        "s2": frozenset({"u_a2"}),
        "s6": frozenset({"u_a5"}),
        "s7": frozenset(),
    }


def test_nominal_fig3(fig3):
    adviser, _ = nominal_adviser(fig3)
    assert adviser == {
        "s2": frozenset({"u_a2"}),
        "s6": frozenset(),
        "s7": frozenset({"u_a5"}),
        "s8": frozenset({"u_a7", "u_a8"}),
        "s11": frozenset({"u_a9"}),
    }


def test_nominal_forbids_everything_at_losing_adversary_states():
    arena = build_arena("p0:p a0:a! p1:p a1:a", "p0",
                        [("p0", "go", "a0"), ("a0", "u", "p1"),
                         ("p1", "back", "a1"), ("a1", "v", "p1"),
                         ("p0", "safe", "a1")])
    adviser, ladder = nominal_adviser(arena)
    assert "a0" in ladder.final
    assert adviser["a0"] == frozenset({"u"})


def test_pruned_nominal_restriction_contains_no_losing_state(fig3):
    """Forbidding every adversary input that targets the losing region
    blocks losing adversary states outright, and the reachability sweep
    then drops the losing protagonist states they guarded."""
    adviser, ladder = nominal_adviser(fig3)
    pruned = nonblocking_restricted(fig3, adviser)
    assert pruned is not None
    assert set(pruned.state_ids) == {"s1", "s2", "s3", "s5", "s6", "s8", "s9"}
    assert not set(pruned.state_ids) & ladder.final


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 100_000))
def test_losing_matches_shrinking_oracle(seed):
    rng = random.Random(seed)
    arena = random_alternating_arena(rng)
    states, edges = as_oracle_tables(arena)
    assert compute_losing(arena).final == oracle_losing(states, edges)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_good_adviser_exists_iff_initial_survives(seed):
    rng = random.Random(seed)
    arena = random_alternating_arena(rng, unsafe_prob=0.35)
    states, edges = as_oracle_tables(arena)
    expected = arena.initial not in oracle_losing(states, edges)
    assert exists_good_adviser(arena) is expected


def test_attractor_pulls_through_both_owners(fig2):
    # s2 and s6 can each steer into s4, and s1/s3 have no edge avoiding
    # them, while the s5/s7 loop never touches the pull.
    region = adversary_attractor(fig2, frozenset({"s4"}))
    assert region == frozenset({"s1", "s2", "s3", "s4", "s6"})


def test_unrestricted_adversary_forces_the_trap(fig1):
    # Without an adviser the trap swallows the whole arena; this is the
    # situation advisers exist to prevent.
    assert adversary_attractor(fig1, frozenset({"s7"})) == frozenset(fig1.state_ids)


def test_attractor_of_nothing_is_nothing(fig2):
    assert adversary_attractor(fig2, frozenset()) == frozenset()


def test_attractor_requires_known_targets(fig2):
    with pytest.raises(KeyError):
        adversary_attractor(fig2, frozenset({"nope"}))
