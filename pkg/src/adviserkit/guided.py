"""Runtime loop for guided execution.

A session walks the full arena, not the restricted one: the whole point is to
keep going sensibly when the adversary ignores advice. Advice at an adversary
state splits its enabled inputs three ways. Hard inputs are forbidden by the
nominal adviser and taking one is unrecoverable, the session advances once
more (so the consequence is visible) and halts. Soft inputs are forbidden only
by the current adviser; taking one triggers a switch to the best feasible
pointwise-smaller candidate, with the nominal adviser as the always-feasible
floor. Everything else is allowed.

Counters charge each adversary round with the size of the advice that was
actually on display, so a soft violation bills the old adviser, not the
replacement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .arena import ADVERSARY, PROTAGONIST, Arena, enabled_inputs
from .meanpayoff import MemorylessStrategy, build_meanpayoff, solve
from .search import CandidateRecord, SolveBundle, successors_in_order

HALTED_NO = "no"
HALTED_HARD = "hard_violation"
HALTED_UNSAFE = "unsafe"

OUTCOME_NORMAL = "normal"
OUTCOME_SOFT = "soft_violation"
OUTCOME_HARD = "hard_violation"
OUTCOME_UNSAFE = "unsafe_reached"


class SessionError(RuntimeError):
    """A session operation was called out of turn or with a bad input."""


class ScriptExhaustedError(SessionError):
    """The scripted adversary ran out of moves."""


@dataclass(frozen=True)
class AdvicePacket:
    state: str
    hard: frozenset[str]
    soft: frozenset[str]
    allowed: frozenset[str]


@dataclass(frozen=True)
class StepEvent:
    actor: str
    input: str
    from_state: str
    to_state: str
    outcome: str
    new_adviser_index: int | None = None


@dataclass
class Session:
    """Mutable play state; single-writer, see the module docstring for rules."""

    bundle: SolveBundle
    current_state: str
    current_adviser: int
    current_strategy: MemorylessStrategy
    history: list[StepEvent] = field(default_factory=list)
    running_sum: int = 0
    rounds: int = 0
    halted: str = HALTED_NO
    rank_at_successor: bool = True

    @property
    def arena(self) -> Arena:
        return self.bundle.arena

    @property
    def adviser_record(self) -> CandidateRecord:
        return self.bundle.candidates[self.current_adviser]

    def average(self) -> tuple[int, int] | None:
        """Empirical advice pressure so far as (sum, rounds), None before any round."""
        if self.rounds == 0:
            return None
        return self.running_sum, self.rounds


def start(bundle: SolveBundle) -> Session:
    """Open a session at the initial state under the least limiting adviser."""
    if bundle.best_index is None:
        raise SessionError("bundle has not been solved; run synthesize first")
    best = bundle.candidates[bundle.best_index]
    assert best.strategy is not None
    return Session(
        bundle=bundle,
        current_state=bundle.arena.initial,
        current_adviser=bundle.best_index,
        current_strategy=dict(best.strategy),
    )


def _require_live(session: Session, owner: str) -> None:
    if session.halted != HALTED_NO:
        raise SessionError(f"session is halted ({session.halted})")
    actual = session.arena.owner(session.current_state)
    if actual != owner:
        raise SessionError(
            f"expected a {owner} state, but {session.current_state!r} belongs to {actual}")


def _advance(session: Session, actor: str, inp: str, outcome: str,
             new_index: int | None = None) -> StepEvent:
    src = session.current_state
    dst = session.arena.target(src, inp)
    if dst is None:
        raise SessionError(f"input {inp!r} is not enabled at {src!r}")
    if outcome == OUTCOME_NORMAL and not session.arena.is_safe(dst):
        outcome = OUTCOME_UNSAFE
    event = StepEvent(actor=actor, input=inp, from_state=src, to_state=dst,
                      outcome=outcome, new_adviser_index=new_index)
    session.current_state = dst
    session.history.append(event)
    if outcome == OUTCOME_HARD:
        session.halted = HALTED_HARD
    elif outcome == OUTCOME_UNSAFE:
        session.halted = HALTED_UNSAFE
    return event


def protagonist_step(session: Session) -> StepEvent:
    """Apply the current strategy once."""
    _require_live(session, PROTAGONIST)
    choice = session.current_strategy.get(session.current_state)
    if choice is None:
        raise SessionError(f"current strategy has no choice at {session.current_state!r}")
    return _advance(session, PROTAGONIST, choice, OUTCOME_NORMAL)


def advice(session: Session) -> AdvicePacket:
    """Partition the enabled inputs at the current adversary state."""
    _require_live(session, ADVERSARY)
    state = session.current_state
    enabled = frozenset(enabled_inputs(session.arena, state))
    hard = frozenset(session.bundle.nominal.adviser.get(state, frozenset()))
    current = frozenset(session.adviser_record.adviser.get(state, frozenset()))
    return AdvicePacket(state=state, hard=hard, soft=current - hard,
                        allowed=enabled - current)


def adversary_step(session: Session, inp: str) -> StepEvent:
    """Process one adversary input, switching advisers on a soft violation."""
    packet = advice(session)
    if inp not in packet.hard | packet.soft | packet.allowed:
        raise SessionError(f"input {inp!r} is not enabled at {packet.state!r}")

    issued = len(session.adviser_record.adviser.get(packet.state, frozenset()))
    session.running_sum += issued
    session.rounds += 1

    if inp in packet.allowed:
        return _advance(session, ADVERSARY, inp, OUTCOME_NORMAL)
    if inp in packet.hard:
        return _advance(session, ADVERSARY, inp, OUTCOME_HARD)

    successor = session.arena.target(packet.state, inp)
    assert successor is not None

    def feasible(record: CandidateRecord) -> bool:
        if inp in record.adviser.get(packet.state, frozenset()):
            return False
        assert record.restricted is not None
        return record.restricted.has_state(successor)

    rank_state = successor if session.rank_at_successor else None
    options = successors_in_order(session.bundle, session.adviser_record,
                                  feasible, rank_state=rank_state)
    if not options:
        raise SessionError(
            "no feasible fallback adviser; the nominal adviser should always qualify")
    chosen = options[0]
    new_index = next(i for i, rec in enumerate(session.bundle.candidates)
                     if rec.adviser == chosen.adviser)
    assert chosen.strategy is not None
    session.current_adviser = new_index
    session.current_strategy = dict(chosen.strategy)
    return _advance(session, ADVERSARY, inp, OUTCOME_SOFT, new_index=new_index)


# ---------------------------------------------------------------------------
# adversary policies for simulation


def _live_allowed(session: Session) -> list[str]:
    """Allowed inputs whose target can still sustain play under the adviser.

    An input may be unforbidden yet lead into a region the current
    restriction has written off (every continuation there eventually
    blocks); a compliant adversary intent on playing forever never takes
    it. From any state of the restricted arena at least one allowed input
    stays inside, so the filtered pool is never empty in normal operation.
    """
    packet = advice(session)
    restricted = session.adviser_record.restricted
    assert restricted is not None
    live = sorted(
        inp for inp in packet.allowed
        if restricted.has_state(session.arena.target(packet.state, inp)))
    return live or sorted(packet.allowed)


class CompliantRandom:
    """Uniform choice among allowed inputs; never violates any advice."""

    def __init__(self, seed: int):
        self._rng = random.Random(seed)

    def choose(self, session: Session) -> str:
        pool = _live_allowed(session)
        if not pool:
            raise SessionError(
                f"no allowed input at {session.current_state!r}; adviser is over-restrictive")
        return self._rng.choice(pool)


class WorstCase:
    """Value-optimal compliant adversary, re-derived per adviser and cached."""

    def __init__(self) -> None:
        self._witnesses: dict[int, dict[str, str]] = {}

    def choose(self, session: Session) -> str:
        index = session.current_adviser
        witness = self._witnesses.get(index)
        if witness is None:
            record = session.bundle.candidates[index]
            assert record.restricted is not None
            report = solve(build_meanpayoff(record.restricted, record.adviser))
            witness = report.adversary_witness
            self._witnesses[index] = witness
        pick = witness.get(session.current_state)
        if pick is None:
            pool = _live_allowed(session)
            if not pool:
                raise SessionError(f"no allowed input at {session.current_state!r}")
            return pool[0]
        return pick


class Scripted:
    """Plays a fixed input list, then raises ScriptExhaustedError."""

    def __init__(self, inputs: list[str]):
        self._queue = list(inputs)
        self._pos = 0

    @property
    def remaining(self) -> int:
        return len(self._queue) - self._pos

    def choose(self, session: Session) -> str:
        if self._pos >= len(self._queue):
            raise ScriptExhaustedError("scripted adversary has no moves left")
        inp = self._queue[self._pos]
        self._pos += 1
        return inp


def compliant_random(seed: int) -> CompliantRandom:
    return CompliantRandom(seed)


def worst_case() -> WorstCase:
    return WorstCase()


def scripted(inputs: list[str]) -> Scripted:
    return Scripted(inputs)


def auto_adversary(session: Session, policy) -> StepEvent:
    """One adversary move chosen by the policy object."""
    return adversary_step(session, policy.choose(session))
