"""Candidate enumeration and the end-to-end synthesis pipeline.

Candidates are the advisers that forbid everything the nominal adviser
forbids, plus any subset of the adversary edges still alive in the nominal
restriction. Forbidding an edge at a state the nominal pruning already removed
cannot change any play, so those edges are excluded from the enumeration
domain. Each candidate gets its restricted game solved exactly; the best one
minimizes the limitation, with ties broken by fewer forbidden inputs overall
and then by enumeration order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterable

from .arena import (
    ADVERSARY,
    Adviser,
    Arena,
    InvalidAdviserError,
    nonblocking_restricted,
    normalize_adviser,
)
from .meanpayoff import MemorylessStrategy, build_meanpayoff, solve
from .safety import NoGoodAdviserError, adversary_attractor, nominal_adviser

DEFAULT_CANDIDATE_CAP = 4096


@dataclass(frozen=True)
class CandidateRecord:
    """One enumerated adviser with everything the solver learned about it.

    ``limitation``, ``strategy`` and ``per_state_value`` stay None until the
    candidate's game has been solved; ``restricted`` is None exactly when the
    adviser is not good. ``per_state_value`` is the per-round advice burden
    seen from each surviving state, so it is non-negative and its entry at the
    initial state equals ``limitation``.
    """

    adviser: Adviser
    good: bool
    restricted: Arena | None
    limitation: Fraction | None = None
    strategy: MemorylessStrategy | None = None
    per_state_value: dict[str, Fraction] | None = None

    @property
    def total_forbidden(self) -> int:
        return sum(len(v) for v in self.adviser.values())


@dataclass(frozen=True)
class SolveBundle:
    """Everything produced by one synthesis run, in deterministic order.

    ``masks`` records which free choices each candidate forbids (bit i set
    means free_choices[i] is forbidden), ``ordering`` maps a candidate index
    to the indices of all candidates pointwise below-or-equal to it.
    """

    arena: Arena
    free: tuple[tuple[str, str], ...]
    nominal: CandidateRecord
    candidates: tuple[CandidateRecord, ...]
    masks: tuple[int, ...]
    ordering: dict[int, tuple[int, ...]]
    best_index: int | None
    truncated: bool

    @property
    def best(self) -> CandidateRecord:
        if self.best_index is None:
            raise ValueError("bundle has not been solved yet")
        return self.candidates[self.best_index]


def free_choices(arena: Arena, nominal: Adviser) -> list[tuple[str, str]]:
    """Adversary edges of the nominal restriction open for further forbidding."""
    restricted = nonblocking_restricted(arena, nominal)
    if restricted is None:
        raise NoGoodAdviserError("no good adviser exists")
    out: list[tuple[str, str]] = []
    for sid in restricted.state_ids:
        if restricted.owner(sid) != ADVERSARY:
            continue
        for inp, _ in restricted.out_edges(sid):
            if inp not in nominal.get(sid, frozenset()):
                out.append((sid, inp))
    return out


def is_good(arena: Arena, adviser: dict[str, frozenset[str] | set[str]]) -> tuple[bool, Arena | None]:
    """Decide goodness for an arbitrary adviser.

    Good means the restricted arena admits plays and the protagonist can keep
    them safe forever. For supersets of the nominal adviser the second half is
    automatic; it is checked anyway so arbitrary advisers get a faithful
    answer too.
    """
    full = normalize_adviser(arena, adviser)
    restricted = nonblocking_restricted(arena, full)
    if restricted is None:
        return False, None
    unsafe_inside = frozenset(s for s in restricted.state_ids if not restricted.is_safe(s))
    if unsafe_inside and restricted.initial in adversary_attractor(restricted, unsafe_inside):
        return False, None
    return True, restricted


def leq(first: Adviser, second: Adviser) -> bool:
    """Pointwise subset order on advisers over the same adversary states."""
    if set(first) != set(second):
        raise InvalidAdviserError("advisers are defined over different state sets")
    return all(first[s] <= second[s] for s in first)


def enumerate_candidates(arena: Arena, cap: int = DEFAULT_CANDIDATE_CAP) -> SolveBundle:
    """Generate supersets of the nominal adviser in binary-counter order.

    Bit i of the counter forbids free_choices[i]; counter value 0 is the
    nominal adviser itself. Goodness is decided per candidate, limitations are
    left for synthesize to fill in.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    nominal, _ = nominal_adviser(arena)
    free = tuple(free_choices(arena, nominal))
    total = 1 << len(free)
    truncated = total > cap
    count = min(total, cap)

    records: list[CandidateRecord] = []
    masks: list[int] = []
    for mask in range(count):
        adviser = dict(nominal)
        for i in range(len(free)):
            if mask >> i & 1:
                sid, inp = free[i]
                adviser[sid] = adviser[sid] | {inp}
        good, restricted = is_good(arena, adviser)
        records.append(CandidateRecord(adviser=adviser, good=good, restricted=restricted))
        masks.append(mask)

    ordering = {
        i: tuple(j for j in range(len(masks)) if masks[j] & masks[i] == masks[j])
        for i in range(len(masks))
    }
    return SolveBundle(
        arena=arena,
        free=free,
        nominal=records[0],
        candidates=tuple(records),
        masks=tuple(masks),
        ordering=ordering,
        best_index=None,
        truncated=truncated,
    )


def synthesize(arena: Arena, cap: int = DEFAULT_CANDIDATE_CAP) -> SolveBundle:
    """Full pipeline: nominal adviser, enumeration, per-candidate solve, pick.

    Ties on the limitation go to the smallest total forbidden-input count,
    then to the earliest candidate in enumeration order, which orders equal
    totals by which free choices they forbid.
    """
    bundle = enumerate_candidates(arena, cap)
    filled: list[CandidateRecord] = []
    best_index: int | None = None
    best_key: tuple[Fraction, int, int] | None = None
    for index, record in enumerate(bundle.candidates):
        if record.good:
            assert record.restricted is not None
            report = solve(build_meanpayoff(record.restricted, record.adviser))
            value = -report.per_state[record.restricted.initial]
            record = replace(
                record,
                limitation=value,
                strategy=report.strategy,
                per_state_value={s: -v for s, v in report.per_state.items()},
            )
            key = (value, record.total_forbidden, index)
            if best_key is None or key < best_key:
                best_key = key
                best_index = index
        filled.append(record)
    if best_index is None:
        raise NoGoodAdviserError("no good adviser exists")
    return replace(
        bundle,
        nominal=filled[0],
        candidates=tuple(filled),
        best_index=best_index,
    )


def successors_in_order(
    bundle: SolveBundle,
    current: CandidateRecord,
    feasibility: Callable[[CandidateRecord], bool],
    rank_state: str | None = None,
) -> list[CandidateRecord]:
    """Feasible good candidates pointwise below the current one, best first.

    The default rank is the limitation; passing ``rank_state`` ranks by the
    per-round burden seen from that state instead (candidates whose winning
    slice misses the state fall back to their limitation). Requires a solved
    bundle.
    """
    for index, record in enumerate(bundle.candidates):
        if record.adviser == current.adviser:
            break
    else:
        raise ValueError("current adviser is not part of this bundle")

    ranked: list[tuple[tuple[Fraction, Fraction, int], CandidateRecord]] = []
    for j in bundle.ordering[index]:
        record = bundle.candidates[j]
        if not record.good:
            continue
        if record.limitation is None or record.per_state_value is None:
            raise ValueError("bundle has not been solved yet")
        if not feasibility(record):
            continue
        primary = record.limitation
        if rank_state is not None:
            primary = record.per_state_value.get(rank_state, record.limitation)
        ranked.append(((primary, record.limitation, j), record))
    ranked.sort(key=lambda pair: pair[0])
    return [record for _, record in ranked]
