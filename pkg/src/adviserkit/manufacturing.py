"""Workbench arena generator for the robot/human manufacturing scenario.

A configuration assigns each present piece a status (on the desk, held by one
actor, or contested after both reached for it). The generator expands grab,
drop and connect schemas breadth-first from the initial configuration, with
strict turn alternation and an always-available pass move for either actor, so
no state blocks. Grabbing a piece the other actor is holding marks it
contested; under the default predicate any contested piece makes the state
unsafe. Connecting consumes two held pieces and produces their concatenation,
which must itself be a declared piece.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arena import ADVERSARY, PASS_INPUT, PROTAGONIST, Arena, State
from .formats import DocumentSemanticError, DocumentSyntaxError, _lines

TEMPLATE_HEADER = "manufacturing v1"

_ACTORS = ("p", "a")


class TemplateError(ValueError):
    """The rule template is internally inconsistent."""


@dataclass(frozen=True)
class RuleTemplate:
    pieces: tuple[str, ...]
    statuses: tuple[str, ...]
    holder: dict[str, str]                      # actor tag -> holding status
    initial: tuple[tuple[str, str], ...]        # (piece, status) pairs
    first: str = "p"
    grabs: dict[str, tuple[str, ...]] = field(default_factory=dict)
    drops: dict[str, tuple[str, ...]] = field(default_factory=dict)
    connects: dict[str, tuple[tuple[str, str], ...]] = field(default_factory=dict)
    unsafe_kind: str = "status"
    unsafe_param: str | None = "contested"

    def validate(self) -> None:
        known = set(self.pieces)
        statuses = set(self.statuses)
        if "desk" not in statuses:
            raise TemplateError("status alphabet must contain 'desk'")
        for actor in _ACTORS:
            if actor not in self.holder:
                raise TemplateError(f"no holding status declared for actor {actor!r}")
            if self.holder[actor] not in statuses:
                raise TemplateError(f"holding status {self.holder[actor]!r} is not declared")
        if self.first not in _ACTORS:
            raise TemplateError(f"first turn must be 'p' or 'a', not {self.first!r}")
        for piece, status in self.initial:
            if piece not in known:
                raise TemplateError(f"initial configuration references unknown piece {piece!r}")
            if status not in statuses:
                raise TemplateError(f"initial configuration uses unknown status {status!r}")
        for actor, pieces in list(self.grabs.items()) + list(self.drops.items()):
            for piece in pieces:
                if piece not in known:
                    raise TemplateError(f"schema references unknown piece {piece!r}")
        for actor, pairs in self.connects.items():
            for left, right in pairs:
                for piece in (left, right):
                    if piece not in known:
                        raise TemplateError(f"connect references unknown piece {piece!r}")
                if left + right not in known:
                    raise TemplateError(
                        f"connect result {left + right!r} is not a declared piece")
        if self.unsafe_kind not in ("status", "none"):
            raise TemplateError(f"unknown unsafe predicate {self.unsafe_kind!r}")
        if self.unsafe_kind == "status":
            if self.unsafe_param is None or self.unsafe_param not in statuses:
                raise TemplateError("the status predicate needs a declared status parameter")


def default_template() -> RuleTemplate:
    """Three loose pieces on a desk, a robot, a human, full schema set."""
    atoms = ("A", "B", "C")
    return RuleTemplate(
        pieces=("A", "B", "C", "AB", "BC", "ABC"),
        statuses=("desk", "human", "robot", "contested"),
        holder={"p": "robot", "a": "human"},
        initial=tuple((piece, "desk") for piece in atoms),
        first="p",
        grabs={"p": ("A", "B", "C", "AB", "BC", "ABC"),
               "a": ("A", "B", "C", "AB", "BC", "ABC")},
        drops={"p": ("A", "B", "C", "AB", "BC", "ABC"),
               "a": ("A", "B", "C", "AB", "BC", "ABC")},
        connects={"p": (("B", "C"), ("AB", "C")),
                  "a": (("A", "B"), ("A", "BC"))},
    )


_Config = tuple[tuple[str, str], ...]  # piece -> status, sorted by piece order


def _state_id(config: _Config, turn: str) -> str:
    body = ",".join(f"{piece}={status}" for piece, status in config) or "∅"
    return f"{body}|{turn}"


def _is_unsafe(template: RuleTemplate, config: _Config) -> bool:
    if template.unsafe_kind == "none":
        return False
    return any(status == template.unsafe_param for _, status in config)


def generate_manufacturing(template: RuleTemplate) -> Arena:
    """Expand the template into an explicit turn-based arena."""
    template.validate()
    order = {piece: i for i, piece in enumerate(template.pieces)}
    other = {"p": "a", "a": "p"}
    owner_of = {"p": PROTAGONIST, "a": ADVERSARY}

    def normalize(config: dict[str, str]) -> _Config:
        return tuple(sorted(config.items(), key=lambda kv: order[kv[0]]))

    def moves(config: _Config, actor: str):
        held = dict(config)
        mine = template.holder[actor]
        theirs = template.holder[other[actor]]
        for piece in template.grabs.get(actor, ()):
            status = held.get(piece)
            if status == "desk":
                yield f"grab_{actor}({piece})", {**held, piece: mine}
            elif status == theirs and "contested" in template.statuses:
                yield f"grab_{actor}({piece})", {**held, piece: "contested"}
        for piece in template.drops.get(actor, ()):
            if held.get(piece) == mine:
                yield f"drop_{actor}({piece})", {**held, piece: "desk"}
        for left, right in template.connects.get(actor, ()):
            if held.get(left) == mine and held.get(right) == mine:
                merged = {k: v for k, v in held.items() if k not in (left, right)}
                merged[left + right] = mine
                yield f"connect_{actor}({left},{right})", merged

    initial_config = normalize(dict(template.initial))
    start = (initial_config, template.first)
    queue: list[tuple[_Config, str]] = [start]
    seen: set[tuple[_Config, str]] = {start}
    states: list[State] = []
    transitions: dict[tuple[str, str], str] = {}

    while queue:
        config, turn = queue.pop(0)
        sid = _state_id(config, turn)
        states.append(State(id=sid, owner=owner_of[turn],
                            safe=not _is_unsafe(template, config)))
        targets: list[tuple[str, tuple[_Config, str]]] = []
        for label, raw in moves(config, turn):
            targets.append((label, (normalize(raw), other[turn])))
        targets.append((PASS_INPUT, (config, other[turn])))
        for label, node in targets:
            transitions[(sid, label)] = _state_id(*node)
            if node not in seen:
                seen.add(node)
                queue.append(node)

    def alphabet(actor: str) -> tuple[str, ...]:
        labels = [f"grab_{actor}({p})" for p in template.grabs.get(actor, ())]
        labels += [f"drop_{actor}({p})" for p in template.drops.get(actor, ())]
        labels += [f"connect_{actor}({l},{r})" for l, r in template.connects.get(actor, ())]
        labels.append(PASS_INPUT)
        return tuple(labels)

    return Arena(
        states=tuple(states),
        initial=_state_id(*start),
        transitions=transitions,
        protagonist_inputs=alphabet("p"),
        adversary_inputs=alphabet("a"),
    )


# ---------------------------------------------------------------------------
# template documents


def parse_template(text: str) -> RuleTemplate:
    pieces: tuple[str, ...] = ()
    statuses: tuple[str, ...] = ()
    holder: dict[str, str] = {}
    initial: list[tuple[str, str]] = []
    first = "p"
    grabs: dict[str, tuple[str, ...]] = {}
    drops: dict[str, tuple[str, ...]] = {}
    connects: dict[str, tuple[tuple[str, str], ...]] = {}
    unsafe_kind = "status"
    unsafe_param: str | None = "contested"

    def expand(tokens: list[str]) -> tuple[str, ...]:
        if tokens == ["*"]:
            return pieces
        return tuple(tokens)

    for line, tokens in _lines(text, TEMPLATE_HEADER, "manufacturing template"):
        keyword = tokens[0]
        if keyword == "pieces":
            pieces = tuple(tokens[1:])
        elif keyword == "statuses":
            statuses = tuple(tokens[1:])
        elif keyword == "holder":
            if len(tokens) != 3 or tokens[1] not in _ACTORS:
                raise DocumentSyntaxError("expected: holder <p|a> <status>", line)
            holder[tokens[1]] = tokens[2]
        elif keyword == "initial":
            for i, item in enumerate(tokens[1:], start=1):
                if "=" not in item:
                    raise DocumentSyntaxError(
                        f"initial entries look like piece=status, got {item!r}", line)
                piece, status = item.split("=", 1)
                initial.append((piece, status))
        elif keyword == "first":
            if len(tokens) != 2 or tokens[1] not in _ACTORS:
                raise DocumentSyntaxError("expected: first <p|a>", line)
            first = tokens[1]
        elif keyword in ("grab", "drop"):
            if len(tokens) < 3 or tokens[1] not in _ACTORS:
                raise DocumentSyntaxError(f"expected: {keyword} <p|a> <pieces|*>", line)
            table = grabs if keyword == "grab" else drops
            table[tokens[1]] = expand(tokens[2:])
        elif keyword == "connect":
            if len(tokens) < 3 or tokens[1] not in _ACTORS:
                raise DocumentSyntaxError("expected: connect <p|a> <left+right>...", line)
            pairs = []
            for item in tokens[2:]:
                if "+" not in item:
                    raise DocumentSyntaxError(
                        f"connect entries look like left+right, got {item!r}", line)
                left, right = item.split("+", 1)
                pairs.append((left, right))
            connects[tokens[1]] = tuple(pairs)
        elif keyword == "unsafe":
            if len(tokens) == 2 and tokens[1] == "none":
                unsafe_kind, unsafe_param = "none", None
            elif len(tokens) == 3 and tokens[1] == "status":
                unsafe_kind, unsafe_param = "status", tokens[2]
            else:
                raise DocumentSyntaxError("expected: unsafe none | unsafe status <name>", line)
        else:
            raise DocumentSyntaxError(f"unknown keyword {keyword!r}", line, 1)

    if not pieces:
        raise DocumentSemanticError("template declares no pieces")
    if not statuses:
        raise DocumentSemanticError("template declares no statuses")
    template = RuleTemplate(
        pieces=pieces, statuses=statuses, holder=holder, initial=tuple(initial),
        first=first, grabs=grabs, drops=drops, connects=connects,
        unsafe_kind=unsafe_kind, unsafe_param=unsafe_param,
    )
    try:
        template.validate()
    except TemplateError as exc:
        raise DocumentSemanticError(str(exc)) from exc
    return template


def serialize_template(template: RuleTemplate) -> str:
    out = [TEMPLATE_HEADER]
    out.append("pieces " + " ".join(template.pieces))
    out.append("statuses " + " ".join(template.statuses))
    for actor in _ACTORS:
        if actor in template.holder:
            out.append(f"holder {actor} {template.holder[actor]}")
    if template.initial:
        out.append("initial " + " ".join(f"{p}={s}" for p, s in template.initial))
    out.append(f"first {template.first}")
    for actor in _ACTORS:
        if template.grabs.get(actor):
            out.append(f"grab {actor} " + " ".join(template.grabs[actor]))
        if template.drops.get(actor):
            out.append(f"drop {actor} " + " ".join(template.drops[actor]))
        if template.connects.get(actor):
            out.append(f"connect {actor} " +
                       " ".join(f"{l}+{r}" for l, r in template.connects[actor]))
    if template.unsafe_kind == "none":
        out.append("unsafe none")
    else:
        out.append(f"unsafe status {template.unsafe_param}")
    return "\n".join(out) + "\n"
