"""Plain-text documents for arenas, advisers, strategies, scripts and bundles.

Every document is line-oriented with whitespace-separated tokens, a leading
version line, and '#' comments. The point is hand-editable fixtures and golden
files that diff well, so serialization is canonical: states keep arena order,
sets are emitted sorted, rationals are printed as num/den. Bundle documents
are write-only reports; everything else round-trips.
"""

from __future__ import annotations

from fractions import Fraction

from .arena import ADVERSARY, PROTAGONIST, Adviser, Arena, InvalidAdviserError, State

ARENA_HEADER = "arena v1"
ADVISER_HEADER = "adviser v1"
STRATEGY_HEADER = "strategy v1"
SCRIPT_HEADER = "script v1"
BUNDLE_HEADER = "bundle v1"

_OWNER_TAGS = {"p": PROTAGONIST, "a": ADVERSARY}
_TAG_OF = {PROTAGONIST: "p", ADVERSARY: "a"}


class DocumentError(ValueError):
    """Problem in a document; carries the 1-based line it was found on."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class DocumentSyntaxError(DocumentError):
    pass


class DocumentSemanticError(DocumentError):
    pass


def _lines(text: str, header: str, kind: str) -> list[tuple[int, list[str]]]:
    rows: list[tuple[int, list[str]]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        rows.append((number, stripped.split()))
    if not rows:
        raise DocumentSyntaxError(f"empty document, expected a {kind} file")
    first_line, first = rows[0]
    if " ".join(first) != header:
        raise DocumentSyntaxError(
            f"expected header {header!r} in a {kind} file", line=first_line, column=1)
    return rows[1:]


def _column_of(tokens: list[str], index: int) -> int:
    # Tokens are whitespace separated; a reconstructed offset is close enough
    # for error messages even if the original used tabs or runs of spaces.
    return sum(len(t) + 1 for t in tokens[:index]) + 1


# ---------------------------------------------------------------------------
# arena documents


def parse_arena(text: str) -> Arena:
    states: list[State] = []
    seen: set[str] = set()
    initial: str | None = None
    initial_line: int | None = None
    transitions: dict[tuple[str, str], str] = {}
    alphabets: dict[str, list[str]] = {"p": [], "a": []}

    for line, tokens in _lines(text, ARENA_HEADER, "arena"):
        keyword = tokens[0]
        if keyword == "state":
            if len(tokens) < 3:
                raise DocumentSyntaxError("state needs at least an id and an owner", line)
            sid, owner_tag = tokens[1], tokens[2]
            if owner_tag not in _OWNER_TAGS:
                raise DocumentSyntaxError(
                    f"unknown owner tag {owner_tag!r}, expected 'p' or 'a'",
                    line, _column_of(tokens, 2))
            safe = True
            label: str | None = None
            for i, flag in enumerate(tokens[3:], start=3):
                if flag == "safe":
                    safe = True
                elif flag == "unsafe":
                    safe = False
                elif flag == "init":
                    if initial is not None:
                        raise DocumentSemanticError(
                            f"second initial state {sid!r}; the first was on line {initial_line}",
                            line)
                    initial = sid
                    initial_line = line
                elif flag.startswith("label="):
                    label = flag[len("label="):]
                else:
                    raise DocumentSyntaxError(
                        f"unknown state flag {flag!r}", line, _column_of(tokens, i))
            if sid in seen:
                raise DocumentSemanticError(f"duplicate state id {sid!r}", line)
            seen.add(sid)
            states.append(State(id=sid, owner=_OWNER_TAGS[owner_tag], safe=safe, label=label))
        elif keyword == "trans":
            if len(tokens) != 4:
                raise DocumentSyntaxError("trans needs: trans <from> <input> <to>", line)
            _, src, inp, dst = tokens
            if (src, inp) in transitions:
                raise DocumentSemanticError(
                    f"duplicate transition on {inp!r} from {src!r}", line)
            transitions[(src, inp)] = dst
        elif keyword == "alphabet":
            if len(tokens) < 2 or tokens[1] not in _OWNER_TAGS:
                raise DocumentSyntaxError("alphabet needs: alphabet <p|a> <inputs...>", line)
            alphabets[tokens[1]].extend(tokens[2:])
        else:
            raise DocumentSyntaxError(f"unknown keyword {keyword!r}", line, 1)

    if initial is None:
        raise DocumentSemanticError("no state is marked init")
    return Arena(
        states=tuple(states),
        initial=initial,
        transitions=transitions,
        protagonist_inputs=tuple(dict.fromkeys(alphabets["p"])),
        adversary_inputs=tuple(dict.fromkeys(alphabets["a"])),
    )


def serialize_arena(arena: Arena) -> str:
    out = [ARENA_HEADER]
    for state in arena.states:
        parts = ["state", state.id, _TAG_OF[state.owner], "safe" if state.safe else "unsafe"]
        if state.id == arena.initial:
            parts.append("init")
        if state.label is not None:
            parts.append(f"label={state.label}")
        out.append(" ".join(parts))
    out.append("alphabet p " + " ".join(arena.protagonist_inputs)
               if arena.protagonist_inputs else "alphabet p")
    out.append("alphabet a " + " ".join(arena.adversary_inputs)
               if arena.adversary_inputs else "alphabet a")
    for (src, inp), dst in arena.transitions.items():
        out.append(f"trans {src} {inp} {dst}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# adviser documents


def parse_adviser(text: str) -> dict[str, frozenset[str]]:
    forbidden: dict[str, frozenset[str]] = {}
    for line, tokens in _lines(text, ADVISER_HEADER, "adviser"):
        if tokens[0] != "forbid":
            raise DocumentSyntaxError(f"unknown keyword {tokens[0]!r}", line, 1)
        if len(tokens) < 2:
            raise DocumentSyntaxError("forbid needs: forbid <state> [inputs...]", line)
        sid = tokens[1]
        if sid in forbidden:
            raise DocumentSemanticError(f"duplicate forbid line for state {sid!r}", line)
        forbidden[sid] = frozenset(tokens[2:])
    return forbidden


def serialize_adviser(adviser: Adviser) -> str:
    out = [ADVISER_HEADER]
    for sid in sorted(adviser):
        inputs = " ".join(sorted(adviser[sid]))
        out.append(f"forbid {sid} {inputs}".rstrip())
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# strategy and script documents


def parse_strategy(text: str) -> dict[str, str]:
    choices: dict[str, str] = {}
    for line, tokens in _lines(text, STRATEGY_HEADER, "strategy"):
        if tokens[0] != "choose" or len(tokens) != 3:
            raise DocumentSyntaxError("expected: choose <state> <input>", line)
        if tokens[1] in choices:
            raise DocumentSemanticError(f"duplicate choice for state {tokens[1]!r}", line)
        choices[tokens[1]] = tokens[2]
    return choices


def serialize_strategy(strategy: dict[str, str]) -> str:
    out = [STRATEGY_HEADER]
    for sid in sorted(strategy):
        out.append(f"choose {sid} {strategy[sid]}")
    return "\n".join(out) + "\n"


def parse_script(text: str) -> list[str]:
    moves: list[str] = []
    for line, tokens in _lines(text, SCRIPT_HEADER, "script"):
        if tokens[0] != "move" or len(tokens) != 2:
            raise DocumentSyntaxError("expected: move <input>", line)
        moves.append(tokens[1])
    return moves


def serialize_script(moves: list[str]) -> str:
    return "\n".join([SCRIPT_HEADER] + [f"move {m}" for m in moves]) + "\n"


# ---------------------------------------------------------------------------
# bundle reports (write-only)


def _frac(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def serialize_bundle(bundle) -> str:
    out = [BUNDLE_HEADER]
    for sid, inp in bundle.free:
        out.append(f"free {sid} {inp}")
    for index, record in enumerate(bundle.candidates):
        out.append(f"candidate {index} {'good' if record.good else 'bad'}")
        for sid in sorted(record.adviser):
            inputs = " ".join(sorted(record.adviser[sid]))
            out.append(f"forbid {index} {sid} {inputs}".rstrip())
        if record.limitation is not None:
            out.append(f"lambda {index} {_frac(record.limitation)}")
        if record.strategy is not None:
            for sid in sorted(record.strategy):
                out.append(f"choose {index} {sid} {record.strategy[sid]}")
        if record.per_state_value is not None:
            for sid in sorted(record.per_state_value):
                out.append(f"value {index} {sid} {_frac(record.per_state_value[sid])}")
    if bundle.best_index is not None:
        out.append(f"best {bundle.best_index}")
    out.append(f"truncated {'yes' if bundle.truncated else 'no'}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# graph export


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    arena: Arena,
    adviser: Adviser | None = None,
    losing: frozenset[str] | None = None,
    strategy: dict[str, str] | None = None,
    current: str | None = None,
) -> str:
    """Graphviz text mirroring the usual drawing conventions.

    Protagonist states are boxes, adversary states circles; unsafe states are
    filled blue, losing states get a red border, forbidden edges are red and
    dashed, strategy edges green and bold, and the optional current state is
    drawn with a doubled outline.
    """
    if adviser:
        for sid in adviser:
            if not arena.has_state(sid):
                raise InvalidAdviserError(f"adviser references unknown state {sid!r}")
    if strategy:
        for sid in strategy:
            if not arena.has_state(sid):
                raise ValueError(f"strategy references unknown state {sid!r}")
    if losing:
        for sid in losing:
            if not arena.has_state(sid):
                raise ValueError(f"losing set references unknown state {sid!r}")
    if current is not None and not arena.has_state(current):
        raise ValueError(f"current state {current!r} is unknown")

    out = ["digraph arena {", "  rankdir=LR;", '  node [fontname="sans-serif"];']
    for state in arena.states:
        attrs = ["shape=box" if state.owner == PROTAGONIST else "shape=circle"]
        if not state.safe:
            attrs.append('style=filled fillcolor="#cfe2f3"')
        if losing and state.id in losing:
            attrs.append('color="#cc0000" penwidth=2')
        if current is not None and state.id == current:
            attrs.append("peripheries=2")
        if state.id == arena.initial:
            attrs.append('xlabel="init"')
        out.append(f"  {_quote(state.id)} [{' '.join(attrs)}];")
    for (src, inp), dst in arena.transitions.items():
        attrs = [f"label={_quote(inp)}"]
        if adviser and inp in adviser.get(src, frozenset()):
            attrs.append('color="#cc0000" style=dashed')
        elif strategy and strategy.get(src) == inp:
            attrs.append('color="#38761d" penwidth=2')
        out.append(f"  {_quote(src)} -> {_quote(dst)} [{' '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"
