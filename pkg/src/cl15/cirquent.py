"""Cirquents: oformula sequences with undergroup/overgroup structure.

Groups are positional: two groups with equal contents are still distinct.
Indices are 1-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass

from .formula import Formula, parse_formula, render_formula


class CirquentError(ValueError):
    """Malformed cirquent text."""


Group = frozenset[int]


@dataclass(frozen=True)
class Cirquent:
    oformulas: tuple[Formula, ...]
    undergroups: tuple[Group, ...]
    overgroups: tuple[Group, ...]

    @property
    def size(self) -> int:
        return len(self.oformulas)


def group(*indices: int) -> Group:
    return frozenset(indices)


def make_cirquent(
    oformulas: tuple[Formula, ...] | list[Formula],
    undergroups,
    overgroups,
) -> Cirquent:
    return Cirquent(
        tuple(oformulas),
        tuple(frozenset(g) for g in undergroups),
        tuple(frozenset(g) for g in overgroups),
    )


def validate_cirquent(c: Cirquent) -> list[str]:
    """Return all invariant violations; empty list means valid."""
    issues: list[str] = []
    m = len(c.oformulas)
    if m == 0:
        issues.append("no oformulas")
    if not c.undergroups:
        issues.append("no undergroups")
    if not c.overgroups:
        issues.append("no overgroups")
    for kind, groups in (("undergroup", c.undergroups), ("overgroup", c.overgroups)):
        for pos, g in enumerate(groups, start=1):
            if not g:
                issues.append(f"empty {kind} {pos}")
            for idx in g:
                if not 1 <= idx <= m:
                    issues.append(f"{kind} {pos} index {idx} out of range")
    for a in range(1, m + 1):
        if not any(a in g for g in c.undergroups):
            issues.append(f"oformula {a} in no undergroup")
        if not any(a in g for g in c.overgroups):
            issues.append(f"oformula {a} in no overgroup")
    return issues


def is_valid(c: Cirquent) -> bool:
    return not validate_cirquent(c)


def clubsuit(f: Formula) -> Cirquent:
    """The one-oformula cirquent with a single undergroup and overgroup."""
    return Cirquent((f,), (frozenset({1}),), (frozenset({1}),))


def as_clubsuit(c: Cirquent) -> Formula | None:
    """The formula F with c == clubsuit(F), if there is one."""
    if (
        len(c.oformulas) == 1
        and c.undergroups == (frozenset({1}),)
        and c.overgroups == (frozenset({1}),)
    ):
        return c.oformulas[0]
    return None


# Text format: `oformulas: f1 | f2 ; under: {1,2}{2} ; over: {1}`

def _parse_groups(text: str, what: str) -> tuple[Group, ...]:
    text = text.strip()
    if not text:
        raise CirquentError(f"no {what} groups")
    groups: list[Group] = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        if text[i] != "{":
            raise CirquentError(f"malformed {what} groups at {text[i:]!r}")
        close = text.find("}", i)
        if close < 0:
            raise CirquentError(f"unclosed group in {what}")
        inner = text[i + 1:close].strip()
        if not inner:
            groups.append(frozenset())
        else:
            try:
                groups.append(frozenset(int(p.strip()) for p in inner.split(",")))
            except ValueError as exc:
                raise CirquentError(f"bad index in {what} group: {inner!r}") from exc
        i = close + 1
    return tuple(groups)


def parse_cirquent(text: str) -> Cirquent:
    """Parse the one-line cirquent text format."""
    sections: dict[str, str] = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise CirquentError(f"expected 'name: ...' section, got {part!r}")
        name, _, body = part.partition(":")
        name = name.strip()
        if name in sections:
            raise CirquentError(f"duplicate section {name!r}")
        sections[name] = body
    required = {"oformulas", "under", "over"}
    missing = required - sections.keys()
    if missing:
        raise CirquentError(f"missing sections: {', '.join(sorted(missing))}")
    unknown = sections.keys() - required
    if unknown:
        raise CirquentError(f"unknown sections: {', '.join(sorted(unknown))}")
    of_texts = [p.strip() for p in sections["oformulas"].split("|")]
    if not all(of_texts):
        raise CirquentError("empty oformula entry")
    oformulas = tuple(parse_formula(t) for t in of_texts)
    unders = _parse_groups(sections["under"], "under")
    overs = _parse_groups(sections["over"], "over")
    return Cirquent(oformulas, unders, overs)


def _render_groups(groups: tuple[Group, ...]) -> str:
    return "".join("{" + ",".join(str(i) for i in sorted(g)) + "}" for g in groups)


def render_cirquent(c: Cirquent) -> str:
    """Inverse of parse_cirquent."""
    of = " | ".join(render_formula(f) for f in c.oformulas)
    return (
        f"oformulas: {of} ; "
        f"under: {_render_groups(c.undergroups)} ; "
        f"over: {_render_groups(c.overgroups)}"
    )


def render_diagram(c: Cirquent) -> str:
    """Three-layer ASCII diagram: overgroups, oformulas, undergroups.

    A `*` in a group row marks an arc to the oformula in that column.
    """
    cells = [f"[{a}] {render_formula(f)}" for a, f in enumerate(c.oformulas, start=1)]
    width = max(len(s) for s in cells) + 2
    gutter = max(
        len(f"over {len(c.overgroups)}"), len(f"under {len(c.undergroups)}"), len("oformula")
    ) + 2

    def row(label: str, marks: list[str]) -> str:
        return label.ljust(gutter) + "".join(m.center(width) for m in marks)

    lines = []
    for j, g in enumerate(c.overgroups, start=1):
        lines.append(row(f"over {j}", ["*" if a in g else "." for a in range(1, c.size + 1)]))
    lines.append(row("oformula", cells))
    for i, g in enumerate(c.undergroups, start=1):
        lines.append(row(f"under {i}", ["*" if a in g else "." for a in range(1, c.size + 1)]))
    return "\n".join(lines)
