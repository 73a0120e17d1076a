"""The ten inference rules as checkable premise/conclusion relations,
plus whole-proof verification and the proof file format.

Each rule has a deterministic constructor in its natural direction
(conclusion from premise for Axiom/Exchange/Duplication/Merging, premise
from conclusion for the rest); checking compares the constructed cirquent
with the given one, so diagnostics are exact and checking is linear.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .cirquent import Cirquent, CirquentError, Group, clubsuit, parse_cirquent, render_cirquent, validate_cirquent
from .formula import And, Formula, Or, Pcost, Pst, negate, render_formula


class ProofError(ValueError):
    """Malformed proof text."""


@dataclass(frozen=True)
class Violation:
    reason: str


# Rule instances (all indices 1-based)

@dataclass(frozen=True)
class Axiom:
    formulas: tuple[Formula, ...]


@dataclass(frozen=True)
class OformulaExchange:
    pos: int


@dataclass(frozen=True)
class UndergroupExchange:
    pos: int


@dataclass(frozen=True)
class OvergroupExchange:
    pos: int


@dataclass(frozen=True)
class UndergroupDuplication:
    pos: int


@dataclass(frozen=True)
class OvergroupDuplication:
    pos: int


@dataclass(frozen=True)
class Merging:
    over: int


@dataclass(frozen=True)
class Weakening:
    under: int
    oformula: int


@dataclass(frozen=True)
class Contraction:
    oformula: int


@dataclass(frozen=True)
class OrIntro:
    oformula: int


@dataclass(frozen=True)
class AndIntro:
    oformula: int


@dataclass(frozen=True)
class PstIntro:
    oformula: int


@dataclass(frozen=True)
class PcostIntro:
    oformula: int
    add_over: frozenset[int] = frozenset()


RuleInstance = Union[
    Axiom,
    OformulaExchange,
    UndergroupExchange,
    OvergroupExchange,
    UndergroupDuplication,
    OvergroupDuplication,
    Merging,
    Weakening,
    Contraction,
    OrIntro,
    AndIntro,
    PstIntro,
    PcostIntro,
]


@dataclass(frozen=True)
class ProofStep:
    cirquent: Cirquent
    rule: RuleInstance


@dataclass(frozen=True)
class Proof:
    steps: tuple[ProofStep, ...]


# Index remapping helpers

def _swap_map(i: int) -> dict[int, int]:
    return {i: i + 1, i + 1: i}


def _apply_map(g: Group, mapping: dict[int, int]) -> Group:
    return frozenset(mapping.get(a, a) for a in g)


def _shift_after(g: Group, a: int) -> Group:
    """Renumber for an insertion at position a+1: indices > a move up by one;
    membership of a itself spreads to both copies a and a+1."""
    out = set()
    for c in g:
        if c < a:
            out.add(c)
        elif c == a:
            out.add(a)
            out.add(a + 1)
        else:
            out.add(c + 1)
    return frozenset(out)


# Forward constructors (conclusion from premise)

def conclusion_of_oformula_exchange(premise: Cirquent, i: int) -> Cirquent:
    if not 1 <= i < premise.size:
        raise ValueError(f"position {i} out of range")
    of = list(premise.oformulas)
    of[i - 1], of[i] = of[i], of[i - 1]
    mapping = _swap_map(i)
    return Cirquent(
        tuple(of),
        tuple(_apply_map(g, mapping) for g in premise.undergroups),
        tuple(_apply_map(g, mapping) for g in premise.overgroups),
    )


def conclusion_of_undergroup_exchange(premise: Cirquent, i: int) -> Cirquent:
    if not 1 <= i < len(premise.undergroups):
        raise ValueError(f"position {i} out of range")
    groups = list(premise.undergroups)
    groups[i - 1], groups[i] = groups[i], groups[i - 1]
    return Cirquent(premise.oformulas, tuple(groups), premise.overgroups)


def conclusion_of_overgroup_exchange(premise: Cirquent, i: int) -> Cirquent:
    if not 1 <= i < len(premise.overgroups):
        raise ValueError(f"position {i} out of range")
    groups = list(premise.overgroups)
    groups[i - 1], groups[i] = groups[i], groups[i - 1]
    return Cirquent(premise.oformulas, premise.undergroups, tuple(groups))


def conclusion_of_undergroup_duplication(premise: Cirquent, i: int) -> Cirquent:
    if not 1 <= i <= len(premise.undergroups):
        raise ValueError(f"position {i} out of range")
    groups = list(premise.undergroups)
    groups.insert(i, groups[i - 1])
    return Cirquent(premise.oformulas, tuple(groups), premise.overgroups)


def conclusion_of_overgroup_duplication(premise: Cirquent, i: int) -> Cirquent:
    if not 1 <= i <= len(premise.overgroups):
        raise ValueError(f"position {i} out of range")
    groups = list(premise.overgroups)
    groups.insert(i, groups[i - 1])
    return Cirquent(premise.oformulas, premise.undergroups, tuple(groups))


def conclusion_of_merging(premise: Cirquent, j: int) -> Cirquent:
    if not 1 <= j < len(premise.overgroups):
        raise ValueError(f"position {j} out of range")
    groups = list(premise.overgroups)
    merged = groups[j - 1] | groups[j]
    groups[j - 1:j + 1] = [merged]
    return Cirquent(premise.oformulas, premise.undergroups, tuple(groups))


# Backward constructors (premise from conclusion)

def premise_of_weakening(
    conclusion: Cirquent, under: int, oformula: int
) -> tuple[Cirquent, int | None, tuple[int, ...]]:
    """Delete the arc (undergroup `under`, oformula), cascading: an oformula
    left in no undergroup is deleted with its overgroup arcs, and overgroups
    left empty are deleted.  Returns (premise, deleted oformula index or
    None, deleted overgroup positions), indices in conclusion terms."""
    if not 1 <= under <= len(conclusion.undergroups):
        raise ValueError(f"undergroup {under} out of range")
    a = oformula
    if a not in conclusion.undergroups[under - 1]:
        raise ValueError(f"no arc from undergroup {under} to oformula {a}")
    unders = list(conclusion.undergroups)
    unders[under - 1] = unders[under - 1] - {a}
    if any(a in g for g in unders):
        return (
            Cirquent(conclusion.oformulas, tuple(unders), conclusion.overgroups),
            None,
            (),
        )
    # The oformula became homeless: delete it and renumber.
    of = list(conclusion.oformulas)
    del of[a - 1]

    def drop(g: Group) -> Group:
        return frozenset(c - 1 if c > a else c for c in g if c != a)

    unders2 = tuple(drop(g) for g in unders)
    overs2 = [drop(g) for g in conclusion.overgroups]
    deleted_overs = tuple(
        j for j, g in enumerate(overs2, start=1) if not g
    )
    overs3 = tuple(g for g in overs2 if g)
    return Cirquent(tuple(of), unders2, overs3), a, deleted_overs


def premise_of_contraction(conclusion: Cirquent, a: int) -> Cirquent:
    if not 1 <= a <= conclusion.size:
        raise ValueError(f"oformula {a} out of range")
    f = conclusion.oformulas[a - 1]
    if not isinstance(f, Pcost):
        raise ValueError(f"oformula {a} is not a '?' formula")
    of = list(conclusion.oformulas)
    of.insert(a, f)
    return Cirquent(
        tuple(of),
        tuple(_shift_after(g, a) for g in conclusion.undergroups),
        tuple(_shift_after(g, a) for g in conclusion.overgroups),
    )


def _split_binary(conclusion: Cirquent, a: int, kind: type) -> tuple[Formula, Formula]:
    if not 1 <= a <= conclusion.size:
        raise ValueError(f"oformula {a} out of range")
    f = conclusion.oformulas[a - 1]
    if not isinstance(f, kind):
        sym = "\\/" if kind is Or else "/\\"
        raise ValueError(f"oformula {a} is not a {sym} formula")
    return f.left, f.right


def premise_of_or(conclusion: Cirquent, a: int) -> Cirquent:
    left, right = _split_binary(conclusion, a, Or)
    of = list(conclusion.oformulas)
    of[a - 1:a] = [left, right]
    return Cirquent(
        tuple(of),
        tuple(_shift_after(g, a) for g in conclusion.undergroups),
        tuple(_shift_after(g, a) for g in conclusion.overgroups),
    )


def premise_of_and(conclusion: Cirquent, a: int) -> Cirquent:
    left, right = _split_binary(conclusion, a, And)
    of = list(conclusion.oformulas)
    of[a - 1:a] = [left, right]
    unders: list[Group] = []
    for g in conclusion.undergroups:
        spread = _shift_after(g, a)
        if a in g:
            unders.append(spread - {a + 1})
            unders.append(spread - {a})
        else:
            unders.append(spread)
    return Cirquent(
        tuple(of),
        tuple(unders),
        tuple(_shift_after(g, a) for g in conclusion.overgroups),
    )


def premise_of_pst(conclusion: Cirquent, a: int, over_pos: int) -> Cirquent:
    if not 1 <= a <= conclusion.size:
        raise ValueError(f"oformula {a} out of range")
    f = conclusion.oformulas[a - 1]
    if not isinstance(f, Pst):
        raise ValueError(f"oformula {a} is not a '!' formula")
    if not 1 <= over_pos <= len(conclusion.overgroups) + 1:
        raise ValueError(f"overgroup position {over_pos} out of range")
    of = list(conclusion.oformulas)
    of[a - 1] = f.body
    overs = list(conclusion.overgroups)
    overs.insert(over_pos - 1, frozenset({a}))
    return Cirquent(tuple(of), conclusion.undergroups, tuple(overs))


def pst_positions(premise: Cirquent, conclusion: Cirquent, a: int) -> list[int]:
    """All insertion positions at which the premise matches; empty if none."""
    out = []
    for j in range(1, len(conclusion.overgroups) + 2):
        try:
            if premise_of_pst(conclusion, a, j) == premise:
                out.append(j)
        except ValueError:
            break
    return out


def premise_of_pcost(conclusion: Cirquent, a: int, add_over: frozenset[int]) -> Cirquent:
    if not 1 <= a <= conclusion.size:
        raise ValueError(f"oformula {a} out of range")
    f = conclusion.oformulas[a - 1]
    if not isinstance(f, Pcost):
        raise ValueError(f"oformula {a} is not a '?' formula")
    for j in add_over:
        if not 1 <= j <= len(conclusion.overgroups):
            raise ValueError(f"overgroup {j} out of range")
        if a in conclusion.overgroups[j - 1]:
            raise ValueError(f"overgroup {j} already contains oformula {a}")
    of = list(conclusion.oformulas)
    of[a - 1] = f.body
    overs = [
        g | {a} if j in add_over else g
        for j, g in enumerate(conclusion.overgroups, start=1)
    ]
    return Cirquent(tuple(of), conclusion.undergroups, tuple(overs))


# Checking

def axiom_violation(c: Cirquent, formulas: tuple[Formula, ...]) -> Violation | None:
    """Diagnostic form of check_axiom: None when c is the axiom cirquent."""
    n = len(formulas)
    if n == 0:
        return Violation("axiom needs at least one formula")
    expected_of = []
    for f in formulas:
        expected_of.append(negate(f))
        expected_of.append(f)
    pairs = tuple(frozenset({2 * i - 1, 2 * i}) for i in range(1, n + 1))
    expected = Cirquent(tuple(expected_of), pairs, pairs)
    if c != expected:
        return Violation(
            f"not the axiom cirquent for {', '.join(render_formula(f) for f in formulas)}"
        )
    return None


def check_axiom(c: Cirquent, formulas: tuple[Formula, ...]) -> bool:
    """Is c the axiom cirquent on the given formulas: oformulas
    ~F1, F1, ..., ~Fn, Fn with matched undergroup/overgroup pairs?"""
    return axiom_violation(c, formulas) is None


def check_step(premise: Cirquent, conclusion: Cirquent, rule: RuleInstance) -> Violation | None:
    """Is (premise, conclusion) exactly an instance of rule?  None if so."""
    for name, c in (("premise", premise), ("conclusion", conclusion)):
        issues = validate_cirquent(c)
        if issues:
            return Violation(f"invalid {name}: {issues[0]}")
    try:
        if isinstance(rule, Axiom):
            return Violation("axiom has no premise")
        if isinstance(rule, OformulaExchange):
            expected = conclusion_of_oformula_exchange(premise, rule.pos)
        elif isinstance(rule, UndergroupExchange):
            expected = conclusion_of_undergroup_exchange(premise, rule.pos)
        elif isinstance(rule, OvergroupExchange):
            expected = conclusion_of_overgroup_exchange(premise, rule.pos)
        elif isinstance(rule, UndergroupDuplication):
            expected = conclusion_of_undergroup_duplication(premise, rule.pos)
        elif isinstance(rule, OvergroupDuplication):
            expected = conclusion_of_overgroup_duplication(premise, rule.pos)
        elif isinstance(rule, Merging):
            expected = conclusion_of_merging(premise, rule.over)
        elif isinstance(rule, Weakening):
            built, _, _ = premise_of_weakening(conclusion, rule.under, rule.oformula)
            if built != premise:
                return Violation("premise is not the arc-deletion of the conclusion")
            return None
        elif isinstance(rule, Contraction):
            built = premise_of_contraction(conclusion, rule.oformula)
            if built != premise:
                return Violation("premise is not the two-copy split of the conclusion")
            return None
        elif isinstance(rule, OrIntro):
            built = premise_of_or(conclusion, rule.oformula)
            if built != premise:
                return Violation("premise does not split the disjunction as required")
            return None
        elif isinstance(rule, AndIntro):
            built = premise_of_and(conclusion, rule.oformula)
            if built != premise:
                return Violation("premise does not split the conjunction as required")
            return None
        elif isinstance(rule, PstIntro):
            if pst_positions(premise, conclusion, rule.oformula):
                return None
            return Violation("premise does not add a singleton overgroup as required")
        elif isinstance(rule, PcostIntro):
            built = premise_of_pcost(conclusion, rule.oformula, rule.add_over)
            if built != premise:
                return Violation("premise does not match the stated overgroup additions")
            return None
        else:
            return Violation(f"unknown rule {rule!r}")
    except ValueError as exc:
        return Violation(str(exc))
    if expected != conclusion:
        return Violation("conclusion does not match the rule applied to the premise")
    return None


def verify_proof(proof: Proof, goal: Formula | None = None) -> tuple[int, Violation] | None:
    """None if the proof verifies (and proves goal, when given);
    otherwise (1-based step index, violation)."""
    if not proof.steps:
        return (1, Violation("empty proof"))
    first = proof.steps[0]
    if not isinstance(first.rule, Axiom):
        return (1, Violation("first step must be an axiom"))
    v = axiom_violation(first.cirquent, first.rule.formulas)
    if v is not None:
        return (1, v)
    for k in range(1, len(proof.steps)):
        step = proof.steps[k]
        if isinstance(step.rule, Axiom):
            return (k + 1, Violation("axiom allowed only at step 1"))
        v = check_step(proof.steps[k - 1].cirquent, step.cirquent, step.rule)
        if v is not None:
            return (k + 1, v)
    if goal is not None and proof.steps[-1].cirquent != clubsuit(goal):
        return (
            len(proof.steps),
            Violation(f"last cirquent does not prove {render_formula(goal)}"),
        )
    return None


# Proof file format

_RULE_NAMES = {
    "axiom": Axiom,
    "exchange_oformulas": OformulaExchange,
    "exchange_unders": UndergroupExchange,
    "exchange_overs": OvergroupExchange,
    "dup_under": UndergroupDuplication,
    "dup_over": OvergroupDuplication,
    "merging": Merging,
    "weakening": Weakening,
    "contraction": Contraction,
    "or": OrIntro,
    "and": AndIntro,
    "pst": PstIntro,
    "pcost": PcostIntro,
}

_RULE_RENDER = {v: k for k, v in _RULE_NAMES.items()}

_STEP_RE = re.compile(r"step\s+(\d+)\s*:\s*rule=(\S+)\s*(.*)")


def _parse_params(text: str, lineno: int) -> dict[str, object]:
    params: dict[str, object] = {}
    for chunk in text.split():
        if "=" not in chunk:
            raise ProofError(f"line {lineno}: bad parameter {chunk!r}")
        key, _, value = chunk.partition("=")
        if value.startswith("{"):
            if not value.endswith("}"):
                raise ProofError(f"line {lineno}: bad set parameter {chunk!r}")
            inner = value[1:-1].strip()
            params[key] = frozenset(int(p) for p in inner.split(",")) if inner else frozenset()
        else:
            try:
                params[key] = int(value)
            except ValueError as exc:
                raise ProofError(f"line {lineno}: bad parameter {chunk!r}") from exc
    return params


def _build_rule(name: str, params: dict[str, object], cirq: Cirquent, lineno: int) -> RuleInstance:
    cls = _RULE_NAMES.get(name)
    if cls is None:
        raise ProofError(f"line {lineno}: unknown rule {name!r}")

    def need(key: str) -> object:
        if key not in params:
            raise ProofError(f"line {lineno}: rule {name} needs parameter {key}")
        return params[key]

    allowed = {
        Axiom: set(),
        OformulaExchange: {"pos"},
        UndergroupExchange: {"pos"},
        OvergroupExchange: {"pos"},
        UndergroupDuplication: {"pos"},
        OvergroupDuplication: {"pos"},
        Merging: {"over"},
        Weakening: {"under", "oformula"},
        Contraction: {"oformula"},
        OrIntro: {"oformula"},
        AndIntro: {"oformula"},
        PstIntro: {"oformula"},
        PcostIntro: {"oformula", "add_over"},
    }[cls]
    extra = params.keys() - allowed
    if extra:
        raise ProofError(f"line {lineno}: rule {name} does not take {', '.join(sorted(extra))}")

    if cls is Axiom:
        # The axiom schema lists ~F,F pairs; recover the F's from the cirquent.
        if len(cirq.oformulas) % 2 == 0:
            formulas = cirq.oformulas[1::2]
        else:
            formulas = ()
        return Axiom(formulas)
    if cls is Merging:
        return Merging(int(need("over")))  # type: ignore[arg-type]
    if cls is Weakening:
        return Weakening(int(need("under")), int(need("oformula")))  # type: ignore[arg-type]
    if cls is PcostIntro:
        add = params.get("add_over", frozenset())
        if not isinstance(add, frozenset):
            raise ProofError(f"line {lineno}: add_over must be a set like {{1,2}}")
        return PcostIntro(int(need("oformula")), add)  # type: ignore[arg-type]
    if cls in (Contraction, OrIntro, AndIntro, PstIntro):
        return cls(int(need("oformula")))  # type: ignore[operator]
    return cls(int(need("pos")))  # type: ignore[operator]


def parse_proof(text: str) -> Proof:
    """Parse the proof file format: `step <k>: rule=<name> <params>` headers
    each followed by one cirquent line; `#` starts a comment."""
    steps: list[ProofStep] = []
    pending: tuple[int, str, dict[str, object]] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _STEP_RE.fullmatch(line)
        if m:
            if pending is not None:
                raise ProofError(f"line {lineno}: step {pending[0]} has no cirquent")
            number = int(m.group(1))
            if number != len(steps) + 1:
                raise ProofError(f"line {lineno}: expected step {len(steps) + 1}, got {number}")
            pending = (number, m.group(2), _parse_params(m.group(3), lineno))
            continue
        if pending is None:
            raise ProofError(f"line {lineno}: expected a 'step <k>: rule=...' header")
        try:
            cirq = parse_cirquent(line)
        except CirquentError as exc:
            raise ProofError(f"line {lineno}: {exc}") from exc
        steps.append(ProofStep(cirq, _build_rule(pending[1], pending[2], cirq, lineno)))
        pending = None
    if pending is not None:
        raise ProofError(f"step {pending[0]} has no cirquent")
    if not steps:
        raise ProofError("empty proof file")
    return Proof(tuple(steps))


def _render_params(rule: RuleInstance) -> str:
    if isinstance(rule, Axiom):
        return ""
    if isinstance(rule, Merging):
        return f" over={rule.over}"
    if isinstance(rule, Weakening):
        return f" under={rule.under} oformula={rule.oformula}"
    if isinstance(rule, PcostIntro):
        inner = ",".join(str(j) for j in sorted(rule.add_over))
        return f" oformula={rule.oformula} add_over={{{inner}}}"
    if isinstance(rule, (Contraction, OrIntro, AndIntro, PstIntro)):
        return f" oformula={rule.oformula}"
    return f" pos={rule.pos}"


def render_proof(proof: Proof) -> str:
    """Inverse of parse_proof."""
    lines = []
    for k, step in enumerate(proof.steps, start=1):
        lines.append(f"step {k}: rule={_RULE_RENDER[type(step.rule)]}{_render_params(step.rule)}")
        lines.append(render_cirquent(step.cirquent))
    return "\n".join(lines)
