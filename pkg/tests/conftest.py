"""Shared test data: rule illustration instances, a single-corruption
generator, and scripted-play helpers for the translator identity checks."""
from __future__ import annotations

import random
from pathlib import Path

from cl15 import cl15 as rules
from cl15.cirquent import Cirquent, parse_cirquent
from cl15.formula import AtomRef, Or, parse_formula
from cl15.harness import ScriptMachine, play_translated
from cl15.runs import format_cell_move, project_cell, project_prefix
from cl15.strategy import declubsuit, depst, pair, transform_strategy

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def C(text: str) -> Cirquent:
    return parse_cirquent(text)


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


# One accepted instance per rule (axiom first, with no premise), plus extra
# instances that exercise the coordinate translators from other angles:
# a duplication that is not at the end, a merging with both/neither
# membership, and a corecurrence introduction adjoining no overgroups.

RULE_CASES = [
    ("axiom", None,
     "oformulas: ~F1 | F1 | ~F2 | F2 ; under: {1,2}{3,4} ; over: {1,2}{3,4}",
     rules.Axiom((parse_formula("F1"), parse_formula("F2")))),
    ("exchange_oformulas",
     "oformulas: E | F | G ; under: {1,2}{2}{3} ; over: {1}{2,3}",
     "oformulas: F | E | G ; under: {1,2}{1}{3} ; over: {2}{1,3}",
     rules.OformulaExchange(1)),
    ("exchange_unders",
     "oformulas: E | F ; under: {1}{2} ; over: {1,2}",
     "oformulas: E | F ; under: {2}{1} ; over: {1,2}",
     rules.UndergroupExchange(1)),
    ("exchange_overs",
     "oformulas: E | F ; under: {1,2} ; over: {1}{2}",
     "oformulas: E | F ; under: {1,2} ; over: {2}{1}",
     rules.OvergroupExchange(1)),
    ("dup_under",
     "oformulas: E | F | G ; under: {1,2}{3} ; over: {1}{2,3}",
     "oformulas: E | F | G ; under: {1,2}{1,2}{3} ; over: {1}{2,3}",
     rules.UndergroupDuplication(1)),
    ("dup_over",
     "oformulas: ~P | P ; under: {1,2} ; over: {1,2}",
     "oformulas: ~P | P ; under: {1,2} ; over: {1,2}{1,2}",
     rules.OvergroupDuplication(1)),
    ("dup_over_mid",
     "oformulas: E | F ; under: {1,2} ; over: {1,2}{2}",
     "oformulas: E | F ; under: {1,2} ; over: {1,2}{1,2}{2}",
     rules.OvergroupDuplication(1)),
    ("merging",
     "oformulas: E | F | E ; under: {1}{2}{3} ; over: {1}{2,3}",
     "oformulas: E | F | E ; under: {1}{2}{3} ; over: {1,2,3}",
     rules.Merging(1)),
    ("merging_mixed",
     "oformulas: E | F ; under: {1,2} ; over: {1}{2}{2}",
     "oformulas: E | F ; under: {1,2} ; over: {1}{2}",
     rules.Merging(2)),
    ("weakening",
     "oformulas: G | F | F ; under: {1}{2}{3} ; over: {1,2}{2,3}",
     "oformulas: G | F | F ; under: {1,2}{2}{3} ; over: {1,2}{2,3}",
     rules.Weakening(1, 2)),
    ("contraction",
     "oformulas: E | ?F | ?F | G ; under: {1,2,3}{2,3,4} ; over: {1}{2,3,4}{4}",
     "oformulas: E | ?F | G ; under: {1,2}{2,3} ; over: {1}{2,3}{3}",
     rules.Contraction(2)),
    ("or",
     "oformulas: E | E | F ; under: {1}{2,3}{2,3} ; over: {1,2,3}{2,3}",
     "oformulas: E | E \\/ F ; under: {1}{2}{2} ; over: {1,2}{2}",
     rules.OrIntro(2)),
    ("and",
     "oformulas: G | E | F ; under: {1}{1,2}{1,3} ; over: {1}{2,3}",
     "oformulas: G | E /\\ F ; under: {1}{1,2} ; over: {1}{2}",
     rules.AndIntro(2)),
    ("pst",
     "oformulas: H | E | F ; under: {1,2}{2}{3} ; over: {1,2}{2,3}{3}",
     "oformulas: H | E | !F ; under: {1,2}{2}{3} ; over: {1,2}{2,3}",
     rules.PstIntro(3)),
    ("pcost",
     "oformulas: H | E | F ; under: {1,2}{2}{3} ; over: {1,2,3}{2,3}{3}",
     "oformulas: H | E | ?F ; under: {1,2}{2}{3} ; over: {1,2}{2,3}{3}",
     rules.PcostIntro(3, frozenset({1}))),
    ("pcost_plain",
     "oformulas: P ; under: {1} ; over: {1}",
     "oformulas: ?P ; under: {1} ; over: {1}",
     rules.PcostIntro(1, frozenset())),
]


def rule_case(name):
    for case_name, prem, concl, rule in RULE_CASES:
        if case_name == name:
            return (C(prem) if prem is not None else None), C(concl), rule
    raise KeyError(name)


def instance_accepted(premise, conclusion, rule) -> bool:
    if premise is None:
        assert isinstance(rule, rules.Axiom)
        return rules.axiom_violation(conclusion, rule.formulas) is None
    return rules.check_step(premise, conclusion, rule) is None


# Single-token corruptions.  Every variant below must be rejected: with the
# rule and one side fixed, the other side is determined, and the excluded
# combinations (overgroup edits inside a merged pair) are skipped because
# merging genuinely identifies such premises.

def _with_of(c: Cirquent, a: int, f) -> Cirquent:
    of = list(c.oformulas)
    of[a - 1] = f
    return Cirquent(tuple(of), c.undergroups, c.overgroups)


def _swap_of(c: Cirquent, a: int) -> Cirquent:
    of = list(c.oformulas)
    of[a - 1], of[a] = of[a], of[a - 1]
    return Cirquent(tuple(of), c.undergroups, c.overgroups)


def _with_groups(c: Cirquent, kind: str, groups) -> Cirquent:
    if kind == "under":
        return Cirquent(c.oformulas, tuple(groups), c.overgroups)
    return Cirquent(c.oformulas, c.undergroups, tuple(groups))


def _cirquent_mutants(side: str, c: Cirquent, skip_over_toggles: bool,
                      skip_over_swaps: bool):
    fresh = AtomRef("Zz")
    for a in range(1, c.size + 1):
        yield (f"{side}: wrap oformula {a}", _with_of(c, a, Or(c.oformulas[a - 1], fresh)))
    for a in range(1, c.size):
        if c.oformulas[a - 1] != c.oformulas[a]:
            yield (f"{side}: swap oformulas {a},{a + 1}", _swap_of(c, a))
    for kind in ("under", "over"):
        groups = c.undergroups if kind == "under" else c.overgroups
        if not (kind == "over" and skip_over_toggles):
            for j, g in enumerate(groups):
                for a in range(1, c.size + 1):
                    g2 = g - {a} if a in g else g | {a}
                    yield (
                        f"{side}: toggle {a} in {kind}group {j + 1}",
                        _with_groups(
                            c, kind, groups[:j] + (frozenset(g2),) + groups[j + 1:]
                        ),
                    )
        if not (kind == "over" and skip_over_swaps):
            for j in range(len(groups) - 1):
                if groups[j] != groups[j + 1]:
                    yield (
                        f"{side}: swap {kind}groups {j + 1},{j + 2}",
                        _with_groups(
                            c, kind,
                            groups[:j] + (groups[j + 1], groups[j]) + groups[j + 2:],
                        ),
                    )


def _rule_mutants(rule):
    if isinstance(rule, rules.Axiom):
        yield "rule: formulas reversed", rules.Axiom(tuple(reversed(rule.formulas)))
        yield "rule: formula dropped", rules.Axiom(rule.formulas[:-1])
        return
    if isinstance(
        rule,
        (
            rules.OformulaExchange,
            rules.UndergroupExchange,
            rules.OvergroupExchange,
            rules.UndergroupDuplication,
            rules.OvergroupDuplication,
        ),
    ):
        yield "rule: pos+1", type(rule)(rule.pos + 1)
    elif isinstance(rule, rules.Merging):
        yield "rule: over+1", rules.Merging(rule.over + 1)
    elif isinstance(rule, rules.Weakening):
        yield "rule: under+1", rules.Weakening(rule.under + 1, rule.oformula)
        yield "rule: oformula+1", rules.Weakening(rule.under, rule.oformula + 1)
    elif isinstance(rule, rules.PcostIntro):
        yield "rule: oformula+1", rules.PcostIntro(rule.oformula + 1, rule.add_over)
    else:
        yield "rule: oformula+1", type(rule)(rule.oformula + 1)


def single_corruptions(premise, conclusion, rule):
    """(description, premise, conclusion, rule) variants one edit away from
    an accepted instance; every one must be rejected.

    Two premise-side families are excluded because they land on legitimate
    alternative instances rather than corruptions: overgroup edits inside a
    merged pair (merging identifies such premises), and overgroup swaps
    around the singleton a pst introduction inserts (any insertion position
    is allowed)."""
    out = []
    for desc, mutated in _cirquent_mutants("conclusion", conclusion, False, False):
        out.append((desc, premise, mutated, rule))
    if premise is not None:
        is_merge = isinstance(rule, rules.Merging)
        skip_swaps = is_merge or isinstance(rule, rules.PstIntro)
        for desc, mutated in _cirquent_mutants("premise", premise, is_merge, skip_swaps):
            out.append((desc, mutated, conclusion, rule))
    for desc, rule2 in _rule_mutants(rule):
        out.append((desc, premise, conclusion, rule2))
    return out


# Scripted plays through one translation layer, for the run-correspondence
# identity checks.  Environment moves are conclusion-shaped, the inner
# machine's moves premise-shaped; both respect the zero pattern of their
# cirquent's overgroup memberships.

GRID = (1, 2, 3)


def shaped_moves(cirq, rng, count, payload_for=None):
    out = []
    for _ in range(count):
        a = rng.randrange(1, cirq.size + 1)
        coords = tuple(rng.randint(1, 3) if a in g else 0 for g in cirq.overgroups)
        payload = payload_for(a, rng) if payload_for else rng.choice(("m", "n"))
        out.append(format_cell_move(a, coords, payload))
    return out


def interleave(moves, rng):
    out = []
    for mv in moves:
        while rng.random() < 0.5:
            out.append(None)
        out.append(mv)
    out.extend([None] * 8)
    return out


def play_instance(rule, prem, concl, seed, prem_payload=None, concl_payload=None,
                  n_moves=10):
    rng = random.Random(seed)
    env = shaped_moves(concl, rng, n_moves, concl_payload)
    mach = interleave(shaped_moves(prem, rng, n_moves, prem_payload), rng)
    strat = transform_strategy(rule, prem, concl, ScriptMachine(mach))
    real, imag = play_translated(strat, env, budget=80)
    assert len(real) >= n_moves
    return real, imag


def check_exchange_oformulas_identity(seed):
    prem, concl, rule = rule_case("exchange_oformulas")
    real, imag = play_instance(rule, prem, concl, seed)
    sigma = {1: 2, 2: 1, 3: 3}
    for a in (1, 2, 3):
        for x1 in GRID:
            for x2 in GRID:
                assert project_cell(real, a, (x1, x2)) == project_cell(
                    imag, sigma[a], (x1, x2)
                )


def check_exchange_overs_identity(seed):
    prem = C("oformulas: E | F ; under: {1,2} ; over: {1,2}{2}")
    concl = C("oformulas: E | F ; under: {1,2} ; over: {2}{1,2}")
    real, imag = play_instance(rules.OvergroupExchange(1), prem, concl, seed)
    for a in (1, 2):
        for x1 in GRID:
            for x2 in GRID:
                assert project_cell(real, a, (x1, x2)) == project_cell(imag, a, (x2, x1))


def check_contraction_identity(seed):
    prem, concl, rule = rule_case("contraction")

    def prem_payload(a, rng):
        return f"{rng.randint(1, 2)}.t" if a in (2, 3) else rng.choice(("m", "n"))

    def concl_payload(a, rng):
        return f"{rng.randint(1, 4)}.t" if a == 2 else rng.choice(("m", "n"))

    real, imag = play_instance(rule, prem, concl, seed, prem_payload, concl_payload)
    import itertools

    for xs in itertools.product(GRID, repeat=3):
        assert project_cell(real, 1, xs) == project_cell(imag, 1, xs)
        assert project_cell(real, 3, xs) == project_cell(imag, 4, xs)
        for w in (1, 2):
            assert project_prefix(project_cell(real, 2, xs), f"{2 * w - 1}.") == (
                project_prefix(project_cell(imag, 2, xs), f"{w}.")
            )
            assert project_prefix(project_cell(real, 2, xs), f"{2 * w}.") == (
                project_prefix(project_cell(imag, 3, xs), f"{w}.")
            )


def check_dup_over_identity(seed):
    prem, concl, rule = rule_case("dup_over")
    real, imag = play_instance(rule, prem, concl, seed)
    for a in (1, 2):
        for x1 in GRID:
            for x2 in GRID:
                assert project_cell(real, a, (x1, x2)) == project_cell(
                    imag, a, (pair(x1, x2),)
                )
    prem2, concl2, rule2 = rule_case("dup_over_mid")
    real2, imag2 = play_instance(rule2, prem2, concl2, seed + 1)
    for x1 in GRID:
        for x2 in GRID:
            for z in GRID:
                for a in (1, 2):
                    assert project_cell(real2, a, (x1, x2, z)) == project_cell(
                        imag2, a, (pair(x1, x2), z)
                    )


def check_merging_identity(seed):
    prem, concl, rule = rule_case("merging")
    real, imag = play_instance(rule, prem, concl, seed)
    for x in GRID:
        for z in GRID:
            assert project_cell(real, 1, (x,)) == project_cell(imag, 1, (x, z))
            assert project_cell(real, 2, (x,)) == project_cell(imag, 2, (z, x))
            assert project_cell(real, 3, (x,)) == project_cell(imag, 3, (z, x))
    prem2, concl2, rule2 = rule_case("merging_mixed")
    real2, imag2 = play_instance(rule2, prem2, concl2, seed + 1)
    for y in GRID:
        for u in GRID:
            for v in GRID:
                assert project_cell(real2, 1, (y, u)) == project_cell(imag2, 1, (y, u, v))
                assert project_cell(real2, 2, (y, pair(u, v))) == project_cell(
                    imag2, 2, (y, u, v)
                )


def check_or_identity(seed):
    prem, concl, rule = rule_case("or")

    def concl_payload(a, rng):
        return f"{rng.choice((1, 2))}.t" if a == 2 else rng.choice(("m", "n"))

    real, imag = play_instance(rule, prem, concl, seed, None, concl_payload)
    for x1 in GRID:
        for x2 in GRID:
            assert project_cell(real, 1, (x1, x2)) == project_cell(imag, 1, (x1, x2))
            cell = project_cell(real, 2, (x1, x2))
            assert project_prefix(cell, "1.") == project_cell(imag, 2, (x1, x2))
            assert project_prefix(cell, "2.") == project_cell(imag, 3, (x1, x2))


def check_pst_identity(seed):
    prem, concl, rule = rule_case("pst")

    def concl_payload(a, rng):
        return f"{rng.randint(1, 3)}.t" if a == 3 else rng.choice(("m", "n"))

    real, imag = play_instance(rule, prem, concl, seed, None, concl_payload)
    for x1 in GRID:
        for x2 in GRID:
            for b in (1, 2):
                for y in GRID:
                    assert project_cell(real, b, (x1, x2)) == project_cell(
                        imag, b, (x1, x2, y)
                    )
            for x in GRID:
                assert project_prefix(
                    project_cell(real, 3, (x1, x2)), f"{x}."
                ) == project_cell(imag, 3, (x1, x2, x))


def check_pcost_identity(seed):
    prem, concl, rule = rule_case("pcost")

    def concl_payload(a, rng):
        return f"{rng.randint(1, 3)}.t" if a == 3 else rng.choice(("m", "n"))

    real, imag = play_instance(rule, prem, concl, seed, None, concl_payload)
    for x2 in GRID:
        for x3 in GRID:
            for u in GRID:
                for z in GRID:
                    assert project_prefix(
                        project_cell(real, 3, (z, x2, x3)), f"{u}."
                    ) == project_cell(imag, 3, (u, x2, x3))
            for b in (1, 2):
                assert project_cell(real, b, (x2, x3, 1)) == project_cell(
                    imag, b, (x2, x3, 1)
                )
    prem2, concl2, rule2 = rule_case("pcost_plain")

    def concl_payload2(a, rng):
        return f"{rng.randint(1, 2)}.t"

    real2, imag2 = play_instance(rule2, prem2, concl2, seed + 1, None, concl_payload2)
    for x in GRID:
        assert project_prefix(project_cell(real2, 1, (x,)), "1.") == project_cell(
            imag2, 1, (x,)
        )


def check_declubsuit_identity(seed):
    rng = random.Random(seed)
    mach = interleave(
        [format_cell_move(1, (rng.randint(1, 4),), "m") for _ in range(8)], rng
    )
    env = [f"{rng.randint(1, 4)}.m" for _ in range(8)]
    real, imag = play_translated(declubsuit(ScriptMachine(mach)), env, budget=80)
    assert len(real) >= 8
    for x in (1, 2, 3, 4):
        assert project_prefix(real, f"{x}.") == project_cell(imag, 1, (x,))


def check_depst_identity(seed):
    rng = random.Random(seed)
    mach = interleave([f"{rng.randint(1, 3)}.m" for _ in range(8)], rng)
    env = [rng.choice(("m", "n")) for _ in range(8)]
    real, imag = play_translated(depst(ScriptMachine(mach)), env, budget=80)
    assert len(real) >= 8
    assert real == project_prefix(imag, "1.")


IDENTITY_CHECKS = [
    ("exchange (oformulas)", check_exchange_oformulas_identity),
    ("exchange (overgroups)", check_exchange_overs_identity),
    ("contraction", check_contraction_identity),
    ("duplication", check_dup_over_identity),
    ("merging", check_merging_identity),
    ("or", check_or_identity),
    ("pst", check_pst_identity),
    ("pcost", check_pcost_identity),
    ("declubsuit", check_declubsuit_identity),
    ("depst", check_depst_identity),
]
