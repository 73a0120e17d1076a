"""Machine strategies: the simulator contract, the axiom mirror, the pairing
arithmetic, per-rule move translators, and proof-to-strategy extraction."""
import pytest

from cl15.cirquent import clubsuit
from cl15.cl15 import PcostIntro, parse_proof
from cl15.formula import parse_formula
from cl15.games import PermissiveGame, interpret_cirquent, interpret_formula, parse_finite_game
from cl15.runs import BOT, TOP, Labmove
from cl15.strategy import (
    GRANT,
    AxiomStrategy,
    IdleStrategy,
    MachineStrategy,
    MakeMove,
    PureGranter,
    ScriptEnv,
    SilentEnv,
    StrategyError,
    declubsuit_translator,
    depst_translator,
    extract_solution,
    fold_positives,
    make_translator,
    pair,
    simulate,
    transform_strategy,
    unfold_positives,
    unpair,
)

from conftest import IDENTITY_CHECKS, read_fixture, rule_case


def _game_P():
    return parse_finite_game("finitegame\n() => B\nT m => T")


# --- simulator -------------------------------------------------------------

def test_simulate_rejects_nonpositive_budget():
    with pytest.raises(StrategyError):
        simulate(IdleStrategy(), SilentEnv(), PermissiveGame(), 0)


def test_simulate_stops_on_idle_with_trace():
    res = simulate(IdleStrategy(), SilentEnv(), _game_P(), 10)
    assert res.steps == 1
    assert res.trace == ["1 M:idle"]
    assert res.winner is BOT  # empty run of P is lost
    assert res.first_illegality is None
    assert res.render_trace().endswith("winner: B grants:0")


def test_simulate_counts_grants_and_logs_env_moves():
    class OneMove(MachineStrategy):
        def spawn(self):
            return OneMove()

        def next(self, run, step):
            if step == 1:
                return MakeMove("m")
            return GRANT

    res = simulate(OneMove(), SilentEnv(), _game_P(), 5)
    assert res.trace[0] == "1 M:move m"
    assert res.grants == 4 and res.steps == 5
    assert res.winner is TOP
    assert res.run == (Labmove(TOP, "m"),)


def test_simulate_flags_machine_offender():
    class Rogue(MachineStrategy):
        def spawn(self):
            return Rogue()

        def next(self, run, step):
            return MakeMove("zzz")

    res = simulate(Rogue(), SilentEnv(), _game_P(), 5)
    assert res.first_illegality == "machine offender: move 'zzz' is illegal"
    assert res.winner is BOT
    assert res.steps == 1


def test_simulate_flags_environment_offender():
    res = simulate(PureGranter(), ScriptEnv(["zzz"]), _game_P(), 5)
    assert res.first_illegality == "environment offender: move 'zzz' is illegal"
    assert res.winner is TOP
    assert res.trace[-1] == "1 E:zzz"


def test_script_env_spawn_resets():
    env = ScriptEnv(["zzz"])
    first = simulate(PureGranter(), env, _game_P(), 5)
    second = simulate(PureGranter(), env, _game_P(), 5)
    assert first.run == second.run


# --- axiom strategy ---------------------------------------------------------

def _feed(strategy, env_moves):
    """Push environment moves one at a time; collect the machine's answers."""
    m = strategy.spawn()
    run = []
    answers = []
    for step in range(1, 40):
        action = m.next(tuple(run), step)
        if action.__class__.__name__ == "MakeMove":
            answers.append(action.move)
            run.append(Labmove(TOP, action.move))
        else:
            if env_moves:
                run.append(Labmove(BOT, env_moves.pop(0)))
    return answers


def test_axiom_strategy_mirrors_between_partners():
    assert _feed(AxiomStrategy(1), ["1;2.m"]) == ["2;2.m"]
    assert _feed(AxiomStrategy(2), ["4;1,1.m"]) == ["3;1,1.m"]
    assert _feed(AxiomStrategy(2), ["1;5.a", "2;6.b"]) == ["2;5.a", "1;6.b"]


def test_axiom_strategy_ignores_noise():
    assert _feed(AxiomStrategy(1), ["5;1.m"]) == []  # out-of-range cell
    assert _feed(AxiomStrategy(1), ["hello"]) == []  # not a cell move
    strat = AxiomStrategy(1).spawn()
    # TOP moves in the run are not mirrored.
    action = strat.next((Labmove(TOP, "1;2.m"),), 1)
    assert action.__class__.__name__ == "GrantPermission"


def test_axiom_strategy_requires_positive_n():
    with pytest.raises(StrategyError):
        AxiomStrategy(0)


# --- pairing arithmetic ------------------------------------------------------

def test_pair_verbatim_values():
    assert pair(1, 1) == 1
    assert pair(1, 2) == 2
    assert pair(2, 1) == 3
    assert fold_positives(()) == 1
    assert unfold_positives(1, 0) == ()
    assert unfold_positives(2, 0) is None


def test_pair_unpair_roundtrip():
    seen = set()
    for v in range(1, 60):
        u1, u2 = unpair(v)
        assert u1 >= 1 and u2 >= 1
        assert pair(u1, u2) == v
        seen.add((u1, u2))
    assert len(seen) == 59


def test_fold_unfold_roundtrip():
    for us in [(1,), (3,), (1, 2), (2, 1), (5, 4, 3), (1, 1, 1, 1)]:
        v = fold_positives(us)
        assert unfold_positives(v, len(us)) == us


# --- translators -------------------------------------------------------------

def test_pcost_translator_folds_added_overgroup_coordinates():
    p2 = parse_proof(read_fixture("p2.proof"))
    step = p2.steps[2]
    assert step.rule == PcostIntro(1, frozenset({2}))
    tr = make_translator(step.rule, p2.steps[1].cirquent, step.cirquent)
    assert tr.outer_to_inner("1;1,0.7.m") == "1;1,7.m"
    assert tr.outer_to_inner("1;1,0.x.m") is None
    assert tr.inner_to_outer("1;1,7.m") == "1;1,0.7.m"


def test_declubsuit_translator_verbatim():
    tr = declubsuit_translator()
    assert tr.outer_to_inner("7.m") == "1;7.m"
    assert tr.outer_to_inner("m") is None
    assert tr.inner_to_outer("1;7.m") == "7.m"
    assert tr.inner_to_outer("1;0.m") is None
    assert tr.inner_to_outer("2;7.m") is None


def test_depst_translator_verbatim():
    tr = depst_translator()
    assert tr.outer_to_inner("m") == "1.m"
    assert tr.inner_to_outer("1.m") == "m"
    assert tr.inner_to_outer("2.m") is None
    assert tr.inner_to_outer("m") is None


@pytest.mark.parametrize("label", [label for label, _ in IDENTITY_CHECKS])
def test_run_correspondence_identity(label):
    check = dict(IDENTITY_CHECKS)[label]
    for seed in range(3):
        check(seed)


# --- extraction ---------------------------------------------------------------

def test_transform_strategy_requires_a_checking_application():
    premise, conclusion, rule = rule_case("or")
    with pytest.raises(StrategyError, match="rule application does not check"):
        transform_strategy(rule, conclusion, premise, IdleStrategy())


def test_extract_solution_rejects_broken_proof():
    proof = parse_proof(read_fixture("p1-broken.proof"))
    with pytest.raises(StrategyError, match="step 2"):
        extract_solution(proof)


def test_extract_solution_formula_level_needs_clubsuit_final():
    proof = parse_proof(read_fixture("p1.proof"))
    truncated = proof.__class__(proof.steps[:1])
    with pytest.raises(StrategyError, match="clubsuit"):
        extract_solution(truncated, formula_level=True)


def test_p1_cirquent_level_copycat():
    proof = parse_proof(read_fixture("p1.proof"))
    strat = extract_solution(proof)
    game = interpret_cirquent(proof.steps[-1].cirquent, {"P": _game_P()})
    res = simulate(strat, ScriptEnv(["1;1.1.m"]), game, 30)
    assert Labmove(TOP, "1;1.2.m") in res.run
    assert res.winner is TOP
    assert res.first_illegality is None


def test_p1_formula_level_copycat():
    proof = parse_proof(read_fixture("p1.proof"))
    strat = extract_solution(proof, formula_level=True)
    goal = parse_formula("~P \\/ P")
    assert clubsuit(goal) == proof.steps[-1].cirquent
    game = interpret_formula(goal, {"P": _game_P()})
    res = simulate(strat, ScriptEnv(["1.m"]), game, 30)
    assert Labmove(TOP, "2.m") in res.run
    assert res.winner is TOP
    assert res.first_illegality is None


def test_p2_formula_level_wins_against_scripts():
    proof = parse_proof(read_fixture("p2.proof"))
    strat = extract_solution(proof, formula_level=True)
    game = interpret_formula(parse_formula("?~P \\/ !P"), {"P": _game_P()})
    for script in ([], ["1.1.m"], ["1.1.m", "1.2.m"]):
        res = simulate(strat, ScriptEnv(list(script)), game, 60)
        assert res.winner is TOP, script
        assert res.first_illegality is None
