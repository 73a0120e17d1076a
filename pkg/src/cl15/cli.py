"""Command-line front end: proof checking, strategy extraction, simulated
play, run projection, the bounded separation demo, and an interactive
human-as-environment play mode."""
from __future__ import annotations

import argparse
import random
import re
import sys

from . import cl15 as rules
from .cirquent import Cirquent, CirquentError, as_clubsuit, render_cirquent
from .formula import Formula, FormulaError, atoms, render_formula
from .games import (
    Game,
    GameError,
    Interpretation,
    interpret_cirquent,
    interpret_formula,
    parse_finite_game,
)
from .harness import (
    HarnessError,
    RotatingCopycat,
    ScriptAdversary,
    SilentAdversary,
    random_adversary,
    random_finite_interpretation,
    scripted_adversary,
    separation_demo,
)
from .runs import (
    BOT,
    TOP,
    Labmove,
    Run,
    RunError,
    parse_bitstring_spec,
    parse_run,
    project_branch,
    project_cell,
    project_prefix,
    render_run,
)
from .strategy import (
    GrantPermission,
    MakeMove,
    PureGranter,
    StrategyError,
    extract_solution,
    simulate,
)

OK, FAIL, USAGE = 0, 1, 2

_ATOM_NAME_RE = re.compile(r"[A-Z][A-Za-z0-9]*")


# File loaders

def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def parse_interpretation(text: str) -> Interpretation:
    """Parse an interpretation file: an `interpretation` header, then
    `atom <Name>` sections each holding finite-game lines."""
    lines = text.splitlines()
    body = [
        (i, ln.strip()) for i, ln in enumerate(lines, start=1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not body or body[0][1] != "interpretation":
        raise GameError("line 1: expected 'interpretation' header")
    out: Interpretation = {}
    name: str | None = None
    section: list[str] = []

    def close() -> None:
        if name is None:
            return
        if name in out:
            raise GameError(f"duplicate atom {name!r}")
        out[name] = parse_finite_game("finitegame\n" + "\n".join(section))

    for lineno, ln in body[1:]:
        if ln.startswith("atom"):
            close()
            parts = ln.split()
            if len(parts) != 2 or not _ATOM_NAME_RE.fullmatch(parts[1]):
                raise GameError(f"line {lineno}: expected 'atom <Name>'")
            name = parts[1]
            section = []
        elif name is None:
            raise GameError(f"line {lineno}: move lines before any 'atom' section")
        else:
            section.append(ln)
    close()
    if not out:
        raise GameError("interpretation file defines no atoms")
    return out


def _load_subject(path: str, level_flag: str | None) -> tuple[rules.Proof, bool]:
    """Load a proof file, or an extracted-strategy file (a `strategy
    level=<level>` header followed by proof text).  Returns the proof and
    whether the formula level was requested."""
    text = _read(path)
    stripped = text.lstrip()
    if stripped.startswith("strategy"):
        header, _, rest = stripped.partition("\n")
        m = re.fullmatch(r"strategy\s+level=(cirquent|formula)", header.strip())
        if not m:
            raise rules.ProofError("line 1: expected 'strategy level=cirquent|formula'")
        return rules.parse_proof(rest), m.group(1) == "formula"
    return rules.parse_proof(text), level_flag == "formula"


def _goal_of(proof: rules.Proof, formula_level: bool) -> tuple[Formula | Cirquent, str]:
    last = proof.steps[-1].cirquent
    if formula_level:
        goal = as_clubsuit(last)
        if goal is None:
            raise StrategyError("final cirquent is not a one-oformula clubsuit")
        return goal, render_formula(goal)
    return last, render_cirquent(last)


def _goal_atoms(goal: Formula | Cirquent) -> frozenset[str]:
    if isinstance(goal, Cirquent):
        names: frozenset[str] = frozenset()
        for f in goal.oformulas:
            names |= atoms(f)
        return names
    return atoms(goal)


def _build_interp(args, goal) -> Interpretation:
    names = _goal_atoms(goal)
    if args.interp == "random":
        return random_finite_interpretation(
            sorted(names), args.depth, args.branching, args.seed
        )
    interp = parse_interpretation(_read(args.interp))
    missing = sorted(names - interp.keys())
    if missing:
        raise GameError(f"interpretation missing atoms: {', '.join(missing)}")
    return interp


def _interpret(goal: Formula | Cirquent, interp: Interpretation) -> Game:
    if isinstance(goal, Cirquent):
        return interpret_cirquent(goal, interp)
    return interpret_formula(goal, interp)


# Subcommands

def cmd_check(args) -> int:
    proof = rules.parse_proof(_read(args.proof))
    failure = rules.verify_proof(proof)
    if failure is None:
        print(f"ok ({len(proof.steps)} steps)")
        return OK
    k, violation = failure
    print(f"step {k}: violation: {violation.reason}")
    return FAIL


def cmd_extract(args) -> int:
    proof = rules.parse_proof(_read(args.proof))
    failure = rules.verify_proof(proof)
    if failure is not None:
        k, violation = failure
        print(f"step {k}: violation: {violation.reason}")
        return FAIL
    extract_solution(proof, formula_level=args.level == "formula")
    _, desc = _goal_of(proof, args.level == "formula")
    text = f"strategy level={args.level}\n{rules.render_proof(proof)}\n"
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(text)
    print(f"ok: {args.level}-level strategy for {desc} -> {args.out}")
    return OK


def _make_adversary(spec: str, game: Game, goal, interp: Interpretation, seed: int):
    if spec == "silent":
        return SilentAdversary()
    if spec == "random":
        return random_adversary(game, goal, interp, seed)
    if spec == "scripted":
        script = tuple(random.Random(seed).randrange(7) for _ in range(24))
        return scripted_adversary(game, goal, interp, script)
    if spec.startswith("script:"):
        moves = [
            ln.strip()
            for ln in _read(spec[len("script:"):]).splitlines()
            if ln.strip() and not ln.strip().startswith("#")
        ]
        return ScriptAdversary(moves)
    raise HarnessError(
        f"unknown adversary {spec!r} (use silent, random, scripted, or script:<file>)"
    )


def cmd_simulate(args) -> int:
    proof, formula_level = _load_subject(args.subject, args.level)
    failure = rules.verify_proof(proof)
    if failure is not None:
        k, violation = failure
        print(f"step {k}: violation: {violation.reason}")
        return FAIL
    machine = extract_solution(proof, formula_level=formula_level)
    goal, desc = _goal_of(proof, formula_level)
    interp = _build_interp(args, goal)
    game = _interpret(goal, interp)
    adversary = _make_adversary(args.adversary, game, goal, interp, args.seed)
    result = simulate(machine, adversary, game, args.budget)
    print(f"game: {desc}")
    print(f"adversary: {getattr(adversary, 'name', 'custom')} budget: {args.budget}")
    print(result.render_trace())
    if result.first_illegality:
        print(f"note: {result.first_illegality}")
    return OK if result.winner is TOP else FAIL


def cmd_project(args) -> int:
    run = parse_run(_read(args.runfile))
    if args.prefix is not None:
        result = project_prefix(run, args.prefix)
    elif args.branch is not None:
        result = project_branch(run, parse_bitstring_spec(args.branch))
    else:
        coords = tuple(int(p) for p in args.coords.split(",")) if args.coords else ()
        result = project_cell(run, args.cell, coords)
    text = render_run(result)
    if text:
        print(text)
    return OK


def cmd_demo_separation(args) -> int:
    machine = PureGranter() if args.machine == "granter" else RotatingCopycat()
    report = separation_demo(machine, args.k, args.budget)
    print(report.render())
    return OK if report.conclusive else FAIL


def play_session(
    proof: rules.Proof,
    interp: Interpretation,
    budget: int,
    *,
    formula_level: bool = False,
    in_stream=None,
    out_stream=None,
) -> int:
    """Interactive play: the human is the environment, prompted at each
    grant; the position is shown after every labmove and the transcript is
    printed in run format at the end."""
    in_stream = in_stream if in_stream is not None else sys.stdin
    out_stream = out_stream if out_stream is not None else sys.stdout

    def say(msg: str) -> None:
        print(msg, file=out_stream)

    failure = rules.verify_proof(proof)
    if failure is not None:
        k, violation = failure
        say(f"step {k}: violation: {violation.reason}")
        return FAIL
    machine = extract_solution(proof, formula_level=formula_level).spawn()
    goal, desc = _goal_of(proof, formula_level)
    game = _interpret(goal, interp)
    say(f"playing: {desc}")
    say("you are the environment (B); at each grant enter a move, 'pass', or 'quit'")

    run: list[Labmove] = []

    def position() -> str:
        return "; ".join(f"{lm.player.value} {lm.move}" for lm in run) or "(empty)"

    ended = False
    for step in range(1, budget + 1):
        if ended:
            break
        action = machine.next(tuple(run), step)
        if isinstance(action, MakeMove):
            run.append(Labmove(TOP, action.move))
            say(f"machine moves: {action.move}")
            say(f"position: {position()}")
            if not game.legal(tuple(run)):
                say("machine made an illegal move; environment wins")
                ended = True
        elif isinstance(action, GrantPermission):
            while True:
                say("your move>")
                line = in_stream.readline()
                if line == "":
                    ended = True
                    break
                text = line.strip()
                if text == "quit":
                    ended = True
                    break
                if text in ("", "pass"):
                    break
                if re.search(r"\s", text):
                    say("malformed move (whitespace not allowed); try again")
                    continue
                run.append(Labmove(BOT, text))
                say(f"position: {position()}")
                if not game.legal(tuple(run)):
                    say("warning: illegal move; recorded (machine wins)")
                    ended = True
                break
        else:
            say("machine idles")
            break
    final = tuple(run)
    winner = game.winner(final)
    say(f"winner: {winner.value}")
    say("transcript:")
    say(render_run(final) or "(empty)")
    return OK if winner is TOP else FAIL


def cmd_play(args) -> int:
    proof, formula_level = _load_subject(args.proof, args.level)
    goal, _ = _goal_of(proof, formula_level)
    interp = _build_interp(args, goal)
    return play_session(
        proof, interp, args.budget, formula_level=formula_level
    )


# Argument parsing and dispatch

def _add_interp_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--interp", default="random",
                     help="interpretation file, or 'random' (default)")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--depth", type=int, default=2)
    sub.add_argument("--branching", type=int, default=2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cl15",
        description="Proof checking, strategy extraction, and game simulation "
        "for a cirquent-calculus proof system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify a proof file")
    p.add_argument("proof")

    p = sub.add_parser("extract", help="extract a winning strategy from a proof")
    p.add_argument("proof")
    p.add_argument("--out", required=True)
    p.add_argument("--level", choices=("cirquent", "formula"), default="cirquent")

    p = sub.add_parser("simulate", help="play an extracted strategy against an adversary")
    p.add_argument("subject", help="proof file or extracted strategy file")
    p.add_argument("--adversary", default="silent",
                   help="silent | random | scripted | script:<file>")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--level", choices=("cirquent", "formula"), default=None)
    _add_interp_flags(p)

    p = sub.add_parser("project", help="project a run file")
    p.add_argument("runfile")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--prefix", help="strip this prefix, e.g. 1.")
    group.add_argument("--branch", help="infinite bitstring stem:tail, e.g. 111:1")
    group.add_argument("--cell", type=int, help="oformula index")
    p.add_argument("--coords", default="", help="cell coordinates, e.g. 1,2")

    p = sub.add_parser("demo-separation", help="bounded thread-distinctness demo")
    p.add_argument("--machine", choices=("granter", "copycat"), default="granter")
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--budget", type=int, default=200)

    p = sub.add_parser("play", help="play as the environment against a proof's strategy")
    p.add_argument("proof")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--level", choices=("cirquent", "formula"), default=None)
    _add_interp_flags(p)

    return parser


_DISPATCH = {
    "check": cmd_check,
    "extract": cmd_extract,
    "simulate": cmd_simulate,
    "project": cmd_project,
    "demo-separation": cmd_demo_separation,
    "play": cmd_play,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else USAGE
    try:
        return _DISPATCH[args.command](args)
    except (FormulaError, RunError, CirquentError, GameError,
            rules.ProofError, StrategyError, HarnessError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
