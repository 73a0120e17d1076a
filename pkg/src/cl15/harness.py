"""Randomized end-to-end validation: an independent brute-force winner
oracle, random finite interpretations, structure-aware adversaries, trial
loops, and the bounded recurrence-separation demonstration.

The oracle reimplements move parsing and the legality/winner quantifiers
locally (plain string splitting, full product enumeration, no
representative shortcuts) so that agreement with the games module is a
meaningful check.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Union

from .cirquent import Cirquent, as_clubsuit, make_cirquent, render_cirquent
from .formula import (
    And,
    AtomRef,
    Cost,
    Formula,
    NegAtom,
    Or,
    Pcost,
    Pst,
    St,
    parse_formula,
    render_formula,
)
from .games import (
    EnumerationGame,
    FiniteGame,
    Game,
    Interpretation,
    interpret_cirquent,
    interpret_formula,
    thread_representatives,
)
from .runs import (
    BOT,
    TOP,
    InfiniteBitstring,
    Labmove,
    Player,
    Run,
    negate_run,
    project_branch,
    project_prefix,
)
from .strategy import (
    EnvStrategy,
    GRANT,
    GrantPermission,
    MachineStrategy,
    MakeMove,
    ScriptEnv,
    SilentEnv,
    extract_solution,
    simulate,
)
from . import cl15 as rules


class HarnessError(ValueError):
    """Unusable harness inputs."""


# Independent winner oracle.  All parsing below is local on purpose.

def _is_nat(text: str) -> bool:
    return text.isdigit() and (text == "0" or not text.startswith("0"))


def _is_pos(text: str) -> bool:
    return text.isdigit() and not text.startswith("0")


def _flip(run: Run) -> Run:
    return tuple(Labmove(lm.player.opponent, lm.move) for lm in run)


def _keep_tail(run: Run, want: Callable[[str], bool]) -> Run:
    """Keep moves whose head (before the first dot) satisfies `want`,
    stripped to the part after the dot."""
    out = []
    for lm in run:
        head, sep, tail = lm.move.partition(".")
        if sep and tail and want(head):
            out.append(Labmove(lm.player, tail))
    return tuple(out)


def _oracle_legal_formula(f: Formula, interp: Interpretation, run: Run) -> bool:
    if isinstance(f, AtomRef):
        return interp[f.name].legal(run)
    if isinstance(f, NegAtom):
        return interp[f.name].legal(_flip(run))
    if isinstance(f, (And, Or)):
        for lm in run:
            head, sep, tail = lm.move.partition(".")
            if not sep or not tail or head not in ("1", "2"):
                return False
        return _oracle_legal_formula(
            f.left, interp, _keep_tail(run, lambda h: h == "1")
        ) and _oracle_legal_formula(f.right, interp, _keep_tail(run, lambda h: h == "2"))
    if isinstance(f, (Pst, Pcost)):
        used = []
        for lm in run:
            head, sep, tail = lm.move.partition(".")
            if not sep or not tail or not _is_pos(head):
                return False
            used.append(int(head))
        return all(
            _oracle_legal_formula(
                f.body, interp, _keep_tail(run, lambda h, u=u: h == str(u))
            )
            for u in range(1, max(used, default=0) + 2)
        )
    if isinstance(f, (St, Cost)):
        stems = []
        for lm in run:
            head, sep, tail = lm.move.partition(".")
            if not sep or not tail or any(ch not in "01" for ch in head):
                return False
            stems.append(head)
        length = max((len(w) for w in stems), default=0) + 1
        return all(
            _oracle_legal_formula(
                f.body, interp, _keep_tail(run, lambda h, x=x: x.startswith(h))
            )
            for x in ("".join(bits) for bits in itertools.product("01", repeat=length))
        )
    raise HarnessError(f"cannot evaluate {f!r}")


def _oracle_won_formula(f: Formula, interp: Interpretation, run: Run) -> Player:
    """Winner of a run assumed legal, by explicit enumeration."""
    if isinstance(f, AtomRef):
        return interp[f.name].won_legal(run)
    if isinstance(f, NegAtom):
        return interp[f.name].won_legal(_flip(run)).opponent
    if isinstance(f, (And, Or)):
        lw = _oracle_won_formula(f.left, interp, _keep_tail(run, lambda h: h == "1"))
        rw = _oracle_won_formula(f.right, interp, _keep_tail(run, lambda h: h == "2"))
        if isinstance(f, And):
            return TOP if lw is TOP and rw is TOP else BOT
        return TOP if lw is TOP or rw is TOP else BOT
    if isinstance(f, (Pst, Pcost)):
        used = []
        for lm in run:
            head = lm.move.partition(".")[0]
            if _is_pos(head):
                used.append(int(head))
        results = [
            _oracle_won_formula(
                f.body, interp, _keep_tail(run, lambda h, u=u: h == str(u))
            )
            for u in range(1, max(used, default=0) + 2)
        ]
        if isinstance(f, Pst):
            return TOP if all(r is TOP for r in results) else BOT
        return TOP if any(r is TOP for r in results) else BOT
    if isinstance(f, (St, Cost)):
        length = max((len(lm.move.partition(".")[0]) for lm in run), default=0) + 1
        results = [
            _oracle_won_formula(
                f.body, interp, _keep_tail(run, lambda h, x=x: x.startswith(h))
            )
            for x in ("".join(bits) for bits in itertools.product("01", repeat=length))
        ]
        if isinstance(f, St):
            return TOP if all(r is TOP for r in results) else BOT
        return TOP if any(r is TOP for r in results) else BOT
    raise HarnessError(f"cannot evaluate {f!r}")


def _oracle_split_cell(move: str) -> tuple[int, tuple[int, ...], str] | None:
    a_part, sep, rest = move.partition(";")
    if not sep or not _is_pos(a_part):
        return None
    coords_part, sep2, tail = rest.partition(".")
    if not sep2 or not tail:
        return None
    if coords_part == "":
        return int(a_part), (), tail
    parts = coords_part.split(",")
    if not all(_is_nat(p) for p in parts):
        return None
    return int(a_part), tuple(int(p) for p in parts), tail


def _oracle_cell_project(run: Run, a: int, xs: tuple[int, ...]) -> Run:
    out = []
    for lm in run:
        split = _oracle_split_cell(lm.move)
        if split is None:
            continue
        b, coords, tail = split
        if b != a or len(coords) != len(xs):
            continue
        if all(u == 0 or u == x for u, x in zip(coords, xs)):
            out.append(Labmove(lm.player, tail))
    return tuple(out)


def _oracle_cell_vectors(c: Cirquent, run: Run) -> list[tuple[int, ...]]:
    """Full product of per-coordinate ranges 1..max_used+1."""
    n = len(c.overgroups)
    highest = [0] * n
    for lm in run:
        split = _oracle_split_cell(lm.move)
        if split is not None and len(split[1]) == n:
            for j, u in enumerate(split[1]):
                highest[j] = max(highest[j], u)
    ranges = [range(1, h + 2) for h in highest]
    return [tuple(v) for v in itertools.product(*ranges)]


def _oracle_legal_cirquent(c: Cirquent, interp: Interpretation, run: Run) -> bool:
    n = len(c.overgroups)
    for lm in run:
        split = _oracle_split_cell(lm.move)
        if split is None:
            return False
        a, coords, _ = split
        if not 1 <= a <= c.size or len(coords) != n:
            return False
        for j, u in enumerate(coords, start=1):
            if (u > 0) != (a in c.overgroups[j - 1]):
                return False
    for xs in _oracle_cell_vectors(c, run):
        for a in range(1, c.size + 1):
            if not _oracle_legal_formula(
                c.oformulas[a - 1], interp, _oracle_cell_project(run, a, xs)
            ):
                return False
    return True


def _oracle_won_cirquent(c: Cirquent, interp: Interpretation, run: Run) -> Player:
    for xs in _oracle_cell_vectors(c, run):
        for under in c.undergroups:
            if not any(
                _oracle_won_formula(
                    c.oformulas[a - 1], interp, _oracle_cell_project(run, a, xs)
                )
                is TOP
                for a in under
            ):
                return BOT
    return TOP


Subject = Union[Formula, Cirquent]


def brute_force_legal(subject: Subject, interp: Interpretation, run: Run) -> bool:
    if isinstance(subject, Cirquent):
        return _oracle_legal_cirquent(subject, interp, run)
    return _oracle_legal_formula(subject, interp, run)


def brute_force_winner(subject: Subject, interp: Interpretation, run: Run) -> Player:
    """Total winner by explicit enumeration: offender rule first, then the
    winner conditions over the bounded copy/thread/cell space of the run."""
    for i in range(1, len(run) + 1):
        if not brute_force_legal(subject, interp, run[:i]):
            return run[i - 1].player.opponent
    if isinstance(subject, Cirquent):
        return _oracle_won_cirquent(subject, interp, run)
    return _oracle_won_formula(subject, interp, run)


# Random interpretations and structures

_MOVE_POOL = ("1", "2", "3", "4", "5", "6")


def random_finite_game(rng: random.Random, depth: int, branching: int) -> FiniteGame:
    """A random prefix-closed tree (root has at least one child) with random
    winner labels."""
    tree: set[Run] = set()
    labels: dict[Run, Player] = {}

    def grow(run: Run, d: int, min_children: int) -> None:
        tree.add(run)
        labels[run] = TOP if rng.random() < 0.5 else BOT
        if d == 0:
            return
        options = [Labmove(p, m) for m in _MOVE_POOL for p in (TOP, BOT)]
        k = min(rng.randint(min_children, branching), len(options))
        for lm in rng.sample(options, k):
            grow(run + (lm,), d - 1, 0)

    grow((), depth, 1)
    return FiniteGame(tree, labels)


def random_finite_interpretation(
    atoms, depth: int, branching: int, seed: int
) -> Interpretation:
    """Reproducible-by-seed mapping from atom names to random FiniteGames."""
    if depth < 1 or branching < 1:
        raise HarnessError("depth and branching must be at least 1")
    out: Interpretation = {}
    for name in sorted(set(atoms)):
        rng = random.Random(f"{seed}:{name}")
        out[name] = random_finite_game(rng, depth, branching)
    return out


def random_formula(rng: random.Random, atoms=("P", "Q"), depth: int = 3) -> Formula:
    if depth == 0 or rng.random() < 0.25:
        name = atoms[rng.randrange(len(atoms))]
        return NegAtom(name) if rng.random() < 0.5 else AtomRef(name)
    kind = rng.randrange(6)
    if kind == 0:
        return And(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1))
    if kind == 1:
        return Or(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1))
    body = random_formula(rng, atoms, depth - 1)
    return (Pst, Pcost, St, Cost)[kind - 2](body)


def random_cirquent(
    rng: random.Random, atoms=("P", "Q"), max_size: int = 3, depth: int = 2
) -> Cirquent:
    """A random valid cirquent: every oformula in at least one undergroup
    and one overgroup, no empty groups."""
    size = rng.randint(1, max_size)
    oformulas = tuple(random_formula(rng, atoms, depth) for _ in range(size))

    def random_groups(count: int) -> list[set[int]]:
        groups: list[set[int]] = [set() for _ in range(count)]
        for a in range(1, size + 1):
            groups[rng.randrange(count)].add(a)
        for g in groups:
            if not g:
                g.add(rng.randint(1, size))
        for g in groups:
            for a in range(1, size + 1):
                if rng.random() < 0.25:
                    g.add(a)
        return groups

    return make_cirquent(
        oformulas, random_groups(rng.randint(1, 2)), random_groups(rng.randint(1, 2))
    )


# Structure-aware candidate moves

Choose = Callable[[int], int]


def rng_chooser(rng: random.Random) -> Choose:
    return lambda n: rng.randrange(n)


def cycle_chooser(script) -> Choose:
    if not script:
        raise HarnessError("empty chooser script")
    it = itertools.cycle(script)
    return lambda n: next(it) % n


def _candidate_formula_move(f: Formula, interp: Interpretation, choose: Choose) -> str:
    if isinstance(f, (AtomRef, NegAtom)):
        base = interp.get(f.name)
        alphabet = base.move_alphabet() if isinstance(base, FiniteGame) else []
        alphabet = alphabet or ["1", "2", "3"]
        return alphabet[choose(len(alphabet))]
    if isinstance(f, (And, Or)):
        side = choose(2)
        inner = f.left if side == 0 else f.right
        return f"{side + 1}.{_candidate_formula_move(inner, interp, choose)}"
    if isinstance(f, (Pst, Pcost)):
        return f"{choose(3) + 1}.{_candidate_formula_move(f.body, interp, choose)}"
    if isinstance(f, (St, Cost)):
        bits = "".join("01"[choose(2)] for _ in range(choose(3)))
        return f"{bits}.{_candidate_formula_move(f.body, interp, choose)}"
    raise HarnessError(f"cannot build a move for {f!r}")


def _candidate_cirquent_move(c: Cirquent, interp: Interpretation, choose: Choose) -> str:
    a = choose(c.size) + 1
    coords = ",".join(
        str(choose(3) + 1) if a in g else "0" for g in c.overgroups
    )
    return f"{a};{coords}.{_candidate_formula_move(c.oformulas[a - 1], interp, choose)}"


def move_builder(structure: Subject, interp: Interpretation) -> Callable[[Choose], str]:
    """Candidate-move generator for the given formula or cirquent."""
    if isinstance(structure, Cirquent):
        return lambda choose: _candidate_cirquent_move(structure, interp, choose)
    return lambda choose: _candidate_formula_move(structure, interp, choose)


def random_run(
    structure: Subject,
    interp: Interpretation,
    rng: random.Random,
    length: int,
    junk_rate: float = 0.1,
) -> Run:
    """A random run of structure-shaped moves with occasional junk; no
    legality filtering, so both legal and offender runs occur."""
    builder = move_builder(structure, interp)
    junk = ("x", "0", "9.9.9.9", ";", "1;;.m")
    out = []
    for _ in range(length):
        if rng.random() < junk_rate:
            mv = junk[rng.randrange(len(junk))]
        else:
            mv = builder(rng_chooser(rng))
        out.append(Labmove(TOP if rng.random() < 0.5 else BOT, mv))
    return tuple(out)


# Adversaries

class SilentAdversary(SilentEnv):
    name = "silent"

    def spawn(self) -> "SilentAdversary":
        return SilentAdversary()


class ScriptAdversary(ScriptEnv):
    """Plays the given literal moves, one per grant."""

    name = "script"

    def spawn(self) -> "ScriptAdversary":
        return ScriptAdversary(self.moves)


class StructuredAdversary(EnvStrategy):
    """Builds structure-shaped candidate moves, keeps only ones legal in the
    current position (up to `retries` attempts per grant), and quiesces after
    `max_moves` moves or `max_grants` grants."""

    def __init__(
        self,
        game: Game,
        builder: Callable[[Choose], str],
        make_chooser: Callable[[], Choose],
        name: str = "structured",
        max_moves: int = 6,
        max_grants: int = 30,
        retries: int = 8,
    ):
        self.game = game
        self.builder = builder
        self.make_chooser = make_chooser
        self.name = name
        self.max_moves = max_moves
        self.max_grants = max_grants
        self.retries = retries
        self._choose = make_chooser()
        self._moves = 0
        self._grants = 0

    def spawn(self) -> "StructuredAdversary":
        return StructuredAdversary(
            self.game,
            self.builder,
            self.make_chooser,
            self.name,
            self.max_moves,
            self.max_grants,
            self.retries,
        )

    def on_grant(self, run: Run) -> str | None:
        self._grants += 1
        if self._moves >= self.max_moves or self._grants > self.max_grants:
            return None
        for _ in range(self.retries):
            candidate = self.builder(self._choose)
            if self.game.legal(run + (Labmove(BOT, candidate),)):
                self._moves += 1
                return candidate
        return None


class ScriptMachine(MachineStrategy):
    """Plays a fixed list of moves, one per turn, then grants forever.
    A None entry in the script grants permission instead of moving."""

    def __init__(self, moves):
        self.moves = tuple(moves)
        self._i = 0

    def spawn(self) -> "ScriptMachine":
        return ScriptMachine(self.moves)

    def next(self, run: Run, step: int):
        if self._i < len(self.moves):
            mv = self.moves[self._i]
            self._i += 1
            if mv is None:
                return GRANT
            return MakeMove(mv)
        return GRANT


def play_translated(strategy: MachineStrategy, env_moves, budget: int = 60):
    """Drive a translated strategy without legality checks, feeding scripted
    environment moves one per grant; returns (real run, imagined inner run)."""
    m = strategy.spawn()
    queue = list(env_moves)
    run: list[Labmove] = []
    for step in range(1, budget + 1):
        action = m.next(tuple(run), step)
        if isinstance(action, MakeMove):
            run.append(Labmove(TOP, action.move))
        elif isinstance(action, GrantPermission):
            if queue:
                run.append(Labmove(BOT, queue.pop(0)))
        else:
            break
    return tuple(run), m.imagined_run


def random_adversary(
    game: Game, structure: Subject, interp: Interpretation, seed: int, **kwargs
) -> StructuredAdversary:
    return StructuredAdversary(
        game,
        move_builder(structure, interp),
        lambda: rng_chooser(random.Random(seed)),
        name="random",
        **kwargs,
    )


def scripted_adversary(
    game: Game, structure: Subject, interp: Interpretation, script, **kwargs
) -> StructuredAdversary:
    return StructuredAdversary(
        game,
        move_builder(structure, interp),
        lambda: cycle_chooser(tuple(script)),
        name="scripted",
        **kwargs,
    )


# The counterstrategy that distinguishes threads with fresh numbers.

def shortlex_bitstring(i: int) -> str:
    """The i-th finite bitstring (1-based) in shortlex order:
    empty, 0, 1, 00, 01, 10, 11, 000, ..."""
    if i < 1:
        raise HarnessError("index must be at least 1")
    m = i - 1
    length = 0
    while m >= (1 << length):
        m -= 1 << length
        length += 1
    return format(m, "b").zfill(length) if length else ""


@dataclass
class LoopState:
    """Iteration counter (also the shortlex index) and numbers already
    emitted; the freshness scan additionally covers the visible run."""

    iteration: int = 1
    used: set[int] = field(default_factory=set)


class LoopCounterstrategy(EnvStrategy):
    """On the i-th grant (i <= k) plays `2.w.u` where w is the i-th shortlex
    bitstring and u is a fresh positive number (not used by either player in
    any thread or copy so far); silent afterwards."""

    name = "loop"

    def __init__(self, k: int):
        self.k = k
        self.state = LoopState()

    def spawn(self) -> "LoopCounterstrategy":
        return LoopCounterstrategy(self.k)

    def on_grant(self, run: Run) -> str | None:
        st = self.state
        if st.iteration > self.k:
            return None
        seen = set(st.used)
        for lm in run:
            tail = lm.move.rsplit(".", 1)[-1]
            if _is_pos(tail):
                seen.add(int(tail))
        u = max(seen, default=0) + 1
        w = shortlex_bitstring(st.iteration)
        st.used.add(u)
        st.iteration += 1
        return f"2.{w}.{u}"


def loop_counterstrategy(k: int) -> EnvStrategy:
    if k < 1:
        raise HarnessError("k must be at least 1")
    return LoopCounterstrategy(k)


# Trials

@dataclass
class TrialReport:
    description: str
    adversary: str
    budget: int
    run: Run
    winner: Player
    grants: int
    passed: bool
    trial_id: int = 0
    seed: int = 0

    def line(self) -> str:
        ok = "true" if self.passed else "false"
        return f"trial {self.trial_id} seed={self.seed} winner={self.winner.value} pass={ok}"


def run_trial(
    subject,
    interp: Interpretation,
    adversary: EnvStrategy,
    budget: int,
    *,
    game: Game | None = None,
    formula_level: bool = False,
    trial_id: int = 0,
    seed: int = 0,
    description: str = "",
) -> TrialReport:
    """Simulate one play and report.  `subject` is a verified proof (the
    strategy is extracted, the game built from its final cirquent under
    `interp`) or a bare MachineStrategy (then `game` is required)."""
    if isinstance(subject, rules.Proof):
        machine = extract_solution(subject, formula_level=formula_level)
        last = subject.steps[-1].cirquent
        if game is None:
            if formula_level:
                goal = as_clubsuit(last)
                if goal is None:
                    raise HarnessError("final cirquent is not a one-oformula clubsuit")
                game = interpret_formula(goal, interp)
                description = description or render_formula(goal)
            else:
                game = interpret_cirquent(last, interp)
                description = description or render_cirquent(last)
    else:
        machine = subject
        if game is None:
            raise HarnessError("a bare strategy needs an explicit game")
    result = simulate(machine, adversary, game, budget)
    return TrialReport(
        description=description or "custom game",
        adversary=getattr(adversary, "name", type(adversary).__name__),
        budget=budget,
        run=result.run,
        winner=result.winner,
        grants=result.grants,
        passed=result.winner is TOP,
        trial_id=trial_id,
        seed=seed,
    )


def summarize_trials(reports) -> str:
    lines = [r.line() for r in reports]
    passed = sum(1 for r in reports if r.passed)
    lines.append(f"passed {passed}/{len(reports)}")
    return "\n".join(lines)


# Bounded separation demonstration

SEPARATION_TARGET = "?~P \\/ b!P"


class RotatingCopycat(MachineStrategy):
    """Demo machine for the separation target: answers each thread move
    `2.w.u` with `1.c.u` for the next copy c in rotation, and each copy move
    `1.v.u` with `2..u`; grants otherwise."""

    def __init__(self):
        self._cursor = 0
        self._queue: list[str] = []
        self._copy = 0

    def spawn(self) -> "RotatingCopycat":
        return RotatingCopycat()

    def next(self, run: Run, step: int):
        for lm in run[self._cursor:]:
            if lm.player is not BOT:
                continue
            head, sep, tail = lm.move.partition(".")
            if not sep or not tail:
                continue
            if head == "2":
                payload = tail.partition(".")[2]
                if payload:
                    self._copy += 1
                    self._queue.append(f"1.{self._copy}.{payload}")
            elif head == "1":
                payload = tail.partition(".")[2]
                if payload:
                    self._queue.append(f"2..{payload}")
        self._cursor = len(run)
        if self._queue:
            return MakeMove(self._queue.pop(0))
        return GRANT


@dataclass
class SeparationReport:
    k: int
    budget: int
    run: Run
    omega: Run
    gamma: Run
    class_count: int
    distinct: bool
    witness: InfiniteBitstring | None
    winner: Player | None
    conclusive: bool
    lines: list[str]

    def render(self) -> str:
        return "\n".join(self.lines)


def separation_demo(machine: MachineStrategy, k: int, budget: int) -> SeparationReport:
    """Play the machine against loop_counterstrategy(k) on the game of
    `?~P \\/ b!P` with P an enumeration game, then check, at this bound:
    pairwise distinctness of the branching component's thread projections
    over all touched-trie representatives; a witness thread y whose
    projection no copy of the other component negates; and that the final
    position is environment-won under the induced interpretation that makes
    P lose exactly the witness projection."""
    target = parse_formula(SEPARATION_TARGET)
    enumeration: Interpretation = {"P": EnumerationGame(lambda run: False)}
    game = interpret_formula(target, enumeration)
    result = simulate(machine, loop_counterstrategy(k), game, budget)
    delta = result.run
    omega = project_prefix(delta, "1.")
    gamma = project_prefix(delta, "2.")

    stems = set()
    for lm in gamma:
        head, sep, tail = lm.move.partition(".")
        if sep and tail and all(ch in "01" for ch in head):
            stems.add(head)
    reps = thread_representatives(stems)
    projections = [project_branch(gamma, x) for x in reps]
    distinct = len(set(projections)) == len(projections)

    touched = []
    for lm in omega:
        head = lm.move.partition(".")[0]
        if _is_pos(head) and int(head) not in touched:
            touched.append(int(head))

    witness = None
    witness_proj: Run = ()
    for x, proj in zip(reps, projections):
        if not proj:
            continue
        neg = negate_run(proj)
        if all(project_prefix(omega, f"{v}.") != neg for v in touched):
            witness = x
            witness_proj = proj
            break

    winner = None
    if witness is not None:
        induced: Interpretation = {
            "P": EnumerationGame(lambda run, lost=witness_proj: run == lost)
        }
        winner = interpret_formula(target, induced).winner(delta)

    conclusive = distinct and witness is not None and winner is BOT
    lines = [
        f"separation demo: target {SEPARATION_TARGET}  k={k} budget={budget}",
        f"final run: {len(delta)} labmoves "
        f"(branching component: {len(gamma)}, copy component: {len(omega)})",
    ]
    if result.first_illegality:
        lines.append(f"note: {result.first_illegality}")
    lines.append(f"thread classes touched: {len(reps)}")
    lines.append(
        "distinctness over representatives: " + ("ok" if distinct else "FAILED")
    )
    if witness is None:
        lines.append(f"witness thread: none found (inconclusive at bound k={k})")
    else:
        lines.append(f"witness thread: {witness.render()}")
        lines.append(
            "induced interpretation: P loses exactly the witness projection "
            f"({len(witness_proj)} labmoves)"
        )
        lines.append(f"final position winner: {winner.value}")
    lines.append(
        f"verdict: {'separation upheld' if conclusive else 'inconclusive'} at bound k={k}"
    )
    return SeparationReport(
        k=k,
        budget=budget,
        run=delta,
        omega=omega,
        gamma=gamma,
        class_count=len(reps),
        distinct=distinct,
        witness=witness,
        winner=winner,
        conclusive=conclusive,
        lines=lines,
    )
