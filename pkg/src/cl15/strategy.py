"""Machine strategies, the machine-vs-environment simulator, and the
rule-by-rule strategy transformers.

A machine strategy is a stateful per-play agent: `next(run, step)` returns
an action, and `spawn()` yields a fresh instance for a new play.  The
transformers wrap an inner strategy for a rule's premise into an outer
strategy for its conclusion by translating moves both ways and keeping an
imagined inner run.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .cirquent import Cirquent, as_clubsuit
from .games import Game
from .runs import (
    BOT,
    TOP,
    Labmove,
    Player,
    Run,
    format_cell_move,
    split_cell_move,
    split_index_move,
)
from . import cl15 as rules


class StrategyError(ValueError):
    """Unusable strategy construction inputs."""


# Actions

@dataclass(frozen=True)
class MakeMove:
    move: str


@dataclass(frozen=True)
class GrantPermission:
    pass


@dataclass(frozen=True)
class Idle:
    pass


Action = MakeMove | GrantPermission | Idle

GRANT = GrantPermission()
IDLE = Idle()


class MachineStrategy:
    """Deterministic stateful agent for one play; spawn() before each play."""

    def spawn(self) -> "MachineStrategy":
        raise NotImplementedError

    def next(self, run: Run, step: int) -> Action:
        raise NotImplementedError


class EnvStrategy:
    """Environment agent: may move only when granted, at most once per grant."""

    def spawn(self) -> "EnvStrategy":
        raise NotImplementedError

    def on_grant(self, run: Run) -> str | None:
        raise NotImplementedError


class IdleStrategy(MachineStrategy):
    def spawn(self) -> "IdleStrategy":
        return IdleStrategy()

    def next(self, run: Run, step: int) -> Action:
        return IDLE


class PureGranter(MachineStrategy):
    def spawn(self) -> "PureGranter":
        return PureGranter()

    def next(self, run: Run, step: int) -> Action:
        return GRANT


class SilentEnv(EnvStrategy):
    def spawn(self) -> "SilentEnv":
        return SilentEnv()

    def on_grant(self, run: Run) -> str | None:
        return None


class ScriptEnv(EnvStrategy):
    """Plays a fixed list of moves, one per grant, then stays silent."""

    def __init__(self, moves: list[str] | tuple[str, ...]):
        self.moves = tuple(moves)
        self._i = 0

    def spawn(self) -> "ScriptEnv":
        return ScriptEnv(self.moves)

    def on_grant(self, run: Run) -> str | None:
        if self._i < len(self.moves):
            mv = self.moves[self._i]
            self._i += 1
            return mv
        return None


# Simulator

@dataclass
class SimResult:
    run: Run
    winner: Player
    grants: int
    steps: int
    first_illegality: str | None
    trace: list[str]

    def render_trace(self) -> str:
        return "\n".join(self.trace + [f"winner: {self.winner.value} grants:{self.grants}"])


def simulate(m: MachineStrategy, e: EnvStrategy, g: Game, budget: int) -> SimResult:
    """Run the machine against the environment for at most `budget` machine
    turns.  Environment moves happen only on explicit grants; the loop stops
    early on machine idling or on the first illegal move (the offender rule
    already fixes the winner).  The winner is computed on the final position."""
    if budget < 1:
        raise StrategyError("budget must be at least 1")
    machine = m.spawn()
    env = e.spawn()
    run: list[Labmove] = []
    trace: list[str] = []
    grants = 0
    steps = 0
    first_illegality: str | None = None
    for step in range(1, budget + 1):
        steps = step
        action = machine.next(tuple(run), step)
        if isinstance(action, MakeMove):
            run.append(Labmove(TOP, action.move))
            trace.append(f"{step} M:move {action.move}")
            if not g.legal(tuple(run)):
                first_illegality = f"machine offender: move {action.move!r} is illegal"
                break
        elif isinstance(action, GrantPermission):
            grants += 1
            trace.append(f"{step} M:grant")
            mv = env.on_grant(tuple(run))
            if mv is not None:
                run.append(Labmove(BOT, mv))
                trace.append(f"{step} E:{mv}")
                if not g.legal(tuple(run)):
                    first_illegality = f"environment offender: move {mv!r} is illegal"
                    break
        else:
            trace.append(f"{step} M:idle")
            break
    final = tuple(run)
    return SimResult(final, g.winner(final), grants, steps, first_illegality, trace)


# Axiom strategy: mirror each environment move between the paired oformulas.

class AxiomStrategy(MachineStrategy):
    """For the 2n-oformula axiom cirquent: answer an environment move in
    oformula a with the same move in its partner (a+1 for odd a, a-1 for
    even a), same coordinates; pending answers are queued FIFO."""

    def __init__(self, n: int):
        if n < 1:
            raise StrategyError("n must be at least 1")
        self.n = n
        self._cursor = 0
        self._queue: list[str] = []

    def spawn(self) -> "AxiomStrategy":
        return AxiomStrategy(self.n)

    def next(self, run: Run, step: int) -> Action:
        for lm in run[self._cursor:]:
            if lm.player is BOT:
                split = split_cell_move(lm.move)
                if split is not None:
                    a, coords, rest = split
                    if 1 <= a <= 2 * self.n:
                        b = a + 1 if a % 2 == 1 else a - 1
                        self._queue.append(format_cell_move(b, coords, rest))
        self._cursor = len(run)
        if self._queue:
            return MakeMove(self._queue.pop(0))
        return GRANT


def axiom_strategy(n: int) -> MachineStrategy:
    return AxiomStrategy(n)


# Translators

@dataclass(frozen=True)
class Translator:
    """Move maps between an outer (conclusion) play and an imagined inner
    (premise) play.  `outer_to_inner` translates environment moves inward
    (None drops the move); `inner_to_outer` translates the inner machine's
    moves outward (None absorbs the move into the imagined run only)."""

    name: str
    outer_to_inner: Callable[[str], str | None]
    inner_to_outer: Callable[[str], str | None]


class TranslatedStrategy(MachineStrategy):
    """Wrap an inner strategy with a move translator.  The wrapper feeds
    translated environment moves to the inner strategy, relays its grants,
    and emits its moves outward through the inverse map."""

    _FUEL = 64

    def __init__(self, inner: MachineStrategy, translator: Translator):
        self.inner_template = inner
        self.translator = translator
        self._inner = inner.spawn()
        self._imagined: list[Labmove] = []
        self._cursor = 0
        self._inner_step = 0

    def spawn(self) -> "TranslatedStrategy":
        return TranslatedStrategy(self.inner_template, self.translator)

    @property
    def imagined_run(self) -> Run:
        return tuple(self._imagined)

    def next(self, run: Run, step: int) -> Action:
        for lm in run[self._cursor:]:
            if lm.player is BOT:
                inner_move = self.translator.outer_to_inner(lm.move)
                if inner_move is not None:
                    self._imagined.append(Labmove(BOT, inner_move))
        self._cursor = len(run)
        for _ in range(self._FUEL):
            self._inner_step += 1
            action = self._inner.next(tuple(self._imagined), self._inner_step)
            if isinstance(action, MakeMove):
                self._imagined.append(Labmove(TOP, action.move))
                outer = self.translator.inner_to_outer(action.move)
                if outer is not None:
                    return MakeMove(outer)
                continue
            if isinstance(action, GrantPermission):
                return GRANT
            return IDLE
        return GRANT


def identity_translator(name: str) -> Translator:
    return Translator(name, lambda m: m, lambda m: m)


# Positive-pair pairing used by the coordinate-compressing translators.

def pair(u1: int, u2: int) -> int:
    """Bijection from pairs of positive integers to positive integers;
    pair(1,1)=1, pair(1,2)=2, pair(2,1)=3."""
    return (u1 + u2 - 2) * (u1 + u2 - 1) // 2 + u1


def unpair(v: int) -> tuple[int, int]:
    """Inverse of pair."""
    if v < 1:
        raise ValueError("unpair needs a positive integer")
    s = 2
    while (s - 1) * s // 2 < v:
        s += 1
    u1 = v - (s - 2) * (s - 1) // 2
    return u1, s - u1


def fold_positives(us: tuple[int, ...]) -> int:
    """Right fold of `pair`; the empty tuple maps to 1."""
    if not us:
        return 1
    if len(us) == 1:
        return us[0]
    return pair(us[0], fold_positives(us[1:]))


def unfold_positives(v: int, n: int) -> tuple[int, ...] | None:
    """Inverse of fold_positives at arity n; None when v is outside the
    image (only possible for n=0 with v != 1)."""
    if n == 0:
        return () if v == 1 else None
    if n == 1:
        return (v,)
    u1, rest = unpair(v)
    tail = unfold_positives(rest, n - 1)
    return None if tail is None else (u1,) + tail


def _swap_index(a: int, i: int) -> int:
    if a == i:
        return i + 1
    if a == i + 1:
        return i
    return a


def _oformula_exchange_translator(i: int) -> Translator:
    def both_ways(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        a, coords, rest = split
        return format_cell_move(_swap_index(a, i), coords, rest)

    return Translator(f"exchange_oformulas@{i}", both_ways, both_ways)


def _overgroup_exchange_translator(i: int) -> Translator:
    def both_ways(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        a, coords, rest = split
        if len(coords) < i + 1:
            return None
        cs = list(coords)
        cs[i - 1], cs[i] = cs[i], cs[i - 1]
        return format_cell_move(a, tuple(cs), rest)

    return Translator(f"exchange_overs@{i}", both_ways, both_ways)


def _weakening_translator(conclusion: Cirquent, under: int, oformula: int) -> Translator:
    _, deleted_of, deleted_overs = rules.premise_of_weakening(conclusion, under, oformula)
    if deleted_of is None:
        return identity_translator(f"weakening@{under},{oformula}")
    d = deleted_of
    dropped = set(deleted_overs)

    def outer_to_inner(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        a, coords, rest = split
        if a == d:
            return None
        a2 = a - 1 if a > d else a
        coords2 = tuple(u for j, u in enumerate(coords, start=1) if j not in dropped)
        return format_cell_move(a2, coords2, rest)

    def inner_to_outer(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        a, coords, rest = split
        a2 = a + 1 if a >= d else a
        cs = list(coords)
        for j in sorted(dropped):
            cs.insert(j - 1, 0)
        return format_cell_move(a2, tuple(cs), rest)

    return Translator(f"weakening@{under},{oformula}", outer_to_inner, inner_to_outer)


def _contraction_translator(a: int) -> Translator:
    def outer_to_inner(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        c, coords, rest = split
        if c != a:
            return format_cell_move(c + 1 if c > a else c, coords, rest)
        payload = split_index_move(rest)
        if payload is None:
            return None
        k, tail = payload
        if k % 2 == 1:
            return format_cell_move(a, coords, f"{(k + 1) // 2}.{tail}")
        return format_cell_move(a + 1, coords, f"{k // 2}.{tail}")

    def inner_to_outer(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        c, coords, rest = split
        if c not in (a, a + 1):
            return format_cell_move(c - 1 if c > a + 1 else c, coords, rest)
        payload = split_index_move(rest)
        if payload is None:
            return None
        k, tail = payload
        outer_k = 2 * k - 1 if c == a else 2 * k
        return format_cell_move(a, coords, f"{outer_k}.{tail}")

    return Translator(f"contraction@{a}", outer_to_inner, inner_to_outer)


def _overgroup_duplication_translator(j: int) -> Translator:
    def outer_to_inner(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        a, coords, rest = split
        if len(coords) < j + 1:
            return None
        u1, u2 = coords[j - 1], coords[j]
        if u1 == 0 and u2 == 0:
            merged = 0
        elif u1 > 0 and u2 > 0:
            merged = pair(u1, u2)
        else:
            return None
        return format_cell_move(a, coords[:j - 1] + (merged,) + coords[j + 1:], rest)

    def inner_to_outer(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        a, coords, rest = split
        if len(coords) < j:
            return None
        u = coords[j - 1]
        expanded = (0, 0) if u == 0 else unpair(u)
        return format_cell_move(a, coords[:j - 1] + expanded + coords[j:], rest)

    return Translator(f"dup_over@{j}", outer_to_inner, inner_to_outer)


def _merging_translator(premise: Cirquent, j: int) -> Translator:
    in_j = premise.overgroups[j - 1]
    in_j1 = premise.overgroups[j]

    def outer_to_inner(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        a, coords, rest = split
        if len(coords) < j:
            return None
        v = coords[j - 1]
        member = a in in_j or a in in_j1
        if (v > 0) != member:
            return None
        if a in in_j and a in in_j1:
            expanded = unpair(v)
        elif a in in_j:
            expanded = (v, 0)
        elif a in in_j1:
            expanded = (0, v)
        else:
            expanded = (0, 0)
        return format_cell_move(a, coords[:j - 1] + expanded + coords[j:], rest)

    def inner_to_outer(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        a, coords, rest = split
        if len(coords) < j + 1:
            return None
        v1, v2 = coords[j - 1], coords[j]
        if (v1 > 0) != (a in in_j) or (v2 > 0) != (a in in_j1):
            return None
        if a in in_j and a in in_j1:
            merged = pair(v1, v2)
        elif a in in_j:
            merged = v1
        elif a in in_j1:
            merged = v2
        else:
            merged = 0
        return format_cell_move(a, coords[:j - 1] + (merged,) + coords[j + 1:], rest)

    return Translator(f"merging@{j}", outer_to_inner, inner_to_outer)


def _binary_intro_translator(a: int, kind: str) -> Translator:
    def outer_to_inner(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        c, coords, rest = split
        if c != a:
            return format_cell_move(c + 1 if c > a else c, coords, rest)
        payload = split_index_move(rest)
        if payload is None or payload[0] not in (1, 2):
            return None
        i, tail = payload
        return format_cell_move(a if i == 1 else a + 1, coords, tail)

    def inner_to_outer(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        c, coords, rest = split
        if c == a:
            return format_cell_move(a, coords, f"1.{rest}")
        if c == a + 1:
            return format_cell_move(a, coords, f"2.{rest}")
        return format_cell_move(c - 1 if c > a + 1 else c, coords, rest)

    return Translator(f"{kind}@{a}", outer_to_inner, inner_to_outer)


def _pst_intro_translator(a: int, j: int) -> Translator:
    def outer_to_inner(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        c, coords, rest = split
        if c != a:
            coords2 = coords[:j - 1] + (0,) + coords[j - 1:]
            return format_cell_move(c, coords2, rest)
        payload = split_index_move(rest)
        if payload is None:
            return None
        u, tail = payload
        coords2 = coords[:j - 1] + (u,) + coords[j - 1:]
        return format_cell_move(a, coords2, tail)

    def inner_to_outer(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        c, coords, rest = split
        if len(coords) < j:
            return None
        u = coords[j - 1]
        coords2 = coords[:j - 1] + coords[j:]
        if c != a:
            return format_cell_move(c, coords2, rest) if u == 0 else None
        if u < 1:
            return None
        return format_cell_move(a, coords2, f"{u}.{rest}")

    return Translator(f"pst@{a},{j}", outer_to_inner, inner_to_outer)


def _pcost_intro_translator(a: int, add_over: frozenset[int]) -> Translator:
    positions = tuple(sorted(add_over))
    n = len(positions)

    def outer_to_inner(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        c, coords, rest = split
        if c != a:
            return move
        if positions and len(coords) < positions[-1]:
            return None
        if any(coords[p - 1] != 0 for p in positions):
            return None
        payload = split_index_move(rest)
        if payload is None:
            return None
        v, tail = payload
        us = unfold_positives(v, n)
        if us is None:
            return None
        cs = list(coords)
        for k, p in enumerate(positions):
            cs[p - 1] = us[k]
        return format_cell_move(a, tuple(cs), tail)

    def inner_to_outer(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        c, coords, rest = split
        if c != a:
            return move
        us = tuple(coords[p - 1] for p in positions if p <= len(coords))
        if len(us) != n or any(u < 1 for u in us):
            return None
        v = fold_positives(us)
        cs = list(coords)
        for p in positions:
            cs[p - 1] = 0
        return format_cell_move(a, tuple(cs), f"{v}.{rest}")

    return Translator(f"pcost@{a}", outer_to_inner, inner_to_outer)


def make_translator(rule: rules.RuleInstance, premise: Cirquent, conclusion: Cirquent) -> Translator:
    """The move translator for one verified rule application."""
    if isinstance(rule, rules.OformulaExchange):
        return _oformula_exchange_translator(rule.pos)
    if isinstance(rule, rules.UndergroupExchange):
        return identity_translator(f"exchange_unders@{rule.pos}")
    if isinstance(rule, rules.OvergroupExchange):
        return _overgroup_exchange_translator(rule.pos)
    if isinstance(rule, rules.UndergroupDuplication):
        return identity_translator(f"dup_under@{rule.pos}")
    if isinstance(rule, rules.OvergroupDuplication):
        return _overgroup_duplication_translator(rule.pos)
    if isinstance(rule, rules.Merging):
        return _merging_translator(premise, rule.over)
    if isinstance(rule, rules.Weakening):
        return _weakening_translator(conclusion, rule.under, rule.oformula)
    if isinstance(rule, rules.Contraction):
        return _contraction_translator(rule.oformula)
    if isinstance(rule, rules.OrIntro):
        return _binary_intro_translator(rule.oformula, "or")
    if isinstance(rule, rules.AndIntro):
        return _binary_intro_translator(rule.oformula, "and")
    if isinstance(rule, rules.PstIntro):
        positions = rules.pst_positions(premise, conclusion, rule.oformula)
        if not positions:
            raise StrategyError("rule/cirquent mismatch for pst introduction")
        return _pst_intro_translator(rule.oformula, positions[0])
    if isinstance(rule, rules.PcostIntro):
        return _pcost_intro_translator(rule.oformula, rule.add_over)
    raise StrategyError(f"no translator for rule {rule!r}")


def transform_strategy(
    rule: rules.RuleInstance,
    premise: Cirquent,
    conclusion: Cirquent,
    inner: MachineStrategy,
) -> MachineStrategy:
    """Wrap a strategy for the premise game into one for the conclusion game."""
    if rules.check_step(premise, conclusion, rule) is not None:
        raise StrategyError("rule application does not check")
    return TranslatedStrategy(inner, make_translator(rule, premise, conclusion))


def declubsuit_translator() -> Translator:
    """Between the one-oformula cirquent game (inner) and the
    parallel-recurrence game over the same formula (outer):
    outer `u.rest` is inner `1;u.rest`."""

    def outer_to_inner(move: str) -> str | None:
        payload = split_index_move(move)
        if payload is None:
            return None
        u, rest = payload
        return format_cell_move(1, (u,), rest)

    def inner_to_outer(move: str) -> str | None:
        split = split_cell_move(move)
        if split is None:
            return None
        a, coords, rest = split
        if a != 1 or len(coords) != 1 or coords[0] < 1:
            return None
        return f"{coords[0]}.{rest}"

    return Translator("declubsuit", outer_to_inner, inner_to_outer)


def declubsuit(m: MachineStrategy) -> MachineStrategy:
    return TranslatedStrategy(m, declubsuit_translator())


def depst_translator() -> Translator:
    """Between the parallel-recurrence game (inner) and the bare formula
    game (outer), pinning copy 1: real moves are copy-1 moves; inner machine
    moves in other copies stay imaginary."""

    def outer_to_inner(move: str) -> str:
        return f"1.{move}"

    def inner_to_outer(move: str) -> str | None:
        payload = split_index_move(move)
        if payload is None:
            return None
        u, rest = payload
        return rest if u == 1 else None

    return Translator("depst", outer_to_inner, inner_to_outer)


def depst(m: MachineStrategy) -> MachineStrategy:
    return TranslatedStrategy(m, depst_translator())


def extract_solution(proof: rules.Proof, formula_level: bool = False) -> MachineStrategy:
    """Fold the axiom strategy through the rule transformers along a
    verified proof.  With formula_level=True (final cirquent must be a
    one-oformula clubsuit), return the strategy for the bare formula game."""
    report = rules.verify_proof(proof)
    if report is not None:
        k, violation = report
        raise StrategyError(f"proof does not verify at step {k}: {violation.reason}")
    axiom_rule = proof.steps[0].rule
    assert isinstance(axiom_rule, rules.Axiom)
    strat: MachineStrategy = AxiomStrategy(len(axiom_rule.formulas))
    for k in range(1, len(proof.steps)):
        strat = transform_strategy(
            proof.steps[k].rule,
            proof.steps[k - 1].cirquent,
            proof.steps[k].cirquent,
            strat,
        )
    if formula_level:
        if as_clubsuit(proof.steps[-1].cirquent) is None:
            raise StrategyError("final cirquent is not a one-oformula clubsuit")
        strat = depst(declubsuit(strat))
    return strat
