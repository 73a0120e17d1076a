"""Executable game semantics: legality and winner for base and composite games.

A game exposes `legal(run)` (is this finite run a legal position) and
`winner(run)` (total: illegal runs are lost by the offender, the player
whose move ends the shortest illegal prefix).

Every constructor here defines position legality move-locally or through
projections, so prefix closure holds by construction and is checked in
tests rather than enforced at call time.
"""
from __future__ import annotations

from typing import Callable

from .cirquent import Cirquent, is_valid
from .formula import And, AtomRef, Cost, Formula, NegAtom, Or, Pcost, Pst, St
from .runs import (
    BOT,
    TOP,
    InfiniteBitstring,
    Labmove,
    Player,
    Run,
    is_numeral,
    negate_run,
    project_branch,
    project_cell,
    project_prefix,
    split_bit_move,
    split_cell_move,
    split_index_move,
)


class GameError(ValueError):
    """Malformed game description or unusable inputs."""


class Game:
    """Abstract constant game."""

    def legal(self, run: Run) -> bool:
        raise NotImplementedError

    def winner(self, run: Run) -> Player:
        """Total winner function; applies the offender rule to illegal runs."""
        offender = self.offender(run)
        if offender is not None:
            return offender.opponent
        return self.won_legal(run)

    def offender(self, run: Run) -> Player | None:
        """The player whose move ends the shortest illegal prefix, if any."""
        for i in range(1, len(run) + 1):
            if not self.legal(run[:i]):
                return run[i - 1].player
        return None

    def won_legal(self, run: Run) -> Player:
        """Winner of a run assumed legal."""
        raise NotImplementedError


Interpretation = dict[str, Game]


class FiniteGame(Game):
    """A desk-scale game given by an explicit prefix-closed tree with labels."""

    def __init__(self, tree: set[Run], labels: dict[Run, Player]):
        if () not in tree:
            raise GameError("tree must contain the empty run")
        for run in tree:
            if run[:-1] not in tree and run:
                raise GameError(f"tree not prefix-closed at {run}")
            if run not in labels:
                raise GameError(f"missing label for {run}")
        self.tree = frozenset(tree)
        self.labels = dict(labels)

    def legal(self, run: Run) -> bool:
        return run in self.tree

    def won_legal(self, run: Run) -> Player:
        return self.labels[run]

    def moves_after(self, run: Run) -> list[Labmove]:
        """Labmoves extending the given position inside the tree."""
        out = []
        for cand in self.tree:
            if len(cand) == len(run) + 1 and cand[:len(run)] == run:
                out.append(cand[-1])
        return out

    def move_alphabet(self) -> list[str]:
        """All move strings occurring anywhere in the tree."""
        seen: dict[str, None] = {}
        for run in self.tree:
            for lm in run:
                seen.setdefault(lm.move, None)
        return list(seen)


class EnumerationGame(Game):
    """Every run of canonical numeral moves is legal; a predicate picks the
    runs lost by the machine."""

    def __init__(self, loses: Callable[[Run], bool]):
        self.loses = loses

    def legal(self, run: Run) -> bool:
        return all(is_numeral(lm.move) for lm in run)

    def won_legal(self, run: Run) -> Player:
        return BOT if self.loses(run) else TOP


class PermissiveGame(Game):
    """Everything is legal and won by the machine; used for translation
    experiments where only the run matters."""

    def legal(self, run: Run) -> bool:
        return True

    def won_legal(self, run: Run) -> Player:
        return TOP


def make_finite_game(tree: set[Run], labels: dict[Run, Player]) -> Game:
    return FiniteGame(tree, labels)


def make_enumeration_game(loses: Callable[[Run], bool]) -> Game:
    return EnumerationGame(loses)


def parse_finite_game(text: str) -> FiniteGame:
    """Parse the finite-game text format: a `finitegame` header, then one
    line per legal run `<labmoves joined by ;> => T|B` with `()` for the
    empty run."""
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines or lines[0] != "finitegame":
        raise GameError("missing 'finitegame' header")
    tree: set[Run] = set()
    labels: dict[Run, Player] = {}
    for ln in lines[1:]:
        if "=>" not in ln:
            raise GameError(f"missing '=>' in line {ln!r}")
        run_text, _, label_text = ln.partition("=>")
        run_text = run_text.strip()
        label_text = label_text.strip()
        if label_text not in ("T", "B"):
            raise GameError(f"bad winner label {label_text!r}")
        if run_text == "()":
            run: Run = ()
        else:
            items = []
            for item in run_text.split(";"):
                parts = item.split()
                if len(parts) != 2 or parts[0] not in ("T", "B"):
                    raise GameError(f"bad labmove {item!r}")
                items.append(Labmove(TOP if parts[0] == "T" else BOT, parts[1]))
            run = tuple(items)
        tree.add(run)
        labels[run] = TOP if label_text == "T" else BOT
    return FiniteGame(tree, labels)


def render_finite_game(g: FiniteGame) -> str:
    lines = ["finitegame"]
    for run in sorted(g.tree, key=lambda r: (len(r), tuple((lm.player.value, lm.move) for lm in r))):
        run_text = "; ".join(f"{lm.player.value} {lm.move}" for lm in run) if run else "()"
        lines.append(f"{run_text} => {g.labels[run].value}")
    return "\n".join(lines)


# Composite games

class NegGame(Game):
    def __init__(self, base: Game):
        self.base = base

    def legal(self, run: Run) -> bool:
        return self.base.legal(negate_run(run))

    def won_legal(self, run: Run) -> Player:
        return self.base.won_legal(negate_run(run)).opponent


class _ChoicelessPair(Game):
    """Shared shape of parallel conjunction/disjunction: moves carry a
    `1.` or `2.` prefix routing them to one component."""

    conjunctive: bool

    def __init__(self, left: Game, right: Game):
        self.left = left
        self.right = right

    def legal(self, run: Run) -> bool:
        for lm in run:
            split = split_index_move(lm.move)
            if split is None or split[0] not in (1, 2):
                return False
        return self.left.legal(project_prefix(run, "1.")) and self.right.legal(
            project_prefix(run, "2.")
        )

    def won_legal(self, run: Run) -> Player:
        lw = self.left.won_legal(project_prefix(run, "1."))
        rw = self.right.won_legal(project_prefix(run, "2."))
        if self.conjunctive:
            return TOP if lw is TOP and rw is TOP else BOT
        return TOP if lw is TOP or rw is TOP else BOT


class AndGame(_ChoicelessPair):
    conjunctive = True


class OrGame(_ChoicelessPair):
    conjunctive = False


def _touched_copies(run: Run) -> list[int]:
    seen: dict[int, None] = {}
    for lm in run:
        split = split_index_move(lm.move)
        if split is not None:
            seen.setdefault(split[0], None)
    return list(seen)


class _CopyBank(Game):
    """Shared shape of parallel recurrence/corecurrence: copies addressed by
    positive integers, moves `u.rest`.  A finite run touches finitely many
    copies; all untouched copies carry the empty run, so the winner
    quantifier is decided by touched copies plus one empty-run check."""

    conjunctive: bool

    def __init__(self, base: Game):
        self.base = base

    def legal(self, run: Run) -> bool:
        for lm in run:
            if split_index_move(lm.move) is None:
                return False
        return all(
            self.base.legal(project_prefix(run, f"{u}.")) for u in _touched_copies(run)
        )

    def won_legal(self, run: Run) -> Player:
        results = [
            self.base.won_legal(project_prefix(run, f"{u}."))
            for u in _touched_copies(run)
        ]
        results.append(self.base.won_legal(()))
        if self.conjunctive:
            return TOP if all(r is TOP for r in results) else BOT
        return TOP if any(r is TOP for r in results) else BOT


class PstGame(_CopyBank):
    conjunctive = True


class PcostGame(_CopyBank):
    conjunctive = False


def thread_representatives(bitstrings: set[str]) -> list[InfiniteBitstring]:
    """One representative per equivalence class of infinite bitstrings,
    where x and y are equivalent iff the same members of `bitstrings` are
    initial segments of both.

    Walk the prefix trie of the given set; for each node p, the exits
    p0000... and p1000... together cover every class.  Representatives are
    deduplicated by their prefix class.
    """
    nodes = {""}
    for w in bitstrings:
        for i in range(len(w) + 1):
            nodes.add(w[:i])
    candidates = []
    for p in sorted(nodes, key=lambda s: (len(s), s)):
        candidates.append(InfiniteBitstring(p, "0"))
        candidates.append(InfiniteBitstring(p + "1", "0"))
    reps: list[InfiniteBitstring] = []
    seen_classes: set[frozenset[str]] = set()
    for x in candidates:
        cls = frozenset(w for w in bitstrings if x.has_prefix(w))
        if cls not in seen_classes:
            seen_classes.add(cls)
            reps.append(x)
    return reps


class _ThreadBank(Game):
    """Shared shape of branching recurrence/corecurrence: threads addressed
    by infinite bitstrings, moves `w.rest` acting in all threads extending w.
    Winner quantifiers over the continuum of threads are decided on
    representatives of the finitely many classes the run distinguishes."""

    conjunctive: bool

    def __init__(self, base: Game):
        self.base = base

    def _reps(self, run: Run) -> list[InfiniteBitstring]:
        used = set()
        for lm in run:
            split = split_bit_move(lm.move)
            if split is not None:
                used.add(split[0])
        return thread_representatives(used)

    def legal(self, run: Run) -> bool:
        for lm in run:
            if split_bit_move(lm.move) is None:
                return False
        return all(self.base.legal(project_branch(run, x)) for x in self._reps(run))

    def won_legal(self, run: Run) -> Player:
        results = [self.base.won_legal(project_branch(run, x)) for x in self._reps(run)]
        if self.conjunctive:
            return TOP if all(r is TOP for r in results) else BOT
        return TOP if any(r is TOP for r in results) else BOT


class StGame(_ThreadBank):
    conjunctive = True


class CostGame(_ThreadBank):
    conjunctive = False


def interpret_formula(f: Formula, interp: Interpretation) -> Game:
    """Build the compositional game for f under the interpretation."""
    if isinstance(f, AtomRef):
        if f.name not in interp:
            raise GameError(f"unmapped atom {f.name}")
        return interp[f.name]
    if isinstance(f, NegAtom):
        if f.name not in interp:
            raise GameError(f"unmapped atom {f.name}")
        return NegGame(interp[f.name])
    if isinstance(f, And):
        return AndGame(interpret_formula(f.left, interp), interpret_formula(f.right, interp))
    if isinstance(f, Or):
        return OrGame(interpret_formula(f.left, interp), interpret_formula(f.right, interp))
    if isinstance(f, Pst):
        return PstGame(interpret_formula(f.body, interp))
    if isinstance(f, Pcost):
        return PcostGame(interpret_formula(f.body, interp))
    if isinstance(f, St):
        return StGame(interpret_formula(f.body, interp))
    if isinstance(f, Cost):
        return CostGame(interpret_formula(f.body, interp))
    raise GameError(f"cannot interpret {f!r}")


class CirquentGame(Game):
    """The game of a cirquent: moves `a;u1,...,un.rest` name an oformula a
    and one coordinate per overgroup, with u_j = 0 exactly when overgroup j
    does not contain oformula a.  Winner: the machine wins iff for every
    undergroup and every choice of positive coordinates, some oformula in
    that undergroup has a machine-won cell."""

    def __init__(self, c: Cirquent, interp: Interpretation):
        if not is_valid(c):
            raise GameError("invalid cirquent")
        self.cirquent = c
        self.base_games = [interpret_formula(f, interp) for f in c.oformulas]
        self.membership = [
            [a in g for g in c.overgroups] for a in range(1, c.size + 1)
        ]

    def _move_ok(self, move: str) -> bool:
        split = split_cell_move(move)
        if split is None:
            return False
        a, coords, _ = split
        if not 1 <= a <= self.cirquent.size:
            return False
        if len(coords) != len(self.cirquent.overgroups):
            return False
        member = self.membership[a - 1]
        return all((u > 0) == member[j] for j, u in enumerate(coords))

    def _coordinate_candidates(self, run: Run) -> list[tuple[int, ...]]:
        """Positive coordinate vectors covering every equivalence class of
        the winner/legality quantifiers: per coordinate, each used nonzero
        value plus one fresh value."""
        n = len(self.cirquent.overgroups)
        used: list[set[int]] = [set() for _ in range(n)]
        for lm in run:
            split = split_cell_move(lm.move)
            if split is None:
                continue
            _, coords, _ = split
            if len(coords) != n:
                continue
            for j, u in enumerate(coords):
                if u > 0:
                    used[j].add(u)
        per_coord = [sorted(s) + [max(s, default=0) + 1] for s in used]
        vectors: list[tuple[int, ...]] = [()]
        for options in per_coord:
            vectors = [v + (o,) for v in vectors for o in options]
        return vectors

    def legal(self, run: Run) -> bool:
        if not all(self._move_ok(lm.move) for lm in run):
            return False
        for xs in self._coordinate_candidates(run):
            for a in range(1, self.cirquent.size + 1):
                if not self.base_games[a - 1].legal(project_cell(run, a, xs)):
                    return False
        return True

    def won_legal(self, run: Run) -> Player:
        for xs in self._coordinate_candidates(run):
            for under in self.cirquent.undergroups:
                if not any(
                    self.base_games[a - 1].won_legal(project_cell(run, a, xs)) is TOP
                    for a in under
                ):
                    return BOT
        return TOP


def interpret_cirquent(c: Cirquent, interp: Interpretation) -> Game:
    return CirquentGame(c, interp)
