"""Certification harness: fixed policies versus adversary universes.

A certification run plays one strategy to completion against every line
of an adversary universe and adjudicates each finished board. Exhaustive
universes enumerate all legal adversary moves (cyclic arenas only, with
leaf adjudication batched through numpy); random universes draw
reproducible lines from a seeded value sampler; scripted universes replay
fixed adversary move lists. Reports are deterministic for a given
(strategy, arena, universe) triple, which is what lets their JSON forms
be compared byte-for-byte across runs.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import IllegalMove, NotApplicable, ResourceLimit
from .game import (
    CYCLIC,
    VALUED,
    Arena,
    GameState,
    Move,
    adjudicate_cyclic,
    adjudicate_valued,
    apply_move,
    arena_to_json,
    check_value,
    value_to_wire,
    zero_excluded_at,
)
from .padic import ord_p
from .solver import DEFAULT_BUDGET, solve_table
from .strat_valued import NoraCubic, NoraHighdeg, NoraQuad, NoraQuartic, WandaIntegral
from .zring import Player, classify

EXHAUSTIVE = "exhaustive"
SCRIPTED = "scripted"
RANDOM = "random"


@dataclass(frozen=True)
class AdversaryUniverse:
    """What the opponent is allowed to do during a certification run."""

    kind: str
    scripts: tuple = ()      # SCRIPTED: tuples of adversary (index, value) moves
    seed: int = 0            # RANDOM
    trials: int = 0
    ord_bound: int = 6       # RANDOM valued sampler: ord_p in [-B, B]
    height_bound: int = 10**4

    def __post_init__(self):
        if self.kind not in (EXHAUSTIVE, SCRIPTED, RANDOM):
            raise ValueError(f"unknown universe kind {self.kind!r}")
        if self.kind == RANDOM and self.trials < 1:
            raise ValueError("random universes need at least one trial")
        if self.kind == SCRIPTED and not self.scripts:
            raise ValueError("scripted universes need at least one script")

    @staticmethod
    def exhaustive() -> "AdversaryUniverse":
        return AdversaryUniverse(EXHAUSTIVE)

    @staticmethod
    def scripted(lines) -> "AdversaryUniverse":
        return AdversaryUniverse(
            SCRIPTED, scripts=tuple(tuple(tuple(mv) for mv in line) for line in lines))

    @staticmethod
    def random_lines(seed: int, trials: int, ord_bound: int = 6,
                     height_bound: int = 10**4) -> "AdversaryUniverse":
        return AdversaryUniverse(RANDOM, seed=seed, trials=trials,
                                 ord_bound=ord_bound, height_bound=height_bound)

    def to_json(self) -> dict:
        if self.kind == EXHAUSTIVE:
            return {"kind": self.kind}
        if self.kind == SCRIPTED:
            return {"kind": self.kind, "lines": len(self.scripts)}
        return {"kind": self.kind, "seed": self.seed, "trials": self.trials,
                "ord_bound": self.ord_bound, "height_bound": self.height_bound}


@dataclass(frozen=True)
class CertificationReport:
    """Outcome of one certification run.

    counterexample, when present, is the full move line (both players,
    in play order) of the first lost game after shrinking; wall_time is
    informational and deliberately left out of the canonical JSON.
    """

    strategy_id: str
    arena: Arena
    universe: AdversaryUniverse
    games: int
    wins: int
    counterexample: tuple | None
    wall_time: float

    def __post_init__(self):
        assert self.wins <= self.games
        assert (self.counterexample is None) == (self.wins == self.games)

    @property
    def all_won(self) -> bool:
        return self.wins == self.games

    def to_json(self) -> dict:
        cex = None
        if self.counterexample is not None:
            cex = [[i, value_to_wire(self.arena, v)]
                   for i, v in self.counterexample]
        return {
            "strategy": self.strategy_id,
            "arena": arena_to_json(self.arena),
            "universe": self.universe.to_json(),
            "games": self.games,
            "wins": self.wins,
            "all_won": self.all_won,
            "counterexample": cex,
        }


# ---------------------------------------------------------------------------
# Line playback


def _winner(state: GameState) -> Player:
    if state.arena.kind == CYCLIC:
        return adjudicate_cyclic(state)[0]
    return adjudicate_valued(state)[0]


def _play_with_feed(strategy, arena, role, first, adversary_moves):
    """Run one game, the adversary reading moves off a list.

    Returns (lost, full_move_line); raises StopIteration or IllegalMove
    when the feed does not fit the line the strategy steers into.
    """
    state = GameState.fresh(arena, first)
    memory = strategy.initial_memory(arena, role, first)
    feed = iter(adversary_moves)
    line = []
    while not state.finished:
        if state.mover is role:
            mv, memory = strategy.next_move(state, memory)
        else:
            mv = next(feed)
        line.append((mv[0], mv[1]))
        state = apply_move(state, Move(*mv))
    return _winner(state) is not role, tuple(line)


def _shrink_adversary(strategy, arena, role, first, adversary_moves):
    """Greedy per-move simplification (value -> 0, then 1) keeping the loss."""
    moves = [tuple(mv) for mv in adversary_moves]
    for k in range(len(moves)):
        index = moves[k][0]
        for cand in (0, 1):
            if cand == moves[k][1]:
                continue
            if cand == 0 and zero_excluded_at(arena, index):
                continue
            trial = moves[:k] + [(index, cand)] + moves[k + 1:]
            try:
                lost, _ = _play_with_feed(strategy, arena, role, first, trial)
            except (IllegalMove, StopIteration, NotApplicable):
                continue
            if lost:
                moves[k] = (index, cand)
                break
    lost, line = _play_with_feed(strategy, arena, role, first, moves)
    assert lost, "shrinking must preserve the loss"
    return line


# ---------------------------------------------------------------------------
# Exhaustive universes (cyclic arenas)


class _Board:
    """GameState-shaped mutable view; what strategies read during walks."""

    __slots__ = ("arena", "first", "_slots", "count")

    def __init__(self, arena: Arena, first: Player):
        self.arena = arena
        self.first = first
        self._slots = [None] * (arena.degree + 1)
        self.count = 0

    @property
    def slots(self) -> tuple:
        return tuple(self._slots)

    @property
    def set_count(self) -> int:
        return self.count

    @property
    def finished(self) -> bool:
        return self.count == self.arena.degree + 1

    @property
    def mover(self):
        if self.finished:
            return None
        return self.first if self.count % 2 == 0 else self.first.other


def _value_range(arena: Arena, index: int) -> range:
    if zero_excluded_at(arena, index):
        return range(1, arena.modulus)
    return range(arena.modulus)


def _certify_exhaustive(strategy, arena, role, first, budget):
    assert arena.kind == CYCLIC, "exhaustive universes need a finite board"
    n, d = arena.modulus, arena.degree
    powers = np.array([[pow(x, j, n) for x in range(n)] for j in range(d + 1)],
                      dtype=np.int64)
    board = _Board(arena, first)
    buffer: list = []
    tally = {"games": 0, "wins": 0, "lost": False}

    def flush():
        if not buffer:
            return
        coeffs = np.array(buffer, dtype=np.int64)
        buffer.clear()
        wanda = ((coeffs @ powers) % n == 0).any(axis=1)
        won = int(wanda.sum()) if role is Player.WANDA \
            else len(wanda) - int(wanda.sum())
        tally["wins"] += won
        if won < len(wanda):
            tally["lost"] = True

    def walk(memory):
        if board.finished:
            tally["games"] += 1
            if tally["games"] > budget:
                raise ResourceLimit(
                    f"exhaustive universe exceeds {budget} games")
            buffer.append(board.slots)
            if len(buffer) >= 1 << 15:
                flush()
            return
        if board.mover is role:
            (i, v), mem = strategy.next_move(board, memory)
            v = check_value(arena, i, v)
            assert board._slots[i] is None, "strategy replayed a filled slot"
            board._slots[i] = v
            board.count += 1
            walk(mem)
            board._slots[i] = None
            board.count -= 1
            return
        for i in range(d + 1):
            if board._slots[i] is not None:
                continue
            for v in _value_range(arena, i):
                board._slots[i] = v
                board.count += 1
                walk(memory)
                board._slots[i] = None
                board.count -= 1

    walk(strategy.initial_memory(arena, role, first))
    flush()
    counterexample = None
    if tally["lost"]:
        adv_line = _first_losing_line(strategy, arena, role, first)
        counterexample = _shrink_adversary(strategy, arena, role, first, adv_line)
    return tally["games"], tally["wins"], counterexample


class _Loss(Exception):
    def __init__(self, adversary_moves):
        super().__init__("counterexample found")
        self.adversary_moves = adversary_moves


def _first_losing_line(strategy, arena, role, first):
    """DFS replay that stops at the first adversary line the strategy loses."""
    board = _Board(arena, first)
    adv: list = []

    def walk(memory):
        if board.finished:
            coeffs = board.slots
            n = arena.modulus
            has_root = any(
                sum(c * pow(x, j, n) for j, c in enumerate(coeffs)) % n == 0
                for x in range(n))
            winner = Player.WANDA if has_root else Player.NORA
            if winner is not role:
                raise _Loss(tuple(adv))
            return
        if board.mover is role:
            (i, v), mem = strategy.next_move(board, memory)
            v = check_value(arena, i, v)
            board._slots[i] = v
            board.count += 1
            walk(mem)
            board._slots[i] = None
            board.count -= 1
            return
        for i in range(arena.degree + 1):
            if board._slots[i] is not None:
                continue
            for v in _value_range(arena, i):
                board._slots[i] = v
                board.count += 1
                adv.append((i, v))
                walk(memory)
                adv.pop()
                board._slots[i] = None
                board.count -= 1

    try:
        walk(strategy.initial_memory(arena, role, first))
    except _Loss as loss:
        return loss.adversary_moves
    raise AssertionError("batched pass saw a loss the replay cannot find")


# ---------------------------------------------------------------------------
# Random universes


def _sample_rational(rng, p: int, lo: int, hi: int, height: int) -> Fraction:
    q = Fraction(rng.choice([1, -1]) * rng.randint(1, height),
                 rng.randint(1, height))
    return q * Fraction(p) ** (rng.randint(lo, hi) - ord_p(q, p))


def _random_adversary_move(rng, arena: Arena, state, universe) -> tuple:
    opens = [i for i, v in enumerate(state.slots) if v is None]
    i = rng.choice(opens)
    if arena.kind == CYCLIC:
        return (i, rng.choice(list(_value_range(arena, i))))
    d, p = arena.degree, arena.p
    if i not in (0, d) and rng.random() < 0.15:
        return (i, Fraction(0))
    if d == 3 and i in (0, 3):
        opposite = state.slots[3 - i]
        if opposite not in (None, 0) and rng.random() < 0.8:
            # random rationals are almost never cubes; force that branch
            # (integer c keeps the value legal on integral arenas)
            c = Fraction(rng.randint(1, 9)) if arena.integral \
                else Fraction(rng.randint(1, 9), rng.randint(1, 9))
            return (i, Fraction(opposite) * c ** 3)
    lo = 0 if arena.integral else -universe.ord_bound
    return (i, _sample_rational(rng, p, lo, universe.ord_bound,
                                universe.height_bound))


def _certify_random(strategy, arena, role, first, universe):
    rng = random.Random(universe.seed)
    wins = 0
    counterexample = None
    for _ in range(universe.trials):
        state = GameState.fresh(arena, first)
        memory = strategy.initial_memory(arena, role, first)
        adv: list = []
        while not state.finished:
            if state.mover is role:
                mv, memory = strategy.next_move(state, memory)
            else:
                mv = _random_adversary_move(rng, arena, state, universe)
                adv.append(mv)
            state = apply_move(state, Move(*mv))
        if _winner(state) is role:
            wins += 1
        elif counterexample is None:
            counterexample = _shrink_adversary(strategy, arena, role, first, adv)
    return universe.trials, wins, counterexample


def _certify_scripted(strategy, arena, role, first, universe):
    wins = 0
    counterexample = None
    for script in universe.scripts:
        lost, _ = _play_with_feed(strategy, arena, role, first, script)
        if not lost:
            wins += 1
        elif counterexample is None:
            counterexample = _shrink_adversary(strategy, arena, role, first, script)
    return len(universe.scripts), wins, counterexample


def certify_strategy(strategy, arena: Arena, role: Player, first: Player,
                     universe: AdversaryUniverse,
                     budget: int = 10**7) -> CertificationReport:
    """Play every universe line to completion and adjudicate each one.

    When an exhaustive run comes back clean and the arena fits the solver
    budget, the solver's game value is cross-asserted to agree that the
    certified seat wins.
    """
    if not strategy.applicable(arena, role, first):
        raise NotApplicable(
            f"{strategy.id} is not applicable as {role} (first: {first})")
    if universe.kind == EXHAUSTIVE and arena.kind != CYCLIC:
        raise ValueError("exhaustive universes need a finite board")
    start = time.perf_counter()
    if universe.kind == EXHAUSTIVE:
        games, wins, cex = _certify_exhaustive(strategy, arena, role, first, budget)
        if cex is None:
            try:
                assert solve_table(arena.modulus, arena.degree,
                                   allow_zero_leading=arena.allow_zero_leading
                                   )[first] is role
            except ResourceLimit:
                pass
    elif universe.kind == RANDOM:
        games, wins, cex = _certify_random(strategy, arena, role, first, universe)
    else:
        games, wins, cex = _certify_scripted(strategy, arena, role, first, universe)
    return CertificationReport(strategy.id, arena, universe, games, wins, cex,
                               wall_time=time.perf_counter() - start)


# ---------------------------------------------------------------------------
# Prediction-vs-solver table


DEFAULT_GRID = ((4, 1), (4, 2), (4, 3), (6, 2), (6, 3), (8, 2), (8, 3),
                (9, 2), (9, 3), (10, 3), (12, 2), (12, 3), (14, 3), (15, 3),
                (16, 3), (16, 4))


def theorem1_table(grid=DEFAULT_GRID, budget: int = DEFAULT_BUDGET) -> list:
    """Classification prediction vs solved value, both first-player seats.

    Budget misses are recorded per cell instead of aborting the table.
    """
    rows = []
    for n, d in grid:
        try:
            solved = solve_table(n, d, budget=budget)
        except ResourceLimit as exc:
            solved = None
            reason = str(exc)
        for first in (Player.NORA, Player.WANDA):
            predicted = classify(n, d, first)
            row = {"n": n, "d": d, "first": str(first),
                   "predicted": str(predicted)}
            if solved is None:
                row.update(solved=None, match=None, error=reason)
            else:
                row.update(solved=str(solved[first]),
                           match=solved[first] is predicted)
            rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Valued-strategy suite: scripted branch coverage plus random trials


F = Fraction


def _quad_lines(p):
    return (((2, 3),), ((0, F(1, p)),))


def _quartic_lines(p):
    return (((4, 1), (2, p)), ((0, 1), (2, p)), ((4, 1), (0, p * p)),
            ((4, 1), (0, p)), ((3, p), (4, 1)))


def _cubic_lines(p):
    return (((3, 1), (0, p ** 3)), ((3, 1), (0, p)), ((2, p), (3, 1)),
            ((1, p), (0, p * p)), ((0, 1), (3, p ** 3)))


def _highdeg_lines(p):
    return (((5, 1), (0, 1), (3, 1)), ((5, 1), (2, 0), (3, 0)),
            ((0, 1), (2, p * p), (3, p)), ((1, p), (3, 1), (5, 1)))


def _integral_lines(p):
    return (((2, 7), (3, 2)), ((1, p), (3, 1)), ((1, 3), (3, p * p)))


# (strategy, primes, degree, integral, role, first, line builder, branch tags)
_VALUED_SUITE = (
    (NoraQuad(), (2, 3, 5, 7), 2, False, Player.NORA, Player.NORA,
     _quad_lines, {"open", "close"}),
    (NoraQuartic(), (2, 3, 5, 7), 4, False, Player.NORA, Player.NORA,
     _quartic_lines,
     {"open", "pin3", "mid_zero", "close_a0", "close_a4",
      "parity_zero", "parity_avoid"}),
    (NoraCubic(), (2, 3, 5, 7), 3, False, Player.NORA, Player.WANDA,
     _cubic_lines,
     {"steer", "newton", "newton_rev", "close_a0", "close_a3",
      "cube", "noncube"}),
    (NoraHighdeg(), (2, 3, 5, 7), 5, False, Player.NORA, Player.WANDA,
     _highdeg_lines,
     {"pin_low", "pin_high", "free", "close_a0", "close_ad", "close_middle"}),
    (WandaIntegral(), (5,), 3, True, Player.WANDA, Player.WANDA,
     _integral_lines, {"open", "unit_a1", "free_mid", "shift"}),
)


def run_scripted_lines(strategy, arena, role, first, scripts) -> dict:
    """Play scripted adversary lines, collecting branch tags and wins."""
    seen: set = set()
    wins = 0
    for script in scripts:
        state = GameState.fresh(arena, first)
        memory = strategy.initial_memory(arena, role, first)
        feed = iter(script)
        while not state.finished:
            if state.mover is role:
                mv, memory = strategy.next_move(state, memory)
                seen.add(memory["branch"])
            else:
                mv = next(feed)
            state = apply_move(state, Move(*mv))
        if _winner(state) is role:
            wins += 1
    return {"lines": len(scripts), "wins": wins, "branches": sorted(seen)}


def valued_certification_suite(config: dict | None = None) -> dict:
    """Branch-tagged scripted lines plus random trials for every policy.

    Scripted lines run at every prime a policy is registered for; each
    policy branch must appear among that prime's tags, and a missing tag
    fails the bundle even when all games were won.
    """
    cfg = {"seed": 1, "trials": 100}
    cfg.update(config or {})
    bundle: dict = {"config": dict(cfg), "strategies": {}, "ok": True}
    for strategy, primes, d, integral, role, first, lines, checklist in _VALUED_SUITE:
        entry: dict = {"scripted": {}, "random": {}}
        good = True
        for p in primes:
            arena = Arena.valued(p, d, integral=integral)
            scripted = run_scripted_lines(strategy, arena, role, first, lines(p))
            scripted["missing"] = sorted(checklist - set(scripted["branches"]))
            entry["scripted"][str(p)] = scripted
            report = certify_strategy(
                strategy, arena, role, first,
                AdversaryUniverse.random_lines(cfg["seed"], cfg["trials"]))
            entry["random"][str(p)] = report.to_json()
            good = good and not scripted["missing"] and report.all_won \
                and scripted["wins"] == scripted["lines"]
        bundle["strategies"][strategy.id] = entry
        bundle["ok"] = bundle["ok"] and good
    return bundle
