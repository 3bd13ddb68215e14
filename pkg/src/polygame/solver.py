"""Exhaustive optimal-play solver for cyclic arenas.

Positions are packed base-(N+1): digit i holds the value of a_i, or N for an
unset slot. The solver fills a flat win table by one retrograde sweep:
terminal codes get their adjudication, then states with s set slots are
computed from states with s+1, for s = d .. 0. Every code is touched exactly
once, so the whole table costs about (d+1) * N * (N+1)^d gathers on top of
the terminal evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ResourceLimit
from .game import CYCLIC, GameState, Move
from .zring import Player

DEFAULT_BUDGET = 25_000_000  # packed-space cap; the worst desk-scale arena is 17^6


@dataclass(frozen=True)
class PackedState:
    """Base-(N+1) digit encoding of a partial assignment."""

    code: int
    n: int
    degree: int

    @staticmethod
    def from_slots(slots, n: int) -> "PackedState":
        code = 0
        for i, v in enumerate(slots):
            code += (n if v is None else v) * (n + 1) ** i
        return PackedState(code, n, len(slots) - 1)

    def slots(self) -> tuple:
        out = []
        c = self.code
        for _ in range(self.degree + 1):
            c, digit = divmod(c, self.n + 1)
            out.append(None if digit == self.n else digit)
        return tuple(out)


@dataclass(frozen=True)
class SolveResult:
    winner: Player
    principal_variation: tuple
    states_visited: int


_TABLE_CACHE: dict = {}
_CACHE_LIMIT = 4


def clear_cache() -> None:
    _TABLE_CACHE.clear()


def _check_budget(n: int, d: int, budget: int) -> int:
    size = (n + 1) ** (d + 1)
    if size > budget:
        raise ResourceLimit(
            f"packed space (N+1)^(d+1) = {size} exceeds budget {budget}")
    return size


def _terminal_wins(n: int, d: int) -> np.ndarray:
    """Boolean grid over all complete assignments: does f have a root mod n.

    Shape (n,)*(d+1), axis i = value of a_i. Sums of per-axis contribution
    vectors stay far below int16 range: (d+1)*(n-1)^... each summand is a
    reduced residue < n, so the total is < (d+2)*n.
    """
    shape = (n,) * (d + 1)
    acc = np.zeros(shape, dtype=bool)
    vals = np.arange(n, dtype=np.int16)
    for x in range(n):
        total = np.zeros(shape, dtype=np.int16)
        for i in range(d + 1):
            contrib = (vals * pow(x, i, n)) % n
            shp = [1] * (d + 1)
            shp[i] = n
            total += contrib.reshape(shp)
        acc |= (total % n) == 0
    return acc


def _axis_codes(n: int, positions, values_len: int) -> np.ndarray:
    """Broadcast sum of digit contributions arange(values_len)*P_i per axis."""
    codes = np.zeros((values_len,) * len(positions), dtype=np.int64)
    vals = np.arange(values_len, dtype=np.int64)
    for axis, pos in enumerate(positions):
        shp = [1] * len(positions)
        shp[axis] = values_len
        codes += (vals * (n + 1) ** pos).reshape(shp)
    return codes


def _legal_values(n: int, d: int, index: int, allow_zero_leading: bool) -> range:
    if index == 0 or (index == d and not allow_zero_leading):
        return range(1, n)
    return range(n)


def build_table(n: int, d: int, first: Player, allow_zero_leading: bool = False,
                budget: int = DEFAULT_BUDGET,
                terminal: np.ndarray | None = None) -> np.ndarray:
    """Win table over all packed codes: entry is 1 iff Wanda wins the position.

    Codes containing value-illegal digits (a zero extreme when the flag is
    off) get filled too but are never gathered from, since child values range
    over legal moves only; their entries are meaningless.
    """
    size = _check_budget(n, d, budget)
    key = (n, d, first, allow_zero_leading)
    if key in _TABLE_CACHE:
        return _TABLE_CACHE[key]
    win = np.zeros(size, dtype=np.uint8)

    if terminal is None:
        terminal = _terminal_wins(n, d)
    base = _axis_codes(n, range(d), n)  # codes of digits 0..d-1
    top = (n + 1) ** d
    for v in range(n):
        win[base + v * top] = terminal[..., v]

    all_pos = tuple(range(d + 1))
    for s in range(d, -1, -1):
        mover = first if s % 2 == 0 else first.other
        wanda_moves = mover is Player.WANDA
        for subset in combinations(all_pos, s):
            open_pos = [i for i in all_pos if i not in subset]
            const = sum(n * (n + 1) ** i for i in open_pos)
            codes = (_axis_codes(n, subset, n) + const).ravel()
            acc = None
            for j in open_pos:
                pj = (n + 1) ** j
                for v in _legal_values(n, d, j, allow_zero_leading):
                    child = win[codes + (v - n) * pj]
                    if acc is None:
                        acc = child.copy()
                    elif wanda_moves:
                        np.maximum(acc, child, out=acc)
                    else:
                        np.minimum(acc, child, out=acc)
            win[codes] = acc

    if len(_TABLE_CACHE) >= _CACHE_LIMIT:
        _TABLE_CACHE.pop(next(iter(_TABLE_CACHE)))
    _TABLE_CACHE[key] = win
    return win


def _state_key(state: GameState):
    assert state.arena.kind == CYCLIC, "solver covers cyclic arenas only"
    return (state.arena.modulus, state.arena.degree, state.first,
            state.arena.allow_zero_leading)


def solve(state: GameState, budget: int = DEFAULT_BUDGET) -> SolveResult:
    """Game value of a position plus a principal variation under optimal play.

    states_visited reports the packed-space size (N+1)^(d+1): the retrograde
    sweep evaluates every packed code exactly once regardless of the query
    position.
    """
    n, d, first, flag = _state_key(state)
    table = build_table(n, d, first, flag, budget)
    code = PackedState.from_slots(state.slots, n).code
    winner = Player.WANDA if table[code] else Player.NORA

    pv = []
    slots = list(state.slots)
    set_count = state.set_count
    while set_count <= d:
        move = _best_from(table, n, d, first, flag, slots, set_count)
        pv.append(move)
        slots[move.index] = move.value
        set_count += 1
    return SolveResult(winner, tuple(pv), states_visited=(n + 1) ** (d + 1))


def _best_from(table, n, d, first, flag, slots, set_count) -> Move:
    code = PackedState.from_slots(slots, n).code
    want = table[code]
    for j in range(d + 1):
        if slots[j] is not None:
            continue
        pj = (n + 1) ** j
        for v in _legal_values(n, d, j, flag):
            if table[code + (v - n) * pj] == want:
                return Move(j, v)
    raise AssertionError("minimax table is inconsistent")  # pragma: no cover


def best_move(state: GameState, budget: int = DEFAULT_BUDGET) -> Move:
    """A value-preserving move; ties break on smallest index, then value."""
    n, d, first, flag = _state_key(state)
    table = build_table(n, d, first, flag, budget)
    return _best_from(table, n, d, first, flag, list(state.slots),
                      state.set_count)


def solve_table(n: int, d: int, budget: int = DEFAULT_BUDGET,
                allow_zero_leading: bool = False) -> dict:
    """Fresh-game winners for both first-player assignments.

    The terminal adjudication grid is shared between the two sweeps.
    """
    _check_budget(n, d, budget)
    terminal = _terminal_wins(n, d)
    out = {}
    fresh = sum(n * (n + 1) ** i for i in range(d + 1))
    for first in (Player.NORA, Player.WANDA):
        table = build_table(n, d, first, allow_zero_leading, budget,
                            terminal=terminal)
        out[first] = Player.WANDA if table[fresh] else Player.NORA
    return out
