"""Winning policies for cyclic arenas.

Each strategy is a total policy (state + private memory -> move) on its
declared applicability domain, defined for every adversary line inside that
domain. Strategies never validate the opponent's play; they read canonical
residues off the board and answer. Memory is treated immutably: next_move
returns a possibly-updated copy, so certification can fork game lines.

Free moves are canonicalized (smallest open middle with value 0, else the
smallest open extreme with value 1) so certified lines are reproducible.
The one deviation is nora_even, whose intermediate moves use value 1.
"""

from __future__ import annotations

import functools
import math

from .errors import NotApplicable, RoleLoses
from .game import CYCLIC, Arena
from .zring import Player, classify, factorize, inverse, is_cube_free, last_player, units


class Strategy:
    """Base policy interface; subclasses fill id and the three methods."""

    id = "?"

    def applicable(self, arena: Arena, role: Player, first: Player) -> bool:
        raise NotImplementedError

    def initial_memory(self, arena: Arena, role: Player, first: Player) -> dict:
        return {}

    def next_move(self, state, memory: dict):
        """-> ((index, value), memory')"""
        raise NotImplementedError

    def _require(self, ok: bool, why: str = "") -> None:
        if not ok:
            raise NotApplicable(f"{self.id}: {why or 'outside applicability'}")


def open_indices(state) -> list:
    return [i for i, v in enumerate(state.slots) if v is None]


def free_move(state) -> tuple:
    """Canonical throwaway move: smallest open middle 0, else extreme 1."""
    d = state.arena.degree
    for i in range(1, d):
        if state.slots[i] is None:
            return (i, 0)
    for i in (0, d):
        if state.slots[i] is None:
            return (i, 1)
    raise NotApplicable("no open slot for a free move")


def _vp(x: int, p: int) -> float:
    if x == 0:
        return math.inf
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@functools.lru_cache(maxsize=None)
def _unit_power_rows(m: int, top: int) -> tuple:
    """(u^j mod m, u^-j mod m) rows for every unit u, j up to `top`.

    Certification replays millions of endgame closes over the same modulus;
    hoisting the modular powers out of unit_bad_classes is what keeps the
    exhaustive walks affordable.
    """
    rows = []
    for u in units(m):
        inv = inverse(u, m)
        rows.append((tuple(pow(u, j, m) for j in range(top + 1)),
                     tuple(pow(inv, j, m) for j in range(top + 1))))
    return tuple(rows)


def unit_bad_classes(slots, index: int, m: int, include_zero: bool) -> set:
    """Residue classes mod m for slot `index` that would hand a unit root.

    For a unit u, f(u) = 0 iff a_index = -u^(-index) * h(u) where h is the
    rest of the polynomial; collecting that over all units (plus class 0
    when asked) gives the forbidden set. Callers are responsible for having
    excluded non-unit roots structurally.
    """
    bad = {0} if include_zero else set()
    for row, inv_row in _unit_power_rows(m, len(slots) - 1):
        h = 0
        for j, a in enumerate(slots):
            if j == index or a is None:
                continue
            h += a * row[j]
        bad.add((-h * inv_row[index]) % m)
    return bad


def avoid_value(state, index: int, m: int, bad: set) -> int:
    """Smallest legal value whose class mod m is outside the forbidden set."""
    arena = state.arena
    n = arena.modulus
    d = arena.degree
    extreme = index in (0, d) and not arena.allow_zero_leading
    for v in range(n):
        if v == 0 and extreme:
            continue
        if v % m not in bad:
            return v
    raise NotApplicable(f"no admissible value mod {m} at slot {index}")


def _endgame_move(state, m: int, include_zero: bool) -> tuple:
    (index,) = open_indices(state)
    bad = unit_bad_classes(state.slots, index, m, include_zero)
    return (index, avoid_value(state, index, m, bad))


class WandaLast(Strategy):
    """Wanda moving last (any degree), plus both seats at degree 1.

    d >= 4: grab both extremes early (value 1), close with a_i = -g(1) so 1
    is a root. d = 3: mirror the opponent across the pairs {0,3} and {1,2},
    making -1 a root. d = 2: open a_1 = 0, close the free extreme with the
    negation of the other. d = 1: a_1 = 1 up front, or copy the value across
    so -1 is a root.
    """

    id = "wanda_last"

    def applicable(self, arena, role, first):
        return (arena.kind == CYCLIC and role is Player.WANDA
                and (last_player(arena.degree, first) is Player.WANDA
                     or arena.degree == 1))

    def next_move(self, state, memory):
        d = state.arena.degree
        n = state.arena.modulus
        slots = state.slots
        if d == 1:
            if state.set_count == 0:
                return (1, 1), memory
            (i,) = (j for j in (0, 1) if slots[j] is not None)
            return (1 - i, slots[i]), memory
        if d == 2:
            if state.set_count == 0:
                return (1, 0), memory
            if slots[1] is None:
                return (1, 0), memory
            (i,) = (j for j in (0, 2) if slots[j] is None)
            return (i, (-slots[2 - i]) % n), memory
        if d == 3:
            adv, known = _newly_set(state, memory)
            self._require(adv is not None, "mirroring needs an opponent move")
            partner = {0: 3, 3: 0, 1: 2, 2: 1}[adv]
            mem = {**memory, "known": known | {partner}}
            return (partner, slots[adv]), mem
        # d >= 4
        if state.set_count < d:
            if slots[0] is None:
                return (0, 1), memory
            if slots[d] is None:
                return (d, 1), memory
            return free_move(state), memory
        (i,) = open_indices(state)
        total = sum(v for j, v in enumerate(slots) if v is not None)
        return (i, (-total) % n), memory


def _newly_set(state, memory):
    """Index the adversary just filled (None on our opening move)."""
    known = memory.get("known", frozenset())
    now = frozenset(i for i, v in enumerate(state.slots) if v is not None)
    fresh = now - known
    assert len(fresh) <= 1, "more than one unseen adversary move"
    return (next(iter(fresh)) if fresh else None), now


class NoraEven(Strategy):
    """Nora first and last, d even: a_0 = 1, then close past every unit.

    With a_0 = 1 the polynomial is x*g(x) + 1, so non-units can never be
    roots; the final move dodges the at most phi(N)+1 classes that would
    give a unit root (zero included by convention).
    """

    id = "nora_even"

    def applicable(self, arena, role, first):
        return (arena.kind == CYCLIC and role is Player.NORA
                and arena.degree % 2 == 0 and arena.degree >= 2
                and first is Player.NORA)

    def next_move(self, state, memory):
        d = state.arena.degree
        if state.set_count == 0:
            return (0, 1), memory
        if state.set_count == d:
            return _endgame_move(state, state.arena.modulus, True), memory
        for i in range(1, d):
            if state.slots[i] is None:
                return (i, 1), memory
        raise NotApplicable("nora_even: no open middle before the last move")


class NoraCubeFree(Strategy):
    """Nora moving last over cube-free N, d odd: component-wise blocking.

    Case split on Wanda's opening:
    - opening elsewhere than a_0, or a unit a_0: take a_0 = 1 (or play
      freely) and run the unit-avoidance endgame mod N;
    - non-unit a_0 with some exact prime power p^k || N (k <= 2) coprime to
      a_0: fix a_d = 1 and make the final move keep f mod p rootless;
    - otherwise some p has p^2 || N, p | a_0, p^2 does not divide a_0: set
      a_1 = 0; non-units are then dead mod p^2 and the endgame avoids the
      phi(p^2)+1 unit classes.
    """

    id = "nora_cubefree"

    def applicable(self, arena, role, first):
        d = arena.degree
        return (arena.kind == CYCLIC and role is Player.NORA
                and d % 2 == 1 and d >= 3 and first is Player.WANDA
                and is_cube_free(arena.modulus))

    def next_move(self, state, memory):
        d = state.arena.degree
        n = state.arena.modulus
        if state.set_count == 1:
            return self._first_reply(state, memory, n, d)
        if state.set_count == d:
            return self._close(state, memory, n)
        return free_move(state), memory

    def _first_reply(self, state, memory, n, d):
        slots = state.slots
        if slots[0] is None:
            mem = {**memory, "branch": "even-endgame"}
            return (0, 1), mem
        a0 = slots[0]
        if math.gcd(a0, n) == 1:
            mem = {**memory, "branch": "even-endgame"}
            return free_move(state), mem
        for p, k in factorize(n):
            if a0 % p != 0:
                mem = {**memory, "branch": "primary", "p": p}
                return (d, 1), mem
        for p, k in factorize(n):
            if k == 2 and a0 % (p * p) != 0:
                mem = {**memory, "branch": "fallback", "p": p, "eps": 2}
                return (1, 0), mem
        raise NotApplicable("nora_cubefree: opening escapes the case split")

    def _close(self, state, memory, n):
        branch = memory.get("branch")
        if branch == "primary":
            p = memory["p"]
            return _endgame_move(state, p, False), memory
        if branch == "fallback":
            p = memory["p"]
            return _endgame_move(state, p * p, True), memory
        return _endgame_move(state, n, True), memory


class WandaPrimePower(Strategy):
    """Wanda first over N = p^m (m >= 3, m != 4), d odd >= 3.

    Open a_0 = -p^(m-1). Writing T = floor(m/2), the reply decides the rest:
    no reply at a_1 -> a_1 = 1; ord a_1 < T -> the root is already forced,
    play on freely; ord a_1 = T -> a_2 = 0; ord a_1 > T -> a_2 = 1 (m odd)
    or a_2 = p (m even). In every case a root of the completed polynomial
    survives all later choices.
    """

    id = "wanda_prime_power"

    def __init__(self, p: int, m: int):
        assert m >= 3 and m != 4
        self.p = p
        self.m = m

    def applicable(self, arena, role, first):
        d = arena.degree
        return (arena.kind == CYCLIC and role is Player.WANDA
                and first is Player.WANDA and d % 2 == 1 and d >= 3
                and arena.modulus == self.p ** self.m)

    def next_move(self, state, memory):
        n = state.arena.modulus
        p, m = self.p, self.m
        if state.set_count == 0:
            return (0, (-p ** (m - 1)) % n), memory
        if state.set_count == 2:
            slots = state.slots
            if slots[1] is None:
                return (1, 1), {**memory, "branch": "a1-unset"}
            v = _vp(slots[1], p)
            threshold = m // 2
            if v < threshold:
                return free_move(state), {**memory, "branch": "a1-low"}
            if v == threshold:
                return (2, 0), {**memory, "branch": "a1-mid"}
            value = 1 if m % 2 == 1 else p
            return (2, value), {**memory, "branch": "a1-high"}
        return free_move(state), memory


class WandaFourthPower(Strategy):
    """Wanda first over N = p^4: d odd >= 3 for odd p, d = 3 for p = 2.

    Open a_0 = -p^2 (12 when N = 16). The reply's order at a_1 picks the
    follow-up; for odd p a root is then reachable for every later leading
    coefficient (a one-parameter scan in the root's unit part absorbs a_3).
    The p = 2 table differs only in the ord-2 case, where a_2 = 1 - 2u_1
    splits on the parity of a_3.
    """

    id = "wanda_fourth_power"

    def __init__(self, p: int):
        self.p = p

    def applicable(self, arena, role, first):
        d = arena.degree
        if not (arena.kind == CYCLIC and role is Player.WANDA
                and first is Player.WANDA and arena.modulus == self.p ** 4):
            return False
        if self.p == 2:
            return d == 3
        return d % 2 == 1 and d >= 3

    def next_move(self, state, memory):
        n = state.arena.modulus
        p = self.p
        if state.set_count == 0:
            return (0, (-p * p) % n), memory
        if state.set_count == 2:
            slots = state.slots
            if slots[1] is None:
                return (1, 1), {**memory, "branch": "a1-unset"}
            v = _vp(slots[1], p)
            if v == 0:
                return free_move(state), {**memory, "branch": "a1-unit"}
            if v == 1:
                return (2, 0), {**memory, "branch": "a1-p"}
            if v == 2:
                if p == 2:
                    u1 = slots[1] // 4
                    return (2, (1 - 2 * u1) % n), {**memory, "branch": "a1-p2"}
                return (2, 1), {**memory, "branch": "a1-p2"}
            return (2, 1), {**memory, "branch": "a1-p3"}
        return free_move(state), memory


class NoraSixteen(Strategy):
    """Nora moving last over N = 16 * N2 (N2 odd cube-free), d > 3 odd.

    Openings away from a_0, or unit a_0: as in the cube-free strategy, mod
    N. Otherwise pick a component where a_0 is still alive: an odd prime
    with p^eps || N and a_0 nonzero mod p^eps runs the cube-free logic at
    that component; failing that a_0 is nonzero mod 16 and the two-adic
    table applies, keyed by ord_2(a_0 mod 16):
      0 -> unit endgame mod 16;
      1 -> a_1 = 0 and the endgame runs mod 4;
      2 -> a_1 = 8, then a_2 = 0, or a parity pick at a_3 if Wanda grabbed
           an odd a_2 (even a_2 needs nothing);
      3 -> a_1 = 4, then a_2 = 1, or a_3 opposite in parity to a_2/2.
    The parity play keeps every even x from ever being a root mod 16; the
    closing move then rules out the units.
    """

    id = "nora_sixteen"

    def applicable(self, arena, role, first):
        d = arena.degree
        n = arena.modulus
        if not (arena.kind == CYCLIC and role is Player.NORA
                and d % 2 == 1 and d > 3 and first is Player.WANDA):
            return False
        if n % 16 != 0:
            return False
        n2 = n // 16
        return n2 % 2 == 1 and (n2 == 1 or is_cube_free(n2))

    def next_move(self, state, memory):
        d = state.arena.degree
        n = state.arena.modulus
        if state.set_count == 1:
            return self._first_reply(state, memory, n, d)
        if state.set_count == d:
            return self._close(state, memory, n)
        branch = memory.get("branch")
        if state.set_count == 3 and branch in ("two-adic-4u", "two-adic-8"):
            return self._follow_up(state, memory, branch)
        return free_move(state), memory

    def _first_reply(self, state, memory, n, d):
        slots = state.slots
        if slots[0] is None:
            return (0, 1), {**memory, "branch": "even-endgame"}
        a0 = slots[0]
        if math.gcd(a0, n) == 1:
            return free_move(state), {**memory, "branch": "even-endgame"}
        for p, k in factorize(n):
            if p == 2:
                continue
            if a0 % (p ** k) != 0:
                if a0 % p != 0:
                    mem = {**memory, "branch": "delegate-primary", "p": p}
                    return (d, 1), mem
                mem = {**memory, "branch": "delegate-fallback", "p": p}
                return (1, 0), mem
        v2 = _vp(a0 % 16, 2)
        assert v2 < 4, "a_0 cannot vanish in every component"
        if v2 == 0:
            return free_move(state), {**memory, "branch": "two-adic-unit"}
        if v2 == 1:
            return (1, 0), {**memory, "branch": "two-adic-2u"}
        if v2 == 2:
            return (1, 8), {**memory, "branch": "two-adic-4u"}
        return (1, 4), {**memory, "branch": "two-adic-8"}

    def _follow_up(self, state, memory, branch):
        slots = state.slots
        mem = {**memory, "branch": branch + "-done"}
        if slots[2] is None:
            value = 0 if branch == "two-adic-4u" else 1
            return (2, value), mem
        a2 = slots[2] % 16
        if branch == "two-adic-4u":
            if a2 % 2 == 0:
                return free_move(state), mem
            u0 = (slots[0] % 16) // 4
            w = (a2 + u0) % 4
            # keep 2*a_3 + a_2 + u_0 nonzero mod 4 at every odd unit
            return (3, 1 if w == 0 else 0), mem
        if a2 % 2 == 1:
            return free_move(state), mem
        return (3, (a2 // 2 + 1) % 2), mem

    def _close(self, state, memory, n):
        branch = memory.get("branch", "even-endgame")
        if branch == "delegate-primary":
            return _endgame_move(state, memory["p"], False), memory
        if branch == "delegate-fallback":
            p = memory["p"]
            return _endgame_move(state, p * p, True), memory
        if branch == "even-endgame":
            return _endgame_move(state, n, True), memory
        if branch == "two-adic-2u":
            return _endgame_move(state, 4, True), memory
        return _endgame_move(state, 16, True), memory


class CrtLift(Strategy):
    """Runs a prime-power strategy inside one component of a composite N.

    Every move value is lifted to be the inner value mod p^k and zero mod
    the cofactor; adversary values are reduced mod p^k before the inner
    strategy sees them. Roots then lift the same way. With a trivial
    cofactor the wrapper is not built at all (the lift is the identity).
    """

    id = "crt_lift"

    def __init__(self, inner: Strategy, n: int, pk: int):
        assert n % pk == 0 and math.gcd(pk, n // pk) == 1
        self.inner = inner
        self.n = n
        self.pk = pk
        self.cofactor = n // pk
        # value lifting: x -> x * lift_unit keeps x mod p^k, kills the rest
        self.lift_unit = (self.cofactor * inverse(self.cofactor, pk)) % n

    def applicable(self, arena, role, first):
        if arena.kind != CYCLIC or arena.modulus != self.n:
            return False
        reduced = Arena.cyclic(self.pk, arena.degree, arena.allow_zero_leading)
        return self.inner.applicable(reduced, role, first)

    def initial_memory(self, arena, role, first):
        reduced = Arena.cyclic(self.pk, arena.degree, arena.allow_zero_leading)
        return {"inner": self.inner.initial_memory(reduced, role, first)}

    def next_move(self, state, memory):
        view = _ReducedView(state, self.pk)
        (i, v), inner_mem = self.inner.next_move(view, memory.get("inner", {}))
        return (i, (v * self.lift_unit) % self.n), {**memory, "inner": inner_mem}


class _ReducedView:
    """Read-only image of a board with every value taken mod p^k."""

    __slots__ = ("arena", "slots", "set_count", "first")

    def __init__(self, state, pk: int):
        self.arena = Arena.cyclic(pk, state.arena.degree,
                                  state.arena.allow_zero_leading)
        self.slots = tuple(None if v is None else v % pk for v in state.slots)
        self.set_count = state.set_count
        self.first = state.first


def select_strategy(n: int, d: int, role: Player, first: Player) -> Strategy:
    """The winning policy for (N, d, role, first), if the role can win."""
    predicted = classify(n, d, first)
    if predicted is not role:
        raise RoleLoses(predicted)
    arena = Arena.cyclic(n, d)
    if role is Player.NORA:
        if d % 2 == 0:
            choice = NoraEven()
        elif is_cube_free(n):
            choice = NoraCubeFree()
        else:
            choice = NoraSixteen()
    elif last_player(d, first) is Player.WANDA or d == 1:
        choice = WandaLast()
    else:
        choice = _wanda_first_strategy(n, d)
    assert choice.applicable(arena, role, first), \
        f"dispatch bug: {choice.id} rejected ({n}, {d}, {role}, {first})"
    return choice


def _wanda_first_strategy(n: int, d: int) -> Strategy:
    fac = factorize(n)
    for p, m in fac:
        if m >= 3 and m != 4:
            inner = WandaPrimePower(p, m)
            return _lift(inner, n, p ** m)
    for p, m in fac:
        if m == 4 and p != 2:
            return _lift(WandaFourthPower(p), n, p ** 4)
    for p, m in fac:
        if m == 4 and p == 2:
            return _lift(WandaFourthPower(2), n, 16)
    raise AssertionError("classification promised a non-cube-free component")


def _lift(inner: Strategy, n: int, pk: int) -> Strategy:
    return inner if n == pk else CrtLift(inner, n, pk)
