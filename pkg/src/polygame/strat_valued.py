"""Winning policies for valued arenas (rational coefficients, p-adic orders).

Nora's strategies here never look at residues of intermediate coefficients,
only at their p-adic orders: each closing move picks a coefficient p^m whose
order m dodges every order the rest of the polynomial can produce at a root.
The one exception is the cubic endgame, where a residue computation in F_p
is unavoidable and the coefficient carries a unit part other than 1.

Closing orders are canonicalized as the greatest admissible integer below
the relevant bound (anchored below zero when the bound is infinite), so
certified lines are reproducible. The quadratic closing instead uses the
smallest admissible order in {0, 1}; parity is all that matters there.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import NotApplicable, OutOfScope
from .game import VALUED, Arena
from .padic import INF, is_cube_in_Qp, ord_p
from .strat_zmod import Strategy, free_move, open_indices
from .zring import Player, last_player


def slot_orders(state, p: int) -> list:
    """Per-slot p-adic orders; INF for zero and unset slots alike."""
    return [INF if v is None else ord_p(v, p) for v in state.slots]


def _below(bound):
    """Greatest integer strictly less than bound; -1 when bound is INF."""
    if bound == INF:
        return -1
    f = Fraction(bound)
    n = f.numerator // f.denominator
    return n - 1 if n == f else n


def close_extreme(orders, d: int, cap=None) -> int:
    """Order for a constant term that finishes a rootless polynomial.

    orders[j] is ord a_j (INF for zero), slot 0 being closed and ignored.
    A root x of order n forces ord a_0 = ord a_d + dn for n < M1 and
    ord a_0 >= M2 otherwise, so any order off the leading residue class
    mod d and below M2 is safe. Returns the greatest such integer (below
    cap as well, when given).
    """
    td = orders[d]
    assert td != INF, "leading coefficient must be nonzero"
    finite = [(j, orders[j]) for j in range(1, d + 1) if orders[j] != INF]
    inner = [Fraction(t - td, d - j) for j, t in finite if j != d]
    m1 = min(inner) if inner else INF
    m2 = INF if m1 == INF else min(t + j * m1 for j, t in finite)
    if cap is not None:
        m2 = min(m2, cap)
    m = _below(m2)
    while m % d == td % d:
        m -= 1
    return m


def close_middle(orders, d: int, i: int, cap=None) -> int:
    """Order for middle coefficient a_i (2 <= i <= d-2) closing rootless.

    Roots of order below M3 or above M4 are killed by avoiding the two
    residue classes ord a_d mod (d-i) and ord a_0 mod i; roots with order
    in [M3, M4] force ord a_i >= M5. Needs max(i, d-i) > 2, i.e. d > 4.
    """
    assert 2 <= i <= d - 2 and d > 4
    t0, td = orders[0], orders[d]
    assert t0 != INF and td != INF
    js = [j for j in range(d + 1) if j != i and orders[j] != INF]
    m3 = min(Fraction(orders[j] - td, d - j) for j in js if j < d)
    m4 = max(Fraction(t0 - orders[j], j) for j in js if j > 0)
    lo, hi = math.ceil(m3), math.floor(m4)
    if lo > hi:
        m5 = INF
    else:
        m5 = min(orders[j] + (j - i) * n for j in js for n in range(lo, hi + 1))
    if cap is not None:
        m5 = min(m5, cap) if m5 != INF else cap
    m = _below(m5)
    guard = 2 * i * (d - i) + 2
    while m % (d - i) == td % (d - i) or m % i == t0 % i:
        m -= 1
        guard -= 1
        assert guard > 0, "avoidance scan failed to terminate"
    return m


def _power(p: int, m: int) -> Fraction:
    return Fraction(p) ** m


class ValuedStrategy(Strategy):
    """Shared applicability plumbing for Q_p policies (unramified, e = 1)."""

    def _arena_ok(self, arena: Arena) -> bool:
        return (arena.kind == VALUED
                and arena.field.ramification_denominator == 1
                and not arena.allow_zero_leading)


class NoraQuad(ValuedStrategy):
    """Degree 2, Nora first and last: kill the cross term, split the orders.

    With a_1 = 0 a root would force ord a_0 = ord a_2 + 2n, so the closing
    extreme takes the p-power of opposite parity to the fixed extreme.
    """

    id = "nora_quad"

    def applicable(self, arena, role, first):
        return (self._arena_ok(arena) and not arena.integral
                and arena.degree == 2
                and role is Player.NORA and first is Player.NORA)

    def initial_memory(self, arena, role, first):
        return {"branch": None}

    def next_move(self, state, memory):
        if state.set_count == 0:
            return (1, 0), {**memory, "branch": "open"}
        (i,) = open_indices(state)
        t = ord_p(state.slots[2 - i], state.arena.p)
        n = 0 if t % 2 == 1 else 1
        return (i, _power(state.arena.p, n)), {**memory, "branch": "close", "order": n}


class NoraQuartic(ValuedStrategy):
    """Degree 4, Nora first and last.

    Opening zeroes a_1; the second move zeroes a_3 if Wanda left it alone
    (reserving the middle endgame) and otherwise zeroes a_2 so that the
    final slot is an extreme. Extreme closings use the order-avoidance
    bound; the a_2 closing rides the parity of ord a_0 and ord a_4.
    """

    id = "nora_quartic"

    def applicable(self, arena, role, first):
        return (self._arena_ok(arena) and not arena.integral
                and arena.degree == 4
                and role is Player.NORA and first is Player.NORA)

    def initial_memory(self, arena, role, first):
        return {"branch": None}

    def next_move(self, state, memory):
        p = state.arena.p
        count = state.set_count
        if count == 0:
            return (1, 0), {**memory, "branch": "open"}
        if count == 2:
            if state.slots[3] is None:
                return (3, 0), {**memory, "branch": "pin3"}
            return (2, 0), {**memory, "branch": "mid_zero"}
        (i,) = open_indices(state)
        orders = slot_orders(state, p)
        if i == 0:
            m = close_extreme(orders, 4)
            tag = "close_a0"
        elif i == 4:
            m = close_extreme(orders[::-1], 4)
            tag = "close_a4"
        else:
            assert i == 2 and state.slots[1] == 0 and state.slots[3] == 0
            t0, t4 = orders[0], orders[4]
            if (t0 - t4) % 2 == 1:
                # odd split: every a_4 x^2 + a_0 x^-2 order is non-integral in x
                return (2, 0), {**memory, "branch": "parity_zero"}
            m = _below(Fraction(t0 + t4, 2))
            if m % 2 == t0 % 2:
                m -= 1
            tag = "parity_avoid"
        return (i, _power(p, m)), {**memory, "branch": tag, "order": m}


class NoraHighdeg(ValuedStrategy):
    """Degree 5 and up, Nora last: pin a_1 and a_{d-1}, then avoid orders.

    The early pins guarantee the final slot is an extreme or a middle with
    index in [2, d-2], where the two arithmetic progressions to dodge have
    moduli i and d-i that never cover all integers (d > 4).
    """

    id = "nora_highdeg"

    def applicable(self, arena, role, first):
        return (self._arena_ok(arena) and not arena.integral
                and arena.degree >= 5
                and role is Player.NORA
                and last_player(arena.degree, first) is Player.NORA)

    def initial_memory(self, arena, role, first):
        return {"branch": None}

    def next_move(self, state, memory):
        d = state.arena.degree
        p = state.arena.p
        if state.set_count < d:
            if state.slots[1] is None:
                return (1, 0), {**memory, "branch": "pin_low"}
            if state.slots[d - 1] is None:
                return (d - 1, 0), {**memory, "branch": "pin_high"}
            return free_move(state), {**memory, "branch": "free"}
        (i,) = open_indices(state)
        orders = slot_orders(state, p)
        if i == 0:
            m = close_extreme(orders, d)
            tag = "close_a0"
        elif i == d:
            m = close_extreme(orders[::-1], d)
            tag = "close_ad"
        else:
            m = close_middle(orders, d, i)
            tag = "close_middle"
        return (i, _power(p, m)), {**memory, "branch": tag, "order": m}


class NoraCubic(ValuedStrategy):
    """Degree 3, Wanda first, Nora last: Newton polygon plus a residue dodge.

    A middle opening is steered into an extreme closing. When Wanda starts
    on an extreme, Nora zeroes the adjacent middle; if Wanda then fills the
    other extreme, the quotient of the extremes either fails to be a cube
    (close with 0) or forces every root's order, and a linear coefficient
    with the right order and a missing residue blocks the factorization.
    """

    id = "nora_cubic"

    def applicable(self, arena, role, first):
        return (self._arena_ok(arena) and not arena.integral
                and arena.degree == 3
                and role is Player.NORA and first is Player.WANDA)

    def initial_memory(self, arena, role, first):
        return {"branch": None}

    def next_move(self, state, memory):
        p = state.arena.p
        if state.set_count == 1:
            if state.slots[2] is not None:
                return (1, 0), {**memory, "branch": "steer"}
            if state.slots[1] is not None:
                return (2, 0), {**memory, "branch": "steer"}
            if state.slots[3] is not None:
                return (2, 0), {**memory, "branch": "newton"}
            return (1, 0), {**memory, "branch": "newton_rev"}
        (i,) = open_indices(state)
        orders = slot_orders(state, p)
        if i == 0:
            m = close_extreme(orders, 3)
            return (0, _power(p, m)), {**memory, "branch": "close_a0", "order": m}
        if i == 3:
            m = close_extreme(orders[::-1], 3)
            return (3, _power(p, m)), {**memory, "branch": "close_a3", "order": m}
        # linear slot of f or of its reverse; the other middle is zero
        lead, const = (state.slots[3], state.slots[0]) if i == 1 \
            else (state.slots[0], state.slots[3])
        ratio = Fraction(const) / Fraction(lead)
        if not is_cube_in_Qp(ratio, p):
            return (i, 0), {**memory, "branch": "noncube"}
        k = ord_p(ratio, p)
        residue = missing_residue(ratio, p)
        value = Fraction(lead) * residue * _power(p, 2 * k // 3)
        return (i, value), {**memory, "branch": "cube", "residue": residue}


def forbidden_residues(ratio, p: int) -> set:
    """{(d0 - c^3)/c mod p : c in F_p^*} for the unit residue d0 of ratio.

    If the completed cubic x^3 + (a_1/a_3)x + ratio factored, the leading
    residue of a_1/a_3 would land in this set; it has at most p-1 elements
    and contains 0 whenever ratio is a cube.
    """
    k = ord_p(ratio, p)
    unit = Fraction(ratio) / _power(p, k)
    d0 = unit.numerator * pow(unit.denominator, -1, p) % p
    return {(d0 - pow(c, 3, p)) * pow(c, -1, p) % p for c in range(1, p)}


def missing_residue(ratio, p: int) -> int:
    """Smallest nonzero residue outside forbidden_residues(ratio, p)."""
    bad = forbidden_residues(ratio, p)
    for r in range(1, p):
        if r not in bad:
            return r
    raise NotApplicable("residue dodge needs the forbidden set to miss F_p*")


class WandaIntegral(ValuedStrategy):
    """Degree 3 with integral coefficients, Wanda first.

    Opening a_0 = p puts (0, 1) on the Newton polygon; the follow-up pins a
    vertex at height zero next to it, leaving a length-one integer-slope
    segment no integral completion can remove.
    """

    id = "wanda_integral"

    def applicable(self, arena, role, first):
        return (self._arena_ok(arena) and arena.integral
                and arena.degree == 3
                and role is Player.WANDA and first is Player.WANDA)

    def initial_memory(self, arena, role, first):
        return {"branch": None}

    def next_move(self, state, memory):
        p = state.arena.p
        if state.set_count == 0:
            return (0, p), {**memory, "branch": "open"}
        if state.slots[1] is None:
            return (1, 1), {**memory, "branch": "unit_a1"}
        if state.slots[1] != 0 and ord_p(state.slots[1], p) == 0:
            # (1, 0) already a vertex; any throwaway keeps the short segment
            return free_move(state), {**memory, "branch": "free_mid"}
        return (2, 1), {**memory, "branch": "shift"}


MULTI_PRIME_EXCLUDED_DEGREES = (1, 3, 4)


def multi_prime_close(per_prime_orders) -> Fraction:
    """Sum of p_j^(-k_j): one closing value with ord_{p_j} = -k_j for all j.

    Ultrametric dominance makes the orders exact: each term is the unique
    one of negative order at its own prime. Degrees 1, 3 and 4 are excluded
    from the composition (two primes can be played against each other in
    the quartic endgame), which callers gate via MULTI_PRIME_EXCLUDED_DEGREES.
    """
    pairs = list(per_prime_orders)
    primes = [p for p, _ in pairs]
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be pairwise distinct")
    for p, k in pairs:
        if k < 1:
            raise ValueError(f"need k >= 1 per prime, got {k} at p={p}")
    total = sum(Fraction(1, p ** k) for p, k in pairs)
    for p, k in pairs:
        assert ord_p(total, p) == -k
    return total


def multi_prime_move(state, primes) -> tuple:
    """Nora's move when she blocks roots at several primes at once.

    Non-closing moves are the nora_quad/nora_highdeg shapes, which are
    prime-independent (all pins and throwaways are zeros). The close runs
    the per-prime order-avoidance bound capped at zero, so each prime
    contributes a k >= 1 to multi_prime_close. Nora must hold the last
    move and the degree must be outside MULTI_PRIME_EXCLUDED_DEGREES.
    """
    d = state.arena.degree
    assert d >= 2 and d not in MULTI_PRIME_EXCLUDED_DEGREES
    opens = open_indices(state)
    if len(opens) > 1:
        if d == 2 or state.slots[1] is None:
            return (1, 0)
        if state.slots[d - 1] is None:
            return (d - 1, 0)
        return free_move(state)
    (i,) = opens
    per = []
    for p in primes:
        if d == 2:
            t = ord_p(state.slots[2 - i], p)
            k = 1 if t % 2 == 0 else 2
        else:
            orders = slot_orders(state, p)
            if i == 0:
                k = -close_extreme(orders, d, cap=0)
            elif i == d:
                k = -close_extreme(orders[::-1], d, cap=0)
            else:
                k = -close_middle(orders, d, i, cap=0)
        per.append((p, k))
    return (i, multi_prime_close(per))


def classify_valued(d: int, first: Player, integral: bool = False) -> Player:
    """Winner of the valued game at degree d (finite residue field).

    Linear polynomials over a field always have roots, so d = 1 is Wanda's
    either way. With integral coefficients at d = 3 the uniformizer opening
    wins for whichever player moves first or last; only the first-player
    case is realized by a policy here.
    """
    if d == 1:
        return Player.WANDA
    if integral:
        if d == 3:
            return Player.WANDA
        raise OutOfScope(f"integral arenas are classified only at d=3, got d={d}")
    return last_player(d, first)


def select_valued_strategy(arena: Arena, role: Player, first: Player) -> Strategy:
    """The implemented policy for this seat, if one exists."""
    d = arena.degree
    if arena.integral:
        choice = WandaIntegral()
    elif d == 2:
        choice = NoraQuad()
    elif d == 3:
        choice = NoraCubic()
    elif d == 4:
        choice = NoraQuartic()
    else:
        choice = NoraHighdeg()
    if not choice.applicable(arena, role, first):
        raise NotApplicable(
            f"no policy for role={role} first={first} on degree {d}"
            f"{' integral' if arena.integral else ''} arena")
    return choice
