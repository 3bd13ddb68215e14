"""Abelian-avoidance suite: prime search, half-lattice dodges, S_3 closings."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polygame.abelian import (
    AbelianPrime,
    HalfLatticeAvoidance,
    NoraAbelianCubic,
    NoraAbelianHighdeg,
    ap_avoid,
    find_abelian_prime,
    half_close_extreme,
    half_close_middle,
    prime_qualifies,
    s3_certificate,
)
from polygame.errors import SearchLimit
from polygame.game import Arena, GameState, Move, apply_move
from polygame.padic import INF, discriminant, ord_p, qp_root_exists, unit_part_residue
from polygame.zring import Player

from oracles import sympy_discriminant

N, W = Player.NORA, Player.WANDA


def run_line(strategy, arena, role, first, script):
    state = GameState.fresh(arena, first)
    memory = strategy.initial_memory(arena, role, first)
    feed = iter(script)
    own = []
    while not state.finished:
        if state.mover is role:
            move, memory = strategy.next_move(state, memory)
            own.append((move, memory.get("branch")))
            state = apply_move(state, Move(*move))
        else:
            state = apply_move(state, Move(*next(feed)))
    return state, own, memory


# --- prime search -----------------------------------------------------------


def test_find_abelian_prime_frozen():
    ap = find_abelian_prime(9)
    assert ap.p == 107 and ap.half_cofactor == ((53, 1),)
    assert find_abelian_prime(2).p == 11


def test_found_primes_verified_independently():
    import sympy

    for d in range(9, 21):
        ap = find_abelian_prime(d)
        assert sympy.isprime(ap.p)
        assert ap.p % 4 == 3
        assert all(q > d for q in sympy.factorint((ap.p - 1) // 2))
        assert dict(ap.half_cofactor) == dict(sympy.factorint((ap.p - 1) // 2))


def test_find_abelian_prime_errors():
    with pytest.raises(SearchLimit):
        find_abelian_prime(9, search_limit=0)
    with pytest.raises(ValueError):
        find_abelian_prime(1)


def test_prime_qualifies():
    assert prime_qualifies(107, 9) and prime_qualifies(107, 52)
    assert not prime_qualifies(107, 53)  # (p-1)/2 = 53 itself
    assert not prime_qualifies(13, 2)    # 1 mod 4
    assert not prime_qualifies(106, 2)   # composite
    assert prime_qualifies(3, 100)       # (p-1)/2 = 1, vacuous
    assert prime_qualifies(11, 4) and not prime_qualifies(11, 5)


def test_abelian_prime_type_validates():
    AbelianPrime(9, 107, ((53, 1),))
    with pytest.raises(ValueError):
        AbelianPrime(9, 106, ())               # not prime
    with pytest.raises(ValueError):
        AbelianPrime(2, 13, ((2, 1), (3, 1)))  # 1 mod 4
    with pytest.raises(ValueError):
        AbelianPrime(5, 7, ((3, 1),))          # factor 3 <= bound 5
    with pytest.raises(ValueError):
        AbelianPrime(9, 107, ((53, 2),))       # does not multiply out


# --- half-lattice avoidance -------------------------------------------------


def test_ap_avoid_frozen():
    assert ap_avoid(0, 0, 9, 4, 4).sequence == (-1, -3, -7, -9)
    assert ap_avoid(0, 0, 10, 5, 3).sequence == (-1, -2, -3)


def test_ap_avoid_preconditions():
    for bad in [(0, 0, 8, 4, 1), (0, 0, 9, 2, 1), (0, 0, 9, 7, 1)]:
        with pytest.raises(ValueError):
            ap_avoid(*bad)
    with pytest.raises(ValueError):
        ap_avoid(0, 0, 9, 4, 0)


@settings(max_examples=120)
@given(st.data())
def test_ap_avoid_disjointness(data):
    d = data.draw(st.integers(min_value=9, max_value=15))
    i = data.draw(st.integers(min_value=3, max_value=d - 3))
    n1 = data.draw(st.integers(min_value=-5, max_value=5))
    n2 = data.draw(st.integers(min_value=-5, max_value=5))
    count = data.draw(st.integers(min_value=1, max_value=8))
    out = ap_avoid(n1, n2, d, i, count)
    assert len(out.sequence) == count
    assert list(out.sequence) == sorted(out.sequence, reverse=True)
    for x in out.sequence:
        # integer x is in {c + n*m/2} iff (x - c) is a multiple of m/2
        assert Fraction(2 * (x - n1), i).denominator != 1
        assert Fraction(2 * (x - n2), d - i).denominator != 1


def test_half_lattice_type_validates():
    HalfLatticeAvoidance(0, 0, 4, 9, (-1, -3))
    with pytest.raises(ValueError):
        HalfLatticeAvoidance(0, 0, 4, 9, (-1, -2))   # -2 is in {2n}
    with pytest.raises(ValueError):
        HalfLatticeAvoidance(0, 0, 4, 9, (-3, -1))   # not descending


# --- cubic policy -----------------------------------------------------------


def test_cubic_cube_line_lands_negative_without_bump():
    st_, own, mem = run_line(NoraAbelianCubic(), Arena.valued(5, 3), N, W,
                             [(3, 1), (0, 125)])
    assert own == [((2, 0), "newton"), ((1, Fraction(25)), "cube")]
    assert discriminant(st_.slots) == -484375
    assert mem["certificate"] == {"no_Qp_root": True, "disc_negative": True}
    assert "enlarged" not in mem


def test_cubic_extreme_close_bumps_until_negative():
    st_, own, mem = run_line(NoraAbelianCubic(), Arena.valued(5, 3), N, W,
                             [(2, -50), (3, 1)])
    assert own[-1] == ((0, Fraction(81250)), "close_a0")  # 5^5 + 5^7
    assert mem["enlarged"] is True
    assert ord_p(st_.slots[0], 5) == 5
    assert unit_part_residue(st_.slots[0], 5) == unit_part_residue(3125, 5)
    assert discriminant(st_.slots) < 0
    assert not qp_root_exists(list(st_.slots), 5).exists


def test_cubic_steer_close_already_negative():
    st_, own, mem = run_line(NoraAbelianCubic(), Arena.valued(5, 3), N, W,
                             [(2, 5), (3, 1)])
    assert own[-1] == ((0, Fraction(25)), "close_a0")
    assert "enlarged" not in mem
    assert discriminant(st_.slots) == -29375


def test_s3_certificate_shape():
    cert = s3_certificate([Fraction(125), Fraction(25), 0, Fraction(1)], 5)
    assert cert == {"no_Qp_root": True, "disc_negative": True}
    # x^3 - x has rational roots: both prongs fail
    cert = s3_certificate([0, -1, 0, 1], 5)
    assert cert["no_Qp_root"] is False


@settings(max_examples=25)
@given(st.data())
def test_cubic_random_games_certify(data):
    p = data.draw(st.sampled_from([3, 5, 7]))
    rng = random.Random(data.draw(st.integers(min_value=0, max_value=10**6)))
    arena = Arena.valued(p, 3)
    strat = NoraAbelianCubic()
    state = GameState.fresh(arena, W)
    memory = strat.initial_memory(arena, N, W)
    while not state.finished:
        if state.mover is N:
            move, memory = strat.next_move(state, memory)
        else:
            opens = [i for i, v in enumerate(state.slots) if v is None]
            i = rng.choice(opens)
            value = Fraction(rng.choice([1, -1]) * rng.randint(1, 60)) \
                * Fraction(p) ** rng.randint(-3, 3)
            if i == 0 and state.slots[3] not in (None, 0) and rng.random() < 0.6:
                value = Fraction(state.slots[3]) * rng.randint(1, 9) ** 3
            if i in (1, 2) and rng.random() < 0.3:
                value = Fraction(0)
            move = (i, value)
        state = apply_move(state, Move(*move))
    disc = discriminant(state.slots)
    assert disc < 0
    assert disc == sympy_discriminant(state.slots)
    assert not qp_root_exists(list(state.slots), p).exists
    assert memory["certificate"] == {"no_Qp_root": True, "disc_negative": True}


# --- degree > 8 policy ------------------------------------------------------

ARENA9 = Arena.valued(107, 9, ramification_denominator=2)


def test_highdeg_requires_qualifying_ramified_arena():
    strat = NoraAbelianHighdeg()
    assert strat.applicable(ARENA9, N, W)
    assert not strat.applicable(Arena.valued(107, 9), N, W)      # unramified
    assert not strat.applicable(Arena.valued(13, 9, 2), N, W)    # 1 mod 4
    assert not strat.applicable(Arena.valued(107, 8, 2), N, W)   # degree too low
    assert not strat.applicable(ARENA9, N, N)                    # Nora not last


def test_highdeg_memory_carries_the_prime():
    memory = NoraAbelianHighdeg().initial_memory(ARENA9, N, W)
    assert memory["prime"] == AbelianPrime(9, 107, ((53, 1),))


def test_highdeg_frozen_extreme_close():
    st_, own, _ = run_line(NoraAbelianHighdeg(), ARENA9, N, W,
                           [(9, 1), (3, 0), (4, 0), (5, 0), (6, 0)])
    assert [b for _, b in own] == ["pin_low", "pin_low", "pin_high", "pin_high",
                                   "close_a0"]
    assert own[-1][0] == (0, Fraction(1, 107))
    assert not qp_root_exists(list(st_.slots), 107).exists


def test_highdeg_frozen_middle_and_leading_closes():
    st_, own, _ = run_line(NoraAbelianHighdeg(), ARENA9, N, W,
                           [(9, 1), (0, 1), (3, 0), (5, 0), (6, 0)])
    assert own[-1] == ((4, Fraction(1, 107)), "close_middle")
    assert not qp_root_exists(list(st_.slots), 107).exists
    st_, own, _ = run_line(NoraAbelianHighdeg(), ARENA9, N, W,
                           [(0, 1), (3, 0), (4, 0), (5, 0), (6, 0)])
    assert own[-1] == ((9, Fraction(1, 107)), "close_ad")
    assert not qp_root_exists(list(st_.slots), 107).exists


def test_highdeg_close_below_a_finite_bound():
    # a_5 = 107^2 makes M1 = 1/2 and M2 = 9/2; greatest safe integer is 4
    st_, own, _ = run_line(NoraAbelianHighdeg(), ARENA9, N, W,
                           [(9, 1), (5, Fraction(107**2)), (3, 0), (4, 0), (6, 0)])
    assert own[-1] == ((0, Fraction(107**4)), "close_a0")
    assert not qp_root_exists(list(st_.slots), 107).exists


def test_highdeg_free_moves_after_wanda_pins():
    st_, own, _ = run_line(NoraAbelianHighdeg(), ARENA9, N, W,
                           [(1, 107), (7, 107), (3, 107), (9, 1), (6, 107)])
    assert [b for _, b in own] == ["pin_low", "pin_high", "free", "free",
                                   "close_a0"]
    assert own[-1][0] == (0, Fraction(107))
    assert not qp_root_exists(list(st_.slots), 107).exists


def test_highdeg_even_degree_middle_close():
    arena = Arena.valued(107, 10, ramification_denominator=2)
    st_, own, _ = run_line(NoraAbelianHighdeg(), arena, N, N,
                           [(10, 1), (0, 1), (4, 0), (5, 0), (6, 0)])
    assert own[-1] == ((7, Fraction(1, 107)), "close_middle")
    assert not qp_root_exists(list(st_.slots), 107).exists


@settings(max_examples=12)
@given(st.data())
def test_highdeg_random_games_keep_the_avoidance(data):
    d = data.draw(st.sampled_from([9, 10]))
    first = N if d % 2 == 0 else W
    rng = random.Random(data.draw(st.integers(min_value=0, max_value=10**6)))
    arena = Arena.valued(107, d, ramification_denominator=2)
    strat = NoraAbelianHighdeg()
    state = GameState.fresh(arena, first)
    memory = strat.initial_memory(arena, N, first)
    while not state.finished:
        if state.mover is N:
            move, memory = strat.next_move(state, memory)
        else:
            opens = [i for i, v in enumerate(state.slots) if v is None]
            i = rng.choice(opens)
            value = Fraction(rng.choice([1, -1]) * rng.randint(1, 200)) \
                * Fraction(107) ** rng.randint(-3, 3)
            if i not in (0, d) and rng.random() < 0.25:
                value = Fraction(0)
            move = (i, value)
        state = apply_move(state, Move(*move))
    i = state.move_log[-1][1]
    n0 = memory["order"]
    orders = [INF if v == 0 else ord_p(v, 107) for v in state.slots]
    if i in (0, d):
        o = orders if i == 0 else orders[::-1]
        td = o[d]
        finite = [(j, o[j]) for j in range(1, d + 1) if o[j] != INF]
        inner = [Fraction(t - td, d - j) for j, t in finite if j != d]
        m1 = min(inner) if inner else INF
        m2 = INF if m1 == INF else min(t + j * m1 for j, t in finite)
        assert n0 < m2
        assert not (2 * (n0 - td) % d == 0 and Fraction(n0 - td, d) < m1)
    else:
        assert 2 < i < d - 2  # the pins make other middles impossible
        t0, td = orders[0], orders[d]
        assert 2 * (n0 - td) % (d - i) != 0
        assert 2 * (n0 - t0) % i != 0
        js = [j for j in range(d + 1) if j != i and orders[j] != INF]
        m3 = min(Fraction(orders[j] - td, d - j) for j in js if j < d)
        m4 = max(Fraction(t0 - orders[j], j) for j in js if j > 0)
        halves = [Fraction(k, 2) for k in range(-40, 41)
                  if m3 <= Fraction(k, 2) <= m4]
        if halves:
            m5 = min(orders[j] + (j - i) * n for j in js for n in halves)
            assert n0 < m5
    assert not qp_root_exists(list(state.slots), 107).exists


# --- closing-order helpers directly -----------------------------------------


def test_half_close_extreme_dodges_the_half_lattice():
    # d = 10, only a_d set: integer points of 0 + 10*(1/2)Z are multiples of 5
    orders = [INF] * 10 + [0]
    assert half_close_extreme(orders, 10) == -1
    orders[10] = 1  # shift the lattice: avoid x = 1 mod 5... -4, -9, ...
    m = half_close_extreme(orders, 10)
    assert m == -1 and 2 * (m - 1) % 10 != 0


def test_half_close_middle_window_bound():
    # mirror of the frozen game: t0 = td = 0, window collapses to n = 0
    orders = [0] + [INF] * 9 + [0]
    assert half_close_middle(orders, 10, 7) == -1
