"""Valued-arena strategies: frozen lines, membership checks, oracle audits."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polygame.errors import NotApplicable, OutOfScope
from polygame.game import Arena, GameState, Move, apply_move
from polygame.padic import INF, ord_p, polygon_of, qp_root_exists
from polygame.strat_valued import (
    MULTI_PRIME_EXCLUDED_DEGREES,
    NoraCubic,
    NoraHighdeg,
    NoraQuad,
    NoraQuartic,
    WandaIntegral,
    classify_valued,
    close_extreme,
    close_middle,
    forbidden_residues,
    missing_residue,
    multi_prime_close,
    multi_prime_move,
    select_valued_strategy,
)
from polygame.zring import Player

N, W = Player.NORA, Player.WANDA
PRIMES = (2, 3, 5, 7)


def run_line(strategy, arena, role, first, script):
    """Play out one game; adversary moves come from script in order.

    Returns the finished state and the strategy's own (move, branch) list.
    """
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
    return state, own


def assert_rootless(state, p):
    cert = qp_root_exists([Fraction(v) for v in state.slots], p)
    assert not cert.exists, f"oracle found a root: {cert.to_json()}"


# --- degree 2 ---------------------------------------------------------------


def test_quad_opens_with_zero_cross_term():
    st_, own = run_line(NoraQuad(), Arena.valued(5, 2), N, N, [(2, 3)])
    assert own[0] == ((1, 0), "open")
    assert own[1] == ((0, Fraction(5)), "close")
    assert_rootless(st_, 5)


def test_quad_close_matches_parity_rule():
    # fixed extreme has odd order -> closing order 0
    st_, own = run_line(NoraQuad(), Arena.valued(5, 2), N, N, [(0, Fraction(1, 5))])
    assert own[1] == ((2, Fraction(1)), "close")
    assert_rootless(st_, 5)


@settings(max_examples=60)
@given(st.data())
def test_quad_certified_against_random_extremes(data):
    p = data.draw(st.sampled_from(PRIMES))
    index = data.draw(st.sampled_from([0, 2]))
    num = data.draw(st.integers(min_value=1, max_value=500))
    den = data.draw(st.integers(min_value=1, max_value=500))
    shift = data.draw(st.integers(min_value=-5, max_value=5))
    value = Fraction(num, den) * Fraction(p) ** shift
    st_, own = run_line(NoraQuad(), Arena.valued(p, 2), N, N, [(index, value)])
    (close_index, close_value), _ = own[1]
    assert close_index == 2 - index
    assert ord_p(close_value, p) % 2 != ord_p(value, p) % 2
    assert_rootless(st_, p)


# --- degree 4 ---------------------------------------------------------------


def test_quartic_middle_close_same_parity():
    st_, own = run_line(NoraQuartic(), Arena.valued(5, 4), N, N, [(4, 1), (0, 25)])
    assert own == [((1, 0), "open"), ((3, 0), "pin3"),
                   ((2, Fraction(1, 5)), "parity_avoid")]
    # order -1: opposite parity to ord a_0 = 2, below (2 + 0)/2
    assert st_.slots == (Fraction(25), Fraction(0), Fraction(1, 5), Fraction(0),
                         Fraction(1))
    assert_rootless(st_, 5)


def test_quartic_middle_close_parity_differs():
    st_, own = run_line(NoraQuartic(), Arena.valued(5, 4), N, N, [(4, 1), (0, 5)])
    assert own[-1] == ((2, 0), "parity_zero")
    assert_rootless(st_, 5)


def test_quartic_extreme_closes():
    st_, own = run_line(NoraQuartic(), Arena.valued(5, 4), N, N, [(4, 1), (2, 5)])
    assert own[-1] == ((0, Fraction(5)), "close_a0")
    assert_rootless(st_, 5)
    st_, own = run_line(NoraQuartic(), Arena.valued(5, 4), N, N, [(0, 1), (2, 5)])
    assert own[-1] == ((4, Fraction(5)), "close_a4")
    assert_rootless(st_, 5)


def test_quartic_zeroes_a2_when_wanda_takes_a3():
    st_, own = run_line(NoraQuartic(), Arena.valued(5, 4), N, N, [(3, 5), (4, 1)])
    assert own[1] == ((2, 0), "mid_zero")
    assert own[-1][0][0] == 0  # last slot left is an extreme
    assert_rootless(st_, 5)


# --- degree >= 5 ------------------------------------------------------------


def test_highdeg_scripted_middle_close():
    st_, own = run_line(NoraHighdeg(), Arena.valued(5, 5), N, W,
                        [(5, 1), (0, 1), (3, 1)])
    assert own == [((1, 0), "pin_low"), ((4, 0), "pin_high"),
                   ((2, Fraction(1, 5)), "close_middle")]
    # order -1 dodges {0 mod 3}, {0 mod 2} and the bound M5 = 0
    assert st_.slots == (Fraction(1), Fraction(0), Fraction(1, 5), Fraction(1),
                         Fraction(0), Fraction(1))
    assert_rootless(st_, 5)


def test_highdeg_extreme_close_with_zero_middles():
    st_, own = run_line(NoraHighdeg(), Arena.valued(5, 5), N, W,
                        [(5, 1), (2, 0), (3, 0)])
    assert own[-1] == ((0, Fraction(1, 5)), "close_a0")
    assert_rootless(st_, 5)


def test_highdeg_leading_close_via_reversal():
    st_, own = run_line(NoraHighdeg(), Arena.valued(5, 5), N, W,
                        [(0, 1), (2, 25), (3, 5)])
    assert own[-1] == ((5, Fraction(5)), "close_ad")
    assert_rootless(st_, 5)


def test_highdeg_even_degree_nora_first():
    st_, own = run_line(NoraHighdeg(), Arena.valued(3, 6), N, N,
                        [(6, 2), (0, 9), (3, 7)])
    assert own[0] == ((1, 0), "pin_low")
    assert own[1] == ((5, 0), "pin_high")
    assert_rootless(st_, 3)


@settings(max_examples=40)
@given(st.data())
def test_highdeg_random_lines_stay_rootless(data):
    p = data.draw(st.sampled_from(PRIMES))
    d = data.draw(st.sampled_from([5, 6]))
    first = N if d % 2 == 0 else W
    rng = random.Random(data.draw(st.integers(min_value=0, max_value=10**6)))
    arena = Arena.valued(p, d)
    state = GameState.fresh(arena, first)
    strat = NoraHighdeg()
    memory = strat.initial_memory(arena, N, first)
    while not state.finished:
        if state.mover is N:
            move, memory = strat.next_move(state, memory)
        else:
            opens = [i for i, v in enumerate(state.slots) if v is None]
            i = rng.choice(opens)
            value = Fraction(rng.randint(1, 99)) * Fraction(p) ** rng.randint(-4, 4)
            if i not in (0, d) and rng.random() < 0.3:
                value = Fraction(0)
            move = (i, value)
        state = apply_move(state, Move(*move))
    assert_rootless(state, p)


# --- closing-order membership (post-hoc recomputation) ----------------------


def _finite(orders, skip):
    return [(j, t) for j, t in enumerate(orders) if j != skip and t != INF]


@settings(max_examples=80)
@given(st.data())
def test_close_extreme_membership(data):
    d = data.draw(st.integers(min_value=3, max_value=6))
    orders = [data.draw(st.one_of(st.just(INF),
                                  st.integers(min_value=-6, max_value=6)))
              for _ in range(d + 1)]
    orders[d] = data.draw(st.integers(min_value=-6, max_value=6))
    m = close_extreme(orders, d)
    assert m % d != orders[d] % d
    finite = [(j, t) for j, t in _finite(orders, 0) if j >= 1]
    inner = [Fraction(t - orders[d], d - j) for j, t in finite if j != d]
    if inner:
        m1 = min(inner)
        m2 = min(t + j * m1 for j, t in finite)
        assert m < m2
    else:
        assert m < 0


@settings(max_examples=80)
@given(st.data())
def test_close_middle_membership(data):
    d = data.draw(st.integers(min_value=5, max_value=7))
    i = data.draw(st.integers(min_value=2, max_value=d - 2))
    orders = [data.draw(st.one_of(st.just(INF),
                                  st.integers(min_value=-6, max_value=6)))
              for _ in range(d + 1)]
    orders[0] = data.draw(st.integers(min_value=-6, max_value=6))
    orders[d] = data.draw(st.integers(min_value=-6, max_value=6))
    m = close_middle(orders, d, i)
    t0, td = orders[0], orders[d]
    assert m % (d - i) != td % (d - i)
    assert m % i != t0 % i
    js = [j for j, _ in _finite(orders, i)]
    m3 = min(Fraction(orders[j] - td, d - j) for j in js if j < d)
    m4 = max(Fraction(t0 - orders[j], j) for j in js if j > 0)
    lattice = [n for n in range(-15, 16) if m3 <= n <= m4]
    if lattice:
        m5 = min(orders[j] + (j - i) * n for j in js for n in lattice)
        assert m < m5
    else:
        assert m < 0


# --- degree 3, rational coefficients ----------------------------------------


def test_cubic_zeroes_the_other_middle_on_middle_openings():
    st_, own = run_line(NoraCubic(), Arena.valued(5, 3), N, W, [(2, 5), (3, 1)])
    assert own == [((1, 0), "steer"), ((0, Fraction(25)), "close_a0")]
    assert_rootless(st_, 5)
    st_, own = run_line(NoraCubic(), Arena.valued(7, 3), N, W, [(1, 7), (0, 49)])
    assert own == [((2, 0), "steer"), ((3, Fraction(1, 49)), "close_a3")]
    assert_rootless(st_, 7)


def test_cubic_cube_branch_frozen():
    st_, own = run_line(NoraCubic(), Arena.valued(5, 3), N, W, [(3, 1), (0, 125)])
    assert own == [((2, 0), "newton"), ((1, Fraction(25)), "cube")]
    assert sorted(forbidden_residues(Fraction(125), 5)) == [0, 3, 4]
    assert missing_residue(Fraction(125), 5) == 1
    assert_rootless(st_, 5)


def test_cubic_noncube_branch_frozen():
    st_, own = run_line(NoraCubic(), Arena.valued(5, 3), N, W, [(3, 1), (0, 10)])
    assert own == [((2, 0), "newton"), ((1, 0), "noncube")]
    assert_rootless(st_, 5)


def test_cubic_reversed_when_wanda_opens_constant():
    st_, own = run_line(NoraCubic(), Arena.valued(5, 3), N, W, [(0, 1), (3, 125)])
    assert own[0] == ((1, 0), "newton_rev")
    # reverse polynomial's extreme ratio 125 is a cube: residue dodge on a_2
    assert own[1][1] == "cube"
    assert_rootless(st_, 5)


def test_cubic_closes_a0_when_wanda_fills_the_line():
    st_, own = run_line(NoraCubic(), Arena.valued(5, 3), N, W, [(3, 1), (1, 5)])
    assert own[-1][1] == "close_a0"
    assert_rootless(st_, 5)


@settings(max_examples=40)
@given(st.data())
def test_cubic_cube_branch_invariants(data):
    p = data.draw(st.sampled_from(PRIMES))
    lead = Fraction(data.draw(st.integers(min_value=1, max_value=50)))
    c = Fraction(data.draw(st.integers(min_value=1, max_value=30)),
                 data.draw(st.integers(min_value=1, max_value=30)))
    const = lead * c ** 3
    bad = forbidden_residues(const / lead, p)
    assert 0 in bad and len(bad) <= p - 1
    assert missing_residue(const / lead, p) not in bad
    st_, own = run_line(NoraCubic(), Arena.valued(p, 3), N, W,
                        [(3, lead), (0, const)])
    assert own[-1][1] == "cube"
    assert_rootless(st_, p)


# --- degree 3, integral coefficients ----------------------------------------


def _has_unit_length_integer_slope(coeffs, p):
    return any(length == 1 and slope.denominator == 1
               for slope, length in polygon_of(coeffs, p).segments)


def test_integral_opening_and_a1_grab():
    arena = Arena.valued(5, 3, integral=True)
    st_, own = run_line(WandaIntegral(), arena, W, W, [(2, 7), (3, 2)])
    assert own == [((0, 5), "open"), ((1, 1), "unit_a1")]
    assert _has_unit_length_integer_slope(list(st_.slots), 5)
    assert qp_root_exists(list(st_.slots), 5).exists


def test_integral_shifts_to_a2_when_a1_is_divisible():
    arena = Arena.valued(5, 3, integral=True)
    st_, own = run_line(WandaIntegral(), arena, W, W, [(1, 5), (3, 1)])
    assert own == [((0, 5), "open"), ((2, 1), "shift")]
    assert _has_unit_length_integer_slope(list(st_.slots), 5)
    assert qp_root_exists(list(st_.slots), 5).exists


def test_integral_free_move_when_a1_is_a_unit():
    arena = Arena.valued(5, 3, integral=True)
    st_, own = run_line(WandaIntegral(), arena, W, W, [(1, 3), (3, 25)])
    assert own[1] == ((2, 0), "free_mid")
    assert qp_root_exists(list(st_.slots), 5).exists


@settings(max_examples=60)
@given(st.data())
def test_integral_random_lines_have_roots(data):
    p = data.draw(st.sampled_from(PRIMES))
    arena = Arena.valued(p, 3, integral=True)
    rng = random.Random(data.draw(st.integers(min_value=0, max_value=10**6)))
    state = GameState.fresh(arena, W)
    strat = WandaIntegral()
    memory = strat.initial_memory(arena, W, W)
    while not state.finished:
        if state.mover is W:
            move, memory = strat.next_move(state, memory)
        else:
            opens = [i for i, v in enumerate(state.slots) if v is None]
            i = rng.choice(opens)
            value = Fraction(rng.randint(1, 200)) * p ** rng.randint(0, 3)
            if i not in (0, 3) and rng.random() < 0.25:
                value = Fraction(0)
            move = (i, value)
        state = apply_move(state, Move(*move))
    coeffs = [Fraction(v) for v in state.slots]
    assert _has_unit_length_integer_slope(coeffs, p)
    assert qp_root_exists(coeffs, p).exists


# --- multi-prime closing value ----------------------------------------------


def test_multi_prime_frozen_values():
    assert multi_prime_close([(2, 1), (3, 2)]) == Fraction(11, 18)
    assert multi_prime_close([(5, 3)]) == Fraction(1, 125)
    assert multi_prime_close([(2, 2), (7, 1)]) == Fraction(11, 28)


def test_multi_prime_rejects_bad_inputs():
    with pytest.raises(ValueError):
        multi_prime_close([(3, 1), (3, 2)])
    with pytest.raises(ValueError):
        multi_prime_close([(5, 0)])
    assert MULTI_PRIME_EXCLUDED_DEGREES == (1, 3, 4)


@settings(max_examples=50)
@given(st.data())
def test_multi_prime_orders_are_exact(data):
    primes = data.draw(st.lists(st.sampled_from([2, 3, 5, 7, 11, 13]),
                                min_size=1, max_size=4, unique=True))
    pairs = [(p, data.draw(st.integers(min_value=1, max_value=6)))
             for p in primes]
    q = multi_prime_close(pairs)
    for p, k in pairs:
        assert ord_p(q, p) == -k


def test_multi_prime_move_pins_then_closes():
    arena = Arena.valued(2, 5)
    state = GameState.fresh(arena, W)
    state = apply_move(state, Move(2, Fraction(3)))
    assert multi_prime_move(state, (2, 3)) == (1, 0)
    state = apply_move(state, Move(*multi_prime_move(state, (2, 3))))
    state = apply_move(state, Move(0, Fraction(8)))
    assert multi_prime_move(state, (2, 3)) == (4, 0)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_multi_prime_games_are_rootless_at_every_prime(data):
    primes = data.draw(st.sampled_from([(2, 3), (2, 5), (3, 7), (2, 3, 5)]))
    d = data.draw(st.sampled_from([2, 5, 6, 8]))
    first = N if d % 2 == 0 else W
    rng = random.Random(data.draw(st.integers(min_value=0, max_value=10**6)))
    state = GameState.fresh(Arena.valued(primes[0], d), first)
    while not state.finished:
        if state.mover is N:
            mv = multi_prime_move(state, primes)
        else:
            opens = [i for i, v in enumerate(state.slots) if v is None]
            i = rng.choice(opens)
            if i not in (0, d) and rng.random() < 0.25:
                v = Fraction(0)
            else:
                v = Fraction(rng.choice([1, -1]) * rng.randint(1, 60),
                             rng.randint(1, 60))
            mv = (i, v)
        state = apply_move(state, Move(*mv))
    for p in primes:
        assert not qp_root_exists(list(state.slots), p).exists


# --- dispatch ---------------------------------------------------------------


def test_classify_valued():
    assert classify_valued(1, N) is W and classify_valued(1, W) is W
    assert classify_valued(2, N) is N and classify_valued(2, W) is W
    assert classify_valued(3, W) is N and classify_valued(3, N) is W
    assert classify_valued(4, N) is N
    assert classify_valued(5, W) is N
    assert classify_valued(3, N, integral=True) is W
    assert classify_valued(3, W, integral=True) is W
    with pytest.raises(OutOfScope):
        classify_valued(4, N, integral=True)


def test_select_valued_strategy_ids():
    cases = [
        (Arena.valued(5, 2), N, N, "nora_quad"),
        (Arena.valued(5, 3), N, W, "nora_cubic"),
        (Arena.valued(5, 4), N, N, "nora_quartic"),
        (Arena.valued(5, 5), N, W, "nora_highdeg"),
        (Arena.valued(3, 6), N, N, "nora_highdeg"),
        (Arena.valued(5, 3, integral=True), W, W, "wanda_integral"),
    ]
    for arena, role, first, expected in cases:
        assert select_valued_strategy(arena, role, first).id == expected


def test_select_valued_strategy_rejects_losing_or_uncovered_seats():
    for arena, role, first in [
        (Arena.valued(5, 2), N, W),     # Nora not last
        (Arena.valued(5, 3), W, W),     # winning seat is Nora's
        (Arena.valued(5, 5), W, W),
        (Arena.valued(5, 3, integral=True), N, N),
    ]:
        with pytest.raises(NotApplicable):
            select_valued_strategy(arena, role, first)
