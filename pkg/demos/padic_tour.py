"""
Roots in Q_p: polygons, Hensel, and a blocked quadratic
=======================================================
"""

from fractions import Fraction

from polygame.game import Arena, GameState, Move, adjudicate_valued, apply_move
from polygame.padic import hensel_lift, polygon_of, qp_root_exists, root_orders
from polygame.strat_valued import NoraQuad
from polygame.zring import Player

# ---------------------------------------------------------------------------
# Newton polygons read root orders off the coefficients

# f = 25 + x^2/5 + x^3 over Q_5: points (0,2), (2,-1), (3,0)
poly = polygon_of([Fraction(25), 0, Fraction(1, 5), 1], 5)
print("polygon of 25 + x^2/5 + x^3 at p=5:")
print("  vertices " + " ".join(f"({k}, {o})" for k, o in poly.vertices))
for order, count in root_orders(poly):
    print(f"  {count} root(s) of order {order}")
# fractional orders mean the roots live in ramified extensions, never Q_5

# ---------------------------------------------------------------------------
# Hensel: sqrt(2) exists 7-adically

x = hensel_lift([-2, 0, 1], 7, 3, 6)
print(f"\nsqrt(2) in Z_7: {x} squares to {x * x} = 2 mod 7^6 "
      f"({(x * x - 2) % 7 ** 6 == 0})")

cert = qp_root_exists([-2, 0, 1], 7)
print(f"certificate: exists={cert.exists}, side={cert.side}, "
      f"residue={cert.residue}")
cert = qp_root_exists([-2, 0, 1], 5)
print(f"same polynomial at p=5: exists={cert.exists} ({cert.detail})")

# ---------------------------------------------------------------------------
# The quadratic game over Q_5

# Nora opens a_1 = 0; whatever Wanda does, the closing coefficient sets
# the polygon slope to a half-integer, and no root order is an integer.

arena = Arena.valued(5, 2)
nora = NoraQuad()
memory = nora.initial_memory(arena, Player.NORA, Player.NORA)
state = GameState.fresh(arena, Player.NORA)

script = iter([(0, Fraction(7, 25))])
while not state.finished:
    if state.mover is Player.NORA:
        (i, v), memory = nora.next_move(state, memory)
    else:
        i, v = next(script)
    state = apply_move(state, Move(i, v))
    print(f"  a_{i} <- {v}")

winner, cert = adjudicate_valued(state)
print(f"  winner: {winner}")
print(f"  polygon roots: {root_orders(polygon_of(list(state.slots), 5))}")
print(f"  oracle says exists={cert.exists}: {cert.detail}")
