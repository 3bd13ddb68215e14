"""
Blocking several fields at once
===============================

Two constructions past the single-prime games: Nora holding a polynomial
rootless over Q_2 and Q_3 simultaneously, and a cubic certified to have
no root in any abelian extension of Q.
"""

import random
from fractions import Fraction

from polygame.abelian import NoraAbelianCubic, find_abelian_prime, s3_certificate
from polygame.game import Arena, GameState, Move, apply_move
from polygame.padic import discriminant, qp_root_exists
from polygame.strat_valued import multi_prime_move
from polygame.zring import Player

N, W = Player.NORA, Player.WANDA

# ---------------------------------------------------------------------------
# One game, two primes

# The closing value sum(p_j^-k_j) has exact order -k_j at every p_j at
# once, so Nora's per-prime order arithmetic survives the combination.

primes = (2, 3)
arena = Arena.valued(2, 5)
rng = random.Random(7)
state = GameState.fresh(arena, W)
while not state.finished:
    if state.mover is N:
        i, v = multi_prime_move(state, primes)
        who = "Nora"
    else:
        i = rng.choice([j for j, s in enumerate(state.slots) if s is None])
        v = Fraction(rng.randint(1, 30), rng.randint(1, 30))
        who = "Wanda"
    state = apply_move(state, Move(i, v))
    print(f"  {who}: a_{i} <- {v}")

for p in primes:
    cert = qp_root_exists(list(state.slots), p)
    print(f"  root in Q_{p}? {cert.exists}")

# ---------------------------------------------------------------------------
# No root in any abelian extension

# An irreducible cubic with negative discriminant has Galois group S_3,
# which no abelian field can see. Nora plays her usual Q_p blocking game
# but steers the discriminant negative on the final move; irreducibility
# comes free from p-adic rootlessness.

print(f"\na prime tuned for degree 9 closings: {find_abelian_prime(9).p}")

arena = Arena.valued(5, 3)
nora = NoraAbelianCubic()
memory = nora.initial_memory(arena, N, W)
state = GameState.fresh(arena, W)
script = iter([(3, Fraction(2)), (0, Fraction(16, 27))])  # a_0 = a_3 * (2/3)^3
while not state.finished:
    if state.mover is N:
        (i, v), memory = nora.next_move(state, memory)
        who = "Nora"
    else:
        i, v = next(script)
        who = "Wanda"
    state = apply_move(state, Move(i, v))
    print(f"  {who}: a_{i} <- {v}")

coeffs = list(state.slots)
print(f"  discriminant: {discriminant(coeffs)}")
print(f"  certificate: {s3_certificate(coeffs, 5)}")
print("  (Wanda's cube bait a_0/a_3 = (2/3)^3 would hand her the "
      "rational root -2/3; Nora's middle kills it)")
