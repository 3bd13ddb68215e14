"""
Who wins the coefficient game over Z/N
======================================

Nora and Wanda take turns fixing coefficients of a degree-d polynomial
over Z/N, both index and value free, extremes nonzero. Wanda wants a
root in Z/N; Nora wants none. For composite N the winner is decided by
d and the cube structure of N alone, and the retrograde solver can
confirm every small case.
"""

from polygame.game import Arena, GameState
from polygame.solver import solve
from polygame.zring import Player, classify, last_player

# ---------------------------------------------------------------------------
# The classification in one table

# With Wanda moving first the split is visible: in last-player games
# the final move is Nora's, so odd-degree cells go to her exactly when
# no cube divides N (with the curious 16-exception at d = 5).
print("winner by (N, d), Wanda moving first:")
print("          " + "".join(f"d={d:<7}" for d in range(1, 6)))
for n in (4, 6, 8, 9, 12, 15, 16, 27, 48):
    row = [str(classify(n, d, Player.WANDA)) for d in range(1, 6)]
    print(f"  N={n:<4}  " + "".join(f"{w:<8}" for w in row))

# The d=1 column is all Wanda: she just solves a_0 + a_1 x = 0 for x,
# picking a_1 a unit. Even d belongs to the first mover, who is also
# the last. Odd d >= 3 splits on the cube structure of N. (With Nora
# first the table collapses: she is never the last mover on odd d.)

# ---------------------------------------------------------------------------
# The solver agrees

print("\nsolver cross-check on three cells:")
for n, d, first in ((9, 3, Player.NORA), (16, 3, Player.WANDA),
                    (8, 5, Player.NORA)):
    predicted = classify(n, d, first)
    result = solve(GameState.fresh(Arena.cyclic(n, d), first))
    marker = "ok" if result.winner is predicted else "MISMATCH"
    print(f"  N={n} d={d} {first} first: predicted {predicted}, "
          f"solved {result.winner} ({result.states_visited} states) {marker}")

# ---------------------------------------------------------------------------
# The sharpest boundary

# 8 = 2^3 hands every odd degree to Wanda outright, but 16 = 2^4 with
# d > 3 snaps back to the last player. Degree 5 shows both sides.

for n in (8, 16):
    for first in (Player.NORA, Player.WANDA):
        w = classify(n, 5, first)
        lp = last_player(5, first)
        note = "last player" if w is lp and n == 16 else "Wanda regardless"
        print(f"  N={n} d=5, {first} first -> {w} ({note})")
