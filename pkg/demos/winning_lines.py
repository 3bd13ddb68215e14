"""
Watching the strategies play
============================

Two complete games with commentary: Wanda forcing a root over Z/16 at
degree 3, then Nora shutting a quadratic out over Z/9.
"""

from polygame.game import Arena, GameState, Move, adjudicate_cyclic, apply_move
from polygame.strat_zmod import select_strategy
from polygame.zring import Player

N, W = Player.NORA, Player.WANDA


def show(state, note=""):
    cells = "  ".join(
        f"a_{i}={'?' if v is None else v}" for i, v in enumerate(state.slots))
    print(f"  {cells}   {note}")


# ---------------------------------------------------------------------------
# Wanda first on Z/16, degree 3

# 16 = 2^4 at degree 3 is Wanda's: her opener a_0 = 12 = 4 * (odd)
# leaves every Nora reply with a completion x = 2u whose square term
# she can tune.

arena = Arena.cyclic(16, 3)
wanda = select_strategy(16, 3, W, W)
memory = wanda.initial_memory(arena, W, W)
state = GameState.fresh(arena, W)

nora_replies = iter([(1, 4), (3, 7)])
while not state.finished:
    if state.mover is W:
        (i, v), memory = wanda.next_move(state, memory)
        state = apply_move(state, Move(i, v))
        show(state, f"Wanda plays a_{i} = {v}")
    else:
        i, v = next(nora_replies)
        state = apply_move(state, Move(i, v))
        show(state, f"Nora tries a_{i} = {v}")

winner, roots = adjudicate_cyclic(state)
print(f"  winner: {winner}, roots mod 16: {roots}\n")

# ---------------------------------------------------------------------------
# Nora first on Z/9, degree 2

# Even degree belongs to the opener. Nora grabs a_0 = 1 and then
# answers Wanda's move with a coefficient that starves every residue
# class of a root.

arena = Arena.cyclic(9, 2)
nora = select_strategy(9, 2, N, N)
memory = nora.initial_memory(arena, N, N)
state = GameState.fresh(arena, N)

wanda_replies = iter([(2, 3)])
while not state.finished:
    if state.mover is N:
        (i, v), memory = nora.next_move(state, memory)
        state = apply_move(state, Move(i, v))
        show(state, f"Nora plays a_{i} = {v}")
    else:
        i, v = next(wanda_replies)
        state = apply_move(state, Move(i, v))
        show(state, f"Wanda tries a_{i} = {v}")

winner, roots = adjudicate_cyclic(state)
print(f"  winner: {winner}, roots mod 9: {roots}")
print("  (3x^2 + 3x + 1: plug in all nine residues and nothing vanishes)")
