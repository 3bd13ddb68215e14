"""Game state machine: arenas, legality, turn order, and adjudication.

A game fills the d+1 coefficient slots of a polynomial, one slot per move,
players alternating and choosing both the slot and the value. Wanda wins a
finished game iff the polynomial has a root in the arena's fraction ring
(Z/N itself for cyclic arenas, Q_p for valued ones).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import GameOver, IllegalMove, IncompletePolynomial, OutOfScope
from .padic import ValuedFieldConfig, ord_p, qp_root_exists
from .zring import CyclicRing, Player, count_roots

CYCLIC = "cyclic"
VALUED = "valued"


@dataclass(frozen=True)
class Arena:
    """Board parameters: coefficient domain, degree, and zero rules."""

    kind: str
    degree: int
    ring: CyclicRing | None = None
    field: ValuedFieldConfig | None = None
    allow_zero_leading: bool = False
    integral: bool = False  # valued arenas: played values must have ord >= 0

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"degree must be >= 1, got {self.degree}")
        if self.kind == CYCLIC:
            assert self.ring is not None and self.field is None
        elif self.kind == VALUED:
            assert self.field is not None and self.ring is None
        else:
            raise ValueError(f"unknown arena kind {self.kind!r}")

    @staticmethod
    def cyclic(n: int, degree: int, allow_zero_leading: bool = False) -> "Arena":
        return Arena(CYCLIC, degree, ring=CyclicRing(n),
                     allow_zero_leading=allow_zero_leading)

    @staticmethod
    def valued(p: int, degree: int, ramification_denominator: int = 1,
               allow_zero_leading: bool = False, integral: bool = False) -> "Arena":
        cfg = ValuedFieldConfig(p, ramification_denominator)
        return Arena(VALUED, degree, field=cfg,
                     allow_zero_leading=allow_zero_leading, integral=integral)

    @property
    def modulus(self) -> int:
        assert self.ring is not None
        return self.ring.modulus

    @property
    def p(self) -> int:
        assert self.field is not None
        return self.field.p


class Move(NamedTuple):
    index: int
    value: object  # int residue (cyclic) or Fraction (valued)


@dataclass(frozen=True)
class PartialPolynomial:
    """Coefficient slots a_0..a_d; None marks an unset slot."""

    degree: int
    slots: tuple

    @staticmethod
    def empty(degree: int) -> "PartialPolynomial":
        return PartialPolynomial(degree, (None,) * (degree + 1))

    def set(self, index: int, value) -> "PartialPolynomial":
        s = list(self.slots)
        s[index] = value
        return PartialPolynomial(self.degree, tuple(s))

    @property
    def set_count(self) -> int:
        return sum(1 for v in self.slots if v is not None)

    def is_complete(self) -> bool:
        return all(v is not None for v in self.slots)

    def open_indices(self) -> tuple:
        return tuple(i for i, v in enumerate(self.slots) if v is None)


@dataclass(frozen=True)
class GameState:
    """Immutable snapshot: arena, partial polynomial, first mover, and log."""

    arena: Arena
    poly: PartialPolynomial
    first: Player
    move_log: tuple = ()

    @staticmethod
    def fresh(arena: Arena, first: Player) -> "GameState":
        return GameState(arena, PartialPolynomial.empty(arena.degree), first)

    @property
    def slots(self) -> tuple:
        return self.poly.slots

    @property
    def set_count(self) -> int:
        return self.poly.set_count

    @property
    def finished(self) -> bool:
        return self.poly.is_complete()

    @property
    def mover(self) -> Player | None:
        if self.finished:
            return None
        return self.first if self.poly.set_count % 2 == 0 else self.first.other


@dataclass(frozen=True)
class LegalMoves:
    open_indices: tuple
    zero_excluded: tuple  # subset of open_indices where value 0 is not allowed


def zero_excluded_at(arena: Arena, index: int) -> bool:
    # allow_zero_leading relaxes the top coefficient only; a_0 stays nonzero.
    if index == arena.degree:
        return not arena.allow_zero_leading
    return index == 0


def legal_moves(state: GameState) -> LegalMoves:
    """Open indices and their zero rules; raises once the board is full."""
    if state.finished:
        raise GameOver("all slots are assigned")
    open_idx = state.poly.open_indices()
    excluded = tuple(i for i in open_idx if zero_excluded_at(state.arena, i))
    return LegalMoves(open_idx, excluded)


def check_value(arena: Arena, index: int, value) -> object:
    """Validate and canonicalize a coefficient value for the arena."""
    if arena.kind == CYCLIC:
        if not isinstance(value, int):
            raise IllegalMove(f"cyclic arenas take integer residues, got {value!r}")
        v = value % arena.modulus
    else:
        try:
            v = Fraction(value)
        except (TypeError, ValueError) as exc:
            raise IllegalMove(f"valued arenas take rationals, got {value!r}") from exc
        if arena.integral and v != 0 and ord_p(v, arena.p) < 0:
            raise IllegalMove(f"integral arena: ord_{arena.p}({v}) < 0")
    if v == 0 and zero_excluded_at(arena, index):
        raise IllegalMove(f"coefficient a_{index} may not be zero")
    return v


def apply_move(state: GameState, move: Move) -> GameState:
    """Apply one move for the side to move; returns the successor state."""
    if state.finished:
        raise GameOver("all slots are assigned")
    index, value = move
    if not 0 <= index <= state.arena.degree:
        raise IllegalMove(f"index {index} out of range 0..{state.arena.degree}")
    if state.poly.slots[index] is not None:
        raise IllegalMove(f"a_{index} is already set")
    v = check_value(state.arena, index, value)
    mover = state.mover
    return GameState(
        state.arena,
        state.poly.set(index, v),
        state.first,
        state.move_log + ((mover, index, v),),
    )


def replay(arena: Arena, first: Player, moves) -> GameState:
    state = GameState.fresh(arena, first)
    for index, value in moves:
        state = apply_move(state, Move(index, value))
    return state


def adjudicate_cyclic(state: GameState) -> tuple:
    """(winner, witness roots) of a finished cyclic game."""
    assert state.arena.kind == CYCLIC
    if not state.finished:
        raise IncompletePolynomial("cannot adjudicate an unfinished game")
    n, witnesses = count_roots(state.poly.slots, state.arena.modulus)
    return (Player.WANDA if n > 0 else Player.NORA), witnesses


def adjudicate_valued(state: GameState) -> tuple:
    """(winner, root certificate) of a finished valued game over Q_p."""
    assert state.arena.kind == VALUED
    if not state.finished:
        raise IncompletePolynomial("cannot adjudicate an unfinished game")
    if state.arena.field.ramification_denominator != 1:
        raise OutOfScope("full adjudication is only computable over Q_p itself; "
                         "ramified arenas are certificate-only")
    cert = qp_root_exists(list(state.poly.slots), state.arena.p)
    return (Player.WANDA if cert.exists else Player.NORA), cert


# ---------------------------------------------------------------------------
# JSON wire format (shared by the session API and persistence)


def value_to_wire(arena: Arena, v) -> str:
    if v is None:
        return "unset"
    if arena.kind == CYCLIC:
        return str(v)
    return str(Fraction(v))


def value_from_wire(arena: Arena, s: str):
    if arena.kind == CYCLIC:
        try:
            return int(s, 10)
        except ValueError as exc:
            raise IllegalMove(f"expected a decimal residue string, got {s!r}") from exc
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise IllegalMove(f"expected a rational 'num/den' string, got {s!r}") from exc


def arena_to_json(arena: Arena) -> dict:
    out = {"kind": arena.kind, "degree": arena.degree,
           "allow_zero_leading": arena.allow_zero_leading}
    if arena.kind == CYCLIC:
        out["n"] = arena.modulus
    else:
        out["p"] = arena.p
        out["ramification_denominator"] = arena.field.ramification_denominator
        out["integral"] = arena.integral
    return out


def arena_from_json(doc: dict) -> Arena:
    kind = doc.get("kind")
    degree = int(doc["degree"])
    flag = bool(doc.get("allow_zero_leading", False))
    if kind == CYCLIC:
        return Arena.cyclic(int(doc["n"]), degree, flag)
    if kind == VALUED:
        return Arena.valued(int(doc["p"]), degree,
                            int(doc.get("ramification_denominator", 1)),
                            flag, bool(doc.get("integral", False)))
    raise ValueError(f"unknown arena kind {kind!r}")


def state_to_json(state: GameState) -> dict:
    """Full wire document for a state; values as decimal/fraction strings."""
    arena = state.arena
    doc = {
        "arena": arena_to_json(arena),
        "first": str(state.first),
        "to_move": None if state.finished else str(state.mover),
        "finished": state.finished,
        "slots": [value_to_wire(arena, v) for v in state.poly.slots],
        "move_log": [
            {"player": str(pl), "index": i, "value": value_to_wire(arena, v)}
            for pl, i, v in state.move_log
        ],
    }
    if not state.finished:
        lm = legal_moves(state)
        doc["legal_moves"] = {"open_indices": list(lm.open_indices),
                              "zero_excluded": list(lm.zero_excluded)}
    return doc


def state_from_json(doc: dict) -> GameState:
    arena = arena_from_json(doc["arena"])
    first = Player(doc["first"])
    moves = [(e["index"], value_from_wire(arena, e["value"]))
             for e in doc["move_log"]]
    return replay(arena, first, moves)
