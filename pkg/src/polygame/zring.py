"""Exact arithmetic in Z/NZ plus the winner classification for coefficient games.

Everything here is deliberately elementary: trial-division factoring, Horner
evaluation, exhaustive root counting. Arena moduli stay well under 10**6, so
nothing fancier pays for itself.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import IncompletePolynomial, NotAUnit, OutOfScope


class Player(enum.Enum):
    """The two sides. Wanda wants the finished polynomial to have a root."""

    NORA = "nora"
    WANDA = "wanda"

    @property
    def other(self) -> "Player":
        return Player.WANDA if self is Player.NORA else Player.NORA

    def __str__(self) -> str:
        return self.value


class WinnerRule(enum.Enum):
    LAST_PLAYER_WINS = "last_player_wins"
    WANDA_ALWAYS = "wanda_always"


@dataclass(frozen=True)
class GameClass:
    """Which of the two winner regimes a cyclic arena falls into."""

    winner_rule: WinnerRule


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n as ascending (prime, exponent) pairs."""
    if n < 2:
        raise ValueError(f"factorize needs n >= 2, got {n}")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def is_cube_free(n: int) -> bool:
    """True iff no cube of a prime divides n."""
    return all(e <= 2 for _, e in factorize(n))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == [(n, 1)]


@lru_cache(maxsize=256)
def units(n: int) -> tuple[int, ...]:
    """All units of Z/n, ascending."""
    return tuple(x for x in range(1, n) if math.gcd(x, n) == 1)


def inverse(value: int, modulus: int) -> int:
    """Multiplicative inverse of value in Z/modulus."""
    v = value % modulus
    if math.gcd(v, modulus) != 1:
        raise NotAUnit(f"{value} is not a unit mod {modulus}")
    return pow(v, -1, modulus)


class CyclicRing:
    """Z/NZ with its factorization and unit count precomputed."""

    __slots__ = ("modulus", "factorization", "unit_count")

    def __init__(self, modulus: int):
        if modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {modulus}")
        self.modulus = modulus
        self.factorization = factorize(modulus)
        phi = modulus
        for p, _ in self.factorization:
            phi -= phi // p
        self.unit_count = phi

    def elem(self, value: int) -> "RingElem":
        return RingElem(value % self.modulus, self)

    def units(self) -> tuple[int, ...]:
        return units(self.modulus)

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclicRing) and other.modulus == self.modulus

    def __hash__(self) -> int:
        return hash(("CyclicRing", self.modulus))

    def __repr__(self) -> str:
        return f"CyclicRing({self.modulus})"


class RingElem:
    """A canonical residue paired with its ring."""

    __slots__ = ("value", "ring")

    def __init__(self, value: int, ring: CyclicRing):
        self.value = value % ring.modulus
        self.ring = ring

    def inverse(self) -> "RingElem":
        return RingElem(inverse(self.value, self.ring.modulus), self.ring)

    def __add__(self, other):
        return RingElem(self.value + _raw(other), self.ring)

    def __sub__(self, other):
        return RingElem(self.value - _raw(other), self.ring)

    def __neg__(self):
        return RingElem(-self.value, self.ring)

    def __mul__(self, other):
        return RingElem(self.value * _raw(other), self.ring)

    def __pow__(self, k: int):
        return RingElem(pow(self.value, k, self.ring.modulus), self.ring)

    def __eq__(self, other) -> bool:
        if isinstance(other, RingElem):
            return other.value == self.value and other.ring == self.ring
        return self.value == other % self.ring.modulus

    def __hash__(self) -> int:
        return hash((self.value, self.ring.modulus))

    def __repr__(self) -> str:
        return f"RingElem({self.value}, mod {self.ring.modulus})"


def _raw(x) -> int:
    return x.value if isinstance(x, RingElem) else x


def evaluate(coeffs, x: int, modulus: int) -> int:
    """Horner evaluation of sum(coeffs[i] * x**i) mod modulus."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % modulus
    return acc


def count_roots(coeffs, modulus: int) -> tuple[int, list[int]]:
    """Exact root count of a fully assigned coefficient array mod modulus.

    coeffs is ascending (constant first); any None entry means an unset slot
    and is rejected. Returns (count, ascending witness list).
    """
    filled = list(coeffs)
    if any(c is None for c in filled):
        raise IncompletePolynomial("all coefficients must be assigned before adjudication")
    witnesses = [x for x in range(modulus) if evaluate(filled, x, modulus) == 0]
    return len(witnesses), witnesses


def last_player(d: int, first: Player) -> Player:
    """Who makes move d+1: the first mover iff d is even."""
    return first if d % 2 == 0 else first.other


def game_class(n: int, d: int) -> GameClass:
    """Winner regime for degree-d games over Z/n, composite n only."""
    if n < 4:
        raise ValueError(f"composite modulus must be >= 4, got {n}")
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    if is_prime(n):
        raise OutOfScope(f"n = {n} is prime; only composite moduli are classified here")
    if d == 1:
        return GameClass(WinnerRule.WANDA_ALWAYS)
    if d % 2 == 1 and not is_cube_free(n):
        if d > 3 and n % 16 == 0:
            n2 = n // 16
            if n2 % 2 == 1 and (n2 == 1 or is_cube_free(n2)):
                # the one escape hatch: 16 times an odd cube-free part
                return GameClass(WinnerRule.LAST_PLAYER_WINS)
        return GameClass(WinnerRule.WANDA_ALWAYS)
    return GameClass(WinnerRule.LAST_PLAYER_WINS)


def classify(n: int, d: int, first: Player) -> Player:
    """Predicted winner of the degree-d game over Z/n when `first` moves first."""
    rule = game_class(n, d).winner_rule
    if rule is WinnerRule.WANDA_ALWAYS:
        return Player.WANDA
    return last_player(d, first)
