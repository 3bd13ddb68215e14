"""Exception types shared across the engine, solver, oracles, and services."""


class NotAUnit(ValueError):
    """Inverse requested for a residue that is not coprime to the modulus."""


class IncompletePolynomial(ValueError):
    """An operation needing every coefficient hit an unset slot."""


class GameOver(Exception):
    """No moves remain: all slots are already assigned."""


class IllegalMove(ValueError):
    """Move targets an occupied slot or violates the nonzero-extreme rule."""


class ResourceLimit(RuntimeError):
    """A computation exceeded its configured state or candidate budget."""


class NotApplicable(Exception):
    """Strategy asked to act from a position outside its applicability window."""


class RoleLoses(Exception):
    """The requested role is the predicted loser for this arena.

    Carries the predicted winner so callers can report or fall back to
    exhaustive play.
    """

    def __init__(self, predicted):
        super().__init__(f"requested role loses; predicted winner is {predicted}")
        self.predicted = predicted


class DegeneratePolygon(ValueError):
    """Polygon construction requires finite end valuations and got none."""


class HenselNotApplicable(ValueError):
    """Seed residue fails the quadratic-convergence precondition."""


class SearchLimit(RuntimeError):
    """A bounded search ran out of candidates before finding a witness."""


class OutOfScope(ValueError):
    """Arena parameters fall outside the classified (composite-N) regime."""


class UnknownSession(KeyError):
    """No live session with the given id."""


class NotYourTurn(Exception):
    """Move posted for the side whose turn it is not."""
