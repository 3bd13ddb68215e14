"""Coefficient games on polynomials over Z/N and Q_p.

Two players alternately fix coefficients of a degree-d polynomial, choosing
both the slot and the value each turn; Wanda wins iff the finished
polynomial has a root in the arena's fraction ring. The package provides
the game engine, an exhaustive solver for cyclic arenas, closed-form
strategies with certification harnesses, p-adic machinery, and an HTTP
session service for interactive play.
"""

from .errors import (
    DegeneratePolygon,
    GameOver,
    HenselNotApplicable,
    IllegalMove,
    IncompletePolynomial,
    NotApplicable,
    NotAUnit,
    NotYourTurn,
    OutOfScope,
    ResourceLimit,
    RoleLoses,
    SearchLimit,
    UnknownSession,
)
from .game import (
    Arena,
    GameState,
    Move,
    PartialPolynomial,
    adjudicate_cyclic,
    adjudicate_valued,
    apply_move,
    legal_moves,
    replay,
)
from .padic import (
    NewtonPolygon,
    RootCertificate,
    ValuedFieldConfig,
    hensel_lift,
    is_cube_in_Qp,
    newton_polygon,
    ord_p,
    qp_root_exists,
    root_orders,
    zp_root_exists,
)
from .abelian import find_abelian_prime, s3_certificate
from .api import SessionStore, build_app
from .solver import PackedState, SolveResult, best_move, solve, solve_table
from .strat_valued import select_valued_strategy
from .strat_zmod import select_strategy
from .verify import (
    AdversaryUniverse,
    CertificationReport,
    certify_strategy,
    theorem1_table,
    valued_certification_suite,
)
from .zring import (
    CyclicRing,
    GameClass,
    Player,
    RingElem,
    WinnerRule,
    classify,
    count_roots,
    factorize,
    game_class,
    inverse,
    is_cube_free,
)

__version__ = "0.1.0"
