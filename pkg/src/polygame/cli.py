"""Command-line surface: solving, terminal play, demos, verification, serving.

Demo subcommands print one JSON document; verification subcommands print
JSONL (one record per row or report) and exit 1 when anything failed to
match or win, so shell pipelines can gate on them.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import abelian
from .api import NAMED_STRATEGIES, ApiError, SessionStore, build_app
from .errors import (
    DegeneratePolygon,
    IllegalMove,
    NotApplicable,
    OutOfScope,
    ResourceLimit,
)
from .game import (
    Arena,
    GameState,
    Move,
    apply_move,
    arena_from_json,
    value_to_wire,
)
from .padic import discriminant, ord_p, polygon_of, qp_root_exists
from .solver import DEFAULT_BUDGET, solve
from .strat_valued import (
    MULTI_PRIME_EXCLUDED_DEGREES,
    multi_prime_move,
    select_valued_strategy,
    slot_orders,
)
from .verify import DEFAULT_GRID, AdversaryUniverse, certify_strategy, theorem1_table
from .zring import Player


def _emit(doc, as_json: bool, human_lines=None) -> None:
    if as_json or human_lines is None:
        print(json.dumps(doc, sort_keys=True))
    else:
        for line in human_lines:
            print(line)


def _parse_coeffs(text: str) -> list:
    try:
        return [Fraction(part) for part in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: bad --coeffs: {exc}", file=sys.stderr)
        raise SystemExit(2)


# ---------------------------------------------------------------------------
# solve


def _cmd_solve(args) -> int:
    state = GameState.fresh(Arena.cyclic(args.n, args.d), Player(args.first))
    try:
        result = solve(state, budget=args.budget)
    except ResourceLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    doc = {"winner": str(result.winner),
           "pv": [[i, v] for i, v in result.principal_variation],
           "states_visited": result.states_visited}
    _emit(doc, args.json, [
        f"winner: {doc['winner']} (first: {args.first}, Z/{args.n}, degree {args.d})",
        "pv: " + " ".join(f"a_{i}={v}" for i, v in result.principal_variation),
        f"states visited: {result.states_visited}",
    ])
    return 0


# ---------------------------------------------------------------------------
# terminal play (cyclic and valued share the session store)


def _board_line(payload) -> str:
    cells = []
    for i, v in enumerate(payload["slots"]):
        cells.append(f"a_{i}=" + ("?" if v == "unset" else v))
    return "  ".join(cells)


def _print_result(payload) -> None:
    result = payload["result"]
    print(f"finished: winner {result['winner']}")
    if "witnesses" in result:
        print(f"roots: {result['witnesses'] or 'none'}")
    else:
        cert = result["certificate"]
        detail = cert.get("detail") or cert.get("kind")
        if cert["exists"]:
            print(f"root certificate: {cert['witness'] or cert['residue']} ({detail})")
        else:
            print(f"no root: {detail}")


def _play_loop(store: SessionStore, create_doc: dict) -> int:
    try:
        payload = store.create(create_doc)
    except ApiError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    arena = create_doc["arena"]
    print(f"engine plays {payload['engine_role']} ({payload['strategy']}); "
          f"you play the other seat")
    for entry in payload["move_log"]:
        print(f"engine: a_{entry['index']} = {entry['value']}")
    while payload["status"] == "open":
        print(_board_line(payload))
        try:
            line = input(f"your move as {payload['to_move']} (index value): ")
        except EOFError:
            print("aborted")
            return 0
        parts = line.split()
        if len(parts) != 2:
            print("expected: <index> <value>")
            continue
        before = len(payload["move_log"])
        try:
            payload = store.move(payload["id"],
                                 {"index": int(parts[0]), "value": parts[1]})
        except (IllegalMove, ValueError) as exc:
            print(f"illegal: {exc}")
            continue
        for entry in payload["move_log"][before + 1:]:
            print(f"engine: a_{entry['index']} = {entry['value']}")
    print(_board_line(payload))
    _print_result(payload)
    return 0


def _cmd_play(args) -> int:
    doc = {"arena": {"kind": "cyclic", "n": args.n, "degree": args.d},
           "engine_role": args.engine_role}
    if args.first is not None:
        doc["first"] = args.first
    return _play_loop(SessionStore(), doc)


def _valued_first(arena_doc: dict, engine_role: str, stated: str | None) -> str:
    if stated is not None:
        return stated
    arena = arena_from_json(arena_doc)
    for first in (Player.NORA, Player.WANDA):
        try:
            select_valued_strategy(arena, Player(engine_role), first)
            return str(first)
        except (NotApplicable, OutOfScope):
            continue
    return str(Player(engine_role))  # create() will report the seat problem


def _cmd_play_padic(args) -> int:
    arena_doc = {"kind": "valued", "p": args.p, "degree": args.d,
                 "integral": args.integral}
    return _play_loop(SessionStore(), {
        "arena": arena_doc,
        "engine_role": args.engine_role,
        "first": _valued_first(arena_doc, args.engine_role, args.first),
    })


# ---------------------------------------------------------------------------
# demos


def _demo_value(rng, p: int, zero_ok: bool) -> Fraction:
    if zero_ok and rng.random() < 0.2:
        return Fraction(0)
    q = Fraction(rng.choice([1, -1]) * rng.randint(1, 50), rng.randint(1, 50))
    return q * Fraction(p) ** (rng.randint(-3, 3) - ord_p(q, p))


def _demo_game(arena: Arena, first: Player, engine_role: Player,
               engine, rng, cube_force: bool = False):
    """Play engine vs a random adversary; returns (final state, engine log)."""
    state = GameState.fresh(arena, first)
    log = []
    while not state.finished:
        if state.mover is engine_role:
            mv = engine(state)
            log.append(mv)
        else:
            opens = [i for i, v in enumerate(state.slots) if v is None]
            i = rng.choice(opens)
            d = arena.degree
            opposite = state.slots[d - i] if cube_force and i in (0, d) else None
            if opposite not in (None, 0) and rng.random() < 0.6:
                c = Fraction(rng.randint(1, 9), rng.randint(1, 9))
                v = Fraction(opposite) * c ** 3
            else:
                v = _demo_value(rng, arena.p, zero_ok=i not in (0, d))
            mv = (i, v)
        state = apply_move(state, Move(*mv))
    return state, log


def _moves_doc(state: GameState) -> list:
    return [{"player": str(pl), "index": i,
             "value": value_to_wire(state.arena, v)}
            for pl, i, v in state.move_log]


def _cmd_unramified_demo(args) -> int:
    primes = sorted({int(x) for x in args.primes.split(",")})
    if len(primes) < 2:
        print("error: need at least two primes", file=sys.stderr)
        return 2
    if args.d in MULTI_PRIME_EXCLUDED_DEGREES or args.d < 2:
        print(f"error: degree {args.d} is excluded from the multi-prime "
              f"composition", file=sys.stderr)
        return 2
    first = Player.NORA if args.d % 2 == 0 else Player.WANDA  # Nora last
    rng = random.Random(args.seed)
    state, _ = _demo_game(
        Arena.valued(primes[0], args.d), first, Player.NORA,
        lambda s: multi_prime_move(s, primes), rng)
    certificates = {str(p): qp_root_exists(list(state.slots), p).to_json()
                    for p in primes}
    doc = {"primes": primes, "degree": args.d, "seed": args.seed,
           "first": str(first),
           "moves": _moves_doc(state),
           "coefficients": [str(Fraction(v)) for v in state.slots],
           "certificates": certificates}
    print(json.dumps(doc, sort_keys=True))
    return 0 if not any(c["exists"] for c in certificates.values()) else 1


def _cmd_padic_polygon(args) -> int:
    coeffs = _parse_coeffs(args.coeffs)
    try:
        polygon = polygon_of(coeffs, args.p)
    except DegeneratePolygon as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    doc = {"p": args.p,
           "vertices": [[k, str(v)] for k, v in polygon.vertices],
           "segments": [{"slope": str(s), "length": m}
                        for s, m in polygon.segments]}
    print(json.dumps(doc, sort_keys=True))
    return 0


def _cmd_padic_has_root(args) -> int:
    cert = qp_root_exists(_parse_coeffs(args.coeffs), args.p)
    print(json.dumps(cert.to_json(), sort_keys=True))
    return 0


def _cmd_abelian_find_prime(args) -> int:
    ap = abelian.find_abelian_prime(args.d)
    doc = {"degree_bound": ap.degree_bound, "p": ap.p,
           "half_cofactor": [[q, e] for q, e in ap.half_cofactor]}
    print(json.dumps(doc, sort_keys=True))
    return 0


def _cmd_abelian_cubic_demo(args) -> int:
    arena = Arena.valued(args.p, 3)
    strategy = abelian.NoraAbelianCubic()
    memory = strategy.initial_memory(arena, Player.NORA, Player.WANDA)
    rng = random.Random(args.seed)

    def engine(state):
        nonlocal memory
        mv, memory = strategy.next_move(state, memory)
        return mv

    state, _ = _demo_game(arena, Player.WANDA, Player.NORA, engine, rng,
                          cube_force=True)
    disc = discriminant(list(state.slots))
    certificate = memory["certificate"]
    doc = {"p": args.p, "seed": args.seed,
           "moves": _moves_doc(state),
           "coefficients": [str(Fraction(v)) for v in state.slots],
           "discriminant": str(disc),
           "enlarged": bool(memory.get("enlarged", False)),
           "certificate": certificate}
    print(json.dumps(doc, sort_keys=True))
    ok = certificate["no_Qp_root"] and certificate["disc_negative"] and disc < 0
    return 0 if ok else 1


def _cmd_abelian_highdeg_demo(args) -> int:
    if args.d <= 8:
        print("error: the high-degree argument needs degree > 8", file=sys.stderr)
        return 2
    ap = abelian.find_abelian_prime(args.d)
    arena = Arena.valued(ap.p, args.d, ramification_denominator=2)
    first = Player.NORA if args.d % 2 == 0 else Player.WANDA  # Nora last
    strategy = abelian.NoraAbelianHighdeg()
    memory = strategy.initial_memory(arena, Player.NORA, first)
    rng = random.Random(args.seed)
    pre_close = {}

    def engine(state):
        nonlocal memory
        if state.set_count == args.d:
            pre_close["orders"] = slot_orders(state, ap.p)
        mv, memory = strategy.next_move(state, memory)
        return mv

    state, log = _demo_game(arena, first, Player.NORA, engine, rng)
    close_index, _ = log[-1]
    orders = pre_close["orders"]
    if close_index == 0:
        recomputed = abelian.half_close_extreme(orders, args.d)
    elif close_index == args.d:
        recomputed = abelian.half_close_extreme(orders[::-1], args.d)
    else:
        recomputed = abelian.half_close_middle(orders, args.d, close_index)
    cert = qp_root_exists(list(state.slots), ap.p)
    doc = {"degree": args.d, "seed": args.seed,
           "prime": {"p": ap.p, "half_cofactor": [[q, e] for q, e in ap.half_cofactor]},
           "moves": _moves_doc(state),
           "coefficients": [str(Fraction(v)) for v in state.slots],
           "closing_branch": memory["branch"],
           "closing_order": memory["order"],
           "order_recomputed": recomputed,
           "qp_root": cert.to_json()}
    print(json.dumps(doc, sort_keys=True))
    ok = recomputed == memory["order"] and not cert.exists
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# verification


def _cmd_verify_theorem1(args) -> int:
    if args.grid == "default":
        grid = DEFAULT_GRID
    else:
        with open(args.grid, encoding="utf-8") as fh:
            grid = tuple((int(n), int(d)) for n, d in json.load(fh))
    rows = theorem1_table(grid)
    for row in rows:
        print(json.dumps(row, sort_keys=True))
    return 0 if all(row["match"] is True for row in rows) else 1


def _cmd_verify_strategy(args) -> int:
    cls = NAMED_STRATEGIES.get(args.name)
    if cls is None:
        print(f"error: unknown strategy {args.name!r}; known: "
              f"{', '.join(sorted(NAMED_STRATEGIES))}", file=sys.stderr)
        return 2
    if (args.n is None) == (args.p is None):
        print("error: give exactly one of --n (cyclic) or --p (valued)",
              file=sys.stderr)
        return 2
    if args.n is not None:
        arena = Arena.cyclic(args.n, args.d)
    else:
        arena = Arena.valued(args.p, args.d, integral=args.integral)
    if args.universe == "exhaustive":
        universe = AdversaryUniverse.exhaustive()
    else:
        universe = AdversaryUniverse.random_lines(args.seed, args.trials)
    try:
        report = certify_strategy(cls(), arena, Player(args.role),
                                  Player(args.first), universe,
                                  budget=args.budget)
    except (NotApplicable, ResourceLimit, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(report.to_json(), sort_keys=True))
    return 0 if report.all_won else 1


# ---------------------------------------------------------------------------
# serve


def _cmd_serve(args) -> int:
    import uvicorn

    app = build_app(SessionStore(args.persist))
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_player_args(sub, engine: bool = False) -> None:
    names = ["nora", "wanda"]
    if engine:
        sub.add_argument("--engine-role", required=True, choices=names)
    sub.add_argument("--first", choices=names,
                     default=None if engine else "nora")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polygame",
        description="coefficient games over Z/N and Q_p")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output")
    # accepted before or after the subcommand; SUPPRESS keeps the
    # subparser from clobbering a --json given up front
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[shared],
                       help="perfect-play value of a cyclic arena")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--first", required=True, choices=["nora", "wanda"])
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("play", parents=[shared], help="terminal play against the engine, Z/N")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    _add_player_args(p, engine=True)
    p.set_defaults(func=_cmd_play)

    p = sub.add_parser("play-padic", parents=[shared], help="terminal play, Q_p arena")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--integral", action="store_true")
    _add_player_args(p, engine=True)
    p.set_defaults(func=_cmd_play_padic)

    p = sub.add_parser("unramified-demo", parents=[shared],
                       help="one game where Nora blocks several primes at once")
    p.add_argument("--primes", required=True, help="comma list, e.g. 2,3")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_unramified_demo)

    p = sub.add_parser("padic", parents=[shared], help="Newton polygon and root queries")
    psub = p.add_subparsers(dest="padic_command", required=True)
    for name, func in (("polygon", _cmd_padic_polygon),
                       ("has-root", _cmd_padic_has_root)):
        q = psub.add_parser(name, parents=[shared])
        q.add_argument("--p", type=int, required=True)
        q.add_argument("--coeffs", required=True,
                       help="comma list a0,a1,... (rationals allowed)")
        q.set_defaults(func=func)

    p = sub.add_parser("abelian", parents=[shared], help="no-abelian-root certificates")
    asub = p.add_subparsers(dest="abelian_command", required=True)
    q = asub.add_parser("find-prime", parents=[shared])
    q.add_argument("--d", type=int, required=True)
    q.set_defaults(func=_cmd_abelian_find_prime)
    q = asub.add_parser("cubic-demo", parents=[shared])
    q.add_argument("--p", type=int, default=5)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=_cmd_abelian_cubic_demo)
    q = asub.add_parser("highdeg-demo", parents=[shared])
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=_cmd_abelian_highdeg_demo)

    p = sub.add_parser("verify", parents=[shared], help="strategy certification and the theorem table")
    vsub = p.add_subparsers(dest="verify_command", required=True)
    q = vsub.add_parser("theorem1", parents=[shared])
    q.add_argument("--grid", default="default",
                   help='"default" or a JSON file of [n, d] pairs')
    q.set_defaults(func=_cmd_verify_theorem1)
    q = vsub.add_parser("strategy", parents=[shared])
    q.add_argument("--name", required=True)
    q.add_argument("--n", type=int)
    q.add_argument("--p", type=int)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--integral", action="store_true")
    q.add_argument("--role", required=True, choices=["nora", "wanda"])
    q.add_argument("--first", required=True, choices=["nora", "wanda"])
    q.add_argument("--universe", default="exhaustive",
                   choices=["exhaustive", "random"])
    q.add_argument("--seed", type=int, default=1)
    q.add_argument("--trials", type=int, default=1000)
    q.add_argument("--budget", type=int, default=10**7)
    q.set_defaults(func=_cmd_verify_strategy)

    p = sub.add_parser("serve", parents=[shared], help="run the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--persist", default=None, metavar="DIR")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
