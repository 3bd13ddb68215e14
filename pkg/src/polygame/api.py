"""JSON-over-HTTP session service for human-vs-engine play.

The store is plain Python so the CLI's terminal mode and the tests can
drive sessions without a socket; the FastAPI app in build_app is a thin
route layer over it. Engine moves are applied eagerly: creating a session
where the engine opens, or posting a human move, always returns a state
in which it is the human's turn or the game is over.

Sessions live in memory. With a persist directory every creation and move
is appended to sessions.jsonl, and a fresh store replays that log on
startup, rebuilding strategy memory by re-running the engine's own logged
moves.
"""

import json
import secrets
import threading
from pathlib import Path

from .errors import (
    GameOver,
    IllegalMove,
    NotApplicable,
    NotYourTurn,
    OutOfScope,
    RoleLoses,
    UnknownSession,
)
from .game import (
    CYCLIC,
    VALUED,
    Arena,
    GameState,
    Move,
    adjudicate_cyclic,
    adjudicate_valued,
    apply_move,
    arena_from_json,
    state_to_json,
    value_from_wire,
    value_to_wire,
)
from .padic import lower_hull, ord_p
from .solver import DEFAULT_BUDGET, best_move
from .strat_valued import (
    NoraCubic,
    NoraHighdeg,
    NoraQuad,
    NoraQuartic,
    WandaIntegral,
    select_valued_strategy,
)
from .strat_zmod import (
    NoraCubeFree,
    NoraEven,
    NoraSixteen,
    WandaLast,
    select_strategy,
)
from .zring import Player, is_prime

SOLVER_ENGINE = "solver"

# strategies constructible without parameters; prime-power specials are
# reachable through automatic selection only
NAMED_STRATEGIES = {
    cls().id: cls
    for cls in (WandaLast, NoraEven, NoraCubeFree, NoraSixteen,
                NoraQuad, NoraQuartic, NoraCubic, NoraHighdeg, WandaIntegral)
}


class ApiError(Exception):
    """Error with an HTTP status; the route layer turns it into JSON."""

    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class Session:
    __slots__ = ("id", "state", "engine_role", "strategy", "memory", "lock")

    def __init__(self, sid: str, state: GameState, engine_role: Player,
                 strategy, memory: dict):
        self.id = sid
        self.state = state
        self.engine_role = engine_role
        self.strategy = strategy          # None means the solver plays
        self.memory = memory
        self.lock = threading.Lock()


def _pick_engine(arena: Arena, engine_role: Player, first: Player,
                 override: str | None):
    """Strategy instance for the engine seat, or None for the solver."""
    if override is not None:
        if override == SOLVER_ENGINE:
            if arena.kind != CYCLIC:
                raise ApiError(400, "the solver engine needs a cyclic arena")
            strategy = None
        else:
            cls = NAMED_STRATEGIES.get(override)
            if cls is None:
                raise ApiError(400, f"unknown strategy {override!r}")
            strategy = cls()
            if not strategy.applicable(arena, engine_role, first):
                raise ApiError(400, f"{override} is not applicable on this seat")
        return strategy
    if arena.kind == CYCLIC:
        if is_prime(arena.modulus):
            raise ApiError(400, f"out of scope: prime modulus {arena.modulus}")
        try:
            return select_strategy(arena.modulus, arena.degree,
                                   engine_role, first)
        except RoleLoses:
            # the engine seat is lost under perfect play; solver fights on
            return None
        except OutOfScope as exc:
            raise ApiError(400, f"out of scope: {exc}") from exc
    try:
        return select_valued_strategy(arena, engine_role, first)
    except (NotApplicable, OutOfScope) as exc:
        raise ApiError(400, f"no engine for this seat: {exc}") from exc


def _solver_guard(arena: Arena) -> None:
    if (arena.modulus + 1) ** (arena.degree + 1) > DEFAULT_BUDGET:
        raise ApiError(400, "arena too large for the solver engine")


def _partial_polygon(state: GameState) -> dict | None:
    """Hull of the (index, ord) points of the set, nonzero slots."""
    p = state.arena.p
    points = [(k, ord_p(v, p)) for k, v in enumerate(state.slots)
              if v is not None and v != 0]
    doc = {"points": [[k, str(o)] for k, o in points], "vertices": []}
    if len(points) >= 2:
        doc["vertices"] = [[k, str(o)] for k, o in lower_hull(points)]
    return doc


def session_payload(session: Session) -> dict:
    state = session.state
    doc = state_to_json(state)
    doc["id"] = session.id
    doc["engine_role"] = str(session.engine_role)
    doc["strategy"] = session.strategy.id if session.strategy else SOLVER_ENGINE
    doc["status"] = "finished" if state.finished else "open"
    if state.arena.kind == VALUED:
        doc["polygon"] = _partial_polygon(state)
    if state.finished:
        if state.arena.kind == CYCLIC:
            winner, witnesses = adjudicate_cyclic(state)
            doc["result"] = {"winner": str(winner),
                             "witnesses": list(witnesses)}
        else:
            winner, cert = adjudicate_valued(state)
            doc["result"] = {"winner": str(winner),
                             "certificate": cert.to_json()}
    return doc


class SessionStore:
    """All live sessions plus optional append-only JSONL persistence."""

    def __init__(self, persist_dir: str | None = None):
        self._sessions: dict = {}
        self._lock = threading.Lock()
        self._log_path = None
        if persist_dir is not None:
            root = Path(persist_dir)
            root.mkdir(parents=True, exist_ok=True)
            self._log_path = root / "sessions.jsonl"
            if self._log_path.exists():
                self._recover()

    # -- public operations --------------------------------------------------

    def create(self, doc: dict) -> dict:
        try:
            arena = arena_from_json(doc.get("arena") or {})
        except (KeyError, ValueError, TypeError) as exc:
            raise ApiError(400, f"bad arena spec: {exc}") from exc
        try:
            engine_role = Player(doc.get("engine_role", "wanda"))
            first = Player(doc.get("first", str(engine_role)))
        except ValueError as exc:
            raise ApiError(400, f"bad player name: {exc}") from exc
        strategy = _pick_engine(arena, engine_role, first, doc.get("strategy"))
        if strategy is None:
            _solver_guard(arena)
        memory = {} if strategy is None else \
            strategy.initial_memory(arena, engine_role, first)
        sid = secrets.token_hex(16)
        session = Session(sid, GameState.fresh(arena, first),
                          engine_role, strategy, memory)
        with self._lock:
            self._sessions[sid] = session
        self._append({"event": "create", "id": sid,
                      "arena": doc.get("arena"),
                      "engine_role": str(engine_role), "first": str(first),
                      "strategy": strategy.id if strategy else SOLVER_ENGINE})
        with session.lock:
            self._advance_engine(session)
            return session_payload(session)

    def get(self, sid: str) -> dict:
        session = self._find(sid)
        with session.lock:
            return session_payload(session)

    def move(self, sid: str, doc: dict) -> dict:
        session = self._find(sid)
        with session.lock:
            state = session.state
            if state.finished:
                raise NotYourTurn("the game is over; finished sessions are immutable")
            if state.mover is session.engine_role:
                raise NotYourTurn("it is the engine's turn")
            try:
                index = int(doc["index"])
            except (KeyError, TypeError, ValueError) as exc:
                raise IllegalMove(f"bad move index: {exc}") from exc
            value = doc.get("value")
            if isinstance(value, str):
                value = value_from_wire(state.arena, value)
            elif state.arena.kind == VALUED and isinstance(value, int):
                pass  # small integers are honest rationals
            elif not isinstance(value, int):
                raise IllegalMove(f"bad move value: {value!r}")
            session.state = apply_move(state, Move(index, value))
            self._append_move(session, session.engine_role.other, index)
            self._advance_engine(session)
            return session_payload(session)

    # -- internals ----------------------------------------------------------

    def _find(self, sid: str) -> Session:
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise UnknownSession(f"no session {sid!r}")
        return session

    def _advance_engine(self, session: Session) -> None:
        while (not session.state.finished
               and session.state.mover is session.engine_role):
            if session.strategy is None:
                mv = best_move(session.state)
            else:
                mv, session.memory = session.strategy.next_move(
                    session.state, session.memory)
            session.state = apply_move(session.state, Move(*mv))
            self._append_move(session, session.engine_role, mv[0])

    def _append_move(self, session: Session, player: Player, index: int) -> None:
        _, i, v = session.state.move_log[-1]
        assert i == index
        self._append({"event": "move", "id": session.id, "player": str(player),
                      "index": i,
                      "value": value_to_wire(session.state.arena, v)})

    def _append(self, record: dict) -> None:
        if self._log_path is None:
            return
        with self._log_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    def _recover(self) -> None:
        """Rebuild sessions from the log, replaying engine memory."""
        path, self._log_path = self._log_path, None  # mute logging during replay
        creations: dict = {}
        moves: dict = {}
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                record = json.loads(line)
                if record["event"] == "create":
                    creations[record["id"]] = record
                    moves[record["id"]] = []
                else:
                    moves[record["id"]].append(record)
        for sid, record in creations.items():
            arena = arena_from_json(record["arena"])
            engine_role = Player(record["engine_role"])
            first = Player(record["first"])
            name = record["strategy"]
            if name == SOLVER_ENGINE:
                strategy = None
            elif name in NAMED_STRATEGIES:
                strategy = NAMED_STRATEGIES[name]()
            else:
                strategy = _pick_engine(arena, engine_role, first, None)
            memory = {} if strategy is None else \
                strategy.initial_memory(arena, engine_role, first)
            state = GameState.fresh(arena, first)
            for entry in moves[sid]:
                value = value_from_wire(arena, entry["value"])
                if strategy is not None and state.mover is engine_role:
                    mv, memory = strategy.next_move(state, memory)
                    assert mv[0] == entry["index"], "log diverged from policy"
                state = apply_move(state, Move(entry["index"], value))
            self._sessions[sid] = Session(sid, state, engine_role,
                                          strategy, memory)
        self._log_path = path
        # a crash can land between a human move and the engine's reply
        for session in self._sessions.values():
            self._advance_engine(session)


def build_app(store: SessionStore | None = None):
    """FastAPI application over a session store."""
    from fastapi import FastAPI, Request
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse

    app = FastAPI(title="polygame sessions")
    app.state.store = store if store is not None else SessionStore()
    # the playboard is served as static files from another origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    statuses = ((ApiError, None), (UnknownSession, 404), (NotYourTurn, 409),
                (IllegalMove, 422), (GameOver, 409))
    for exc_type, status in statuses:
        def handler(request: Request, exc, _status=status):
            code = exc.status if _status is None else _status
            return JSONResponse(status_code=code, content={"error": str(exc)})
        app.add_exception_handler(exc_type, handler)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        return app.state.store.create(await request.json())

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return app.state.store.get(sid)

    @app.post("/sessions/{sid}/moves")
    async def post_move(sid: str, request: Request):
        return app.state.store.move(sid, await request.json())

    return app
