"""HTTP+JSON session service hosting live fusion games.

Sessions pair a human side with the paper-derived machine opponent
(cover synthesis for Eve in the null game, decomposition rewriting for Eve
in the piecewise-continuity game, positive-extension search for Adam and
exhaustion counterplay for Eve in the unfolded game).  No heuristic machine
play is installed unless a session explicitly asks for the bounded-solver
Adam with ``"heuristic": true``.

State is in-process only; the JSONL trace of a session is its durable
record, and replaying a trace reproduces the final state bit for bit.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import nullgame, pcgame, unfolded
from .automata import TreeAutomaton
from .engine import ADAM, EVE, Play, solve_bounded, to_move
from .oracles import ORACLES
from .unfolded import CANTOR_PAIRING, LabeledTree
from .words import ClopenSet
from .automata import ZOO


class ServiceError(Exception):
    def __init__(self, status: int, code: str, clause: str, detail: str):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.clause = clause
        self.detail = detail


def bad_params(clause: str, detail: str) -> ServiceError:
    return ServiceError(400, "BadParams", clause, detail)


# -- wire formats ------------------------------------------------------------


def automaton_from_wire(value) -> TreeAutomaton:
    if isinstance(value, str):
        if value in ZOO:
            return ZOO[value]
        return TreeAutomaton.from_text(value)
    if isinstance(value, dict):
        return TreeAutomaton.from_json(value)
    raise bad_params("automaton", f"cannot read automaton from {value!r}")


def labeled_tree_from_wire(value) -> LabeledTree:
    if isinstance(value, str):
        if value in ZOO:
            return unfolded.constant_labels(ZOO[value])
        return LabeledTree.from_text(value)
    if isinstance(value, dict):
        return LabeledTree.make(
            value["labels"],
            [(e[0], e[1], e[2], e[3]) for e in value["edges"]],
            value["start"],
        )
    raise bad_params("tree", f"cannot read labeled tree from {value!r}")


def move_from_wire(kind: str, data: dict):
    try:
        if "word" in data:
            return data["word"]
        if "clopen" in data:
            return ClopenSet.from_words(data["clopen"])
        if "maps" in data:
            return tuple(pcgame.MonotoneMap.from_json(m) for m in data["maps"])
        if "node" in data:
            return tuple((int(b), str(y)) for b, y in data["node"])
    except (KeyError, TypeError, ValueError) as exc:
        raise bad_params("move", f"malformed move: {exc}")
    raise bad_params("move", f"no move payload in {sorted(data)}")


def move_to_wire(move) -> dict:
    if isinstance(move, str):
        return {"word": move}
    if isinstance(move, ClopenSet):
        return {"clopen": move.to_json()}
    if isinstance(move, tuple) and all(isinstance(m, pcgame.MonotoneMap) for m in move):
        return {"maps": [m.to_json() for m in move]}
    if isinstance(move, tuple):
        return {"node": [[b, y] for b, y in move]}
    raise ValueError(f"cannot serialize move {move!r}")


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


# -- sessions ------------------------------------------------------------------


@dataclass
class Session:
    id: str
    kind: str
    human_side: str
    params: dict
    validate: Callable[[Play, Any], str | None]
    machine: Callable[[Play], Any] | None
    status_fn: Callable[[Play], dict]
    hints_fn: Callable[[Play], dict]
    play: Play = ()
    history: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def to_move(self) -> str:
        return to_move(self.play)

    def append(self, player: str, move) -> None:
        self.history.append({
            "round": len(self.play) // 2 + 1,
            "player": player,
            "move": move_to_wire(move),
        })
        self.play = self.play + (move,)

    def advance_machine(self) -> None:
        while self.machine is not None and self.to_move() != self.human_side:
            move = self.machine(self.play)
            violation = self.validate(self.play, move)
            if violation is not None:
                raise ServiceError(500, "MachineIllegal", violation,
                                   "machine opponent produced an illegal move")
            self.append(self.to_move(), move)

    def apply_human(self, move) -> None:
        violation = self.validate(self.play, move)
        if violation is not None:
            raise ServiceError(400, "IllegalMove", violation,
                               f"move rejected at round {len(self.play) // 2 + 1}")
        self.append(self.human_side, move)

    def state(self) -> dict:
        clopens = []
        for idx, (entry, move) in enumerate(zip(self.history, self.play)):
            if isinstance(move, ClopenSet):
                item = {
                    "round": entry["round"],
                    "player": entry["player"],
                    "words": move.to_json(),
                    "measure": _frac(move.measure()),
                }
                base = _eve_base(self.play, idx)
                if base is not None:
                    item["relative_measure"] = _frac(move.measure(base=base))
                clopens.append(item)
        return {
            "id": self.id,
            "kind": self.kind,
            "human_side": self.human_side,
            "round": len(self.play) // 2,
            "to_move": self.to_move(),
            "history": list(self.history),
            "clopens": clopens,
            "status": self.status_fn(self.play),
            "hints": self.hints_fn(self.play),
        }


def _eve_base(play: Play, idx: int):
    for j in range(idx - 1, -1, -1):
        if isinstance(play[j], str):
            return play[j]
        if isinstance(play[j], tuple) and play[j] and not isinstance(play[j], ClopenSet):
            from .unfolded import digits
            return digits(play[j])
    return None


def _gnull_session(params: dict, human_side: str, sid: str) -> Session:
    raw = params.get("covers")
    if not isinstance(raw, list):
        raise bad_params("covers", "params.covers must be a list of automata")
    covers = [automaton_from_wire(c) for c in raw]
    try:
        eve = nullgame.eve_synthesize(covers)
    except ValueError as exc:
        raise bad_params("covers", str(exc))
    target = params.get("target")
    if target is not None:
        target_aut = automaton_from_wire(target)
    else:
        target_aut = TreeAutomaton.empty()
        for c in covers:
            target_aut = target_aut.combine(c, "union")

    if human_side == ADAM:
        machine = eve
    elif params.get("heuristic"):
        rounds = int(params.get("horizon", 3))
        machine = _heuristic_adam(target_aut, rounds)
    else:
        raise bad_params("human_side",
                         "no machine Adam for the null game without heuristic: true")

    def status(play: Play) -> dict:
        return nullgame.payoff_status(play, target_aut).to_json()

    def hints(play: Play) -> dict:
        n = len(play) // 2 + 1
        if to_move(play) == ADAM:
            xi = nullgame.adam_word(play)
            return {"legal_words": [xi + "0", xi + "1"]}
        return {"budget": f"1/{n}", "base": play[-1]}

    return Session(sid, "G_E", human_side, params, nullgame.validate_move,
                   machine, status, hints)


def _heuristic_adam(target: TreeAutomaton, lookahead: int):
    """Bounded-solver Adam: solve the surrogate from the current position."""

    def respond(play: Play):
        n = len(play) // 2 + 1
        tree = nullgame.surrogate_tree(target, n + lookahead - 1, n + lookahead + 2,
                                       prefix=play)
        winner, strat = solve_bounded(tree)
        if winner == ADAM and strat.children:
            return next(iter(strat.children))
        return nullgame.adam_word(play) + "0"

    return respond


def _gpc_session(params: dict, human_side: str, sid: str) -> Session:
    raw = params.get("decomposition")
    if not isinstance(raw, list):
        raise bad_params("decomposition", "params.decomposition must be a list of maps")
    maps = [pcgame.MonotoneMap.from_json(m) for m in raw]
    try:
        eve = pcgame.eve_synthesize(maps)
    except ValueError as exc:
        raise bad_params("decomposition", str(exc))
    target = automaton_from_wire(params.get("target", "FULL"))
    g_name = params.get("function", "identity")
    if g_name == "identity":
        g = pcgame.identity_oracle()
    elif g_name == "count-ones":
        g = pcgame.count_ones_oracle()
    else:
        raise bad_params("function", f"unknown demo function {g_name!r}")

    if human_side != ADAM:
        raise bad_params("human_side", "the machine plays Eve in the pc game")

    def status(play: Play) -> dict:
        return pcgame.payoff_status(play, target, g).to_json()

    def hints(play: Play) -> dict:
        if to_move(play) == ADAM:
            xi = pcgame.adam_word(play)
            return {"legal_words": [xi + "0", xi + "1"]}
        return {}

    return Session(sid, "G_pc", human_side, params, pcgame.validate_move,
                   eve, status, hints)


def _unfolded_session(params: dict, human_side: str, sid: str) -> Session:
    tree = labeled_tree_from_wire(params.get("tree"))
    ideal = params.get("ideal", "E")
    if ideal not in ORACLES:
        raise bad_params("ideal", f"unknown ideal {ideal!r}")
    oracle = ORACLES[ideal]
    if tree.is_empty():
        raise bad_params("tree", "the labeled tree is empty")

    if human_side == EVE:
        try:
            machine = unfolded.adam_synthesize(tree, oracle)
        except Exception as exc:
            raise bad_params("tree", f"no Adam synthesis: {exc}")
    else:
        covers = [automaton_from_wire(c) for c in params.get("covers", [])]
        machine = unfolded.eve_counterplay(covers, tree=tree, oracle=oracle)

    def validate(play: Play, move) -> str | None:
        return unfolded.validate_move(tree, oracle, play, move)

    def status(play: Play) -> dict:
        columns = unfolded.column_status(play, CANTOR_PAIRING)
        return {
            "kind": "COLUMNS",
            "columns": {str(k): v.to_json() for k, v in sorted(columns.items())},
        }

    def hints(play: Play) -> dict:
        if to_move(play) == ADAM:
            node = unfolded.adam_node(play)
            state = tree.walk(node)
            if state is None:
                return {}
            return {"successors": [[b, y] for b, y, _ in tree.successors(state)]}
        node = play[-1]
        residual = tree.restrict(node).proj()
        return {
            "must_meet_positively": oracle.positive(residual),
            "residual_level_3": residual.level_words(3),
        }

    return Session(sid, "G_unfolded", human_side, params, validate,
                   machine, status, hints)


_BUILDERS = {"G_E": _gnull_session, "G_pc": _gpc_session, "G_unfolded": _unfolded_session}


class SessionStore:
    def __init__(self):
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()

    def create(self, kind: str, params: dict, human_side: str,
               replay: list | None = None) -> Session:
        if kind not in _BUILDERS:
            raise bad_params("kind", f"unknown game kind {kind!r}")
        if human_side not in (ADAM, EVE):
            raise bad_params("human_side", "human_side must be adam or eve")
        sid = uuid.uuid4().hex
        session = _BUILDERS[kind](params or {}, human_side, sid)
        session.advance_machine()
        for wire in replay or []:
            session.apply_human(move_from_wire(kind, wire))
            session.advance_machine()
        with self.lock:
            self.sessions[sid] = session
        return session

    def get(self, sid: str) -> Session:
        with self.lock:
            session = self.sessions.get(sid)
        if session is None:
            raise ServiceError(404, "UnknownSession", "id", f"no session {sid!r}")
        return session

    def move(self, sid: str, wire: dict) -> Session:
        session = self.get(sid)
        with session.lock:
            if session.to_move() != session.human_side:
                raise ServiceError(400, "NotYourTurn", "turn",
                                   f"it is the {session.to_move()} side's turn")
            session.apply_human(move_from_wire(session.kind, wire))
            session.advance_machine()
        return session


def create_app(store: SessionStore | None = None):
    from fastapi import FastAPI, Request
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse

    app = FastAPI(title="fusiongames")
    app.state.store = store or SessionStore()
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )

    @app.exception_handler(ServiceError)
    async def service_error(_request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "clause": exc.clause, "detail": exc.detail},
        )

    @app.get("/healthz")
    async def healthz():
        return {"ok": True}

    @app.post("/sessions")
    async def create_session(body: dict):
        session = app.state.store.create(
            body.get("kind"), body.get("params") or {},
            body.get("human_side", ADAM), body.get("replay"),
        )
        return session.state()

    @app.get("/sessions/{sid}")
    async def get_session(sid: str):
        return app.state.store.get(sid).state()

    @app.post("/sessions/{sid}/moves")
    async def post_move(sid: str, body: dict):
        return app.state.store.move(sid, body.get("move") or {}).state()

    return app
