"""Play sessions over HTTP: maze issuance, fog-of-war views, adaptation.

A session owns one update state and walks a player through a fixed-size set
of mazes (30 by default). The player only ever sees a 5x5 window centered
on their position. Submitting a solve time triggers exactly one update-state
mix (except after the final maze) and the generation of the next maze.

Sessions are persisted as one JSON snapshot per session, including the RNG
state, so a restarted service continues byte-identically.

Note: no postponed annotations here; FastAPI needs evaluated types for the
request models defined inside create_app.
"""

import json
import secrets
import threading
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .adaptive import (
    DEFAULT_A,
    DEFAULT_LAMBDA_UPDATE1,
    DEFAULT_LAMBDA_UPDATE2,
    UpdateState,
    init_update_state,
    next_maze,
    state_from_json,
    state_to_json,
    update,
)
from .benchmark import sma_increase_rate
from .maze import (
    DIR_NAMES,
    DIR_OFFSETS,
    GOAL_CHAR,
    Maze,
    PATH_CHAR,
    START_CHAR,
    WALL_CHAR,
    assignment_to_maze,
    solve_shortest_path,
)
from .qubo import QuboProblem, build_base_qubo
from .samplers import AnnealParams, best_feasible, sample_sa

VIEW_RADIUS = 2  # 5x5 window
OOB_CHAR = "~"
SMA_WINDOW = 10


class UnknownSessionError(KeyError):
    pass


class SessionStateError(RuntimeError):
    """Request arrived out of order (move after goal, result before goal, ...)."""


@dataclass
class SessionParams:
    n: int = 9
    lambda1: float = 2.0
    lambda2: float = 2.0
    lambda_update1: float = DEFAULT_LAMBDA_UPDATE1
    lambda_update2: float = DEFAULT_LAMBDA_UPDATE2
    a: float = DEFAULT_A
    sweeps: int = 1000
    reads: int = 1000
    update_enabled: bool = True
    set_size: int = 30
    seed: int | None = None

    def validate(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.set_size < 1:
            raise ValueError("set_size must be >= 1")
        if self.sweeps < 1 or self.reads < 1:
            raise ValueError("sweeps and reads must be >= 1")


@dataclass
class BotProfile:
    """Scripted subject: solve time is c * path_length + Gaussian noise."""

    seconds_per_cell: float = 0.1
    noise_sigma: float = 0.5
    min_time: float = 0.1


@dataclass
class Session:
    id: str
    params: SessionParams
    update_state: UpdateState
    base: QuboProblem
    rng: np.random.Generator
    maze: Maze | None = None
    player_pos: tuple = (0, 0)
    maze_index: int = 0
    solve_times: list = field(default_factory=list)
    fallback_levels: list = field(default_factory=list)
    updates_applied: int = 0
    reached_goal: bool = False
    complete: bool = False
    lock: threading.RLock = field(default_factory=threading.RLock)


class SessionStore:
    """In-memory session registry with optional JSON snapshots on disk."""

    def __init__(self, data_dir=None):
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict = {}
        self._lock = threading.RLock()

    # -- lifecycle ---------------------------------------------------------

    def create(self, params: SessionParams) -> Session:
        params.validate()
        rng = np.random.default_rng(params.seed)
        state = init_update_state(
            params.n,
            a=params.a,
            lambda_update1=params.lambda_update1,
            lambda_update2=params.lambda_update2,
            seed=int(rng.integers(2**63)),
        )
        base = build_base_qubo(params.n, params.lambda1, params.lambda2)
        session = Session(
            id=secrets.token_hex(8),
            params=params,
            update_state=state,
            base=base,
            rng=rng,
        )
        self._generate(session)
        with self._lock:
            self._sessions[session.id] = session
        self._persist(session)
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            if session_id in self._sessions:
                return self._sessions[session_id]
        loaded = self._load(session_id)
        if loaded is None:
            raise UnknownSessionError(session_id)
        with self._lock:
            self._sessions[session_id] = loaded
        return loaded

    def _generate(self, session: Session) -> None:
        anneal_seed = int(session.rng.integers(2**63))
        label_seed = int(session.rng.integers(2**63))
        params = AnnealParams(
            sweeps=session.params.sweeps, reads=session.params.reads, seed=anneal_seed
        )
        if session.params.update_enabled:
            gen = next_maze(session.update_state, session.base, params, label_seed=label_seed)
            session.maze = gen.maze
            session.fallback_levels.append(gen.fallback_level)
        else:
            samples = sample_sa(session.base, params)
            assignment = best_feasible(samples, session.base)
            session.maze = assignment_to_maze(assignment, seed=label_seed)
            session.fallback_levels.append(0)
        session.player_pos = session.maze.start
        session.reached_goal = False

    # -- gameplay ----------------------------------------------------------

    def view(self, session_id: str) -> dict:
        session = self.get(session_id)
        with session.lock:
            if session.complete or session.maze is None:
                raise SessionStateError("no active maze")
            return self._window(session)

    def _window(self, session: Session) -> dict:
        maze = session.maze
        pr, pc = session.player_pos
        rows = []
        for r in range(pr - VIEW_RADIUS, pr + VIEW_RADIUS + 1):
            row = []
            for c in range(pc - VIEW_RADIUS, pc + VIEW_RADIUS + 1):
                if not (0 <= r < maze.side and 0 <= c < maze.side):
                    row.append(OOB_CHAR)
                elif (r, c) == maze.start:
                    row.append(START_CHAR)
                elif (r, c) == maze.goal:
                    row.append(GOAL_CHAR)
                else:
                    row.append(WALL_CHAR if maze.grid[r, c] else PATH_CHAR)
            rows.append("".join(row))
        return {
            "center": [pr, pc],
            "cells": rows,
            "maze_index": session.maze_index,
            "reached_goal": session.reached_goal,
        }

    def move(self, session_id: str, direction: str) -> dict:
        session = self.get(session_id)
        with session.lock:
            if session.complete or session.maze is None:
                raise SessionStateError("no active maze")
            if session.reached_goal:
                raise SessionStateError("goal already reached; submit the result first")
            if direction not in DIR_NAMES:
                raise ValueError(f"direction must be one of {DIR_NAMES}")
            dr, dc = DIR_OFFSETS[DIR_NAMES.index(direction)]
            r, c = session.player_pos
            target = (r + dr, c + dc)
            maze = session.maze
            blocked = (
                not (0 <= target[0] < maze.side and 0 <= target[1] < maze.side)
                or maze.grid[target]
            )
            if not blocked:
                session.player_pos = target
                if target == maze.goal:
                    session.reached_goal = True
            self._persist(session)
            return {
                "pos": [session.player_pos[0], session.player_pos[1]],
                "blocked": bool(blocked),
                "reached_goal": session.reached_goal,
            }

    def submit_result(self, session_id: str, solve_time: float, give_up: bool = False) -> dict:
        session = self.get(session_id)
        with session.lock:
            if session.complete or session.maze is None:
                raise SessionStateError("set already complete")
            if not session.reached_goal and not give_up:
                raise SessionStateError("goal not reached and no give_up flag")
            if solve_time < 0:
                raise ValueError("solve_time_s must be >= 0")
            session.solve_times.append(float(solve_time))
            if session.maze_index + 1 >= session.params.set_size:
                session.complete = True
                session.maze = None
                self._persist(session)
                return {"status": "set_complete", "stats": self._stats(session)}
            if session.params.update_enabled:
                session.update_state = update(
                    session.update_state,
                    float(solve_time),
                    seed=int(session.rng.integers(2**63)),
                )
                session.updates_applied += 1
            session.maze_index += 1
            self._generate(session)
            self._persist(session)
            return {"status": "next", "maze_index": session.maze_index}

    def stats(self, session_id: str) -> dict:
        session = self.get(session_id)
        with session.lock:
            return self._stats(session)

    def _stats(self, session: Session) -> dict:
        times = session.solve_times
        sma = sma_increase_rate(times, SMA_WINDOW) if len(times) >= SMA_WINDOW else []
        return {
            "solve_times": list(times),
            "sma_increase_rate": sma,
            "maze_index": session.maze_index,
            "updates_applied": session.updates_applied,
            "fallback_levels": list(session.fallback_levels),
            "complete": session.complete,
            "set_size": session.params.set_size,
            "update_enabled": session.params.update_enabled,
        }

    # -- persistence -------------------------------------------------------

    def snapshot(self, session: Session) -> dict:
        with session.lock:
            return {
                "id": session.id,
                "params": asdict(session.params),
                "update_state": state_to_json(session.update_state),
                "maze": session.maze.to_json() if session.maze else None,
                "player_pos": list(session.player_pos),
                "maze_index": session.maze_index,
                "solve_times": list(session.solve_times),
                "fallback_levels": list(session.fallback_levels),
                "updates_applied": session.updates_applied,
                "reached_goal": session.reached_goal,
                "complete": session.complete,
                "rng_state": session.rng.bit_generator.state,
            }

    def restore(self, obj: dict) -> Session:
        params = SessionParams(**obj["params"])
        rng = np.random.default_rng()
        rng.bit_generator.state = obj["rng_state"]
        session = Session(
            id=obj["id"],
            params=params,
            update_state=state_from_json(obj["update_state"]),
            base=build_base_qubo(params.n, params.lambda1, params.lambda2),
            rng=rng,
            maze=Maze.from_json(obj["maze"]) if obj["maze"] else None,
            player_pos=tuple(obj["player_pos"]),
            maze_index=obj["maze_index"],
            solve_times=[float(t) for t in obj["solve_times"]],
            fallback_levels=[int(x) for x in obj["fallback_levels"]],
            updates_applied=obj["updates_applied"],
            reached_goal=obj["reached_goal"],
            complete=obj["complete"],
        )
        return session

    def _persist(self, session: Session) -> None:
        if not self.data_dir:
            return
        path = self.data_dir / f"{session.id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(self.snapshot(session)))
        tmp.replace(path)

    def _load(self, session_id: str):
        if not self.data_dir:
            return None
        path = self.data_dir / f"{session_id}.json"
        if not path.exists():
            return None
        return self.restore(json.loads(path.read_text()))


# -- HTTP layer --------------------------------------------------------------


def create_app(store: SessionStore | None = None, ui_dir=None):
    from fastapi import FastAPI, HTTPException
    from fastapi.staticfiles import StaticFiles
    from pydantic import BaseModel, Field

    store = store or SessionStore()
    app = FastAPI(title="qmaze session service")

    class CreateSessionRequest(BaseModel):
        n: int = Field(default=9, ge=1)
        lambda1: float = 2.0
        lambda2: float = 2.0
        lambda_update1: float = DEFAULT_LAMBDA_UPDATE1
        lambda_update2: float = DEFAULT_LAMBDA_UPDATE2
        a: float = Field(default=DEFAULT_A, gt=0)
        sweeps: int = Field(default=1000, ge=1)
        reads: int = Field(default=1000, ge=1)
        update_enabled: bool = True
        set_size: int = Field(default=30, ge=1)
        seed: int | None = None

    class MoveRequest(BaseModel):
        dir: str

    class ResultRequest(BaseModel):
        solve_time_s: float
        give_up: bool = False

    def _get(session_id: str):
        try:
            return store.get(session_id)
        except UnknownSessionError:
            raise HTTPException(status_code=404, detail="unknown session")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        session = store.create(SessionParams(**req.model_dump()))
        return {
            "id": session.id,
            "maze_index": session.maze_index,
            "set_size": session.params.set_size,
            "update_enabled": session.params.update_enabled,
        }

    @app.get("/sessions/{session_id}/view")
    def get_view(session_id: str):
        _get(session_id)
        try:
            return store.view(session_id)
        except SessionStateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))

    @app.post("/sessions/{session_id}/move")
    def post_move(session_id: str, req: MoveRequest):
        _get(session_id)
        try:
            return store.move(session_id, req.dir)
        except SessionStateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/sessions/{session_id}/result")
    def post_result(session_id: str, req: ResultRequest):
        _get(session_id)
        try:
            return store.submit_result(session_id, req.solve_time_s, req.give_up)
        except SessionStateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/sessions/{session_id}/stats")
    def get_stats(session_id: str):
        _get(session_id)
        return store.stats(session_id)

    if ui_dir:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


# -- scripted subject --------------------------------------------------------


def run_bot_set(
    n: int = 9,
    params: SessionParams | None = None,
    profile: BotProfile | None = None,
    seed=None,
    store: SessionStore | None = None,
) -> dict:
    """Play one full maze set headlessly and return the session stats.

    The bot walks the shortest path through the service's move endpoint and
    submits a modeled solve time per maze.
    """
    profile = profile or BotProfile()
    store = store or SessionStore()
    session_seed, noise_seed = np.random.SeedSequence(seed).spawn(2)
    if params is None:
        params = SessionParams(n=n)
    params.n = n
    params.seed = int(np.random.default_rng(session_seed).integers(2**63))
    noise_rng = np.random.default_rng(noise_seed)

    session = store.create(params)
    path_lengths = []
    while not session.complete:
        maze = session.maze
        path = solve_shortest_path(maze)
        path_lengths.append(len(path))
        for (r0, c0), (r1, c1) in zip(path, path[1:]):
            direction = DIR_NAMES[DIR_OFFSETS.index((r1 - r0, c1 - c0))]
            result = store.move(session.id, direction)
            if result["blocked"]:
                raise RuntimeError("bot walked into a wall; path and maze disagree")
        if not session.reached_goal:
            raise RuntimeError("bot finished its path without reaching the goal")
        solve_time = profile.seconds_per_cell * len(path)
        if profile.noise_sigma > 0:
            solve_time += float(noise_rng.normal(0.0, profile.noise_sigma))
        solve_time = max(profile.min_time, solve_time)
        store.submit_result(session.id, solve_time)

    stats = store.stats(session.id)
    stats["path_lengths"] = path_lengths
    return stats
