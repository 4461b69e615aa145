"""Per-player difficulty adaptation of the maze QUBO.

A dense update matrix with entries in [-1, 1] is mixed into the base cost
before each generation. After a maze is solved in t seconds the matrix is
refreshed once as

    M <- p(t) * M + (1 - p(t)) * R,    p(t) = 1 / (1 + exp(-a t)),

with R a fresh uniform [-1, 1] matrix. Long solve times keep more of the
previous matrix, short ones wash it out. The mix is convex, so entries stay
inside [-1, 1] forever.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass, replace

import numpy as np

from .maze import Maze, BarAssignment, assignment_to_maze
from .qubo import QuboProblem, apply_update_term, problem_dim
from .samplers import AnnealParams, NoFeasibleSampleError, best_feasible, sample_sa

DEFAULT_A = 0.05
DEFAULT_LAMBDA_UPDATE1 = 0.15
DEFAULT_LAMBDA_UPDATE2 = 0.30

# Halve the update weights this many times before dropping them entirely.
MAX_FALLBACK_HALVINGS = 5


@dataclass
class UpdateState:
    n: int
    dim: int
    matrix: np.ndarray
    a: float
    lambda_update1: float
    lambda_update2: float
    history: list


@dataclass
class GeneratedMaze:
    maze: Maze
    assignment: BarAssignment
    fallback_level: int


def init_update_state(
    n: int,
    a: float = DEFAULT_A,
    lambda_update1: float = DEFAULT_LAMBDA_UPDATE1,
    lambda_update2: float = DEFAULT_LAMBDA_UPDATE2,
    seed=None,
) -> UpdateState:
    """Fresh state with i.i.d. uniform [-1, 1] entries and empty history."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if a <= 0:
        raise ValueError("a must be > 0")
    dim = problem_dim(n)
    matrix = np.random.default_rng(seed).uniform(-1.0, 1.0, (dim, dim))
    return UpdateState(
        n=n,
        dim=dim,
        matrix=matrix,
        a=a,
        lambda_update1=lambda_update1,
        lambda_update2=lambda_update2,
        history=[],
    )


def p_of_t(a: float, t: float) -> float:
    """Sigmoid mixing weight 1 / (1 + exp(-a t)), increasing in t."""
    if t < 0:
        raise ValueError("solve time must be >= 0")
    return 1.0 / (1.0 + math.exp(-a * t))


def update(state: UpdateState, t: float, seed=None, timestamp: float | None = None) -> UpdateState:
    """One mixing step after a solve that took t seconds.

    The fresh random matrix is drawn as
    ``default_rng(seed).uniform(-1, 1, (dim, dim))``. Returns a new state;
    the input is untouched. History gains one (t, timestamp) entry.
    """
    p = p_of_t(state.a, t)
    fresh = np.random.default_rng(seed).uniform(-1.0, 1.0, (state.dim, state.dim))
    mixed = p * state.matrix + (1.0 - p) * fresh
    stamp = _time.time() if timestamp is None else timestamp
    return replace(state, matrix=mixed, history=state.history + [(t, stamp)])


def next_maze(
    state: UpdateState, base: QuboProblem, anneal: AnnealParams, label_seed=None
) -> GeneratedMaze:
    """Sample the update-biased cost and decode the best feasible maze.

    When no sampled read is feasible, both update weights are halved for
    this build only and sampling retries, up to MAX_FALLBACK_HALVINGS times;
    the last resort is the pure base cost. The returned fallback_level
    counts how many relaxations were needed (0 = none).
    """
    if state.dim != base.dim:
        raise ValueError(f"state dim {state.dim} != problem dim {base.dim}")
    scales = [0.5**k for k in range(MAX_FALLBACK_HALVINGS + 1)] + [0.0]
    for level, scale in enumerate(scales):
        if scale == 0.0:
            problem = base
        else:
            scaled = replace(
                state,
                lambda_update1=state.lambda_update1 * scale,
                lambda_update2=state.lambda_update2 * scale,
            )
            problem = apply_update_term(base, scaled)
        samples = sample_sa(problem, anneal)
        try:
            assignment = best_feasible(samples, problem)
        except NoFeasibleSampleError:
            continue
        maze = assignment_to_maze(assignment, seed=label_seed)
        return GeneratedMaze(maze=maze, assignment=assignment, fallback_level=level)
    raise RuntimeError("no feasible maze even from the pure base cost; increase reads or sweeps")


def state_to_json(state: UpdateState) -> dict:
    return {
        "n": state.n,
        "a": state.a,
        "lambda_update1": state.lambda_update1,
        "lambda_update2": state.lambda_update2,
        "matrix": [float(x) for x in state.matrix.ravel()],
        "history": [[t, stamp] for t, stamp in state.history],
    }


def state_from_json(obj: dict) -> UpdateState:
    n = int(obj["n"])
    dim = problem_dim(n)
    matrix = np.array(obj["matrix"], dtype=float).reshape(dim, dim)
    return UpdateState(
        n=n,
        dim=dim,
        matrix=matrix,
        a=float(obj["a"]),
        lambda_update1=float(obj["lambda_update1"]),
        lambda_update2=float(obj["lambda_update2"]),
        history=[(float(t), float(s)) for t, s in obj["history"]],
    )
