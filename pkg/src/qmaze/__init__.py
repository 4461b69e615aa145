"""QUBO-based maze generation with annealing samplers and adaptive difficulty."""

from .adaptive import (
    GeneratedMaze,
    UpdateState,
    init_update_state,
    next_maze,
    p_of_t,
    update,
)
from .benchmark import (
    BenchConfig,
    RegressionFit,
    TtsEstimate,
    estimate_success_prob,
    fit_poly,
    run_scaling_bench,
    sma_increase_rate,
    tts,
)
from .maze import (
    BarAssignment,
    Maze,
    ValidationReport,
    assignment_to_maze,
    generate_bar_tipping,
    generate_hunt_and_kill,
    generate_wall_extending,
    parse_ascii,
    render_ascii,
    solve_shortest_path,
    validate_perfect,
)
from .qubo import (
    QuboProblem,
    apply_update_term,
    build_base_qubo,
    decode,
    energy,
    export_coo,
    import_coo,
    index_of_bar,
    index_of_sg,
    problem_dim,
)
from .samplers import AnnealParams, SampleSet, best_feasible, sample_sa, sample_sqa
from .service import BotProfile, SessionParams, SessionStore, create_app, run_bot_set

__all__ = [
    "AnnealParams",
    "BarAssignment",
    "BenchConfig",
    "BotProfile",
    "GeneratedMaze",
    "Maze",
    "QuboProblem",
    "RegressionFit",
    "SampleSet",
    "SessionParams",
    "SessionStore",
    "TtsEstimate",
    "UpdateState",
    "ValidationReport",
    "apply_update_term",
    "assignment_to_maze",
    "best_feasible",
    "build_base_qubo",
    "create_app",
    "decode",
    "energy",
    "estimate_success_prob",
    "export_coo",
    "fit_poly",
    "generate_bar_tipping",
    "generate_hunt_and_kill",
    "generate_wall_extending",
    "import_coo",
    "index_of_bar",
    "index_of_sg",
    "init_update_state",
    "next_maze",
    "p_of_t",
    "parse_ascii",
    "problem_dim",
    "render_ascii",
    "run_bot_set",
    "run_scaling_bench",
    "sample_sa",
    "sample_sqa",
    "sma_increase_rate",
    "solve_shortest_path",
    "tts",
    "update",
    "validate_perfect",
]
