//! Iterative solvers: power iteration, weighted-median coordinate descent for
//! the l1 objective, alternating updates for binary factorization, level
//! moves and sign rounding, and certified norm lower bounds.

mod bmf;
mod bounds;
mod config;
mod descent;
mod levels;
mod power;

pub use bmf::{bmf_alternating, BmfRun};
pub use bounds::{
    cut_norm_heuristic, inf1_norm_heuristic, l1_sign_restarts, sign_ascent, NormLowerBound,
    SignRestartOutcome,
};
pub use config::{InitMode, SolverConfig};
pub use descent::{
    l1_coordinate_descent, l1_restarts, random_init, weighted_median, DescentRun, RestartOutcome,
};
pub use levels::{
    level_decompose, move1, move2, move_deltas, repair_zeros, sign_round, LevelDecomposition, Move,
    MoveDeltas, RoundStep, SignRound, LEVEL_TOLERANCE,
};
pub use power::{power_iteration_rank1, PowerIteration, POWER_TOLERANCE};
