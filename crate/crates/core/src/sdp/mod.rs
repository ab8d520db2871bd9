//! Block semidefinite programming: a primal-dual interior-point solver, a
//! small LMI modelling layer, and the diamond-norm and tradeoff programs.

mod dense;
mod lmi;
mod presolve;
mod problem;
mod programs;
mod sdpa;
mod solver;

pub use lmi::{BlockId, LmiProgram, LmiSolution, Placement, Var};
pub use problem::{
    realify, unrealify_primal, unrealify_slack, Block, BlockKind, Entry, SdpProblem, SdpSolution,
    SparseSym, Status,
};
pub use programs::{
    diamond_distance, diamond_norm, lambda_max_sdp, lambda_range, trace_norm_sdp, tradeoff_dims,
    tradeoff_program, tradeoff_sdp, tradeoff_sweep, TradeoffProgram, TradeoffSolution,
};
pub use sdpa::to_sdpa;
pub use solver::{sdp_solve, SolverOptions};
