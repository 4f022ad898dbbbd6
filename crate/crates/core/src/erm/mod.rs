//! `ℓ2`-regularized empirical risk minimization through its dual.
//!
//! [`ErmProblem`] holds the data, loss and regularization and evaluates the primal and
//! dual objectives, the primal point `ω(x)`, subgradients and gap certificates.
//! [`ErmDualState`] is APCG specialized to the dual with `O(nnz(A_i))` steps, and
//! [`run_solver`] drives it or one of the baselines epoch by epoch.

mod dual_state;
mod loss;
mod problem;
mod run;
mod split;

pub use dual_state::ErmDualState;
pub use loss::{DualTerm, Loss};
pub use problem::{
    complexity_estimate, DualSubgradient, ErmConstants, ErmProblem, PrimalDualReport,
};
pub use run::{run_solver, RunOptions, RunResult, Solver};
pub use split::{DualRegularizer, DualSmooth};
