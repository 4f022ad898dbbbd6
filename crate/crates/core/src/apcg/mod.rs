//! APCG solvers for composite problems.
//!
//! * [`ExplicitState`] carries `(x, y, z)` and implements the general method with the
//!   `α_k, γ_k, β_k` schedule, its strongly convex specialization `γ_0 = μ > 0`, and the
//!   `μ = 0` specialization.
//! * [`EfficientState`] implements the strongly convex method through the change of
//!   variables `x = ρ^k u + v`, storing `ū = ρ^{k+1} u` so no quantity grows like `ρ^{-k}`.
//! * [`solve`] / [`solve_with`] drive any of the four steppers with objective tracing.

mod efficient;
mod explicit;
mod lazy;
mod schedule;
mod solve;
mod theta;

pub use efficient::EfficientState;
pub use explicit::{next_alpha_nsc, ExplicitState};
pub(crate) use lazy::pow_table_len as lazy_pow_table_len;
pub use lazy::LazyScaled;
pub use schedule::{solve_alpha, AlphaRule, ApcgSchedule, ScheduleStep};
pub use solve::{
    solve, solve_with, Checkpoint, Control, Solution, SolveOptions, Trace, TracePoint, Variant,
};
pub use theta::{theta_coefficients, ThetaTracker};
