//! Accelerated proximal coordinate gradient (APCG) methods.
//!
//! The crate solves composite problems `min_x f(x) + Ψ(x)` where `f` is smooth with
//! block-wise Lipschitz partial gradients and `Ψ` is separable over the same blocks.
//! It contains:
//!
//! * the problem abstractions ([`problem`], [`partition`], [`regularizers`], [`quadratic`]);
//! * the APCG solvers in explicit and change-of-variables form ([`apcg`]);
//! * the specialization to the dual of `ℓ2`-regularized empirical risk minimization,
//!   with primal recovery and duality-gap certificates ([`erm`]);
//! * comparison methods: SDCA, accelerated full gradient and plain randomized proximal
//!   coordinate gradient ([`baselines`]);
//! * compressed sparse column storage and synthetic instances ([`sparse`], [`synth`]);
//! * runtime checks of the schedule and convergence properties ([`diagnostics`]).
//!
//! Everything here is `no_std` + `alloc`. File formats and the experiment CLI live in the
//! `apcg-cli` crate.

#![no_std]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod apcg;
pub mod baselines;
pub mod diagnostics;
pub mod erm;
mod error;
pub(crate) mod math;
pub mod partition;
pub mod problem;
pub mod quadratic;
pub mod regularizers;
pub mod rng;
pub mod sparse;
pub mod synth;
#[cfg(test)]
mod test_oracles;

pub use error::{Error, Result};
pub use partition::BlockPartition;
pub use problem::{
    block_prox, weighted_norm, CompositeProblem, SeparableRegularizer, SmoothOracle,
};
pub use rng::BlockSampler;
pub use sparse::SparseColMatrix;
