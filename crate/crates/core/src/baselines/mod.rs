//! Comparison methods: stochastic dual coordinate ascent, accelerated full gradient with
//! backtracking, and non-accelerated randomized proximal coordinate gradient.

mod afg;
mod rpcg;
mod sdca;

pub use afg::{AfgConfig, AfgState};
pub use rpcg::{rpcg_step, rpcg_step_at, ErmRpcgState};
pub use sdca::{sdca_epoch, SdcaState};
