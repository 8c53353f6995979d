//! Nash-equilibrium estimation for two-player zero-sum matrix games under
//! noisy bandit feedback.

pub mod dual_player;
pub mod error;
pub mod game;
pub mod harness;
pub mod linalg;
pub mod lp;
pub mod param_est;
pub mod resolving;
pub mod sampling;
pub mod support_id;

pub use error::{Error, Result};
