//! Semantic communication with signal expansion and knowledge collision.
//!
//! - [`prob`]: exact joint tables, entropies, mutual information, capacity.
//! - [`channel`]: explicit (binary symmetric) and implicit (knowledge) channels.
//! - [`semantic`]: expansion, collision, codebooks and the MCI measure.
//! - [`analysis`]: exact checks of the information identities and bounds.
//! - [`game`]: the signaling-game simulator with a Q-learning receiver.
//! - [`experiments`]: sweeps, case studies and the `exksc` command line.
//!
//! The exact code is generic over the scalar type ([`Real`]); the aliases
//! below fix it to `f64`, which is what the simulator uses.

pub mod analysis;
pub mod channel;
pub mod error;
pub mod experiments;
pub mod game;
pub mod prob;
pub mod real;
pub mod rng;
pub mod semantic;
mod svg;

pub use error::{Error, Result};
pub use real::Real;

pub type JointTable = prob::JointTable<f64>;
pub type DiscreteChannel = channel::DiscreteChannel<f64>;
pub type ScenarioJoint = analysis::ScenarioJoint<f64>;
pub type FanoBound = prob::FanoBound<f64>;

pub type JointTable32 = prob::JointTable<f32>;
pub type DiscreteChannel32 = channel::DiscreteChannel<f32>;
pub type ScenarioJoint32 = analysis::ScenarioJoint<f32>;
