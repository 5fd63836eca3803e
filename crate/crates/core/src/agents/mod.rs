//! Learning layer: action spaces, reward, context features, bandit policies
//! and the single-/multi-agent orchestration that runs inside a learning AP.

mod action;
mod context;
mod learner;
mod linalg;
mod linucb;
mod reward;
mod ucb;

pub use action::{Action, ActionSpace, ArmMask, CW_VALUES};
pub use context::{build_context, ContextVector, Role, Sensors};
pub use learner::{Algorithm, Architecture, Decision, LearningAgent};
pub use linalg::{cholesky, cholesky_inverse};
pub use linucb::LinUcb;
pub use reward::{compute_reward, D_MAX_MS, D_MIN_MS};
pub use ucb::Ucb;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AgentError {
    #[error("context dimension {got} does not match policy dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("role {0:?} needs the upstream {1} decision")]
    MissingDecision(Role, &'static str),
    #[error("feedback delivered without a pending step")]
    NoPendingStep,
    #[error("step requested while the previous step awaits feedback")]
    StepPending,
    #[error("arm mask is empty")]
    EmptyMask,
}

/// An online policy over a fixed, canonically ordered set of arms.
///
/// Ties are always broken towards the lowest arm index.
pub trait Bandit: Send {
    fn arms(&self) -> usize;

    /// Context dimension the policy expects; `None` if it ignores context.
    fn context_dim(&self) -> Option<usize>;

    fn select(&mut self, context: &[f64], mask: &ArmMask) -> Result<usize, AgentError>;

    fn update(&mut self, arm: usize, context: &[f64], reward: f64);
}
