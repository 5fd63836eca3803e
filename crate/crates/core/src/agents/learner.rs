use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    build_context, Action, ActionSpace, AgentError, ArmMask, Bandit, ContextVector, LinUcb, Role,
    Sensors, Ucb, CW_VALUES,
};
use crate::phy::{ChannelId, OperationalChannel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ucb,
    Linucb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Architecture {
    /// One agent over the 84-arm joint space.
    Sa,
    /// Channel, primary and CW agents chained in that order, sharing the reward.
    Ma,
}

impl Algorithm {
    /// Exploration coefficients found by scenario-based tuning.
    pub fn default_alpha(self, arch: Architecture) -> f64 {
        match (self, arch) {
            (Algorithm::Ucb, Architecture::Sa) => 1.09,
            (Algorithm::Ucb, Architecture::Ma) => 1.14,
            (Algorithm::Linucb, Architecture::Sa) => 0.52,
            (Algorithm::Linucb, Architecture::Ma) => 0.50,
        }
    }

    /// Open search interval for alpha.
    pub fn alpha_range(self) -> (f64, f64) {
        match self {
            Algorithm::Ucb => (1.0, 10.0),
            Algorithm::Linucb => (0.2, 20.0),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Ucb => "ucb",
            Algorithm::Linucb => "linucb",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ucb" => Ok(Algorithm::Ucb),
            "linucb" => Ok(Algorithm::Linucb),
            other => Err(format!("unknown algorithm '{other}'")),
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Architecture::Sa => "sa",
            Architecture::Ma => "ma",
        })
    }
}

impl FromStr for Architecture {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sa" => Ok(Architecture::Sa),
            "ma" => Ok(Architecture::Ma),
            other => Err(format!("unknown architecture '{other}'")),
        }
    }
}

/// What an agent decided at cycle start.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decision {
    pub action: Action,
    pub context_fingerprint: u64,
}

struct Pending {
    arms: Vec<usize>,
    contexts: Vec<ContextVector>,
}

/// The learning layer of one AP.
pub struct LearningAgent {
    algorithm: Algorithm,
    architecture: Architecture,
    alpha: f64,
    space: ActionSpace,
    policies: Vec<Box<dyn Bandit>>,
    pending: Option<Pending>,
}

fn make_policy(algorithm: Algorithm, arms: usize, role: Role, alpha: f64) -> Box<dyn Bandit> {
    match algorithm {
        Algorithm::Ucb => Box::new(Ucb::new(arms, alpha)),
        Algorithm::Linucb => Box::new(LinUcb::new(arms, role.dim(), alpha)),
    }
}

impl LearningAgent {
    pub fn new(algorithm: Algorithm, architecture: Architecture, alpha: f64) -> Self {
        let space = ActionSpace::new();
        let policies = match architecture {
            Architecture::Sa => vec![make_policy(
                algorithm,
                space.joint().len(),
                Role::SingleAgent,
                alpha,
            )],
            Architecture::Ma => vec![
                make_policy(
                    algorithm,
                    OperationalChannel::ALL.len(),
                    Role::Channel,
                    alpha,
                ),
                make_policy(algorithm, ChannelId::ALL.len(), Role::Primary, alpha),
                make_policy(algorithm, CW_VALUES.len(), Role::ContentionWindow, alpha),
            ],
        };
        LearningAgent {
            algorithm,
            architecture,
            alpha,
            space,
            policies,
            pending: None,
        }
    }

    pub fn with_default_alpha(algorithm: Algorithm, architecture: Architecture) -> Self {
        Self::new(
            algorithm,
            architecture,
            algorithm.default_alpha(architecture),
        )
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn architecture(&self) -> Architecture {
        self.architecture
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn has_pending(&self) -> bool {
        self.pending.is_some()
    }

    /// Chooses this cycle's action. Must be followed by exactly one
    /// [`feedback`](Self::feedback).
    pub fn step(&mut self, sensors: &Sensors) -> Result<Decision, AgentError> {
        if self.pending.is_some() {
            return Err(AgentError::StepPending);
        }
        let (action, pending) = match self.architecture {
            Architecture::Sa => {
                let ctx = build_context(sensors, Role::SingleAgent, None, None)?;
                let mask = ArmMask::all(self.space.joint().len());
                let arm = self.policies[0].select(ctx.as_slice(), &mask)?;
                let pending = Pending {
                    arms: vec![arm],
                    contexts: vec![ctx],
                };
                (self.space.joint()[arm], pending)
            }
            Architecture::Ma => {
                let ch_ctx = build_context(sensors, Role::Channel, None, None)?;
                let ch_arm = self.policies[0].select(
                    ch_ctx.as_slice(),
                    &ArmMask::all(OperationalChannel::ALL.len()),
                )?;
                let channel = OperationalChannel::ALL[ch_arm];

                let p_ctx = build_context(sensors, Role::Primary, Some(channel), None)?;
                let p_arm = self.policies[1]
                    .select(p_ctx.as_slice(), &ActionSpace::primary_mask(channel))?;
                let primary = ChannelId::ALL[p_arm];

                let cw_ctx = build_context(
                    sensors,
                    Role::ContentionWindow,
                    Some(channel),
                    Some(primary),
                )?;
                let cw_arm =
                    self.policies[2].select(cw_ctx.as_slice(), &ArmMask::all(CW_VALUES.len()))?;
                let action = Action {
                    channel,
                    primary,
                    cw: CW_VALUES[cw_arm],
                };
                let pending = Pending {
                    arms: vec![ch_arm, p_arm, cw_arm],
                    contexts: vec![ch_ctx, p_ctx, cw_ctx],
                };
                (action, pending)
            }
        };
        let context_fingerprint = pending
            .contexts
            .iter()
            .fold(0u64, |h, c| h.rotate_left(21) ^ c.fingerprint());
        self.pending = Some(pending);
        Ok(Decision {
            action,
            context_fingerprint,
        })
    }

    /// Delivers the cycle reward to every constituent policy.
    pub fn feedback(&mut self, reward: f64) -> Result<(), AgentError> {
        let pending = self.pending.take().ok_or(AgentError::NoPendingStep)?;
        for ((policy, arm), ctx) in self
            .policies
            .iter_mut()
            .zip(&pending.arms)
            .zip(&pending.contexts)
        {
            policy.update(*arm, ctx.as_slice(), reward);
        }
        Ok(())
    }
}
