use std::fmt;

use serde::{Deserialize, Serialize};

use crate::phy::{ChannelId, OperationalChannel};

/// Contention windows 2^(i+4), i = 0..=6.
pub const CW_VALUES: [u32; 7] = [16, 32, 64, 128, 256, 512, 1024];

/// A full transmission configuration chosen for one cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Action {
    pub channel: OperationalChannel,
    pub primary: ChannelId,
    pub cw: u32,
}

impl Action {
    pub fn is_valid(&self) -> bool {
        self.channel.contains(self.primary) && CW_VALUES.contains(&self.cw)
    }

    pub fn cw_index(&self) -> usize {
        CW_VALUES
            .iter()
            .position(|&c| c == self.cw)
            .expect("valid CW")
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} p={} cw={}", self.channel, self.primary, self.cw)
    }
}

/// Set of arms a policy may choose from this round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArmMask(Vec<bool>);

impl ArmMask {
    pub fn all(arms: usize) -> Self {
        ArmMask(vec![true; arms])
    }

    pub fn from_allowed(arms: usize, allowed: impl IntoIterator<Item = usize>) -> Self {
        let mut m = vec![false; arms];
        for a in allowed {
            m[a] = true;
        }
        ArmMask(m)
    }

    pub fn allows(&self, arm: usize) -> bool {
        self.0.get(arm).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }
}

/// Joint and factored action enumerations in canonical order
/// (channel label, then primary, then CW, all ascending).
#[derive(Clone, Debug)]
pub struct ActionSpace {
    joint: Vec<Action>,
}

impl Default for ActionSpace {
    fn default() -> Self {
        Self::new()
    }
}

impl ActionSpace {
    pub fn new() -> Self {
        let joint = OperationalChannel::ALL
            .into_iter()
            .flat_map(|ch| {
                ch.members().iter().flat_map(move |p| {
                    CW_VALUES.into_iter().map(move |cw| Action {
                        channel: ch,
                        primary: p,
                        cw,
                    })
                })
            })
            .collect();
        ActionSpace { joint }
    }

    pub fn joint(&self) -> &[Action] {
        &self.joint
    }

    pub fn joint_index(&self, action: &Action) -> Option<usize> {
        self.joint.iter().position(|a| a == action)
    }

    pub fn channels(&self) -> &'static [OperationalChannel; 7] {
        &OperationalChannel::ALL
    }

    /// Primary-agent arms are the four basic channels; the mask keeps those
    /// inside the chosen operational channel.
    pub fn primary_mask(channel: OperationalChannel) -> ArmMask {
        ArmMask::from_allowed(4, channel.members().iter().map(|c| c.slot()))
    }

    pub fn cws(&self) -> &'static [u32; 7] {
        &CW_VALUES
    }
}
