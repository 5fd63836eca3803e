use serde::{Deserialize, Serialize};

use super::{MacError, Outcome};
use crate::agents::{Action, CW_VALUES};
use crate::phy::{ChannelId, OperationalChannel};

pub const CW_MIN: u32 = 16;
pub const CW_MAX: u32 = 1024;
pub const RETRY_LIMIT: u32 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BondingMode {
    /// Static bonding: all of the operational channel or nothing.
    Scb,
    /// Dynamic bonding: the widest idle legal group around the primary.
    Dcb,
}

impl std::fmt::Display for BondingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BondingMode::Scb => "scb",
            BondingMode::Dcb => "dcb",
        })
    }
}

impl std::str::FromStr for BondingMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "scb" => Ok(BondingMode::Scb),
            "dcb" => Ok(BondingMode::Dcb),
            other => Err(format!("unknown bonding mode '{other}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DcfConfig {
    pub channel: OperationalChannel,
    pub primary: ChannelId,
    pub cw: u32,
    pub bonding: BondingMode,
    pub beb: bool,
}

impl DcfConfig {
    /// Static allocation with the primary on the lowest member channel.
    pub fn legacy(channel: OperationalChannel, bonding: BondingMode) -> Self {
        DcfConfig {
            channel,
            primary: channel.lowest(),
            cw: CW_MIN,
            bonding,
            beb: true,
        }
    }

    /// Configuration chosen by an agent. The window stays fixed.
    pub fn learning(action: Action, bonding: BondingMode) -> Self {
        DcfConfig {
            channel: action.channel,
            primary: action.primary,
            cw: action.cw,
            bonding,
            beb: false,
        }
    }

    pub fn validate(&self) -> Result<(), MacError> {
        if !self.channel.contains(self.primary) {
            return Err(MacError::PrimaryOutsideChannel {
                channel: self.channel,
                primary: self.primary,
            });
        }
        if !CW_VALUES.contains(&self.cw) {
            return Err(MacError::InvalidCw(self.cw));
        }
        Ok(())
    }
}

/// Binary exponential backoff. Nodes without BEB keep their window.
pub fn beb_update(config: &DcfConfig, outcome: Outcome) -> u32 {
    if !config.beb {
        return config.cw;
    }
    match outcome {
        Outcome::Failure => (config.cw * 2).min(CW_MAX),
        Outcome::Success | Outcome::Aborted => CW_MIN,
    }
}
