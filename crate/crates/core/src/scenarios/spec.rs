use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::agents::{Algorithm, Architecture};
use crate::mac::BondingMode;
use crate::phy::{OperationalChannel, Width};
use crate::traffic::IntervalSchedule;

fn default_area() -> [f64; 3] {
    [10.0, 10.0, 2.0]
}

fn default_baseline() -> u8 {
    7
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Declarative description of an experiment. Mirrors the config file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    pub bonding: BondingMode,
    pub duration_s: f64,
    pub trials: u32,
    pub burn_in_s: f64,
    #[serde(default = "default_area")]
    pub area: [f64; 3],
    /// Allocation given to learning BSSs when the run uses no learning.
    #[serde(default = "default_baseline")]
    pub baseline_channel: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<IntervalSchedule>,
    pub bss: Vec<BssConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BssRole {
    Learning,
    Legacy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BssConfig {
    pub role: BssRole,
    /// Operational channel label (legacy BSSs only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<u8>,
    pub traffic: TrafficConfig,
    /// Width whose saturation goodput load fractions refer to. Defaults to
    /// the legacy channel's width, or 20 MHz for learning BSSs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load_reference_mhz: Option<u32>,
    /// Whether the interval schedule re-draws this BSS's load.
    #[serde(default, skip_serializing_if = "is_false")]
    pub scheduled: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ap: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sta: Option<[f64; 3]>,
}

/// Traffic as configured: a family plus a load-fraction range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TrafficConfig {
    FullBuffer,
    Poisson {
        load: [f64; 2],
    },
    Bursty {
        load: [f64; 2],
    },
    Vr {
        load: [f64; 2],
    },
    /// Poisson, Bursty or VR, drawn per trial.
    Random {
        load: [f64; 2],
    },
}

impl TrafficConfig {
    pub fn load(&self) -> Option<[f64; 2]> {
        match *self {
            TrafficConfig::FullBuffer => None,
            TrafficConfig::Poisson { load }
            | TrafficConfig::Bursty { load }
            | TrafficConfig::Vr { load }
            | TrafficConfig::Random { load } => Some(load),
        }
    }
}

impl BssConfig {
    pub fn learning(traffic: TrafficConfig) -> Self {
        BssConfig {
            role: BssRole::Learning,
            channel: None,
            traffic,
            load_reference_mhz: None,
            scheduled: false,
            ap: None,
            sta: None,
        }
    }

    pub fn legacy(channel: u8, traffic: TrafficConfig) -> Self {
        BssConfig {
            role: BssRole::Legacy,
            channel: Some(channel),
            ..BssConfig::learning(traffic)
        }
    }

    pub fn with_reference(mut self, mhz: u32) -> Self {
        self.load_reference_mhz = Some(mhz);
        self
    }

    pub fn scheduled(mut self) -> Self {
        self.scheduled = true;
        self
    }

    pub fn reference_width(&self) -> Result<Width, ScenarioError> {
        match self.load_reference_mhz {
            Some(mhz) => Width::from_mhz(mhz)
                .ok_or_else(|| ScenarioError::Invalid(format!("no {mhz} MHz channel width"))),
            None => Ok(match self.channel {
                Some(label) => OperationalChannel::from_label(label)?.width(),
                None => Width::Mhz20,
            }),
        }
    }
}

/// What drives the learning BSSs of a scenario in one run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Method {
    Learning {
        algorithm: Algorithm,
        architecture: Architecture,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
    },
    /// Learning BSSs fall back to legacy DCF on this allocation. The primary
    /// defaults to the lowest member channel.
    Static {
        channel: u8,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        primary: Option<u8>,
    },
}

impl Method {
    pub fn learning(algorithm: Algorithm, architecture: Architecture) -> Self {
        Method::Learning {
            algorithm,
            architecture,
            alpha: None,
        }
    }

    /// The four algorithm/architecture pairs in reporting order.
    pub fn all_learning() -> [Method; 4] {
        [
            Method::learning(Algorithm::Ucb, Architecture::Sa),
            Method::learning(Algorithm::Ucb, Architecture::Ma),
            Method::learning(Algorithm::Linucb, Architecture::Sa),
            Method::learning(Algorithm::Linucb, Architecture::Ma),
        ]
    }

    pub fn fixed(channel: u8) -> Self {
        Method::Static {
            channel,
            primary: None,
        }
    }

    /// Short label used in file names and tables.
    pub fn label(&self) -> String {
        match *self {
            Method::Learning {
                algorithm,
                architecture,
                alpha,
            } => match alpha {
                Some(a) => format!("{architecture}-{algorithm}-a{a}"),
                None => format!("{architecture}-{algorithm}"),
            },
            Method::Static {
                channel,
                primary: None,
            } => format!("static-{channel}"),
            Method::Static {
                channel,
                primary: Some(p),
            } => format!("static-{channel}p{p}"),
        }
    }
}

impl ScenarioSpec {
    // Negated comparisons so NaN fails too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::Invalid(m));
        if self.bss.is_empty() {
            return bad("a scenario needs at least one BSS".into());
        }
        if !(self.duration_s > 0.0) {
            return bad(format!(
                "duration must be positive, got {}",
                self.duration_s
            ));
        }
        if !(0.0..self.duration_s).contains(&self.burn_in_s) {
            return bad(format!("burn-in {} s outside the run", self.burn_in_s));
        }
        if self.trials == 0 {
            return bad("at least one trial is required".into());
        }
        if self.area.iter().any(|&a| !(a > 0.0)) {
            return bad("area dimensions must be positive".into());
        }
        OperationalChannel::from_label(self.baseline_channel)?;
        for (i, b) in self.bss.iter().enumerate() {
            match (b.role, b.channel) {
                (BssRole::Legacy, None) => return bad(format!("legacy BSS {i} has no channel")),
                (BssRole::Learning, Some(_)) => {
                    return bad(format!("learning BSS {i} must not fix a channel"))
                }
                (_, Some(label)) => {
                    OperationalChannel::from_label(label)?;
                }
                _ => {}
            }
            if let Some([lo, hi]) = b.traffic.load() {
                if !(0.0 < lo && lo <= hi && hi <= 1.0) {
                    return bad(format!("BSS {i} load range [{lo}, {hi}] not within (0, 1]"));
                }
            }
            b.reference_width()?;
            for p in [b.ap, b.sta].into_iter().flatten() {
                if p.iter()
                    .zip(&self.area)
                    .any(|(v, a)| !(0.0..=*a).contains(v))
                {
                    return bad(format!("BSS {i} position {p:?} outside the area"));
                }
            }
            if b.scheduled && b.traffic.load().is_none() {
                return bad(format!(
                    "scheduled BSS {i} needs a variable-load traffic model"
                ));
            }
        }
        if let Some(s) = &self.intervals {
            if s.count == 0 || !(s.length_s > 0.0) {
                return bad("interval schedule needs a positive count and length".into());
            }
            if !self.bss.iter().any(|b| b.scheduled) {
                return bad("interval schedule without scheduled BSSs".into());
            }
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        let spec: ScenarioSpec =
            toml::from_str(text).map_err(|e| ScenarioError::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario specs always serialize")
    }

    pub fn learning_count(&self) -> usize {
        self.bss
            .iter()
            .filter(|b| b.role == BssRole::Learning)
            .count()
    }
}
