//! Scenario catalog, placement, trial execution and result records.

mod catalog;
mod place;
mod results;
mod spec;
mod trial;
mod tune;

pub use catalog::{
    build_scenario, describe, mp1, mp2, mp3, sp1, sp2, tuning_deployment, SCENARIO_NAMES,
    TUNING_DURATIONS_S,
};
pub use place::{hearing_matrix, place, Placement};
pub use results::{
    summarize, ActionShare, BssResult, BssSummary, CycleCounts, DelaySummary, IntervalResult,
    PairShare, Selection, Summary, TrialResult, SCHEMA_VERSION,
};
pub use spec::{BssConfig, BssRole, Method, ScenarioSpec, TrafficConfig};
pub use trial::{instantiate, run_trial, run_trials, Execution, TrialOutput, TrialSetup};
pub use tune::{evaluate_alpha, tune, LeaderboardRow, TuneConfig, TUNING_BSS_COUNTS};

use thiserror::Error;

use crate::mac::MacError;
use crate::phy::PhyError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("cannot parse scenario config: {0}")]
    Config(String),
    #[error("placement failed: {0}")]
    Placement(String),
    #[error(transparent)]
    Phy(#[from] PhyError),
    #[error(transparent)]
    Mac(#[from] MacError),
}
