use serde::{Deserialize, Serialize};

use crate::agents::Action;
use crate::engine::SimTime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Success,
    Failure,
    Aborted,
}

/// One transmission cycle, from the start of carrier sensing to BlockAck,
/// final failure or abort.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleRecord {
    pub start: SimTime,
    pub end: SimTime,
    pub outcome: Outcome,
    pub action: Option<Action>,
    pub bytes_acked: u64,
}

impl CycleRecord {
    pub fn duration(&self) -> SimTime {
        self.end - self.start
    }

    pub fn duration_ms(&self) -> f64 {
        self.duration().as_millis_f64()
    }
}
