use super::{ScenarioError, ScenarioSpec};
use crate::engine::{Purpose, RngStream, StreamId};
use crate::phy::{distance, rssi_dbm, select_mcs, Mcs, Position, CARRIER_SENSE_DBM, TX_POWER_DBM};

const MAX_ATTEMPTS: usize = 100_000;

/// AP and STA of one BSS.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Placement {
    pub ap: Position,
    pub sta: Position,
}

impl Placement {
    pub fn link_mcs(&self) -> Result<Mcs, ScenarioError> {
        Ok(select_mcs(rssi_dbm(
            TX_POWER_DBM,
            distance(self.ap, self.sta),
        )?)?)
    }
}

fn pos(p: [f64; 3]) -> Position {
    Position::new(p[0], p[1], p[2])
}

/// Positions for every BSS. Explicit coordinates are kept; missing ones are
/// drawn from the placement stream of `seed` alone, so they are identical
/// across trials, and re-drawn until the link supports the top MCS.
pub fn place(spec: &ScenarioSpec, seed: u64) -> Result<Vec<Placement>, ScenarioError> {
    let [w, d, h] = spec.area;
    spec.bss
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut rng = RngStream::new(seed, StreamId::new(0, i as u32, Purpose::Placement));
            let mut draw = |fixed: Option<[f64; 3]>| match fixed {
                Some(p) => pos(p),
                None => Position::new(rng.uniform() * w, rng.uniform() * d, rng.uniform() * h),
            };
            for _ in 0..MAX_ATTEMPTS {
                let p = Placement {
                    ap: draw(b.ap),
                    sta: draw(b.sta),
                };
                if distance(p.ap, p.sta) > 0.0 && p.link_mcs().is_ok_and(|m| m == Mcs::MAX) {
                    return Ok(p);
                }
                if b.ap.is_some() && b.sta.is_some() {
                    break;
                }
            }
            Err(ScenarioError::Placement(format!(
                "BSS {i}: no AP-STA placement supports MCS 11"
            )))
        })
        .collect()
}

/// `hears[i][j]`: some device of BSS `i` senses some device of BSS `j`.
/// Every pair must hear each other; hidden nodes are outside the model's
/// assumptions and rejected.
pub fn hearing_matrix(placements: &[Placement]) -> Result<Vec<Vec<bool>>, ScenarioError> {
    let n = placements.len();
    let mut hears = vec![vec![true; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let a = placements[i];
            let b = placements[j];
            for (x, y) in [(a.ap, b.ap), (a.ap, b.sta), (a.sta, b.ap), (a.sta, b.sta)] {
                let d = distance(x, y).max(1e-3);
                if rssi_dbm(TX_POWER_DBM, d)? < CARRIER_SENSE_DBM {
                    hears[i][j] = false;
                }
            }
            if !hears[i][j] {
                return Err(ScenarioError::Placement(format!(
                    "BSS {i} and BSS {j} are not in mutual sensing range"
                )));
            }
        }
    }
    Ok(hears)
}
