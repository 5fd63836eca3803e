use super::{AgentError, ArmMask, Bandit};

/// UCB(alpha): empirical mean plus `sqrt(alpha ln t / (2 N_a))`.
///
/// Every arm is pulled once, in ascending index order, before any scoring.
#[derive(Clone, Debug)]
pub struct Ucb {
    alpha: f64,
    counts: Vec<u64>,
    means: Vec<f64>,
    rounds: u64,
}

impl Ucb {
    pub fn new(arms: usize, alpha: f64) -> Self {
        Ucb {
            alpha,
            counts: vec![0; arms],
            means: vec![0.0; arms],
            rounds: 0,
        }
    }

    /// Builds a state from existing statistics; `t` is the sum of counts.
    pub fn from_stats(alpha: f64, counts: Vec<u64>, means: Vec<f64>) -> Self {
        assert_eq!(counts.len(), means.len());
        let rounds = counts.iter().sum();
        Ucb {
            alpha,
            counts,
            means,
            rounds,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    /// Optimistic index of `arm`; infinite for an unpulled arm.
    pub fn score(&self, arm: usize) -> f64 {
        let n = self.counts[arm];
        if n == 0 {
            return f64::INFINITY;
        }
        let t = self.rounds.max(1) as f64;
        self.means[arm] + (self.alpha * t.ln() / (2.0 * n as f64)).sqrt()
    }
}

impl Bandit for Ucb {
    fn arms(&self) -> usize {
        self.counts.len()
    }

    fn context_dim(&self) -> Option<usize> {
        None
    }

    fn select(&mut self, _context: &[f64], mask: &ArmMask) -> Result<usize, AgentError> {
        if let Some(arm) = mask.iter().find(|&a| self.counts[a] == 0) {
            return Ok(arm);
        }
        let mut best: Option<(usize, f64)> = None;
        for arm in mask.iter() {
            let s = self.score(arm);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((arm, s));
            }
        }
        best.map(|(a, _)| a).ok_or(AgentError::EmptyMask)
    }

    fn update(&mut self, arm: usize, _context: &[f64], reward: f64) {
        self.counts[arm] += 1;
        self.means[arm] += (reward - self.means[arm]) / self.counts[arm] as f64;
        self.rounds += 1;
    }
}
