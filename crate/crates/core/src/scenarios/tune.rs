#[cfg(feature = "parallel")]
use rayon::prelude::*;

use serde::{Deserialize, Serialize};

use super::{
    run_trial, tuning_deployment, Method, ScenarioError, ScenarioSpec, TUNING_DURATIONS_S,
};
use crate::agents::{Algorithm, Architecture};
use crate::engine::{Purpose, RngStream, StreamId};
use crate::scenarios::Execution;

pub const TUNING_BSS_COUNTS: [usize; 3] = [2, 3, 4];

const CANDIDATE_NODE: u32 = u32::MAX - 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuneConfig {
    pub algorithm: Algorithm,
    pub architecture: Architecture,
    pub range: (f64, f64),
    pub candidates: usize,
    pub bss_counts: Vec<usize>,
    pub durations_s: Vec<f64>,
    pub seed: u64,
}

impl TuneConfig {
    pub fn new(algorithm: Algorithm, architecture: Architecture, seed: u64) -> Self {
        TuneConfig {
            algorithm,
            architecture,
            range: algorithm.alpha_range(),
            candidates: 100,
            bss_counts: TUNING_BSS_COUNTS.to_vec(),
            durations_s: TUNING_DURATIONS_S.to_vec(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let (lo, hi) = self.range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(ScenarioError::Invalid(format!(
                "bad alpha range ({lo}, {hi})"
            )));
        }
        if self.candidates == 0 || self.bss_counts.is_empty() || self.durations_s.is_empty() {
            return Err(ScenarioError::Invalid("empty tuning grid".into()));
        }
        Ok(())
    }

    /// The deployment grid; identical for every candidate.
    pub fn deployments(&self) -> Vec<ScenarioSpec> {
        let mut out = Vec::new();
        for (ci, &n) in self.bss_counts.iter().enumerate() {
            for (di, &d) in self.durations_s.iter().enumerate() {
                let seed = self.seed.wrapping_add((ci * 64 + di) as u64);
                out.push(tuning_deployment(seed, n, d));
            }
        }
        out
    }

    /// Candidate values, uniform over the range.
    pub fn alphas(&self) -> Vec<f64> {
        let mut rng = RngStream::new(self.seed, StreamId::new(0, CANDIDATE_NODE, Purpose::Agent));
        (0..self.candidates)
            .map(|_| rng.uniform_in(self.range.0, self.range.1))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardRow {
    pub rank: usize,
    pub alpha: f64,
    /// Mean over deployments of the learning AP's mean per-cycle reward.
    pub mean_reward: f64,
}

/// Mean per-cycle reward of `alpha` across the grid.
pub fn evaluate_alpha(
    config: &TuneConfig,
    deployments: &[ScenarioSpec],
    alpha: f64,
) -> Result<f64, ScenarioError> {
    let method = Method::Learning {
        algorithm: config.algorithm,
        architecture: config.architecture,
        alpha: Some(alpha),
    };
    let mut total = 0.0;
    for (k, spec) in deployments.iter().enumerate() {
        let out = run_trial(spec, &method, config.seed.wrapping_add(k as u64), 0, false)?;
        let rewards: Vec<f64> = out.decisions.iter().flatten().map(|d| d.reward).collect();
        if !rewards.is_empty() {
            total += rewards.iter().sum::<f64>() / rewards.len() as f64;
        }
    }
    Ok(total / deployments.len() as f64)
}

/// Random search. Rows come back sorted by descending mean reward.
pub fn tune(
    config: &TuneConfig,
    execution: Execution,
) -> Result<Vec<LeaderboardRow>, ScenarioError> {
    config.validate()?;
    let deployments = config.deployments();
    let alphas = config.alphas();
    let score = |&a: &f64| evaluate_alpha(config, &deployments, a).map(|r| (a, r));
    let scored: Vec<(f64, f64)> = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => alphas.par_iter().map(score).collect::<Result<_, _>>()?,
        _ => alphas.iter().map(score).collect::<Result<_, _>>()?,
    };
    let mut rows: Vec<LeaderboardRow> = scored
        .into_iter()
        .map(|(alpha, mean_reward)| LeaderboardRow {
            rank: 0,
            alpha,
            mean_reward,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.mean_reward
            .total_cmp(&a.mean_reward)
            .then(a.alpha.total_cmp(&b.alpha))
    });
    for (i, r) in rows.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaderboard_is_ranked() {
        let mut c = TuneConfig::new(Algorithm::Ucb, Architecture::Sa, 3);
        c.candidates = 4;
        c.bss_counts = vec![2];
        c.durations_s = vec![0.2];
        let rows = tune(&c, Execution::Parallel).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows
            .windows(2)
            .all(|w| w[0].mean_reward >= w[1].mean_reward));
        assert_eq!(
            rows.iter().map(|r| r.rank).collect::<Vec<_>>(),
            vec![1, 2, 3, 4]
        );
        for r in &rows {
            assert!((1.0..=10.0).contains(&r.alpha));
            assert!((0.0..=1.0).contains(&r.mean_reward));
        }
    }

    #[test]
    fn grid_shape() {
        let c = TuneConfig::new(Algorithm::Linucb, Architecture::Ma, 0);
        let d = c.deployments();
        assert_eq!(d.len(), 12);
        assert_eq!(d[0].bss.len(), 2);
        assert_eq!(d[11].bss.len(), 4);
        assert_eq!(d[11].duration_s, 8.0);
        assert_eq!(c.alphas().len(), 100);
    }
}
