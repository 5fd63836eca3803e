use super::linalg::{cholesky_inverse, dot, mat_vec};
use super::{AgentError, ArmMask, Bandit};

/// Refresh `A^-1` from `A` after this many rank-one updates.
const REFACTOR_EVERY: u64 = 1_000;

#[derive(Clone, Debug)]
struct ArmModel {
    /// `A_a = D_a^T D_a + I`, row-major.
    a: Vec<f64>,
    a_inv: Vec<f64>,
    b: Vec<f64>,
    since_refactor: u64,
}

impl ArmModel {
    fn new(dim: usize) -> Self {
        let mut eye = vec![0.0; dim * dim];
        for i in 0..dim {
            eye[i * dim + i] = 1.0;
        }
        ArmModel {
            a: eye.clone(),
            a_inv: eye,
            b: vec![0.0; dim],
            since_refactor: 0,
        }
    }
}

/// Disjoint LinUCB: one ridge regression per arm, scored by
/// `theta_a . x + alpha * sqrt(x^T A_a^-1 x)`.
#[derive(Clone, Debug)]
pub struct LinUcb {
    alpha: f64,
    dim: usize,
    models: Vec<ArmModel>,
    scratch: Vec<f64>,
}

impl LinUcb {
    pub fn new(arms: usize, dim: usize, alpha: f64) -> Self {
        LinUcb {
            alpha,
            dim,
            models: (0..arms).map(|_| ArmModel::new(dim)).collect(),
            scratch: vec![0.0; dim],
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Ridge estimate `A_a^-1 b_a`.
    pub fn theta(&self, arm: usize) -> Vec<f64> {
        let m = &self.models[arm];
        let mut out = vec![0.0; self.dim];
        mat_vec(&m.a_inv, &m.b, &mut out);
        out
    }

    pub fn design(&self, arm: usize) -> &[f64] {
        &self.models[arm].a
    }

    pub fn design_inverse(&self, arm: usize) -> &[f64] {
        &self.models[arm].a_inv
    }

    pub fn response(&self, arm: usize) -> &[f64] {
        &self.models[arm].b
    }

    pub fn score(&self, arm: usize, x: &[f64]) -> f64 {
        let m = &self.models[arm];
        let mut ainv_x = vec![0.0; self.dim];
        mat_vec(&m.a_inv, x, &mut ainv_x);
        let mean = dot(&m.b, &ainv_x); // b^T A^-1 x == theta^T x (A^-1 symmetric)
        let width = dot(x, &ainv_x).max(0.0).sqrt();
        mean + self.alpha * width
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), AgentError> {
        if x.len() == self.dim {
            Ok(())
        } else {
            Err(AgentError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            })
        }
    }
}

impl Bandit for LinUcb {
    fn arms(&self) -> usize {
        self.models.len()
    }

    fn context_dim(&self) -> Option<usize> {
        Some(self.dim)
    }

    fn select(&mut self, context: &[f64], mask: &ArmMask) -> Result<usize, AgentError> {
        self.check_dim(context)?;
        let mut best: Option<(usize, f64)> = None;
        for arm in mask.iter() {
            let s = self.score(arm, context);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((arm, s));
            }
        }
        best.map(|(a, _)| a).ok_or(AgentError::EmptyMask)
    }

    fn update(&mut self, arm: usize, x: &[f64], reward: f64) {
        assert_eq!(x.len(), self.dim, "context dimension");
        let d = self.dim;
        let m = &mut self.models[arm];
        for i in 0..d {
            for j in 0..d {
                m.a[i * d + j] += x[i] * x[j];
            }
            m.b[i] += reward * x[i];
        }
        m.since_refactor += 1;
        if m.since_refactor >= REFACTOR_EVERY {
            m.a_inv = cholesky_inverse(&m.a, d).expect("A stays positive definite");
            m.since_refactor = 0;
            return;
        }
        // Sherman-Morrison: (A + x x^T)^-1 = A^-1 - (A^-1 x)(A^-1 x)^T / (1 + x^T A^-1 x)
        let u = &mut self.scratch;
        mat_vec(&m.a_inv, x, u);
        let denom = 1.0 + dot(x, u);
        for i in 0..d {
            for j in 0..d {
                m.a_inv[i * d + j] -= u[i] * u[j] / denom;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_state_scores_are_alpha_times_norm() {
        let mut l = LinUcb::new(3, 2, 0.7);
        let x = [0.6, 0.8];
        for a in 0..3 {
            assert!((l.score(a, &x) - 0.7).abs() < 1e-15);
        }
        assert_eq!(l.select(&x, &ArmMask::all(3)).unwrap(), 0);
    }

    #[test]
    fn zero_alpha_is_greedy() {
        let mut l = LinUcb::new(2, 1, 0.0);
        l.update(0, &[1.0], 0.2);
        l.update(1, &[1.0], 0.9);
        assert_eq!(l.select(&[1.0], &ArmMask::all(2)).unwrap(), 1);
    }

    #[test]
    fn dimension_mismatch() {
        let mut l = LinUcb::new(2, 3, 1.0);
        assert_eq!(
            l.select(&[1.0], &ArmMask::all(2)),
            Err(AgentError::DimensionMismatch {
                expected: 3,
                got: 1
            })
        );
    }

    #[test]
    fn update_touches_only_its_arm() {
        let mut l = LinUcb::new(2, 2, 1.0);
        l.update(1, &[1.0, 0.5], 1.0);
        assert_eq!(l.design(0), &[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(l.response(0), &[0.0, 0.0]);
        assert_eq!(l.design(1), &[2.0, 0.5, 0.5, 1.25]);
        assert_eq!(l.response(1), &[1.0, 0.5]);
    }

    #[test]
    fn constant_feature_gives_shrunk_mean() {
        let mut l = LinUcb::new(1, 1, 1.0);
        let rewards = [0.3, 0.9, 0.6, 1.0];
        for r in rewards {
            l.update(0, &[1.0], r);
        }
        let n = rewards.len() as f64;
        let mean = rewards.iter().sum::<f64>() / n;
        assert!((l.theta(0)[0] - n * mean / (n + 1.0)).abs() < 1e-12);
    }
}
