/// Cycle duration that maps to reward 1.
pub const D_MIN_MS: f64 = 0.0;
/// Cycle duration at and beyond which the reward is 0.
pub const D_MAX_MS: f64 = 10.0;

/// Min-max normalised, clipped duration reward: shorter cycles score higher.
pub fn compute_reward(duration_ms: f64) -> f64 {
    ((D_MAX_MS - duration_ms) / (D_MAX_MS - D_MIN_MS)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn boundary_and_interior_values() {
        assert_eq!(compute_reward(0.0), 1.0);
        assert_eq!(compute_reward(2.5), 0.75);
        assert_eq!(compute_reward(10.0), 0.0);
        assert_eq!(compute_reward(14.0), 0.0);
    }

    proptest! {
        #[test]
        fn bounded_and_non_increasing(a in 0.0f64..50.0, b in 0.0f64..50.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!((0.0..=1.0).contains(&compute_reward(a)));
            prop_assert!(compute_reward(lo) >= compute_reward(hi));
        }
    }
}
