use wifimab::agents::{Algorithm, Architecture};
use wifimab::scenarios::{evaluate_alpha, tune, Execution, TuneConfig};

// Full 100-candidate search over the 12-deployment grid.
#[test]
fn ucb_sa_search_lands_near_reference_alpha() {
    let config = TuneConfig::new(Algorithm::Ucb, Architecture::Sa, 2026);
    let rows = tune(&config, Execution::Parallel).unwrap();
    assert_eq!(rows.len(), 100);
    assert!(rows
        .windows(2)
        .all(|w| w[0].mean_reward >= w[1].mean_reward));
    let reference = evaluate_alpha(&config, &config.deployments(), 1.09).unwrap();
    let best = rows[0].mean_reward;
    println!(
        "best alpha {:.3} reward {best:.4}; alpha 1.09 reward {reference:.4}",
        rows[0].alpha
    );
    assert!(reference >= 0.98 * best, "{reference} vs {best}");
}
