//! Moment estimators against the threshold-based intervals and Süveges
//! estimators on max-autoregressions of varying dependence strength, with
//! the threshold set to the 1 − 1/b empirical quantile.
//!
//! ```text
//! cargo run --release --example competitor_comparison
//! ```

use ei_lab::blocks::{BlockScheme, Transform};
use ei_lab::competitors::{threshold_quantile, CompetitorKind};
use ei_lab::estimators::{estimate_pipeline, EstimatorSpec};
use ei_lab::sim::sim_armax;

fn main() {
    let (n, b, reps) = (1usize << 13, 128usize, 100u64);
    println!(
        "{:>6} {:>8} {:>10} {:>10} {:>10} {:>10}",
        "alpha", "theta", "cfg", "pml", "intervals", "suveges"
    );
    for alpha in [0.0, 0.25, 0.5, 0.75] {
        let mut sums = [0.0f64; 4];
        let mut counts = [0usize; 4];
        for r in 0..reps {
            let x = sim_armax(n, alpha, 500 + r).expect("simulation succeeds");
            let u = threshold_quantile(&x, b).expect("threshold");
            let ests = [
                estimate_pipeline(&x, BlockScheme::sliding(b), Transform::Z, true, &EstimatorSpec::cfg()).ok(),
                estimate_pipeline(&x, BlockScheme::sliding(b), Transform::Z, true, &EstimatorSpec::pml()).ok(),
                CompetitorKind::Intervals.estimate(&x, u).ok(),
                CompetitorKind::Suveges.estimate(&x, u).ok(),
            ];
            for (i, e) in ests.iter().enumerate() {
                if let Some(v) = e {
                    sums[i] += v;
                    counts[i] += 1;
                }
            }
        }
        print!("{:>6} {:>8}", alpha, 1.0 - alpha);
        for i in 0..4 {
            print!(" {:>10.4}", sums[i] / counts[i] as f64);
        }
        println!();
    }
}
