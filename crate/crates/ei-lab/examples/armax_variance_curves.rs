//! Asymptotic variances of √k(θ̂/θ − 1) in the max-autoregression model as
//! a function of α, written as CSV, plus the CFG/PML crossover points.
//!
//! ```text
//! cargo run --example armax_variance_curves > armax_curves.csv
//! ```

use ei_lab::asymvar::{armax_crossover, armax_model, variance, Scheme, VarianceRequest};
use ei_lab::estimators::EstimatorKind;

fn main() {
    let methods = [
        ("cfg", EstimatorKind::Cfg),
        ("mad", EstimatorKind::Mad),
        ("pml", EstimatorKind::Root(1.0)),
        ("root2", EstimatorKind::Root(2.0)),
    ];
    println!("alpha,estimator,scheme,variance,variance_over_theta2");
    for i in 0..=90 {
        let alpha = i as f64 / 100.0;
        let model = armax_model(alpha).expect("alpha in [0,1)");
        let theta2 = model.theta() * model.theta();
        for (name, method) in methods {
            for (scheme, label) in [(Scheme::Disjoint, "disjoint"), (Scheme::Sliding, "sliding")] {
                let v = variance(&VarianceRequest { method, scheme, model: &model })
                    .expect("variance evaluates");
                println!("{alpha},{name},{label},{v:.9},{:.9}", v / theta2);
            }
        }
    }
    let (dj, sl) = armax_crossover();
    eprintln!("cfg/pml variance crossovers: disjoint alpha = {dj:.6}, sliding alpha = {sl:.6}");
}
