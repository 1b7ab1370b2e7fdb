//! Disjoint-minus-sliding variance gaps, normalized by θ²: the root-family
//! gap as a function of p (approaching the CFG constant as p → ∞) and the
//! θ-dependent madogram gap. CSV on stdout.
//!
//! ```text
//! cargo run --example gap_curves > gaps.csv
//! ```

use ei_lab::asymvar::sliding_gap;
use ei_lab::estimators::EstimatorKind;

fn main() {
    println!("curve,x,gap");
    // p ↦ root gap on a log-spaced grid
    let mut p = 0.25f64;
    while p <= 1024.0 {
        let gap = sliding_gap(EstimatorKind::Root(p), 1.0).expect("gap evaluates");
        println!("root_gap_vs_p,{p},{gap:.9}");
        p *= 1.25;
    }
    let cfg = sliding_gap(EstimatorKind::Cfg, 1.0).expect("constant");
    println!("cfg_gap,inf,{cfg:.9}");
    // θ ↦ madogram gap
    for i in 1..=100 {
        let theta = i as f64 / 100.0;
        let gap = sliding_gap(EstimatorKind::Mad, theta).expect("gap evaluates");
        println!("mad_gap_vs_theta,{theta},{gap:.9}");
    }
}
