//! A small Monte-Carlo study through the library API: two models, three
//! estimators, two block sizes. CSV on stdout; seeded and reproducible.
//!
//! ```text
//! cargo run --release --example mc_study_demo
//! ```

use ei_lab::blocks::{SchemeKind, Transform};
use ei_lab::competitors::CompetitorKind;
use ei_lab::estimators::EstimatorSpec;
use ei_lab::mcstudy::{run_study, StudyConfig, StudyEstimator, StudyModel};
use ei_lab::sim::{ModelKind, ModelSpec};

fn main() {
    let moment = |spec: EstimatorSpec, scheme: SchemeKind| StudyEstimator::Moment {
        spec,
        scheme,
        transform: Transform::Z,
        bias_reduced: true,
    };
    let cfg = StudyConfig {
        models: vec![
            StudyModel::new(ModelSpec::new(ModelKind::Armax, 0.25).unwrap(), 0.75).unwrap(),
            StudyModel::new(ModelSpec::new(ModelKind::MarkovClayton, 1.06).unwrap(), 0.4)
                .unwrap(),
        ],
        n: 1 << 13,
        block_sizes: vec![64, 128],
        estimators: vec![
            moment(EstimatorSpec::cfg(), SchemeKind::Sliding),
            moment(EstimatorSpec::pml(), SchemeKind::Sliding),
            StudyEstimator::Competitor(CompetitorKind::Intervals),
        ],
        replications: 200,
        master_seed: 42,
        parallelism: 0,
    };
    let result = run_study(&cfg).expect("study runs");
    print!("{}", result.to_csv());
}
