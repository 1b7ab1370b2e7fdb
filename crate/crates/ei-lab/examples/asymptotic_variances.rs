//! Print the asymptotic variances of all moment estimators in the
//! serially independent case (θ = 1), via both the closed forms and the
//! general quadrature path.
//!
//! ```text
//! cargo run --example asymptotic_variances
//! ```

use ei_lab::asymvar::{iid_closed_form, iid_model, variance, Scheme, VarianceRequest};
use ei_lab::estimators::EstimatorKind;

fn main() {
    let model = iid_model(1.0).expect("theta = 1 is valid");
    let methods = [
        ("cfg", EstimatorKind::Cfg),
        ("mad", EstimatorKind::Mad),
        ("root p=0.5", EstimatorKind::Root(0.5)),
        ("pml (root p=1)", EstimatorKind::Root(1.0)),
        ("root p=2", EstimatorKind::Root(2.0)),
        ("root p=8", EstimatorKind::Root(8.0)),
    ];
    println!("{:<16} {:>10} {:>12} {:>12}", "estimator", "scheme", "quadrature", "closed form");
    for (name, method) in methods {
        for scheme in [Scheme::Disjoint, Scheme::Sliding] {
            let quad = variance(&VarianceRequest { method, scheme, model: &model })
                .expect("variance evaluates");
            let closed = iid_closed_form(method, scheme).expect("closed form evaluates");
            let label = match scheme {
                Scheme::Disjoint => "disjoint",
                Scheme::Sliding => "sliding",
            };
            println!("{name:<16} {label:>10} {quad:>12.8} {closed:>12.8}");
        }
    }
}
