//! Special functions and adaptive quadrature backing the asymptotic
//! variance formulas.
//!
//! The gamma function uses the Lanczos approximation (g = 7, 9 terms, the
//! coefficient set popularized by the GNU Scientific Library) with the
//! reflection formula for arguments below 1/2. The upper incomplete gamma
//! function switches between a power series and a continued fraction at
//! x = s + 1. Integration is adaptive Gauss–Kronrod 7–15 with recursive
//! bisection; the Gauss–Kronrod nodes are interior, so integrable endpoint
//! singularities t^c, c > −1, are admissible. Semi-infinite ranges are
//! mapped onto [0, 1) by t = a + u/(1−u).

use crate::{Error, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    // x >= 0.5; series evaluated at x - 1 per the usual convention.
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Natural logarithm of the gamma function, x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        // log Γ(x) = log π − log sin(πx) − log Γ(1−x)
        let (pi, s) = (std::f64::consts::PI, (std::f64::consts::PI * x).sin());
        return Ok(pi.ln() - s.ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(x).ln())
}

/// The gamma function Γ(x) = ∫₀^∞ t^{x−1} e^{−t} dt, x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return Ok(pi / ((pi * x).sin() * gamma_fn(1.0 - x)?));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // t^{z+1/2} e^{-t} evaluated as a square so the intermediate stays in
    // range up to the f64 overflow threshold of Γ itself (x ≈ 171.6)
    let half = t.powf(0.5 * (z + 0.5)) * (-0.5 * t).exp();
    Ok((2.0 * std::f64::consts::PI).sqrt() * lanczos_sum(x) * half * half)
}

/// The beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b), a, b > 0.
///
/// Evaluated in log space; symmetric in (a, b) by construction.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "beta_fn requires a, b > 0, got ({a}, {b})"
        )));
    }
    Ok((ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?).exp())
}

/// Upper incomplete gamma function Γ(s, x) = ∫ₓ^∞ t^{s−1} e^{−t} dt,
/// s > 0, x ≥ 0.
pub fn upper_inc_gamma(s: f64, x: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!(
            "upper_inc_gamma requires s > 0, got {s}"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "upper_inc_gamma requires x >= 0, got {x}"
        )));
    }
    let g = gamma_fn(s)?;
    if x == 0.0 {
        return Ok(g);
    }
    if x < s + 1.0 {
        // Lower-tail series: γ(s,x) = x^s e^{-x} Σ_{n≥0} x^n / (s (s+1) … (s+n)),
        // normalized to P(s,x) = γ(s,x)/Γ(s); then Γ(s,x) = Γ(s) (1 - P).
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut k = s;
        for _ in 0..500 {
            k += 1.0;
            term *= x / k;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        let p = (s * x.ln() - x - ln_gamma(s)?).exp() * sum;
        Ok(g * (1.0 - p).clamp(0.0, 1.0))
    } else {
        // Continued fraction (modified Lentz) for Q(s,x) = Γ(s,x)/Γ(s).
        let tiny = 1e-300;
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        Ok((s * x.ln() - x - ln_gamma(s)?).exp() * h * g)
    }
}

/// Adaptive quadrature settings.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    /// Absolute error target.
    pub abs_tol: f64,
    /// Relative error target.
    pub rel_tol: f64,
    /// Maximum bisection depth.
    pub max_depth: u32,
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || max_depth < 1 {
            return Err(Error::Domain(format!(
                "quadrature settings require abs_tol > 0, rel_tol > 0, max_depth >= 1, \
                 got ({abs_tol}, {rel_tol}, {max_depth})"
            )));
        }
        Ok(Self { abs_tol, rel_tol, max_depth })
    }
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-9, max_depth: 60 }
    }
}

// Gauss–Kronrod 7-15 nodes and weights on [-1, 1] (QUADPACK qk15 constants).
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

/// One Gauss–Kronrod 7-15 panel: returns (estimate, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(Error::Domain(format!("integrand non-finite at {center}")));
    }
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        if !f1.is_finite() || !f2.is_finite() {
            return Err(Error::Domain(format!(
                "integrand non-finite near [{a}, {b}]"
            )));
        }
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    kronrod *= half;
    gauss *= half;
    Ok((kronrod, (kronrod - gauss).abs()))
}

/// Integrate `f` over (a, b) where `b` may be `f64::INFINITY`.
///
/// Semi-infinite ranges are transformed by t = a + u/(1−u) onto (0, 1).
/// Integrable endpoint singularities are allowed: the quadrature nodes are
/// interior, and bisection concentrates effort near the endpoints.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, q: &Quadrature) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::Domain(format!("lower bound must be finite, got {a}")));
    }
    if b.is_finite() {
        if b <= a {
            return Err(Error::Domain(format!("empty integration range [{a}, {b}]")));
        }
        integrate_finite(&f, a, b, q)
    } else if b == f64::INFINITY {
        let g = move |u: f64| {
            let om = 1.0 - u;
            f(a + u / om) / (om * om)
        };
        integrate_finite(&g, 0.0, 1.0, q)
    } else {
        Err(Error::Domain(format!("invalid upper bound {b}")))
    }
}

/// Hard cap on the number of bisections per call; best-first refinement
/// makes this a work bound, not an accuracy bound.
const MAX_SUBDIVISIONS: usize = 4096;

struct Panel {
    lo: f64,
    hi: f64,
    est: f64,
    err: f64,
    depth: u32,
}

fn integrate_finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, q: &Quadrature) -> Result<f64> {
    // Global best-first bisection: always split the panel with the largest
    // error estimate. Cost is bounded by MAX_SUBDIVISIONS regardless of how
    // stubborn an endpoint singularity is.
    let (est, err) = gk15(f, a, b)?;
    let mut panels = vec![Panel { lo: a, hi: b, est, err, depth: 0 }];
    let mut sum = est;
    let mut err_acc = err;
    for _ in 0..MAX_SUBDIVISIONS {
        if err_acc <= q.abs_tol.max(q.rel_tol * sum.abs()) {
            break;
        }
        // worst splittable panel
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| {
                let mid = 0.5 * (p.lo + p.hi);
                p.depth < q.max_depth && mid > p.lo && mid < p.hi
            })
            .max_by(|(_, x), (_, y)| x.err.partial_cmp(&y.err).expect("finite errors"));
        let Some((idx, _)) = worst else { break };
        let Panel { lo, hi, est, err, depth } = panels.swap_remove(idx);
        sum -= est;
        err_acc -= err;
        let mid = 0.5 * (lo + hi);
        let (el, erl) = gk15(f, lo, mid)?;
        let (er, errr) = gk15(f, mid, hi)?;
        sum += el + er;
        err_acc += erl + errr;
        panels.push(Panel { lo, hi: mid, est: el, err: erl, depth: depth + 1 });
        panels.push(Panel { lo: mid, hi, est: er, err: errr, depth: depth + 1 });
    }
    // re-reduce once for a roundoff-clean total
    let sum: f64 = panels.iter().map(|p| p.est).sum();
    let err_acc: f64 = panels.iter().map(|p| p.err).sum();
    if err_acc <= q.abs_tol.max(q.rel_tol * sum.abs()) {
        Ok(sum)
    } else {
        Err(Error::Convergence { estimate: sum, error_bound: err_acc })
    }
}
