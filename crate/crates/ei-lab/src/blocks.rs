//! Block-maxima extraction and the rank-based Y/Z pseudo-sample
//! constructions, including the leave-one-block bias-reduced variant.
//!
//! Given block maxima `M_i` and the adjusted empirical c.d.f.
//! `F̂_n(v) = #{s: X_s ≤ v}/(n+1)` built from the *full* series, the
//! transformed values
//!
//! - `Ẑ_i = b (1 − F̂_n(M_i))` (Z-transform)
//! - `Ŷ_i = −b log F̂_n(M_i)`  (Y-transform)
//!
//! are approximate Exp(θ) draws for large block size b. The bias-reduced
//! variant rescales `Ẑ` by `(n+1)/(n−b+1)`, which is algebraically the same
//! as using the leave-one-block empirical c.d.f.; the Y-analogue applies the
//! Y-map to the rescaled Z-value so that the exact identity
//! `Ŷ = −b log(1 − Ẑ/b)` is preserved in both variants.

use std::collections::VecDeque;

use crate::sim::TimeSeries;
use crate::{Error, Result};

/// Disjoint blocks partition the series (a trailing partial block is
/// dropped); sliding blocks advance one observation at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Disjoint,
    Sliding,
}

impl SchemeKind {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Disjoint => "disjoint",
            SchemeKind::Sliding => "sliding",
        }
    }
}

/// Blocking scheme: kind plus block size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockScheme {
    pub kind: SchemeKind,
    pub block_size: usize,
}

impl BlockScheme {
    pub fn disjoint(block_size: usize) -> Self {
        Self { kind: SchemeKind::Disjoint, block_size }
    }

    pub fn sliding(block_size: usize) -> Self {
        Self { kind: SchemeKind::Sliding, block_size }
    }
}

/// Which transform maps block maxima to approximate Exp(θ) values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Y,
    Z,
}

impl Transform {
    pub fn name(&self) -> &'static str {
        match self {
            Transform::Y => "y",
            Transform::Z => "z",
        }
    }
}

/// Metadata carried along with a pseudo-sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoSampleMeta {
    pub scheme: BlockScheme,
    pub transform: Transform,
    pub series_len: usize,
    pub bias_reduced: bool,
    /// Set when the underlying data contain tied values, which violates the
    /// continuous-marginal assumption behind the rank transform.
    pub ties_detected: bool,
}

/// A finite sample of positive approximate Exp(θ) draws plus metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoSample {
    values: Vec<f64>,
    meta: PseudoSampleMeta,
}

impl PseudoSample {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn meta(&self) -> &PseudoSampleMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_block_size(b: usize, n: usize) -> Result<()> {
    if b < 1 || b > n {
        return Err(Error::Domain(format!(
            "block size {b} out of range for series of length {n}"
        )));
    }
    Ok(())
}

/// Block maxima of `x` under the given scheme.
///
/// Disjoint: ⌊n/b⌋ maxima over consecutive non-overlapping windows.
/// Sliding: n−b+1 maxima over every window of length b, computed in O(n)
/// with a monotone deque.
pub fn block_maxima(x: &TimeSeries, scheme: BlockScheme) -> Result<Vec<f64>> {
    let v = x.values();
    let b = scheme.block_size;
    check_block_size(b, v.len())?;
    match scheme.kind {
        SchemeKind::Disjoint => Ok(v
            .chunks_exact(b)
            .map(|c| c.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .collect()),
        SchemeKind::Sliding => {
            let mut out = Vec::with_capacity(v.len() - b + 1);
            // deque of indices with decreasing values; front is the window max
            let mut deque: VecDeque<usize> = VecDeque::new();
            for (i, &val) in v.iter().enumerate() {
                while deque.back().is_some_and(|&j| v[j] <= val) {
                    deque.pop_back();
                }
                deque.push_back(i);
                if deque.front().is_some_and(|&j| j + b <= i) {
                    deque.pop_front();
                }
                if i + 1 >= b {
                    out.push(v[*deque.front().expect("window non-empty")]);
                }
            }
            Ok(out)
        }
    }
}

/// The adjusted empirical c.d.f. `v ↦ #{s: X_s ≤ v}/(n+1)` of a series,
/// evaluable in O(log n) after an O(n log n) sort.
///
/// The n+1 denominator keeps the c.d.f. strictly below one, so Ẑ stays
/// positive and Ŷ finite at the sample maximum.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(x: &TimeSeries) -> Self {
        let mut sorted = x.values().to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        Self { sorted }
    }

    /// F̂_n(v) = (number of observations ≤ v) / (n + 1).
    pub fn eval(&self, v: f64) -> f64 {
        let count = self.sorted.partition_point(|&x| x <= v);
        count as f64 / (self.sorted.len() + 1) as f64
    }

    /// Whether the series contains tied values.
    pub fn has_ties(&self) -> bool {
        self.sorted.windows(2).any(|w| w[0] == w[1])
    }
}

/// Convenience wrapper returning the c.d.f. as a closure.
pub fn empirical_cdf_factor(x: &TimeSeries) -> impl Fn(f64) -> f64 {
    let cdf = EmpiricalCdf::new(x);
    move |v| cdf.eval(v)
}

/// Construct the rank-based pseudo-sample of approximate Exp(θ) draws.
pub fn pseudo_sample(
    x: &TimeSeries,
    scheme: BlockScheme,
    transform: Transform,
    bias_reduced: bool,
) -> Result<PseudoSample> {
    let cdf = EmpiricalCdf::new(x);
    pseudo_sample_with_cdf(x, &cdf, scheme, transform, bias_reduced)
}

/// As [`pseudo_sample`], reusing a prebuilt empirical c.d.f. of the same
/// series (the c.d.f. does not depend on the blocking).
pub fn pseudo_sample_with_cdf(
    x: &TimeSeries,
    cdf: &EmpiricalCdf,
    scheme: BlockScheme,
    transform: Transform,
    bias_reduced: bool,
) -> Result<PseudoSample> {
    let maxima = block_maxima(x, scheme)?;
    let n = x.len() as f64;
    let b = scheme.block_size as f64;
    let scale = (n + 1.0) / (n - b + 1.0);
    let values = maxima
        .iter()
        .map(|&m| {
            let z = b * (1.0 - cdf.eval(m));
            let z = if bias_reduced { z * scale } else { z };
            match transform {
                Transform::Z => z,
                Transform::Y => -b * (-z / b).ln_1p(),
            }
        })
        .collect();
    Ok(PseudoSample {
        values,
        meta: PseudoSampleMeta {
            scheme,
            transform,
            series_len: x.len(),
            bias_reduced,
            ties_detected: cdf.has_ties(),
        },
    })
}
