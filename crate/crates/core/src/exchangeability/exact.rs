//! Definitional exchangeability measures on explicit discrete distributions.
//!
//! These enumerate the full permutation group and serve as ground truth for
//! small arities.

use std::collections::BTreeMap;

use itertools::Itertools;

use super::estimate::{hausdorff, set_distance};
use super::metric::Metric;
use crate::error::{Error, Result};

pub const MAX_EXACT_ARITY: usize = 5;

/// Joint law of `(X_1, …, X_m)` on `{1..M}^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteJointDistribution {
    arity: usize,
    grid: usize,
    pmf: BTreeMap<Vec<u32>, f64>,
}

impl DiscreteJointDistribution {
    pub fn new(arity: usize, grid: usize, pmf: BTreeMap<Vec<u32>, f64>) -> Result<Self> {
        if !(2..=MAX_EXACT_ARITY).contains(&arity) {
            return Err(Error::config(format!(
                "arity {arity} outside 2..={MAX_EXACT_ARITY}"
            )));
        }
        if grid < 2 {
            return Err(Error::config("grid bound M must be at least 2"));
        }
        let mut total = 0.0;
        for (point, &p) in &pmf {
            if point.len() != arity || point.iter().any(|&c| c == 0 || c as usize > grid) {
                return Err(Error::invalid(format!("point {point:?} outside {{1..{grid}}}^{arity}")));
            }
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::invalid(format!("probability {p} at {point:?}")));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("probabilities sum to {total}")));
        }
        let pmf = pmf.into_iter().filter(|&(_, p)| p > 0.0).collect();
        Ok(DiscreteJointDistribution { arity, grid, pmf })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn pmf(&self) -> &BTreeMap<Vec<u32>, f64> {
        &self.pmf
    }

    /// Law of `(X_{π(1)}, …, X_{π(m)})`.
    fn permuted(&self, perm: &[usize]) -> BTreeMap<Vec<u32>, f64> {
        self.pmf
            .iter()
            .map(|(x, &p)| (perm.iter().map(|&k| x[k]).collect(), p))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExactMeasure {
    PVar,
    EdMax,
    EdMean,
}

/// Evaluates a measure by enumerating all permutations of the arity.
///
/// The norm in the variation measure is the positive-part mass
/// `Σ_x max(μ{x}, 0)`, which keeps it in `[0, 1]`.
pub fn exact_measures(
    d: &DiscreteJointDistribution,
    measure: ExactMeasure,
    metric: Metric,
) -> Result<f64> {
    let perms: Vec<Vec<usize>> = (0..d.arity).permutations(d.arity).collect();
    let laws: Vec<BTreeMap<Vec<u32>, f64>> = perms.iter().map(|p| d.permuted(p)).collect();
    let n_perm = laws.len() as f64;

    match measure {
        ExactMeasure::PVar => {
            let mut average: BTreeMap<&[u32], f64> = BTreeMap::new();
            for law in &laws {
                for (x, &p) in law {
                    *average.entry(x.as_slice()).or_default() += p / n_perm;
                }
            }
            let total: f64 = laws
                .iter()
                .map(|law| {
                    average
                        .iter()
                        .map(|(x, &avg)| (law.get(*x).copied().unwrap_or(0.0) - avg).max(0.0))
                        .sum::<f64>()
                })
                .sum();
            Ok(total / (n_perm - 1.0))
        }
        ExactMeasure::EdMax | ExactMeasure::EdMean => {
            let supports: Vec<Vec<&Vec<u32>>> = laws.iter().map(|l| l.keys().collect()).collect();
            let mut total = 0.0;
            for (a, law) in laws.iter().enumerate() {
                for support in &supports {
                    total += match measure {
                        ExactMeasure::EdMax => hausdorff(&supports[a], support, metric)?,
                        _ => law.iter().try_fold(0.0, |acc, (x, &p)| {
                            Ok::<_, Error>(acc + p * set_distance(x, support, metric)?)
                        })?,
                    };
                }
            }
            let norm = metric.corner_distance(d.arity, d.grid) * n_perm * (n_perm - 1.0);
            Ok(total / norm)
        }
    }
}
