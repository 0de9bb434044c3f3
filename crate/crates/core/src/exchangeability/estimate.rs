//! Set distances and the sample-based pair estimators.

use std::fmt;
use std::str::FromStr;

use super::kde::{estimate_pvar, KdeSettings};
use super::metric::Metric;
use crate::error::{Error, Result};

/// A point of the 2-D position grid `{1..M}²`.
pub type Point = [u32; 2];

/// `min_{a ∈ set} ρ(p, a)`.
pub fn set_distance<P: AsRef<[u32]>>(p: &[u32], set: &[P], metric: Metric) -> Result<f64> {
    set.iter()
        .map(|a| metric.distance(p, a.as_ref()))
        .min_by(f64::total_cmp)
        .ok_or(Error::EmptySet)
}

/// Hausdorff distance between two non-empty point sets.
pub fn hausdorff<P: AsRef<[u32]>>(a: &[P], b: &[P], metric: Metric) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let directed = |from: &[P], to: &[P]| -> Result<f64> {
        from.iter().try_fold(0.0f64, |acc, p| {
            Ok(acc.max(set_distance(p.as_ref(), to, metric)?))
        })
    };
    Ok(directed(a, b)?.max(directed(b, a)?))
}

/// Paired positions of two variables across `B` rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSamples {
    forward: Vec<Point>,
    grid: usize,
}

impl PairSamples {
    /// Pairs round `k` of `si` with round `k` of `sj` on the grid `{1..grid}²`.
    pub fn new(si: &[u32], sj: &[u32], grid: usize) -> Result<Self> {
        if si.len() != sj.len() {
            return Err(Error::DimensionMismatch {
                expected: si.len(),
                found: sj.len(),
            });
        }
        Self::from_points(si.iter().zip(sj).map(|(&x, &y)| [x, y]).collect(), grid)
    }

    pub fn from_points(forward: Vec<Point>, grid: usize) -> Result<Self> {
        if forward.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(p) = forward
            .iter()
            .find(|p| p.iter().any(|&c| c == 0 || c as usize > grid))
        {
            return Err(Error::invalid(format!(
                "point ({}, {}) outside grid 1..={grid}",
                p[0], p[1]
            )));
        }
        Ok(PairSamples { forward, grid })
    }

    pub fn forward(&self) -> &[Point] {
        &self.forward
    }

    /// Coordinate-swapped image of the forward points, index-aligned by round.
    pub fn reflected(&self) -> Vec<Point> {
        self.forward.iter().map(|&[x, y]| [y, x]).collect()
    }

    pub fn rounds(&self) -> usize {
        self.forward.len()
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Position vectors `(S_i, S_j)`.
    pub fn split(&self) -> (Vec<u32>, Vec<u32>) {
        self.forward.iter().map(|&[x, y]| (x, y)).unzip()
    }
}

/// Exchangeability distance to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Measure {
    /// Total exchangeability variation (kernel density estimate).
    PVar,
    EdMax,
    EdMean,
    OedMax,
    #[default]
    OedMean,
}

impl Measure {
    pub fn is_one_sided(&self) -> bool {
        matches!(self, Measure::OedMax | Measure::OedMean)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Measure::PVar => "pvar",
            Measure::EdMax => "ed-max",
            Measure::EdMean => "ed-mean",
            Measure::OedMax => "oed-max",
            Measure::OedMean => "oed-mean",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pvar" => Ok(Measure::PVar),
            "ed-max" => Ok(Measure::EdMax),
            "ed-mean" => Ok(Measure::EdMean),
            "oed-max" => Ok(Measure::OedMax),
            "oed-mean" => Ok(Measure::OedMean),
            _ => Err(Error::config(format!("unknown measure `{s}`"))),
        }
    }
}

/// Measure, metric and density settings of a pair estimator.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimator {
    pub measure: Measure,
    pub metric: Metric,
    pub kde: KdeSettings,
}

impl Estimator {
    pub fn new(measure: Measure, metric: Metric) -> Self {
        Estimator {
            measure,
            metric,
            kde: KdeSettings::default(),
        }
    }

    /// Estimated distance in `[0, 1]` for the pair of position vectors.
    pub fn distance(&self, si: &[u32], sj: &[u32], grid: usize) -> Result<f64> {
        match self.measure {
            Measure::PVar => estimate_pvar(&PairSamples::new(si, sj, grid)?, &self.kde),
            m => pair_distance(si, sj, grid, m, self.metric),
        }
    }

    pub fn check(&self, grid: usize) -> Result<()> {
        if self.measure.is_one_sided() && grid < 3 {
            return Err(Error::config(format!(
                "one-sided measures need M >= 3, got M = {grid}"
            )));
        }
        if grid < 2 {
            return Err(Error::config("grid bound M must be at least 2"));
        }
        self.kde.check()
    }
}

/// Sample estimate of one of the four distance measures, clamped to `[0, 1]`.
pub fn estimate_pair(ps: &PairSamples, measure: Measure, metric: Metric) -> Result<f64> {
    if measure == Measure::PVar {
        return Err(Error::config(
            "pvar is a density estimate; use estimate_pvar",
        ));
    }
    let (si, sj) = ps.split();
    pair_distance(&si, &sj, ps.grid, measure, metric)
}

fn sign(a: u32, b: u32) -> i8 {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

/// Core of the pair estimators on raw position vectors.
///
/// Forward point `k` is `(si[k], sj[k])`, reflected point `v` is `(sj[v], si[v])`.
/// The reflection is an isometry of all supported metrics, so the two directed
/// Hausdorff terms coincide and only one is evaluated.
pub(crate) fn pair_distance(
    si: &[u32],
    sj: &[u32],
    grid: usize,
    measure: Measure,
    metric: Metric,
) -> Result<f64> {
    let b = si.len();
    if b == 0 || sj.len() != b {
        return Err(Error::invalid("position vectors must be non-empty and equal length"));
    }
    let one_sided = measure.is_one_sided();
    if one_sided && grid < 3 {
        return Err(Error::config(format!(
            "one-sided measures need M >= 3, got M = {grid}"
        )));
    }
    let m = grid as u32;
    let norm = if one_sided {
        metric.distance(&[1, 2], &[m - 1, m])
    } else {
        metric.corner_distance(2, grid)
    };
    if norm <= 0.0 {
        return Err(Error::config("grid bound M must be at least 2"));
    }

    let mut total = 0.0;
    let mut worst = 0u64;
    for k in 0..b {
        let p = [si[k], sj[k]];
        let side = sign(si[k], sj[k]);
        let mut best = u64::MAX;
        for v in 0..b {
            // reflected point v lies on side sign(sj[v] - si[v])
            if one_sided && sign(sj[v], si[v]) != side {
                continue;
            }
            best = best.min(metric.raw2(p, [sj[v], si[v]]));
        }
        if best == u64::MAX {
            return Ok(1.0);
        }
        worst = worst.max(best);
        total += metric.finish(best);
    }
    let d = match measure {
        Measure::EdMax | Measure::OedMax => metric.finish(worst) / norm,
        _ => total / b as f64 / norm,
    };
    Ok(d.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const E: Metric = Metric::Euclidean;

    #[test]
    fn set_distance_examples() {
        assert_eq!(set_distance(&[2, 1], &[[2, 1], [3, 1]], E).unwrap(), 0.0);
        assert_abs_diff_eq!(
            set_distance(&[1, 2], &[[2, 1], [3, 1]], E).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-15
        );
        assert_eq!(set_distance(&[1, 1], &[[4, 5]], E).unwrap(), 5.0);
        let empty: [[u32; 2]; 0] = [];
        assert!(matches!(set_distance(&[1, 1], &empty, E), Err(Error::EmptySet)));
    }

    #[test]
    fn hausdorff_examples() {
        let a = [[1u32, 2], [3, 4]];
        assert_eq!(hausdorff(&a, &a, E).unwrap(), 0.0);
        assert_abs_diff_eq!(
            hausdorff(&a, &[[2, 1]], E).unwrap(),
            10f64.sqrt(),
            epsilon = 1e-15
        );
        let empty: [[u32; 2]; 0] = [];
        assert!(hausdorff(&a, &empty, E).is_err());
    }

    #[test]
    fn symmetric_support_is_zero() {
        let ps = PairSamples::new(&[1, 2], &[2, 1], 3).unwrap();
        for m in [Measure::EdMean, Measure::EdMax, Measure::OedMean, Measure::OedMax] {
            assert_eq!(estimate_pair(&ps, m, E).unwrap(), 0.0, "{m}");
        }
    }

    #[test]
    fn hand_computed_pair() {
        let ps = PairSamples::new(&[1, 1], &[2, 3], 3).unwrap();
        let ed_mean = estimate_pair(&ps, Measure::EdMean, E).unwrap();
        assert_abs_diff_eq!(
            ed_mean,
            (2f64.sqrt() + 5f64.sqrt()) / (2.0 * 2.0 * 2f64.sqrt()),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(ed_mean, 0.64528, epsilon = 1e-5);
        let ed_max = estimate_pair(&ps, Measure::EdMax, E).unwrap();
        assert_abs_diff_eq!(ed_max, 5f64.sqrt() / (2.0 * 2f64.sqrt()), epsilon = 1e-12);
        assert_abs_diff_eq!(ed_max, 0.79057, epsilon = 1e-5);
        assert_eq!(estimate_pair(&ps, Measure::OedMean, E).unwrap(), 1.0);
        assert_eq!(estimate_pair(&ps, Measure::OedMax, E).unwrap(), 1.0);
    }

    #[test]
    fn configuration_errors() {
        let ps = PairSamples::new(&[1, 2], &[2, 1], 2).unwrap();
        assert!(matches!(
            estimate_pair(&ps, Measure::OedMean, E),
            Err(Error::Config(_))
        ));
        assert!(estimate_pair(&ps, Measure::EdMean, E).is_ok());
        assert!(estimate_pair(&ps, Measure::PVar, E).is_err());
        assert!(PairSamples::new(&[1, 4], &[2, 1], 3).is_err());
        assert!(PairSamples::new(&[1], &[2, 1], 3).is_err());
    }

    fn samples() -> impl Strategy<Value = PairSamples> {
        (3usize..25).prop_flat_map(|m| {
            prop::collection::vec(prop::array::uniform2(1..=m as u32), 1..12)
                .prop_map(move |pts| PairSamples::from_points(pts, m).unwrap())
        })
    }

    proptest! {
        #[test]
        fn estimator_properties(ps in samples()) {
            let swapped = PairSamples::from_points(ps.reflected(), ps.grid()).unwrap();
            let mut values = std::collections::HashMap::new();
            for metric in [Metric::Euclidean, Metric::Manhattan, Metric::Chebyshev] {
                for m in [Measure::EdMean, Measure::EdMax, Measure::OedMean, Measure::OedMax] {
                    let d = estimate_pair(&ps, m, metric).unwrap();
                    prop_assert!((0.0..=1.0).contains(&d));
                    prop_assert_eq!(d, estimate_pair(&swapped, m, metric).unwrap());
                    values.insert((metric, m), d);
                }
                let v = |m| values[&(metric, m)];
                prop_assert!(v(Measure::EdMean) <= v(Measure::EdMax) + 1e-15);
                prop_assert!(v(Measure::OedMean) <= v(Measure::OedMax) + 1e-15);
                // restricting the candidate set cannot shrink a minimum, and
                // the one-sided normalizer is the smaller one
                prop_assert!(v(Measure::EdMean) <= v(Measure::OedMean) + 1e-15);
            }
            let reflected = ps.reflected();
            let all_in = ps.forward().iter().all(|p| reflected.contains(p));
            prop_assert_eq!(values[&(Metric::Euclidean, Measure::EdMean)] == 0.0, all_in);
        }

        #[test]
        fn round_order_invariance(ps in samples(), seed in any::<u64>()) {
            let shuffled = crate::stats::permute_labels(ps.forward(), seed);
            let other = PairSamples::from_points(shuffled, ps.grid()).unwrap();
            for m in [Measure::EdMean, Measure::EdMax, Measure::OedMean, Measure::OedMax] {
                let a = estimate_pair(&ps, m, E).unwrap();
                let b = estimate_pair(&other, m, E).unwrap();
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
