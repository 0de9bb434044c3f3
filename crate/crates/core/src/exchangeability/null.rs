//! Uniform-support null scores and score normalization.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::Rng as _;
use rayon::prelude::*;

use super::estimate::Estimator;
use super::kde::Bandwidth;
use crate::error::{Error, Result};
use crate::rng::substream_rng;

pub const DEFAULT_NULL_REPEATS: usize = 100;

type NullKey = (usize, usize, &'static str, &'static str, u64, usize, usize, u64);

fn cache() -> &'static Mutex<HashMap<NullKey, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<NullKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Mean exchangeability score (`1 − distance`) of `rounds` points drawn
/// uniformly from `{1..grid}²`, averaged over `repeats` draws.
///
/// Values are memoized per parameter set; repeat `r` always uses the seed
/// derived from `(seed, r)`.
pub fn null_score(
    grid: usize,
    rounds: usize,
    estimator: &Estimator,
    repeats: usize,
    seed: u64,
) -> Result<f64> {
    if repeats == 0 {
        return Err(Error::config("null score needs at least one repeat"));
    }
    if rounds == 0 {
        return Err(Error::config("null score needs at least one point"));
    }
    estimator.check(grid)?;
    let bandwidth_bits = match estimator.kde.bandwidth {
        Bandwidth::Auto => u64::MAX,
        Bandwidth::Fixed(h) => h.to_bits(),
    };
    let key = (
        grid,
        rounds,
        estimator.measure.name(),
        estimator.metric.name(),
        bandwidth_bits,
        estimator.kde.grid_resolution,
        repeats,
        seed,
    );
    if let Some(&v) = cache().lock().expect("null cache poisoned").get(&key) {
        return Ok(v);
    }
    let scores = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let mut rng = substream_rng(seed, r as u64);
            let (si, sj): (Vec<u32>, Vec<u32>) = (0..rounds)
                .map(|_| {
                    (
                        rng.random_range(1..=grid as u32),
                        rng.random_range(1..=grid as u32),
                    )
                })
                .unzip();
            Ok(1.0 - estimator.distance(&si, &sj, grid)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = scores.iter().sum::<f64>() / repeats as f64;
    cache().lock().expect("null cache poisoned").insert(key, mean);
    Ok(mean)
}

/// `((score − null) / (1 − null))₊`.
pub fn normalize_score(score: f64, null: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&null) {
        return Err(Error::DegenerateNull(null));
    }
    Ok(((score - null) / (1.0 - null)).max(0.0))
}
