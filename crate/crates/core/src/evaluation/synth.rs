//! Synthetic two-group expression data with planted gene blocks.

use std::sync::Arc;

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model::Universe;
use crate::rng::rng_from;
use crate::stats::LabeledDataset;

pub const GROUP_1: &str = "group1";
pub const GROUP_2: &str = "group2";

/// `m × n` matrix with entries `N(mean(i, j), 1)`, genes `g1..`, samples
/// `s1..`, the first half of the columns labelled `group1`.
pub fn gaussian_dataset(
    m: usize,
    n: usize,
    seed: u64,
    mean: impl Fn(usize, usize) -> f64,
) -> Result<LabeledDataset> {
    if n < 4 {
        return Err(Error::config(format!("need at least 4 samples, got {n}")));
    }
    let mut rng = rng_from(seed);
    let mut values = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let z: f64 = StandardNormal.sample(&mut rng);
            values.push(mean(i, j) + z);
        }
    }
    LabeledDataset::new(
        Arc::new(Universe::numbered(m)?),
        (1..=n).map(|s| format!("s{s}")).collect(),
        values,
        (0..n)
            .map(|j| if j < n / 2 { GROUP_1 } else { GROUP_2 }.to_string())
            .collect(),
    )
}

/// Example 1: 50 × 40, genes 1–10 shifted by +1 in samples 1–20.
/// Example 2: 75 × 60, genes 1–8 shifted by +2 in samples 1–15 and genes
/// 9–16 shifted by +2 in samples 16–30.
pub fn synth_example(which: u8, seed: u64) -> Result<LabeledDataset> {
    match which {
        1 => gaussian_dataset(50, 40, seed, |i, j| if i < 10 && j < 20 { 1.0 } else { 0.0 }),
        2 => gaussian_dataset(75, 60, seed, |i, j| {
            if (i < 8 && j < 15) || ((8..16).contains(&i) && (15..30).contains(&j)) {
                2.0
            } else {
                0.0
            }
        }),
        other => Err(Error::config(format!("unknown synthetic example {other}"))),
    }
}

/// `m × n` data whose first `informative` genes are shifted by `shift` in
/// `group1`.
pub fn synth_scaled(m: usize, n: usize, informative: usize, shift: f64, seed: u64) -> Result<LabeledDataset> {
    gaussian_dataset(m, n, seed, |i, j| if i < informative && j < n / 2 { shift } else { 0.0 })
}
