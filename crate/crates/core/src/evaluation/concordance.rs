//! Agreement between collections of rankings and rank aggregation.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Direction, Ranking};

/// `f[k-1]` = number of genes in the top (or bottom) `k` of every ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcordanceCurve {
    pub f: Vec<usize>,
    pub direction: Direction,
}

impl ConcordanceCurve {
    pub fn at(&self, k: usize) -> usize {
        self.f[k - 1]
    }

    /// Mean of `f_k` over `k = 1..=k_max`.
    pub fn mean_up_to(&self, k_max: usize) -> f64 {
        let k_max = k_max.min(self.f.len());
        self.f[..k_max].iter().sum::<usize>() as f64 / k_max as f64
    }
}

fn common_length(rankings: &[Ranking], min_count: usize) -> Result<usize> {
    if rankings.len() < min_count {
        return Err(Error::invalid(format!(
            "need at least {min_count} rankings, got {}",
            rankings.len()
        )));
    }
    let m = rankings[0].len();
    if let Some(r) = rankings.iter().find(|r| r.len() != m) {
        return Err(Error::UniverseMismatch(format!(
            "rankings over {m} and {} genes",
            r.len()
        )));
    }
    Ok(m)
}

fn oriented(p: usize, m: usize, direction: Direction) -> usize {
    match direction {
        Direction::Top => p,
        Direction::Bottom => m + 1 - p,
    }
}

pub fn concordance_curve(rankings: &[Ranking], direction: Direction) -> Result<ConcordanceCurve> {
    let m = common_length(rankings, 2)?;
    // a gene is in every top-k exactly when its worst position is <= k
    let mut entering = vec![0usize; m + 1];
    for i in 0..m {
        let worst = rankings
            .iter()
            .map(|r| oriented(r.position(i), m, direction))
            .max()
            .unwrap_or(1);
        entering[worst] += 1;
    }
    let mut f = Vec::with_capacity(m);
    let mut acc = 0;
    for count in &entering[1..] {
        acc += count;
        f.push(acc);
    }
    Ok(ConcordanceCurve { f, direction })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseOverlap {
    /// `(a, b, |top_k(r_a) ∩ top_k(r_b)|)` for `a < b`.
    pub pairs: Vec<(usize, usize, usize)>,
    pub mean: f64,
}

pub fn mean_pairwise_overlap(rankings: &[Ranking], k: usize, direction: Direction) -> Result<PairwiseOverlap> {
    let m = common_length(rankings, 2)?;
    if k > m {
        return Err(Error::invalid(format!("k = {k} exceeds M = {m}")));
    }
    let sets: Vec<Vec<bool>> = rankings
        .iter()
        .map(|r| (0..m).map(|i| oriented(r.position(i), m, direction) <= k).collect())
        .collect();
    let mut pairs = Vec::new();
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            let overlap = (0..m).filter(|&i| sets[a][i] && sets[b][i]).count();
            pairs.push((a, b, overlap));
        }
    }
    let mean = pairs.iter().map(|p| p.2 as f64).sum::<f64>() / pairs.len() as f64;
    Ok(PairwiseOverlap { pairs, mean })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Aggregation {
    Median,
    RankProduct,
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregation::Median => "median",
            Aggregation::RankProduct => "rank-product",
        })
    }
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(Aggregation::Median),
            "rank-product" | "rank_product" => Ok(Aggregation::RankProduct),
            _ => Err(Error::config(format!("unknown aggregation '{s}'"))),
        }
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Orders genes by ascending median position or log rank product; ties go
/// to the smaller universe index.
pub fn aggregate_rankings(rankings: &[Ranking], method: Aggregation) -> Result<Ranking> {
    let m = common_length(rankings, 1)?;
    let stat: Vec<f64> = (0..m)
        .map(|i| {
            let mut positions: Vec<f64> = rankings.iter().map(|r| r.position(i) as f64).collect();
            match method {
                Aggregation::Median => median(&mut positions),
                Aggregation::RankProduct => positions.iter().map(|p| p.ln()).sum(),
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| stat[a].total_cmp(&stat[b]).then(a.cmp(&b)));
    Ranking::from_order(&order)
}
