//! Two-class ranking statistics, stratified resampling and position vectors.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Ranking, Universe};
use crate::rng::{rng_from, substream, with_workers};

/// Floor applied to statistic denominators of zero-variance variables.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Expression-style matrix (variables × samples) with two-class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    universe: Arc<Universe>,
    sample_ids: Vec<String>,
    values: Vec<f64>,
    labels: Vec<String>,
    classes: [String; 2],
}

impl LabeledDataset {
    /// `values` is row-major, one row of `sample_ids.len()` values per variable.
    pub fn new(
        universe: Arc<Universe>,
        sample_ids: Vec<String>,
        values: Vec<f64>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let n = sample_ids.len();
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: labels.len(),
            });
        }
        if values.len() != universe.len() * n {
            return Err(Error::DimensionMismatch {
                expected: universe.len() * n,
                found: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite value for variable `{}`, sample `{}`",
                universe.id(k / n),
                sample_ids[k % n]
            )));
        }
        let mut distinct: Vec<&String> = labels.iter().collect();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != 2 {
            return Err(Error::invalid(format!(
                "expected exactly 2 classes, found {}",
                distinct.len()
            )));
        }
        let classes = [distinct[0].clone(), distinct[1].clone()];
        for c in &classes {
            let count = labels.iter().filter(|l| *l == c).count();
            if count < 2 {
                return Err(Error::invalid(format!(
                    "class `{c}` has {count} sample(s); at least 2 required"
                )));
            }
        }
        Ok(LabeledDataset {
            universe,
            sample_ids,
            values,
            labels,
            classes,
        })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn n_vars(&self) -> usize {
        self.universe.len()
    }

    pub fn n_samples(&self) -> usize {
        self.sample_ids.len()
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The two class labels in sorted order.
    pub fn classes(&self) -> &[String; 2] {
        &self.classes
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n_samples();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices belonging to `class`, in dataset order.
    pub fn class_columns(&self, class: &str) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| *l == class)
            .map(|(s, _)| s)
            .collect()
    }

    /// The class that is not `class`; errors if `class` is unknown.
    pub fn other_class(&self, class: &str) -> Result<&str> {
        if class == self.classes[0] {
            Ok(&self.classes[1])
        } else if class == self.classes[1] {
            Ok(&self.classes[0])
        } else {
            Err(Error::invalid(format!(
                "unknown class `{class}` (classes are `{}` and `{}`)",
                self.classes[0], self.classes[1]
            )))
        }
    }

    /// New dataset made of the given columns (repeats allowed).
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        let n = self.n_samples();
        let mut values = Vec::with_capacity(self.n_vars() * columns.len());
        for i in 0..self.n_vars() {
            let row = &self.values[i * n..(i + 1) * n];
            values.extend(columns.iter().map(|&c| row[c]));
        }
        LabeledDataset::new(
            Arc::clone(&self.universe),
            columns.iter().map(|&c| self.sample_ids[c].clone()).collect(),
            values,
            columns.iter().map(|&c| self.labels[c].clone()).collect(),
        )
    }

    /// Same values with replaced labels.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        LabeledDataset::new(
            Arc::clone(&self.universe),
            self.sample_ids.clone(),
            self.values.clone(),
            labels,
        )
    }
}

struct GroupMoments {
    mean: f64,
    sd: f64,
    n: usize,
}

fn moments(row: &[f64], cols: &[usize]) -> GroupMoments {
    let n = cols.len();
    let mean = cols.iter().map(|&c| row[c]).sum::<f64>() / n as f64;
    let ss: f64 = cols.iter().map(|&c| (row[c] - mean).powi(2)).sum();
    GroupMoments {
        mean,
        sd: (ss / (n as f64 - 1.0)).sqrt(),
        n,
    }
}

fn two_group_scores(
    ds: &LabeledDataset,
    positive_class: &str,
    f: impl Fn(&GroupMoments, &GroupMoments) -> f64,
) -> Result<Vec<f64>> {
    let negative = ds.other_class(positive_class)?;
    let pos = ds.class_columns(positive_class);
    let neg = ds.class_columns(negative);
    Ok((0..ds.n_vars())
        .map(|i| {
            let row = ds.row(i);
            f(&moments(row, &pos), &moments(row, &neg))
        })
        .collect())
}

/// Signal-to-noise ratio `(m₊ − m₋)/(σ₊ + σ₋)` with sample standard deviations.
pub fn snr_scores(ds: &LabeledDataset, positive_class: &str) -> Result<Vec<f64>> {
    two_group_scores(ds, positive_class, |p, n| {
        (p.mean - n.mean) / (p.sd + n.sd).max(DENOMINATOR_FLOOR)
    })
}

/// Welch two-sample t statistic.
pub fn welch_t_scores(ds: &LabeledDataset, positive_class: &str) -> Result<Vec<f64>> {
    two_group_scores(ds, positive_class, |p, n| {
        let se = (p.sd * p.sd / p.n as f64 + n.sd * n.sd / n.n as f64).sqrt();
        (p.mean - n.mean) / se.max(DENOMINATOR_FLOOR)
    })
}

/// Anything that turns a labeled dataset into per-variable ranking scores.
pub trait Scorer: Sync {
    fn scores(&self, ds: &LabeledDataset) -> Result<Vec<f64>>;

    fn rank(&self, ds: &LabeledDataset) -> Result<Ranking> {
        Ranking::from_scores(&self.scores(ds)?)
    }
}

impl<F> Scorer for F
where
    F: Fn(&LabeledDataset) -> Result<Vec<f64>> + Sync,
{
    fn scores(&self, ds: &LabeledDataset) -> Result<Vec<f64>> {
        self(ds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatisticKind {
    Snr,
    WelchT,
}

impl std::str::FromStr for StatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snr" => Ok(StatisticKind::Snr),
            "t" | "welch-t" | "welch_t" => Ok(StatisticKind::WelchT),
            _ => Err(Error::config(format!("unknown statistic `{s}`"))),
        }
    }
}

/// A two-class statistic with the class whose high values rank first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statistic {
    pub kind: StatisticKind,
    pub positive_class: String,
}

impl Statistic {
    pub fn new(kind: StatisticKind, positive_class: impl Into<String>) -> Self {
        Statistic {
            kind,
            positive_class: positive_class.into(),
        }
    }
}

impl Scorer for Statistic {
    fn scores(&self, ds: &LabeledDataset) -> Result<Vec<f64>> {
        match self.kind {
            StatisticKind::Snr => snr_scores(ds, &self.positive_class),
            StatisticKind::WelchT => welch_t_scores(ds, &self.positive_class),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResampleMode {
    /// Keep `⌊fraction·n_g⌋` (at least 2) samples per class, without replacement.
    Subsample(f64),
    /// Draw `n_g` samples per class with replacement.
    Bootstrap,
}

/// Class-stratified resampling; deterministic given `seed`.
pub fn stratified_resample(
    ds: &LabeledDataset,
    mode: ResampleMode,
    seed: u64,
) -> Result<LabeledDataset> {
    if let ResampleMode::Subsample(f) = mode {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::config(format!(
                "subsample fraction {f} outside (0, 1]"
            )));
        }
    }
    let mut rng = rng_from(seed);
    let mut columns = Vec::with_capacity(ds.n_samples());
    for class in ds.classes() {
        let cols = ds.class_columns(class);
        let n = cols.len();
        match mode {
            ResampleMode::Subsample(f) => {
                let size = ((f * n as f64).floor() as usize).max(2).min(n);
                if size < 2 {
                    return Err(Error::invalid(format!(
                        "class `{class}` would keep {size} sample(s)"
                    )));
                }
                let mut picked: Vec<usize> = rand::seq::index::sample(&mut rng, n, size)
                    .into_iter()
                    .map(|k| cols[k])
                    .collect();
                picked.sort_unstable();
                columns.extend(picked);
            }
            ResampleMode::Bootstrap => {
                columns.extend((0..n).map(|_| cols[rng.random_range(0..n)]));
            }
        }
    }
    ds.select_columns(&columns)
}

/// Uniform random permutation of `labels`; deterministic given `seed`.
pub fn permute_labels<T: Clone>(labels: &[T], seed: u64) -> Vec<T> {
    let mut out = labels.to_vec();
    out.shuffle(&mut rng_from(seed));
    out
}

/// `M × B` matrix of ranking positions, one column per subsampling round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionVectors {
    m: usize,
    rounds: usize,
    data: Vec<u32>,
}

impl PositionVectors {
    /// Builds from per-round rankings (columns).
    pub fn from_rankings(rankings: &[Ranking]) -> Result<Self> {
        let rounds = rankings.len();
        let m = rankings.first().map_or(0, Ranking::len);
        if rankings.iter().any(|r| r.len() != m) {
            return Err(Error::invalid("rankings have different lengths"));
        }
        let mut data = vec![0u32; m * rounds];
        for (k, r) in rankings.iter().enumerate() {
            for (i, &p) in r.positions().iter().enumerate() {
                data[i * rounds + k] = p as u32;
            }
        }
        Ok(PositionVectors { m, rounds, data })
    }

    /// Builds from row-major data, checking that every column is a permutation.
    pub fn from_rows(m: usize, rounds: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != m * rounds {
            return Err(Error::DimensionMismatch {
                expected: m * rounds,
                found: data.len(),
            });
        }
        for k in 0..rounds {
            let col: Vec<usize> = (0..m).map(|i| data[i * rounds + k] as usize).collect();
            Ranking::from_positions(col)
                .map_err(|e| Error::invalid(format!("round {}: {e}", k + 1)))?;
        }
        Ok(PositionVectors { m, rounds, data })
    }

    pub fn n_vars(&self) -> usize {
        self.m
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Positions of variable `i` across rounds.
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.rounds..(i + 1) * self.rounds]
    }

    pub fn column(&self, k: usize) -> Vec<u32> {
        (0..self.m).map(|i| self.data[i * self.rounds + k]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositionVectorConfig {
    pub rounds: usize,
    pub fraction: f64,
    pub seed: u64,
    pub permute_each_round: bool,
    pub workers: usize,
}

impl Default for PositionVectorConfig {
    fn default() -> Self {
        PositionVectorConfig {
            rounds: 20,
            fraction: 2.0 / 3.0,
            seed: 0,
            permute_each_round: false,
            workers: 0,
        }
    }
}

/// Ranks `cfg.rounds` stratified subsamples of `ds`. Round `k` uses a seed
/// derived from `(cfg.seed, k)` only, so the result is independent of the
/// worker count.
pub fn build_position_vectors(
    ds: &LabeledDataset,
    scorer: &dyn Scorer,
    cfg: &PositionVectorConfig,
) -> Result<PositionVectors> {
    if cfg.rounds < 2 {
        return Err(Error::config(format!(
            "need at least 2 subsampling rounds, got {}",
            cfg.rounds
        )));
    }
    let round = |k: usize| -> Result<Ranking> {
        let seed = substream(cfg.seed, k as u64);
        let permuted;
        let base = if cfg.permute_each_round {
            permuted = ds.with_labels(permute_labels(ds.labels(), substream(seed, 1)))?;
            &permuted
        } else {
            ds
        };
        let sub = stratified_resample(base, ResampleMode::Subsample(cfg.fraction), substream(seed, 0))?;
        scorer.rank(&sub)
    };
    let rankings = with_workers(cfg.workers, || {
        (0..cfg.rounds)
            .into_par_iter()
            .map(round)
            .collect::<Result<Vec<_>>>()
    })??;
    PositionVectors::from_rankings(&rankings)
}
