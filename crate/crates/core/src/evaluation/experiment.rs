//! Ranking-stability experiments: the five ranking methods, concordance
//! across bootstrap replicates, and stability of list distances.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::concordance::{aggregate_rankings, concordance_curve, Aggregation, ConcordanceCurve};
use crate::error::{Error, Result};
use crate::exchangeability::{
    exchangeability_matrix, Estimator, ExchangeabilityMatrix, MatrixConfig, DEFAULT_NULL_REPEATS,
};
use crate::framework::{
    correlation_v_matrix, cosine_dissimilarity, extend_ranking, list_vector, PositionMatrix,
    Summarizer, WeightMatrix, DEFAULT_B_SQUARED,
};
use crate::model::{Direction, Ranking};
use crate::rng::{rng_from, substream, with_workers};
use crate::stats::{
    build_position_vectors, permute_labels, stratified_resample, LabeledDataset,
    PositionVectorConfig, ResampleMode, Scorer, Statistic, StatisticKind,
};

const EXTENSION_STREAM: u64 = 1;
const RANKING_STREAM: u64 = 2;
const BOOTSTRAP_STREAM: u64 = 3;
const PERMUTATION_STREAM: u64 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub boot_replicates: usize,
    pub subsample_rounds: usize,
    pub fraction: f64,
    pub b_squared: f64,
    pub aggregation_rounds: usize,
    pub seed: u64,
    pub estimator: Estimator,
    pub null_repeats: usize,
    /// Exchangeability scores `<= threshold` are dropped from `V`.
    pub threshold: f64,
    pub statistic: StatisticKind,
    /// Class ranked first; the first class in sorted order when `None`.
    pub positive_class: Option<String>,
    /// Permute class labels independently in every replicate.
    pub permute_labels: bool,
    /// Bootstrap the replicates; when false every replicate is the input.
    pub resample_replicates: bool,
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            boot_replicates: 10,
            subsample_rounds: 20,
            fraction: 2.0 / 3.0,
            b_squared: DEFAULT_B_SQUARED,
            aggregation_rounds: 100,
            seed: 0,
            estimator: Estimator::default(),
            null_repeats: DEFAULT_NULL_REPEATS,
            threshold: 0.0,
            statistic: StatisticKind::Snr,
            positive_class: None,
            permute_labels: false,
            resample_replicates: true,
            workers: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("bootstrap replicates", self.boot_replicates),
            ("subsample rounds", self.subsample_rounds),
            ("aggregation rounds", self.aggregation_rounds),
            ("null repeats", self.null_repeats),
        ] {
            if v == 0 {
                return Err(Error::config(format!("{name} must be positive")));
            }
        }
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(Error::config(format!("fraction {} outside (0, 1]", self.fraction)));
        }
        if self.b_squared.is_nan() || self.b_squared <= 0.0 {
            return Err(Error::config("b² must be positive"));
        }
        Ok(())
    }

    pub fn statistic_for(&self, ds: &LabeledDataset) -> Statistic {
        let positive = self
            .positive_class
            .clone()
            .unwrap_or_else(|| ds.classes()[0].clone());
        Statistic::new(self.statistic, positive)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RankingMethod {
    NonExtended,
    Extended,
    Median,
    RankProduct,
    Correlation,
    Random,
}

impl RankingMethod {
    pub const FIVE: [RankingMethod; 5] = [
        RankingMethod::NonExtended,
        RankingMethod::Extended,
        RankingMethod::Median,
        RankingMethod::RankProduct,
        RankingMethod::Correlation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RankingMethod::NonExtended => "non-extended",
            RankingMethod::Extended => "extended",
            RankingMethod::Median => "median",
            RankingMethod::RankProduct => "rank-product",
            RankingMethod::Correlation => "correlation",
            RankingMethod::Random => "random",
        }
    }
}

impl fmt::Display for RankingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RankingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RankingMethod::FIVE
            .into_iter()
            .chain([RankingMethod::Random])
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::config(format!("unknown ranking method '{s}'")))
    }
}

/// Exchangeability matrix from `cfg.subsample_rounds` stratified subsamples.
pub fn exchangeability_for(ds: &LabeledDataset, cfg: &ExperimentConfig, seed: u64) -> Result<ExchangeabilityMatrix> {
    let pv = build_position_vectors(
        ds,
        &cfg.statistic_for(ds),
        &PositionVectorConfig {
            rounds: cfg.subsample_rounds,
            fraction: cfg.fraction,
            seed: substream(seed, 0),
            permute_each_round: false,
            workers: cfg.workers,
        },
    )?;
    exchangeability_matrix(
        &pv,
        &MatrixConfig {
            estimator: cfg.estimator,
            null_repeats: cfg.null_repeats,
            seed: substream(seed, 1),
            threshold: cfg.threshold,
            workers: cfg.workers,
        },
    )
}

/// Similarity matrices used to extend rankings.
#[derive(Debug, Clone, PartialEq)]
pub struct Extensions {
    pub exchangeability: ExchangeabilityMatrix,
    pub correlation: ExchangeabilityMatrix,
}

pub fn build_extensions(ds: &LabeledDataset, cfg: &ExperimentConfig, seed: u64) -> Result<Extensions> {
    Ok(Extensions {
        exchangeability: exchangeability_for(ds, cfg, seed)?,
        correlation: correlation_v_matrix(ds, cfg.threshold)?,
    })
}

fn subsample_rankings(ds: &LabeledDataset, cfg: &ExperimentConfig, seed: u64) -> Result<Vec<Ranking>> {
    let stat = cfg.statistic_for(ds);
    (0..cfg.aggregation_rounds)
        .map(|r| {
            let sub = stratified_resample(ds, ResampleMode::Subsample(cfg.fraction), substream(seed, r as u64))?;
            stat.rank(&sub)
        })
        .collect()
}

fn random_ranking(m: usize, seed: u64) -> Result<Ranking> {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng_from(seed));
    Ranking::from_order(&order)
}

/// Ranking of `ds` by one method; extension methods need `ext`.
pub fn rank_by_method(
    ds: &LabeledDataset,
    method: RankingMethod,
    ext: Option<&Extensions>,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<Ranking> {
    let need_ext = || ext.ok_or_else(|| Error::config(format!("{method} ranking needs a similarity matrix")));
    match method {
        RankingMethod::NonExtended => cfg.statistic_for(ds).rank(ds),
        RankingMethod::Extended => {
            let base = cfg.statistic_for(ds).rank(ds)?;
            Ok(extend_ranking(&base, &need_ext()?.exchangeability, cfg.b_squared)?.1)
        }
        RankingMethod::Correlation => {
            let base = cfg.statistic_for(ds).rank(ds)?;
            Ok(extend_ranking(&base, &need_ext()?.correlation, cfg.b_squared)?.1)
        }
        RankingMethod::Median => aggregate_rankings(&subsample_rankings(ds, cfg, seed)?, Aggregation::Median),
        RankingMethod::RankProduct => {
            aggregate_rankings(&subsample_rankings(ds, cfg, seed)?, Aggregation::RankProduct)
        }
        RankingMethod::Random => random_ranking(ds.n_vars(), seed),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiveRankings {
    pub non_extended: Ranking,
    pub extended: Ranking,
    pub median: Ranking,
    pub rank_product: Ranking,
    pub correlation: Ranking,
}

impl FiveRankings {
    pub fn get(&self, method: RankingMethod) -> Option<&Ranking> {
        match method {
            RankingMethod::NonExtended => Some(&self.non_extended),
            RankingMethod::Extended => Some(&self.extended),
            RankingMethod::Median => Some(&self.median),
            RankingMethod::RankProduct => Some(&self.rank_product),
            RankingMethod::Correlation => Some(&self.correlation),
            RankingMethod::Random => None,
        }
    }
}

/// The five rankings of `ds` given precomputed similarity matrices.
pub fn rank_five(ds: &LabeledDataset, ext: &Extensions, cfg: &ExperimentConfig, seed: u64) -> Result<FiveRankings> {
    let base = cfg.statistic_for(ds).rank(ds)?;
    let extended = extend_ranking(&base, &ext.exchangeability, cfg.b_squared)?.1;
    let correlation = extend_ranking(&base, &ext.correlation, cfg.b_squared)?.1;
    let subs = subsample_rankings(ds, cfg, seed)?;
    Ok(FiveRankings {
        median: aggregate_rankings(&subs, Aggregation::Median)?,
        rank_product: aggregate_rankings(&subs, Aggregation::RankProduct)?,
        non_extended: base,
        extended,
        correlation,
    })
}

/// The five rankings of `ds`, with `V` estimated from `ds` itself.
pub fn run_five_rankings(ds: &LabeledDataset, cfg: &ExperimentConfig) -> Result<FiveRankings> {
    cfg.validate()?;
    let ext = build_extensions(ds, cfg, substream(cfg.seed, EXTENSION_STREAM))?;
    rank_five(ds, &ext, cfg, substream(cfg.seed, RANKING_STREAM))
}

/// Dataset from which `V` is estimated: `ds`, or `ds` with one label
/// permutation when labels are permuted.
fn extension_source(ds: &LabeledDataset, cfg: &ExperimentConfig, seed: u64) -> Result<LabeledDataset> {
    if cfg.permute_labels {
        ds.with_labels(permute_labels(ds.labels(), substream(seed, PERMUTATION_STREAM)))
    } else {
        Ok(ds.clone())
    }
}

/// Replicate `b`: a class-stratified bootstrap (or `ds` itself), labels
/// permuted when requested.
fn replicate(ds: &LabeledDataset, cfg: &ExperimentConfig, seed: u64, b: usize) -> Result<LabeledDataset> {
    let rep_seed = substream(substream(seed, BOOTSTRAP_STREAM), b as u64);
    let rep = if cfg.resample_replicates {
        stratified_resample(ds, ResampleMode::Bootstrap, substream(rep_seed, 0))?
    } else {
        ds.clone()
    };
    if cfg.permute_labels {
        rep.with_labels(permute_labels(rep.labels(), substream(rep_seed, 1)))
    } else {
        Ok(rep)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcordanceExperiment {
    /// Replicate rankings for every method, in replicate order.
    pub rankings: Vec<(RankingMethod, Vec<Ranking>)>,
}

impl ConcordanceExperiment {
    pub fn rankings_for(&self, method: RankingMethod) -> Option<&[Ranking]> {
        self.rankings
            .iter()
            .find(|(m, _)| *m == method)
            .map(|(_, r)| r.as_slice())
    }

    pub fn curve(&self, method: RankingMethod, direction: Direction) -> Result<ConcordanceCurve> {
        let rankings = self
            .rankings_for(method)
            .ok_or_else(|| Error::config(format!("no rankings for method {method}")))?;
        concordance_curve(rankings, direction)
    }
}

/// Five rankings on each of `cfg.boot_replicates` replicates of `ds`, with
/// `V` estimated once from the (possibly label-permuted) input.
pub fn concordance_experiment(ds: &LabeledDataset, cfg: &ExperimentConfig) -> Result<ConcordanceExperiment> {
    cfg.validate()?;
    let source = extension_source(ds, cfg, cfg.seed)?;
    let ext = build_extensions(&source, cfg, substream(cfg.seed, EXTENSION_STREAM))?;
    let ranking_seed = substream(cfg.seed, RANKING_STREAM);
    let per_replicate = with_workers(cfg.workers, || {
        (0..cfg.boot_replicates)
            .into_par_iter()
            .map(|b| {
                let rep = replicate(ds, cfg, cfg.seed, b)?;
                rank_five(&rep, &ext, cfg, substream(ranking_seed, b as u64))
            })
            .collect::<Result<Vec<FiveRankings>>>()
    })??;
    let rankings = RankingMethod::FIVE
        .into_iter()
        .map(|m| {
            let rs = per_replicate
                .iter()
                .map(|five| five.get(m).cloned().expect("five methods"))
                .collect();
            (m, rs)
        })
        .collect();
    Ok(ConcordanceExperiment { rankings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DatasetPair {
    WithinA,
    WithinB,
    Between,
}

impl DatasetPair {
    pub fn name(self) -> &'static str {
        match self {
            DatasetPair::WithinA => "A-A",
            DatasetPair::WithinB => "B-B",
            DatasetPair::Between => "A-B",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Extended,
    NonExtended,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Extended => "extended",
            Variant::NonExtended => "non-extended",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceSample {
    pub comparison: DatasetPair,
    pub variant: Variant,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceStability {
    pub samples: Vec<DistanceSample>,
}

impl DistanceStability {
    pub fn distances(&self, comparison: DatasetPair, variant: Variant) -> Vec<f64> {
        self.samples
            .iter()
            .filter(|s| s.comparison == comparison && s.variant == variant)
            .map(|s| s.distance)
            .collect()
    }

    pub fn mean(&self, comparison: DatasetPair, variant: Variant) -> f64 {
        let d = self.distances(comparison, variant);
        d.iter().sum::<f64>() / d.len() as f64
    }
}

struct ReplicateVectors {
    extended: Vec<Vec<f64>>,
    non_extended: Vec<Vec<f64>>,
}

fn replicate_vectors(ds: &LabeledDataset, cfg: &ExperimentConfig, seed: u64) -> Result<ReplicateVectors> {
    let source = extension_source(ds, cfg, seed)?;
    let v = exchangeability_for(&source, cfg, substream(seed, EXTENSION_STREAM))?;
    let m = ds.n_vars();
    let pairs = with_workers(cfg.workers, || {
        (0..cfg.boot_replicates)
            .into_par_iter()
            .map(|b| {
                let rep = replicate(ds, cfg, seed, b)?;
                let r = cfg.statistic_for(&rep).rank(&rep)?;
                let a = PositionMatrix::rank_based(&r, cfg.b_squared)?;
                let ext = list_vector(&a, &v, &WeightMatrix::identity(m), Summarizer::MaxMagnitude)?;
                Ok((ext.into_values(), a.diag().to_vec()))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let (extended, non_extended) = pairs.into_iter().unzip();
    Ok(ReplicateVectors {
        extended,
        non_extended,
    })
}

/// Cosine distances between list vectors of bootstrap replicates within and
/// across two datasets on the same universe. `V` is estimated once per
/// dataset; position matrices come from each replicate.
pub fn distance_stability(
    ds_a: &LabeledDataset,
    ds_b: &LabeledDataset,
    cfg: &ExperimentConfig,
) -> Result<DistanceStability> {
    cfg.validate()?;
    if ds_a.universe().ids() != ds_b.universe().ids() {
        return Err(Error::UniverseMismatch(
            "datasets must share an identical gene universe".into(),
        ));
    }
    let va = replicate_vectors(ds_a, cfg, substream(cfg.seed, 10))?;
    let vb = replicate_vectors(ds_b, cfg, substream(cfg.seed, 11))?;
    let mut samples = Vec::new();
    for (variant, xs, ys) in [
        (Variant::Extended, &va.extended, &vb.extended),
        (Variant::NonExtended, &va.non_extended, &vb.non_extended),
    ] {
        for (comparison, left, right) in [
            (DatasetPair::WithinA, xs, xs),
            (DatasetPair::WithinB, ys, ys),
            (DatasetPair::Between, xs, ys),
        ] {
            let within = comparison != DatasetPair::Between;
            for (i, u) in left.iter().enumerate() {
                let start = if within { i + 1 } else { 0 };
                for w in &right[start..] {
                    samples.push(DistanceSample {
                        comparison,
                        variant,
                        distance: cosine_dissimilarity(u, w)?,
                    });
                }
            }
        }
    }
    Ok(DistanceStability { samples })
}
