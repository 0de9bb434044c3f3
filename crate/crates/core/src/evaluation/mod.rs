//! Experiment harness for ranking stability and classification.

mod classify;
mod concordance;
mod experiment;
mod synth;

pub use classify::{auc, centroid_score, centroid_scores, cross_validated_auc, stratified_folds};
pub use concordance::{
    aggregate_rankings, concordance_curve, mean_pairwise_overlap, Aggregation, ConcordanceCurve,
    PairwiseOverlap,
};
pub use experiment::{
    build_extensions, concordance_experiment, distance_stability, exchangeability_for,
    rank_by_method, rank_five, run_five_rankings, ConcordanceExperiment, DatasetPair,
    DistanceSample, DistanceStability, ExperimentConfig, Extensions, FiveRankings, RankingMethod,
    Variant,
};
pub use synth::{gaussian_dataset, synth_example, synth_scaled, GROUP_1, GROUP_2};
