//! Pairwise exchangeability of position vectors.

mod estimate;
mod exact;
mod kde;
mod matrix;
mod metric;
mod null;
mod plot;

pub use estimate::{estimate_pair, hausdorff, set_distance, Estimator, Measure, PairSamples, Point};
pub use exact::{exact_measures, DiscreteJointDistribution, ExactMeasure, MAX_EXACT_ARITY};
pub use kde::{estimate_pvar, Bandwidth, KdeSettings};
pub use matrix::{
    exchangeability_matrix, ExchangeabilityMatrix, MatrixConfig, MatrixKind, MatrixMeta,
};
pub use metric::Metric;
pub use null::{normalize_score, null_score, DEFAULT_NULL_REPEATS};
pub use plot::{exchangeability_plot_data, PlotPoint, PlotSet};
