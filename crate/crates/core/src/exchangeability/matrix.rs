//! Sparse symmetric all-pairs score matrix.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::estimate::{Estimator, Measure};
use super::metric::Metric;
use super::null::{normalize_score, null_score, DEFAULT_NULL_REPEATS};
use crate::error::{Error, Result};
use crate::rng::{substream, with_workers};
use crate::stats::PositionVectors;

const NULL_STREAM: u64 = 0x6e75_6c6c;

/// What the stored scores measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Exchangeability(Measure),
    Correlation,
    /// Binary relation (every stored entry is 1).
    Relation,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixKind::Exchangeability(m) => write!(f, "{m}"),
            MatrixKind::Correlation => f.write_str("correlation"),
            MatrixKind::Relation => f.write_str("relation"),
        }
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "correlation" => Ok(MatrixKind::Correlation),
            "relation" => Ok(MatrixKind::Relation),
            other => Ok(MatrixKind::Exchangeability(other.parse()?)),
        }
    }
}

/// Provenance recorded alongside a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixMeta {
    pub kind: MatrixKind,
    pub rounds: Option<usize>,
    pub metric: Option<Metric>,
    pub seed: Option<u64>,
    pub threshold: f64,
}

impl MatrixMeta {
    pub fn relation() -> Self {
        MatrixMeta {
            kind: MatrixKind::Relation,
            rounds: None,
            metric: None,
            seed: None,
            threshold: 0.0,
        }
    }
}

/// Symmetric `M × M` matrix with scores in `[0, 1]`, unit diagonal and only
/// positive off-diagonal entries stored (both triangles, CSR layout).
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeabilityMatrix {
    m: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    meta: MatrixMeta,
}

impl ExchangeabilityMatrix {
    /// `upper[i]` lists `(j, score)` with `j > i` in ascending `j`.
    pub(crate) fn from_upper_rows(m: usize, upper: Vec<Vec<(u32, f64)>>, meta: MatrixMeta) -> Self {
        debug_assert_eq!(upper.len(), m);
        let mut lower_count = vec![0usize; m];
        for row in &upper {
            for &(j, _) in row {
                lower_count[j as usize] += 1;
            }
        }
        let mut row_ptr = Vec::with_capacity(m + 1);
        row_ptr.push(0);
        for i in 0..m {
            row_ptr.push(row_ptr[i] + lower_count[i] + upper[i].len());
        }
        let nnz = row_ptr[m];
        let mut cols = vec![0u32; nnz];
        let mut vals = vec![0.0; nnz];
        let mut cursor: Vec<usize> = row_ptr[..m].to_vec();
        for (i, row) in upper.iter().enumerate() {
            for &(j, v) in row {
                let j = j as usize;
                cols[cursor[j]] = i as u32;
                vals[cursor[j]] = v;
                cursor[j] += 1;
            }
        }
        for (i, row) in upper.into_iter().enumerate() {
            let start = row_ptr[i] + lower_count[i];
            for (k, (j, v)) in row.into_iter().enumerate() {
                cols[start + k] = j;
                vals[start + k] = v;
            }
        }
        ExchangeabilityMatrix {
            m,
            row_ptr,
            cols,
            vals,
            meta,
        }
    }

    /// Builds from `(i, j, score)` triplets; `i < j < m`, scores in `[0, 1]`.
    /// Zero scores are not stored.
    pub fn from_triplets(
        m: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
        meta: MatrixMeta,
    ) -> Result<Self> {
        let mut upper: Vec<Vec<(u32, f64)>> = vec![Vec::new(); m];
        for (i, j, v) in triplets {
            if i >= j || j >= m {
                return Err(Error::invalid(format!(
                    "entry ({i}, {j}) must satisfy i < j < {m}"
                )));
            }
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(format!("score {v} at ({i}, {j}) outside [0, 1]")));
            }
            if v > 0.0 {
                upper[i].push((j as u32, v));
            }
        }
        for (i, row) in upper.iter_mut().enumerate() {
            row.sort_by_key(|&(j, _)| j);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::invalid(format!("duplicate entry in row {i}")));
            }
        }
        Ok(Self::from_upper_rows(m, upper, meta))
    }

    /// Symmetric 0/1 relation from unordered pairs (either orientation).
    pub fn relation(m: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut upper: Vec<Vec<(u32, f64)>> = vec![Vec::new(); m];
        for (a, b) in pairs {
            let (i, j) = (a.min(b), a.max(b));
            if j >= m {
                return Err(Error::invalid(format!("pair ({a}, {b}) outside universe of size {m}")));
            }
            if i != j {
                upper[i].push((j as u32, 1.0));
            }
        }
        for row in &mut upper {
            row.sort_by_key(|&(j, _)| j);
            row.dedup_by_key(|e| e.0);
        }
        Ok(Self::from_upper_rows(m, upper, MatrixMeta::relation()))
    }

    pub fn identity(m: usize) -> Self {
        Self::from_upper_rows(m, vec![Vec::new(); m], MatrixMeta::relation())
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn meta(&self) -> &MatrixMeta {
        &self.meta
    }

    /// Off-diagonal neighbours of `i` in ascending index order.
    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 1.0;
        }
        let (cols, vals) = self.row(i);
        cols.binary_search(&(j as u32)).map_or(0.0, |k| vals[k])
    }

    /// Number of stored unordered pairs.
    pub fn stored_pairs(&self) -> usize {
        self.cols.len() / 2
    }

    /// Stored `(i, j, score)` with `i < j`, row-major.
    pub fn upper_triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.m).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter()
                .zip(vals)
                .filter(move |(&j, _)| j as usize > i)
                .map(move |(&j, &v)| (i, j as usize, v))
        })
    }

    /// Copy keeping only entries strictly above `threshold`.
    pub fn thresholded(&self, threshold: f64) -> Self {
        let upper = (0..self.m)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter()
                    .zip(vals)
                    .filter(|&(&j, &v)| j as usize > i && v > threshold)
                    .map(|(&j, &v)| (j, v))
                    .collect()
            })
            .collect();
        let mut meta = self.meta.clone();
        meta.threshold = meta.threshold.max(threshold);
        Self::from_upper_rows(self.m, upper, meta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixConfig {
    pub estimator: Estimator,
    pub null_repeats: usize,
    pub seed: u64,
    /// Normalized scores `<= threshold` are not stored.
    pub threshold: f64,
    pub workers: usize,
}

impl Default for MatrixConfig {
    fn default() -> Self {
        MatrixConfig {
            estimator: Estimator::default(),
            null_repeats: DEFAULT_NULL_REPEATS,
            seed: 0,
            threshold: 0.0,
            workers: 0,
        }
    }
}

/// Normalized exchangeability score for every unordered variable pair.
///
/// Pairs are independent and each is a pure function of its two position
/// vectors, so the result does not depend on `cfg.workers`.
pub fn exchangeability_matrix(
    pv: &PositionVectors,
    cfg: &MatrixConfig,
) -> Result<ExchangeabilityMatrix> {
    let m = pv.n_vars();
    let b = pv.rounds();
    let est = cfg.estimator;
    est.check(m)?;
    let upper = with_workers(cfg.workers, || -> Result<Vec<Vec<(u32, f64)>>> {
        let null = null_score(m, b, &est, cfg.null_repeats, substream(cfg.seed, NULL_STREAM))?;
        (0..m)
            .into_par_iter()
            .map(|i| {
                let si = pv.row(i);
                let mut row = Vec::new();
                for j in i + 1..m {
                    let d = est.distance(si, pv.row(j), m)?;
                    let score = normalize_score(1.0 - d, null)?;
                    if score > cfg.threshold {
                        row.push((j as u32, score));
                    }
                }
                Ok(row)
            })
            .collect()
    })??;
    Ok(ExchangeabilityMatrix::from_upper_rows(
        m,
        upper,
        MatrixMeta {
            kind: MatrixKind::Exchangeability(est.measure),
            rounds: Some(b),
            metric: Some(est.metric),
            seed: Some(cfg.seed),
            threshold: cfg.threshold,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Ranking;

    #[test]
    fn csr_layout() {
        let mx = ExchangeabilityMatrix::from_triplets(
            4,
            vec![(0, 2, 0.5), (1, 3, 0.25), (0, 1, 0.75), (2, 3, 0.0)],
            MatrixMeta::relation(),
        )
        .unwrap();
        assert_eq!(mx.get(2, 0), 0.5);
        assert_eq!(mx.get(0, 2), 0.5);
        assert_eq!(mx.get(3, 1), 0.25);
        assert_eq!(mx.get(2, 3), 0.0);
        assert_eq!(mx.get(3, 3), 1.0);
        assert_eq!(mx.stored_pairs(), 3);
        assert_eq!(
            mx.upper_triplets().collect::<Vec<_>>(),
            vec![(0, 1, 0.75), (0, 2, 0.5), (1, 3, 0.25)]
        );
        for i in 0..4 {
            let (cols, _) = mx.row(i);
            assert!(cols.windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(mx.thresholded(0.5).stored_pairs(), 1);
    }

    #[test]
    fn triplet_validation() {
        let meta = MatrixMeta::relation;
        assert!(ExchangeabilityMatrix::from_triplets(3, vec![(1, 1, 0.5)], meta()).is_err());
        assert!(ExchangeabilityMatrix::from_triplets(3, vec![(2, 1, 0.5)], meta()).is_err());
        assert!(ExchangeabilityMatrix::from_triplets(3, vec![(0, 1, 1.25)], meta()).is_err());
        assert!(ExchangeabilityMatrix::from_triplets(3, vec![(0, 1, 0.5), (0, 1, 0.4)], meta()).is_err());
    }

    #[test]
    fn symmetric_pair_normalizes_to_one() {
        // variables 0 and 1 swap positions between the two rounds
        let rankings = vec![
            Ranking::from_positions(vec![1, 2, 3]).unwrap(),
            Ranking::from_positions(vec![2, 1, 3]).unwrap(),
        ];
        let pv = PositionVectors::from_rankings(&rankings).unwrap();
        let mx = exchangeability_matrix(&pv, &MatrixConfig::default()).unwrap();
        assert_eq!(mx.get(0, 1), 1.0);
        assert_eq!(mx.meta().kind, MatrixKind::Exchangeability(Measure::OedMean));
        assert!(mx.upper_triplets().all(|(_, _, v)| (0.0..=1.0).contains(&v)));
    }
}
