//! List representation `G = A V W` and list-vector comparison.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exchangeability::{ExchangeabilityMatrix, MatrixKind, MatrixMeta};
use crate::model::{GeneList, Ranking};
use crate::stats::LabeledDataset;

pub const DEFAULT_B_SQUARED: f64 = 350.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PositionKind {
    RankBased { b_squared: f64 },
    Indicator,
    Score,
    Custom,
}

/// Diagonal position matrix `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionMatrix {
    diag: Vec<f64>,
    kind: PositionKind,
}

impl PositionMatrix {
    /// Rank-based position values: `b²/((π−1)²+b²)` for non-negative scores,
    /// `−b²/((M−π)²+b²)` for negative ones.
    pub fn rank_based(r: &Ranking, b_squared: f64) -> Result<Self> {
        if !(b_squared > 0.0 && b_squared.is_finite()) {
            return Err(Error::config(format!("b² must be positive, got {b_squared}")));
        }
        let scores = r
            .scores()
            .ok_or_else(|| Error::invalid("rank-based position values need ranking scores"))?;
        let m = r.len() as f64;
        let diag = r
            .positions()
            .iter()
            .zip(scores)
            .map(|(&p, &s)| {
                let p = p as f64;
                if s >= 0.0 {
                    b_squared / ((p - 1.0).powi(2) + b_squared)
                } else {
                    -b_squared / ((m - p).powi(2) + b_squared)
                }
            })
            .collect();
        Ok(PositionMatrix {
            diag,
            kind: PositionKind::RankBased { b_squared },
        })
    }

    /// Membership indicator of `list` in a universe of size `m`.
    pub fn indicator(list: &GeneList, m: usize) -> Result<Self> {
        let diag = list
            .position_vector(m)?
            .into_iter()
            .map(|p| if p > 0 { 1.0 } else { 0.0 })
            .collect();
        Ok(PositionMatrix {
            diag,
            kind: PositionKind::Indicator,
        })
    }

    /// The ranking scores themselves.
    pub fn score(r: &Ranking) -> Result<Self> {
        let scores = r
            .scores()
            .ok_or_else(|| Error::invalid("score position values need ranking scores"))?;
        Ok(PositionMatrix {
            diag: scores.to_vec(),
            kind: PositionKind::Score,
        })
    }

    pub fn custom(diag: Vec<f64>) -> Result<Self> {
        if let Some(v) = diag.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite position value {v}")));
        }
        Ok(PositionMatrix {
            diag,
            kind: PositionKind::Custom,
        })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn kind(&self) -> PositionKind {
        self.kind
    }
}

/// Diagonal global weight matrix `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    diag: Vec<f64>,
}

impl WeightMatrix {
    pub fn new(diag: Vec<f64>) -> Result<Self> {
        if let Some(v) = diag.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::invalid(format!("weight {v} must be finite and non-negative")));
        }
        Ok(WeightMatrix { diag })
    }

    pub fn identity(m: usize) -> Self {
        WeightMatrix { diag: vec![1.0; m] }
    }

    /// Inverse document frequency `ln((K+1)/(K_i+1))` over `K` reference lists.
    pub fn idf(reference_lists: &[GeneList], m: usize) -> Result<Self> {
        let mut counts = vec![0usize; m];
        for list in reference_lists {
            for (i, p) in list.position_vector(m)?.into_iter().enumerate() {
                if p > 0 {
                    counts[i] += 1;
                }
            }
        }
        let k = reference_lists.len() as f64;
        let diag = counts
            .into_iter()
            .map(|c| ((k + 1.0) / (c as f64 + 1.0)).ln())
            .collect();
        Ok(WeightMatrix { diag })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }
}

/// Square similarity matrix `V` accessed column by column.
pub trait Similarity: Sync {
    fn dim(&self) -> usize;

    /// Calls `f(k, V_kj)` for the structurally nonzero entries of column `j`
    /// in ascending row order.
    fn for_each_in_column(&self, j: usize, f: &mut dyn FnMut(usize, f64));

    fn describe(&self) -> String;
}

impl Similarity for ExchangeabilityMatrix {
    fn dim(&self) -> usize {
        ExchangeabilityMatrix::dim(self)
    }

    fn for_each_in_column(&self, j: usize, f: &mut dyn FnMut(usize, f64)) {
        let (cols, vals) = self.row(j);
        let split = cols.partition_point(|&k| (k as usize) < j);
        for (&k, &v) in cols[..split].iter().zip(&vals[..split]) {
            f(k as usize, v);
        }
        f(j, 1.0);
        for (&k, &v) in cols[split..].iter().zip(&vals[split..]) {
            f(k as usize, v);
        }
    }

    fn describe(&self) -> String {
        self.meta().kind.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Identity(pub usize);

impl Similarity for Identity {
    fn dim(&self) -> usize {
        self.0
    }

    fn for_each_in_column(&self, j: usize, f: &mut dyn FnMut(usize, f64)) {
        f(j, 1.0);
    }

    fn describe(&self) -> String {
        "identity".into()
    }
}

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(DenseMatrix { n, data })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

impl Similarity for DenseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn for_each_in_column(&self, j: usize, f: &mut dyn FnMut(usize, f64)) {
        for k in 0..self.n {
            f(k, self.data[k * self.n + j]);
        }
    }

    fn describe(&self) -> String {
        "dense".into()
    }
}

/// `V_ij = 1` iff `i` and `j` fall in the same block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSimilarity {
    block_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl BlockSimilarity {
    pub fn new(block_of: Vec<usize>) -> Self {
        let n_blocks = block_of.iter().map(|&b| b + 1).max().unwrap_or(0);
        let mut members = vec![Vec::new(); n_blocks];
        for (i, &b) in block_of.iter().enumerate() {
            members[b].push(i);
        }
        BlockSimilarity { block_of, members }
    }
}

impl Similarity for BlockSimilarity {
    fn dim(&self) -> usize {
        self.block_of.len()
    }

    fn for_each_in_column(&self, j: usize, f: &mut dyn FnMut(usize, f64)) {
        for &k in &self.members[self.block_of[j]] {
            f(k, 1.0);
        }
    }

    fn describe(&self) -> String {
        "block".into()
    }
}

/// Column summarizer `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Summarizer {
    /// Signed entry of largest magnitude; the smallest row wins ties.
    #[default]
    MaxMagnitude,
    SupNorm,
    Sum,
    /// Smallest magnitude among nonzero entries, 0 for an all-zero column.
    MinAbsNonzero,
}

impl Summarizer {
    pub fn name(self) -> &'static str {
        match self {
            Summarizer::MaxMagnitude => "max-magnitude",
            Summarizer::SupNorm => "sup-norm",
            Summarizer::Sum => "sum",
            Summarizer::MinAbsNonzero => "min-abs-nonzero",
        }
    }
}

impl fmt::Display for Summarizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Summarizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Summarizer::MaxMagnitude,
            Summarizer::SupNorm,
            Summarizer::Sum,
            Summarizer::MinAbsNonzero,
        ]
        .into_iter()
        .find(|h| h.name() == s)
        .ok_or_else(|| Error::config(format!("unknown summarizer '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ListVector {
    values: Vec<f64>,
    summarizer: Summarizer,
    position: PositionKind,
    similarity: String,
}

impl ListVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn summarizer(&self) -> Summarizer {
        self.summarizer
    }

    pub fn position_kind(&self) -> PositionKind {
        self.position
    }

    pub fn similarity(&self) -> &str {
        &self.similarity
    }
}

fn summarize_column(a: &[f64], v: &dyn Similarity, w: f64, j: usize, h: Summarizer) -> f64 {
    let mut acc = match h {
        Summarizer::MinAbsNonzero => f64::INFINITY,
        _ => 0.0,
    };
    v.for_each_in_column(j, &mut |k, vkj| {
        let g = a[k] * vkj * w;
        match h {
            Summarizer::MaxMagnitude => {
                if g.abs() > acc.abs() {
                    acc = g;
                }
            }
            Summarizer::SupNorm => acc = acc.max(g.abs()),
            Summarizer::Sum => acc += g,
            Summarizer::MinAbsNonzero => {
                if g != 0.0 {
                    acc = acc.min(g.abs());
                }
            }
        }
    });
    if acc.is_infinite() {
        0.0
    } else {
        acc
    }
}

/// `l_j = h(column j of A V W)`, streaming over the nonzeros of `V`.
pub fn list_vector(
    a: &PositionMatrix,
    v: &dyn Similarity,
    w: &WeightMatrix,
    h: Summarizer,
) -> Result<ListVector> {
    let m = a.len();
    for found in [v.dim(), w.len()] {
        if found != m {
            return Err(Error::DimensionMismatch { expected: m, found });
        }
    }
    let values = (0..m)
        .into_par_iter()
        .map(|j| summarize_column(a.diag(), v, w.diag()[j], j, h))
        .collect();
    Ok(ListVector {
        values,
        summarizer: h,
        position: a.kind(),
        similarity: v.describe(),
    })
}

fn check_pair(u: &[f64], v: &[f64]) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(())
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64> {
    check_pair(u, v)?;
    let (uu, vv) = (dot(u, u), dot(v, v));
    if uu == 0.0 || vv == 0.0 {
        return Err(Error::DegenerateVector);
    }
    // sqrt(x·x) == x exactly, so identical vectors give similarity 1
    Ok((dot(u, v) / (uu * vv).sqrt()).clamp(-1.0, 1.0))
}

pub fn cosine_dissimilarity(u: &[f64], v: &[f64]) -> Result<f64> {
    Ok(1.0 - cosine_similarity(u, v)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contribution {
    pub gene: usize,
    pub value: f64,
    pub positions: Option<(usize, usize)>,
}

/// Per-gene products `u_i v_i`, largest first (ties by index), with each
/// gene's positions in the two source rankings when given.
pub fn contributions(
    u: &[f64],
    v: &[f64],
    sources: Option<(&Ranking, &Ranking)>,
) -> Result<Vec<Contribution>> {
    check_pair(u, v)?;
    if let Some((r1, r2)) = sources {
        for r in [r1, r2] {
            if r.len() != u.len() {
                return Err(Error::DimensionMismatch {
                    expected: u.len(),
                    found: r.len(),
                });
            }
        }
    }
    let mut out: Vec<Contribution> = u
        .iter()
        .zip(v)
        .enumerate()
        .map(|(gene, (a, b))| Contribution {
            gene,
            value: a * b,
            positions: sources.map(|(r1, r2)| (r1.position(gene), r2.position(gene))),
        })
        .collect();
    out.sort_by(|x, y| y.value.total_cmp(&x.value).then(x.gene.cmp(&y.gene)));
    Ok(out)
}

/// Ranking by descending signed list-vector value.
pub fn extended_ranking(l: &ListVector) -> Result<Ranking> {
    Ranking::from_scores(l.values())
}

/// Rank-based list vector of `r` extended through `v` (`W = I`,
/// max-magnitude summarizer), together with its ranking.
pub fn extend_ranking(r: &Ranking, v: &dyn Similarity, b_squared: f64) -> Result<(ListVector, Ranking)> {
    let a = PositionMatrix::rank_based(r, b_squared)?;
    let l = list_vector(&a, v, &WeightMatrix::identity(r.len()), Summarizer::MaxMagnitude)?;
    let ranking = extended_ranking(&l)?;
    Ok((l, ranking))
}

/// Positive part of the row correlation matrix; entries `<= threshold` are
/// not stored and zero-variance rows correlate 0 with everything.
pub fn correlation_v_matrix(ds: &LabeledDataset, threshold: f64) -> Result<ExchangeabilityMatrix> {
    let m = ds.n_vars();
    let n = ds.n_samples();
    let unit: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let row = ds.row(i);
            let mean = row.iter().sum::<f64>() / n as f64;
            let centered: Vec<f64> = row.iter().map(|x| x - mean).collect();
            let norm = dot(&centered, &centered).sqrt();
            if norm > 0.0 {
                centered.into_iter().map(|x| x / norm).collect()
            } else {
                vec![0.0; n]
            }
        })
        .collect();
    let upper = (0..m)
        .into_par_iter()
        .map(|i| {
            (i + 1..m)
                .filter_map(|j| {
                    let c = dot(&unit[i], &unit[j]).clamp(0.0, 1.0);
                    (c > threshold).then_some((j as u32, c))
                })
                .collect()
        })
        .collect();
    Ok(ExchangeabilityMatrix::from_upper_rows(
        m,
        upper,
        MatrixMeta {
            kind: MatrixKind::Correlation,
            rounds: None,
            metric: None,
            seed: None,
            threshold,
        },
    ))
}
