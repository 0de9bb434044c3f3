//! Classic list-comparison methods expressed through the `A V W h` framework.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exchangeability::ExchangeabilityMatrix;
use crate::framework::{
    cosine_similarity, dot, list_vector, BlockSimilarity, Identity, PositionMatrix, Similarity,
    Summarizer, WeightMatrix,
};
use crate::model::{GeneList, Ranking};
use crate::rng::{substream, with_workers};
use crate::stats::{permute_labels, LabeledDataset, Scorer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    OverlapCosine,
    Pogr,
    Hypergeometric,
    Gsea,
    Jurman,
    PearsonReciprocal,
    Yang,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::OverlapCosine,
        Method::Pogr,
        Method::Hypergeometric,
        Method::Gsea,
        Method::Jurman,
        Method::PearsonReciprocal,
        Method::Yang,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::OverlapCosine => "overlap-cosine",
            Method::Pogr => "pogr",
            Method::Hypergeometric => "hypergeometric",
            Method::Gsea => "gsea",
            Method::Jurman => "jurman",
            Method::PearsonReciprocal => "pearson",
            Method::Yang => "yang",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::config(format!("unknown comparison method '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonResult {
    pub method: Method,
    /// Score, distance or p-value depending on the method.
    pub value: f64,
    pub p_value: Option<f64>,
    pub overlap: Option<usize>,
    pub running_sum: Option<Vec<f64>>,
}

impl ComparisonResult {
    pub fn scalar(method: Method, value: f64) -> Self {
        ComparisonResult {
            method,
            value,
            p_value: None,
            overlap: None,
            running_sum: None,
        }
    }
}

fn summarize(a: PositionMatrix, v: &dyn Similarity, w: &WeightMatrix, h: Summarizer) -> Result<Vec<f64>> {
    Ok(list_vector(&a, v, w, h)?.into_values())
}

fn indicator_vector(list: &GeneList, m: usize) -> Result<Vec<f64>> {
    summarize(
        PositionMatrix::indicator(list, m)?,
        &Identity(m),
        &WeightMatrix::identity(m),
        Summarizer::SupNorm,
    )
}

fn require_nonempty(list: &GeneList, name: &str) -> Result<()> {
    if list.is_empty() {
        return Err(Error::invalid(format!("{name} is empty")));
    }
    Ok(())
}

/// `|ℓ1 ∩ ℓ2| / √(|ℓ1||ℓ2|)` as the cosine of indicator list vectors.
pub fn overlap_cosine(l1: &GeneList, l2: &GeneList, m: usize) -> Result<f64> {
    require_nonempty(l1, "first list")?;
    require_nonempty(l2, "second list")?;
    cosine_similarity(&indicator_vector(l1, m)?, &indicator_vector(l2, m)?)
}

/// Overlap count `l_ℓ · l_ℓ'` of indicator list vectors.
pub fn list_overlap(l1: &GeneList, l2: &GeneList, m: usize) -> Result<usize> {
    Ok(dot(&indicator_vector(l1, m)?, &indicator_vector(l2, m)?).round() as usize)
}

/// `POGR₁₂ = (k + O_r12)/|ℓ1|`: `ℓ2` is extended through the symmetric
/// relation `correlated` with the sup-norm summarizer.
pub fn pogr(l1: &GeneList, l2: &GeneList, correlated: &ExchangeabilityMatrix) -> Result<f64> {
    require_nonempty(l1, "first list")?;
    let m = correlated.dim();
    let u = indicator_vector(l1, m)?;
    let v = summarize(
        PositionMatrix::indicator(l2, m)?,
        correlated,
        &WeightMatrix::identity(m),
        Summarizer::SupNorm,
    )?;
    let l1_norm: f64 = u.iter().map(|x| x.abs()).sum();
    Ok(dot(&u, &v) / l1_norm)
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for i in 1..=n {
        acc += (i as f64).ln();
        out.push(acc);
    }
    out
}

fn check_hypergeometric(m: usize, n1: usize, n2: usize) -> Result<()> {
    if n1 > m || n2 > m {
        return Err(Error::invalid(format!(
            "list sizes {n1}, {n2} exceed universe size {m}"
        )));
    }
    Ok(())
}

/// Point probabilities of the overlap of random `n1`- and `n2`-subsets of an
/// `m`-set, indexed by overlap size.
fn hypergeometric_pmf(m: usize, n1: usize, n2: usize) -> Vec<f64> {
    let lf = ln_factorials(m);
    let ln_choose = |n: usize, k: usize| lf[n] - lf[k] - lf[n - k];
    let lo = (n1 + n2).saturating_sub(m);
    let hi = n1.min(n2);
    let denom = ln_choose(m, n2);
    (0..=hi)
        .map(|x| {
            if x < lo {
                0.0
            } else {
                (ln_choose(n1, x) + ln_choose(m - n1, n2 - x) - denom).exp()
            }
        })
        .collect()
}

/// Upper-tail `P(overlap ≥ k)` under the hypergeometric law.
pub fn hypergeometric_test(m: usize, n1: usize, n2: usize, k: usize) -> Result<f64> {
    check_hypergeometric(m, n1, n2)?;
    if k > n1.min(n2) {
        return Err(Error::invalid(format!(
            "overlap {k} exceeds the smaller list size {}",
            n1.min(n2)
        )));
    }
    if k <= (n1 + n2).saturating_sub(m) {
        return Ok(1.0);
    }
    let pmf = hypergeometric_pmf(m, n1, n2);
    Ok(pmf[k..].iter().sum::<f64>().min(1.0))
}

/// Smallest `x` with `P(overlap ≤ x) ≥ p`.
pub fn hypergeometric_quantile(m: usize, n1: usize, n2: usize, p: f64) -> Result<usize> {
    check_hypergeometric(m, n1, n2)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::config(format!("probability {p} outside [0, 1]")));
    }
    let pmf = hypergeometric_pmf(m, n1, n2);
    let mut cdf = 0.0;
    for (x, q) in pmf.iter().enumerate() {
        cdf += q;
        if cdf >= p * (1.0 - 1e-12) {
            return Ok(x);
        }
    }
    Ok(pmf.len() - 1)
}

/// Overlap of two unordered lists tested against the hypergeometric null.
pub fn hypergeometric_lists(l1: &GeneList, l2: &GeneList, m: usize) -> Result<ComparisonResult> {
    let k = list_overlap(l1, l2, m)?;
    let p = hypergeometric_test(m, l1.len(), l2.len(), k)?;
    Ok(ComparisonResult {
        method: Method::Hypergeometric,
        value: p,
        p_value: Some(p),
        overlap: Some(k),
        running_sum: None,
    })
}

/// Label-permutation setup for GSEA p-values.
pub struct GseaPermutations<'a> {
    pub dataset: &'a LabeledDataset,
    pub scorer: &'a dyn Scorer,
    pub count: usize,
    pub seed: u64,
    pub workers: usize,
}

/// Running sum of `(l_ℓ)_i / (l_ℓ')_i` in ranking order.
fn gsea_running_sum(r: &Ranking, set: &BTreeSet<usize>, q: f64) -> Result<Vec<f64>> {
    let m = r.len();
    let k = set.len();
    if k == 0 || k >= m {
        return Err(Error::invalid(format!(
            "gene set size {k} must lie in 1..{m}"
        )));
    }
    if let Some(&i) = set.iter().find(|&&i| i >= m) {
        return Err(Error::UniverseMismatch(format!(
            "gene index {i} outside universe of size {m}"
        )));
    }
    let scores = r
        .scores()
        .ok_or_else(|| Error::invalid("enrichment needs ranking scores"))?;
    let weight: Vec<f64> = scores.iter().map(|s| s.abs().powf(q)).collect();
    let member: Vec<bool> = (0..m).map(|i| set.contains(&i)).collect();

    let l = summarize(
        PositionMatrix::custom(weight.clone())?,
        &Identity(m),
        &WeightMatrix::identity(m),
        Summarizer::Sum,
    )?;
    let a_set = (0..m).map(|i| if member[i] { weight[i] } else { -1.0 }).collect();
    let w_set = (0..m).map(|i| if member[i] { 1.0 } else { weight[i] }).collect();
    let blocks = BlockSimilarity::new(member.iter().map(|&b| usize::from(b)).collect());
    let l_set = summarize(
        PositionMatrix::custom(a_set)?,
        &blocks,
        &WeightMatrix::new(w_set)?,
        Summarizer::Sum,
    )?;

    let miss_step = -1.0 / (m - k) as f64;
    let mut acc = 0.0;
    r.order()
        .into_iter()
        .map(|i| {
            let step = if l_set[i] != 0.0 {
                l[i] / l_set[i]
            } else if member[i] {
                return Err(Error::invalid("gene set has zero total weight"));
            } else {
                // 0/0 for a zero-score miss; its limit is the unweighted step
                miss_step
            };
            acc += step;
            Ok(acc)
        })
        .collect()
}

/// Magnitudes closer than this are ties.
const GSEA_TIE_TOLERANCE: f64 = 1e-12;

/// Signed running-sum value of largest magnitude; earliest wins ties, which
/// are judged up to rounding.
fn max_deviation(running: &[f64]) -> f64 {
    running.iter().fold(0.0f64, |best, &x| {
        if x.abs() > best.abs() + GSEA_TIE_TOLERANCE {
            x
        } else {
            best
        }
    })
}

/// GSEA enrichment score of `set` in ranking `r`, with an optional
/// label-permutation p-value.
pub fn gsea_enrichment(
    r: &Ranking,
    set: &GeneList,
    q: f64,
    permutations: Option<&GseaPermutations<'_>>,
) -> Result<ComparisonResult> {
    if !(q.is_finite() && q >= 0.0) {
        return Err(Error::config(format!("exponent q = {q} must be non-negative")));
    }
    let members = set.members();
    let running = gsea_running_sum(r, &members, q)?;
    let es = max_deviation(&running);
    let p_value = match permutations {
        None => None,
        Some(p) => {
            if p.count == 0 {
                return Err(Error::config("permutation count must be positive"));
            }
            if p.dataset.n_vars() != r.len() {
                return Err(Error::DimensionMismatch {
                    expected: r.len(),
                    found: p.dataset.n_vars(),
                });
            }
            let null: Vec<f64> = with_workers(p.workers, || {
                (0..p.count)
                    .into_par_iter()
                    .map(|b| {
                        let labels = permute_labels(p.dataset.labels(), substream(p.seed, b as u64));
                        let ranking = p.scorer.rank(&p.dataset.with_labels(labels)?)?;
                        Ok(max_deviation(&gsea_running_sum(&ranking, &members, q)?))
                    })
                    .collect::<Result<Vec<f64>>>()
            })??;
            let extreme = null.iter().filter(|e| e.abs() >= es.abs()).count();
            Some(extreme as f64 / p.count as f64)
        }
    };
    Ok(ComparisonResult {
        method: Method::Gsea,
        value: es,
        p_value,
        overlap: None,
        running_sum: Some(running),
    })
}

fn ordered_members<'a>(list: &'a GeneList, name: &str) -> Result<&'a [usize]> {
    match list {
        GeneList::Ordered(v) => Ok(v),
        GeneList::Unordered(_) => Err(Error::invalid(format!("{name} must be an ordered list"))),
    }
}

fn equal_size_lists<'a>(l1: &'a GeneList, l2: &'a GeneList) -> Result<(&'a [usize], &'a [usize])> {
    let a = ordered_members(l1, "first list")?;
    let b = ordered_members(l2, "second list")?;
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok((a, b))
}

/// Position values `π` for members and `absent` otherwise.
fn top_k_values(list: &[usize], m: usize, member: impl Fn(usize) -> f64, absent: f64) -> Result<Vec<f64>> {
    let mut out = vec![absent; m];
    for (k, &i) in list.iter().enumerate() {
        *out.get_mut(i).ok_or_else(|| {
            Error::UniverseMismatch(format!("gene index {i} outside universe of size {m}"))
        })? = member(k + 1);
    }
    Ok(out)
}

/// Within each module, the position values held by its members are sorted
/// and handed back to the members in universe-index order.
fn canonicalize_modules(values: &mut [f64], modules: &[Vec<usize>]) {
    for module in modules {
        let mut genes = module.clone();
        genes.sort_unstable();
        let mut held: Vec<f64> = genes.iter().map(|&g| values[g]).collect();
        held.sort_by(f64::total_cmp);
        for (g, v) in genes.into_iter().zip(held) {
            values[g] = v;
        }
    }
}

fn check_modules(modules: &[Vec<usize>], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    for &g in modules.iter().flatten() {
        if g >= m {
            return Err(Error::UniverseMismatch(format!(
                "module gene {g} outside universe of size {m}"
            )));
        }
        if std::mem::replace(&mut seen[g], true) {
            return Err(Error::invalid(format!("gene {g} appears in more than one module")));
        }
    }
    Ok(())
}

/// `Σ |a_i − b_i| / (a_i + b_i)` over position values `π` or `K+1`, with
/// orders inside each module made identical beforehand.
pub fn jurman_distance(l1: &GeneList, l2: &GeneList, m: usize, modules: &[Vec<usize>]) -> Result<f64> {
    let (a, b) = equal_size_lists(l1, l2)?;
    check_modules(modules, m)?;
    let absent = (a.len() + 1) as f64;
    let vector = |list: &[usize]| -> Result<Vec<f64>> {
        let mut values = top_k_values(list, m, |p| p as f64, absent)?;
        canonicalize_modules(&mut values, modules);
        summarize(
            PositionMatrix::custom(values)?,
            &Identity(m),
            &WeightMatrix::identity(m),
            Summarizer::MinAbsNonzero,
        )
    };
    let (u, v) = (vector(a)?, vector(b)?);
    Ok(u.iter().zip(&v).map(|(x, y)| (x - y).abs() / (x + y)).sum())
}

/// `‖l − l'‖₁` over reciprocal position values `1/π` or `1/(K+1)`.
pub fn pearson_reciprocal_distance(l1: &GeneList, l2: &GeneList, m: usize) -> Result<f64> {
    let (a, b) = equal_size_lists(l1, l2)?;
    let absent = 1.0 / (a.len() + 1) as f64;
    let vector = |list: &[usize]| -> Result<Vec<f64>> {
        summarize(
            PositionMatrix::custom(top_k_values(list, m, |p| 1.0 / p as f64, absent)?)?,
            &Identity(m),
            &WeightMatrix::identity(m),
            Summarizer::SupNorm,
        )
    };
    let (u, v) = (vector(a)?, vector(b)?);
    Ok(u.iter().zip(&v).map(|(x, y)| (x - y).abs()).sum())
}

fn position_list_vector(r: &Ranking) -> Result<Vec<f64>> {
    let m = r.len();
    summarize(
        PositionMatrix::custom(r.positions().iter().map(|&p| p as f64).collect())?,
        &Identity(m),
        &WeightMatrix::identity(m),
        Summarizer::SupNorm,
    )
}

/// Closed form of `Σ_n e^{−αn} (O_n(ℓ,ℓ') + O_n(f(ℓ),f(ℓ')))` on position
/// vectors.
fn yang_preliminary(u: &[f64], v: &[f64], alpha: f64) -> f64 {
    let m1 = (u.len() + 1) as f64;
    let tail = (-alpha * m1).exp();
    let total: f64 = u
        .iter()
        .zip(v)
        .map(|(&a, &b)| {
            ((-alpha * a.max(b)).exp() - tail) + ((-alpha * (m1 - a.min(b))).exp() - tail)
        })
        .sum();
    total / -(-alpha).exp_m1()
}

/// Overlap similarity of two full rankings; with `beta`, the larger of the
/// weighted scores against `ℓ'` and against its reverse.
pub fn yang_similarity(r1: &Ranking, r2: &Ranking, alpha: f64, beta: Option<f64>) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::config(format!("alpha must be positive, got {alpha}")));
    }
    if r1.len() != r2.len() {
        return Err(Error::UniverseMismatch(format!(
            "rankings over {} and {} genes",
            r1.len(),
            r2.len()
        )));
    }
    let u = position_list_vector(r1)?;
    let v = position_list_vector(r2)?;
    let forward = yang_preliminary(&u, &v, alpha);
    match beta {
        None => Ok(forward),
        Some(beta) if (0.0..1.0).contains(&beta) => {
            let reverse = yang_preliminary(&u, &position_list_vector(&r2.reversed())?, alpha);
            Ok((beta * forward).max((1.0 - beta) * reverse))
        }
        Some(beta) => Err(Error::config(format!("beta must lie in [0, 1), got {beta}"))),
    }
}
