//! Nearest-centroid scoring and cross-validated AUC of selected genes.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;

use super::experiment::{build_extensions, rank_by_method, ExperimentConfig, RankingMethod};
use crate::error::{Error, Result};
use crate::model::Direction;
use crate::rng::{rng_from, substream};
use crate::stats::{LabeledDataset, DENOMINATOR_FLOOR};

/// `‖x − c_neg‖² − ‖x − c_pos‖²`; positive values favour the positive class.
pub fn centroid_score(x: &[f64], c_pos: &[f64], c_neg: &[f64]) -> f64 {
    let sq = |c: &[f64]| x.iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
    sq(c_neg) - sq(c_pos)
}

/// Centroid scores of `test_cols` using `genes` standardized by the mean
/// and standard deviation over `train_cols`.
pub fn centroid_scores(
    ds: &LabeledDataset,
    train_cols: &[usize],
    test_cols: &[usize],
    genes: &[usize],
    positive_class: &str,
) -> Result<Vec<f64>> {
    if genes.is_empty() {
        return Err(Error::invalid("no genes selected"));
    }
    let negative_class = ds.other_class(positive_class)?;
    let labels = ds.labels();
    let pos: Vec<usize> = train_cols.iter().copied().filter(|&c| labels[c] == positive_class).collect();
    let neg: Vec<usize> = train_cols.iter().copied().filter(|&c| labels[c] == negative_class).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::invalid("training columns must contain both classes"));
    }
    let n = train_cols.len() as f64;
    let mut c_pos = Vec::with_capacity(genes.len());
    let mut c_neg = Vec::with_capacity(genes.len());
    let mut standardizers = Vec::with_capacity(genes.len());
    for &g in genes {
        let row = ds.row(g);
        let mean = train_cols.iter().map(|&c| row[c]).sum::<f64>() / n;
        let var = train_cols.iter().map(|&c| (row[c] - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        let sd = var.sqrt().max(DENOMINATOR_FLOOR);
        let z = |c: usize| (row[c] - mean) / sd;
        c_pos.push(pos.iter().map(|&c| z(c)).sum::<f64>() / pos.len() as f64);
        c_neg.push(neg.iter().map(|&c| z(c)).sum::<f64>() / neg.len() as f64);
        standardizers.push((mean, sd));
    }
    Ok(test_cols
        .iter()
        .map(|&c| {
            let x: Vec<f64> = genes
                .iter()
                .zip(&standardizers)
                .map(|(&g, (mean, sd))| (ds.row(g)[c] - mean) / sd)
                .collect();
            centroid_score(&x, &c_pos, &c_neg)
        })
        .collect())
}

/// Mann–Whitney AUC: `P(s₊ > s₋) + ½ P(s₊ = s₋)`.
pub fn auc(scores: &[f64], positive: &[bool]) -> Result<f64> {
    if scores.len() != positive.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            found: positive.len(),
        });
    }
    let pos: Vec<f64> = scores.iter().zip(positive).filter(|p| *p.1).map(|p| *p.0).collect();
    let neg: Vec<f64> = scores.iter().zip(positive).filter(|p| !*p.1).map(|p| *p.0).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::invalid("AUC needs both classes"));
    }
    let mut wins = 0.0;
    for &p in &pos {
        for &q in &neg {
            if p > q {
                wins += 1.0;
            } else if p == q {
                wins += 0.5;
            }
        }
    }
    Ok(wins / (pos.len() * neg.len()) as f64)
}

/// Test columns of each fold. Within each class, samples are put in sample-id
/// order, shuffled with a seed-derived stream and dealt round-robin.
pub fn stratified_folds(ds: &LabeledDataset, folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 {
        return Err(Error::config(format!("need at least 2 folds, got {folds}")));
    }
    let mut out = vec![Vec::new(); folds];
    for (k, class) in ds.classes().iter().enumerate() {
        let mut cols = ds.class_columns(class);
        if cols.len() < folds {
            return Err(Error::config(format!(
                "class `{class}` has {} samples, fewer than {folds} folds",
                cols.len()
            )));
        }
        cols.sort_by(|&a, &b| ds.sample_ids()[a].cmp(&ds.sample_ids()[b]).then(a.cmp(&b)));
        cols.shuffle(&mut rng_from(substream(seed, k as u64)));
        for (i, c) in cols.into_iter().enumerate() {
            out[i % folds].push(c);
        }
    }
    for fold in &mut out {
        fold.sort_unstable();
    }
    Ok(out)
}

/// Mean test-fold AUC of a centroid classifier on the top-`k` and bottom-`k`
/// genes of a ranking computed from the training folds only.
pub fn cross_validated_auc(
    ds: &LabeledDataset,
    method: RankingMethod,
    k: usize,
    folds: usize,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<f64> {
    cfg.validate()?;
    if k == 0 || k > ds.n_vars() {
        return Err(Error::config(format!("k = {k} outside 1..={}", ds.n_vars())));
    }
    let positive = cfg.statistic_for(ds).positive_class;
    ds.other_class(&positive)?;
    let assignment = stratified_folds(ds, folds, substream(seed, 0))?;
    let mut total = 0.0;
    for (f, test_cols) in assignment.iter().enumerate() {
        let train_cols: Vec<usize> = (0..ds.n_samples()).filter(|c| !test_cols.contains(c)).collect();
        let train = ds.select_columns(&train_cols)?;
        let fold_seed = substream(seed, 1 + f as u64);
        let ext = match method {
            RankingMethod::Extended | RankingMethod::Correlation => {
                Some(build_extensions(&train, cfg, substream(fold_seed, 0))?)
            }
            _ => None,
        };
        let ranking = rank_by_method(&train, method, ext.as_ref(), cfg, substream(fold_seed, 1))?;
        let genes: BTreeSet<usize> = ranking
            .top_k(k, Direction::Top)?
            .into_iter()
            .chain(ranking.top_k(k, Direction::Bottom)?)
            .collect();
        let genes: Vec<usize> = genes.into_iter().collect();
        let scores = centroid_scores(ds, &train_cols, test_cols, &genes, &positive)?;
        let truth: Vec<bool> = test_cols.iter().map(|&c| ds.labels()[c] == positive).collect();
        total += auc(&scores, &truth)?;
    }
    Ok(total / folds as f64)
}
