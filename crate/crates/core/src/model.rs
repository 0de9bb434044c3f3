//! Universe of variables, rankings and gene lists.
//!
//! Positions are 1-based throughout: a ranking over `M` variables assigns each
//! variable a distinct position in `1..=M`, and position 0 is reserved for
//! "not in the list".

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// Fixed, indexed set of variable identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Result<Self> {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.len() < 2 {
            return Err(Error::invalid(format!(
                "universe needs at least 2 variables, got {}",
                ids.len()
            )));
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate identifier `{id}`")));
            }
        }
        Ok(Universe { ids, index })
    }

    /// Universe `g1, …, gM`.
    pub fn numbered(m: usize) -> Result<Self> {
        Universe::new((1..=m).map(|i| format!("g{i}")))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UniverseMismatch(format!("unknown variable `{id}`")))
    }
}

/// Which end of a ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Top,
    Bottom,
}

/// A full ordering of the `M` universe variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    positions: Vec<usize>,
    scores: Option<Vec<f64>>,
}

impl Ranking {
    /// Ranks by descending score, ties broken by ascending index.
    pub fn from_scores(scores: &[f64]) -> Result<Self> {
        if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite score {} at index {i}",
                scores[i]
            )));
        }
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        let mut positions = vec![0; scores.len()];
        for (rank, &i) in order.iter().enumerate() {
            positions[i] = rank + 1;
        }
        Ok(Ranking {
            positions,
            scores: Some(scores.to_vec()),
        })
    }

    /// Ranking from explicit 1-based positions.
    pub fn from_positions(positions: Vec<usize>) -> Result<Self> {
        check_permutation(&positions)?;
        Ok(Ranking {
            positions,
            scores: None,
        })
    }

    /// Ranking from a best-first ordering of variable indices.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let mut positions = vec![0; order.len()];
        for (rank, &i) in order.iter().enumerate() {
            if i >= order.len() || positions[i] != 0 {
                return Err(Error::invalid("order is not a permutation of 0..M"));
            }
            positions[i] = rank + 1;
        }
        Ok(Ranking {
            positions,
            scores: None,
        })
    }

    /// Attaches scores; they must be consistent with the positions.
    pub fn with_scores(mut self, scores: Vec<f64>) -> Result<Self> {
        if scores.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: scores.len(),
            });
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::invalid("non-finite score"));
        }
        let order = self.order();
        for w in order.windows(2) {
            let (a, b) = (w[0], w[1]);
            if scores[a] < scores[b] || (scores[a] == scores[b] && a > b) {
                return Err(Error::invalid(format!(
                    "scores are not ordered by position (indices {a} and {b})"
                )));
            }
        }
        self.scores = Some(scores);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// 1-based position of variable `index`.
    pub fn position(&self, index: usize) -> usize {
        self.positions[index]
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn scores(&self) -> Option<&[f64]> {
        self.scores.as_deref()
    }

    /// Variable indices from first to last position.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.len()];
        for (i, &p) in self.positions.iter().enumerate() {
            order[p - 1] = i;
        }
        order
    }

    /// Position `M + 1 - p` for every variable; scores are negated.
    pub fn reversed(&self) -> Ranking {
        let m = self.len();
        Ranking {
            positions: self.positions.iter().map(|&p| m + 1 - p).collect(),
            scores: self
                .scores
                .as_ref()
                .map(|s| s.iter().map(|x| -x).collect()),
        }
    }

    /// Indices at positions `1..=k` (top) or `M-k+1..=M` (bottom).
    pub fn top_k(&self, k: usize, direction: Direction) -> Result<BTreeSet<usize>> {
        let m = self.len();
        if k > m {
            return Err(Error::invalid(format!("k = {k} exceeds M = {m}")));
        }
        Ok(self
            .positions
            .iter()
            .enumerate()
            .filter(|&(_, &p)| match direction {
                Direction::Top => p <= k,
                Direction::Bottom => p > m - k,
            })
            .map(|(i, _)| i)
            .collect())
    }
}

fn check_permutation(positions: &[usize]) -> Result<()> {
    let m = positions.len();
    let mut seen = vec![false; m + 1];
    for (i, &p) in positions.iter().enumerate() {
        if p == 0 || p > m || seen[p] {
            return Err(Error::invalid(format!(
                "position {p} of index {i} breaks the permutation of 1..={m}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Ordered or unordered subset of the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneList {
    /// Members best-first; member `k` has position `k + 1`.
    Ordered(Vec<usize>),
    Unordered(BTreeSet<usize>),
}

impl GeneList {
    pub fn ordered(members: Vec<usize>) -> Result<Self> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        if set.len() != members.len() {
            return Err(Error::invalid("ordered list contains duplicates"));
        }
        Ok(GeneList::Ordered(members))
    }

    pub fn unordered(members: impl IntoIterator<Item = usize>) -> Self {
        GeneList::Unordered(members.into_iter().collect())
    }

    /// Top-k members of a ranking as an ordered list.
    pub fn top_of(ranking: &Ranking, k: usize) -> Result<Self> {
        if k > ranking.len() {
            return Err(Error::invalid(format!("k = {k} exceeds M = {}", ranking.len())));
        }
        Ok(GeneList::Ordered(ranking.order()[..k].to_vec()))
    }

    pub fn len(&self) -> usize {
        match self {
            GeneList::Ordered(v) => v.len(),
            GeneList::Unordered(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        match self {
            GeneList::Ordered(v) => v.contains(&index),
            GeneList::Unordered(s) => s.contains(&index),
        }
    }

    pub fn members(&self) -> BTreeSet<usize> {
        match self {
            GeneList::Ordered(v) => v.iter().copied().collect(),
            GeneList::Unordered(s) => s.clone(),
        }
    }

    /// Position function over a universe of size `m`: list position for
    /// ordered members, membership indicator for unordered lists, 0 otherwise.
    pub fn position_vector(&self, m: usize) -> Result<Vec<usize>> {
        let mut out = vec![0; m];
        match self {
            GeneList::Ordered(v) => {
                for (k, &i) in v.iter().enumerate() {
                    *out.get_mut(i).ok_or_else(|| out_of_range(i, m))? = k + 1;
                }
            }
            GeneList::Unordered(s) => {
                for &i in s {
                    *out.get_mut(i).ok_or_else(|| out_of_range(i, m))? = 1;
                }
            }
        }
        Ok(out)
    }
}

fn out_of_range(i: usize, m: usize) -> Error {
    Error::UniverseMismatch(format!("member index {i} outside universe of size {m}"))
}
