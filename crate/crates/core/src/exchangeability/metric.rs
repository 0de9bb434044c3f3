use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Metric on integer grid points of any dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl Metric {
    pub fn distance(&self, a: &[u32], b: &[u32]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let diffs = a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y) as f64);
        match self {
            Metric::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Metric::Manhattan => diffs.sum(),
            Metric::Chebyshev => diffs.fold(0.0, f64::max),
        }
    }

    /// Order-preserving integer surrogate of the 2-D distance; see [`Metric::finish`].
    #[inline]
    pub(crate) fn raw2(&self, a: [u32; 2], b: [u32; 2]) -> u64 {
        let dx = a[0].abs_diff(b[0]) as u64;
        let dy = a[1].abs_diff(b[1]) as u64;
        match self {
            Metric::Euclidean => dx * dx + dy * dy,
            Metric::Manhattan => dx + dy,
            Metric::Chebyshev => dx.max(dy),
        }
    }

    /// Maps a [`Metric::raw2`] value to the distance.
    #[inline]
    pub(crate) fn finish(&self, raw: u64) -> f64 {
        match self {
            Metric::Euclidean => (raw as f64).sqrt(),
            Metric::Manhattan | Metric::Chebyshev => raw as f64,
        }
    }

    /// `ρ((1,…,1), (M,…,M))` in `dim` dimensions.
    pub fn corner_distance(&self, dim: usize, grid: usize) -> f64 {
        let ones = vec![1u32; dim];
        let tops = vec![grid as u32; dim];
        self.distance(&ones, &tops)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Manhattan => "manhattan",
            Metric::Chebyshev => "chebyshev",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "manhattan" => Ok(Metric::Manhattan),
            "chebyshev" => Ok(Metric::Chebyshev),
            _ => Err(Error::Config(format!("unknown metric `{s}`"))),
        }
    }
}
