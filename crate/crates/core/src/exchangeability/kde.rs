//! Kernel density estimate of the total exchangeability variation.

use super::estimate::PairSamples;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Bandwidth {
    /// Silverman's rule per coordinate, computed from the forward sample.
    #[default]
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdeSettings {
    pub bandwidth: Bandwidth,
    /// Lattice points per axis over `[1, M]`.
    pub grid_resolution: usize,
}

impl Default for KdeSettings {
    fn default() -> Self {
        KdeSettings {
            bandwidth: Bandwidth::Auto,
            grid_resolution: 128,
        }
    }
}

impl KdeSettings {
    pub fn check(&self) -> Result<()> {
        if self.grid_resolution < 8 {
            return Err(Error::config(format!(
                "KDE grid resolution {} is below 8",
                self.grid_resolution
            )));
        }
        if let Bandwidth::Fixed(h) = self.bandwidth {
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::config(format!("bandwidth {h} must be positive")));
            }
        }
        Ok(())
    }
}

fn silverman(values: impl Iterator<Item = f64> + Clone, n: usize) -> f64 {
    let mean = values.clone().sum::<f64>() / n as f64;
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    // (4 / (d + 2))^(1 / (d + 4)) = 1 for d = 2
    var.sqrt() * (n as f64).powf(-1.0 / 6.0)
}

/// Kernel profiles `exp(-½((x_g - c)/h)²)` over the lattice, one row per centre.
fn profiles(lattice: &[f64], centres: impl Iterator<Item = u32>, h: f64) -> Vec<Vec<f64>> {
    centres
        .map(|c| {
            lattice
                .iter()
                .map(|&x| (-0.5 * ((x - f64::from(c)) / h).powi(2)).exp())
                .collect()
        })
        .collect()
}

fn density(px: &[Vec<f64>], py: &[Vec<f64>], g: usize) -> Vec<f64> {
    let mut out = vec![0.0; g * g];
    for (fx, fy) in px.iter().zip(py) {
        for (a, &wx) in fx.iter().enumerate() {
            if wx == 0.0 {
                continue;
            }
            let row = &mut out[a * g..(a + 1) * g];
            for (cell, &wy) in row.iter_mut().zip(fy) {
                *cell += wx * wy;
            }
        }
    }
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= total);
    out
}

/// Positive-part mass of the difference between product-Gaussian density
/// estimates of the forward and reflected samples.
///
/// Both estimates are evaluated on a `g × g` lattice over `[1, M]²` and
/// renormalized to unit mass there, so kernel mass falling outside the grid
/// does not bias the result.
pub fn estimate_pvar(ps: &PairSamples, settings: &KdeSettings) -> Result<f64> {
    settings.check()?;
    let b = ps.rounds();
    let g = settings.grid_resolution;
    let m = ps.grid() as f64;
    let step = (m - 1.0).max(1.0) / (g - 1) as f64;
    let (hx, hy) = match settings.bandwidth {
        Bandwidth::Fixed(h) => (h, h),
        Bandwidth::Auto => {
            if b < 2 {
                return Err(Error::config("automatic bandwidth needs at least 2 rounds"));
            }
            let xs = ps.forward().iter().map(|p| f64::from(p[0]));
            let ys = ps.forward().iter().map(|p| f64::from(p[1]));
            (silverman(xs, b).max(step), silverman(ys, b).max(step))
        }
    };
    let lattice: Vec<f64> = (0..g).map(|a| 1.0 + a as f64 * step).collect();
    let fwd = ps.forward();
    let forward = density(
        &profiles(&lattice, fwd.iter().map(|p| p[0]), hx),
        &profiles(&lattice, fwd.iter().map(|p| p[1]), hy),
        g,
    );
    let reflected = density(
        &profiles(&lattice, fwd.iter().map(|p| p[1]), hx),
        &profiles(&lattice, fwd.iter().map(|p| p[0]), hy),
        g,
    );
    let positive: f64 = forward
        .iter()
        .zip(&reflected)
        .map(|(f, r)| (f - r).max(0.0))
        .sum();
    Ok(positive.clamp(0.0, 1.0))
}
