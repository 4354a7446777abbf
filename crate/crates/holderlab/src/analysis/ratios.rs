//! Increment-ratio profiles: finite-scale stand-ins for
//! `limsup_{s -> t} |f(s) - f(t)| / omega(|s - t|)`.

use super::Modulus;
use crate::error::{Error, Result};
use crate::synthesis::SampledPath;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Number of finest scales whose running maximum serves as the limsup proxy.
pub const TERMINAL_SCALES: usize = 6;

/// Per-scale maxima `R_j(t) = max over |s - t| in [2^-j, 2^{-j+1})` of the
/// gauged increment ratio.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioProfile {
    pub t: f64,
    pub j_lo: u32,
    pub values: Vec<f64>,
}

impl RatioProfile {
    pub fn j_hi(&self) -> u32 {
        self.j_lo + self.values.len() as u32 - 1
    }

    /// Running maximum over the finest [`TERMINAL_SCALES`] scales.
    pub fn terminal(&self) -> f64 {
        let n = self.values.len();
        self.values[n.saturating_sub(TERMINAL_SCALES)..]
            .iter()
            .fold(0.0f64, |a, &v| a.max(v))
    }

    /// Maximum over the coarsest [`TERMINAL_SCALES`] scales (for growth-shape
    /// comparisons against [`RatioProfile::terminal`]).
    pub fn initial(&self) -> f64 {
        self.values[..self.values.len().min(TERMINAL_SCALES)]
            .iter()
            .fold(0.0f64, |a, &v| a.max(v))
    }
}

/// Reciprocal gauge values `1 / omega(d 2^-j_grid)` for the grid distances of
/// the scale-`j` annulus, precomputed once and shared across base points.
fn inv_gauge_table(modulus: &Modulus, j_grid: u32, j: u32) -> Result<Vec<f64>> {
    let d_lo = 1i64 << (j_grid - j);
    let step = (-(j_grid as f64)).exp2();
    (d_lo..2 * d_lo).map(|d| modulus.eval(d as f64 * step).map(f64::recip)).collect()
}

/// The annulus maximum at one scale, or `None` when no grid point of the
/// annulus lies inside the window. `inv_om[i]` is the reciprocal gauge at
/// distance `d_lo + i` grid steps.
fn annulus_max(path: &SampledPath, i_t: i64, j: u32, inv_om: &[f64]) -> Option<f64> {
    let f_t = path.values[(i_t - path.i_lo) as usize];
    let d_lo = 1i64 << (path.j_grid - j);
    let mut best: Option<f64> = None;
    for (off, &w) in inv_om.iter().enumerate() {
        let d = d_lo + off as i64;
        for s in [i_t - d, i_t + d] {
            if s < path.i_lo || s > path.i_hi() {
                continue;
            }
            let ratio = (path.values[(s - path.i_lo) as usize] - f_t).abs() * w;
            best = Some(best.map_or(ratio, |b: f64| b.max(ratio)));
        }
    }
    best
}

/// Smallest scale at which the annulus distances fit the modulus domain:
/// distances are below `2^{-j+1}`, so we need `2^{-j+1} <= x_max`.
pub fn min_scale_for(modulus: &Modulus) -> u32 {
    let mut j = 1u32;
    while (1.0 - j as f64).exp2() > modulus.x_max() {
        j += 1;
    }
    j
}

/// Increment-ratio profile of `path` at on-grid `t` for scales `j_lo ..= j_hi`.
pub fn ratio_profile(
    path: &SampledPath,
    t: f64,
    modulus: &Modulus,
    j_lo: u32,
    j_hi: u32,
) -> Result<RatioProfile> {
    if j_lo > j_hi || j_hi > path.j_grid - 1 {
        return Err(Error::Domain(format!(
            "scale range {j_lo}..={j_hi} invalid for grid scale {}",
            path.j_grid
        )));
    }
    if j_lo < min_scale_for(modulus) {
        return Err(Error::Domain(format!(
            "scale {j_lo} puts annulus distances outside the modulus domain"
        )));
    }
    let x = t * (path.j_grid as f64).exp2();
    if x.fract() != 0.0 {
        return Err(Error::Misaligned(format!("t = {t} is off the sample grid")));
    }
    let i_t = x as i64;
    if i_t < path.i_lo || i_t > path.i_hi() {
        return Err(Error::Domain(format!("t = {t} outside the sampled window")));
    }
    let mut values = Vec::with_capacity((j_hi - j_lo + 1) as usize);
    for j in j_lo..=j_hi {
        let inv_om = inv_gauge_table(modulus, path.j_grid, j)?;
        match annulus_max(path, i_t, j, &inv_om) {
            Some(v) => values.push(v),
            None => {
                return Err(Error::PathTooShort(format!(
                    "t = {t} too close to the window boundary for scale {j}"
                )))
            }
        }
    }
    Ok(RatioProfile { t, j_lo, values })
}

/// Maximum of the scale-`j` annulus ratio over every grid point of the window,
/// with its argmax `t` (a rapid-point candidate). Points whose annulus is
/// entirely outside the window are skipped.
pub fn uniform_ratio(path: &SampledPath, modulus: &Modulus, j: u32) -> Result<(f64, f64)> {
    if j > path.j_grid - 1 || j < min_scale_for(modulus) {
        return Err(Error::Domain(format!("scale {j} invalid for this path/modulus")));
    }
    let step = (-(path.j_grid as f64)).exp2();
    let inv_om = inv_gauge_table(modulus, path.j_grid, j)?;
    let best = (path.i_lo..=path.i_hi())
        .into_par_iter()
        .filter_map(|i| annulus_max(path, i, j, &inv_om).map(|v| (v, i)))
        // deterministic argmax: larger value wins, ties -> smaller index
        .reduce_with(|a, b| {
            if (b.0, -b.1) > (a.0, -a.1) {
                b
            } else {
                a
            }
        })
        .ok_or_else(|| Error::PathTooShort("window has no usable annulus".into()))?;
    Ok((best.0, best.1 as f64 * step))
}
