//! Regularity measurement: moduli of continuity, increment-ratio profiles,
//! coefficient traces, wavelet leaders, and the slow/ordinary/rapid
//! point classification.

mod classify;
mod leaders;
mod ratios;

pub use classify::{classify, ClassifyThresholds, Diagnostics, PointClassification, Verdict};
pub use leaders::{leader_exponent, leader_pyramid, LeaderPyramid};
pub use ratios::{ratio_profile, uniform_ratio, RatioProfile};

use crate::coeffs::CoeffPyramid;
use crate::dyadic::locate;
use crate::error::{Error, Result};
use crate::randomness::CoefficientLattice;
use crate::synthesis::{synth_fh, Window};
use crate::wavelets::Wavelet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModulusKind {
    /// `x^h sqrt(log 1/x)` — the uniform / fast-point gauge.
    Rapid,
    /// `x^h sqrt(log log 1/x)` — the almost-every-point gauge.
    Ordinary,
    /// `x^h` — the slow-point gauge.
    Slow,
}

/// A modulus of continuity `omega(x)` gauged to exponent `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modulus {
    pub kind: ModulusKind,
    pub h: f64,
}

impl Modulus {
    pub fn new(kind: ModulusKind, h: f64) -> Result<Self> {
        if !(0.0 < h && h < 1.0) {
            return Err(Error::Domain(format!("modulus exponent h = {h} outside (0, 1)")));
        }
        Ok(Self { kind, h })
    }

    pub fn slow(h: f64) -> Result<Self> {
        Self::new(ModulusKind::Slow, h)
    }

    pub fn ordinary(h: f64) -> Result<Self> {
        Self::new(ModulusKind::Ordinary, h)
    }

    pub fn rapid(h: f64) -> Result<Self> {
        Self::new(ModulusKind::Rapid, h)
    }

    /// Upper end of the evaluable domain (exclusive): the ordinary gauge
    /// needs `log log 1/x > 0`.
    pub fn x_max(&self) -> f64 {
        match self.kind {
            ModulusKind::Ordinary => 1.0 / std::f64::consts::E,
            _ => 1.0,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0 < x && x < self.x_max()) {
            return Err(Error::Domain(format!(
                "modulus argument {x} outside (0, {})",
                self.x_max()
            )));
        }
        let base = x.powf(self.h);
        Ok(match self.kind {
            ModulusKind::Slow => base,
            ModulusKind::Ordinary => base * x.recip().ln().ln().sqrt(),
            ModulusKind::Rapid => base * x.recip().ln().sqrt(),
        })
    }
}

/// Slope and intercept of an ordinary least-squares line fit.
pub(crate) fn lsq_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Per-scale values `|c_{j, k_j(t)}| / omega(2^-j)` with their running maximum
/// (the finite-scale stand-in for the limsup in the trace criterion).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceProfile {
    pub j_lo: u32,
    pub values: Vec<f64>,
    pub running_max: Vec<f64>,
}

impl TraceProfile {
    pub fn summary(&self) -> f64 {
        *self.running_max.last().unwrap_or(&0.0)
    }
}

/// Coefficient trace along the dyadic column over `t`.
pub fn coefficient_trace(
    coeffs: &CoeffPyramid,
    t: f64,
    modulus: &Modulus,
    j_lo: u32,
    j_hi: u32,
) -> Result<TraceProfile> {
    if j_lo > j_hi {
        return Err(Error::Domain(format!("trace range {j_lo}..={j_hi} empty")));
    }
    let mut values = Vec::with_capacity((j_hi - j_lo + 1) as usize);
    let mut running_max = Vec::with_capacity(values.capacity());
    let mut m = 0.0f64;
    for j in j_lo..=j_hi {
        let k = locate(t, j)?;
        let c = coeffs.get(j, k).ok_or_else(|| {
            Error::Domain(format!("trace needs a valid coefficient at (j={j}, k={k})"))
        })?;
        let v = c.abs() / modulus.eval((-(j as f64)).exp2())?;
        m = m.max(v);
        values.push(v);
        running_max.push(m);
    }
    Ok(TraceProfile { j_lo, values, running_max })
}

/// Raw-draw trace `|xi_{j, k_j(t)}|` running maximum up to scale `j_hi`
/// (equals the trace of `f_h` coefficients under the slow gauge).
pub fn xi_trace_max(lattice: &CoefficientLattice, t: f64, j_hi: u32) -> Result<f64> {
    let mut m = 0.0f64;
    for j in 0..=j_hi {
        m = m.max(lattice.value(j, locate(t, j)?).abs());
    }
    Ok(m)
}

/// Regression report for the mean-squared-increment scaling law
/// `E (f_h(t + delta) - f_h(t))^2 ~ delta^{2h}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VarianceReport {
    pub slope: f64,
    pub stderr: f64,
    /// `(log2 lag, log2 mean squared increment)` points used in the fit.
    pub points: Vec<(f64, f64)>,
}

/// Estimate the increment-variance scaling slope over `n_seeds` independent
/// paths; `lag_exps` are the dyadic lag exponents (`lag = 2^-e`).
pub fn variance_scaling(
    wavelet: &Wavelet,
    h: f64,
    j_max: u32,
    j_grid: u32,
    window: Window,
    lag_exps: &[u32],
    seeds: &[u64],
) -> Result<VarianceReport> {
    if seeds.len() < 100 {
        return Err(Error::Config(format!("variance scaling needs >= 100 seeds, got {}", seeds.len())));
    }
    if lag_exps.iter().any(|&e| e >= j_grid) {
        return Err(Error::Domain("lag finer than the grid".into()));
    }
    let sums: Vec<Vec<f64>> = seeds
        .par_iter()
        .map(|&s| {
            let lat = CoefficientLattice::new(s, crate::randomness::Law::StandardGaussian);
            let path = synth_fh(&lat, wavelet, h, j_max, window, j_grid).expect("synth");
            lag_exps
                .iter()
                .map(|&e| {
                    let step = 1usize << (j_grid - e);
                    assert!(path.values.len() > step, "window shorter than lag 2^-{e}");
                    let mut acc = 0.0f64;
                    let mut n = 0usize;
                    for i in 0..path.values.len() - step {
                        let d = path.values[i + step] - path.values[i];
                        acc += d * d;
                        n += 1;
                    }
                    acc / n as f64
                })
                .collect()
        })
        .collect();
    let xs: Vec<f64> = lag_exps.iter().map(|&e| -(e as f64)).collect();
    let ys: Vec<f64> = (0..lag_exps.len())
        .map(|i| {
            let mean = sums.iter().map(|row| row[i]).sum::<f64>() / seeds.len() as f64;
            mean.log2()
        })
        .collect();
    let (slope, intercept) = lsq_line(&xs, &ys);
    let mut sse = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let r = y - (slope * x + intercept);
        sse += r * r;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let stderr = if n > 2.0 { (sse / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    Ok(VarianceReport { slope, stderr, points: xs.into_iter().zip(ys).collect() })
}
