//! Mother wavelet evaluation on dyadic grids.
//!
//! The Faber-Schauder tent is evaluated analytically; Daubechies wavelets are
//! tabulated by the cascade algorithm (repeated application of the two-scale
//! relation starting from the exact values at integers). All coefficients and
//! series in this crate use the L-infinity normalization: the synthesis atom
//! at scale `j` is `psi(2^j t - k)` with no `2^{j/2}` factor.

mod filters;
mod transform;

pub use transform::analyze;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Wavelet family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    FaberSchauder,
    /// Daubechies wavelet with N vanishing moments, N in 2..=10.
    Daubechies(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveletSpec {
    pub family: Family,
}

impl WaveletSpec {
    pub fn faber_schauder() -> Self {
        Self { family: Family::FaberSchauder }
    }

    pub fn daubechies(n: u8) -> Result<Self> {
        if !(2..=10).contains(&n) {
            return Err(Error::UnsupportedWavelet(format!(
                "daubechies({n}): vanishing moments must be in 2..=10"
            )));
        }
        Ok(Self { family: Family::Daubechies(n) })
    }

    /// Closed support interval of the mother wavelet.
    pub fn support(&self) -> (f64, f64) {
        match self.family {
            Family::FaberSchauder => (0.0, 1.0),
            Family::Daubechies(n) => (0.0, (2 * n - 1) as f64),
        }
    }

    /// Integer length of the support (1 for the tent, 2N-1 for daubechies).
    pub fn support_len(&self) -> u32 {
        match self.family {
            Family::FaberSchauder => 1,
            Family::Daubechies(n) => 2 * n as u32 - 1,
        }
    }

    pub fn is_orthonormal(&self) -> bool {
        matches!(self.family, Family::Daubechies(_))
    }

    /// Orthonormal scaling filter (sum = sqrt(2)); daubechies only.
    pub fn scaling_filter(&self) -> Result<&'static [f64]> {
        match self.family {
            Family::Daubechies(2) => Ok(&filters::DB2),
            Family::Daubechies(3) => Ok(&filters::DB3),
            Family::Daubechies(4) => Ok(&filters::DB4),
            Family::Daubechies(5) => Ok(&filters::DB5),
            Family::Daubechies(6) => Ok(&filters::DB6),
            Family::Daubechies(7) => Ok(&filters::DB7),
            Family::Daubechies(8) => Ok(&filters::DB8),
            Family::Daubechies(9) => Ok(&filters::DB9),
            Family::Daubechies(10) => Ok(&filters::DB10),
            _ => Err(Error::UnsupportedWavelet(format!("{:?}", self.family))),
        }
    }

    /// Quadrature mirror (wavelet) filter `g_m = (-1)^m h_{L-1-m}`, giving a
    /// wavelet supported on `[0, 2N-1]`.
    pub fn wavelet_filter(&self) -> Result<Vec<f64>> {
        let h = self.scaling_filter()?;
        let l = h.len();
        Ok((0..l).map(|m| if m % 2 == 0 { h[l - 1 - m] } else { -h[l - 1 - m] }).collect())
    }
}

/// The triangular (Faber-Schauder) function: `x` on `[0, 1/2)`, `1-x` on
/// `[1/2, 1)`, `0` elsewhere.
pub fn tent(x: f64) -> f64 {
    if (0.0..0.5).contains(&x) {
        x
    } else if (0.5..1.0).contains(&x) {
        1.0 - x
    } else {
        0.0
    }
}

/// Values of a function on the dyadic grid `i 2^-resolution` over `[0, support_len]`.
#[derive(Debug, Clone)]
pub struct DyadicTable {
    pub resolution: u32,
    pub support_len: u32,
    pub values: Vec<f64>,
}

impl DyadicTable {
    /// Value at grid index `i` (i.e. at `i 2^-resolution`), zero outside support.
    #[inline]
    pub fn at_index(&self, i: i64) -> f64 {
        if i < 0 || i as usize >= self.values.len() {
            0.0
        } else {
            self.values[i as usize]
        }
    }

    pub fn grid_step(&self) -> f64 {
        (-(self.resolution as f64)).exp2()
    }
}

/// Exact scaling-function values at the integers of the support, from the
/// eigenvector of the two-scale transition matrix at eigenvalue 1,
/// normalized so the values sum to one (partition of unity).
fn scaling_at_integers(refine: &[f64]) -> Vec<f64> {
    let l = refine.len(); // support [0, l-1], interior integers 1..=l-2
    let n = l - 2;
    // rows: (M - I) v = 0 for interior values, last row replaced by sum = 1
    let mut a = vec![vec![0.0f64; n + 1]; n];
    for (row, i) in (1..=n).enumerate() {
        for (col, lv) in (1..=n).enumerate() {
            let idx = 2 * i as i64 - lv as i64;
            let m = if (0..l as i64).contains(&idx) { refine[idx as usize] } else { 0.0 };
            a[row][col] = m - if row == col { 1.0 } else { 0.0 };
        }
    }
    for col in 0..n {
        a[n - 1][col] = 1.0;
    }
    a[n - 1][n] = 1.0;
    // gaussian elimination with partial pivoting
    for col in 0..n {
        let piv = (col..n).max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs())).unwrap();
        a.swap(col, piv);
        let p = a[col][col];
        assert!(p.abs() > 1e-14, "singular two-scale system");
        for row in 0..n {
            if row != col {
                let f = a[row][col] / p;
                for c in col..=n {
                    let sub = f * a[col][c];
                    a[row][c] -= sub;
                }
            }
        }
    }
    let mut v = vec![0.0f64; l];
    for i in 1..=n {
        v[i] = a[i - 1][n] / a[i - 1][i - 1];
    }
    v
}

/// Tabulate the Daubechies mother wavelet on the grid `2^-resolution` by the
/// cascade algorithm. `resolution` must be at most 24.
pub fn cascade(spec: &WaveletSpec, resolution: u32) -> Result<DyadicTable> {
    if resolution > 24 {
        return Err(Error::Domain(format!("cascade resolution {resolution} > 24")));
    }
    let h = spec.scaling_filter()?;
    let refine: Vec<f64> = h.iter().map(|&x| x * std::f64::consts::SQRT_2).collect();
    let phi_res = resolution.saturating_sub(1);
    let phi = cascade_scaling(&refine, phi_res);
    // psi(i 2^-r) = sum_m b_m phi(i 2^-(r-1) - m), b_m = sqrt(2) g_m
    let g = spec.wavelet_filter()?;
    let b: Vec<f64> = g.iter().map(|&x| x * std::f64::consts::SQRT_2).collect();
    let sup = spec.support_len();
    let len = (sup as usize) * (1usize << resolution) + 1;
    let mut values = vec![0.0f64; len];
    let coarse = 1i64 << phi_res;
    for (i, v) in values.iter_mut().enumerate() {
        // index of 2x - m on the phi grid; exact when resolution >= 1
        let base = if resolution >= 1 { i as i64 } else { 2 * i as i64 };
        let mut acc = 0.0;
        for (m, &bm) in b.iter().enumerate() {
            acc += bm * phi.at_index(base - m as i64 * coarse);
        }
        *v = acc;
    }
    Ok(DyadicTable { resolution, support_len: sup, values })
}

/// Scaling-function table by iterated refinement from the integer values.
fn cascade_scaling(refine: &[f64], resolution: u32) -> DyadicTable {
    let l = refine.len();
    let sup = (l - 1) as u32;
    let mut table = DyadicTable { resolution: 0, support_len: sup, values: scaling_at_integers(refine) };
    for s in 0..resolution {
        let old_len = table.values.len();
        let new_len = (old_len - 1) * 2 + 1;
        let mut values = vec![0.0f64; new_len];
        let stride = 1i64 << s;
        for (i, v) in values.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (m, &am) in refine.iter().enumerate() {
                acc += am * table.at_index(i as i64 - m as i64 * stride);
            }
            *v = acc;
        }
        table = DyadicTable { resolution: s + 1, support_len: sup, values };
    }
    table
}

/// Mother wavelet ready for grid evaluation: analytic tent, or a cascade table.
#[derive(Debug, Clone)]
pub struct Wavelet {
    pub spec: WaveletSpec,
    table: Option<DyadicTable>,
}

impl Wavelet {
    /// Build an evaluator; `resolution` is the table grid scale for daubechies
    /// families (it must be at least `j_grid - j` for every synthesis level, so
    /// in practice pass the grid scale of the paths to be produced).
    pub fn new(spec: WaveletSpec, resolution: u32) -> Result<Self> {
        let table = match spec.family {
            Family::FaberSchauder => None,
            Family::Daubechies(_) => Some(cascade(&spec, resolution)?),
        };
        Ok(Self { spec, table })
    }

    pub fn resolution(&self) -> u32 {
        self.table.as_ref().map_or(u32::MAX, |t| t.resolution)
    }

    pub fn table(&self) -> Option<&DyadicTable> {
        self.table.as_ref()
    }

    /// `psi(i 2^-resolution)`, zero outside support. For the tent the index is
    /// interpreted against an implicit resolution-53 grid, so use [`Wavelet::value`].
    #[inline]
    pub fn at_index(&self, i: i64) -> f64 {
        match &self.table {
            Some(t) => t.at_index(i),
            None => unreachable!("tent has no table"),
        }
    }

    /// `psi(u)` for `u` known to be on the table grid (daubechies) or any real
    /// argument (tent).
    #[inline]
    pub fn value_on_grid(&self, u: f64) -> f64 {
        match &self.table {
            None => tent(u),
            Some(t) => {
                let idx = u * (t.resolution as f64).exp2();
                t.at_index(idx.round() as i64)
            }
        }
    }

    /// `psi(2^j t - k)` by table lookup. Errors if the argument is off the
    /// table grid and `interpolate` is false; linear interpolation otherwise.
    pub fn evaluate(&self, j: u32, k: i64, t: f64, interpolate: bool) -> Result<f64> {
        let u = (j as f64).exp2() * t - k as f64;
        let (lo, hi) = self.spec.support();
        if u < lo || u >= hi {
            return Ok(0.0);
        }
        match &self.table {
            None => Ok(tent(u)),
            Some(tab) => {
                let x = u * (tab.resolution as f64).exp2();
                let r = x.round();
                if (x - r).abs() < 1e-9 {
                    Ok(tab.at_index(r as i64))
                } else if interpolate {
                    let f = x.floor();
                    let frac = x - f;
                    Ok(tab.at_index(f as i64) * (1.0 - frac) + tab.at_index(f as i64 + 1) * frac)
                } else {
                    Err(Error::Misaligned(format!(
                        "psi(2^{j} t - {k}) at t = {t}: argument off the resolution-{} grid",
                        tab.resolution
                    )))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_values() {
        assert_eq!(tent(0.25), 0.25);
        assert_eq!(tent(0.5), 0.5);
        assert_eq!(tent(0.75), 0.25);
        assert_eq!(tent(-0.1), 0.0);
        assert_eq!(tent(1.2), 0.0);
        assert_eq!(tent(1.0), 0.0);
    }

    #[test]
    fn evaluate_tent_reindexing() {
        let w = Wavelet::new(WaveletSpec::faber_schauder(), 0).unwrap();
        assert_eq!(w.evaluate(0, 0, 0.5, false).unwrap(), 0.5);
        assert_eq!(w.evaluate(2, 1, 0.375, false).unwrap(), 0.5);
        assert_eq!(w.evaluate(2, 1, 0.1, false).unwrap(), 0.0);
    }

    #[test]
    fn daubechies_support() {
        for n in 2..=10u8 {
            let spec = WaveletSpec::daubechies(n).unwrap();
            assert_eq!(spec.support(), (0.0, (2 * n - 1) as f64));
            assert_eq!(spec.scaling_filter().unwrap().len(), 2 * n as usize);
        }
        assert!(WaveletSpec::daubechies(1).is_err());
        assert!(WaveletSpec::daubechies(11).is_err());
    }

    #[test]
    fn filters_are_orthonormal() {
        for n in 2..=10u8 {
            let h = WaveletSpec::daubechies(n).unwrap().scaling_filter().unwrap();
            let sum: f64 = h.iter().sum();
            assert!((sum - std::f64::consts::SQRT_2).abs() < 1e-12);
            for m in 1..n as usize {
                let dot: f64 = (0..h.len() - 2 * m).map(|i| h[i] * h[i + 2 * m]).sum();
                assert!(dot.abs() < 1e-12, "db{n} shift {m}: {dot}");
            }
        }
    }

    #[test]
    fn cascade_vanishing_zeroth_moment() {
        for n in [2u8, 4, 7] {
            let spec = WaveletSpec::daubechies(n).unwrap();
            let tab = cascade(&spec, 10).unwrap();
            let integral: f64 = tab.values.iter().sum::<f64>() * tab.grid_step();
            assert!(integral.abs() < 1e-6, "db{n} zeroth moment {integral}");
        }
    }

    #[test]
    fn cascade_consistency_under_refinement() {
        for n in 2..=10u8 {
            let spec = WaveletSpec::daubechies(n).unwrap();
            for r in [8u32, 12] {
                let coarse = cascade(&spec, r - 1).unwrap();
                let fine = cascade(&spec, r).unwrap();
                let mut worst = 0.0f64;
                for (i, v) in coarse.values.iter().enumerate() {
                    worst = worst.max((fine.values[2 * i] - v).abs());
                }
                assert!(worst < 1e-10, "db{n} r={r}: drift {worst}");
            }
        }
    }

    #[test]
    fn scaling_two_scale_residual() {
        for n in [2u8, 5, 10] {
            let spec = WaveletSpec::daubechies(n).unwrap();
            let h = spec.scaling_filter().unwrap();
            let refine: Vec<f64> = h.iter().map(|&x| x * std::f64::consts::SQRT_2).collect();
            let r = 8;
            let phi = cascade_scaling(&refine, r);
            let mut worst = 0.0f64;
            // phi(x) = sum_m a_m phi(2x - m) checked at every point of the r grid
            for (i, v) in phi.values.iter().enumerate() {
                let mut acc = 0.0;
                for (m, &am) in refine.iter().enumerate() {
                    acc += am * phi.at_index(2 * i as i64 - m as i64 * (1i64 << r));
                }
                worst = worst.max((acc - v).abs());
            }
            assert!(worst < 1e-8, "db{n} two-scale residual {worst}");
        }
    }

    #[test]
    fn cascade_max_matches_fixed_point_iteration() {
        // independent oracle: iterate the refinement operator from the box
        // function and compare the sup norm of psi for db2
        let spec = WaveletSpec::daubechies(2).unwrap();
        let h = spec.scaling_filter().unwrap();
        let refine: Vec<f64> = h.iter().map(|&x| x * std::f64::consts::SQRT_2).collect();
        let r = 8u32;
        let n = 3usize << r;
        // box function on [0,1) sampled on the grid
        let mut phi: Vec<f64> = (0..=n).map(|i| if (i as f64) < (1 << r) as f64 { 1.0 } else { 0.0 }).collect();
        for _ in 0..30 {
            let mut next = vec![0.0f64; n + 1];
            for (i, v) in next.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (m, &am) in refine.iter().enumerate() {
                    let idx = 2 * i as i64 - m as i64 * (1i64 << r);
                    if (0..=n as i64).contains(&idx) {
                        acc += am * phi[idx as usize];
                    }
                }
                *v = acc;
            }
            phi = next;
        }
        let g = spec.wavelet_filter().unwrap();
        let b: Vec<f64> = g.iter().map(|&x| x * std::f64::consts::SQRT_2).collect();
        let mut oracle_max = 0.0f64;
        for i in 0..=n {
            let mut acc = 0.0;
            for (m, &bm) in b.iter().enumerate() {
                let idx = 2 * i as i64 - m as i64 * (1i64 << r);
                if (0..=n as i64).contains(&idx) {
                    acc += bm * phi[idx as usize];
                }
            }
            oracle_max = oracle_max.max(acc.abs());
        }
        let tab = cascade(&spec, r).unwrap();
        let got_max = tab.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        assert!((got_max - oracle_max).abs() < 1e-4, "{got_max} vs oracle {oracle_max}");
    }

    #[test]
    fn evaluate_off_grid_errors_without_interpolation() {
        let spec = WaveletSpec::daubechies(2).unwrap();
        let w = Wavelet::new(spec, 4).unwrap();
        let t = 1.0 / 3.0;
        assert!(w.evaluate(0, 0, t, false).is_err());
        assert!(w.evaluate(0, 0, t, true).is_ok());
        // on-grid works
        assert!(w.evaluate(0, 0, 0.5, false).is_ok());
        // outside support is exactly zero regardless of alignment
        assert_eq!(w.evaluate(0, 0, -0.123, false).unwrap(), 0.0);
        assert_eq!(w.evaluate(0, 0, 3.5, false).unwrap(), 0.0);
    }
}
