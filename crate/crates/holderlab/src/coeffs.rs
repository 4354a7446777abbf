//! Scale-indexed wavelet coefficient storage shared by synthesis and analysis.

use serde::{Deserialize, Serialize};

/// One scale row: coefficients `c_{j,k}` for `k` in `k_lo .. k_lo + values.len()`.
///
/// `valid[i]` is false for positions whose computation touched data outside the
/// sampled window (boundary contamination); such entries must not feed leaders
/// or regressions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffScale {
    pub j: u32,
    pub k_lo: i64,
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
}

impl CoeffScale {
    pub fn new(j: u32, k_lo: i64, values: Vec<f64>) -> Self {
        let valid = vec![true; values.len()];
        Self { j, k_lo, values, valid }
    }

    pub fn k_hi(&self) -> i64 {
        self.k_lo + self.values.len() as i64 - 1
    }

    pub fn get(&self, k: i64) -> Option<f64> {
        let i = usize::try_from(k - self.k_lo).ok()?;
        if i < self.values.len() && self.valid[i] {
            Some(self.values[i])
        } else {
            None
        }
    }
}

/// Coefficients over a contiguous range of scales, ascending in `j`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CoeffPyramid {
    pub scales: Vec<CoeffScale>,
}

impl CoeffPyramid {
    pub fn new(scales: Vec<CoeffScale>) -> Self {
        debug_assert!(scales.windows(2).all(|w| w[1].j == w[0].j + 1));
        Self { scales }
    }

    pub fn j_min(&self) -> Option<u32> {
        self.scales.first().map(|s| s.j)
    }

    pub fn j_max(&self) -> Option<u32> {
        self.scales.last().map(|s| s.j)
    }

    pub fn scale(&self, j: u32) -> Option<&CoeffScale> {
        let j_min = self.j_min()?;
        if j < j_min {
            return None;
        }
        self.scales.get((j - j_min) as usize)
    }

    /// `c_{j,k}` if present and valid.
    pub fn get(&self, j: u32, k: i64) -> Option<f64> {
        self.scale(j)?.get(k)
    }
}
