//! Index algebra for dyadic scales and positions.
//!
//! A pair `(j, k)` names the half-open interval `[k 2^-j, (k+1) 2^-j)`.
//! Positions are signed; only [`locate`] restricts its argument to `[0, 1)`.

use crate::error::{Error, Result};

/// Scale/position pair naming the dyadic interval `[k 2^-j, (k+1) 2^-j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicIndex {
    pub j: u32,
    pub k: i64,
}

impl DyadicIndex {
    pub fn new(j: u32, k: i64) -> Self {
        Self { j, k }
    }

    /// Half-open interval `[k 2^-j, (k+1) 2^-j)`.
    pub fn interval(&self) -> (f64, f64) {
        let step = (-(self.j as f64)).exp2();
        (self.k as f64 * step, (self.k + 1) as f64 * step)
    }

    pub fn len(&self) -> f64 {
        (-(self.j as f64)).exp2()
    }

    /// The two scale-`j+1` intervals partitioning this one.
    pub fn children(&self) -> (DyadicIndex, DyadicIndex) {
        (
            DyadicIndex::new(self.j + 1, 2 * self.k),
            DyadicIndex::new(self.j + 1, 2 * self.k + 1),
        )
    }

    /// Ancestor at scale `j_coarse <= j`.
    pub fn ancestor(&self, j_coarse: u32) -> DyadicIndex {
        assert!(j_coarse <= self.j);
        DyadicIndex::new(j_coarse, self.k >> (self.j - j_coarse))
    }

    pub fn contains(&self, t: f64) -> bool {
        let (a, b) = self.interval();
        a <= t && t < b
    }

    /// Interval with the same center but three times larger:
    /// `[(k-1) 2^-j, (k+2) 2^-j)`.
    pub fn triple(&self) -> (f64, f64) {
        let step = (-(self.j as f64)).exp2();
        ((self.k - 1) as f64 * step, (self.k + 2) as f64 * step)
    }
}

/// Symmetric position neighborhood at fixed scale: `{k : |k - center| <= radius}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborhoodSpec {
    pub radius: u32,
}

impl NeighborhoodSpec {
    pub fn new(radius: u32) -> Self {
        Self { radius }
    }

    /// Positions of the neighborhood around `center`; cardinality `2 radius + 1`.
    pub fn positions(&self, center: i64) -> std::ops::RangeInclusive<i64> {
        center - self.radius as i64..=center + self.radius as i64
    }
}

/// `k_j(t) = floor(2^j t)`, the scale-`j` position whose interval contains `t`.
///
/// Restricted to `t` in `[0, 1)`, so the result lies in `{0, ..., 2^j - 1}`.
pub fn locate(t: f64, j: u32) -> Result<i64> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Domain(format!("locate: t = {t} outside [0, 1)")));
    }
    let k = ((j as f64).exp2() * t).floor() as i64;
    // floating point can land on 2^j when t is just below 1
    Ok(k.min((1i64 << j) - 1))
}

/// Unrestricted variant of [`locate`] for signed positions.
pub fn locate_unchecked(t: f64, j: u32) -> i64 {
    ((j as f64).exp2() * t).floor() as i64
}

/// All indices `(j', k')` with `j <= j' <= j_max` whose interval is contained in
/// the tripled interval of `lambda`.
///
/// Scans integer ranges per scale: at scale `j'` the positions covered are
/// exactly `(k-1) 2^{j'-j} ..= (k+2) 2^{j'-j} - 1`.
pub fn descendants_in_triple(lambda: DyadicIndex, j_max: u32) -> Vec<DyadicIndex> {
    assert!(lambda.j <= j_max);
    let mut out = Vec::new();
    for jp in lambda.j..=j_max {
        let scale = 1i64 << (jp - lambda.j);
        let lo = (lambda.k - 1) * scale;
        let hi = (lambda.k + 2) * scale; // exclusive
        for kp in lo..hi {
            out.push(DyadicIndex::new(jp, kp));
        }
    }
    out
}
