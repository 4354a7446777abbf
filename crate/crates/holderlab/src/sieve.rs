//! Iterative sieve for locating slow points.
//!
//! Level by level, positions near any unusually large coefficient draw are
//! struck out: a draw with `|xi_{j,k'}|` in the band `(2^l mu, 2^{l+1} mu]`
//! removes every `k` with `|k - k'| <= 2^{m l}`. Positions surviving all
//! levels up to `J` name a nested family of dyadic intervals whose limit
//! points are slow. The admissibility condition on `(m, mu)` is the
//! summability bound
//! `sum_l (2^{ml+1}+1)(p_l + l sqrt(p_l (1-p_l))) < 1/4`.

use crate::error::{Error, Result};
use crate::randomness::{normal_sf, CoefficientLattice, Law};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Band probability `p_l(mu) = P(2^l mu < |xi| <= 2^{l+1} mu)` for a standard
/// Gaussian draw.
pub fn p_l(mu: u32, l: u32) -> f64 {
    assert!(mu >= 1);
    let a = (l as f64).exp2() * mu as f64;
    let b = ((l + 1) as f64).exp2() * mu as f64;
    // 2 (Phi(b) - Phi(a)), evaluated in the tail via the survival function
    2.0 * (normal_sf(a) - normal_sf(b))
}

/// Value of the admissibility series together with the verdict.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Condition10 {
    pub value: f64,
    pub admissible: bool,
    pub terms_used: u32,
}

/// Evaluate `sum_{l>=0} (2^{ml+1}+1)(p_l(mu) + l sqrt(p_l(mu)(1-p_l(mu))))`.
///
/// The series is truncated once the running term falls below 1e-16 and a
/// certified geometric tail bound is added: from `p_l <= exp(-4^l mu^2 / 2)`
/// the term ratio is at most `q = 2^{m+1} exp(-3 * 4^l mu^2 / 4)`, so the tail
/// beyond `l` is at most `term_l * q / (1 - q)` once `q < 1/2`.
pub fn condition10(m: u32, mu: u32) -> Condition10 {
    assert!(m >= 2 && mu >= 1);
    let mut value = 0.0f64;
    let mut l = 0u32;
    loop {
        let p = p_l(mu, l);
        let weight = (m as f64 * l as f64 + 1.0).exp2() + 1.0;
        let term = weight * (p + l as f64 * (p * (1.0 - p)).sqrt());
        value += term;
        if !value.is_finite() {
            return Condition10 { value: f64::INFINITY, admissible: false, terms_used: l + 1 };
        }
        let q = ((m + 1) as f64).exp2() * (-0.75 * ((2 * l) as f64).exp2() * (mu * mu) as f64).exp();
        if term < 1e-16 && q < 0.5 {
            value += term * q / (1.0 - q);
            return Condition10 { value, admissible: value < 0.25, terms_used: l + 1 };
        }
        l += 1;
        if l > 64 {
            // terms still large after the gaussian tail has collapsed: treat
            // as numerically divergent
            return Condition10 { value: f64::INFINITY, admissible: false, terms_used: l };
        }
    }
}

/// Smallest integer `mu` making `(m, mu)` admissible, scanning `1..=64`.
pub fn minimal_admissible_mu(m: u32) -> Option<u32> {
    (1..=64).find(|&mu| condition10(m, mu).admissible)
}

/// Sieve tuning knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveParams {
    /// Reach exponent: a band-`l` draw removes positions within `2^{m l}`.
    pub m: u32,
    /// Band base threshold; draws with `|xi| <= mu` remove nothing.
    pub mu: u32,
    /// Deepest level processed.
    pub j_cap: u32,
    /// Warm-up level at which the two edge intervals are dropped.
    pub j1: u32,
    pub trim_edges: bool,
}

impl SieveParams {
    pub fn new(m: u32, mu: u32, j_cap: u32, j1: u32, trim_edges: bool) -> Self {
        Self { m, mu, j_cap, j1, trim_edges }
    }

    /// Admissibility for targeting exponent `h` (or `inf K`): needs `1/m < h`
    /// and the summability condition below 1/4.
    pub fn validate(&self, h: f64) -> Result<Condition10> {
        if self.m < 2 || self.mu < 1 {
            return Err(Error::Config(format!("sieve needs m >= 2, mu >= 1 (got m={}, mu={})", self.m, self.mu)));
        }
        if 1.0 / self.m as f64 >= h {
            return Err(Error::Config(format!(
                "reach exponent m = {} too small for h = {h}: need 1/m < h",
                self.m
            )));
        }
        if self.j1 > self.j_cap {
            return Err(Error::Config(format!("j1 = {} exceeds j_cap = {}", self.j1, self.j_cap)));
        }
        let c = condition10(self.m, self.mu);
        if !c.admissible {
            return Err(Error::Config(format!(
                "(m={}, mu={}) inadmissible: summability value {} >= 1/4",
                self.m, self.mu, c.value
            )));
        }
        Ok(c)
    }
}

impl Default for SieveParams {
    fn default() -> Self {
        Self { m: 3, mu: 3, j_cap: 14, j1: 4, trim_edges: true }
    }
}

/// Full record of one sieve run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SieveState {
    pub params: SieveParams,
    /// Per-level survivor sets `I_j`, sorted, `j = 0 ..= j_cap`.
    pub level_survivors: Vec<Vec<i64>>,
    /// Cumulative survivors: `k` in level `j`'s entry iff its interval lies in
    /// every coarser surviving interval (and the edge trim, if any).
    pub nested_survivors: Vec<Vec<i64>>,
    /// `N_J`: count of nested survivors per level.
    pub counts: Vec<u64>,
    /// Realized draws consumed, per level (`k = 0 .. 2^j`).
    pub xi: Vec<Vec<f64>>,
}

impl SieveState {
    pub fn extinct(&self) -> bool {
        *self.counts.last().unwrap_or(&0) == 0
    }
}

/// Band index of a draw: `Some(l)` iff `|xi|` lies in `(2^l mu, 2^{l+1} mu]`.
fn band_index(xi_abs: f64, mu: u32) -> Option<u32> {
    let r = xi_abs / mu as f64;
    if !(r > 1.0) {
        return None; // equality at the lower edge of band 0 survives
    }
    // l = ceil(log2 r) - 1, nudged so exact powers of two land on their
    // band's closed upper edge
    let l = (r.log2().ceil() - 1.0).max(0.0);
    Some(l as u32)
}

/// Run the sieve against arbitrary per-level draws (tests use stubs here).
pub fn run_sieve_with(params: SieveParams, draw: impl Fn(u32, i64) -> f64 + Sync) -> SieveState {
    let mut level_survivors = Vec::with_capacity(params.j_cap as usize + 1);
    let mut nested_survivors = Vec::with_capacity(params.j_cap as usize + 1);
    let mut counts = Vec::with_capacity(params.j_cap as usize + 1);
    let mut xi_all = Vec::with_capacity(params.j_cap as usize + 1);
    let mut prev_nested: Vec<bool> = Vec::new();

    for j in 0..=params.j_cap {
        let n = 1usize << j;
        let xi: Vec<f64> = (0..n as i64).into_par_iter().map(|k| draw(j, k)).collect();

        // difference-array strike-out: band-l draw at k' clears [k'-r, k'+r]
        let mut diff = vec![0i32; n + 1];
        for (kp, &x) in xi.iter().enumerate() {
            if let Some(l) = band_index(x.abs(), params.mu) {
                let ml = (params.m as u64) * (l as u64);
                let reach = if ml >= 62 { i64::MAX / 2 } else { 1i64 << ml };
                let lo = (kp as i64 - reach).max(0) as usize;
                let hi = (kp as i64 + reach).min(n as i64 - 1) as usize;
                diff[lo] += 1;
                diff[hi + 1] -= 1;
            }
        }
        let mut level: Vec<i64> = Vec::new();
        let mut cover = 0i32;
        for (k, d) in diff[..n].iter().enumerate() {
            cover += d;
            if cover == 0 {
                level.push(k as i64);
            }
        }

        // nested refinement: the parent interval must also have survived
        let mut nested_mask = vec![false; n];
        let mut nested: Vec<i64> = Vec::new();
        for &k in &level {
            let parent_ok = j == 0 || prev_nested[(k >> 1) as usize];
            if parent_ok {
                nested_mask[k as usize] = true;
                nested.push(k);
            }
        }
        if params.trim_edges && j == params.j1 {
            for edge in [0i64, n as i64 - 1] {
                if nested_mask[edge as usize] {
                    nested_mask[edge as usize] = false;
                    nested.retain(|&k| k != edge);
                }
            }
        }

        counts.push(nested.len() as u64);
        level_survivors.push(level);
        nested_survivors.push(nested);
        xi_all.push(xi);
        prev_nested = nested_mask;
    }

    SieveState { params, level_survivors, nested_survivors, counts, xi: xi_all }
}

/// Run the sieve on the coefficient lattice of a series (Gaussian law required:
/// the admissibility bands are Gaussian tail probabilities).
pub fn run_sieve(lattice: &CoefficientLattice, params: SieveParams) -> Result<SieveState> {
    if lattice.law != Law::StandardGaussian {
        return Err(Error::Config("the sieve is calibrated for the gaussian lattice law".into()));
    }
    Ok(run_sieve_with(params, |j, k| lattice.value(j, k)))
}

/// Midpoints of the surviving deepest-level intervals, sorted ascending.
/// Empty when the sieve died out (retry with a larger `mu`).
pub fn extract_slow_candidates(state: &SieveState) -> Vec<f64> {
    let j = state.params.j_cap;
    let step = (-(j as f64 + 1.0)).exp2();
    state
        .nested_survivors
        .last()
        .map(|ks| ks.iter().map(|&k| (2 * k + 1) as f64 * step).collect())
        .unwrap_or_default()
}

/// One row of the survival table: empirical frequencies over seeds at level `j`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SurvivalRow {
    pub j: u32,
    /// Growth target `(3/2)^j`.
    pub threshold: f64,
    pub freq_ge_threshold: f64,
    pub freq_nonempty: f64,
    pub mean_count: f64,
}

/// Per-level survival frequencies across independent seeds.
pub fn survival_statistics(seeds: &[u64], params: SieveParams) -> Result<Vec<SurvivalRow>> {
    if seeds.len() < 30 {
        return Err(Error::Config(format!("need >= 30 seeds for survival statistics, got {}", seeds.len())));
    }
    let counts: Vec<Vec<u64>> = seeds
        .par_iter()
        .map(|&s| {
            let lat = CoefficientLattice::new(s, Law::StandardGaussian);
            run_sieve(&lat, params).expect("gaussian law").counts
        })
        .collect();
    let n = seeds.len() as f64;
    Ok((0..=params.j_cap)
        .map(|j| {
            let threshold = 1.5f64.powi(j as i32);
            let mut ge = 0usize;
            let mut nonempty = 0usize;
            let mut total = 0u64;
            for c in &counts {
                let v = c[j as usize];
                ge += (v as f64 >= threshold) as usize;
                nonempty += (v >= 1) as usize;
                total += v;
            }
            SurvivalRow {
                j,
                threshold,
                freq_ge_threshold: ge as f64 / n,
                freq_nonempty: nonempty as f64 / n,
                mean_count: total as f64 / n,
            }
        })
        .collect())
}
