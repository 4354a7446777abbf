//! Wavelet leaders: `d_{j,k} = sup |c_{j',k'}|` over all finer indices whose
//! interval sits inside the tripled interval of `(j, k)`.

use super::lsq_line;
use crate::coeffs::{CoeffPyramid, CoeffScale};
use crate::dyadic::locate;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Leaders per scale, with validity marking positions whose triple range ran
/// off the stored/valid coefficient window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeaderPyramid {
    pub leaders: CoeffPyramid,
    /// Deepest coefficient scale that feeds the sups.
    pub j_deepest: u32,
}

/// Compute leaders for scales `j <= j_max - margin`, taking sups over
/// coefficients down to scale `j_max`.
///
/// Bottom-up: with `M_{j,k}` the max of `|c|` over the subtree rooted at
/// `(j,k)`, the leader is `d_{j,k} = max(M_{j,k-1}, M_{j,k}, M_{j,k+1})`.
pub fn leader_pyramid(coeffs: &CoeffPyramid, j_max: u32, margin: u32) -> Result<LeaderPyramid> {
    let j_min = coeffs.j_min().ok_or_else(|| Error::Degenerate("empty pyramid".into()))?;
    if coeffs.j_max() < Some(j_max) {
        return Err(Error::Domain(format!("pyramid lacks scales up to {j_max}")));
    }
    let j_top = j_max
        .checked_sub(margin)
        .filter(|jt| *jt >= j_min)
        .ok_or_else(|| Error::Domain(format!("margin {margin} leaves no output scales")))?;

    // subtree maxima, deepest scale first; entries follow the stored k ranges
    let mut rows: Vec<CoeffScale> = Vec::new();
    let mut prev: Option<(i64, Vec<f64>, Vec<bool>)> = None;
    for j in (j_min..=j_max).rev() {
        let s = coeffs.scale(j).expect("contiguous scales");
        let n = s.values.len();
        let mut mx = vec![0.0f64; n];
        let mut ok = vec![false; n];
        for i in 0..n {
            let k = s.k_lo + i as i64;
            let mut m = s.values[i].abs();
            let mut v = s.valid[i];
            if let Some((ck_lo, cm, cv)) = &prev {
                for child in [2 * k, 2 * k + 1] {
                    match usize::try_from(child - ck_lo) {
                        Ok(ci) if ci < cm.len() => {
                            m = m.max(cm[ci]);
                            v &= cv[ci];
                        }
                        _ => v = false, // child outside stored range
                    }
                }
            }
            mx[i] = m;
            ok[i] = v;
        }
        if j <= j_top {
            // d_{j,k} needs the three sibling subtrees
            let mut row = CoeffScale::new(j, s.k_lo, vec![0.0; n]);
            for i in 0..n {
                let k = s.k_lo + i as i64;
                let mut d = 0.0f64;
                let mut v = true;
                for sib in [k - 1, k, k + 1] {
                    match usize::try_from(sib - s.k_lo) {
                        Ok(si) if si < n => {
                            d = d.max(mx[si]);
                            v &= ok[si];
                        }
                        _ => v = false,
                    }
                }
                row.values[i] = d;
                row.valid[i] = v;
            }
            rows.push(row);
        }
        prev = Some((s.k_lo, mx, ok));
    }
    rows.reverse();
    Ok(LeaderPyramid { leaders: CoeffPyramid::new(rows), j_deepest: j_max })
}

/// Leader-regression pointwise exponent estimate: least-squares slope of
/// `log2 d_{j, k_j(t)}` against `-j` over the given scales.
pub fn leader_exponent(pyramid: &LeaderPyramid, t: f64, j_lo: u32, j_hi: u32) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in j_lo..=j_hi {
        let k = locate(t, j)?;
        let d = pyramid.leaders.get(j, k).ok_or_else(|| {
            Error::Domain(format!("no valid leader at (j={j}, k={k})"))
        })?;
        if d > 0.0 {
            xs.push(-(j as f64));
            ys.push(d.log2());
        }
    }
    if xs.len() < 3 {
        return Err(Error::Degenerate(format!(
            "only {} nonzero leaders along t = {t}: no exponent estimate",
            xs.len()
        )));
    }
    Ok(lsq_line(&xs, &ys).0)
}
