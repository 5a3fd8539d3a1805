//! Certified lower envelope of the interpolating function `phi(t)`.
//!
//! For fixed `t`, `phi(t) >= t - t0 + e (nu_s - sum nu_{s-t_k} - nu_{s-t0})`
//! for every `s >= 0` and `0 <= t0 <= t`. The envelope takes the best such
//! value over a fixed rational grid.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{noroots_bound, EvalPoint};
use crate::error::{Error, Result};
use crate::rational::{int, to_f64, Rational};
use crate::search::{Objective, SearchParams};

/// Float candidates within this distance of the float maximum are
/// re-evaluated exactly.
const EXACT_WINDOW: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    #[serde(with = "crate::rational::serde_exact")]
    pub t: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub s: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub t0: Rational,
    /// `max(0, bound)` at `(s, t0)`.
    #[serde(with = "crate::rational::serde_exact")]
    pub value: Rational,
}

fn grid(lo: &Rational, hi: &Rational, n: usize) -> Vec<Rational> {
    let steps = int(n as i64 - 1);
    (0..n).map(|i| lo + (hi - lo) * int(i as i64) / &steps).collect()
}

/// Lower bound for `phi(t)` from the best point of a fixed grid.
///
/// The `s` grid comes from `search` and does not depend on `t`; the `t0`
/// candidates are the `t` grid of `search` restricted to `[0, t]`, plus `t`
/// itself. Because of that, the result is nondecreasing in `t`. No
/// refinement rounds are used.
pub fn phi_envelope(t: &Rational, e: &Rational, offsets: &[Rational], d: u32, search: &SearchParams) -> Result<EnvelopePoint> {
    search.validate()?;
    if t < &Rational::zero() || t > &Rational::one() {
        return Err(Error::InvalidArgument(format!("t = {t} outside [0, 1]")));
    }
    let s_grid = grid(&search.s_lo.clone().max(Rational::zero()), &search.s_hi, search.grid_s);
    let mut t0_grid: Vec<Rational> = grid(&Rational::zero(), &Rational::one(), search.grid_t)
        .into_iter()
        .filter(|x| x < t)
        .collect();
    t0_grid.push(t.clone());

    let float = Objective::Envelope {
        dim: d,
        e: e.clone(),
        offsets: offsets.to_vec(),
        t: t.clone(),
    }
    .float();
    let mut scored = Vec::with_capacity(s_grid.len() * t0_grid.len());
    for (i, s) in s_grid.iter().enumerate() {
        let sf = to_f64(s);
        for (j, t0) in t0_grid.iter().enumerate() {
            scored.push((float.eval(sf, to_f64(t0)), i, j));
        }
    }
    let top = scored.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);

    let mut best: Option<EnvelopePoint> = None;
    for &(value, i, j) in &scored {
        if value < top - EXACT_WINDOW {
            continue;
        }
        let point = EvalPoint::new(s_grid[i].clone(), t.clone(), t0_grid[j].clone())?;
        let exact = noroots_bound(e, offsets, d, &point)?;
        // scan order is (s asc, t0 asc), so strict > keeps the first tie
        if best.as_ref().map_or(true, |b| exact > b.value) {
            best = Some(EnvelopePoint {
                t: t.clone(),
                s: point.s,
                t0: point.t0,
                value: exact,
            });
        }
    }
    let mut best = best.expect("grid is nonempty");
    if best.value < Rational::zero() {
        best.value = Rational::zero();
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeCheck {
    pub monotone: bool,
    /// Slopes between consecutive samples are nonincreasing. The true `phi`
    /// is concave; a grid envelope need not be.
    pub concave: bool,
    /// Every sample is at most the value at the largest `t`.
    pub capped_by_last: bool,
}

/// Exact shape checks on envelope samples (sorted by `t` internally).
pub fn check_envelope(points: &[EnvelopePoint]) -> EnvelopeCheck {
    let mut pts: Vec<&EnvelopePoint> = points.iter().collect();
    pts.sort_by(|a, b| a.t.cmp(&b.t));
    let monotone = pts.windows(2).all(|w| w[0].value <= w[1].value);
    let slopes: Vec<Rational> = pts
        .windows(2)
        .filter(|w| w[1].t > w[0].t)
        .map(|w| (&w[1].value - &w[0].value) / (&w[1].t - &w[0].t))
        .collect();
    let concave = slopes.windows(2).all(|w| w[0] >= w[1]);
    let capped_by_last = match pts.last() {
        Some(last) => pts.iter().all(|p| p.value <= last.value),
        None => true,
    };
    EnvelopeCheck {
        monotone,
        concave,
        capped_by_last,
    }
}
