//! Exact certificates at rational witness points, and coverings of integer
//! multiplicity ranges by such certificates.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::bounds::{quadratic_in_e_k, Quadratic};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::search::{optimize_bound, rationalize, Candidate, Objective, SearchParams};

/// A witness `(s, t)` with the exact value of an objective there and the
/// verdict `value > target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub objective: Objective,
    #[serde(with = "crate::rational::serde_exact")]
    pub s: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub t: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub value: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub target: Rational,
    pub verdict: bool,
}

impl Certificate {
    /// Re-evaluates from scratch; true when the stored value and verdict are
    /// reproduced exactly.
    pub fn recheck(&self) -> Result<bool> {
        let value = self.objective.eval_exact(&self.s, &self.t)?;
        Ok(value == self.value && (value > self.target) == self.verdict)
    }
}

pub fn certify_point(objective: &Objective, s: &Rational, t: &Rational, target: &Rational) -> Result<Certificate> {
    let value = objective.eval_exact(s, t)?;
    Ok(Certificate {
        objective: objective.clone(),
        s: s.clone(),
        t: t.clone(),
        verdict: value > *target,
        value,
        target: target.clone(),
    })
}

fn clamp(x: Rational, lo: &Rational, hi: &Rational) -> Rational {
    if &x < lo {
        lo.clone()
    } else if &x > hi {
        hi.clone()
    } else {
        x
    }
}

/// Rational witness for a float candidate, kept inside the search box.
pub fn rational_witness(candidate: &Candidate, params: &SearchParams) -> Result<(Rational, Rational)> {
    let s = rationalize(candidate.s, params.max_denominator)?;
    let t = rationalize(candidate.t, params.max_denominator)?;
    Ok((
        clamp(s, &params.s_lo, &params.s_hi),
        clamp(t, &params.t_lo, &params.t_hi),
    ))
}

/// Optimize on the float path, then certify at the rationalized optimum.
pub fn search_and_certify(objective: &Objective, params: &SearchParams, target: &Rational) -> Result<(Candidate, Certificate)> {
    let candidate = optimize_bound(objective, params)?;
    let (s, t) = rational_witness(&candidate, params)?;
    let certificate = certify_point(objective, &s, &t, target)?;
    Ok((candidate, certificate))
}

/// One certified block `[e1, e2]` of a covering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageInterval {
    pub e1: u64,
    pub e2: u64,
    #[serde(with = "crate::rational::serde_exact")]
    pub s0: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub t0: Rational,
    /// The worst-case bound at `(s0, t0)` as a parabola in `e`.
    pub quadratic: Quadratic,
    /// Vertex of the parabola, absent when it is linear in `e`.
    #[serde(with = "crate::rational::serde_exact::option")]
    pub e_max: Option<Rational>,
    /// `min(H_{e1}, H_{e2})` at `(s0, t0)`.
    #[serde(with = "crate::rational::serde_exact")]
    pub certified_min: Rational,
}

impl CoverageInterval {
    /// Builds the interval and recomputes everything exactly from `(s0, t0)`.
    pub fn new(dim: u32, k: u32, e1: u64, e2: u64, s0: Rational, t0: Rational) -> Self {
        let quadratic = quadratic_in_e_k(dim, k, &s0, &t0);
        let certified_min = quadratic.endpoint_min(&int(e1 as i64), &int(e2 as i64));
        CoverageInterval {
            e1,
            e2,
            e_max: quadratic.vertex().ok(),
            certified_min,
            quadratic,
            s0,
            t0,
        }
    }

    /// Exact value of the bound at integer `e`.
    pub fn value_at(&self, e: u64) -> Rational {
        self.quadratic.eval(&int(e as i64))
    }
}

/// An integer multiplicity for which no certificate was found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageGap {
    pub e: u64,
    /// Best float value the optimizer reached for this single `e`, if it ran.
    pub best_value: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveragePlan {
    pub dim: u32,
    pub k: u32,
    #[serde(with = "crate::rational::serde_exact")]
    pub target: Rational,
    pub e_lo: u64,
    pub e_hi: u64,
    pub intervals: Vec<CoverageInterval>,
    pub gaps: Vec<CoverageGap>,
}

impl CoveragePlan {
    pub fn is_complete(&self) -> bool {
        self.gaps.is_empty()
    }

    /// Number of integer `e` covered by certified intervals.
    pub fn covered_count(&self) -> u64 {
        self.intervals.iter().map(|iv| iv.e2 - iv.e1 + 1).sum()
    }

    /// Independent exact re-verification of every interval: the quadratic is
    /// rebuilt from `(s0, t0)`, must open downward, and both endpoint values
    /// must exceed the target. Intervals and gaps must tile `[e_lo, e_hi]`.
    pub fn verify(&self) -> Result<bool> {
        for iv in &self.intervals {
            let rebuilt = CoverageInterval::new(self.dim, self.k, iv.e1, iv.e2, iv.s0.clone(), iv.t0.clone());
            if &rebuilt != iv || rebuilt.quadratic.a.is_positive() || rebuilt.certified_min <= self.target {
                return Ok(false);
            }
            if iv.e1 < self.k as u64 + 3 {
                return Ok(false);
            }
        }
        let mut covered: Vec<(u64, u64)> = self
            .intervals
            .iter()
            .map(|iv| (iv.e1, iv.e2))
            .chain(self.gaps.iter().map(|g| (g.e, g.e)))
            .collect();
        covered.sort_unstable();
        if self.e_lo > self.e_hi {
            return Ok(covered.is_empty());
        }
        let mut next = self.e_lo;
        for (lo, hi) in covered {
            if lo != next || hi < lo {
                return Ok(false);
            }
            next = hi + 1;
        }
        Ok(next == self.e_hi + 1)
    }
}

/// Multipliers applied to the left endpoint to pick the partner `e` for the
/// two-endpoint optimization.
const SPAN_FACTORS: [f64; 7] = [1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0];

/// Greedy covering of `[e_lo, e_hi]` by certified intervals for the
/// worst-case bound (`mu = e - 2`) with `k` roots.
///
/// From the current left endpoint `e1`, each partner `e_mid = e1 * factor`
/// gets a witness `(s0, t0)` maximizing `min(H_{e1}, H_{e_mid})`; a binary
/// search then extends the right endpoint as far as the certificate allows,
/// and the partner giving the longest interval wins. Where even the
/// single-`e` certificate fails, a gap is recorded and the scan moves on.
pub fn cover_range(dim: u32, k: u32, e_lo: u64, e_hi: u64, target: &Rational, params: &SearchParams) -> Result<CoveragePlan> {
    params.validate()?;
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut plan = CoveragePlan {
        dim,
        k,
        target: target.clone(),
        e_lo,
        e_hi,
        intervals: Vec::new(),
        gaps: Vec::new(),
    };
    let min_e = k as u64 + 3;
    let mut e1 = e_lo;
    while e1 <= e_hi {
        if e1 < min_e {
            plan.gaps.push(CoverageGap {
                e: e1,
                best_value: None,
                reason: format!("mu = e - 2 = {} does not exceed k = {k}", e1 as i64 - 2),
            });
            e1 += 1;
            continue;
        }
        match best_interval(dim, k, e1, e_hi, target, params)? {
            Ok(interval) => {
                e1 = interval.e2 + 1;
                plan.intervals.push(interval);
            }
            Err(best_value) => {
                plan.gaps.push(CoverageGap {
                    e: e1,
                    best_value: Some(best_value),
                    reason: "no certificate found for this multiplicity".into(),
                });
                e1 += 1;
            }
        }
    }
    Ok(plan)
}

/// The longest certified interval starting at `e1`, or the best single-`e`
/// float value when nothing certifies.
fn best_interval(
    dim: u32,
    k: u32,
    e1: u64,
    e_hi: u64,
    target: &Rational,
    params: &SearchParams,
) -> Result<std::result::Result<CoverageInterval, f64>> {
    let mut partners: Vec<u64> = SPAN_FACTORS
        .iter()
        .map(|f| ((e1 as f64 * f).round() as u64).clamp(e1, e_hi))
        .collect();
    partners.dedup();

    let mut best: Option<CoverageInterval> = None;
    let mut single_value = f64::NEG_INFINITY;
    for mid in partners {
        let objective = Objective::RangeMin {
            dim,
            k,
            e_lo: int(e1 as i64),
            e_hi: int(mid as i64),
        };
        let candidate = optimize_bound(&objective, params)?;
        if mid == e1 {
            single_value = candidate.value;
        }
        let (s0, t0) = rational_witness(&candidate, params)?;
        let quadratic = quadratic_in_e_k(dim, k, &s0, &t0);
        let certifies = |e: u64| quadratic.eval(&int(e as i64)) > *target;
        if !certifies(e1) || !certifies(mid) {
            continue;
        }
        // superlevel sets of a concave parabola are intervals, so the
        // predicate is monotone to the right of mid
        let (mut lo, mut hi) = (mid, e_hi);
        while lo < hi {
            let probe = lo + (hi - lo).div_ceil(2);
            if certifies(probe) {
                lo = probe;
            } else {
                hi = probe - 1;
            }
        }
        let interval = CoverageInterval::new(dim, k, e1, lo, s0, t0);
        debug_assert!(!interval.quadratic.a.is_positive() && interval.certified_min > *target);
        if best.as_ref().map_or(true, |b| interval.e2 > b.e2) {
            best = Some(interval);
        }
        if lo == e_hi {
            break;
        }
    }
    Ok(best.ok_or(single_value))
}

/// Sanity helper for callers holding a plan from elsewhere: exact bound at
/// every integer of a small interval.
pub fn spot_check(interval: &CoverageInterval, es: impl IntoIterator<Item = u64>) -> bool {
    es.into_iter()
        .all(|e| e >= interval.e1 && e <= interval.e2 && interval.value_at(e) >= interval.certified_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, parse};

    #[test]
    fn certify_examples() {
        let target = frac(71, 67);
        let h6 = Objective::HBound { dim: 7, e: int(6) };
        let cert = certify_point(&h6, &parse("2.84243").unwrap(), &frac(4, 5), &target).unwrap();
        assert!(cert.verdict);
        assert!(cert.recheck().unwrap());

        let cert = certify_point(&h6, &int(0), &int(0), &target).unwrap();
        assert!(!cert.verdict);
        assert_eq!(cert.value, int(1));
        assert!(cert.recheck().unwrap());

        let spec = crate::bounds::BoundSpec::new(8, int(21), 19, 4).unwrap();
        let cert = certify_point(
            &Objective::General { spec },
            &parse("2.17991").unwrap(),
            &parse("0.706957").unwrap(),
            &frac(8341, 8064),
        )
        .unwrap();
        assert!(cert.verdict);
    }

    #[test]
    fn tampered_certificate_fails_recheck() {
        let h6 = Objective::HBound { dim: 7, e: int(6) };
        let mut cert = certify_point(&h6, &frac(14, 5), &frac(4, 5), &frac(71, 67)).unwrap();
        cert.value += frac(1, 1_000_000_000);
        assert!(!cert.recheck().unwrap());
    }

    #[test]
    fn single_point_cover() {
        let params = SearchParams::for_dim(7);
        let plan = cover_range(7, 1, 7, 7, &frac(71, 67), &params).unwrap();
        assert!(plan.is_complete());
        assert_eq!(plan.intervals.len(), 1);
        let iv = &plan.intervals[0];
        assert_eq!((iv.e1, iv.e2), (7, 7));
        assert!(crate::rational::to_f64(&iv.certified_min) >= 1.06046);
        assert!(plan.verify().unwrap());
    }

    #[test]
    fn small_e_below_k_is_a_gap() {
        let params = SearchParams::for_dim(8).with_grid(20, 10);
        let plan = cover_range(8, 4, 6, 6, &frac(8341, 8064), &params).unwrap();
        assert_eq!(plan.gaps.len(), 1);
        assert_eq!(plan.gaps[0].best_value, None);
        assert!(plan.verify().unwrap());
    }

    #[test]
    fn verify_detects_overlap_and_bad_min() {
        let params = SearchParams::for_dim(7);
        let mut plan = cover_range(7, 1, 7, 8, &frac(71, 67), &params).unwrap();
        assert!(plan.verify().unwrap());
        let mut dup = plan.clone();
        dup.intervals.push(dup.intervals[0].clone());
        assert!(!dup.verify().unwrap());
        plan.intervals[0].certified_min = int(2);
        assert!(!plan.verify().unwrap());
    }
}
