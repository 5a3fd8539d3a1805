//! Float-path search for good witness points.
//!
//! The optimizer is a coarse grid scan followed by rounds of local rescans on
//! boxes that shrink by a factor of 5 around the incumbent. Grid cells are
//! evaluated in parallel; the reduction uses a total order (value descending,
//! then `s` ascending, then `t` ascending), so the result does not depend on
//! how the work is split.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundSpec, EvalPoint};
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};
use crate::volume::FloatNu;

/// Shrink factor applied to the search box each refinement round.
pub const SHRINK: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    #[serde(with = "crate::rational::serde_exact")]
    pub s_lo: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub s_hi: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub t_lo: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub t_hi: Rational,
    pub grid_s: usize,
    pub grid_t: usize,
    pub rounds: u32,
    pub max_denominator: u64,
}

impl SearchParams {
    /// Defaults: `s` in `[0, d + 1]`, `t` in `[0, 1]`, a 200 x 100 grid,
    /// three refinement rounds and witnesses with denominators up to 10^6.
    pub fn for_dim(d: u32) -> Self {
        SearchParams {
            s_lo: Rational::zero(),
            s_hi: int(d as i64 + 1),
            t_lo: Rational::zero(),
            t_hi: Rational::one(),
            grid_s: 200,
            grid_t: 100,
            rounds: 3,
            max_denominator: 1_000_000,
        }
    }

    pub fn with_ranges(mut self, s: (Rational, Rational), t: (Rational, Rational)) -> Self {
        (self.s_lo, self.s_hi) = s;
        (self.t_lo, self.t_hi) = t;
        self
    }

    pub fn with_grid(mut self, grid_s: usize, grid_t: usize) -> Self {
        self.grid_s = grid_s;
        self.grid_t = grid_t;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.s_lo > self.s_hi || self.t_lo > self.t_hi {
            return Err(Error::InvalidArgument("search ranges must be nonempty".into()));
        }
        if self.grid_s < 2 || self.grid_t < 2 {
            return Err(Error::InvalidArgument("grid counts must be at least 2".into()));
        }
        if self.max_denominator == 0 {
            return Err(Error::InvalidArgument("max denominator must be positive".into()));
        }
        Ok(())
    }

    fn float_ranges(&self) -> ((f64, f64), (f64, f64)) {
        let f = rational::to_f64;
        ((f(&self.s_lo), f(&self.s_hi)), (f(&self.t_lo), f(&self.t_hi)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub s: f64,
    pub t: f64,
    pub value: f64,
}

impl Candidate {
    /// Total order used everywhere a "best" point is chosen. `Greater` means
    /// `self` is preferred.
    pub fn preference(&self, other: &Candidate) -> Ordering {
        let v = |c: &Candidate| if c.value.is_nan() { f64::NEG_INFINITY } else { c.value };
        v(self)
            .total_cmp(&v(other))
            .then_with(|| other.s.total_cmp(&self.s))
            .then_with(|| other.t.total_cmp(&self.t))
    }

    fn better(self, other: Candidate) -> Candidate {
        if other.preference(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }
}

/// A bound with everything but the two search coordinates fixed.
///
/// The coordinates are always called `(s, t)`. For [`Objective::Envelope`]
/// the second coordinate is `t0` and `t` is a fixed parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    /// `H_e(s, t)`.
    HBound {
        dim: u32,
        #[serde(with = "crate::rational::serde_exact")]
        e: Rational,
    },
    General { spec: BoundSpec },
    /// `e (nu_s - mu nu_{s-1})`; the second coordinate is ignored.
    MuSmall {
        dim: u32,
        #[serde(with = "crate::rational::serde_exact")]
        e: Rational,
        mu: u64,
    },
    /// `min` of the worst-case (`mu = e - 2`) bound at `e_lo` and `e_hi`.
    RangeMin {
        dim: u32,
        k: u32,
        #[serde(with = "crate::rational::serde_exact")]
        e_lo: Rational,
        #[serde(with = "crate::rational::serde_exact")]
        e_hi: Rational,
    },
    /// Lower bound on `phi(t)` over `(s, t0)` for a fixed `t`.
    Envelope {
        dim: u32,
        #[serde(with = "crate::rational::serde_exact")]
        e: Rational,
        #[serde(with = "crate::rational::serde_exact::vec")]
        offsets: Vec<Rational>,
        #[serde(with = "crate::rational::serde_exact")]
        t: Rational,
    },
}

impl Objective {
    pub fn dim(&self) -> u32 {
        match self {
            Objective::HBound { dim, .. }
            | Objective::MuSmall { dim, .. }
            | Objective::RangeMin { dim, .. }
            | Objective::Envelope { dim, .. } => *dim,
            Objective::General { spec } => spec.dim,
        }
    }

    pub fn eval_exact(&self, s: &Rational, t: &Rational) -> Result<Rational> {
        match self {
            Objective::HBound { dim, e } => bounds::h_bound(e, *dim, s, t),
            Objective::General { spec } => bounds::general_bound(spec, s, t),
            Objective::MuSmall { dim, e, mu } => bounds::mu_small_bound(e, *mu, *dim, s),
            Objective::RangeMin { dim, k, e_lo, e_hi } => {
                if e_lo > e_hi {
                    return Err(Error::InvalidArgument(format!("empty range [{e_lo}, {e_hi}]")));
                }
                Ok(bounds::quadratic_in_e_k(*dim, *k, s, t).endpoint_min(e_lo, e_hi))
            }
            Objective::Envelope { dim, e, offsets, t: at } => {
                let point = EvalPoint::new(s.clone(), at.clone(), t.clone())?;
                bounds::noroots_bound(e, offsets, *dim, &point)
            }
        }
    }

    pub fn float(&self) -> FloatObjective {
        FloatObjective::new(self)
    }
}

/// Float-path evaluator with all parameters converted once.
#[derive(Debug, Clone)]
pub struct FloatObjective {
    nu: &'static FloatNu,
    kind: FloatKind,
}

#[derive(Debug, Clone)]
enum FloatKind {
    /// `1 - t * t_scale + e (nu_s - lag nu_{s-1} - halves nu_{s-1/2} - nu_{s-t})`
    Rooted { e: f64, lag: f64, halves: f64, t_scale: f64 },
    /// `a e^2 + b e + c` at two values of `e`, minimum taken.
    Parabola { k: f64, t_scale: f64, e_lo: f64, e_hi: f64 },
    MuSmall { e: f64, mu: f64 },
    Envelope { e: f64, offsets: Vec<f64>, t: f64 },
}

impl FloatObjective {
    fn new(objective: &Objective) -> Self {
        let f = rational::to_f64;
        let nu = FloatNu::cached(objective.dim());
        let kind = match objective {
            Objective::HBound { e, .. } => FloatKind::Parabola {
                k: 1.0,
                t_scale: 0.5,
                e_lo: f(e),
                e_hi: f(e),
            },
            Objective::General { spec } => FloatKind::Rooted {
                e: f(&spec.e),
                lag: spec.mu as f64 - spec.k as f64 - 1.0,
                halves: spec.k as f64,
                t_scale: 0.5f64.powi(spec.k as i32),
            },
            Objective::MuSmall { e, mu, .. } => FloatKind::MuSmall {
                e: f(e),
                mu: *mu as f64,
            },
            Objective::RangeMin { k, e_lo, e_hi, .. } => FloatKind::Parabola {
                k: *k as f64,
                t_scale: 0.5f64.powi(*k as i32),
                e_lo: f(e_lo),
                e_hi: f(e_hi),
            },
            Objective::Envelope { e, offsets, t, .. } => FloatKind::Envelope {
                e: f(e),
                offsets: offsets.iter().map(f).collect(),
                t: f(t),
            },
        };
        FloatObjective { nu, kind }
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        let nu = |x: f64| self.nu.eval(x);
        match &self.kind {
            FloatKind::Rooted { e, lag, halves, t_scale } => {
                1.0 - t * t_scale + e * (nu(s) - lag * nu(s - 1.0) - halves * nu(s - 0.5) - nu(s - t))
            }
            FloatKind::Parabola { k, t_scale, e_lo, e_hi } => {
                let lagged = nu(s - 1.0);
                let a = -lagged;
                let b = nu(s) + (k + 3.0) * lagged - k * nu(s - 0.5) - nu(s - t);
                let c = 1.0 - t * t_scale;
                let at = |e: f64| (a * e + b) * e + c;
                at(*e_lo).min(at(*e_hi))
            }
            FloatKind::MuSmall { e, mu } => e * (nu(s) - mu * nu(s - 1.0)),
            FloatKind::Envelope { e, offsets, t: at } => {
                let inner = nu(s) - offsets.iter().map(|o| nu(s - o)).sum::<f64>() - nu(s - t);
                at - t + e * inner
            }
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    }
}

fn scan<F>(f: &F, s: (f64, f64), t: (f64, f64), ns: usize, nt: usize) -> Candidate
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    (0..ns * nt)
        .into_par_iter()
        .map(|idx| {
            let si = linspace(s.0, s.1, ns, idx / nt);
            let ti = linspace(t.0, t.1, nt, idx % nt);
            Candidate {
                s: si,
                t: ti,
                value: f(si, ti),
            }
        })
        .reduce_with(Candidate::better)
        .expect("grid is nonempty")
}

fn shrink_box(center: f64, width: f64, range: (f64, f64)) -> (f64, f64) {
    let lo = (center - width / 2.0).max(range.0);
    let hi = (center + width / 2.0).min(range.1);
    (lo, hi)
}

/// Grid scan plus shrinking-box refinement on an arbitrary float objective.
pub fn optimize_with<F>(f: F, params: &SearchParams) -> Result<Candidate>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    params.validate()?;
    let (s_range, t_range) = params.float_ranges();
    let (ns, nt) = (params.grid_s, params.grid_t);
    let mut best = scan(&f, s_range, t_range, ns, nt);
    let mut width_s = s_range.1 - s_range.0;
    let mut width_t = t_range.1 - t_range.0;
    for _ in 0..params.rounds {
        width_s /= SHRINK;
        width_t /= SHRINK;
        let local = scan(
            &f,
            shrink_box(best.s, width_s, s_range),
            shrink_box(best.t, width_t, t_range),
            ns,
            nt,
        );
        best = best.better(local);
    }
    Ok(best)
}

pub fn optimize_bound(objective: &Objective, params: &SearchParams) -> Result<Candidate> {
    let float = objective.float();
    optimize_with(|s, t| float.eval(s, t), params)
}

/// Best rational approximation of `x` with denominator at most
/// `max_denominator`, via continued fractions and a final semiconvergent
/// check. Ties go to the smaller denominator.
pub fn rationalize(x: f64, max_denominator: u64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    if max_denominator == 0 {
        return Err(Error::InvalidArgument("max denominator must be positive".into()));
    }
    best_approximation(&rational::from_f64_exact(x)?, &BigInt::from(max_denominator))
}

/// Best approximation of an exact rational with bounded denominator.
pub fn best_approximation(target: &Rational, max_denominator: &BigInt) -> Result<Rational> {
    if target.denom() <= max_denominator {
        return Ok(target.clone());
    }
    // convergents p/q, with (p_prev, q_prev) the one before
    let (mut p_prev, mut q_prev) = (BigInt::zero(), BigInt::one());
    let (mut p, mut q) = (BigInt::one(), BigInt::zero());
    let mut num = target.numer().clone();
    let mut den = target.denom().clone();
    loop {
        let (a, r) = num.div_mod_floor(&den);
        let q_next = &a * &q + &q_prev;
        if &q_next > max_denominator {
            let steps = (max_denominator - &q_prev) / &q;
            let semi = Rational::new(&steps * &p + &p_prev, &steps * &q + &q_prev);
            let conv = Rational::new(p.clone(), q.clone());
            let err_semi = (&semi - target).abs();
            let err_conv = (&conv - target).abs();
            return Ok(if err_semi < err_conv { semi } else { conv });
        }
        let p_next = &a * &p + &p_prev;
        (p_prev, q_prev, p, q) = (p, q, p_next, q_next);
        if r.is_zero() {
            return Ok(Rational::new(p, q));
        }
        (num, den) = (den, r);
    }
}
