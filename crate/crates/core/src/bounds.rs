//! Exact evaluation of the Hilbert-Kunz lower-bound families.
//!
//! All functions take exact rationals and return exact rationals; nothing in
//! this module rounds.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{half, int, pow2, Rational};
use crate::volume::nu_exact;

/// An order value `t_i` repeated `multiplicity` times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderValue {
    pub multiplicity: u32,
    #[serde(with = "crate::rational::serde_exact")]
    pub offset: Rational,
}

/// Ring parameters feeding one instance of the bound family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub dim: u32,
    /// Hilbert-Samuel multiplicity; rational so the bound can be studied as a
    /// function of a continuous `e`.
    #[serde(with = "crate::rational::serde_exact")]
    pub e: Rational,
    pub mu: u64,
    /// Number of adjoined square roots.
    pub k: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order_values: Vec<OrderValue>,
}

impl BoundSpec {
    pub fn new(dim: u32, e: Rational, mu: u64, k: u32) -> Result<Self> {
        let spec = BoundSpec {
            dim,
            e,
            mu,
            k,
            order_values: Vec::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The worst case `mu = e - 2` used when `mu` is only known to satisfy
    /// `mu <= e - 2`.
    pub fn worst_case(dim: u32, e: u64, k: u32) -> Result<Self> {
        let mu = e
            .checked_sub(2)
            .ok_or_else(|| Error::InvalidSpec(format!("e = {e} leaves no room for mu = e - 2")))?;
        Self::new(dim, int(e as i64), mu, k)
    }

    pub fn with_order_values(mut self, order_values: Vec<OrderValue>) -> Result<Self> {
        self.order_values = order_values;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidSpec("dimension must be at least 1".into()));
        }
        if !self.e.is_positive() {
            return Err(Error::InvalidSpec("multiplicity e must be positive".into()));
        }
        if self.mu == 0 {
            return Err(Error::InvalidSpec("mu must be positive".into()));
        }
        if self.k >= 1 && self.mu < self.k as u64 + 1 {
            return Err(Error::InvalidSpec(format!(
                "need mu > k (mu = {}, k = {})",
                self.mu, self.k
            )));
        }
        for ov in &self.order_values {
            check_offset(&ov.offset)?;
        }
        Ok(())
    }

    /// The order values expanded into a flat list of offsets.
    pub fn offsets(&self) -> Vec<Rational> {
        self.order_values
            .iter()
            .flat_map(|ov| std::iter::repeat(ov.offset.clone()).take(ov.multiplicity as usize))
            .collect()
    }
}

fn check_offset(offset: &Rational) -> Result<()> {
    if offset.is_negative() || offset > &Rational::one() {
        return Err(Error::InvalidArgument(format!("offset {offset} outside [0, 1]")));
    }
    Ok(())
}

fn check_s(s: &Rational) -> Result<()> {
    if s.is_negative() {
        return Err(Error::InvalidArgument(format!("s = {s} must be >= 0")));
    }
    Ok(())
}

fn check_t(t: &Rational) -> Result<()> {
    if t.is_negative() || t > &Rational::one() {
        return Err(Error::InvalidArgument(format!("t = {t} outside [0, 1]")));
    }
    Ok(())
}

/// `(s, t, t0)` with `0 <= t0 <= t <= 1` and `s >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPoint {
    #[serde(with = "crate::rational::serde_exact")]
    pub s: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub t: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub t0: Rational,
}

impl EvalPoint {
    pub fn new(s: Rational, t: Rational, t0: Rational) -> Result<Self> {
        check_s(&s)?;
        check_t(&t)?;
        if t0.is_negative() || t0 > t {
            return Err(Error::InvalidArgument(format!("need 0 <= t0 <= t, got t0 = {t0}, t = {t}")));
        }
        Ok(EvalPoint { s, t, t0 })
    }

    /// `t0 = t`.
    pub fn diagonal(s: Rational, t: Rational) -> Result<Self> {
        Self::new(s, t.clone(), t)
    }
}

/// `t - t0 + e (nu_s - sum_k nu_{s - t_k} - nu_{s - t0})`.
///
/// `offsets` are `t_2, ..., t_r`. At `t = 1` this is the lower bound on
/// `e_HK(R)` itself.
pub fn noroots_bound(e: &Rational, offsets: &[Rational], d: u32, point: &EvalPoint) -> Result<Rational> {
    for t in offsets {
        check_offset(t)?;
    }
    let s = &point.s;
    let mut inner = nu_exact(s, d) - nu_exact(&(s - &point.t0), d);
    for t in offsets {
        inner -= nu_exact(&(s - t), d);
    }
    Ok(&point.t - &point.t0 + e * inner)
}

/// The bracket `nu_s - (mu - k - 1) nu_{s-1} - k nu_{s-1/2} - nu_{s-t}`.
fn root_bracket(spec: &BoundSpec, s: &Rational, t: &Rational) -> Rational {
    let d = spec.dim;
    let k = int(spec.k as i64);
    let lag = Rational::from_integer(spec.mu.into()) - &k - Rational::one();
    nu_exact(s, d) - lag * nu_exact(&(s - Rational::one()), d) - k * nu_exact(&(s - half()), d) - nu_exact(&(s - t), d)
}

/// Lower bound on `e_HK(R)` after adjoining `k` square roots:
/// `1 - t/2^k + e (nu_s - (mu-k-1) nu_{s-1} - k nu_{s-1/2} - nu_{s-t})`.
pub fn general_bound(spec: &BoundSpec, s: &Rational, t: &Rational) -> Result<Rational> {
    spec.validate()?;
    check_s(s)?;
    check_t(t)?;
    Ok(Rational::one() - t / pow2(spec.k) + &spec.e * root_bracket(spec, s, t))
}

/// The same bound stated for the extension `S` before rescaling by `1/2^k`:
/// `1 - t + 2^k e (...)`. Requires `k >= 1`.
pub fn s_bound(spec: &BoundSpec, s: &Rational, t: &Rational) -> Result<Rational> {
    if spec.k == 0 {
        return Err(Error::InvalidSpec("s_bound needs k >= 1".into()));
    }
    spec.validate()?;
    check_s(s)?;
    check_t(t)?;
    Ok(Rational::one() - t + pow2(spec.k) * &spec.e * root_bracket(spec, s, t))
}

/// `H_e(s, t)`: the `k = 1` bound at the worst case `mu = e - 2`, evaluated
/// through its quadratic form so that rational `e` is allowed.
pub fn h_bound(e: &Rational, d: u32, s: &Rational, t: &Rational) -> Result<Rational> {
    if e < &int(4) {
        return Err(Error::InvalidArgument(format!("h_bound needs e >= 4, got {e}")));
    }
    check_s(s)?;
    check_t(t)?;
    Ok(quadratic_in_e_k(d, 1, s, t).eval(e))
}

/// Coefficients of the worst-case bound as a polynomial `a e^2 + b e + c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadratic {
    #[serde(with = "crate::rational::serde_exact")]
    pub a: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub b: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub c: Rational,
}

impl Quadratic {
    pub fn eval(&self, e: &Rational) -> Rational {
        (&self.a * e + &self.b) * e + &self.c
    }

    /// `-b / (2a)`.
    pub fn vertex(&self) -> Result<Rational> {
        if self.a.is_zero() {
            return Err(Error::LinearInE);
        }
        Ok(-&self.b / (int(2) * &self.a))
    }

    /// Minimum over `[e1, e2]`. Only valid as a lower bound on the whole
    /// interval when `a <= 0`, which holds for every quadratic built here.
    pub fn endpoint_min(&self, e1: &Rational, e2: &Rational) -> Rational {
        debug_assert!(!self.a.is_positive());
        let lo = self.eval(e1);
        let hi = self.eval(e2);
        if lo <= hi {
            lo
        } else {
            hi
        }
    }
}

/// `H_e` as a parabola in `e` for fixed `(s, t)`.
pub fn quadratic_in_e(d: u32, s: &Rational, t: &Rational) -> Quadratic {
    quadratic_in_e_k(d, 1, s, t)
}

/// Worst-case (`mu = e - 2`) bound for general `k` as a parabola in `e`:
/// `a = -nu_{s-1}`, `b = nu_s + (k+3) nu_{s-1} - k nu_{s-1/2} - nu_{s-t}`,
/// `c = 1 - t/2^k`.
pub fn quadratic_in_e_k(d: u32, k: u32, s: &Rational, t: &Rational) -> Quadratic {
    let one = Rational::one();
    let nu_s = nu_exact(s, d);
    let nu_lag = nu_exact(&(s - &one), d);
    let nu_half = nu_exact(&(s - half()), d);
    let nu_t = nu_exact(&(s - t), d);
    let kq = int(k as i64);
    Quadratic {
        a: -nu_lag.clone(),
        b: nu_s + (&kq + int(3)) * nu_lag - kq * nu_half - nu_t,
        c: one - t / pow2(k),
    }
}

/// Location of the vertex of `e -> H_e(s0, t0)`.
pub fn e_max(d: u32, s0: &Rational, t0: &Rational) -> Result<Rational> {
    quadratic_in_e(d, s0, t0).vertex()
}

/// `min(H_{e1}, H_{e2})` at `(s0, t0)`, a lower bound for `H_e` on all of
/// `[e1, e2]` because the parabola opens downward.
pub fn range_min(d: u32, e1: &Rational, e2: &Rational, s0: &Rational, t0: &Rational) -> Result<Rational> {
    if e1 > e2 {
        return Err(Error::InvalidArgument(format!("empty range [{e1}, {e2}]")));
    }
    Ok(h_bound(e1, d, s0, t0)?.min(h_bound(e2, d, s0, t0)?))
}

/// `e (nu_s - mu nu_{s-1})`, the bound used for small `mu`.
pub fn mu_small_bound(e: &Rational, mu: u64, d: u32, s: &Rational) -> Result<Rational> {
    check_s(s)?;
    let mu = Rational::from_integer(mu.into());
    Ok(e * (nu_exact(s, d) - mu * nu_exact(&(s - Rational::one()), d)))
}

/// `1 + 1/2^k`, valid whenever the extension with `k` roots fails to be
/// normal.
pub fn not_normal_bound(k: u32) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidArgument("not_normal_bound needs k >= 1".into()));
    }
    Ok(Rational::one() + Rational::one() / pow2(k))
}
