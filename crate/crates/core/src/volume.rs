//! Volume of the slice `{x in [0,1]^d : x_1 + ... + x_d <= s}`, i.e. the
//! Irwin-Hall CDF.
//!
//! The exact path evaluates the alternating sum over a common denominator in
//! big integers. The float path never touches that sum: each polynomial piece
//! is re-expanded about its left breakpoint once per dimension, and the left
//! half of the support is evaluated by Horner in the local variable, with
//! `nu(s) = 1 - nu(d - s)` covering the right half.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{PiecewisePolynomial, Polynomial};
use crate::rational::{self, int, Rational};

/// Largest dimension whose factorials are cached.
pub const MAX_CACHED_DIM: u32 = 64;

fn factorial_table() -> &'static [BigInt] {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(MAX_CACHED_DIM as usize + 1);
        table.push(BigInt::one());
        for n in 1..=MAX_CACHED_DIM {
            let next = &table[n as usize - 1] * n;
            table.push(next);
        }
        table
    })
}

pub fn factorial(n: u32) -> BigInt {
    match factorial_table().get(n as usize) {
        Some(f) => f.clone(),
        None => (MAX_CACHED_DIM + 1..=n).fold(factorial_table()[MAX_CACHED_DIM as usize].clone(), |acc, k| acc * k),
    }
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `sum_{j=0}^{floor(s)} (-1)^j C(d, j) (s - j)^power / power!` for `s`
/// strictly inside `(0, d)`, summed over the common denominator
/// `q^power * power!` where `s = p/q`.
///
/// `power = d` gives `nu_s`, `power = d - 1` its derivative.
fn alternating_sum(s: &Rational, d: u32, power: u32) -> Rational {
    let p = s.numer();
    let q = s.denom();
    let top = rational::floor_int(s).to_u32().expect("floor(s) fits in u32");
    let mut sum = BigInt::zero();
    for j in 0..=top.min(d) {
        let term = binomial(d, j) * num_traits::pow(p - q * BigInt::from(j), power as usize);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Rational::new(sum, num_traits::pow(q.clone(), power as usize) * factorial(power))
}

/// Exact `nu_s` in dimension `d`. Total: 0 for `s <= 0`, 1 for `s >= d`.
pub fn nu_exact(s: &Rational, d: u32) -> Rational {
    assert!(d >= 1, "dimension must be positive");
    if !s.is_positive() {
        return Rational::zero();
    }
    if s >= &int(d as i64) {
        return Rational::one();
    }
    alternating_sum(s, d, d)
}

/// Exact derivative of `nu_s` in `s`. Zero outside the open interval `(0, d)`;
/// at interior integer breakpoints the right-hand piece is used (the pieces
/// agree there for `d >= 2`).
pub fn nu_density(s: &Rational, d: u32) -> Rational {
    assert!(d >= 1, "dimension must be positive");
    if !s.is_positive() || s >= &int(d as i64) {
        return Rational::zero();
    }
    alternating_sum(s, d, d - 1)
}

/// `nu` in dimension `d` as a piecewise polynomial on the breakpoints
/// `0, 1, ..., d` with tails 0 and 1.
pub fn nu_piecewise(d: u32) -> PiecewisePolynomial {
    assert!(d >= 1, "dimension must be positive");
    let mut pieces = Vec::with_capacity(d as usize);
    let mut acc = Polynomial::zero();
    for i in 0..d {
        // (-1)^i (x - i)^d / (i! (d - i)!), expanded binomially
        let denom = factorial(i) * factorial(d - i);
        let shift = -BigInt::from(i);
        let coeffs = (0..=d)
            .map(|m| {
                let c = binomial(d, m) * num_traits::pow(shift.clone(), (d - m) as usize);
                let c = if i % 2 == 0 { c } else { -c };
                Rational::new(c, denom.clone())
            })
            .collect();
        acc = &acc + &Polynomial::new(coeffs);
        pieces.push(acc.clone());
    }
    PiecewisePolynomial::new(
        (0..=d).map(|j| int(j as i64)).collect(),
        pieces,
        Rational::zero(),
        Rational::one(),
    )
}

/// Float coefficients of each piece of `nu` re-expanded about its left
/// breakpoint. Only pieces covering `[0, d/2]` are needed.
#[derive(Debug, Clone)]
pub struct FloatNu {
    dim: u32,
    local: Vec<Vec<f64>>,
}

impl FloatNu {
    pub fn new(d: u32) -> Self {
        assert!(d >= 1, "dimension must be positive");
        let exact = nu_piecewise(d);
        let needed = (d as usize).div_ceil(2);
        let local = exact.pieces()[..needed]
            .iter()
            .enumerate()
            .map(|(j, piece)| {
                piece
                    .shift(&int(j as i64))
                    .coeffs()
                    .iter()
                    .map(rational::to_f64)
                    .collect()
            })
            .collect();
        FloatNu { dim: d, local }
    }

    /// Shared per-dimension table, built on first use.
    pub fn cached(d: u32) -> &'static FloatNu {
        static TABLES: [OnceLock<FloatNu>; MAX_CACHED_DIM as usize + 1] =
            [const { OnceLock::new() }; MAX_CACHED_DIM as usize + 1];
        assert!(
            (1..=MAX_CACHED_DIM).contains(&d),
            "float tables are cached for 1 <= d <= {MAX_CACHED_DIM}"
        );
        TABLES[d as usize].get_or_init(|| FloatNu::new(d))
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn eval(&self, s: f64) -> f64 {
        let d = self.dim as f64;
        if s.is_nan() {
            return f64::NAN;
        }
        if s <= 0.0 {
            return 0.0;
        }
        if s >= d {
            return 1.0;
        }
        if 2.0 * s > d {
            1.0 - self.eval_left(d - s)
        } else {
            self.eval_left(s)
        }
    }

    fn eval_left(&self, s: f64) -> f64 {
        let j = (s.floor() as usize).min(self.local.len() - 1);
        let u = s - j as f64;
        self.local[j].iter().rev().fold(0.0, |acc, c| acc * u + c)
    }
}

/// Float `nu_s`, within 1e-12 of [`nu_exact`] for `d <= 12`.
pub fn nu_float(s: f64, d: u32) -> f64 {
    if d <= MAX_CACHED_DIM {
        FloatNu::cached(d).eval(s)
    } else {
        FloatNu::new(d).eval(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, parse};

    #[test]
    fn trivial_values() {
        assert_eq!(nu_exact(&int(1), 7), frac(1, 5040));
        assert_eq!(nu_exact(&frac(7, 2), 7), frac(1, 2));
        assert_eq!(nu_exact(&frac(3, 2), 2), frac(7, 8));
        assert_eq!(nu_exact(&int(-1), 5), int(0));
        assert_eq!(nu_exact(&int(0), 5), int(0));
        assert_eq!(nu_exact(&int(9), 5), int(1));
        assert_eq!(nu_exact(&int(5), 5), int(1));
    }

    #[test]
    fn integer_s_needs_no_case_split() {
        // the j = s term vanishes, so inclusive floor agrees with the left piece
        let pw = nu_piecewise(7);
        for j in 1..7 {
            let s = int(j);
            assert_eq!(nu_exact(&s, 7), pw.pieces()[j as usize - 1].eval(&s));
        }
    }

    #[test]
    fn piecewise_small_dims() {
        let d1 = nu_piecewise(1);
        assert_eq!(d1.pieces(), &[Polynomial::new(vec![int(0), int(1)])]);
        assert_eq!(d1.left_tail(), &int(0));
        assert_eq!(d1.right_tail(), &int(1));

        let d2 = nu_piecewise(2);
        assert_eq!(d2.pieces()[0], Polynomial::new(vec![int(0), int(0), frac(1, 2)]));
        assert_eq!(d2.pieces()[1], Polynomial::new(vec![int(-1), int(2), frac(-1, 2)]));
    }

    #[test]
    fn piecewise_d7_is_continuous_and_c1() {
        let pw = nu_piecewise(7);
        assert_eq!(pw.pieces().len(), 7);
        assert!(pw.pieces().iter().all(|p| p.degree() == Some(7)));
        for j in 0..6 {
            let b = int(j + 1);
            assert_eq!(pw.pieces()[j as usize].eval(&b), pw.pieces()[j as usize + 1].eval(&b));
        }
        assert!(pw.is_c1());
    }

    #[test]
    fn density_values() {
        assert_eq!(nu_density(&frac(1, 2), 1), int(1));
        assert_eq!(nu_density(&int(1), 2), int(1));
        assert_eq!(nu_density(&int(0), 1), int(0));
        assert_eq!(nu_density(&int(3), 3), int(0));
        let middle = nu_piecewise(7).pieces()[3].derivative();
        let s = frac(7, 2);
        let rho = nu_density(&s, 7);
        assert!(rho.is_positive());
        assert_eq!(rho, middle.eval(&s));
    }

    #[test]
    fn float_path() {
        assert_eq!(nu_float(7.0, 7), 1.0);
        assert!((nu_float(3.5, 7) - 0.5).abs() < 1e-12);
        let s = parse("2.74118").unwrap();
        let exact = rational::to_f64(&nu_exact(&s, 7));
        assert!((nu_float(2.74118, 7) - exact).abs() < 1e-12);
        assert_eq!(nu_float(-0.3, 3), 0.0);
        assert!(nu_float(f64::NAN, 3).is_nan());
    }

    #[test]
    fn large_dimension_factorials() {
        assert_eq!(factorial(66), factorial(64) * 65 * 66);
        assert_eq!(binomial(70, 2), BigInt::from(2415));
        let s = int(35);
        assert_eq!(nu_exact(&s, 70), frac(1, 2));
        assert_eq!(nu_exact(&int(1), 70), Rational::new(BigInt::one(), factorial(70)));
    }
}
