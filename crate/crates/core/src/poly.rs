//! Dense univariate polynomials over [`Rational`] and piecewise assemblies of
//! them on rational breakpoints.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// Coefficients indexed by degree. Trailing zeros are always stripped, so the
/// zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Polynomial {
    #[serde(with = "crate::rational::serde_exact::vec")]
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x - a`
    pub fn linear_root(a: Rational) -> Self {
        Self::new(vec![-a, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let coeffs: Vec<f64> = self.coeffs.iter().map(crate::rational::to_f64).collect();
        coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::constant(Rational::one());
        for _ in 0..exp {
            result = &result * self;
        }
        result
    }

    /// Returns `q(x) = p(x + shift)`.
    pub fn shift(&self, shift: &Rational) -> Self {
        let step = Self::new(vec![shift.clone(), Rational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &step) + &Self::constant(c.clone()))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// A function that is polynomial between consecutive breakpoints and constant
/// outside them.
///
/// `pieces[i]` is valid on `[breakpoints[i], breakpoints[i + 1]]`. At an
/// interior breakpoint the right-hand piece is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewisePolynomial {
    #[serde(with = "crate::rational::serde_exact::vec")]
    breakpoints: Vec<Rational>,
    pieces: Vec<Polynomial>,
    #[serde(with = "crate::rational::serde_exact")]
    left_tail: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    right_tail: Rational,
}

impl PiecewisePolynomial {
    /// Panics unless `breakpoints` is strictly increasing and there is exactly
    /// one piece per interval.
    pub fn new(
        breakpoints: Vec<Rational>,
        pieces: Vec<Polynomial>,
        left_tail: Rational,
        right_tail: Rational,
    ) -> Self {
        assert!(breakpoints.len() >= 2, "need at least one interval");
        assert_eq!(pieces.len() + 1, breakpoints.len(), "one piece per interval");
        assert!(
            breakpoints.windows(2).all(|w| w[0] < w[1]),
            "breakpoints must be strictly increasing"
        );
        PiecewisePolynomial {
            breakpoints,
            pieces,
            left_tail,
            right_tail,
        }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    pub fn left_tail(&self) -> &Rational {
        &self.left_tail
    }

    pub fn right_tail(&self) -> &Rational {
        &self.right_tail
    }

    /// Index of the piece covering `x`, or `None` when `x` is in a tail.
    pub fn piece_index(&self, x: &Rational) -> Option<usize> {
        let last = self.breakpoints.last().expect("nonempty");
        if x < &self.breakpoints[0] || x > last {
            return None;
        }
        // number of breakpoints <= x, minus one, clamped to the last piece
        let idx = self.breakpoints.partition_point(|b| b <= x) - 1;
        Some(idx.min(self.pieces.len() - 1))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        match self.piece_index(x) {
            Some(i) => self.pieces[i].eval(x),
            None if x < &self.breakpoints[0] => self.left_tail.clone(),
            None => self.right_tail.clone(),
        }
    }

    /// Piecewise derivative; constant tails differentiate to zero.
    pub fn derivative(&self) -> Self {
        PiecewisePolynomial {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(Polynomial::derivative).collect(),
            left_tail: Rational::zero(),
            right_tail: Rational::zero(),
        }
    }

    /// Exact check that neighbouring pieces (and the tails) meet at every
    /// breakpoint.
    pub fn is_continuous(&self) -> bool {
        let n = self.pieces.len();
        let first = &self.breakpoints[0];
        let last = &self.breakpoints[n];
        if self.pieces[0].eval(first) != self.left_tail || self.pieces[n - 1].eval(last) != self.right_tail {
            return false;
        }
        (1..n).all(|i| {
            let b = &self.breakpoints[i];
            self.pieces[i - 1].eval(b) == self.pieces[i].eval(b)
        })
    }

    /// Continuity of the function and its first derivative.
    pub fn is_c1(&self) -> bool {
        self.is_continuous() && self.derivative().is_continuous()
    }
}
