//! Target constants: the coefficients `m_d` of `sec x + tan x`, the closed
//! form of `e_HK` for the dimension-7 quadric, and the large-`e` cutoff.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{self, frac, int, Rational};
use crate::volume::factorial;

/// Zigzag (Euler up/down) numbers `Z_0..=Z_n` by the boustrophedon
/// (Seidel-Entringer) triangle.
pub fn zigzag_numbers(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    let mut row = vec![BigInt::one()];
    for _ in 1..=n {
        // next row: starts at 0 and accumulates the previous row reversed
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::zero());
        for prev in row.iter().rev() {
            let value = next.last().unwrap() + prev;
            next.push(value);
        }
        out.push(next.last().unwrap().clone());
        row = next;
    }
    out
}

/// `m_1, ..., m_{n_max}` where `sec x + tan x = 1 + sum m_d x^d`.
pub fn m_coeffs(n_max: usize) -> Result<Vec<Rational>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    Ok(zigzag_numbers(n_max)
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(d, z)| Rational::new(z, factorial(d as u32)))
        .collect())
}

pub fn m_coeff(d: usize) -> Result<Rational> {
    Ok(m_coeffs(d)?.pop().expect("nonempty"))
}

fn quadric_numerator() -> Polynomial {
    Polynomial::new(vec![int(192), int(0), int(304), int(0), int(332)])
}

fn quadric_denominator() -> Polynomial {
    Polynomial::new(vec![int(168), int(0), int(273), int(0), int(315)])
}

/// `e_HK(R_{p,7}) = (332p^4 + 304p^2 + 192) / (315p^4 + 273p^2 + 168)`.
pub fn ehk_quadric_dim7(p: &Rational) -> Result<Rational> {
    if p < &int(3) {
        return Err(Error::InvalidArgument(format!("need p >= 3, got {p}")));
    }
    Ok(quadric_numerator().eval(p) / quadric_denominator().eval(p))
}

/// Limit of the quadric value as `p -> infinity`.
pub fn quadric_limit_dim7() -> Rational {
    frac(332, 315)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricIdentities {
    /// `e_HK - 332/315 = (244p^2+224)/(4725p^4+4025p^2+2520)` with the
    /// coefficients exactly as commonly quoted.
    pub decomposition_as_printed: bool,
    /// The same decomposition with the denominator forced by exact algebra.
    pub decomposition_corrected: bool,
    pub corrected_denominator: Polynomial,
    /// `d/dp e_HK = -(488p^5+896p^3+128p)/(4725p^8+8190p^6+8589p^4+4368p^2+1344)`.
    pub derivative_identity: bool,
    /// `21 * (4725p^8 + ... + 1344) = (315p^4+273p^2+168)^2`.
    pub derivative_denominator_is_scaled_square: bool,
    pub derivative_negative_at_3: bool,
    /// Strict decrease over consecutive odd `p` in `[3, 199]`.
    pub strictly_decreasing: bool,
}

impl QuadricIdentities {
    pub fn all_hold(&self) -> bool {
        self.decomposition_as_printed
            && self.decomposition_corrected
            && self.derivative_identity
            && self.derivative_denominator_is_scaled_square
            && self.derivative_negative_at_3
            && self.strictly_decreasing
    }
}

fn ints(cs: &[i64]) -> Polynomial {
    Polynomial::new(cs.iter().map(|&c| int(c)).collect())
}

/// Checks the closed form's identities by polynomial cross-multiplication.
pub fn verify_quadric_identities() -> QuadricIdentities {
    let num = quadric_numerator();
    let den = quadric_denominator();
    let excess = ints(&[224, 0, 244]);
    // num/den - 332/315 = (315 num - 332 den) / (315 den)
    let lhs_num = &num.scale(&int(315)) - &den.scale(&int(332));
    let lhs_den = den.scale(&int(315));
    let holds = |rhs_den: &Polynomial| &lhs_num * rhs_den == &excess * &lhs_den;

    let printed = ints(&[2520, 0, 4025, 0, 4725]);
    // lhs_num is 21 * excess, so the forced denominator is lhs_den / 21
    let corrected = lhs_den.scale(&frac(1, 21));

    let deriv_num = &(&num.derivative() * &den) - &(&num * &den.derivative());
    let deriv_den = &den * &den;
    let footnote_num = ints(&[0, -128, 0, -896, 0, -488]);
    let footnote_den = ints(&[1344, 0, 4368, 0, 8589, 0, 8190, 0, 4725]);
    let derivative_identity = &deriv_num * &footnote_den == &footnote_num * &deriv_den;

    let three = int(3);
    let derivative_negative_at_3 = deriv_num.eval(&three) / deriv_den.eval(&three) < Rational::zero();

    let values: Vec<Rational> = (3..=199)
        .step_by(2)
        .map(|p| ehk_quadric_dim7(&int(p)).expect("p >= 3"))
        .collect();
    let strictly_decreasing = values.windows(2).all(|w| w[0] > w[1]);

    QuadricIdentities {
        decomposition_as_printed: holds(&printed),
        decomposition_corrected: holds(&corrected),
        corrected_denominator: corrected,
        derivative_identity,
        derivative_denominator_is_scaled_square: footnote_den.scale(&int(21)) == deriv_den,
        derivative_negative_at_3,
        strictly_decreasing,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `1 + m_d`.
    Series,
    /// Closed form for the dimension-7 quadric at a given characteristic.
    ClosedFormD7,
    UserSupplied,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetValue {
    pub dim: u32,
    pub characteristic: Option<u64>,
    #[serde(with = "crate::rational::serde_exact")]
    pub value: Rational,
    pub provenance: Provenance,
}

impl TargetValue {
    pub fn user(dim: u32, value: Rational) -> Self {
        TargetValue {
            dim,
            characteristic: None,
            value,
            provenance: Provenance::UserSupplied,
        }
    }
}

fn is_odd_prime(p: u64) -> bool {
    p >= 3 && p % 2 == 1 && (3..).step_by(2).take_while(|f| f * f <= p).all(|f| p % f != 0)
}

/// The conjectured lower bound for dimension `d`: the quadric closed form at
/// characteristic `p` when given (only `d = 7`), otherwise `1 + m_d`.
pub fn wy_target(d: u32, p: Option<u64>) -> Result<TargetValue> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    match p {
        Some(_) if d != 7 => Err(Error::NoClosedForm(d)),
        Some(p) => {
            if !is_odd_prime(p) {
                return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
            }
            Ok(TargetValue {
                dim: d,
                characteristic: Some(p),
                value: ehk_quadric_dim7(&int(p as i64))?,
                provenance: Provenance::ClosedFormD7,
            })
        }
        None => Ok(TargetValue {
            dim: d,
            characteristic: None,
            value: Rational::one() + m_coeff(d as usize)?,
            provenance: Provenance::Series,
        }),
    }
}

/// `floor(target * d!)`: every integer `e` above it has `e / d! > target`.
pub fn large_e_threshold(d: u32, target: &Rational) -> Result<u64> {
    let scaled = target * Rational::from_integer(factorial(d));
    rational::floor_int(&scaled)
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("threshold for target {target} out of range")))
}
