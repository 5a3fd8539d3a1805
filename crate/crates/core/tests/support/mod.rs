//! Test-only oracles, written without touching the crate's own polynomial or
//! volume code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Coefficients by degree.
type Poly = Vec<Q>;

fn eval(p: &Poly, x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn add(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_else(Q::zero) + b.get(i).cloned().unwrap_or_else(Q::zero))
        .collect()
}

fn neg(a: &Poly) -> Poly {
    a.iter().map(|c| -c).collect()
}

fn antiderivative(p: &Poly) -> Poly {
    std::iter::once(Q::zero())
        .chain(p.iter().enumerate().map(|(i, c)| c / qi(i as i64 + 1)))
        .collect()
}

/// `p(x - 1)`
fn shift_down(p: &Poly) -> Poly {
    let mut out: Poly = Vec::new();
    for c in p.iter().rev() {
        // out = out * (x - 1) + c
        let mut next = vec![Q::zero(); out.len() + 1];
        for (i, o) in out.iter().enumerate() {
            next[i + 1] += o;
            next[i] -= o;
        }
        next[0] += c;
        out = next;
    }
    out
}

/// The CDF of a sum of `d` uniforms, built by integrating the indicator
/// `d` times: `F_1` is the ramp and `F_{n+1}(s) = int_{s-1}^{s} F_n`.
/// Pieces live on `[j, j+1]`, `j = 0..n`, with tails 0 and 1.
pub struct CdfOracle {
    pub dim: u32,
    pieces: Vec<Poly>,
}

impl CdfOracle {
    pub fn new(d: u32) -> Self {
        let mut pieces: Vec<Poly> = vec![vec![Q::zero(), Q::one()]];
        for n in 1..d as usize {
            // cumulative integral A on [i, i+1], continuous, A(0) = 0
            let mut cumulative: Vec<Poly> = Vec::with_capacity(n + 1);
            let mut at_left = Q::zero();
            for (i, p) in pieces.iter().enumerate() {
                let anti = antiderivative(p);
                let offset = &at_left - eval(&anti, &qi(i as i64));
                let piece = add(&anti, &vec![offset]);
                at_left = eval(&piece, &qi(i as i64 + 1));
                cumulative.push(piece);
            }
            // A(u) = A(n) + (u - n) past the last breakpoint
            cumulative.push(vec![&at_left - qi(n as i64), Q::one()]);
            let next: Vec<Poly> = (0..=n)
                .map(|j| {
                    if j == 0 {
                        cumulative[0].clone()
                    } else {
                        add(&cumulative[j], &neg(&shift_down(&cumulative[j - 1])))
                    }
                })
                .collect();
            pieces = next;
        }
        CdfOracle { dim: d, pieces }
    }

    pub fn eval(&self, s: &Q) -> Q {
        if s <= &Q::zero() {
            return Q::zero();
        }
        if s >= &qi(self.dim as i64) {
            return Q::one();
        }
        let j = s.floor().to_integer();
        let j: usize = j.try_into().unwrap();
        eval(&self.pieces[j], s)
    }
}

/// Uniform random rational with denominator in `1..=max_den`, spread over
/// `[lo, hi]`.
pub fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_den: i64) -> Q {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(lo * den..=hi * den);
    q(num, den)
}

/// `m_1..=m_n` from `sec x + tan x` computed as exact truncated power series:
/// `tan = sin / cos`, `sec = 1 / cos`.
pub fn sec_plus_tan_oracle(n: usize) -> Vec<Q> {
    let mut fact = vec![Q::one()];
    for i in 1..=n + 1 {
        let next = &fact[i - 1] * qi(i as i64);
        fact.push(next);
    }
    let sin: Vec<Q> = (0..=n)
        .map(|i| {
            if i % 2 == 1 {
                let sign = if (i / 2) % 2 == 0 { Q::one() } else { -Q::one() };
                sign / &fact[i]
            } else {
                Q::zero()
            }
        })
        .collect();
    let cos: Vec<Q> = (0..=n)
        .map(|i| {
            if i % 2 == 0 {
                let sign = if (i / 2) % 2 == 0 { Q::one() } else { -Q::one() };
                sign / &fact[i]
            } else {
                Q::zero()
            }
        })
        .collect();
    let divide = |num: &[Q], den: &[Q]| -> Vec<Q> {
        let mut out: Vec<Q> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut acc = num[i].clone();
            for k in 1..=i {
                acc -= &den[k] * &out[i - k];
            }
            out.push(acc / &den[0]);
        }
        out
    };
    let tan = divide(&sin, &cos);
    let mut one = vec![Q::zero(); n + 1];
    one[0] = Q::one();
    let sec = divide(&one, &cos);
    (1..=n).map(|i| &tan[i] + &sec[i]).collect()
}
