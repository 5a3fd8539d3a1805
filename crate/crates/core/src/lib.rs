//! Exact hypercube-slice volumes and certified lower bounds for
//! Hilbert-Kunz multiplicities.
//!
//! The crate is organised bottom-up:
//!
//! - [`volume`]: the slice volume `nu_s` (the Irwin-Hall CDF), exact and float.
//! - [`bounds`]: the bound families as exact functions of `(s, t)`.
//! - [`search`]: deterministic float search for witness points.
//! - [`certify`]: exact certificates and coverings of multiplicity ranges.
//! - [`proof`]: the per-dimension case analysis.
//! - [`series`]: target constants (the `m_d` series and the quadric formula).
//! - [`envelope`]: certified lower envelope of `phi(t)`.
//! - [`tables`]: reproduction of the dimension-7 tables.
//! - [`report`]: serializable report documents and surface grids.

pub mod bounds;
pub mod certify;
pub mod envelope;
pub mod error;
pub mod poly;
pub mod proof;
pub mod rational;
pub mod report;
pub mod search;
pub mod series;
pub mod tables;
pub mod volume;

pub use bounds::{BoundSpec, EvalPoint, OrderValue, Quadratic};
pub use error::{Error, Result};
pub use poly::{PiecewisePolynomial, Polynomial};
pub use rational::Rational;
pub use certify::{Certificate, CoverageInterval, CoveragePlan};
pub use proof::{ProofReport, Verdict};
pub use search::{Candidate, Objective, SearchParams};
pub use series::TargetValue;
