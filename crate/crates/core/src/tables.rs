//! Reference data for dimension 7: single-`e` maxima of
//! `H_e` for `e = 6..=12`, and the `e`-range coverings up to 5340.

use serde::{Deserialize, Serialize};

use crate::bounds::{e_max, h_bound, range_min};
use crate::certify::{certify_point, cover_range, rational_witness, Certificate, CoveragePlan};
use crate::error::Result;
use crate::rational::{int, parse, Rational};
use crate::search::{optimize_bound, Candidate, Objective, SearchParams};

/// `(e, s, t, bound)` as printed, decimals kept as text so they parse exactly.
pub const TABLE1_ROWS: [(u64, &str, &str, f64); 7] = [
    (6, "2.84243", "0.8", 1.06447),
    (7, "2.74118", "0.779643", 1.06056),
    (8, "2.65255", "0.739206", 1.06024),
    (9, "2.58286", "0.710503", 1.06183),
    (10, "2.52575", "0.688955", 1.06438),
    (11, "2.47759", "0.672106", 1.06742),
    (12, "2.43609", "0.658519", 1.07073),
];

/// `(e1, e2, s0, t0, e_max, min(H_e1, H_e2))` as printed.
pub const TABLE2_ROWS: [(u64, u64, &str, &str, f64, f64); 7] = [
    (13, 19, "2.34", "0.62", 15.973, 1.06843),
    (20, 40, "2.12", "0.6", 31.2399, 1.07266),
    (41, 105, "1.9", "0.55", 72.3972, 1.12153),
    (106, 227, "1.75", "0.5", 151.062, 1.20165),
    (228, 650, "1.6", "0.475", 402.416, 1.32149),
    (651, 1600, "1.5", "0.45", 937.946, 1.45925),
    (1601, 5340, "1.375", "0.41", 3891.82, 2.84311),
];

/// Dimension of the published tables.
pub const TABLE_DIM: u32 = 7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub e: u64,
    #[serde(with = "crate::rational::serde_exact")]
    pub printed_s: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub printed_t: Rational,
    pub printed_bound: f64,
    /// `H_e` evaluated exactly at the printed point.
    #[serde(with = "crate::rational::serde_exact")]
    pub exact_at_printed: Rational,
    pub optimizer: Candidate,
    /// Certificate against the target at the rationalized optimizer witness.
    pub certificate: Certificate,
}

pub fn table1(target: &Rational, params: &SearchParams) -> Result<Vec<Table1Row>> {
    TABLE1_ROWS
        .iter()
        .map(|&(e, s, t, printed_bound)| {
            let (s, t) = (parse(s)?, parse(t)?);
            let objective = Objective::HBound {
                dim: TABLE_DIM,
                e: int(e as i64),
            };
            let optimizer = optimize_bound(&objective, params)?;
            let (ws, wt) = rational_witness(&optimizer, params)?;
            Ok(Table1Row {
                e,
                exact_at_printed: h_bound(&int(e as i64), TABLE_DIM, &s, &t)?,
                printed_s: s,
                printed_t: t,
                printed_bound,
                optimizer,
                certificate: certify_point(&objective, &ws, &wt, target)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub e1: u64,
    pub e2: u64,
    #[serde(with = "crate::rational::serde_exact")]
    pub s0: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub t0: Rational,
    pub printed_e_max: f64,
    #[serde(with = "crate::rational::serde_exact")]
    pub e_max: Rational,
    pub printed_min: f64,
    #[serde(with = "crate::rational::serde_exact")]
    pub min: Rational,
    pub certifies: bool,
}

pub fn table2_printed(target: &Rational) -> Result<Vec<Table2Row>> {
    TABLE2_ROWS
        .iter()
        .map(|&(e1, e2, s0, t0, printed_e_max, printed_min)| {
            let (s0, t0) = (parse(s0)?, parse(t0)?);
            let min = range_min(TABLE_DIM, &int(e1 as i64), &int(e2 as i64), &s0, &t0)?;
            Ok(Table2Row {
                e1,
                e2,
                e_max: e_max(TABLE_DIM, &s0, &t0)?,
                certifies: min > *target,
                min,
                printed_e_max,
                printed_min,
                s0,
                t0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2 {
    pub printed: Vec<Table2Row>,
    /// Independent greedy covering of the same range.
    pub plan: CoveragePlan,
}

pub fn table2(target: &Rational, params: &SearchParams) -> Result<Table2> {
    let lo = TABLE2_ROWS[0].0;
    let hi = TABLE2_ROWS[TABLE2_ROWS.len() - 1].1;
    Ok(Table2 {
        printed: table2_printed(target)?,
        plan: cover_range(TABLE_DIM, 1, lo, hi, target, params)?,
    })
}
