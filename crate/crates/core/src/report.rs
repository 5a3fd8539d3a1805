//! Serializable report documents and bound surfaces.
//!
//! Exact values are always written as reduced `"n/d"` strings next to a
//! float rendering; JSON numbers are never used to carry exact data.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundSpec;
use crate::certify::{Certificate, CoveragePlan};
use crate::envelope::EnvelopePoint;
use crate::error::{Error, Result};
use crate::proof::{ProofReport, Verdict};
use crate::rational::{to_f64, Rational};
use crate::search::{Candidate, Objective};
use crate::series::QuadricIdentities;
use crate::tables::{Table1Row, Table2};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    #[serde(with = "crate::rational::serde_exact")]
    pub value: Rational,
}

impl NamedValue {
    pub fn new(name: impl Into<String>, value: Rational) -> Self {
        NamedValue {
            name: name.into(),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Payload {
    Values { values: Vec<NamedValue> },
    Optimum { candidate: Candidate, certificate: Certificate },
    Envelope { points: Vec<EnvelopePoint> },
    Quadric { values: Vec<NamedValue>, identities: QuadricIdentities },
    Table1 { rows: Vec<Table1Row> },
    Table2(Table2),
    Coverage(CoveragePlan),
    Proof(ProofReport),
    Surface(SurfaceGrid),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    /// Echo of every parameter the command ran with.
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub payload: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>, params: serde_json::Value, payload: Payload) -> Self {
        let verdict = match &payload {
            Payload::Proof(report) => Some(report.verdict),
            Payload::Coverage(plan) | Payload::Table2(Table2 { plan, .. }) => Some(if plan.is_complete() {
                Verdict::Proved
            } else {
                Verdict::Open
            }),
            _ => None,
        };
        ReportDocument {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            params,
            timestamp: None,
            payload,
            verdict,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Values of a bound on a regular `(s, t)` grid, row-major with one row per
/// `s` value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGrid {
    pub spec: BoundSpec,
    pub s_range: (f64, f64),
    pub t_range: (f64, f64),
    pub ns: usize,
    pub nt: usize,
    pub values: Vec<f64>,
    pub max: Candidate,
}

fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

impl SurfaceGrid {
    pub fn s_at(&self, i: usize) -> f64 {
        axis(self.s_range.0, self.s_range.1, self.ns, i)
    }

    pub fn t_at(&self, j: usize) -> f64 {
        axis(self.t_range.0, self.t_range.1, self.nt, j)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.nt + j]
    }

    /// Long-form CSV with header `s,t,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,value\n");
        for i in 0..self.ns {
            for j in 0..self.nt {
                let _ = writeln!(out, "{},{},{}", self.s_at(i), self.t_at(j), self.value(i, j));
            }
        }
        out
    }

    /// Heatmap of the grid with the boundary of `{value > target}` drawn in
    /// black. `s` runs left to right, `t` bottom to top.
    pub fn to_svg(&self, target: f64) -> String {
        const CELL: f64 = 4.0;
        const MARGIN: f64 = 40.0;
        let width = self.ns as f64 * CELL;
        let height = self.nt as f64 * CELL;
        let lo = target - 0.5 * (self.max.value - target).abs().max(0.05);
        let hi = self.max.value.max(target + 1e-9);
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            width + 2.0 * MARGIN,
            height + 2.0 * MARGIN,
            width + 2.0 * MARGIN,
            height + 2.0 * MARGIN
        );
        let _ = writeln!(svg, r#"<g transform="translate({MARGIN},{MARGIN})">"#);
        let y_of = |j: usize| height - (j as f64 + 1.0) * CELL;
        for i in 0..self.ns {
            for j in 0..self.nt {
                let v = self.value(i, j);
                let _ = writeln!(
                    svg,
                    r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
                    i as f64 * CELL,
                    y_of(j),
                    heat_color((v - lo) / (hi - lo))
                );
            }
        }
        let above = |i: usize, j: usize| self.value(i, j) > target;
        let mut path = String::new();
        for i in 0..self.ns {
            for j in 0..self.nt {
                if i + 1 < self.ns && above(i, j) != above(i + 1, j) {
                    let x = (i + 1) as f64 * CELL;
                    let _ = write!(path, "M{x},{} V{} ", y_of(j), y_of(j) + CELL);
                }
                if j + 1 < self.nt && above(i, j) != above(i, j + 1) {
                    let y = y_of(j);
                    let _ = write!(path, "M{},{y} H{} ", i as f64 * CELL, (i + 1) as f64 * CELL);
                }
            }
        }
        if !path.is_empty() {
            let _ = writeln!(svg, r#"<path d="{}" stroke="black" stroke-width="1" fill="none"/>"#, path.trim_end());
        }
        let _ = writeln!(
            svg,
            r#"<rect x="0" y="0" width="{width}" height="{height}" fill="none" stroke="gray"/>"#
        );
        let _ = writeln!(svg, "</g>");
        let _ = writeln!(
            svg,
            r#"<text x="{MARGIN}" y="{}" font-size="12">s in [{}, {}], t in [{}, {}], max {:.6} at ({:.6}, {:.6}), target {:.8}</text>"#,
            height + 1.6 * MARGIN,
            self.s_range.0,
            self.s_range.1,
            self.t_range.0,
            self.t_range.1,
            self.max.value,
            self.max.s,
            self.max.t,
            target
        );
        svg.push_str("</svg>\n");
        svg
    }
}

/// Blue-to-yellow ramp for `x` clamped into `[0, 1]`.
fn heat_color(x: f64) -> String {
    let x = if x.is_nan() { 0.0 } else { x.clamp(0.0, 1.0) };
    let r = (255.0 * x) as u8;
    let g = (64.0 + 191.0 * x) as u8;
    let b = (160.0 * (1.0 - x)) as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Samples the general bound for `spec` on an `ns x nt` grid.
pub fn surface_grid(spec: &BoundSpec, grid: (usize, usize), s_range: (f64, f64), t_range: (f64, f64)) -> Result<SurfaceGrid> {
    spec.validate()?;
    let (ns, nt) = grid;
    if ns < 2 || nt < 2 {
        return Err(Error::InvalidArgument("grid dimensions must be at least 2".into()));
    }
    if s_range.0 > s_range.1 || t_range.0 > t_range.1 || s_range.0 < 0.0 || t_range.0 < 0.0 || t_range.1 > 1.0 {
        return Err(Error::InvalidArgument("invalid surface ranges".into()));
    }
    let float = Objective::General { spec: spec.clone() }.float();
    let mut values = Vec::with_capacity(ns * nt);
    let mut max: Option<Candidate> = None;
    for i in 0..ns {
        let s = axis(s_range.0, s_range.1, ns, i);
        for j in 0..nt {
            let t = axis(t_range.0, t_range.1, nt, j);
            let value = float.eval(s, t);
            values.push(value);
            let cell = Candidate { s, t, value };
            if max.map_or(true, |m| cell.preference(&m) == std::cmp::Ordering::Greater) {
                max = Some(cell);
            }
        }
    }
    Ok(SurfaceGrid {
        spec: spec.clone(),
        s_range,
        t_range,
        ns,
        nt,
        values,
        max: max.expect("grid is nonempty"),
    })
}

/// Float rendering helper for human-readable output.
pub fn approx(value: &Rational) -> f64 {
    to_f64(value)
}
