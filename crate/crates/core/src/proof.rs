//! Case analysis for one dimension: cited cases, the large-`e` cutoff, small
//! `mu`, the non-normal branch, and a certified covering of what remains.

use serde::{Deserialize, Serialize};

use crate::bounds::not_normal_bound;
use crate::certify::{search_and_certify, cover_range, Certificate, CoverageInterval, CoveragePlan};
use crate::error::{Error, Result};
use crate::rational::{int, to_exact_string, Rational};
use crate::search::{Objective, SearchParams};
use crate::series::{large_e_threshold, wy_target, TargetValue};
use crate::volume::factorial;

/// Smallest multiplicity not settled by cited results.
pub const FIRST_OPEN_E: u64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    Cited,
    Threshold,
    MuSmall,
    NotNormal,
    Coverage,
    Gap,
}

/// A comparison `value > target` decided exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCheck {
    pub label: String,
    #[serde(with = "crate::rational::serde_exact")]
    pub value: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub target: Rational,
    pub holds: bool,
}

impl ExactCheck {
    pub fn new(label: impl Into<String>, value: Rational, target: &Rational) -> Self {
        ExactCheck {
            label: label.into(),
            holds: value > *target,
            value,
            target: target.clone(),
        }
    }

    pub fn recheck(&self) -> bool {
        (self.value > self.target) == self.holds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseEntry {
    pub kind: CaseKind,
    pub summary: String,
    /// Inclusive range of multiplicities the entry speaks for.
    pub e_range: Option<(u64, u64)>,
    pub mu: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<ExactCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<CoverageInterval>,
}

impl CaseEntry {
    fn new(kind: CaseKind, summary: impl Into<String>) -> Self {
        CaseEntry {
            kind,
            summary: summary.into(),
            e_range: None,
            mu: None,
            certificate: None,
            check: None,
            interval: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Proved,
    Open,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub dim: u32,
    pub k: u32,
    pub target: TargetValue,
    pub threshold: u64,
    pub hypotheses: Vec<String>,
    pub cases: Vec<CaseEntry>,
    pub verdict: Verdict,
}

impl ProofReport {
    pub fn gaps(&self) -> impl Iterator<Item = &CaseEntry> {
        self.cases.iter().filter(|c| c.kind == CaseKind::Gap)
    }

    /// Re-evaluates every certificate, check and coverage interval exactly.
    pub fn recheck(&self) -> Result<bool> {
        for case in &self.cases {
            if let Some(cert) = &case.certificate {
                if !cert.recheck()? {
                    return Ok(false);
                }
            }
            if let Some(check) = &case.check {
                if !check.recheck() {
                    return Ok(false);
                }
            }
            if let Some(iv) = &case.interval {
                let rebuilt = CoverageInterval::new(self.dim, self.k, iv.e1, iv.e2, iv.s0.clone(), iv.t0.clone());
                if &rebuilt != iv || rebuilt.certified_min <= self.target.value {
                    return Ok(false);
                }
            }
        }
        let has_gap = self.gaps().next().is_some();
        Ok((self.verdict == Verdict::Proved) != has_gap)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofParams {
    pub search: SearchParams,
    /// Overrides the default target (the `p = 3` quadric in dimension 7,
    /// `1 + m_d` otherwise).
    pub target: Option<TargetValue>,
}

impl ProofParams {
    pub fn for_dim(d: u32) -> Self {
        ProofParams {
            search: SearchParams::for_dim(d),
            target: None,
        }
    }
}

pub fn default_target(d: u32) -> Result<TargetValue> {
    wy_target(d, if d == 7 { Some(3) } else { None })
}

fn hypotheses(d: u32) -> Vec<String> {
    vec![
        format!("R is a complete normal local domain of dimension {d} and characteristic p > 2 with algebraically closed residue field, and R is not regular (general case reduces to this one)"),
        "the inequality is known for complete intersections".into(),
        "the inequality is known when 2 <= e(R) <= 5".into(),
        format!("e_HK(R) >= e(R)/{d}! for every local ring of dimension {d}"),
        "either R is Cohen-Macaulay with minimal multiplicity (inequality known) or mu(R) <= e(R) - 2".into(),
        "e_HK(R) >= e(R) (nu_s - mu(R) nu_(s-1)) for all s >= 0".into(),
        "if adjoining k square roots gives a non-normal ring then e_HK(R) >= 1 + 1/2^k; otherwise the k-root bound holds with mu(R) > k".into(),
    ]
}

/// Assembles the full case analysis for dimension `d` using `k` roots.
pub fn prove_dimension(d: u32, k: u32, params: &ProofParams) -> Result<ProofReport> {
    if d < 2 {
        return Err(Error::InvalidArgument("prove_dimension needs d >= 2".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("prove_dimension needs k >= 1".into()));
    }
    let target = match &params.target {
        Some(t) => t.clone(),
        None => default_target(d)?,
    };
    let goal = &target.value;
    let mut cases = Vec::new();

    let mut cited = CaseEntry::new(CaseKind::Cited, "2 <= e(R) <= 5 and complete intersections: known results");
    cited.e_range = Some((2, FIRST_OPEN_E - 1));
    cases.push(cited);

    let threshold = large_e_threshold(d, goal)?;
    let mut above = CaseEntry::new(
        CaseKind::Threshold,
        format!("e(R) > {threshold}: e_HK(R) >= e(R)/{d}! exceeds the target"),
    );
    above.e_range = Some((threshold + 1, u64::MAX));
    above.check = Some(ExactCheck::new(
        format!("({threshold} + 1)/{d}!"),
        Rational::new((threshold + 1).into(), factorial(d)),
        goal,
    ));
    if !above.check.as_ref().unwrap().holds {
        above.kind = CaseKind::Gap;
    }
    cases.push(above);

    let open_lo = FIRST_OPEN_E;
    if threshold < open_lo {
        let mut empty = CaseEntry::new(CaseKind::Coverage, "no multiplicities remain between the cited cases and the cutoff");
        empty.e_range = None;
        cases.push(empty);
    } else {
        let search = &params.search;
        let s_only = search
            .clone()
            .with_ranges((search.s_lo.clone(), search.s_hi.clone()), (int(0), int(0)));
        for mu in 1..=k.max(3) as u64 {
            let objective = Objective::MuSmall {
                dim: d,
                e: int(open_lo as i64),
                mu,
            };
            let (_, cert) = search_and_certify(&objective, &s_only, goal)?;
            let ok = cert.verdict;
            let mut entry = CaseEntry::new(
                if ok { CaseKind::MuSmall } else { CaseKind::Gap },
                format!(
                    "mu(R) = {mu}: {open_lo}(nu_s - {mu} nu_(s-1)) at s = {} {} target",
                    to_exact_string(&cert.s),
                    if ok { "exceeds" } else { "does not exceed" }
                ),
            );
            entry.e_range = Some((open_lo, threshold));
            entry.mu = Some(mu);
            entry.certificate = Some(cert);
            cases.push(entry);
        }

        let escape = not_normal_bound(k)?;
        let check = ExactCheck::new(format!("1 + 1/2^{k}"), escape, goal);
        let mut entry = CaseEntry::new(
            if check.holds { CaseKind::NotNormal } else { CaseKind::Gap },
            format!("adjoining {k} square root(s) gives a non-normal ring"),
        );
        entry.e_range = Some((open_lo, threshold));
        entry.check = Some(check);
        cases.push(entry);

        let plan = cover_range(d, k, open_lo, threshold, goal, search)?;
        cases.extend(coverage_cases(&plan));
    }

    let verdict = if cases.iter().any(|c| c.kind == CaseKind::Gap) {
        Verdict::Open
    } else {
        Verdict::Proved
    };
    Ok(ProofReport {
        dim: d,
        k,
        target,
        threshold,
        hypotheses: hypotheses(d),
        cases,
        verdict,
    })
}

/// Case entries for a covering, in increasing order of `e`, with runs of
/// consecutive gaps merged.
pub fn coverage_cases(plan: &CoveragePlan) -> Vec<CaseEntry> {
    let mut entries: Vec<(u64, CaseEntry)> = Vec::new();
    for iv in &plan.intervals {
        let mut entry = CaseEntry::new(
            CaseKind::Coverage,
            format!(
                "{} <= e(R) <= {}, {} <= mu(R) <= e(R) - 2: bound at (s, t) = ({}, {})",
                iv.e1,
                iv.e2,
                plan.k + 1,
                to_exact_string(&iv.s0),
                to_exact_string(&iv.t0)
            ),
        );
        entry.e_range = Some((iv.e1, iv.e2));
        entry.interval = Some(iv.clone());
        entries.push((iv.e1, entry));
    }
    let mut gaps: Vec<u64> = plan.gaps.iter().map(|g| g.e).collect();
    gaps.sort_unstable();
    let mut i = 0;
    while i < gaps.len() {
        let mut j = i;
        while j + 1 < gaps.len() && gaps[j + 1] == gaps[j] + 1 {
            j += 1;
        }
        let mut entry = CaseEntry::new(
            CaseKind::Gap,
            format!("{} <= e(R) <= {}: no certificate found", gaps[i], gaps[j]),
        );
        entry.e_range = Some((gaps[i], gaps[j]));
        entries.push((gaps[i], entry));
        i = j + 1;
    }
    entries.sort_by_key(|(e, _)| *e);
    entries.into_iter().map(|(_, e)| e).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn dimension_two_needs_no_coverage() {
        let report = prove_dimension(2, 1, &ProofParams::for_dim(2)).unwrap();
        assert_eq!(report.target.value, frac(3, 2));
        assert_eq!(report.threshold, 3);
        assert_eq!(report.verdict, Verdict::Proved);
        assert!(report.recheck().unwrap());
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(prove_dimension(1, 1, &ProofParams::for_dim(1)).is_err());
        assert!(prove_dimension(7, 0, &ProofParams::for_dim(7)).is_err());
    }

    #[test]
    fn gap_runs_are_merged() {
        let plan = CoveragePlan {
            dim: 8,
            k: 4,
            target: frac(8341, 8064),
            e_lo: 6,
            e_hi: 9,
            intervals: vec![],
            gaps: (6..=9)
                .map(|e| crate::certify::CoverageGap {
                    e,
                    best_value: None,
                    reason: String::new(),
                })
                .collect(),
        };
        let cases = coverage_cases(&plan);
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0].e_range, Some((6, 9)));
    }
}
