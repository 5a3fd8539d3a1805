mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hkbound_core::bounds::{self, BoundSpec, EvalPoint};
use hkbound_core::certify::{cover_range, search_and_certify, CoveragePlan};
use hkbound_core::proof::{default_target, prove_dimension, ProofParams, ProofReport};
use hkbound_core::rational::{self, int, to_exact_string, to_f64, Rational};
use hkbound_core::report::{surface_grid, NamedValue, Payload, ReportDocument};
use hkbound_core::search::{Objective, SearchParams};
use hkbound_core::series::{self, TargetValue};
use hkbound_core::tables;
use hkbound_core::volume::{nu_density, nu_exact, MAX_CACHED_DIM};
use serde::Serialize;
use serde_json::json;

use crate::config::Config;

/// Exact lower bounds for Hilbert-Kunz multiplicities via hypercube slices.
#[derive(Debug, Parser)]
#[command(name = "hkbound", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Serialize)]
struct Common {
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Omit the timestamp so identical runs give identical JSON.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// `key = value` file overriding search defaults; flags win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Search grid as `NxM` (s points x t points).
    #[arg(long, global = true, value_name = "NxM", value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    /// Refinement rounds after the initial grid scan.
    #[arg(long, global = true)]
    rounds: Option<u32>,
    /// Largest denominator for rational witnesses.
    #[arg(long, global = true, value_name = "N")]
    max_denominator: Option<u64>,
    /// Reserved; the search is deterministic and ignores it.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Volume of the cube slice below `s` (Irwin-Hall CDF), exactly.
    Nu {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// The k-root bound and its scaled form at one point.
    Bound(BoundArgs),
    /// `H_e(s, t)`, the worst-case one-root bound in dimension `dim`.
    Hbound {
        #[arg(long, default_value_t = 7)]
        dim: u32,
        #[arg(long)]
        e: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
    },
    /// Vertex of `H_e(s0, t0)` viewed as a parabola in `e`.
    Emax {
        #[arg(long, default_value_t = 7)]
        dim: u32,
        #[arg(long)]
        s0: String,
        #[arg(long)]
        t0: String,
    },
    /// `min(H_e1, H_e2)` at `(s0, t0)`: a lower bound over all of `[e1, e2]`.
    Rangemin {
        #[arg(long, default_value_t = 7)]
        dim: u32,
        #[arg(long)]
        e1: String,
        #[arg(long)]
        e2: String,
        #[arg(long)]
        s0: String,
        #[arg(long)]
        t0: String,
    },
    /// Maximize a bound over `(s, t)` and certify the witness exactly.
    Optimize(OptimizeArgs),
    /// Certified covering of an `e` range by parabola intervals.
    Cover {
        #[arg(long)]
        dim: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        e_lo: u64,
        #[arg(long)]
        e_hi: Option<u64>,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Full case analysis for one dimension.
    Prove {
        #[arg(long)]
        dim: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Single-e maxima of `H_e` for e = 6..12 in dimension 7.
    Table1 {
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Printed e-range certificates in dimension 7 plus a fresh covering.
    Table2 {
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Coefficients `m_1..m_max` of `sec x + tan x`.
    Series {
        #[arg(long, default_value_t = 10)]
        max: usize,
    },
    /// Hilbert-Kunz multiplicity of the dimension-7 quadric.
    Quadric {
        #[arg(long)]
        p: Option<String>,
    },
    /// Sample a bound on a grid; writes CSV and optionally an SVG heatmap.
    Surface(SurfaceArgs),
}

#[derive(Debug, Args, Serialize)]
struct BoundArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    e: String,
    #[arg(long)]
    mu: u64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long)]
    s: String,
    #[arg(long)]
    t: String,
    /// With `k = 0`: extra order values `t_2,...` (comma separated) and the
    /// two-parameter form with this `t0`.
    #[arg(long, value_delimiter = ',')]
    offsets: Option<Vec<String>>,
    #[arg(long)]
    t0: Option<String>,
}

#[derive(Debug, Args, Serialize)]
struct OptimizeArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    e: String,
    /// Defaults to the worst case `e - 2`.
    #[arg(long)]
    mu: Option<u64>,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Optimize `e (nu_s - mu nu_(s-1))` instead of the root bound.
    #[arg(long)]
    mu_small: bool,
    #[command(flatten)]
    target: TargetArgs,
}

#[derive(Debug, Args, Serialize)]
struct SurfaceArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    e: String,
    #[arg(long)]
    mu: Option<u64>,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// CSV output with header `s,t,value`.
    #[arg(long, visible_alias = "out", value_name = "PATH")]
    csv: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    #[arg(long, value_name = "LO,HI", value_parser = parse_range)]
    s_range: Option<(f64, f64)>,
    #[arg(long, value_name = "LO,HI", value_parser = parse_range)]
    t_range: Option<(f64, f64)>,
}

#[derive(Debug, Args, Serialize)]
struct TargetArgs {
    /// Exact target value, e.g. `71/67`.
    #[arg(long)]
    target: Option<String>,
    /// Use the dimension-7 quadric at this characteristic as the target.
    #[arg(long)]
    p: Option<u64>,
}

fn parse_grid(text: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = text.split_once(['x', 'X']).ok_or("expected NxM")?;
    let n = a.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let m = b.trim().parse::<usize>().map_err(|e| e.to_string())?;
    if n < 2 || m < 2 {
        return Err("grid dimensions must be at least 2".into());
    }
    Ok((n, m))
}

fn parse_range(text: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = text.split_once(',').ok_or("expected LO,HI")?;
    let lo = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err("need finite LO <= HI".into());
    }
    Ok((lo, hi))
}

fn exact(name: &str, text: &str) -> Result<Rational> {
    rational::parse(text).with_context(|| format!("invalid --{name} {text:?}"))
}

fn check_dim(d: u32) -> Result<()> {
    if d == 0 || d > MAX_CACHED_DIM {
        bail!("dimension must be between 1 and {MAX_CACHED_DIM}, got {d}");
    }
    Ok(())
}

fn integer_e(text: &str) -> Result<u64> {
    let e = exact("e", text)?;
    if !e.is_integer() || e < int(1) {
        bail!("e must be a positive integer here, got {text}");
    }
    Ok(e.to_integer().try_into()?)
}

fn search_params(common: &Common, dim: u32) -> Result<SearchParams> {
    let mut params = SearchParams::for_dim(dim);
    if let Some(path) = &common.config {
        Config::load(path)?.apply(&mut params)?;
    }
    if let Some((n, m)) = common.grid {
        params = params.with_grid(n, m);
    }
    if let Some(r) = common.rounds {
        params.rounds = r;
    }
    if let Some(n) = common.max_denominator {
        params.max_denominator = n;
    }
    params.validate()?;
    Ok(params)
}

fn resolve_target(args: &TargetArgs, dim: u32) -> Result<TargetValue> {
    match (&args.target, args.p) {
        (Some(_), Some(_)) => bail!("give either --target or --p, not both"),
        (Some(text), None) => Ok(TargetValue::user(dim, exact("target", text)?)),
        (None, Some(p)) => Ok(series::wy_target(dim, Some(p))?),
        (None, None) => Ok(default_target(dim)?),
    }
}

fn show(name: &str, value: &Rational) {
    println!("{name} = {} ({})", to_exact_string(value), to_f64(value));
}

fn show_plan(plan: &CoveragePlan) {
    for iv in &plan.intervals {
        println!(
            "[{}, {}]  (s0, t0) = ({}, {})  e_max = {}  min = {:.6}",
            iv.e1,
            iv.e2,
            to_exact_string(&iv.s0),
            to_exact_string(&iv.t0),
            iv.e_max.as_ref().map_or("-".to_string(), |v| format!("{:.6}", to_f64(v))),
            to_f64(&iv.certified_min)
        );
    }
    for gap in &plan.gaps {
        println!("gap e = {}: {}", gap.e, gap.reason);
    }
    println!(
        "covered {} of {} multiplicities against {}",
        plan.covered_count(),
        plan.e_hi + 1 - plan.e_lo.min(plan.e_hi + 1),
        to_exact_string(&plan.target)
    );
}

fn show_proof(report: &ProofReport) {
    println!(
        "dimension {}, k = {}, target {} ({:?}), threshold {}",
        report.dim,
        report.k,
        to_exact_string(&report.target.value),
        report.target.provenance,
        report.threshold
    );
    for case in &report.cases {
        println!("  [{:?}] {}", case.kind, case.summary);
    }
    println!("verdict: {:?}", report.verdict);
}

fn run(cli: &Cli) -> Result<Payload> {
    let common = &cli.common;
    let payload = match &cli.command {
        Command::Nu { d, s } => {
            check_dim(*d)?;
            let s = exact("s", s)?;
            let values = vec![
                NamedValue::new("nu", nu_exact(&s, *d)),
                NamedValue::new("density", nu_density(&s, *d)),
            ];
            show("nu", &values[0].value);
            show("density", &values[1].value);
            Payload::Values { values }
        }
        Command::Bound(a) => {
            check_dim(a.dim)?;
            let (e, s, t) = (exact("e", &a.e)?, exact("s", &a.s)?, exact("t", &a.t)?);
            let mut values = Vec::new();
            if a.offsets.is_some() || a.t0.is_some() {
                if a.k != 0 {
                    bail!("--offsets/--t0 select the root-free bound and need --k 0");
                }
                let offsets = a
                    .offsets
                    .iter()
                    .flatten()
                    .map(|o| exact("offsets", o))
                    .collect::<Result<Vec<_>>>()?;
                let t0 = a.t0.as_deref().map(|x| exact("t0", x)).transpose()?.unwrap_or_else(|| t.clone());
                let point = EvalPoint::new(s, t, t0)?;
                values.push(NamedValue::new("noroots", bounds::noroots_bound(&e, &offsets, a.dim, &point)?));
            } else {
                let spec = BoundSpec::new(a.dim, e, a.mu, a.k)?;
                values.push(NamedValue::new("bound", bounds::general_bound(&spec, &s, &t)?));
                if a.k >= 1 {
                    values.push(NamedValue::new("s_bound", bounds::s_bound(&spec, &s, &t)?));
                }
            }
            values.iter().for_each(|v| show(&v.name, &v.value));
            Payload::Values { values }
        }
        Command::Hbound { dim, e, s, t } => {
            check_dim(*dim)?;
            let v = bounds::h_bound(&exact("e", e)?, *dim, &exact("s", s)?, &exact("t", t)?)?;
            show("H", &v);
            Payload::Values {
                values: vec![NamedValue::new("H", v)],
            }
        }
        Command::Emax { dim, s0, t0 } => {
            check_dim(*dim)?;
            let (s0, t0) = (exact("s0", s0)?, exact("t0", t0)?);
            let quad = bounds::quadratic_in_e(*dim, &s0, &t0);
            let v = bounds::e_max(*dim, &s0, &t0)?;
            show("e_max", &v);
            Payload::Values {
                values: vec![
                    NamedValue::new("e_max", v),
                    NamedValue::new("a", quad.a),
                    NamedValue::new("b", quad.b),
                    NamedValue::new("c", quad.c),
                ],
            }
        }
        Command::Rangemin { dim, e1, e2, s0, t0 } => {
            check_dim(*dim)?;
            let v = bounds::range_min(*dim, &exact("e1", e1)?, &exact("e2", e2)?, &exact("s0", s0)?, &exact("t0", t0)?)?;
            show("min", &v);
            Payload::Values {
                values: vec![NamedValue::new("min", v)],
            }
        }
        Command::Optimize(a) => {
            check_dim(a.dim)?;
            let params = search_params(common, a.dim)?;
            let target = resolve_target(&a.target, a.dim)?;
            let e = exact("e", &a.e)?;
            let objective = if a.mu_small {
                let mu = a.mu.context("--mu-small needs --mu")?;
                Objective::MuSmall { dim: a.dim, e, mu }
            } else {
                let mu = match a.mu {
                    Some(mu) => mu,
                    None => integer_e(&a.e)?
                        .checked_sub(2)
                        .filter(|&m| m > 0)
                        .context("worst case mu = e - 2 needs e >= 3")?,
                };
                Objective::General {
                    spec: BoundSpec::new(a.dim, e, mu, a.k)?,
                }
            };
            let (candidate, certificate) = search_and_certify(&objective, &params, &target.value)?;
            println!("optimizer: s = {}, t = {}, value = {}", candidate.s, candidate.t, candidate.value);
            println!(
                "witness: s = {}, t = {}",
                to_exact_string(&certificate.s),
                to_exact_string(&certificate.t)
            );
            show("value", &certificate.value);
            println!(
                "{} target {}",
                if certificate.verdict { "exceeds" } else { "does not exceed" },
                to_exact_string(&target.value)
            );
            Payload::Optimum { candidate, certificate }
        }
        Command::Cover { dim, k, e_lo, e_hi, target } => {
            check_dim(*dim)?;
            let params = search_params(common, *dim)?;
            let target = resolve_target(target, *dim)?;
            let hi = match e_hi {
                Some(hi) => *hi,
                None => series::large_e_threshold(*dim, &target.value)?,
            };
            let plan = cover_range(*dim, *k, *e_lo, hi, &target.value, &params)?;
            show_plan(&plan);
            Payload::Coverage(plan)
        }
        Command::Prove { dim, k, target } => {
            check_dim(*dim)?;
            let params = ProofParams {
                search: search_params(common, *dim)?,
                target: Some(resolve_target(target, *dim)?),
            };
            let report = prove_dimension(*dim, *k, &params)?;
            show_proof(&report);
            Payload::Proof(report)
        }
        Command::Table1 { target } => {
            let params = search_params(common, tables::TABLE_DIM)?;
            let target = resolve_target(target, tables::TABLE_DIM)?;
            let rows = tables::table1(&target.value, &params)?;
            println!("e  printed (s, t)          printed   exact at printed  optimizer  certified");
            for r in &rows {
                println!(
                    "{:<2} ({}, {})  {:.5}  {:.6}  {:.6}  {}",
                    r.e,
                    to_f64(&r.printed_s),
                    to_f64(&r.printed_t),
                    r.printed_bound,
                    to_f64(&r.exact_at_printed),
                    r.optimizer.value,
                    r.certificate.verdict
                );
            }
            Payload::Table1 { rows }
        }
        Command::Table2 { target } => {
            let params = search_params(common, tables::TABLE_DIM)?;
            let target = resolve_target(target, tables::TABLE_DIM)?;
            let table = tables::table2(&target.value, &params)?;
            println!("printed rows:");
            for r in &table.printed {
                println!(
                    "[{}, {}]  (s0, t0) = ({}, {})  e_max = {:.6} (printed {})  min = {:.6} (printed {})  certifies: {}",
                    r.e1,
                    r.e2,
                    to_f64(&r.s0),
                    to_f64(&r.t0),
                    to_f64(&r.e_max),
                    r.printed_e_max,
                    to_f64(&r.min),
                    r.printed_min,
                    r.certifies
                );
            }
            println!("greedy covering:");
            show_plan(&table.plan);
            Payload::Table2(table)
        }
        Command::Series { max } => {
            if *max == 0 || *max > MAX_CACHED_DIM as usize {
                bail!("--max must be between 1 and {MAX_CACHED_DIM}");
            }
            let values: Vec<NamedValue> = series::m_coeffs(*max)?
                .into_iter()
                .enumerate()
                .map(|(i, m)| NamedValue::new(format!("m_{}", i + 1), m))
                .collect();
            values.iter().for_each(|v| show(&v.name, &v.value));
            Payload::Values { values }
        }
        Command::Quadric { p } => {
            let mut values = Vec::new();
            if let Some(p) = p {
                let pv = exact("p", p)?;
                values.push(NamedValue::new(format!("e_HK(R_{p},7)"), series::ehk_quadric_dim7(&pv)?));
            }
            values.push(NamedValue::new("limit", series::quadric_limit_dim7()));
            values.iter().for_each(|v| show(&v.name, &v.value));
            let identities = series::verify_quadric_identities();
            println!(
                "decomposition as printed: {}, corrected: {}, derivative identity: {}, decreasing: {}",
                identities.decomposition_as_printed,
                identities.decomposition_corrected,
                identities.derivative_identity,
                identities.strictly_decreasing
            );
            Payload::Quadric { values, identities }
        }
        Command::Surface(a) => {
            check_dim(a.dim)?;
            let e = integer_e(&a.e)?;
            let spec = match a.mu {
                Some(mu) => BoundSpec::new(a.dim, int(e as i64), mu, a.k)?,
                None => BoundSpec::worst_case(a.dim, e, a.k)?,
            };
            let params = search_params(common, a.dim)?;
            let s_range = a.s_range.unwrap_or((to_f64(&params.s_lo), to_f64(&params.s_hi)));
            let t_range = a.t_range.unwrap_or((to_f64(&params.t_lo), to_f64(&params.t_hi)));
            let grid = surface_grid(&spec, (params.grid_s, params.grid_t), s_range, t_range)?;
            if let Some(path) = &a.csv {
                write(path, &grid.to_csv())?;
            }
            if let Some(path) = &a.svg {
                let target = to_f64(&default_target(a.dim)?.value);
                write(path, &grid.to_svg(target))?;
            }
            println!(
                "{}x{} grid, max {} at (s, t) = ({}, {})",
                grid.ns, grid.nt, grid.max.value, grid.max.s, grid.max.t
            );
            Payload::Surface(grid)
        }
    };
    Ok(payload)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|payload| emit(&cli, payload)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, payload: Payload) -> Result<()> {
    let Some(path) = &cli.common.json else {
        return Ok(());
    };
    let name = serde_json::to_value(&cli.command)?
        .as_object()
        .and_then(|m| m.keys().next().cloned())
        .unwrap_or_default();
    let params = json!({
        "common": {
            "grid": cli.common.grid,
            "rounds": cli.common.rounds,
            "max_denominator": cli.common.max_denominator,
            "seed": cli.common.seed,
            "config": cli.common.config,
        },
        "command": cli.command,
    });
    let mut doc = ReportDocument::new(name, params, payload);
    if !cli.common.no_timestamp {
        doc.timestamp = Some(SystemTime::now().duration_since(UNIX_EPOCH)?.as_secs());
    }
    let text = doc.to_json()?;
    if path.as_os_str() == "-" {
        println!("{text}");
    } else {
        write(path, &text)?;
    }
    Ok(())
}
