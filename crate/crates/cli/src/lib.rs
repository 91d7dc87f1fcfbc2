//! Command implementations for the `adiag` binary. Every command returns its
//! stdout, stderr and exit code instead of printing, so tests can drive it
//! in-process.

pub mod args;
pub mod error;
pub mod verify;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use adiag_core::cache::TableCache;
use adiag_core::catalog::catalog;
use adiag_core::character::{character_table, CharacterTable};
use adiag_core::classify::{minimizer_scan, record_from_table, scan_csv, MinimizerReport, ScanRow};
use adiag_core::exec::Execution;
use adiag_core::expr::parse;
use adiag_core::families::{
    char_mass_decay, convergence_report, degree_divisor_check, dihedral_family, family_csv, family_summary, family_tsv,
    shift_family, FamilyOptions,
};
use adiag_core::group::{FiniteGroup, GroupBuilder, GroupJson, DEFAULT_ORDER_CAP};
use adiag_core::harmonic::{ad_closed_form, ad_direct, plancherel_weights, stratification};
use adiag_core::irreps::explicit_irreps;
use adiag_core::rational::{format, to_f64};
use serde::Serialize;

use args::{Cli, Command, FamilyArgs, FamilyKind, Format, GlobalOpts, InvariantsArgs, ScanArgs, Suite, VerifyArgs};
use error::{CliError, EXIT_OK, EXIT_VERIFY};
use verify::{CheckResult, VerifyConfig};

pub const DEFAULT_SCAN_ORDER: usize = 32;
pub const DEFAULT_VERIFY_ORDER: usize = 24;
pub const DIRECT_TOL: f64 = verify::DIRECT_TOL;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn failure(err: CliError) -> Self {
        Outcome { stdout: String::new(), stderr: err.to_json() + "\n", code: err.exit_code }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Invariants(a) => cmd_invariants(&cli.global, a),
        Command::Scan(a) => cmd_scan(&cli.global, a),
        Command::Family(a) => cmd_family(&cli.global, a),
        Command::Verify(a) => cmd_verify(&cli.global, a),
    };
    result.unwrap_or_else(Outcome::failure)
}

fn exec(global: &GlobalOpts) -> Execution {
    if global.serial {
        Execution::Serial
    } else {
        Execution::default()
    }
}

pub fn cache_dir(global: &GlobalOpts) -> Option<PathBuf> {
    global.cache_dir.clone().or_else(|| dirs::cache_dir().map(|d| d.join("adiag")))
}

/// Reads a group from an expression or from `@path` holding a JSON table.
pub fn load_group(input: &str, order_cap: usize) -> Result<FiniteGroup, CliError> {
    if let Some(path) = input.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{path}: {e}")))?;
        let json: GroupJson =
            serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{path}: invalid group JSON: {e}")))?;
        if json.order > order_cap {
            return Err(adiag_core::GroupError::OrderCapExceeded { order: json.order, cap: order_cap }.into());
        }
        return Ok(FiniteGroup::from_json(json)?);
    }
    Ok(parse(input)?.evaluate_with(&GroupBuilder::with_cap(order_cap))?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantReport {
    pub group: String,
    pub order: usize,
    pub degrees: Vec<usize>,
    pub am: String,
    pub am_float: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ad_direct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ad_direct_deviation: Option<f64>,
    pub maxdeg: usize,
    pub center_index: usize,
    pub comm_size: usize,
    pub nu_omega: BTreeMap<usize, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ad_closed_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plancherel_mass: Option<String>,
}

pub fn invariant_report(g: &FiniteGroup, table: &CharacterTable, exact: bool, direct: Option<f64>) -> InvariantReport {
    let record = record_from_table(g, table);
    let strat = stratification(table);
    let mut degrees = table.degrees.clone();
    degrees.sort_unstable();
    let am_float = to_f64(&record.am);
    InvariantReport {
        group: record.label,
        order: record.order,
        degrees,
        am: format(&record.am),
        am_float,
        ad_direct: direct,
        ad_direct_deviation: direct.map(|v| (v - am_float).abs()),
        maxdeg: record.maxdeg,
        center_index: record.center_index,
        comm_size: record.comm_size,
        nu_omega: strat.masses.iter().map(|(&n, m)| (n, format(m))).collect(),
        ad_closed_form: exact.then(|| format(&ad_closed_form(&strat))),
        plancherel_mass: exact.then(|| format(&plancherel_weights(table).total_mass())),
    }
}

pub fn invariant_markdown(r: &InvariantReport) -> String {
    let mut out = format!("# Invariants of {}\n\n| quantity | value |\n|---|---|\n", r.group);
    let degrees = r.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ");
    let mut row = |k: &str, v: String| {
        let _ = writeln!(out, "| {k} | {v} |");
    };
    row("order", r.order.to_string());
    row("degrees", degrees);
    row("am", format!("{} ({:.12})", r.am, r.am_float));
    if let (Some(v), Some(dev)) = (r.ad_direct, r.ad_direct_deviation) {
        row("adDirect", format!("{v:.12} (deviation {dev:.3e})"));
    }
    row("maxdeg", r.maxdeg.to_string());
    row("centerIndex", r.center_index.to_string());
    row("commSize", r.comm_size.to_string());
    for (n, m) in &r.nu_omega {
        row(&format!("nu(Omega_{n})"), m.clone());
    }
    if let Some(v) = &r.ad_closed_form {
        row("adClosedForm", v.clone());
    }
    if let Some(v) = &r.plancherel_mass {
        row("plancherelMass", v.clone());
    }
    out
}

pub fn cmd_invariants(global: &GlobalOpts, a: &InvariantsArgs) -> Result<Outcome, CliError> {
    let g = load_group(&a.group, global.max_order.unwrap_or(DEFAULT_ORDER_CAP))?;
    let mut stderr = String::new();
    let table = match cache_dir(global).map(TableCache::new) {
        Some(cache) => match cache.get_or_compute(&g) {
            Ok((t, _)) => t,
            Err(adiag_core::CacheError::Rep(e)) => return Err(e.into()),
            Err(e) => {
                let _ = writeln!(stderr, "warning: cache unavailable ({e}); computing directly");
                character_table(&g)?
            }
        },
        None => character_table(&g)?,
    };
    let direct = if a.check_direct {
        let irreps = explicit_irreps(&g, &table)?;
        Some(ad_direct(&g, &irreps, exec(global)))
    } else {
        None
    };
    let report = invariant_report(&g, &table, a.exact, direct);
    let stdout = match a.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serialises") + "\n",
        Format::Md => invariant_markdown(&report),
        other => return Err(CliError::usage(format!("invariants supports json or md, not {other:?}"))),
    };
    let tol = global.tol.unwrap_or(DIRECT_TOL);
    let code = match report.ad_direct_deviation {
        Some(dev) if dev >= tol => {
            let _ = writeln!(stderr, "direct anti-diagonal constant deviates by {dev:.3e} (tol {tol:.0e})");
            EXIT_VERIFY
        }
        _ => EXIT_OK,
    };
    Ok(Outcome { stdout, stderr, code })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanJson {
    pub max_order: usize,
    pub group_count: usize,
    pub nonabelian_count: usize,
    pub vacuous: bool,
    pub min_nonabelian_am: Option<String>,
    pub attainers: Vec<String>,
    pub below_bound: Vec<String>,
    pub counterexamples: Vec<String>,
    pub abelian_violations: Vec<String>,
    pub records: Vec<ScanRow>,
}

impl ScanJson {
    pub fn new(r: &MinimizerReport) -> Self {
        ScanJson {
            max_order: r.max_order,
            group_count: r.records.len(),
            nonabelian_count: r.nonabelian_count,
            vacuous: r.is_vacuous(),
            min_nonabelian_am: r.min_nonabelian_am.as_ref().map(format),
            attainers: r.attainers.clone(),
            below_bound: r.below_bound.clone(),
            counterexamples: r.counterexamples.clone(),
            abelian_violations: r.abelian_violations.clone(),
            records: r.records.iter().map(|x| x.to_row()).collect(),
        }
    }
}

fn read_catalog(path: &std::path::Path, max_order: usize) -> Result<Vec<FiniteGroup>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let builder = GroupBuilder::with_cap(DEFAULT_ORDER_CAP);
    let mut groups = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let e = parse(line)?;
        if e.order() <= max_order {
            groups.push(e.evaluate_with(&builder)?);
        }
    }
    Ok(groups)
}

pub fn cmd_scan(global: &GlobalOpts, a: &ScanArgs) -> Result<Outcome, CliError> {
    let max_order = global.max_order.unwrap_or(DEFAULT_SCAN_ORDER);
    if max_order > DEFAULT_ORDER_CAP {
        return Err(CliError::usage(format!("--max-order {max_order} exceeds the cap {DEFAULT_ORDER_CAP}")));
    }
    let ex = exec(global);
    let groups = match &a.catalog {
        Some(path) => read_catalog(path, max_order)?,
        None => catalog(max_order, ex),
    };
    let report = minimizer_scan(&groups, max_order, !a.no_direct, ex)?;
    let stdout = match a.format {
        Format::Csv => scan_csv(&report.records),
        Format::Json => serde_json::to_string_pretty(&ScanJson::new(&report)).expect("scan serialises") + "\n",
        other => return Err(CliError::usage(format!("scan supports csv or json, not {other:?}"))),
    };
    let summary = if report.is_vacuous() {
        format!("scan up to order {max_order}: {} groups, no non-abelian groups (vacuous)", report.records.len())
    } else {
        format!(
            "scan up to order {max_order}: {} groups, {} non-abelian, min am {}, {} attainers, {} counterexamples",
            report.records.len(),
            report.nonabelian_count,
            report.min_nonabelian_am.as_ref().map(format).unwrap_or_default(),
            report.attainers.len(),
            report.counterexamples.len() + report.below_bound.len() + report.abelian_violations.len()
        )
    };
    let code = if report.passes() { EXIT_OK } else { EXIT_VERIFY };
    Ok(Outcome { stdout, stderr: summary + "\n", code })
}

pub fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::usage(format!("invalid range `{s}`, expected a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

pub fn cmd_family(global: &GlobalOpts, a: &FamilyArgs) -> Result<Outcome, CliError> {
    let (lo, hi) = parse_range(&a.n_range)?;
    let opts =
        FamilyOptions { order_cap: global.max_order.unwrap_or(DEFAULT_ORDER_CAP), direct: false, exec: exec(global) };
    let family = match a.family {
        FamilyKind::Dihedral => dihedral_family(lo, hi, opts)?,
        FamilyKind::Shift => shift_family(a.p, lo, hi, opts)?,
    };
    let stdout = match a.format {
        Format::Csv => family_csv(&family),
        Format::Tsv => family_tsv(&family),
        other => return Err(CliError::usage(format!("family supports csv or tsv, not {other:?}"))),
    };
    let conv = convergence_report(&family, a.threshold);
    let divisors = degree_divisor_check(&family);
    let decay = char_mass_decay(&family);
    let mut stderr = family_summary(&family, &conv) + "\n";
    if !divisors.passes() {
        let _ = writeln!(stderr, "degrees not dividing {}: {:?}", divisors.m, divisors.counterexamples);
    }
    if !decay.passes() {
        let _ = writeln!(stderr, "character mass decay violations: {:?} {:?}", decay.mismatches, decay.increases);
    }
    let code = if conv.passes() && divisors.passes() && decay.passes() { EXIT_OK } else { EXIT_VERIFY };
    Ok(Outcome { stdout, stderr, code })
}

pub fn cmd_verify(global: &GlobalOpts, a: &VerifyArgs) -> Result<Outcome, CliError> {
    let cfg = VerifyConfig {
        seed: global.seed,
        max_order: global.max_order.unwrap_or(DEFAULT_VERIFY_ORDER),
        tol: global.tol,
        exec: exec(global),
    };
    let wants = |s: Suite| a.suite == Suite::All || a.suite == s;
    let mut results: Vec<CheckResult> = Vec::new();
    let needs_groups =
        [Suite::Orthogonality, Suite::Plancherel, Suite::Coefficients, Suite::Theorems].into_iter().any(wants);
    let groups = if needs_groups { verify::prepare_catalog(cfg.max_order, cfg.exec)? } else { Vec::new() };
    if wants(Suite::Orthogonality) {
        results.extend(verify::orthogonality_suite(&cfg, &groups));
    }
    if wants(Suite::Flip) {
        results.extend(verify::flip_suite(&cfg));
    }
    if wants(Suite::Plancherel) {
        results.extend(verify::plancherel_suite(&cfg, &groups));
    }
    if wants(Suite::Coefficients) {
        results.extend(verify::coefficients_suite(&cfg, &groups));
    }
    if wants(Suite::Theorems) {
        results.extend(verify::theorems_suite(&cfg, &groups)?);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let mut stdout = String::new();
    for r in &results {
        let _ = writeln!(stdout, "{r}");
    }
    let _ =
        writeln!(stdout, "{} checks, {failed} failed (seed {}, max order {})", results.len(), cfg.seed, cfg.max_order);
    Ok(Outcome { code: if failed == 0 { EXIT_OK } else { EXIT_VERIFY }, ..Outcome::ok(stdout) })
}
