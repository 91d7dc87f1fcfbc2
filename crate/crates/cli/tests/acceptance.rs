//! Acceptance criteria, one pass/fail line each. Exits non-zero if any fail.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use adiag_cli::verify::{
    coefficients_suite, flip_suite, monotonicity, multiplicativity, plancherel_suite, prepare_catalog, CheckResult,
    VerifyConfig,
};
use adiag_core::cache::TableCache;
use adiag_core::catalog::catalog;
use adiag_core::character::character_table;
use adiag_core::classify::{
    center_commutator_check, commutator_mass_check, minimal_ad_mass_check, minimizer_scan, record_from_table,
    MinimizerReport,
};
use adiag_core::exec::Execution;
use adiag_core::expr::{evaluate, parse};
use adiag_core::families::{
    convergence_report, degree_divisor_check, dihedral_closed_form, dihedral_family, shift_closed_form, shift_family,
    Family, FamilyOptions,
};
use adiag_core::harmonic::{ad_direct, johnson_am};
use adiag_core::rational::{format, integer, ratio, to_f64};
use adiag_core::FiniteGroup;

const SEED: u64 = 20;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn from_checks(checks: &[CheckResult]) -> Outcome {
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.to_string()).collect();
    let detail = checks.iter().map(|c| format!("{} ({})", c.name, c.detail)).collect::<Vec<_>>().join("; ");
    outcome(failed.is_empty(), if failed.is_empty() { detail } else { failed.join("; ") })
}

fn config(max_order: usize) -> VerifyConfig {
    VerifyConfig { seed: SEED, max_order, tol: None, exec: Execution::default() }
}

fn scan48() -> MinimizerReport {
    minimizer_scan(&catalog(48, Execution::default()), 48, false, Execution::default()).expect("scan succeeds")
}

fn johnson_vs_direct() -> Outcome {
    let groups = prepare_catalog(32, Execution::default()).expect("tables");
    let mut worst = (0.0f64, String::new());
    for p in &groups {
        let dev = (ad_direct(&p.group, &p.irreps, Execution::default()) - to_f64(&johnson_am(&p.table))).abs();
        if dev > worst.0 || dev.is_nan() {
            worst = (dev, p.group.label().to_string());
        }
    }
    outcome(
        groups.len() >= 20 && worst.0 < 1e-7,
        format!("{} groups of order <= 32, worst |adDirect - am| {:.3e} at {}", groups.len(), worst.0, worst.1),
    )
}

fn reference_values() -> Outcome {
    let am = |s: &str| johnson_am(&character_table(&evaluate(s).unwrap()).unwrap());
    let (d4, q8) = (am("D4"), am("Q8"));
    let abelian: Vec<FiniteGroup> = catalog(48, Execution::default()).into_iter().filter(|g| g.is_abelian()).collect();
    let bad: Vec<&str> =
        abelian.iter().filter(|g| johnson_am(&character_table(g).unwrap()) != integer(1)).map(|g| g.label()).collect();
    outcome(
        d4 == ratio(3, 2) && q8 == ratio(3, 2) && bad.is_empty(),
        format!(
            "am(D4) = {}, am(Q8) = {}, {} abelian groups with am 1, exceptions {bad:?}",
            format(&d4),
            format(&q8),
            abelian.len()
        ),
    )
}

fn lower_bound(scan: &MinimizerReport) -> Outcome {
    let in_gap: Vec<&str> = scan
        .records
        .iter()
        .filter(|r| !r.is_abelian && r.am > integer(1) && r.am < ratio(3, 2))
        .map(|r| r.label.as_str())
        .collect();
    let min = scan.min_nonabelian_am.clone();
    outcome(
        min == Some(ratio(3, 2)) && in_gap.is_empty() && scan.below_bound.is_empty(),
        format!(
            "min non-abelian am {} over {} groups of order <= 48, values in (1, 3/2): {in_gap:?}",
            min.as_ref().map(format).unwrap_or_default(),
            scan.nonabelian_count
        ),
    )
}

fn minimizers(scan: &MinimizerReport) -> Outcome {
    outcome(
        scan.counterexamples.is_empty(),
        format!(
            "{} groups, {} attainers all with centerIndex 4, counterexamples {:?}",
            scan.records.len(),
            scan.attainers.len(),
            scan.counterexamples
        ),
    )
}

fn equivalences() -> Outcome {
    let groups = catalog(48, Execution::default());
    let failures: Vec<String> = Execution::default()
        .map(&groups, |g| {
            let t = character_table(g).unwrap();
            let mut bad = Vec::new();
            if !center_commutator_check(g, &t).unwrap().holds() {
                bad.push(format!("{}: centre index 4 characterisation", g.label()));
            }
            if commutator_mass_check(g, &t).is_some_and(|e| !e.holds()) {
                bad.push(format!("{}: |comm| = 2 vs nu(Omega_1) = 1/2", g.label()));
            }
            if minimal_ad_mass_check(g, &t).is_some_and(|e| !e.holds()) {
                bad.push(format!("{}: am = 3/2 vs degree masses", g.label()));
            }
            bad
        })
        .into_iter()
        .flatten()
        .collect();
    outcome(failures.is_empty(), format!("{} groups of order <= 48, failures {failures:?}", groups.len()))
}

fn flip() -> Outcome {
    from_checks(&flip_suite(&config(0)))
}

fn coefficients() -> Outcome {
    let groups = prepare_catalog(24, Execution::default()).expect("tables");
    let checks: Vec<CheckResult> = coefficients_suite(&config(24), &groups)
        .into_iter()
        .filter(|c| c.name.contains("inequivalent") || c.name.contains("same representative"))
        .collect();
    let mut o = from_checks(&checks);
    o.detail = format!("{} groups of order <= 24: {}", groups.len(), o.detail);
    o
}

fn plancherel() -> Outcome {
    let groups = prepare_catalog(24, Execution::default()).expect("tables");
    from_checks(&plancherel_suite(&config(24), &groups))
}

fn products() -> Outcome {
    let cases = multiplicativity(Execution::default()).expect("tables");
    let bad: Vec<String> =
        cases.iter().filter(|c| c.product != c.factors).map(|c| format!("{} x {}", c.left, c.right)).collect();
    let d4d4 = cases.iter().find(|c| c.left == "D4" && c.right == "D4").map(|c| format(&c.product));
    outcome(
        cases.len() >= 10 && bad.is_empty() && d4d4.as_deref() == Some("9/4"),
        format!("{} pairs, am(D4 x D4) = {}, failures {bad:?}", cases.len(), d4d4.unwrap_or_default()),
    )
}

fn subgroups() -> Outcome {
    let cases = monotonicity(Execution::default()).expect("tables");
    let bad: Vec<&str> = cases.iter().filter(|c| c.sub_ad > c.parent_ad).map(|c| c.description.as_str()).collect();
    outcome(cases.len() >= 15 && bad.is_empty(), format!("{} embeddings, failures {bad:?}", cases.len()))
}

fn nu_bound(scan: &MinimizerReport) -> Outcome {
    let half = ratio(1, 2);
    let bad: Vec<&str> = scan
        .records
        .iter()
        .filter(|r| !r.is_abelian && (r.nu_omega1 > half || (r.nu_omega1 == half) != r.has_comm2))
        .map(|r| r.label.as_str())
        .collect();
    let equal = scan.records.iter().filter(|r| !r.is_abelian && r.nu_omega1 == half).count();
    outcome(
        bad.is_empty(),
        format!("{} non-abelian groups, {equal} with nu(Omega_1) = 1/2, failures {bad:?}", scan.nonabelian_count),
    )
}

fn family_line(f: &Family, threshold: f64, closed: impl Fn(usize) -> adiag_core::rational::Rational) -> (bool, String) {
    let conv = convergence_report(f, threshold);
    let div = degree_divisor_check(f);
    let closed_ok = f.points.iter().all(|p| p.am == closed(p.n));
    let ok = conv.passes() && div.passes() && closed_ok;
    let (lo, hi) = f.n_range().unwrap();
    (
        ok,
        format!(
            "{} n={lo}..{hi}: closed form {}, final gap {}, degrees divide {} {}",
            f.name,
            if closed_ok { "exact" } else { "MISMATCH" },
            conv.final_gap.as_ref().map(format).unwrap_or_default(),
            div.m,
            if div.passes() { "yes" } else { "NO" }
        ),
    )
}

fn surrogate() -> Outcome {
    let opts = FamilyOptions::default();
    let dihedral = dihedral_family(3, 100, opts).unwrap();
    let shift2 = shift_family(2, 2, 8, opts).unwrap();
    let shift3 = shift_family(3, 2, 4, opts).unwrap();
    let lines = [
        family_line(&dihedral, 0.02, dihedral_closed_form),
        family_line(&shift2, 0.125, |n| shift_closed_form(2, n)),
        family_line(&shift3, 0.125, |n| shift_closed_form(3, n)),
    ];
    outcome(
        lines.iter().all(|l| l.0),
        format!("{} (asymptotic evidence)", lines.iter().map(|l| l.1.as_str()).collect::<Vec<_>>().join("; ")),
    )
}

fn run_cli(args: &[&str], cache: &Path) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_adiag"))
        .args(args)
        .env("ADIAG_CACHE_DIR", cache)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn parser_and_cli() -> Outcome {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/corpus.txt")).unwrap();
    let corpus: Vec<&str> = text.lines().filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let roundtrip = corpus
        .iter()
        .filter(|s| {
            let tree = parse(s).unwrap();
            parse(&tree.to_string()).as_ref() == Ok(&tree)
        })
        .count();

    let dir = tempfile::tempdir().unwrap();
    let seed = SEED.to_string();
    let mut identical = 0;
    let runs: [Vec<&str>; 3] = [
        vec!["invariants", "Dic3 x C2", "--check-direct", "--exact"],
        vec!["scan", "--max-order", "16", "--format", "json"],
        vec!["verify", "--suite", "plancherel", "--max-order", "16", "--seed", &seed],
    ];
    for args in &runs {
        if run_cli(args, dir.path()) == run_cli(args, dir.path()) {
            identical += 1;
        }
    }

    let cache_dir = tempfile::tempdir().unwrap();
    let cold = run_cli(&["invariants", "S4", "--exact"], cache_dir.path());
    let warm = run_cli(&["invariants", "S4", "--exact"], cache_dir.path());
    let g = evaluate("S4").unwrap();
    let cache = TableCache::new(cache_dir.path());
    let reloaded = cache.load(&g).unwrap().expect("entry written by the CLI");
    let fresh = character_table(&g).unwrap();
    let same_invariants = reloaded.degrees == fresh.degrees
        && johnson_am(&reloaded) == johnson_am(&fresh)
        && record_from_table(&g, &reloaded) == record_from_table(&g, &fresh);

    outcome(
        corpus.len() == 20 && roundtrip == 20 && identical == runs.len() && cold == warm && same_invariants,
        format!(
            "{roundtrip}/{} expressions round-trip, {identical}/{} reports byte-identical, cache reload {}",
            corpus.len(),
            runs.len(),
            if cold == warm && same_invariants { "identical" } else { "DIFFERS" }
        ),
    )
}

fn main() {
    let mut failed = 0;
    let mut report = |n: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {n:>2} {name}: {} [{:.2}s]", o.detail, start.elapsed().as_secs_f64());
        if !o.passed {
            failed += 1;
        }
    };
    let scan = scan48();
    report(1, "Johnson formula equals the direct anti-diagonal sum", &mut johnson_vs_direct);
    report(2, "values for D4, Q8 and abelian groups", &mut reference_values);
    report(3, "sharp lower bound 3/2", &mut || lower_bound(&scan));
    report(4, "minimisers are exactly centre index 4", &mut || minimizers(&scan));
    report(5, "structural equivalences", &mut equivalences);
    report(6, "flip operator", &mut flip);
    report(7, "anti-diagonal Fourier coefficients", &mut coefficients);
    report(8, "Plancherel identity", &mut plancherel);
    report(9, "multiplicativity over direct products", &mut products);
    report(10, "monotonicity under subgroups", &mut subgroups);
    report(11, "linear-character mass at most 1/2", &mut || nu_bound(&scan));
    report(12, "finite-quotient families", &mut surrogate);
    report(13, "parser, determinism and cache", &mut parser_and_cli);
    println!("{} criteria, {failed} failed", 13);
    if failed > 0 {
        std::process::exit(1);
    }
}
