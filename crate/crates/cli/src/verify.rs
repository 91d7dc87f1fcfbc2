//! Verification suites shared by `adiag verify` and the acceptance harness.

use std::fmt;

use adiag_core::catalog::catalog;
use adiag_core::character::{character_table, CharacterTable, ORTHOGONALITY_TOL};
use adiag_core::classify::{
    anticommute_check, center_commutator_check, center_quotient_cyclic, commutator_involution_check,
    commutator_mass_check, minimal_ad_mass_check, minimizer_scan, record_from_table, three_halves, ANTICOMMUTE_TOL,
};
use adiag_core::error::RepError;
use adiag_core::exec::Execution;
use adiag_core::expr::evaluate;
use adiag_core::group::{
    center, centralizer, derived_subgroup, direct_product, subgroup_generated, FiniteGroup, Subgroup,
};
use adiag_core::harmonic::{
    ad_closed_form, ad_direct, antidiag_coefficient_check, flip_operator, flip_trace_identity, johnson_am,
    plancherel_weights, stratification, verify_plancherel_identity,
};
use adiag_core::irreps::{explicit_irreps, verify_schur_orthogonality, UnitaryIrrep, IRREP_TOL};
use adiag_core::linalg::{polar_unitary, CMatrix};
use adiag_core::rational::{format, one, ratio, Rational};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SCHUR_TOL: f64 = 1e-8;
pub const FLIP_TOL: f64 = 1e-10;
pub const FLIP_MAX_DIM: usize = 8;
pub const FLIP_IDENTITY_MAX_DIM: usize = 6;
pub const FLIP_PAIRS: usize = 100;
pub const PLANCHEREL_TOL: f64 = 1e-8;
pub const PLANCHEREL_PAIRS: usize = 50;
pub const COEFFICIENT_TOL: f64 = 1e-6;
pub const DIRECT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(suite: &'static str, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { suite, name: name.into(), passed, detail: detail.into() }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {} ({})", self.suite, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    pub max_order: usize,
    pub tol: Option<f64>,
    pub exec: Execution,
}

impl VerifyConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// A group with its character table and explicit irreps.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub group: FiniteGroup,
    pub table: CharacterTable,
    pub irreps: Vec<UnitaryIrrep>,
}

pub fn prepare(groups: Vec<FiniteGroup>, exec: Execution) -> Result<Vec<Prepared>, RepError> {
    exec.map(&groups, |g| {
        let table = character_table(g)?;
        let irreps = explicit_irreps(g, &table)?;
        Ok(Prepared { group: g.clone(), table, irreps })
    })
    .into_iter()
    .collect()
}

pub fn prepare_catalog(max_order: usize, exec: Execution) -> Result<Vec<Prepared>, RepError> {
    prepare(catalog(max_order, exec), exec)
}

/// Largest value with the label that produced it.
fn worst<'a>(items: impl IntoIterator<Item = (f64, &'a str)>) -> (f64, &'a str) {
    items.into_iter().fold((0.0, "-"), |acc, (v, l)| if v > acc.0 || v.is_nan() { (v, l) } else { acc })
}

fn deviation_check(suite: &'static str, name: &str, tol: f64, (dev, label): (f64, &str)) -> CheckResult {
    CheckResult::new(suite, name, dev < tol, format!("worst {dev:.3e} at {label}, tol {tol:.0e}"))
}

fn list_check(suite: &'static str, name: &str, failures: &[String], total: usize) -> CheckResult {
    let detail = if failures.is_empty() {
        format!("{total} cases")
    } else {
        format!("{} of {total} fail: {}", failures.len(), failures.join("; "))
    };
    CheckResult::new(suite, name, failures.is_empty(), detail)
}

fn group_rng(seed: u64, g: &FiniteGroup) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ g.seed())
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

pub fn random_matrix(rng: &mut impl Rng, d: usize) -> CMatrix {
    CMatrix::from_vec(d, d, random_vector(rng, d * d))
}

pub fn orthogonality_suite(cfg: &VerifyConfig, groups: &[Prepared]) -> Vec<CheckResult> {
    const S: &str = "orthogonality";
    let table_tol = cfg.tol(ORTHOGONALITY_TOL);
    let irrep_tol = cfg.tol(IRREP_TOL);
    let schur_tol = cfg.tol(SCHUR_TOL);
    let rows = worst(groups.iter().map(|p| (p.table.row_orthogonality_defect(), p.group.label())));
    let cols = worst(groups.iter().map(|p| (p.table.column_orthogonality_defect(), p.group.label())));
    let hom =
        worst(groups.iter().flat_map(|p| p.irreps.iter().map(|r| (r.homomorphism_defect(&p.group), p.group.label()))));
    let unit = worst(groups.iter().flat_map(|p| p.irreps.iter().map(|r| (r.unitarity_defect(), p.group.label()))));
    let chars =
        worst(groups.iter().flat_map(|p| {
            p.irreps.iter().enumerate().map(|(i, r)| (r.character_defect(&p.table, i), p.group.label()))
        }));
    let schur = worst(groups.iter().map(|p| (verify_schur_orthogonality(&p.irreps).max_deviation, p.group.label())));
    let mass: Vec<String> = groups
        .iter()
        .filter(|p| plancherel_weights(&p.table).total_mass() != one())
        .map(|p| p.group.label().to_string())
        .collect();
    vec![
        deviation_check(S, "character rows", table_tol, rows),
        deviation_check(S, "character columns", table_tol, cols),
        deviation_check(S, "irrep homomorphism", irrep_tol, hom),
        deviation_check(S, "irrep unitarity", irrep_tol, unit),
        deviation_check(S, "irrep characters", irrep_tol, chars),
        deviation_check(S, "Schur orthogonality", schur_tol, schur),
        list_check(S, "sum of d^2 equals |G|, Plancherel mass 1", &mass, groups.len()),
    ]
}

pub fn flip_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    const S: &str = "flip";
    let tol = cfg.tol(FLIP_TOL);
    let mut out = Vec::new();
    let mut norm_failures = Vec::new();
    for d in 1..=FLIP_MAX_DIM {
        let x = flip_operator(d);
        let exact = x.exact_trace_norm();
        let numeric = x.trace_norm();
        if exact != Some(d * d)
            || (numeric - (d * d) as f64).abs() > tol * (d * d) as f64
            || x.involution_defect() != 0.0
        {
            norm_failures.push(format!("d={d}: exact {exact:?}, svd {numeric}"));
        }
        if (x.trace() - Complex64::new(d as f64, 0.0)).norm() != 0.0 {
            norm_failures.push(format!("d={d}: trace {}", x.trace()));
        }
    }
    out.push(list_check(S, &format!("trace norm d^2 for d<={FLIP_MAX_DIM}"), &norm_failures, FLIP_MAX_DIM));
    let mut worst_dev = (0.0f64, 0usize);
    for d in 1..=FLIP_IDENTITY_MAX_DIM {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (d as u64).wrapping_mul(0x9E37_79B9));
        for _ in 0..FLIP_PAIRS {
            let (b, c) = (random_matrix(&mut rng, d), random_matrix(&mut rng, d));
            let dev = flip_trace_identity(&b, &c).expect("square matrices of equal size");
            if dev > worst_dev.0 || dev.is_nan() {
                worst_dev = (dev, d);
            }
        }
    }
    out.push(CheckResult::new(
        S,
        format!("tr(X(B⊗C)) = tr(BC), {FLIP_PAIRS} pairs per d<={FLIP_IDENTITY_MAX_DIM}"),
        worst_dev.0 < tol,
        format!("worst {:.3e} at d={}, tol {tol:.0e}", worst_dev.0, worst_dev.1),
    ));
    out
}

pub fn plancherel_suite(cfg: &VerifyConfig, groups: &[Prepared]) -> Vec<CheckResult> {
    let tol = cfg.tol(PLANCHEREL_TOL);
    let devs: Vec<(f64, &str)> = cfg.exec.map_range(0..groups.len(), |i| {
        let p = &groups[i];
        let mut rng = group_rng(cfg.seed, &p.group);
        let n = p.group.order();
        let pairs: Vec<_> =
            (0..PLANCHEREL_PAIRS).map(|_| (random_vector(&mut rng, n), random_vector(&mut rng, n))).collect();
        (verify_plancherel_identity(&p.irreps, &pairs), p.group.label())
    });
    vec![deviation_check(
        "plancherel",
        &format!("<f,g> identity, {PLANCHEREL_PAIRS} pairs on {} groups", groups.len()),
        tol,
        worst(devs),
    )]
}

pub fn coefficients_suite(cfg: &VerifyConfig, groups: &[Prepared]) -> Vec<CheckResult> {
    const S: &str = "coefficients";
    let tol = cfg.tol(COEFFICIENT_TOL);
    let direct_tol = cfg.tol(DIRECT_TOL);
    struct Row<'a> {
        label: &'a str,
        order: f64,
        off: f64,
        same: f64,
        conj: f64,
        direct: f64,
    }
    let rows: Vec<Row> = cfg.exec.map_range(0..groups.len(), |i| {
        let p = &groups[i];
        let g = &p.group;
        let mut row = Row { label: g.label(), order: g.order() as f64, off: 0.0, same: 0.0, conj: 0.0, direct: 0.0 };
        for (i, pi) in p.irreps.iter().enumerate() {
            for (j, sigma) in p.irreps.iter().enumerate() {
                let r = antidiag_coefficient_check(g, pi, sigma);
                if i == j {
                    row.same = row.same.max(r.deviation);
                } else {
                    row.off = row.off.max(r.deviation);
                }
            }
        }
        let mut rng = group_rng(cfg.seed, g);
        for pi in p.irreps.iter().filter(|pi| pi.degree > 1) {
            let u = polar_unitary(&random_matrix(&mut rng, pi.degree));
            let conj = UnitaryIrrep {
                degree: pi.degree,
                character: pi.character,
                matrices: pi.matrices.iter().map(|m| &u * m * u.adjoint()).collect(),
            };
            row.conj = row.conj.max(antidiag_coefficient_check(g, pi, &conj).deviation);
        }
        row.direct =
            (ad_direct(g, &p.irreps, Execution::Serial) - adiag_core::rational::to_f64(&johnson_am(&p.table))).abs();
        row
    });
    vec![
        deviation_check(S, "inequivalent pairs vanish", tol, worst(rows.iter().map(|r| (r.off, r.label)))),
        deviation_check(
            S,
            "same representative gives (|G|/d) X_d, relative to |G|",
            tol,
            worst(rows.iter().map(|r| (r.same / r.order, r.label))),
        ),
        deviation_check(
            S,
            "conjugated copy has trace norm |G| d, relative to |G|",
            tol,
            worst(rows.iter().map(|r| (r.conj / r.order, r.label))),
        ),
        deviation_check(
            S,
            "direct sum equals Johnson's formula",
            direct_tol,
            worst(rows.iter().map(|r| (r.direct, r.label))),
        ),
    ]
}

/// Catalog pairs `(G, H)` for `am(G x H) = am(G) am(H)`.
pub const PRODUCT_PAIRS: &[(&str, &str)] = &[
    ("D4", "D4"),
    ("Q8", "S3"),
    ("D4", "C2"),
    ("S3", "S3"),
    ("A4", "C3"),
    ("Q8", "Q8"),
    ("D5", "C4"),
    ("Heis3", "C2"),
    ("S4", "C2"),
    ("D4", "S3"),
    ("Dic3", "D4"),
    ("A4", "S3"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ProductCase {
    pub left: String,
    pub right: String,
    pub product: Rational,
    pub factors: Rational,
}

pub fn multiplicativity(exec: Execution) -> Result<Vec<ProductCase>, RepError> {
    let am = |g: &FiniteGroup| -> Result<Rational, RepError> { Ok(johnson_am(&character_table(g)?)) };
    exec.map(PRODUCT_PAIRS, |(l, r)| {
        let g = evaluate(l).expect("built-in expression");
        let h = evaluate(r).expect("built-in expression");
        let gh = direct_product(&g, &h).expect("product within the order cap");
        Ok(ProductCase { left: l.to_string(), right: r.to_string(), product: am(&gh)?, factors: am(&g)? * am(&h)? })
    })
    .into_iter()
    .collect()
}

/// How a subgroup is selected from its parent.
#[derive(Debug, Clone, Copy)]
pub enum Embedding {
    Generated(&'static str, &'static [usize]),
    Derived(&'static str),
    Center(&'static str),
    Centralizer(&'static str, usize),
}

/// Dihedral elements are `r^k s^j = k + n j`, dicyclic `a^k x^j = k + 2n j`,
/// and `(g, h)` in a product is `g |H| + h`.
pub const EMBEDDINGS: &[Embedding] = &[
    Embedding::Generated("D4", &[1]),
    Embedding::Generated("D4", &[2, 4]),
    Embedding::Generated("D4", &[4]),
    Embedding::Generated("D4 x C2", &[2, 8]),
    Embedding::Generated("D4 x C2", &[1]),
    Embedding::Generated("Q8", &[1]),
    Embedding::Generated("Q8 x C2", &[2, 8]),
    Embedding::Generated("D6", &[2, 6]),
    Embedding::Generated("Dic3", &[1]),
    Embedding::Generated("S4", &[1, 2]),
    Embedding::Generated("A5", &[1, 2]),
    Embedding::Generated("S3 x S3", &[1, 6]),
    Embedding::Derived("S4"),
    Embedding::Derived("A4"),
    Embedding::Derived("S3"),
    Embedding::Derived("D4 x D4"),
    Embedding::Derived("S3 x S3"),
    Embedding::Center("Heis3"),
    Embedding::Center("Q8 x C2"),
    Embedding::Centralizer("D6", 1),
    Embedding::Centralizer("S4", 1),
];

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityCase {
    pub description: String,
    pub subgroup_order: usize,
    pub parent_order: usize,
    pub sub_ad: Rational,
    pub parent_ad: Rational,
}

fn closed_ad(g: &FiniteGroup) -> Result<Rational, RepError> {
    Ok(ad_closed_form(&stratification(&character_table(g)?)))
}

pub fn monotonicity(exec: Execution) -> Result<Vec<MonotonicityCase>, RepError> {
    exec.map(EMBEDDINGS, |e| {
        let (parent_expr, description) = match e {
            Embedding::Generated(p, gens) => (p, format!("<{gens:?}> in {p}")),
            Embedding::Derived(p) => (p, format!("[G,G] in {p}")),
            Embedding::Center(p) => (p, format!("Z(G) in {p}")),
            Embedding::Centralizer(p, x) => (p, format!("C({x}) in {p}")),
        };
        let g = evaluate(parent_expr).expect("built-in expression");
        let sub: Subgroup = match e {
            Embedding::Generated(_, gens) => subgroup_generated(&g, gens).expect("generators in range"),
            Embedding::Derived(_) => derived_subgroup(&g),
            Embedding::Center(_) => center(&g),
            Embedding::Centralizer(_, x) => centralizer(&g, *x).expect("element in range"),
        };
        let h = sub.to_group(description.clone());
        Ok(MonotonicityCase {
            description,
            subgroup_order: h.order(),
            parent_order: g.order(),
            sub_ad: closed_ad(&h)?,
            parent_ad: closed_ad(&g)?,
        })
    })
    .into_iter()
    .collect()
}

pub fn theorems_suite(cfg: &VerifyConfig, groups: &[Prepared]) -> Result<Vec<CheckResult>, RepError> {
    const S: &str = "theorems";
    let plain: Vec<FiniteGroup> = groups.iter().map(|p| p.group.clone()).collect();
    let scan = minimizer_scan(&plain, cfg.max_order, false, cfg.exec)?;
    let mut out = Vec::new();
    let min = scan.min_nonabelian_am.as_ref().map(format).unwrap_or_else(|| "none (vacuous)".into());
    let min_ok = scan.min_nonabelian_am.as_ref().is_none_or(|m| *m == three_halves());
    out.push(CheckResult::new(
        S,
        "minimum non-abelian am is 3/2",
        min_ok && scan.below_bound.is_empty(),
        format!("min {min} over {} non-abelian groups; below 3/2: {:?}", scan.nonabelian_count, scan.below_bound),
    ));
    out.push(list_check(
        S,
        "am = 1 for abelian groups",
        &scan.abelian_violations,
        scan.records.len() - scan.nonabelian_count,
    ));
    out.push(list_check(S, "am = 3/2 iff centerIndex = 4", &scan.counterexamples, scan.records.len()));

    let nonabelian: Vec<&Prepared> = groups.iter().filter(|p| !p.group.is_abelian()).collect();
    let mut g_fail = Vec::new();
    let mut e_fail = Vec::new();
    let mut a_fail = Vec::new();
    let mut nu_fail = Vec::new();
    let mut cyclic = Vec::new();
    let mut involution = Vec::new();
    let mut closed = Vec::new();
    let mut anti = (0.0f64, "-");
    let mut anti_groups = 0;
    let half = ratio(1, 2);
    for p in groups {
        let (g, t) = (&p.group, &p.table);
        let label = g.label().to_string();
        let report = center_commutator_check(g, t)?;
        if !report.holds() {
            g_fail.push(format!("{label}: {report:?}"));
        }
        if ad_closed_form(&stratification(t)) != johnson_am(t) {
            closed.push(label.clone());
        }
        if g.is_abelian() {
            continue;
        }
        if !commutator_mass_check(g, t).is_some_and(|e| e.holds()) {
            e_fail.push(label.clone());
        }
        if !minimal_ad_mass_check(g, t).is_some_and(|e| e.holds()) {
            a_fail.push(label.clone());
        }
        let rec = record_from_table(g, t);
        if rec.nu_omega1 > half || (rec.nu_omega1 == half) != rec.has_comm2 {
            nu_fail.push(format!("{label}: nu {} comm {}", format(&rec.nu_omega1), rec.comm_size));
        }
        if center_quotient_cyclic(g) || rec.center_index < 4 {
            cyclic.push(label.clone());
        }
        if commutator_involution_check(g) == Some(false) {
            involution.push(label.clone());
        }
        if let Some(r) = anticommute_check(g, &p.irreps) {
            anti_groups += 1;
            let dev = r.max_anticommutator.max(r.max_central_defect);
            if dev > anti.0 || dev.is_nan() {
                anti = (dev, g.label());
            }
        }
    }
    let n = groups.len();
    let na = nonabelian.len();
    out.push(list_check(S, "centerIndex 4 iff (|comm| 2 and maxdeg 2), with separation", &g_fail, n));
    out.push(list_check(S, "|comm| = 2 iff nu(Omega_1) = 1/2", &e_fail, na));
    out.push(list_check(S, "am = 3/2 iff nu(Omega_1) = 1/2 and no degree >= 3", &a_fail, na));
    out.push(list_check(S, "nu(Omega_1) <= 1/2 with equality iff |comm| = 2", &nu_fail, na));
    out.push(list_check(S, "G/Z(G) not cyclic for non-abelian G", &cyclic, na));
    out.push(list_check(S, "commutator of |comm| = 2 groups is a central involution", &involution, na));
    out.push(list_check(S, "closed-form anti-diagonal constant equals Johnson's formula", &closed, n));
    let anti_tol = cfg.tol(ANTICOMMUTE_TOL);
    out.push(CheckResult::new(
        S,
        "non-commuting elements anti-commute when |comm| = 2",
        anti.0 < anti_tol,
        format!("{anti_groups} groups, worst {:.3e} at {}, tol {anti_tol:.0e}", anti.0, anti.1),
    ));

    let products = multiplicativity(cfg.exec)?;
    let bad: Vec<String> = products
        .iter()
        .filter(|c| c.product != c.factors)
        .map(|c| format!("{} x {}: {} vs {}", c.left, c.right, format(&c.product), format(&c.factors)))
        .collect();
    out.push(list_check(S, "am(G x H) = am(G) am(H)", &bad, products.len()));
    let embeddings = monotonicity(cfg.exec)?;
    let bad: Vec<String> = embeddings
        .iter()
        .filter(|c| c.sub_ad > c.parent_ad || c.parent_order % c.subgroup_order != 0)
        .map(|c| format!("{}: {} > {}", c.description, format(&c.sub_ad), format(&c.parent_ad)))
        .collect();
    out.push(list_check(S, "AD(H) <= AD(G) for subgroups", &bad, embeddings.len()));
    Ok(out)
}
