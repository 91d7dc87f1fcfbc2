//! Parametrised families of finite groups whose amenability constants
//! approach the maximal degree `p` of an infinite semidirect product
//! `N ⋊ C_p`. The dihedral family `C_n ⋊ C_2` and the coordinate-shift
//! family `(C_n)^p ⋊ C_p` are finite quotients; every statement about the
//! limit drawn from them is asymptotic evidence only.

use crate::character::character_table;
use crate::error::FamilyError;
use crate::exec::Execution;
use crate::expr::parse;
use crate::group::{derived_subgroup, GroupBuilder, DEFAULT_ORDER_CAP};
use crate::harmonic::{ad_closed_form, ad_direct, johnson_am, nu_omega1, stratification};
use crate::irreps::explicit_irreps;
use crate::rational::{format, integer, ratio, to_f64, Rational};

pub const DIRECT_ORDER_CAP: usize = crate::classify::DIRECT_ORDER_CAP;
pub const DIRECT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyPoint {
    pub n: usize,
    /// Points are compared for monotonicity only within a subsequence.
    pub subsequence: usize,
    pub label: String,
    pub order: usize,
    pub am: Rational,
    pub ad_closed: Rational,
    pub closed_form: Option<Rational>,
    pub ad_direct: Option<f64>,
    pub maxdeg: usize,
    pub nu_omega1: Rational,
    /// Sorted ascending.
    pub degrees: Vec<usize>,
    pub derived_order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub name: String,
    /// Order of the cyclic top group; every degree must divide it.
    pub m: usize,
    /// The limiting value `p`.
    pub limit: Rational,
    pub points: Vec<FamilyPoint>,
}

impl Family {
    pub fn gap(&self, point: &FamilyPoint) -> Rational {
        &self.limit - &point.am
    }

    pub fn n_range(&self) -> Option<(usize, usize)> {
        Some((self.points.first()?.n, self.points.last()?.n))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FamilyOptions {
    pub order_cap: usize,
    /// Run the direct anti-diagonal sum on points of order at most
    /// [`DIRECT_ORDER_CAP`].
    pub direct: bool,
    pub exec: Execution,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions { order_cap: DEFAULT_ORDER_CAP, direct: false, exec: Execution::default() }
    }
}

/// `am(D_n)`: `2 - 2/n` for even `n`, `2 - 1/n` for odd `n`.
pub fn dihedral_closed_form(n: usize) -> Rational {
    let k = if n.is_multiple_of(2) { 2 } else { 1 };
    integer(2) - ratio(k, n as i64)
}

/// `p - (p-1) n^(1-p)`
pub fn shift_closed_form(p: usize, n: usize) -> Rational {
    integer(p as i64) - ratio(p as i64 - 1, (n as i64).pow(p as u32 - 1))
}

pub fn shift_expression(p: usize, n: usize) -> String {
    let factors = vec![format!("C{n}"); p].join(" x ");
    format!("sd({factors}, C{p}, shift)")
}

struct Spec {
    n: usize,
    subsequence: usize,
    expr: String,
    closed_form: Option<Rational>,
}

fn build(
    name: String,
    m: usize,
    limit: Rational,
    specs: Vec<Spec>,
    opts: FamilyOptions,
) -> Result<Family, FamilyError> {
    let builder = GroupBuilder::with_cap(opts.order_cap);
    let points = opts.exec.map(&specs, |s| -> Result<FamilyPoint, FamilyError> {
        let g = parse(&s.expr)?.evaluate_with(&builder)?;
        let table = character_table(&g)?;
        let ad = if opts.direct && g.order() <= DIRECT_ORDER_CAP {
            let irreps = explicit_irreps(&g, &table)?;
            Some(ad_direct(&g, &irreps, Execution::Serial))
        } else {
            None
        };
        let mut degrees = table.degrees.clone();
        degrees.sort_unstable();
        Ok(FamilyPoint {
            n: s.n,
            subsequence: s.subsequence,
            label: g.label().to_string(),
            order: g.order(),
            am: johnson_am(&table),
            ad_closed: ad_closed_form(&stratification(&table)),
            closed_form: s.closed_form.clone(),
            ad_direct: ad,
            maxdeg: table.max_degree(),
            nu_omega1: nu_omega1(&table),
            degrees,
            derived_order: derived_subgroup(&g).order(),
        })
    });
    Ok(Family { name, m, limit, points: points.into_iter().collect::<Result<_, _>>()? })
}

fn check_range(min: usize, n_min: usize, n_max: usize) -> Result<(), FamilyError> {
    if n_min < min || n_min > n_max {
        return Err(FamilyError::InvalidParameter(format!(
            "n range {n_min}..{n_max} must satisfy {min} <= nMin <= nMax"
        )));
    }
    Ok(())
}

/// `D_n = C_n ⋊ C_2` for `n_min <= n <= n_max`, split into even and odd
/// subsequences.
pub fn dihedral_family(n_min: usize, n_max: usize, opts: FamilyOptions) -> Result<Family, FamilyError> {
    check_range(3, n_min, n_max)?;
    let specs = (n_min..=n_max)
        .map(|n| Spec { n, subsequence: n % 2, expr: format!("D{n}"), closed_form: Some(dihedral_closed_form(n)) })
        .collect();
    build("dihedral".into(), 2, integer(2), specs, opts)
}

/// `(C_n)^p ⋊ C_p` with `C_p` rotating coordinates, `p` in `{2, 3}`.
pub fn shift_family(p: usize, n_min: usize, n_max: usize, opts: FamilyOptions) -> Result<Family, FamilyError> {
    if p != 2 && p != 3 {
        return Err(FamilyError::InvalidParameter(format!("shift family needs p in {{2, 3}}, got {p}")));
    }
    check_range(2, n_min, n_max)?;
    let specs = (n_min..=n_max)
        .map(|n| Spec { n, subsequence: 0, expr: shift_expression(p, n), closed_form: Some(shift_closed_form(p, n)) })
        .collect();
    build(format!("shift p={p}"), p, integer(p as i64), specs, opts)
}

/// The same group at every parameter; the trivial semidirect structure has
/// `m = 1`.
pub fn constant_family(expr: &str, n_min: usize, n_max: usize, opts: FamilyOptions) -> Result<Family, FamilyError> {
    check_range(0, n_min, n_max)?;
    let specs =
        (n_min..=n_max).map(|n| Spec { n, subsequence: 0, expr: expr.to_string(), closed_form: None }).collect();
    build(format!("constant {expr}"), 1, integer(1), specs, opts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorReport {
    pub m: usize,
    /// `(n, degree)` pairs with a degree not dividing `m`.
    pub counterexamples: Vec<(usize, usize)>,
}

impl DivisorReport {
    pub fn passes(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

pub fn degree_divisor_check(family: &Family) -> DivisorReport {
    let counterexamples = family
        .points
        .iter()
        .flat_map(|p| p.degrees.iter().filter(|&&d| !family.m.is_multiple_of(d)).map(move |&d| (p.n, d)))
        .collect();
    DivisorReport { m: family.m, counterexamples }
}

/// Pairs of consecutive points in the same subsequence.
fn consecutive(family: &Family) -> impl Iterator<Item = (&FamilyPoint, &FamilyPoint)> {
    family
        .points
        .iter()
        .enumerate()
        .filter_map(|(i, b)| family.points[..i].iter().rev().find(|a| a.subsequence == b.subsequence).map(|a| (a, b)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    /// Points where `nu(Omega_1) != 1/|G'|`.
    pub mismatches: Vec<usize>,
    /// Consecutive points within a subsequence where `nu(Omega_1)` grows.
    pub increases: Vec<(usize, usize)>,
    /// Every point has trivial derived subgroup, so nothing decays.
    pub non_decaying: bool,
    /// Least-squares slope of `ln nu(Omega_1)` against `ln n`.
    pub rate: Option<f64>,
}

impl DecayReport {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty() && self.increases.is_empty()
    }
}

pub fn char_mass_decay(family: &Family) -> DecayReport {
    let mismatches =
        family.points.iter().filter(|p| p.nu_omega1 != ratio(1, p.derived_order as i64)).map(|p| p.n).collect();
    let increases = consecutive(family).filter(|(a, b)| b.nu_omega1 > a.nu_omega1).map(|(a, b)| (a.n, b.n)).collect();
    let non_decaying = family.points.iter().all(|p| p.derived_order == 1);
    let rate = if non_decaying { None } else { log_log_slope(&family.points) };
    DecayReport { mismatches, increases, non_decaying, rate }
}

fn log_log_slope(points: &[FamilyPoint]) -> Option<f64> {
    let xy: Vec<(f64, f64)> =
        points.iter().filter(|p| p.n > 0).map(|p| ((p.n as f64).ln(), to_f64(&p.nu_omega1).ln())).collect();
    if xy.len() < 2 {
        return None;
    }
    let k = xy.len() as f64;
    let (mx, my) = xy.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / k, b + y / k));
    let sxx: f64 = xy.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub limit: Rational,
    /// `(n, p - am)` per point.
    pub gaps: Vec<(usize, Rational)>,
    /// Points where `am` differs from the closed form or from the
    /// stratified anti-diagonal formula.
    pub closed_form_mismatches: Vec<usize>,
    /// Points where the gap differs from `(p-1) nu(Omega_1)`.
    pub gap_identity_mismatches: Vec<usize>,
    pub nonpositive: Vec<usize>,
    pub non_monotone: Vec<(usize, usize)>,
    /// Points where the direct sum was run and missed `am` by `DIRECT_TOL`.
    pub direct_mismatches: Vec<usize>,
    pub final_gap: Option<Rational>,
    pub threshold: f64,
}

impl ConvergenceReport {
    pub fn below_threshold(&self) -> bool {
        self.final_gap.as_ref().is_some_and(|g| to_f64(g) <= self.threshold)
    }

    pub fn passes(&self) -> bool {
        self.closed_form_mismatches.is_empty()
            && self.gap_identity_mismatches.is_empty()
            && self.nonpositive.is_empty()
            && self.non_monotone.is_empty()
            && self.direct_mismatches.is_empty()
            && self.below_threshold()
    }
}

pub fn convergence_report(family: &Family, threshold: f64) -> ConvergenceReport {
    let p_minus_1 = &family.limit - integer(1);
    let gaps: Vec<(usize, Rational)> = family.points.iter().map(|p| (p.n, family.gap(p))).collect();
    let zero = integer(0);
    ConvergenceReport {
        limit: family.limit.clone(),
        closed_form_mismatches: family
            .points
            .iter()
            .filter(|p| p.am != p.ad_closed || p.closed_form.as_ref().is_some_and(|c| *c != p.am))
            .map(|p| p.n)
            .collect(),
        gap_identity_mismatches: family
            .points
            .iter()
            .filter(|p| family.gap(p) != &p_minus_1 * &p.nu_omega1)
            .map(|p| p.n)
            .collect(),
        nonpositive: gaps.iter().filter(|(_, g)| *g <= zero).map(|(n, _)| *n).collect(),
        non_monotone: consecutive(family)
            .filter(|(a, b)| family.gap(b) >= family.gap(a))
            .map(|(a, b)| (a.n, b.n))
            .collect(),
        direct_mismatches: family
            .points
            .iter()
            .filter(|p| p.ad_direct.is_some_and(|v| (v - to_f64(&p.am)).abs() >= DIRECT_TOL))
            .map(|p| p.n)
            .collect(),
        final_gap: gaps.last().map(|(_, g)| g.clone()),
        gaps,
        threshold,
    }
}

pub const FAMILY_COLUMNS: [&str; 7] = ["n", "order", "am", "amFloat", "gap", "nuOmega1", "maxdeg"];

fn family_rows(family: &Family) -> Vec<[String; 7]> {
    family
        .points
        .iter()
        .map(|p| {
            [
                p.n.to_string(),
                p.order.to_string(),
                format(&p.am),
                format!("{:.12}", to_f64(&p.am)),
                format(&family.gap(p)),
                format(&p.nu_omega1),
                p.maxdeg.to_string(),
            ]
        })
        .collect()
}

fn write_rows(family: &Family, delimiter: u8, header: bool) -> String {
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(Vec::new());
    if header {
        w.write_record(FAMILY_COLUMNS).expect("in-memory write");
    }
    for row in family_rows(family) {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn family_csv(family: &Family) -> String {
    write_rows(family, b',', true)
}

/// Tab-separated, with the header commented out for plotting tools.
pub fn family_tsv(family: &Family) -> String {
    format!("# {}\n{}", FAMILY_COLUMNS.join("\t"), write_rows(family, b'\t', false))
}

pub fn family_summary(family: &Family, report: &ConvergenceReport) -> String {
    let (lo, hi) = family.n_range().unwrap_or((0, 0));
    let gap =
        report.final_gap.as_ref().map(|g| format!("{} ({:.6})", format(g), to_f64(g))).unwrap_or_else(|| "none".into());
    format!(
        "{} n={lo}..{hi}: limit {}, final gap {gap}, checks {} (asymptotic evidence)",
        family.name,
        format(&family.limit),
        if report.passes() { "pass" } else { "FAIL" }
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_points() {
        let fam = dihedral_family(3, 12, FamilyOptions { direct: true, ..Default::default() }).unwrap();
        let p4 = &fam.points[1];
        assert_eq!(p4.am, ratio(3, 2));
        let p10 = fam.points.iter().find(|p| p.n == 10).unwrap();
        assert_eq!(p10.am, ratio(9, 5));
        assert_eq!(p10.degrees, vec![1, 1, 1, 1, 2, 2, 2, 2]);
        assert_eq!(p10.nu_omega1, ratio(1, 5));
        let report = convergence_report(&fam, 0.2);
        assert!(report.passes(), "{report:?}");
        assert!(char_mass_decay(&fam).passes());
        assert!(degree_divisor_check(&fam).passes());
    }

    #[test]
    fn large_dihedral_point() {
        let fam = dihedral_family(101, 101, FamilyOptions::default()).unwrap();
        assert_eq!(fam.points[0].am, integer(2) - ratio(1, 101));
    }

    #[test]
    fn shift_points() {
        let fam = shift_family(2, 2, 5, FamilyOptions { direct: true, ..Default::default() }).unwrap();
        assert_eq!(fam.points[0].am, ratio(3, 2));
        assert_eq!(fam.points[1].order, 18);
        assert_eq!(fam.points[1].nu_omega1, ratio(1, 3));
        assert_eq!(fam.points[1].am, ratio(5, 3));
        assert!(convergence_report(&fam, 0.25).passes());
        let decay = char_mass_decay(&fam);
        assert!(decay.passes() && !decay.non_decaying);
        assert!((decay.rate.unwrap() + 1.0).abs() < 1e-9);

        let fam3 = shift_family(3, 2, 2, FamilyOptions::default()).unwrap();
        assert_eq!(fam3.points[0].order, 24);
        assert_eq!(fam3.points[0].nu_omega1, ratio(1, 4));
        assert_eq!(fam3.points[0].am, ratio(5, 2));
        assert!(degree_divisor_check(&fam3).passes());
    }

    #[test]
    fn constant_family_does_not_decay() {
        let fam = constant_family("C2 x C2", 1, 4, FamilyOptions::default()).unwrap();
        let decay = char_mass_decay(&fam);
        assert!(decay.non_decaying && decay.passes());
        assert!(degree_divisor_check(&fam).passes());
    }

    #[test]
    fn invalid_parameters() {
        assert!(shift_family(5, 2, 3, FamilyOptions::default()).is_err());
        assert!(dihedral_family(2, 5, FamilyOptions::default()).is_err());
        let capped = FamilyOptions { order_cap: 100, ..Default::default() };
        assert!(matches!(shift_family(3, 2, 4, capped), Err(FamilyError::Expr(_))));
    }

    #[test]
    fn csv_and_tsv() {
        let fam = shift_family(2, 2, 3, FamilyOptions::default()).unwrap();
        let csv = family_csv(&fam);
        assert_eq!(
            csv,
            "n,order,am,amFloat,gap,nuOmega1,maxdeg\n2,8,3/2,1.500000000000,1/2,1/2,2\n3,18,5/3,1.666666666667,1/3,1/3,2\n"
        );
        assert!(family_tsv(&fam).starts_with("# n\torder"));
        let summary = family_summary(&fam, &convergence_report(&fam, 0.5));
        assert!(summary.contains("final gap 1/3") && summary.contains("asymptotic evidence"));
    }
}
