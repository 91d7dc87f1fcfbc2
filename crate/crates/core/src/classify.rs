//! Structural predicates (centre index, commutator count, maximal degree)
//! and the equivalences relating them to the amenability constant.

use serde::Serialize;

use crate::character::{character_table, CharacterTable};
use crate::error::RepError;
use crate::exec::Execution;
use crate::group::{center, center_index, commutator_set, FiniteGroup};
use crate::harmonic::{ad_closed_form, ad_direct, johnson_am, nu_omega1, stratification};
use crate::irreps::{explicit_irrep, explicit_irreps, UnitaryIrrep};
use crate::linalg::max_abs;
use crate::rational::{format, integer, ratio, Rational};

/// Largest order for which the direct anti-diagonal sum is evaluated.
pub const DIRECT_ORDER_CAP: usize = 200;
pub const SEPARATION_TOL: f64 = 1e-6;
pub const ANTICOMMUTE_TOL: f64 = 1e-6;

pub fn three_halves() -> Rational {
    ratio(3, 2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationRecord {
    pub label: String,
    pub order: usize,
    pub is_abelian: bool,
    pub center_index: usize,
    pub comm_size: usize,
    pub maxdeg: usize,
    pub am: Rational,
    pub nu_omega1: Rational,
    pub ad_direct: Option<f64>,
    pub is_min_ad: bool,
    pub has_comm2: bool,
    pub has_maxdeg2: bool,
    pub center_index4: bool,
}

impl ClassificationRecord {
    /// Whether the boolean predicates agree with the numeric fields.
    pub fn predicates_consistent(&self) -> bool {
        self.is_min_ad == (self.am == three_halves())
            && self.has_comm2 == (self.comm_size == 2)
            && self.has_maxdeg2 == (self.maxdeg == 2)
            && self.center_index4 == (self.center_index == 4)
    }

    pub fn to_row(&self) -> ScanRow {
        ScanRow {
            label: self.label.clone(),
            order: self.order,
            center_index: self.center_index,
            comm_size: self.comm_size,
            maxdeg: self.maxdeg,
            am: format(&self.am),
            ad_direct: self.ad_direct,
            nu_omega1: format(&self.nu_omega1),
            min_ad_attained: self.is_min_ad,
        }
    }
}

pub fn classification_record(g: &FiniteGroup) -> Result<ClassificationRecord, RepError> {
    let table = character_table(g)?;
    Ok(record_from_table(g, &table))
}

pub fn record_from_table(g: &FiniteGroup, table: &CharacterTable) -> ClassificationRecord {
    let center_index = center_index(g);
    let comm_size = commutator_set(g).len();
    let maxdeg = table.max_degree();
    let am = johnson_am(table);
    ClassificationRecord {
        label: g.label().to_string(),
        order: g.order(),
        is_abelian: g.is_abelian(),
        center_index,
        comm_size,
        maxdeg,
        is_min_ad: am == three_halves(),
        nu_omega1: nu_omega1(table),
        am,
        ad_direct: None,
        has_comm2: comm_size == 2,
        has_maxdeg2: maxdeg == 2,
        center_index4: center_index == 4,
    }
}

/// The three conditions of the centre-index-four characterisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CenterCommutatorReport {
    pub center_index4: bool,
    pub comm2_maxdeg2: bool,
    /// Whether irreps of degree at most two separate points; only evaluated
    /// when `comm2_maxdeg2` holds.
    pub separates: Option<bool>,
}

impl CenterCommutatorReport {
    pub fn holds(&self) -> bool {
        self.center_index4 == self.comm2_maxdeg2 && self.separates.unwrap_or(true)
    }
}

pub fn center_commutator_check(g: &FiniteGroup, table: &CharacterTable) -> Result<CenterCommutatorReport, RepError> {
    let record = record_from_table(g, table);
    let comm2_maxdeg2 = record.has_comm2 && record.has_maxdeg2;
    let separates = if comm2_maxdeg2 {
        let small: Vec<UnitaryIrrep> = (0..table.irrep_count())
            .filter(|&i| table.degrees[i] <= 2)
            .map(|i| explicit_irrep(g, table, i))
            .collect::<Result<_, _>>()?;
        Some(separates_points(g, &small, SEPARATION_TOL))
    } else {
        None
    };
    Ok(CenterCommutatorReport { center_index4: record.center_index4, comm2_maxdeg2, separates })
}

/// Whether `x -> (pi(x))_pi` is injective, two elements counting as equal
/// when all their images agree entrywise within `tol`.
pub fn separates_points(g: &FiniteGroup, irreps: &[UnitaryIrrep], tol: f64) -> bool {
    g.elements()
        .all(|x| (x + 1..g.order()).all(|y| irreps.iter().any(|pi| max_abs(&(pi.matrix(x) - pi.matrix(y))) > tol)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizerReport {
    pub max_order: usize,
    pub records: Vec<ClassificationRecord>,
    pub nonabelian_count: usize,
    pub min_nonabelian_am: Option<Rational>,
    pub attainers: Vec<String>,
    /// Non-abelian groups with `am < 3/2`.
    pub below_bound: Vec<String>,
    /// Groups where `am = 3/2` and `centerIndex = 4` disagree.
    pub counterexamples: Vec<String>,
    /// Abelian groups with `am != 1`.
    pub abelian_violations: Vec<String>,
}

impl MinimizerReport {
    pub fn passes(&self) -> bool {
        self.below_bound.is_empty() && self.counterexamples.is_empty() && self.abelian_violations.is_empty()
    }

    pub fn is_vacuous(&self) -> bool {
        self.nonabelian_count == 0
    }
}

/// Classifies every group of order at most `max_order`, optionally running
/// the direct anti-diagonal sum (orders up to [`DIRECT_ORDER_CAP`]), and
/// collects violations of the lower bound and of the minimiser
/// characterisation.
pub fn minimizer_scan(
    groups: &[FiniteGroup],
    max_order: usize,
    direct: bool,
    exec: Execution,
) -> Result<MinimizerReport, RepError> {
    let selected: Vec<&FiniteGroup> = groups.iter().filter(|g| g.order() <= max_order).collect();
    let records = exec.map(&selected, |g| -> Result<ClassificationRecord, RepError> {
        let table = character_table(g)?;
        let mut record = record_from_table(g, &table);
        if direct && g.order() <= DIRECT_ORDER_CAP {
            let irreps = explicit_irreps(g, &table)?;
            record.ad_direct = Some(ad_direct(g, &irreps, Execution::Serial));
        }
        Ok(record)
    });
    let records: Vec<ClassificationRecord> = records.into_iter().collect::<Result<_, _>>()?;

    let bound = three_halves();
    let one = integer(1);
    let mut report = MinimizerReport {
        max_order,
        nonabelian_count: 0,
        min_nonabelian_am: None,
        attainers: Vec::new(),
        below_bound: Vec::new(),
        counterexamples: Vec::new(),
        abelian_violations: Vec::new(),
        records: Vec::new(),
    };
    for r in &records {
        if r.is_abelian {
            if r.am != one {
                report.abelian_violations.push(r.label.clone());
            }
            continue;
        }
        report.nonabelian_count += 1;
        if report.min_nonabelian_am.as_ref().is_none_or(|m| r.am < *m) {
            report.min_nonabelian_am = Some(r.am.clone());
        }
        if r.am < bound {
            report.below_bound.push(r.label.clone());
        }
        if r.is_min_ad {
            report.attainers.push(r.label.clone());
        }
        if r.is_min_ad != r.center_index4 {
            report.counterexamples.push(r.label.clone());
        }
    }
    report.records = records;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnticommuteReport {
    /// The non-identity commutator.
    pub z: usize,
    pub pairs_checked: usize,
    pub max_anticommutator: f64,
    pub max_central_defect: f64,
}

impl AnticommuteReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_anticommutator < tol && self.max_central_defect < tol
    }
}

/// For groups with exactly two commutators: every irrep of degree above one
/// sends `z` to `-I` and non-commuting elements to anti-commuting matrices.
/// Returns `None` when the precondition fails.
pub fn anticommute_check(g: &FiniteGroup, irreps: &[UnitaryIrrep]) -> Option<AnticommuteReport> {
    let comm = commutator_set(g);
    if comm.len() != 2 {
        return None;
    }
    let z = comm.into_iter().find(|&c| c != 0)?;
    let mut report = AnticommuteReport { z, pairs_checked: 0, max_anticommutator: 0.0, max_central_defect: 0.0 };
    for pi in irreps.iter().filter(|pi| pi.degree > 1) {
        let id = crate::linalg::CMatrix::identity(pi.degree, pi.degree);
        report.max_central_defect = report.max_central_defect.max(max_abs(&(pi.matrix(z) + &id)));
        for x in g.elements() {
            for y in x + 1..g.order() {
                if g.mul(x, y) == g.mul(y, x) {
                    continue;
                }
                let (a, b) = (pi.matrix(x), pi.matrix(y));
                let dev = max_abs(&(a * b + b * a));
                report.max_anticommutator = report.max_anticommutator.max(dev);
                report.pairs_checked += 1;
            }
        }
    }
    Some(report)
}

/// Two sides of a biconditional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Equivalence {
    pub left: bool,
    pub right: bool,
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

/// `|comm(G)| = 2` against `nu(Omega_1) = 1/2`; `None` for abelian groups.
pub fn commutator_mass_check(g: &FiniteGroup, table: &CharacterTable) -> Option<Equivalence> {
    if g.is_abelian() {
        return None;
    }
    Some(Equivalence { left: commutator_set(g).len() == 2, right: nu_omega1(table) == ratio(1, 2) })
}

/// `AD = 3/2` against `nu(Omega_1) = 1/2` and `nu(Omega_n) = 0` for `n >= 3`;
/// `None` for abelian groups.
pub fn minimal_ad_mass_check(g: &FiniteGroup, table: &CharacterTable) -> Option<Equivalence> {
    if g.is_abelian() {
        return None;
    }
    let strat = stratification(table);
    let left = ad_closed_form(&strat) == three_halves();
    let right = strat.mass(1) == ratio(1, 2) && strat.masses.keys().all(|&n| n < 3);
    Some(Equivalence { left, right })
}

/// Whether `G / Z(G)` is cyclic, i.e. some coset of the centre has order
/// equal to the index.
pub fn center_quotient_cyclic(g: &FiniteGroup) -> bool {
    let z = center(g);
    let index = z.index();
    g.elements().any(|x| {
        let mut k = 1;
        let mut p = x;
        while !z.contains(p) {
            p = g.mul(p, x);
            k += 1;
        }
        k == index
    })
}

/// When `|comm(G)| = 2`, whether its non-identity element is a central
/// involution. `None` otherwise.
pub fn commutator_involution_check(g: &FiniteGroup) -> Option<bool> {
    let comm = commutator_set(g);
    if comm.len() != 2 {
        return None;
    }
    let z = comm.into_iter().find(|&c| c != 0)?;
    Some(g.mul(z, z) == 0 && center(g).contains(z))
}

/// One line of the scan output.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanRow {
    pub label: String,
    pub order: usize,
    pub center_index: usize,
    pub comm_size: usize,
    pub maxdeg: usize,
    pub am: String,
    pub ad_direct: Option<f64>,
    pub nu_omega1: String,
    pub min_ad_attained: bool,
}

pub const SCAN_CSV_HEADER: &str = "label,order,centerIndex,commSize,maxdeg,am,adDirect,nuOmega1,minAdAttained";

pub fn scan_csv(records: &[ClassificationRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SCAN_CSV_HEADER.split(',')).expect("in-memory write");
    for r in records {
        let direct = r.ad_direct.map(|v| format!("{v:.12}")).unwrap_or_default();
        w.write_record([
            r.label.clone(),
            r.order.to_string(),
            r.center_index.to_string(),
            r.comm_size.to_string(),
            r.maxdeg.to_string(),
            format(&r.am),
            direct,
            format(&r.nu_omega1),
            r.is_min_ad.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::evaluate;
    use crate::rational::to_f64;

    fn rec(s: &str) -> ClassificationRecord {
        classification_record(&evaluate(s).unwrap()).unwrap()
    }

    #[test]
    fn records_of_small_groups() {
        let d4 = rec("D4");
        assert_eq!((d4.center_index, d4.comm_size, d4.maxdeg), (4, 2, 2));
        assert_eq!(d4.am, ratio(3, 2));
        assert!(d4.is_min_ad && d4.center_index4 && d4.predicates_consistent());
        let s3 = rec("S3");
        assert_eq!((s3.center_index, s3.comm_size, s3.maxdeg), (6, 3, 2));
        assert_eq!(s3.am, ratio(5, 3));
        let c6 = rec("C6");
        assert_eq!((c6.center_index, c6.comm_size, c6.maxdeg), (1, 1, 1));
        assert_eq!(c6.am, integer(1));
    }

    #[test]
    fn center_commutator_examples() {
        for (s, both) in [("Q8", true), ("D4", true), ("Heis2", true), ("A4", false), ("C6", false), ("S3", false)] {
            let g = evaluate(s).unwrap();
            let t = character_table(&g).unwrap();
            let r = center_commutator_check(&g, &t).unwrap();
            assert!(r.holds(), "{s}");
            assert_eq!(r.center_index4, both, "{s}");
            assert_eq!(r.separates, both.then_some(true), "{s}");
        }
    }

    #[test]
    fn anticommutation() {
        let q8 = evaluate("Q8").unwrap();
        let irreps = explicit_irreps(&q8, &character_table(&q8).unwrap()).unwrap();
        let r = anticommute_check(&q8, &irreps).unwrap();
        assert!(r.pairs_checked > 0);
        assert!(r.passes(1e-10), "{r:?}");
        let d4 = evaluate("D4").unwrap();
        let irreps = explicit_irreps(&d4, &character_table(&d4).unwrap()).unwrap();
        let r = anticommute_check(&d4, &irreps).unwrap();
        assert_eq!(r.z, 2);
        assert!(r.passes(1e-10));
        assert!(anticommute_check(&evaluate("C4").unwrap(), &[]).is_none());
    }

    #[test]
    fn nu_omega1_equivalences() {
        for (s, e, a) in [
            ("D4", true, true),
            ("S3", false, false),
            ("Heis3", false, false),
            ("A4", false, false),
            ("D5", false, false),
        ] {
            let g = evaluate(s).unwrap();
            let t = character_table(&g).unwrap();
            let we = commutator_mass_check(&g, &t).unwrap();
            let wa = minimal_ad_mass_check(&g, &t).unwrap();
            assert!(we.holds() && wa.holds(), "{s}");
            assert_eq!((we.left, wa.left), (e, a), "{s}");
        }
        let g = evaluate("C2 x C2").unwrap();
        assert!(commutator_mass_check(&g, &character_table(&g).unwrap()).is_none());
    }

    #[test]
    fn structural_lemmas() {
        for s in ["D4", "Q8", "S3", "A4", "Heis3", "D4 x C3"] {
            let g = evaluate(s).unwrap();
            assert!(!center_quotient_cyclic(&g), "{s}");
        }
        assert!(center_quotient_cyclic(&evaluate("C6").unwrap()));
        assert_eq!(commutator_involution_check(&evaluate("Q8").unwrap()), Some(true));
        assert_eq!(commutator_involution_check(&evaluate("S3").unwrap()), None);
    }

    #[test]
    fn scan_of_order_eight() {
        let groups = crate::catalog::catalog(8, Execution::Serial);
        let report = minimizer_scan(&groups, 8, true, Execution::default()).unwrap();
        assert!(report.passes(), "{report:?}");
        assert_eq!(report.min_nonabelian_am, Some(three_halves()));
        let mut eight: Vec<&str> =
            report.records.iter().filter(|r| r.order == 8 && !r.is_abelian).map(|r| r.label.as_str()).collect();
        eight.sort_unstable();
        assert!(eight.iter().all(|l| report.attainers.iter().any(|a| a == l)));
        for r in &report.records {
            let direct = r.ad_direct.unwrap();
            assert!((direct - to_f64(&r.am)).abs() < 1e-7, "{}", r.label);
        }
        let csv = scan_csv(&report.records);
        assert!(csv.starts_with(SCAN_CSV_HEADER));
        assert!(csv.contains("\nD4,8,4,2,2,3/2,"));
    }

    #[test]
    fn trivial_scan_is_vacuous() {
        let groups = crate::catalog::catalog(1, Execution::Serial);
        let report = minimizer_scan(&groups, 1, false, Execution::Serial).unwrap();
        assert!(report.is_vacuous() && report.passes());
        assert_eq!(report.min_nonabelian_am, None);
    }
}
