//! Character tables by simultaneous diagonalisation of class sums.
//!
//! Multiplication by a class sum `C_j` acts on the centre of the group
//! algebra. In the orthonormal basis `C_l / sqrt|C_l|` the adjoint of that
//! operator is multiplication by the inverse class, so a random combination
//! `sum_j w_j C_j + conj(w_j) C_j*` is a Hermitian `k x k` matrix whose
//! eigenvectors are the primitive central idempotents. Each eigenvector
//! `u` yields a character via `chi(C_l) ∝ conj(u_l) / sqrt|C_l|` and a degree
//! via `d = sqrt|G| |u_0|`.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::RepError;
use crate::group::{conjugacy_classes, ConjugacyClasses, FiniteGroup};
use crate::linalg::{hermitian_eigh, CMatrix};

pub const MAX_ATTEMPTS: usize = 8;
pub const DEGREE_TOL: f64 = 1e-6;
pub const ORTHOGONALITY_TOL: f64 = 1e-8;
/// Minimum eigenvalue gap, relative to the spectral radius, accepted when
/// separating central characters.
pub const RELATIVE_GAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    pub order: usize,
    pub group_hash: String,
    pub classes: ConjugacyClasses,
    pub degrees: Vec<usize>,
    /// `values[irrep][class]`
    pub values: Vec<Vec<Complex64>>,
}

impl CharacterTable {
    pub fn irrep_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn class_count(&self) -> usize {
        self.classes.count()
    }

    /// `chi_irrep(x)` for an element index.
    pub fn value(&self, irrep: usize, x: usize) -> Complex64 {
        self.values[irrep][self.classes.class_of[x]]
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn linear_count(&self) -> usize {
        self.degrees.iter().filter(|&&d| d == 1).count()
    }

    /// `max |(1/|G|) sum_c |c| chi_a(c) conj(chi_b(c)) - delta_ab|`
    pub fn row_orthogonality_defect(&self) -> f64 {
        let n = self.order as f64;
        let mut worst: f64 = 0.0;
        for a in 0..self.irrep_count() {
            for b in 0..self.irrep_count() {
                let s: Complex64 = (0..self.class_count())
                    .map(|c| self.values[a][c] * self.values[b][c].conj() * self.classes.sizes[c] as f64)
                    .sum::<Complex64>()
                    / n;
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    /// `max |sum_chi chi(c) conj(chi(c')) - delta_cc' |G|/|c||`, scaled by `|C_G(c)|`.
    pub fn column_orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in 0..self.class_count() {
            for d in 0..self.class_count() {
                let s: Complex64 = (0..self.irrep_count()).map(|a| self.values[a][c] * self.values[a][d].conj()).sum();
                let centraliser = (self.order / self.classes.sizes[c]) as f64;
                let target = if c == d { centraliser } else { 0.0 };
                worst = worst.max((s - target).norm() / centraliser);
            }
        }
        worst
    }

    pub(crate) fn validate(&self) -> Result<(), RepError> {
        if self.irrep_count() != self.class_count() {
            return Err(RepError::Validation(format!(
                "{} irreps for {} classes",
                self.irrep_count(),
                self.class_count()
            )));
        }
        let sum_sq: usize = self.degrees.iter().map(|d| d * d).sum();
        if sum_sq != self.order {
            return Err(RepError::Validation(format!("sum of squared degrees is {sum_sq}, not {}", self.order)));
        }
        for (row, &d) in self.values.iter().zip(&self.degrees) {
            if (row[0] - Complex64::new(d as f64, 0.0)).norm() > DEGREE_TOL {
                return Err(RepError::Validation("character at identity differs from degree".into()));
            }
        }
        let defect = self.row_orthogonality_defect();
        if defect > ORTHOGONALITY_TOL {
            return Err(RepError::Validation(format!("row orthogonality defect {defect:.3e}")));
        }
        Ok(())
    }
}

/// Computes the character table of `g`, retrying with fresh random class
/// combinations (seeded from the table hash and the attempt number) when
/// eigenvalues cluster.
pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable, RepError> {
    let classes = conjugacy_classes(g);
    let seed = g.seed();
    let mut last_err = None;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        match attempt_table(g, &classes, &mut rng) {
            Ok(table) => return Ok(table),
            Err(e @ RepError::EigenCluster { .. }) => last_err = Some(e),
            Err(e) => last_err = Some(e),
        }
    }
    Err(match last_err {
        Some(RepError::EigenCluster { gap, .. }) => RepError::EigenCluster { attempts: MAX_ATTEMPTS, gap },
        Some(e) => e,
        None => unreachable!("at least one attempt runs"),
    })
}

/// Degree multiset, sorted ascending.
pub fn degrees(g: &FiniteGroup) -> Result<Vec<usize>, RepError> {
    let mut d = character_table(g)?.degrees;
    d.sort_unstable();
    Ok(d)
}

fn attempt_table(
    g: &FiniteGroup,
    classes: &ConjugacyClasses,
    rng: &mut ChaCha8Rng,
) -> Result<CharacterTable, RepError> {
    let k = classes.count();
    let n = g.order();
    let weights: Vec<Complex64> =
        (0..k).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let coeff: Vec<Complex64> = (0..k).map(|j| weights[j] + weights[classes.inverse_class[j]].conj()).collect();

    let mut h = CMatrix::zeros(k, k);
    for l in 0..k {
        let gl = classes.representatives[l];
        for x in 0..n {
            let j = classes.class_of[x];
            let y = g.mul(g.inv(x), gl);
            h[(l, classes.class_of[y])] += coeff[j];
        }
    }
    let root: Vec<f64> = classes.sizes.iter().map(|&s| (s as f64).sqrt()).collect();
    for l in 0..k {
        for m in 0..k {
            h[(l, m)] *= root[l] / root[m];
        }
    }

    let (eigenvalues, vectors) = hermitian_eigh(&h);
    let radius = eigenvalues.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let gap = eigenvalues.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if k > 1 && gap < RELATIVE_GAP_TOL * radius {
        return Err(RepError::EigenCluster { attempts: 1, gap });
    }

    let sqrt_order = (n as f64).sqrt();
    let mut rows: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(k);
    for col in 0..k {
        let u = vectors.column(col);
        let t: Vec<Complex64> = (0..k).map(|l| u[l].conj() / root[l]).collect();
        let estimate = sqrt_order * u[0].norm();
        let degree = estimate.round();
        if (estimate - degree).abs() > DEGREE_TOL || degree < 1.0 {
            return Err(RepError::DegreeRounding { value: estimate, tol: DEGREE_TOL });
        }
        let scale = Complex64::new(degree, 0.0) / t[0];
        let mut row: Vec<Complex64> = t.iter().map(|&z| z * scale).collect();
        row[0] = Complex64::new(degree, 0.0);
        rows.push((degree as usize, row));
    }
    rows.sort_by(canonical_order);

    let table = CharacterTable {
        order: n,
        group_hash: g.table_hash(),
        classes: classes.clone(),
        degrees: rows.iter().map(|r| r.0).collect(),
        values: rows.into_iter().map(|r| r.1).collect(),
    };
    table.validate()?;
    Ok(table)
}

/// Degree ascending, then character values descending on a `1e-6` grid, so
/// the trivial character always comes first.
fn canonical_order(a: &(usize, Vec<Complex64>), b: &(usize, Vec<Complex64>)) -> Ordering {
    let grid = |z: &Complex64| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64);
    a.0.cmp(&b.0).then_with(|| {
        for (x, y) in a.1.iter().zip(&b.1) {
            let o = grid(y).cmp(&grid(x));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}
