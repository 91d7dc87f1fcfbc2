//! Explicit unitary irreducible representations cut out of the left regular
//! representation.
//!
//! For a character `chi` of degree `d`, the isotypic projection
//! `P = (d/|G|) sum_g conj(chi(g)) L(g)` has rank `d^2`. Right translations
//! commute with `L`, so a random self-adjoint combination of them acts on
//! `range(P)` as `I_d ⊗ B`; an eigenspace of a simple eigenvalue of `B` is a
//! `d`-dimensional invariant subspace, and compressing `L` onto an
//! orthonormal basis of it gives the representation. The matrices depend on
//! the random draw; characters, degrees and trace norms do not.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::character::{CharacterTable, MAX_ATTEMPTS};
use crate::error::RepError;
use crate::group::FiniteGroup;
use crate::linalg::{hermitian_eigh, max_abs, polar_unitary, trace, unitarity_defect, CMatrix};

/// Homomorphism, unitarity and trace tolerance for constructed irreps.
pub const IRREP_TOL: f64 = 1e-6;
/// Unitarity drift above this is removed by a polar correction.
const DRIFT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct UnitaryIrrep {
    pub degree: usize,
    /// Row of the character table this irrep realises, when it has one.
    pub character: Option<usize>,
    /// One `degree x degree` unitary per group element.
    pub matrices: Vec<CMatrix>,
}

impl UnitaryIrrep {
    pub fn matrix(&self, x: usize) -> &CMatrix {
        &self.matrices[x]
    }

    pub fn trivial(order: usize) -> Self {
        Self { degree: 1, character: Some(0), matrices: vec![CMatrix::identity(1, 1); order] }
    }

    /// `max_{a,b} |M(a) M(b) - M(ab)|`
    pub fn homomorphism_defect(&self, g: &FiniteGroup) -> f64 {
        let mut worst: f64 = 0.0;
        for a in g.elements() {
            for b in g.elements() {
                let d = max_abs(&(&self.matrices[a] * &self.matrices[b] - &self.matrices[g.mul(a, b)]));
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.matrices.iter().map(unitarity_defect).fold(0.0, f64::max)
    }

    /// `max_x |tr M(x) - chi(x)|` against the given table row.
    pub fn character_defect(&self, table: &CharacterTable, row: usize) -> f64 {
        self.matrices.iter().enumerate().map(|(x, m)| (trace(m) - table.value(row, x)).norm()).fold(0.0, f64::max)
    }
}

/// One irrep per row of `table`, in table order.
pub fn explicit_irreps(g: &FiniteGroup, table: &CharacterTable) -> Result<Vec<UnitaryIrrep>, RepError> {
    if table.group_hash != g.table_hash() {
        return Err(RepError::GroupMismatch("character table belongs to a different group".into()));
    }
    (0..table.irrep_count()).map(|row| explicit_irrep(g, table, row)).collect()
}

pub fn explicit_irrep(g: &FiniteGroup, table: &CharacterTable, row: usize) -> Result<UnitaryIrrep, RepError> {
    let n = g.order();
    let d = table.degrees[row];
    if d == 1 {
        let matrices = (0..n).map(|x| CMatrix::from_element(1, 1, table.value(row, x))).collect();
        return Ok(UnitaryIrrep { degree: 1, character: Some(row), matrices });
    }

    let basis = isotypic_basis(g, table, row)?;
    let mut last = RepError::Invariance { irrep: row, deviation: f64::NAN };
    for attempt in 0..MAX_ATTEMPTS {
        let seed = g.seed() ^ ((row as u64) << 32) ^ (attempt as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match split_multiplicity(g, &basis, d, &mut rng) {
            Ok(w) => match compress(g, &w, row) {
                Ok(irrep) => return Ok(irrep),
                Err(e) => last = e,
            },
            Err(gap) => last = RepError::EigenCluster { attempts: attempt + 1, gap },
        }
    }
    Err(last)
}

/// Orthonormal basis (as columns) of the range of the isotypic projection,
/// from Gram-Schmidt on its columns `x -> (d/|G|) conj(chi(x h^-1))`.
fn isotypic_basis(g: &FiniteGroup, table: &CharacterTable, row: usize) -> Result<CMatrix, RepError> {
    let n = g.order();
    let d = table.degrees[row];
    let rank = d * d;
    let scale = d as f64 / n as f64;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(rank);
    for h in 0..n {
        if cols.len() == rank {
            break;
        }
        let hinv = g.inv(h);
        let mut v: Vec<Complex64> = (0..n).map(|x| table.value(row, g.mul(x, hinv)).conj() * scale).collect();
        let start = norm(&v);
        for _ in 0..2 {
            for q in &cols {
                let p: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= p * qi);
            }
        }
        let r = norm(&v);
        if r > 1e-8 * start.max(1e-300) && r > 1e-12 {
            v.iter_mut().for_each(|z| *z /= r);
            cols.push(v);
        }
    }
    if cols.len() != rank {
        return Err(RepError::Validation(format!(
            "isotypic component {row} has rank {} (expected {rank})",
            cols.len()
        )));
    }
    Ok(CMatrix::from_fn(n, rank, |x, j| cols[j][x]))
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Picks the `d`-dimensional lowest eigenspace of a random self-adjoint
/// right-translation operator restricted to the isotypic component.
/// Returns the smallest offending gap on failure.
fn split_multiplicity(g: &FiniteGroup, basis: &CMatrix, d: usize, rng: &mut ChaCha8Rng) -> Result<CMatrix, f64> {
    let n = g.order();
    let rank = basis.ncols();
    let weights: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    // (A q)(x) = sum_h w_h q(x h) + conj(w_h) q(x h^-1)
    let mut aq = CMatrix::zeros(n, rank);
    for j in 0..rank {
        for x in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for h in 0..n {
                acc += weights[h] * basis[(g.mul(x, h), j)] + weights[h].conj() * basis[(g.mul(x, g.inv(h)), j)];
            }
            aq[(x, j)] = acc;
        }
    }
    let compressed = basis.adjoint() * aq;
    let (values, vectors) = hermitian_eigh(&compressed);
    let radius = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let spread = values[d - 1] - values[0];
    let gap = values[d] - values[d - 1];
    if gap < 1e-6 * radius || spread > 1e-8 * radius {
        return Err(gap);
    }
    Ok(basis * vectors.columns(0, d))
}

/// `pi(g) = W* L(g) W` with `(L(g) w)(x) = w(g^-1 x)`.
fn compress(g: &FiniteGroup, w: &CMatrix, row: usize) -> Result<UnitaryIrrep, RepError> {
    let n = g.order();
    let d = w.ncols();
    let mut matrices = Vec::with_capacity(n);
    let mut shifted = CMatrix::zeros(n, d);
    for a in 0..n {
        let ainv = g.inv(a);
        for x in 0..n {
            let src = g.mul(ainv, x);
            for j in 0..d {
                shifted[(x, j)] = w[(src, j)];
            }
        }
        let mut m = w.adjoint() * &shifted;
        let defect = unitarity_defect(&m);
        if defect > IRREP_TOL {
            return Err(RepError::Invariance { irrep: row, deviation: defect });
        }
        if defect > DRIFT_TOL {
            m = polar_unitary(&m);
        }
        matrices.push(m);
    }
    Ok(UnitaryIrrep { degree: d, character: Some(row), matrices })
}

/// `M((g, h)) = pi(g) ⊗ sigma(h)` on the direct product, whose element
/// `(g, h)` has index `g |H| + h`.
pub fn tensor_irrep(pi: &UnitaryIrrep, sigma: &UnitaryIrrep) -> UnitaryIrrep {
    let mut matrices = Vec::with_capacity(pi.matrices.len() * sigma.matrices.len());
    for a in &pi.matrices {
        for b in &sigma.matrices {
            matrices.push(a.kronecker(b));
        }
    }
    UnitaryIrrep { degree: pi.degree * sigma.degree, character: None, matrices }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurReport {
    pub max_deviation: f64,
    /// `(irrep a, irrep b, i, j, k, l)` of the worst entry.
    pub worst: Option<(usize, usize, usize, usize, usize, usize)>,
}

impl SchurReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation < tol
    }
}

/// Checks `(1/|G|) sum_g a(g)_ij conj(b(g)_kl) = delta_ab delta_ik delta_jl / d_a`
/// over every pair of irreps and every entry.
pub fn verify_schur_orthogonality(irreps: &[UnitaryIrrep]) -> SchurReport {
    let mut report = SchurReport { max_deviation: 0.0, worst: None };
    let Some(first) = irreps.first() else {
        return report;
    };
    let n = first.matrices.len() as f64;
    for (ia, a) in irreps.iter().enumerate() {
        for (ib, b) in irreps.iter().enumerate() {
            for i in 0..a.degree {
                for j in 0..a.degree {
                    for k in 0..b.degree {
                        for l in 0..b.degree {
                            let s: Complex64 = a
                                .matrices
                                .iter()
                                .zip(&b.matrices)
                                .map(|(ma, mb)| ma[(i, j)] * mb[(k, l)].conj())
                                .sum::<Complex64>()
                                / n;
                            let target = if ia == ib && i == k && j == l { 1.0 / a.degree as f64 } else { 0.0 };
                            let dev = (s - target).norm();
                            if report.worst.is_none() || dev > report.max_deviation {
                                report.max_deviation = dev;
                                report.worst = Some((ia, ib, i, j, k, l));
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

/// Isotypic projections of the left regular representation.
#[derive(Debug, Clone)]
pub struct IsotypicDecomposition {
    pub projections: Vec<CMatrix>,
    pub ranks: Vec<usize>,
}

impl IsotypicDecomposition {
    /// Worst of `|P^2 - P|`, `|P* - P|` and `|sum P - I|`.
    pub fn defect(&self) -> f64 {
        let n = self.projections.first().map_or(0, |p| p.nrows());
        let mut worst: f64 = 0.0;
        let mut total = CMatrix::zeros(n, n);
        for p in &self.projections {
            worst = worst.max(max_abs(&(p * p - p)));
            worst = worst.max(max_abs(&(p.adjoint() - p)));
            total += p;
        }
        worst.max(max_abs(&(total - CMatrix::identity(n, n))))
    }
}

pub fn isotypic_decomposition(g: &FiniteGroup, table: &CharacterTable) -> IsotypicDecomposition {
    let n = g.order();
    let mut projections = Vec::with_capacity(table.irrep_count());
    let mut ranks = Vec::with_capacity(table.irrep_count());
    for row in 0..table.irrep_count() {
        let scale = table.degrees[row] as f64 / n as f64;
        let p = CMatrix::from_fn(n, n, |x, h| table.value(row, g.mul(x, g.inv(h))).conj() * scale);
        ranks.push(trace(&p).re.round() as usize);
        projections.push(p);
    }
    IsotypicDecomposition { projections, ranks }
}
