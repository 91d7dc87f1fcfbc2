//! Plancherel data, the amenability constant and the anti-diagonal constant.
//!
//! Haar measure on a finite group is counting measure throughout, so the
//! Plancherel weight of an irrep is `d / |G|` and `sum_pi d_pi nu(pi) = 1`.
//! The anti-diagonal constant is computed twice: in closed form from the
//! degree stratification, and directly as the Fourier-algebra norm of the
//! indicator of `{(x, x^-1)}` in `G x G`, summing trace norms of its matrix
//! Fourier coefficients over all tensor irreps.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::character::CharacterTable;
use crate::error::DimensionMismatch;
use crate::exec::Execution;
use crate::group::FiniteGroup;
use crate::irreps::UnitaryIrrep;
use crate::linalg::{frobenius, kron, max_abs, trace, trace_norm, CMatrix};
use crate::rational::{integer, ratio, zero, Rational};

/// Plancherel weights `nu({pi}) = d_pi / |G|`, one per irrep.
#[derive(Debug, Clone, PartialEq)]
pub struct PlancherelData {
    pub order: usize,
    pub degrees: Vec<usize>,
    pub weights: Vec<Rational>,
}

impl PlancherelData {
    /// `sum_pi d_pi nu({pi})`, which is exactly one.
    pub fn total_mass(&self) -> Rational {
        self.degrees.iter().zip(&self.weights).map(|(&d, w)| w * integer(d as i64)).fold(zero(), |a, b| a + b)
    }
}

pub fn plancherel_weights(table: &CharacterTable) -> PlancherelData {
    let weights = table.degrees.iter().map(|&d| ratio(d as i64, table.order as i64)).collect();
    PlancherelData { order: table.order, degrees: table.degrees.clone(), weights }
}

/// `pi(f) = sum_x f(x) pi(x)`
pub fn fourier_coefficient(irrep: &UnitaryIrrep, f: &[Complex64]) -> CMatrix {
    let d = irrep.degree;
    f.iter().zip(&irrep.matrices).fold(CMatrix::zeros(d, d), |acc, (&fx, m)| acc + m * fx)
}

/// Worst deviation of `<f, g> = sum_pi (d_pi/|G|) tr(pi(f) pi(g)*)` over the
/// supplied pairs of functions on the group.
pub fn verify_plancherel_identity(irreps: &[UnitaryIrrep], pairs: &[(Vec<Complex64>, Vec<Complex64>)]) -> f64 {
    let Some(first) = irreps.first() else {
        return 0.0;
    };
    let order = first.matrices.len() as f64;
    pairs
        .iter()
        .map(|(f, g)| {
            let lhs: Complex64 = f.iter().zip(g).map(|(a, b)| a * b.conj()).sum();
            let rhs: Complex64 = irreps
                .iter()
                .map(|pi| {
                    let pf = fourier_coefficient(pi, f);
                    let pg = fourier_coefficient(pi, g);
                    trace(&(pf * pg.adjoint())) * (pi.degree as f64 / order)
                })
                .sum();
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max)
}

/// Johnson's formula, `(1/|G|) sum_pi d_pi^3`, reduced.
pub fn johnson_am(table: &CharacterTable) -> Rational {
    let cubes: BigInt = table.degrees.iter().map(|&d| BigInt::from(d).pow(3)).sum();
    Rational::new(cubes, BigInt::from(table.order))
}

/// Plancherel mass of each degree stratum `Omega_n = {pi : d_pi = n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    pub masses: BTreeMap<usize, Rational>,
}

impl Stratification {
    pub fn mass(&self, degree: usize) -> Rational {
        self.masses.get(&degree).cloned().unwrap_or_else(zero)
    }

    /// `sum_n n nu(Omega_n)`, exactly one.
    pub fn total(&self) -> Rational {
        self.masses.iter().map(|(&n, m)| m * integer(n as i64)).fold(zero(), |a, b| a + b)
    }

    pub fn max_degree(&self) -> usize {
        self.masses.keys().copied().max().unwrap_or(0)
    }
}

pub fn stratification(table: &CharacterTable) -> Stratification {
    let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
    for &d in &table.degrees {
        *counts.entry(d).or_default() += 1;
    }
    let masses = counts.into_iter().map(|(n, count)| (n, ratio(count * n as i64, table.order as i64))).collect();
    Stratification { masses }
}

/// `nu(Omega_1) = |G^ab| / |G|`
pub fn nu_omega1(table: &CharacterTable) -> Rational {
    stratification(table).mass(1)
}

/// `sum_n n^2 nu(Omega_n)`
pub fn ad_closed_form(strat: &Stratification) -> Rational {
    strat.masses.iter().map(|(&n, m)| m * integer((n * n) as i64)).fold(zero(), |a, b| a + b)
}

/// `C_{pi,sigma} = sum_x pi(x) ⊗ sigma(x^-1)`, the Fourier coefficient of the
/// anti-diagonal indicator at `pi ⊗ sigma`.
pub fn antidiagonal_coefficient(g: &FiniteGroup, pi: &UnitaryIrrep, sigma: &UnitaryIrrep) -> CMatrix {
    let dim = pi.degree * sigma.degree;
    g.elements().fold(CMatrix::zeros(dim, dim), |acc, x| acc + kron(pi.matrix(x), sigma.matrix(g.inv(x))))
}

/// `sum_{pi,sigma} (d_pi d_sigma / |G|^2) ||C_{pi,sigma}||_1` over all pairs
/// of the supplied irreps. Terms are evaluated in parallel when requested
/// and summed in a fixed order.
pub fn ad_direct(g: &FiniteGroup, irreps: &[UnitaryIrrep], exec: Execution) -> f64 {
    let k = irreps.len();
    let n2 = (g.order() * g.order()) as f64;
    let terms = exec.map_range(0..k * k, |idx| {
        let (pi, sigma) = (&irreps[idx / k], &irreps[idx % k]);
        let c = antidiagonal_coefficient(g, pi, sigma);
        (pi.degree * sigma.degree) as f64 / n2 * trace_norm(&c)
    });
    terms.iter().sum()
}

/// The flip `ξ ⊗ ξ' -> ξ' ⊗ ξ` on `C^d ⊗ C^d`, i.e. `sum_ij E_ij ⊗ E_ji`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipOperator {
    pub dimension: usize,
    pub matrix: CMatrix,
}

impl FlipOperator {
    pub fn trace(&self) -> Complex64 {
        trace(&self.matrix)
    }

    pub fn trace_norm(&self) -> f64 {
        trace_norm(&self.matrix)
    }

    /// `max(|X* - X|, |X^2 - I|)`
    pub fn involution_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        max_abs(&(self.matrix.adjoint() - &self.matrix))
            .max(max_abs(&(&self.matrix * &self.matrix - CMatrix::identity(n, n))))
    }

    /// Trace norm certified in integers: the matrix is a 0/1 permutation
    /// matrix that squares to the identity, so all `d^2` singular values are 1.
    pub fn exact_trace_norm(&self) -> Option<usize> {
        let n = self.matrix.nrows();
        let mut image = vec![usize::MAX; n];
        for (col, slot) in image.iter_mut().enumerate() {
            let mut hits = 0;
            for row in 0..n {
                let z = self.matrix[(row, col)];
                if z.im != 0.0 {
                    return None;
                }
                if z.re == 1.0 {
                    hits += 1;
                    *slot = row;
                } else if z.re != 0.0 {
                    return None;
                }
            }
            if hits != 1 {
                return None;
            }
        }
        let is_involution = (0..n).all(|i| image[image[i]] == i);
        is_involution.then_some(n)
    }
}

pub fn flip_operator(d: usize) -> FlipOperator {
    let n = d * d;
    let mut matrix = CMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            // e_i ⊗ e_j  ->  e_j ⊗ e_i
            matrix[(j * d + i, i * d + j)] = Complex64::new(1.0, 0.0);
        }
    }
    FlipOperator { dimension: d, matrix }
}

/// `|tr(X (B ⊗ C)) - tr(B C)|`
pub fn flip_trace_identity(b: &CMatrix, c: &CMatrix) -> Result<f64, DimensionMismatch> {
    let d = b.nrows();
    for m in [b, c] {
        if m.nrows() != d || m.ncols() != d {
            return Err(DimensionMismatch { expected: d, rows: m.nrows(), cols: m.ncols() });
        }
    }
    let x = flip_operator(d);
    let lhs = trace(&(&x.matrix * kron(b, c)));
    let rhs = trace(&(b * c));
    Ok((lhs - rhs).norm())
}

/// Outcome of comparing one anti-diagonal coefficient with its prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientReport {
    pub equivalent: bool,
    pub same_representative: bool,
    /// Frobenius distance from the predicted matrix; for equivalent but
    /// distinct representatives, the distance of the trace norm from `|G| d`.
    pub deviation: f64,
    pub trace_norm: f64,
}

/// Irreps are compared through their characters, never their matrices.
pub fn equivalent(pi: &UnitaryIrrep, sigma: &UnitaryIrrep, tol: f64) -> bool {
    pi.degree == sigma.degree
        && pi.matrices.iter().zip(&sigma.matrices).all(|(a, b)| (trace(a) - trace(b)).norm() < tol)
}

fn same_representative(pi: &UnitaryIrrep, sigma: &UnitaryIrrep) -> bool {
    std::ptr::eq(pi, sigma) || (pi.degree == sigma.degree && pi.matrices == sigma.matrices)
}

/// The coefficient vanishes for inequivalent irreps and equals
/// `(|G|/d) X_d` when `sigma` is the same representative as `pi`.
pub fn antidiag_coefficient_check(g: &FiniteGroup, pi: &UnitaryIrrep, sigma: &UnitaryIrrep) -> CoefficientReport {
    let c = antidiagonal_coefficient(g, pi, sigma);
    let norm1 = trace_norm(&c);
    let order = g.order() as f64;
    let same = same_representative(pi, sigma);
    let equiv = same || equivalent(pi, sigma, 1e-6);
    let deviation = if same {
        let predicted = flip_operator(pi.degree).matrix * Complex64::new(order / pi.degree as f64, 0.0);
        frobenius(&(c - predicted))
    } else if equiv {
        (norm1 - order * pi.degree as f64).abs()
    } else {
        frobenius(&c)
    };
    CoefficientReport { equivalent: equiv, same_representative: same, deviation, trace_norm: norm1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::character_table;
    use crate::group::*;
    use crate::irreps::explicit_irreps;
    use crate::rational::{format, one};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn am(g: &FiniteGroup) -> Rational {
        johnson_am(&character_table(g).unwrap())
    }

    fn irreps(g: &FiniteGroup) -> Vec<UnitaryIrrep> {
        explicit_irreps(g, &character_table(g).unwrap()).unwrap()
    }

    /// Independent oracle: the Fourier-algebra norm of the anti-diagonal
    /// indicator computed with irreps of `G x G` built from its own
    /// character table, without tensor products.
    fn ad_via_product_group(g: &FiniteGroup) -> f64 {
        let k = direct_product(g, g).unwrap();
        let ks = irreps(&k);
        let n = g.order();
        let indicator: Vec<Complex64> = (0..k.order())
            .map(|e| {
                let (x, y) = (e / n, e % n);
                if y == g.inv(x) {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        ks.iter().map(|s| s.degree as f64 / k.order() as f64 * trace_norm(&fourier_coefficient(s, &indicator))).sum()
    }

    #[test]
    fn plancherel_weights_examples() {
        let c5 = character_table(&make_cyclic(5).unwrap()).unwrap();
        assert!(plancherel_weights(&c5).weights.iter().all(|w| *w == ratio(1, 5)));
        let d4 = character_table(&make_dihedral(4).unwrap()).unwrap();
        let p = plancherel_weights(&d4);
        assert_eq!(p.weights, vec![ratio(1, 8), ratio(1, 8), ratio(1, 8), ratio(1, 8), ratio(2, 8)]);
        assert_eq!(p.total_mass(), one());
    }

    #[test]
    fn plancherel_identity() {
        let g = make_symmetric(3).unwrap();
        let ir = irreps(&g);
        let delta = |i: usize| -> Vec<Complex64> {
            (0..6).map(|x| Complex64::new(if x == i { 1.0 } else { 0.0 }, 0.0)).collect()
        };
        assert!(verify_plancherel_identity(&ir, &[(delta(0), delta(0))]) < 1e-12);
        assert!(verify_plancherel_identity(&ir, &[(delta(2), delta(5))]) < 1e-8);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut rand_fn = || -> Vec<Complex64> {
            (0..6).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
        };
        let pairs: Vec<_> = (0..20).map(|_| (rand_fn(), rand_fn())).collect();
        assert!(verify_plancherel_identity(&ir, &pairs) < 1e-8);
    }

    #[test]
    fn johnson_values() {
        assert_eq!(am(&make_cyclic(12).unwrap()), one());
        assert_eq!(am(&make_dihedral(4).unwrap()), ratio(3, 2));
        assert_eq!(am(&make_dicyclic(2).unwrap()), ratio(3, 2));
        assert_eq!(am(&make_alternating(4).unwrap()), ratio(5, 2));
        assert_eq!(am(&make_symmetric(3).unwrap()), ratio(5, 3));
        assert_eq!(format(&am(&make_symmetric(3).unwrap())), "5/3");
    }

    #[test]
    fn stratification_and_closed_form() {
        let d4 = character_table(&make_dihedral(4).unwrap()).unwrap();
        let s = stratification(&d4);
        assert_eq!(s.mass(1), ratio(1, 2));
        assert_eq!(s.mass(2), ratio(1, 4));
        assert_eq!(s.mass(3), zero());
        assert_eq!(s.total(), one());
        assert_eq!(ad_closed_form(&s), ratio(3, 2));
        assert_eq!(ad_closed_form(&s), johnson_am(&d4));

        let ab = character_table(&make_cyclic(9).unwrap()).unwrap();
        assert_eq!(nu_omega1(&ab), one());
        assert_eq!(ad_closed_form(&stratification(&ab)), one());

        let s3 = character_table(&make_symmetric(3).unwrap()).unwrap();
        assert_eq!(nu_omega1(&s3), ratio(1, 3));

        let c3 = make_cyclic(3).unwrap();
        let n = direct_product(&c3, &c3).unwrap();
        let swap: Vec<usize> = (0..9).map(|x| (x % 3) * 3 + x / 3).collect();
        let g = semidirect_product(&n, 2, &swap).unwrap();
        let t = character_table(&g).unwrap();
        let mut d = t.degrees.clone();
        d.sort_unstable();
        assert_eq!(d, vec![1, 1, 1, 1, 1, 1, 2, 2, 2]);
        assert_eq!(ad_closed_form(&stratification(&t)), ratio(5, 3));
    }

    #[test]
    fn ad_direct_matches_johnson() {
        let c2 = make_cyclic(2).unwrap();
        assert!((ad_direct(&c2, &irreps(&c2), Execution::Serial) - 1.0).abs() < 1e-12);
        let d4 = make_dihedral(4).unwrap();
        assert!((ad_direct(&d4, &irreps(&d4), Execution::default()) - 1.5).abs() < 1e-7);
        let s3 = make_symmetric(3).unwrap();
        assert!((ad_direct(&s3, &irreps(&s3), Execution::default()) - 5.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn ad_direct_agrees_with_product_group_oracle() {
        for g in [make_symmetric(3).unwrap(), make_dicyclic(2).unwrap(), make_cyclic(4).unwrap()] {
            let direct = ad_direct(&g, &irreps(&g), Execution::Serial);
            let oracle = ad_via_product_group(&g);
            assert!((direct - oracle).abs() < 1e-8, "{}: {direct} vs {oracle}", g.label());
        }
    }

    #[test]
    fn serial_and_parallel_sums_agree() {
        let g = make_alternating(4).unwrap();
        let ir = irreps(&g);
        let a = ad_direct(&g, &ir, Execution::Serial);
        let b = ad_direct(&g, &ir, Execution::Parallel);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn flip_examples() {
        let x1 = flip_operator(1);
        assert_eq!(x1.matrix, CMatrix::identity(1, 1));
        let x2 = flip_operator(2);
        assert!((x2.trace() - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let (vals, _) = crate::linalg::hermitian_eigh(&x2.matrix);
        let expected = [-1.0, 1.0, 1.0, 1.0];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).abs() < 1e-12);
        }
        for d in 1..=8 {
            let x = flip_operator(d);
            assert_eq!(x.exact_trace_norm(), Some(d * d));
            assert!((x.trace_norm() - (d * d) as f64).abs() < 1e-10);
            assert!(x.involution_defect() == 0.0);
            assert!((x.trace() - Complex64::new(d as f64, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn flip_maps_elementary_tensors() {
        let d = 3;
        let x = flip_operator(d);
        let a = nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 2.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, -1.0),
        ]);
        let b = nalgebra::DVector::from_vec(vec![
            Complex64::new(-1.0, 0.0),
            Complex64::new(2.0, 1.0),
            Complex64::new(0.3, 0.3),
        ]);
        let lhs = &x.matrix * a.kronecker(&b);
        let rhs = b.kronecker(&a);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn flip_trace_identity_cases() {
        let i3 = CMatrix::identity(3, 3);
        assert_eq!(flip_trace_identity(&i3, &i3).unwrap(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut rnd = |r: usize, c: usize| {
            CMatrix::from_fn(r, c, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        };
        for d in 1..=6 {
            // rank one: B = u v*, C = w z*
            let b = rnd(d, 1) * rnd(d, 1).adjoint();
            let c = rnd(d, 1) * rnd(d, 1).adjoint();
            assert!(flip_trace_identity(&b, &c).unwrap() < 1e-12);
            let b = rnd(d, d);
            let c = rnd(d, d);
            assert!(flip_trace_identity(&b, &c).unwrap() < 1e-10);
        }
        assert!(flip_trace_identity(&CMatrix::identity(2, 2), &CMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn coefficient_checks() {
        let c2 = make_cyclic(2).unwrap();
        let ir = irreps(&c2);
        let r = antidiag_coefficient_check(&c2, &ir[0], &ir[1]);
        assert!(!r.equivalent);
        assert_eq!(r.deviation, 0.0);

        let d4 = make_dihedral(4).unwrap();
        let ir = irreps(&d4);
        let two = ir.iter().find(|p| p.degree == 2).unwrap();
        let r = antidiag_coefficient_check(&d4, two, two);
        assert!(r.same_representative && r.deviation < 1e-6);
        assert!((r.trace_norm - 16.0).abs() < 1e-9);

        let s3 = make_symmetric(3).unwrap();
        let ir = irreps(&s3);
        for (a, pi) in ir.iter().enumerate() {
            for (b, sigma) in ir.iter().enumerate() {
                let r = antidiag_coefficient_check(&s3, pi, sigma);
                assert_eq!(r.same_representative, a == b);
                assert!(r.deviation < 1e-6);
            }
        }
    }

    #[test]
    fn conjugated_representative_keeps_trace_norm() {
        let s3 = make_symmetric(3).unwrap();
        let ir = irreps(&s3);
        let pi = ir.iter().find(|p| p.degree == 2).unwrap();
        let theta = 0.37_f64;
        let u = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(theta.cos(), 0.0),
                Complex64::new(0.0, theta.sin()),
                Complex64::new(0.0, theta.sin()),
                Complex64::new(theta.cos(), 0.0),
            ],
        );
        let sigma = UnitaryIrrep {
            degree: 2,
            character: pi.character,
            matrices: pi.matrices.iter().map(|m| &u * m * u.adjoint()).collect(),
        };
        let r = antidiag_coefficient_check(&s3, pi, &sigma);
        assert!(r.equivalent && !r.same_representative);
        assert!(r.deviation < 1e-9, "{}", r.deviation);
    }
}
