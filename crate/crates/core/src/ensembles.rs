//! Random matrix and vector ensembles with reproducible generation.
//!
//! Everything takes an explicit `Rng`, so callers control seeding; the
//! trial harness derives one ChaCha stream per trial.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::{ComplexMatrix, Vector};
use crate::variance::{ProbabilityWeights, ScalarBounds, WeightedFamily};

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// PSD Gram matrix `G* G` of a square Ginibre `G`.
pub fn wishart(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    &g.adjoint() * &g
}

/// Vector with i.i.d. standard complex Gaussian entries.
pub fn random_vector(rng: &mut impl Rng, dim: usize) -> Vector {
    Vector::new((0..dim).map(|_| gaussian(rng)).collect()).expect("gaussian entries are finite")
}

/// Strictly positive weights, drawn uniform and normalized.
pub fn random_weights(rng: &mut impl Rng, n: usize) -> ProbabilityWeights {
    ProbabilityWeights::normalized((0..n).map(|_| rng.random_range(0.05..1.0)).collect())
        .expect("positive raw weights normalize")
}

/// Weights with one entry at `1 - 1e-9` and the rest sharing the remainder.
pub fn quasi_degenerate_weights(rng: &mut impl Rng, n: usize) -> ProbabilityWeights {
    if n == 1 {
        return ProbabilityWeights::new(vec![1.0]).expect("singleton weight");
    }
    let dominant = rng.random_range(0..n);
    let rest = 1e-9 / (n - 1) as f64;
    let mut t = vec![rest; n];
    t[dominant] = 1.0 - 1e-9;
    ProbabilityWeights::new(t).expect("quasi-degenerate weights sum to 1")
}

/// Modified Gram-Schmidt with one reorthogonalization pass.
///
/// Returns `None` when the input is numerically dependent (a projected
/// vector collapses below `1e-10` of its original norm).
pub fn gram_schmidt(vs: &[Vector]) -> Option<Vec<Vector>> {
    let mut basis: Vec<Vector> = Vec::with_capacity(vs.len());
    for v in vs {
        let original_norm = v.norm();
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let coeff = w.inner(b);
                w = &w - &b.scale(coeff);
            }
        }
        let norm = w.norm();
        if norm <= 1e-10 * (1.0 + original_norm) {
            return None;
        }
        basis.push(w.scale(Complex64::new(1.0 / norm, 0.0)));
    }
    Some(basis)
}

/// Pairwise-orthogonal vectors with random lengths in `[0.5, 2]`.
///
/// `count` must not exceed `dim`.
pub fn random_orthogonal_vectors(rng: &mut impl Rng, dim: usize, count: usize) -> Vec<Vector> {
    assert!(count <= dim, "cannot fit {count} orthogonal vectors in dim {dim}");
    loop {
        let raw: Vec<Vector> = (0..count).map(|_| random_vector(rng, dim)).collect();
        if let Some(basis) = gram_schmidt(&raw) {
            return basis
                .into_iter()
                .map(|b| b.scale(Complex64::new(rng.random_range(0.5..2.0), 0.0)))
                .collect();
        }
        // Gaussian vectors are dependent with probability zero; retry
    }
}

/// Random unitary matrix from Gram-Schmidt on Ginibre columns.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    loop {
        let raw: Vec<Vector> = (0..dim).map(|_| random_vector(rng, dim)).collect();
        if let Some(basis) = gram_schmidt(&raw) {
            return ComplexMatrix::from_fn(dim, dim, |i, j| basis[j][i]);
        }
    }
}

/// Diagonal PSD family with scalar bounds under which the sandwich-bound
/// corollary is a theorem.
///
/// For `n = 1` the matrix is a scalar multiple of the identity with a
/// collapsed band. For `n >= 2` the bands split into a low cluster inside
/// `[0, 1]` and a high cluster inside `[k, k + 1]`, with `k` chosen from
/// the realized cluster weights so that every interval
/// `[lower_i - sum t_j upper_j, upper_i - sum t_j lower_j]` stays strictly
/// away from zero.
pub fn diagonal_positive_family(
    rng: &mut impl Rng,
    dim: usize,
    n: usize,
) -> (WeightedFamily, ScalarBounds) {
    assert!(dim >= 1 && n >= 1);
    let weights = ProbabilityWeights::normalized(
        (0..n).map(|_| rng.random_range(0.5..1.5)).collect(),
    )
    .expect("positive raw weights normalize");

    if n == 1 {
        let c = rng.random_range(0.5..3.0);
        let fam = WeightedFamily::new(
            weights,
            vec![ComplexMatrix::scalar(dim, Complex64::new(c, 0.0))],
        )
        .expect("scalar family is valid");
        let bounds = ScalarBounds::new(vec![c], vec![c]).expect("collapsed band");
        return (fam, bounds);
    }

    let n_low = n.div_ceil(2);
    let w_low: f64 = weights.as_slice()[..n_low].iter().sum();
    let w_high = 1.0 - w_low;
    let k = 4.0 * (1.0 + 1.0 / w_low.min(w_high));

    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    let mut matrices = Vec::with_capacity(n);
    for i in 0..n {
        let base = if i < n_low { 0.0 } else { k };
        let lo = base + rng.random_range(0.0..0.45);
        let hi = lo + rng.random_range(0.05..0.55);
        lower.push(lo);
        upper.push(hi);
        let diag: Vec<f64> = (0..dim).map(|_| rng.random_range(lo..hi)).collect();
        matrices.push(ComplexMatrix::diagonal(&diag));
    }
    let fam = WeightedFamily::new(weights, matrices).expect("diagonal family is valid");
    let bounds = ScalarBounds::new(lower, upper).expect("ordered bands");
    (fam, bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn wishart_is_psd_and_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let w = wishart(&mut rng, 5);
        assert_eq!(w.hermitian_deviation().unwrap(), 0.0);
        let min = crate::eig::min_eigenvalue(&w).unwrap();
        assert!(min >= -1e-12 * (1.0 + w.max_abs_entry()));
    }

    #[test]
    fn gram_schmidt_orthonormalizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let raw: Vec<Vector> = (0..4).map(|_| random_vector(&mut rng, 6)).collect();
        let basis = gram_schmidt(&raw).unwrap();
        for (i, u) in basis.iter().enumerate() {
            assert!((u.norm() - 1.0).abs() <= 1e-13);
            for v in basis.iter().skip(i + 1) {
                assert!(u.inner(v).norm() <= 1e-13);
            }
        }
    }

    #[test]
    fn gram_schmidt_detects_dependence() {
        let v = Vector::from_real(&[1.0, 2.0, 0.0]).unwrap();
        let w = v.scale(Complex64::new(-2.0, 0.0));
        assert!(gram_schmidt(&[v, w]).is_none());
    }

    #[test]
    fn random_unitary_has_orthonormal_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let u = random_unitary(&mut rng, 5);
        let gram = &u.adjoint() * &u;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(5)) <= 1e-13);
    }

    #[test]
    fn diagonal_positive_intervals_avoid_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..50 {
            let n = rng.random_range(2..=6);
            let dim = rng.random_range(1..=6);
            let (fam, bounds) = diagonal_positive_family(&mut rng, dim, n);
            let t = fam.weights().as_slice();
            let mean_lower: f64 = t.iter().zip(bounds.lower()).map(|(w, m)| w * m).sum();
            let mean_upper: f64 = t.iter().zip(bounds.upper()).map(|(w, m)| w * m).sum();
            for i in 0..n {
                let a = bounds.lower()[i] - mean_upper;
                let b = bounds.upper()[i] - mean_lower;
                assert!(
                    a > 0.0 || b < 0.0,
                    "interval [{a}, {b}] straddles zero at index {i}"
                );
            }
        }
    }

    #[test]
    fn quasi_degenerate_weights_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let w = quasi_degenerate_weights(&mut rng, 5);
        assert_eq!(w.len(), 5);
        assert!(w.as_slice().iter().any(|&x| x > 0.999));
    }
}
