//! The weighted operator variance identity
//! `sum_i t_i |A_i - sum_j t_j A_j|^2 = sum_i t_i |A_i|^2 - |sum_j t_j A_j|^2`,
//! the AM-QM consequence, scalar sandwich bounds on the variance matrix,
//! the vector-space form via rank-one embedding, and the normalized-trace
//! identity.

use num_complex::Complex64;

use crate::eig::{hermitian_eig, min_eigenvalue, HERMITIAN_TOL};
use crate::error::{Error, Result};
use crate::matrix::{rank_one, ComplexMatrix, Vector};
use crate::norms::operator_norm;
use crate::report::CheckReport;

/// Absolute slack allowed on `|sum t_i - 1|`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Relative tolerance of the variance identity residual.
pub const IDENTITY_TOL: f64 = 1e-11;
/// Relative tolerance of the AM-QM eigenvalue margin.
pub const AMQM_TOL: f64 = 1e-11;
/// Relative tolerance of the sandwich-bound margins.
pub const BOUNDS_TOL: f64 = 1e-10;
/// Relative tolerance of the vector identity residuals.
pub const VECTOR_IDENTITY_TOL: f64 = 1e-11;
/// Relative tolerance of the normalized-trace identity residual.
pub const TRACE_IDENTITY_TOL: f64 = 1e-10;
/// Relative slack when validating operator spectra against scalar bounds.
pub const BOUNDS_VALIDATION_TOL: f64 = 1e-10;

/// Nonnegative weights summing to 1 within `WEIGHT_SUM_TOL`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityWeights {
    t: Vec<f64>,
}

impl ProbabilityWeights {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::BadWeights {
                context: "weight list is empty".into(),
            });
        }
        if let Some(k) = t.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::BadWeights {
                context: format!("weight {k} is negative or not finite"),
            });
        }
        let sum: f64 = t.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::BadWeights {
                context: format!("weights sum to {sum}, expected 1 within {WEIGHT_SUM_TOL:.0e}"),
            });
        }
        Ok(Self { t })
    }

    /// Uniform weights `1/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadWeights {
                context: "cannot build uniform weights of length 0".into(),
            });
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    /// Rescales nonnegative raw weights to sum to 1.
    pub fn normalized(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::BadWeights {
                context: "weight list is empty".into(),
            });
        }
        if let Some(k) = raw.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::BadWeights {
                context: format!("weight {k} is negative or not finite"),
            });
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(Error::BadWeights {
                context: "weights sum to zero".into(),
            });
        }
        Self::new(raw.into_iter().map(|w| w / sum).collect())
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.t
    }
}

/// Weighted family `(t_i, A_i)` of same-dimension square matrices.
#[derive(Debug, Clone)]
pub struct WeightedFamily {
    weights: ProbabilityWeights,
    matrices: Vec<ComplexMatrix>,
}

impl WeightedFamily {
    pub fn new(weights: ProbabilityWeights, matrices: Vec<ComplexMatrix>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "family must contain at least one matrix".into(),
            });
        }
        if weights.len() != matrices.len() {
            return Err(Error::BadWeights {
                context: format!(
                    "{} weights for {} matrices",
                    weights.len(),
                    matrices.len()
                ),
            });
        }
        let dim = matrices[0].rows();
        for (k, m) in matrices.iter().enumerate() {
            if !m.is_square() {
                return Err(Error::NotSquare {
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
            if m.rows() != dim {
                return Err(Error::DimensionMismatch {
                    context: format!("matrix {k} is {}x{}, expected {dim}x{dim}", m.rows(), m.cols()),
                });
            }
        }
        Ok(Self { weights, matrices })
    }

    /// Uniform weights over the given matrices.
    pub fn uniform(matrices: Vec<ComplexMatrix>) -> Result<Self> {
        let w = ProbabilityWeights::uniform(matrices.len().max(1))?;
        Self::new(w, matrices)
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn weights(&self) -> &ProbabilityWeights {
        &self.weights
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    fn pairs(&self) -> impl Iterator<Item = (f64, &ComplexMatrix)> {
        self.weights
            .as_slice()
            .iter()
            .copied()
            .zip(self.matrices.iter())
    }
}

/// Elementwise scalar bounds `lower_i I <= A_i <= upper_i I`.
///
/// The constructor only requires `lower_i <= upper_i`; nonnegativity of the
/// lower bounds is enforced by [`variance_bounds`] in its default strict
/// mode and waived in relaxed mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ScalarBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::BadBounds {
                context: format!(
                    "need equal nonempty bound lists, got {} and {}",
                    lower.len(),
                    upper.len()
                ),
            });
        }
        for (k, (&m, &mm)) in lower.iter().zip(&upper).enumerate() {
            if !m.is_finite() || !mm.is_finite() || m > mm {
                return Err(Error::BadBounds {
                    context: format!("bounds {k}: need finite lower <= upper, got [{m}, {mm}]"),
                });
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }
}

/// Validation mode of [`variance_bounds`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundsMode {
    /// Requires `0 <= lower_i` in addition to `lower_i I <= A_i <= upper_i I`.
    #[default]
    Strict,
    /// Allows any Hermitian `A_i` with `lower_i I <= A_i <= upper_i I`.
    Relaxed,
}

/// `sum_j t_j A_j`.
pub fn weighted_mean(fam: &WeightedFamily) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(fam.dim(), fam.dim());
    for (t, a) in fam.pairs() {
        acc = &acc + &a.scale_re(t);
    }
    acc
}

/// Natural scale of the family: `1 + sum_i t_i ||A_i||_inf^2`.
fn family_scale(fam: &WeightedFamily) -> f64 {
    1.0 + fam
        .pairs()
        .map(|(t, a)| t * operator_norm(a).powi(2))
        .sum::<f64>()
}

/// Squared absolute value `|M|^2 = M* M`.
fn abs_sq(m: &ComplexMatrix) -> ComplexMatrix {
    &m.adjoint() * m
}

/// Evaluates both sides of the variance identity.
///
/// Returns `(lhs, rhs, report)` with
/// `lhs = sum_i t_i |A_i - mean|^2` and `rhs = sum_i t_i |A_i|^2 - |mean|^2`,
/// where `mean = sum_j t_j A_j`. The report carries the operator-norm
/// residual `||lhs - rhs||_inf` against `IDENTITY_TOL` times the family
/// scale.
pub fn variance_sides(fam: &WeightedFamily) -> (ComplexMatrix, ComplexMatrix, CheckReport) {
    let dim = fam.dim();
    let mean = weighted_mean(fam);
    let mut lhs = ComplexMatrix::zeros(dim, dim);
    let mut sum_sq = ComplexMatrix::zeros(dim, dim);
    for (t, a) in fam.pairs() {
        lhs = &lhs + &abs_sq(&(a - &mean)).scale_re(t);
        sum_sq = &sum_sq + &abs_sq(a).scale_re(t);
    }
    let rhs = &sum_sq - &abs_sq(&mean);
    let residual = operator_norm(&(&lhs - &rhs));
    let scale = family_scale(fam);
    let report = CheckReport::residual("variance-identity", residual, IDENTITY_TOL * scale)
        .with_detail("scale", scale)
        .with_detail("lhs_opnorm", operator_norm(&lhs))
        .with_detail("rhs_opnorm", operator_norm(&rhs));
    (lhs, rhs, report)
}

/// PSD margin of the AM-QM inequality `|sum t_i A_i|^2 <= sum t_i |A_i|^2`:
/// the smallest eigenvalue of the difference.
pub fn am_qm_margin(fam: &WeightedFamily) -> CheckReport {
    let dim = fam.dim();
    let mean = weighted_mean(fam);
    let mut sum_sq = ComplexMatrix::zeros(dim, dim);
    for (t, a) in fam.pairs() {
        sum_sq = &sum_sq + &abs_sq(a).scale_re(t);
    }
    let diff = &sum_sq - &abs_sq(&mean);
    let margin = min_eigenvalue(&diff).expect("difference of Gram sums is Hermitian");
    let scale = family_scale(fam);
    CheckReport::margin("am-qm", margin, AMQM_TOL * scale).with_detail("scale", scale)
}

/// Sandwich bounds on the variance matrix of Hermitian operators with
/// scalar bounds, using strict (default) validation.
///
/// See [`variance_bounds_with_mode`].
pub fn variance_bounds(fam: &WeightedFamily, bounds: &ScalarBounds) -> Result<CheckReport> {
    variance_bounds_with_mode(fam, bounds, BoundsMode::Strict)
}

/// Checks `sum_i t_i beta_i^2 I <= D <= sum_i t_i alpha_i^2 I` for
/// `D = sum_i t_i A_i^2 - (sum_i t_i A_i)^2`, with
/// `alpha_i = max(|upper_i - sum_j t_j lower_j|, |lower_i - sum_j t_j upper_j|)`
/// and `beta_i` the corresponding min. The inner sums run over the whole
/// family independent of the free index.
///
/// The lower bound is only a theorem when each interval
/// `[lower_i - sum t_j upper_j, upper_i - sum t_j lower_j]` excludes zero
/// (or collapses); for straddling configurations the report honestly
/// records a negative lower margin.
pub fn variance_bounds_with_mode(
    fam: &WeightedFamily,
    bounds: &ScalarBounds,
    mode: BoundsMode,
) -> Result<CheckReport> {
    let n = fam.len();
    if bounds.len() != n {
        return Err(Error::BadBounds {
            context: format!("{} bound pairs for {} matrices", bounds.len(), n),
        });
    }
    if mode == BoundsMode::Strict {
        if let Some(k) = bounds.lower().iter().position(|&m| m < 0.0) {
            return Err(Error::BadBounds {
                context: format!(
                    "strict mode requires nonnegative lower bounds, got lower[{k}] = {}",
                    bounds.lower()[k]
                ),
            });
        }
    }

    // validate Hermitian inputs and their spectra against the bounds
    let mut op_norms = Vec::with_capacity(n);
    for (k, a) in fam.matrices().iter().enumerate() {
        let eig = hermitian_eig(a)?;
        let (lo, hi) = (eig.min_eigenvalue(), eig.max_eigenvalue());
        let slack = BOUNDS_VALIDATION_TOL * (1.0 + lo.abs().max(hi.abs()));
        if lo < bounds.lower()[k] - slack || hi > bounds.upper()[k] + slack {
            return Err(Error::BoundsViolated {
                index: k,
                lower: bounds.lower()[k],
                upper: bounds.upper()[k],
                min_eig: lo,
                max_eig: hi,
            });
        }
        op_norms.push(lo.abs().max(hi.abs()));
    }

    let t = fam.weights().as_slice();
    let mean_lower: f64 = t.iter().zip(bounds.lower()).map(|(w, m)| w * m).sum();
    let mean_upper: f64 = t.iter().zip(bounds.upper()).map(|(w, m)| w * m).sum();

    let dim = fam.dim();
    let mean = weighted_mean(fam);
    let mut sum_sq = ComplexMatrix::zeros(dim, dim);
    for (w, a) in fam.pairs() {
        sum_sq = &sum_sq + &(a * a).scale_re(w);
    }
    let variance = &sum_sq - &(&mean * &mean);

    let mut lower_sum = 0.0;
    let mut upper_sum = 0.0;
    let mut report_details = Vec::new();
    for k in 0..n {
        let hi_dev = (bounds.upper()[k] - mean_lower).abs();
        let lo_dev = (bounds.lower()[k] - mean_upper).abs();
        let alpha = hi_dev.max(lo_dev);
        let beta = hi_dev.min(lo_dev);
        lower_sum += t[k] * beta * beta;
        upper_sum += t[k] * alpha * alpha;
        report_details.push((k, alpha, beta));
    }

    let ident = ComplexMatrix::identity(dim);
    let lower_margin = min_eigenvalue(&(&variance - &ident.scale_re(lower_sum)))
        .expect("variance matrix is Hermitian");
    let upper_margin = min_eigenvalue(&(&ident.scale_re(upper_sum) - &variance))
        .expect("variance matrix is Hermitian");

    let scale = 1.0
        + t.iter()
            .zip(&op_norms)
            .map(|(w, nrm)| w * nrm * nrm)
            .sum::<f64>();

    let mut report = CheckReport::margin(
        "variance-bounds",
        lower_margin.min(upper_margin),
        BOUNDS_TOL * scale,
    )
    .with_detail("lower_margin", lower_margin)
    .with_detail("upper_margin", upper_margin)
    .with_detail("lower_bound", lower_sum)
    .with_detail("upper_bound", upper_sum)
    .with_detail("scale", scale);
    for (k, alpha, beta) in report_details {
        report = report
            .with_detail(format!("alpha[{k}]"), alpha)
            .with_detail(format!("beta[{k}]"), beta);
    }
    Ok(report)
}

/// Vector-space variance identity, checked two ways: directly with inner
/// products, and re-derived through the rank-one family `x_i (x) e` with
/// `e` the first standard basis vector.
pub fn vector_variance_identity(
    xs: &[Vector],
    weights: &ProbabilityWeights,
) -> Result<CheckReport> {
    if xs.is_empty() {
        return Err(Error::DimensionMismatch {
            context: "vector family is empty".into(),
        });
    }
    let e = Vector::basis(xs[0].dim(), 0);
    vector_variance_identity_with_e(xs, weights, &e)
}

/// Same as [`vector_variance_identity`] but embedding along an arbitrary
/// nonzero `e`. The embedded matrix identity holds for any such `e`.
pub fn vector_variance_identity_with_e(
    xs: &[Vector],
    weights: &ProbabilityWeights,
    e: &Vector,
) -> Result<CheckReport> {
    if xs.is_empty() {
        return Err(Error::DimensionMismatch {
            context: "vector family is empty".into(),
        });
    }
    let dim = xs[0].dim();
    if let Some(k) = xs.iter().position(|x| x.dim() != dim) {
        return Err(Error::DimensionMismatch {
            context: format!("vector {k} has dim {}, expected {dim}", xs[k].dim()),
        });
    }
    if weights.len() != xs.len() {
        return Err(Error::BadWeights {
            context: format!("{} weights for {} vectors", weights.len(), xs.len()),
        });
    }
    if e.norm() == 0.0 {
        return Err(Error::ZeroVector { index: 0 });
    }

    let t = weights.as_slice();
    let mut mean = Vector::zeros(dim);
    for (w, x) in t.iter().zip(xs) {
        mean = &mean + &x.scale(Complex64::new(*w, 0.0));
    }
    let lhs_direct: f64 = t.iter().zip(xs).map(|(w, x)| w * (x - &mean).norm_sq()).sum();
    let rhs_direct: f64 =
        t.iter().zip(xs).map(|(w, x)| w * x.norm_sq()).sum::<f64>() - mean.norm_sq();
    let residual_direct = (lhs_direct - rhs_direct).abs();

    let family = WeightedFamily::new(
        weights.clone(),
        xs.iter().map(|x| rank_one(x, e)).collect(),
    )?;
    let (lhs_mat, rhs_mat, embedded) = variance_sides(&family);
    let residual_embedded = embedded.residual_or_margin;

    let scale = 1.0 + t.iter().zip(xs).map(|(w, x)| w * x.norm_sq()).sum::<f64>();
    let tolerance = VECTOR_IDENTITY_TOL * scale;
    let worst = residual_direct.max(residual_embedded);
    Ok(
        CheckReport::residual("vector-variance-identity", worst, tolerance)
            .with_detail("residual_direct", residual_direct)
            .with_detail("residual_embedded", residual_embedded)
            .with_detail("lhs_direct", lhs_direct)
            .with_detail("rhs_direct", rhs_direct)
            .with_detail("lhs_embedded_00", lhs_mat[(0, 0)].re)
            .with_detail("rhs_embedded_00", rhs_mat[(0, 0)].re)
            .with_detail("scale", scale),
    )
}

/// Normalized-trace identity
/// `||A - tr^(A) I||_2^2 = ||A||_2^2 - n |tr^(A)|^2` with
/// `tr^(A) = tr(A)/n`, evaluated with entrywise Hilbert-Schmidt sums.
pub fn normalized_trace_identity(a: &ComplexMatrix) -> Result<CheckReport> {
    let tr = a.trace()?;
    let n = a.rows();
    let nt = tr.unscale(n as f64);
    let shifted = a - &ComplexMatrix::scalar(n, nt);
    let lhs = shifted.frobenius_norm_sq();
    let fro_sq = a.frobenius_norm_sq();
    let rhs = fro_sq - n as f64 * nt.norm_sqr();
    let residual = (lhs - rhs).abs();
    let tolerance = TRACE_IDENTITY_TOL * (1.0 + fro_sq);
    Ok(
        CheckReport::residual("normalized-trace-identity", residual, tolerance)
            .with_detail("lhs", lhs)
            .with_detail("rhs", rhs)
            .with_detail("normalized_trace_re", nt.re)
            .with_detail("normalized_trace_im", nt.im),
    )
}
