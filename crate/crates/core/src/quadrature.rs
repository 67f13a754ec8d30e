//! Discretization of a continuous field of operators `(A_t)` over a real
//! interval with a probability density, the operator-valued integral as a
//! positive-weight quadrature sum, and refinement studies.
//!
//! Because the renormalized quadrature weights form a probability vector,
//! the variance identity holds exactly (up to rounding) for every
//! discretization; refinement only improves the integral itself.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::norms::operator_norm;
use crate::report::CheckReport;
use crate::variance::{variance_sides, weighted_mean, ProbabilityWeights, WeightedFamily};

/// Positive-weight quadrature rules; both yield valid probability weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    Midpoint,
    Trapezoid,
}

impl std::str::FromStr for QuadratureRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "midpoint" => Ok(QuadratureRule::Midpoint),
            "trapezoid" => Ok(QuadratureRule::Trapezoid),
            other => Err(Error::BadNodes {
                context: format!("unknown quadrature rule {other:?}"),
            }),
        }
    }
}

impl std::fmt::Display for QuadratureRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuadratureRule::Midpoint => write!(f, "midpoint"),
            QuadratureRule::Trapezoid => write!(f, "trapezoid"),
        }
    }
}

type Evaluator = Box<dyn Fn(f64) -> ComplexMatrix + Send + Sync>;
type Density = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A matrix-valued field on a compact interval `[a, b]` together with a
/// probability density (uniform by default).
pub struct OperatorFieldSpec {
    a: f64,
    b: f64,
    evaluator: Evaluator,
    density: Density,
}

impl OperatorFieldSpec {
    /// Field on `[a, b]` with the uniform density.
    pub fn new(
        a: f64,
        b: f64,
        evaluator: impl Fn(f64) -> ComplexMatrix + Send + Sync + 'static,
    ) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a >= b {
            return Err(Error::BadDomain {
                context: format!("need finite a < b, got [{a}, {b}]"),
            });
        }
        let width = b - a;
        Ok(Self {
            a,
            b,
            evaluator: Box::new(evaluator),
            density: Box::new(move |_| 1.0 / width),
        })
    }

    /// Replaces the density. It must be nonnegative on `[a, b]` and
    /// integrate to 1; discretization renormalizes the weights either way.
    pub fn with_density(
        mut self,
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.density = Box::new(density);
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn evaluate(&self, t: f64) -> ComplexMatrix {
        (self.evaluator)(t)
    }

    pub fn density_at(&self, t: f64) -> f64 {
        (self.density)(t)
    }

    /// Constant field `A_t = c`.
    pub fn constant(a: f64, b: f64, c: ComplexMatrix) -> Result<Self> {
        Self::new(a, b, move |_| c.clone())
    }

    /// Linear scalar field `A_t = (scale * t) I`.
    pub fn linear(a: f64, b: f64, dim: usize, scale: f64) -> Result<Self> {
        Self::new(a, b, move |t| {
            ComplexMatrix::scalar(dim, Complex64::new(scale * t, 0.0))
        })
    }

    /// Planar rotation field `A_t = [[cos t, sin t], [-sin t, cos t]]`.
    pub fn rotation(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, |t| {
            ComplexMatrix::from_real_rows(vec![
                vec![t.cos(), t.sin()],
                vec![-t.sin(), t.cos()],
            ])
            .expect("2x2 rotation sample")
        })
    }

    /// Polynomial scalar field `A_t = (sum_k coeffs[k] t^k) I`.
    pub fn polynomial(a: f64, b: f64, dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::BadDomain {
                context: "polynomial coefficients must be nonempty and finite".into(),
            });
        }
        Self::new(a, b, move |t| {
            let value = coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c);
            ComplexMatrix::scalar(dim, Complex64::new(value, 0.0))
        })
    }
}

impl std::fmt::Debug for OperatorFieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OperatorFieldSpec")
            .field("a", &self.a)
            .field("b", &self.b)
            .finish_non_exhaustive()
    }
}

/// A discretized field: matrices sampled at increasing nodes with
/// renormalized probability weights.
#[derive(Debug, Clone)]
pub struct SampledField {
    family: WeightedFamily,
    nodes: Vec<f64>,
}

impl SampledField {
    pub fn family(&self) -> &WeightedFamily {
        &self.family
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// Samples the field at the rule's nodes and renormalizes
/// `rule-weight x density(t_k)` into probability weights.
pub fn discretize_field(
    spec: &OperatorFieldSpec,
    n_nodes: usize,
    rule: QuadratureRule,
) -> Result<SampledField> {
    if n_nodes == 0 {
        return Err(Error::BadNodes {
            context: "need at least one node".into(),
        });
    }
    let (a, b) = spec.domain();
    // a single trapezoid node degenerates to the midpoint rule
    let (nodes, rule_weights): (Vec<f64>, Vec<f64>) =
        if rule == QuadratureRule::Midpoint || n_nodes == 1 {
            let h = (b - a) / n_nodes as f64;
            (
                (0..n_nodes).map(|k| a + (k as f64 + 0.5) * h).collect(),
                vec![h; n_nodes],
            )
        } else {
            let h = (b - a) / (n_nodes - 1) as f64;
            let mut w = vec![h; n_nodes];
            w[0] = h / 2.0;
            w[n_nodes - 1] = h / 2.0;
            ((0..n_nodes).map(|k| a + k as f64 * h).collect(), w)
        };

    let mut raw = Vec::with_capacity(n_nodes);
    let mut matrices = Vec::with_capacity(n_nodes);
    let mut shape: Option<(usize, usize)> = None;
    for (&t, &rw) in nodes.iter().zip(&rule_weights) {
        let d = spec.density_at(t);
        if !d.is_finite() || d < 0.0 {
            return Err(Error::NegativeDensity { t, value: d });
        }
        raw.push(rw * d);
        let m = spec.evaluate(t);
        match shape {
            None => shape = Some((m.rows(), m.cols())),
            Some((r, c)) => {
                if (m.rows(), m.cols()) != (r, c) {
                    return Err(Error::EvaluatorDimensionDrift {
                        expected_rows: r,
                        expected_cols: c,
                        rows: m.rows(),
                        cols: m.cols(),
                        t,
                    });
                }
            }
        }
        matrices.push(m);
    }

    let weights = ProbabilityWeights::normalized(raw)?;
    let family = WeightedFamily::new(weights, matrices)?;
    Ok(SampledField { family, nodes })
}

/// The operator-valued integral of the sampled field: `sum_k w_k A_{t_k}`.
pub fn bochner_integral(sf: &SampledField) -> ComplexMatrix {
    weighted_mean(sf.family())
}

/// Variance identity evaluated on the sampled field. Exact per
/// discretization, not asymptotically.
pub fn integral_identity_check(sf: &SampledField) -> CheckReport {
    let (_, _, rep) = variance_sides(sf.family());
    CheckReport {
        name: "integral-identity".into(),
        ..rep
    }
}

/// One refinement level: node count, integral, operator-norm distance to
/// the finest level, and the identity report at this level.
#[derive(Debug, Clone)]
pub struct RefinementEntry {
    pub n_nodes: usize,
    pub integral: ComplexMatrix,
    pub error_vs_finest: f64,
    pub identity: CheckReport,
}

#[derive(Debug, Clone)]
pub struct RefinementStudy {
    pub entries: Vec<RefinementEntry>,
}

/// Discretizes at each node count (strictly increasing) and reports the
/// integral's convergence toward the finest level alongside the per-level
/// identity residuals.
pub fn refinement_study(
    spec: &OperatorFieldSpec,
    node_counts: &[usize],
    rule: QuadratureRule,
) -> Result<RefinementStudy> {
    if node_counts.is_empty() {
        return Err(Error::BadNodes {
            context: "node count list is empty".into(),
        });
    }
    if node_counts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadNodes {
            context: "node counts must be strictly increasing".into(),
        });
    }
    let mut sampled = Vec::with_capacity(node_counts.len());
    for &n in node_counts {
        sampled.push(discretize_field(spec, n, rule)?);
    }
    let reference = bochner_integral(sampled.last().unwrap());
    let entries = node_counts
        .iter()
        .zip(&sampled)
        .map(|(&n, sf)| {
            let integral = bochner_integral(sf);
            let error_vs_finest = operator_norm(&(&integral - &reference));
            let identity = integral_identity_check(sf);
            RefinementEntry {
                n_nodes: n,
                integral,
                error_vs_finest,
                identity,
            }
        })
        .collect();
    Ok(RefinementStudy { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation_integral_reference() -> ComplexMatrix {
        // antiderivative of the rotation field over [0, pi], divided by pi
        ComplexMatrix::from_real_rows(vec![
            vec![0.0, 2.0 / std::f64::consts::PI],
            vec![-2.0 / std::f64::consts::PI, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn constant_field_reproduces_matrix() {
        let c = ComplexMatrix::from_real_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        for rule in [QuadratureRule::Midpoint, QuadratureRule::Trapezoid] {
            for n in [1, 2, 7] {
                let spec = OperatorFieldSpec::constant(0.0, 1.0, c.clone()).unwrap();
                let sf = discretize_field(&spec, n, rule).unwrap();
                let sum: f64 = sf.family().weights().as_slice().iter().sum();
                assert!((sum - 1.0).abs() <= 1e-14);
                for m in sf.family().matrices() {
                    assert_eq!(m, &c);
                }
                assert!(bochner_integral(&sf).max_abs_diff(&c) <= 1e-14);
            }
        }
    }

    #[test]
    fn midpoint_two_nodes_on_unit_interval() {
        let spec = OperatorFieldSpec::linear(0.0, 1.0, 1, 1.0).unwrap();
        let sf = discretize_field(&spec, 2, QuadratureRule::Midpoint).unwrap();
        assert_eq!(sf.nodes(), &[0.25, 0.75]);
        assert_eq!(sf.family().weights().as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn linear_density_weights_by_hand() {
        let spec = OperatorFieldSpec::linear(0.0, 1.0, 1, 1.0)
            .unwrap()
            .with_density(|t| 2.0 * t);
        let sf = discretize_field(&spec, 4, QuadratureRule::Midpoint).unwrap();
        let expected = [1.0 / 16.0, 3.0 / 16.0, 5.0 / 16.0, 7.0 / 16.0];
        for (w, e) in sf.family().weights().as_slice().iter().zip(expected) {
            assert!((w - e).abs() <= 1e-15);
        }
    }

    #[test]
    fn trapezoid_exact_on_linear_field() {
        let spec = OperatorFieldSpec::linear(0.0, 1.0, 3, 1.0).unwrap();
        for n in [2, 5, 33] {
            let sf = discretize_field(&spec, n, QuadratureRule::Trapezoid).unwrap();
            let integral = bochner_integral(&sf);
            let expected = ComplexMatrix::scalar(3, Complex64::new(0.5, 0.0));
            assert!(integral.max_abs_diff(&expected) <= 1e-14);
        }
    }

    #[test]
    fn rotation_field_integral_matches_closed_form() {
        let spec = OperatorFieldSpec::rotation(0.0, std::f64::consts::PI).unwrap();
        let sf = discretize_field(&spec, 256, QuadratureRule::Midpoint).unwrap();
        let integral = bochner_integral(&sf);
        assert!(integral.max_abs_diff(&rotation_integral_reference()) <= 1e-4);
    }

    #[test]
    fn identity_is_exact_per_discretization() {
        let spec = OperatorFieldSpec::rotation(0.0, std::f64::consts::PI).unwrap();
        let coarse = discretize_field(&spec, 8, QuadratureRule::Midpoint).unwrap();
        let fine = discretize_field(&spec, 512, QuadratureRule::Midpoint).unwrap();
        let rep_coarse = integral_identity_check(&coarse);
        let rep_fine = integral_identity_check(&fine);
        assert!(rep_coarse.residual_or_margin <= 1e-12);
        assert!(rep_fine.residual_or_margin <= 1e-12);
        // the integrals differ while both identities are exact
        let gap = bochner_integral(&coarse).max_abs_diff(&bochner_integral(&fine));
        assert!(gap > 1e-4);
    }

    #[test]
    fn constant_field_refinement_has_zero_errors() {
        let c = ComplexMatrix::identity(2);
        let spec = OperatorFieldSpec::constant(0.0, 1.0, c).unwrap();
        let study = refinement_study(&spec, &[2, 4, 8], QuadratureRule::Trapezoid).unwrap();
        for entry in &study.entries {
            assert!(entry.error_vs_finest <= 1e-14);
            assert!(entry.identity.passed);
        }
    }

    #[test]
    fn quadratic_field_trapezoid_error_ratio_near_four() {
        let spec = OperatorFieldSpec::polynomial(0.0, 1.0, 1, vec![0.0, 0.0, 1.0]).unwrap();
        let exact = ComplexMatrix::scalar(1, Complex64::new(1.0 / 3.0, 0.0));
        let errors: Vec<f64> = [4usize, 8, 16]
            .iter()
            .map(|&n| {
                let sf = discretize_field(&spec, n, QuadratureRule::Trapezoid).unwrap();
                operator_norm(&(&bochner_integral(&sf) - &exact))
            })
            .collect();
        for w in errors.windows(2) {
            let ratio = w[0] / w[1];
            assert!(
                (3.2..=4.8).contains(&ratio),
                "error ratio {ratio} outside 4 +/- 20%"
            );
        }
    }

    #[test]
    fn rotation_field_midpoint_order_at_least_1_8() {
        let spec = OperatorFieldSpec::rotation(0.0, std::f64::consts::PI).unwrap();
        let exact = rotation_integral_reference();
        let ns = [8usize, 16, 32, 64];
        let errors: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let sf = discretize_field(&spec, n, QuadratureRule::Midpoint).unwrap();
                operator_norm(&(&bochner_integral(&sf) - &exact))
            })
            .collect();
        for w in errors.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 1.8, "observed order {order}");
        }
    }

    #[test]
    fn refinement_errors_decrease_toward_finest() {
        let spec = OperatorFieldSpec::rotation(0.0, std::f64::consts::PI).unwrap();
        let study =
            refinement_study(&spec, &[8, 16, 32, 64], QuadratureRule::Midpoint).unwrap();
        let errs: Vec<f64> = study.entries.iter().map(|e| e.error_vs_finest).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert_eq!(*errs.last().unwrap(), 0.0);
    }

    #[test]
    fn integral_commutes_with_trace_and_entry_functionals() {
        let spec = OperatorFieldSpec::rotation(0.0, 2.0).unwrap();
        let sf = discretize_field(&spec, 17, QuadratureRule::Trapezoid).unwrap();
        let integral = bochner_integral(&sf);
        let tr_of_integral = integral.trace().unwrap();
        let mut integral_of_tr = Complex64::ZERO;
        let mut integral_of_entry = Complex64::ZERO;
        for (w, m) in sf
            .family()
            .weights()
            .as_slice()
            .iter()
            .zip(sf.family().matrices())
        {
            integral_of_tr += m.trace().unwrap().scale(*w);
            integral_of_entry += m[(0, 1)].scale(*w);
        }
        assert!((tr_of_integral - integral_of_tr).norm() <= 1e-12 * (1.0 + tr_of_integral.norm()));
        assert!(
            (integral[(0, 1)] - integral_of_entry).norm()
                <= 1e-12 * (1.0 + integral_of_entry.norm())
        );
    }

    #[test]
    fn evaluator_dimension_drift_detected() {
        let spec = OperatorFieldSpec::new(0.0, 1.0, |t| {
            if t < 0.5 {
                ComplexMatrix::identity(2)
            } else {
                ComplexMatrix::identity(3)
            }
        })
        .unwrap();
        assert!(matches!(
            discretize_field(&spec, 4, QuadratureRule::Midpoint),
            Err(Error::EvaluatorDimensionDrift { .. })
        ));
    }

    #[test]
    fn negative_density_detected() {
        let spec = OperatorFieldSpec::linear(0.0, 1.0, 1, 1.0)
            .unwrap()
            .with_density(|t| 0.5 - t);
        assert!(matches!(
            discretize_field(&spec, 8, QuadratureRule::Midpoint),
            Err(Error::NegativeDensity { .. })
        ));
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(OperatorFieldSpec::linear(1.0, 1.0, 1, 1.0).is_err());
        let spec = OperatorFieldSpec::linear(0.0, 1.0, 1, 1.0).unwrap();
        assert!(matches!(
            discretize_field(&spec, 0, QuadratureRule::Midpoint),
            Err(Error::BadNodes { .. })
        ));
        assert!(refinement_study(&spec, &[], QuadratureRule::Midpoint).is_err());
        assert!(refinement_study(&spec, &[4, 4], QuadratureRule::Midpoint).is_err());
        assert!(refinement_study(&spec, &[8, 4], QuadratureRule::Midpoint).is_err());
    }
}
