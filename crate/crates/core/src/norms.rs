//! Singular values, Schatten p-norms and quasi-norms for p in (0, inf],
//! and the power identity `||A||_p^q = || |A|^2 ||_{p/2}^{q/2}`.

use std::fmt;
use std::str::FromStr;

use crate::eig::{abs_op, hermitian_eig, HERMITIAN_TOL};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::report::CheckReport;

/// Singular values below `SV_FLOOR_FACTOR * sigma_max` are treated as exact
/// zeros when raised to powers p < 1, so fractional powers do not amplify
/// rounding noise.
pub const SV_FLOOR_FACTOR: f64 = 1e-13;
/// Relative tolerance of the power-identity check.
pub const QNORM_POWER_TOL: f64 = 1e-9;

/// Schatten exponent p in (0, inf]. A norm for p >= 1, a quasi-norm for
/// p < 1 (the triangle inequality fails). Q-norm eligible for p = inf or
/// p >= 2, with companion order p/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchattenOrder {
    Finite(f64),
    Infinity,
}

impl SchattenOrder {
    /// Finite order; rejects p <= 0, NaN, and infinite p (use `Infinity`).
    pub fn finite(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::InvalidOrder {
                context: format!("p must be a positive finite real or inf, got {p}"),
            });
        }
        Ok(SchattenOrder::Finite(p))
    }

    pub fn infinity() -> Self {
        SchattenOrder::Infinity
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SchattenOrder::Finite(_))
    }

    /// The exponent as an f64 (`inf` for the operator norm).
    pub fn value(&self) -> f64 {
        match self {
            SchattenOrder::Finite(p) => *p,
            SchattenOrder::Infinity => f64::INFINITY,
        }
    }

    /// True for 0 < p < 1 where the triangle inequality fails.
    pub fn is_quasi_norm(&self) -> bool {
        matches!(self, SchattenOrder::Finite(p) if *p < 1.0)
    }

    pub fn is_norm(&self) -> bool {
        !self.is_quasi_norm()
    }

    /// Q-norm eligibility: p = inf or p >= 2.
    pub fn is_q_norm_eligible(&self) -> bool {
        match self {
            SchattenOrder::Infinity => true,
            SchattenOrder::Finite(p) => *p >= 2.0,
        }
    }

    /// Companion order of the Q-norm relation: p/2, with inf mapping to inf.
    pub fn half(&self) -> SchattenOrder {
        match self {
            SchattenOrder::Infinity => SchattenOrder::Infinity,
            SchattenOrder::Finite(p) => SchattenOrder::Finite(p / 2.0),
        }
    }
}

impl fmt::Display for SchattenOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchattenOrder::Finite(p) => write!(f, "{p}"),
            SchattenOrder::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for SchattenOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" | "∞" => Ok(SchattenOrder::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| Error::InvalidOrder {
                    context: format!("cannot parse Schatten order from {other:?}"),
                })?;
                SchattenOrder::finite(p)
            }
        }
    }
}

/// Nonnegative singular values sorted nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularValueList {
    values: Vec<f64>,
}

impl SingularValueList {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest singular value (the operator norm); 0 for an empty list.
    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Singular values of `A`, nonincreasing, `min(rows, cols)` of them.
///
/// Hermitian inputs take the eigenvalue-modulus route, which computes
/// small singular values to full absolute accuracy; general inputs go
/// through the spectrum of the Gram matrix `A* A`.
pub fn singular_values(a: &ComplexMatrix) -> SingularValueList {
    let count = a.rows().min(a.cols());
    let hermitian_route = a.is_square()
        && a.hermitian_deviation().unwrap() <= HERMITIAN_TOL * (1.0 + a.max_abs_entry());
    let mut values: Vec<f64> = if hermitian_route {
        let eig = hermitian_eig(a).expect("validated Hermitian input");
        eig.eigenvalues().iter().map(|x| x.abs()).collect()
    } else {
        let gram = &a.adjoint() * a;
        let eig = hermitian_eig(&gram).expect("gram matrix is Hermitian");
        eig.eigenvalues()
            .iter()
            .map(|&x| x.max(0.0).sqrt())
            .collect()
    };
    values.sort_by(|x, y| y.partial_cmp(x).unwrap());
    values.truncate(count);
    SingularValueList { values }
}

/// Schatten p-norm `(sum sigma_i^p)^{1/p}`, the operator norm at p = inf.
pub fn schatten_norm(a: &ComplexMatrix, order: SchattenOrder) -> f64 {
    let svs = singular_values(a);
    match order {
        SchattenOrder::Infinity => svs.max(),
        SchattenOrder::Finite(p) => {
            let floor = if p < 1.0 {
                SV_FLOOR_FACTOR * svs.max()
            } else {
                0.0
            };
            let sum: f64 = svs
                .values()
                .iter()
                .filter(|&&s| s > floor)
                .map(|&s| s.powf(p))
                .sum();
            sum.powf(1.0 / p)
        }
    }
}

/// Operator (spectral) norm, i.e. the Schatten-infinity norm.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    schatten_norm(a, SchattenOrder::Infinity)
}

/// Checks the power identity `||A||_p^q = || |A|^2 ||_{p/2}^{q/2}`.
///
/// The left side comes from the singular values of `A`; the right side is
/// recomputed from the matrix square of `|A|`.
pub fn qnorm_power_identity_check(a: &ComplexMatrix, p: SchattenOrder, q: f64) -> CheckReport {
    assert!(q > 0.0 && q.is_finite(), "power q must be positive finite");
    let lhs = schatten_norm(a, p).powf(q);
    let abs = abs_op(a).expect("gram matrix is Hermitian PSD");
    let abs_sq = &abs * &abs;
    let rhs = schatten_norm(&abs_sq, p.half()).powf(q / 2.0);
    let residual = (lhs - rhs).abs();
    let tolerance = QNORM_POWER_TOL * (1.0 + lhs);
    CheckReport::residual(format!("qnorm-power(p={p},q={q})"), residual, tolerance)
        .with_detail("lhs", lhs)
        .with_detail("rhs", rhs)
        .with_detail("q", q)
}
