//! Structured results of identity and inequality checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Whether a check compares a residual against a tolerance or a margin
/// against a (negated) tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Passes iff `residual_or_margin <= tolerance`.
    Residual,
    /// Passes iff `residual_or_margin >= -tolerance`.
    Margin,
}

/// Outcome of a single identity or inequality check.
///
/// `passed` is always derived from `kind`, `residual_or_margin`, and
/// `tolerance`; constructors and `rescaled` keep that invariant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub kind: CheckKind,
    pub residual_or_margin: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub details: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn residual(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Residual,
            residual_or_margin: residual,
            tolerance,
            passed: residual <= tolerance,
            details: BTreeMap::new(),
        }
    }

    pub fn margin(name: impl Into<String>, margin: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Margin,
            residual_or_margin: margin,
            tolerance,
            passed: margin >= -tolerance,
            details: BTreeMap::new(),
        }
    }

    pub fn with_detail(mut self, key: impl Into<String>, value: f64) -> Self {
        self.details.insert(key.into(), value);
        self
    }

    /// Same check re-evaluated with the tolerance multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        let tolerance = self.tolerance * factor;
        let passed = match self.kind {
            CheckKind::Residual => self.residual_or_margin <= tolerance,
            CheckKind::Margin => self.residual_or_margin >= -tolerance,
        };
        Self {
            tolerance,
            passed,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_kind() {
        assert!(CheckReport::residual("r", 1e-12, 1e-10).passed);
        assert!(!CheckReport::residual("r", 1e-9, 1e-10).passed);
        assert!(CheckReport::margin("m", -1e-12, 1e-10).passed);
        assert!(CheckReport::margin("m", 0.5, 1e-10).passed);
        assert!(!CheckReport::margin("m", -1e-9, 1e-10).passed);
    }

    #[test]
    fn rescaling_reevaluates() {
        let rep = CheckReport::residual("r", 1e-12, 1e-10);
        assert!(!rep.rescaled(0.0).passed);
        assert!(rep.rescaled(1.0).passed);
        let m = CheckReport::margin("m", -1e-12, 1e-10);
        assert!(!m.rescaled(0.0).passed);
        assert!(m.rescaled(100.0).passed);
    }
}
