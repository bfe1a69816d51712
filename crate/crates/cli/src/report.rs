use poincare_core::group::CommutatorReport;
use std::fmt;

/// Result of one verification suite. `pass` holds exactly when
/// `residual <= tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub suite: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// `(label, residual)` for every case checked.
    pub cases: Vec<(String, f64)>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, tolerance: f64, cases: Vec<(String, f64)>) -> Self {
        let residual = cases.iter().map(|c| c.1).fold(0.0, f64::max);
        let nan = cases.iter().any(|c| c.1.is_nan());
        Self {
            suite: suite.into(),
            residual: if nan { f64::NAN } else { residual },
            tolerance,
            pass: !nan && residual <= tolerance,
            cases,
        }
    }

    pub fn from_commutators(report: &CommutatorReport, tolerance: f64) -> Self {
        let cases = report
            .cases
            .iter()
            .map(|c| (c.label.clone(), c.residual))
            .collect();
        Self::new(report.suite, tolerance, cases)
    }

    /// Cases whose residual exceeds the tolerance.
    pub fn failures(&self) -> impl Iterator<Item = &(String, f64)> {
        self.cases
            .iter()
            .filter(move |c| c.1.is_nan() || c.1 > self.tolerance)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: max residual {:.3e} (tolerance {:.0e}, {} cases)",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.residual,
            self.tolerance,
            self.cases.len()
        )?;
        for (label, r) in self.failures().take(10) {
            write!(f, "\n    failing {label}: residual {r:.3e}")?;
        }
        let extra = self.failures().count().saturating_sub(10);
        if extra > 0 {
            write!(f, "\n    ... and {extra} more")?;
        }
        Ok(())
    }
}
