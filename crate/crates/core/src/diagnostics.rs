use serde::Serialize;
use std::fmt;

/// Non-fatal warnings raised while estimating.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Diagnostic {
    /// The tail-dependence estimate left (1/2, 1), the asymptotically
    /// independent, positively associated regime the extrapolations assume.
    EtaOutsideRegime { eta: f64 },
    /// k²/n < 2, so the adjustment factor and intermediate CoVaR rest on a
    /// single joint-tail observation.
    SmallJointTail { k: usize, n: usize },
    /// γ̂₁ ≥ (3 − 1/η̂)/4: the intermediate-CoES extrapolation loses its
    /// asymptotic-normality guarantee.
    CoesIiiBound { gamma1: f64, bound: f64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::EtaOutsideRegime { eta } => {
                write!(f, "eta estimate {eta:.4} lies outside (1/2, 1)")
            }
            Diagnostic::SmallJointTail { k, n } => {
                write!(f, "k^2/n = {:.3} < 2 (k = {k}, n = {n})", (*k * *k) as f64 / *n as f64)
            }
            Diagnostic::CoesIiiBound { gamma1, bound } => write!(
                f,
                "gamma1 estimate {gamma1:.4} >= (3 - 1/eta)/4 = {bound:.4}; CoES-III theory does not apply"
            ),
        }
    }
}
