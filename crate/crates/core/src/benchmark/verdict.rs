use serde::Serialize;

use super::bounds;
use crate::error::{Error, Result};
use crate::estimation::Estimator;
use crate::states::Purity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    BeatsUpperBound,
    InsideWindow,
    BelowLowerBound,
}

/// A measured fidelity placed against the computed bounds at its purity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub mu: f64,
    pub f_measured: f64,
    pub sigma: f64,
    pub f_up: f64,
    pub f_lo: f64,
    pub bound_error: f64,
    pub classification: Classification,
    /// `f_measured − f_up`.
    pub margin_upper: f64,
    /// `f_measured − f_lo`.
    pub margin_lower: f64,
    /// Margins in units of `sigma`; absent when `sigma = 0`.
    pub sigma_margin_upper: Option<f64>,
    pub sigma_margin_lower: Option<f64>,
    /// Set when either margin is within the bound error (plus 1e−6).
    pub on_boundary: bool,
}

/// Classify `f_measured ± sigma` at purity `mu` by the sign of the margins;
/// a tie counts as inside the window. `on_boundary` flags margins within
/// `bound error + BOUNDARY_SLACK`.
pub fn verdict(mu: Purity, f_measured: f64, sigma: f64, est: &Estimator) -> Result<Verdict> {
    if !(0.0..=1.0).contains(&f_measured) {
        return Err(Error::Domain {
            what: "measured fidelity",
            value: f_measured,
            expected: "0 <= F <= 1",
        });
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::Domain {
            what: "sigma",
            value: sigma,
            expected: "sigma >= 0",
        });
    }
    let b = bounds(mu, est)?;
    Ok(classify(mu.value(), f_measured, sigma, b.f_up, b.f_lo, b.error_estimate))
}

/// Margin below which a measurement counts as sitting on a bound.
pub const BOUNDARY_SLACK: f64 = 1e-6;

pub(crate) fn classify(mu: f64, f: f64, sigma: f64, f_up: f64, f_lo: f64, err: f64) -> Verdict {
    let margin_upper = f - f_up;
    let margin_lower = f - f_lo;
    let slack = err + BOUNDARY_SLACK;
    let classification = if margin_upper > 0.0 {
        Classification::BeatsUpperBound
    } else if margin_lower < 0.0 {
        Classification::BelowLowerBound
    } else {
        Classification::InsideWindow
    };
    let in_sigma = |m: f64| if sigma > 0.0 { Some(m / sigma) } else { None };
    Verdict {
        mu,
        f_measured: f,
        sigma,
        f_up,
        f_lo,
        bound_error: err,
        classification,
        margin_upper,
        margin_lower,
        sigma_margin_upper: in_sigma(margin_upper),
        sigma_margin_lower: in_sigma(margin_lower),
        on_boundary: margin_upper.abs() <= slack || margin_lower.abs() <= slack,
    }
}

/// A published measurement of teleportation or storage of squeezed light.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Experiment {
    pub key: &'static str,
    pub description: &'static str,
    pub mu: f64,
    /// Input squeezing, in dB.
    pub squeezing_db: f64,
    pub fidelity: f64,
    pub sigma: f64,
    pub citation: &'static str,
}

pub const EXPERIMENTS: [Experiment; 3] = [
    Experiment {
        key: "furusawa-tele",
        description: "teleportation of a squeezed thermal state",
        mu: 0.58,
        squeezing_db: 5.3,
        fidelity: 0.85,
        sigma: 0.05,
        citation: "N. Takei et al., Phys. Rev. A 72, 042304 (2005)",
    },
    Experiment {
        key: "broadband-tele",
        description: "teleportation of broadband squeezing",
        mu: 0.51,
        squeezing_db: 9.1,
        fidelity: 0.83,
        sigma: 0.03,
        citation: "H. Yonezawa, S. L. Braunstein, A. Furusawa, Phys. Rev. Lett. 99, 110503 (2007)",
    },
    Experiment {
        key: "eit-storage",
        description: "storage and retrieval of squeezed light by electromagnetically induced transparency",
        mu: 0.66,
        squeezing_db: 5.4,
        fidelity: 0.89,
        sigma: 0.01,
        citation: "J. Appel et al., Phys. Rev. Lett. 100, 093602 (2008)",
    },
];

pub fn experiment(key: &str) -> Option<&'static Experiment> {
    EXPERIMENTS.iter().find(|e| e.key == key)
}
