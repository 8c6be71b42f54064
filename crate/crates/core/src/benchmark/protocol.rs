use crate::error::{Error, Result};

fn check_resource(s: f64) -> Result<()> {
    if s.is_finite() && s >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "resource squeezing",
            value: s,
            expected: "s >= 0",
        })
    }
}

/// Twin-beam teleportation fidelity `{2e^{−2s}[cosh 2r + cosh 2s]}^{−1/2}`,
/// evaluated as `[1 + e^{−4s} + e^{2|r|−2s} + e^{−2|r|−2s}]^{−1/2}`.
pub fn quantum_teleport_fidelity(r: f64, s: f64) -> Result<f64> {
    check_resource(s)?;
    if !r.is_finite() {
        return Err(Error::Domain {
            what: "input squeezing",
            value: r,
            expected: "finite r",
        });
    }
    let a = r.abs();
    let sum = 1.0 + (-4.0 * s).exp() + (2.0 * a - 2.0 * s).exp() + (-2.0 * a - 2.0 * s).exp();
    Ok(sum.powf(-0.5))
}

/// The input squeezing `r_c > 0` at which the twin-beam fidelity falls to
/// `threshold`, or `None` when it is already below at `r = 0`.
pub fn critical_squeezing(s: f64, threshold: f64) -> Result<Option<f64>> {
    check_resource(s)?;
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Domain {
            what: "threshold",
            value: threshold,
            expected: "0 < threshold < 1",
        });
    }
    let f = |r: f64| quantum_teleport_fidelity(r, s).expect("validated inputs");
    if f(0.0) <= threshold {
        return Ok(None);
    }
    let mut hi = 1.0;
    while f(hi) > threshold {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Convergence {
                what: "critical squeezing bracket",
                estimate: hi,
                error: f64::INFINITY,
            });
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > threshold {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Smallest resource `s*` for which `F^Q(0, s*) = threshold`:
/// `s* = −½ ln(1/threshold − 1)`.
pub fn minimal_resource_squeezing(threshold: f64) -> Result<f64> {
    if !(threshold >= 0.5 && threshold < 1.0) {
        return Err(Error::Domain {
            what: "threshold",
            value: threshold,
            expected: "0.5 <= threshold < 1",
        });
    }
    Ok((-0.5 * (1.0 / threshold - 1.0).ln()).max(0.0))
}
