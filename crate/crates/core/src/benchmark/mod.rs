//! Fidelity benchmarks: the closed-form fidelity of two squeezed thermal
//! states, the pure-state CFT, upper and lower bounds on the average CFT
//! at fixed purity, purity averages, and the published polynomial fits.

mod protocol;
mod verdict;

pub use protocol::{critical_squeezing, minimal_resource_squeezing, quantum_teleport_fidelity};
pub use verdict::{
    experiment, verdict, Classification, Experiment, Verdict, BOUNDARY_SLACK, EXPERIMENTS,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::{thermal_cutoff, Estimator};
use crate::specfun::Seed;
use crate::states::{Purity, ThermalWeights};

/// A value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// `F_{δ,μ} = 2μ²/[μ² + √(μ⁴ + 2μ² cosh 2δ + 1) − 1]`.
///
/// The square-root difference is rewritten as `u/(√(1+u) + 1)` with
/// `u = 2μ² cosh 2δ + μ⁴`, and for huge `|δ|` the limit `2μ e^{−|δ|}` is used.
pub fn fidelity_squeezed_thermal(delta: f64, mu: Purity) -> f64 {
    let m2 = mu.value() * mu.value();
    let a = delta.abs();
    if a > 300.0 {
        return 2.0 * mu.value() * (-a).exp();
    }
    let u = 2.0 * m2 * (2.0 * a).cosh() + m2 * m2;
    2.0 * m2 / (m2 + u / ((1.0 + u).sqrt() + 1.0))
}

/// Which bound on the average CFT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Side> {
        match s {
            "upper" => Ok(Side::Upper),
            "lower" => Ok(Side::Lower),
            _ => Err(Error::Unsupported(format!("side must be upper or lower, got {s:?}"))),
        }
    }
}

/// One row of the bound table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    pub mu: f64,
    pub f_up: f64,
    pub f_lo: f64,
    pub n_cut_used: usize,
    /// Largest of the two bounds' quadrature error plus dropped Fock tail.
    pub error_estimate: f64,
}

/// Pure-state CFT: `∫ p₀^{opt}(δ) F_{δ,1} dδ`.
pub fn cft_pure(est: &Estimator) -> Result<Estimate> {
    let p = est.opt_vacuum()?;
    let e = p.expectation(|d| fidelity_squeezed_thermal(d, Purity::PURE), est.config().outer_tol);
    Ok(Estimate { value: e.value, error: e.error })
}

/// `(1 − Λ) Σ_n Λⁿ ∫ pₙ^{opt} F_{δ,μ} dδ`, truncated at [`thermal_cutoff`];
/// the dropped weight enters the error (it only raises the bound), and so
/// does the change of each term on the coarse frequency grid.
pub fn avg_fidelity_upper(mu: Purity, est: &Estimator) -> Result<Estimate> {
    let n_cut = thermal_cutoff(mu);
    est.prefetch_opt_fock(n_cut)?;
    let w = ThermalWeights::of(mu);
    let tol = est.config().outer_tol;
    let terms: Vec<(f64, f64)> = (0..=n_cut)
        .into_par_iter()
        .map(|n| {
            let f = |d| fidelity_squeezed_thermal(d, mu);
            let e = est.opt_fock(n)?.expectation(f, tol);
            let coarse = est.opt_fock_coarse(n)?.expectation(f, f64::INFINITY);
            let error = e.error + (e.value - coarse.value).abs();
            Ok((w.weight(n) * e.value, w.weight(n) * error))
        })
        .collect::<Result<_>>()?;
    let value = terms.iter().map(|t| t.0).sum();
    let error = terms.iter().map(|t| t.1).sum::<f64>() + w.tail_above(n_cut);
    Ok(Estimate { value, error })
}

/// `∫ p_th(δ) F_{δ,μ} dδ` with the parity-resolved thermal mixture.
pub fn avg_fidelity_lower(mu: Purity, est: &Estimator) -> Result<Estimate> {
    let n_cut = thermal_cutoff(mu);
    let p = est.thermal_lower(mu, n_cut)?;
    let e = p.expectation(|d| fidelity_squeezed_thermal(d, mu), est.config().outer_tol);
    // norm_defect of the mixture already counts the dropped tail
    Ok(Estimate { value: e.value, error: e.error })
}

pub fn bounds(mu: Purity, est: &Estimator) -> Result<BoundResult> {
    let up = avg_fidelity_upper(mu, est)?;
    let lo = avg_fidelity_lower(mu, est)?;
    Ok(BoundResult {
        mu: mu.value(),
        f_up: up.value,
        f_lo: lo.value,
        n_cut_used: thermal_cutoff(mu),
        error_estimate: up.error.max(lo.error),
    })
}

pub fn avg_fidelity(side: Side, mu: Purity, est: &Estimator) -> Result<Estimate> {
    match side {
        Side::Upper => avg_fidelity_upper(mu, est),
        Side::Lower => avg_fidelity_lower(mu, est),
    }
}

/// Nodes of the composite Simpson rule over the purity interval.
pub const PURITY_NODES: usize = 65;

/// Flat-prior average `(1/(1−ε)) ∫_ε^1 bound(μ) dμ` by composite Simpson on
/// [`PURITY_NODES`] nodes. The error adds the mean node error and the
/// difference to the rule on every second node (scaled by 1/15).
pub fn avg_bound_over_purity(side: Side, eps: f64, est: &Estimator) -> Result<Estimate> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain {
            what: "eps",
            value: eps,
            expected: "0 < eps < 1",
        });
    }
    if side == Side::Upper {
        est.prefetch_opt_fock(thermal_cutoff(Purity::new(eps)?))?;
    } else {
        est.prefetch_cross(thermal_cutoff(Purity::new(eps)?))?;
    }
    let intervals = PURITY_NODES - 1;
    let h = (1.0 - eps) / intervals as f64;
    let nodes: Vec<Estimate> = (0..PURITY_NODES)
        .into_par_iter()
        .map(|i| {
            let mu = if i == intervals { 1.0 } else { eps + i as f64 * h };
            avg_fidelity(side, Purity::new(mu)?, est)
        })
        .collect::<Result<_>>()?;
    let simpson = |stride: usize| -> f64 {
        let m = intervals / stride;
        let mut acc = nodes[0].value + nodes[intervals].value;
        for j in 1..m {
            acc += if j % 2 == 1 { 4.0 } else { 2.0 } * nodes[j * stride].value;
        }
        acc * h * stride as f64 / 3.0 / (1.0 - eps)
    };
    let fine = simpson(1);
    let coarse = simpson(2);
    let node_err = nodes.iter().map(|n| n.error).sum::<f64>() / nodes.len() as f64;
    Ok(Estimate {
        value: fine,
        error: (fine - coarse).abs() / 15.0 + node_err,
    })
}

/// Lowest purity at which the polynomial fits apply.
pub const FIT_MU_MIN: f64 = 1.0 / 9.0;

/// Quartic fits to the bound table.
pub fn fit_eval(mu: f64, side: Side) -> Result<f64> {
    if !(mu >= FIT_MU_MIN - 1e-12 && mu <= 1.0) {
        return Err(Error::Domain {
            what: "mu",
            value: mu,
            expected: "1/9 <= mu <= 1",
        });
    }
    let c: [f64; 5] = match side {
        Side::Upper => [179.0 / 200.0, -11.0 / 25.0, 3.0 / 4.0, -11.0 / 20.0, 4.0 / 25.0],
        Side::Lower => [18.0 / 25.0, 11.0 / 100.0, 3.0 / 25.0, -6.0 / 25.0, 21.0 / 200.0],
    };
    Ok(c.iter().rev().fold(0.0, |acc, &k| acc * mu + k))
}

/// Expectation of `F_{δ,1}` under a cross density, for seed-ordering checks.
pub fn cross_pure_fidelity(n: usize, seed: Seed, est: &Estimator) -> Result<Estimate> {
    let p = est.cross(n, seed)?;
    let e = p.expectation(|d| fidelity_squeezed_thermal(d, Purity::PURE), est.config().outer_tol);
    Ok(Estimate { value: e.value, error: e.error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mu(v: f64) -> Purity {
        Purity::new(v).unwrap()
    }

    #[test]
    fn fidelity_reductions() {
        for m in [0.1, 0.5, 1.0] {
            assert!((fidelity_squeezed_thermal(0.0, mu(m)) - 1.0).abs() < 1e-15);
        }
        for d in [0.1f64, 1.0, 5.0, 30.0] {
            let f = fidelity_squeezed_thermal(d, Purity::PURE);
            assert!((f - 1.0 / d.cosh()).abs() < 1e-14 * (1.0 / d.cosh()).max(1e-300) + 1e-16);
        }
        let big = fidelity_squeezed_thermal(400.0, mu(0.5));
        assert!(big > 0.0 && big < 1e-170);
    }

    #[test]
    fn literal_formula_agrees_for_moderate_delta() {
        for (d, m) in [(0.3f64, 0.7f64), (2.0, 0.2), (-1.1, 0.9)] {
            let m2 = m * m;
            let lit = 2.0 * m2 / (m2 + (m2 * m2 + 2.0 * (2.0 * d).cosh() * m2 + 1.0).sqrt() - 1.0);
            assert!((fidelity_squeezed_thermal(d, mu(m)) - lit).abs() < 1e-14);
        }
    }

    #[test]
    fn fits_at_pure_state() {
        assert!((fit_eval(1.0, Side::Upper).unwrap() - 0.815).abs() < 1e-12);
        assert!((fit_eval(1.0, Side::Lower).unwrap() - 0.815).abs() < 1e-12);
        // 4/400 − 11/160 + 3/16 − 11/50 + 179/200
        assert!((fit_eval(0.5, Side::Upper).unwrap() - 0.80375).abs() < 1e-12);
        assert!(fit_eval(0.1, Side::Upper).is_err());
        assert!(fit_eval(1.0 / 9.0, Side::Lower).is_ok());
    }

    proptest! {
        #[test]
        fn fidelity_decreases_in_delta(a in 0.0f64..20.0, b in 0.0f64..20.0, m in 0.01f64..=1.0) {
            prop_assume!((a - b).abs() > 1e-6);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let (f_lo, f_hi) = (fidelity_squeezed_thermal(lo, mu(m)), fidelity_squeezed_thermal(hi, mu(m)));
            prop_assert!(f_hi < f_lo);
            prop_assert!(f_hi > 0.0 && f_lo <= 1.0);
            prop_assert_eq!(fidelity_squeezed_thermal(-a, mu(m)), fidelity_squeezed_thermal(a, mu(m)));
        }
    }
}
