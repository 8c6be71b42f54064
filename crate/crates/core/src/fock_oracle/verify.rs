//! The oracle-versus-pipeline comparisons behind `cft --verify`.

use super::{
    brute_povm_distribution, squeeze_unitary, squeezed_thermal_density, uhlmann_fidelity, Check,
    OracleConfig,
};
use crate::benchmark::fidelity_squeezed_thermal;
use crate::error::Result;
use crate::estimation::Estimator;
use crate::quadrature::{DeltaGrid, TabulatedDensity};
use crate::specfun::{diag_squeeze_element, Seed};
use crate::states::Purity;

/// Fock cutoff of the density-matrix checks.
pub const ORACLE_DIM: usize = 150;
/// Step and half-width of the δ grid on which oracle densities are compared.
pub const ORACLE_DELTA_STEP: f64 = 0.04;
pub const ORACLE_DELTA_HALF_WIDTH: f64 = 40.0;

pub const DIAGONAL_TOL: f64 = 1e-8;
pub const SCUTARU_TOL: f64 = 1e-6;
pub const POVM_TV_TOL: f64 = 1e-3;

/// Largest deviation of the expm diagonal from the Legendre form over
/// `n ≤ n_max`.
pub fn diagonal_check(lambda: f64, n_max: usize) -> Result<Check> {
    let u = squeeze_unitary(lambda, ORACLE_DIM)?;
    let dev = (0..=n_max)
        .map(|n| (u.get(n, n) - diag_squeeze_element(n, lambda)).abs())
        .fold(0.0, f64::max);
    Ok(Check::new(
        format!("diagonal <n|U({lambda})|n>, n <= {n_max}"),
        dev,
        DIAGONAL_TOL,
    ))
}

/// Uhlmann fidelity of `ρ(0, μ)` and `ρ(δ, μ)` against the closed form.
pub fn scutaru_check(delta: f64, mu: Purity) -> Result<Check> {
    let a = squeezed_thermal_density(0.0, mu, ORACLE_DIM)?;
    let b = squeezed_thermal_density(delta, mu, ORACLE_DIM)?;
    let f = uhlmann_fidelity(&a, &b)?;
    Ok(Check::new(
        format!("fidelity formula, delta = {delta}, mu = {}", mu.value()),
        (f - fidelity_squeezed_thermal(delta, mu)).abs(),
        SCUTARU_TOL,
    ))
}

/// The pipeline density thinned onto the oracle grid.
pub fn on_oracle_grid(p: &TabulatedDensity) -> TabulatedDensity {
    let stride = ((ORACLE_DELTA_STEP / p.grid.step).round() as usize).max(1);
    let step = p.grid.step * stride as f64;
    let half = ((ORACLE_DELTA_HALF_WIDTH / step).round() as usize).min(p.grid.half / stride);
    p.resample(stride, half)
}

/// Total variation between the discretized POVM and `p_{n,seed}`.
pub fn povm_check(n: usize, seed: Seed, est: &Estimator, cfg: &OracleConfig) -> Result<Check> {
    let analytic = on_oracle_grid(est.cross(n, seed)?.as_ref());
    let grid: DeltaGrid = analytic.grid;
    let brute = brute_povm_distribution(seed, n, grid, cfg)?;
    Ok(Check::new(
        format!("covariant POVM, n = {n}, seed = {}", seed.index()),
        brute.total_variation(&analytic),
        POVM_TV_TOL,
    ))
}

/// A short set of checks, one per oracle.
pub fn verification_checks(est: &Estimator) -> Result<Vec<Check>> {
    Ok(vec![
        diagonal_check(1.0, 30)?,
        scutaru_check(0.5, Purity::new(0.8)?)?,
        povm_check(0, Seed::Vacuum, est, &OracleConfig::default())?,
        povm_check(1, Seed::OnePhoton, est, &OracleConfig::default())?,
    ])
}
