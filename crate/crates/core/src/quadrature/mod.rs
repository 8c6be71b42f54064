//! Integration engine: adaptive quadrature over the real line, cosine
//! transforms of even functions, the FFT grid shared by all estimation
//! densities, and tabulated densities on a symmetric δ grid.

mod adaptive;
mod density;
mod fourier;

pub use adaptive::{integrate_interval, integrate_real_line, Integral};
pub use density::{DeltaGrid, Expectation, TabulatedDensity};
pub use fourier::{cosine_transform, fourier_even, SpectralGrid};
pub(crate) use fourier::clamp_nonnegative;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances, truncation windows and grid resolution for every integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadConfig {
    /// Absolute tolerance of inner integrals and transforms.
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Tolerance of outer δ-expectations; larger estimated errors raise a warning.
    pub outer_tol: f64,
    /// Integrand magnitude below which tails are dropped.
    pub tail_cut: f64,
    /// Half-width of the tabulated δ grid.
    pub delta_max: f64,
    /// Number of δ intervals; the grid has `n_points + 1` samples.
    pub n_points: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            outer_tol: 1e-8,
            tail_cut: 1e-15,
            delta_max: 160.0,
            n_points: 32_000,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("abs_tol", self.abs_tol)?;
        positive("rel_tol", self.rel_tol)?;
        positive("outer_tol", self.outer_tol)?;
        positive("delta_max", self.delta_max)?;
        positive("tail_cut", self.tail_cut)?;
        if self.tail_cut >= 1.0 {
            return Err(Error::Config(format!("tail_cut must be < 1, got {}", self.tail_cut)));
        }
        if self.n_points < 64 || self.n_points % 2 != 0 {
            return Err(Error::Config(format!(
                "n_points must be even and at least 64, got {}",
                self.n_points
            )));
        }
        Ok(())
    }

    /// δ (and λ, t) sample spacing.
    pub fn step(&self) -> f64 {
        2.0 * self.delta_max / self.n_points as f64
    }

    /// Half-width beyond which exponentially decaying integrands of the form
    /// `e^{−|λ|/2}` drop under `tail_cut`.
    pub fn tail_window(&self) -> f64 {
        2.0 * (1.0 / self.tail_cut).ln()
    }

    pub fn delta_grid(&self) -> DeltaGrid {
        DeltaGrid::new(self.step(), self.n_points / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let cfg = QuadConfig::default();
        cfg.validate().unwrap();
        assert!((cfg.step() - 0.01).abs() < 1e-15);
        assert_eq!(cfg.delta_grid().len(), 32_001);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            QuadConfig { abs_tol: 0.0, ..Default::default() },
            QuadConfig { n_points: 32, ..Default::default() },
            QuadConfig { n_points: 101, ..Default::default() },
            QuadConfig { tail_cut: 2.0, ..Default::default() },
            QuadConfig { delta_max: -1.0, ..Default::default() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
        }
    }
}
