//! Squeezed thermal states `U(r) ρ_th(μ) U(r)†` with squeezing along the
//! position axis, and the conversions between purity, thermal weight, mean
//! photon number and decibels.

use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::{Error, Result};

/// State purity `μ = Tr ρ²`, restricted to `(0, 1]`.
///
/// `μ = 0` would be the infinite-temperature limit, which is not a normalizable
/// state in this parameterization.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Purity(f64);

impl Purity {
    pub const PURE: Purity = Purity(1.0);

    pub fn new(mu: f64) -> Result<Self> {
        if mu.is_finite() && mu > 0.0 && mu <= 1.0 {
            Ok(Purity(mu))
        } else {
            Err(Error::Domain {
                what: "purity",
                value: mu,
                expected: "0 < mu <= 1",
            })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_pure(self) -> bool {
        self.0 == 1.0
    }

    /// Thermal weight `Λ = (1 − μ)/(1 + μ)`.
    #[inline]
    pub fn lambda(self) -> f64 {
        (1.0 - self.0) / (1.0 + self.0)
    }

    /// Mean thermal photon number `(1/μ − 1)/2`.
    #[inline]
    pub fn mean_photons(self) -> f64 {
        (1.0 / self.0 - 1.0) / 2.0
    }
}

impl TryFrom<f64> for Purity {
    type Error = Error;

    fn try_from(mu: f64) -> Result<Self> {
        Purity::new(mu)
    }
}

/// `Λ = (1 − μ)/(1 + μ)`.
pub fn lambda_of_mu(mu: f64) -> Result<f64> {
    Purity::new(mu).map(Purity::lambda)
}

/// `n̄ = (1/μ − 1)/2`.
pub fn mean_thermal_photons(mu: f64) -> Result<f64> {
    Purity::new(mu).map(Purity::mean_photons)
}

/// Geometric Fock weights of the thermal state, `ρ_th = (1 − Λ) Σ Λⁿ |n⟩⟨n|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalWeights {
    pub lambda: f64,
    pub n_bar: f64,
}

impl ThermalWeights {
    pub fn of(mu: Purity) -> Self {
        ThermalWeights {
            lambda: mu.lambda(),
            n_bar: mu.mean_photons(),
        }
    }

    /// Probability of the `n`-th Fock state.
    pub fn weight(&self, n: usize) -> f64 {
        if self.lambda == 0.0 {
            return if n == 0 { 1.0 } else { 0.0 };
        }
        (1.0 - self.lambda) * self.lambda.powi(n as i32)
    }

    /// Total weight of the Fock states above `n_cut`, i.e. `Λ^(n_cut+1)`.
    pub fn tail_above(&self, n_cut: usize) -> f64 {
        if self.lambda == 0.0 {
            0.0
        } else {
            self.lambda.powi(n_cut as i32 + 1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezedThermalState {
    pub r: f64,
    pub mu: Purity,
}

impl SqueezedThermalState {
    pub fn new(r: f64, mu: f64) -> Result<Self> {
        if !r.is_finite() {
            return Err(Error::Domain {
                what: "squeezing",
                value: r,
                expected: "finite r",
            });
        }
        Ok(SqueezedThermalState {
            r,
            mu: Purity::new(mu)?,
        })
    }

    /// Quadrature covariance matrix `diag(e^{2r}, e^{−2r})/μ` (vacuum = identity).
    pub fn covariance_matrix(&self) -> Matrix2<f64> {
        let mu = self.mu.value();
        Matrix2::new(
            (2.0 * self.r).exp() / mu,
            0.0,
            0.0,
            (-2.0 * self.r).exp() / mu,
        )
    }

    pub fn thermal_weights(&self) -> ThermalWeights {
        ThermalWeights::of(self.mu)
    }
}

/// Squeezing in decibels: `10·log₁₀(e^{2r})`, the variance ratio of the
/// anti-squeezed to vacuum quadrature.
pub fn r_to_db(r: f64) -> f64 {
    20.0 * r / std::f64::consts::LN_10
}

pub fn db_to_r(db: f64) -> f64 {
    db * std::f64::consts::LN_10 / 20.0
}
