//! Direct discretization of the covariant POVM.
//!
//! Matrix elements come from quadrature of dilated Hermite functions,
//! `(U(λ)ψ)(x) = e^{−λ/2} ψ(e^{−λ}x)`: a truncated Fock basis cannot hold
//! `U(λ)|s⟩` over the λ range where the matrix elements are still
//! non-negligible. The group integral, the division by `√⟨s|Π_ν|s⟩` and
//! the δ transform are all plain trapezoid sums.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{DeltaGrid, TabulatedDensity};
use crate::specfun::{hermite_function, Parity, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Half-width of the λ integration window.
    pub lambda_window: f64,
    pub lambda_samples: usize,
    pub x_points: usize,
    /// `x_max = √(2n+1) + x_margin`.
    pub x_margin: f64,
    pub nu_max: f64,
    pub nu_points: usize,
    /// Largest total-variation change allowed when the λ spacing is doubled.
    pub refine_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            lambda_window: 60.0,
            lambda_samples: 4096,
            x_points: 4001,
            x_margin: 10.0,
            nu_max: 40.0,
            nu_points: 3201,
            refine_tol: 1e-4,
        }
    }
}

/// Floor on `⟨s|Π_ν|s⟩` below which a frequency is dropped.
const DENOMINATOR_FLOOR: f64 = 1e-14;

struct XGrid {
    x: Vec<f64>,
    h: f64,
}

impl XGrid {
    fn new(n_max: usize, cfg: &OracleConfig) -> Self {
        let x_max = ((2 * n_max + 1) as f64).sqrt() + cfg.x_margin;
        let h = 2.0 * x_max / (cfg.x_points - 1) as f64;
        XGrid {
            x: (0..cfg.x_points).map(|i| -x_max + i as f64 * h).collect(),
            h,
        }
    }

    fn element(&self, n: usize, s: usize, lambda: f64) -> f64 {
        // keep the dilated factor the wide one
        let (fixed, dilated) = if lambda >= 0.0 { (n, s) } else { (s, n) };
        let a = lambda.abs();
        let scale = (-a).exp();
        let pref = (-0.5 * a).exp();
        self.x
            .iter()
            .map(|&x| hermite_function(fixed, x) * pref * hermite_function(dilated, scale * x))
            .sum::<f64>()
            * self.h
    }
}

/// `⟨n|U(λ)|s⟩` by position-space quadrature.
pub fn position_matrix_element(n: usize, s: usize, lambda: f64, cfg: &OracleConfig) -> f64 {
    XGrid::new(n.max(s), cfg).element(n, s, lambda)
}

fn trapezoid_nodes(half_width: f64, count: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * half_width / (count - 1) as f64;
    let nodes = (0..count).map(|j| -half_width + j as f64 * h).collect();
    let weights = (0..count)
        .map(|j| if j == 0 || j == count - 1 { 0.5 * h } else { h })
        .collect();
    (nodes, weights)
}

fn density_with(
    seed: Seed,
    n: usize,
    grid: &DeltaGrid,
    cfg: &OracleConfig,
    lambda_samples: usize,
) -> Vec<f64> {
    let s = seed.index();
    let xg = XGrid::new(n.max(s), cfg);
    let (lam, lw) = trapezoid_nodes(cfg.lambda_window, lambda_samples);
    let c_ns: Vec<f64> = lam.par_iter().map(|&l| xg.element(n, s, l)).collect();
    let c_ss: Vec<f64> = lam.par_iter().map(|&l| xg.element(s, s, l)).collect();
    let (nu, nw) = trapezoid_nodes(cfg.nu_max, cfg.nu_points);
    let two_pi = 2.0 * std::f64::consts::PI;
    // ⟨n|Π_ν|s⟩ / √⟨s|Π_ν|s⟩ with Π_ν = (1/2π) ∫ e^{iνλ} U(λ) dλ
    let ratio: Vec<Complex64> = nu
        .par_iter()
        .map(|&v| {
            let mut g_ns = Complex64::new(0.0, 0.0);
            let mut g_ss = 0.0;
            for ((&l, &w), (&a, &b)) in lam.iter().zip(&lw).zip(c_ns.iter().zip(&c_ss)) {
                let e = Complex64::from_polar(w / two_pi, v * l);
                g_ns += e * a;
                g_ss += e.re * b;
            }
            if g_ss < DENOMINATOR_FLOOR {
                Complex64::new(0.0, 0.0)
            } else {
                g_ns / g_ss.sqrt()
            }
        })
        .collect();
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let d = grid.delta(i);
            let a: Complex64 = nu
                .iter()
                .zip(&nw)
                .zip(&ratio)
                .map(|((&v, &w), r)| Complex64::from_polar(w, -v * d) * r)
                .sum::<Complex64>()
                / two_pi.sqrt();
            a.norm_sqr()
        })
        .collect()
}

/// `|⟨input_n|η_seed(δ)⟩|²` on `grid` from the discretized POVM. Errors when
/// halving the λ sample count moves the density by more than
/// `cfg.refine_tol` in total variation.
pub fn brute_povm_distribution(
    seed: Seed,
    input_n: usize,
    grid: DeltaGrid,
    cfg: &OracleConfig,
) -> Result<TabulatedDensity> {
    if cfg.lambda_samples < 16 || cfg.nu_points < 16 || cfg.x_points < 16 {
        return Err(Error::Config("oracle grids need at least 16 samples".into()));
    }
    if Parity::of(input_n) != seed.parity() {
        return Ok(TabulatedDensity::zero(grid));
    }
    let fine = density_with(seed, input_n, &grid, cfg, cfg.lambda_samples);
    let coarse = density_with(seed, input_n, &grid, cfg, cfg.lambda_samples / 2);
    let fine = TabulatedDensity::from_values(grid, fine, 1.0, 0.0)?;
    let coarse = TabulatedDensity::from_values(grid, coarse, 1.0, 0.0)?;
    let change = fine.total_variation(&coarse);
    if change > cfg.refine_tol {
        return Err(Error::Validity(format!(
            "oracle density moved by {change:e} under λ refinement"
        )));
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{diag_squeeze_element, squeeze_column};

    #[test]
    fn position_elements_match_closed_forms() {
        let cfg = OracleConfig::default();
        for lambda in [-2.5, -0.7, 0.0, 0.4, 1.9, 6.0] {
            for seed in [Seed::Vacuum, Seed::OnePhoton] {
                let col = squeeze_column(seed, 9, lambda).unwrap();
                for m in 0..=9 {
                    let v = position_matrix_element(m, seed.index(), lambda, &cfg);
                    assert!((v - col.amplitudes[m]).abs() < 1e-10, "λ={lambda} m={m} {seed:?}");
                }
            }
            for n in 0..6 {
                let v = position_matrix_element(n, n, lambda, &cfg);
                assert!((v - diag_squeeze_element(n, lambda)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn parity_mismatch_is_zero() {
        let grid = DeltaGrid::new(0.1, 10);
        let p = brute_povm_distribution(Seed::Vacuum, 1, grid, &OracleConfig::default()).unwrap();
        assert!(p.is_zero());
    }
}
