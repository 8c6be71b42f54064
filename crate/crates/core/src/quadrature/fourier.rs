use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{integrate_real_line, Integral, QuadConfig};
use crate::error::{Error, Result};

/// `∫ f(λ) cos(νλ) dλ` by adaptive quadrature.
pub fn cosine_transform<F: Fn(f64) -> f64>(f: F, nu: f64, cfg: &QuadConfig) -> Result<Integral> {
    integrate_real_line(|l| f(l) * (nu * l).cos(), cfg)
}

/// Apply the clamping policy to a transform value that is non-negative in
/// exact arithmetic.
pub(crate) fn clamp_nonnegative(value: f64, tol: f64, at: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -tol {
        Ok(0.0)
    } else {
        Err(Error::Negativity { at, value })
    }
}

/// Cosine transform of an even function on a list of frequencies. Small
/// negative values in `[−abs_tol, 0)` are clamped to zero, anything more
/// negative is a negativity error; the output feeds square roots.
pub fn fourier_even<F>(f: F, nu_grid: &[f64], cfg: &QuadConfig) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64 + Sync,
{
    nu_grid
        .par_iter()
        .map(|&nu| {
            let g = cosine_transform(&f, nu, cfg)?;
            clamp_nonnegative(g.value, cfg.abs_tol, nu)
        })
        .collect()
}

/// A length-`N` FFT grid with spacing `step` in the position-like variable
/// (λ, t or δ) and `2π/(N·step)` in frequency. Index `i` stands for the
/// signed offset `i` for `i < N/2` and `i − N` otherwise.
#[derive(Clone)]
pub struct SpectralGrid {
    step: f64,
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("step", &self.step)
            .field("len", &self.len)
            .finish()
    }
}

impl SpectralGrid {
    pub fn new(step: f64, len: usize) -> Self {
        assert!(len >= 2 && len % 2 == 0, "FFT length must be even");
        let mut planner = FftPlanner::new();
        SpectralGrid {
            step,
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    /// Grid matching `cfg.step()` whose period holds twice the δ window plus
    /// an exponential-decay margin on each side, rounded up to a power of
    /// two. The factor two leaves room for [`SpectralGrid::half_period`].
    pub fn for_config(cfg: &QuadConfig) -> Self {
        let span = 2.0 * (2.0 * cfg.delta_max + 2.0 * cfg.tail_window());
        let len = ((span / cfg.step()).ceil() as usize).next_power_of_two();
        SpectralGrid::new(cfg.step(), len)
    }

    /// Same step, half the period: the frequency spacing doubles.
    pub fn half_period(&self) -> Self {
        SpectralGrid::new(self.step, self.len / 2)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn period(&self) -> f64 {
        self.step * self.len as f64
    }

    pub fn freq_step(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.period()
    }

    pub fn signed_index(&self, i: usize) -> i64 {
        if i < self.len / 2 {
            i as i64
        } else {
            i as i64 - self.len as i64
        }
    }

    /// Storage index of signed offset `m`.
    pub fn wrap(&self, m: i64) -> usize {
        m.rem_euclid(self.len as i64) as usize
    }

    pub fn position(&self, i: usize) -> f64 {
        self.signed_index(i) as f64 * self.step
    }

    pub fn freq(&self, k: usize) -> f64 {
        self.signed_index(k) as f64 * self.freq_step()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.freq(k)).collect()
    }

    /// In place `x_k ← Σ_j x_j e^{−2πijk/N}`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// In place `x_j ← Σ_k x_k e^{+2πijk/N}` (unnormalized).
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }

    /// Trapezoid approximation of `∫ f(λ) cos(νλ) dλ` on every grid
    /// frequency, for even `f` sampled over one period.
    pub fn cosine_transform<F: Fn(f64) -> f64 + Sync>(&self, f: F) -> Vec<f64> {
        let mut buf: Vec<Complex64> = (0..self.len)
            .into_par_iter()
            .map(|i| Complex64::new(f(self.position(i)), 0.0))
            .collect();
        self.forward(&mut buf);
        buf.iter().map(|c| c.re * self.step).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_transform_pair() {
        let cfg = QuadConfig::default();
        let nus = [0.0, 0.5, 1.3, 2.0, -2.0];
        let g = fourier_even(|l| (-0.5 * l * l).exp(), &nus, &cfg).unwrap();
        for (nu, v) in nus.iter().zip(&g) {
            let want = (2.0 * PI).sqrt() * (-0.5 * nu * nu).exp();
            assert!((v - want).abs() < 1e-10, "ν={nu}: {v} vs {want}");
        }
        assert_eq!(g[3], g[4]);
    }

    #[test]
    fn sech_transform_matches_closed_form_and_riemann_sum() {
        let cfg = QuadConfig::default();
        let nus = [0.0, 0.7, 3.0];
        let g = fourier_even(|l| 1.0 / l.cosh(), &nus, &cfg).unwrap();
        for (nu, v) in nus.iter().zip(&g) {
            let want = PI / (PI * nu / 2.0).cosh();
            assert!((v - want).abs() < 1e-9, "ν={nu}: {v} vs {want}");
            let h = 1e-4;
            let riemann: f64 = (-800_000..=800_000)
                .map(|i| {
                    let l = i as f64 * h;
                    (nu * l).cos() / l.cosh()
                })
                .sum::<f64>()
                * h;
            assert!((v - riemann).abs() < 1e-8);
        }
    }

    #[test]
    fn clamping_policy() {
        assert_eq!(clamp_nonnegative(-1e-12, 1e-10, 0.0).unwrap(), 0.0);
        assert_eq!(clamp_nonnegative(0.3, 1e-10, 0.0).unwrap(), 0.3);
        assert!(matches!(
            clamp_nonnegative(-1e-6, 1e-10, 2.0),
            Err(Error::Negativity { .. })
        ));
    }

    #[test]
    fn grid_transform_matches_quadrature() {
        let cfg = QuadConfig::default();
        let grid = SpectralGrid::for_config(&cfg);
        assert!(grid.period() >= 2.0 * cfg.delta_max);
        let f = |l: f64| l.cosh().powf(-0.5);
        let g = grid.cosine_transform(f);
        for k in [0usize, 17, 300] {
            let exact = cosine_transform(f, grid.freq(k), &cfg).unwrap().value;
            assert!((g[k] - exact).abs() < 1e-9, "k={k}: {} vs {exact}", g[k]);
        }
    }

    #[test]
    fn index_wrapping() {
        let grid = SpectralGrid::new(0.5, 8);
        assert_eq!(grid.signed_index(3), 3);
        assert_eq!(grid.signed_index(4), -4);
        assert_eq!(grid.wrap(-1), 7);
        assert_eq!(grid.position(7), -0.5);
    }
}
