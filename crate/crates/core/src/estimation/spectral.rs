//! FFT kernels behind the estimation densities.
//!
//! Two spectral pictures are used. In the group picture the diagonal element
//! `⟨n|U(λ)|n⟩` is sampled on the λ grid and transformed to `Iⁿ_ν`. In the log-
//! position picture `Φ_n(t) = √2 e^{t/2} ψ_n(e^t)` turns squeezing into a
//! translation in `t`; its unitary Fourier transform `Φ̃_n(ν)` satisfies
//! `|Φ̃_n(ν)|² = Iⁿ_ν/2π` and `⟨n|Π_ν|s⟩ = conj(Φ̃_n(ν)) Φ̃_s(ν)`, so the cross
//! amplitude needs no division by `⟨s|Π_ν|s⟩`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{DeltaGrid, SpectralGrid};
use crate::specfun::{abs_gamma_quarter_line, ln_gamma, squeeze_column, HermiteSweep, Seed};

/// Spectral power allowed above 90 % of the Nyquist frequency, relative to
/// the peak.
const BAND_LIMIT_TOL: f64 = 1e-12;

/// Denominator floor of the group-integral route.
pub(crate) const DENOMINATOR_FLOOR: f64 = 1e-14;

/// Upper edge of the `t` grid: beyond `x = e^t` the Hermite functions up to
/// order 200 have decayed to nothing.
fn t_upper() -> f64 {
    (401f64.sqrt() + 10.0).ln()
}

fn check_band_limit(grid: &SpectralGrid, power: &[f64], what: &'static str) -> Result<()> {
    let nyq = PI / grid.step();
    let peak = power.iter().cloned().fold(0.0, f64::max);
    let edge = (0..grid.len())
        .filter(|&k| grid.freq(k).abs() >= 0.9 * nyq)
        .map(|k| power[k])
        .fold(0.0, f64::max);
    if edge > BAND_LIMIT_TOL * peak {
        return Err(Error::Accuracy {
            what,
            defect: edge / peak,
            tolerance: BAND_LIMIT_TOL,
        });
    }
    Ok(())
}

/// Copy `|·|²` of the δ window out of an FFT-ordered amplitude buffer.
fn window_power(grid: &SpectralGrid, dgrid: &DeltaGrid, amp: &[Complex64], scale: f64) -> Vec<f64> {
    dgrid
        .offsets()
        .map(|m| (amp[grid.wrap(m)] * scale).norm_sqr())
        .collect()
}

/// `|A(δ)|²` with `A(δ) = (2π)^{−5/4} ∫ e^{−iνδ} |Γ(1/4 + iν/2)| dν`.
pub(crate) fn opt_vacuum_values(grid: &SpectralGrid, dgrid: &DeltaGrid) -> Vec<f64> {
    let mut buf: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|k| Complex64::new(abs_gamma_quarter_line(grid.freq(k)), 0.0))
        .collect();
    grid.forward(&mut buf);
    let scale = (2.0 * PI).powf(-1.25) * grid.freq_step();
    window_power(grid, dgrid, &buf, scale)
}

/// `⟨n|U(λ)|n⟩` at every λ sample for `n = 0..=n_max`, handed to `visit` one
/// order at a time (Legendre recurrence in `sech λ`).
fn for_each_diagonal<F>(grid: &SpectralGrid, n_max: usize, mut visit: F) -> Result<()>
where
    F: FnMut(usize, &[f64]) -> Result<()>,
{
    let x: Vec<f64> = (0..grid.len())
        .map(|i| crate::specfun::sech(grid.position(i)))
        .collect();
    let root: Vec<f64> = x.iter().map(|v| v.sqrt()).collect();
    let mut prev = vec![0.0; grid.len()];
    let mut cur = vec![1.0; grid.len()];
    let mut out = vec![0.0; grid.len()];
    for n in 0..=n_max {
        if n == 1 {
            prev.copy_from_slice(&cur);
            cur.copy_from_slice(&x);
        } else if n > 1 {
            let k = (n - 1) as f64;
            for i in 0..grid.len() {
                let next = ((2.0 * k + 1.0) * x[i] * cur[i] - k * prev[i]) / (k + 1.0);
                prev[i] = cur[i];
                cur[i] = next;
            }
        }
        for i in 0..grid.len() {
            out[i] = root[i] * cur[i];
        }
        visit(n, &out)?;
    }
    Ok(())
}

/// `Iⁿ_ν = ∫ e^{iνλ} ⟨n|U(λ)|n⟩ dλ` on the grid frequencies, with the
/// clamping policy applied. Values under the FFT round-off level are set to
/// zero: their square roots would otherwise add a coherent bias to `A(0)`.
fn spectrum_from_samples(grid: &SpectralGrid, samples: &[f64], tol: f64) -> Result<Vec<f64>> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    grid.forward(&mut buf);
    // the exact transform is real, so the imaginary part measures round-off
    let roundoff = grid.step() * buf.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    buf.iter()
        .enumerate()
        .map(|(k, c)| {
            let v = c.re * grid.step();
            if v.abs() < roundoff {
                Ok(0.0)
            } else {
                crate::quadrature::clamp_nonnegative(v, tol, grid.freq(k))
            }
        })
        .collect()
}

/// `Iⁿ_ν` for `n = 0..=n_max`, handed to `visit` one order at a time.
pub(crate) fn for_each_fock_spectrum<F>(grid: &SpectralGrid, n_max: usize, tol: f64, mut visit: F) -> Result<()>
where
    F: FnMut(usize, Vec<f64>) -> Result<()>,
{
    for_each_diagonal(grid, n_max, |n, samples| {
        let s = spectrum_from_samples(grid, samples, tol)?;
        check_band_limit(grid, &s, "Fock spectrum band limit")?;
        visit(n, s)
    })
}

/// `Iⁿ_ν` for `n = 0..=n_max`.
pub(crate) fn fock_spectra(grid: &SpectralGrid, n_max: usize, tol: f64) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(n_max + 1);
    for_each_fock_spectrum(grid, n_max, tol, |_, s| {
        out.push(s);
        Ok(())
    })?;
    Ok(out)
}

/// `|A(δ)|²` with `A(δ) = (1/2π) ∫ e^{iνδ} √(Iⁿ_ν) dν`.
///
/// For `n ≥ 2` the spectrum touches zero, `√Iⁿ_ν` has kinks there and the
/// frequency sum converges only like `dν²`.
pub(crate) fn opt_fock_values(grid: &SpectralGrid, dgrid: &DeltaGrid, spectrum: &[f64]) -> Vec<f64> {
    let mut buf: Vec<Complex64> = spectrum.iter().map(|&v| Complex64::new(v.sqrt(), 0.0)).collect();
    grid.inverse(&mut buf);
    let scale = grid.freq_step() / (2.0 * PI);
    window_power(grid, dgrid, &buf, scale)
}

/// [`opt_fock_values`] from every second frequency sample, on `half` (the
/// half-period grid of `grid`).
pub(crate) fn opt_fock_values_coarse(
    half: &SpectralGrid,
    dgrid: &DeltaGrid,
    spectrum: &[f64],
) -> Vec<f64> {
    let thinned: Vec<f64> = spectrum.iter().step_by(2).copied().collect();
    opt_fock_values(half, dgrid, &thinned)
}

/// Phase of `Φ̃_s(ν)` for the two seeds:
/// `Φ̃_0 ∝ 2^{−iν/2} Γ(1/4 − iν/2)`, `Φ̃_1 ∝ 2^{−iν/2} Γ(3/4 − iν/2)`.
pub(crate) fn seed_phase(seed: Seed, nu: f64) -> Complex64 {
    let a = match seed {
        Seed::Vacuum => 0.25,
        Seed::OnePhoton => 0.75,
    };
    let arg = 0.5 * nu * LN_2 + ln_gamma(Complex64::new(a, 0.5 * nu)).im;
    Complex64::from_polar(1.0, -arg)
}

/// `Φ̃_n(ν_k)` for `n = 0..=n_max`, handed to `visit` one order at a time.
pub(crate) fn for_each_log_position_spectrum<F>(
    grid: &SpectralGrid,
    n_max: usize,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(usize, &[Complex64]) -> Result<()>,
{
    let len = grid.len();
    let h = grid.step();
    let t0 = t_upper() - len as f64 * h;
    let t: Vec<f64> = (0..len).map(|j| t0 + j as f64 * h).collect();
    let x: Vec<f64> = t.iter().map(|t| t.exp()).collect();
    let jacobian: Vec<f64> = t.iter().map(|t| 2f64.sqrt() * (0.5 * t).exp()).collect();
    let phase: Vec<Complex64> = (0..len)
        .map(|k| Complex64::from_polar(h / (2.0 * PI).sqrt(), -grid.freq(k) * t0))
        .collect();
    let mut sweep = HermiteSweep::new(&x);
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    let mut power = vec![0.0; len];
    for n in 0..=n_max {
        sweep.advance_to(n);
        for ((b, &psi), &jac) in buf.iter_mut().zip(sweep.values()).zip(&jacobian) {
            *b = Complex64::new(jac * psi, 0.0);
        }
        grid.forward(&mut buf);
        for (b, p) in buf.iter_mut().zip(&phase) {
            *b *= p;
        }
        for (p, b) in power.iter_mut().zip(&buf) {
            *p = b.norm_sqr();
        }
        check_band_limit(grid, &power, "log-position spectrum band limit")?;
        visit(n, &buf)?;
    }
    Ok(())
}

/// Per-seed phase table `ω_s(ν_k)`.
pub(crate) fn seed_phases(grid: &SpectralGrid, seed: Seed) -> Vec<Complex64> {
    (0..grid.len())
        .into_par_iter()
        .map(|k| seed_phase(seed, grid.freq(k)))
        .collect()
}

/// `|A(δ)|²` with `A(δ) = (1/√2π) ∫ e^{−iνδ} conj(Φ̃_n(ν)) ω_s(ν) dν`.
pub(crate) fn cross_values(
    grid: &SpectralGrid,
    dgrid: &DeltaGrid,
    phi_n: &[Complex64],
    omega_s: &[Complex64],
) -> Vec<f64> {
    let mut buf: Vec<Complex64> = phi_n.iter().zip(omega_s).map(|(p, w)| p.conj() * w).collect();
    grid.forward(&mut buf);
    let scale = grid.freq_step() / (2.0 * PI).sqrt();
    window_power(grid, dgrid, &buf, scale)
}

/// Cross density through the group integral: `J_{ns}(ν) = ∫ e^{iνλ}⟨n|U(λ)|s⟩dλ`
/// and `A(δ) = (1/2π) ∫ e^{−iνδ} J_{ns}/√J_{ss} dν`, frequencies with
/// `J_{ss}/2π` below the floor dropped. The λ-parity of the matrix element
/// is detected from the samples so the transform stays real (cosine) or
/// purely imaginary (sine).
pub(crate) fn cross_values_group(
    grid: &SpectralGrid,
    dgrid: &DeltaGrid,
    n: usize,
    seed: Seed,
) -> Result<Vec<f64>> {
    let s = seed.index();
    let samples = |row: usize| -> Result<Vec<f64>> {
        (0..grid.len())
            .into_par_iter()
            .map(|i| squeeze_column(seed, row, grid.position(i)).map(|c| c.amplitudes[row]))
            .collect()
    };
    let num = samples(n)?;
    let den = samples(s)?;
    let len = grid.len();
    let (mut even, mut odd) = (0.0f64, 0.0f64);
    for i in 1..len / 2 {
        let (a, b) = (num[i], num[len - i]);
        even = even.max((a + b).abs());
        odd = odd.max((a - b).abs());
    }
    let is_odd = odd > even;
    let transform = |v: &[f64]| {
        let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        grid.inverse(&mut buf);
        buf
    };
    let j_num = transform(&num);
    let j_den = transform(&den);
    let h = grid.step();
    let mut buf: Vec<Complex64> = j_num
        .iter()
        .zip(&j_den)
        .map(|(a, d)| {
            let d = d.re * h;
            if d / (2.0 * PI) < DENOMINATOR_FLOOR {
                return Complex64::new(0.0, 0.0);
            }
            let a = if is_odd {
                Complex64::new(0.0, a.im * h)
            } else {
                Complex64::new(a.re * h, 0.0)
            };
            a / d.sqrt()
        })
        .collect();
    grid.forward(&mut buf);
    let scale = grid.freq_step() / (2.0 * PI);
    Ok(window_power(grid, dgrid, &buf, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::QuadConfig;

    fn small_grid() -> (SpectralGrid, DeltaGrid) {
        let cfg = QuadConfig {
            delta_max: 40.0,
            n_points: 4000,
            ..Default::default()
        };
        (SpectralGrid::for_config(&cfg), cfg.delta_grid())
    }

    #[test]
    fn vacuum_log_position_spectrum_matches_gamma_form() {
        let (grid, _) = small_grid();
        for_each_log_position_spectrum(&grid, 1, |n, phi| {
            for k in [0usize, 5, 100, 400] {
                let nu = grid.freq(k);
                let (c, a) = if n == 0 {
                    (PI.powf(-0.75) * 2f64.powf(-0.75), 0.25)
                } else {
                    (2f64.powf(0.25) * PI.powf(-0.75), 0.75)
                };
                let g = ln_gamma(Complex64::new(a, -0.5 * nu)).exp();
                let want = g * Complex64::from_polar(c, -0.5 * nu * LN_2);
                assert!((phi[k] - want).norm() < 1e-12, "n={n} ν={nu}: {} vs {want}", phi[k]);
                let seed = if n == 0 { Seed::Vacuum } else { Seed::OnePhoton };
                if phi[k].norm() > 1e-8 {
                    let w = phi[k] / phi[k].norm();
                    assert!((w - seed_phase(seed, nu)).norm() < 1e-10);
                }
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn two_spectral_pictures_agree() {
        let (grid, _) = small_grid();
        let spectra = fock_spectra(&grid, 12, 1e-10).unwrap();
        for_each_log_position_spectrum(&grid, 12, |n, phi| {
            for k in (0..grid.len()).step_by(97) {
                let a = spectra[n][k];
                let b = 2.0 * PI * phi[k].norm_sqr();
                assert!((a - b).abs() < 1e-12, "n={n} k={k}: {a} vs {b}");
            }
            Ok(())
        })
        .unwrap();
    }
}
