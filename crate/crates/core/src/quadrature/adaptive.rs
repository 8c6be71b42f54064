use super::QuadConfig;
use crate::error::{Error, Result};

/// Value and error estimate of a definite integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;
const MAX_WINDOW: f64 = 1e4;

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod on a finite interval, bisecting the interval with
/// the largest error until `max(abs_tol, rel_tol·|value|)` is met.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Integral> {
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut value = v;
    let mut error = e;
    while error > abs_tol.max(rel_tol * value.abs()) {
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Convergence {
                what: "adaptive quadrature",
                estimate: value,
                error,
            });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("at least one interval");
        let (lo, hi, v0, e0) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        value += v1 + v2 - v0;
        error += e1 + e2 - e0;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
        if error.is_nan() {
            break;
        }
    }
    // re-sum to shed the running-update rounding
    let value = parts.iter().map(|p| p.2).sum();
    let error = parts.iter().map(|p| p.3).sum();
    Ok(Integral { value, error })
}

/// Largest `|f|` sampled on `±[w, 2w]`.
fn edge_magnitude<F: Fn(f64) -> f64>(f: &F, w: f64) -> f64 {
    (0..=8)
        .map(|i| w * (1.0 + i as f64 / 8.0))
        .map(|x| f(x).abs().max(f(-x).abs()))
        .fold(0.0, f64::max)
}

/// `∫_{−∞}^{∞} f`, for integrands that decay below `cfg.tail_cut` outside a
/// finite window. The window is doubled from 1 until the integrand on its
/// edges is below `tail_cut`.
pub fn integrate_real_line<F: Fn(f64) -> f64>(f: F, cfg: &QuadConfig) -> Result<Integral> {
    let mut w = 1.0;
    while edge_magnitude(&f, w) >= cfg.tail_cut {
        w *= 2.0;
        if w > MAX_WINDOW {
            return Err(Error::Convergence {
                what: "integration window",
                estimate: f64::NAN,
                error: f64::INFINITY,
            });
        }
    }
    let mut res = integrate_interval(&f, -w, w, cfg.abs_tol, cfg.rel_tol)?;
    // dropped tails bounded by the edge magnitude times the next window
    res.error += 2.0 * w * edge_magnitude(&f, w);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn riemann<F: Fn(f64) -> f64>(f: F, w: f64, n: usize) -> f64 {
        let h = 2.0 * w / n as f64;
        (0..=n).map(|i| f(-w + i as f64 * h)).sum::<f64>() * h
    }

    #[test]
    fn gaussian_normalization() {
        let cfg = QuadConfig::default();
        let r = integrate_real_line(|x| (-0.5 * x * x).exp() / (2.0 * PI).sqrt(), &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn sech_integral() {
        let cfg = QuadConfig::default();
        let r = integrate_real_line(|x| 1.0 / x.cosh(), &cfg).unwrap();
        assert!((r.value - PI).abs() < 1e-9);
        let brute = riemann(|x| 1.0 / x.cosh(), 80.0, 1_000_000);
        assert!((r.value - brute).abs() < 1e-9);
    }

    #[test]
    fn root_sech_matches_riemann_sum() {
        let cfg = QuadConfig::default();
        let f = |x: f64| x.cosh().powf(-0.5);
        let r = integrate_real_line(f, &cfg).unwrap();
        let brute = riemann(f, 90.0, 1_000_000);
        assert!(r.value > 0.0);
        assert!((r.value - brute).abs() < 1e-8, "{} vs {brute}", r.value);
    }

    #[test]
    fn non_decaying_integrand_fails() {
        let cfg = QuadConfig::default();
        assert!(matches!(
            integrate_real_line(|_| 1.0, &cfg),
            Err(Error::Convergence { .. })
        ));
    }
}
