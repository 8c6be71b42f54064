//! Fock-basis matrix elements of the squeeze operator
//! `U(λ) = exp[(λ/2)(a†² − a²)]`.
//!
//! With this generator every matrix element is real, `U(−λ) = U(λ)ᵀ`, and
//! `⟨m|U(λ)|n⟩` vanishes unless `m + n` is even.

use serde::Serialize;

use super::hyp2f1::hyp2f1_terminating;
use crate::error::{Error, Result};

/// Sign of `⟨2|U(λ)|0⟩` for `λ > 0`. Fixed by the generator `(a†² − a²)/2`.
pub const OFF_DIAGONAL_SIGN: f64 = 1.0;

/// Columns whose missing norm exceeds this are flagged as truncated.
const COLUMN_TAIL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Seed states of the parity-resolved estimation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Seed {
    Vacuum,
    OnePhoton,
}

impl Seed {
    pub fn index(self) -> usize {
        match self {
            Seed::Vacuum => 0,
            Seed::OnePhoton => 1,
        }
    }

    pub fn parity(self) -> Parity {
        Parity::of(self.index())
    }

    /// The seed sharing the parity of `n`.
    pub fn matching(n: usize) -> Seed {
        match Parity::of(n) {
            Parity::Even => Seed::Vacuum,
            Parity::Odd => Seed::OnePhoton,
        }
    }

    pub fn from_index(i: usize) -> Result<Seed> {
        match i {
            0 => Ok(Seed::Vacuum),
            1 => Ok(Seed::OnePhoton),
            _ => Err(Error::Domain {
                what: "seed",
                value: i as f64,
                expected: "seed in {0, 1}",
            }),
        }
    }
}

/// `ln cosh λ` without overflow.
pub(crate) fn ln_cosh(lambda: f64) -> f64 {
    let a = lambda.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

pub(crate) fn sech(lambda: f64) -> f64 {
    let a = lambda.abs();
    if a > 20.0 {
        2.0 * (-a).exp() / (1.0 + (-2.0 * a).exp())
    } else {
        1.0 / a.cosh()
    }
}

/// Legendre polynomial `P_n(x)` by the Bonnet recurrence.
pub fn legendre(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `⟨n|U(λ)|n⟩ = (cosh λ)^{−n−1/2} ₂F₁[(1−n)/2, −n/2; 1; −sinh²λ]`.
///
/// Evaluated through the equivalent form `(sech λ)^{1/2} P_n(sech λ)`: the
/// hypergeometric polynomial alternates in sign and loses all accuracy for
/// `n` beyond a few tens, while the Legendre recurrence stays stable on
/// `[0, 1]` for any order.
pub fn diag_squeeze_element(n: usize, lambda: f64) -> f64 {
    let x = sech(lambda);
    x.sqrt() * legendre(n, x)
}

/// The literal hypergeometric form, for small `n` and cross-checks.
pub fn diag_squeeze_element_series(n: usize, lambda: f64) -> f64 {
    let nf = n as f64;
    let s = lambda.sinh();
    let f = hyp2f1_terminating((1.0 - nf) / 2.0, -nf / 2.0, 1.0, -s * s)
        .expect("one upper parameter is a non-positive integer for every n");
    (-(nf + 0.5) * ln_cosh(lambda)).exp() * f
}

/// One column `⟨m|U(λ)|seed⟩`, `m = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeColumn {
    pub seed: Seed,
    pub lambda: f64,
    pub amplitudes: Vec<f64>,
    /// `1 − Σ_m |⟨m|U(λ)|seed⟩|²` over the retained rows.
    pub tail_weight: f64,
    /// Set when the tail exceeds `1e-10`: the cutoff is too small for `λ`.
    pub truncated: bool,
}

/// Squeezed vacuum / squeezed single-photon amplitudes:
///
/// `⟨2m|U(λ)|0⟩   = (cosh λ)^{−1/2} tanh^m λ · √((2m)!) / (2^m m!)`
/// `⟨2m+1|U(λ)|1⟩ = (cosh λ)^{−3/2} tanh^m λ · √((2m+1)!) / (2^m m!)`
///
/// built in log space so the prefactor cannot underflow.
pub fn squeeze_column(seed: Seed, n_max: usize, lambda: f64) -> Result<SqueezeColumn> {
    let s = seed.index();
    if n_max < s {
        return Err(Error::Domain {
            what: "n_max",
            value: n_max as f64,
            expected: "n_max >= seed",
        });
    }
    let mut amplitudes = vec![0.0; n_max + 1];
    if lambda == 0.0 {
        amplitudes[s] = 1.0;
    } else {
        let t = lambda.tanh();
        let sign = OFF_DIAGONAL_SIGN * t.signum();
        let ln_t = t.abs().ln();
        let mut ln_c = -(s as f64 + 0.5) * ln_cosh(lambda);
        let mut c_sign = 1.0;
        let mut row = s;
        amplitudes[row] = ln_c.exp();
        while row + 2 <= n_max {
            let m = ((row - s) / 2 + 1) as f64;
            let ratio = match seed {
                Seed::Vacuum => (2.0 * m - 1.0) / (2.0 * m),
                Seed::OnePhoton => (2.0 * m + 1.0) / (2.0 * m),
            };
            ln_c += ln_t + 0.5 * ratio.ln();
            c_sign *= sign;
            row += 2;
            amplitudes[row] = c_sign * ln_c.exp();
        }
    }
    let norm: f64 = amplitudes.iter().map(|a| a * a).sum();
    let tail_weight = (1.0 - norm).max(0.0);
    Ok(SqueezeColumn {
        seed,
        lambda,
        amplitudes,
        tail_weight,
        truncated: tail_weight > COLUMN_TAIL_TOL,
    })
}
