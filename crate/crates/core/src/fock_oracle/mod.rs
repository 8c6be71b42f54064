//! Brute-force checks in a truncated Fock space and in position space,
//! independent of the spectral pipeline in [`crate::estimation`].
//!
//! The squeeze generator is real, so all truncated operators are stored as
//! real matrices.

mod povm;
mod verify;

pub use povm::{brute_povm_distribution, position_matrix_element, OracleConfig};
pub use verify::{
    diagonal_check, on_oracle_grid, povm_check, scutaru_check, verification_checks, DIAGONAL_TOL,
    ORACLE_DELTA_HALF_WIDTH, ORACLE_DELTA_STEP, ORACLE_DIM, POVM_TV_TOL, SCUTARU_TOL,
};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::{Purity, ThermalWeights};

/// Seed-column weight in the top tenth of the basis tolerated by
/// [`squeeze_unitary`]. At this level edge reflections have not yet
/// reached the low-order diagonal (errors stay below 1e−10 for `n ≤ 5`).
pub const LEAKAGE_TOL: f64 = 2e-2;

const EIGEN_NEG_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-6;
const JACOBI_MAX_SWEEPS: usize = 60;

/// An operator on the span of `|0⟩ … |dim−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub dim: usize,
    pub entries: DMatrix<f64>,
}

impl TruncatedOperator {
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.entries[(m, n)]
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.entries.component_mul(&self.entries.transpose()).sum()
    }

    /// Weight of column `n` in rows `row ≥ (9/10)·dim`.
    pub fn edge_leakage(&self, n: usize) -> f64 {
        let start = self.dim - self.dim.div_ceil(10);
        (start..self.dim).map(|m| self.entries[(m, n)].powi(2)).sum()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::Domain {
            what: "dim",
            value: dim as f64,
            expected: "dim >= 2",
        });
    }
    Ok(())
}

/// `K = (a†² − a²)/2` truncated to `dim`.
pub fn squeeze_generator(dim: usize) -> Result<TruncatedOperator> {
    check_dim(dim)?;
    let mut k = DMatrix::zeros(dim, dim);
    for m in 0..dim.saturating_sub(2) {
        let v = (((m + 1) * (m + 2)) as f64).sqrt() / 2.0;
        k[(m + 2, m)] = v;
        k[(m, m + 2)] = -v;
    }
    Ok(TruncatedOperator { dim, entries: k })
}

/// `exp(A)` by scaling and squaring with a degree-18 Taylor polynomial.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = a.abs().column_sum().max();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / 2f64.powi(squarings as i32);
    let n = a.nrows();
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=18 {
        term = &term * &scaled / k as f64;
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `U(λ) = exp(λK)` in the truncated basis.
///
/// Valid while the squeezed seed columns stay clear of the truncation edge;
/// for `dim = 150` this holds up to `|λ| ≈ 2.2`. Inside that range the
/// entries of low rows and columns are reliable, entries near the edge are
/// not: at `λ = 1` the diagonal is exact to 1e−13 up to `n ≈ 30`, at `λ = 2`
/// only up to `n ≈ 5`.
pub fn squeeze_unitary(lambda: f64, dim: usize) -> Result<TruncatedOperator> {
    let u = squeeze_unitary_unchecked(lambda, dim)?;
    for seed in 0..2.min(dim) {
        let leak = u.edge_leakage(seed);
        if leak > LEAKAGE_TOL {
            return Err(Error::Validity(format!(
                "column {seed} of U({lambda}) leaks {leak:e} into the top tenth of a {dim}-dimensional basis"
            )));
        }
    }
    Ok(u)
}

/// [`squeeze_unitary`] without the validity check.
pub fn squeeze_unitary_unchecked(lambda: f64, dim: usize) -> Result<TruncatedOperator> {
    let k = squeeze_generator(dim)?;
    Ok(TruncatedOperator {
        dim,
        entries: expm(&(k.entries * lambda)),
    })
}

/// `U(r) ρ_th(μ) U(r)ᵀ` truncated to `dim`. The thermal tail `Λ^dim` must be
/// below `1e−10`.
pub fn squeezed_thermal_density(r: f64, mu: Purity, dim: usize) -> Result<TruncatedOperator> {
    check_dim(dim)?;
    let w = ThermalWeights::of(mu);
    let tail = w.tail_above(dim - 1);
    if tail > 1e-10 {
        let required = ((1e-10f64).ln() / w.lambda.ln()).ceil() as usize;
        return Err(Error::Truncation { given: dim, required });
    }
    let u = squeeze_unitary_unchecked(r, dim)?;
    let weights = DMatrix::from_diagonal(&DVector::from_fn(dim, |n, _| w.weight(n)));
    let rho = &u.entries * weights * u.entries.transpose();
    Ok(TruncatedOperator { dim, entries: rho })
}

/// Cyclic Jacobi eigendecomposition `a = V diag(w) Vᵀ` of a symmetric
/// matrix. Rotations stop once every off-diagonal entry is below
/// `ε·√|a_pp a_qq|`, which keeps small eigenvalues accurate to working
/// precision relative to themselves.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    let mut a = (a + a.transpose()) * 0.5;
    let mut v = DMatrix::identity(n, n);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                if apq.abs() <= f64::EPSILON * (app * aqq).abs().sqrt() {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            return Ok((a.diagonal(), v));
        }
    }
    Err(Error::Convergence {
        what: "Jacobi eigendecomposition",
        estimate: f64::NAN,
        error: f64::NAN,
    })
}

/// Eigendecomposition of a density matrix with the negativity policy.
fn psd_eigen(rho: &DMatrix<f64>, what: &str) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let (w, v) = jacobi_eigen(rho)?;
    let min = w.min();
    if min < -EIGEN_NEG_TOL {
        return Err(Error::Validity(format!("{what} has eigenvalue {min:e}")));
    }
    Ok((w, v))
}

fn psd_sqrt(rho: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    let (w, v) = psd_eigen(rho, what)?;
    let root = w.map(|x| x.max(0.0).sqrt());
    Ok(&v * DMatrix::from_diagonal(&root) * v.transpose())
}

/// `F = (Tr √(√ρ₁ ρ₂ √ρ₁))²`, evaluated as the squared nuclear norm of
/// `√ρ₁ √ρ₂`: the square roots of round-off eigenvalues then enter only in
/// products and stay at round-off level.
pub fn uhlmann_fidelity(rho1: &TruncatedOperator, rho2: &TruncatedOperator) -> Result<f64> {
    if rho1.dim != rho2.dim {
        return Err(Error::Validity(format!(
            "dimension mismatch {} vs {}",
            rho1.dim, rho2.dim
        )));
    }
    for (name, r) in [("first state", rho1), ("second state", rho2)] {
        if (r.trace() - 1.0).abs() > TRACE_TOL {
            return Err(Error::Validity(format!("{name} has trace {}", r.trace())));
        }
    }
    let a = psd_sqrt(&rho1.entries, "first state")?;
    let b = psd_sqrt(&rho2.entries, "second state")?;
    let s: f64 = (a * b).singular_values().sum();
    Ok((s * s).min(1.0))
}

/// One oracle-versus-analytic comparison, for `--verify` reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            deviation,
            tolerance,
            passed: deviation <= tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{diag_squeeze_element, squeeze_column, Seed};

    #[test]
    fn generator_structure() {
        let k = squeeze_generator(12).unwrap();
        assert!((k.get(2, 0) - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(k.entries.transpose(), -k.entries.clone());
        for m in 0usize..12 {
            for n in 0..12 {
                if m.abs_diff(n) != 2 {
                    assert_eq!(k.get(m, n), 0.0);
                }
            }
        }
        assert!(squeeze_generator(1).is_err());
    }

    #[test]
    fn unitary_identity_and_normalization() {
        let u = squeeze_unitary(0.0, 20).unwrap();
        assert_eq!(u.entries, DMatrix::identity(20, 20));
        let u = squeeze_unitary(1.2, 150).unwrap();
        let col0: f64 = (0..150).map(|m| u.get(m, 0).powi(2)).sum();
        assert!((col0 - 1.0).abs() < 1e-8);
        assert!(squeeze_unitary(2.0, 150).is_ok());
        assert!(matches!(squeeze_unitary(2.5, 150), Err(Error::Validity(_))));
    }

    #[test]
    fn closed_form_columns_match_expm() {
        let u = squeeze_unitary(0.6, 120).unwrap();
        for seed in [Seed::Vacuum, Seed::OnePhoton] {
            let c = squeeze_column(seed, 40, 0.6).unwrap();
            for m in 0..=40 {
                let d = (c.amplitudes[m] - u.get(m, seed.index())).abs();
                assert!(d < 1e-8, "{seed:?} m={m}: {d:e}");
            }
        }
    }

    #[test]
    fn diagonal_matches_legendre_form_in_validity_region() {
        let u1 = squeeze_unitary(1.0, 150).unwrap();
        let u2 = squeeze_unitary(2.0, 150).unwrap();
        for n in 0..=30 {
            assert!((u1.get(n, n) - diag_squeeze_element(n, 1.0)).abs() < 1e-8, "λ=1 n={n}");
        }
        for n in 0..=5 {
            assert!((u2.get(n, n) - diag_squeeze_element(n, 2.0)).abs() < 1e-8, "λ=2 n={n}");
        }
    }

    #[test]
    fn thermal_density_properties() {
        let vac = squeezed_thermal_density(0.0, Purity::PURE, 10).unwrap();
        assert!((vac.get(0, 0) - 1.0).abs() < 1e-15);
        assert!((vac.trace() - 1.0).abs() < 1e-15);
        for mu in [1.0 / 3.0, 0.5, 0.8] {
            let p = Purity::new(mu).unwrap();
            let rho = squeezed_thermal_density(0.4, p, 150).unwrap();
            assert!((rho.trace() - 1.0).abs() < 1e-8);
            assert!((rho.purity() - mu).abs() < 1e-6, "μ={mu}: {}", rho.purity());
        }
        assert!(matches!(
            squeezed_thermal_density(0.0, Purity::new(0.01).unwrap(), 50),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn uhlmann_trivial_cases() {
        let rho = squeezed_thermal_density(0.3, Purity::new(0.5).unwrap(), 80).unwrap();
        assert!((uhlmann_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);
        let mut a = DMatrix::zeros(4, 4);
        a[(0, 0)] = 1.0;
        let mut b = DMatrix::zeros(4, 4);
        b[(1, 1)] = 1.0;
        let f = uhlmann_fidelity(
            &TruncatedOperator { dim: 4, entries: a },
            &TruncatedOperator { dim: 4, entries: b },
        )
        .unwrap();
        assert!(f.abs() < 1e-15);
    }

    #[test]
    fn jacobi_reconstructs() {
        let rho = squeezed_thermal_density(0.2, Purity::new(0.5).unwrap(), 150).unwrap();
        let (w, v) = jacobi_eigen(&rho.entries).unwrap();
        let back = &v * DMatrix::from_diagonal(&w) * v.transpose();
        assert!((back - &rho.entries).abs().max() < 1e-14);
        let orth = v.transpose() * &v - DMatrix::<f64>::identity(150, 150);
        assert!(orth.abs().max() < 1e-13);
    }

    #[test]
    fn uhlmann_rejects_non_states() {
        let mut a = DMatrix::identity(3, 3) * 0.5;
        a[(2, 2)] = 0.0;
        a[(1, 1)] = 1.0;
        a[(0, 0)] = -0.5;
        let bad = TruncatedOperator { dim: 3, entries: a };
        let good = squeezed_thermal_density(0.0, Purity::PURE, 3).unwrap();
        assert!(uhlmann_fidelity(&bad, &good).is_err());
    }
}
