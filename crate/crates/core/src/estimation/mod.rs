//! Probability densities of squeezing-estimation strategies: the optimal
//! covariant measurement on the vacuum and on Fock states, cross densities
//! of a Fock state measured with the vacuum or one-photon seed, and the
//! thermal mixture of the parity-resolved strategy.

mod spectral;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{cosine_transform, DeltaGrid, QuadConfig, SpectralGrid, TabulatedDensity};
use crate::specfun::{diag_squeeze_element, Parity, Seed};
use crate::states::{Purity, ThermalWeights};

/// Accepted densities are normalized to this.
pub const NORM_TOL: f64 = 1e-6;

/// Hard cap on the thermal Fock cutoff.
pub const MAX_FOCK_CUTOFF: usize = 200;

/// Tail weight left out of thermal mixtures, relative to `1 − Λ`.
const MIXTURE_TAIL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EstimationKind {
    OptVacuum,
    OptFock { n: usize },
    Cross { n: usize, seed: Seed },
    ThermalLower { mu: Purity },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    OptVacuum,
    OptFock(usize),
    OptFockCoarse(usize),
    Cross(usize, Seed),
    ThermalLower(u64, usize),
}

/// Fock spectra held in memory at once while prefetching.
const PREFETCH_CHUNK: usize = 16;

/// Fock cutoff `⌈ln(1e−6·(1−Λ))/ln Λ⌉`, capped at [`MAX_FOCK_CUTOFF`].
pub fn thermal_cutoff(mu: Purity) -> usize {
    let l = mu.lambda();
    if l == 0.0 {
        return 0;
    }
    let n = ((MIXTURE_TAIL * (1.0 - l)).ln() / l.ln()).ceil();
    (n.max(0.0) as usize).min(MAX_FOCK_CUTOFF)
}

/// Builds and caches densities for one [`QuadConfig`].
///
/// All densities live on `cfg.delta_grid()`; p(δ) is read off a periodic
/// FFT grid of the same step whose period covers the δ window plus the
/// decay margin of the integrands.
pub struct Estimator {
    cfg: QuadConfig,
    grid: SpectralGrid,
    half: SpectralGrid,
    cache: RwLock<HashMap<Key, Arc<TabulatedDensity>>>,
}

impl std::fmt::Debug for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Estimator")
            .field("cfg", &self.cfg)
            .field("grid", &self.grid)
            .field("cached", &self.cached_len())
            .finish()
    }
}

impl Estimator {
    pub fn new(cfg: QuadConfig) -> Result<Self> {
        cfg.validate()?;
        let grid = SpectralGrid::for_config(&cfg);
        Ok(Estimator {
            half: grid.half_period(),
            grid,
            cfg,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &QuadConfig {
        &self.cfg
    }

    pub fn delta_grid(&self) -> DeltaGrid {
        self.cfg.delta_grid()
    }

    pub fn spectral_grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    fn lookup(&self, key: Key) -> Option<Arc<TabulatedDensity>> {
        self.cache.read().expect("cache lock").get(&key).cloned()
    }

    fn store(&self, key: Key, p: TabulatedDensity) -> Arc<TabulatedDensity> {
        let mut cache = self.cache.write().expect("cache lock");
        cache.entry(key).or_insert_with(|| Arc::new(p)).clone()
    }

    fn finish(&self, values: Vec<f64>) -> Result<TabulatedDensity> {
        let p = TabulatedDensity::from_values(self.delta_grid(), values, 1.0, self.cfg.abs_tol)?;
        p.accept(NORM_TOL)?;
        Ok(p)
    }

    pub fn density(&self, kind: EstimationKind) -> Result<Arc<TabulatedDensity>> {
        match kind {
            EstimationKind::OptVacuum => self.opt_vacuum(),
            EstimationKind::OptFock { n } => self.opt_fock(n),
            EstimationKind::Cross { n, seed } => self.cross(n, seed),
            EstimationKind::ThermalLower { mu } => self.thermal_lower(mu, thermal_cutoff(mu)),
        }
    }

    /// Optimal density for the vacuum, from `|Γ(1/4 + iν/2)|`.
    pub fn opt_vacuum(&self) -> Result<Arc<TabulatedDensity>> {
        if let Some(p) = self.lookup(Key::OptVacuum) {
            return Ok(p);
        }
        let values = spectral::opt_vacuum_values(&self.grid, &self.delta_grid());
        Ok(self.store(Key::OptVacuum, self.finish(values)?))
    }

    /// `Iⁿ_ν` by adaptive quadrature of the diagonal element.
    pub fn i_n_nu(&self, n: usize, nu: f64) -> Result<f64> {
        let g = cosine_transform(|l| diag_squeeze_element(n, l), nu, &self.cfg)?;
        crate::quadrature::clamp_nonnegative(g.value, self.cfg.abs_tol, nu)
    }

    /// `Iⁿ_ν` on every frequency of the spectral grid, `n = 0..=n_max`.
    pub fn fock_spectra(&self, n_max: usize) -> Result<Vec<Vec<f64>>> {
        spectral::fock_spectra(&self.grid, n_max, self.cfg.abs_tol)
    }

    /// Optimal density for `|n⟩`, from `√(Iⁿ_ν)`.
    pub fn opt_fock(&self, n: usize) -> Result<Arc<TabulatedDensity>> {
        if let Some(p) = self.lookup(Key::OptFock(n)) {
            return Ok(p);
        }
        self.prefetch_opt_fock(n)?;
        Ok(self.lookup(Key::OptFock(n)).expect("prefetched"))
    }

    /// [`Estimator::opt_fock`] from every second frequency sample. Not
    /// normalization-checked; its distance to the production density
    /// estimates the frequency-discretization error.
    pub fn opt_fock_coarse(&self, n: usize) -> Result<Arc<TabulatedDensity>> {
        if let Some(p) = self.lookup(Key::OptFockCoarse(n)) {
            return Ok(p);
        }
        self.prefetch_opt_fock(n)?;
        Ok(self.lookup(Key::OptFockCoarse(n)).expect("prefetched"))
    }

    /// Compute and cache `p_opt_fock(n)` and its coarse twin for all
    /// `n ≤ n_max`, a chunk of orders at a time.
    pub fn prefetch_opt_fock(&self, n_max: usize) -> Result<()> {
        if (0..=n_max).all(|n| self.lookup(Key::OptFock(n)).is_some()) {
            return Ok(());
        }
        let dgrid = self.delta_grid();
        let build = |chunk: &mut Vec<(usize, Vec<f64>)>| -> Result<()> {
            let built: Vec<Result<(usize, TabulatedDensity, TabulatedDensity)>> = chunk
                .par_iter()
                .map(|(n, s)| {
                    let fine = self.finish(spectral::opt_fock_values(&self.grid, &dgrid, s))?;
                    let coarse = spectral::opt_fock_values_coarse(&self.half, &dgrid, s);
                    let coarse = TabulatedDensity::from_values(dgrid, coarse, 1.0, self.cfg.abs_tol)?;
                    Ok((*n, fine, coarse))
                })
                .collect();
            chunk.clear();
            for b in built {
                let (n, fine, coarse) = b?;
                self.store(Key::OptFock(n), fine);
                self.store(Key::OptFockCoarse(n), coarse);
            }
            Ok(())
        };
        let mut chunk = Vec::with_capacity(PREFETCH_CHUNK);
        spectral::for_each_fock_spectrum(&self.grid, n_max, self.cfg.abs_tol, |n, s| {
            chunk.push((n, s));
            if chunk.len() == PREFETCH_CHUNK {
                build(&mut chunk)?;
            }
            Ok(())
        })?;
        build(&mut chunk)
    }

    /// `p_{n,seed}(δ) = |⟨n|η_seed(δ)⟩|²`; the exact zero density when the
    /// parities differ.
    pub fn cross(&self, n: usize, seed: Seed) -> Result<Arc<TabulatedDensity>> {
        if Parity::of(n) != seed.parity() {
            return Ok(Arc::new(TabulatedDensity::zero(self.delta_grid())));
        }
        if let Some(p) = self.lookup(Key::Cross(n, seed)) {
            return Ok(p);
        }
        self.prefetch_cross(n)?;
        Ok(self.lookup(Key::Cross(n, seed)).expect("prefetched"))
    }

    /// Compute and cache every parity-matched `p_{n,seed}` with `n ≤ n_max`.
    pub fn prefetch_cross(&self, n_max: usize) -> Result<()> {
        if (0..=n_max).all(|n| self.lookup(Key::Cross(n, Seed::matching(n))).is_some()) {
            return Ok(());
        }
        let dgrid = self.delta_grid();
        let omega = [
            spectral::seed_phases(&self.grid, Seed::Vacuum),
            spectral::seed_phases(&self.grid, Seed::OnePhoton),
        ];
        spectral::for_each_log_position_spectrum(&self.grid, n_max, |n, phi| {
            let seed = Seed::matching(n);
            if self.lookup(Key::Cross(n, seed)).is_none() {
                let values = spectral::cross_values(&self.grid, &dgrid, phi, &omega[seed.index()]);
                self.store(Key::Cross(n, seed), self.finish(values)?);
            }
            Ok(())
        })
    }

    /// The cross density through the group integral of `⟨n|U(λ)|seed⟩`
    /// with the division by `√⟨seed|Π_ν|seed⟩` done explicitly. Slow and
    /// limited to moderate `n`; kept as an independent check of
    /// [`Estimator::cross`].
    pub fn cross_group_route(&self, n: usize, seed: Seed) -> Result<TabulatedDensity> {
        if Parity::of(n) != seed.parity() {
            return Ok(TabulatedDensity::zero(self.delta_grid()));
        }
        let values = spectral::cross_values_group(&self.grid, &self.delta_grid(), n, seed)?;
        TabulatedDensity::from_values(self.delta_grid(), values, 1.0, self.cfg.abs_tol)
    }

    /// `(1 − Λ)[Σ_{even n} Λⁿ p_{n,0} + Σ_{odd n} Λⁿ p_{n,1}]` over `n ≤ n_cut`.
    /// The dropped weight `Λ^{n_cut+1}` is carried in `target_mass`.
    pub fn thermal_lower(&self, mu: Purity, n_cut: usize) -> Result<Arc<TabulatedDensity>> {
        let required = thermal_cutoff(mu);
        if n_cut < required {
            return Err(Error::Truncation { given: n_cut, required });
        }
        let key = Key::ThermalLower(mu.value().to_bits(), n_cut);
        if let Some(p) = self.lookup(key) {
            return Ok(p);
        }
        self.prefetch_cross(n_cut)?;
        let w = ThermalWeights::of(mu);
        let parts: Vec<(f64, Arc<TabulatedDensity>)> = (0..=n_cut)
            .map(|n| Ok((w.weight(n), self.cross(n, Seed::matching(n))?)))
            .collect::<Result<_>>()?;
        let mix = TabulatedDensity::mixture(
            self.delta_grid(),
            parts.iter().map(|(w, p)| (*w, p.as_ref())),
        );
        mix.accept(NORM_TOL)?;
        Ok(self.store(key, mix))
    }
}

/// [`Estimator::opt_vacuum`] for a one-off configuration.
pub fn p_opt_vacuum(cfg: &QuadConfig) -> Result<TabulatedDensity> {
    Estimator::new(*cfg)?.opt_vacuum().map(|p| (*p).clone())
}

pub fn p_opt_fock(n: usize, cfg: &QuadConfig) -> Result<TabulatedDensity> {
    Estimator::new(*cfg)?.opt_fock(n).map(|p| (*p).clone())
}

pub fn i_n_nu(n: usize, nu: f64, cfg: &QuadConfig) -> Result<f64> {
    Estimator::new(*cfg)?.i_n_nu(n, nu)
}

/// The cross density `p_{n,seed}`.
pub fn eta_overlap(n: usize, seed: Seed, cfg: &QuadConfig) -> Result<TabulatedDensity> {
    Estimator::new(*cfg)?.cross(n, seed).map(|p| (*p).clone())
}

pub fn p_thermal_lower(mu: Purity, n_cut: usize, cfg: &QuadConfig) -> Result<TabulatedDensity> {
    Estimator::new(*cfg)?.thermal_lower(mu, n_cut).map(|p| (*p).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn est() -> Estimator {
        Estimator::new(QuadConfig {
            delta_max: 40.0,
            n_points: 4000,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn cutoff_formula() {
        assert_eq!(thermal_cutoff(Purity::PURE), 0);
        assert_eq!(thermal_cutoff(Purity::new(1.0 / 9.0).unwrap()), 70);
        assert_eq!(thermal_cutoff(Purity::new(1e-3).unwrap()), 200);
        let mu = Purity::new(0.5).unwrap();
        let n = thermal_cutoff(mu);
        let l = mu.lambda();
        assert!(l.powi(n as i32) <= 1e-6 * (1.0 - l));
        assert!(l.powi(n as i32 - 1) > 1e-6 * (1.0 - l));
    }

    #[test]
    fn parity_mismatch_is_exact_zero() {
        let e = est();
        assert!(e.cross(1, Seed::Vacuum).unwrap().is_zero());
        assert!(e.cross(4, Seed::OnePhoton).unwrap().is_zero());
        assert_eq!(e.cached_len(), 0);
    }

    #[test]
    fn thermal_cutoff_is_enforced() {
        let e = est();
        let mu = Purity::new(0.5).unwrap();
        assert!(matches!(
            e.thermal_lower(mu, 3),
            Err(Error::Truncation { given: 3, .. })
        ));
    }

    #[test]
    fn pure_thermal_mixture_is_vacuum_density() {
        let e = est();
        let a = e.thermal_lower(Purity::PURE, 0).unwrap();
        let b = e.opt_vacuum().unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn quadrature_spectrum_matches_grid_spectrum() {
        let e = est();
        let spectra = e.fock_spectra(4).unwrap();
        let grid = e.spectral_grid();
        for n in 0..=4 {
            for k in [0usize, 40, 200] {
                let a = e.i_n_nu(n, grid.freq(k)).unwrap();
                assert!((a - spectra[n][k]).abs() < 1e-9, "n={n} k={k}");
            }
        }
    }
}
