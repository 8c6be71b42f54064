use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform symmetric grid `δ_i = (i − half)·step`, `i = 0..=2·half`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaGrid {
    pub step: f64,
    pub half: usize,
}

impl DeltaGrid {
    pub fn new(step: f64, half: usize) -> Self {
        DeltaGrid { step, half }
    }

    pub fn len(&self) -> usize {
        2 * self.half + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn delta(&self, i: usize) -> f64 {
        (i as f64 - self.half as f64) * self.step
    }

    pub fn delta_max(&self) -> f64 {
        self.half as f64 * self.step
    }

    /// Signed offsets `−half..=half`.
    pub fn offsets(&self) -> impl Iterator<Item = i64> {
        let h = self.half as i64;
        -h..=h
    }
}

/// `∫ p w dδ` with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expectation {
    pub value: f64,
    /// Step-halving difference plus normalization defect times `sup|w|`.
    pub error: f64,
    /// False when `error` exceeds the requested tolerance.
    pub accurate: bool,
}

/// A probability density tabulated on a [`DeltaGrid`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TabulatedDensity {
    pub grid: DeltaGrid,
    pub values: Vec<f64>,
    /// Mass the density should carry: 1, 0 for parity-forbidden pairs, or
    /// `1 − tail` for truncated mixtures.
    pub target_mass: f64,
    pub mass: f64,
    /// `|target_mass − mass|`.
    pub norm_defect: f64,
    pub symmetric: bool,
}

const SYMMETRY_TOL: f64 = 1e-9;

fn trapezoid(step: f64, values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..n - 1].iter().sum();
    step * (inner + 0.5 * (values[0] + values[n - 1]))
}

impl TabulatedDensity {
    /// Build from raw samples. Values in `[−clamp_tol, 0)` are zeroed,
    /// anything below is a negativity error.
    pub fn from_values(
        grid: DeltaGrid,
        mut values: Vec<f64>,
        target_mass: f64,
        clamp_tol: f64,
    ) -> Result<Self> {
        assert_eq!(values.len(), grid.len(), "sample count must match the grid");
        for (i, v) in values.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::Negativity { at: grid.delta(i), value: *v });
            }
            if *v < 0.0 {
                if *v < -clamp_tol {
                    return Err(Error::Negativity { at: grid.delta(i), value: *v });
                }
                *v = 0.0;
            }
        }
        let mass = trapezoid(grid.step, &values);
        let peak = values.iter().cloned().fold(0.0, f64::max);
        let n = values.len();
        let symmetric = (0..grid.half)
            .all(|i| (values[i] - values[n - 1 - i]).abs() <= SYMMETRY_TOL * peak.max(1e-300));
        Ok(TabulatedDensity {
            grid,
            values,
            target_mass,
            mass,
            norm_defect: (target_mass - mass).abs(),
            symmetric,
        })
    }

    /// The identically vanishing density of a parity-forbidden pair.
    pub fn zero(grid: DeltaGrid) -> Self {
        TabulatedDensity {
            grid,
            values: vec![0.0; grid.len()],
            target_mass: 0.0,
            mass: 0.0,
            norm_defect: 0.0,
            symmetric: true,
        }
    }

    /// `Σ w_k p_k` for densities on the same grid; target masses add.
    pub fn mixture<'a, I>(grid: DeltaGrid, parts: I) -> Self
    where
        I: IntoIterator<Item = (f64, &'a TabulatedDensity)>,
    {
        let mut values = vec![0.0; grid.len()];
        let mut target = 0.0;
        let mut symmetric = true;
        for (w, p) in parts {
            assert_eq!(p.grid, grid, "mixture components must share the grid");
            for (acc, v) in values.iter_mut().zip(&p.values) {
                *acc += w * v;
            }
            target += w * p.target_mass;
            symmetric &= p.symmetric;
        }
        let mass = trapezoid(grid.step, &values);
        TabulatedDensity {
            grid,
            values,
            target_mass: target,
            mass,
            norm_defect: (target - mass).abs(),
            symmetric,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.target_mass == 0.0 && self.values.iter().all(|&v| v == 0.0)
    }

    /// Errors unless the density is symmetric and its defect is within `tol`.
    pub fn accept(&self, tol: f64) -> Result<()> {
        if self.norm_defect > tol {
            return Err(Error::Accuracy {
                what: "density normalization",
                defect: self.norm_defect,
                tolerance: tol,
            });
        }
        if !self.symmetric {
            return Err(Error::Accuracy {
                what: "density symmetry",
                defect: self.asymmetry(),
                tolerance: SYMMETRY_TOL,
            });
        }
        Ok(())
    }

    pub fn asymmetry(&self) -> f64 {
        let n = self.values.len();
        (0..self.grid.half)
            .map(|i| (self.values[i] - self.values[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &p)| (self.grid.delta(i), p))
    }

    pub fn at_zero(&self) -> f64 {
        self.values[self.grid.half]
    }

    /// `∫ p w dδ` by the trapezoid rule. The error estimate compares with the
    /// rule on every second sample and adds `norm_defect·sup|w|`.
    pub fn expectation<W: Fn(f64) -> f64>(&self, w: W, tol: f64) -> Expectation {
        let weights: Vec<f64> = (0..self.values.len()).map(|i| w(self.grid.delta(i))).collect();
        let prod: Vec<f64> = self.values.iter().zip(&weights).map(|(p, w)| p * w).collect();
        let fine = trapezoid(self.grid.step, &prod);
        // every other sample, keeping δ = 0 on the coarse grid
        let start = self.grid.half % 2;
        let coarse_samples: Vec<f64> = prod[start..].iter().step_by(2).cloned().collect();
        let coarse = trapezoid(2.0 * self.grid.step, &coarse_samples);
        let sup_w = weights.iter().fold(0.0f64, |m, w| m.max(w.abs()));
        let error = (fine - coarse).abs() + self.norm_defect * sup_w;
        Expectation {
            value: fine,
            error,
            accurate: error <= tol,
        }
    }

    pub fn mean(&self) -> f64 {
        self.expectation(|d| d, f64::INFINITY).value / self.mass
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.expectation(|d| (d - m) * (d - m), f64::INFINITY).value / self.mass
    }

    /// `½ ∫ |p − q| dδ`.
    pub fn total_variation(&self, other: &TabulatedDensity) -> f64 {
        assert_eq!(self.grid, other.grid, "densities must share the grid");
        let diff: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .collect();
        0.5 * trapezoid(self.grid.step, &diff)
    }

    /// Largest pointwise difference.
    pub fn max_abs_diff(&self, other: &TabulatedDensity) -> f64 {
        assert_eq!(self.grid, other.grid, "densities must share the grid");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Restrict to `|δ| ≤ stride·h·half'` keeping every `stride`-th sample.
    pub fn resample(&self, stride: usize, half: usize) -> TabulatedDensity {
        assert!(stride >= 1 && stride * half <= self.grid.half);
        let grid = DeltaGrid::new(self.grid.step * stride as f64, half);
        let values = grid
            .offsets()
            .map(|m| self.values[(self.grid.half as i64 + m * stride as i64) as usize])
            .collect();
        TabulatedDensity::from_values(grid, values, self.target_mass, 0.0)
            .expect("resampling keeps non-negative values")
    }
}
