//! Zero-set extraction: curve tracing in 2D, surface meshing in 3D, and the
//! topology summaries computed from the results.

mod mesh;
mod refine;
pub mod topology;
mod trace;

pub use mesh::{mesh_3d, TriangleMesh};
pub use refine::{refine_point, refine_segment, RefineOptions, Refined};
pub use topology::{count_branches, count_mesh_components, count_polyline_components, euler_characteristic};
pub use trace::{trace_2d, Polyline};

use crate::error::{Error, Result};

/// A real scalar field sampled by the extractors.
///
/// `sample` returns the value together with a positive normalization scale;
/// refinement residuals are reported as `|value| / scale`.
pub trait ScalarField: Sync {
    fn dim(&self) -> usize;

    fn sample(&self, p: &[f64]) -> (f64, f64);

    fn value(&self, p: &[f64]) -> f64 {
        self.sample(p).0
    }
}

/// `|value| / scale`, with a zero scale mapping to 0 for zero values and ∞ otherwise.
pub fn normalized_residual(value: f64, scale: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else if scale > 0.0 {
        value.abs() / scale
    } else {
        f64::INFINITY
    }
}

/// Adapts a closure to [`ScalarField`] with unit scale.
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> ScalarField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, p: &[f64]) -> (f64, f64) {
        ((self.f)(p), 1.0)
    }
}

/// Axis-aligned sampling box with per-axis cell counts.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    bounds: Vec<(f64, f64)>,
    resolution: Vec<usize>,
}

impl GridSpec {
    pub fn new(bounds: Vec<(f64, f64)>, resolution: Vec<usize>) -> Result<Self> {
        if bounds.is_empty() || bounds.len() != resolution.len() {
            return Err(Error::InvalidGrid(format!(
                "{} axes with {} resolutions",
                bounds.len(),
                resolution.len()
            )));
        }
        for (axis, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidGrid(format!("axis {axis}: need min < max, got [{lo}, {hi}]")));
            }
        }
        if let Some(axis) = resolution.iter().position(|&r| r < 2) {
            return Err(Error::InvalidGrid(format!("axis {axis}: resolution must be at least 2")));
        }
        Ok(Self { bounds, resolution })
    }

    /// The same resolution on every axis.
    pub fn uniform(bounds: Vec<(f64, f64)>, resolution: usize) -> Result<Self> {
        let n = bounds.len();
        Self::new(bounds, vec![resolution; n])
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        (hi - lo) / self.resolution[axis] as f64
    }

    /// Coordinate of node `index` along `axis`; `index` runs over `0..=resolution`.
    pub fn node(&self, axis: usize, index: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        let r = self.resolution[axis];
        if index == r {
            hi
        } else {
            lo + (hi - lo) * index as f64 / r as f64
        }
    }

    /// Length of a cell diagonal.
    pub fn cell_diagonal(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a).powi(2)).sum::<f64>().sqrt()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p
                .iter()
                .zip(&self.bounds)
                .all(|(&x, &(lo, hi))| lo <= x && x <= hi)
    }
}
