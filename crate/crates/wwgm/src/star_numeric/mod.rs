//! Phase-space functions sampled on a uniform periodic grid over `[-L, L)^2`.
//!
//! Values are stored row-major over (p-index, x-index); node `j` sits at
//! `-L + j (2L/N)`. Only one spatial dimension is supported numerically.

mod bopp;
mod io;
mod kernel;
pub mod spectral;
mod twisted;

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

pub use bopp::{star_bopp_spectral, star_bopp_spectral_h};
pub use io::{from_binary, read_binary, to_binary, write_binary, write_csv};
pub use kernel::kernel_apply;
pub use spectral::{d_p, d_x, p_multiplier, sympl_fft, sympl_fft_dense, x_multiplier};
pub use twisted::{moyal_bracket, star, twisted_conv, twisted_conv_direct};

use crate::gaussian_core::{GaussError, PolyGaussian};
use crate::C64;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid specs differ: {0:?} vs {1:?}")]
    SpecMismatch(GridSpec, GridSpec),
    #[error("invalid grid: {0}")]
    InvalidSpec(String),
    #[error("grid functions are one-dimensional, got dimension {0}")]
    DimensionMismatch(usize),
    #[error("function does not decay at the domain boundary (relative amplitude {0:.3e})")]
    DomainTooSmall(f64),
    #[error("io error at {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed grid file: {0}")]
    Format(String),
    #[error(transparent)]
    Gauss(#[from] GaussError),
}

/// Uniform periodic grid with `n_points` nodes per axis on `[-L, L)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    n_points: usize,
    half_width: f64,
}

impl GridSpec {
    pub fn new(n_points: usize, half_width: f64) -> Result<Self, GridError> {
        if !n_points.is_power_of_two() || n_points < 32 {
            return Err(GridError::InvalidSpec(format!("N = {n_points} must be a power of two and at least 32")));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(GridError::InvalidSpec(format!("L = {half_width} must be positive")));
        }
        Ok(GridSpec { n_points, half_width })
    }

    /// The grid on which the discrete symplectic transform is an exact FFT: `L^2 = pi N / 2`.
    pub fn self_dual(n_points: usize) -> Result<Self, GridError> {
        GridSpec::new(n_points, (PI * n_points as f64 / 2.0).sqrt())
    }

    /// Spatial dimension; always one.
    pub fn n(&self) -> usize {
        1
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Total node count `M = N^2`.
    pub fn len(&self) -> usize {
        self.n_points * self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn delta(&self) -> f64 {
        2.0 * self.half_width / self.n_points as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.delta()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.node(j)).collect()
    }

    pub fn is_self_dual(&self) -> bool {
        let target = PI * self.n_points as f64 / 2.0;
        (self.half_width * self.half_width - target).abs() <= 1e-12 * target
    }

    /// Same node count with the half-width multiplied by `factor`.
    pub fn relabeled(&self, factor: f64) -> GridSpec {
        GridSpec { n_points: self.n_points, half_width: self.half_width * factor }
    }

    /// Signed wavenumber of FFT bin `q`; the Nyquist bin maps to zero.
    pub fn wavenumber(&self, q: usize) -> f64 {
        let n = self.n_points;
        let qs = if q < n / 2 {
            q as f64
        } else if q == n / 2 {
            0.0
        } else {
            q as f64 - n as f64
        };
        2.0 * PI * qs / (n as f64 * self.delta())
    }

    /// Signed wavenumber with the Nyquist bin kept at `-N/2`.
    pub fn wavenumber_full(&self, q: usize) -> f64 {
        let n = self.n_points;
        let qs = if q < n / 2 { q as f64 } else { q as f64 - n as f64 };
        2.0 * PI * qs / (n as f64 * self.delta())
    }
}

/// Complex samples of a phase-space function.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<C64>) -> Result<Self, GridError> {
        if values.len() != spec.len() {
            return Err(GridError::Format(format!("{} values for a grid of {}", values.len(), spec.len())));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GridError::Format("non-finite sample".into()));
        }
        Ok(GridFunction { spec, values })
    }

    pub(crate) fn from_vec(spec: GridSpec, values: Vec<C64>) -> Self {
        debug_assert_eq!(values.len(), spec.len());
        GridFunction { spec, values }
    }

    pub fn zeros(spec: GridSpec) -> Self {
        GridFunction { spec, values: vec![C64::new(0.0, 0.0); spec.len()] }
    }

    pub fn constant(spec: GridSpec, c: C64) -> Self {
        GridFunction { spec, values: vec![c; spec.len()] }
    }

    /// Samples `f(p, x)` at every node.
    pub fn from_fn(spec: GridSpec, f: impl Fn(f64, f64) -> C64 + Sync) -> Self {
        let n = spec.n_points;
        let nodes = spec.nodes();
        let mut values = vec![C64::new(0.0, 0.0); spec.len()];
        values.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            for (k, v) in row.iter_mut().enumerate() {
                *v = f(nodes[j], nodes[k]);
            }
        });
        GridFunction { spec, values }
    }

    /// The coordinate function `p`.
    pub fn coordinate_p(spec: GridSpec) -> Self {
        GridFunction::from_fn(spec, |p, _| C64::new(p, 0.0))
    }

    /// The coordinate function `x`.
    pub fn coordinate_x(spec: GridSpec) -> Self {
        GridFunction::from_fn(spec, |_, x| C64::new(x, 0.0))
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.values[j * self.spec.n_points + k]
    }

    pub fn with_spec(&self, spec: GridSpec) -> Result<GridFunction, GridError> {
        if spec.n_points != self.spec.n_points {
            return Err(GridError::SpecMismatch(self.spec, spec));
        }
        Ok(GridFunction { spec, values: self.values.clone() })
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> GridFunction {
        GridFunction { spec: self.spec, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(C64, C64) -> C64) -> Result<GridFunction, GridError> {
        check_specs(self, other)?;
        Ok(GridFunction {
            spec: self.spec,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction, GridError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction, GridError> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction, GridError> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, s: C64) -> GridFunction {
        self.map(|v| v * s)
    }

    pub fn conj(&self) -> GridFunction {
        self.map(|v| v.conj())
    }

    /// `sqrt(sum |f|^2 dp dx)`.
    pub fn norm_l2(&self) -> f64 {
        let d = self.spec.delta();
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * d * d).sqrt()
    }

    /// `|| self - other ||_2 / || other ||_2`.
    pub fn rel_l2(&self, other: &GridFunction) -> Result<f64, GridError> {
        let diff = self.sub(other)?;
        Ok(diff.norm_l2() / other.norm_l2())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus on the outermost rows and columns relative to the global maximum.
    pub fn boundary_amplitude(&self) -> f64 {
        let n = self.spec.n_points;
        let mut edge = 0.0f64;
        for t in 0..n {
            for (j, k) in [(0, t), (n - 1, t), (t, 0), (t, n - 1)] {
                edge = edge.max(self.get(j, k).norm());
            }
        }
        let top = self.max_abs();
        if top == 0.0 {
            0.0
        } else {
            edge / top
        }
    }

    /// Rejects functions whose relative boundary amplitude exceeds `tol`.
    pub fn check_decay(&self, tol: f64) -> Result<(), GridError> {
        let b = self.boundary_amplitude();
        if b > tol {
            Err(GridError::DomainTooSmall(b))
        } else {
            Ok(())
        }
    }

    /// Plain quadrature `sum f dp dx`.
    pub fn integral(&self) -> C64 {
        let d = self.spec.delta();
        self.values.iter().sum::<C64>() * d * d
    }
}

pub(crate) fn check_specs(f: &GridFunction, g: &GridFunction) -> Result<(), GridError> {
    if f.spec != g.spec {
        return Err(GridError::SpecMismatch(f.spec, g.spec));
    }
    Ok(())
}

/// Pointwise evaluation of a one-dimensional PolyGaussian at the grid nodes.
pub fn sample(f: &PolyGaussian, spec: GridSpec) -> Result<GridFunction, GridError> {
    if f.dim() != spec.n() {
        return Err(GridError::DimensionMismatch(f.dim()));
    }
    Ok(GridFunction::from_fn(spec, |p, x| f.eval(&[p, x])))
}

/// `f(-p, -x)` by periodic index reflection.
pub fn parity(f: &GridFunction) -> GridFunction {
    let n = f.spec.n_points;
    let mut values = vec![C64::new(0.0, 0.0); f.spec.len()];
    for j in 0..n {
        for k in 0..n {
            values[j * n + k] = f.get((n - j) % n, (n - k) % n);
        }
    }
    GridFunction { spec: f.spec, values }
}

/// `conj(f(-p, -x))`.
pub fn involution_grid(f: &GridFunction) -> GridFunction {
    parity(f).conj()
}

/// `Tr[f] = (1/(4 pi)) sum f dp dx`.
pub fn trace_grid(f: &GridFunction) -> C64 {
    f.integral() / (4.0 * PI)
}

/// `(1/pi) sum conj(f) g dp dx`.
pub fn inner_grid(f: &GridFunction, g: &GridFunction) -> Result<C64, GridError> {
    check_specs(f, g)?;
    let d = f.spec.delta();
    let s: C64 = f.values.iter().zip(&g.values).map(|(a, b)| a.conj() * b).sum();
    Ok(s * d * d / PI)
}

/// Grid delta of unit mass at the origin node.
pub fn grid_delta(spec: GridSpec) -> GridFunction {
    let mut f = GridFunction::zeros(spec);
    let n = spec.n_points;
    let d = spec.delta();
    f.values[(n / 2) * n + n / 2] = C64::new(1.0 / (d * d), 0.0);
    f
}
