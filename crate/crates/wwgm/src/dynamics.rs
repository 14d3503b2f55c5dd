//! Time evolution in the Schrödinger, Liouville and Heisenberg pictures.
//!
//! With `kappa = p^2/(2m) + v(x)` the star products reduce to Bopp shifts,
//! `kappa * f = T(p - i d_x) f + v(x + i d_p) f`, applied exactly as Fourier
//! multipliers along one axis each. Equations of motion (`hbar = 2`):
//!
//! | picture      | equation                          |
//! |--------------|-----------------------------------|
//! | Schrödinger  | `d phi/dt = (1/2i) kappa * phi`   |
//! | Liouville    | `d rho/dt = (1/2i) {kappa, rho}_*`|
//! | Heisenberg   | `d a/dt = (1/2i) {a, kappa}_*`    |

use nalgebra::{DMatrix, Matrix3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian_core::{GaussError, Poly, PolyGaussian};
use crate::star_numeric::{d_p, d_x, inner_grid, p_multiplier, trace_grid, x_multiplier, GridError, GridFunction};
use crate::C64;

/// Highest supported potential degree.
pub const MAX_POTENTIAL_DEGREE: usize = 6;

/// Boundary amplitude above which a state is reported as truncated.
pub const DECAY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("invalid hamiltonian: {0}")]
    InvalidHamiltonian(String),
    #[error("invalid evolution config: {0}")]
    InvalidConfig(String),
    #[error("state reaches the domain boundary (relative amplitude {0:.3e})")]
    DomainTooSmall(f64),
    #[error("integration diverged at t = {0}; reduce dt or the grid extent")]
    Unstable(f64),
    #[error("hamiltonian is not quadratic")]
    NotQuadratic,
    #[error("operation does not apply to the {0:?} picture")]
    WrongPicture(Picture),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
}

/// `kappa(p, x) = p^2/(2m) + sum_k v_k x^k`; the kinetic term is stored as `1/m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonian {
    inv_mass: f64,
    potential: Vec<f64>,
}

impl Hamiltonian {
    /// `potential[k]` is the coefficient of `x^k`; trailing zeros are dropped.
    pub fn new(mass: f64, potential: Vec<f64>) -> Result<Self, DynamicsError> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(DynamicsError::InvalidHamiltonian(format!("mass must be positive, got {mass}")));
        }
        if potential.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::InvalidHamiltonian("non-finite potential coefficient".into()));
        }
        let mut potential = potential;
        while potential.last() == Some(&0.0) {
            potential.pop();
        }
        if potential.len() > MAX_POTENTIAL_DEGREE + 1 {
            return Err(DynamicsError::InvalidHamiltonian(format!(
                "potential degree {} exceeds {MAX_POTENTIAL_DEGREE}",
                potential.len() - 1
            )));
        }
        Ok(Hamiltonian { inv_mass: 1.0 / mass, potential })
    }

    /// `kappa = 0`.
    pub fn zero() -> Self {
        Hamiltonian { inv_mass: 0.0, potential: Vec::new() }
    }

    pub fn free(mass: f64) -> Result<Self, DynamicsError> {
        Hamiltonian::new(mass, Vec::new())
    }

    /// `v(x) = m omega^2 x^2 / 2`.
    pub fn harmonic(mass: f64, omega: f64) -> Result<Self, DynamicsError> {
        Hamiltonian::new(mass, vec![0.0, 0.0, 0.5 * mass * omega * omega])
    }

    /// Infinite for the zero Hamiltonian.
    pub fn mass(&self) -> f64 {
        1.0 / self.inv_mass
    }

    pub fn inv_mass(&self) -> f64 {
        self.inv_mass
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn potential_degree(&self) -> usize {
        self.potential.len().saturating_sub(1)
    }

    pub fn is_quadratic(&self) -> bool {
        self.potential.len() <= 3
    }

    pub fn kinetic_at(&self, p: C64) -> C64 {
        p * p * (0.5 * self.inv_mass)
    }

    pub fn potential_at(&self, x: C64) -> C64 {
        self.potential.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// `dx/dt = d kappa / dp`.
    pub fn velocity(&self, p: f64) -> f64 {
        p * self.inv_mass
    }

    /// `dp/dt = -d kappa / dx`.
    pub fn force(&self, x: f64) -> f64 {
        -self.potential.iter().enumerate().skip(1).rev().fold(0.0, |acc, (e, &c)| acc * x + e as f64 * c)
    }

    /// `kappa` as a polynomial in `(p, x)`.
    pub fn kappa(&self) -> Poly {
        let mut k = Poly::monomial(vec![2, 0], C64::new(0.5 * self.inv_mass, 0.0));
        for (e, &c) in self.potential.iter().enumerate() {
            k.add_term(vec![0, e as u32], C64::new(c, 0.0));
        }
        k
    }

    /// `d^n v / dx^n` as a polynomial in `(p, x)`.
    fn potential_derivative(&self, n: u32) -> Poly {
        let mut v = Poly::zero(2);
        for (e, &c) in self.potential.iter().enumerate() {
            v.add_term(vec![0, e as u32], C64::new(c, 0.0));
        }
        v.derivative_multi(&[0, n])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    Schrodinger,
    Liouville,
    Heisenberg,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    #[default]
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub t_end: f64,
    pub dt: f64,
    pub scheme: Scheme,
    pub picture: Picture,
    /// Snapshot every `stride` steps; first and last are always kept.
    pub stride: usize,
}

impl EvolutionConfig {
    pub const DEFAULT_DT: f64 = 1e-3;

    pub fn new(picture: Picture, t_end: f64, dt: f64) -> Self {
        EvolutionConfig { t_end, dt, scheme: Scheme::Rk4, picture, stride: usize::MAX }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    /// Number of fixed steps; `t_end` must be an integer multiple of `dt`.
    pub fn steps(&self) -> Result<usize, DynamicsError> {
        if !(self.dt > 0.0 && self.dt.is_finite() && self.t_end.is_finite()) {
            return Err(DynamicsError::InvalidConfig(format!("dt = {}, t_end = {}", self.dt, self.t_end)));
        }
        if self.t_end < self.dt {
            return Err(DynamicsError::InvalidConfig(format!("dt = {} exceeds t_end = {}", self.dt, self.t_end)));
        }
        if self.stride == 0 {
            return Err(DynamicsError::InvalidConfig("stride must be positive".into()));
        }
        let n = (self.t_end / self.dt).round();
        if ((n * self.dt - self.t_end) / self.t_end).abs() > 1e-9 {
            return Err(DynamicsError::InvalidConfig(format!("t_end = {} is not a multiple of dt = {}", self.t_end, self.dt)));
        }
        Ok(n as usize)
    }
}

/// Expectations recorded at each snapshot.
///
/// Schrödinger: `<X>`, `<P>` of the normalized state, `trace = <phi|phi>`, `purity = trace^2`.
/// Liouville and Heisenberg: `Tr[x f]`, `Tr[p f]`, `Tr[f]`, `Tr[f * f]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tracked {
    pub t: f64,
    pub x: f64,
    pub p: f64,
    pub trace: f64,
    pub purity: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub picture: Picture,
    pub times: Vec<f64>,
    pub snapshots: Vec<GridFunction>,
    pub tracked: Vec<Tracked>,
}

impl Trajectory {
    pub fn last(&self) -> &GridFunction {
        self.snapshots.last().expect("trajectory holds the initial state")
    }
}

/// `kappa * f`.
pub fn kappa_left(h: &Hamiltonian, f: &GridFunction) -> GridFunction {
    kappa_left_deformed(h, f, 1.0)
}

/// `kappa *_d f` for the Moyal product with deformation `d` (`d = 1` is the `hbar = 2` star).
pub fn kappa_left_deformed(h: &Hamiltonian, f: &GridFunction, d: f64) -> GridFunction {
    let t = x_multiplier(f, |p, k| h.kinetic_at(C64::new(p + d * k, 0.0)));
    with_potential(h, t, f, |x, k| h.potential_at(C64::new(x - d * k, 0.0)))
}

/// `t + v(x, kappa_p) f`, skipping the transform when there is no potential.
fn with_potential(h: &Hamiltonian, t: GridFunction, f: &GridFunction, v: impl Fn(f64, f64) -> C64) -> GridFunction {
    if h.potential.is_empty() {
        return t;
    }
    t.add(&p_multiplier(f, v)).expect("same grid")
}

/// `f * kappa`.
pub fn kappa_right(h: &Hamiltonian, f: &GridFunction) -> GridFunction {
    kappa_right_deformed(h, f, 1.0)
}

pub fn kappa_right_deformed(h: &Hamiltonian, f: &GridFunction, d: f64) -> GridFunction {
    let t = x_multiplier(f, |p, k| h.kinetic_at(C64::new(p - d * k, 0.0)));
    with_potential(h, t, f, |x, k| h.potential_at(C64::new(x + d * k, 0.0)))
}

/// `(1/2i) {kappa, f}_*` with one multiplier per axis.
pub fn liouville_rhs(h: &Hamiltonian, f: &GridFunction) -> GridFunction {
    liouville_rhs_deformed(h, f, 1.0)
}

/// `(1/2id) {kappa, f}_{*d}`; tends to the Poisson form `{f, kappa}` as `d -> 0`.
pub fn liouville_rhs_deformed(h: &Hamiltonian, f: &GridFunction, d: f64) -> GridFunction {
    let w = C64::new(0.0, -0.5 / d);
    let t = x_multiplier(f, |p, k| (h.kinetic_at(C64::new(p + d * k, 0.0)) - h.kinetic_at(C64::new(p - d * k, 0.0))) * w);
    with_potential(h, t, f, |x, k| (h.potential_at(C64::new(x - d * k, 0.0)) - h.potential_at(C64::new(x + d * k, 0.0))) * w)
}

fn schrodinger_rhs(h: &Hamiltonian, f: &GridFunction) -> GridFunction {
    kappa_left(h, f).scale(C64::new(0.0, -0.5))
}

fn heisenberg_rhs(h: &Hamiltonian, f: &GridFunction) -> GridFunction {
    liouville_rhs(h, f).scale(C64::new(-1.0, 0.0))
}

/// One RK4 step; `None` once the state is no longer finite.
fn rk4_step(f: &GridFunction, dt: f64, rhs: &dyn Fn(&GridFunction) -> GridFunction) -> Option<GridFunction> {
    let axpy = |a: &GridFunction, s: f64, b: &GridFunction| a.zip_with(b, |u, v| u + v * s).expect("same grid");
    let k1 = rhs(f);
    let k2 = rhs(&axpy(f, 0.5 * dt, &k1));
    let k3 = rhs(&axpy(f, 0.5 * dt, &k2));
    let k4 = rhs(&axpy(f, dt, &k3));
    let values = f
        .values()
        .iter()
        .zip(k1.values())
        .zip(k2.values())
        .zip(k3.values())
        .zip(k4.values())
        .map(|((((&y, &a), &b), &c), &d)| y + (a + b * 2.0 + c * 2.0 + d) * (dt / 6.0))
        .collect();
    GridFunction::new(f.spec(), values).ok()
}

fn track(picture: Picture, t: f64, f: &GridFunction) -> Result<Tracked, DynamicsError> {
    let spec = f.spec();
    match picture {
        Picture::Schrodinger => {
            let norm = inner_grid(f, f)?.re;
            let i = C64::new(0.0, 1.0);
            // x * f = (x + i d_p) f, p * f = (p - i d_x) f
            let xs = f.mul(&GridFunction::coordinate_x(spec))?.add(&d_p(f).scale(i))?;
            let ps = f.mul(&GridFunction::coordinate_p(spec))?.sub(&d_x(f).scale(i))?;
            Ok(Tracked {
                t,
                x: inner_grid(f, &xs)?.re / norm,
                p: inner_grid(f, &ps)?.re / norm,
                trace: norm,
                purity: norm * norm,
            })
        }
        Picture::Liouville | Picture::Heisenberg => Ok(Tracked {
            t,
            x: trace_grid(&f.mul(&GridFunction::coordinate_x(spec))?).re,
            p: trace_grid(&f.mul(&GridFunction::coordinate_p(spec))?).re,
            trace: trace_grid(f).re,
            purity: trace_grid(&f.mul(f)?).re,
        }),
    }
}

fn check_domain(f: &GridFunction) -> Result<(), DynamicsError> {
    let b = f.boundary_amplitude();
    if b > DECAY_TOL {
        return Err(DynamicsError::DomainTooSmall(b));
    }
    Ok(())
}

/// Fixed-step RK4 in the configured picture.
pub fn evolve(f0: &GridFunction, h: &Hamiltonian, cfg: &EvolutionConfig) -> Result<Trajectory, DynamicsError> {
    let rhs: Box<dyn Fn(&GridFunction) -> GridFunction + '_> = match cfg.picture {
        Picture::Schrodinger => Box::new(|f| schrodinger_rhs(h, f)),
        Picture::Liouville => Box::new(|f| liouville_rhs(h, f)),
        Picture::Heisenberg => Box::new(|f| heisenberg_rhs(h, f)),
    };
    integrate(f0, cfg, &*rhs, &|t, f| track(cfg.picture, t, f))
}

/// RK4 driver shared with the contracted dynamics: snapshots every `stride` steps
/// plus the final one, each checked for decay at the boundary.
pub(crate) fn integrate(
    f0: &GridFunction,
    cfg: &EvolutionConfig,
    rhs: &dyn Fn(&GridFunction) -> GridFunction,
    track: &dyn Fn(f64, &GridFunction) -> Result<Tracked, DynamicsError>,
) -> Result<Trajectory, DynamicsError> {
    let steps = cfg.steps()?;
    check_domain(f0)?;
    let mut traj = Trajectory { picture: cfg.picture, times: vec![0.0], snapshots: vec![f0.clone()], tracked: vec![track(0.0, f0)?] };
    let mut f = f0.clone();
    for step in 1..=steps {
        let t = step as f64 * cfg.dt;
        f = rk4_step(&f, cfg.dt, rhs).ok_or(DynamicsError::Unstable(t))?;
        if step % cfg.stride == 0 || step == steps {
            check_domain(&f)?;
            traj.times.push(t);
            traj.tracked.push(track(t, &f)?);
            traj.snapshots.push(f.clone());
        }
    }
    Ok(traj)
}

pub(crate) fn require(cfg: &EvolutionConfig, picture: Picture) -> Result<(), DynamicsError> {
    if cfg.picture != picture {
        return Err(DynamicsError::WrongPicture(cfg.picture));
    }
    Ok(())
}

pub fn schrodinger_evolve(phi0: &GridFunction, h: &Hamiltonian, cfg: &EvolutionConfig) -> Result<Trajectory, DynamicsError> {
    require(cfg, Picture::Schrodinger)?;
    evolve(phi0, h, cfg)
}

pub fn liouville_evolve(rho0: &GridFunction, h: &Hamiltonian, cfg: &EvolutionConfig) -> Result<Trajectory, DynamicsError> {
    require(cfg, Picture::Liouville)?;
    evolve(rho0, h, cfg)
}

pub fn heisenberg_evolve(alpha0: &GridFunction, h: &Hamiltonian, cfg: &EvolutionConfig) -> Result<Trajectory, DynamicsError> {
    require(cfg, Picture::Heisenberg)?;
    evolve(alpha0, h, cfg)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `(1/2i) {a, kappa}_* = sum_{n odd} i^{n-1}/n! [(d_x^n a) T^(n)(p) - (d_p^n a) v^(n)(x)]`, exact.
pub fn heisenberg_series(alpha: &PolyGaussian, h: &Hamiltonian) -> Result<PolyGaussian, DynamicsError> {
    if alpha.dim() != 1 {
        return Err(GaussError::DimensionMismatch(1, alpha.dim()).into());
    }
    let top = h.potential_degree().max(2) as u32;
    let mut acc = alpha.scale(C64::new(0.0, 0.0));
    for n in (1..=top).step_by(2) {
        let w = C64::new(0.0, 1.0).powu(n - 1) / factorial(n);
        let mut dx = alpha.clone();
        let mut dp = alpha.clone();
        for _ in 0..n {
            dx = dx.derivative(1);
            dp = dp.derivative(0);
        }
        if n == 1 {
            let t1 = PolyGaussian::polynomial(1, Poly::monomial(vec![1, 0], C64::new(h.inv_mass, 0.0)))?;
            acc = acc.add_same_gaussian(&dx.mul(&t1)?.scale(w))?;
        }
        let vn = h.potential_derivative(n);
        if !vn.is_empty() {
            let vn = PolyGaussian::polynomial(1, vn)?;
            acc = acc.add_same_gaussian(&dp.mul(&vn)?.scale(-w))?;
        }
    }
    Ok(acc)
}

/// Affine Hamiltonian flow `z(t) = M z(0) + s` of a quadratic `kappa`, `z = (p, x)`.
pub fn hamiltonian_flow(h: &Hamiltonian, t: f64) -> Result<(DMatrix<f64>, [f64; 2]), DynamicsError> {
    if !h.is_quadratic() {
        return Err(DynamicsError::NotQuadratic);
    }
    let c = |k: usize| h.potential.get(k).copied().unwrap_or(0.0);
    // dp/dt = -c1 - 2 c2 x, dx/dt = p/m
    #[rustfmt::skip]
    let gen = Matrix3::new(
        0.0, -2.0 * c(2), -c(1),
        h.inv_mass, 0.0, 0.0,
        0.0, 0.0, 0.0,
    );
    let e = (gen * t).exp();
    let m = DMatrix::from_row_slice(2, 2, &[e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]]);
    Ok((m, [e[(0, 2)], e[(1, 2)]]))
}

/// Closed-form evolution of a density (`rho(z) -> rho0(Phi_{-t} z)`) or an observable
/// (`a(z) -> a0(Phi_t z)`) under a quadratic Hamiltonian.
pub fn exact_quadratic_flow(
    state: &PolyGaussian,
    h: &Hamiltonian,
    t: f64,
    picture: Picture,
) -> Result<PolyGaussian, DynamicsError> {
    if state.dim() != 1 {
        return Err(GaussError::DimensionMismatch(1, state.dim()).into());
    }
    let (m, s) = match picture {
        Picture::Liouville => hamiltonian_flow(h, -t)?,
        Picture::Heisenberg => hamiltonian_flow(h, t)?,
        Picture::Schrodinger => return Err(DynamicsError::WrongPicture(picture)),
    };
    Ok(state.compose_affine(&m, &s))
}
