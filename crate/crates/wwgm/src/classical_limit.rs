//! Contraction to classical mechanics: the rescaled star product, Moyal to Poisson
//! convergence, contracted densities and Koopman-von Neumann dynamics.
//!
//! Frame `c` coordinates are `p_c = (sqrt(hbar)/k) p`, `x_c = (sqrt(hbar)/k) x`. The
//! star product written in them has deformation `d = hbar/k^2`, so `d = 1` at
//! `hbar = 2`, `k^2 = 2`. Limits are never taken literally: every limit statement is
//! a log-log slope fitted over a finite `k` sweep. Hamiltonians passed here are
//! read as `kappa_c(p_c, x_c)`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{self, DynamicsError, EvolutionConfig, Hamiltonian, Picture, Tracked, Trajectory};
use crate::gaussian_core::{coherent_wigner, poly_bopp_star_h, star_h, trace_analytic, GaussError, PhasePoint, Poly, PolyGaussian};
use crate::star_numeric::{d_p, d_x, sample, star_bopp_spectral_h, GridError, GridFunction, GridSpec};
use crate::tomita::Payload;
use crate::C64;

/// Tolerance on negative or imaginary samples of a density, relative to its peak.
pub const DENSITY_TOL: f64 = 1e-9;
/// Largest time step accepted by the factorization check.
pub const FACTORIZATION_T_MAX: f64 = 0.1;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("invalid contraction parameters: {0}")]
    InvalidParams(String),
    #[error("k sweep needs at least two ascending values, got {0}")]
    EmptyKList(usize),
    #[error("density is negative (relative minimum {0:.3e})")]
    NegativeDensity(f64),
    #[error("density is not real (relative imaginary part {0:.3e})")]
    NonRealDensity(f64),
    #[error("state or characteristic leaves the domain (measure {0:.3e})")]
    DomainTooSmall(f64),
    #[error("factorization check needs t <= {FACTORIZATION_T_MAX}, got {0}")]
    TTooLarge(f64),
    #[error("operands mix analytic and grid payloads")]
    MixedRepresentation,
    #[error(transparent)]
    Dynamics(DynamicsError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
}

impl From<DynamicsError> for ClassicalError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::DomainTooSmall(b) => ClassicalError::DomainTooSmall(b),
            other => ClassicalError::Dynamics(other),
        }
    }
}

/// `hbar` carries physical units, `k >= 1` is the contraction parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionParams {
    hbar: f64,
    k: f64,
}

impl ContractionParams {
    pub fn new(hbar: f64, k: f64) -> Result<Self, ClassicalError> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(ClassicalError::InvalidParams(format!("hbar = {hbar} must be positive")));
        }
        if !(k >= 1.0) || !k.is_finite() {
            return Err(ClassicalError::InvalidParams(format!("k = {k} must be at least 1")));
        }
        Ok(ContractionParams { hbar, k })
    }

    /// `hbar = 2`, `k^2 = 2`: frame `c` coincides with the base frame.
    pub fn base() -> Self {
        ContractionParams { hbar: 2.0, k: SQRT_2 }
    }

    /// `hbar = 1` at the given `k`.
    pub fn classical(k: f64) -> Result<Self, ClassicalError> {
        Self::new(1.0, k)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `hbar / k^2`.
    pub fn deformation(&self) -> f64 {
        self.hbar / (self.k * self.k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// `(p, x)`.
    Base,
    /// `p_c = (sqrt(hbar)/k) p`.
    C,
    /// `p_breve = sqrt(hbar) k p`.
    Breve,
    /// `p_s = (2 sqrt(hbar)/k) p`.
    S,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateFrame {
    pub frame: Frame,
    pub params: ContractionParams,
}

impl CoordinateFrame {
    pub fn new(frame: Frame, params: ContractionParams) -> Self {
        CoordinateFrame { frame, params }
    }

    /// `lambda` with `z_frame = lambda z_base`.
    pub fn scale(&self) -> f64 {
        let s = self.params.hbar.sqrt();
        let k = self.params.k;
        match self.frame {
            Frame::Base => 1.0,
            Frame::C => s / k,
            Frame::Breve => s * k,
            Frame::S => 2.0 * s / k,
        }
    }
}

/// The same function written in new coordinates: samples are kept, nodes are relabeled.
pub fn convert_grid(f: &GridFunction, from: &CoordinateFrame, to: &CoordinateFrame) -> Result<GridFunction, ClassicalError> {
    Ok(f.with_spec(f.spec().relabeled(to.scale() / from.scale()))?)
}

/// `f_to(z) = f_from((lambda_from / lambda_to) z)`.
pub fn convert_analytic(f: &PolyGaussian, from: &CoordinateFrame, to: &CoordinateFrame) -> PolyGaussian {
    f.rescale_args(from.scale() / to.scale())
}

/// `f *_c g` with deformation `hbar/k^2`: exact on analytic payloads, spectral Bopp shifts on grids.
pub fn star_c(f: &Payload, g: &Payload, params: &ContractionParams) -> Result<Payload, ClassicalError> {
    let d = params.deformation();
    match (f, g) {
        (Payload::Analytic(a), Payload::Analytic(b)) => Ok(Payload::Analytic(star_h(a, b, d)?)),
        (Payload::Grid(a), Payload::Grid(b)) => Ok(Payload::Grid(star_bopp_spectral_h(a, b, d)?)),
        _ => Err(ClassicalError::MixedRepresentation),
    }
}

/// `{f, g} = d_p f d_x g - d_x f d_p g`, summed over degrees of freedom.
pub fn poisson(f: &Payload, g: &Payload) -> Result<Payload, ClassicalError> {
    match (f, g) {
        (Payload::Analytic(a), Payload::Analytic(b)) => Ok(Payload::Analytic(poisson_analytic(a, b)?)),
        (Payload::Grid(a), Payload::Grid(b)) => {
            let lhs = d_p(a).mul(&d_x(b))?;
            Ok(Payload::Grid(lhs.sub(&d_x(a).mul(&d_p(b))?)?))
        }
        _ => Err(ClassicalError::MixedRepresentation),
    }
}

fn poisson_analytic(f: &PolyGaussian, g: &PolyGaussian) -> Result<PolyGaussian, GaussError> {
    let n = f.dim();
    let mut acc = f.mul(g)?.scale(C64::new(0.0, 0.0));
    for i in 0..n {
        let a = f.derivative(i).mul(&g.derivative(n + i))?;
        let b = f.derivative(n + i).mul(&g.derivative(i))?;
        acc = acc.add_same_gaussian(&a)?.add_same_gaussian(&b.scale(C64::new(-1.0, 0.0)))?;
    }
    Ok(acc)
}

/// Admissible range for a fitted log-log slope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeWindow {
    pub lo: f64,
    pub hi: f64,
}

impl SlopeWindow {
    pub fn contains(&self, slope: f64) -> bool {
        slope > self.lo && slope < self.hi
    }
}

/// Scaled Moyal bracket minus Poisson bracket for Gaussian pairs.
pub const BRACKET_WINDOW: SlopeWindow = SlopeWindow { lo: -4.4, hi: -3.6 };
/// Contracted star product minus pointwise product.
pub const STAR_WINDOW: SlopeWindow = SlopeWindow { lo: -2.2, hi: -1.8 };
/// Growth of the contracted Schrödinger right-hand side.
pub const SCHRODINGER_WINDOW: SlopeWindow = SlopeWindow { lo: 1.8, hi: 2.2 };

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub k: f64,
    pub value: f64,
    /// Least-squares slope over this row and all earlier ones.
    pub slope_so_far: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub label: String,
    pub rows: Vec<ConvergenceRow>,
    pub slope: Option<f64>,
}

impl ConvergenceTable {
    fn from_values(label: &str, ks: &[f64], values: Vec<f64>) -> Self {
        let rows = (0..ks.len())
            .map(|i| ConvergenceRow {
                k: ks[i],
                value: values[i],
                slope_so_far: if i == 0 { None } else { loglog_slope(&ks[..=i], &values[..=i]) },
            })
            .collect();
        ConvergenceTable { label: label.to_string(), rows, slope: loglog_slope(ks, &values) }
    }

    pub fn within(&self, window: SlopeWindow) -> bool {
        self.slope.is_some_and(|s| window.contains(s))
    }

    /// `k,error,fitted_slope_so_far` with an empty slope field where undefined.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,error,fitted_slope_so_far\n");
        for r in &self.rows {
            let slope = r.slope_so_far.map(|s| format!("{s:.12e}")).unwrap_or_default();
            out.push_str(&format!("{:.12e},{:.12e},{}\n", r.k, r.value, slope));
        }
        out
    }
}

/// Least-squares slope of `log v` against `log k`; `None` for fewer than two
/// points or a non-positive value.
pub fn loglog_slope(ks: &[f64], values: &[f64]) -> Option<f64> {
    if ks.len() < 2 || ks.len() != values.len() || values.iter().chain(ks).any(|&v| !(v > 0.0)) {
        return None;
    }
    let n = ks.len() as f64;
    let lx: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn check_klist(ks: &[f64]) -> Result<(), ClassicalError> {
    if ks.len() < 2 {
        return Err(ClassicalError::EmptyKList(ks.len()));
    }
    if ks.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(ClassicalError::InvalidParams(format!("k sweep {ks:?} is not ascending")));
    }
    Ok(())
}

/// Runs `f` for every `k` in parallel; results keep the order of `ks`.
fn sweep(ks: &[f64], hbar: f64, f: impl Fn(&ContractionParams) -> Result<f64, ClassicalError> + Sync) -> Result<Vec<f64>, ClassicalError> {
    check_klist(ks)?;
    ks.par_iter().map(|&k| f(&ContractionParams::new(hbar, k)?)).collect()
}

/// `(k^2/2i hbar) {f, g}_{*c}` sampled on `spec`; each star product is exact.
pub fn scaled_bracket(f: &PolyGaussian, g: &PolyGaussian, params: &ContractionParams, spec: GridSpec) -> Result<GridFunction, ClassicalError> {
    let d = params.deformation();
    let fg = sample(&star_h(f, g, d)?, spec)?;
    let gf = sample(&star_h(g, f, d)?, spec)?;
    Ok(fg.sub(&gf)?.scale(C64::new(0.0, -0.5 / d)))
}

/// Relative L2 distance between `(k^2/2i hbar){f, g}_{*c}` and its limit `{g, f}` over a `k` sweep.
pub fn bracket_limit_check(
    f: &PolyGaussian,
    g: &PolyGaussian,
    k_list: &[f64],
    hbar: f64,
    spec: GridSpec,
) -> Result<ConvergenceTable, ClassicalError> {
    let limit = sample(&poisson_analytic(g, f)?, spec)?;
    let errors = sweep(k_list, hbar, |params| Ok(scaled_bracket(f, g, params, spec)?.rel_l2(&limit)?))?;
    Ok(ConvergenceTable::from_values("bracket", k_list, errors))
}

/// Relative L2 distance between `f *_c g` and `f g` over a `k` sweep.
pub fn star_limit_check(f: &PolyGaussian, g: &PolyGaussian, k_list: &[f64], hbar: f64, spec: GridSpec) -> Result<ConvergenceTable, ClassicalError> {
    let pointwise = sample(&f.mul(g)?, spec)?;
    let errors = sweep(k_list, hbar, |params| Ok(sample(&star_h(f, g, params.deformation())?, spec)?.rel_l2(&pointwise)?))?;
    Ok(ConvergenceTable::from_values("star", k_list, errors))
}

/// L2 norm of the contracted Schrödinger right-hand side `(k^2/2) kappa *_c phi` over a `k` sweep.
pub fn schrodinger_divergence(
    h: &Hamiltonian,
    phi: &PolyGaussian,
    k_list: &[f64],
    hbar: f64,
    spec: GridSpec,
) -> Result<ConvergenceTable, ClassicalError> {
    let kappa = h.kappa();
    let norms = sweep(k_list, hbar, |params| {
        let k2 = params.k * params.k;
        let rhs = poly_bopp_star_h(&kappa, phi, params.deformation())?.scale(C64::new(0.5 * k2, 0.0));
        Ok(sample(&rhs, spec)?.norm_l2())
    })?;
    Ok(ConvergenceTable::from_values("schrodinger", k_list, norms))
}

/// `rho_a(p_c, x_c) = 2^n exp[-(k^2/2 hbar)((p_c - 2 p_a)^2 + (x_c - 2 x_a)^2)]`, `a` in frame `c`.
pub fn contracted_wigner(a: &PhasePoint, params: &ContractionParams) -> PolyGaussian {
    let s = params.k / params.hbar.sqrt();
    let scaled = PhasePoint::new(a.p().iter().map(|v| v * s).collect(), a.x().iter().map(|v| v * s).collect())
        .expect("finite center");
    coherent_wigner(&scaled).rescale_args(s)
}

/// Variance of the marginal of a normalizable density along coordinate `axis`.
pub fn marginal_variance(rho: &PolyGaussian, axis: usize) -> Result<f64, ClassicalError> {
    let m = 2 * rho.dim();
    let moment = |e: u32| -> Result<f64, ClassicalError> {
        let mut exps = vec![0; m];
        exps[axis] = e;
        let w = PolyGaussian::polynomial(rho.dim(), Poly::monomial(exps, C64::new(1.0, 0.0)))?;
        Ok(trace_analytic(&w.mul(rho)?)?.re)
    };
    let (m0, m1, m2) = (moment(0)?, moment(1)?, moment(2)?);
    Ok(m2 / m0 - (m1 / m0).powi(2))
}

/// A classical density with the normalization it carried before the numeric rescale.
#[derive(Clone, Debug)]
pub struct RenormalizedDensity {
    pub rho: GridFunction,
    /// `(1/(2 pi hbar)^n) int k^{2n} rho`, which is `2^n` for a contracted coherent density.
    pub formal_norm: f64,
}

/// `k^{2n} rho`, then rescaled so that `(1/(2 pi hbar)^n) int rho_c = 1`.
pub fn density_renormalize(rho: &GridFunction, params: &ContractionParams) -> Result<RenormalizedDensity, ClassicalError> {
    let peak = rho.max_abs();
    if peak == 0.0 {
        return Err(ClassicalError::InvalidParams("density vanishes identically".into()));
    }
    let imag = rho.values().iter().map(|v| v.im.abs()).fold(0.0, f64::max) / peak;
    if imag > DENSITY_TOL {
        return Err(ClassicalError::NonRealDensity(imag));
    }
    let low = rho.values().iter().map(|v| v.re).fold(f64::INFINITY, f64::min) / peak;
    if low < -DENSITY_TOL {
        return Err(ClassicalError::NegativeDensity(low));
    }
    let k2n = params.k.powi(2 * rho.spec().n() as i32);
    let scaled = rho.map(|v| C64::new(v.re * k2n, 0.0));
    let formal_norm = classical_norm(&scaled, params.hbar);
    Ok(RenormalizedDensity { rho: scaled.scale(C64::new(1.0 / formal_norm, 0.0)), formal_norm })
}

/// `(1/(2 pi hbar)) sum f dp dx`.
fn classical_norm(f: &GridFunction, hbar: f64) -> f64 {
    f.integral().re / (2.0 * PI * hbar)
}

/// `theta(alpha) = -1/2 (p . d_p alpha + x . d_x alpha)`.
pub fn theta(alpha: &PolyGaussian) -> Result<PolyGaussian, ClassicalError> {
    let n = alpha.dim();
    let mut acc = alpha.scale(C64::new(0.0, 0.0));
    for j in 0..2 * n {
        let z = PolyGaussian::polynomial(n, Poly::var(2 * n, j))?;
        acc = acc.add_same_gaussian(&z.mul(&alpha.derivative(j))?)?;
    }
    Ok(acc.scale(C64::new(-0.5, 0.0)))
}

/// `X_alpha f = d_p alpha d_x f - d_x alpha d_p f` with exact coefficients and spectral derivatives.
pub fn hamiltonian_field(alpha: &PolyGaussian, f: &GridFunction) -> Result<GridFunction, ClassicalError> {
    let spec = f.spec();
    let ap = sample(&alpha.derivative(0), spec)?;
    let ax = sample(&alpha.derivative(1), spec)?;
    Ok(ap.mul(&d_x(f))?.sub(&ax.mul(&d_p(f))?)?)
}

/// `G_alpha phi = (alpha + theta(alpha)) phi - i hbar X_alpha phi`.
pub fn koopman_generator(alpha: &PolyGaussian, phi: &GridFunction, hbar: f64) -> Result<GridFunction, ClassicalError> {
    let phase = sample(&alpha.add_same_gaussian(&theta(alpha)?)?, phi.spec())?;
    Ok(phase.mul(phi)?.sub(&hamiltonian_field(alpha, phi)?.scale(C64::new(0.0, hbar)))?)
}

/// Means and invariants under the classical measure `(1/(2 pi hbar)) dp dx`.
///
/// `trace` is the mass and `purity` the integral of the square, both conserved by Liouville flow.
fn classical_track(t: f64, rho: &GridFunction, hbar: f64) -> Tracked {
    let spec = rho.spec();
    let mass = classical_norm(rho, hbar);
    let weighted = |c: GridFunction| classical_norm(&c.mul(rho).expect("same grid"), hbar) / mass;
    Tracked {
        t,
        x: weighted(GridFunction::coordinate_x(spec)),
        p: weighted(GridFunction::coordinate_p(spec)),
        trace: mass,
        purity: classical_norm(&rho.mul(rho).expect("same grid"), hbar),
    }
}

fn modulus_sqr(phi: &GridFunction) -> GridFunction {
    phi.map(|v| C64::new(v.norm_sqr(), 0.0))
}

/// Koopman-Schrödinger evolution `d phi_c/dt = (-i/hbar) G_kappa phi_c` by spectral RK4.
///
/// Tracked values refer to `|phi_c|^2`.
pub fn koopman_evolve(phi_c: &GridFunction, h: &Hamiltonian, cfg: &EvolutionConfig, params: &ContractionParams) -> Result<Trajectory, ClassicalError> {
    dynamics::require(cfg, Picture::Schrodinger)?;
    let spec = phi_c.spec();
    let kappa = PolyGaussian::polynomial(1, h.kappa())?;
    let phase = sample(&kappa.add_same_gaussian(&theta(&kappa)?)?, spec)?.scale(C64::new(0.0, -1.0 / params.hbar));
    let kp = sample(&kappa.derivative(0), spec)?;
    let kx = sample(&kappa.derivative(1), spec)?;
    let rhs = |f: &GridFunction| {
        let transport = kp.mul(&d_x(f)).and_then(|a| a.sub(&kx.mul(&d_p(f))?)).expect("same grid");
        phase.mul(f).and_then(|a| a.sub(&transport)).expect("same grid")
    };
    let hbar = params.hbar;
    Ok(dynamics::integrate(phi_c, cfg, &rhs, &|t, f| Ok(classical_track(t, &modulus_sqr(f), hbar)))?)
}

/// Hamiltonian flow `Phi_t(p, x)` by RK4 with `steps` substeps (negative `t` runs backwards).
pub fn flow_point(h: &Hamiltonian, z: [f64; 2], t: f64, steps: usize) -> [f64; 2] {
    let f = |z: [f64; 2]| [h.force(z[1]), h.velocity(z[0])];
    let dt = t / steps.max(1) as f64;
    let mut z = z;
    for _ in 0..steps.max(1) {
        let k1 = f(z);
        let k2 = f([z[0] + 0.5 * dt * k1[0], z[1] + 0.5 * dt * k1[1]]);
        let k3 = f([z[0] + 0.5 * dt * k2[0], z[1] + 0.5 * dt * k2[1]]);
        let k4 = f([z[0] + dt * k3[0], z[1] + dt * k3[1]]);
        for i in 0..2 {
            z[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    z
}

/// `rho_0(Phi_{-t} z)` at every node: the classical Liouville solution by characteristics.
pub fn transported_density(rho0: &PolyGaussian, h: &Hamiltonian, t: f64, spec: GridSpec, steps: usize) -> GridFunction {
    GridFunction::from_fn(spec, |p, x| rho0.eval(&flow_point(h, [p, x], -t, steps)))
}

/// Four-point Lagrange stencil around `u` (in node units) clamped to `[0, n)`.
fn stencil(u: f64, n: usize) -> (usize, [f64; 4]) {
    let i0 = (u.floor() as i64 - 1).clamp(0, n as i64 - 4) as usize;
    let s = u - i0 as f64;
    let mut w = [1.0; 4];
    for (j, wj) in w.iter_mut().enumerate() {
        for m in 0..4 {
            if m != j {
                *wj *= (s - m as f64) / (j as f64 - m as f64);
            }
        }
    }
    (i0, w)
}

/// Bicubic evaluation of grid samples at arbitrary points.
///
/// A decaying function reads as zero off the grid; otherwise the edge stencil
/// extrapolates, which is exact for cubic polynomials, up to twice the half-width.
struct Interpolant<'a> {
    f: &'a GridFunction,
    decays: bool,
}

impl Interpolant<'_> {
    fn eval(&self, z: [f64; 2]) -> Result<C64, ClassicalError> {
        let spec = self.f.spec();
        let (n, l, delta) = (spec.n_points(), spec.half_width(), spec.delta());
        let reach = z[0].abs().max(z[1].abs()) / l;
        if reach >= 1.0 - 0.5 / n as f64 {
            if self.decays {
                return Ok(C64::new(0.0, 0.0));
            }
            if reach > 2.0 {
                return Err(ClassicalError::DomainTooSmall(reach));
            }
        }
        let ((jp, wp), (kx, wx)) = (stencil((z[0] + l) / delta, n), stencil((z[1] + l) / delta, n));
        let mut acc = C64::new(0.0, 0.0);
        for (a, &u) in wp.iter().enumerate() {
            for (b, &v) in wx.iter().enumerate() {
                acc += self.f.get(jp + a, kx + b) * (u * v);
            }
        }
        Ok(acc)
    }
}

/// Koopman-Heisenberg evolution `alpha(z, t) = alpha_0(Phi_t z)` by backward characteristics.
///
/// The characteristic end points `Phi_t z` of all nodes advance by one RK4 step per `dt`
/// and the initial samples are interpolated bicubically at them, so interpolation error
/// does not accumulate and the step size is not limited by a CFL condition.
pub fn koopman_heisenberg(alpha: &GridFunction, h: &Hamiltonian, cfg: &EvolutionConfig, params: &ContractionParams) -> Result<Trajectory, ClassicalError> {
    dynamics::require(cfg, Picture::Heisenberg)?;
    let steps = cfg.steps()?;
    let spec = alpha.spec();
    let interp = Interpolant { f: alpha, decays: alpha.boundary_amplitude() <= dynamics::DECAY_TOL };
    let hbar = params.hbar;
    let mut traj = Trajectory { picture: Picture::Heisenberg, times: vec![0.0], snapshots: vec![alpha.clone()], tracked: vec![classical_track(0.0, alpha, hbar)] };
    let n = spec.n_points();
    let mut ends: Vec<[f64; 2]> = (0..n * n).map(|i| [spec.node(i / n), spec.node(i % n)]).collect();
    for step in 1..=steps {
        ends.par_iter_mut().for_each(|z| *z = flow_point(h, *z, cfg.dt, 1));
        if step % cfg.stride == 0 || step == steps {
            let t = step as f64 * cfg.dt;
            let values = ends.par_iter().map(|&z| interp.eval(z)).collect::<Result<Vec<_>, _>>()?;
            let f = GridFunction::new(spec, values)?;
            traj.times.push(t);
            traj.tracked.push(classical_track(t, &f, hbar));
            traj.snapshots.push(f);
        }
    }
    Ok(traj)
}

/// `[X_kappa, M_alpha] f`, to be compared with `{kappa, alpha} f`.
pub fn koopman_commutator(kappa: &PolyGaussian, alpha: &PolyGaussian, f: &GridFunction) -> Result<GridFunction, ClassicalError> {
    let a = sample(alpha, f.spec())?;
    Ok(hamiltonian_field(kappa, &a.mul(f)?)?.sub(&a.mul(&hamiltonian_field(kappa, f)?)?)?)
}

/// `{kappa, alpha}` as an exact phase-space function.
pub fn poisson_bracket(kappa: &PolyGaussian, alpha: &PolyGaussian) -> Result<PolyGaussian, ClassicalError> {
    Ok(poisson_analytic(kappa, alpha)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub k: f64,
    pub hbar: f64,
    pub t: f64,
    /// Relative L2 distance between the full and the factorized Heisenberg evolution.
    pub deviation: f64,
}

/// Heisenberg picture comparison of the full `U_*(t)` with its two-term truncation.
///
/// The full side integrates `d alpha/dt = (k^2/2i hbar){alpha, kappa}_{*c}` by RK4 with
/// spectral Bopp multipliers. In the truncation the phase `e^{-(ik^2 t/2 hbar) kappa}` is a
/// multiplication operator and cancels against its inverse, leaving `alpha_0(Phi_t z)`,
/// which is evaluated along accurately integrated characteristics.
pub fn factorization_check(
    h: &Hamiltonian,
    t: f64,
    params: &ContractionParams,
    alpha0: &PolyGaussian,
    spec: GridSpec,
    dt: f64,
) -> Result<FactorizationReport, ClassicalError> {
    if !(t >= 0.0) || t > FACTORIZATION_T_MAX {
        return Err(ClassicalError::TTooLarge(t));
    }
    let report = |deviation| FactorizationReport { k: params.k, hbar: params.hbar, t, deviation };
    if t == 0.0 {
        return Ok(report(0.0));
    }
    let d = params.deformation();
    let a0 = sample(alpha0, spec)?;
    let cfg = EvolutionConfig::new(Picture::Heisenberg, t, dt);
    let rhs = |f: &GridFunction| dynamics::liouville_rhs_deformed(h, f, d).scale(C64::new(-1.0, 0.0));
    let hbar = params.hbar;
    let full = dynamics::integrate(&a0, &cfg, &rhs, &|s, f| Ok(classical_track(s, f, hbar)))?;
    let transported = GridFunction::from_fn(spec, |p, x| alpha0.eval(&flow_point(h, [p, x], t, 64)));
    Ok(report(full.last().rel_l2(&transported)?))
}

/// The affine Hamiltonian flow as a matrix acting on `(p, x)`, re-exported for callers
/// that compare characteristics against the exact quadratic solution.
pub fn quadratic_flow(h: &Hamiltonian, t: f64) -> Result<(DMatrix<f64>, [f64; 2]), ClassicalError> {
    Ok(dynamics::hamiltonian_flow(h, t)?)
}
