//! Closed-form calculus for polynomial-times-Gaussian phase-space functions.
//!
//! Variables are ordered `z = (p_1..p_n, x_1..x_n)` in units where the
//! Heisenberg commutator is `2i`. Measures per operation:
//!
//! | quantity        | measure                          |
//! |-----------------|----------------------------------|
//! | inner product   | `(1/pi^n) dp dx`                 |
//! | trace           | `(1/(2^n (2 pi)^n)) dp dx`       |
//! | Fourier, twisted convolution | `(1/(2 pi)^n) dp' dx'` |

mod form;
mod poly;
mod serial;

use std::f64::consts::{LN_2, PI};

use nalgebra::{DMatrix, DVector};
use num_traits::One;
use thiserror::Error;

pub use form::{sqrt_det_homotopy, GaussForm};
pub use poly::Poly;
pub use serial::{from_json, to_json};

use crate::C64;

/// Eigenvalue threshold for the integrability test on `Re A`.
pub const INTEGRABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaussError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("polynomial prefactor of degree {0} is not supported by the Gaussian star product")]
    UnsupportedDegree(u32),
    #[error("completion-of-squares matrix is singular")]
    SingularQuadratic,
    #[error("function is not integrable: Re A is not positive definite")]
    NotIntegrable,
    #[error("invalid phase point: {0}")]
    InvalidPoint(String),
    #[error("deformation parameter must be positive, got {0}")]
    InvalidDeformation(f64),
    #[error("malformed json: {0}")]
    Json(String),
    #[error("sum of PolyGaussians with different Gaussian factors")]
    DistinctGaussians,
}

/// Coherent-state label `(p_a, x_a)`: half the expectation values.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    p: Vec<f64>,
    x: Vec<f64>,
}

impl PhasePoint {
    pub fn new(p: Vec<f64>, x: Vec<f64>) -> Result<Self, GaussError> {
        if p.len() != x.len() || p.is_empty() {
            return Err(GaussError::InvalidPoint(format!("p has {} entries, x has {}", p.len(), x.len())));
        }
        if p.iter().chain(&x).any(|v| !v.is_finite()) {
            return Err(GaussError::InvalidPoint("non-finite coordinate".into()));
        }
        Ok(PhasePoint { p, x })
    }

    pub fn origin(n: usize) -> Self {
        PhasePoint { p: vec![0.0; n], x: vec![0.0; n] }
    }

    /// One-dimensional point `(p, x)`.
    pub fn d1(p: f64, x: f64) -> Self {
        PhasePoint { p: vec![p], x: vec![x] }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Concatenated `(p, x)`.
    pub fn z(&self) -> Vec<f64> {
        self.p.iter().chain(&self.x).copied().collect()
    }

    pub fn neg(&self) -> PhasePoint {
        PhasePoint { p: self.p.iter().map(|v| -v).collect(), x: self.x.iter().map(|v| -v).collect() }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.p.iter().chain(&self.x).map(|v| v * v).sum()
    }
}

/// `f(z) = P(z) exp(-1/2 z^T A z + b^T z + c)` with `z = (p, x)` of length `2 dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyGaussian {
    dim: usize,
    form: GaussForm,
}

impl PolyGaussian {
    pub fn new(dim: usize, poly: Poly, a: DMatrix<C64>, b: DVector<C64>, c: C64) -> Result<Self, GaussError> {
        let m = 2 * dim;
        if poly.nvars() != m || a.nrows() != m || a.ncols() != m || b.len() != m {
            return Err(GaussError::DimensionMismatch(m, poly.nvars().max(a.nrows()).max(b.len())));
        }
        Ok(PolyGaussian { dim, form: GaussForm::new(poly, a, b, c) })
    }

    pub(crate) fn from_form(dim: usize, form: GaussForm) -> Self {
        debug_assert_eq!(form.nvars(), 2 * dim);
        PolyGaussian { dim, form }
    }

    pub fn constant(dim: usize, c: C64) -> Self {
        PolyGaussian::from_form(dim, GaussForm::polynomial(Poly::constant(2 * dim, c)))
    }

    pub fn polynomial(dim: usize, poly: Poly) -> Result<Self, GaussError> {
        if poly.nvars() != 2 * dim {
            return Err(GaussError::DimensionMismatch(2 * dim, poly.nvars()));
        }
        Ok(PolyGaussian::from_form(dim, GaussForm::polynomial(poly)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &GaussForm {
        &self.form
    }

    pub fn poly(&self) -> &Poly {
        &self.form.poly
    }

    pub fn a(&self) -> &DMatrix<C64> {
        &self.form.a
    }

    pub fn b(&self) -> &DVector<C64> {
        &self.form.b
    }

    pub fn c(&self) -> C64 {
        self.form.c
    }

    /// True iff `Re A` is positive definite.
    pub fn integrable(&self) -> bool {
        self.form.re_positive_definite(INTEGRABILITY_TOL)
    }

    pub fn eval(&self, z: &[f64]) -> C64 {
        self.form.eval(z)
    }

    pub fn eval_at(&self, a: &PhasePoint) -> C64 {
        self.form.eval(&a.z())
    }

    pub fn conj(&self) -> PolyGaussian {
        PolyGaussian::from_form(self.dim, self.form.conj())
    }

    pub fn scale(&self, s: C64) -> PolyGaussian {
        PolyGaussian::from_form(self.dim, self.form.scale(s))
    }

    pub fn mul(&self, other: &PolyGaussian) -> Result<PolyGaussian, GaussError> {
        check_dims(self, other)?;
        Ok(PolyGaussian::from_form(self.dim, self.form.mul(&other.form)))
    }

    /// Derivative in coordinate `k` of `z = (p, x)`.
    pub fn derivative(&self, k: usize) -> PolyGaussian {
        PolyGaussian::from_form(self.dim, self.form.derivative(k))
    }

    /// Sum of two PolyGaussians sharing `A` and `b`; the constants are merged into the polynomial.
    pub fn add_same_gaussian(&self, other: &PolyGaussian) -> Result<PolyGaussian, GaussError> {
        check_dims(self, other)?;
        if self.form.a != other.form.a || self.form.b != other.form.b {
            return Err(GaussError::DistinctGaussians);
        }
        let poly = self.form.poly.add(&other.form.poly.scale((other.form.c - self.form.c).exp()));
        Ok(PolyGaussian::from_form(
            self.dim,
            GaussForm { poly, a: self.form.a.clone(), b: self.form.b.clone(), c: self.form.c },
        ))
    }

    /// `f(T y + s)`, `T` square of size `2 dim`.
    pub fn compose_affine(&self, t: &DMatrix<f64>, s: &[f64]) -> PolyGaussian {
        let tc = t.map(|v| C64::new(v, 0.0));
        let sc = DVector::from_iterator(s.len(), s.iter().map(|&v| C64::new(v, 0.0)));
        PolyGaussian::from_form(self.dim, self.form.compose_affine(&tc, &sc))
    }

    /// `f(lambda z)`.
    pub fn rescale_args(&self, lambda: f64) -> PolyGaussian {
        let m = 2 * self.dim;
        self.compose_affine(&(DMatrix::identity(m, m) * lambda), &vec![0.0; m])
    }

    /// Exact equality of all fields up to `tol` (entrywise modulus).
    pub fn approx_eq(&self, other: &PolyGaussian, tol: f64) -> bool {
        self.coef_distance(other) <= tol
    }

    /// Largest entrywise modulus of the difference of all fields; infinite across dimensions.
    pub fn coef_distance(&self, other: &PolyGaussian) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        let da = (&self.form.a - &other.form.a).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let db = (&self.form.b - &other.form.b).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let dc = (self.form.c - other.form.c).norm();
        let dp = self.form.poly.sub(&other.form.poly).max_abs_coeff();
        da.max(db).max(dc).max(dp)
    }

    /// Multiplies the polynomial into `exp(c)` when the prefactor is a nonzero constant.
    pub fn normalized(&self) -> PolyGaussian {
        let mut out = self.clone();
        if out.form.poly.is_constant() && !out.form.poly.is_empty() {
            let k = out.form.poly.constant_term();
            out.form.c += k.ln();
            out.form.poly = Poly::one(2 * self.dim);
        }
        out
    }
}

fn check_dims(f: &PolyGaussian, g: &PolyGaussian) -> Result<(), GaussError> {
    if f.dim != g.dim {
        return Err(GaussError::DimensionMismatch(f.dim, g.dim));
    }
    Ok(())
}

/// Convex combination of states with strictly positive weights summing to one.
#[derive(Clone, Debug)]
pub struct DensityMix<S> {
    terms: Vec<(f64, S)>,
}

impl<S> DensityMix<S> {
    pub fn new(terms: Vec<(f64, S)>) -> Result<Self, GaussError> {
        if terms.is_empty() {
            return Err(GaussError::InvalidPoint("empty mixture".into()));
        }
        if terms.iter().any(|(w, _)| !(*w > 0.0)) {
            return Err(GaussError::InvalidPoint("mixture weights must be positive".into()));
        }
        let total: f64 = terms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(GaussError::InvalidPoint(format!("mixture weights sum to {total}")));
        }
        Ok(DensityMix { terms })
    }

    pub fn terms(&self) -> &[(f64, S)] {
        &self.terms
    }
}

impl DensityMix<PolyGaussian> {
    /// `sum_m c_m f_m(z)`.
    pub fn eval(&self, z: &[f64]) -> C64 {
        self.terms.iter().map(|(w, f)| f.eval(z) * *w).sum()
    }
}

fn lin(v: &[f64], scale: f64) -> Vec<C64> {
    v.iter().map(|&t| C64::new(t * scale, 0.0)).collect()
}

/// `phi_a(p,x) = e^{i(p_a x - x_a p)} e^{-1/2[(p-p_a)^2 + (x-x_a)^2]}`.
pub fn coherent_wavefunction(a: &PhasePoint) -> PolyGaussian {
    let n = a.n();
    let mut b = Vec::with_capacity(2 * n);
    for i in 0..n {
        b.push(C64::new(a.p[i], -a.x[i]));
    }
    for i in 0..n {
        b.push(C64::new(a.x[i], a.p[i]));
    }
    let c = C64::new(-0.5 * a.norm_sqr(), 0.0);
    PolyGaussian::from_form(
        n,
        GaussForm::new(Poly::one(2 * n), DMatrix::identity(2 * n, 2 * n), DVector::from_vec(b), c),
    )
}

/// `rho_a(p,x) = 2^n e^{-1/2[(p-2p_a)^2 + (x-2x_a)^2]}`.
pub fn coherent_wigner(a: &PhasePoint) -> PolyGaussian {
    let n = a.n();
    let b = DVector::from_vec(lin(&a.z(), 2.0));
    let c = C64::new(n as f64 * LN_2 - 2.0 * a.norm_sqr(), 0.0);
    PolyGaussian::from_form(n, GaussForm::new(Poly::one(2 * n), DMatrix::identity(2 * n, 2 * n), b, c))
}

/// Off-diagonal Wigner function `rho_ab = 2^{2n} phi_b * conj(phi_a)` in closed form.
pub fn wigner_offdiag(a: &PhasePoint, b: &PhasePoint) -> Result<PolyGaussian, GaussError> {
    if a.n() != b.n() {
        return Err(GaussError::DimensionMismatch(a.n(), b.n()));
    }
    let n = a.n();
    let mut lin = Vec::with_capacity(2 * n);
    for i in 0..n {
        lin.push(C64::new(a.p[i] + b.p[i], a.x[i] - b.x[i]));
    }
    for i in 0..n {
        lin.push(C64::new(a.x[i] + b.x[i], b.p[i] - a.p[i]));
    }
    let mut phase = 0.0;
    let mut s2 = 0.0;
    for i in 0..n {
        phase += a.p[i] * b.x[i] - a.x[i] * b.p[i];
        s2 += (a.p[i] + b.p[i]).powi(2) + (a.x[i] + b.x[i]).powi(2);
    }
    let c = C64::new(n as f64 * LN_2 - 0.5 * s2, phase);
    Ok(PolyGaussian::from_form(
        n,
        GaussForm::new(Poly::one(2 * n), DMatrix::identity(2 * n, 2 * n), DVector::from_vec(lin), c),
    ))
}

/// Moyal product of two degree-0 PolyGaussians by exact completion of squares.
pub fn gauss_star(f: &PolyGaussian, g: &PolyGaussian) -> Result<PolyGaussian, GaussError> {
    gauss_star_h(f, g, 1.0)
}

/// Moyal product `exp(i h (<d_x d_p> - <d_p d_x>))`; `h = 1` is the `hbar = 2` star.
///
/// Integral form `(2 pi h)^{-2n} int f(z+u) g(z+v) e^{(i/h)(u_x v_p - u_p v_x)} du dv`.
pub fn gauss_star_h(f: &PolyGaussian, g: &PolyGaussian, h: f64) -> Result<PolyGaussian, GaussError> {
    check_dims(f, g)?;
    if !(h > 0.0) {
        return Err(GaussError::InvalidDeformation(h));
    }
    for q in [f, g] {
        let d = q.poly().degree();
        if d > 0 {
            return Err(GaussError::UnsupportedDegree(d));
        }
    }
    let n = f.dim;
    let m = 2 * n;
    // joint variables (z, u, v)
    let mut tf = DMatrix::<C64>::zeros(m, 3 * m);
    let mut tg = DMatrix::<C64>::zeros(m, 3 * m);
    for i in 0..m {
        tf[(i, i)] = C64::one();
        tf[(i, m + i)] = C64::one();
        tg[(i, i)] = C64::one();
        tg[(i, 2 * m + i)] = C64::one();
    }
    let zero = DVector::zeros(m);
    let mut joint = f.form.compose_affine(&tf, &zero).mul(&g.form.compose_affine(&tg, &zero));
    for i in 0..n {
        let (up, ux) = (m + i, m + n + i);
        let (vp, vx) = (2 * m + i, 2 * m + n + i);
        joint.add_bilinear_phase(ux, vp, 1.0 / h);
        joint.add_bilinear_phase(up, vx, -1.0 / h);
    }
    let aux: Vec<usize> = (m..3 * m).collect();
    let mut out = joint.integrate_out(&aux)?;
    out.c -= C64::new(m as f64 * (2.0 * PI * h).ln(), 0.0);
    Ok(PolyGaussian::from_form(n, out).normalized())
}

fn multi_indices(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for prefix in &out {
            for k in 0..=b {
                let mut v = prefix.clone();
                v.push(k);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Left or right Moyal product of a polynomial with a PolyGaussian via the finite Bopp series.
fn bopp_series(poly: &Poly, g: &PolyGaussian, h: f64, left: bool) -> PolyGaussian {
    let n = g.dim;
    let m = 2 * n;
    // left:  sum (ih)^j (-ih)^l / (j! l!) (d_x^j d_p^l P)(d_p^j d_x^l g)
    // right: sum (ih)^j (-ih)^l / (j! l!) (d_x^j d_p^l g)(d_p^j d_x^l P)
    let (jb, lb): (Vec<u32>, Vec<u32>) = if left {
        ((0..n).map(|i| poly.degree_in(n + i)).collect(), (0..n).map(|i| poly.degree_in(i)).collect())
    } else {
        ((0..n).map(|i| poly.degree_in(i)).collect(), (0..n).map(|i| poly.degree_in(n + i)).collect())
    };
    let mut acc = Poly::zero(m);
    let ih = C64::new(0.0, h);
    for j in multi_indices(&jb) {
        for l in multi_indices(&lb) {
            let mut dx_j_dp_l = vec![0u32; m];
            let mut dp_j_dx_l = vec![0u32; m];
            for i in 0..n {
                dx_j_dp_l[n + i] = j[i];
                dx_j_dp_l[i] = l[i];
                dp_j_dx_l[i] = j[i];
                dp_j_dx_l[n + i] = l[i];
            }
            let (poly_orders, g_orders) = if left { (&dx_j_dp_l, &dp_j_dx_l) } else { (&dp_j_dx_l, &dx_j_dp_l) };
            let dpoly = poly.derivative_multi(poly_orders);
            if dpoly.is_empty() {
                continue;
            }
            let jt: u32 = j.iter().sum();
            let lt: u32 = l.iter().sum();
            let denom: f64 = j.iter().chain(&l).map(|&k| factorial(k)).product();
            let coef = ih.powu(jt) * (-ih).powu(lt) / denom;
            let dg = g.form.derivative_multi(g_orders);
            acc = acc.add(&dpoly.mul(&dg.poly).scale(coef));
        }
    }
    PolyGaussian::from_form(n, GaussForm { poly: acc, a: g.form.a.clone(), b: g.form.b.clone(), c: g.form.c })
}

/// `P(p - i d_x, x + i d_p) g`: left Moyal multiplication by a polynomial.
pub fn poly_bopp_star(poly: &Poly, g: &PolyGaussian) -> Result<PolyGaussian, GaussError> {
    poly_bopp_star_h(poly, g, 1.0)
}

/// `g * P`: right Moyal multiplication, `P(p + i d_x, x - i d_p) g`.
pub fn poly_bopp_star_right(g: &PolyGaussian, poly: &Poly) -> Result<PolyGaussian, GaussError> {
    poly_bopp_star_right_h(g, poly, 1.0)
}

pub fn poly_bopp_star_h(poly: &Poly, g: &PolyGaussian, h: f64) -> Result<PolyGaussian, GaussError> {
    if poly.nvars() != 2 * g.dim {
        return Err(GaussError::DimensionMismatch(2 * g.dim, poly.nvars()));
    }
    Ok(bopp_series(poly, g, h, true))
}

pub fn poly_bopp_star_right_h(g: &PolyGaussian, poly: &Poly, h: f64) -> Result<PolyGaussian, GaussError> {
    if poly.nvars() != 2 * g.dim {
        return Err(GaussError::DimensionMismatch(2 * g.dim, poly.nvars()));
    }
    Ok(bopp_series(poly, g, h, false))
}

/// Moyal product dispatching on operand type: a pure polynomial on either side
/// uses the Bopp series, two degree-0 Gaussians use completion of squares.
pub fn star_h(f: &PolyGaussian, g: &PolyGaussian, h: f64) -> Result<PolyGaussian, GaussError> {
    check_dims(f, g)?;
    if f.form.is_pure_polynomial() {
        return poly_bopp_star_h(&f.form.poly, g, h);
    }
    if g.form.is_pure_polynomial() {
        return poly_bopp_star_right_h(f, &g.form.poly, h);
    }
    gauss_star_h(f, g, h)
}

pub fn star(f: &PolyGaussian, g: &PolyGaussian) -> Result<PolyGaussian, GaussError> {
    star_h(f, g, 1.0)
}

/// `F[f](p,x) = (2 pi)^{-n} int f(p',x') e^{i(p' x - x' p)} dp' dx'`.
pub fn symplectic_fourier_analytic(f: &PolyGaussian) -> Result<PolyGaussian, GaussError> {
    if !f.integrable() {
        return Err(GaussError::NotIntegrable);
    }
    let n = f.dim;
    let m = 2 * n;
    let mut t = DMatrix::<C64>::zeros(m, 2 * m);
    for i in 0..m {
        t[(i, m + i)] = C64::one();
    }
    let mut joint = f.form.compose_affine(&t, &DVector::zeros(m));
    for i in 0..n {
        let (p, x) = (i, n + i);
        let (pp, xp) = (m + i, m + n + i);
        joint.add_bilinear_phase(pp, x, 1.0);
        joint.add_bilinear_phase(xp, p, -1.0);
    }
    let aux: Vec<usize> = (m..2 * m).collect();
    let mut out = joint.integrate_out(&aux)?;
    out.c -= C64::new(n as f64 * (2.0 * PI).ln(), 0.0);
    Ok(PolyGaussian::from_form(n, out).normalized())
}

/// `f*(p,x) = conj(f(-p,-x))`.
pub fn involution_analytic(f: &PolyGaussian) -> PolyGaussian {
    let m = 2 * f.dim;
    f.compose_affine(&(-DMatrix::<f64>::identity(m, m)), &vec![0.0; m]).conj()
}

/// `Tr[f] = (1/(2^n (2 pi)^n)) int f dp dx`.
pub fn trace_analytic(f: &PolyGaussian) -> Result<C64, GaussError> {
    if !f.integrable() {
        return Err(GaussError::NotIntegrable);
    }
    let n = f.dim as f64;
    Ok(f.form.integrate_all()? / (2.0f64.powf(n) * (2.0 * PI).powf(n)))
}

/// `(1/pi^n) int conj(f) g dp dx`.
pub fn inner_product(f: &PolyGaussian, g: &PolyGaussian) -> Result<C64, GaussError> {
    let prod = f.conj().mul(g)?;
    if !prod.integrable() {
        return Err(GaussError::NotIntegrable);
    }
    Ok(prod.form.integrate_all()? / PI.powf(f.dim as f64))
}

/// Normalization of `phi_a` written in the doubled variables `(2p, 2x)`:
/// `(1/(2^n (2 pi)^n)) int |phi_a(z/2)|^2 dz`.
pub fn rescaled_normalization(a: &PhasePoint) -> Result<C64, GaussError> {
    let phi = coherent_wavefunction(a);
    let density = phi.conj().mul(&phi)?;
    trace_analytic(&density.rescale_args(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn vacuum_wavefunction_values() {
        let phi0 = coherent_wavefunction(&PhasePoint::origin(1));
        assert!(close(phi0.eval(&[0.3, -0.4]), C64::new((-0.5f64 * 0.25).exp(), 0.0), 1e-15));
        let phi = coherent_wavefunction(&PhasePoint::d1(1.0, 0.0));
        assert!(close(phi.eval(&[0.0, 0.0]), C64::new((-0.5f64).exp(), 0.0), 1e-15));
        let a = PhasePoint::d1(0.7, -1.1);
        assert!(close(coherent_wavefunction(&a).eval_at(&a), C64::one(), 1e-14));
    }

    #[test]
    fn wigner_offdiag_reduces_on_diagonal() {
        let a = PhasePoint::d1(0.4, -0.9);
        assert!(wigner_offdiag(&a, &a).unwrap().approx_eq(&coherent_wigner(&a), 1e-15));
    }

    #[test]
    fn x_star_vacuum_is_x_minus_ip() {
        let phi0 = coherent_wavefunction(&PhasePoint::origin(1));
        let x = Poly::var(2, 1);
        let r = poly_bopp_star(&x, &phi0).unwrap();
        for z in [[0.3, 0.5], [-1.0, 2.0]] {
            let want = C64::new(z[1], -z[0]) * phi0.eval(&z);
            assert!(close(r.eval(&z), want, 1e-14));
        }
    }

    #[test]
    fn unsupported_degree_is_rejected() {
        let phi0 = coherent_wavefunction(&PhasePoint::origin(1));
        let xphi = phi0.mul(&PolyGaussian::polynomial(1, Poly::var(2, 1)).unwrap()).unwrap();
        assert_eq!(gauss_star(&xphi, &phi0), Err(GaussError::UnsupportedDegree(1)));
    }

    #[test]
    fn fourier_needs_integrability() {
        let one = PolyGaussian::constant(1, C64::one());
        assert_eq!(symplectic_fourier_analytic(&one), Err(GaussError::NotIntegrable));
        assert_eq!(trace_analytic(&one), Err(GaussError::NotIntegrable));
    }

    #[test]
    fn dimension_checks() {
        let a = PhasePoint::origin(1);
        let b = PhasePoint::origin(2);
        assert!(matches!(wigner_offdiag(&a, &b), Err(GaussError::DimensionMismatch(1, 2))));
        assert!(PhasePoint::new(vec![1.0], vec![]).is_err());
    }
}
