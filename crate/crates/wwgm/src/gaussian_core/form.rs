use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_traits::{One, Zero};

use super::poly::Poly;
use super::GaussError;
use crate::C64;

/// `P(y) exp(-1/2 y^T A y + b^T y + c)` over an arbitrary number of variables.
///
/// Working representation behind `PolyGaussian`; joint integrands for star
/// products and Fourier transforms live here with their auxiliary variables.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussForm {
    pub poly: Poly,
    pub a: DMatrix<C64>,
    pub b: DVector<C64>,
    pub c: C64,
}

impl GaussForm {
    pub fn new(poly: Poly, a: DMatrix<C64>, b: DVector<C64>, c: C64) -> Self {
        let mut f = GaussForm { poly, a, b, c };
        f.symmetrize();
        f
    }

    /// Pure polynomial (zero exponent).
    pub fn polynomial(poly: Poly) -> Self {
        let n = poly.nvars();
        GaussForm {
            poly,
            a: DMatrix::zeros(n, n),
            b: DVector::zeros(n),
            c: C64::zero(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.a.nrows()
    }

    pub fn is_pure_polynomial(&self) -> bool {
        self.a.iter().all(|z| z.is_zero()) && self.b.iter().all(|z| z.is_zero()) && self.c.is_zero()
    }

    fn symmetrize(&mut self) {
        let n = self.a.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let s = (self.a[(i, j)] + self.a[(j, i)]) * 0.5;
                self.a[(i, j)] = s;
                self.a[(j, i)] = s;
            }
        }
    }

    pub fn exponent(&self, z: &[f64]) -> C64 {
        let n = self.nvars();
        let mut q = C64::zero();
        for i in 0..n {
            let mut row = C64::zero();
            for j in 0..n {
                row += self.a[(i, j)] * z[j];
            }
            q += row * z[i];
        }
        let lin: C64 = (0..n).map(|i| self.b[i] * z[i]).sum();
        -0.5 * q + lin + self.c
    }

    pub fn eval(&self, z: &[f64]) -> C64 {
        self.poly.eval_real(z) * self.exponent(z).exp()
    }

    pub fn mul(&self, other: &GaussForm) -> GaussForm {
        GaussForm::new(
            self.poly.mul(&other.poly),
            &self.a + &other.a,
            &self.b + &other.b,
            self.c + other.c,
        )
    }

    pub fn scale(&self, s: C64) -> GaussForm {
        let mut out = self.clone();
        out.poly = out.poly.scale(s);
        out
    }

    pub fn conj(&self) -> GaussForm {
        GaussForm {
            poly: self.poly.conj(),
            a: self.a.map(|z| z.conj()),
            b: self.b.map(|z| z.conj()),
            c: self.c.conj(),
        }
    }

    /// `f(T y + s)` where `T` maps the new variables into the old ones.
    pub fn compose_affine(&self, t: &DMatrix<C64>, s: &DVector<C64>) -> GaussForm {
        let n_new = t.ncols();
        let a = t.transpose() * &self.a * t;
        let b = t.transpose() * (&self.b - &self.a * s);
        let c = self.c - 0.5 * (s.transpose() * &self.a * s)[0] + (self.b.transpose() * s)[0];
        let subs: Vec<Poly> = (0..t.nrows())
            .map(|i| {
                let coeffs: Vec<C64> = (0..n_new).map(|j| t[(i, j)]).collect();
                Poly::linear(&coeffs, s[i])
            })
            .collect();
        let poly = if self.poly.is_constant() {
            Poly::constant(n_new, self.poly.constant_term())
        } else {
            self.poly.substitute(&subs)
        };
        GaussForm::new(poly, a, b, c)
    }

    /// Adds the phase `exp(i coef y_j y_k)` to the exponent.
    pub fn add_bilinear_phase(&mut self, j: usize, k: usize, coef: f64) {
        let iz = C64::new(0.0, coef);
        if j == k {
            self.a[(j, j)] -= 2.0 * iz;
        } else {
            self.a[(j, k)] -= iz;
            self.a[(k, j)] -= iz;
        }
    }

    /// Partial derivative in variable `k`; the exponent is unchanged.
    pub fn derivative(&self, k: usize) -> GaussForm {
        let n = self.nvars();
        let coeffs: Vec<C64> = (0..n).map(|j| -self.a[(k, j)]).collect();
        let lin = Poly::linear(&coeffs, self.b[k]);
        let poly = self.poly.derivative(k).add(&self.poly.mul(&lin));
        GaussForm { poly, a: self.a.clone(), b: self.b.clone(), c: self.c }
    }

    pub fn derivative_multi(&self, orders: &[u32]) -> GaussForm {
        let mut out = self.clone();
        for (k, &o) in orders.iter().enumerate() {
            for _ in 0..o {
                out = out.derivative(k);
            }
        }
        out
    }

    /// Strict positive definiteness of `Re A` with eigenvalue threshold `tol`.
    pub fn re_positive_definite(&self, tol: f64) -> bool {
        let n = self.nvars();
        if n == 0 {
            return true;
        }
        let re = DMatrix::from_fn(n, n, |i, j| 0.5 * (self.a[(i, j)].re + self.a[(j, i)].re));
        SymmetricEigen::new(re).eigenvalues.iter().all(|&l| l > tol)
    }

    /// Integrates out the variables listed in `idx` exactly.
    ///
    /// Remaining variables keep their relative order. Polynomial prefactors are
    /// handled by shifting to the saddle point and taking Gaussian moments.
    pub fn integrate_out(&self, idx: &[usize]) -> Result<GaussForm, GaussError> {
        let n = self.nvars();
        let mut w: Vec<usize> = idx.to_vec();
        w.sort_unstable();
        w.dedup();
        let u: Vec<usize> = (0..n).filter(|i| !w.contains(i)).collect();
        let (m, nu) = (w.len(), u.len());

        let aww = DMatrix::from_fn(m, m, |i, j| self.a[(w[i], w[j])]);
        let awu = DMatrix::from_fn(m, nu, |i, j| self.a[(w[i], u[j])]);
        let auu = DMatrix::from_fn(nu, nu, |i, j| self.a[(u[i], u[j])]);
        let bw = DVector::from_fn(m, |i, _| self.b[w[i]]);
        let bu = DVector::from_fn(nu, |i, _| self.b[u[i]]);

        let inv = checked_inverse(&aww)?;
        let sqrt_det = sqrt_det_homotopy(&aww);

        let cross = awu.transpose() * &inv;
        let a_new = auu - &cross * &awu;
        let b_new = bu - &cross * &bw;
        let c_new = self.c + 0.5 * (bw.transpose() * &inv * &bw)[0]
            + C64::new(0.5 * m as f64 * (2.0 * PI).ln(), 0.0)
            - sqrt_det.ln();

        let poly = if self.poly.is_constant() {
            Poly::constant(nu, self.poly.constant_term())
        } else {
            // w = mu(u) + xi with mu(u) = inv (b_w - A_wu u)
            let nv = nu + m;
            let inv_bw = &inv * &bw;
            let inv_awu = &inv * &awu;
            let mut subs = vec![Poly::zero(nv); n];
            for (i, &ui) in u.iter().enumerate() {
                subs[ui] = Poly::var(nv, i);
            }
            for (j, &wj) in w.iter().enumerate() {
                let mut coeffs = vec![C64::zero(); nv];
                for l in 0..nu {
                    coeffs[l] = -inv_awu[(j, l)];
                }
                coeffs[nu + j] = C64::one();
                subs[wj] = Poly::linear(&coeffs, inv_bw[j]);
            }
            let shifted = self.poly.substitute(&subs);
            let mut moments = Moments::new(&inv);
            let mut out = Poly::zero(nu);
            for (e, &coef) in shifted.terms() {
                let mom = moments.get(&e[nu..]);
                if !mom.is_zero() {
                    out.add_term(e[..nu].to_vec(), coef * mom);
                }
            }
            out
        };
        Ok(GaussForm::new(poly, a_new, b_new, c_new))
    }

    /// Value of the full integral over every variable.
    pub fn integrate_all(&self) -> Result<C64, GaussError> {
        let all: Vec<usize> = (0..self.nvars()).collect();
        let r = self.integrate_out(&all)?;
        Ok(r.poly.constant_term() * r.c.exp())
    }
}

/// Isserlis moments `E[xi^alpha]` for a centered Gaussian with covariance `sigma`.
struct Moments<'a> {
    sigma: &'a DMatrix<C64>,
    memo: HashMap<Vec<u32>, C64>,
}

impl<'a> Moments<'a> {
    fn new(sigma: &'a DMatrix<C64>) -> Self {
        Moments { sigma, memo: HashMap::new() }
    }

    fn get(&mut self, alpha: &[u32]) -> C64 {
        let total: u32 = alpha.iter().sum();
        if total == 0 {
            return C64::one();
        }
        if total % 2 == 1 {
            return C64::zero();
        }
        if let Some(&v) = self.memo.get(alpha) {
            return v;
        }
        let i = alpha.iter().position(|&a| a > 0).unwrap();
        let mut rest = alpha.to_vec();
        rest[i] -= 1;
        let mut acc = C64::zero();
        for j in 0..rest.len() {
            if rest[j] == 0 {
                continue;
            }
            let mut r2 = rest.clone();
            r2[j] -= 1;
            acc += self.sigma[(i, j)] * rest[j] as f64 * self.get(&r2);
        }
        self.memo.insert(alpha.to_vec(), acc);
        acc
    }
}

fn checked_inverse(m: &DMatrix<C64>) -> Result<DMatrix<C64>, GaussError> {
    let n = m.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let lu = m.clone().lu();
    let det = lu.determinant();
    let scale: f64 = (0..n)
        .map(|i| m.row(i).iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE))
        .product();
    if !(det.norm() > 1e-13 * scale) {
        return Err(GaussError::SingularQuadratic);
    }
    lu.try_inverse().ok_or(GaussError::SingularQuadratic)
}

/// `sqrt(det M)` on the branch continuous along `(1-t) I + t M` from `t = 0`.
pub fn sqrt_det_homotopy(m: &DMatrix<C64>) -> C64 {
    let n = m.nrows();
    if n == 0 {
        return C64::one();
    }
    let id = DMatrix::<C64>::identity(n, n);
    let mut s = C64::one();
    let mut t = 0.0f64;
    let mut dt = 1.0 / 16.0;
    while t < 1.0 {
        let t1 = (t + dt).min(1.0);
        let path = &id * C64::new(1.0 - t1, 0.0) + m * C64::new(t1, 0.0);
        let r = path.determinant().sqrt();
        let (near, far) = if (r - s).norm() <= (-r - s).norm() { (r, -r) } else { (-r, r) };
        if (near - s).norm() > 0.25 * (far - s).norm() && dt > 1e-9 {
            dt *= 0.5;
            continue;
        }
        s = near;
        t = t1;
        dt = (dt * 2.0).min(1.0 / 16.0);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn one_dimensional_gaussian_integral() {
        // int exp(-a y^2 / 2 + b y) dy = sqrt(2 pi / a) exp(b^2 / 2a)
        let a = c(1.5, 0.7);
        let b = c(0.3, -0.2);
        let f = GaussForm::new(Poly::one(1), DMatrix::from_element(1, 1, a), DVector::from_element(1, b), C64::zero());
        let got = f.integrate_all().unwrap();
        let want = (2.0 * PI / a).sqrt() * (b * b / (2.0 * a)).exp();
        assert!((got - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn second_moment_of_standard_gaussian() {
        let mut f = GaussForm::new(
            Poly::var(1, 0).pow(2),
            DMatrix::from_element(1, 1, c(1.0, 0.0)),
            DVector::zeros(1),
            C64::zero(),
        );
        f.c = c(-0.5 * (2.0 * PI).ln(), 0.0);
        assert!((f.integrate_all().unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let mut g = f.clone();
        g.poly = Poly::var(1, 0).pow(4);
        assert!((g.integrate_all().unwrap() - c(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn partial_integration_matches_quadrature() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.2), c(0.3, -0.1), c(0.3, -0.1), c(2.0, 0.0)]);
        let b = DVector::from_row_slice(&[c(0.1, 0.4), c(-0.2, 0.0)]);
        let poly = Poly::var(2, 1).add(&Poly::var(2, 0).mul(&Poly::var(2, 1)));
        let f = GaussForm::new(poly, a, b, c(0.1, 0.0));
        let g = f.integrate_out(&[1]).unwrap();
        let u = 0.37;
        let h = 0.01;
        let quad: C64 = (-1200..=1200).map(|k| f.eval(&[u, k as f64 * h]) * h).sum();
        assert!((g.eval(&[u]) - quad).norm() < 1e-10);
    }

    #[test]
    fn homotopy_root_tracks_branch() {
        // arg det = 1.2 pi, so the principal root lands on the wrong sheet
        let z = C64::from_polar(1.0, 0.4 * PI);
        let m = DMatrix::from_diagonal(&DVector::from_element(3, z));
        let s = sqrt_det_homotopy(&m);
        assert!((s - C64::from_polar(1.0, 0.6 * PI)).norm() < 1e-12);
        assert!((s - m.determinant().sqrt()).norm() > 1.0);
    }
}
