//! Discrete symplectic Fourier transform and spectral multipliers.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use rustfft::{Fft, FftPlanner};

use super::GridFunction;
use crate::C64;

pub(crate) struct AxisFft {
    pub forward: Arc<dyn Fft<f64>>,
    pub inverse: Arc<dyn Fft<f64>>,
}

impl AxisFft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        AxisFft { forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }
}

pub(crate) fn transpose(values: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            out[k * n + j] = values[j * n + k];
        }
    }
    out
}

/// Unnormalized transform of every row (the x axis).
pub(crate) fn fft_rows(values: &mut [C64], plan: &Arc<dyn Fft<f64>>) {
    plan.process(values);
}

/// Unnormalized transform of every column (the p axis).
pub(crate) fn fft_cols(values: &mut [C64], n: usize, plan: &Arc<dyn Fft<f64>>) {
    let mut t = transpose(values, n);
    plan.process(&mut t);
    values.copy_from_slice(&transpose(&t, n));
}

/// `F[f](p,x) = (2 pi)^{-1} sum f(p',x') e^{i(p'x - x'p)} dp' dx'`.
///
/// Self-dual grids use an FFT; other grids use the dense kernel matrix.
pub fn sympl_fft(f: &GridFunction) -> GridFunction {
    if f.spec().is_self_dual() {
        sympl_fft_self_dual(f)
    } else {
        sympl_fft_dense(f)
    }
}

/// Dense evaluation `F = c (T^T f conj(T))^T` with `T_ab = e^{i g_a g_b}`.
pub fn sympl_fft_dense(f: &GridFunction) -> GridFunction {
    let spec = f.spec();
    let n = spec.n_points();
    let g = spec.nodes();
    let t = DMatrix::from_fn(n, n, |a, b| C64::new(0.0, g[a] * g[b]).exp());
    let f0 = DMatrix::from_row_slice(n, n, f.values());
    let gk = t.transpose() * f0;
    let h = gk * t.map(|z| z.conj());
    let c = spec.delta() * spec.delta() / (2.0 * PI);
    // h[(k, j)] is the value at (p_j, x_k); column-major storage of h is row-major over (j, k)
    let values = h.as_slice().iter().map(|&z| z * c).collect();
    GridFunction::from_vec(spec, values)
}

/// On `L^2 = pi N / 2` the kernel factors as `(-1)^{a+b} e^{2 pi i a b / N}`.
fn sympl_fft_self_dual(f: &GridFunction) -> GridFunction {
    let spec = f.spec();
    let n = spec.n_points();
    let plan = AxisFft::new(n);
    let sign = |a: usize| if a % 2 == 0 { 1.0 } else { -1.0 };
    let mut w: Vec<C64> = f.values().iter().enumerate().map(|(i, &v)| v * sign(i / n + i % n)).collect();
    fft_rows(&mut w, &plan.forward);
    fft_cols(&mut w, n, &plan.inverse);
    let scale = 1.0 / n as f64;
    // w[(k, j)] now holds H[k][j]; the output at (j, k) is (-1)^{j+k} H[k][j] / N
    let t = transpose(&w, n);
    let values = t.iter().enumerate().map(|(i, &v)| v * (sign(i / n + i % n) * scale)).collect();
    GridFunction::from_vec(spec, values)
}

/// Applies `m(p_j, kappa_x)` in the Fourier domain of the x axis.
pub fn x_multiplier(f: &GridFunction, m: impl Fn(f64, f64) -> C64) -> GridFunction {
    let spec = f.spec();
    let n = spec.n_points();
    let plan = AxisFft::new(n);
    let mut w = f.values().to_vec();
    fft_rows(&mut w, &plan.forward);
    let kappa: Vec<f64> = (0..n).map(|q| spec.wavenumber(q)).collect();
    for j in 0..n {
        let p = spec.node(j);
        for q in 0..n {
            w[j * n + q] *= m(p, kappa[q]) / n as f64;
        }
    }
    fft_rows(&mut w, &plan.inverse);
    GridFunction::from_vec(spec, w)
}

/// Applies `m(x_k, kappa_p)` in the Fourier domain of the p axis.
pub fn p_multiplier(f: &GridFunction, m: impl Fn(f64, f64) -> C64) -> GridFunction {
    let spec = f.spec();
    let n = spec.n_points();
    let plan = AxisFft::new(n);
    let mut w = transpose(f.values(), n);
    fft_rows(&mut w, &plan.forward);
    let kappa: Vec<f64> = (0..n).map(|q| spec.wavenumber(q)).collect();
    for k in 0..n {
        let x = spec.node(k);
        for q in 0..n {
            w[k * n + q] *= m(x, kappa[q]) / n as f64;
        }
    }
    fft_rows(&mut w, &plan.inverse);
    GridFunction::from_vec(spec, transpose(&w, n))
}

/// Spectral `d/dx`.
pub fn d_x(f: &GridFunction) -> GridFunction {
    x_multiplier(f, |_, k| C64::new(0.0, k))
}

/// Spectral `d/dp`.
pub fn d_p(f: &GridFunction) -> GridFunction {
    p_multiplier(f, |_, k| C64::new(0.0, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star_numeric::GridSpec;

    fn gauss(spec: GridSpec, p0: f64, x0: f64) -> GridFunction {
        GridFunction::from_fn(spec, |p, x| {
            C64::new(-0.5 * ((p - p0).powi(2) + (x - x0).powi(2)), 0.3 * p - 0.2 * x).exp()
        })
    }

    #[test]
    fn dense_and_fft_paths_agree() {
        let spec = GridSpec::self_dual(64).unwrap();
        let f = gauss(spec, 0.4, -0.7);
        let a = sympl_fft(&f);
        let b = sympl_fft_dense(&f);
        assert!(a.rel_l2(&b).unwrap() < 1e-12);
    }

    #[test]
    fn derivatives_of_gaussian() {
        let spec = GridSpec::new(128, 10.0).unwrap();
        let f = GridFunction::from_fn(spec, |p, x| C64::new(-0.5 * (p * p + x * x), 0.0).exp());
        let fx = GridFunction::from_fn(spec, |p, x| C64::new(-x, 0.0) * C64::new(-0.5 * (p * p + x * x), 0.0).exp());
        let fp = GridFunction::from_fn(spec, |p, x| C64::new(-p, 0.0) * C64::new(-0.5 * (p * p + x * x), 0.0).exp());
        assert!(d_x(&f).rel_l2(&fx).unwrap() < 1e-12);
        assert!(d_p(&f).rel_l2(&fp).unwrap() < 1e-12);
    }
}
