//! Moyal product by Bopp shifts of x-Fourier modes.
//!
//! With `f = sum_q f_q(p) e^{i k_q x}` the product of two modes is
//! `f_{q1}(p + k_{q2}) g_{q2}(p - k_{q1}) e^{i(k_{q1} + k_{q2}) x}`; the p shifts
//! are applied as phases on the p-Fourier coefficients.

use rayon::prelude::*;

use super::spectral::{fft_cols, fft_rows, transpose, AxisFft};
use super::{check_specs, GridError, GridFunction};
use crate::C64;

/// `hat[q][r]`: coefficient of x-mode `q` and p-mode `r`, normalized by `N^2`.
fn mode_table(f: &GridFunction, plan: &AxisFft) -> Vec<C64> {
    let n = f.spec().n_points();
    let mut w = f.values().to_vec();
    fft_rows(&mut w, &plan.forward);
    fft_cols(&mut w, n, &plan.forward);
    let norm = 1.0 / (n * n) as f64;
    transpose(&w, n).into_iter().map(|z| z * norm).collect()
}

/// Independent evaluation of `f * g` through per-mode shifts.
pub fn star_bopp_spectral(f: &GridFunction, g: &GridFunction) -> Result<GridFunction, GridError> {
    star_bopp_spectral_h(f, g, 1.0)
}

/// Moyal product with deformation `h` on any grid: the shifts become `h k`.
pub fn star_bopp_spectral_h(f: &GridFunction, g: &GridFunction, h: f64) -> Result<GridFunction, GridError> {
    check_specs(f, g)?;
    if !(h > 0.0) || !h.is_finite() {
        return Err(GridError::InvalidSpec(format!("deformation {h} must be positive")));
    }
    let spec = f.spec();
    let n = spec.n_points();
    let plan = AxisFft::new(n);
    let f_hat = mode_table(f, &plan);
    let g_hat = mode_table(g, &plan);
    let kappa: Vec<f64> = (0..n).map(|q| spec.wavenumber_full(q)).collect();
    // shift[q][r] = e^{i h k_r k_q}
    let mut shift = Vec::with_capacity(n * n);
    for &kq in &kappa {
        for &kr in &kappa {
            shift.push(C64::new(0.0, h * kr * kq).exp());
        }
    }
    let scratch_len = plan.inverse.get_inplace_scratch_len();

    // modes[s][j] = R_s(p_j)
    let mut modes = vec![C64::new(0.0, 0.0); n * n];
    modes.par_chunks_mut(n).enumerate().for_each_init(
        || (vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); scratch_len]),
        |(u, v, scratch), (s, acc)| {
            for q1 in 0..n {
                let q2 = (s + n - q1) % n;
                for r in 0..n {
                    u[r] = f_hat[q1 * n + r] * shift[q2 * n + r];
                    v[r] = g_hat[q2 * n + r] * shift[q1 * n + r].conj();
                }
                plan.inverse.process_with_scratch(u, scratch);
                plan.inverse.process_with_scratch(v, scratch);
                for ((a, ui), vi) in acc.iter_mut().zip(u.iter()).zip(v.iter()) {
                    *a += ui * vi;
                }
            }
        },
    );
    let mut out = transpose(&modes, n);
    fft_rows(&mut out, &plan.inverse);
    Ok(GridFunction::from_vec(spec, out))
}
