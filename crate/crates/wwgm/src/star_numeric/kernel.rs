//! Coherent-state integral kernel `[alpha * phi](a) = pi^{-1} sum_b Tr[alpha rho_ab] phi(b)`.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{check_specs, GridError, GridFunction};
use crate::C64;

const IMAGES: i32 = 3;

/// Envelope `sum_m e^{-(t + 2Lm)^2/2}` periodized over the domain.
fn periodized_envelope(t: f64, period: f64) -> f64 {
    (-IMAGES..=IMAGES).map(|m| (-0.5 * (t + period * m as f64).powi(2)).exp()).sum()
}

/// Factor tables `T[s][d][i] = env(g_i - sigma_s) e^{i d delta g_i}` for index sums `s`
/// and index differences `d` (offset by `N - 1`).
fn factor_table(nodes: &[f64], half_width: f64, delta: f64) -> Vec<C64> {
    let n = nodes.len();
    let period = 2.0 * half_width;
    let width = 2 * n - 1;
    let mut t = vec![C64::new(0.0, 0.0); width * width * n];
    t.par_chunks_mut(width * n).enumerate().for_each(|(s, block)| {
        let sigma = -2.0 * half_width + s as f64 * delta;
        for d in 0..width {
            let shift = (d as f64 - (n - 1) as f64) * delta;
            for (i, &g) in nodes.iter().enumerate() {
                block[d * n + i] = C64::from_polar(periodized_envelope(g - sigma, period), shift * g);
            }
        }
    });
    t
}

/// Evaluates `alpha * phi` at every grid node through coherent-state kernels
/// `rho_ab` centered on grid nodes. Needs a self-dual grid so that the kernel
/// modulations are periodic over the domain.
pub fn kernel_apply(alpha: &GridFunction, phi: &GridFunction) -> Result<GridFunction, GridError> {
    check_specs(alpha, phi)?;
    let spec = alpha.spec();
    if !spec.is_self_dual() {
        return Err(GridError::InvalidSpec("kernel_apply needs L^2 = pi N / 2".into()));
    }
    let n = spec.n_points();
    let width = 2 * n - 1;
    let delta = spec.delta();
    let nodes = spec.nodes();
    let table = factor_table(&nodes, spec.half_width(), delta);
    let at = |s: usize, d: usize, i: usize| table[(s * width + d) * n + i];

    // v[j][sx][dp] = sum_k alpha[j][k] Q(x_k; sx, dp)
    let av = alpha.values();
    let mut v = vec![C64::new(0.0, 0.0); n * width * width];
    v.par_chunks_mut(width * width).enumerate().for_each(|(j, block)| {
        for sx in 0..width {
            for dp in 0..width {
                block[sx * width + dp] = (0..n).map(|k| av[j * n + k] * at(sx, dp, k)).sum();
            }
        }
    });

    // Tr[alpha rho_ab] = (delta^2 / 4 pi) 2 e^{i phase} sum_j P_j sum_k alpha Q_k
    let scale = 2.0 * delta * delta / (4.0 * PI) * delta * delta / PI;
    let off = n - 1;
    let pv = phi.values();
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(ja, row)| {
        for (ka, o) in row.iter_mut().enumerate() {
            let (ap, ax) = (nodes[ja], nodes[ka]);
            let mut acc = C64::new(0.0, 0.0);
            for jb in 0..n {
                for kb in 0..n {
                    let weight = pv[jb * n + kb];
                    if weight == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let (bp, bx) = (nodes[jb], nodes[kb]);
                    let (sp, sx) = (ja + jb, ka + kb);
                    let dx = off + ka - kb;
                    let dp = off + jb - ja;
                    let tr: C64 = (0..n).map(|j| at(sp, dx, j) * v[(j * width + sx) * width + dp]).sum();
                    acc += C64::from_polar(1.0, ap * bx - ax * bp) * tr * weight;
                }
            }
            *o = acc * scale;
        }
    });
    Ok(GridFunction::from_vec(spec, out))
}
