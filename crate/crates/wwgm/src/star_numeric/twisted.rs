//! Twisted convolution on the periodic grid and the Moyal product built from it.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::spectral::{sympl_fft, AxisFft};
use super::{check_specs, GridError, GridFunction};
use crate::C64;

/// `E[j][b] = e^{-i x_b p_j}`.
fn phase_table(nodes: &[f64]) -> Vec<C64> {
    let n = nodes.len();
    let mut e = Vec::with_capacity(n * n);
    for &pj in nodes {
        for &xb in nodes {
            e.push(C64::new(0.0, -xb * pj).exp());
        }
    }
    e
}

/// `(f o g)(p,x) = (2 pi)^{-1} sum f(p',x') g(p-p', x-x') e^{i(p'x - x'p)} dp' dx'`.
///
/// Each output row is a sum over `p'` of cyclic row convolutions done by FFT;
/// rows are independent so the result does not depend on the thread count.
pub fn twisted_conv(f: &GridFunction, g: &GridFunction) -> Result<GridFunction, GridError> {
    check_specs(f, g)?;
    let spec = f.spec();
    let n = spec.n_points();
    let half = n / 2;
    let nodes = spec.nodes();
    let e = phase_table(&nodes);
    let plan = AxisFft::new(n);
    let mut g_hat = g.values().to_vec();
    plan.forward.process(&mut g_hat);
    let scale = spec.delta() * spec.delta() / (2.0 * PI * n as f64);
    let fv = f.values();
    let live: Vec<bool> = (0..n).map(|a| fv[a * n..(a + 1) * n].iter().any(|z| *z != C64::new(0.0, 0.0))).collect();

    let scratch_len = plan.forward.get_inplace_scratch_len().max(plan.inverse.get_inplace_scratch_len());

    let mut out = vec![C64::new(0.0, 0.0); n * n];
    out.par_chunks_mut(n).enumerate().for_each_init(
        || (vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); scratch_len]),
        |(u, scratch), (j, row)| {
            for a in (0..n).filter(|&a| live[a]) {
                let r = (j + n + half - a) % n;
                for b in 0..n {
                    u[b] = fv[a * n + b] * e[j * n + b];
                }
                plan.forward.process_with_scratch(u, scratch);
                for (ub, gb) in u.iter_mut().zip(&g_hat[r * n..(r + 1) * n]) {
                    *ub *= gb;
                }
                plan.inverse.process_with_scratch(u, scratch);
                for (k, o) in row.iter_mut().enumerate() {
                    *o += e[a * n + k].conj() * u[(k + half) % n];
                }
            }
            for o in row.iter_mut() {
                *o *= scale;
            }
        },
    );
    Ok(GridFunction::from_vec(spec, out))
}

/// Literal quadruple sum of the twisted convolution; O(N^4), for cross-checks.
pub fn twisted_conv_direct(f: &GridFunction, g: &GridFunction) -> Result<GridFunction, GridError> {
    check_specs(f, g)?;
    let spec = f.spec();
    let n = spec.n_points();
    let half = n / 2;
    let e = phase_table(&spec.nodes());
    let scale = spec.delta() * spec.delta() / (2.0 * PI);
    let (fv, gv) = (f.values(), g.values());
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for (k, o) in row.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..n {
                let r = (j + n + half - a) % n;
                let mut inner = C64::new(0.0, 0.0);
                for b in 0..n {
                    inner += fv[a * n + b] * e[j * n + b] * gv[r * n + (k + n + half - b) % n];
                }
                acc += e[a * n + k].conj() * inner;
            }
            *o = acc * scale;
        }
    });
    Ok(GridFunction::from_vec(spec, out))
}

/// `f * g = F[f] o g`.
pub fn star(f: &GridFunction, g: &GridFunction) -> Result<GridFunction, GridError> {
    check_specs(f, g)?;
    twisted_conv(&sympl_fft(f), g)
}

/// `f * g - g * f`.
pub fn moyal_bracket(f: &GridFunction, g: &GridFunction) -> Result<GridFunction, GridError> {
    star(f, g)?.sub(&star(g, f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star_numeric::GridSpec;

    #[test]
    fn fast_matches_direct() {
        let spec = GridSpec::self_dual(32).unwrap();
        let f = GridFunction::from_fn(spec, |p, x| C64::new(-0.5 * (p * p + x * x) + 0.3 * p, 0.4 * x).exp());
        let g = GridFunction::from_fn(spec, |p, x| C64::new(-0.4 * ((p - 1.0).powi(2) + x * x), -0.2 * p).exp());
        let fast = twisted_conv(&f, &g).unwrap();
        let direct = twisted_conv_direct(&f, &g).unwrap();
        assert!(fast.rel_l2(&direct).unwrap() < 1e-12);
    }
}
