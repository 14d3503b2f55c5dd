//! Invariant suites run by `wwgm verify`.

use std::f64::consts::PI;
use std::fmt::Display;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use wwgm::classical_limit::{
    bracket_limit_check, koopman_commutator, koopman_evolve, poisson_bracket, schrodinger_divergence, star_limit_check,
    transported_density, ContractionParams, SlopeWindow, BRACKET_WINDOW, SCHRODINGER_WINDOW, STAR_WINDOW,
};
use wwgm::dynamics::{evolve, exact_quadratic_flow, liouville_rhs, EvolutionConfig, Hamiltonian, Picture};
use wwgm::gaussian_core::{
    coherent_wavefunction, coherent_wigner, gauss_star, inner_product, symplectic_fourier_analytic, trace_analytic,
    wigner_offdiag, PhasePoint, Poly, PolyGaussian,
};
use wwgm::star_numeric::{
    inner_grid, kernel_apply, sample, star, sympl_fft, trace_grid, twisted_conv, GridFunction, GridSpec,
};
use wwgm::tomita::{gns_inner, j_conj, ket_inner, left_act, pure_density, right_act, Payload, SquareKet};
use wwgm::weyl_algebra::{verify_table, Status, TableId};
use wwgm::C64;

use crate::config::Suite;
use crate::rng::CounterRng;

/// Stream ids of the randomized checks.
pub const STREAM_ASSOCIATIVITY: u64 = 1;
pub const STREAM_CONJUGATION: u64 = 2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub value: f64,
    pub bound: String,
    pub pass: bool,
    pub detail: String,
}

struct Recorder<'a> {
    suite: Suite,
    out: &'a mut Vec<Check>,
}

impl Recorder<'_> {
    fn push(&mut self, name: &str, value: f64, bound: String, pass: bool, detail: String) {
        self.out.push(Check { suite: self.suite.name().into(), name: name.into(), value, bound, pass, detail });
    }

    fn below(&mut self, name: &str, tol: f64, value: Res) {
        match value {
            Ok(v) => self.push(name, v, format!("<= {tol:e}"), v <= tol, String::new()),
            Err(e) => self.push(name, f64::NAN, format!("<= {tol:e}"), false, e.to_string()),
        }
    }

    fn window<E: Display>(&mut self, name: &str, w: SlopeWindow, slope: Result<Option<f64>, E>) {
        let bound = format!("in ({}, {})", w.lo, w.hi);
        match slope {
            Ok(Some(s)) => self.push(name, s, bound, w.contains(s), String::new()),
            Ok(None) => self.push(name, f64::NAN, bound, false, "slope undefined".into()),
            Err(e) => self.push(name, f64::NAN, bound, false, e.to_string()),
        }
    }
}

type Res = Result<f64, String>;

fn s(f: &PolyGaussian, spec: GridSpec) -> Result<GridFunction, String> {
    sample(f, spec).map_err(|e| e.to_string())
}

fn e<T, E: Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn phi(p: f64, x: f64) -> PolyGaussian {
    coherent_wavefunction(&PhasePoint::d1(p, x))
}

fn rho(p: f64, x: f64) -> PolyGaussian {
    coherent_wigner(&PhasePoint::d1(p, x))
}

/// 25 centers on the integer lattice of `[-2, 2]^2`.
pub fn lattice() -> Vec<PhasePoint> {
    (0..25).map(|i| PhasePoint::d1(-2.0 + (i / 5) as f64, -2.0 + (i % 5) as f64)).collect()
}

fn max_over<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> Res) -> Res {
    items.into_iter().try_fold(0.0, |acc: f64, t| Ok(acc.max(f(t)?)))
}

/// Largest relative pointwise difference on a fixed set of phase-space points.
fn pointwise(f: &PolyGaussian, g: &PolyGaussian) -> f64 {
    [[0.0, 0.0], [0.3, -0.7], [-1.2, 0.4], [2.0, 1.5], [-0.5, -2.5]]
        .iter()
        .map(|z| (f.eval(z) - g.eval(z)).norm() / (1.0 + g.eval(z).norm()))
        .fold(0.0, f64::max)
}

/// The grid of the quoted grid tolerances.
pub fn big() -> GridSpec {
    GridSpec::new(256, 12.0).expect("valid grid")
}

/// `phi_{c0,c1} rho_{c2,c3} (c4 + i c5)`, a generic decaying Gaussian.
pub fn random_gaussian(c: [f64; 6]) -> PolyGaussian {
    phi(c[0], c[1]).mul(&rho(c[2], c[3])).expect("same dimension").scale(C64::new(c[4], c[5]))
}

fn gaussian_core_suite(r: &mut Recorder) {
    let pts = lattice();
    r.below("rho_a * rho_a = rho_a, 25 centers", 1e-12, max_over(&pts, |a| {
        let rho = coherent_wigner(a);
        Ok(e(gauss_star(&rho, &rho))?.coef_distance(&rho))
    }));
    r.below("rho_a * phi_a = phi_a, 25 centers", 1e-12, max_over(&pts, |a| {
        let phi = coherent_wavefunction(a);
        Ok(e(gauss_star(&coherent_wigner(a), &phi))?.coef_distance(&phi))
    }));
    r.below("Tr[rho_a] = 1", 1e-10, max_over(&pts, |a| Ok((e(trace_analytic(&coherent_wigner(a)))? - 1.0).norm())));
    r.below("Tr[rho_a * rho_a] = 1", 1e-10, max_over(&pts, |a| {
        let rho = coherent_wigner(a);
        Ok((e(trace_analytic(&e(gauss_star(&rho, &rho))?))? - 1.0).norm())
    }));
    r.below("F[phi_a] = phi_a", 1e-12, max_over(&pts, |a| {
        let phi = coherent_wavefunction(a);
        Ok(e(symplectic_fourier_analytic(&phi))?.coef_distance(&phi))
    }));
    r.below("F[conj phi_a] = conj phi_-a", 1e-12, max_over(&pts, |a| {
        let f = e(symplectic_fourier_analytic(&coherent_wavefunction(a).conj()))?;
        Ok(pointwise(&f, &coherent_wavefunction(&a.neg()).conj()))
    }));
    r.below("F^2 = 1", 1e-12, max_over(&pts, |a| {
        let g = random_gaussian([a.p()[0] * 0.3, a.x()[0] * 0.3, 0.2, -0.1, 1.0, 0.5]);
        let ff = e(symplectic_fourier_analytic(&e(symplectic_fourier_analytic(&g))?))?;
        Ok(pointwise(&ff, &g))
    }));
}

fn star_numeric_suite(r: &mut Recorder, seed: u64, samples: usize) {
    let spec = big();
    let centers = [(0.0, 0.0), (0.5, -0.7), (-1.0, 1.0)];
    r.below("grid rho_a * rho_a = rho_a", 1e-6, max_over(centers, |(p, x)| {
        let g = s(&rho(p, x), spec)?;
        e(e(star(&g, &g))?.rel_l2(&g))
    }));
    r.below("grid rho_a * phi_a = phi_a", 1e-6, max_over(centers, |(p, x)| {
        let f = s(&phi(p, x), spec)?;
        e(e(star(&s(&rho(p, x), spec)?, &f))?.rel_l2(&f))
    }));
    r.below("grid Tr[rho_a] = 1", 1e-8, max_over(centers, |(p, x)| Ok((trace_grid(&s(&rho(p, x), spec)?) - 1.0).norm())));
    r.below("grid Tr[rho_a * rho_a] = 1", 1e-8, max_over(centers, |(p, x)| {
        let g = s(&rho(p, x), spec)?;
        Ok((trace_grid(&e(star(&g, &g))?) - 1.0).norm())
    }));
    r.below("grid F^2 = 1", 1e-8, (|| {
        let f = s(&random_gaussian([0.3, -0.4, -0.2, 0.5, 1.0, 0.0]), spec)?;
        e(sympl_fft(&sympl_fft(&f)).rel_l2(&f))
    })());
    r.below("grid F[phi_a] = phi_a", 1e-8, max_over(centers, |(p, x)| {
        let f = s(&phi(p, x), spec)?;
        e(sympl_fft(&f).rel_l2(&f))
    }));
    r.below("grid F[conj phi_a] = conj phi_-a", 1e-8, max_over(centers, |(p, x)| {
        let want = s(&phi(-p, -x).conj(), spec)?;
        e(sympl_fft(&s(&phi(p, x).conj(), spec)?).rel_l2(&want))
    }));
    r.below("grid alpha o beta = F[alpha] * beta", 1e-8, (|| {
        let f = s(&phi(0.4, 0.1), spec)?;
        let g = s(&rho(-0.2, 0.3), spec)?;
        e(e(twisted_conv(&f, &g))?.rel_l2(&e(star(&sympl_fft(&f), &g))?))
    })());
    let mut rng = CounterRng::new(seed, STREAM_ASSOCIATIVITY);
    let triples: Vec<[[f64; 6]; 3]> = (0..samples).map(|_| [rng.array(-0.8, 0.8), rng.array(-0.8, 0.8), rng.array(-0.8, 0.8)]).collect();
    r.below(&format!("(f * g) * h = f * (g * h), {samples} random triples"), 1e-7, max_over(&triples, |[a, b, c]| {
        let (f, g, h) = (s(&random_gaussian(*a), spec)?, s(&random_gaussian(*b), spec)?, s(&random_gaussian(*c), spec)?);
        let left = e(star(&e(star(&f, &g))?, &h))?;
        let right = e(star(&f, &e(star(&g, &h))?))?;
        e(left.rel_l2(&right))
    }));
    let mut rng = CounterRng::new(seed, STREAM_CONJUGATION);
    let pairs: Vec<[[f64; 6]; 2]> = (0..samples).map(|_| [rng.array(-0.8, 0.8), rng.array(-0.8, 0.8)]).collect();
    r.below(&format!("conj(f * g) = conj g * conj f, {samples} random pairs"), 1e-7, max_over(&pairs, |[a, b]| {
        let (f, g) = (s(&random_gaussian(*a), spec)?, s(&random_gaussian(*b), spec)?);
        e(e(star(&f, &g))?.conj().rel_l2(&e(star(&g.conj(), &f.conj()))?))
    }));
    let small = GridSpec::self_dual(32).expect("valid grid");
    r.below("kernel reproduces phi_a", 1e-5, max_over([(0.0, 0.0), (0.4, -0.3)], |(p, x)| {
        let f = s(&phi(p, x), small)?;
        let one = GridFunction::constant(small, C64::new(1.0, 0.0));
        e(e(kernel_apply(&one, &f))?.rel_l2(&f))
    }));
    r.below("kernel_apply = star", 1e-5, (|| {
        let x = GridFunction::coordinate_x(small);
        let f = s(&phi(0.2, 0.1), small)?;
        e(e(kernel_apply(&x, &f))?.rel_l2(&e(star(&x, &f))?))
    })());
}

fn weyl_suite(r: &mut Recorder) {
    for table in TableId::ALL {
        match verify_table(table, 3) {
            Ok(rows) => {
                for row in rows {
                    let pass = row.status == Status::Pass;
                    let detail = if pass { String::new() } else { format!("expected {}, computed {}", row.expected, row.computed) };
                    r.push(&format!("{}: {}", row.table, row.entry), if pass { 0.0 } else { 1.0 }, "exact".into(), pass, detail);
                }
            }
            Err(err) => r.push(table.name(), f64::NAN, "exact".into(), false, err.to_string()),
        }
    }
}

fn tomita_suite(r: &mut Recorder) {
    let spec = big();
    r.below("J^2 = I", 0.0, (|| {
        let k = SquareKet::new(e(wigner_offdiag(&PhasePoint::d1(0.2, 0.4), &PhasePoint::d1(-0.5, 0.1)))?);
        let g = SquareKet::new(s(&phi(0.3, 0.1), spec)?);
        let analytic = match (j_conj(&j_conj(&k)).payload(), k.payload()) {
            (Payload::Analytic(a), Payload::Analytic(b)) => a.coef_distance(b),
            _ => f64::INFINITY,
        };
        let grid = match (j_conj(&j_conj(&g)).payload(), g.payload()) {
            (Payload::Grid(a), Payload::Grid(b)) => e(a.sub(b))?.max_abs(),
            _ => f64::INFINITY,
        };
        Ok(analytic.max(grid))
    })());
    let pairs = [((0.0, 0.0), (0.3, 0.0)), ((0.2, -0.3), (-0.4, 0.5)), ((-1.0, 0.4), (-0.2, 0.1))];
    let overlap = |a: (f64, f64), b: (f64, f64)| -> Res { Ok(e(inner_product(&phi(a.0, a.1), &phi(b.0, b.1)))?.norm_sqr()) };
    r.below("[rho_psi|rho_phi] = |<psi|phi>|^2", 1e-8, max_over(pairs, |(a, b)| {
        let ra = e(pure_density(&Payload::Analytic(phi(a.0, a.1))))?;
        let rb = e(pure_density(&Payload::Analytic(phi(b.0, b.1))))?;
        Ok((e(ket_inner(&ra, &rb))? - overlap(a, b)?).norm())
    }));
    r.below("grid [rho_psi|rho_phi] = |<psi|phi>|^2", 1e-8, max_over(&pairs[1..], |&(a, b)| {
        let ra = e(pure_density(&Payload::Grid(s(&phi(a.0, a.1), spec)?)))?;
        let rb = e(pure_density(&Payload::Grid(s(&phi(b.0, b.1), spec)?)))?;
        Ok((e(ket_inner(&ra, &rb))? - overlap(a, b)?).norm())
    }));
    r.below("left and right actions commute", 1e-9, (|| {
        let alpha = Payload::Grid(s(&rho(0.3, 0.1).scale(C64::new(0.5, 0.5)), spec)?);
        let gamma = Payload::Grid(s(&rho(-0.4, 0.2), spec)?);
        let k = SquareKet::new(s(&phi(0.1, -0.2), spec)?);
        let lr = e(left_act(&alpha, &e(right_act(&gamma, &k))?))?;
        let rl = e(right_act(&gamma, &e(left_act(&alpha, &k))?))?;
        match (lr.payload(), rl.payload()) {
            (Payload::Grid(a), Payload::Grid(b)) => e(a.rel_l2(b)),
            _ => Err("expected grid payloads".into()),
        }
    })());
    let phi0 = s(&phi(0.0, 0.0), spec);
    let cases = [
        (rho(0.3, -0.2).scale(C64::new(0.4, 0.2)), phi(-0.1, 0.6)),
        (phi(0.5, 0.5), rho(-0.4, 0.1).scale(C64::new(0.0, 1.0))),
    ];
    r.below("GNS inner product = K inner product", 1e-6, max_over(&cases, |(a, b)| {
        let phi0 = phi0.clone()?;
        let (ag, bg) = (s(a, spec)?, s(b, spec)?);
        let got = e(gns_inner(&Payload::Grid(ag.clone()), &Payload::Grid(bg.clone())))?;
        let want = e(inner_grid(&e(star(&ag, &phi0))?, &e(star(&bg, &phi0))?))?;
        Ok((got - want).norm())
    }));
}

fn dynamics_suite(r: &mut Recorder) {
    let spec = GridSpec::new(128, 12.0).expect("valid grid");
    r.below("free coherent state <x>(t) affine, slope 2 p_a/m", 1e-4, (|| {
        let (pa, xa, m) = (0.5, -0.3, 1.0);
        let h = e(Hamiltonian::free(m))?;
        let cfg = EvolutionConfig::new(Picture::Schrodinger, 1.0, 1e-3).with_stride(100);
        let traj = e(evolve(&s(&phi(pa, xa), spec)?, &h, &cfg))?;
        Ok(traj.tracked.iter().map(|row| (row.x - (2.0 * xa + 2.0 * pa / m * row.t)).abs()).fold(0.0, f64::max))
    })());
    r.below("harmonic period-2 pi return", 1e-3, (|| {
        let h = e(Hamiltonian::harmonic(1.0, 1.0))?;
        let r0 = s(&rho(0.6, 0.2), spec)?;
        let traj = e(evolve(&r0, &h, &EvolutionConfig::new(Picture::Liouville, 2.0 * PI, 2.0 * PI / 3000.0)))?;
        e(traj.last().rel_l2(&r0))
    })());
    let coarse = GridSpec::new(64, 12.0).expect("valid grid");
    let ratio = (|| {
        let h = e(Hamiltonian::harmonic(1.0, 1.0))?;
        let r0 = rho(0.7, 0.3);
        let exact = s(&e(exact_quadratic_flow(&r0, &h, 1.0, Picture::Liouville))?, coarse)?;
        let err = |dt: f64| -> Res {
            let traj = e(evolve(&s(&r0, coarse)?, &h, &EvolutionConfig::new(Picture::Liouville, 1.0, dt)))?;
            e(traj.last().rel_l2(&exact))
        };
        Ok(err(0.01)? / err(0.005)?)
    })();
    match ratio {
        Ok(v) => r.push("RK4 error ratio at dt/2", v, "in [12, 20]".into(), (12.0..=20.0).contains(&v), String::new()),
        Err(err) => r.push("RK4 error ratio at dt/2", f64::NAN, "in [12, 20]".into(), false, err),
    }
    r.below("Heisenberg/Liouville picture duality", 1e-5, (|| {
        let spec = GridSpec::new(64, 10.0).expect("valid grid");
        let h = e(Hamiltonian::new(1.0, vec![0.0, 0.0, 0.5, 0.0, 0.005]))?;
        let (a0, r0) = (s(&rho(-0.2, 0.3), spec)?, s(&rho(0.3, 0.1), spec)?);
        let at = e(evolve(&a0, &h, &EvolutionConfig::new(Picture::Heisenberg, 0.5, 1e-3)))?;
        let rt = e(evolve(&r0, &h, &EvolutionConfig::new(Picture::Liouville, 0.5, 1e-3)))?;
        let lhs = trace_grid(&e(at.last().mul(&r0))?);
        let rhs = trace_grid(&e(a0.mul(rt.last()))?);
        let rate = trace_grid(&e(liouville_rhs(&h, &a0).mul(&r0))?) + trace_grid(&e(a0.mul(&liouville_rhs(&h, &r0)))?);
        Ok((lhs - rhs).norm().max(rate.norm()))
    })());
}

/// `exp(-1/2 z^T A z + b.z)` with real `A = [[a, c], [c, b]]`.
pub fn real_gaussian(a: f64, b: f64, c: f64, bp: f64, bx: f64) -> PolyGaussian {
    let m = DMatrix::from_row_slice(2, 2, &[a, c, c, b]).map(|v| C64::new(v, 0.0));
    let lin = DVector::from_vec(vec![C64::new(bp, 0.0), C64::new(bx, 0.0)]);
    PolyGaussian::new(1, Poly::one(2), m, lin, C64::new(0.0, 0.0)).expect("valid Gaussian")
}

/// Gaussian packet of width `width` at `(p0, x0)` with linear phases `0.7 p - 0.4 x`.
pub fn wavepacket(p0: f64, x0: f64, width: f64) -> PolyGaussian {
    let w = 1.0 / (width * width);
    let m = DMatrix::from_row_slice(2, 2, &[w, 0.0, 0.0, w]).map(|v| C64::new(v, 0.0));
    let lin = DVector::from_vec(vec![C64::new(w * p0, 0.7), C64::new(w * x0, -0.4)]);
    let c = C64::new(-0.5 * w * (p0 * p0 + x0 * x0), 0.0);
    PolyGaussian::new(1, Poly::one(2), m, lin, c).expect("valid Gaussian")
}

/// The Gaussian pair of the contraction sweeps.
pub fn contraction_pair() -> (PolyGaussian, PolyGaussian) {
    (real_gaussian(1.0, 0.8, 0.2, 0.3, -0.2), real_gaussian(0.7, 1.2, -0.1, -0.4, 0.5))
}

fn classical_limit_suite(r: &mut Recorder) {
    let spec = GridSpec::new(128, 8.0).expect("valid grid");
    let ks = [4.0, 8.0, 16.0, 32.0];
    let (f, g) = contraction_pair();
    r.window("(k^2/2i hbar) Moyal - Poisson slope", BRACKET_WINDOW, bracket_limit_check(&f, &g, &ks, 1.0, spec).map(|t| t.slope));
    r.window("star_c - pointwise slope", STAR_WINDOW, star_limit_check(&f, &g, &ks, 1.0, spec).map(|t| t.slope));
    let h = Hamiltonian::new(1.0, vec![0.0, 0.0, 0.5, 0.0, 0.2]).expect("valid Hamiltonian");
    let phi0 = rho(0.2, -0.1);
    r.window("Schrodinger generator growth slope", SCHRODINGER_WINDOW, schrodinger_divergence(&h, &phi0, &ks, 1.0, spec).map(|t| t.slope));
    r.below("|phi_c(t)|^2 vs Liouville transport, per unit time", 1e-4, (|| {
        let h = e(Hamiltonian::new(1.0, vec![0.0, 0.0, 0.5, 0.0, 0.02]))?;
        let spec = GridSpec::new(128, 6.0).expect("valid grid");
        let packet = wavepacket(0.4, 0.3, 0.5);
        let params = e(ContractionParams::classical(8.0))?;
        let t = 1.0;
        let traj = e(koopman_evolve(&s(&packet, spec)?, &h, &EvolutionConfig::new(Picture::Schrodinger, t, 4e-4), &params))?;
        let modulus = traj.last().map(|v| C64::new(v.norm_sqr(), 0.0));
        let rho0 = e(packet.conj().mul(&packet))?;
        Ok(e(modulus.rel_l2(&transported_density(&rho0, &h, t, spec, 200)))? / t)
    })());
    r.below("[X_kappa, M_alpha] = M_{kappa, alpha}", 1e-6, (|| {
        let spec = GridSpec::new(128, 4.0).expect("valid grid");
        let h = e(Hamiltonian::new(1.2, vec![0.0, 0.3, 0.5, 0.0, 0.05]))?;
        let kappa = e(PolyGaussian::polynomial(1, h.kappa()))?;
        let alpha = real_gaussian(1.5, 1.0, 0.2, 0.3, -0.1);
        let probe = s(&wavepacket(0.1, 0.2, 0.7), spec)?;
        let lhs = e(koopman_commutator(&kappa, &alpha, &probe))?;
        let rhs = e(s(&e(poisson_bracket(&kappa, &alpha))?, spec)?.mul(&probe))?;
        Ok(e(lhs.sub(&rhs))?.max_abs() / rhs.max_abs())
    })());
}

/// Runs the selected suites in order.
pub fn run_suites(suites: &[Suite], seed: u64, samples: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for &suite in suites {
        let mut r = Recorder { suite, out: &mut out };
        match suite {
            Suite::GaussianCore => gaussian_core_suite(&mut r),
            Suite::StarNumeric => star_numeric_suite(&mut r, seed, samples),
            Suite::WeylAlgebra => weyl_suite(&mut r),
            Suite::Tomita => tomita_suite(&mut r),
            Suite::Dynamics => dynamics_suite(&mut r),
            Suite::ClassicalLimit => classical_limit_suite(&mut r),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_core_suite_passes() {
        let checks = run_suites(&[Suite::GaussianCore], 0, 1);
        assert_eq!(checks.len(), 7);
        assert!(checks.iter().all(|c| c.pass), "{checks:#?}");
    }

    #[test]
    fn random_inputs_follow_the_seed() {
        let mut a = CounterRng::new(5, STREAM_ASSOCIATIVITY);
        let mut b = CounterRng::new(5, STREAM_ASSOCIATIVITY);
        assert_eq!(a.array::<6>(-0.8, 0.8), b.array::<6>(-0.8, 0.8));
    }
}
