use nalgebra::{DMatrix, DVector};
use wwgm::classical_limit::*;
use wwgm::dynamics::{EvolutionConfig, Hamiltonian, Picture};
use wwgm::gaussian_core::{coherent_wigner, star, DensityMix, PhasePoint, Poly, PolyGaussian};
use wwgm::star_numeric::{moyal_bracket, sample, GridFunction, GridSpec};
use wwgm::tomita::Payload;
use wwgm::C64;

const KS: [f64; 4] = [4.0, 8.0, 16.0, 32.0];

/// `exp(-1/2 z^T A z + b.z)` with real `A = [[a, c], [c, b]]`.
fn gauss(a: f64, b: f64, c: f64, bp: f64, bx: f64) -> PolyGaussian {
    let m = DMatrix::from_row_slice(2, 2, &[a, c, c, b]).map(|v| C64::new(v, 0.0));
    let lin = DVector::from_vec(vec![C64::new(bp, 0.0), C64::new(bx, 0.0)]);
    PolyGaussian::new(1, Poly::one(2), m, lin, C64::new(0.0, 0.0)).unwrap()
}

fn poly(terms: &[([u32; 2], f64)]) -> PolyGaussian {
    let mut p = Poly::zero(2);
    for (e, c) in terms {
        p.add_term(e.to_vec(), C64::new(*c, 0.0));
    }
    PolyGaussian::polynomial(1, p).unwrap()
}

fn analytic(p: Payload) -> PolyGaussian {
    match p {
        Payload::Analytic(f) => f,
        Payload::Grid(_) => panic!("expected an analytic payload"),
    }
}

fn grid(p: Payload) -> GridFunction {
    match p {
        Payload::Grid(f) => f,
        Payload::Analytic(_) => panic!("expected a grid payload"),
    }
}

fn spec() -> GridSpec {
    GridSpec::new(128, 8.0).unwrap()
}

fn pair() -> (PolyGaussian, PolyGaussian) {
    (gauss(1.0, 0.8, 0.2, 0.3, -0.2), gauss(0.7, 1.2, -0.1, -0.4, 0.5))
}

#[test]
fn frame_round_trip_is_identity() {
    let params = ContractionParams::new(1.3, 6.0).unwrap();
    let base = CoordinateFrame::new(Frame::Base, params);
    let f = coherent_wigner(&PhasePoint::d1(0.4, -0.3));
    for frame in [Frame::C, Frame::Breve, Frame::S] {
        let other = CoordinateFrame::new(frame, params);
        let back = convert_analytic(&convert_analytic(&f, &base, &other), &other, &base);
        for z in [[0.1, 0.2], [1.0, -0.7], [-0.3, 0.9]] {
            assert!((back.eval(&z) - f.eval(&z)).norm() < 1e-12);
        }
        let g = sample(&f, GridSpec::self_dual(32).unwrap()).unwrap();
        let g_back = convert_grid(&convert_grid(&g, &base, &other).unwrap(), &other, &base).unwrap();
        assert!((g_back.spec().half_width() - g.spec().half_width()).abs() < 1e-12);
        assert_eq!(g_back.values(), g.values());
    }
    // p_c = p_s / 2 at a sample point
    let fc = convert_analytic(&f, &base, &CoordinateFrame::new(Frame::C, params));
    let fs = convert_analytic(&f, &base, &CoordinateFrame::new(Frame::S, params));
    assert!((fc.eval(&[0.2, 0.1]) - fs.eval(&[0.4, 0.2])).norm() < 1e-12);
}

#[test]
fn star_c_at_base_parameters_is_the_base_star() {
    let base = ContractionParams::base();
    let (f, g) = pair();
    let a = analytic(star_c(&f.clone().into(), &g.clone().into(), &base).unwrap());
    assert!(a.approx_eq(&star(&f, &g).unwrap(), 1e-12));
    let sd = GridSpec::self_dual(64).unwrap();
    let (fg, gg) = (sample(&f, sd).unwrap(), sample(&g, sd).unwrap());
    let on_grid = grid(star_c(&fg.clone().into(), &gg.clone().into(), &base).unwrap());
    let reference = wwgm::star_numeric::star(&fg, &gg).unwrap();
    assert!(on_grid.rel_l2(&reference).unwrap() < 1e-10);
}

#[test]
fn star_c_grid_route_matches_analytic_route() {
    for k in [2.0, 8.0] {
        let params = ContractionParams::classical(k).unwrap();
        let (f, g) = pair();
        let exact = sample(&analytic(star_c(&f.clone().into(), &g.clone().into(), &params).unwrap()), spec()).unwrap();
        let (fg, gg) = (sample(&f, spec()).unwrap(), sample(&g, spec()).unwrap());
        let on_grid = grid(star_c(&fg.into(), &gg.into(), &params).unwrap());
        assert!(on_grid.rel_l2(&exact).unwrap() < 1e-10, "k = {k}");
    }
}

#[test]
fn contracted_left_position() {
    // x_c *_c f = x_c f + i (hbar/k^2) d_p f; at hbar = 1 the coefficient is i/k^2
    let f = gauss(1.0, 0.8, 0.2, 0.3, -0.2);
    for (hbar, k) in [(1.0, 4.0), (2.0, 3.0)] {
        let params = ContractionParams::new(hbar, k).unwrap();
        let lhs = analytic(star_c(&poly(&[([0, 1], 1.0)]).into(), &f.clone().into(), &params).unwrap());
        let xf = poly(&[([0, 1], 1.0)]).mul(&f).unwrap();
        let rhs = xf.add_same_gaussian(&f.derivative(0).scale(C64::new(0.0, hbar / (k * k)))).unwrap();
        for z in [[0.3, -0.1], [1.2, 0.4]] {
            assert!((lhs.eval(&z) - rhs.eval(&z)).norm() < 1e-14);
        }
    }
}

#[test]
fn mixed_payloads_are_rejected() {
    let f = gauss(1.0, 1.0, 0.0, 0.0, 0.0);
    let g = sample(&f, spec()).unwrap();
    let params = ContractionParams::base();
    assert!(matches!(star_c(&f.clone().into(), &g.clone().into(), &params), Err(ClassicalError::MixedRepresentation)));
    assert!(matches!(poisson(&g.into(), &f.into()), Err(ClassicalError::MixedRepresentation)));
}

#[test]
fn star_c_tends_to_pointwise_product() {
    let (f, g) = pair();
    let table = star_limit_check(&f, &g, &KS, 1.0, spec()).unwrap();
    println!("{}", table.to_csv());
    assert!(table.within(STAR_WINDOW), "{:?}", table.slope);
}

#[test]
fn poisson_oracles() {
    let m = 2.0;
    let t = poly(&[([2, 0], 0.5 / m)]);
    let x = poly(&[([0, 1], 1.0)]);
    let b = analytic(poisson(&t.into(), &x.into()).unwrap());
    assert!(b.approx_eq(&poly(&[([1, 0], 1.0 / m)]), 1e-15));
    let (f, _) = pair();
    let ff = analytic(poisson(&f.clone().into(), &f.clone().into()).unwrap());
    assert!(ff.eval(&[0.2, 0.3]).norm() < 1e-15);
}

#[test]
fn poisson_matches_derivative_along_the_flow() {
    let h = Hamiltonian::new(1.3, vec![0.0, 0.2, 0.5, 0.0, 0.1]).unwrap();
    let kappa = PolyGaussian::polynomial(1, h.kappa()).unwrap();
    let (alpha, _) = pair();
    let bracket = poisson_bracket(&kappa, &alpha).unwrap();
    let eps = 1e-4;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for z in [[0.3, -0.4], [1.0, 0.5], [-0.7, 0.2], [0.1, 1.1]] {
        let fwd = alpha.eval(&flow_point(&h, z, eps, 4));
        let bwd = alpha.eval(&flow_point(&h, z, -eps, 4));
        let fd = (fwd - bwd) / (2.0 * eps);
        worst = worst.max((fd - bracket.eval(&z)).norm());
        scale = scale.max(bracket.eval(&z).norm());
    }
    assert!(worst / scale < 1e-6, "{worst:e} / {scale:e}");
    // grid route
    let grid_b = grid(poisson(&sample(&kappa.mul(&gauss(1.0, 1.0, 0.0, 0.0, 0.0)).unwrap(), spec()).unwrap().into(), &sample(&alpha, spec()).unwrap().into()).unwrap());
    let exact = sample(&poisson_bracket(&kappa.mul(&gauss(1.0, 1.0, 0.0, 0.0, 0.0)).unwrap(), &alpha).unwrap(), spec()).unwrap();
    assert!(grid_b.rel_l2(&exact).unwrap() < 1e-9);
}

#[test]
fn bracket_is_exact_for_low_degree_polynomials() {
    let x = poly(&[([0, 1], 1.0)]);
    let p2 = poly(&[([2, 0], 1.0)]);
    let table = bracket_limit_check(&x, &p2, &KS, 1.0, spec()).unwrap();
    for r in &table.rows {
        assert_eq!(r.value, 0.0, "k = {}", r.k);
    }
    assert_eq!(table.slope, None);
    let cubic = poly(&[([2, 1], 0.5), ([0, 1], 1.0)]);
    let table = bracket_limit_check(&cubic, &poly(&[([1, 0], 1.0)]), &KS, 1.0, spec()).unwrap();
    assert!(table.rows.iter().all(|r| r.value == 0.0));
}

#[test]
fn gaussian_bracket_converges_at_fourth_order() {
    let (f, g) = pair();
    let table = bracket_limit_check(&f, &g, &KS, 1.0, spec()).unwrap();
    println!("{}", table.to_csv());
    assert!(table.within(BRACKET_WINDOW), "{:?}", table.slope);
    let table2 = bracket_limit_check(&f, &g, &KS, 2.0, spec()).unwrap();
    assert!(table2.within(BRACKET_WINDOW), "{:?}", table2.slope);
}

#[test]
fn scaled_bracket_grid_route_agrees() {
    let (f, g) = pair();
    for k in [4.0, 16.0] {
        let params = ContractionParams::classical(k).unwrap();
        let exact = scaled_bracket(&f, &g, &params, spec()).unwrap();
        let (fg, gg) = (sample(&f, spec()).unwrap(), sample(&g, spec()).unwrap());
        let a = grid(star_c(&fg.clone().into(), &gg.clone().into(), &params).unwrap());
        let b = grid(star_c(&gg.into(), &fg.into(), &params).unwrap());
        let d = params.deformation();
        let on_grid = a.sub(&b).unwrap().scale(C64::new(0.0, -0.5 / d));
        assert!(on_grid.rel_l2(&exact).unwrap() < 1e-8, "k = {k}");
    }
}

#[test]
fn base_parameters_reproduce_the_quantum_bracket() {
    let (f, g) = pair();
    let sd = GridSpec::self_dual(64).unwrap();
    let scaled = scaled_bracket(&f, &g, &ContractionParams::base(), sd).unwrap();
    let quantum = moyal_bracket(&sample(&f, sd).unwrap(), &sample(&g, sd).unwrap()).unwrap().scale(C64::new(0.0, -0.5));
    assert!(scaled.rel_l2(&quantum).unwrap() < 1e-9);
}

#[test]
fn k_sweep_is_validated() {
    let (f, g) = pair();
    assert!(matches!(bracket_limit_check(&f, &g, &[], 1.0, spec()), Err(ClassicalError::EmptyKList(0))));
    assert!(matches!(bracket_limit_check(&f, &g, &[4.0], 1.0, spec()), Err(ClassicalError::EmptyKList(1))));
    assert!(matches!(bracket_limit_check(&f, &g, &[8.0, 4.0], 1.0, spec()), Err(ClassicalError::InvalidParams(_))));
}

#[test]
fn equations_of_motion_in_the_limit() {
    let h = Hamiltonian::new(1.0, vec![0.0, 0.0, 0.5, 0.0, 0.2]).unwrap();
    let kappa = PolyGaussian::polynomial(1, h.kappa()).unwrap();
    let (alpha, rho) = pair();
    // Heisenberg: (k^2/2i hbar){alpha, kappa} -> {kappa, alpha}
    let heis = bracket_limit_check(&alpha, &kappa, &KS, 1.0, spec()).unwrap();
    // Liouville: (k^2/2i hbar){kappa, rho} -> {rho, kappa}
    let liou = bracket_limit_check(&kappa, &rho, &KS, 1.0, spec()).unwrap();
    println!("{}\n{}", heis.to_csv(), liou.to_csv());
    assert!(heis.slope.unwrap() <= -2.0);
    assert!(liou.slope.unwrap() <= -2.0);
    let phi = coherent_wigner(&PhasePoint::d1(0.2, -0.1));
    let schr = schrodinger_divergence(&h, &phi, &KS, 1.0, spec()).unwrap();
    println!("{}", schr.to_csv());
    assert!(schr.within(SCHRODINGER_WINDOW), "{:?}", schr.slope);
}

#[test]
fn contracted_wigner_oracles() {
    let a = PhasePoint::d1(0.3, -0.2);
    let at_base = contracted_wigner(&a, &ContractionParams::base());
    assert!(at_base.approx_eq(&coherent_wigner(&a), 1e-12));
    for hbar in [1.0, 2.0] {
        let mut prev: Option<f64> = None;
        for k in [2.0, 4.0, 8.0] {
            let params = ContractionParams::new(hbar, k).unwrap();
            let rho = contracted_wigner(&a, &params);
            let v = marginal_variance(&rho, 1).unwrap();
            assert!((v - hbar / (k * k)).abs() < 1e-12);
            if let Some(p) = prev {
                assert!((p / v - 4.0).abs() < 1e-10);
            }
            prev = Some(v);
            // peak at (2 p_a, 2 x_a)
            let peak = rho.eval(&[0.6, -0.4]).re;
            assert!((peak - 2.0).abs() < 1e-12);
            for dz in [[1e-3, 0.0], [0.0, 1e-3], [-1e-3, 1e-3]] {
                assert!(rho.eval(&[0.6 + dz[0], -0.4 + dz[1]]).re < peak);
            }
        }
    }
}

#[test]
fn renormalized_coherent_density() {
    let a = PhasePoint::d1(0.2, 0.1);
    let spec = GridSpec::new(128, 3.0).unwrap();
    for k in [4.0, 8.0] {
        let params = ContractionParams::classical(k).unwrap();
        let rho = sample(&contracted_wigner(&a, &params), spec).unwrap();
        let out = density_renormalize(&rho, &params).unwrap();
        let norm = out.rho.integral().re / (2.0 * std::f64::consts::PI * params.hbar());
        assert!((norm - 1.0).abs() < 1e-9);
        assert!((out.formal_norm - 2.0).abs() < 1e-9, "{}", out.formal_norm);
        // normalized Gaussian of width sqrt(hbar)/k: (k^2/2) rho_a
        let want = rho.scale(C64::new(k * k / 2.0, 0.0));
        assert!(out.rho.rel_l2(&want).unwrap() < 1e-9);
    }
}

#[test]
fn renormalize_rejects_bad_densities() {
    let params = ContractionParams::classical(4.0).unwrap();
    let spec = GridSpec::new(32, 3.0).unwrap();
    let rho = sample(&coherent_wigner(&PhasePoint::d1(0.0, 0.0)), spec).unwrap();
    let neg = rho.map(|v| v - C64::new(0.01, 0.0));
    assert!(matches!(density_renormalize(&neg, &params), Err(ClassicalError::NegativeDensity(_))));
    let cplx = rho.map(|v| v * C64::new(1.0, 0.01));
    assert!(matches!(density_renormalize(&cplx, &params), Err(ClassicalError::NonRealDensity(_))));
}

#[test]
fn mixture_tends_to_sum_of_moduli() {
    let spec = GridSpec::new(128, 4.0).unwrap();
    let phis = [gauss(2.0, 2.0, 0.0, 0.8, 0.0), gauss(3.0, 1.5, 0.3, -0.5, 0.6)];
    let weights = [0.3, 0.7];
    let limit_mix = DensityMix::new(
        phis.iter().zip(weights).map(|(p, w)| (w, p.conj().mul(p).unwrap().scale(C64::new(4.0, 0.0)))).collect(),
    )
    .unwrap();
    let limit = GridFunction::from_fn(spec, |p, x| limit_mix.eval(&[p, x]));
    let mut errors = Vec::new();
    for k in [4.0, 8.0, 16.0] {
        let params = ContractionParams::classical(k).unwrap();
        let mut rho = GridFunction::zeros(spec);
        for (phi, w) in phis.iter().zip(weights) {
            let term = analytic(star_c(&phi.clone().into(), &phi.conj().into(), &params).unwrap());
            rho = rho.add(&sample(&term.scale(C64::new(4.0 * w, 0.0)), spec).unwrap()).unwrap();
        }
        let a = density_renormalize(&rho, &params).unwrap().rho;
        let b = density_renormalize(&limit, &params).unwrap().rho;
        errors.push(a.rel_l2(&b).unwrap());
    }
    println!("{errors:?}");
    assert!(errors[0] > errors[1] && errors[1] > errors[2]);
    let slope = loglog_slope(&[4.0, 8.0, 16.0], &errors).unwrap();
    assert!(slope < -1.8, "{slope}");
}

fn kspec() -> GridSpec {
    GridSpec::new(128, 4.0).unwrap()
}

/// Gaussian wavefunction with a position-dependent phase, centred at `(p0, x0)`.
fn wavepacket(p0: f64, x0: f64, width: f64) -> PolyGaussian {
    let w = 1.0 / (width * width);
    let m = DMatrix::from_row_slice(2, 2, &[w, 0.0, 0.0, w]).map(|v| C64::new(v, 0.0));
    let lin = DVector::from_vec(vec![C64::new(w * p0, 0.7), C64::new(w * x0, -0.4)]);
    let c = C64::new(-0.5 * w * (p0 * p0 + x0 * x0), 0.0);
    PolyGaussian::new(1, Poly::one(2), m, lin, c).unwrap()
}

#[test]
fn koopman_free_packet_follows_characteristics() {
    let (p0, x0, m) = (0.5, -0.5, 1.0);
    let h = Hamiltonian::free(m).unwrap();
    let phi = sample(&wavepacket(p0, x0, 0.3), kspec()).unwrap();
    let cfg = EvolutionConfig::new(Picture::Schrodinger, 1.0, 5e-3).with_stride(20);
    let traj = koopman_evolve(&phi, &h, &cfg, &ContractionParams::classical(8.0).unwrap()).unwrap();
    assert_eq!(traj.tracked.len(), 11);
    for row in &traj.tracked {
        assert!((row.x - (x0 + p0 * row.t / m)).abs() < 1e-4, "t={} x={}", row.t, row.x);
        assert!((row.p - p0).abs() < 1e-4);
        assert!((row.trace - traj.tracked[0].trace).abs() < 1e-8);
    }
}

#[test]
fn koopman_modulus_obeys_classical_liouville() {
    let h = Hamiltonian::new(1.0, vec![0.0, 0.0, 0.5, 0.0, 0.02]).unwrap();
    let phi0 = wavepacket(0.4, 0.3, 0.5);
    let rho0 = phi0.conj().mul(&phi0).unwrap();
    let t = 1.0;
    let spec = GridSpec::new(128, 6.0).unwrap();
    let cfg = EvolutionConfig::new(Picture::Schrodinger, t, 4e-4);
    let traj = koopman_evolve(&sample(&phi0, spec).unwrap(), &h, &cfg, &ContractionParams::classical(8.0).unwrap()).unwrap();
    let modulus = traj.last().map(|v| C64::new(v.norm_sqr(), 0.0));
    let transported = transported_density(&rho0, &h, t, spec, 200);
    let err = modulus.rel_l2(&transported).unwrap() / t;
    assert!(err < 1e-4, "{err:e}");
    let first = traj.tracked[0];
    let last = traj.tracked.last().unwrap();
    assert!((last.trace - first.trace).abs() < 1e-8 && (last.purity - first.purity).abs() < 1e-6);
}

#[test]
fn characteristics_match_exact_quadratic_flow() {
    let h = Hamiltonian::new(0.7, vec![0.1, -0.2, 0.6]).unwrap();
    let rho0 = wavepacket(0.2, -0.3, 0.6);
    let rho0 = rho0.conj().mul(&rho0).unwrap();
    let t = 1.3;
    let exact = wwgm::dynamics::exact_quadratic_flow(&rho0, &h, t, Picture::Liouville).unwrap();
    let by_points = transported_density(&rho0, &h, t, kspec(), 400);
    assert!(by_points.rel_l2(&sample(&exact, kspec()).unwrap()).unwrap() < 1e-10);
    let (mat, shift) = quadratic_flow(&h, t).unwrap();
    let z = flow_point(&h, [0.3, 0.8], t, 400);
    let affine = [mat[(0, 0)] * 0.3 + mat[(0, 1)] * 0.8 + shift[0], mat[(1, 0)] * 0.3 + mat[(1, 1)] * 0.8 + shift[1]];
    assert!((z[0] - affine[0]).abs() < 1e-10 && (z[1] - affine[1]).abs() < 1e-10);
}

#[test]
fn koopman_generators_represent_the_poisson_algebra() {
    let hbar = 0.7;
    let phi = sample(&wavepacket(0.3, -0.2, 0.6), kspec()).unwrap();
    let pairs = [
        (poly(&[([2, 0], 0.5), ([0, 2], 0.3)]), poly(&[([1, 1], 1.0), ([0, 2], 0.5)])),
        (poly(&[([2, 0], 0.5), ([0, 1], 0.2)]), poly(&[([0, 2], 1.0), ([1, 0], -0.3)])),
        (poly(&[([2, 0], 0.5)]), poly(&[([0, 3], 0.2), ([1, 1], 0.1)])),
    ];
    for (a, b) in pairs {
        let ab = poisson_bracket(&a, &b).unwrap();
        let lhs = koopman_generator(&ab, &phi, hbar).unwrap();
        let gab = koopman_generator(&a, &koopman_generator(&b, &phi, hbar).unwrap(), hbar).unwrap();
        let gba = koopman_generator(&b, &koopman_generator(&a, &phi, hbar).unwrap(), hbar).unwrap();
        let rhs = gab.sub(&gba).unwrap().scale(C64::new(0.0, 1.0 / hbar));
        assert!(lhs.rel_l2(&rhs).unwrap() < 1e-5, "{}", lhs.rel_l2(&rhs).unwrap());
    }
}

#[test]
fn theta_of_kinetic_energy() {
    let m = 1.7;
    let kappa = PolyGaussian::polynomial(1, Hamiltonian::free(m).unwrap().kappa()).unwrap();
    let th = theta(&kappa).unwrap();
    for z in [[0.4, 1.0], [-1.3, 0.2]] {
        assert!((th.eval(&z).re + z[0] * z[0] / (2.0 * m)).abs() < 1e-14);
    }
}

#[test]
fn hamiltonian_field_commutator_is_the_poisson_bracket() {
    let h = Hamiltonian::new(1.2, vec![0.0, 0.3, 0.5, 0.0, 0.05]).unwrap();
    let kappa = PolyGaussian::polynomial(1, h.kappa()).unwrap();
    let alpha = gauss(1.5, 1.0, 0.2, 0.3, -0.1);
    let f = sample(&wavepacket(0.1, 0.2, 0.7), kspec()).unwrap();
    let lhs = koopman_commutator(&kappa, &alpha, &f).unwrap();
    let rhs = sample(&poisson_bracket(&kappa, &alpha).unwrap(), kspec()).unwrap().mul(&f).unwrap();
    let worst = lhs.sub(&rhs).unwrap().max_abs() / rhs.max_abs();
    assert!(worst < 1e-6, "{worst:e}");
}

#[test]
fn koopman_heisenberg_transports_position_affinely() {
    let m = 2.0;
    let h = Hamiltonian::free(m).unwrap();
    let alpha = GridFunction::coordinate_x(kspec());
    let cfg = EvolutionConfig::new(Picture::Heisenberg, 1.0, 0.1).with_stride(5);
    let traj = koopman_heisenberg(&alpha, &h, &cfg, &ContractionParams::classical(4.0).unwrap()).unwrap();
    for (t, snap) in traj.times.iter().zip(&traj.snapshots) {
        let want = GridFunction::from_fn(kspec(), |p, x| C64::new(x + p * t / m, 0.0));
        // exact up to roundoff amplified by the edge extrapolation weights
        assert!(snap.sub(&want).unwrap().max_abs() < 1e-10, "t = {t}");
    }
    assert_eq!(traj.snapshots[0], alpha);
}

#[test]
fn koopman_heisenberg_matches_characteristics() {
    let h = Hamiltonian::new(1.0, vec![0.0, 0.0, 0.5, 0.0, 0.1]).unwrap();
    let alpha0 = gauss(2.0, 2.0, 0.3, 0.5, -0.4);
    let t = 1.0;
    let spec = GridSpec::new(128, 5.0).unwrap();
    let cfg = EvolutionConfig::new(Picture::Heisenberg, t, 0.02);
    let traj = koopman_heisenberg(&sample(&alpha0, spec).unwrap(), &h, &cfg, &ContractionParams::classical(4.0).unwrap()).unwrap();
    let exact = GridFunction::from_fn(spec, |p, x| alpha0.eval(&flow_point(&h, [p, x], t, 200)));
    let err = traj.last().rel_l2(&exact).unwrap();
    assert!(err < 1e-4, "{err:e}");
    // single-step characteristics with the same interpolation
    let coarse = koopman_heisenberg(&sample(&alpha0, spec).unwrap(), &h, &EvolutionConfig::new(Picture::Heisenberg, t, 0.1), &ContractionParams::classical(4.0).unwrap()).unwrap();
    assert!(coarse.last().rel_l2(&exact).unwrap() < 1e-4);
}

#[test]
fn koopman_domain_errors() {
    let h = Hamiltonian::free(1.0).unwrap();
    let small = GridSpec::new(64, 1.5).unwrap();
    let phi = sample(&wavepacket(0.0, 0.0, 1.0), small).unwrap();
    let params = ContractionParams::classical(4.0).unwrap();
    let cfg = EvolutionConfig::new(Picture::Schrodinger, 0.1, 0.01);
    assert!(matches!(koopman_evolve(&phi, &h, &cfg, &params), Err(ClassicalError::DomainTooSmall(_))));
    let far = EvolutionConfig::new(Picture::Heisenberg, 2.0, 2.0);
    let alpha = GridFunction::coordinate_x(kspec());
    assert!(matches!(koopman_heisenberg(&alpha, &h, &far, &params), Err(ClassicalError::DomainTooSmall(_))));
    let wrong = EvolutionConfig::new(Picture::Liouville, 0.1, 0.01);
    assert!(matches!(koopman_heisenberg(&alpha, &h, &wrong, &params), Err(ClassicalError::Dynamics(_))));
}

#[test]
fn factorization_oracles() {
    let alpha0 = gauss(2.0, 2.0, 0.3, 0.5, -0.4);
    let spec = GridSpec::new(128, 6.0).unwrap();
    let params = ContractionParams::classical(4.0).unwrap();
    let harmonic = Hamiltonian::harmonic(1.0, 1.3).unwrap();
    let zero = factorization_check(&harmonic, 0.0, &params, &alpha0, spec, 1e-3).unwrap();
    assert_eq!(zero.deviation, 0.0);
    let quad = factorization_check(&harmonic, 0.1, &params, &alpha0, spec, 1e-3).unwrap();
    assert!(quad.deviation < 1e-6, "{:e}", quad.deviation);
    assert!(matches!(factorization_check(&harmonic, 0.5, &params, &alpha0, spec, 1e-3), Err(ClassicalError::TTooLarge(_))));
}

#[test]
fn factorization_deviation_shrinks_with_k() {
    let alpha0 = gauss(2.0, 2.0, 0.3, 0.5, -0.4);
    let spec = GridSpec::new(128, 6.0).unwrap();
    let h = Hamiltonian::new(1.0, vec![0.0, 0.0, 0.5, 0.0, 0.1]).unwrap();
    let ks = [4.0, 8.0, 16.0];
    let devs: Vec<f64> = ks
        .iter()
        .map(|&k| factorization_check(&h, 0.1, &ContractionParams::classical(k).unwrap(), &alpha0, spec, 2.5e-4).unwrap().deviation)
        .collect();
    println!("{devs:?}");
    assert!(devs[0] > devs[1] && devs[1] > devs[2]);
    let slope = loglog_slope(&ks, &devs).unwrap();
    assert!(slope <= -3.0, "{slope}");
}
