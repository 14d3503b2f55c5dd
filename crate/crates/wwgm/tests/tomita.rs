use wwgm::gaussian_core::{coherent_wavefunction, coherent_wigner, inner_product, wigner_offdiag, PhasePoint, Poly, PolyGaussian};
use wwgm::star_numeric::{inner_grid, sample, GridFunction, GridSpec};
use wwgm::tomita::*;
use wwgm::weyl_algebra::{make_generator, Bindings, GeneratorId, GeneratorKind, Realization};
use wwgm::C64;

fn big() -> GridSpec {
    GridSpec::new(256, 12.0).unwrap()
}

fn rho(p: f64, x: f64) -> PolyGaussian {
    coherent_wigner(&PhasePoint::d1(p, x))
}

fn phi(p: f64, x: f64) -> PolyGaussian {
    coherent_wavefunction(&PhasePoint::d1(p, x))
}

fn grid(f: &PolyGaussian) -> Payload {
    Payload::Grid(sample(f, big()).unwrap())
}

fn analytic(p: &Payload) -> &PolyGaussian {
    match p {
        Payload::Analytic(f) => f,
        Payload::Grid(_) => panic!("expected analytic payload"),
    }
}

fn on_grid(p: &Payload) -> &GridFunction {
    match p {
        Payload::Grid(f) => f,
        Payload::Analytic(_) => panic!("expected grid payload"),
    }
}

fn x_coord() -> PolyGaussian {
    PolyGaussian::polynomial(1, Poly::var(2, 1)).unwrap()
}

/// `|<phi_a|phi_b>|^2` from the closed-form coherent overlap `phi_b(p_a, x_a)`.
fn overlap_sqr(a: (f64, f64), b: (f64, f64)) -> f64 {
    phi(b.0, b.1).eval(&[a.0, a.1]).norm_sqr()
}

#[test]
fn modular_conjugation_is_an_antilinear_involution() {
    let k = SquareKet::new(wigner_offdiag(&PhasePoint::d1(0.2, 0.4), &PhasePoint::d1(-0.5, 0.1)).unwrap());
    let back = j_conj(&j_conj(&k));
    assert!(analytic(back.payload()).approx_eq(analytic(k.payload()), 0.0));
    let c = C64::new(0.3, -1.2);
    let lhs = j_conj(&k.scale(c));
    let rhs = j_conj(&k).scale(c.conj());
    assert!(analytic(lhs.payload()).approx_eq(analytic(rhs.payload()), 1e-14));
    let g = SquareKet::new(sample(&phi(0.3, 0.1), big()).unwrap());
    let gg = j_conj(&j_conj(&g));
    assert_eq!(on_grid(gg.payload()).values(), on_grid(g.payload()).values());
}

#[test]
fn conjugation_swaps_offdiagonal_labels() {
    let (a, b) = (PhasePoint::d1(0.2, 0.4), PhasePoint::d1(-0.5, 0.1));
    let rab = SquareKet::new(wigner_offdiag(&a, &b).unwrap());
    let rba = wigner_offdiag(&b, &a).unwrap();
    assert!(analytic(j_conj(&rab).payload()).approx_eq(&rba, 1e-12));
    let ra = SquareKet::new(rho(0.7, -0.2));
    assert!(analytic(j_conj(&ra).payload()).approx_eq(analytic(ra.payload()), 0.0));
}

#[test]
fn antiunitarity_of_j() {
    let a = SquareKet::new(wigner_offdiag(&PhasePoint::d1(0.1, 0.2), &PhasePoint::d1(0.4, -0.3)).unwrap());
    let g = SquareKet::new(phi(-0.2, 0.5).scale(C64::new(0.5, 0.7)));
    let lhs = ket_inner(&j_conj(&a), &j_conj(&g)).unwrap();
    let rhs = ket_inner(&g, &a).unwrap();
    assert!((lhs - rhs).norm() < 1e-9);
}

#[test]
fn left_action_fixes_coherent_projector_on_grid() {
    let r = grid(&rho(0.4, -0.3));
    let k = SquareKet::new(on_grid(&r).clone());
    let out = left_act(&r, &k).unwrap();
    assert!(on_grid(out.payload()).rel_l2(on_grid(&r)).unwrap() < 1e-6);
}

#[test]
fn left_and_right_actions_commute_on_grid() {
    let alpha = grid(&rho(0.3, 0.1).scale(C64::new(0.5, 0.5)));
    let gamma = grid(&rho(-0.4, 0.2));
    let k = SquareKet::new(sample(&phi(0.1, -0.2), big()).unwrap());
    let lr = left_act(&alpha, &right_act(&gamma, &k).unwrap()).unwrap();
    let rl = right_act(&gamma, &left_act(&alpha, &k).unwrap()).unwrap();
    let err = on_grid(lr.payload()).rel_l2(on_grid(rl.payload())).unwrap();
    assert!(err < 1e-9, "{err:e}");
}

#[test]
fn tilde_action_is_the_tilde_generator() {
    let k = SquareKet::new(rho(0.6, -0.1));
    let t = tilde_act(&Payload::Analytic(x_coord()), &k).unwrap();
    let gen = make_generator(1, GeneratorId::new(GeneratorKind::TranslationP(0), Realization::Tilde)).unwrap();
    let want = gen.apply(analytic(k.payload()), Bindings::default()).unwrap();
    for z in [[0.0, 0.0], [1.3, -0.4], [-0.6, 1.1]] {
        assert!((analytic(t.payload()).eval(&z) - want.eval(&z)).norm() < 1e-12);
    }
}

#[test]
fn expectations_of_coordinates_and_unit() {
    let (pa, xa) = (0.35, -0.8);
    let k = SquareKet::new(rho(pa, xa));
    let x = Payload::Analytic(x_coord());
    let p = Payload::Analytic(PolyGaussian::polynomial(1, Poly::var(2, 0)).unwrap());
    let one = Payload::Analytic(PolyGaussian::constant(1, C64::new(1.0, 0.0)));
    assert!((expectation(&x, &k).unwrap() - 2.0 * xa).abs() < 1e-10);
    assert!((expectation(&p, &k).unwrap() - 2.0 * pa).abs() < 1e-10);
    assert!((expectation(&one, &k).unwrap() - 1.0).abs() < 1e-10);
    let kg = SquareKet::new(sample(&rho(pa, xa), big()).unwrap());
    let xg = Payload::Grid(GridFunction::coordinate_x(big()));
    assert!((expectation(&xg, &kg).unwrap() - 2.0 * xa).abs() < 1e-8);
}

#[test]
fn transition_probability_matches_coherent_overlap() {
    let one = Payload::Analytic(PolyGaussian::constant(1, C64::new(1.0, 0.0)));
    for (a, b) in [((0.0, 0.0), (0.5, 0.0)), ((0.2, -0.3), (-0.4, 0.5)), ((1.0, 0.5), (0.7, 0.9))] {
        let got = transition_prob(&one, &Payload::Analytic(phi(a.0, a.1)), &Payload::Analytic(phi(b.0, b.1))).unwrap();
        assert!((got - overlap_sqr(a, b)).abs() < 1e-12);
        let ip = inner_product(&phi(a.0, a.1), &phi(b.0, b.1)).unwrap();
        assert!((ip.norm_sqr() - overlap_sqr(a, b)).abs() < 1e-12);
    }
    let one_g = Payload::Grid(GridFunction::constant(big(), C64::new(1.0, 0.0)));
    let (a, b) = ((0.2, -0.3), (-0.4, 0.5));
    let got = transition_prob(&one_g, &grid(&phi(a.0, a.1)), &grid(&phi(b.0, b.1))).unwrap();
    assert!((got - overlap_sqr(a, b)).abs() < 1e-8);
}

#[test]
fn pure_state_square_kets_reproduce_overlaps() {
    for (a, b) in [((0.0, 0.0), (0.3, 0.0)), ((0.2, -0.3), (-0.4, 0.5)), ((-1.0, 0.4), (-0.2, 0.1))] {
        let ra = pure_density(&Payload::Analytic(phi(a.0, a.1))).unwrap();
        let rb = pure_density(&Payload::Analytic(phi(b.0, b.1))).unwrap();
        let got = ket_inner(&ra, &rb).unwrap();
        assert!((got.re - overlap_sqr(a, b)).abs() < 1e-8 && got.im.abs() < 1e-8);
    }
    let (a, b) = ((0.2, -0.3), (-0.4, 0.5));
    let ra = pure_density(&grid(&phi(a.0, a.1))).unwrap();
    let rb = pure_density(&grid(&phi(b.0, b.1))).unwrap();
    let got = ket_inner(&ra, &rb).unwrap();
    assert!((got.re - overlap_sqr(a, b)).abs() < 1e-8 && got.im.abs() < 1e-8);
}

#[test]
fn gns_inner_product_of_unit_and_position() {
    let one = Payload::Analytic(PolyGaussian::constant(1, C64::new(1.0, 0.0)));
    assert!((gns_inner(&one, &one).unwrap() - 1.0).norm() < 1e-12);
    // (1/pi) int |x - i p|^2 e^{-(p^2 + x^2)} = 1
    let x = Payload::Analytic(x_coord());
    assert!((gns_inner(&x, &x).unwrap() - 1.0).norm() < 1e-12);
}

#[test]
fn gns_inner_product_equals_wavefunction_inner_product() {
    let phi0 = sample(&phi(0.0, 0.0), big()).unwrap();
    let cases = [
        (rho(0.3, -0.2).scale(C64::new(0.4, 0.2)), phi(-0.1, 0.6)),
        (phi(0.5, 0.5), rho(-0.4, 0.1).scale(C64::new(0.0, 1.0))),
    ];
    for (a, b) in cases {
        let (ag, bg) = (sample(&a, big()).unwrap(), sample(&b, big()).unwrap());
        let got = gns_inner(&Payload::Grid(ag.clone()), &Payload::Grid(bg.clone())).unwrap();
        let a0 = wwgm::star_numeric::star(&ag, &phi0).unwrap();
        let b0 = wwgm::star_numeric::star(&bg, &phi0).unwrap();
        let want = inner_grid(&a0, &b0).unwrap();
        assert!((got - want).norm() < 1e-6, "{got} vs {want}");
        let exact = gns_inner(&Payload::Analytic(a), &Payload::Analytic(b)).unwrap();
        assert!((got - exact).norm() < 1e-6, "{got} vs {exact}");
    }
}

#[test]
fn sandwiching_by_real_observables_stays_in_the_cone() {
    let lattice: Vec<PhasePoint> =
        (-3..=3).flat_map(|i| (-3..=3).map(move |j| PhasePoint::d1(0.5 * i as f64, 0.5 * j as f64))).collect();
    let k = SquareKet::new(rho(0.2, 0.1));
    let m0 = cone_membership(&k, &lattice).unwrap();
    assert!(m0.is_real && m0.positivity_witness > 0.0);
    for (p, x) in [(0.0, 0.0), (0.6, -0.4), (-1.0, 0.3)] {
        let alpha = Payload::Analytic(rho(p, x));
        let s = left_act(&alpha, &right_act(&alpha, &k).unwrap()).unwrap();
        let m = cone_membership(&s, &lattice).unwrap();
        assert!(m.is_real);
        assert!(m.positivity_witness >= -1e-9);
    }
}
