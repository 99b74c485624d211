use nilweyl::exact::{q, qfrac};
use nilweyl::liecore::{
    tangent_group_exp, AlgebraElement, Functional, GroupElement, NilpotentAlgebra, TangentElement,
};
use nilweyl::orbit::{Orbit, OrbitData};
use nilweyl::repgrid::{
    dpitilde_apply, gaussian_window, generic, pitilde_apply, pitilde_apply_f64, schrodinger_apply,
    GridFunction, ReferenceWindow, Representation, ResampleMode, SchrodingerRep, TildeRep, C64,
};
use nilweyl::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn heis_orbit() -> Orbit {
    OrbitData::new(&Functional::dual_basis(&NilpotentAlgebra::heisenberg(), 0)).unwrap()
}

fn f4_orbit() -> Orbit {
    OrbitData::new(&Functional::dual_basis(&NilpotentAlgebra::filiform4(), 0)).unwrap()
}

fn random_vector<R: Representation>(rep: &R, rng: &mut ChaCha8Rng) -> GridFunction {
    let n = rep.hilbert_lattice().len();
    rep.new_vector(
        (0..n)
            .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect(),
    )
    .unwrap()
}

fn random_predual<R: Representation>(rep: &R, rng: &mut ChaCha8Rng) -> GridFunction {
    let n = rep.predual_lattice().len();
    rep.new_predual(
        (0..n)
            .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect(),
    )
    .unwrap()
}

/// Gaussian bump in chart coordinates with a random centre and linear phase.
fn bump<R: Representation>(rep: &R, rng: &mut ChaCha8Rng) -> GridFunction {
    let d = rep.hilbert_lattice().dim();
    let c: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let k: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let s = rng.gen_range(0.8..1.2);
    let f = rep.vector_from_fn(&|t: &[f64]| {
        let r2: f64 = t.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum();
        let ph: f64 = t.iter().zip(&k).map(|(a, b)| a * b).sum();
        Complex64::from_polar((-r2 / (2.0 * s * s)).exp(), ph)
    });
    ReferenceWindow::normalized(&f).unwrap().function().clone()
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn tilde_fast_paths_match_generic() {
    for orbit in [heis_orbit(), f4_orbit()] {
        let rep = TildeRep::balanced(&orbit, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_vector(&rep, &mut rng);
        let phi = random_vector(&rep, &mut rng);
        let c = random_predual(&rep, &mut rng);

        let a = rep.ambiguity(&f, &phi).unwrap();
        let b = generic::ambiguity(&rep, &f, &phi).unwrap();
        assert!(max_diff(a.values(), b.values()) < 1e-12);

        let a = rep.synthesize(&c, &phi).unwrap();
        let b = generic::synthesize(&rep, &c, &phi).unwrap();
        assert!(max_diff(a.values(), b.values()) < 1e-12);

        let a = rep.assemble(&c).unwrap();
        let b = generic::assemble(&rep, &c).unwrap();
        assert!((a.matrix() - b.matrix()).camax() < 1e-12);

        let a = rep.trace_pairings(&b).unwrap();
        let b = generic::trace_pairings(&rep, &b).unwrap();
        assert!(max_diff(a.values(), b.values()) < 1e-11);

        let f2 = random_vector(&rep, &mut rng);
        let phi2 = random_vector(&rep, &mut rng);
        let p = rep.ambiguity_pairing(&f, &phi, &f2, &phi2).unwrap();
        let q = generic::ambiguity(&rep, &f, &phi)
            .unwrap()
            .inner(&generic::ambiguity(&rep, &f2, &phi2).unwrap())
            .unwrap();
        assert!((p - q).norm() < 1e-12 * q.norm().max(1.0));
    }
}

#[test]
fn node_operators_are_exponentials_of_the_tangent_group() {
    for orbit in [heis_orbit(), f4_orbit()] {
        let rep = TildeRep::balanced(&orbit, 8).unwrap();
        let g = orbit.algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_vector(&rep, &mut rng);
        for _ in 0..20 {
            let node = rng.gen_range(0..rep.predual_lattice().len());
            let (yi, xi) = rep.split_node(node);
            let y = rep.embed_predual(&rep.y_lattice().point(yi));
            let x = rep.embed_predual(&rep.x_lattice().point(xi));
            let fiber = g.exp_ad_integral_f64(&x) * nalgebra::DVector::from_column_slice(&y);
            let direct =
                pitilde_apply_f64(&rep, &x, fiber.as_slice(), &f, ResampleMode::AffineOnly)
                    .unwrap();
            let m = rep.node_operator(node).unwrap();
            assert!(max_diff(&m.apply(f.values()), direct.values()) < 1e-12);
        }
    }
}

#[test]
fn pitilde_examples() {
    let orbit = heis_orbit();
    let g = orbit.algebra().clone();
    let rep = TildeRep::balanced(&orbit, 64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = bump(&rep, &mut rng);
    let id = pitilde_apply(
        &rep,
        &GroupElement::identity(&g),
        &AlgebraElement::zero(&g),
        &f,
        ResampleMode::AffineOnly,
    )
    .unwrap();
    assert_eq!(id.values(), f.values());
    // Y = X2 multiplies by e^{i t2}
    let m = pitilde_apply(
        &rep,
        &GroupElement::identity(&g),
        &AlgebraElement::basis(&g, 1),
        &f,
        ResampleMode::AffineOnly,
    )
    .unwrap();
    let lat = rep.hilbert_lattice();
    for i in 0..lat.len() {
        let t2 = lat.point(i)[0];
        assert!((m.values()[i] - f.values()[i] * Complex64::from_polar(1.0, t2)).norm() < 1e-14);
    }
}

fn random_tangent(g: &nilweyl::liecore::Algebra, rng: &mut ChaCha8Rng) -> TangentElement {
    let n = g.dim();
    let r = |rng: &mut ChaCha8Rng| qfrac(rng.gen_range(-12..=12), 8);
    let x = AlgebraElement::new(g, (0..n).map(|_| r(rng)).collect()).unwrap();
    let y = AlgebraElement::new(g, (0..n).map(|_| r(rng)).collect()).unwrap();
    tangent_group_exp(&x, &y).unwrap()
}

fn apply_tangent(
    rep: &TildeRep,
    a: &TangentElement,
    f: &GridFunction,
    mode: ResampleMode,
) -> GridFunction {
    let g = rep.orbit().algebra();
    let y = AlgebraElement::new(g, a.fiber.clone()).unwrap();
    pitilde_apply(rep, &a.base, &y, f, mode).unwrap()
}

#[test]
fn pitilde_is_a_unitary_homomorphism_on_heis3() {
    let orbit = heis_orbit();
    let rep = TildeRep::balanced(&orbit, 64).unwrap();
    let g = orbit.algebra().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let f = bump(&rep, &mut rng);
        let a = random_tangent(&g, &mut rng);
        let b = random_tangent(&g, &mut rng);
        let mode = ResampleMode::AffineOnly;
        let fb = apply_tangent(&rep, &b, &f, mode);
        let fab = apply_tangent(&rep, &a, &fb, mode);
        let direct = apply_tangent(&rep, &a.multiply(&b).unwrap(), &f, mode);
        assert!(fab.sub(&direct).unwrap().norm() <= 1e-9 * f.norm());
        assert!((fb.norm() - f.norm()).abs() <= 1e-9 * f.norm());
    }
}

#[test]
fn pitilde_group_law_on_filiform_with_interpolation() {
    let orbit = f4_orbit();
    let rep = TildeRep::balanced(&orbit, 64).unwrap();
    let g = orbit.algebra().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = bump(&rep, &mut rng);
    let small = |rng: &mut ChaCha8Rng| {
        let x = AlgebraElement::new(
            &g,
            (0..4).map(|_| qfrac(rng.gen_range(-3..=3), 8)).collect(),
        )
        .unwrap();
        let y = AlgebraElement::new(
            &g,
            (0..4).map(|_| qfrac(rng.gen_range(-8..=8), 8)).collect(),
        )
        .unwrap();
        tangent_group_exp(&x, &y).unwrap()
    };
    for _ in 0..4 {
        let a = small(&mut rng);
        let b = small(&mut rng);
        let mode = ResampleMode::Interpolate;
        let fab = apply_tangent(&rep, &a, &apply_tangent(&rep, &b, &f, mode), mode);
        let direct = apply_tangent(&rep, &a.multiply(&b).unwrap(), &f, mode);
        assert!(fab.sub(&direct).unwrap().norm() <= 1e-6 * f.norm());
    }
}

#[test]
fn sheared_action_needs_interpolation_only_when_not_affine() {
    // f4 acts affinely in the chart, so the exact path accepts shears
    let orbit = f4_orbit();
    let rep = TildeRep::balanced(&orbit, 16).unwrap();
    let g = orbit.algebra().clone();
    let f =
        rep.vector_from_fn(&|t: &[f64]| Complex64::new((-(t[0] * t[0] + t[1] * t[1])).exp(), 0.0));
    let el = GroupElement::exp(&AlgebraElement::basis(&g, 2).scale(&q(1)));
    assert!(pitilde_apply(
        &rep,
        &el,
        &AlgebraElement::zero(&g),
        &f,
        ResampleMode::AffineOnly
    )
    .is_ok());
    // n5 orbits of generic functionals have polynomial chart actions
    let n4 = NilpotentAlgebra::strictly_upper(4);
    let xi = Functional::new(&n4, vec![q(1), q(0), q(0), q(0), q(0), q(0)]).unwrap();
    let o = OrbitData::new(&xi).unwrap();
    if !o.chart_map().is_affine() {
        match TildeRep::balanced(&o, 4) {
            Err(Error::UnsupportedRegime(_)) | Ok(_) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn center_acts_by_scalars() {
    let orbit = heis_orbit();
    let rep = TildeRep::balanced(&orbit, 64).unwrap();
    let g = orbit.algebra().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = bump(&rep, &mut rng);
    let z = GroupElement::exp(&AlgebraElement::basis(&g, 0).scale(&qfrac(7, 3)));
    let y = AlgebraElement::basis(&g, 0).scale(&qfrac(-5, 4));
    let out = pitilde_apply(&rep, &z, &y, &f, ResampleMode::AffineOnly).unwrap();
    let ratios: Vec<C64> = out
        .values()
        .iter()
        .zip(f.values())
        .filter(|(_, b)| b.norm() > 1e-6)
        .map(|(a, b)| a / b)
        .collect();
    let mean = ratios.iter().sum::<C64>() / ratios.len() as f64;
    let var = ratios.iter().map(|r| (r - mean).norm_sqr()).sum::<f64>() / ratios.len() as f64;
    assert!(var < 1e-18);
    assert!((mean - Complex64::from_polar(1.0, -1.25)).norm() < 1e-12);
}

#[test]
fn derived_representation() {
    let orbit = heis_orbit();
    let rep = TildeRep::balanced(&orbit, 64).unwrap();
    let g = orbit.algebra().clone();
    let f = gaussian_window(&rep, 1.0).unwrap().function().clone();
    let zero = dpitilde_apply(
        &rep,
        &AlgebraElement::zero(&g),
        &AlgebraElement::zero(&g),
        &f,
    )
    .unwrap();
    assert_eq!(zero.max_abs(), 0.0);
    let m = dpitilde_apply(
        &rep,
        &AlgebraElement::zero(&g),
        &AlgebraElement::basis(&g, 1),
        &f,
    )
    .unwrap();
    let lat = rep.hilbert_lattice();
    for i in 0..lat.len() {
        let t = lat.point(i);
        assert!((m.values()[i] - C64::new(0.0, t[0]) * f.values()[i]).norm() < 1e-14);
    }
    // first-order consistency with the group action
    let x = AlgebraElement::new(&g, vec![q(0), qfrac(1, 2), q(-1)]).unwrap();
    let y = AlgebraElement::new(&g, vec![q(1), qfrac(-1, 3), qfrac(1, 2)]).unwrap();
    let df = dpitilde_apply(&rep, &x, &y, &f).unwrap();
    let mut errs = Vec::new();
    for h in [qfrac(1, 100), qfrac(1, 1000), qfrac(1, 10000)] {
        let e = tangent_group_exp(&x.scale(&h), &y.scale(&h)).unwrap();
        let moved = apply_tangent(&rep, &e, &f, ResampleMode::AffineOnly);
        let hf = nilweyl::exact::to_f64(&h);
        let fd = moved.sub(&f).unwrap().scale(C64::new(1.0 / hf, 0.0));
        errs.push(fd.sub(&df).unwrap().norm());
    }
    assert!(
        errs[1] < errs[0] / 5.0 && errs[2] < errs[1] / 5.0,
        "{errs:?}"
    );
    // guard
    let flat = rep.vector_from_fn(&|_| C64::new(1.0, 0.0));
    assert!(matches!(
        dpitilde_apply(&rep, &x, &y, &flat),
        Err(Error::InsufficientDecay(_))
    ));
}

#[test]
fn schrodinger_examples() {
    let rep = SchrodingerRep::balanced(64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = bump(&rep, &mut rng);
    assert_eq!(
        schrodinger_apply(&rep, 0.0, 0.0, 0.0, &f).unwrap().values(),
        f.values()
    );
    let ph = schrodinger_apply(&rep, 0.0, 0.0, 0.7, &f).unwrap();
    assert!(
        max_diff(
            ph.values(),
            f.scale(Complex64::from_polar(1.0, 0.7)).values()
        ) < 1e-15
    );
    // A B A⁻¹ B⁻¹ = e^{ipq}
    let (p, q) = (0.6, 0.45);
    let s = |p, q, v: &GridFunction| schrodinger_apply(&rep, p, q, 0.0, v).unwrap();
    let out = s(p, 0.0, &s(0.0, q, &s(-p, 0.0, &s(0.0, -q, &f))));
    let expect = f.scale(Complex64::from_polar(1.0, p * q));
    assert!(out.sub(&expect).unwrap().norm() < 1e-10);
    assert!(schrodinger_apply(&rep, 0.0, 50.0, 0.0, &f).is_err());
}

#[test]
fn schrodinger_nodes_realize_exponentials() {
    let rep = SchrodingerRep::balanced(16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = random_vector(&rep, &mut rng);
    for node in [0usize, 17, 100, 255] {
        let x = rep.predual_lattice().point(node);
        let m = rep.node_operator(node).unwrap();
        // exp(x2 X2 + x3 X3) = π(p = x2, q = -x3)
        let direct = schrodinger_apply(&rep, x[0], -x[1], 0.0, &f).unwrap();
        assert!(max_diff(&m.apply(f.values()), direct.values()) < 1e-12);
    }
}

#[test]
fn gaussian_window_properties() {
    let rep = TildeRep::balanced(&heis_orbit(), 64).unwrap();
    let w = gaussian_window(&rep, 1.0).unwrap();
    assert!((w.function().norm() - 1.0).abs() < 1e-12);
    let lat = rep.hilbert_lattice();
    let v = w.function().values();
    for i in 0..lat.len() {
        let m = lat.unravel(i);
        if m.iter().all(|&k| k > 0) {
            let neg: Vec<usize> = m.iter().map(|&k| 64 - k).collect();
            assert!((v[i] - v[lat.ravel(&neg)]).norm() < 1e-16);
        }
    }
    assert!(gaussian_window(&rep, 5.0).is_err());
}
