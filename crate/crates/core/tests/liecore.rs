use nilweyl::exact::{factorial, q, qfrac, QMatrix, Q};
use nilweyl::liecore::*;
use nilweyl::Error;
use num_traits::Zero;
use proptest::prelude::*;

/// Basis of strictly upper triangular m×m matrices in the order used by `strictly_upper`.
fn upper_basis(m: usize) -> Vec<(usize, usize)> {
    let mut basis = Vec::new();
    for h in (1..m).rev() {
        for a in 0..m - h {
            basis.push((a, a + h));
        }
    }
    basis
}

fn to_matrix(m: usize, coords: &[Q]) -> QMatrix {
    let mut a = QMatrix::zeros(m, m);
    for (c, &(i, j)) in coords.iter().zip(&upper_basis(m)) {
        a[(i, j)] = c.clone();
    }
    a
}

fn from_matrix(m: usize, a: &QMatrix) -> Vec<Q> {
    upper_basis(m)
        .iter()
        .map(|&(i, j)| a[(i, j)].clone())
        .collect()
}

fn mexp(a: &QMatrix) -> QMatrix {
    let n = a.rows();
    let mut acc = QMatrix::identity(n);
    let mut p = QMatrix::identity(n);
    for k in 1..n {
        p = &p * a;
        acc = &acc + &p.scale(&factorial(k).recip());
    }
    acc
}

fn mlog(u: &QMatrix) -> QMatrix {
    let n = u.rows();
    let nil = u - &QMatrix::identity(n);
    let mut acc = QMatrix::zeros(n, n);
    let mut p = QMatrix::identity(n);
    for k in 1..n {
        p = &p * &nil;
        let c = if k % 2 == 1 {
            qfrac(1, k as i64)
        } else {
            qfrac(-1, k as i64)
        };
        acc = &acc + &p.scale(&c);
    }
    acc
}

fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| qfrac(n, d))
}

fn coords(n: usize) -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec(small_q(), n)
}

#[test]
fn heisenberg_product_matches_matrix_group() {
    let h = NilpotentAlgebra::heisenberg();
    let (s, t) = (qfrac(3, 2), qfrac(-2, 5));
    let a = GroupElement::exp(&AlgebraElement::basis(&h, 2).scale(&s));
    let b = GroupElement::exp(&AlgebraElement::basis(&h, 1).scale(&t));
    let p = group_multiply(&a, &b).unwrap();
    assert_eq!(p.log_coords(), &[&s * &t / q(2), t.clone(), s.clone()]);

    // X1 = E13, X2 = E23, X3 = E12, so that [X3, X2] = [E12, E23] = E13.
    let emb = |c: &[Q]| {
        let mut m = QMatrix::zeros(3, 3);
        m[(0, 2)] = c[0].clone();
        m[(1, 2)] = c[1].clone();
        m[(0, 1)] = c[2].clone();
        m
    };
    let lhs = mlog(&(&mexp(&emb(a.log_coords())) * &mexp(&emb(b.log_coords()))));
    assert_eq!(lhs, emb(p.log_coords()));
}

#[test]
fn bch_matches_unitriangular_groups_up_to_class_six() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for m in 2..=7 {
        let alg = NilpotentAlgebra::strictly_upper(m);
        assert_eq!(alg.class(), m - 1);
        let trials = if m == 7 { 2 } else { 4 };
        for _ in 0..trials {
            let mut draw = || -> Vec<Q> {
                (0..alg.dim())
                    .map(|_| qfrac(rng.gen_range(-3..=3), rng.gen_range(1..=3)))
                    .collect()
            };
            let (x, y) = (draw(), draw());
            let g = GroupElement::from_log(&alg, x.clone()).unwrap();
            let h = GroupElement::from_log(&alg, y.clone()).unwrap();
            let z = group_multiply(&g, &h).unwrap();
            let oracle = mlog(&(&mexp(&to_matrix(m, &x)) * &mexp(&to_matrix(m, &y))));
            assert_eq!(z.log_coords(), from_matrix(m, &oracle).as_slice(), "n{m}");
        }
    }
}

#[test]
fn class_above_six_is_rejected() {
    let alg = NilpotentAlgebra::strictly_upper(8);
    let g = GroupElement::exp(&AlgebraElement::basis(&alg, 0));
    assert!(matches!(
        group_multiply(&g, &g),
        Err(Error::BchDepth { class: 7, max: 6 })
    ));
}

#[test]
fn float_bch_agrees_with_exact() {
    let alg = NilpotentAlgebra::strictly_upper(5);
    let x: Vec<Q> = (0..alg.dim()).map(|i| qfrac(i as i64 - 4, 3)).collect();
    let y: Vec<Q> = (0..alg.dim()).map(|i| qfrac(2 - i as i64, 5)).collect();
    let exact = group_multiply(
        &GroupElement::from_log(&alg, x.clone()).unwrap(),
        &GroupElement::from_log(&alg, y.clone()).unwrap(),
    )
    .unwrap();
    let xf: Vec<f64> = x.iter().map(nilweyl::exact::to_f64).collect();
    let yf: Vec<f64> = y.iter().map(nilweyl::exact::to_f64).collect();
    let approx = group_multiply_f64(&alg, &xf, &yf).unwrap();
    for (a, b) in exact.log_coords().iter().zip(&approx) {
        assert!((nilweyl::exact::to_f64(a) - b).abs() < 1e-12);
    }
}

#[test]
fn abelian_product_is_addition() {
    let a = NilpotentAlgebra::abelian(3);
    let g = GroupElement::from_log(&a, vec![q(1), q(2), qfrac(1, 3)]).unwrap();
    let h = GroupElement::from_log(&a, vec![q(-1), q(5), qfrac(1, 6)]).unwrap();
    assert_eq!(
        group_multiply(&g, &h).unwrap().log_coords(),
        &[q(0), q(7), qfrac(1, 2)]
    );
}

#[test]
fn tangent_algebra_bracket_matches_formula() {
    // [(X1,Y1),(X2,Y2)] = ([X1,X2], [X1,Y2] - [X2,Y1])
    for g in [
        NilpotentAlgebra::heisenberg(),
        NilpotentAlgebra::filiform4(),
    ] {
        let n = g.dim();
        let t = tangent_algebra(&g);
        assert_eq!(t.dim(), 2 * n);
        let pack = |x: &[Q], y: &[Q]| -> Vec<Q> { y.iter().chain(x).cloned().collect() };
        for a in 0..2 * n {
            for b in 0..2 * n {
                let ea: Vec<Q> = (0..2 * n)
                    .map(|i| if i == a { q(1) } else { q(0) })
                    .collect();
                let eb: Vec<Q> = (0..2 * n)
                    .map(|i| if i == b { q(1) } else { q(0) })
                    .collect();
                let (y1, x1) = ea.split_at(n);
                let (y2, x2) = eb.split_at(n);
                let first = g.bracket_coords(x1, x2);
                let s1 = g.bracket_coords(x1, y2);
                let s2 = g.bracket_coords(x2, y1);
                let second: Vec<Q> = s1.iter().zip(&s2).map(|(u, v)| u - v).collect();
                assert_eq!(t.bracket_coords(&ea, &eb), pack(&first, &second));
            }
        }
    }
}

#[test]
fn center_of_tangent_heisenberg_is_z_times_z() {
    let h = NilpotentAlgebra::heisenberg();
    let t = tangent_algebra(&h);
    let z = t.center_basis();
    let m = QMatrix::from_rows(&z);
    assert_eq!(m.rank(), 2);
    // Basis order (0,X1),(0,X2),(0,X3),(X1,0),(X2,0),(X3,0): z × z = span{e0, e3}.
    let expected = vec![
        vec![q(1), q(0), q(0), q(0), q(0), q(0)],
        vec![q(0), q(0), q(0), q(1), q(0), q(0)],
    ];
    let stacked = QMatrix::from_rows(&[z, expected].concat());
    assert_eq!(stacked.rank(), 2);
}

#[test]
fn tangent_exponential_is_consistent_with_semidirect_bch() {
    let g = NilpotentAlgebra::filiform4();
    let t = tangent_algebra(&g);
    let mk = |c: &[i64]| AlgebraElement::new(&g, c.iter().map(|&v| qfrac(v, 2)).collect()).unwrap();
    let a = tangent_group_exp(&mk(&[1, 0, -2, 3]), &mk(&[0, 1, 1, -1])).unwrap();
    let b = tangent_group_exp(&mk(&[-1, 2, 1, 1]), &mk(&[2, -3, 0, 1])).unwrap();
    let prod = a.multiply(&b).unwrap();
    let via_bch = group_multiply(
        &a.to_group_element(&t).unwrap(),
        &b.to_group_element(&t).unwrap(),
    )
    .unwrap();
    assert_eq!(prod.to_group_element(&t).unwrap(), via_bch);
    assert_eq!(
        TangentElement::from_group_element(&g, &via_bch).unwrap(),
        prod
    );
    let id = a.multiply(&a.inverse()).unwrap();
    assert_eq!(id, TangentElement::identity(&g));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_law_is_associative(x in coords(4), y in coords(4), z in coords(4)) {
        let f = NilpotentAlgebra::filiform4();
        let (a, b, c) = (
            GroupElement::from_log(&f, x).unwrap(),
            GroupElement::from_log(&f, y).unwrap(),
            GroupElement::from_log(&f, z).unwrap(),
        );
        let l = group_multiply(&group_multiply(&a, &b).unwrap(), &c).unwrap();
        let r = group_multiply(&a, &group_multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        let e = group_multiply(&a, &a.inverse()).unwrap();
        prop_assert!(e.is_identity());
        prop_assert_eq!(group_multiply(&a, &GroupElement::identity(&f)).unwrap(), a);
    }

    #[test]
    fn ad_is_nilpotent_and_exp_ad_unimodular(x in coords(6)) {
        let alg = NilpotentAlgebra::strictly_upper(4);
        let el = AlgebraElement::new(&alg, x).unwrap();
        prop_assert!(ad_matrix(&el).pow(alg.dim()).is_zero());
        prop_assert_eq!(exp_ad(&el).determinant(), q(1));
        let back = exp_ad(&el.scale(&q(-1)));
        prop_assert_eq!(&exp_ad(&el) * &back, QMatrix::identity(alg.dim()));
    }

    #[test]
    fn adjoint_is_a_homomorphism(x in coords(4), y in coords(4)) {
        let f = NilpotentAlgebra::filiform4();
        let a = GroupElement::from_log(&f, x).unwrap();
        let b = GroupElement::from_log(&f, y).unwrap();
        let ab = group_multiply(&a, &b).unwrap();
        prop_assert_eq!(ab.adjoint(), &a.adjoint() * &b.adjoint());
    }

    #[test]
    fn bracket_is_antisymmetric(x in coords(4), y in coords(4)) {
        let f = NilpotentAlgebra::filiform4();
        let (a, b) = (AlgebraElement::new(&f, x).unwrap(), AlgebraElement::new(&f, y).unwrap());
        let ab = bracket(&a, &b).unwrap();
        let ba = bracket(&b, &a).unwrap();
        prop_assert!(ab.add(&ba).unwrap().is_zero());
        prop_assert!(bracket(&a, &a).unwrap().coords().iter().all(Zero::is_zero));
    }
}
