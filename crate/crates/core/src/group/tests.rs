use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

type C = Complex<f64>;

fn series_exp(m: Mat2<f64>, terms: usize) -> Mat2<f64> {
    let mut acc = Mat2::identity();
    let mut term = Mat2::identity();
    for k in 1..terms {
        term = (term * m).scale_re(1.0 / k as f64);
        acc = acc + term;
    }
    acc
}

fn random_vector(rng: &mut ChaCha8Rng, kind: GroupKind, scale: f64) -> AlgebraVector<f64> {
    let c: Vec<f64> = (0..kind.dim()).map(|_| scale * (2.0 * rng.random::<f64>() - 1.0)).collect();
    AlgebraVector::new(kind, &c).unwrap()
}

fn su2(g: GroupElement<f64>) -> Mat2<f64> {
    match g {
        GroupElement::Su2(m) => m,
        _ => unreachable!(),
    }
}

#[test]
fn u1_exp_special_values() {
    let one = exp_map(&AlgebraVector::u1(0.0));
    assert_eq!(one, GroupElement::U1(C::new(1.0, 0.0)));
    let half_turn = exp_map(&AlgebraVector::u1(std::f64::consts::PI));
    assert!(half_turn.distance(&GroupElement::U1(C::new(-1.0, 0.0))) < 1e-15);
}

#[test]
fn su2_exp_matches_power_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let dir = random_vector(&mut rng, GroupKind::Su2, 1.0);
        let x = dir.scale(3.0 * rng.random::<f64>() / dir.norm());
        let oracle = series_exp(x.to_su2_matrix(), 20);
        let g = su2(exp_map(&x));
        assert!((g - oracle).frobenius_norm() < 1e-12);
        assert!(GroupElement::Su2(g).unitarity_defect() < 1e-12);
    }
}

#[test]
fn complex_exp_matches_power_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let x = random_vector(&mut rng, GroupKind::Su2, 1.5);
        let y = random_vector(&mut rng, GroupKind::Su2, 1.0);
        let m = x.to_su2_matrix() + y.to_su2_matrix().scale(C::new(0.0, 1.0));
        let oracle = series_exp(m, 30);
        let ComplexGroupElement::Su2(g) = exp_map_complex(&x, &y) else { unreachable!() };
        assert!((g - oracle).frobenius_norm() < 1e-11 * oracle.frobenius_norm().max(1.0));
        assert!((g.det() - C::new(1.0, 0.0)).norm() < 1e-10);
    }
    // U(1): exp(i x − y)
    let g = exp_map_complex(&AlgebraVector::u1(0.3), &AlgebraVector::u1(0.2));
    let ComplexGroupElement::U1(z) = g else { unreachable!() };
    assert!((z - C::new(-0.2, 0.3).exp()).norm() < 1e-15);
}

#[test]
fn small_angle_branch_is_continuous() {
    let x = AlgebraVector::su2([1e-6, -2e-6, 3e-7]);
    let oracle = series_exp(x.to_su2_matrix(), 10);
    assert!((su2(exp_map(&x)) - oracle).frobenius_norm() < 1e-16);
    let ComplexGroupElement::Su2(g) = exp_map_complex(&x, &x) else { unreachable!() };
    let m = x.to_su2_matrix() + x.to_su2_matrix().scale(C::new(0.0, 1.0));
    assert!((g - series_exp(m, 10)).frobenius_norm() < 1e-15);
}

#[test]
fn log_inverts_exp_inside_the_cut() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for kind in [GroupKind::U1, GroupKind::Su2] {
        for _ in 0..300 {
            let x = random_vector(&mut rng, kind, 3.0);
            let back = exp_map(&x).log_checked(1e-3).unwrap();
            assert!((back - x).norm() < 1e-10, "{x:?} → {back:?}");
        }
    }
    let minus_one = GroupElement::Su2(Mat2::identity().scale_re(-1.0));
    assert!(minus_one.log_checked(1e-6).is_err());
}

#[test]
fn polar_identity() {
    for kind in [GroupKind::U1, GroupKind::Su2] {
        let p = polar_decompose(&ComplexGroupElement::<f64>::identity(kind)).unwrap();
        assert!(p.x.distance(&GroupElement::identity(kind)) < 1e-15);
        assert!(p.y.norm() < 1e-15);
    }
}

#[test]
fn polar_of_positive_diagonal() {
    // g = diag(2, 1/2) is already positive: x = I, embed(Y) = −i·diag(ln 2, −ln 2)
    let g = ComplexGroupElement::Su2(Mat2::diag(C::new(2.0, 0.0), C::new(0.5, 0.0)));
    let p = polar_decompose(&g).unwrap();
    assert!(p.x.distance(&GroupElement::identity(GroupKind::Su2)) < 1e-14);
    let l2 = 2f64.ln();
    let expected = Mat2::diag(C::new(0.0, -l2), C::new(0.0, l2));
    assert!((p.y.to_su2_matrix() - expected).frobenius_norm() < 1e-14);
}

#[test]
fn polar_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for kind in [GroupKind::U1, GroupKind::Su2] {
        for _ in 0..1000 {
            let x1 = random_vector(&mut rng, kind, 3.0);
            let y = random_vector(&mut rng, kind, 2.0);
            let g = from_polar(&x1, &y);
            let p = polar_decompose(&g).unwrap();
            let back = p.reconstruct();
            let scale = match g {
                ComplexGroupElement::U1(z) => z.norm(),
                ComplexGroupElement::Su2(m) => m.frobenius_norm(),
            };
            assert!(back.distance(&g) / scale < 1e-9);
            // diffeomorphism: the coordinates come back too
            assert!((p.y - y).norm() < 1e-9);
            assert!(p.x.distance(&exp_map(&x1)) < 1e-9);
        }
    }
}

#[test]
fn polar_rejects_singular() {
    let g = ComplexGroupElement::Su2(Mat2::<f64>::zero());
    assert!(polar_decompose(&g).is_err());
    assert!(polar_decompose(&ComplexGroupElement::U1(C::new(0.0, 0.0))).is_err());
}

#[test]
fn long_product_chains_stay_on_the_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let steps: Vec<GroupElement<f64>> =
        (0..1000).map(|_| exp_map(&random_vector(&mut rng, GroupKind::Su2, 2.0))).collect();
    let chain = (0..1_000_000).map(|i| steps[i % steps.len()]);
    let g = ordered_product(GroupKind::Su2, chain);
    assert!(g.unitarity_defect() < 1e-12);

    let csteps: Vec<ComplexGroupElement<f64>> = (0..1000)
        .map(|_| {
            exp_map_complex(
                &random_vector(&mut rng, GroupKind::Su2, 0.05),
                &random_vector(&mut rng, GroupKind::Su2, 0.001),
            )
        })
        .collect();
    let h = ordered_product_complex(GroupKind::Su2, (0..1_000_000).map(|i| csteps[i % csteps.len()]));
    assert!((h.det() - C::new(1.0, 0.0)).norm() < 1e-10);
}

#[test]
fn haar_quadrature_normalization_and_orthogonality() {
    let kind = GroupKind::Su2;
    let one = haar_integrate(kind, |_| C::new(1.0, 0.0), HaarMode::Quadrature { level: 8 }).unwrap();
    assert!((one.value - C::new(1.0, 0.0)).norm() < 1e-14);
    let tr = haar_integrate(kind, |g: &GroupElement<f64>| g.trace(), HaarMode::Quadrature { level: 8 }).unwrap();
    assert!(tr.value.norm() < 1e-14);
    let tr2 = haar_integrate(kind, |g: &GroupElement<f64>| C::new(g.trace().norm_sqr(), 0.0), HaarMode::Quadrature {
        level: 8,
    })
    .unwrap();
    assert!((tr2.value - C::new(1.0, 0.0)).norm() < 1e-13);
    // Weyl fast path agrees
    let w = haar_integrate_class(kind, |g: &GroupElement<f64>| C::new(g.trace().norm_sqr(), 0.0), 16).unwrap();
    assert!((w.value - C::new(1.0, 0.0)).norm() < 1e-14);
    // matrix entries integrate to zero, |U_00|² to 1/2
    let e = haar_integrate(
        kind,
        |g: &GroupElement<f64>| C::new(su2(*g).m[0][0].norm_sqr(), 0.0),
        HaarMode::Quadrature { level: 8 },
    )
    .unwrap();
    assert!((e.value.re - 0.5).abs() < 1e-14);
}

#[test]
fn haar_rejects_bad_modes() {
    let f = |_: &GroupElement<f64>| C::new(1.0, 0.0);
    assert!(haar_integrate(GroupKind::U1, f, HaarMode::Quadrature { level: 0 }).is_err());
    assert!(haar_integrate(GroupKind::U1, f, HaarMode::MonteCarlo { samples: 0, seed: 1 }).is_err());
}

#[test]
fn haar_monte_carlo_is_left_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let a = exp_map(&random_vector(&mut rng, GroupKind::Su2, 3.0));
    let f = |g: &GroupElement<f64>| {
        let m = su2(*g);
        C::new((m.m[0][0].re + 0.3 * m.m[1][0].im).powi(2) + m.m[0][1].re, 0.0)
    };
    let mode = HaarMode::MonteCarlo { samples: 200_000, seed: 5 };
    let plain = haar_integrate(GroupKind::Su2, f, mode).unwrap();
    let shifted = haar_integrate(GroupKind::Su2, |g: &GroupElement<f64>| f(&(a * *g)), HaarMode::MonteCarlo {
        samples: 200_000,
        seed: 6,
    })
    .unwrap();
    let combined = (plain.error.powi(2) + shifted.error.powi(2)).sqrt();
    assert!((plain.value - shifted.value).norm() < 3.0 * combined);
    // and against the grid value
    let exact = haar_integrate(GroupKind::Su2, f, HaarMode::Quadrature { level: 10 }).unwrap();
    assert!((plain.value - exact.value).norm() < 4.0 * plain.error);
}

#[test]
fn f32_instantiation() {
    let x = AlgebraVector::<f32>::su2([0.3, -0.2, 0.5]);
    let g = exp_map(&x);
    assert!(g.unitarity_defect() < 1e-6);
    let back = g.log();
    assert!((back - x).norm() < 1e-5);
}

proptest! {
    #[test]
    fn one_parameter_subgroup(c in prop::array::uniform3(-1.5f64..1.5), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let x = AlgebraVector::su2(c);
        let lhs = exp_map(&x.scale(s + t));
        let rhs = exp_map(&x.scale(s)) * exp_map(&x.scale(t));
        prop_assert!(lhs.distance(&rhs) < 1e-10);
    }

    #[test]
    fn adjoint_action_is_isometric(c in prop::array::uniform3(-3.0f64..3.0), d in prop::array::uniform3(-3.0f64..3.0)) {
        let g = exp_map(&AlgebraVector::su2(c));
        let x = AlgebraVector::su2(d);
        prop_assert!((g.adjoint_action(&x).norm() - x.norm()).abs() < 1e-12);
    }

    #[test]
    fn polar_round_trip_property(c in prop::array::uniform3(-3.0f64..3.0), d in prop::array::uniform3(-2.0f64..2.0)) {
        let g = from_polar(&AlgebraVector::su2(c), &AlgebraVector::su2(d));
        let p = polar_decompose(&g).unwrap();
        prop_assert!((p.y - AlgebraVector::su2(d)).norm() < 1e-9);
    }
}

#[test]
fn inner_product_is_minus_twice_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let x = random_vector(&mut rng, GroupKind::Su2, 2.0);
        let y = random_vector(&mut rng, GroupKind::Su2, 2.0);
        let tr = (x.to_su2_matrix() * y.to_su2_matrix()).trace();
        assert!((x.dot(&y) + 2.0 * tr.re).abs() < 1e-13);
        assert!(tr.im.abs() < 1e-13);
        let m = x.to_su2_matrix();
        assert!((m + m.adjoint()).frobenius_norm() < 1e-15);
        assert!(m.trace().norm() < 1e-15);
    }
}
