use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;

use super::*;
use crate::group::{exp_map, haar_integrate, haar_integrate_class, sample_haar, torus_element, AlgebraVector};
use crate::group::{GroupElement, HaarMode, Mat2};
use crate::mc::McRng;

type C = Complex<f64>;

fn random_points(kind: GroupKind, n: usize, seed: u64) -> Vec<GroupElement<f64>> {
    let mut rng = McRng::seed_from_u64(seed);
    (0..n).map(|_| sample_haar(kind, &mut rng)).collect()
}

#[test]
fn irrep_examples() {
    let triv = irrep_info::<f64>(GroupKind::Su2, 0).unwrap();
    assert_eq!((triv.dim, triv.casimir), (1, 0.0));
    let fund = irrep_info::<f64>(GroupKind::Su2, 1).unwrap();
    assert_eq!(fund.dim, 2);
    assert!((fund.casimir - 0.75).abs() < 1e-15);
    assert_eq!(irrep_info::<f64>(GroupKind::U1, 2).unwrap().casimir, 4.0);
    assert_eq!(irrep_info::<f64>(GroupKind::U1, -3).unwrap().dim, 1);
    assert!(irrep_info::<f64>(GroupKind::Su2, -1).is_err());
}

#[test]
fn casimir_matches_finite_difference_oracle() {
    for kind in [GroupKind::U1, GroupKind::Su2] {
        let pts = random_points(kind, 20, 21);
        for label in 0..=4 {
            let c = irrep_info::<f64>(kind, label).unwrap().casimir;
            let oracle = casimir_oracle(kind, label, &pts, FD_GROUP_STEP).unwrap();
            assert!((oracle - c).abs() < 1e-6, "{kind} {label}: {oracle} vs {c}");
            // pointwise Δχ = −cχ
            for g in &pts {
                let chi = |h: &ComplexGroupElement<f64>| character(kind, label, h);
                let lap = fd_group_laplacian(chi, g, FD_GROUP_STEP);
                let expect = -chi(&g.complexify()) * c;
                assert!((lap - expect).norm() < 1e-6, "{kind} {label}");
            }
        }
    }
}

#[test]
fn casimir_oracle_flags_roundoff_dominated_steps() {
    let pts = random_points(GroupKind::Su2, 5, 22);
    assert!(casimir_oracle(GroupKind::Su2, 2, &pts, 1e-7).is_err());
}

#[test]
fn character_values() {
    let id = ComplexGroupElement::<f64>::identity(GroupKind::Su2);
    for n in 0..8 {
        assert!((character(GroupKind::Su2, n, &id) - C::new(n as f64 + 1.0, 0.0)).norm() < 1e-13);
    }
    let g = ComplexGroupElement::Su2(Mat2::diag(C::new(2.0, 0.0), C::new(0.5, 0.0)));
    assert!((character(GroupKind::Su2, 1, &g) - g.trace()).norm() < 1e-15);
    let weyl = |n: i32, z: f64| (z.powi(n + 1) - z.powi(-(n + 1))) / (z - 1.0 / z);
    // z² + 1 + z⁻² at z = 2
    assert!((character(GroupKind::Su2, 2, &g).re - 5.25).abs() < 1e-14);
    for n in 0..10 {
        let v = character(GroupKind::Su2, n as i64, &g);
        assert!((v.re - weyl(n, 2.0)).abs() < 1e-12 * weyl(n, 2.0));
    }
    // monomial continuation on C*
    let z = ComplexGroupElement::U1(C::from_polar(1.7, 0.4));
    let v = character(GroupKind::U1, 3, &z);
    assert!((v - C::from_polar(1.7f64.powi(3), 1.2)).norm() < 1e-13);
}

#[test]
fn rep_matrices_are_homomorphisms_with_character_traces() {
    let mut rng = McRng::seed_from_u64(23);
    for n in 0..6 {
        for _ in 0..5 {
            let a = exp_map_c(&mut rng);
            let b = exp_map_c(&mut rng);
            let ra = rep_matrix(n, &a).unwrap();
            let rb = rep_matrix(n, &b).unwrap();
            let rab = rep_matrix(n, &(a * b)).unwrap();
            assert!((&ra * &rb - &rab).norm() < 1e-10 * rab.norm().max(1.0));
            assert!((ra.trace() - character(GroupKind::Su2, n, &a)).norm() < 1e-10);
        }
    }
}

fn exp_map_c(rng: &mut McRng) -> ComplexGroupElement<f64> {
    use rand::Rng;
    let mut v = || AlgebraVector::su2([0, 1, 2].map(|_| rng.random::<f64>() * 2.0 - 1.0));
    crate::group::exp_map_complex(&v(), &v())
}

#[test]
fn characters_are_orthonormal() {
    let kind = GroupKind::Su2;
    for a in 0..=6 {
        for b in 0..=6 {
            let f = |g: &GroupElement<f64>| {
                let h = g.complexify();
                character(kind, a, &h) * character(kind, b, &h).conj()
            };
            let fast = haar_integrate_class(kind, f, 32).unwrap().value;
            let full = haar_integrate(kind, f, HaarMode::Quadrature { level: 16 }).unwrap().value;
            let delta = if a == b { 1.0 } else { 0.0 };
            assert!((fast - C::new(delta, 0.0)).norm() < 1e-12, "{a},{b}");
            assert!((full - C::new(delta, 0.0)).norm() < 1e-12, "{a},{b}");
        }
    }
    for a in -6..=6 {
        for b in -6..=6 {
            let f = |g: &GroupElement<f64>| {
                let h = g.complexify();
                character(GroupKind::U1, a, &h) * character(GroupKind::U1, b, &h).conj()
            };
            let v = haar_integrate(GroupKind::U1, f, HaarMode::Quadrature { level: 32 }).unwrap().value;
            assert!((v - C::new(if a == b { 1.0 } else { 0.0 }, 0.0)).norm() < 1e-13);
        }
    }
}

#[test]
fn u1_heat_kernel_matches_wrapped_gaussian() {
    let wrapped = |theta: f64, t: f64| {
        (-20..=20)
            .map(|m| {
                let x = theta + std::f64::consts::TAU * m as f64;
                (-x * x / (2.0 * t)).exp() / (std::f64::consts::TAU * t).sqrt()
            })
            .sum::<f64>()
            * std::f64::consts::TAU
    };
    // Haar measure is dθ/2π, so ρ_t is 2π times the Lebesgue density
    let g = torus_element(GroupKind::U1, 0.7).complexify();
    let v = heat_kernel(GroupKind::U1, 1.0, &g, 1e-13).unwrap();
    assert!((v.re - wrapped(0.7, 1.0)).abs() < 1e-10);
    for t in [0.3, 1.0, 4.0] {
        for i in 0..100 {
            let theta = -std::f64::consts::PI + std::f64::consts::TAU * i as f64 / 100.0;
            let g = torus_element(GroupKind::U1, theta).complexify();
            let v = heat_kernel_auto(GroupKind::U1, t, &g).unwrap();
            assert!((v.re - wrapped(theta, t)).abs() < 1e-10, "t={t} θ={theta}");
            assert!(v.im.abs() < 1e-12);
        }
    }
}

#[test]
fn heat_kernel_is_normalized() {
    for t in [0.5, 1.0, 2.0] {
        for kind in [GroupKind::U1, GroupKind::Su2] {
            let rho = |g: &GroupElement<f64>| heat_kernel_auto(kind, t, &g.complexify()).unwrap();
            let fast = haar_integrate_class(kind, rho, 64).unwrap();
            assert!((fast.value - C::new(1.0, 0.0)).norm() < 1e-9, "{kind} t={t}");
        }
        let rho = |g: &GroupElement<f64>| heat_kernel_auto(GroupKind::Su2, t, &g.complexify()).unwrap();
        let full = haar_integrate(GroupKind::Su2, rho, HaarMode::Quadrature { level: 24 }).unwrap();
        assert!((full.value - C::new(1.0, 0.0)).norm() < 1e-9, "t={t}");
    }
}

#[test]
fn heat_kernel_is_positive_and_flattens() {
    let grid: Vec<f64> = (0..=400).map(|i| std::f64::consts::PI * i as f64 / 400.0).collect();
    for kind in [GroupKind::U1, GroupKind::Su2] {
        for t in [0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0] {
            for &th in &grid {
                let v = heat_kernel_auto(kind, t, &torus_element(kind, th).complexify()).unwrap();
                // non-negative up to the series truncation tolerance
                assert!(v.re >= -DEFAULT_TOL_COMPACT, "{kind} t={t} θ={th}: {}", v.re);
            }
        }
        let sup = |t: f64| {
            grid.iter()
                .map(|&th| (heat_kernel_auto(kind, t, &torus_element(kind, th).complexify()).unwrap().re - 1.0).abs())
                .fold(0.0, f64::max)
        };
        let (a, b, c) = (sup(1.0), sup(5.0), sup(25.0));
        assert!(a > b && b > c && c < 1e-3, "{kind}: {a} {b} {c}");
    }
}

#[test]
fn heat_kernel_rejects_bad_input_and_reports_divergence() {
    let id = ComplexGroupElement::<f64>::identity(GroupKind::Su2);
    assert!(heat_kernel(GroupKind::Su2, 0.0, &id, 1e-12).is_err());
    assert!(heat_kernel(GroupKind::Su2, 1.0, &id, 0.0).is_err());
    let far = ComplexGroupElement::Su2(Mat2::diag(C::new(1e300, 0.0), C::new(1e-300, 0.0)));
    assert!(matches!(heat_kernel(GroupKind::Su2, 1e-4, &far, 1e-9), Err(crate::Error::NonConvergence { .. })));
}

#[test]
fn heat_kernel_at_identity_is_the_dimension_sum() {
    let id = ComplexGroupElement::<f64>::identity(GroupKind::Su2);
    let v = heat_kernel_auto(GroupKind::Su2, 1.0, &id).unwrap();
    let oracle: f64 = (0..200).map(|n| ((n + 1) * (n + 1)) as f64 * (-(n * (n + 2)) as f64 / 8.0).exp()).sum();
    assert!((v.re - oracle).abs() < 1e-10);
}

#[test]
fn semigroup_acts_diagonally() {
    let kind = GroupKind::Su2;
    let phi = CharacterSeries::from_terms(kind, [(0, C::new(0.5, 0.0)), (1, C::new(1.0, -2.0)), (3, C::new(0.0, 1.0))])
        .unwrap();
    assert_eq!(phi.heat_semigroup(0.0).unwrap(), phi);
    let chi1 = CharacterSeries::<f64>::character(kind, 1).unwrap();
    let c1 = irrep_info::<f64>(kind, 1).unwrap().casimir;
    let e = chi1.heat_semigroup(1.0).unwrap().coeff(1);
    assert!((e.re - (-c1 / 2.0).exp()).abs() < 1e-15);
    assert!(phi.heat_semigroup(-1.0).is_err());

    let psi = CharacterSeries::from_terms(kind, [(1, C::new(3.0, 0.0)), (2, C::new(-1.0, 0.5))]).unwrap();
    let (a, b) = (C::new(0.3, 1.1), C::new(-2.0, 0.2));
    let lhs = (&(&phi * a) + &(&psi * b)).heat_semigroup(0.7).unwrap();
    let rhs = &(&phi.heat_semigroup(0.7).unwrap() * a) + &(&psi.heat_semigroup(0.7).unwrap() * b);
    for l in 0..5 {
        assert!((lhs.coeff(l) - rhs.coeff(l)).norm() < 1e-14);
    }
    let lap = phi.laplacian();
    assert!((lap.coeff(3) + phi.coeff(3) * 15.0 / 4.0).norm() < 1e-14);
    assert_eq!(lap.coeff(0), C::new(0.0, 0.0));
}

#[test]
fn convolution_with_heat_kernel_is_the_semigroup() {
    let kind = GroupKind::Su2;
    let hbar = 1.0;
    let phi = CharacterSeries::from_terms(kind, [(1, C::new(1.0, 0.0)), (2, C::new(0.3, -0.4))]).unwrap();
    let smoothed = phi.heat_semigroup(hbar).unwrap();
    for g in random_points(kind, 10, 24) {
        let f = |x: &GroupElement<f64>| {
            let gx = (g * x.inverse()).complexify();
            heat_kernel_auto(kind, hbar, &gx).unwrap() * phi.evaluate(&x.complexify())
        };
        let conv = haar_integrate(kind, f, HaarMode::Quadrature { level: 20 }).unwrap();
        let target = smoothed.evaluate(&g.complexify());
        assert!((conv.value - target).norm() < 1e-8, "{} vs {}", conv.value, target);
    }
}

#[test]
fn series_evaluation_and_norms() {
    let phi = CharacterSeries::<f64>::character(GroupKind::U1, 2).unwrap();
    let z = ComplexGroupElement::U1(C::from_polar(0.8, 0.3));
    assert!((phi.evaluate(&z) - C::from_polar(0.64, 0.6)).norm() < 1e-15);
    // restriction to K
    let psi = CharacterSeries::from_terms(GroupKind::Su2, [(1, C::new(1.0, 0.0)), (4, C::new(0.0, 2.0))]).unwrap();
    for g in random_points(GroupKind::Su2, 5, 25) {
        let direct = g.trace() + C::new(0.0, 2.0) * character(GroupKind::Su2, 4, &g.complexify());
        assert!((psi.evaluate(&g.complexify()) - direct).norm() < 1e-13);
    }
    assert!((psi.norm_sqr() - 5.0).abs() < 1e-15);
    let l2 = haar_integrate_class(GroupKind::Su2, |g: &GroupElement<f64>| C::new(psi.evaluate(&g.complexify()).norm_sqr(), 0.0), 32)
        .unwrap();
    assert!((l2.value.re - 5.0).abs() < 1e-12);
    assert!(CharacterSeries::<f64>::character(GroupKind::Su2, -2).is_err());
}

#[test]
fn weighted_inner_products_match_quadrature() {
    let s = 2.0;
    for (a, b) in [(0, 0), (1, 1), (1, 2), (2, 2), (0, 2), (1, 3)] {
        let closed = weighted_inner_product(GroupKind::Su2, a, b, s).unwrap();
        let quad = haar_integrate_class(
            GroupKind::Su2,
            |g: &GroupElement<f64>| {
                let h = g.complexify();
                character(GroupKind::Su2, a, &h).conj()
                    * character(GroupKind::Su2, b, &h)
                    * heat_kernel_auto(GroupKind::Su2, s, &h).unwrap()
            },
            64,
        )
        .unwrap();
        assert!((closed - quad.value).norm() < 1e-10, "{a},{b}");
    }
    let v = weighted_inner_product(GroupKind::Su2, 1, 1, 2.0f64).unwrap();
    assert!((v.re - (1.0 + 3.0 * (-2.0f64).exp())).abs() < 1e-15);
    let u = weighted_inner_product(GroupKind::U1, 2, 3, 1.5f64).unwrap();
    assert!((u.re - (-0.75f64).exp()).abs() < 1e-15);
}

#[test]
fn fd_laplacian_of_series_matches_term_by_term() {
    let phi = CharacterSeries::from_terms(GroupKind::Su2, [(1, C::new(1.0, 0.0)), (3, C::new(0.5, 0.5))]).unwrap();
    let lap = phi.laplacian();
    let g = exp_map(&AlgebraVector::su2([0.4, -1.0, 0.3]));
    let fd = fd_group_laplacian(|h: &ComplexGroupElement<f64>| phi.evaluate(h), &g, FD_GROUP_STEP);
    assert!((fd - lap.evaluate(&g.complexify())).norm() < 1e-7);
}

proptest! {
    #[test]
    fn semigroup_law(s in 0.0f64..3.0, t in 0.0f64..3.0, re in prop::collection::vec(-2.0f64..2.0, 5)) {
        let phi = CharacterSeries::from_terms(
            GroupKind::Su2, re.iter().enumerate().map(|(l, c)| (l as i64, C::new(*c, 0.5 * c))),
        ).unwrap();
        let two = phi.heat_semigroup(t).unwrap().heat_semigroup(s).unwrap();
        let one = phi.heat_semigroup(s + t).unwrap();
        for l in 0..5 {
            prop_assert!((two.coeff(l) - one.coeff(l)).norm() <= 1e-14 * one.coeff(l).norm().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn heat_kernel_is_real_on_k(c in prop::array::uniform3(-3.0f64..3.0), t in 0.2f64..5.0) {
        let g = exp_map(&AlgebraVector::su2(c)).complexify();
        let v = heat_kernel_auto(GroupKind::Su2, t, &g).unwrap();
        prop_assert!(v.im.abs() < 1e-12);
        prop_assert!(v.re >= -DEFAULT_TOL_COMPACT);
    }
}
