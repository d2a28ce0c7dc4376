use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;

use super::*;
use crate::group::haar_integrate;
use crate::mc::McRng;
use crate::spectral::irrep_info;

fn rng(seed: u64) -> McRng {
    McRng::seed_from_u64(seed)
}

#[test]
fn construction_is_validated() {
    assert!(LatticeConnection::zero(GroupKind::Su2, 1).is_err());
    let mixed = vec![Av::zero(GroupKind::Su2), Av::zero(GroupKind::U1)];
    assert!(LatticeConnection::new(GroupKind::Su2, mixed).is_err());
    let a = LatticeConnection::zero(GroupKind::Su2, 4).unwrap();
    let b = LatticeConnection::zero(GroupKind::Su2, 5).unwrap();
    assert!(ComplexLatticeConnection::new(a, b).is_err());
}

#[test]
fn coordinate_variance_is_s_times_n() {
    let (s, n) = (1.0, 16);
    let mc = MonteCarlo::new(100_000, 3);
    let est = mc
        .estimate(2, |r, out| {
            let a = sample_connection(GroupKind::Su2, n, s, r).unwrap();
            out[0] = Complex64::new(a.value(5).coord(1).powi(2), 0.0);
            out[1] = Complex64::new(a.norm_sqr(), 0.0);
        })
        .unwrap();
    assert!(est[0].within(Complex64::new(s * n as f64, 0.0), 3.0, 0.0), "{:?}", est[0]);
    // E‖A‖² = dim · s · N
    assert!(est[1].within(Complex64::new(3.0 * s * n as f64, 0.0), 3.0, 0.0), "{:?}", est[1]);
    let tiny = sample_connection(GroupKind::Su2, n, 1e-20, &mut rng(1)).unwrap();
    assert!(tiny.norm() < 1e-8);
    assert!(sample_connection(GroupKind::Su2, n, 0.0, &mut rng(1)).is_err());
}

#[test]
fn complex_sampling_variances() {
    let (s, hbar, n) = (2.0, 1.0, 16);
    let r = 2.0 * s - hbar;
    let est = MonteCarlo::new(100_000, 4)
        .estimate(2, |g, out| {
            let z = sample_complex_connection(GroupKind::Su2, n, s, hbar, g).unwrap();
            out[0] = Complex64::new(z.real_part().value(3).coord(0).powi(2), 0.0);
            out[1] = Complex64::new(z.imag_part().value(9).coord(2).powi(2), 0.0);
        })
        .unwrap();
    assert!(est[0].within(Complex64::new(r / 2.0 * n as f64, 0.0), 3.0, 0.0));
    assert!(est[1].within(Complex64::new(hbar / 2.0 * n as f64, 0.0), 3.0, 0.0));
    assert!(sample_complex_connection(GroupKind::Su2, n, 0.5, 1.0, &mut rng(0)).is_err());
    // near the boundary the real part collapses
    let z = sample_complex_connection(GroupKind::Su2, n, 0.5 + 1e-14, 1.0, &mut rng(5)).unwrap();
    assert!(z.real_part().norm() < 1e-5);
    for seed in 0..20 {
        let z = sample_complex_connection(GroupKind::Su2, 32, 2.0, 0.5, &mut rng(seed)).unwrap();
        let ComplexGroupElement::Su2(m) = holonomy_complex(&z, HolonomyMethod::Product) else { unreachable!() };
        assert!((m.det() - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }
}

#[test]
fn simple_holonomies() {
    for kind in [GroupKind::U1, GroupKind::Su2] {
        let zero = LatticeConnection::zero(kind, 8).unwrap();
        assert_eq!(holonomy(&zero, HolonomyMethod::Product), GroupElement::identity(kind));
    }
    let x = Av::su2([0.7, -1.2, 2.1]);
    let c = LatticeConnection::constant(x, 50).unwrap();
    assert!(holonomy(&c, HolonomyMethod::Product).distance(&exp_map(&x)) < 1e-13);
}

#[test]
fn abelian_holonomy_is_the_exponential_of_the_mean() {
    let mut g = rng(6);
    for _ in 0..20 {
        let a = sample_connection(GroupKind::U1, 64, 1.0, &mut g).unwrap();
        let h = holonomy(&a, HolonomyMethod::Product);
        assert!(h.distance(&exp_map(&a.mean())) < 1e-12);
        let smooth = LatticeConnection::smooth_random(GroupKind::U1, 64, 3, 1.0, &mut g).unwrap();
        let hp = holonomy(&smooth, HolonomyMethod::Product);
        let hr = holonomy(&smooth, HolonomyMethod::Rk4);
        assert!(hp.distance(&hr) < 1e-10);
    }
}

#[test]
fn rk4_and_product_agree_on_smooth_connections() {
    let mut g = rng(7);
    let a16 = LatticeConnection::smooth_random(GroupKind::Su2, 16, 2, 1.0, &mut g).unwrap();
    let d16 = holonomy(&a16, HolonomyMethod::Product).distance(&holonomy(&a16, HolonomyMethod::Rk4));
    assert!(d16 < 1e-6, "{d16}");
    let z = ComplexLatticeConnection::new(a16.clone(), a16.scale(0.2)).unwrap();
    let d = holonomy_complex(&z, HolonomyMethod::Product).distance(&holonomy_complex(&z, HolonomyMethod::Rk4));
    assert!(d < 1e-6, "{d}");
}

#[test]
fn complex_holonomy_restricts_to_real_holonomy() {
    let mut g = rng(8);
    for kind in [GroupKind::U1, GroupKind::Su2] {
        let a = sample_connection(kind, 32, 1.0, &mut g).unwrap();
        let hc = holonomy_complex(&ComplexLatticeConnection::from_real(a.clone()), HolonomyMethod::Product);
        assert!(hc.distance(&holonomy(&a, HolonomyMethod::Product).complexify()) < 1e-14);
    }
}

#[test]
fn link_gauge_action_preserves_holonomy_exactly() {
    let mut g = rng(9);
    let links = LinkConfiguration::from_connection(&sample_connection(GroupKind::Su2, 32, 1.0, &mut g).unwrap());
    let h = links.holonomy();
    let id = LatticeGaugeMap::identity(GroupKind::Su2, 32);
    assert!(gauge_transform_links(&links, &id).unwrap().max_distance(&links) < 1e-15);
    for _ in 0..1000 {
        let gauge = LatticeGaugeMap::random(GroupKind::Su2, 32, &mut g);
        let moved = gauge_transform_links(&links, &gauge).unwrap();
        assert!(moved.holonomy().distance(&h) < 1e-10);
    }
}

#[test]
fn non_based_maps_are_rejected() {
    let mut elems = vec![GroupElement::identity(GroupKind::Su2); 4];
    elems[0] = exp_map(&Av::su2([1e-3, 0.0, 0.0]));
    assert!(matches!(LatticeGaugeMap::new(GroupKind::Su2, elems), Err(Error::NotBased(_))));
    let gauge = LatticeGaugeMap::identity(GroupKind::Su2, 4);
    let a = LatticeConnection::zero(GroupKind::Su2, 5).unwrap();
    assert!(gauge_transform_algebra(&a, &gauge).is_err());
}

#[test]
fn algebra_level_drift_is_first_order() {
    let mut ratios = Vec::new();
    for seed in 0..5 {
        let drift = |n: usize| {
            let mut g = rng(100 + seed);
            let a = LatticeConnection::smooth_random(GroupKind::Su2, n, 2, 1.0, &mut g).unwrap();
            let gauge = LatticeGaugeMap::smooth_random(GroupKind::Su2, n, 2, 1.0, &mut g);
            algebra_level_drift(&a, &gauge).unwrap()
        };
        let (d16, d32, d64) = (drift(16), drift(32), drift(64));
        ratios.push((d32 / d16 + d64 / d32) / 2.0);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((0.3..=0.7).contains(&mean), "{ratios:?}");
    // abelian: the translation term is an exact difference, no drift at all
    let mut g = rng(1);
    let a = LatticeConnection::smooth_random(GroupKind::U1, 16, 2, 1.0, &mut g).unwrap();
    let gauge = LatticeGaugeMap::smooth_random(GroupKind::U1, 16, 2, 1.0, &mut g);
    assert!(algebra_level_drift(&a, &gauge).unwrap() < 1e-12);
}

#[test]
fn rotation_part_is_isometric() {
    let mut g = rng(10);
    let a = sample_connection(GroupKind::Su2, 16, 1.0, &mut g).unwrap();
    let gauge = LatticeGaugeMap::random(GroupKind::Su2, 16, &mut g);
    for k in 0..16 {
        let rotated = gauge.element(k).adjoint_action(&a.value(k));
        assert!((rotated.norm() - a.value(k).norm()).abs() < 1e-12);
    }
}

#[test]
fn equal_holonomy_pairs_are_gauge_related() {
    let mut g = rng(11);
    for _ in 0..50 {
        let u = LinkConfiguration::random(GroupKind::Su2, 12, &mut g);
        // random v with the same holonomy: free links, last one solved for
        let mut links = LinkConfiguration::random(GroupKind::Su2, 12, &mut g).links().to_vec();
        let partial = ordered_product(GroupKind::Su2, links[..11].iter().copied());
        links[11] = u.holonomy() * partial.inverse();
        let v = LinkConfiguration::new(GroupKind::Su2, links).unwrap();
        let (gauge, defect) = classify_pair(&u, &v).unwrap();
        assert!(defect < 1e-10);
        let mapped = gauge_transform_links(&u, &gauge).unwrap();
        assert!(mapped.max_distance(&v) < 1e-10);
    }
    let u = LinkConfiguration::random(GroupKind::Su2, 12, &mut g);
    let w = LinkConfiguration::random(GroupKind::Su2, 12, &mut g);
    assert!(classify_pair(&u, &w).unwrap().1 > 1e-3);
}

#[test]
fn json_round_trip() {
    let mut g = rng(12);
    let a = sample_connection(GroupKind::Su2, 6, 1.0, &mut g).unwrap();
    let text = a.to_json().unwrap();
    assert!(text.starts_with("{\"group\":\"su2\",\"n_sites\":6,\"values\":[["));
    assert!(!text.contains("imag_values"));
    assert_eq!(LatticeConnection::from_json(&text).unwrap(), a);
    let z = sample_complex_connection(GroupKind::U1, 4, 1.0, 0.5, &mut g).unwrap();
    let text = z.to_json().unwrap();
    assert!(text.contains("imag_values"));
    assert_eq!(ComplexLatticeConnection::from_json(&text).unwrap(), z);
    assert!(LatticeConnection::from_json(&text).is_err());
    assert!(LatticeConfig::from_json(r#"{"group":"su2","n_sites":3,"values":[[1,2,3],[0,0,0]]}"#).is_err());
    assert!(LatticeConfig::from_json(r#"{"group":"su2","n_sites":2,"values":[[1,2],[0,0]]}"#).is_err());
    assert!(LatticeConfig::from_json("not json").is_err());
}

#[test]
fn trivial_pushforward_is_exactly_one() {
    let est = pushforward_moment(GroupKind::Su2, 0, 1.0, 16, 1000, 1).unwrap();
    assert_eq!(est.mean, Complex64::new(1.0, 0.0));
    assert_eq!(est.std_error, 0.0);
}

#[test]
fn abelian_pushforward_has_no_lattice_bias() {
    for n in [2, 16, 64] {
        let exact = lattice_character_moment(GroupKind::U1, 1, 1.0, n).unwrap();
        assert!((exact - (-0.5f64).exp()).abs() < 1e-15);
    }
    let est = pushforward_moment(GroupKind::U1, 1, 1.0, 64, 100_000, 7).unwrap();
    assert!(est.z_score(Complex64::new((-0.5f64).exp(), 0.0)) < 3.0, "{est:?}");
}

#[test]
fn single_link_mean_matches_tensor_quadrature() {
    let (xi, w) = crate::quadrature::gauss_hermite_normal(24);
    for (label, var) in [(1, 0.05), (2, 0.3), (3, 1.0)] {
        let sd = f64::sqrt(var);
        let mut acc = 0.0;
        for (a, wa) in xi.iter().zip(&w) {
            for (b, wb) in xi.iter().zip(&w) {
                for (c, wc) in xi.iter().zip(&w) {
                    let g = exp_map(&Av::su2([sd * a, sd * b, sd * c])).complexify();
                    acc += wa * wb * wc * character(GroupKind::Su2, label, &g).re;
                }
            }
        }
        let m = link_character_mean(GroupKind::Su2, label, var).unwrap();
        assert!((m * (label + 1) as f64 - acc).abs() < 1e-10, "{label} {var}");
    }
}

#[test]
fn su2_lattice_bias_is_first_order() {
    let c1 = irrep_info::<f64>(GroupKind::Su2, 1).unwrap().casimir;
    let target = 2.0 * (-c1 / 2.0).exp();
    let bias = |n| lattice_character_moment(GroupKind::Su2, 1, 1.0, n).unwrap() - target;
    let ratio = bias(64) / bias(32);
    assert!((0.45..0.55).contains(&ratio), "{ratio}");
    assert!(bias(64).abs() < 1e-2);
}

#[test]
fn exact_smoothing_matches_monte_carlo() {
    let mut g = rng(13);
    let n = 8;
    let base = ComplexLatticeConnection::new(
        LatticeConnection::smooth_random(GroupKind::Su2, n, 1, 1.0, &mut g).unwrap(),
        LatticeConnection::smooth_random(GroupKind::Su2, n, 1, 0.2, &mut g).unwrap(),
    )
    .unwrap();
    let phi = crate::spectral::CharacterSeries::from_terms(
        GroupKind::Su2,
        [(1, Complex64::new(1.0, 0.0)), (2, Complex64::new(0.0, 0.5))],
    )
    .unwrap();
    let hbar = 0.5;
    let exact = lattice_smoothing_expectation(&phi, &base, hbar, ExactOptions::default()).unwrap();
    let finer = lattice_smoothing_expectation(&phi, &base, hbar, ExactOptions { nodes: 12 }).unwrap();
    assert!((exact - finer).norm() < 1e-10);
    let mc = MonteCarlo::new(200_000, 14)
        .estimate_scalar(|r| {
            let b = sample_connection(GroupKind::Su2, n, hbar, r).unwrap();
            phi.evaluate(&holonomy_complex(&base.shifted(&b).unwrap(), HolonomyMethod::Product))
        })
        .unwrap();
    assert!(mc.z_score(exact) < 4.0, "{mc:?} vs {exact}");
}

#[test]
fn exact_gram_moments_match_monte_carlo() {
    let (s, hbar, n) = (1.0, 0.5, 8);
    let g = lattice_gram_moments(GroupKind::Su2, 2, s, hbar, n, ExactOptions::default()).unwrap();
    assert!((g[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-10, "{g}");
    let mc = MonteCarlo::new(200_000, 15)
        .estimate(2, |r, out| {
            let z = sample_complex_connection(GroupKind::Su2, n, s, hbar, r).unwrap();
            let h = holonomy_complex(&z, HolonomyMethod::Product);
            let (c1, c2) = (character(GroupKind::Su2, 1, &h), character(GroupKind::Su2, 2, &h));
            out[0] = c1 * c1.conj();
            out[1] = c1 * c2.conj();
        })
        .unwrap();
    assert!(mc[0].z_score(g[(1, 1)]) < 4.0, "{:?} vs {}", mc[0], g[(1, 1)]);
    assert!(mc[1].z_score(g[(1, 2)]) < 4.0, "{:?} vs {}", mc[1], g[(1, 2)]);
    // U(1)
    let gu = lattice_gram_moments(GroupKind::U1, 2, s, hbar, n, ExactOptions::default()).unwrap();
    // |h|^{2k} = e^{−2k P̄} with P̄ ~ N(0, ħ/2): E = e^{k² ħ}, cancelled by the heat factor e^{−ħ k²}
    for k in 0..=2usize {
        let want = ((k * k) as f64 * hbar).exp();
        assert!((gu[(k, k)].re - want).abs() < 1e-9, "{k}: {}", gu[(k, k)]);
    }
}

#[test]
fn pushforward_of_p_s_has_heat_kernel_moments() {
    // the density of h(A) is ρ_s: check a non-class moment by quadrature
    let s = 0.7;
    let est = MonteCarlo::new(100_000, 16)
        .estimate_scalar(|r| {
            let a = sample_connection(GroupKind::Su2, 32, s, r).unwrap();
            let GroupElement::Su2(m) = holonomy(&a, HolonomyMethod::Product) else { unreachable!() };
            Complex64::new(m.m[0][0].re.powi(2), 0.0)
        })
        .unwrap();
    let quad = haar_integrate(
        GroupKind::Su2,
        |x: &GroupElement<f64>| {
            let GroupElement::Su2(m) = x else { unreachable!() };
            let rho = crate::spectral::heat_kernel_auto(GroupKind::Su2, s, &x.complexify()).unwrap();
            rho * m.m[0][0].re.powi(2)
        },
        crate::group::HaarMode::Quadrature { level: 20 },
    )
    .unwrap();
    // O(1/N) bias is well below the statistical error here
    assert!(est.within(quad.value, 4.0, 2e-3), "{est:?} vs {}", quad.value);
}

proptest! {
    #[test]
    fn link_gauge_invariance_property(seed in 0u64..10_000, n in 2usize..40) {
        let mut g = rng(seed);
        let links = LinkConfiguration::random(GroupKind::Su2, n, &mut g);
        let gauge = LatticeGaugeMap::random(GroupKind::Su2, n, &mut g);
        let moved = gauge_transform_links(&links, &gauge).unwrap();
        prop_assert!(moved.holonomy().distance(&links.holonomy()) < 1e-10);
    }

    #[test]
    fn norm_is_the_riemann_sum(vals in prop::collection::vec(-5.0f64..5.0, 6..60)) {
        let n = vals.len() / 3;
        let conn = LatticeConnection::new(
            GroupKind::Su2,
            vals.chunks(3).take(n).map(|c| Av::su2([c[0], c[1], c[2]])).collect(),
        ).unwrap();
        let direct: f64 = vals.iter().take(3 * n).map(|x| x * x).sum::<f64>() / n as f64;
        prop_assert!((conn.norm_sqr() - direct).abs() < 1e-12 * direct.max(1.0));
    }
}
