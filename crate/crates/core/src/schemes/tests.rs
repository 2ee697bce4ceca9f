use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::spectral::{build_lattice, BasisKind, GeneratorKind, SpectralState};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn torus(m: usize) -> std::sync::Arc<crate::spectral::FrequencyLattice> {
    build_lattice(BasisKind::TorusComplex, m, GeneratorKind::Schrodinger).unwrap()
}

fn dirichlet_wave(m: usize) -> std::sync::Arc<crate::spectral::FrequencyLattice> {
    build_lattice(BasisKind::DirichletSine, m, GeneratorKind::Wave).unwrap()
}

fn all_schemes() -> Vec<SchemeSpec> {
    vec![
        SchemeSpec::exponential_euler(),
        SchemeSpec::implicit_euler(),
        SchemeSpec::crank_nicolson(),
    ]
}

#[test]
fn symbol_examples() {
    let cn = SchemeSpec::crank_nicolson();
    let ie = SchemeSpec::implicit_euler();
    assert_eq!(scheme_symbol(&cn, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    assert!((scheme_symbol(&ie, c(-1.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
    for y in [-1e3, -3.0, 0.1, 7.5, 1e6] {
        let r = scheme_symbol(&cn, c(0.0, y)).unwrap();
        assert!((r.norm() - 1.0).abs() < 1e-15, "y = {y}: |r| = {}", r.norm());
    }
    let ee = SchemeSpec::exponential_euler();
    let z = c(-0.3, 2.0);
    assert!((scheme_symbol(&ee, z).unwrap() - z.exp()).norm() < 1e-15);
}

#[test]
fn symbol_poles_are_errors() {
    assert!(matches!(
        scheme_symbol(&SchemeSpec::implicit_euler(), c(1.0, 0.0)),
        Err(Error::Pole(_))
    ));
    assert!(matches!(
        scheme_symbol(&SchemeSpec::crank_nicolson(), c(2.0, 0.0)),
        Err(Error::Pole(_))
    ));
}

#[test]
fn custom_scheme_validation() {
    // r(0) must be 1
    assert!(SchemeSpec::custom("bad", vec![2.0], vec![1.0]).is_err());
    // pole at z = -1 lies in the left half-plane
    assert!(SchemeSpec::custom("pole", vec![1.0], vec![1.0, 1.0]).is_err());
    // pole on the imaginary axis, 1 + z²
    assert!(SchemeSpec::custom("axis", vec![1.0], vec![1.0, 0.0, 1.0]).is_err());
    assert!(SchemeSpec::custom("empty", vec![], vec![1.0]).is_err());
    let ie_like = SchemeSpec::custom("ie2", vec![1.0], vec![1.0, -1.0]).unwrap();
    assert_eq!(ie_like.kind(), SchemeKind::CustomRational);
    let z = c(-0.7, 3.0);
    let a = scheme_symbol(&ie_like, z).unwrap();
    let b = scheme_symbol(&SchemeSpec::implicit_euler(), z).unwrap();
    assert!((a - b).norm() < 1e-15);
}

#[test]
fn names_and_serde() {
    for (name, kind) in [
        ("ee", SchemeKind::ExponentialEuler),
        ("IE", SchemeKind::ImplicitEuler),
        ("crank_nicolson", SchemeKind::CrankNicolson),
        ("explicit_euler", SchemeKind::CustomRational),
    ] {
        assert_eq!(SchemeSpec::from_name(name).unwrap().kind(), kind);
    }
    assert!(SchemeSpec::from_name("rk4").is_err());

    for s in all_schemes() {
        let json = serde_json::to_string(&s).unwrap();
        let back: SchemeSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
    let custom: SchemeSpec =
        serde_json::from_str(r#"{"label":"pade","numerator":[1,0.5],"denominator":[1,-0.5]}"#).unwrap();
    let z = c(0.0, 1.3);
    assert!((scheme_symbol(&custom, z).unwrap() - scheme_symbol(&SchemeSpec::crank_nicolson(), z).unwrap()).norm() < 1e-15);
    let json = serde_json::to_string(&custom).unwrap();
    assert_eq!(serde_json::from_str::<SchemeSpec>(&json).unwrap(), custom);
    assert!(serde_json::from_str::<SchemeSpec>(r#""nope""#).is_err());
}

#[test]
fn exponential_euler_is_the_semigroup() {
    for lat in [torus(16), dirichlet_wave(9)] {
        for k in [1.0, 0.125, 2f64.powi(-9)] {
            let r = discrete_propagator(&SchemeSpec::exponential_euler(), &lat, k).unwrap();
            assert_eq!(r, semigroup_propagator(&lat, k));
        }
    }
}

#[test]
fn implicit_euler_wave_block_matches_hand_inverse() {
    let lat = dirichlet_wave(6);
    for k in [0.5, 0.01, 2f64.powi(-7)] {
        let r = discrete_propagator(&SchemeSpec::implicit_euler(), &lat, k).unwrap();
        let DiagonalPropagator::Block(blocks) = r else {
            panic!("wave propagator must be block diagonal")
        };
        for (b, e) in blocks.iter().zip(lat.eigenvalues()) {
            let l = e.re;
            let d = 1.0 + k * k * l;
            let expected = [[1.0 / d, k / d], [-k * l / d, 1.0 / d]];
            for i in 0..2 {
                for j in 0..2 {
                    let scale = expected[i][j].abs().max(1.0);
                    assert!((b[i][j] - expected[i][j]).abs() <= 1e-14 * scale);
                }
            }
        }
    }
}

#[test]
fn zero_eigenvalue_mode_is_identity() {
    let lat = torus(8);
    let zero = lat.index_of(0).unwrap();
    for s in all_schemes() {
        let DiagonalPropagator::Scalar(v) = discrete_propagator(&s, &lat, 0.3).unwrap() else {
            panic!("scalar expected")
        };
        assert_eq!(v[zero], c(1.0, 0.0));
    }
}

#[test]
fn propagator_rejects_bad_steps() {
    let lat = torus(8);
    assert!(discrete_propagator(&SchemeSpec::implicit_euler(), &lat, 0.0).is_err());
    assert!(discrete_propagator(&SchemeSpec::implicit_euler(), &lat, -1.0).is_err());
}

#[test]
fn contractivity_examples() {
    let lat = torus(16);
    for k in [1.0, 0.1, 2f64.powi(-9)] {
        let ie = check_contractive(&SchemeSpec::implicit_euler(), &lat, k);
        assert!(ie.pass);
        assert_eq!(ie.max_modulus, 1.0);
        assert_eq!(ie.worst_mode, 0);
        // largest modulus off the zero mode is 1/√(1+k²)
        let DiagonalPropagator::Scalar(v) =
            discrete_propagator(&SchemeSpec::implicit_euler(), &lat, k).unwrap()
        else {
            panic!()
        };
        let off = lat
            .modes()
            .iter()
            .zip(&v)
            .filter(|(l, _)| **l != 0)
            .map(|(_, r)| r.norm())
            .fold(0.0, f64::max);
        assert!((off - 1.0 / (1.0 + k * k).sqrt()).abs() < 1e-15);

        let cn = check_contractive(&SchemeSpec::crank_nicolson(), &lat, k);
        assert!(cn.pass);
        assert!((cn.max_modulus - 1.0).abs() < 1e-15);
    }
    // explicit Euler with kℓ² = 1
    let ex = check_contractive(&SchemeSpec::explicit_euler(), &lat, 1.0);
    assert!(!ex.pass);
    assert!(ex.max_modulus >= 2f64.sqrt());
    let at_one = scheme_symbol(&SchemeSpec::explicit_euler(), c(0.0, 1.0)).unwrap();
    assert!((at_one.norm() - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn contractivity_on_wave_lattices() {
    let torus_wave = build_lattice(BasisKind::TorusComplex, 32, GeneratorKind::Wave).unwrap();
    for lat in [dirichlet_wave(31), torus_wave] {
        for k in [0.5, 2f64.powi(-5), 2f64.powi(-9)] {
            for s in all_schemes() {
                let rep = check_contractive(&s, &lat, k);
                assert!(rep.pass, "{} at k = {k}: {}", s.label(), rep.max_modulus);
            }
            assert!(!check_contractive(&SchemeSpec::explicit_euler(), &lat, k).pass);
        }
    }
}

#[test]
fn order_examples() {
    let lat = torus(32);
    let e1 = SpectralState::basis_vector(&lat, 1).unwrap();
    let ks: Vec<f64> = (5..=9).map(|i| 2f64.powi(-i)).collect();

    let ee = empirical_order(&SchemeSpec::exponential_euler(), &e1, 1.0, &ks).unwrap();
    assert!(matches!(ee.estimate, OrderEstimate::Exact { max_error } if max_error <= 1e-13));

    let ie = empirical_order(&SchemeSpec::implicit_euler(), &e1, 1.0, &ks).unwrap();
    let OrderEstimate::Fitted(fit) = ie.estimate else { panic!("IE is not exact") };
    assert!((fit.slope - 1.0).abs() <= 0.05, "IE slope {}", fit.slope);

    let cn = empirical_order(&SchemeSpec::crank_nicolson(), &e1, 1.0, &ks).unwrap();
    let OrderEstimate::Fitted(fit) = cn.estimate else { panic!("CN is not exact") };
    assert!((fit.slope - 2.0).abs() <= 0.05, "CN slope {}", fit.slope);
}

/// Scalar oracle for a single mode: `max_j |e^{ijkθ} − r(ikθ)^j|` by direct powers.
fn scalar_error(r: impl Fn(Complex64) -> Complex64, theta: f64, k: f64, n: usize) -> f64 {
    let m = r(c(0.0, k * theta));
    let mut pow = c(1.0, 0.0);
    let mut worst = 0.0f64;
    for j in 1..=n {
        pow *= m;
        let exact = c(0.0, j as f64 * k * theta).exp();
        worst = worst.max((exact - pow).norm());
    }
    worst
}

#[test]
fn order_errors_match_scalar_oracle() {
    let lat = torus(16);
    let e3 = SpectralState::basis_vector(&lat, 3).unwrap();
    let ks = [0.25, 0.125, 0.0625];
    let ie = empirical_order(&SchemeSpec::implicit_euler(), &e3, 1.0, &ks).unwrap();
    let cn = empirical_order(&SchemeSpec::crank_nicolson(), &e3, 1.0, &ks).unwrap();
    for (i, &k) in ks.iter().enumerate() {
        let n = (1.0 / k) as usize;
        let ie_ref = scalar_error(|z| 1.0 / (1.0 - z), 9.0, k, n);
        let cn_ref = scalar_error(|z| (2.0 + z) / (2.0 - z), 9.0, k, n);
        assert!((ie.errors[i].1 - ie_ref).abs() <= 1e-12);
        assert!((cn.errors[i].1 - cn_ref).abs() <= 1e-12);
    }
}

#[test]
fn order_needs_three_points_and_compatible_steps() {
    let lat = torus(8);
    let e1 = SpectralState::basis_vector(&lat, 1).unwrap();
    let ie = SchemeSpec::implicit_euler();
    assert!(empirical_order(&ie, &e1, 1.0, &[0.5, 0.25]).is_err());
    assert!(empirical_order(&ie, &e1, 1.0, &[0.3, 0.2, 0.1]).is_err());
}

#[test]
fn step_count_is_exact_for_dyadic_steps() {
    assert_eq!(step_count(1.0, 2f64.powi(-12)), Some(4096));
    assert_eq!(step_count(2.0, 0.5), Some(4));
    assert_eq!(step_count(1.0, 0.3), None);
    assert_eq!(step_count(1.0, 2.0), None);
}

fn scheme_strategy() -> impl Strategy<Value = SchemeSpec> {
    prop_oneof![
        Just(SchemeSpec::exponential_euler()),
        Just(SchemeSpec::implicit_euler()),
        Just(SchemeSpec::crank_nicolson()),
    ]
}

proptest! {
    #[test]
    fn contractive_symbols_stay_bounded_in_the_left_half_plane(
        s in scheme_strategy(), x in -1e3f64..=0.0, y in -1e3f64..1e3,
    ) {
        let r = scheme_symbol(&s, c(x, y)).unwrap();
        prop_assert!(r.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn symbols_commute_with_conjugation(s in scheme_strategy(), x in -50f64..=0.0, y in -50f64..50.0) {
        let z = c(x, y);
        let a = scheme_symbol(&s, z.conj()).unwrap();
        let b = scheme_symbol(&s, z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn wave_blocks_commute_with_the_generator(
        s in scheme_strategy(), lambda in 0.5f64..5e3, k in 1e-4f64..1.0,
    ) {
        let block = if s.kind() == SchemeKind::ExponentialEuler {
            crate::spectral::wave_semigroup_block(lambda, k)
        } else {
            rational_wave_block(&s, lambda, k).unwrap()
        };
        let a = [[0.0, 1.0], [-lambda, 0.0]];
        let ab = crate::spectral::block_mul(&a, &block);
        let ba = crate::spectral::block_mul(&block, &a);
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((ab[i][j] - ba[i][j]).abs() <= 1e-12 * lambda.max(1.0));
            }
        }
    }

    #[test]
    fn contractive_powers_stay_bounded(
        s in scheme_strategy(), k_exp in 1i32..12, j in 1u64..5000,
    ) {
        let lat = torus(32);
        let k = 2f64.powi(-k_exp);
        prop_assert!(check_contractive(&s, &lat, k).pass);
        let DiagonalPropagator::Scalar(v) = discrete_propagator(&s, &lat, k).unwrap() else {
            panic!()
        };
        for r in v {
            prop_assert!(r.norm().powf(j as f64) <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn wave_energy_norm_is_contractive(s in scheme_strategy(), lambda in 0.5f64..1e4, k in 1e-4f64..1.0,
        u in -1.0f64..1.0, v in -1.0f64..1.0) {
        let block = if s.kind() == SchemeKind::ExponentialEuler {
            crate::spectral::wave_semigroup_block(lambda, k)
        } else {
            rational_wave_block(&s, lambda, k).unwrap()
        };
        let energy = |a: f64, b: f64| lambda * a * a + b * b;
        let nu = block[0][0] * u + block[0][1] * v;
        let nv = block[1][0] * u + block[1][1] * v;
        prop_assert!(energy(nu, nv) <= energy(u, v) * (1.0 + 1e-11) + 1e-300);
    }
}
