mod common;

use std::f64::consts::PI;

use common::*;
use pem::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params_strategy() -> impl Strategy<Value = ModelParams<f64>> {
    (0.1..5.0f64, 0.1..5.0f64, 0.1..5.0f64, 0.1..2.0f64, 2.0..4.0f64).prop_map(|(k, lambda, mu, r0, ratio)| ModelParams {
        conductivity: k,
        lambda,
        mu,
        inner_radius: r0,
        outer_radius: r0 * ratio,
        ..ModelParams::default()
    })
}

/// Parameters with `F₀ > 4π(λ+μ)R₀`.
fn loaded_strategy() -> impl Strategy<Value = ModelParams<f64>> {
    (params_strategy(), 1e-3..20.0f64).prop_map(|(p, excess)| ModelParams {
        load: 4.0 * PI * (p.lambda + p.mu) * p.outer_radius * (1.0 + excess),
        ..p
    })
}

proptest! {
    #[test]
    fn validation_is_idempotent(p in params_strategy()) {
        let once = p.validate().unwrap();
        prop_assert_eq!(once.validate().unwrap(), once);
    }

    #[test]
    fn mixture_relations_invert(theta in 0.01..0.99f64, rho_f in 0.5..2.0f64, rho_m in 0.1..5.0f64) {
        let p = ModelParams { rho_fluid: rho_f, ..ModelParams::default() };
        let rho = rho_f * theta + rho_m * (1.0 - theta);
        let (theta_m, got) = mixture_fields(theta, rho, &p).unwrap();
        prop_assert!((theta_m - (1.0 - theta)).abs() < 1e-15);
        prop_assert!((got - rho_m).abs() <= 1e-12 * rho_m.max(1.0));
    }

    #[test]
    fn rotations_compose(a in -PI..PI, b in -PI..PI, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_field(&mut rng);
        let twice = apply_group(GroupElement::Rotation(a), apply_group(GroupElement::Rotation(b), &f).unwrap()).unwrap();
        let once = apply_group(GroupElement::Rotation(a + b), &f).unwrap();
        for pt in random_points(&mut rng, 3) {
            for c in Component::ALL {
                for d in [Deriv::VALUE, Deriv::X, Deriv::Y, Deriv::XX, Deriv::XY, Deriv::YY, Deriv::TX, Deriv::TT] {
                    let (u, v) = (twice.derivative(c, d, pt).unwrap(), once.derivative(c, d, pt).unwrap());
                    prop_assert!((u - v).abs() <= 1e-11 * u.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn harmonic_generator_solves_the_elastic_system(degree in 1u8..=6, lambda in 0.1..5.0f64, mu in 0.1..5.0f64, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g1, g2) = generate_displacement_symmetry(&random_potentials(&mut rng, degree)).unwrap();
        let e = AnisotropicModuli::isotropic(lambda, mu);
        let field = pem::symmetry::displacement_field(&g1, &g2);
        let pts = random_points(&mut rng, 5);
        let scale = g1.max_abs_coefficient().max(g2.max_abs_coefficient()) * (lambda + mu) * 100.0;
        prop_assert!(verify_displacement_symmetry(&field, &e, &pts).unwrap() <= 1e-13 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn loaded_cubic_has_one_admissible_root(p in loaded_strategy()) {
        let rep = rst_cubic(&p).unwrap();
        let (r0, big_r) = (p.inner_radius, p.outer_radius);
        let inside: Vec<f64> = rep.roots.iter().map(|r| r.value).filter(|&r| r > r0 && r < big_r).collect();
        prop_assert_eq!(inside.len(), 1);
        prop_assert_eq!(rep.r_st, inside[0]);
        prop_assert!(rep.brackets());
        prop_assert!(rep.residual().abs() <= 1e-10 * rep.scale());
        let oracle = rep.bisection_root.unwrap();
        prop_assert!((rep.r_st - oracle).abs() <= 1e-10 * big_r);
        let (lo, hi) = rep.critical_points.real_parts();
        prop_assert!(lo.max(hi) < 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn isotropic_embedding_is_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_params(&mut rng);
        let f = random_field(&mut rng);
        for pt in random_points(&mut rng, 3) {
            let iso = residual_cartesian_iso(&f, &p, pt).unwrap();
            let aniso = residual_cartesian_aniso(&f, &p.isotropic_moduli(), &p, pt).unwrap();
            for i in 0..6 {
                prop_assert!((iso.values[i] - aniso.values[i]).abs() <= 1e-12 * iso.values[i].abs().max(1.0));
            }
        }
    }

    #[test]
    fn stationary_states_are_ring_solutions(p in loaded_strategy(), dp in -2.0..2.0f64) {
        let p = ModelParams { p_steady: p.p_ambient + dp, ..p };
        let r_st = rst_cubic(&p).unwrap().r_st;
        for case in [InnerCondition::Neumann, InnerCondition::Dirichlet] {
            let sol = stationary_solution(&p, case, r_st).unwrap();
            let emb = sol.embedding(Box::new(Uniform(1.0)), Box::new(Uniform(0.5)));
            let scale = p.lame_star() * (sol.c1.abs() + sol.cm1.abs() / (p.inner_radius * p.inner_radius)) + sol.c0.abs() / p.inner_radius + 1.0;
            for i in 0..20 {
                let r = p.inner_radius + (r_st - p.inner_radius) * (i as f64 + 0.5) / 20.0;
                let res = residual_ring(&emb.polar(), &p, Point::new(0.0, r, 0.0), RingOptions::default()).unwrap();
                prop_assert!(res.max_abs() <= 1e-11 * scale, "{:?}", res);
            }
        }
    }

    #[test]
    fn stationary_radius_decreases_with_load(p in params_strategy(), f in 0.1..100.0f64, g in 1.01..3.0f64) {
        let a = rst_cubic(&ModelParams { load: f, ..p }).unwrap().r_st;
        let b = rst_cubic(&ModelParams { load: f * g, ..p }).unwrap().r_st;
        prop_assert!(b < a);
    }
}
