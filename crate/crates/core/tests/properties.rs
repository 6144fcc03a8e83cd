use proptest::prelude::*;

use vk_core::coord::{CoordId, JetSpace, Order};
use vk_core::expr::Expr;
use vk_core::forms::{contact, exterior_d, horizontalize, pullback_along_jet, wedge, DiffForm};
use vk_core::gen;
use vk_core::jet::{prolong, total_derivative};
use vk_core::kernel::{
    build_rho, decompose, divergence_lagrangian, euler, euler_via_total_derivative, generate_null,
    poincare_potential, recursive_coefficients, Lagrangian,
};
use vk_core::normal::{rebuild, z_normal_form};
use vk_core::parse::{parse_expr, parse_form};
use vk_core::{is_zero, ZeroTest};

fn space(n: usize, m: usize, order: Order) -> JetSpace {
    JetSpace::new(n, m, order).unwrap()
}

fn small_dims(seed: u64) -> (usize, usize) {
    gen::dims(&mut gen::seeded(seed ^ 0x5eed), 3, 3)
}

fn graded_sign(p: usize) -> Expr {
    Expr::int(if p.is_multiple_of(2) { 1 } else { -1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn differentiation_is_linear(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let coords = space(n, m, Order::F1).coords();
        let mut rng = gen::seeded(seed);
        let p = gen::smooth(&mut rng, &coords, 3, 3);
        let q = gen::smooth(&mut rng, &coords, 3, 3);
        let a = Expr::int(3);
        let b = parse_expr("-5/7", n, m).unwrap();
        for &c in &coords {
            let lhs = (&a * &p + &b * &q).diff(c);
            prop_assert_eq!(lhs, &a * &p.diff(c) + &b * &q.diff(c));
        }
    }

    #[test]
    fn mixed_partials_commute(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let coords = space(n, m, Order::F1).coords();
        let e = gen::smooth(&mut gen::seeded(seed), &coords, 3, 3);
        for &c1 in &coords {
            for &c2 in &coords {
                prop_assert_eq!(e.diff(c1).diff(c2), e.diff(c2).diff(c1));
            }
        }
    }

    #[test]
    fn normal_form_rebuilds(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let coords = space(n, m, Order::F1).coords();
        let p = gen::poly(&mut gen::seeded(seed), &coords, 4, 6);
        let nf = z_normal_form(&p).unwrap();
        prop_assert!(nf.keys().all(|k| k.factors().iter().all(|(c, _)| c.is_jet())));
        prop_assert!(nf.values().all(|v| v.coords().iter().all(|c| !c.is_jet())));
        prop_assert_eq!(rebuild(&nf), p);
    }

    #[test]
    fn expressions_print_and_parse_back(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let coords = space(n, m, Order::F2).coords();
        let mut rng = gen::seeded(seed);
        let mut e = gen::smooth(&mut rng, &coords, 3, 4);
        // exercise reciprocal atoms too
        if let Ok(r) = (Expr::int(2) + gen::poly(&mut rng, &coords, 2, 2)).pow(-2) {
            e += r;
        }
        let printed = e.to_string();
        prop_assert_eq!(parse_expr(&printed, n, m).unwrap(), e, "printed as {}", printed);
    }

    #[test]
    fn forms_print_and_parse_back(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let f = gen::f1_form(&mut gen::seeded(seed), n, m, 3);
        let printed = f.to_string();
        let back = parse_form(&printed, f.space(), Some(f.degree())).unwrap();
        prop_assert_eq!(back, f, "printed as {}", printed);
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let f = gen::f1_form(&mut gen::seeded(seed), n, m, 3);
        prop_assert!(exterior_d(&exterior_d(&f)).is_zero());
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let mut rng = gen::seeded(seed);
        let a = gen::f1_form(&mut rng, n, m, 2);
        let b = gen::f1_form(&mut rng, n, m, 2);
        let lhs = exterior_d(&wedge(&a, &b).unwrap());
        let rhs = wedge(&exterior_d(&a), &b)
            .unwrap()
            .add(&wedge(&a, &exterior_d(&b)).unwrap().scale(&graded_sign(a.degree())).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let mut rng = gen::seeded(seed);
        let a = gen::f1_form(&mut rng, n, m, 2);
        let b = gen::f1_form(&mut rng, n, m, 2);
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap().scale(&graded_sign(a.degree() * b.degree())).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn pullback_commutes_with_d(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let mut rng = gen::seeded(seed);
        let a = gen::f1_form(&mut rng, n, m, 2);
        let f = gen::polymap(&mut rng, n, m, 3);
        let lhs = pullback_along_jet(&exterior_d(&a), &f).unwrap();
        let rhs = exterior_d(&pullback_along_jet(&a, &f).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contact_forms_pull_back_to_zero(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let f = gen::polymap(&mut gen::seeded(seed), n, m, 3);
        for mu in 1..=m {
            let w = contact(space(n, m, Order::F1), mu).unwrap();
            prop_assert!(pullback_along_jet(&w, &f).unwrap().is_zero());
        }
    }

    #[test]
    fn horizontalization_preserves_pullbacks(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let mut rng = gen::seeded(seed);
        let rho = gen::horizontal_form(&mut rng, n, m, 2);
        let f = gen::polymap(&mut rng, n, m, 2);
        let h = horizontalize(&rho).unwrap();
        prop_assert!(h.terms().keys().flatten().all(|c| matches!(c.coord(), CoordId::X(_))));
        prop_assert_eq!(pullback_along_jet(&rho, &f).unwrap(), pullback_along_jet(&h, &f).unwrap());
    }

    #[test]
    fn total_derivative_is_differentiation_along_jets(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let mut rng = gen::seeded(seed);
        let g = gen::poly(&mut rng, &space(n, m, Order::F1).coords(), 3, 4);
        let f = gen::polymap(&mut rng, n, m, 3);
        let j1 = prolong(&f, 1).unwrap();
        let j2 = prolong(&f, 2).unwrap();
        for k in 1..=n {
            let lhs = j2.apply(&total_derivative(&space(n, m, Order::F2), &g, k).unwrap()).unwrap();
            prop_assert_eq!(lhs, j1.apply(&g).unwrap().diff(CoordId::X(k)));
        }
    }

    #[test]
    fn euler_is_linear_and_matches_total_derivative_form(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let mut rng = gen::seeded(seed);
        let a = gen::lagrangian(&mut rng, n, m, 3);
        let b = gen::lagrangian(&mut rng, n, m, 3);
        let sum = Lagrangian::new(n, m, a.body() + b.body()).unwrap();
        let (ea, eb, es) = (euler(&a), euler(&b), euler(&sum));
        for mu in 0..m {
            prop_assert_eq!(&es.components()[mu], &(&ea.components()[mu] + &eb.components()[mu]));
        }
        prop_assert_eq!(euler_via_total_derivative(&a).unwrap(), ea.components().to_vec());
    }

    #[test]
    fn generated_lagrangians_decompose_back(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let eta = gen::config_form(&mut gen::seeded(seed), n, m, n - 1, 3);
        let l = generate_null(&eta).unwrap();
        prop_assert!(euler(&l).is_exact_zero());
        let d = decompose(&l, &ZeroTest::default()).unwrap();
        prop_assert_eq!(&recursive_coefficients(&l).unwrap(), &d);
        prop_assert_eq!(d.reconstruct(), l.body().clone());
        let rho = build_rho(&d).unwrap();
        prop_assert!(exterior_d(&rho).is_zero());
        let h = horizontalize(&rho).unwrap();
        prop_assert_eq!(h, DiffForm::volume(l.space()).scale(l.body()).unwrap());
        // rho is determined by L: it agrees with d eta
        prop_assert_eq!(rho, exterior_d(&eta));
    }

    #[test]
    fn potential_inverts_d_on_exact_forms(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let mut rng = gen::seeded(seed);
        let dim = n + m;
        let p = 1 + (seed as usize % dim.min(3));
        let beta = gen::config_form(&mut rng, n, m, p - 1, 3);
        let rho = exterior_d(&beta);
        let eta = poincare_potential(&rho).unwrap();
        prop_assert_eq!(exterior_d(&eta), rho);
    }

    #[test]
    fn divergences_are_null(seed in any::<u64>()) {
        let (n, m) = small_dims(seed);
        let mut rng = gen::seeded(seed);
        let coords = space(n, m, Order::Config).coords();
        let fs: Vec<Expr> = (0..n).map(|_| gen::smooth(&mut rng, &coords, 3, 3)).collect();
        let l = divergence_lagrangian(n, m, &fs).unwrap();
        for e in euler(&l).components() {
            prop_assert!(is_zero(e, 20, 1e-8, seed).unwrap().is_zero());
        }
    }

    #[test]
    fn zero_test_is_deterministic(seed in any::<u64>()) {
        let coords = space(2, 2, Order::F1).coords();
        let e = gen::smooth(&mut gen::seeded(seed), &coords, 3, 3);
        prop_assert_eq!(is_zero(&e, 10, 1e-9, seed).unwrap(), is_zero(&e, 10, 1e-9, seed).unwrap());
    }
}
