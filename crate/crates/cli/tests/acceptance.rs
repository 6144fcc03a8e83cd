//! Acceptance suite. Each test prints a single `[PASS]` or `[FAIL]` line;
//! run with `cargo test -p vk-cli --test acceptance -- --nocapture --test-threads 1`
//! to see them in order.

use std::process::Command;
use std::time::Instant;

use vk_core::coord::{CoordId, JetSpace, Order};
use vk_core::expr::{rational, Expr};
use vk_core::forms::{exterior_d, horizontalize, pullback_along_jet, Covector, DiffForm};
use vk_core::gen;
use vk_core::kernel::{
    build_rho, closed_form_null, decompose, divergence_lagrangian, euler, generate_null,
    kernel_check, one_form_from_data, poincare_potential, sniatycki_form, Lagrangian, NullData,
};
use vk_core::numeric::{finite_diff_check, numeric_euler_zero, SamplerConfig};
use vk_core::parse::{parse_form, parse_lagrangian};
use vk_core::{Error, ZeroTest, ZeroVerdict};

fn report(id: u32, name: &str, passed: usize, total: usize, extra: &str) {
    let status = if passed == total { "PASS" } else { "FAIL" };
    println!(
        "[{status}] criterion {id:>2} {name}: {passed}/{total}{}",
        if extra.is_empty() {
            String::new()
        } else {
            format!(" {extra}")
        }
    );
    assert_eq!(passed, total, "criterion {id} ({name}) failed");
}

/// The 200 potentials shared by the first two criteria.
fn null_corpus() -> Vec<(DiffForm, Lagrangian)> {
    (0..200u64)
        .map(|i| {
            let mut rng = gen::seeded(1000 + i);
            let (n, m) = gen::dims(&mut rng, 3, 3);
            let eta = gen::config_form(&mut rng, n, m, n - 1, 3);
            let l = generate_null(&eta).expect("eta has degree n - 1");
            (eta, l)
        })
        .collect()
}

#[test]
fn criterion_01_generated_lagrangians_are_null() {
    let start = Instant::now();
    let corpus = null_corpus();
    let passed = corpus
        .iter()
        .filter(|(_, l)| {
            let v = euler(l).verdicts(&ZeroTest::default()).unwrap();
            v.iter().all(|x| *x == ZeroVerdict::ExactZero)
        })
        .count();
    let nontrivial = corpus.iter().filter(|(_, l)| !l.body().is_zero()).count();
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "null generation",
        passed,
        corpus.len(),
        &format!("({nontrivial} nonzero L, {secs:.1}s)"),
    );
    assert!(secs < 60.0, "took {secs:.1}s");
}

#[test]
fn criterion_02_null_lagrangians_round_trip() {
    let test = ZeroTest::default();
    let corpus = null_corpus();
    let passed = corpus
        .iter()
        .filter(|(_, l)| {
            let Ok(d) = decompose(l, &test) else {
                return false;
            };
            let Ok(rho) = build_rho(&d) else { return false };
            if !exterior_d(&rho).is_zero() {
                return false;
            }
            let Ok(eta) = poincare_potential(&rho) else {
                return false;
            };
            let Ok(back) = generate_null(&eta) else {
                return false;
            };
            (back.body() - l.body()).is_zero()
        })
        .count();
    report(
        2,
        "kernel characterization round trip",
        passed,
        corpus.len(),
        "",
    );
}

#[test]
fn criterion_03_formulations_agree() {
    let test = ZeroTest::default();
    let cfg = SamplerConfig {
        trials: 30,
        tol: 1e-8,
        seed: 7,
        ..Default::default()
    };
    let mut passed = 0;
    let mut nulls = 0;
    for i in 0..100u64 {
        let mut rng = gen::seeded(3000 + i);
        let (n, m) = gen::dims(&mut rng, 3, 3);
        let eta = gen::config_form(&mut rng, n, m, n - 1, 3);
        let base = generate_null(&eta).unwrap();
        let l = if i % 2 == 0 {
            base
        } else {
            Lagrangian::new(n, m, base.body() + &gen::multi_affine(&mut rng, n, m, 2)).unwrap()
        };
        let kernel = kernel_check(&l, &test).unwrap().verdict;
        let symbolic = euler(&l).is_exact_zero();
        let numeric = numeric_euler_zero(&l, &cfg)
            .unwrap()
            .iter()
            .all(ZeroVerdict::is_zero);
        if kernel == symbolic && symbolic == numeric {
            passed += 1;
        }
        nulls += symbolic as usize;
    }
    report(
        3,
        "kernel check, symbolic and numeric agree",
        passed,
        100,
        &format!("({nulls} null)"),
    );
}

#[test]
fn criterion_04_divergences_are_null() {
    let mut passed = 0;
    for i in 0..100u64 {
        let mut rng = gen::seeded(4000 + i);
        let (n, m) = gen::dims(&mut rng, 3, 3);
        let coords = JetSpace::new(n, m, Order::Config).unwrap().coords();
        let polynomial = i % 2 == 0;
        let fs: Vec<Expr> = (0..n)
            .map(|_| {
                if polynomial {
                    gen::poly(&mut rng, &coords, 3, 3)
                } else {
                    gen::smooth(&mut rng, &coords, 3, 3)
                }
            })
            .collect();
        let l = divergence_lagrangian(n, m, &fs).unwrap();
        let verdicts = euler(&l)
            .verdicts(&ZeroTest {
                tol: 1e-8,
                seed: i,
                ..Default::default()
            })
            .unwrap();
        let ok = verdicts.iter().all(|v| match v {
            ZeroVerdict::ExactZero => true,
            ZeroVerdict::ProbablyZero { .. } => !polynomial,
            ZeroVerdict::NonZero { .. } => false,
        });
        passed += ok as usize;
    }
    report(4, "divergence expressions", passed, 100, "");
}

#[test]
fn criterion_05_horizontalization_preserves_pullbacks() {
    let mut passed = 0;
    for i in 0..50u64 {
        let mut rng = gen::seeded(5000 + i);
        let (n, m) = gen::dims(&mut rng, 3, 3);
        let rho = gen::horizontal_form(&mut rng, n, m, 2);
        let f = gen::polymap(&mut rng, n, m, 3);
        let diff = pullback_along_jet(&rho, &f)
            .unwrap()
            .sub(&pullback_along_jet(&horizontalize(&rho).unwrap(), &f).unwrap())
            .unwrap();
        passed += diff.terms().values().all(Expr::is_zero) as usize;
    }
    report(5, "pullback identity for h", passed, 50, "");
}

#[test]
fn criterion_06_sniatycki_form_horizontalizes_to_l() {
    let mut passed = 0;
    for i in 0..50u64 {
        let mut rng = gen::seeded(6000 + i);
        let (n, m) = gen::dims(&mut rng, 3, 3);
        let l = gen::lagrangian(&mut rng, n, m, 3);
        let h = horizontalize(&sniatycki_form(&l).unwrap()).unwrap();
        passed += (h == DiffForm::volume(l.space()).scale(l.body()).unwrap()) as usize;
    }
    report(6, "Sniatycki form", passed, 50, "");
}

/// `d` of a horizontal 2-form on `F1` for `n = m = 2`, expanded by hand.
///
/// The input is
/// `g0 dx1^dx2 + g1_s dy_s^dx2 + g2_s dx1^dy_s + 1/2 g12_{ab} dy_a^dy_b`
/// with `g12` antisymmetric.
fn hand_expanded_d(
    space: JetSpace,
    g0: &Expr,
    g1: &[Expr; 2],
    g2: &[Expr; 2],
    g12: &[[Expr; 2]; 2],
) -> DiffForm {
    let dx = Covector::dx;
    let dy = Covector::dy;
    let half = Expr::constant(rational(1, 2));
    let mut out = DiffForm::zero(space, 3);
    let mut put = |c: Expr, cov: &[Covector]| out.add_term(c, cov).unwrap();

    // dy_mu ^ dx1 ^ dx2
    for mu in 1..=2 {
        let c = g0.diff(CoordId::Y(mu))
            - g1[mu - 1].diff(CoordId::X(1))
            - g2[mu - 1].diff(CoordId::X(2));
        put(c, &[dy(mu), dx(1), dx(2)]);
    }
    // two dy factors
    for mu in 1..=2 {
        for s in 1..=2 {
            put(g1[s - 1].diff(CoordId::Y(mu)), &[dy(mu), dy(s), dx(2)]);
            put(g2[s - 1].diff(CoordId::Y(mu)), &[dy(mu), dx(1), dy(s)]);
            put(
                &half * &g12[mu - 1][s - 1].diff(CoordId::X(2)),
                &[dy(mu), dy(s), dx(2)],
            );
            put(
                -(&half * &g12[mu - 1][s - 1].diff(CoordId::X(1))),
                &[dy(mu), dx(1), dy(s)],
            );
        }
    }
    // three dy factors
    for mu in 1..=2 {
        for a in 1..=2 {
            for b in 1..=2 {
                put(
                    &half * &g12[a - 1][b - 1].diff(CoordId::Y(mu)),
                    &[dy(mu), dy(a), dy(b)],
                );
            }
        }
    }
    // dz factors
    for k in 1..=2 {
        for mu in 1..=2 {
            let z = CoordId::Z(k, mu);
            let dz = Covector(z);
            put(g0.diff(z), &[dz, dx(1), dx(2)]);
            for s in 1..=2 {
                put(g1[s - 1].diff(z), &[dz, dy(s), dx(2)]);
                put(g2[s - 1].diff(z), &[dz, dx(1), dy(s)]);
                for t in 1..=2 {
                    put(&half * &g12[s - 1][t - 1].diff(z), &[dz, dy(s), dy(t)]);
                }
            }
        }
    }
    out
}

#[test]
fn criterion_07_exterior_derivative_matches_hand_expansion() {
    let space = JetSpace::new(2, 2, Order::F1).unwrap();
    let coords = space.coords();
    let mut passed = 0;
    for i in 0..20u64 {
        let mut rng = gen::seeded(7000 + i);
        let mut p = || gen::poly(&mut rng, &coords, 3, 3);
        let g0 = p();
        let g1 = [p(), p()];
        let g2 = [p(), p()];
        let a = p();
        let g12 = [[Expr::zero(), a.clone()], [-a.clone(), Expr::zero()]];

        let mut rho = DiffForm::zero(space, 2);
        rho.add_term(g0.clone(), &[Covector::dx(1), Covector::dx(2)])
            .unwrap();
        for s in 1..=2 {
            rho.add_term(g1[s - 1].clone(), &[Covector::dy(s), Covector::dx(2)])
                .unwrap();
            rho.add_term(g2[s - 1].clone(), &[Covector::dx(1), Covector::dy(s)])
                .unwrap();
        }
        rho.add_term(a, &[Covector::dy(1), Covector::dy(2)])
            .unwrap();

        let generic = exterior_d(&rho);
        let oracle = hand_expanded_d(space, &g0, &g1, &g2, &g12);
        let diff = generic.sub(&oracle).unwrap();
        passed += (diff.terms().values().all(Expr::is_zero) && !generic.is_zero()) as usize;
    }
    report(
        7,
        "exterior derivative against hand expansion",
        passed,
        20,
        "",
    );
}

#[test]
fn criterion_08_golden_cases() {
    let test = ZeroTest::default();
    let mut checks: Vec<(&str, bool)> = Vec::new();

    let jac = parse_lagrangian("z1_1*z2_2 - z1_2*z2_1", 2, 2).unwrap();
    let config = JetSpace::new(2, 2, Order::Config).unwrap();
    checks.push((
        "Jacobian is null",
        kernel_check(&jac, &test).unwrap().verdict && euler(&jac).is_exact_zero(),
    ));
    let d = decompose(&jac, &test).unwrap();
    let coeffs_ok = d.f0().is_zero()
        && d.coeffs().len() == 2
        && d.coefficient(&[1, 2], &[1, 2]) == Expr::int(1)
        && d.coefficient(&[1, 2], &[2, 1]) == Expr::int(-1);
    checks.push(("Jacobian decomposition", coeffs_ok));
    let rho = build_rho(&d).unwrap();
    checks.push((
        "Jacobian rho",
        rho == parse_form("dy1^dy2", config, Some(2)).unwrap(),
    ));
    let eta = poincare_potential(&rho).unwrap();
    checks.push((
        "Jacobian potential",
        eta == parse_form("1/2*(y1*dy2 - y2*dy1)", config, Some(1)).unwrap(),
    ));

    let sq = parse_lagrangian("z1_1^2", 1, 1).unwrap();
    let e = euler(&sq);
    checks.push((
        "E(z11^2)",
        e.components() == [Expr::int(-2) * Expr::coord(CoordId::Z2(1, 1, 1))],
    ));
    checks.push((
        "z11^2 not decomposable",
        matches!(decompose(&sq, &test), Err(Error::NotInKernelCandidate(_))),
    ));

    let mut agree_one = 0;
    let mut agree_two = 0;
    for i in 0..20u64 {
        let mut rng = gen::seeded(8000 + i);
        let m = gen::dims(&mut rng, 1, 3).1;
        let coords = JetSpace::new(1, m, Order::Config).unwrap().coords();
        let big_f = gen::poly(&mut rng, &coords, 3, 4);
        let closed = closed_form_null(1, m, &NullData::One(big_f.clone())).unwrap();
        let eta = DiffForm::scalar(JetSpace::new(1, m, Order::Config).unwrap(), big_f).unwrap();
        agree_one += (closed.body() - generate_null(&eta).unwrap().body()).is_zero() as usize;

        let coords = JetSpace::new(2, m, Order::Config).unwrap().coords();
        let f: Vec<Expr> = (0..2).map(|_| gen::poly(&mut rng, &coords, 3, 3)).collect();
        let g: Vec<Expr> = (0..m).map(|_| gen::poly(&mut rng, &coords, 3, 3)).collect();
        let closed = closed_form_null(
            2,
            m,
            &NullData::Two {
                f: f.clone(),
                g: g.clone(),
            },
        )
        .unwrap();
        let eta = one_form_from_data(m, &f, &g).unwrap();
        agree_two += (closed.body() - generate_null(&eta).unwrap().body()).is_zero() as usize;
    }
    checks.push(("closed form n=1 (20 instances)", agree_one == 20));
    checks.push(("closed form n=2 (20 instances)", agree_two == 20));

    for (name, ok) in &checks {
        if !ok {
            println!("  golden check failed: {name}");
        }
    }
    let passed = checks.iter().filter(|(_, ok)| *ok).count();
    report(8, "golden cases", passed, checks.len(), "");
}

#[test]
fn criterion_09_numeric_hygiene() {
    let cfg = SamplerConfig::default();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for i in 0..20u64 {
        let mut rng = gen::seeded(9000 + i);
        let (n, m) = gen::dims(&mut rng, 3, 3);
        let coords = JetSpace::new(n, m, Order::F1).unwrap().coords();
        let body = gen::smooth(&mut rng, &coords, 3, 4);
        let l = Lagrangian::new(n, m, body).unwrap();
        let b = l.body();
        // every partial that enters the Euler expressions
        for mu in 1..=m {
            worst = worst.max(finite_diff_check(b, CoordId::Y(mu), &cfg).unwrap());
            for k in 1..=n {
                let p = b.diff(CoordId::Z(k, mu));
                worst = worst.max(finite_diff_check(b, CoordId::Z(k, mu), &cfg).unwrap());
                worst = worst.max(finite_diff_check(&p, CoordId::X(k), &cfg).unwrap());
                for s in 1..=m {
                    worst = worst.max(finite_diff_check(&p, CoordId::Y(s), &cfg).unwrap());
                    for j in 1..=n {
                        worst = worst.max(finite_diff_check(&p, CoordId::Z(j, s), &cfg).unwrap());
                        checked += 1;
                    }
                }
            }
        }
    }
    let fd_ok = worst < 1e-6;

    let mut dd = 0;
    for i in 0..100u64 {
        let mut rng = gen::seeded(9500 + i);
        let (n, m) = gen::dims(&mut rng, 3, 3);
        let f = gen::f1_form(&mut rng, n, m, 3);
        dd += exterior_d(&exterior_d(&f)).is_zero() as usize;
    }
    let passed = fd_ok as usize + (dd == 100) as usize;
    report(
        9,
        "numeric hygiene",
        passed,
        2,
        &format!("(max relative fd error {worst:.2e} over {checked}+ partials, d^2 = 0 on {dd}/100 forms)"),
    );
}

fn vk(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_vk"))
        .args(args)
        .env_remove("VK_SEED")
        .output()
        .expect("vk binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn criterion_10_cli_roundtrip_and_determinism() {
    let jac = "z1_1*z2_2 - z1_2*z2_1";
    let mut checks = Vec::new();

    let (code, out) = vk(&[
        "verify-roundtrip",
        "-n",
        "2",
        "-m",
        "2",
        "--format",
        "json",
        jac,
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let stages = v["outputs"]["stages"]
        .as_array()
        .cloned()
        .unwrap_or_default();
    checks.push(code == 0 && stages.len() == 5 && stages.iter().all(|s| s["status"] == "ok"));

    for args in [
        [
            "kernel-check",
            "-n",
            "2",
            "-m",
            "2",
            "z1_1*z2_1 + sin(x1)*z1_2",
        ],
        ["euler", "-n", "2", "-m", "2", "z1_1^2*y2 + exp(x2)*z2_1"],
        ["verify-roundtrip", "-n", "2", "-m", "2", jac],
    ] {
        let mut a = args.to_vec();
        a.extend(["--format", "json", "--seed", "42"]);
        let first = vk(&a);
        let second = vk(&a);
        checks.push(first == second && !first.1.is_empty());
    }
    let passed = checks.iter().filter(|ok| **ok).count();
    report(
        10,
        "CLI round trip and determinism",
        passed,
        checks.len(),
        "",
    );
}
