//! Acceptance suite: eight numbered criteria, one test and one printed
//! pass line each (run with `--nocapture` to see them). Every tolerance is
//! pinned in the assertions below; each criterion also carries a wall-clock
//! budget.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use samuelson::equilibrium::{build_problem, RegularizationConfig};
use samuelson::linalg::Vector3;
use samuelson::model::{simulate, simulate_companion, ModelParams, StateVector, ValidationMode};
use samuelson::spectral::{analyze, characteristic, Stability};

fn random_strict(rng: &mut StdRng) -> ModelParams<f64> {
    let c1 = rng.random_range(0.02..0.9);
    let c2 = rng.random_range(0.02..(0.98 - c1));
    let b = rng.random_range(0.05..3.0);
    let magnitude = rng.random_range(0.5..500.0);
    let p = if rng.random_bool(0.5) { magnitude } else { -magnitude };
    ModelParams::new(c1, c2, b, p, ValidationMode::Strict).unwrap()
}

/// Boundary draw on a dyadic grid: all companion entries are then exact in
/// floating point, so the system matrix is exactly rank deficient — the
/// premise of the rank-deficient criteria.
fn random_boundary(rng: &mut StdRng) -> ModelParams<f64> {
    let c1 = rng.random_range(1u32..1024) as f64 / 1024.0;
    let c2 = 1.0 - c1;
    let b = rng.random_range(1u32..3073) as f64 / 1024.0;
    let p = rng.random_range(1u32..1601) as f64 / 16.0;
    ModelParams::new(c1, c2, b, p, ValidationMode::Extended).unwrap()
}

fn finish(number: u32, name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("criterion {number} ({name}): PASS ({elapsed:.2?})");
    assert!(elapsed <= budget, "criterion {number} took {elapsed:?}, budget {budget:?}");
}

#[test]
fn criterion_1_closed_form_equilibrium() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(101);
    for _ in 0..1000 {
        let params = random_strict(&mut rng);
        let problem = build_problem(&params);
        let eq = problem.unique_equilibrium().unwrap();
        let expected = params.p() / (1.0 - params.c1() - params.c2());
        for i in 0..3 {
            assert!(
                (eq.state[i] - expected).abs() <= 1e-10 * expected.abs(),
                "component {i}: {} vs {expected}",
                eq.state[i]
            );
        }
        let residual = (problem.matrix().mul_vec(&eq.state) - *problem.rhs()).norm();
        assert!(residual <= 1e-10 * (1.0 + problem.rhs().norm()), "residual {residual:e}");
    }
    finish(1, "closed-form equilibrium", started, Duration::from_secs(1));
}

#[test]
fn criterion_2_determinant_identity() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(102);
    for _ in 0..10_000 {
        let params = random_strict(&mut rng);
        let det = build_problem(&params).matrix().det();
        let closed_form = 1.0 - params.c1() - params.c2();
        assert!(
            (det - closed_form).abs() <= 1e-12,
            "det {det:e} vs closed form {closed_form:e}"
        );
    }
    finish(2, "determinant identity", started, Duration::from_secs(1));
}

#[test]
fn criterion_3_companion_scalar_equivalence() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(103);
    let mut done = 0;
    while done < 100 {
        let params = random_strict(&mut rng);
        let seeds = [
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
        ];
        let trajectory = match simulate(&params, seeds, 1000) {
            Ok(t) => t,
            Err(_) => continue, // explosive draw, resample
        };
        let states =
            simulate_companion(&params, StateVector::new(seeds[0], seeds[1], seeds[2]), 1000)
                .unwrap();
        for (k, state) in states.iter().enumerate() {
            let scalar = trajectory.records[k].income;
            assert!(
                (state.y1 - scalar).abs() <= 1e-12 * scalar.abs().max(state.y1.abs()).max(1.0),
                "index {k}: companion {} vs scalar {scalar}",
                state.y1
            );
        }
        done += 1;
    }
    finish(3, "companion/scalar equivalence", started, Duration::from_secs(5));
}

#[test]
fn criterion_4_tikhonov_limit_oracle() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(104);
    let thetas = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    for _ in 0..100 {
        let params = random_boundary(&mut rng);
        let problem = build_problem(&params);
        let pseudo = problem.matrix().pseudo_solve(problem.rhs());
        let distance = |theta: f64| {
            let config = RegularizationConfig::new(theta).unwrap();
            (problem.optimal_equilibrium(&config).unwrap().state - pseudo).norm()
        };
        let distances: Vec<f64> = thetas.iter().map(|&t| distance(t)).collect();
        for pair in distances.windows(2) {
            assert!(pair[0] > pair[1], "distances must decrease: {distances:?}");
            let ratio = pair[0] / pair[1];
            assert!(
                (3.5..=4.5).contains(&ratio),
                "halving theta must quarter the error, got ratio {ratio} in {distances:?}"
            );
        }
        let tail = distance(1e-6);
        assert!(
            tail <= 1e-6 * (1.0 + pseudo.norm()),
            "distance at theta=1e-6 is {tail:e}, pseudo norm {:e}",
            pseudo.norm()
        );
    }
    finish(4, "Tikhonov-limit oracle", started, Duration::from_secs(5));
}

#[test]
fn criterion_5_gradient_stationarity() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(105);
    // stationarity at the regularized solution, boundary and regular systems
    for trial in 0..100 {
        let params =
            if trial % 2 == 0 { random_boundary(&mut rng) } else { random_strict(&mut rng) };
        let problem = build_problem(&params);
        let config = RegularizationConfig::new(rng.random_range(1e-6..1e-2)).unwrap();
        let solution = problem.optimal_equilibrium(&config).unwrap().state;
        let gradient = problem.objective_gradient(&config, &solution);
        let scale = problem.matrix().transpose().mul_vec(problem.rhs()).norm();
        assert!(
            gradient.norm() <= 1e-8 * (1.0 + scale),
            "gradient norm {:e} at scale {scale:e}",
            gradient.norm()
        );
    }
    // analytic gradient against central differences at random points
    for _ in 0..100 {
        let params = random_strict(&mut rng);
        let problem = build_problem(&params);
        let config = RegularizationConfig::new(rng.random_range(1e-4..1e-1)).unwrap();
        let y = Vector3::new(
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
        );
        let analytic = problem.objective_gradient(&config, &y);
        let mut numeric = Vector3::zero();
        for i in 0..3 {
            let h = 1e-6 * (1.0 + y[i].abs());
            let mut plus = y;
            let mut minus = y;
            plus[i] += h;
            minus[i] -= h;
            numeric[i] = (problem.objective_value(&config, &plus)
                - problem.objective_value(&config, &minus))
                / (2.0 * h);
        }
        assert!(
            (analytic - numeric).norm() <= 1e-5 * (1.0 + analytic.norm()),
            "analytic {analytic:?} vs numeric {numeric:?}"
        );
    }
    finish(5, "gradient stationarity", started, Duration::from_secs(2));
}

#[test]
fn criterion_6_convergence_to_equilibrium() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(106);
    let mut done = 0;
    while done < 50 {
        let params = random_strict(&mut rng);
        let report = analyze(&params);
        if report.classification != Stability::AsymptoticallyStable
            || report.spectral_radius >= 0.95
        {
            continue;
        }
        let equilibrium = build_problem(&params).unique_equilibrium().unwrap().state;
        let seed = StateVector::new(
            rng.random_range(-1000.0..1000.0),
            rng.random_range(-1000.0..1000.0),
            rng.random_range(-1000.0..1000.0),
        );
        let states = simulate_companion(&params, seed, 10_000).unwrap();
        let reached = states.last().unwrap().to_vector();
        assert!(
            (reached - equilibrium).norm() <= 1e-6 * equilibrium.norm(),
            "final state {reached:?} vs equilibrium {equilibrium:?}"
        );
        done += 1;
    }
    finish(6, "convergence to equilibrium", started, Duration::from_secs(5));
}

#[test]
fn criterion_7_vieta_suite() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(107);
    for _ in 0..10_000 {
        let params = random_strict(&mut rng);
        let cubic = characteristic(&params);
        let roots = cubic.roots();
        let (c1, c2, b) = (params.c1(), params.c2(), params.b());
        let sum = roots[0] + roots[1] + roots[2];
        let pairs = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
        let product = roots[0] * roots[1] * roots[2];
        assert!((sum.re - c1 * (1.0 + b)).abs() <= 1e-9 && sum.im.abs() <= 1e-9, "sum {sum}");
        assert!(
            (pairs.re + (c2 + b * (c2 - c1))).abs() <= 1e-9 && pairs.im.abs() <= 1e-9,
            "pair sum {pairs}"
        );
        assert!(
            (product.re + b * c2).abs() <= 1e-9 && product.im.abs() <= 1e-9,
            "product {product}"
        );
        for root in roots {
            let residual = cubic.eval(root).norm();
            assert!(
                residual <= 1e-9 * (1.0 + root.norm().powi(3)),
                "residual {residual:e} at {root}"
            );
        }
    }
    finish(7, "Vieta suite", started, Duration::from_secs(2));
}

#[test]
fn criterion_8_cli_golden_files() {
    let started = Instant::now();
    let cases: [(&str, &[&str]); 3] = [
        (
            "equilibrium_unique.json",
            &["equilibrium", "--c1", "0.5", "--c2", "0.3", "--b", "0.2", "--p", "100", "--format", "json"],
        ),
        (
            "simulate_zeros.csv",
            &["simulate", "--c1", "0.5", "--c2", "0.3", "--b", "0.2", "--p", "0", "--t0", "0", "--t1", "0", "--t2", "0", "--steps", "5"],
        ),
        (
            "equilibrium_regularized.json",
            &["equilibrium", "--c1", "0.6", "--c2", "0.4", "--b", "1", "--p", "10", "--mode", "extended", "--theta", "1e-6"],
        ),
    ];
    for (golden_name, args) in cases {
        let golden_path =
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(golden_name);
        let golden = std::fs::read(&golden_path).unwrap();
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let out = Command::new(env!("CARGO_BIN_EXE_samuelson"))
                .args(args)
                .output()
                .expect("binary must run");
            assert!(out.status.success(), "{golden_name}: {}", String::from_utf8_lossy(&out.stderr));
            outputs.push(out.stdout);
        }
        assert_eq!(outputs[0], outputs[1], "{golden_name}: consecutive runs differ");
        assert_eq!(outputs[0], golden, "{golden_name}: output differs from the golden file");
    }
    finish(8, "CLI golden files", started, Duration::from_secs(1));
}
