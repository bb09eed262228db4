mod common;

use common::*;
use rand::Rng;
use rtea::penalty::PenaltyFamily;
use rtea::regularizer::{eval_phi, eval_r, weights_r, weights_r0};
use rtea::solver::{eval_cost, majorizer_gap_r, rtea_step};
use rtea::{PenaltySpec, SolverConfig, WeightArray};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn phi_sum_matches_nested_loops() {
    let mut rng = rng(1);
    let b = WeightArray::new(2, 3, 2).unwrap();
    for _ in 0..50 {
        let x = randn(&mut rng, 40, 1.0);
        let spec = random_spec(&mut rng, 1.0);
        let fast = eval_phi(&x, &b, &spec).unwrap();
        let slow = phi_sum(&x, &pattern(&b), &spec);
        assert!(close(fast, slow, 1e-12), "{fast} vs {slow}");
    }
}

#[test]
fn coupling_of_impulse() {
    let spec = PenaltySpec::abs().with_eps(1e-6).unwrap();
    let n = 16;
    let mut x1 = vec![0.0; n];
    x1[7] = 1.0;
    let x2 = vec![0.0; n];
    let fast = eval_r(&x1, &x2, 3, &spec).unwrap();
    let slow = phi_sum(&x1, &[1.0; 3], &spec);
    assert!(close(fast, slow, 1e-13));
    // Three windows see the impulse, the remaining n + 3 - 1 - 3 see nothing.
    let expected = 3.0 * (1.0f64 + 1e-6).sqrt() + (n as f64 - 1.0) * 1e-3;
    assert!(close(fast, expected, 1e-13), "{fast} vs {expected}");
}

#[test]
fn weights_match_nested_loops() {
    let mut rng = rng(2);
    let b = WeightArray::new(3, 4, 2).unwrap();
    let z = randn(&mut rng, 30, 1.0);
    for family in PenaltyFamily::ALL {
        let a = if family == PenaltyFamily::Abs {
            0.0
        } else {
            0.4
        };
        let spec = PenaltySpec::new(family, a, 1e-6).unwrap();
        let fast = weights_r(&z, &b, &spec).unwrap();
        let slow = weights(&z, &pattern(&b), &spec);
        for (f, s) in fast.iter().zip(&slow) {
            assert!((f - s).abs() < 1e-12, "{family}: {f} vs {s}");
        }
    }
    let z = randn(&mut rng, 25, 1.0);
    let spec = PenaltySpec::new(PenaltyFamily::Atan, 0.3, 1e-8).unwrap();
    let fast = weights_r0(&z, 4, &spec).unwrap();
    let slow = weights(&z, &[1.0; 4], &spec);
    for (f, s) in fast.iter().zip(&slow) {
        assert!((f - s).abs() < 1e-12);
    }
}

#[test]
fn zero_signal_weights() {
    let spec = PenaltySpec::abs().with_eps(1e-4).unwrap();
    let r0 = weights_r0(&[0.0; 12], 3, &spec).unwrap();
    for v in r0 {
        assert!((v - 300.0).abs() < 1e-9);
    }
}

fn random_config(rng: &mut impl Rng) -> SolverConfig {
    let b1 = WeightArray::new(2, 5, 2).unwrap();
    let b2 = WeightArray::new(1, 8, 1).unwrap();
    SolverConfig::builder(b1, b2)
        .lambdas(
            rng.random_range(0.1..1.0),
            rng.random_range(0.1..1.0),
            rng.random_range(0.1..1.0),
        )
        .k0(2)
        .penalties(
            random_spec(rng, 1.0),
            random_spec(rng, 1.0),
            random_spec(rng, 1.0),
        )
        .enforce_convexity(false)
        .build()
        .unwrap()
}

#[test]
fn cost_matches_formula() {
    let mut rng = rng(3);
    for _ in 0..30 {
        let cfg = random_config(&mut rng);
        let y = randn(&mut rng, 32, 1.0);
        let x1 = randn(&mut rng, 32, 1.0);
        let x2 = randn(&mut rng, 32, 1.0);
        let fast = eval_cost(&y, &x1, &x2, &cfg).unwrap();
        let slow = cost(&y, &x1, &x2, &cfg);
        assert!(close(fast, slow, 1e-12), "{fast} vs {slow}");
    }
}

#[test]
fn step_matches_closed_form_update() {
    let mut rng = rng(4);
    let cfg = random_config(&mut rng);
    let y = randn(&mut rng, 32, 1.0);
    let x1 = randn(&mut rng, 32, 1.0);
    let x2 = randn(&mut rng, 32, 1.0);
    let s: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| a + b).collect();
    let r0 = weights(&s, &vec![1.0; cfg.k0], &cfg.pen0);
    let r1 = weights(&x1, &pattern(&cfg.b1), &cfg.pen1);
    let r2 = weights(&x2, &pattern(&cfg.b2), &cfg.pen2);
    let (n1, n2) = rtea_step(&y, &x1, &x2, &cfg).unwrap();
    for i in 0..32 {
        let c = 1.0 + cfg.lam0 * r0[i];
        let e1 = (y[i] + c * (x1[i] - x2[i])) / (2.0 + 2.0 * cfg.lam0 * r0[i] + cfg.lam1 * r1[i]);
        let e2 = (y[i] + c * (x2[i] - x1[i])) / (2.0 + 2.0 * cfg.lam0 * r0[i] + cfg.lam2 * r2[i]);
        assert!(close(n1[i], e1, 1e-12) && close(n2[i], e2, 1e-12));
    }
}

#[test]
fn step_descends() {
    let mut rng = rng(5);
    for _ in 0..1000 {
        let cfg = random_config(&mut rng);
        let y = randn(&mut rng, 24, 1.0);
        let x1 = randn(&mut rng, 24, 1.5);
        let x2 = randn(&mut rng, 24, 1.5);
        let before = eval_cost(&y, &x1, &x2, &cfg).unwrap();
        let (a, b) = rtea_step(&y, &x1, &x2, &cfg).unwrap();
        let after = eval_cost(&y, &a, &b, &cfg).unwrap();
        assert!(
            after <= before + 1e-12 * before.abs().max(1.0),
            "{after} > {before}"
        );
    }
}

#[test]
fn coupling_gap_on_fixed_sum_is_decoupling_surplus() {
    let mut rng = rng(6);
    for _ in 0..50 {
        let spec = random_spec(&mut rng, 1.0);
        let k0 = rng.random_range(1..=4);
        let z1 = randn(&mut rng, 24, 1.0);
        let z2 = randn(&mut rng, 24, 1.0);
        let shift = randn(&mut rng, 24, 1.0);
        let x1: Vec<f64> = z1.iter().zip(&shift).map(|(a, d)| a + d).collect();
        let x2: Vec<f64> = z2.iter().zip(&shift).map(|(a, d)| a - d).collect();
        let s: Vec<f64> = z1.iter().zip(&z2).map(|(a, b)| a + b).collect();
        let r0 = weights(&s, &vec![1.0; k0], &spec);
        let surplus: f64 = (0..24)
            .map(|i| 0.5 * r0[i] * (2.0 * shift[i]).powi(2))
            .sum();
        let gap = majorizer_gap_r(&x1, &x2, &z1, &z2, k0, &spec).unwrap();
        assert!(close(gap, surplus, 1e-10), "{gap} vs {surplus}");
    }
}

#[test]
fn phi_gap_is_second_order() {
    let mut rng = rng(7);
    let b = WeightArray::new(2, 3, 2).unwrap();
    let spec = PenaltySpec::new(PenaltyFamily::Log, 0.5, 1e-6).unwrap();
    let z = randn(&mut rng, 30, 1.0);
    let d = randn(&mut rng, 30, 1.0);
    let gap = |h: f64| {
        let x: Vec<f64> = z.iter().zip(&d).map(|(a, b)| a + h * b).collect();
        rtea::regularizer::majorizer_gap_phi(&x, &z, &b, &spec).unwrap()
    };
    let (g1, g2) = (gap(1e-2), gap(5e-3));
    assert!(g1 >= 0.0 && g2 >= 0.0);
    let ratio = g1 / g2;
    assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
}
