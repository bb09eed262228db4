//! Straight-from-the-formula reimplementations used as test oracles. Nothing
//! here calls into the library's numerical code.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rtea::{PenaltyFamily, PenaltySpec, SolverConfig, WeightArray};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn randn(rng: &mut impl Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            // Box-Muller keeps the oracle free of the library's noise source.
            let u1: f64 = rng.random_range(1e-12..1.0);
            let u2: f64 = rng.random();
            scale * (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        })
        .collect()
}

/// Penalty value for `u >= 0`.
pub fn phi(family: PenaltyFamily, a: f64, u: f64) -> f64 {
    let u = u.abs();
    if a == 0.0 {
        return u;
    }
    match family {
        PenaltyFamily::Abs => u,
        PenaltyFamily::Log => (1.0 + a * u).ln() / a,
        PenaltyFamily::Rat => u / (1.0 + a * u / 2.0),
        PenaltyFamily::Atan => {
            let s3 = 3f64.sqrt();
            2.0 / (a * s3) * (((1.0 + 2.0 * a * u) / s3).atan() - std::f64::consts::PI / 6.0)
        }
    }
}

/// `u / phi'(u)` for `u > 0`.
pub fn psi(family: PenaltyFamily, a: f64, u: f64) -> f64 {
    let u = u.abs();
    match family {
        _ if a == 0.0 => u,
        PenaltyFamily::Abs => u,
        PenaltyFamily::Log => u * (1.0 + a * u),
        PenaltyFamily::Rat => u * (1.0 + a * u / 2.0).powi(2),
        PenaltyFamily::Atan => u * (1.0 + a * u + a * a * u * u),
    }
}

pub fn phi_eps(p: &PenaltySpec, u: f64) -> f64 {
    phi(p.family(), p.a(), (u * u + p.eps()).sqrt())
}

pub fn psi_eps(p: &PenaltySpec, u: f64) -> f64 {
    psi(p.family(), p.a(), (u * u + p.eps()).sqrt())
}

pub fn pattern(b: &WeightArray) -> Vec<f64> {
    let mut v = Vec::new();
    for k in 0..=b.m() {
        v.extend(std::iter::repeat_n(1.0, b.n1()));
        if k < b.m() {
            v.extend(std::iter::repeat_n(0.0, b.n0()));
        }
    }
    v
}

fn at(x: &[f64], i: i64) -> f64 {
    if i >= 0 && (i as usize) < x.len() {
        x[i as usize]
    } else {
        0.0
    }
}

/// Squared weighted norm of the window starting at `start` (zero padded).
fn window_sq(x: &[f64], b: &[f64], start: i64) -> f64 {
    b.iter()
        .enumerate()
        .map(|(k, &bk)| bk * at(x, start + k as i64).powi(2))
        .sum()
}

pub fn phi_sum(x: &[f64], b: &[f64], p: &PenaltySpec) -> f64 {
    let k = b.len() as i64;
    let n = x.len() as i64;
    let mut total = 0.0;
    for start in -(k - 1)..n {
        total += phi_eps(p, window_sq(x, b, start).sqrt());
    }
    total
}

pub fn weights(z: &[f64], b: &[f64], p: &PenaltySpec) -> Vec<f64> {
    (0..z.len() as i64)
        .map(|n| {
            let mut r = 0.0;
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0.0 {
                    let start = n - j as i64;
                    r += bj / psi_eps(p, window_sq(z, b, start).sqrt());
                }
            }
            r
        })
        .collect()
}

pub fn cost(y: &[f64], x1: &[f64], x2: &[f64], cfg: &SolverConfig) -> f64 {
    let mut data = 0.0;
    for i in 0..y.len() {
        data += (y[i] - x1[i] - x2[i]).powi(2);
    }
    let s: Vec<f64> = x1.iter().zip(x2).map(|(a, b)| a + b).collect();
    let ones = vec![1.0; cfg.k0];
    0.5 * data
        + cfg.lam0 * phi_sum(&s, &ones, &cfg.pen0)
        + cfg.lam1 * phi_sum(x1, &pattern(&cfg.b1), &cfg.pen1)
        + cfg.lam2 * phi_sum(x2, &pattern(&cfg.b2), &cfg.pen2)
}

/// Central-difference gradient of `cost` with respect to `(x1, x2)`.
pub fn fd_gradient(y: &[f64], x1: &[f64], x2: &[f64], cfg: &SolverConfig, h: f64) -> Vec<f64> {
    let mut g = Vec::with_capacity(2 * y.len());
    for which in 0..2 {
        for i in 0..y.len() {
            let mut a1 = x1.to_vec();
            let mut a2 = x2.to_vec();
            let mut b1 = x1.to_vec();
            let mut b2 = x2.to_vec();
            if which == 0 {
                a1[i] += h;
                b1[i] -= h;
            } else {
                a2[i] += h;
                b2[i] -= h;
            }
            g.push((cost(y, &a1, &a2, cfg) - cost(y, &b1, &b2, cfg)) / (2.0 * h));
        }
    }
    g
}

pub fn random_spec(rng: &mut impl Rng, max_a: f64) -> PenaltySpec {
    let family = PenaltyFamily::ALL[rng.random_range(0..4)];
    let a = if family == PenaltyFamily::Abs {
        0.0
    } else {
        rng.random_range(0.0..max_a)
    };
    let eps = 10f64.powf(rng.random_range(-8.0..-2.0));
    PenaltySpec::new(family, a, eps).unwrap()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
