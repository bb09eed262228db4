use serde::Serialize;

use super::config::{mca_config, ExtractConfig};
use super::io::{unix_time, write_atomic, write_json, Table};
use super::svg::{stacked_chart, Series};
use super::BenchArgs;
use crate::analysis::{rms, rmse};
use crate::error::{Error, Result};
use crate::paramselect::{default_config, estimate_sigma, PeriodSpec, Tuning};
use crate::signalgen::{gen_example1, Example1, Mixture};
use crate::solver::{rtea_solve, Init, SolverConfig};

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    etas: &'a [f64],
    seeds: Vec<u64>,
    n_samples: usize,
    snr_db: f64,
    a0_fraction: f64,
    penalty: String,
    sigma_source: &'static str,
    max_iter: usize,
    mca_median_rmse_sum: f64,
    outputs: Vec<String>,
    timestamp_unix: u64,
}

/// Example record with the noise level set for the requested SNR.
pub fn record(seed: u64, n: usize, snr_db: f64) -> Result<Mixture> {
    let mut ex = Example1 {
        n_samples: n,
        sigma: 0.0,
        ..Example1::with_seed(seed)
    };
    let clean = gen_example1(&ex)?;
    let sum: Vec<f64> = clean.x1.iter().zip(&clean.x2).map(|(p, q)| p + q).collect();
    ex.sigma = rms(&sum) / 10f64.powf(snr_db / 20.0);
    gen_example1(&ex)
}

fn errors(mix: &Mixture, cfg: &SolverConfig) -> Result<[f64; 2]> {
    let res = rtea_solve(&mix.y, cfg, Init::Observation)?;
    Ok([rmse(&res.x1, &mix.x1)?, rmse(&res.x2, &mix.x2)?])
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Per seed: component errors for every eta, then the uncoupled baseline.
/// Per-eta `[rmse_x1, rmse_x2]` and the uncoupled baseline for one seed.
type SeedSweep = (Vec<[f64; 2]>, [f64; 2]);

fn sweep_seed(a: &BenchArgs, seed: u64) -> Result<SeedSweep> {
    let mix = record(seed, a.n, a.snr_db)?;
    let sigma = if a.mad {
        estimate_sigma(&mix.y)?.sigma
    } else {
        rms(&mix.w)
    };
    let s1 = PeriodSpec::from_samples(32.0, 3, 4);
    let s2 = PeriodSpec::from_samples(53.0, 3, 4);
    let mut per_eta = Vec::with_capacity(a.etas.len());
    for &eta in &a.etas {
        let tuning = Tuning {
            eta,
            a0_fraction: a.a0_fraction,
            penalty: a.penalty,
            sigma: Some(sigma),
            max_iter: a.max_iter,
            ..Tuning::default()
        };
        let sel = default_config(&mix.y, &s1, &s2, &tuning)?;
        per_eta.push(errors(&mix, &sel.config)?);
    }
    let base = ExtractConfig {
        max_iter: a.max_iter,
        ..ExtractConfig::default()
    };
    let mca = errors(&mix, &mca_config(&s1, &s2, sigma, &base)?)?;
    Ok((per_eta, mca))
}

pub fn run(a: &BenchArgs) -> Result<()> {
    if a.etas.is_empty() || a.seeds == 0 {
        return Err(Error::param("need at least one eta and one seed"));
    }
    let seeds: Vec<u64> = (a.seed..a.seed + a.seeds).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = seeds.len().div_ceil(workers);
    let results: Vec<Result<SeedSweep>> = std::thread::scope(|s| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || part.iter().map(|&sd| sweep_seed(a, sd)).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep thread panicked"))
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut x1 = Vec::new();
    let mut x2 = Vec::new();
    let mut total = Vec::new();
    for k in 0..a.etas.len() {
        x1.push(median(results.iter().map(|r| r.0[k][0]).collect()));
        x2.push(median(results.iter().map(|r| r.0[k][1]).collect()));
        total.push(median(
            results.iter().map(|r| r.0[k][0] + r.0[k][1]).collect(),
        ));
    }
    let mca = median(results.iter().map(|r| r.1[0] + r.1[1]).collect());

    let path = a.out.join("eta_sweep.csv");
    Table {
        headers: vec!["eta", "rmse_x1", "rmse_x2", "rmse_sum"],
        columns: vec![&a.etas, &x1, &x2, &total],
        index: false,
    }
    .write(&path)?;
    let mut outputs = vec![path.display().to_string()];
    for (k, eta) in a.etas.iter().enumerate() {
        println!(
            "eta {eta:.3}: rmse x1 {:.4}, x2 {:.4}, sum {:.4}",
            x1[k], x2[k], total[k]
        );
    }
    println!("uncoupled (lam0 = 0): sum {mca:.4}");
    if a.svg {
        let svg = a.out.join("eta_sweep.svg");
        let chart = stacked_chart(
            "median component error vs eta",
            "eta",
            &[
                Series {
                    label: "rmse x1 + rmse x2",
                    x: &a.etas,
                    y: &total,
                },
                Series {
                    label: "rmse x1",
                    x: &a.etas,
                    y: &x1,
                },
                Series {
                    label: "rmse x2",
                    x: &a.etas,
                    y: &x2,
                },
            ],
        );
        write_atomic(&svg, chart.as_bytes())?;
        outputs.push(svg.display().to_string());
    }
    let manifest = a.out.join("bench_manifest.json");
    outputs.push(manifest.display().to_string());
    write_json(
        &manifest,
        &Manifest {
            tool: "rtea",
            version: env!("CARGO_PKG_VERSION"),
            command: "bench-eta",
            etas: &a.etas,
            seeds,
            n_samples: a.n,
            snr_db: a.snr_db,
            a0_fraction: a.a0_fraction,
            penalty: a.penalty.to_string(),
            sigma_source: if a.mad { "mad" } else { "generator" },
            max_iter: a.max_iter,
            mca_median_rmse_sum: mca,
            outputs,
            timestamp_unix: unix_time(),
        },
    )
}
