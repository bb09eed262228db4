use serde::Serialize;

use super::config::{ExtractConfig, Mode, Resolved};
use super::io::{read_csv, unix_time, write_atomic, write_json, Table};
use super::svg::{stacked_chart, Series};
use super::ExtractArgs;
use crate::analysis::rmse;
use crate::error::Result;
use crate::solver::{pogs_solve, rtea_solve, Init};

/// Above this, the coupling term dominates and both estimates collapse
/// toward the same signal.
const ETA_WARN: f64 = 0.8;

#[derive(Debug, Serialize)]
struct Metrics {
    sigma: f64,
    final_cost: f64,
    iterations: usize,
    converged: bool,
    rmse_x1: Option<f64>,
    rmse_x2: Option<f64>,
    rmse_input_x1: Option<f64>,
    rmse_input_x2: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Input<'a> {
    path: String,
    sha256: &'a str,
    column: &'a str,
    samples: usize,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a ExtractConfig,
    resolved: &'a Resolved,
    input: Input<'a>,
    metrics: Metrics,
    outputs: Vec<String>,
    timestamp_unix: u64,
}

fn merge(a: &ExtractArgs) -> Result<ExtractConfig> {
    let mut c = match &a.config {
        Some(p) => ExtractConfig::load(p)?,
        None => ExtractConfig::default(),
    };
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = a.$field.clone() { c.$field = v; }
        )*};
    }
    set!(
        mode,
        n1,
        m,
        eta,
        a0_fraction,
        penalty,
        eps,
        max_iter,
        tol,
        column
    );
    if a.k0.is_some() {
        c.k0 = a.k0;
    }
    if a.sigma.is_some() {
        c.sigma = a.sigma;
    }
    if a.seed.is_some() {
        c.seed = a.seed;
    }
    if a.fs.is_some() {
        c.sample_rate_hz = a.fs;
    }
    if let Some(t) = a.period {
        c.period_samples = vec![t];
        c.fault_freq_hz.clear();
    } else if a.t1.is_some() || a.t2.is_some() {
        c.period_samples = a.t1.into_iter().chain(a.t2).collect();
        c.fault_freq_hz.clear();
    } else if a.f1.is_some() || a.f2.is_some() {
        c.fault_freq_hz = a.f1.into_iter().chain(a.f2).collect();
        c.period_samples.clear();
    }
    if a.period.is_some() && a.mode.is_none() && a.config.is_none() {
        c.mode = Mode::Pogs;
    }
    Ok(c)
}

fn rmse_opt(x: &[f64], truth: Option<&[f64]>) -> Result<Option<f64>> {
    truth.map(|t| rmse(x, t)).transpose()
}

pub fn run(a: &ExtractArgs) -> Result<()> {
    let cfg = merge(a)?;
    let data = read_csv(&a.input)?;
    let y = data.signal(&cfg.column, &a.input)?;
    if cfg.mode == Mode::Rtea && cfg.eta > ETA_WARN {
        eprintln!(
            "warning: eta = {} weights the coupling term so heavily that the two \
             components tend to coincide (x1 = x2); values near 0.5 separate them best",
            cfg.eta
        );
    }
    let resolved = cfg.resolve(y)?;
    let out = &a.out;
    let components = out.join("components.csv");
    let cost_path = out.join("cost.csv");
    let mut outputs = vec![
        components.display().to_string(),
        cost_path.display().to_string(),
    ];
    let truth1 = data.column("x1_true");
    let truth2 = data.column("x2_true");

    let (x1, x2, history, iterations, converged, sigma) = match &resolved {
        Resolved::Pair {
            config,
            sigma,
            convexity_bound,
            ..
        } => {
            let res = rtea_solve(y, config, Init::Observation)?;
            println!("sigma_hat = {sigma:.6}");
            println!(
                "lambda = ({:.6}, {:.6}, {:.6}), a0 = {:.6}",
                config.lam0,
                config.lam1,
                config.lam2,
                config.pen0.a()
            );
            if let Some(b) = convexity_bound {
                println!("convexity bound 1/(k0 lam0) = {b:.6}");
            }
            Table {
                headers: vec!["x1", "x2", "residual"],
                columns: vec![&res.x1, &res.x2, &res.residual],
                index: true,
            }
            .write(&components)?;
            (
                res.x1,
                Some(res.x2),
                res.cost_history,
                res.iterations,
                res.converged,
                *sigma,
            )
        }
        Resolved::Single { config, sigma, .. } => {
            let res = pogs_solve(y, config)?;
            println!("sigma_hat = {sigma:.6}");
            println!("lambda = {:.6}, a = {:.6}", config.lam, config.pen.a());
            let residual: Vec<f64> = y.iter().zip(&res.x).map(|(p, q)| p - q).collect();
            Table {
                headers: vec!["x1", "residual"],
                columns: vec![&res.x, &residual],
                index: true,
            }
            .write(&components)?;
            (
                res.x,
                None,
                res.cost_history,
                res.iterations,
                res.converged,
                *sigma,
            )
        }
    };
    println!(
        "iterations = {iterations}{}",
        if converged {
            ""
        } else {
            " (iteration limit reached)"
        }
    );

    let iters: Vec<f64> = (0..history.len()).map(|i| i as f64).collect();
    write_atomic(&cost_path, cost_csv(&history).as_bytes())?;

    let metrics = Metrics {
        sigma,
        final_cost: *history.last().unwrap_or(&f64::NAN),
        iterations,
        converged,
        rmse_x1: rmse_opt(&x1, truth1)?,
        rmse_x2: match &x2 {
            Some(x2) => rmse_opt(x2, truth2)?,
            None => None,
        },
        rmse_input_x1: rmse_opt(y, truth1)?,
        rmse_input_x2: if x2.is_some() {
            rmse_opt(y, truth2)?
        } else {
            None
        },
    };
    if let (Some(e), Some(base)) = (metrics.rmse_x1, metrics.rmse_input_x1) {
        println!("rmse x1 = {e:.6} (input {base:.6})");
    }
    if let (Some(e), Some(base)) = (metrics.rmse_x2, metrics.rmse_input_x2) {
        println!("rmse x2 = {e:.6} (input {base:.6})");
    }

    if a.svg {
        let path = out.join("components.svg");
        let idx: Vec<f64> = (0..y.len()).map(|i| i as f64).collect();
        let mut series = vec![
            Series {
                label: "y",
                x: &idx,
                y,
            },
            Series {
                label: "x1",
                x: &idx,
                y: &x1,
            },
        ];
        if let Some(x2) = &x2 {
            series.push(Series {
                label: "x2",
                x: &idx,
                y: x2,
            });
        }
        write_atomic(
            &path,
            stacked_chart("extracted components", "sample", &series).as_bytes(),
        )?;
        let cost_svg = out.join("cost.svg");
        let chart = stacked_chart(
            "objective",
            "iteration",
            &[Series {
                label: "cost",
                x: &iters,
                y: &history,
            }],
        );
        write_atomic(&cost_svg, chart.as_bytes())?;
        outputs.push(path.display().to_string());
        outputs.push(cost_svg.display().to_string());
    }

    let manifest = out.join("manifest.json");
    outputs.push(manifest.display().to_string());
    write_json(
        &manifest,
        &Manifest {
            tool: "rtea",
            version: env!("CARGO_PKG_VERSION"),
            command: "extract",
            config: &cfg,
            resolved: &resolved,
            input: Input {
                path: a.input.display().to_string(),
                sha256: &data.sha256,
                column: &cfg.column,
                samples: y.len(),
            },
            metrics,
            outputs,
            timestamp_unix: unix_time(),
        },
    )
}

fn cost_csv(history: &[f64]) -> String {
    let mut text = String::from("iteration,cost\n");
    for (i, c) in history.iter().enumerate() {
        text.push_str(&format!("{i},{c}\n"));
    }
    text
}
