use serde::Serialize;

use super::io::{unix_time, write_atomic, write_json, Table};
use super::svg::{stacked_chart, Series};
use super::GenerateArgs;
use crate::analysis::rms;
use crate::error::{Error, Result};
use crate::signalgen::{derive_seed, Modulation, Scenario, TransientParams, TransientTrain};

#[derive(Serialize)]
struct Truth<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: u64,
    sample_rate_hz: Option<f64>,
    scenario: &'a Scenario,
    onsets1: &'a [i64],
    onsets2: &'a [i64],
    rms_x1: f64,
    rms_x2: f64,
    snr_db: f64,
    outputs: Vec<String>,
    timestamp_unix: u64,
}

fn scenario(a: &GenerateArgs) -> Result<Scenario> {
    let (t1, t2, n) = match a.fs {
        Some(fs) => {
            if !(fs > 0.0) {
                return Err(Error::param(format!("--fs must be > 0, got {fs}")));
            }
            let rate = |f: Option<f64>, t: f64| f.map_or(t, |f| fs / f);
            let n = a.duration.map_or(a.n, |d| (d * fs).round() as usize);
            (rate(a.f1, a.t1), rate(a.f2, a.t2), n)
        }
        None => (a.t1, a.t2, a.n),
    };
    if n == 0 {
        return Err(Error::param("record length must be >= 1 sample"));
    }
    let train1 = TransientTrain {
        jitter_pct: a.jitter,
        ..TransientTrain::new(t1, derive_seed(a.seed, 1))
    };
    let train2 = (!a.single).then(|| TransientTrain {
        jitter_pct: a.jitter,
        transient: TransientParams::default().scaled(a.scale2),
        modulation: a
            .mod_hz
            .zip(a.fs)
            .map(|(freq_hz, sample_rate_hz)| Modulation {
                freq_hz,
                sample_rate_hz,
            }),
        ..TransientTrain::new(t2, derive_seed(a.seed, 2))
    });
    Ok(Scenario {
        n_samples: n,
        train1,
        train2,
        sigma: a.sigma,
        noise_seed: derive_seed(a.seed, 3),
    })
}

pub fn run(a: &GenerateArgs) -> Result<()> {
    let mut sc = scenario(a)?;
    if let Some(snr) = a.snr_db {
        let clean = Scenario {
            sigma: 0.0,
            ..sc.clone()
        }
        .generate()?;
        let sum: Vec<f64> = clean.x1.iter().zip(&clean.x2).map(|(p, q)| p + q).collect();
        sc.sigma = rms(&sum) / 10f64.powf(snr / 20.0);
    }
    let mix = sc.generate()?;
    let sum: Vec<f64> = mix.x1.iter().zip(&mix.x2).map(|(p, q)| p + q).collect();
    let snr_db = 20.0 * (rms(&sum) / sc.sigma).log10();

    let signal = a.out.join("signal.csv");
    let truth = a.out.join("truth.json");
    Table {
        headers: vec!["y", "x1_true", "x2_true", "w"],
        columns: vec![&mix.y, &mix.x1, &mix.x2, &mix.w],
        index: true,
    }
    .write(&signal)?;
    let mut outputs = vec![signal.display().to_string()];
    if a.svg {
        let path = a.out.join("signal.svg");
        let idx: Vec<f64> = (0..mix.y.len()).map(|i| i as f64).collect();
        let chart = stacked_chart(
            "synthetic record",
            "sample",
            &[
                Series {
                    label: "y",
                    x: &idx,
                    y: &mix.y,
                },
                Series {
                    label: "x1",
                    x: &idx,
                    y: &mix.x1,
                },
                Series {
                    label: "x2",
                    x: &idx,
                    y: &mix.x2,
                },
            ],
        );
        write_atomic(&path, chart.as_bytes())?;
        outputs.push(path.display().to_string());
    }
    outputs.push(truth.display().to_string());
    write_json(
        &truth,
        &Truth {
            tool: "rtea",
            version: env!("CARGO_PKG_VERSION"),
            command: "generate",
            seed: a.seed,
            sample_rate_hz: a.fs,
            scenario: &sc,
            onsets1: &mix.onsets1,
            onsets2: &mix.onsets2,
            rms_x1: rms(&mix.x1),
            rms_x2: rms(&mix.x2),
            snr_db,
            outputs,
            timestamp_unix: unix_time(),
        },
    )?;
    println!(
        "wrote {} samples to {} (sigma = {:.4}, SNR = {:.2} dB)",
        mix.y.len(),
        signal.display(),
        sc.sigma,
        snr_db
    );
    Ok(())
}
