use serde::Serialize;

use super::io::{read_csv, unix_time, write_atomic, write_json, Table};
use super::svg::{stacked_chart, Series};
use super::AnalyzeArgs;
use crate::analysis::{
    envelope_spectrum, find_peaks, rms, EnvelopeOptions, EnvelopeSpectrum, PeakOptions, PeakReport,
};
use crate::error::{Error, Result};

#[derive(Serialize)]
struct ComponentReport {
    component: String,
    rms: f64,
    resolution_hz: f64,
    smoothing_bins: usize,
    #[serde(flatten)]
    report: PeakReport,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    input: String,
    input_sha256: &'a str,
    sample_rate_hz: f64,
    envelope: EnvelopeOptions,
    peaks: PeakOptions,
    outputs: Vec<String>,
    timestamp_unix: u64,
}

fn analyze_one(
    x: &[f64],
    fs: f64,
    env: &EnvelopeOptions,
    peaks: &PeakOptions,
) -> Result<(EnvelopeSpectrum, PeakReport)> {
    let spec = envelope_spectrum(x, fs, env)?;
    let report = find_peaks(&spec, peaks)?;
    Ok((spec, report))
}

pub fn run(a: &AnalyzeArgs) -> Result<()> {
    if !(a.fs > 0.0) || !a.fs.is_finite() {
        return Err(Error::param(format!("--fs must be > 0, got {}", a.fs)));
    }
    let data = read_csv(&a.input)?;
    let names: Vec<&str> = ["x1", "x2"]
        .into_iter()
        .filter(|n| data.column(n).is_some())
        .collect();
    if names.is_empty() {
        return Err(Error::Format {
            path: a.input.clone(),
            message: "expected an x1 and/or x2 column".into(),
        });
    }
    let env = EnvelopeOptions {
        nfft: a.nfft,
        smoothing_bins: a.smooth_bins,
    };
    let peaks = PeakOptions {
        band_hz: (a.band_lo, a.band_hi),
        n_harmonics: a.harmonics,
        tolerance_hz: a.tol_hz,
        floor_factor: a.floor,
    };
    let results: Vec<Result<(EnvelopeSpectrum, PeakReport)>> = std::thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|n| {
                let x = data.column(n).unwrap_or_default();
                s.spawn(|| analyze_one(x, a.fs, &env, &peaks))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis thread panicked"))
            .collect()
    });

    let mut outputs = Vec::new();
    let mut reports = Vec::new();
    let mut charts = Vec::new();
    for (name, res) in names.iter().zip(results) {
        let (spec, report) = res?;
        let path = a.out.join(format!("spectrum_{name}.csv"));
        Table {
            headers: vec!["freq_hz", "magnitude", "smoothed"],
            columns: vec![&spec.freqs_hz, &spec.magnitude, &spec.smoothed],
            index: false,
        }
        .write(&path)?;
        outputs.push(path.display().to_string());
        match report.fundamental {
            Some(f) => println!(
                "{name}: fundamental {:.2} Hz, {} harmonic(s), score {:.2}",
                f.freq_hz, report.harmonics_found, report.harmonic_score
            ),
            None => println!("{name}: no significant peak"),
        }
        let x = data.column(name).unwrap_or_default();
        reports.push(ComponentReport {
            component: (*name).to_owned(),
            rms: rms(x),
            resolution_hz: spec.resolution_hz,
            smoothing_bins: spec.smoothing_bins,
            report,
        });
        charts.push((*name, spec));
    }

    if a.svg {
        let path = a.out.join("spectra.svg");
        let hi = a.band_hi * a.harmonics.max(1) as f64;
        let views: Vec<(String, Vec<f64>, Vec<f64>)> = charts
            .iter()
            .map(|(n, s)| {
                let (f, m): (Vec<f64>, Vec<f64>) = s
                    .freqs_hz
                    .iter()
                    .zip(&s.smoothed)
                    .filter(|(f, _)| **f <= hi)
                    .map(|(f, m)| (*f, *m))
                    .unzip();
                (format!("envelope spectrum {n}"), f, m)
            })
            .collect();
        let series: Vec<Series> = views
            .iter()
            .map(|(l, f, m)| Series {
                label: l,
                x: f,
                y: m,
            })
            .collect();
        write_atomic(
            &path,
            stacked_chart("envelope spectra", "Hz", &series).as_bytes(),
        )?;
        outputs.push(path.display().to_string());
    }

    let peaks_path = a.out.join("peaks.json");
    write_json(&peaks_path, &reports)?;
    outputs.push(peaks_path.display().to_string());
    let manifest = a.out.join("analysis_manifest.json");
    outputs.push(manifest.display().to_string());
    write_json(
        &manifest,
        &Manifest {
            tool: "rtea",
            version: env!("CARGO_PKG_VERSION"),
            command: "analyze",
            input: a.input.display().to_string(),
            input_sha256: &data.sha256,
            sample_rate_hz: a.fs,
            envelope: env,
            peaks,
            outputs,
            timestamp_unix: unix_time(),
        },
    )
}
