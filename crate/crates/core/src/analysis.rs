//! Evaluation and diagnosis helpers: RMSE, Hilbert envelope spectrum and
//! characteristic-frequency peak picking.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn rmse(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::input(format!(
            "rmse: length mismatch ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::input("rmse of empty signals"));
    }
    let ss = a
        .iter()
        .zip(b)
        .fold(0.0, |acc, (x, y)| acc + (x - y) * (x - y));
    Ok((ss / a.len() as f64).sqrt())
}

pub fn rms(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// Discrete analytic signal via one-sided spectrum doubling. The real part
/// reproduces `x`.
pub fn analytic_signal(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    // Keep DC (and Nyquist for even n), double positive bins, drop negatives.
    let half = n / 2;
    let last_positive = if n.is_multiple_of(2) { half - 1 } else { half };
    for (k, c) in buf.iter_mut().enumerate().skip(1) {
        if k <= last_positive {
            *c *= 2.0;
        } else if !(n.is_multiple_of(2) && k == half) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Amplitude envelope `|x + i H x|`.
pub fn envelope(x: &[f64]) -> Vec<f64> {
    analytic_signal(x).iter().map(|c| c.norm()).collect()
}

/// Centered moving average of odd width; the window shrinks at the edges.
pub fn moving_average(x: &[f64], width: usize) -> Vec<f64> {
    let half = width.max(1) / 2;
    let n = x.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            x[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnvelopeOptions {
    /// FFT length; defaults to `x.len()` rounded up to a power of two, times 4.
    pub nfft: Option<usize>,
    /// Smoothing width in bins; defaults to `max(3, round(2 Hz / resolution))`.
    pub smoothing_bins: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSpectrum {
    pub freqs_hz: Vec<f64>,
    pub magnitude: Vec<f64>,
    pub smoothed: Vec<f64>,
    pub resolution_hz: f64,
    /// Mean of the envelope removed before the transform.
    pub envelope_mean: f64,
    pub smoothing_bins: usize,
}

pub fn default_nfft(len: usize) -> usize {
    len.max(1).next_power_of_two() * 4
}

/// One-sided magnitude spectrum (scaled by `1/len`) of the mean-removed
/// Hilbert envelope, zero-padded to `nfft`, plus its smoothed profile.
pub fn envelope_spectrum(x: &[f64], fs: f64, opts: &EnvelopeOptions) -> Result<EnvelopeSpectrum> {
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::param(format!("sample rate must be > 0, got {fs}")));
    }
    if x.is_empty() {
        return Err(Error::input("envelope spectrum of an empty signal"));
    }
    let nfft = opts.nfft.unwrap_or_else(|| default_nfft(x.len()));
    if nfft < x.len() {
        return Err(Error::param(format!(
            "nfft = {nfft} is shorter than the signal ({} samples)",
            x.len()
        )));
    }
    let env = envelope(x);
    let mean = env.iter().sum::<f64>() / env.len() as f64;
    let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
    for (b, e) in buf.iter_mut().zip(&env) {
        *b = Complex64::new(e - mean, 0.0);
    }
    FftPlanner::<f64>::new()
        .plan_fft_forward(nfft)
        .process(&mut buf);
    let bins = nfft / 2 + 1;
    let resolution = fs / nfft as f64;
    let scale = 1.0 / x.len() as f64;
    let magnitude: Vec<f64> = buf[..bins].iter().map(|c| c.norm() * scale).collect();
    let freqs_hz = (0..bins).map(|k| k as f64 * resolution).collect();
    let mut width = opts
        .smoothing_bins
        .unwrap_or_else(|| ((2.0 / resolution).round() as usize).max(3));
    if width.is_multiple_of(2) {
        width += 1;
    }
    let smoothed = moving_average(&magnitude, width);
    Ok(EnvelopeSpectrum {
        freqs_hz,
        magnitude,
        smoothed,
        resolution_hz: resolution,
        envelope_mean: mean,
        smoothing_bins: width,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub freq_hz: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakOptions {
    /// Search band for the fundamental, Hz.
    pub band_hz: (f64, f64),
    /// Harmonic orders `1..=n_harmonics` are scored.
    pub n_harmonics: usize,
    /// Match tolerance around `k f1`, Hz.
    pub tolerance_hz: f64,
    /// A peak must exceed this multiple of the median smoothed level.
    pub floor_factor: f64,
}

impl Default for PeakOptions {
    fn default() -> Self {
        PeakOptions {
            band_hz: (5.0, 200.0),
            n_harmonics: 4,
            tolerance_hz: 1.5,
            floor_factor: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    /// Significant local maxima of the smoothed profile in the band,
    /// strongest first.
    pub peaks: Vec<Peak>,
    pub fundamental: Option<Peak>,
    /// Best match near `k f1` for `k = 2..=n_harmonics`.
    pub harmonics: Vec<Option<Peak>>,
    pub harmonics_found: usize,
    /// Fraction of `k = 1..=n_harmonics` with a matching peak.
    pub harmonic_score: f64,
    pub threshold: f64,
}

fn median_of(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Local maxima of the smoothed profile, their strength and the fundamental
/// with its harmonic consistency.
pub fn find_peaks(spec: &EnvelopeSpectrum, opts: &PeakOptions) -> Result<PeakReport> {
    let (lo, hi) = opts.band_hz;
    let top = spec.freqs_hz.last().copied().unwrap_or(0.0);
    if !(lo < hi) || hi <= 0.0 || lo > top {
        return Err(Error::param(format!(
            "band [{lo}, {hi}] Hz is empty or outside the spectrum (0..{top} Hz)"
        )));
    }
    let s = &spec.smoothed;
    // Absolute floor keeps round-off ripple of an empty envelope out.
    let threshold = (opts.floor_factor * median_of(s)).max(1e-9 * spec.envelope_mean.abs());
    let maxima: Vec<Peak> = (1..s.len().saturating_sub(1))
        .filter(|&i| s[i] > s[i - 1] && s[i] >= s[i + 1] && s[i] > threshold)
        .map(|i| Peak {
            freq_hz: spec.freqs_hz[i],
            magnitude: s[i],
        })
        .collect();

    let mut peaks: Vec<Peak> = maxima
        .iter()
        .copied()
        .filter(|p| p.freq_hz >= lo && p.freq_hz <= hi)
        .collect();
    peaks.sort_by(|a, b| b.magnitude.total_cmp(&a.magnitude));
    let fundamental = peaks.first().copied();

    let mut harmonics = Vec::new();
    let mut matched = 0usize;
    if let Some(f1) = fundamental {
        matched = 1;
        for k in 2..=opts.n_harmonics {
            let target = k as f64 * f1.freq_hz;
            let best = maxima
                .iter()
                .filter(|p| (p.freq_hz - target).abs() <= opts.tolerance_hz)
                .max_by(|a, b| a.magnitude.total_cmp(&b.magnitude))
                .copied();
            if best.is_some() {
                matched += 1;
            }
            harmonics.push(best);
        }
    }
    let harmonics_found = matched.saturating_sub(1);
    Ok(PeakReport {
        peaks,
        fundamental,
        harmonics,
        harmonics_found,
        harmonic_score: if opts.n_harmonics == 0 {
            0.0
        } else {
            matched as f64 / opts.n_harmonics as f64
        },
        threshold,
    })
}
