//! Seeded synthetic test signals with ground truth.
//!
//! A transient is a short sum of random sinusoids
//! `g(n) = sum_j A_j sin(w_j n + theta_j)`; a train places independent
//! transients at (optionally jittered) multiples of a period. Two trains plus
//! white Gaussian noise give the two-component observation used throughout
//! the tests and the `generate` subcommand.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported period jitter, in percent.
pub const MAX_JITTER_PCT: f64 = 5.0;

/// SplitMix64 finalizer; derives independent sub-seeds from one master seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sinusoid {
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
}

/// Ranges for the random transient shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransientParams {
    pub len: usize,
    /// `J` is drawn uniformly from `1..=max_components`.
    pub max_components: usize,
    pub amplitude: (f64, f64),
    /// Radians per sample.
    pub omega: (f64, f64),
    pub phase: (f64, f64),
}

impl Default for TransientParams {
    fn default() -> Self {
        TransientParams {
            len: 10,
            max_components: 10,
            amplitude: (0.5, 2.0),
            omega: (0.2 * PI, 0.9 * PI),
            phase: (0.0, 2.0 * PI),
        }
    }
}

impl TransientParams {
    pub fn validate(&self) -> Result<()> {
        if self.len == 0 {
            return Err(Error::param("transient length must be >= 1"));
        }
        if self.max_components == 0 {
            return Err(Error::param("transients need at least one sinusoid"));
        }
        for (name, (lo, hi)) in [
            ("amplitude", self.amplitude),
            ("omega", self.omega),
            ("phase", self.phase),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::param(format!(
                    "{name} range [{lo}, {hi}] is invalid"
                )));
            }
        }
        Ok(())
    }

    /// Scales the amplitude range.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.amplitude = (self.amplitude.0 * factor, self.amplitude.1 * factor);
        self
    }
}

fn draw(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

/// Draws the sinusoid set of one transient.
pub fn draw_components(params: &TransientParams, rng: &mut impl Rng) -> Vec<Sinusoid> {
    let count = rng.random_range(1..=params.max_components);
    (0..count)
        .map(|_| Sinusoid {
            amplitude: draw(rng, params.amplitude),
            omega: draw(rng, params.omega),
            phase: draw(rng, params.phase),
        })
        .collect()
}

/// Evaluates `sum_j A_j sin(w_j n + theta_j)` for `n` in `0..len`.
pub fn transient_from(components: &[Sinusoid], len: usize) -> Vec<f64> {
    (0..len)
        .map(|n| {
            components.iter().fold(0.0, |acc, s| {
                acc + s.amplitude * (s.omega * n as f64 + s.phase).sin()
            })
        })
        .collect()
}

pub fn gen_transient(params: &TransientParams, seed: u64) -> Result<Vec<f64>> {
    params.validate()?;
    let mut rng = rng_from_seed(seed);
    Ok(transient_from(
        &draw_components(params, &mut rng),
        params.len,
    ))
}

/// Amplitude modulation `1 + cos(2 pi f t)` evaluated at each onset time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modulation {
    pub freq_hz: f64,
    pub sample_rate_hz: f64,
}

impl Modulation {
    pub fn gain(&self, sample: f64) -> f64 {
        1.0 + (2.0 * PI * self.freq_hz * sample / self.sample_rate_hz).cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransientTrain {
    pub period_samples: f64,
    pub transient: TransientParams,
    /// Per-onset uniform offset in `[-jitter_pct, +jitter_pct]` percent of the period.
    pub jitter_pct: f64,
    pub modulation: Option<Modulation>,
    pub seed: u64,
}

impl TransientTrain {
    pub fn new(period_samples: f64, seed: u64) -> Self {
        TransientTrain {
            period_samples,
            transient: TransientParams::default(),
            jitter_pct: 0.0,
            modulation: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.transient.validate()?;
        if !(self.period_samples > self.transient.len as f64) {
            return Err(Error::param(format!(
                "period {} must exceed the transient length {} so transients do not overlap",
                self.period_samples, self.transient.len
            )));
        }
        if !(0.0..=MAX_JITTER_PCT).contains(&self.jitter_pct) {
            return Err(Error::param(format!(
                "jitter must lie in [0, {MAX_JITTER_PCT}] percent, got {}",
                self.jitter_pct
            )));
        }
        if let Some(m) = &self.modulation {
            if !(m.sample_rate_hz > 0.0) || !m.freq_hz.is_finite() {
                return Err(Error::param("modulation needs a positive sample rate"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Train {
    pub clean: Vec<f64>,
    /// Start sample of every placed transient (may be negative when jittered).
    pub onsets: Vec<i64>,
    /// Modulation gain applied to each transient.
    pub gains: Vec<f64>,
    /// Sorted sample indices covered by transients.
    pub support: Vec<usize>,
}

pub fn gen_train(train: &TransientTrain, n_samples: usize) -> Result<Train> {
    train.validate()?;
    let mut rng = rng_from_seed(train.seed);
    let period = train.period_samples;
    let spread = train.jitter_pct / 100.0 * period;
    let len = train.transient.len;
    let mut clean = vec![0.0; n_samples];
    let mut covered = vec![false; n_samples];
    let mut onsets = Vec::new();
    let mut gains = Vec::new();

    let mut k = 0u64;
    loop {
        let nominal = k as f64 * period;
        if nominal >= n_samples as f64 {
            break;
        }
        k += 1;
        let offset = if spread > 0.0 {
            rng.random_range(-spread..=spread)
        } else {
            0.0
        };
        let onset = (nominal + offset).round() as i64;
        let shape = transient_from(&draw_components(&train.transient, &mut rng), len);
        if onset >= n_samples as i64 {
            continue;
        }
        let gain = train.modulation.map_or(1.0, |m| m.gain(onset as f64));
        for (i, &g) in shape.iter().enumerate() {
            let idx = onset + i as i64;
            if idx >= 0 && (idx as usize) < n_samples {
                clean[idx as usize] += gain * g;
                covered[idx as usize] = true;
            }
        }
        onsets.push(onset);
        gains.push(gain);
    }

    let support = covered
        .iter()
        .enumerate()
        .filter_map(|(i, &c)| c.then_some(i))
        .collect();
    Ok(Train {
        clean,
        onsets,
        gains,
        support,
    })
}

/// White Gaussian noise of standard deviation `sigma`.
pub fn gaussian_noise(n: usize, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::param(format!(
            "noise sigma must be >= 0, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::param(e.to_string()))?;
    let mut rng = rng_from_seed(seed);
    Ok((0..n).map(|_| normal.sample(&mut rng)).collect())
}

pub fn add_awgn(x: &[f64], sigma: f64, seed: u64) -> Result<Vec<f64>> {
    let w = gaussian_noise(x.len(), sigma, seed)?;
    Ok(x.iter().zip(&w).map(|(a, b)| a + b).collect())
}

/// Two trains plus noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub n_samples: usize,
    pub train1: TransientTrain,
    /// `None` yields an identically zero second component.
    pub train2: Option<TransientTrain>,
    pub sigma: f64,
    pub noise_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mixture {
    pub y: Vec<f64>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub w: Vec<f64>,
    pub onsets1: Vec<i64>,
    pub onsets2: Vec<i64>,
}

impl Scenario {
    pub fn generate(&self) -> Result<Mixture> {
        let t1 = gen_train(&self.train1, self.n_samples)?;
        let t2 = match &self.train2 {
            Some(t) => Some(gen_train(t, self.n_samples)?),
            None => None,
        };
        let w = gaussian_noise(self.n_samples, self.sigma, self.noise_seed)?;
        let x1 = t1.clean;
        let (x2, onsets2) = match t2 {
            Some(t) => (t.clean, t.onsets),
            None => (vec![0.0; self.n_samples], Vec::new()),
        };
        let y = x1
            .iter()
            .zip(&x2)
            .zip(&w)
            .map(|((a, b), c)| a + b + c)
            .collect();
        Ok(Mixture {
            y,
            x1,
            x2,
            w,
            onsets1: t1.onsets,
            onsets2,
        })
    }
}

/// The synthetic two-period example: periods 32 and 53 samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Example1 {
    pub n_samples: usize,
    pub t1: f64,
    pub t2: f64,
    pub sigma: f64,
    pub seed: u64,
    pub transient: TransientParams,
}

impl Default for Example1 {
    fn default() -> Self {
        Example1 {
            n_samples: 1024,
            t1: 32.0,
            t2: 53.0,
            sigma: 0.5,
            seed: 0,
            transient: TransientParams::default(),
        }
    }
}

impl Example1 {
    pub fn with_seed(seed: u64) -> Self {
        Example1 {
            seed,
            ..Example1::default()
        }
    }

    pub fn scenario(&self) -> Scenario {
        let train = |period, stream| TransientTrain {
            transient: self.transient,
            ..TransientTrain::new(period, derive_seed(self.seed, stream))
        };
        Scenario {
            n_samples: self.n_samples,
            train1: train(self.t1, 1),
            train2: Some(train(self.t2, 2)),
            sigma: self.sigma,
            noise_seed: derive_seed(self.seed, 3),
        }
    }
}

pub fn gen_example1(cfg: &Example1) -> Result<Mixture> {
    cfg.scenario().generate()
}

/// Bearing-like record: an outer-race train (fixed amplitude) and an
/// optional inner-race train modulated at the shaft rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BearingCase {
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    pub outer_hz: f64,
    pub inner_hz: Option<f64>,
    pub shaft_hz: Option<f64>,
    pub inner_scale: f64,
    pub jitter_pct: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl BearingCase {
    /// Two-fault record at 12.8 kHz: outer race 43.3 Hz, inner race 58.7 Hz
    /// modulated by a 6 Hz shaft.
    pub fn compound(seed: u64) -> Self {
        BearingCase {
            sample_rate_hz: 12800.0,
            duration_s: 0.5,
            outer_hz: 43.3,
            inner_hz: Some(58.7),
            shaft_hz: Some(6.0),
            inner_scale: 0.8,
            jitter_pct: 0.5,
            sigma: 0.5,
            seed,
        }
    }

    /// Outer-race-only record (57.8 Hz at 481 r/min).
    pub fn outer_only(seed: u64) -> Self {
        BearingCase {
            outer_hz: 57.8,
            inner_hz: None,
            shaft_hz: None,
            ..BearingCase::compound(seed)
        }
    }

    pub fn n_samples(&self) -> usize {
        (self.sample_rate_hz * self.duration_s).round() as usize
    }

    pub fn scenario(&self) -> Scenario {
        let fs = self.sample_rate_hz;
        let train1 = TransientTrain {
            jitter_pct: self.jitter_pct,
            ..TransientTrain::new(fs / self.outer_hz, derive_seed(self.seed, 1))
        };
        let train2 = self.inner_hz.map(|f| TransientTrain {
            transient: TransientParams::default().scaled(self.inner_scale),
            jitter_pct: self.jitter_pct,
            modulation: self.shaft_hz.map(|freq_hz| Modulation {
                freq_hz,
                sample_rate_hz: fs,
            }),
            ..TransientTrain::new(fs / f, derive_seed(self.seed, 2))
        });
        Scenario {
            n_samples: self.n_samples(),
            train1,
            train2,
            sigma: self.sigma,
            noise_seed: derive_seed(self.seed, 3),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_sinusoid_table() {
        let g = transient_from(
            &[Sinusoid {
                amplitude: 1.0,
                omega: PI / 2.0,
                phase: 0.0,
            }],
            10,
        );
        let expected = [0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0];
        for (a, b) in g.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn transient_bounded_by_amplitudes() {
        let params = TransientParams::default();
        for seed in 0..50 {
            let mut rng = rng_from_seed(seed);
            let comps = draw_components(&params, &mut rng);
            assert!((1..=10).contains(&comps.len()));
            let bound: f64 = comps.iter().map(|c| c.amplitude).sum();
            let g = transient_from(&comps, params.len);
            assert!(g.iter().all(|v| v.abs() <= bound + 1e-12));
        }
        assert_eq!(
            gen_transient(&params, 9).unwrap(),
            gen_transient(&params, 9).unwrap()
        );
    }

    #[test]
    fn ten_component_transient_bound() {
        let params = TransientParams {
            max_components: 10,
            ..TransientParams::default()
        };
        let mut rng = rng_from_seed(4);
        let comps: Vec<Sinusoid> = (0..10)
            .map(|_| Sinusoid {
                amplitude: draw(&mut rng, params.amplitude),
                omega: draw(&mut rng, params.omega),
                phase: draw(&mut rng, params.phase),
            })
            .collect();
        let g = transient_from(&comps, 10);
        let bound: f64 = comps.iter().map(|c| c.amplitude).sum();
        assert!(g.iter().all(|v| v.abs() <= bound));
    }

    #[test]
    fn onsets_on_grid() {
        let t = gen_train(&TransientTrain::new(32.0, 1), 320).unwrap();
        assert_eq!(t.onsets, (0..10).map(|k| 32 * k).collect::<Vec<i64>>());
        assert_eq!(t.support.len(), 100);
        for (i, v) in t.clean.iter().enumerate() {
            if t.support.binary_search(&i).is_err() {
                assert_eq!(*v, 0.0);
            }
        }
    }

    #[test]
    fn jittered_onsets_stay_close() {
        let train = TransientTrain {
            jitter_pct: 2.0,
            ..TransientTrain::new(296.0, 11)
        };
        let t = gen_train(&train, 12800).unwrap();
        for (k, &o) in t.onsets.iter().enumerate() {
            assert!((o - 296 * k as i64).abs() <= 6, "onset {k} at {o}");
        }
    }

    #[test]
    fn modulation_gains_follow_envelope() {
        let m = Modulation {
            freq_hz: 6.0,
            sample_rate_hz: 12800.0,
        };
        let train = TransientTrain {
            modulation: Some(m),
            ..TransientTrain::new(218.0, 5)
        };
        let t = gen_train(&train, 6400).unwrap();
        let plain = gen_train(
            &TransientTrain {
                modulation: None,
                ..train
            },
            6400,
        )
        .unwrap();
        for (&o, &g) in t.onsets.iter().zip(&t.gains) {
            let expected = 1.0 + (2.0 * PI * 6.0 * o as f64 / 12800.0).cos();
            assert!((g - expected).abs() < 1e-12);
            let i = o as usize;
            let peak = |x: &[f64]| x[i..i + 10].iter().fold(0.0f64, |a, v| a.max(v.abs()));
            assert!((peak(&t.clean) - expected * peak(&plain.clean)).abs() < 1e-9);
        }
    }

    #[test]
    fn train_validation() {
        assert!(gen_train(&TransientTrain::new(10.0, 0), 100).is_err());
        let jitter = TransientTrain {
            jitter_pct: 6.0,
            ..TransientTrain::new(40.0, 0)
        };
        assert!(gen_train(&jitter, 100).is_err());
    }

    #[test]
    fn noise_properties() {
        let x: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(add_awgn(&x, 0.0, 3).unwrap(), x);
        assert_eq!(add_awgn(&x, 0.7, 3).unwrap(), add_awgn(&x, 0.7, 3).unwrap());
        let w = gaussian_noise(100_000, 1.5, 8).unwrap();
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        let var = w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (w.len() - 1) as f64;
        assert!((var / 2.25 - 1.0).abs() < 0.02);
        assert!(gaussian_noise(4, -1.0, 0).is_err());
    }

    #[test]
    fn example1_construction() {
        let ex = gen_example1(&Example1::with_seed(7)).unwrap();
        assert_eq!(ex.y.len(), 1024);
        for i in 0..1024 {
            assert_eq!(ex.y[i], ex.x1[i] + ex.x2[i] + ex.w[i]);
        }
        assert!(ex.onsets2.len() >= 19);
        assert_eq!(ex.onsets1.len(), 32);
        assert_eq!(gen_example1(&Example1::with_seed(7)).unwrap(), ex);
    }

    #[test]
    fn bearing_case_lengths() {
        let c = BearingCase::compound(1);
        assert_eq!(c.n_samples(), 6400);
        let mix = c.scenario().generate().unwrap();
        assert_eq!(mix.onsets1.len(), 22);
        let single = BearingCase::outer_only(1).scenario().generate().unwrap();
        assert!(single.x2.iter().all(|&v| v == 0.0));
    }
}
