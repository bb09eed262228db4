//! Parameter selection: weight arrays from fault periods, the beta look-up
//! table, the eta split of the regularization weights, and the MAD noise
//! estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::penalty::{PenaltyFamily, PenaltySpec, DEFAULT_EPS};
use crate::regularizer::WeightArray;
use crate::solver::{check_convexity, SolverConfig, DEFAULT_MAX_ITER, DEFAULT_TOL};

/// Consistency constant of the MAD estimator for Gaussian noise.
pub const MAD_SCALE: f64 = 0.6745;

/// Balance between sum sparsity and component sparsity.
pub const DEFAULT_ETA: f64 = 0.5;

/// Fraction of the convexity bound given to `a0`.
pub const DEFAULT_A0_FRACTION: f64 = 0.5;

/// Multipliers `beta` indexed by `[m - 1][n1 - 1]`. The first row doubles as
/// `beta0` indexed by the group size `k0`.
const BETA_TABLE: [[f64; 4]; 4] = [
    [3.700, 1.700, 1.150, 0.925],
    [1.700, 0.850, 0.625, 0.475],
    [1.150, 0.625, 0.450, 0.375],
    [0.925, 0.475, 0.375, 0.325],
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Period {
    Samples(f64),
    Frequency {
        fault_freq_hz: f64,
        sample_rate_hz: f64,
    },
}

impl Period {
    pub fn samples(&self) -> f64 {
        match *self {
            Period::Samples(t) => t,
            Period::Frequency {
                fault_freq_hz,
                sample_rate_hz,
            } => sample_rate_hz / fault_freq_hz,
        }
    }
}

/// Prior period of one fault component plus the weight-array shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodSpec {
    pub period: Period,
    pub n1: usize,
    pub m: usize,
}

impl PeriodSpec {
    pub fn from_samples(period_samples: f64, n1: usize, m: usize) -> Self {
        PeriodSpec {
            period: Period::Samples(period_samples),
            n1,
            m,
        }
    }

    pub fn from_frequency(fault_freq_hz: f64, sample_rate_hz: f64, n1: usize, m: usize) -> Self {
        PeriodSpec {
            period: Period::Frequency {
                fault_freq_hz,
                sample_rate_hz,
            },
            n1,
            m,
        }
    }

    /// Period rounded to whole samples.
    pub fn rounded_period(&self) -> Result<usize> {
        if let Period::Frequency {
            fault_freq_hz,
            sample_rate_hz,
        } = self.period
        {
            if !(fault_freq_hz > 0.0) || !(sample_rate_hz > 0.0) {
                return Err(Error::InvalidPeriod(format!(
                    "fault frequency ({fault_freq_hz} Hz) and sample rate ({sample_rate_hz} Hz) must be positive"
                )));
            }
        }
        let t = self.period.samples();
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidPeriod(format!(
                "period must be positive, got {t}"
            )));
        }
        Ok(t.round() as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseEstimate {
    pub sigma: f64,
}

pub fn build_weight_array(spec: &PeriodSpec) -> Result<WeightArray> {
    if spec.n1 == 0 || spec.m == 0 {
        return Err(Error::param("n1 and m must be >= 1"));
    }
    let t = spec.rounded_period()?;
    if t <= spec.n1 {
        return Err(Error::InvalidPeriod(format!(
            "rounded period {t} leaves no zero gap for n1 = {}",
            spec.n1
        )));
    }
    WeightArray::new(spec.n1, t - spec.n1, spec.m)
}

/// Tabulated regularization multiplier. No extrapolation outside `1..=4`.
pub fn beta_lookup(n1: usize, m: usize) -> Result<f64> {
    if !(1..=4).contains(&n1) || !(1..=4).contains(&m) {
        return Err(Error::Unsupported(format!(
            "beta table covers 1 <= n1 <= 4 and 1 <= m <= 4, got n1 = {n1}, m = {m}"
        )));
    }
    Ok(BETA_TABLE[m - 1][n1 - 1])
}

/// `lam0 = eta beta0 sigma`, `lam_i = (1 - eta) beta_i sigma / 2`.
pub fn choose_lambdas(
    eta: f64,
    beta0: f64,
    beta1: f64,
    beta2: f64,
    sigma: f64,
) -> Result<(f64, f64, f64)> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::param(format!("eta must lie in (0, 1), got {eta}")));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::param(format!(
            "noise level must be > 0, got {sigma}"
        )));
    }
    Ok((
        eta * beta0 * sigma,
        0.5 * (1.0 - eta) * beta1 * sigma,
        0.5 * (1.0 - eta) * beta2 * sigma,
    ))
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// `sigma = median(|y - median(y)|) / 0.6745`.
pub fn estimate_sigma(y: &[f64]) -> Result<NoiseEstimate> {
    if y.len() < 2 {
        return Err(Error::input(format!(
            "noise estimation needs at least 2 samples, got {}",
            y.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("non-finite sample in noise estimation"));
    }
    let mut work = y.to_vec();
    let med = median(&mut work);
    for (w, &v) in work.iter_mut().zip(y) {
        *w = (v - med).abs();
    }
    Ok(NoiseEstimate {
        sigma: median(&mut work) / MAD_SCALE,
    })
}

/// Knobs for [`default_config`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tuning {
    pub eta: f64,
    /// `a0` as a fraction of `1/(k0 lam0)`, in `[0, 1)`.
    pub a0_fraction: f64,
    /// Family of the coupling penalty; component penalties stay abs.
    pub penalty: PenaltyFamily,
    pub eps: f64,
    /// Overrides `min(n1)`.
    pub k0: Option<usize>,
    /// Overrides the MAD estimate.
    pub sigma: Option<f64>,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for Tuning {
    fn default() -> Self {
        Tuning {
            eta: DEFAULT_ETA,
            a0_fraction: DEFAULT_A0_FRACTION,
            penalty: PenaltyFamily::Atan,
            eps: DEFAULT_EPS,
            k0: None,
            sigma: None,
            max_iter: DEFAULT_MAX_ITER,
            tol: DEFAULT_TOL,
        }
    }
}

/// Parameters chosen for a given record, with the intermediate values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub config: SolverConfig,
    pub sigma: f64,
    pub betas: [f64; 3],
    pub convexity_bound: f64,
}

/// Assembles a convex configuration from prior periods: `k0 = min(n1)`,
/// betas from the table, sigma from MAD, lambdas from the eta split, and
/// `a0 = a0_fraction / (k0 lam0)`.
pub fn default_config(
    y: &[f64],
    spec1: &PeriodSpec,
    spec2: &PeriodSpec,
    tuning: &Tuning,
) -> Result<Selection> {
    if !(0.0..1.0).contains(&tuning.a0_fraction) {
        return Err(Error::param(format!(
            "a0_fraction must lie in [0, 1), got {}",
            tuning.a0_fraction
        )));
    }
    let b1 = build_weight_array(spec1)?;
    let b2 = build_weight_array(spec2)?;
    let k0 = tuning.k0.unwrap_or(spec1.n1.min(spec2.n1));
    let betas = [
        beta_lookup(k0, 1)?,
        beta_lookup(spec1.n1, spec1.m)?,
        beta_lookup(spec2.n1, spec2.m)?,
    ];
    let sigma = match tuning.sigma {
        Some(s) => s,
        None => estimate_sigma(y)?.sigma,
    };
    let (lam0, lam1, lam2) = choose_lambdas(tuning.eta, betas[0], betas[1], betas[2], sigma)?;
    let bound = check_convexity(k0, lam0, 0.0)?.bound;
    let pen0 = if tuning.penalty == PenaltyFamily::Abs || tuning.a0_fraction == 0.0 {
        PenaltySpec::new(PenaltyFamily::Abs, 0.0, tuning.eps)?
    } else {
        PenaltySpec::new(tuning.penalty, tuning.a0_fraction * bound, tuning.eps)?
    };
    let abs = PenaltySpec::new(PenaltyFamily::Abs, 0.0, tuning.eps)?;
    let config = SolverConfig::builder(b1, b2)
        .lambdas(lam0, lam1, lam2)
        .k0(k0)
        .penalties(pen0, abs, abs)
        .max_iter(tuning.max_iter)
        .tol(tuning.tol)
        .enforce_convexity(true)
        .build()?;
    Ok(Selection {
        config,
        sigma,
        betas,
        convexity_bound: bound,
    })
}
