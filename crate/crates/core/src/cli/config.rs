//! Extraction settings as read from flags, a TOML/JSON file or a previous
//! run manifest.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paramselect::{
    beta_lookup, build_weight_array, default_config, estimate_sigma, PeriodSpec, Tuning,
    DEFAULT_A0_FRACTION, DEFAULT_ETA,
};
use crate::penalty::{PenaltyFamily, PenaltySpec, DEFAULT_EPS};
use crate::solver::{PogsConfig, SolverConfig, DEFAULT_MAX_ITER, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Two components with the coupling regularizer.
    Rtea,
    /// Two components without coupling (`lam0 = 0`), convex penalties.
    Mca,
    /// One periodic component.
    Pogs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractConfig {
    pub mode: Mode,
    pub eta: f64,
    pub a0_fraction: f64,
    pub penalty: PenaltyFamily,
    pub n1: usize,
    pub m: usize,
    pub k0: Option<usize>,
    /// Periods in samples, one per component.
    pub period_samples: Vec<f64>,
    /// Fault rates in Hz, used with `sample_rate_hz` when no periods are set.
    pub fault_freq_hz: Vec<f64>,
    pub sample_rate_hz: Option<f64>,
    /// Noise level; estimated by MAD when absent.
    pub sigma: Option<f64>,
    pub eps: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub column: String,
    /// Carried through to the manifest for provenance only.
    pub seed: Option<u64>,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig {
            mode: Mode::Rtea,
            eta: DEFAULT_ETA,
            a0_fraction: DEFAULT_A0_FRACTION,
            penalty: PenaltyFamily::Atan,
            n1: 3,
            m: 4,
            k0: None,
            period_samples: Vec::new(),
            fault_freq_hz: Vec::new(),
            sample_rate_hz: None,
            sigma: None,
            eps: DEFAULT_EPS,
            max_iter: DEFAULT_MAX_ITER,
            tol: DEFAULT_TOL,
            column: "y".into(),
            seed: None,
        }
    }
}

/// Solver settings resolved against a signal.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum Resolved {
    Pair {
        config: SolverConfig,
        specs: [PeriodSpec; 2],
        sigma: f64,
        convexity_bound: Option<f64>,
    },
    Single {
        config: PogsConfig,
        spec: PeriodSpec,
        sigma: f64,
    },
}

impl ExtractConfig {
    /// Reads TOML or JSON. A JSON run manifest is accepted through its
    /// `config` object.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let bad = |message: String| Error::Format {
            path: path.to_path_buf(),
            message,
        };
        let is_json =
            path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        if is_json {
            let mut v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
            if let Some(inner) = v.get_mut("config") {
                v = inner.take();
            }
            serde_json::from_value(v).map_err(|e| bad(e.to_string()))
        } else {
            toml::from_str(&text).map_err(|e| bad(e.to_string()))
        }
    }

    pub fn specs(&self) -> Result<Vec<PeriodSpec>> {
        let need = if self.mode == Mode::Pogs { 1 } else { 2 };
        let specs: Vec<PeriodSpec> = if !self.period_samples.is_empty() {
            self.period_samples
                .iter()
                .map(|&t| PeriodSpec::from_samples(t, self.n1, self.m))
                .collect()
        } else if !self.fault_freq_hz.is_empty() {
            let fs = self.sample_rate_hz.ok_or_else(|| {
                Error::param("fault frequencies need the sample rate (--fs / sample_rate_hz)")
            })?;
            self.fault_freq_hz
                .iter()
                .map(|&f| PeriodSpec::from_frequency(f, fs, self.n1, self.m))
                .collect()
        } else {
            return Err(Error::param(
                "fault periods are required prior information: pass --t1/--t2 (samples) \
                 or --f1/--f2 with --fs (Hz)",
            ));
        };
        if specs.len() != need {
            return Err(Error::param(format!(
                "mode {:?} takes {need} period(s), got {}",
                self.mode,
                specs.len()
            )));
        }
        Ok(specs)
    }

    pub fn resolve(&self, y: &[f64]) -> Result<Resolved> {
        let specs = self.specs()?;
        let sigma = match self.sigma {
            Some(s) => s,
            None => estimate_sigma(y)?.sigma,
        };
        match self.mode {
            Mode::Rtea => {
                let tuning = Tuning {
                    eta: self.eta,
                    a0_fraction: self.a0_fraction,
                    penalty: self.penalty,
                    eps: self.eps,
                    k0: self.k0,
                    sigma: Some(sigma),
                    max_iter: self.max_iter,
                    tol: self.tol,
                };
                let sel = default_config(y, &specs[0], &specs[1], &tuning)?;
                Ok(Resolved::Pair {
                    config: sel.config,
                    specs: [specs[0], specs[1]],
                    sigma,
                    convexity_bound: Some(sel.convexity_bound),
                })
            }
            Mode::Mca => {
                let config = mca_config(&specs[0], &specs[1], sigma, self)?;
                Ok(Resolved::Pair {
                    config,
                    specs: [specs[0], specs[1]],
                    sigma,
                    convexity_bound: None,
                })
            }
            Mode::Pogs => {
                let spec = specs[0];
                let b = build_weight_array(&spec)?;
                if !(sigma > 0.0) {
                    return Err(Error::param(format!(
                        "noise level must be > 0, got {sigma}"
                    )));
                }
                let lam = beta_lookup(spec.n1, spec.m)? * sigma;
                if !(0.0..1.0).contains(&self.a0_fraction) {
                    return Err(Error::param(format!(
                        "a0_fraction must lie in [0, 1), got {}",
                        self.a0_fraction
                    )));
                }
                let pen = if self.penalty == PenaltyFamily::Abs || self.a0_fraction == 0.0 {
                    PenaltySpec::abs().with_eps(self.eps)?
                } else {
                    let a = self.a0_fraction / (b.weight_sum() as f64 * lam);
                    PenaltySpec::new(self.penalty, a, self.eps)?
                };
                let mut config = PogsConfig::new(b, lam, pen);
                config.max_iter = self.max_iter;
                config.tol = self.tol;
                Ok(Resolved::Single {
                    config,
                    spec,
                    sigma,
                })
            }
        }
    }
}

/// Uncoupled convex split: `lam0 = 0`, `lam_i = beta_i sigma / 2`, which is
/// the `eta -> 0` end of the eta rule.
pub fn mca_config(
    spec1: &PeriodSpec,
    spec2: &PeriodSpec,
    sigma: f64,
    cfg: &ExtractConfig,
) -> Result<SolverConfig> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::param(format!(
            "noise level must be > 0, got {sigma}"
        )));
    }
    let abs = PenaltySpec::abs().with_eps(cfg.eps)?;
    SolverConfig::builder(build_weight_array(spec1)?, build_weight_array(spec2)?)
        .lambdas(
            0.0,
            0.5 * beta_lookup(spec1.n1, spec1.m)? * sigma,
            0.5 * beta_lookup(spec2.n1, spec2.m)? * sigma,
        )
        .k0(cfg.k0.unwrap_or(spec1.n1.min(spec2.n1)))
        .penalties(abs, abs, abs)
        .max_iter(cfg.max_iter)
        .tol(cfg.tol)
        .build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_periods_is_an_argument_error() {
        let err = ExtractConfig::default().specs().unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
        assert!(err.to_string().contains("prior information"));
    }

    #[test]
    fn frequencies_need_sample_rate() {
        let cfg = ExtractConfig {
            fault_freq_hz: vec![43.3, 58.7],
            ..ExtractConfig::default()
        };
        assert!(cfg.specs().is_err());
        let cfg = ExtractConfig {
            sample_rate_hz: Some(12800.0),
            ..cfg
        };
        assert_eq!(cfg.specs().unwrap()[0].rounded_period().unwrap(), 296);
    }

    #[test]
    fn toml_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(
            &path,
            "eta = 0.4\npenalty = \"log\"\nperiod_samples = [32, 53]\nmax_iter = 50\n",
        )
        .unwrap();
        let cfg = ExtractConfig::load(&path).unwrap();
        assert_eq!(cfg.eta, 0.4);
        assert_eq!(cfg.penalty, PenaltyFamily::Log);
        assert_eq!(cfg.period_samples, vec![32.0, 53.0]);
        std::fs::write(&path, "etaa = 0.4\n").unwrap();
        assert!(matches!(
            ExtractConfig::load(&path),
            Err(Error::Format { .. })
        ));
    }

    #[test]
    fn mca_has_no_coupling() {
        let cfg = ExtractConfig {
            mode: Mode::Mca,
            period_samples: vec![32.0, 53.0],
            sigma: Some(2.0),
            ..ExtractConfig::default()
        };
        match cfg.resolve(&[0.0; 256]).unwrap() {
            Resolved::Pair { config, .. } => {
                assert_eq!(config.lam0, 0.0);
                assert!((config.lam1 - 0.375).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }
}
