//! Sparsity-promoting penalty functions.
//!
//! Each family provides the non-smooth penalty `phi(u; a)`, its smoothed
//! counterpart `phi_eps(u; a) = phi(sqrt(u^2 + eps); a)`, and the weight
//! function `psi(u; a) = u / phi_eps'(u; a)` that drives the quadratic
//! majorizer
//!
//! ```text
//! phi_eps_M(u, v) = u^2 / (2 psi(v)) - (v^2 / (2 psi(v)) - phi_eps(v))
//! ```
//!
//! `a` controls concavity; `a = 0` is the convex absolute-value penalty for
//! every family.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default smoothing constant.
pub const DEFAULT_EPS: f64 = 1e-10;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyFamily {
    Abs,
    Log,
    Rat,
    Atan,
}

impl PenaltyFamily {
    pub const ALL: [PenaltyFamily; 4] = [
        PenaltyFamily::Abs,
        PenaltyFamily::Log,
        PenaltyFamily::Rat,
        PenaltyFamily::Atan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PenaltyFamily::Abs => "abs",
            PenaltyFamily::Log => "log",
            PenaltyFamily::Rat => "rat",
            PenaltyFamily::Atan => "atan",
        }
    }
}

impl fmt::Display for PenaltyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PenaltyFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abs" => Ok(PenaltyFamily::Abs),
            "log" => Ok(PenaltyFamily::Log),
            "rat" => Ok(PenaltyFamily::Rat),
            "atan" => Ok(PenaltyFamily::Atan),
            other => Err(Error::param(format!(
                "unknown penalty family {other:?} (expected abs, log, rat or atan)"
            ))),
        }
    }
}

/// A validated penalty: family, concavity `a` and smoothing `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPenaltySpec", into = "RawPenaltySpec")]
pub struct PenaltySpec {
    family: PenaltyFamily,
    a: f64,
    eps: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPenaltySpec {
    family: PenaltyFamily,
    a: f64,
    eps: f64,
}

impl TryFrom<RawPenaltySpec> for PenaltySpec {
    type Error = Error;

    fn try_from(raw: RawPenaltySpec) -> Result<Self> {
        PenaltySpec::new(raw.family, raw.a, raw.eps)
    }
}

impl From<PenaltySpec> for RawPenaltySpec {
    fn from(p: PenaltySpec) -> Self {
        RawPenaltySpec {
            family: p.family,
            a: p.a,
            eps: p.eps,
        }
    }
}

impl Default for PenaltySpec {
    fn default() -> Self {
        PenaltySpec::abs()
    }
}

impl PenaltySpec {
    /// Builds a penalty, rejecting `a < 0`, `a != 0` for the abs family, and
    /// non-positive `eps`.
    pub fn new(family: PenaltyFamily, a: f64, eps: f64) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::param(format!(
                "penalty concavity a must be >= 0, got {a}"
            )));
        }
        if family == PenaltyFamily::Abs && a != 0.0 {
            return Err(Error::param(format!("abs penalty requires a = 0, got {a}")));
        }
        if !eps.is_finite() || eps <= 0.0 {
            return Err(Error::param(format!(
                "penalty smoothing eps must be > 0, got {eps}"
            )));
        }
        Ok(PenaltySpec { family, a, eps })
    }

    /// Convex abs penalty with the default smoothing.
    pub fn abs() -> Self {
        PenaltySpec {
            family: PenaltyFamily::Abs,
            a: 0.0,
            eps: DEFAULT_EPS,
        }
    }

    /// Same family and concavity with a different smoothing constant.
    pub fn with_eps(self, eps: f64) -> Result<Self> {
        PenaltySpec::new(self.family, self.a, eps)
    }

    pub fn family(&self) -> PenaltyFamily {
        self.family
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// True when the penalty is convex, i.e. it behaves as the abs family.
    pub fn is_convex(&self) -> bool {
        self.a == 0.0
    }

    /// Family actually evaluated: `a = 0` collapses every family onto abs.
    fn effective(&self) -> PenaltyFamily {
        if self.a == 0.0 {
            PenaltyFamily::Abs
        } else {
            self.family
        }
    }

    /// Non-smooth penalty of a magnitude `v >= 0`.
    fn phi_mag(&self, v: f64) -> f64 {
        let a = self.a;
        match self.effective() {
            PenaltyFamily::Abs => v,
            PenaltyFamily::Log => (a * v).ln_1p() / a,
            PenaltyFamily::Rat => v / (1.0 + 0.5 * a * v),
            // atan(p) - atan(1/sqrt3) folded into a single atan so small `a`
            // does not cancel catastrophically.
            PenaltyFamily::Atan => 2.0 / (a * SQRT_3) * (SQRT_3 * a * v / (2.0 + a * v)).atan(),
        }
    }

    /// `phi(u; a)`.
    pub fn phi(&self, u: f64) -> f64 {
        self.phi_mag(u.abs())
    }

    /// `phi_eps(u; a) = phi(sqrt(u^2 + eps); a)`.
    pub fn phi_eps(&self, u: f64) -> f64 {
        self.phi_eps_sq(u * u)
    }

    /// `psi(u; a) = u / phi_eps'(u; a)`, strictly positive.
    pub fn psi(&self, u: f64) -> f64 {
        self.psi_sq(u * u)
    }

    /// `phi_eps` of a value whose square is `sq`.
    #[inline]
    pub(crate) fn phi_eps_sq(&self, sq: f64) -> f64 {
        self.phi_mag((sq + self.eps).sqrt())
    }

    /// `psi` of a value whose square is `sq`.
    #[inline]
    pub(crate) fn psi_sq(&self, sq: f64) -> f64 {
        let v = (sq + self.eps).sqrt();
        let a = self.a;
        match self.effective() {
            PenaltyFamily::Abs => v,
            PenaltyFamily::Log => v * (1.0 + a * v),
            PenaltyFamily::Rat => {
                let t = 1.0 + 0.5 * a * v;
                v * t * t
            }
            PenaltyFamily::Atan => v * (1.0 + a * v + a * a * (sq + self.eps)),
        }
    }

    /// Quadratic majorizer of `phi_eps` at `u`, tangent at `v`.
    pub fn majorize_scalar(&self, u: f64, v: f64) -> f64 {
        let psi_v = self.psi(v);
        u * u / (2.0 * psi_v) - (v * v / (2.0 * psi_v) - self.phi_eps(v))
    }
}
