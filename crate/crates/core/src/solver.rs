//! Majorization-minimization solver for the two-component problem
//!
//! ```text
//! P(x1, x2) = 1/2 ||y - x1 - x2||^2 + lam0 R(x1, x2; a0)
//!           + lam1 Phi(x1; b1) + lam2 Phi(x2; b2)
//! ```
//!
//! Each iteration majorizes every regularizer by a separable quadratic,
//! adds `1/2 ||(x1 - z1) - (x2 - z2)||^2` to decouple the data term, and
//! minimizes the surrogate in closed form:
//!
//! ```text
//! p_i = 2 + 2 lam0 r0 + lam_i r_i
//! q_1 = y + (1 + lam0 r0) (z1 - z2)
//! q_2 = y + (1 + lam0 r0) (z2 - z1)
//! x_i = q_i / p_i
//! ```
//!
//! The same machinery with a single component and no coupling term is the
//! periodic group denoiser ([`pogs_solve`]); with `lam0 = 0` the problem is
//! the plain two-regularizer MCA split.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::penalty::PenaltySpec;
use crate::regularizer::{
    add, group_sq_norms, penalty_from_sq_norms, weights_from_sq_norms, weights_r0, WeightArray,
};

pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_TOL: f64 = 1e-8;

/// Outcome of the strict-convexity test `0 <= a0 < 1 / (k0 lam0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityCheck {
    pub valid: bool,
    pub bound: f64,
}

/// Checks the strict-convexity condition for the coupling regularizer.
pub fn check_convexity(k0: usize, lam0: f64, a0: f64) -> Result<ConvexityCheck> {
    if k0 == 0 {
        return Err(Error::param("k0 must be >= 1"));
    }
    if !(lam0 > 0.0) || !lam0.is_finite() {
        return Err(Error::param(format!(
            "convexity bound needs lam0 > 0, got {lam0}"
        )));
    }
    if !(a0 >= 0.0) {
        return Err(Error::param(format!("a0 must be >= 0, got {a0}")));
    }
    let bound = 1.0 / (k0 as f64 * lam0);
    Ok(ConvexityCheck {
        valid: a0 < bound,
        bound,
    })
}

/// Everything the two-component problem needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub lam0: f64,
    pub lam1: f64,
    pub lam2: f64,
    pub pen0: PenaltySpec,
    pub pen1: PenaltySpec,
    pub pen2: PenaltySpec,
    pub k0: usize,
    pub b1: WeightArray,
    pub b2: WeightArray,
    pub max_iter: usize,
    pub tol: f64,
    /// Require `a0 < 1/(k0 lam0)` and convex component penalties.
    pub enforce_convexity: bool,
}

impl SolverConfig {
    pub fn builder(b1: WeightArray, b2: WeightArray) -> SolverConfigBuilder {
        SolverConfigBuilder {
            cfg: SolverConfig {
                lam0: 1.0,
                lam1: 1.0,
                lam2: 1.0,
                pen0: PenaltySpec::abs(),
                pen1: PenaltySpec::abs(),
                pen2: PenaltySpec::abs(),
                k0: b1.n1().min(b2.n1()),
                b1,
                b2,
                max_iter: DEFAULT_MAX_ITER,
                tol: DEFAULT_TOL,
                enforce_convexity: true,
            },
        }
    }

    /// True when the coupling regularizer is switched off.
    pub fn is_mca(&self) -> bool {
        self.lam0 == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        for (name, lam) in [
            ("lam0", self.lam0),
            ("lam1", self.lam1),
            ("lam2", self.lam2),
        ] {
            if !lam.is_finite() || lam < 0.0 {
                return Err(Error::param(format!(
                    "{name} must be finite and >= 0, got {lam}"
                )));
            }
        }
        if self.k0 == 0 {
            return Err(Error::param("k0 must be >= 1"));
        }
        if self.max_iter == 0 {
            return Err(Error::param("max_iter must be >= 1"));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::param(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.is_mca() {
            if !(self.pen0.is_convex() && self.pen1.is_convex() && self.pen2.is_convex()) {
                return Err(Error::param(
                    "lam0 = 0 (MCA mode) requires a0 = a1 = a2 = 0",
                ));
            }
            return Ok(());
        }
        if self.enforce_convexity {
            let check = check_convexity(self.k0, self.lam0, self.pen0.a())?;
            if !check.valid {
                return Err(Error::param(format!(
                    "a0 = {} violates the convexity bound a0 < 1/(k0 lam0) = {}",
                    self.pen0.a(),
                    check.bound
                )));
            }
            if !(self.pen1.is_convex() && self.pen2.is_convex()) {
                return Err(Error::param("convexity enforcement requires a1 = a2 = 0"));
            }
        }
        Ok(())
    }

    /// The convexity bound `1/(k0 lam0)`, or `None` in MCA mode.
    pub fn convexity(&self) -> Option<ConvexityCheck> {
        check_convexity(self.k0, self.lam0, self.pen0.a()).ok()
    }

    /// Same problem with the two components exchanged.
    pub fn swapped(&self) -> SolverConfig {
        SolverConfig {
            lam1: self.lam2,
            lam2: self.lam1,
            pen1: self.pen2,
            pen2: self.pen1,
            b1: self.b2.clone(),
            b2: self.b1.clone(),
            ..self.clone()
        }
    }
}

pub struct SolverConfigBuilder {
    cfg: SolverConfig,
}

impl SolverConfigBuilder {
    pub fn lambdas(mut self, lam0: f64, lam1: f64, lam2: f64) -> Self {
        self.cfg.lam0 = lam0;
        self.cfg.lam1 = lam1;
        self.cfg.lam2 = lam2;
        self
    }

    pub fn penalties(mut self, pen0: PenaltySpec, pen1: PenaltySpec, pen2: PenaltySpec) -> Self {
        self.cfg.pen0 = pen0;
        self.cfg.pen1 = pen1;
        self.cfg.pen2 = pen2;
        self
    }

    pub fn k0(mut self, k0: usize) -> Self {
        self.cfg.k0 = k0;
        self
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.cfg.max_iter = max_iter;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.cfg.tol = tol;
        self
    }

    pub fn enforce_convexity(mut self, on: bool) -> Self {
        self.cfg.enforce_convexity = on;
        self
    }

    pub fn build(self) -> Result<SolverConfig> {
        self.cfg.validate()?;
        Ok(self.cfg)
    }
}

/// Starting point of the iteration.
#[derive(Debug, Clone, Default)]
pub enum Init {
    /// `x1 = x2 = y`.
    #[default]
    Observation,
    Zero,
    Given(Vec<f64>, Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    /// `y - x1 - x2`.
    pub residual: Vec<f64>,
    /// Cost at the starting point followed by the cost after every step.
    pub cost_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl DecompositionResult {
    pub fn final_cost(&self) -> f64 {
        *self
            .cost_history
            .last()
            .expect("history holds the initial cost")
    }
}

fn check_lengths(y: &[f64], x1: &[f64], x2: &[f64]) -> Result<()> {
    if x1.len() != y.len() || x2.len() != y.len() {
        return Err(Error::input(format!(
            "component lengths {} and {} do not match the observation length {}",
            x1.len(),
            x2.len(),
            y.len()
        )));
    }
    Ok(())
}

fn check_finite(y: &[f64]) -> Result<()> {
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::input(format!("non-finite sample at index {i}")));
    }
    Ok(())
}

fn check_fits(n: usize, cfg: &SolverConfig) -> Result<()> {
    let longest = cfg.b1.len().max(cfg.b2.len()).max(cfg.k0);
    if longest > n {
        return Err(Error::input(format!(
            "signal of {n} samples is shorter than the weight arrays ({longest} samples); \
             lower m or use a longer record"
        )));
    }
    Ok(())
}

fn data_term(y: &[f64], x1: &[f64], x2: &[f64]) -> f64 {
    0.5 * y
        .iter()
        .zip(x1.iter().zip(x2))
        .fold(0.0, |acc, (&yi, (&a, &b))| {
            let d = yi - (a + b);
            acc + d * d
        })
}

struct Weights {
    r0: Option<Vec<f64>>,
    r1: Option<Vec<f64>>,
    r2: Option<Vec<f64>>,
}

/// Cost at `(x1, x2)` and the MM weights tangent there. Group norms are
/// computed once and shared by both. Zero-weighted terms are skipped.
fn cost_and_weights(y: &[f64], x1: &[f64], x2: &[f64], cfg: &SolverConfig) -> (f64, Weights) {
    let n = y.len();
    let mut cost = data_term(y, x1, x2);
    let mut weights = Weights {
        r0: None,
        r1: None,
        r2: None,
    };
    if cfg.lam0 != 0.0 {
        let ones = WeightArray::ones(cfg.k0).expect("k0 validated");
        let sq = group_sq_norms(&add(x1, x2), &ones);
        cost += cfg.lam0 * penalty_from_sq_norms(&sq, &cfg.pen0);
        weights.r0 = Some(weights_from_sq_norms(&sq, &ones, &cfg.pen0, n));
    }
    if cfg.lam1 != 0.0 {
        let sq = group_sq_norms(x1, &cfg.b1);
        cost += cfg.lam1 * penalty_from_sq_norms(&sq, &cfg.pen1);
        weights.r1 = Some(weights_from_sq_norms(&sq, &cfg.b1, &cfg.pen1, n));
    }
    if cfg.lam2 != 0.0 {
        let sq = group_sq_norms(x2, &cfg.b2);
        cost += cfg.lam2 * penalty_from_sq_norms(&sq, &cfg.pen2);
        weights.r2 = Some(weights_from_sq_norms(&sq, &cfg.b2, &cfg.pen2, n));
    }
    (cost, weights)
}

fn apply_update(
    y: &[f64],
    x1: &[f64],
    x2: &[f64],
    cfg: &SolverConfig,
    w: &Weights,
) -> (Vec<f64>, Vec<f64>) {
    let n = y.len();
    let mut out1 = Vec::with_capacity(n);
    let mut out2 = Vec::with_capacity(n);
    for i in 0..n {
        let lr0 = w.r0.as_ref().map_or(0.0, |r| cfg.lam0 * r[i]);
        let lr1 = w.r1.as_ref().map_or(0.0, |r| cfg.lam1 * r[i]);
        let lr2 = w.r2.as_ref().map_or(0.0, |r| cfg.lam2 * r[i]);
        let coupling = 1.0 + lr0;
        let d = x1[i] - x2[i];
        let p1 = 2.0 + 2.0 * lr0 + lr1;
        let p2 = 2.0 + 2.0 * lr0 + lr2;
        out1.push((y[i] + coupling * d) / p1);
        out2.push((y[i] + coupling * -d) / p2);
    }
    (out1, out2)
}

/// Objective value `P(x1, x2)`.
pub fn eval_cost(y: &[f64], x1: &[f64], x2: &[f64], cfg: &SolverConfig) -> Result<f64> {
    check_lengths(y, x1, x2)?;
    check_fits(y.len(), cfg)?;
    Ok(cost_and_weights(y, x1, x2, cfg).0)
}

/// One MM update from `(x1, x2)`. The returned pair never has a higher cost.
pub fn rtea_step(
    y: &[f64],
    x1: &[f64],
    x2: &[f64],
    cfg: &SolverConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    cfg.validate()?;
    check_lengths(y, x1, x2)?;
    check_fits(y.len(), cfg)?;
    let (_, w) = cost_and_weights(y, x1, x2, cfg);
    Ok(apply_update(y, x1, x2, cfg, &w))
}

/// Relative cost-change stopping rule.
fn has_converged(prev: f64, cur: f64, tol: f64) -> bool {
    (cur - prev).abs() / cur.max(1.0) < tol
}

/// Runs the MM iteration to convergence or `cfg.max_iter` steps.
pub fn rtea_solve(y: &[f64], cfg: &SolverConfig, init: Init) -> Result<DecompositionResult> {
    cfg.validate()?;
    check_finite(y)?;
    check_fits(y.len(), cfg)?;
    let (mut x1, mut x2) = match init {
        Init::Observation => (y.to_vec(), y.to_vec()),
        Init::Zero => (vec![0.0; y.len()], vec![0.0; y.len()]),
        Init::Given(a, b) => {
            check_lengths(y, &a, &b)?;
            check_finite(&a)?;
            check_finite(&b)?;
            (a, b)
        }
    };

    let (mut cost, mut w) = cost_and_weights(y, &x1, &x2, cfg);
    let mut history = Vec::with_capacity(cfg.max_iter.min(4096) + 1);
    history.push(cost);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        let (n1, n2) = apply_update(y, &x1, &x2, cfg, &w);
        x1 = n1;
        x2 = n2;
        let prev = cost;
        (cost, w) = cost_and_weights(y, &x1, &x2, cfg);
        iterations += 1;
        if !cost.is_finite() {
            return Err(Error::Numerical(format!(
                "cost became non-finite at iteration {iterations}"
            )));
        }
        history.push(cost);
        if has_converged(prev, cost, cfg.tol) {
            converged = true;
            break;
        }
    }

    let residual = y
        .iter()
        .zip(x1.iter().zip(&x2))
        .map(|(&yi, (&a, &b))| yi - a - b)
        .collect();
    Ok(DecompositionResult {
        x1,
        x2,
        residual,
        cost_history: history,
        iterations,
        converged,
    })
}

/// Single-component periodic group denoiser
/// `P0(x) = 1/2 ||y - x||^2 + lam Phi(x, b; a)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PogsConfig {
    pub lam: f64,
    pub pen: PenaltySpec,
    pub b: WeightArray,
    pub max_iter: usize,
    pub tol: f64,
}

impl PogsConfig {
    pub fn new(b: WeightArray, lam: f64, pen: PenaltySpec) -> Self {
        PogsConfig {
            lam,
            pen,
            b,
            max_iter: DEFAULT_MAX_ITER,
            tol: DEFAULT_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lam > 0.0) || !self.lam.is_finite() {
            return Err(Error::param(format!("lam must be > 0, got {}", self.lam)));
        }
        if self.max_iter == 0 {
            return Err(Error::param("max_iter must be >= 1"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::param(format!("tol must be > 0, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PogsResult {
    pub x: Vec<f64>,
    pub cost_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn pogs_cost_and_weights(y: &[f64], x: &[f64], cfg: &PogsConfig) -> (f64, Vec<f64>) {
    let sq = group_sq_norms(x, &cfg.b);
    let data = 0.5
        * y.iter()
            .zip(x)
            .fold(0.0, |acc, (&a, &b)| acc + (a - b) * (a - b));
    let cost = data + cfg.lam * penalty_from_sq_norms(&sq, &cfg.pen);
    (cost, weights_from_sq_norms(&sq, &cfg.b, &cfg.pen, y.len()))
}

/// Objective of the single-component problem.
pub fn eval_pogs_cost(y: &[f64], x: &[f64], cfg: &PogsConfig) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::input("length mismatch"));
    }
    if cfg.b.len() > y.len() {
        return Err(Error::input("weight array longer than the signal"));
    }
    Ok(pogs_cost_and_weights(y, x, cfg).0)
}

/// Iterates `x <- y / (1 + lam r(x))` from `x = y`. With `b = ones(K)` this
/// is plain overlapping-group denoising.
pub fn pogs_solve(y: &[f64], cfg: &PogsConfig) -> Result<PogsResult> {
    cfg.validate()?;
    check_finite(y)?;
    if cfg.b.len() > y.len() {
        return Err(Error::input(format!(
            "signal of {} samples is shorter than the weight array ({})",
            y.len(),
            cfg.b.len()
        )));
    }
    let mut x = y.to_vec();
    let (mut cost, mut r) = pogs_cost_and_weights(y, &x, cfg);
    let mut history = vec![cost];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        x = y
            .iter()
            .zip(&r)
            .map(|(&yi, &ri)| yi / (1.0 + cfg.lam * ri))
            .collect();
        let prev = cost;
        (cost, r) = pogs_cost_and_weights(y, &x, cfg);
        iterations += 1;
        if !cost.is_finite() {
            return Err(Error::Numerical(format!(
                "cost became non-finite at iteration {iterations}"
            )));
        }
        history.push(cost);
        if has_converged(prev, cost, cfg.tol) {
            converged = true;
            break;
        }
    }
    Ok(PogsResult {
        x,
        cost_history: history,
        iterations,
        converged,
    })
}

/// `R_M(x1, x2; z1, z2) - R(x1, x2)`, where
/// `R_M = sum_n r0(n, z1+z2) (x1^2 + x2^2 - (z1-z2) x1 - (z2-z1) x2) + C`
/// and `C` makes the majorizer tangent at `(z1, z2)`. Never negative.
pub fn majorizer_gap_r(
    x1: &[f64],
    x2: &[f64],
    z1: &[f64],
    z2: &[f64],
    k0: usize,
    spec: &PenaltySpec,
) -> Result<f64> {
    check_lengths(x1, x2, z1)?;
    check_lengths(x1, z2, z1)?;
    let r0 = weights_r0(&add(z1, z2), k0, spec)?;
    let ones = WeightArray::ones(k0)?;
    if k0 > x1.len() {
        return Err(Error::input("group size longer than the signal"));
    }
    // quad(x) - quad(z), grouped per sample to limit cancellation.
    let mut quad = 0.0;
    for i in 0..x1.len() {
        let d = z1[i] - z2[i];
        let qx = x1[i] * x1[i] + x2[i] * x2[i] - d * x1[i] + d * x2[i];
        let qz = z1[i] * z1[i] + z2[i] * z2[i] - d * z1[i] + d * z2[i];
        quad += r0[i] * (qx - qz);
    }
    let r_z = penalty_from_sq_norms(&group_sq_norms(&add(z1, z2), &ones), spec);
    let r_x = penalty_from_sq_norms(&group_sq_norms(&add(x1, x2), &ones), spec);
    Ok(quad + r_z - r_x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penalty::PenaltyFamily;

    fn small_cfg(lams: (f64, f64, f64)) -> SolverConfig {
        SolverConfig::builder(
            WeightArray::new(2, 3, 2).unwrap(),
            WeightArray::new(2, 5, 2).unwrap(),
        )
        .lambdas(lams.0, lams.1, lams.2)
        .k0(2)
        .build()
        .unwrap()
    }

    #[test]
    fn convexity_examples() {
        let c = check_convexity(3, 0.5, 0.5).unwrap();
        assert!(c.valid);
        assert!((c.bound - 2.0 / 3.0).abs() < 1e-15);
        assert!(!check_convexity(3, 0.5, 0.7).unwrap().valid);
        assert!(check_convexity(7, 123.0, 0.0).unwrap().valid);
        assert!(check_convexity(3, 0.0, 0.1).is_err());
        assert!(check_convexity(3, -1.0, 0.1).is_err());
    }

    #[test]
    fn config_validation() {
        let b = WeightArray::new(2, 3, 2).unwrap();
        let atan = |a| PenaltySpec::new(PenaltyFamily::Atan, a, 1e-10).unwrap();
        // a0 above the bound
        assert!(SolverConfig::builder(b.clone(), b.clone())
            .lambdas(0.5, 1.0, 1.0)
            .k0(3)
            .penalties(atan(0.7), PenaltySpec::abs(), PenaltySpec::abs())
            .build()
            .is_err());
        // non-convex components under enforcement
        assert!(SolverConfig::builder(b.clone(), b.clone())
            .lambdas(0.5, 1.0, 1.0)
            .k0(3)
            .penalties(atan(0.1), atan(0.1), PenaltySpec::abs())
            .build()
            .is_err());
        // allowed once enforcement is off
        assert!(SolverConfig::builder(b.clone(), b.clone())
            .lambdas(0.5, 1.0, 1.0)
            .k0(3)
            .penalties(atan(0.1), atan(0.1), PenaltySpec::abs())
            .enforce_convexity(false)
            .build()
            .is_ok());
        // MCA needs convex penalties even without enforcement
        assert!(SolverConfig::builder(b.clone(), b.clone())
            .lambdas(0.0, 1.0, 1.0)
            .penalties(PenaltySpec::abs(), atan(0.1), PenaltySpec::abs())
            .enforce_convexity(false)
            .build()
            .is_err());
        assert!(SolverConfig::builder(b.clone(), b.clone())
            .lambdas(-1.0, 1.0, 1.0)
            .build()
            .is_err());
        assert!(SolverConfig::builder(b.clone(), b)
            .tol(0.0)
            .build()
            .is_err());
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let cfg = small_cfg((0.5, 0.3, 0.3));
        let y = vec![0.0; 20];
        let (a, b) = rtea_step(&y, &y, &y, &cfg).unwrap();
        assert!(a.iter().chain(&b).all(|&v| v == 0.0));
        let res = rtea_solve(&y, &cfg, Init::Observation).unwrap();
        assert!(res.iterations <= 2);
        assert!(res.converged);
        assert!(res.x1.iter().chain(&res.x2).all(|&v| v == 0.0));
    }

    #[test]
    fn symmetric_inputs_stay_symmetric() {
        let b = WeightArray::new(2, 3, 2).unwrap();
        let cfg = SolverConfig::builder(b.clone(), b)
            .lambdas(0.4, 0.2, 0.2)
            .k0(2)
            .build()
            .unwrap();
        let y: Vec<f64> = (0..24).map(|i| (i as f64 * 1.3).sin()).collect();
        let (a, b) = rtea_step(&y, &y, &y, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cost_collapses_to_data_term() {
        let cfg = small_cfg((0.0, 0.0, 0.0));
        let y: Vec<f64> = (0..16).map(|i| i as f64 * 0.1).collect();
        let x1: Vec<f64> = (0..16).map(|i| (i as f64).cos()).collect();
        let x2 = vec![0.25; 16];
        let expected: f64 = 0.5 * (0..16).map(|i| (y[i] - x1[i] - x2[i]).powi(2)).sum::<f64>();
        assert!((eval_cost(&y, &x1, &x2, &cfg).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = small_cfg((0.5, 0.3, 0.3));
        let mut y = vec![0.1; 20];
        y[3] = f64::NAN;
        assert!(matches!(
            rtea_solve(&y, &cfg, Init::Observation),
            Err(Error::InvalidInput(_))
        ));
        assert!(eval_cost(&[0.0; 20], &[0.0; 19], &[0.0; 20], &cfg).is_err());
        assert!(rtea_solve(&[0.0; 5], &cfg, Init::Observation).is_err());
    }

    #[test]
    fn pogs_zero_and_validation() {
        let cfg = PogsConfig::new(WeightArray::ones(3).unwrap(), 1.0, PenaltySpec::abs());
        let res = pogs_solve(&[0.0; 12], &cfg).unwrap();
        assert!(res.x.iter().all(|&v| v == 0.0));
        let bad = PogsConfig::new(WeightArray::ones(3).unwrap(), 0.0, PenaltySpec::abs());
        assert!(pogs_solve(&[0.0; 12], &bad).is_err());
    }

    #[test]
    fn r_gap_zero_at_tangency() {
        let spec = PenaltySpec::new(PenaltyFamily::Log, 0.3, 1e-8).unwrap();
        let z1: Vec<f64> = (0..16).map(|i| (i as f64 * 0.9).sin()).collect();
        let z2: Vec<f64> = (0..16).map(|i| (i as f64 * 0.4).cos()).collect();
        let g = majorizer_gap_r(&z1, &z2, &z1, &z2, 3, &spec).unwrap();
        assert!(g.abs() < 1e-12);
    }
}
