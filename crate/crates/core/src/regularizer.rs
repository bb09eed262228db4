//! Overlapping group regularizers and their majorization weights.
//!
//! Signals are zero-padded: a regularizer sums the penalty of every window
//! position that overlaps the signal, i.e. window starts `m` in
//! `-(K-1)..=N-1`. Window norms are stored at index `m + K - 1`.
//!
//! Masked window sums are recomputed per position instead of being updated as
//! running sums. Running sums lose small group energies next to large
//! transients, and those small norms are exactly what the weights `1/psi`
//! amplify.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::penalty::PenaltySpec;

/// Binary weighting array: `m + 1` runs of `n1` ones separated by runs of
/// `n0` zeros, so it spans `m` periods of `n1 + n0` samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWeightArray", into = "RawWeightArray")]
pub struct WeightArray {
    n1: usize,
    n0: usize,
    m: usize,
    mask: Vec<bool>,
    support: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawWeightArray {
    n1: usize,
    n0: usize,
    m: usize,
}

impl TryFrom<RawWeightArray> for WeightArray {
    type Error = Error;

    fn try_from(raw: RawWeightArray) -> Result<Self> {
        if raw.m == 0 && raw.n0 == 0 {
            WeightArray::ones(raw.n1)
        } else {
            WeightArray::new(raw.n1, raw.n0, raw.m)
        }
    }
}

impl From<WeightArray> for RawWeightArray {
    fn from(w: WeightArray) -> Self {
        RawWeightArray {
            n1: w.n1,
            n0: w.n0,
            m: w.m,
        }
    }
}

impl WeightArray {
    pub fn new(n1: usize, n0: usize, m: usize) -> Result<Self> {
        if n1 == 0 {
            return Err(Error::param("weight array needs n1 >= 1"));
        }
        if m == 0 {
            return Err(Error::param("weight array needs m >= 1 periods"));
        }
        let period = n1 + n0;
        let len = m * period + n1;
        let mask: Vec<bool> = (0..len).map(|i| i % period < n1).collect();
        Ok(Self::from_parts(n1, n0, m, mask))
    }

    /// A contiguous group of `k` ones (plain overlapping group sparsity).
    pub fn ones(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("group size must be >= 1"));
        }
        Ok(Self::from_parts(k, 0, 0, vec![true; k]))
    }

    fn from_parts(n1: usize, n0: usize, m: usize, mask: Vec<bool>) -> Self {
        let support = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        WeightArray {
            n1,
            n0,
            m,
            mask,
            support,
        }
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Repetition period `n1 + n0` in samples.
    pub fn period(&self) -> usize {
        self.n1 + self.n0
    }

    /// Total length `K`.
    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Offsets of the ones, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Number of ones.
    pub fn weight_sum(&self) -> usize {
        self.support.len()
    }

    /// The mask as 0/1 values.
    pub fn to_vec(&self) -> Vec<u8> {
        self.mask.iter().map(|&b| b as u8).collect()
    }
}

/// Masked sum of squares for every window start `m` in `-(K-1)..=N-1`.
pub(crate) fn group_sq_norms(z: &[f64], b: &WeightArray) -> Vec<f64> {
    let n = z.len() as isize;
    let k = b.len() as isize;
    let support = b.support();
    (0..(n + k - 1))
        .map(|pos| {
            let start = pos - (k - 1);
            let mut acc = 0.0;
            for &off in support {
                let idx = start + off as isize;
                if idx >= 0 && idx < n {
                    let v = z[idx as usize];
                    acc += v * v;
                }
            }
            acc
        })
        .collect()
}

/// `r(n) = sum_j b_j / psi(v_{n-j})` for `n` in `0..N`, from window norms.
pub(crate) fn weights_from_sq_norms(
    sq_norms: &[f64],
    b: &WeightArray,
    spec: &PenaltySpec,
    n: usize,
) -> Vec<f64> {
    let k = b.len();
    debug_assert_eq!(sq_norms.len(), n + k - 1);
    let inv: Vec<f64> = sq_norms.iter().map(|&s| 1.0 / spec.psi_sq(s)).collect();
    let support = b.support();
    (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for &j in support {
                acc += inv[i + k - 1 - j];
            }
            acc
        })
        .collect()
}

pub(crate) fn penalty_from_sq_norms(sq_norms: &[f64], spec: &PenaltySpec) -> f64 {
    sq_norms
        .iter()
        .fold(0.0, |acc, &s| acc + spec.phi_eps_sq(s))
}

fn check_fits(x: &[f64], b: &WeightArray) -> Result<()> {
    if b.len() > x.len() {
        return Err(Error::input(format!(
            "weight array of length {} is longer than the signal ({} samples)",
            b.len(),
            x.len()
        )));
    }
    Ok(())
}

fn check_same_len(a: &[f64], b: &[f64], what: &str) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::input(format!(
            "{what}: length mismatch ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Periodic group regularizer `Phi(x, b; a)`.
pub fn eval_phi(x: &[f64], b: &WeightArray, spec: &PenaltySpec) -> Result<f64> {
    check_fits(x, b)?;
    Ok(penalty_from_sq_norms(&group_sq_norms(x, b), spec))
}

/// Overlapping group regularizer `R(x1, x2; a0)` on the sum `x1 + x2`.
pub fn eval_r(x1: &[f64], x2: &[f64], k0: usize, spec: &PenaltySpec) -> Result<f64> {
    check_same_len(x1, x2, "R")?;
    let ones = WeightArray::ones(k0)?;
    eval_phi(&add(x1, x2), &ones, spec)
}

/// MM weights `r(n, z)` of `Phi` at `z`.
pub fn weights_r(z: &[f64], b: &WeightArray, spec: &PenaltySpec) -> Result<Vec<f64>> {
    check_fits(z, b)?;
    Ok(weights_from_sq_norms(
        &group_sq_norms(z, b),
        b,
        spec,
        z.len(),
    ))
}

/// MM weights `r0(n, z)` of the contiguous group regularizer at `z`.
pub fn weights_r0(z: &[f64], k0: usize, spec: &PenaltySpec) -> Result<Vec<f64>> {
    let ones = WeightArray::ones(k0)?;
    weights_r(z, &ones, spec)
}

/// `Phi_M(x, z) - Phi(x)` where `Phi_M(x, z) = 1/2 sum r(n,z) x_n^2 + C(z)` and
/// `C(z)` makes the majorizer tangent at `x = z`. Never negative.
pub fn majorizer_gap_phi(x: &[f64], z: &[f64], b: &WeightArray, spec: &PenaltySpec) -> Result<f64> {
    check_same_len(x, z, "Phi majorizer")?;
    let r = weights_r(z, b, spec)?;
    let quad = r
        .iter()
        .zip(x.iter().zip(z))
        .fold(0.0, |acc, (&ri, (&xi, &zi))| {
            acc + 0.5 * ri * (xi - zi) * (xi + zi)
        });
    Ok(quad + eval_phi(z, b, spec)? - eval_phi(x, b, spec)?)
}
