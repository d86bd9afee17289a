//! Sampled verification of the defining inequalities.
//!
//! A map `T` is mean nonexpansive for the multi-index `α = (α₁,…,α_{n₀})`
//! when `Σ α_j ‖T^j x − T^j y‖ <= ‖x − y‖` for all `x, y` in its domain,
//! and `(α,p)`-nonexpansive when the same holds with every norm raised to
//! the power `p`. Nothing here proves the inequality — the harness hunts
//! for counterexamples over seeded sample pairs and reports the worst
//! margin together with a reproducible witness.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::operators::Operator;
use crate::sampling::{pair_rng, sample_domain};
use crate::space::{pow_p, SeqVector};
use crate::{Error, Result};

/// Margins above `-MARGIN_TOL` count as floating-point noise, not as
/// violations.
pub const DEFAULT_MARGIN_TOL: f64 = 1e-10;

/// Pairs closer than this are excluded from Lipschitz ratios.
pub const DEGENERATE_PAIR_TOL: f64 = 1e-9;

/// Default truncation dimension for `ℓ²` experiments.
pub const DEFAULT_TRUNCATION_DIM: usize = 64;

/// The weight sequence `(α₁,…,α_{n₀})` of a mean nonexpansive map
/// together with the exponent `p` of the inequality.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultiIndex {
    weights: Vec<f64>,
    exponent: f64,
}

impl MultiIndex {
    /// Validates `α₁ > 0`, `α_{n₀} > 0`, `α_j >= 0`, `Σ α_j = 1` (within
    /// 1e−12) and `p >= 1`.
    pub fn new(weights: Vec<f64>, exponent: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidMultiIndex("no weights".to_string()));
        }
        if !(exponent >= 1.0) || !exponent.is_finite() {
            return Err(Error::InvalidMultiIndex(
                "exponent must satisfy p >= 1".to_string(),
            ));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMultiIndex(
                "weights must be finite and nonnegative".to_string(),
            ));
        }
        if !(weights[0] > 0.0 && *weights.last().unwrap() > 0.0) {
            return Err(Error::InvalidMultiIndex(
                "first and last weight must be positive".to_string(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMultiIndex(
                "weights must sum to 1 within 1e-12".to_string(),
            ));
        }
        Ok(Self { weights, exponent })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// The length `n₀` of the multi-index.
    pub fn order(&self) -> usize {
        self.weights.len()
    }
}

/// Sampling plan shared by the certification entry points.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplePlan {
    pub samples: usize,
    pub seed: u64,
    pub dim: usize,
    pub margin_tol: f64,
}

impl Default for SamplePlan {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0,
            dim: DEFAULT_TRUNCATION_DIM,
            margin_tol: DEFAULT_MARGIN_TOL,
        }
    }
}

/// Outcome of one certification run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CertificationReport {
    pub operator: String,
    pub weights: Vec<f64>,
    pub exponent: f64,
    pub samples: usize,
    pub seed: u64,
    pub dim: usize,
    pub margin_tol: f64,
    /// Smallest margin `‖x−y‖^p − Σ α_j ‖T^jx − T^jy‖^p` observed.
    pub min_margin: f64,
    /// Pair attaining the minimum (first such pair in index order).
    pub witness: (SeqVector, SeqVector),
    /// Index of the witness pair (injected pairs come first).
    pub witness_index: usize,
    /// Per-iterate sampled lower bounds on the Lipschitz constants
    /// `k(T^j)`, `j = 1..n₀`.
    pub lipschitz_lower: Vec<f64>,
    /// Set iff the minimum margin is below `-margin_tol` and re-evaluating
    /// the stored witness reproduces that.
    pub violation: bool,
}

/// Margin of the `(α,p)` inequality at one pair:
/// `‖x−y‖^p − Σ_j α_j ‖T^j x − T^j y‖^p`. Nonnegative margins are evidence
/// for, negative margins witnesses against.
pub fn inequality_margin(
    op: &Operator,
    alpha: &MultiIndex,
    x: &SeqVector,
    y: &SeqVector,
) -> Result<f64> {
    let p = alpha.exponent;
    let mut tx = x.clone();
    let mut ty = y.clone();
    let mut sum = 0.0;
    for &w in &alpha.weights {
        tx = op.apply(&tx)?;
        ty = op.apply(&ty)?;
        sum += w * pow_p(tx.dist(&ty)?, p);
    }
    Ok(pow_p(x.dist(y)?, p) - sum)
}

/// Hunts for violations of the `(α,p)` inequality over `plan.samples`
/// seeded pairs plus any injected `extra_pairs` (evaluated first, at the
/// lowest indices).
///
/// The reduction is order-independent: the reported witness is the
/// minimal-margin pair of smallest index.
pub fn certify_mean_nonexpansive(
    op: &Operator,
    alpha: &MultiIndex,
    plan: &SamplePlan,
    extra_pairs: &[(SeqVector, SeqVector)],
) -> Result<CertificationReport> {
    if plan.samples == 0 && extra_pairs.is_empty() {
        return Err(Error::Precondition("need at least one sample pair".into()));
    }
    let domain = op.domain();
    let n0 = alpha.order();
    let mut min_margin = f64::INFINITY;
    let mut witness: Option<(usize, SeqVector, SeqVector)> = None;
    let mut lipschitz = vec![0.0f64; n0];

    let total = extra_pairs.len() + plan.samples;
    for idx in 0..total {
        let (x, y) = if idx < extra_pairs.len() {
            extra_pairs[idx].clone()
        } else {
            let mut rng = pair_rng(plan.seed, (idx - extra_pairs.len()) as u64);
            let x = sample_domain(&domain, plan.dim, &mut rng);
            let y = sample_domain(&domain, plan.dim, &mut rng);
            (x, y)
        };
        let d0 = x.dist(&y)?;
        let mut tx = x.clone();
        let mut ty = y.clone();
        let mut sum = 0.0;
        for (j, &w) in alpha.weights.iter().enumerate() {
            tx = op.apply(&tx)?;
            ty = op.apply(&ty)?;
            let dj = tx.dist(&ty)?;
            sum += w * pow_p(dj, alpha.exponent);
            if d0 >= DEGENERATE_PAIR_TOL {
                lipschitz[j] = lipschitz[j].max(dj / d0);
            }
        }
        let margin = pow_p(d0, alpha.exponent) - sum;
        if margin < min_margin {
            min_margin = margin;
            witness = Some((idx, x, y));
        }
    }

    let (witness_index, wx, wy) = witness.expect("at least one pair evaluated");
    // A reported violation must survive exact re-evaluation at the witness.
    let violation =
        min_margin < -plan.margin_tol && inequality_margin(op, alpha, &wx, &wy)? < -plan.margin_tol;

    Ok(CertificationReport {
        operator: op.name().to_string(),
        weights: alpha.weights.clone(),
        exponent: alpha.exponent,
        samples: plan.samples,
        seed: plan.seed,
        dim: plan.dim,
        margin_tol: plan.margin_tol,
        min_margin,
        witness: (wx, wy),
        witness_index,
        lipschitz_lower: lipschitz,
        violation,
    })
}

/// A sampled lower bound on a Lipschitz constant.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LipschitzEstimate {
    pub operator: String,
    pub iterate: usize,
    pub samples: usize,
    pub seed: u64,
    pub dim: usize,
    /// `max ‖T^j x − T^j y‖ / ‖x − y‖` over admissible pairs.
    pub lower_bound: f64,
    pub witness: (SeqVector, SeqVector),
    pub witness_index: usize,
}

/// Estimates `k(T^j)` from below by the best ratio over seeded pairs plus
/// injected `extra_pairs` (evaluated first). Pairs with `‖x−y‖ < 1e−9`
/// are skipped.
pub fn estimate_lipschitz(
    op: &Operator,
    j: usize,
    plan: &SamplePlan,
    extra_pairs: &[(SeqVector, SeqVector)],
) -> Result<LipschitzEstimate> {
    if j == 0 {
        return Err(Error::Precondition("iterate must be >= 1".into()));
    }
    if plan.samples == 0 && extra_pairs.is_empty() {
        return Err(Error::Precondition("need at least one sample pair".into()));
    }
    let domain = op.domain();
    let mut best = 0.0f64;
    let mut witness: Option<(usize, SeqVector, SeqVector)> = None;
    let total = extra_pairs.len() + plan.samples;
    for idx in 0..total {
        let (x, y) = if idx < extra_pairs.len() {
            extra_pairs[idx].clone()
        } else {
            let mut rng = pair_rng(plan.seed, (idx - extra_pairs.len()) as u64);
            let x = sample_domain(&domain, plan.dim, &mut rng);
            let y = sample_domain(&domain, plan.dim, &mut rng);
            (x, y)
        };
        let d0 = x.dist(&y)?;
        if d0 < DEGENERATE_PAIR_TOL {
            continue;
        }
        let ratio = op.iterate_k(&x, j)?.dist(&op.iterate_k(&y, j)?)? / d0;
        if ratio > best {
            best = ratio;
            witness = Some((idx, x, y));
        }
    }
    let (witness_index, wx, wy) =
        witness.ok_or_else(|| Error::Precondition("all sampled pairs were degenerate".into()))?;
    Ok(LipschitzEstimate {
        operator: op.name().to_string(),
        iterate: j,
        samples: plan.samples,
        seed: plan.seed,
        dim: plan.dim,
        lower_bound: best,
        witness: (wx, wy),
        witness_index,
    })
}

/// Residual profile `r_n = ‖T^n x − T^{n+1} x‖` for `n = 0..N−1`.
/// `r_n → 0` is asymptotic regularity at `x`; monotonicity is not implied.
pub fn asymptotic_regularity_profile(op: &Operator, x: &SeqVector, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Precondition("need at least one step".into()));
    }
    let mut out = Vec::with_capacity(n);
    let mut cur = x.clone();
    for _ in 0..n {
        let next = op.apply(&cur)?;
        out.push(next.dist(&cur)?);
        cur = next;
    }
    Ok(out)
}
