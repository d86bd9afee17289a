//! Numerical probes of the ambient Banach-space geometry.
//!
//! These operations quantify the hypotheses under which Picard orbits of
//! mean nonexpansive maps converge weakly: the Opial property (weak limits
//! are asymptotically favored in norm), single-valued duality mappings
//! with a gauge, uniform convexity via its modulus, and the asymptotic
//! center machinery that picks the weak limit out of the fixed-point set
//! by minimizing `φ(y) = lim_n ‖T^n x − y‖`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;

use crate::iteration::IterationTrace;
use crate::operators::Operator;
use crate::sampling::{pair_rng, sample_sphere};
use crate::space::{norm_slice, SeqVector};
use crate::{Error, Result};

/// A gauge `μ(t) = t^exponent`: strictly increasing, continuous, `μ(0)=0`.
/// The canonical gauge of `ℓ^p` has exponent `p − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GaugeFunction {
    exponent: f64,
}

impl GaugeFunction {
    pub fn new(exponent: f64) -> Result<Self> {
        if !(exponent > 0.0) || !exponent.is_finite() {
            return Err(Error::Precondition(
                "gauge exponent must be positive and finite".into(),
            ));
        }
        Ok(Self { exponent })
    }

    /// The canonical gauge of `ℓ^p`, `μ(t) = t^{p−1}` (needs `p > 1`).
    pub fn canonical(p: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::DualityUndefined { p });
        }
        Self::new(p - 1.0)
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            0.0
        } else if self.exponent == 1.0 {
            t
        } else {
            t.powf(self.exponent)
        }
    }
}

/// Estimated lim-inf margins of the Opial inequality along a sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OpialMargin {
    /// Estimate of `liminf_n ‖u_n − u‖`.
    pub to_u: f64,
    /// Estimate of `liminf_n ‖u_n − v‖`.
    pub to_v: f64,
    /// `to_v − to_u`; positive for genuinely Opial data.
    pub margin: f64,
}

/// Estimates the Opial margin `liminf ‖u_n − v‖ − liminf ‖u_n − u‖` for a
/// sequence `u_n ⇀ u` and a competitor `v`.
///
/// lim inf is estimated by the minimum over the tail half `n > N/2`, which
/// discards transients (e.g. `u_n = e_n` passing through `v = e₁` at
/// `n = 1`). Weak convergence of the input sequence is the caller's
/// responsibility.
pub fn opial_margin(
    mut seq: impl FnMut(usize) -> SeqVector,
    u: &SeqVector,
    v: &SeqVector,
    n: usize,
) -> Result<OpialMargin> {
    if n == 0 {
        return Err(Error::Precondition(
            "need at least one sequence term".into(),
        ));
    }
    let mut to_u = f64::INFINITY;
    let mut to_v = f64::INFINITY;
    for k in (n / 2 + 1)..=n {
        let uk = seq(k);
        to_u = to_u.min(uk.dist(u)?);
        to_v = to_v.min(uk.dist(v)?);
    }
    Ok(OpialMargin {
        to_u,
        to_v,
        margin: to_v - to_u,
    })
}

/// The canonical duality map of `ℓ^p` (`p > 1`) with gauge `μ(t) = t^{p−1}`:
/// `(Jx)_j = |x_j|^{p−1} sgn(x_j)`, returned as an element of the dual
/// `ℓ^q`, `q = p/(p−1)`. It satisfies `(Jx)(x) = ‖Jx‖_q ‖x‖_p
/// = μ(‖x‖_p) ‖x‖_p`; for `p = 2` it is the identity.
pub fn duality_map(x: &SeqVector) -> Result<SeqVector> {
    let p = x.exponent();
    if !(p > 1.0) {
        return Err(Error::DualityUndefined { p });
    }
    if p == 2.0 {
        return Ok(x.clone());
    }
    let q = p / (p - 1.0);
    let coeffs = x
        .coeffs()
        .iter()
        .map(|&c| {
            if c == 0.0 {
                0.0
            } else {
                c.abs().powf(p - 1.0) * c.signum()
            }
        })
        .collect();
    SeqVector::new(coeffs, q)
}

/// Applies a functional given by coefficients `f` to `x`: `Σ_j f_j x_j`.
pub fn pairing(f: &SeqVector, x: &SeqVector) -> f64 {
    let n = f.len().min(x.len());
    (1..=n).map(|i| f.coeff(i) * x.coeff(i)).sum()
}

/// Duality-map evaluation together with the defining identities.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DualityReport {
    pub jx: SeqVector,
    /// `(Jx)(x)`.
    pub pairing: f64,
    /// `‖x‖_p`.
    pub norm_p: f64,
    /// `‖Jx‖_q`.
    pub norm_q: f64,
    /// `μ(‖x‖_p)` for the canonical gauge.
    pub gauge_of_norm: f64,
    /// `|(Jx)(x) − μ(‖x‖_p)·‖x‖_p|`.
    pub pairing_defect: f64,
    /// `|‖Jx‖_q − μ(‖x‖_p)|`.
    pub norm_defect: f64,
}

/// Evaluates the canonical duality map and the identities
/// `(Jx)(x) = μ(‖x‖)‖x‖` and `‖Jx‖_q = μ(‖x‖)`.
pub fn duality_probe(x: &SeqVector) -> Result<DualityReport> {
    let gauge = GaugeFunction::canonical(x.exponent())?;
    let jx = duality_map(x)?;
    let norm_p = x.norm();
    let norm_q = jx.norm();
    let pair = pairing(&jx, x);
    let gauge_of_norm = gauge.eval(norm_p);
    Ok(DualityReport {
        pairing_defect: (pair - gauge_of_norm * norm_p).abs(),
        norm_defect: (norm_q - gauge_of_norm).abs(),
        jx,
        pairing: pair,
        norm_p,
        norm_q,
        gauge_of_norm,
    })
}

/// `(J u_k)(w)` for `k = 1..=n`: the functional action of the duality map
/// along a sequence, against a fixed test vector.
pub fn pairing_decay(
    mut seq: impl FnMut(usize) -> SeqVector,
    w: &SeqVector,
    n: usize,
) -> Result<Vec<f64>> {
    (1..=n)
        .map(|k| Ok(pairing(&duality_map(&seq(k))?, w)))
        .collect()
}

/// Probes weak sequential continuity of the duality map along the weakly
/// null basis sequence `(e_k)`: for every panel vector `w`, the actions
/// `(J e_k)(w)` must decay to 0 over the tail half. Finitely supported
/// panels make the tail exactly zero once `k` passes the support.
pub fn weak_continuity_probe(p: f64, n: usize, panel: &[SeqVector], tol: f64) -> Result<bool> {
    if !(p > 1.0) {
        return Err(Error::DualityUndefined { p });
    }
    if n < 2 || panel.is_empty() {
        return Err(Error::Precondition(
            "need n >= 2 and a nonempty test panel".into(),
        ));
    }
    for w in panel {
        let values = pairing_decay(|k| SeqVector::basis(k, p).expect("k >= 1"), w, n)?;
        let tail_max = values[n / 2..].iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if tail_max > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sampled estimate of the modulus of convexity.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModulusEstimate {
    pub p: f64,
    pub eps: f64,
    pub samples: usize,
    pub seed: u64,
    pub dim: usize,
    /// `min 1 − ‖(u+v)/2‖` over feasible sampled pairs; an upper bound on
    /// the true modulus `δ(ε)`.
    pub delta: f64,
    /// Number of sampled pairs that reached the constraint boundary.
    pub accepted: usize,
    pub witness: (SeqVector, SeqVector),
}

/// Estimates `δ(ε) = inf { 1 − ‖(u+v)/2‖ : ‖u‖,‖v‖ <= 1, ‖u−v‖ >= ε }`
/// by sampling unit-sphere pairs and projecting each onto the constraint
/// boundary `‖u−v‖ = ε` (bisection along the chord, keeping the feasible
/// side); pairs whose chord cannot reach `ε` are rejected. The antipodal
/// pair `(u, −u)` is always included as a feasible fallback, so the
/// estimate is defined even at `ε = 2`.
///
/// The minimum over feasible samples upper-bounds the true infimum; for
/// `p = 2` every boundary pair attains `1 − √(1 − ε²/4)` exactly, so the
/// estimate matches the closed form to rounding error.
pub fn modulus_of_convexity(
    p: f64,
    eps: f64,
    samples: usize,
    seed: u64,
    dim: usize,
) -> Result<ModulusEstimate> {
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(Error::Precondition("eps must lie in (0, 2]".into()));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent { p });
    }
    if dim < 2 {
        return Err(Error::Precondition("dim must be >= 2".into()));
    }

    let unit = |coeffs: &[f64]| -> Option<SeqVector> {
        let n = norm_slice(coeffs, p);
        if n == 0.0 {
            return None;
        }
        let scaled: Vec<f64> = coeffs.iter().map(|c| c / n).collect();
        SeqVector::new(scaled, p).ok()
    };

    let mut best = f64::INFINITY;
    let mut witness: Option<(SeqVector, SeqVector)> = None;
    let mut accepted = 0usize;

    for i in 0..samples {
        let mut rng = pair_rng(seed, i as u64);
        let u = sample_sphere(p, dim, &mut rng);
        let v_raw = sample_sphere(p, dim, &mut rng);
        let chord: Vec<f64> = (1..=dim).map(|j| v_raw.coeff(j) - u.coeff(j)).collect();
        let point_at = |lambda: f64| -> Option<SeqVector> {
            let coeffs: Vec<f64> = (1..=dim)
                .map(|j| u.coeff(j) + lambda * chord[j - 1])
                .collect();
            unit(&coeffs)
        };
        let dist_at = |lambda: f64| -> f64 {
            match point_at(lambda) {
                Some(v) => v.dist(&u).expect("same exponent"),
                // the path degenerates through the origin: treat as the
                // far (antipodal) side
                None => 2.0,
            }
        };
        if dist_at(1.0) < eps {
            continue;
        }
        // bisect for the smallest feasible chord length
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if dist_at(mid) >= eps {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let v = match point_at(hi) {
            Some(v) if v.dist(&u)? >= eps => v,
            _ => continue,
        };
        accepted += 1;
        let mid = u.add(&v)?.scale(0.5)?;
        let value = 1.0 - mid.norm();
        if value < best {
            best = value;
            witness = Some((u, v));
        }
    }

    // antipodal fallback: ‖u − (−u)‖ = 2 >= eps always
    let mut rng = pair_rng(seed, samples as u64);
    let u = sample_sphere(p, dim, &mut rng);
    let v = u.scale(-1.0)?;
    let value = 1.0 - u.add(&v)?.scale(0.5)?.norm();
    if value < best {
        best = value;
        witness = Some((u, v));
    }

    Ok(ModulusEstimate {
        p,
        eps,
        samples,
        seed,
        dim,
        delta: best,
        accepted,
        witness: witness.expect("fallback pair always present"),
    })
}

/// Minimizer of `φ(y) = lim_n ‖T^n x − y‖` over a finite candidate set of
/// fixed points.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AsymptoticCenter {
    /// Minimal level `r₀ = min φ`.
    pub r0: f64,
    /// Minimizing candidate `y₀` (smallest index on ties).
    pub center: SeqVector,
    pub center_index: usize,
    /// `φ` at every candidate, in input order.
    pub phi: Vec<f64>,
    /// Description of the candidate set, for reports.
    pub search_set: String,
}

/// Estimates the asymptotic center of an orbit over `candidates`.
///
/// Every candidate must be an approximate fixed point
/// (`residual <= residual_tol`): the level-set machinery is about the
/// fixed-point set, so foreign candidates are rejected, not silently
/// scored. `φ(y)` is the mean distance over the final 10% of the orbit;
/// the limit exists for mean nonexpansive maps and fixed references, so
/// any stable tail statistic estimates it.
pub fn asymptotic_center(
    op: &Operator,
    trace: &IterationTrace,
    candidates: &[SeqVector],
    residual_tol: f64,
    search_set: &str,
) -> Result<AsymptoticCenter> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidateSet);
    }
    for (i, y) in candidates.iter().enumerate() {
        let res = op.residual(y)?;
        if !(res <= residual_tol) {
            return Err(Error::Precondition(alloc::format!(
                "candidate {i} is not an approximate fixed point (residual {res:e})"
            )));
        }
    }
    let len = trace.iterates.len();
    let tail = &trace.iterates[len - (len / 10).max(1)..];
    let mut phi = Vec::with_capacity(candidates.len());
    for y in candidates {
        let mut sum = 0.0;
        for it in tail {
            sum += it.dist(y)?;
        }
        phi.push(sum / tail.len() as f64);
    }
    let (center_index, &r0) = phi
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).expect("distances are finite"))
        .expect("nonempty candidate set");
    Ok(AsymptoticCenter {
        r0,
        center: candidates[center_index].clone(),
        center_index,
        phi,
        search_set: search_set.to_string(),
    })
}

/// Indices of candidates in the sublevel set `{ y : φ(y) <= r }`. The sets
/// are nested in `r` by construction; exposed so reports can state the
/// near-minimal level set explicitly.
pub fn sublevel_indices(phi: &[f64], r: f64) -> Vec<usize> {
    phi.iter()
        .enumerate()
        .filter(|(_, v)| **v <= r)
        .map(|(i, _)| i)
        .collect()
}
