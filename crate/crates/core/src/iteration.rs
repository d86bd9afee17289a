//! Picard iteration with convergence diagnostics.
//!
//! For an orbit `x, Tx, T²x, …` and a fixed reference point `y`, the
//! distance sequence `d_n = ‖T^n x − y‖` need not be monotone when `T` is
//! only mean nonexpansive. The averaged inequality still guarantees that
//! every window of `n₀` consecutive indices contains one where the
//! distance does not increase; [`extract_monotone_subsequence`] picks that
//! subsequence `(k_n)`, and [`distance_limit`] checks numerically that the
//! remaining indices are squeezed onto the same limit by asymptotic
//! regularity.
//!
//! Weak convergence is modeled coordinate-wise: on bounded orbits the weak
//! topology is metrized by [`coordinate_metric`], and
//! [`estimate_weak_clusters`] groups orbit tails under that metric.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::operators::Operator;
use crate::space::{CoordinateFunctional, SeqVector};
use crate::{Error, Result};

/// Default residual tolerance for accepting a reference point as an
/// approximate fixed point.
pub const DEFAULT_REFERENCE_TOL: f64 = 1e-10;

/// Default coordinate-convergence tolerance for cluster estimation.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Default iteration count.
pub const DEFAULT_ITERATIONS: usize = 200;

/// Full record of one Picard orbit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IterationTrace {
    pub operator: String,
    pub start: SeqVector,
    /// `T^n x` for `n = 0..=N`.
    pub iterates: Vec<SeqVector>,
    /// `r_n = ‖T^n x − T^{n+1} x‖` for `n = 0..N`.
    pub residuals: Vec<f64>,
    /// Reference point `y`, when supplied (must be an approximate fixed
    /// point).
    pub reference: Option<SeqVector>,
    /// `d_n = ‖T^n x − y‖` for `n = 0..=N`, when `reference` is set.
    pub distances: Option<Vec<f64>>,
    /// 1-based coordinate indices whose functionals are recorded.
    pub functionals: Vec<usize>,
    /// `functional_values[i][n]` = coordinate `functionals[i]` of `T^n x`.
    pub functional_values: Vec<Vec<f64>>,
}

impl IterationTrace {
    /// Number of applications of the operator.
    pub fn steps(&self) -> usize {
        self.residuals.len()
    }
}

/// Runs `N` Picard steps from `x`, recording residuals, distances to the
/// optional reference point, and the configured coordinate functionals.
///
/// A supplied reference must satisfy `‖Ty − y‖ <= ref_tol`; the distance
/// diagnostics below are meaningful only against (approximate) fixed
/// points, so anything else is rejected.
pub fn run_iteration(
    op: &Operator,
    x: &SeqVector,
    n: usize,
    reference: Option<&SeqVector>,
    functionals: &[usize],
    ref_tol: f64,
) -> Result<IterationTrace> {
    if n == 0 {
        return Err(Error::Precondition("need at least one iteration".into()));
    }
    if let Some(y) = reference {
        let res = op.residual(y)?;
        if !(res <= ref_tol) {
            return Err(Error::NotApproxFixedPoint {
                residual: res,
                tol: ref_tol,
            });
        }
    }
    let panel = functionals
        .iter()
        .map(|&i| CoordinateFunctional::new(i))
        .collect::<Result<Vec<_>>>()?;

    let mut iterates = Vec::with_capacity(n + 1);
    iterates.push(x.clone());
    let mut residuals = Vec::with_capacity(n);
    for _ in 0..n {
        let cur = iterates.last().unwrap();
        let next = op.apply(cur)?;
        residuals.push(next.dist(cur)?);
        iterates.push(next);
    }

    let distances = match reference {
        Some(y) => Some(
            iterates
                .iter()
                .map(|v| v.dist(y))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };

    let functional_values = panel
        .iter()
        .map(|f| iterates.iter().map(|v| f.eval(v)).collect())
        .collect();

    Ok(IterationTrace {
        operator: op.name().to_string(),
        start: x.clone(),
        iterates,
        residuals,
        reference: reference.cloned(),
        distances,
        functionals: functionals.to_vec(),
        functional_values,
    })
}

/// Selects indices `k₀ = 0 < k₁ < k₂ < …` with `1 <= k_{n+1} − k_n <= n₀`
/// and `d[k_{n+1}] <= d[k_n]`, always taking the smallest admissible index
/// in the window `{k_n + 1, …, k_n + n₀}`.
///
/// Extraction stops once the window no longer fits inside `d`. A full
/// window with no admissible index is an error: for a mean nonexpansive
/// map and a fixed reference, the averaged inequality guarantees at least
/// one of the next `n₀` distances does not exceed the current one, so a
/// failure here indicates the hypotheses do not hold on this data.
pub fn extract_monotone_subsequence(d: &[f64], n0: usize) -> Result<Vec<usize>> {
    if n0 < 2 {
        return Err(Error::Precondition("window length n0 must be >= 2".into()));
    }
    if d.is_empty() {
        return Err(Error::Precondition("empty distance sequence".into()));
    }
    if d.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Precondition(
            "distances must be finite and nonnegative".into(),
        ));
    }
    let mut ks = Vec::new();
    let mut k = 0usize;
    ks.push(k);
    while k + n0 < d.len() {
        let window = (k + 1)..=(k + n0);
        match window.clone().find(|&i| d[i] <= d[k]) {
            Some(i) => {
                k = i;
                ks.push(k);
            }
            None => {
                return Err(Error::ExtractionFailed {
                    window_start: k + 1,
                    window_end: k + n0,
                })
            }
        }
    }
    Ok(ks)
}

/// Result of [`distance_limit`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistanceLimit {
    /// Estimated limit of `‖T^n x − y‖`: the tail value of the extracted
    /// non-increasing subsequence.
    pub q: f64,
    /// True iff every distance (extracted or skipped) over the last
    /// quarter of the trace is within `tol` of `q`.
    pub converged: bool,
    /// The extracted subsequence `(k_n)`.
    pub indices: Vec<usize>,
}

/// Estimates `q = lim_n ‖T^n x − y‖` from a trace with a reference point.
///
/// `q` is read off the extracted subsequence, which is non-increasing and
/// hence convergent; the `converged` flag then demands that *all* indices
/// over the last quarter of the trace, including the skipped ones, sit
/// within `tol` of `q`.
pub fn distance_limit(trace: &IterationTrace, n0: usize, tol: f64) -> Result<DistanceLimit> {
    let d = trace.distances.as_ref().ok_or(Error::MissingReference)?;
    let indices = extract_monotone_subsequence(d, n0)?;
    let q = d[*indices.last().unwrap()];
    let tail_start = d.len() - d.len() / 4;
    let converged = d[tail_start..].iter().all(|v| (v - q).abs() <= tol);
    Ok(DistanceLimit {
        q,
        converged,
        indices,
    })
}

/// Metric of coordinate-wise convergence, `Σ_i 2^{−i} · min(1, |x_i − y_i|)`.
/// On bounded subsets of `ℓ^p` this metrizes weak convergence, which is
/// how "⇀" becomes checkable on finite data.
pub fn coordinate_metric(x: &SeqVector, y: &SeqVector) -> f64 {
    let n = x.len().max(y.len());
    let mut sum = 0.0;
    let mut w = 1.0;
    for i in 1..=n {
        w *= 0.5;
        sum += w * (x.coeff(i) - y.coeff(i)).abs().min(1.0);
    }
    sum
}

/// Estimated weak subsequential limits of an orbit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeakClusterEstimate {
    /// One representative per cluster, truncated to the reporting
    /// dimension. The representative is the latest orbit member of its
    /// cluster, i.e. the best available estimate of the limit.
    pub clusters: Vec<SeqVector>,
    /// Orbit indices grouped by cluster.
    pub members: Vec<Vec<usize>>,
    /// Coordinate-convergence tolerance used for grouping.
    pub tol: f64,
}

impl WeakClusterEstimate {
    pub fn count(&self) -> usize {
        self.clusters.len()
    }
}

/// Groups the tail of the orbit (its last half) under [`coordinate_metric`]:
/// an iterate joins the first cluster whose latest member is within `tol`,
/// otherwise it founds a new cluster.
///
/// Chaining along the orbit is intended — a slowly converging tail is one
/// cluster, an alternating tail is two. Representatives are truncated to
/// `truncation_dim`, past which coordinates are not observable by the
/// configured functional panel.
pub fn estimate_weak_clusters(
    trace: &IterationTrace,
    tol: f64,
    truncation_dim: usize,
) -> WeakClusterEstimate {
    let start = trace.iterates.len() / 2;
    let mut reps: Vec<SeqVector> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (n, v) in trace.iterates.iter().enumerate().skip(start) {
        match reps.iter().position(|r| coordinate_metric(r, v) <= tol) {
            Some(c) => {
                reps[c] = v.clone();
                members[c].push(n);
            }
            None => {
                reps.push(v.clone());
                members.push(alloc::vec![n]);
            }
        }
    }
    WeakClusterEstimate {
        clusters: reps.iter().map(|r| r.truncate(truncation_dim)).collect(),
        members,
        tol,
    }
}

/// Checks the demiclosedness conclusion on estimated clusters: when the
/// orbit is an approximate fixed point sequence (residuals → 0, the
/// caller's responsibility), every weak subsequential limit must be an
/// actual fixed point. Returns true iff each cluster representative has
/// residual at most `tol`.
pub fn check_demiclosedness_conclusion(
    op: &Operator,
    clusters: &WeakClusterEstimate,
    tol: f64,
) -> Result<bool> {
    for z in &clusters.clusters {
        if !(op.residual(z)? <= tol) {
            return Ok(false);
        }
    }
    Ok(true)
}
