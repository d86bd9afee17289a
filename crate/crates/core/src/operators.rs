//! The operator corpus: pure self-maps of convex subsets of `ℓ^p`.
//!
//! The centerpiece is [`Kind::Example`], a self-map of the closed unit ball
//! of `ℓ²` built from the dead-zone map [`tau`]:
//!
//! ```text
//! T(x₁, x₂, …) = (τ(x₂), √(2/3)·x₃, x₄, x₅, …)
//! ```
//!
//! Its Lipschitz constants are `k(T) = √2` and `k(T^j) = 2/√3` for `j >= 2`,
//! so no iterate is nonexpansive, yet the averaged inequality
//! `½‖Tx−Ty‖² + ½‖T²x−T²y‖² <= ‖x−y‖²` holds on the ball. The remaining
//! corpus members are plain nonexpansive maps used as controls.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;

use crate::space::SeqVector;
use crate::{Error, Result};

/// Slack accepted on domain-membership checks.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Boundary between the dead zone and the linear branches of [`tau`],
/// `(√2 − 1)/√2`. The unique threshold that makes the three branches
/// continuous with outer slope `√2`.
pub fn tau_threshold() -> f64 {
    (SQRT_2 - 1.0) / SQRT_2
}

/// Piecewise-linear dead-zone map on `[-1, 1]`:
///
/// ```text
/// τ(t) = √2·t + (√2−1)   for t in [−1, −(√2−1)/√2]
/// τ(t) = 0               for |t| <= (√2−1)/√2
/// τ(t) = √2·t − (√2−1)   for t in [(√2−1)/√2, 1]
/// ```
///
/// Satisfies `|τ(t)| <= |t|`, `τ(±1) = ±1`, and has Lipschitz constant
/// exactly `√2` on the outer branches.
pub fn tau(t: f64) -> Result<f64> {
    if !(t.abs() <= 1.0 + DOMAIN_SLACK) {
        return Err(Error::ScalarOutsideInterval { t });
    }
    let t = t.clamp(-1.0, 1.0);
    let c = SQRT_2 - 1.0;
    if t.abs() <= c / SQRT_2 {
        Ok(0.0)
    } else if t > 0.0 {
        Ok(SQRT_2 * t - c)
    } else {
        Ok(SQRT_2 * t + c)
    }
}

/// Where an operator's inputs are sampled from.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SetKind {
    /// Closed ball of the given radius centered at the origin.
    Ball { radius: f64 },
    /// The whole space (sampled with standard Gaussian coordinates).
    Space,
}

/// Sampling domain descriptor: a convex set `C` inside `ℓ^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Domain {
    pub set: SetKind,
    /// Ambient norm exponent.
    pub p: f64,
    /// Fixed ambient dimension, or `None` to use the configured
    /// truncation dimension.
    pub dim: Option<usize>,
}

impl Domain {
    /// Checks membership of `x` in the sampling set, within [`DOMAIN_SLACK`].
    pub fn contains(&self, x: &SeqVector) -> bool {
        if x.exponent() != self.p {
            return false;
        }
        if let Some(d) = self.dim {
            if x.support() > d {
                return false;
            }
        }
        match self.set {
            SetKind::Ball { radius } => x.norm() <= radius + DOMAIN_SLACK,
            SetKind::Space => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Kind {
    /// `T(x₁,x₂,…) = (τ(x₂), √(2/3)·x₃, x₄, …)` on the unit ball of `ℓ²`.
    Example,
    /// `x ↦ x`.
    Identity,
    /// `x ↦ c·x`.
    Scale(f64),
    /// `(a, b) ↦ (a, b/2)` on `ℝ²`; fixed-point set is the line `b = 0`.
    PlanarHalving,
    /// Forward coordinate shift `(x₁,x₂,…) ↦ (0, x₁, x₂, …)`, an isometry.
    Shift,
}

/// A named pure self-map of a convex set, evaluable at any [`SeqVector`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Operator {
    name: String,
    kind: Kind,
    domain: Domain,
}

impl Operator {
    pub fn example() -> Self {
        Self {
            name: "example".to_string(),
            kind: Kind::Example,
            domain: Domain {
                set: SetKind::Ball { radius: 1.0 },
                p: 2.0,
                dim: None,
            },
        }
    }

    pub fn identity() -> Self {
        Self {
            name: "identity".to_string(),
            kind: Kind::Identity,
            domain: Domain {
                set: SetKind::Ball { radius: 1.0 },
                p: 2.0,
                dim: None,
            },
        }
    }

    pub fn scale(c: f64) -> Self {
        Self {
            name: format!("scale:{c}"),
            kind: Kind::Scale(c),
            domain: Domain {
                set: SetKind::Ball { radius: 1.0 },
                p: 2.0,
                dim: None,
            },
        }
    }

    pub fn planar_halving() -> Self {
        Self {
            name: "planar-halving".to_string(),
            kind: Kind::PlanarHalving,
            domain: Domain {
                set: SetKind::Space,
                p: 2.0,
                dim: Some(2),
            },
        }
    }

    pub fn shift() -> Self {
        Self {
            name: "shift".to_string(),
            kind: Kind::Shift,
            domain: Domain {
                set: SetKind::Ball { radius: 1.0 },
                p: 2.0,
                dim: None,
            },
        }
    }

    /// Resolves a corpus name, with parameters after a colon
    /// (e.g. `"scale:0.5"`).
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "example" => Ok(Self::example()),
            "identity" => Ok(Self::identity()),
            "planar-halving" => Ok(Self::planar_halving()),
            "shift" => Ok(Self::shift()),
            _ => {
                if let Some(arg) = name.strip_prefix("scale:") {
                    let c: f64 = arg.parse().map_err(|_| {
                        Error::Precondition(format!("invalid scale parameter {arg:?}"))
                    })?;
                    if !c.is_finite() {
                        return Err(Error::Precondition(format!(
                            "scale parameter must be finite, got {c}"
                        )));
                    }
                    Ok(Self::scale(c))
                } else {
                    Err(Error::Precondition(format!("unknown operator {name:?}")))
                }
            }
        }
    }

    /// Names of the built-in corpus, with a short description each.
    pub fn corpus() -> Vec<(&'static str, &'static str)> {
        vec![
            (
                "example",
                "(x1,x2,...) -> (tau(x2), sqrt(2/3) x3, x4, ...) on the unit ball of l2",
            ),
            ("identity", "x -> x"),
            ("scale:<c>", "x -> c*x (sampled on the unit ball of l2)"),
            ("planar-halving", "(a,b) -> (a, b/2) on R^2"),
            (
                "shift",
                "(x1,x2,...) -> (0, x1, x2, ...) on the unit ball of l2",
            ),
        ]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Applies the map once.
    ///
    /// The domain descriptor is where inputs are *sampled*; evaluation is
    /// defined wherever the formula makes sense. Only the example map
    /// hard-rejects inputs (`‖x‖₂ > 1 + 1e−12`), since its first coordinate
    /// feeds [`tau`]. The exponent of `x` must always match the ambient.
    pub fn apply(&self, x: &SeqVector) -> Result<SeqVector> {
        if x.exponent() != self.domain.p {
            return Err(Error::ExponentMismatch {
                left: x.exponent(),
                right: self.domain.p,
            });
        }
        match self.kind {
            Kind::Example => {
                let norm = x.norm();
                if norm > 1.0 + DOMAIN_SLACK {
                    return Err(Error::OutsideDomain { norm, bound: 1.0 });
                }
                let scale = (2.0f64 / 3.0).sqrt();
                let len = x.len().max(3) - 1;
                let mut coeffs = vec![0.0; len];
                coeffs[0] = tau(x.coeff(2))?;
                coeffs[1] = scale * x.coeff(3);
                for (i, slot) in coeffs.iter_mut().enumerate().skip(2) {
                    *slot = x.coeff(i + 2);
                }
                SeqVector::new(coeffs, 2.0)
            }
            Kind::Identity => Ok(x.clone()),
            Kind::Scale(c) => x.scale(c),
            Kind::PlanarHalving => {
                if x.support() > 2 {
                    return Err(Error::Precondition(
                        "planar map expects a vector supported on the first two coordinates".into(),
                    ));
                }
                SeqVector::new(vec![x.coeff(1), 0.5 * x.coeff(2)], 2.0)
            }
            Kind::Shift => {
                let mut coeffs = vec![0.0; x.len() + 1];
                coeffs[1..].copy_from_slice(x.coeffs());
                SeqVector::new(coeffs, 2.0)
            }
        }
    }

    /// The `k`-fold composition `T^k x`; `k = 0` returns `x` unchanged.
    pub fn iterate_k(&self, x: &SeqVector, k: usize) -> Result<SeqVector> {
        let mut v = x.clone();
        for _ in 0..k {
            v = self.apply(&v)?;
        }
        Ok(v)
    }

    /// `‖Tx − x‖`, the fixed-point residual at `x`.
    pub fn residual(&self, x: &SeqVector) -> Result<f64> {
        self.apply(x)?.dist(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize) -> SeqVector {
        SeqVector::basis(n, 2.0).unwrap()
    }

    #[test]
    fn tau_pinned_values() {
        assert_eq!(tau(0.0).unwrap(), 0.0);
        assert_eq!(tau(1.0).unwrap(), 1.0);
        assert_eq!(tau(-1.0).unwrap(), -1.0);
        // third branch at 0.5: 1 − √2/2
        let expect = 1.0 - SQRT_2 / 2.0;
        assert!((tau(0.5).unwrap() - expect).abs() < 1e-15);
        assert!((tau(-0.5).unwrap() + expect).abs() < 1e-15);
        // dead zone
        assert_eq!(tau(0.25).unwrap(), 0.0);
        assert_eq!(tau(-0.29).unwrap(), 0.0);
        // slope witness on the outer branch
        let ratio = (tau(1.0).unwrap() - tau(0.5).unwrap()) / 0.5;
        assert!((ratio - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn tau_continuous_at_threshold() {
        let th = tau_threshold();
        assert!(tau(th).unwrap().abs() < 1e-15);
        assert!(tau(-th).unwrap().abs() < 1e-15);
        assert!(tau(th + 1e-12).unwrap().abs() < 1e-11);
    }

    #[test]
    fn tau_domain_checked() {
        assert!(tau(1.1).is_err());
        assert!(tau(-1.0000001).is_err());
        assert!(tau(f64::NAN).is_err());
        // slack admits ball-membership noise
        assert!(tau(1.0 + 5e-13).is_ok());
    }

    #[test]
    fn tau_bounded_by_identity() {
        let n = 20_001;
        for i in 0..n {
            let t = -1.0 + 2.0 * (i as f64) / ((n - 1) as f64);
            assert!(tau(t).unwrap().abs() <= t.abs());
        }
    }

    #[test]
    fn example_map_values() {
        let op = Operator::example();
        let zero = SeqVector::zero(2.0).unwrap();
        assert_eq!(op.apply(&zero).unwrap().norm(), 0.0);
        // T e₂ = e₁ because τ(1) = 1
        assert_eq!(op.apply(&e(2)).unwrap(), e(1));
        // T e₃ = √(2/3) e₂
        let te3 = op.apply(&e(3)).unwrap();
        let expect = e(2).scale((2.0f64 / 3.0).sqrt()).unwrap();
        assert!(te3.approx_eq(&expect, 1e-15));
        assert!((te3.coeff(2) - 0.816496580927726).abs() < 1e-12);
    }

    #[test]
    fn example_map_rejects_outside_ball() {
        let op = Operator::example();
        let big = SeqVector::new(vec![1.0, 1.0], 2.0).unwrap();
        assert!(matches!(op.apply(&big), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn second_iterate_matches_closed_form() {
        // T²(x₁,x₂,…) = (τ(√(2/3) x₃), √(2/3) x₄, x₅, …), checked
        // coordinate-wise against the composition.
        let op = Operator::example();
        let scale = (2.0f64 / 3.0).sqrt();
        let starts = [
            vec![0.1, -0.2, 0.3, 0.4, -0.5, 0.6],
            vec![0.0, 0.0, 1.0],
            vec![0.5, 0.5, -0.5, 0.5],
            vec![-0.9, 0.1, 0.2, 0.05, 0.1, 0.0, 0.3],
        ];
        for coeffs in starts {
            let x = SeqVector::new(coeffs, 2.0).unwrap();
            let x = x.scale(1.0 / x.norm().max(1.0)).unwrap();
            let got = op.iterate_k(&x, 2).unwrap();
            let mut direct = vec![0.0; x.len().max(4) - 2];
            direct[0] = tau(scale * x.coeff(3)).unwrap();
            direct[1] = scale * x.coeff(4);
            for (i, slot) in direct.iter_mut().enumerate().skip(2) {
                *slot = x.coeff(i + 3);
            }
            let direct = SeqVector::new(direct, 2.0).unwrap();
            assert!(got.approx_eq(&direct, 1e-14), "mismatch for {:?}", x);
        }
    }

    #[test]
    fn iterates_of_e3() {
        let op = Operator::example();
        // T² e₃ = τ(√(2/3)) e₁ = (2/√3 − (√2 − 1)) e₁
        let t2 = op.iterate_k(&e(3), 2).unwrap();
        let expect = 2.0 / 3.0f64.sqrt() - (SQRT_2 - 1.0);
        assert!((t2.coeff(1) - expect).abs() < 1e-14);
        assert!((t2.coeff(1) - 0.7404869760061565).abs() < 1e-12);
        assert_eq!(t2.support(), 1);
        // T³ e₃ = 0 since τ(0) = 0
        let t3 = op.iterate_k(&e(3), 3).unwrap();
        assert_eq!(t3.norm(), 0.0);
        // empty composition
        assert_eq!(op.iterate_k(&e(3), 0).unwrap(), e(3));
    }

    #[test]
    fn residuals() {
        let op = Operator::example();
        assert_eq!(op.residual(&SeqVector::zero(2.0).unwrap()).unwrap(), 0.0);
        // ‖T e₂ − e₂‖ = ‖e₁ − e₂‖ = √2
        assert_eq!(op.residual(&e(2)).unwrap(), SQRT_2);
        let id = Operator::identity();
        let x = SeqVector::new(vec![0.3, -0.4, 0.1], 2.0).unwrap();
        assert_eq!(id.residual(&x).unwrap(), 0.0);
    }

    #[test]
    fn lipschitz_witnesses_closed_form() {
        let op = Operator::example();
        // k(T) witness: (e₂, ½e₂)
        let x = e(2);
        let y = e(2).scale(0.5).unwrap();
        let ratio =
            op.apply(&x).unwrap().dist(&op.apply(&y).unwrap()).unwrap() / x.dist(&y).unwrap();
        assert!((ratio - SQRT_2).abs() < 1e-12);
        // k(T²) witness: (e₃, ½e₃)
        let x = e(3);
        let y = e(3).scale(0.5).unwrap();
        let ratio = op
            .iterate_k(&x, 2)
            .unwrap()
            .dist(&op.iterate_k(&y, 2).unwrap())
            .unwrap()
            / x.dist(&y).unwrap();
        assert!((ratio - 2.0 / 3.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn planar_halving() {
        let op = Operator::planar_halving();
        let x = SeqVector::new(vec![1.0, 1.0], 2.0).unwrap();
        let tx = op.apply(&x).unwrap();
        assert_eq!(tx, SeqVector::new(vec![1.0, 0.5], 2.0).unwrap());
        // fixed line b = 0
        let fixed = SeqVector::new(vec![-1.7, 0.0], 2.0).unwrap();
        assert_eq!(op.residual(&fixed).unwrap(), 0.0);
        let bad = SeqVector::new(vec![1.0, 1.0, 1.0], 2.0).unwrap();
        assert!(op.apply(&bad).is_err());
    }

    #[test]
    fn shift_is_isometry() {
        let op = Operator::shift();
        let x = SeqVector::new(vec![0.3, -0.4], 2.0).unwrap();
        let sx = op.apply(&x).unwrap();
        assert_eq!(sx, SeqVector::new(vec![0.0, 0.3, -0.4], 2.0).unwrap());
        assert_eq!(sx.norm(), x.norm());
        assert_eq!(op.apply(&e(1)).unwrap(), e(2));
    }

    #[test]
    fn example_maps_ball_into_ball() {
        use crate::sampling::{pair_rng, sample_domain};
        let op = Operator::example();
        let domain = op.domain();
        for i in 0..100_000u64 {
            let x = sample_domain(&domain, 64, &mut pair_rng(4, i));
            let tx = op.apply(&x).unwrap();
            assert!(tx.norm() <= 1.0 + 1e-12, "left the ball at pair {i}");
        }
    }

    #[test]
    fn only_fixed_point_is_zero() {
        // residual-minimization search from random starts: descend along
        // the orbit (each step can only shrink the eventual residual here,
        // since orbits collapse), keep the best point seen, and probe
        // random perturbations around it
        use crate::sampling::{pair_rng, sample_domain};
        use rand::Rng;
        let op = Operator::example();
        let domain = op.domain();
        for s in 0..20u64 {
            let mut rng = pair_rng(71, s);
            let mut best = sample_domain(&domain, 16, &mut rng);
            let mut best_res = op.residual(&best).unwrap();
            for _ in 0..40 {
                let next = op.apply(&best).unwrap();
                let res = op.residual(&next).unwrap();
                if res <= best_res {
                    best = next;
                    best_res = res;
                }
                let jitter: Vec<f64> = best
                    .coeffs()
                    .iter()
                    .map(|c| c + 1e-4 * (rng.gen::<f64>() - 0.5))
                    .collect();
                let probe = SeqVector::new(jitter, 2.0).unwrap();
                if probe.norm() <= 1.0 {
                    let res = op.residual(&probe).unwrap();
                    if res < best_res {
                        best = probe;
                        best_res = res;
                    }
                }
            }
            assert!(best_res <= 1e-12, "search stalled at residual {best_res}");
            assert!(best.norm() <= 1e-6, "near-fixed point far from 0: {best:?}");
        }
    }

    #[test]
    fn names_round_trip() {
        for (name, op) in [
            ("example", Operator::example()),
            ("identity", Operator::identity()),
            ("scale:0.5", Operator::scale(0.5)),
            ("scale:-1", Operator::scale(-1.0)),
            ("planar-halving", Operator::planar_halving()),
            ("shift", Operator::shift()),
        ] {
            assert_eq!(Operator::from_name(name).unwrap(), op);
            assert_eq!(Operator::from_name(op.name()).unwrap(), op);
        }
        assert!(Operator::from_name("nope").is_err());
        assert!(Operator::from_name("scale:abc").is_err());
        assert!(Operator::from_name("scale:inf").is_err());
    }

    #[test]
    fn exponent_checked() {
        let op = Operator::identity();
        let x = SeqVector::basis(1, 3.0).unwrap();
        assert!(matches!(op.apply(&x), Err(Error::ExponentMismatch { .. })));
    }
}
