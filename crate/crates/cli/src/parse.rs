//! Vector and grid parsing for the command line.

use anyhow::{anyhow, bail, Result};
use meanfix_core::space::SeqVector;

use crate::config::parse_f64_list;

/// Parses a start-vector spec: symbolic `zero` / `e<k>` or a comma list
/// of coefficients, placed in `ℓ^p`.
pub fn parse_vector(spec: &str, p: f64) -> Result<SeqVector> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("zero") {
        return SeqVector::zero(p).map_err(|e| anyhow!("{e}"));
    }
    if let Some(idx) = spec.strip_prefix('e') {
        if let Ok(k) = idx.parse::<usize>() {
            return SeqVector::basis(k, p).map_err(|e| anyhow!("{e}"));
        }
    }
    let coeffs = parse_f64_list(spec).map_err(|e| anyhow!("bad vector spec {spec:?}: {e}"))?;
    SeqVector::new(coeffs, p).map_err(|e| anyhow!("bad vector spec {spec:?}: {e}"))
}

/// Parses a grid spec `lo:hi:step` into first-coordinate candidates
/// `(c, 0)` in `ℓ²`, endpoints included.
pub fn parse_grid(spec: &str) -> Result<Vec<SeqVector>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("grid spec must be lo:hi:step, got {spec:?}");
    }
    let lo: f64 = parts[0].trim().parse()?;
    let hi: f64 = parts[1].trim().parse()?;
    let step: f64 = parts[2].trim().parse()?;
    // `step > 0.0` is false for NaN too, so this rejects it as well
    let step_ok = step > 0.0 && step.is_finite();
    if !step_ok || !lo.is_finite() || !hi.is_finite() || hi < lo {
        bail!("grid spec needs finite lo <= hi and step > 0, got {spec:?}");
    }
    let count = ((hi - lo) / step).round() as usize;
    let mut out = Vec::with_capacity(count + 1);
    for k in 0..=count {
        let c = lo + k as f64 * step;
        if c > hi + step * 1e-9 {
            break;
        }
        out.push(SeqVector::new(vec![c, 0.0], 2.0).map_err(|e| anyhow!("{e}"))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_vectors() {
        assert_eq!(
            parse_vector("zero", 2.0).unwrap(),
            SeqVector::zero(2.0).unwrap()
        );
        assert_eq!(
            parse_vector("e3", 2.0).unwrap(),
            SeqVector::basis(3, 2.0).unwrap()
        );
        assert_eq!(parse_vector("e1", 3.0).unwrap().exponent(), 3.0);
    }

    #[test]
    fn comma_lists() {
        let v = parse_vector("1,1", 2.0).unwrap();
        assert_eq!(v.coeffs(), &[1.0, 1.0]);
        let v = parse_vector("0.5, -0.25, 1e-3", 2.0).unwrap();
        assert_eq!(v.coeffs(), &[0.5, -0.25, 1e-3]);
        assert!(parse_vector("x,y", 2.0).is_err());
        assert!(parse_vector("e0", 2.0).is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("-2:2:0.01").unwrap();
        assert_eq!(g.len(), 401);
        assert_eq!(g[0].coeff(1), -2.0);
        assert!((g[300].coeff(1) - 1.0).abs() < 1e-12);
        assert!((g[400].coeff(1) - 2.0).abs() < 1e-12);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
    }
}
