//! Report writers: JSON, CSV (header row, comma separators, `.` decimal
//! point), gnuplot two-column data. All files are written atomically
//! (write to a sibling temp file, then rename).
//!
//! Floats are printed with Rust's shortest-round-trip formatting, so a
//! value read back from JSON or CSV reproduces the original bits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process;

use anyhow::{Context, Result};
use meanfix_core::certify::CertificationReport;
use meanfix_core::iteration::IterationTrace;
use meanfix_core::space::SeqVector;

/// Atomically writes `contents` to `path`.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)
                .with_context(|| format!("creating directory {}", dir.display()))?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp.{}", process::id()));
    let tmp = Path::new(&tmp);
    fs::write(tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Serializes any report to pretty JSON (trailing newline included).
pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    atomic_write(path, &to_json(value)?)
}

/// One CSV summary row per certification run; Lipschitz lower bounds get
/// one `k<j>` column per iterate.
pub fn certify_csv(report: &CertificationReport) -> String {
    let mut header = String::from("operator,alpha,p,samples,seed,dim,min_margin,violation");
    for j in 1..=report.lipschitz_lower.len() {
        let _ = write!(header, ",k{j}");
    }
    let alpha: Vec<String> = report.weights.iter().map(|w| w.to_string()).collect();
    let mut row = format!(
        "{},{},{},{},{},{},{},{}",
        report.operator,
        alpha.join(";"),
        report.exponent,
        report.samples,
        report.seed,
        report.dim,
        report.min_margin,
        report.violation
    );
    for k in &report.lipschitz_lower {
        let _ = write!(row, ",{k}");
    }
    format!("{header}\n{row}\n")
}

/// Trace CSV: one row per orbit index with residual, distance (when a
/// reference is set), and the configured coordinate functionals. The
/// residual column is empty on the final row (there are `N` residuals for
/// `N+1` iterates).
pub fn trace_csv(trace: &IterationTrace) -> String {
    let mut header = String::from("n,residual,distance");
    for i in &trace.functionals {
        let _ = write!(header, ",f{i}");
    }
    let mut out = header;
    out.push('\n');
    let steps = trace.iterates.len();
    for n in 0..steps {
        let _ = write!(out, "{n},");
        if n < trace.residuals.len() {
            let _ = write!(out, "{}", trace.residuals[n]);
        }
        out.push(',');
        if let Some(d) = &trace.distances {
            let _ = write!(out, "{}", d[n]);
        }
        for values in &trace.functional_values {
            let _ = write!(out, ",{}", values[n]);
        }
        out.push('\n');
    }
    out
}

/// Gnuplot-ready two-column data: index and distance when a reference is
/// present, otherwise index and residual.
pub fn plot_data(trace: &IterationTrace) -> String {
    let mut out = String::new();
    match &trace.distances {
        Some(d) => {
            let _ = writeln!(out, "# n distance");
            for (n, v) in d.iter().enumerate() {
                let _ = writeln!(out, "{n} {v}");
            }
        }
        None => {
            let _ = writeln!(out, "# n residual");
            for (n, v) in trace.residuals.iter().enumerate() {
                let _ = writeln!(out, "{n} {v}");
            }
        }
    }
    out
}

/// Vector CSV: `index,value` rows over the stored coefficients.
pub fn vector_csv(v: &SeqVector) -> String {
    let mut out = String::from("index,value\n");
    for (i, c) in v.coeffs().iter().enumerate() {
        let _ = writeln!(out, "{},{}", i + 1, c);
    }
    out
}

/// Reads a vector back from `index,value` CSV rows.
pub fn vector_from_csv(text: &str, p: f64) -> Result<SeqVector> {
    let mut coeffs: Vec<f64> = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (idx, val) = line
            .split_once(',')
            .with_context(|| format!("line {}: expected index,value", lineno + 1))?;
        let idx: usize = idx.trim().parse()?;
        let val: f64 = val.trim().parse()?;
        if idx == 0 {
            anyhow::bail!("line {}: indices are 1-based", lineno + 1);
        }
        if coeffs.len() < idx {
            coeffs.resize(idx, 0.0);
        }
        coeffs[idx - 1] = val;
    }
    SeqVector::new(coeffs, p).map_err(|e| anyhow::anyhow!("{e}"))
}

/// Generic two-column CSV used for modulus and center curves.
pub fn curve_csv(x_name: &str, y_name: &str, rows: &[(f64, f64)]) -> String {
    let mut out = format!("{x_name},{y_name}\n");
    for (x, y) in rows {
        let _ = writeln!(out, "{x},{y}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use meanfix_core::iteration::{run_iteration, DEFAULT_REFERENCE_TOL};
    use meanfix_core::operators::Operator;

    #[test]
    fn vector_csv_round_trip_exact_bits() {
        let v = SeqVector::new(vec![0.1, -2.5e-17, 3.0, 0.0, 1.0 / 3.0], 2.0).unwrap();
        let text = vector_csv(&v);
        let back = vector_from_csv(&text, 2.0).unwrap();
        assert_eq!(v, back);
        for (a, b) in v.coeffs().iter().zip(back.coeffs()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn trace_csv_shape() {
        let op = Operator::planar_halving();
        let x = SeqVector::new(vec![1.0, 1.0], 2.0).unwrap();
        let y = SeqVector::new(vec![1.0, 0.0], 2.0).unwrap();
        let trace = run_iteration(&op, &x, 3, Some(&y), &[1, 2], DEFAULT_REFERENCE_TOL).unwrap();
        let text = trace_csv(&trace);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,residual,distance,f1,f2");
        assert_eq!(lines.len(), 5); // header + 4 iterates
        assert!(lines[1].starts_with("0,0.5,1,1,1"));
        // final row: no residual
        assert!(lines[4].starts_with("3,,"));
    }

    #[test]
    fn atomic_write_creates_dirs() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a/b/out.json");
        atomic_write(&path, "{}\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "{}\n");
        // no temp files left behind
        let siblings: Vec<_> = std::fs::read_dir(path.parent().unwrap()).unwrap().collect();
        assert_eq!(siblings.len(), 1);
    }

    #[test]
    fn json_round_trips_full_precision() {
        let v = SeqVector::new(vec![1.0 / 3.0, -2.5e-17], 2.0).unwrap();
        let text = to_json(&v).unwrap();
        let back: SeqVector = serde_json::from_str(&text).unwrap();
        for (a, b) in v.coeffs().iter().zip(back.coeffs()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(back.exponent(), 2.0);
    }
}
