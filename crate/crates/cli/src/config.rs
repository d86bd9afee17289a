//! Flat key-value experiment configs.
//!
//! The format is INI-style without sections: one `key = value` per line,
//! `#` comments, blank lines ignored. Command-line flags override config
//! values field by field. A parsed config re-serializes to an equivalent
//! config (round-trip), which keeps experiment files copy-pasteable from
//! report headers.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};

/// Every knob an experiment can set. All fields optional; the subcommands
/// pick what they need and fill in their own defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    /// Operator name from the corpus (parameters after a colon).
    pub op: Option<String>,
    /// Multi-index weights.
    pub alpha: Option<Vec<f64>>,
    /// Exponent: the inequality power for `certify`, the ambient norm
    /// exponent for the probes.
    pub p: Option<f64>,
    /// Start vector (symbolic `e3`/`zero` or a comma list).
    pub start: Option<String>,
    /// Reference point for distance diagnostics.
    pub reference: Option<String>,
    /// Iteration count.
    pub n: Option<usize>,
    /// Window length for monotone extraction.
    pub n0: Option<usize>,
    /// Sample count for seeded Monte Carlo.
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    /// Truncation dimension.
    pub dim: Option<usize>,
    /// Generic diagnostic tolerance.
    pub tol: Option<f64>,
    /// Margin tolerance for certification.
    pub margin_tol: Option<f64>,
    /// 1-based coordinate functional indices recorded along traces.
    pub functionals: Option<Vec<usize>>,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub plot_data: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parses the flat `key = value` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let ctx = || format!("line {}: key {key:?}", lineno + 1);
            match key {
                "op" => cfg.op = Some(value.to_string()),
                "alpha" => cfg.alpha = Some(parse_f64_list(value).with_context(ctx)?),
                "p" => cfg.p = Some(value.parse().with_context(ctx)?),
                "start" => cfg.start = Some(value.to_string()),
                "ref" => cfg.reference = Some(value.to_string()),
                "n" => cfg.n = Some(value.parse().with_context(ctx)?),
                "n0" => cfg.n0 = Some(value.parse().with_context(ctx)?),
                "samples" => cfg.samples = Some(value.parse().with_context(ctx)?),
                "seed" => cfg.seed = Some(value.parse().with_context(ctx)?),
                "dim" => cfg.dim = Some(value.parse().with_context(ctx)?),
                "tol" => cfg.tol = Some(value.parse().with_context(ctx)?),
                "margin-tol" => cfg.margin_tol = Some(value.parse().with_context(ctx)?),
                "functionals" => cfg.functionals = Some(parse_usize_list(value).with_context(ctx)?),
                "json" => cfg.json = Some(PathBuf::from(value)),
                "csv" => cfg.csv = Some(PathBuf::from(value)),
                "plot-data" => cfg.plot_data = Some(PathBuf::from(value)),
                other => bail!("line {}: unknown key {other:?}", lineno + 1),
            }
        }
        Ok(cfg)
    }

    /// Serializes set fields back to the flat format.
    pub fn to_ini(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        if let Some(v) = &self.op {
            kv("op", v.clone());
        }
        if let Some(v) = &self.alpha {
            kv("alpha", join_f64(v));
        }
        if let Some(v) = self.p {
            kv("p", v.to_string());
        }
        if let Some(v) = &self.start {
            kv("start", v.clone());
        }
        if let Some(v) = &self.reference {
            kv("ref", v.clone());
        }
        if let Some(v) = self.n {
            kv("n", v.to_string());
        }
        if let Some(v) = self.n0 {
            kv("n0", v.to_string());
        }
        if let Some(v) = self.samples {
            kv("samples", v.to_string());
        }
        if let Some(v) = self.seed {
            kv("seed", v.to_string());
        }
        if let Some(v) = self.dim {
            kv("dim", v.to_string());
        }
        if let Some(v) = self.tol {
            kv("tol", v.to_string());
        }
        if let Some(v) = self.margin_tol {
            kv("margin-tol", v.to_string());
        }
        if let Some(v) = &self.functionals {
            let list: Vec<String> = v.iter().map(|i| i.to_string()).collect();
            kv("functionals", list.join(","));
        }
        if let Some(v) = &self.json {
            kv("json", v.display().to_string());
        }
        if let Some(v) = &self.csv {
            kv("csv", v.display().to_string());
        }
        if let Some(v) = &self.plot_data {
            kv("plot-data", v.display().to_string());
        }
        out
    }

    /// Field-wise override: values set in `self` win over `base`.
    pub fn merge_over(self, base: Self) -> Self {
        Self {
            op: self.op.or(base.op),
            alpha: self.alpha.or(base.alpha),
            p: self.p.or(base.p),
            start: self.start.or(base.start),
            reference: self.reference.or(base.reference),
            n: self.n.or(base.n),
            n0: self.n0.or(base.n0),
            samples: self.samples.or(base.samples),
            seed: self.seed.or(base.seed),
            dim: self.dim.or(base.dim),
            tol: self.tol.or(base.tol),
            margin_tol: self.margin_tol.or(base.margin_tol),
            functionals: self.functionals.or(base.functionals),
            json: self.json.or(base.json),
            csv: self.csv.or(base.csv),
            plot_data: self.plot_data.or(base.plot_data),
        }
    }
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| anyhow!("bad number {t:?}: {e}"))
        })
        .collect()
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| anyhow!("bad index {t:?}: {e}"))
        })
        .collect()
}

pub fn join_f64(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    parts.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "\
# an experiment
op = example
alpha = 0.5,0.5
p = 2
start = e3
ref = zero
n = 50
seed = 7
dim = 64
margin-tol = 1e-10
json = out/report.json
";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.op.as_deref(), Some("example"));
        assert_eq!(cfg.alpha, Some(vec![0.5, 0.5]));
        assert_eq!(cfg.margin_tol, Some(1e-10));
        let echoed = ExperimentConfig::parse(&cfg.to_ini()).unwrap();
        assert_eq!(cfg, echoed);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(ExperimentConfig::parse("bogus = 1").is_err());
        assert!(ExperimentConfig::parse("just a line").is_err());
        assert!(ExperimentConfig::parse("p = not-a-number").is_err());
    }

    #[test]
    fn flags_override_config() {
        let file = ExperimentConfig {
            op: Some("identity".into()),
            n: Some(10),
            seed: Some(1),
            ..Default::default()
        };
        let flags = ExperimentConfig {
            op: Some("example".into()),
            ..Default::default()
        };
        let merged = flags.merge_over(file);
        assert_eq!(merged.op.as_deref(), Some("example"));
        assert_eq!(merged.n, Some(10));
        assert_eq!(merged.seed, Some(1));
    }
}
