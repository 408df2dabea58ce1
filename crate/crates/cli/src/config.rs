//! Run configuration: flags win over `EDL_*` environment variables, which
//! win over a `key=value` config file, which wins over built-in defaults.
//! Clap resolves the first two layers.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use edl_core::verify::{OutputFormat, RunConfig};

#[derive(Args, Debug, Clone, Default)]
pub struct ConfigArgs {
    /// Seed for Monte Carlo estimates
    #[arg(long, global = true, env = "EDL_SEED")]
    pub seed: Option<u64>,

    /// Independent random streams per estimate
    #[arg(long, global = true, env = "EDL_SHARDS")]
    pub shards: Option<usize>,

    /// Monte Carlo sample count
    #[arg(long, global = true, env = "EDL_SAMPLES")]
    pub samples: Option<usize>,

    /// Gauss-Legendre nodes per dimension and piece
    #[arg(long, global = true, env = "EDL_QUAD_NODES")]
    pub quad_nodes: Option<usize>,

    /// Relative tolerance for deterministic comparisons
    #[arg(long, global = true, env = "EDL_REL_TOL")]
    pub rel_tol: Option<f64>,

    /// Standard errors allowed for Monte Carlo comparisons
    #[arg(long, global = true, env = "EDL_SIGMA_TOL")]
    pub sigma_tol: Option<f64>,

    /// Output format: text, json or csv
    #[arg(long = "format", global = true, env = "EDL_FORMAT")]
    pub output_format: Option<OutputFormat>,

    /// Config file with key=value lines
    #[arg(long, global = true, env = "EDL_CONFIG")]
    pub config: Option<PathBuf>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key=value, got `{}`", i + 1, raw.trim());
        };
        out.insert(k.trim().replace('-', "_").to_ascii_lowercase(), v.trim().to_string());
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>().map_err(|e| anyhow::anyhow!("config key `{key}`: {e}"))
}

fn apply_file(mut cfg: RunConfig, entries: &BTreeMap<String, String>) -> Result<RunConfig> {
    for (k, v) in entries {
        match k.as_str() {
            "seed" => cfg.seed = parse_value(k, v)?,
            "shards" => cfg.shards = parse_value(k, v)?,
            "samples" => cfg.samples = parse_value(k, v)?,
            "quad_nodes" => cfg.quad_nodes = parse_value(k, v)?,
            "rel_tol" => cfg.rel_tol = parse_value(k, v)?,
            "sigma_tol" => cfg.sigma_tol = parse_value(k, v)?,
            "output_format" | "format" => cfg.output_format = parse_value(k, v)?,
            other => bail!("unknown config key `{other}`"),
        }
    }
    Ok(cfg)
}

fn read_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config file {}", path.display()))?;
    parse_config_file(&text).with_context(|| format!("in config file {}", path.display()))
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg = apply_file(cfg, &read_file(path)?)?;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.shards {
            cfg.shards = v;
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.quad_nodes {
            cfg.quad_nodes = v;
        }
        if let Some(v) = self.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = self.sigma_tol {
            cfg.sigma_tol = v;
        }
        if let Some(v) = self.output_format {
            cfg.output_format = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_layer_below_flags() {
        let entries = parse_config_file("# run\nseed = 7\nquad-nodes=16\nformat=json\n").unwrap();
        let cfg = apply_file(RunConfig::default(), &entries).unwrap();
        assert_eq!((cfg.seed, cfg.quad_nodes, cfg.output_format), (7, 16, OutputFormat::Json));
        let args = ConfigArgs { seed: Some(9), ..ConfigArgs::default() };
        assert_eq!(args.resolve().unwrap().seed, 9);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        let entries = parse_config_file("colour = red").unwrap();
        assert!(apply_file(RunConfig::default(), &entries).is_err());
        assert!(parse_config_file("seed 4").is_err());
    }
}
