//! Command-line flags and their merge with a `key = value` config file.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use epr_geometry::geometry::DEFAULT_WINDOW_THRESHOLD;
use epr_geometry::params::KeyValueConfig;
use epr_geometry::Params;

#[derive(Debug, Parser)]
#[command(name = "epr-geometry", version, about = "Effective geometry of two-particle EPR scalar-field states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Airy amplitude: Q, conformal factors, the z → y → x chain and horizons.
    AiryExample,
    /// Static sinusoidal R²: G, g11, metric singularities and valid intervals.
    StaticExample,
    /// Both residual suites at three resolutions plus a convergence order.
    Verify,
    /// Guidance trajectories of the static model.
    Trajectories(TrajectoryArgs),
    /// Horizons and causal regions of −α dt² + dx²/α.
    Horizons,
}

#[derive(Debug, Clone, Args)]
pub struct TrajectoryArgs {
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub x1: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub x2: f64,
    /// Parameter length to integrate over.
    #[arg(long, default_value_t = 5.0)]
    pub span: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long = "big-m", global = true, allow_negative_numbers = true)]
    pub big_m: Option<f64>,
    #[arg(long = "k-const", global = true, allow_negative_numbers = true)]
    pub k_const: Option<f64>,
    #[arg(long = "c-const", global = true, allow_negative_numbers = true)]
    pub c_const: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub c2: Option<f64>,
    #[arg(long = "grid-min", global = true, allow_negative_numbers = true)]
    pub grid_min: Option<f64>,
    #[arg(long = "grid-max", global = true, allow_negative_numbers = true)]
    pub grid_max: Option<f64>,
    #[arg(long = "grid-n", global = true)]
    pub grid_n: Option<usize>,
    /// Output directory (created if missing).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Exit with status 1 when any residual check fails.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Bound on |2My| defining the validity window.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub threshold: Option<f64>,
    /// Also write SVG line plots.
    #[arg(long, global = true)]
    pub plots: bool,
    /// `key = value` file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: Params,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_n: usize,
    pub out: PathBuf,
    pub format: Format,
    pub strict: bool,
    pub threshold: f64,
    pub plots: bool,
    pub config_file: Option<PathBuf>,
}

pub const DEFAULT_GRID_N: usize = 401;

impl RunConfig {
    /// Flags over config file over defaults.
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let mut cfg = RunConfig {
            params: Params::natural_units(),
            grid_min: None,
            grid_max: None,
            grid_n: DEFAULT_GRID_N,
            out: PathBuf::from("out"),
            format: Format::Csv,
            strict: false,
            threshold: DEFAULT_WINDOW_THRESHOLD,
            plots: false,
            config_file: args.config.clone(),
        };
        if let Some(path) = &args.config {
            let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            let file: KeyValueConfig = text.parse().with_context(|| format!("parsing config {}", path.display()))?;
            let rest = file.apply_params(&mut cfg.params).with_context(|| format!("config {}", path.display()))?;
            for key in rest {
                let value = file.get(key).unwrap_or_default();
                cfg.apply_setting(key, value).with_context(|| format!("config {}", path.display()))?;
            }
        }
        cfg.apply_flags(args)?;
        cfg.check()?;
        Ok(cfg)
    }

    fn apply_setting(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.trim().parse().map_err(|_| anyhow::anyhow!("bad value {v:?} for {key}"))
        }
        match key {
            "grid_min" => self.grid_min = Some(num(key, value)?),
            "grid_max" => self.grid_max = Some(num(key, value)?),
            "grid_n" => self.grid_n = num(key, value)?,
            "out" => self.out = PathBuf::from(value.trim()),
            "format" => self.format = Format::parse(value.trim()).ok_or_else(|| anyhow::anyhow!("bad format {value:?}"))?,
            "strict" => self.strict = num(key, value)?,
            "threshold" => self.threshold = num(key, value)?,
            "plots" => self.plots = num(key, value)?,
            _ => bail!("unknown key {key:?}"),
        }
        Ok(())
    }

    fn apply_flags(&mut self, a: &CommonArgs) -> Result<()> {
        let pairs = [
            ("hbar", a.hbar),
            ("c", a.c),
            ("m", a.m),
            ("big_m", a.big_m),
            ("k_const", a.k_const),
            ("c_const", a.c_const),
            ("a", a.a),
            ("c1", a.c1),
            ("c2", a.c2),
        ];
        for (key, v) in pairs {
            if let Some(v) = v {
                self.params.set(key, v)?;
            }
        }
        if a.grid_min.is_some() {
            self.grid_min = a.grid_min;
        }
        if a.grid_max.is_some() {
            self.grid_max = a.grid_max;
        }
        if let Some(n) = a.grid_n {
            self.grid_n = n;
        }
        if let Some(o) = &a.out {
            self.out = o.clone();
        }
        if let Some(f) = a.format {
            self.format = f;
        }
        if let Some(t) = a.threshold {
            self.threshold = t;
        }
        self.strict |= a.strict;
        self.plots |= a.plots;
        Ok(())
    }

    fn check(&self) -> Result<()> {
        let violations = self.params.validate();
        if !violations.is_empty() {
            let msgs: Vec<String> = violations.iter().map(|v| format!("{}: {}", v.field, v.message)).collect();
            bail!("invalid parameters: {}", msgs.join("; "));
        }
        if self.grid_n < 3 {
            bail!("grid_n must be at least 3");
        }
        if let (Some(lo), Some(hi)) = (self.grid_min, self.grid_max) {
            if !(lo < hi) {
                bail!("grid_min must be below grid_max");
            }
        }
        for v in [self.grid_min, self.grid_max].into_iter().flatten() {
            if !v.is_finite() {
                bail!("grid bounds must be finite");
            }
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            bail!("threshold must lie in (0, 1)");
        }
        Ok(())
    }

    /// Grid bounds, falling back to the command's default window.
    pub fn window(&self, default: (f64, f64)) -> Result<(f64, f64)> {
        let lo = self.grid_min.unwrap_or(default.0);
        let hi = self.grid_max.unwrap_or(default.1);
        if !(lo < hi) {
            bail!("grid window [{lo}, {hi}] is empty");
        }
        Ok((lo, hi))
    }

    /// Every effective setting as `(key, value)` text, for output headers.
    pub fn entries(&self, command: &str) -> Vec<(String, String)> {
        let mut out = vec![("command".to_string(), command.to_string())];
        out.extend(self.params.entries().iter().map(|(k, v)| (k.to_string(), v.to_string())));
        let opt = |v: Option<f64>| v.map_or_else(|| "default".to_string(), |v| v.to_string());
        out.push(("grid_min".into(), opt(self.grid_min)));
        out.push(("grid_max".into(), opt(self.grid_max)));
        out.push(("grid_n".into(), self.grid_n.to_string()));
        out.push(("threshold".into(), self.threshold.to_string()));
        out.push(("strict".into(), self.strict.to_string()));
        out.push(("config".into(), self.config_file.as_ref().map_or_else(|| "none".into(), |p| p.display().to_string())));
        out
    }
}
