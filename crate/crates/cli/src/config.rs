//! Run configuration: defaults, plain-text config file, command line —
//! later sources override earlier ones.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use oscbif_core::nonlinearity::Nonlinearity;
use oscbif_core::FamilyKind;

/// Flags shared by every subcommand. Everything is optional here so a
/// config file can supply values; validation happens in [`RunConfig`].
#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    /// Plain-text key=value config file; command-line flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Nonlinearity family: sine_u | inverse_sine_u | shifted_inverse_sine |
    /// constant | linear | power.
    #[arg(long)]
    pub family: Option<String>,

    /// Exponent r >= 0 of the power factor.
    #[arg(long)]
    pub r: Option<f64>,

    /// Value of the constant family.
    #[arg(long)]
    pub c: Option<f64>,

    /// Constant multiplier gamma > 0.
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Accumulation point of the shifted family.
    #[arg(long = "shift-alpha")]
    pub shift_alpha: Option<f64>,

    /// Interval length for the exact 1D engine.
    #[arg(long = "L")]
    pub length: Option<f64>,

    /// Space dimension N >= 2 for the radial upper bounds.
    #[arg(long = "N")]
    pub dim: Option<u32>,

    /// Outer annulus radius for the radial upper bounds.
    #[arg(long = "R")]
    pub radius: Option<f64>,

    #[arg(long = "n-min")]
    pub n_min: Option<u32>,

    #[arg(long = "n-max")]
    pub n_max: Option<u32>,

    /// Branch sample points per window.
    #[arg(long)]
    pub grid: Option<usize>,

    /// Relative quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Peak value for `profile`.
    #[arg(long)]
    pub nu: Option<f64>,

    /// Sample count for `profile`.
    #[arg(long)]
    pub samples: Option<usize>,

    /// Verification suite: bounds | hn | bachillerato | oracle.
    #[arg(long)]
    pub suite: Option<String>,

    /// Seed for randomized suites (recorded in the report).
    #[arg(long)]
    pub seed: Option<u64>,

    /// Sequence CSV to analyze (asymptotics); otherwise computed from the
    /// family options.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Output file (CSV or JSON depending on the command).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Optional SVG rendering.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

macro_rules! merge_field {
    ($dst:expr, $src:expr, $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Opts {
    /// Fills unset fields from the config file named by `--config`.
    pub fn with_config_file(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        let file = Self::from_kv_text(&text)?;
        merge_field!(
            self, file, family, r, c, gamma, shift_alpha, length, dim, radius, n_min, n_max,
            grid, tol, nu, samples, suite, seed, input, out, svg
        );
        Ok(self)
    }

    fn from_kv_text(text: &str) -> Result<Self> {
        let mut o = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {}: expected key=value, got `{line}`", lineno + 1);
            };
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let ctx = || format!("config line {}: bad value `{value}` for {key}", lineno + 1);
            match key.as_str() {
                "family" => o.family = Some(value.into()),
                "r" => o.r = Some(value.parse().with_context(ctx)?),
                "c" => o.c = Some(value.parse().with_context(ctx)?),
                "gamma" => o.gamma = Some(value.parse().with_context(ctx)?),
                "shift_alpha" => o.shift_alpha = Some(value.parse().with_context(ctx)?),
                "L" | "l" | "length" => o.length = Some(value.parse().with_context(ctx)?),
                "N" | "n" | "dim" => o.dim = Some(value.parse().with_context(ctx)?),
                "R" | "radius" => o.radius = Some(value.parse().with_context(ctx)?),
                "n_min" => o.n_min = Some(value.parse().with_context(ctx)?),
                "n_max" => o.n_max = Some(value.parse().with_context(ctx)?),
                "grid" => o.grid = Some(value.parse().with_context(ctx)?),
                "tol" => o.tol = Some(value.parse().with_context(ctx)?),
                "nu" => o.nu = Some(value.parse().with_context(ctx)?),
                "samples" => o.samples = Some(value.parse().with_context(ctx)?),
                "suite" => o.suite = Some(value.into()),
                "seed" => o.seed = Some(value.parse().with_context(ctx)?),
                "input" => o.input = Some(PathBuf::from(value)),
                "out" => o.out = Some(PathBuf::from(value)),
                "svg" => o.svg = Some(PathBuf::from(value)),
                other => bail!("config line {}: unknown key `{other}`", lineno + 1),
            }
        }
        Ok(o)
    }
}

/// Where the computation lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval { length: f64 },
    Annulus { dim: u32, radius: f64 },
}

/// Validated configuration with everything a command needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub nl: Nonlinearity<f64>,
    pub family: FamilyKind,
    pub r: f64,
    pub gamma: f64,
    pub domain: Option<Domain>,
    pub n_min: u32,
    pub n_max: u32,
    pub grid: usize,
    pub tol: f64,
    pub nu: Option<f64>,
    pub samples: usize,
    pub suite: Option<String>,
    pub seed: u64,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_opts(opts: &Opts) -> Result<Self> {
        let family_name = opts.family.as_deref().unwrap_or("sine_u");
        let r = opts.r.unwrap_or(0.0);
        let gamma = opts.gamma.unwrap_or(1.0);
        let nl = match family_name {
            "sine_u" => Nonlinearity::sine_u(r)?.with_gamma(gamma)?,
            "inverse_sine_u" => Nonlinearity::inverse_sine_u(r)?.with_gamma(gamma)?,
            "shifted_inverse_sine" => {
                let alpha = opts
                    .shift_alpha
                    .context("shifted_inverse_sine needs --shift-alpha")?;
                Nonlinearity::shifted_inverse_sine(r, alpha)?.with_gamma(gamma)?
            }
            "constant" => Nonlinearity::constant(opts.c.unwrap_or(1.0))?,
            "linear" => Nonlinearity::linear(1.0)?,
            "power" => Nonlinearity::power(r)?,
            other => bail!("unknown family `{other}`"),
        };
        let family = nl.kind();

        let domain = match (opts.length, opts.dim, opts.radius) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                bail!("--L and --N/--R are mutually exclusive")
            }
            (Some(length), None, None) => {
                if length <= 0.0 || !length.is_finite() {
                    bail!("--L must be positive");
                }
                Some(Domain::Interval { length })
            }
            (None, Some(dim), Some(radius)) => {
                if dim < 2 {
                    bail!("--N must be >= 2 (the 1D engine takes --L)");
                }
                if radius <= 0.0 || !radius.is_finite() {
                    bail!("--R must be positive");
                }
                Some(Domain::Annulus { dim, radius })
            }
            (None, Some(_), None) | (None, None, Some(_)) => {
                bail!("the radial engine needs both --N and --R")
            }
            (None, None, None) => None,
        };

        let n_min = opts.n_min.unwrap_or(1);
        let n_max = opts.n_max.unwrap_or(6);
        if n_min == 0 || n_max < n_min {
            bail!("need 1 <= n-min <= n-max, got {n_min}..{n_max}");
        }
        let grid = opts.grid.unwrap_or(129);
        let tol = opts.tol.unwrap_or(1e-9);
        if !(tol > 0.0 && tol < 0.1) {
            bail!("--tol must be in (0, 0.1)");
        }

        Ok(Self {
            nl,
            family,
            r,
            gamma,
            domain,
            n_min,
            n_max,
            grid,
            tol,
            nu: opts.nu,
            samples: opts.samples.unwrap_or(256),
            suite: opts.suite.clone(),
            seed: opts.seed.unwrap_or(42),
            input: opts.input.clone(),
            out: opts.out.clone(),
            svg: opts.svg.clone(),
        })
    }

    pub fn interval(&self) -> Result<f64> {
        match self.domain {
            Some(Domain::Interval { length }) => Ok(length),
            _ => bail!("this command runs the exact 1D engine: pass --L <length>"),
        }
    }

    /// Full echo of the effective configuration, embedded in JSON reports.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("family".into(), self.family.as_str().into());
        m.insert("descriptor".into(), self.nl.to_kv());
        match self.domain {
            Some(Domain::Interval { length }) => {
                m.insert("L".into(), format!("{length:?}"));
            }
            Some(Domain::Annulus { dim, radius }) => {
                m.insert("N".into(), dim.to_string());
                m.insert("R".into(), format!("{radius:?}"));
            }
            None => {}
        }
        m.insert("n_min".into(), self.n_min.to_string());
        m.insert("n_max".into(), self.n_max.to_string());
        m.insert("grid".into(), self.grid.to_string());
        m.insert("tol".into(), format!("{:?}", self.tol));
        if let Some(nu) = self.nu {
            m.insert("nu".into(), format!("{nu:?}"));
        }
        m.insert("samples".into(), self.samples.to_string());
        if let Some(s) = &self.suite {
            m.insert("suite".into(), s.clone());
        }
        m.insert("seed".into(), self.seed.to_string());
        m
    }
}
