//! Run configuration and selector parsing.

use std::fmt;
use std::path::PathBuf;

use ncdisc_core::circle::Diffeo;
use ncdisc_core::HarmonicIndex;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Test function pushed through a transfer operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircleFunction {
    Cos,
    /// `1 / (1.25 - cos θ)`.
    Poisson,
}

impl CircleFunction {
    pub fn eval(self, theta: f64) -> f64 {
        match self {
            CircleFunction::Cos => theta.cos(),
            CircleFunction::Poisson => 1.0 / (1.25 - theta.cos()),
        }
    }
}

impl fmt::Display for CircleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CircleFunction::Cos => "cos",
            CircleFunction::Poisson => "poisson",
        })
    }
}

/// Diffeomorphism selector: `rotation:<k>` rotates by `2πk/n` at every
/// resolution, `shift:<radians>` and `sine:<amplitude>` are fixed maps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiffeoSelector {
    GridRotation(i64),
    Shift(f64),
    Sine(f64),
}

impl DiffeoSelector {
    pub fn at(self, n: usize) -> Diffeo {
        match self {
            DiffeoSelector::GridRotation(k) => Diffeo::grid_rotation(k, n),
            DiffeoSelector::Shift(shift) => Diffeo::Rotation { shift },
            DiffeoSelector::Sine(amplitude) => Diffeo::SinePerturbation { amplitude },
        }
    }
}

impl fmt::Display for DiffeoSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffeoSelector::GridRotation(k) => write!(f, "rotation:{k}"),
            DiffeoSelector::Shift(s) => write!(f, "shift:{s}"),
            DiffeoSelector::Sine(a) => write!(f, "sine:{a}"),
        }
    }
}

/// Command-specific selectors.
#[derive(Clone, Debug, PartialEq)]
pub enum Selectors {
    Bracket {
        f: HarmonicIndex,
        g: HarmonicIndex,
    },
    Norm {
        fs: Vec<HarmonicIndex>,
    },
    Laplacian {
        ells: Vec<u32>,
    },
    Spectrum,
    Berezin {
        ells: Vec<u32>,
    },
    Heat {
        initial: Vec<(HarmonicIndex, f64)>,
        times: Vec<f64>,
    },
    Circle,
    Transfer {
        psi: DiffeoSelector,
        f: CircleFunction,
        weighted: bool,
    },
}

/// Validated configuration of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    /// Strictly increasing.
    pub resolutions: Vec<usize>,
    pub selectors: Selectors,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub tol: Option<f64>,
}

impl RunConfig {
    pub fn new(
        command: &'static str,
        resolutions: Vec<usize>,
        selectors: Selectors,
        out: Option<PathBuf>,
        format: Format,
        tol: Option<f64>,
    ) -> Result<Self, CliError> {
        if resolutions.is_empty() {
            return Err(CliError::Usage("resolution list is empty".into()));
        }
        if resolutions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage(format!(
                "resolution list {resolutions:?} is not strictly increasing"
            )));
        }
        if let Some(t) = tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage(format!(
                    "--tol must be finite and positive, got {t}"
                )));
            }
        }
        Ok(Self {
            command,
            resolutions,
            selectors,
            out,
            format,
            tol,
        })
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub fn parse_harmonic(s: &str) -> Result<HarmonicIndex, String> {
    let body = s
        .strip_prefix('Y')
        .ok_or_else(|| format!("harmonic selector `{s}` must look like Y<ell>,<mu>"))?;
    let (l, mu) = body
        .split_once(',')
        .ok_or_else(|| format!("harmonic selector `{s}` is missing the `,<mu>` part"))?;
    let l: i64 = l
        .trim()
        .parse()
        .map_err(|_| format!("bad ell in harmonic selector `{s}`"))?;
    let mu: i64 = mu
        .trim()
        .parse()
        .map_err(|_| format!("bad mu in harmonic selector `{s}`"))?;
    HarmonicIndex::new(l, mu).map_err(|e| format!("harmonic selector `{s}`: {e}"))
}

/// `Y<ell>,<mu>=<coefficient>`.
pub fn parse_coefficient(s: &str) -> Result<(HarmonicIndex, f64), String> {
    let (h, c) = s
        .split_once('=')
        .ok_or_else(|| format!("coefficient `{s}` must look like Y<ell>,<mu>=<value>"))?;
    let c: f64 = c
        .trim()
        .parse()
        .map_err(|_| format!("bad value in coefficient `{s}`"))?;
    if !c.is_finite() {
        return Err(format!("coefficient `{s}` is not finite"));
    }
    Ok((parse_harmonic(h)?, c))
}

pub fn parse_diffeo(s: &str) -> Result<DiffeoSelector, String> {
    let (kind, value) = s
        .split_once(':')
        .ok_or_else(|| format!("diffeo selector `{s}` must look like <kind>:<value>"))?;
    let bad = || format!("bad value in diffeo selector `{s}`");
    match kind {
        "rotation" => Ok(DiffeoSelector::GridRotation(
            value.parse().map_err(|_| bad())?,
        )),
        "shift" => value
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(DiffeoSelector::Shift)
            .ok_or_else(bad),
        "sine" => {
            let a: f64 = value.parse().map_err(|_| bad())?;
            if a.is_finite() && a.abs() < 1.0 {
                Ok(DiffeoSelector::Sine(a))
            } else {
                Err(format!(
                    "sine amplitude must satisfy |a| < 1, got `{value}`"
                ))
            }
        }
        _ => Err(format!(
            "unknown diffeo kind `{kind}` (expected rotation, shift or sine)"
        )),
    }
}

pub fn parse_circle_function(s: &str) -> Result<CircleFunction, String> {
    match s {
        "cos" => Ok(CircleFunction::Cos),
        "poisson" => Ok(CircleFunction::Poisson),
        _ => Err(format!(
            "unknown circle function `{s}` (expected cos or poisson)"
        )),
    }
}

pub fn parse_time(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
        _ => Err(format!("heat time `{s}` must be finite and nonnegative")),
    }
}
