//! Diagram defects, power-law rate fits and category-relative verdicts.

use serde::Serialize;

use crate::{Error, Result};

/// Defects at or below this are treated as exactly zero.
pub const EXACT_THRESHOLD: f64 = 1e-12;
/// Smallest `r²` for a fitted decay to count.
pub const MIN_R_SQUARED: f64 = 0.9;

/// One resolution of a defect series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DefectPoint {
    pub resolution: usize,
    pub defect: f64,
    /// `| ‖π_n x‖ - ‖x‖ |`.
    pub norm_limit_gap: f64,
    /// `‖x - s_n π_n x‖`.
    pub section_gap: Option<f64>,
}

fn check_value(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::Contract(format!("{name} must be finite and nonnegative, got {v}")))
    }
}

impl DefectPoint {
    pub fn new(resolution: usize, defect: f64) -> Result<Self> {
        Ok(Self { resolution, defect: check_value("defect", defect)?, norm_limit_gap: 0.0, section_gap: None })
    }

    pub fn with_norm_limit_gap(mut self, gap: f64) -> Result<Self> {
        self.norm_limit_gap = check_value("norm-limit gap", gap)?;
        Ok(self)
    }

    pub fn with_section_gap(mut self, gap: f64) -> Result<Self> {
        self.section_gap = Some(check_value("section gap", gap)?);
        Ok(self)
    }
}

/// Power law `defect ≈ C · n^{-p}`.
///
/// When every defect is at most [`EXACT_THRESHOLD`] the series is exact:
/// `exponent` is `+∞` and `log_c`, `r_squared` carry no information.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub log_c: f64,
    pub exponent: f64,
    pub r_squared: f64,
    pub exact: bool,
    /// Points that entered the regression.
    pub used_points: usize,
}

impl RateFit {
    /// `p > 0` with `r² ≥ 0.9`, or exact.
    pub fn decays(&self) -> bool {
        self.exact || (self.exponent > 0.0 && self.r_squared >= MIN_R_SQUARED)
    }
}

/// Least-squares fit of `log defect` against `log resolution`.
pub fn fit_rate(series: &[DefectPoint]) -> Result<RateFit> {
    fit_values(&series.iter().map(|p| (p.resolution, p.defect)).collect::<Vec<_>>())
}

/// [`fit_rate`] on bare `(resolution, value)` pairs.
pub fn fit_values(points: &[(usize, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientData { usable: points.len() });
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) || points[0].0 == 0 {
        return Err(Error::Contract("resolutions must be positive and strictly increasing".into()));
    }
    for &(_, v) in points {
        check_value("defect", v)?;
    }
    if points.iter().all(|&(_, v)| v <= EXACT_THRESHOLD) {
        return Ok(RateFit {
            log_c: f64::NEG_INFINITY,
            exponent: f64::INFINITY,
            r_squared: 1.0,
            exact: true,
            used_points: 0,
        });
    }
    let usable: Vec<(f64, f64)> =
        points.iter().filter(|&&(_, v)| v > EXACT_THRESHOLD).map(|&(n, v)| ((n as f64).ln(), v.ln())).collect();
    if usable.len() < 3 {
        return Err(Error::InsufficientData { usable: usable.len() });
    }
    let k = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / k;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = usable.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(RateFit { log_c: intercept, exponent: -slope, r_squared, exact: false, used_points: usable.len() })
}

/// Decay of a value sequence: exact, or a passing fit, or a decaying
/// prefix followed by a smaller (or exact) point.
fn decays(points: &[(usize, f64)]) -> bool {
    if !points.is_empty() && points.iter().all(|&(_, v)| v <= EXACT_THRESHOLD) {
        return true;
    }
    if fit_values(points).map(|f| f.decays()).unwrap_or(false) {
        return true;
    }
    match points {
        [.., prev, last] if points.len() > 3 => {
            (last.1 < prev.1 || last.1 <= EXACT_THRESHOLD) && decays(&points[..points.len() - 1])
        }
        _ => false,
    }
}

/// The category in which a discretized arrow is judged, with the per-resolution
/// defects of the discrete law that the category requires.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Category {
    LinearSpaces,
    /// Discrete Leibniz-rule defects of the derivation.
    DifferentialAlgebras { leibniz_defects: Vec<f64> },
    /// Discrete Jacobi-identity defects of the bracket.
    LieAlgebras { jacobi_defects: Vec<f64> },
}

impl Category {
    pub fn name(&self) -> &'static str {
        match self {
            Category::LinearSpaces => "linear-spaces",
            Category::DifferentialAlgebras { .. } => "differential-algebras",
            Category::LieAlgebras { .. } => "lie-algebras",
        }
    }

    fn law_defects(&self) -> &[f64] {
        match self {
            Category::LinearSpaces => &[],
            Category::DifferentialAlgebras { leibniz_defects } => leibniz_defects,
            Category::LieAlgebras { jacobi_defects } => jacobi_defects,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preservation {
    /// The diagram defect does not decay.
    NotConsistent,
    /// The discrete maps break the category's law at some resolution.
    NotStructurePreserving,
    /// The diagram commutes asymptotically.
    Consistent,
    /// The diagram commutes at every resolution.
    StronglyStructurePreserving,
}

/// Verdict of [`classify`] together with the thresholds that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub category: &'static str,
    pub preservation: Preservation,
    pub faithful: Option<bool>,
    pub convergent: Option<bool>,
    pub fit: Option<RateFit>,
    pub exact_threshold: f64,
    pub min_r_squared: f64,
}

/// Judges a defect series within a declared category.
///
/// `faithfulness` is the invertibility report of the discrete arrows,
/// passed through as a flag. Convergence is judged on section gaps and is
/// `None` unless every point carries one.
pub fn classify(series: &[DefectPoint], category: &Category, faithfulness: Option<bool>) -> Result<Verdict> {
    if series.is_empty() {
        return Err(Error::InsufficientData { usable: 0 });
    }
    let defects: Vec<(usize, f64)> = series.iter().map(|p| (p.resolution, p.defect)).collect();
    let law_holds = category.law_defects().iter().all(|&d| d <= EXACT_THRESHOLD);
    let preservation = if !law_holds {
        Preservation::NotStructurePreserving
    } else if defects.iter().all(|&(_, d)| d <= EXACT_THRESHOLD) {
        Preservation::StronglyStructurePreserving
    } else if decays(&defects) {
        Preservation::Consistent
    } else {
        Preservation::NotConsistent
    };
    let convergent = series
        .iter()
        .map(|p| p.section_gap.map(|g| (p.resolution, g)))
        .collect::<Option<Vec<_>>>()
        .map(|gaps| decays(&gaps));
    Ok(Verdict {
        category: category.name(),
        preservation,
        faithful: faithfulness,
        convergent,
        fit: fit_rate(series).ok(),
        exact_threshold: EXACT_THRESHOLD,
        min_r_squared: MIN_R_SQUARED,
    })
}
