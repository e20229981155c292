//! Verdicts computed from sweep tables.
//!
//! Every judge reads only the table, so a command and `report` (which
//! reloads the CSV) reach the same verdict.

use std::collections::BTreeMap;

use ncdisc_core::diagrams::{
    classify, fit_values, Category, DefectPoint, Preservation, RateFit, EXACT_THRESHOLD,
    MIN_R_SQUARED,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::table::{parse_float, Cell, Table};
use crate::CliError;

/// Smallest fitted exponent accepted as an `O(1/n)` rate.
pub const MIN_EXPONENT: f64 = 0.9;
/// First-order window for the Euler consistency fit.
pub const EULER_WINDOW: (f64, f64) = (0.9, 1.1);
pub const LINEAR_BRACKET_TOL: f64 = 1e-10;
pub const NORM_BOUND_SLACK: f64 = 1e-8;
pub const SPECTRUM_TOL: f64 = 1e-6;
pub const BEREZIN_TOL: f64 = 0.1;
pub const HEAT_TOL: f64 = 1e-8;
pub const CIRCLE_TOL: f64 = 1e-12;
pub const TRANSFER_TOL: f64 = 1e-12;
/// Required defect reduction per resolution step for spectral transfer.
pub const TRANSFER_DECAY_FACTOR: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedExponent {
    pub label: String,
    /// `None` for an exact series.
    pub exponent: Option<f64>,
    pub r_squared: Option<f64>,
    pub exact: bool,
}

impl FittedExponent {
    fn new(label: impl Into<String>, fit: &RateFit) -> Self {
        Self {
            label: label.into(),
            exponent: (!fit.exact).then_some(fit.exponent),
            r_squared: (!fit.exact).then_some(fit.r_squared),
            exact: fit.exact,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Judgement {
    pub pass: bool,
    pub details: Value,
    pub exponents: Vec<FittedExponent>,
}

fn column(table: &Table, name: &str) -> Result<usize, CliError> {
    table
        .columns
        .iter()
        .position(|c| *c == name)
        .ok_or_else(|| CliError::Usage(format!("table has no column `{name}`")))
}

fn num(table: &Table, row: usize, name: &str) -> Result<f64, CliError> {
    let c = column(table, name)?;
    match &table.rows[row][c] {
        Cell::Float(v) => Ok(*v),
        Cell::Int(v) => Ok(*v as f64),
        Cell::Text(s) => parse_float(s)
            .ok_or_else(|| CliError::Usage(format!("column `{name}`: `{s}` is not a number"))),
        other => Err(CliError::Usage(format!(
            "column `{name}`: expected a number, found {other:?}"
        ))),
    }
}

fn int(table: &Table, row: usize, name: &str) -> Result<i64, CliError> {
    let v = num(table, row, name)?;
    if v.fract() == 0.0 && v.is_finite() {
        Ok(v as i64)
    } else {
        Err(CliError::Usage(format!(
            "column `{name}`: {v} is not an integer"
        )))
    }
}

fn flag(table: &Table, row: usize, name: &str) -> Result<bool, CliError> {
    let c = column(table, name)?;
    match &table.rows[row][c] {
        Cell::Bool(b) => Ok(*b),
        Cell::Text(s) if s == "true" => Ok(true),
        Cell::Text(s) if s == "false" => Ok(false),
        other => Err(CliError::Usage(format!(
            "column `{name}`: expected true/false, found {other:?}"
        ))),
    }
}

fn text(table: &Table, row: usize, name: &str) -> Result<String, CliError> {
    let c = column(table, name)?;
    Ok(table.rows[row][c].to_csv())
}

fn series(table: &Table, rows: &[usize], x: &str, y: &str) -> Result<Vec<(usize, f64)>, CliError> {
    rows.iter()
        .map(|&r| {
            let n = int(table, r, x)?;
            let n = usize::try_from(n)
                .map_err(|_| CliError::Usage(format!("column `{x}`: negative resolution")))?;
            Ok((n, num(table, r, y)?))
        })
        .collect()
}

fn all_rows(table: &Table) -> Vec<usize> {
    (0..table.rows.len()).collect()
}

/// Rows grouped by a key column, groups in first-appearance order.
fn groups(table: &Table, keys: &[&str]) -> Result<Vec<(String, Vec<usize>)>, CliError> {
    let mut order: Vec<String> = Vec::new();
    let mut map: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for r in 0..table.rows.len() {
        let key = keys
            .iter()
            .map(|k| text(table, r, k))
            .collect::<Result<Vec<_>, _>>()?
            .join(",");
        if !map.contains_key(&key) {
            order.push(key.clone());
        }
        map.entry(key).or_default().push(r);
    }
    Ok(order
        .into_iter()
        .map(|k| (k.clone(), map.remove(&k).unwrap_or_default()))
        .collect())
}

fn fit_or_reason(points: &[(usize, f64)]) -> Result<RateFit, String> {
    fit_values(points).map_err(|e| e.to_string())
}

fn meets_rate(fit: &RateFit) -> bool {
    fit.exact || fit.exponent >= MIN_EXPONENT
}

pub fn bracket(table: &Table, linear: bool, tol: f64) -> Result<Judgement, CliError> {
    let pts = series(table, &all_rows(table), "m", "defect")?;
    let monotone = pts.windows(2).all(|w| w[1].1 < w[0].1);
    let max_defect = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(match fit_or_reason(&pts) {
        Err(reason) => Judgement {
            pass: false,
            details: json!({ "reason": reason }),
            exponents: vec![],
        },
        Ok(fit) => {
            let pass = if linear {
                max_defect <= tol
            } else {
                meets_rate(&fit)
            };
            let details = if linear {
                json!({ "max_defect": max_defect, "tolerance": tol })
            } else {
                json!({ "min_exponent": MIN_EXPONENT, "monotone": monotone, "max_defect": max_defect })
            };
            Judgement {
                pass,
                details,
                exponents: vec![FittedExponent::new("defect", &fit)],
            }
        }
    })
}

pub fn norm(table: &Table, slack: f64) -> Result<Judgement, CliError> {
    let mut pass = true;
    let mut per_symbol = Vec::new();
    let mut exponents = Vec::new();
    for (f, rows) in groups(table, &["f"])? {
        let mut bound_ok = true;
        for &r in &rows {
            bound_ok &= num(table, r, "norm_Tf")? <= num(table, r, "supnorm_f")? + slack;
        }
        let gaps = series(table, &rows, "m", "gap")?;
        let rate_ok = match fit_or_reason(&gaps) {
            Ok(fit) => {
                exponents.push(FittedExponent::new(format!("{f} gap"), &fit));
                fit.exact || (fit.exponent >= MIN_EXPONENT && fit.r_squared >= MIN_R_SQUARED)
            }
            Err(reason) => {
                per_symbol.push(json!({ "f": f, "reason": reason }));
                false
            }
        };
        per_symbol.push(json!({ "f": f, "upper_bound": bound_ok, "gap_rate": rate_ok }));
        pass &= bound_ok && rate_ok;
    }
    let details = json!({ "symbols": per_symbol, "min_exponent": MIN_EXPONENT, "min_r_squared": MIN_R_SQUARED, "bound_slack": slack });
    Ok(Judgement {
        pass,
        details,
        exponents,
    })
}

pub fn laplacian(table: &Table) -> Result<Judgement, CliError> {
    let mut pass = true;
    let mut failing = Vec::new();
    let mut exponents = Vec::new();
    for (key, rows) in groups(table, &["ell", "mu"])? {
        let pts = series(table, &rows, "m", "defect")?;
        match fit_or_reason(&pts) {
            Ok(fit) => {
                exponents.push(FittedExponent::new(format!("Y{key}"), &fit));
                if !meets_rate(&fit) {
                    pass = false;
                    failing.push(format!("Y{key}"));
                }
            }
            Err(_) => {
                pass = false;
                failing.push(format!("Y{key}"));
            }
        }
    }
    Ok(Judgement {
        pass,
        details: json!({ "min_exponent": MIN_EXPONENT, "failing": failing }),
        exponents,
    })
}

pub fn spectrum(table: &Table, tol: f64) -> Result<Judgement, CliError> {
    let mut pass = !table.rows.is_empty();
    let mut total = 0i64;
    let mut worst_width = 0.0f64;
    let mut worst_offset = 0.0f64;
    for r in 0..table.rows.len() {
        let ell = int(table, r, "ell")?;
        let multiplicity = int(table, r, "multiplicity")?;
        let width = num(table, r, "cluster_width")?;
        let offset = (num(table, r, "cluster_mean")? - num(table, r, "expected")?).abs();
        total += multiplicity;
        worst_width = worst_width.max(width);
        worst_offset = worst_offset.max(offset);
        pass &= ell == r as i64 && multiplicity == 2 * ell + 1 && width <= tol && offset <= tol;
    }
    let n = table.rows.len() as i64;
    pass &= total == n * n;
    let details = json!({ "clusters": n, "worst_width": worst_width, "worst_mean_offset": worst_offset, "tolerance": tol });
    Ok(Judgement {
        pass,
        details,
        exponents: vec![],
    })
}

pub fn berezin(table: &Table, tol: f64) -> Result<Judgement, CliError> {
    let mut pass = true;
    let mut per_ell = Vec::new();
    let mut exponents = Vec::new();
    let mut below_one = true;
    for (ell, rows) in groups(table, &["ell"])? {
        for &r in &rows {
            below_one &= num(table, r, "lambda")? < 1.0;
        }
        let dev = series(table, &rows, "m", "relative_deviation")?;
        let last = dev.last().map_or(f64::INFINITY, |p| p.1);
        let decays = dev.windows(2).all(|w| w[1].1 < w[0].1);
        if let Ok(fit) = fit_values(&dev) {
            exponents.push(FittedExponent::new(
                format!("ell={ell} relative deviation"),
                &fit,
            ));
        }
        pass &= last <= tol && decays;
        per_ell.push(json!({ "ell": ell, "deviation_at_largest_m": last, "decays": decays }));
    }
    let details = json!({
        "per_ell": per_ell,
        "tolerance": tol,
        "lambda_below_one": below_one,
        "expansion": if below_one { "I(f) = f - (1/m) Δf + O(1/m²) with Δ ≥ 0" } else { "mixed sign" },
    });
    Ok(Judgement {
        pass,
        details,
        exponents,
    })
}

pub fn heat(table: &Table, tol: f64) -> Result<Judgement, CliError> {
    let rows = all_rows(table);
    if rows.is_empty() {
        return Ok(Judgement {
            pass: false,
            details: json!({ "reason": "no time steps" }),
            exponents: vec![],
        });
    }
    let trace0 = num(table, 0, "trace_re")?;
    let mut worst_coefficient = 0.0f64;
    let mut worst_trace = 0.0f64;
    let mut monotone = true;
    let mut previous = f64::INFINITY;
    for &r in &rows {
        worst_coefficient = worst_coefficient.max(num(table, r, "coefficient_error")?);
        worst_trace = worst_trace
            .max((num(table, r, "trace_re")? - trace0).abs())
            .max(num(table, r, "trace_im")?.abs());
        let norm = num(table, r, "frobenius_norm")?;
        monotone &= norm <= previous + tol;
        previous = norm;
    }
    let pass = worst_coefficient <= tol && worst_trace <= tol * trace0.abs().max(1.0) && monotone;
    let details = json!({
        "worst_coefficient_error": worst_coefficient,
        "worst_trace_drift": worst_trace,
        "norm_nonincreasing": monotone,
        "tolerance": tol,
    });
    Ok(Judgement {
        pass,
        details,
        exponents: vec![],
    })
}

/// Euler consistency, Euler Leibniz failure and block-diagonal exactness.
pub fn circle(table: &Table, tol: f64) -> Result<Vec<(&'static str, Judgement)>, CliError> {
    let rows = all_rows(table);
    let consistency = series(table, &rows, "n", "consistency_defect")?;
    let leibniz = series(table, &rows, "n", "leibniz_defect")?;
    let blockdiag = series(table, &rows, "n", "blockdiag_defect")?;
    let points = |s: &[(usize, f64)]| -> Result<Vec<DefectPoint>, CliError> {
        s.iter()
            .map(|&(n, d)| DefectPoint::new(n, d).map_err(CliError::from))
            .collect()
    };
    let euler_points = points(&consistency)?;
    let leibniz_values: Vec<f64> = leibniz.iter().map(|p| p.1).collect();

    let euler = match (
        fit_or_reason(&consistency),
        classify(&euler_points, &Category::LinearSpaces, None),
    ) {
        (Ok(fit), Ok(v)) => Judgement {
            pass: (EULER_WINDOW.0..=EULER_WINDOW.1).contains(&fit.exponent)
                && v.preservation == Preservation::Consistent,
            details: json!({ "window": [EULER_WINDOW.0, EULER_WINDOW.1], "verdict": v }),
            exponents: vec![FittedExponent::new("consistency", &fit)],
        },
        (fit, v) => Judgement {
            pass: false,
            details: json!({ "reason": fit.err().or(v.err().map(|e| e.to_string())) }),
            exponents: vec![],
        },
    };

    let at16 = leibniz.iter().find(|p| p.0 == 16).map(|p| p.1);
    let leibniz_verdict = classify(
        &euler_points,
        &Category::DifferentialAlgebras {
            leibniz_defects: leibniz_values.clone(),
        },
        None,
    )?;
    let leibniz_judgement = Judgement {
        pass: leibniz_values.iter().all(|&d| d > 0.0)
            && at16.is_none_or(|d| d > 1e-4)
            && leibniz_verdict.preservation == Preservation::NotStructurePreserving,
        details: json!({ "min_defect": leibniz_values.iter().copied().fold(f64::INFINITY, f64::min), "at_n16": at16, "verdict": leibniz_verdict }),
        exponents: fit_values(&leibniz)
            .ok()
            .map(|f| FittedExponent::new("leibniz", &f))
            .into_iter()
            .collect(),
    };

    let block_points = points(&blockdiag)?;
    let block_values: Vec<f64> = blockdiag.iter().map(|p| p.1).collect();
    let block_verdict = classify(
        &block_points,
        &Category::DifferentialAlgebras {
            leibniz_defects: block_values.clone(),
        },
        None,
    )?;
    let worst = block_values.iter().copied().fold(0.0, f64::max);
    let block = Judgement {
        pass: worst <= tol
            && block_verdict.preservation == Preservation::StronglyStructurePreserving,
        details: json!({ "max_defect": worst, "tolerance": tol, "verdict": block_verdict }),
        exponents: vec![],
    };
    Ok(vec![
        ("euler-consistency", euler),
        ("euler-leibniz", leibniz_judgement),
        ("block-diagonal", block),
    ])
}

pub fn transfer(table: &Table, grid_rotation: bool, tol: f64) -> Result<Judgement, CliError> {
    let rows = all_rows(table);
    let mut invertible = !rows.is_empty();
    for &r in &rows {
        invertible &= flag(table, r, "invertible")?;
    }
    if grid_rotation {
        let mut group = true;
        for &r in &rows {
            group &= flag(table, r, "is_permutation")?
                && num(table, r, "orthogonality_defect")? <= tol
                && num(table, r, "stochastic_defect")? <= tol;
        }
        let details = json!({ "permutation_orthogonal_stochastic": group, "invertible": invertible, "tolerance": tol });
        return Ok(Judgement {
            pass: group && invertible,
            details,
            exponents: vec![],
        });
    }
    let defects = series(table, &rows, "n", "diagram_defect")?;
    let ratios: Vec<Option<f64>> = defects
        .windows(2)
        .map(|w| (w[1].1 > EXACT_THRESHOLD).then(|| w[0].1 / w[1].1))
        .collect();
    let decays = ratios
        .iter()
        .all(|r| r.is_none_or(|r| r >= TRANSFER_DECAY_FACTOR));
    let points: Vec<DefectPoint> = defects
        .iter()
        .map(|&(n, d)| DefectPoint::new(n, d))
        .collect::<Result<_, _>>()?;
    let verdict = classify(&points, &Category::LinearSpaces, Some(invertible))?;
    let details = json!({
        "step_ratios": ratios,
        "required_ratio": TRANSFER_DECAY_FACTOR,
        "invertible": invertible,
        "verdict": verdict,
    });
    let exponents = fit_values(&defects)
        .ok()
        .map(|f| FittedExponent::new("diagram", &f))
        .into_iter()
        .collect();
    Ok(Judgement {
        pass: decays && invertible,
        details,
        exponents,
    })
}
