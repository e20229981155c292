//! Aggregate verdict bundle over the CSVs of a full run.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::commands::{
    BEREZIN_COLUMNS, BRACKET_COLUMNS, CIRCLE_COLUMNS, HEAT_COLUMNS, LAPLACIAN_COLUMNS,
    NORM_COLUMNS, SPECTRUM_COLUMNS, TRANSFER_COLUMNS,
};
use crate::judge::{self, FittedExponent, Judgement};
use crate::table::{Cell, Table};
use crate::CliError;

pub const SCHEMA: &str = "ncdisc-report/1";
pub const MIN_THEOREMS: usize = 6;

pub const BRACKET_CSV: &str = "sphere_bracket.csv";
pub const BRACKET_LINEAR_CSV: &str = "sphere_bracket_linear.csv";
pub const NORM_CSV: &str = "sphere_norm.csv";
pub const LAPLACIAN_CSV: &str = "sphere_laplacian.csv";
pub const BEREZIN_CSV: &str = "berezin.csv";
pub const HEAT_CSV: &str = "heat.csv";
pub const CIRCLE_CSV: &str = "circle.csv";
pub const TRANSFER_ROTATION_CSV: &str = "transfer_rotation.csv";
pub const TRANSFER_DIFFEO_CSV: &str = "transfer_sine.csv";
pub const SPECTRUM_DIMENSIONS: &[usize] = &[2, 8, 16, 32];

pub fn spectrum_csv(m: usize) -> String {
    format!("sphere_spectrum_m{m}.csv")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremEntry {
    pub id: String,
    pub claim: String,
    pub sources: Vec<String>,
    pub pass: bool,
    pub fitted_exponents: Vec<FittedExponent>,
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub pass: bool,
    pub theorems: Vec<TheoremEntry>,
}

impl Report {
    /// Structural checks beyond what deserialization enforces.
    pub fn validate(&self) -> Result<(), String> {
        if self.schema != SCHEMA {
            return Err(format!("schema `{}` is not `{SCHEMA}`", self.schema));
        }
        if self.theorems.len() < MIN_THEOREMS {
            return Err(format!(
                "{} theorem entries, need at least {MIN_THEOREMS}",
                self.theorems.len()
            ));
        }
        let mut ids = BTreeSet::new();
        for t in &self.theorems {
            if t.id.is_empty() || t.claim.is_empty() || t.sources.is_empty() {
                return Err(format!(
                    "theorem entry `{}` has an empty id, claim or source list",
                    t.id
                ));
            }
            if !ids.insert(t.id.as_str()) {
                return Err(format!("duplicate theorem id `{}`", t.id));
            }
            if !t.details.is_object() {
                return Err(format!("theorem `{}`: details must be an object", t.id));
            }
        }
        if self.pass != self.theorems.iter().all(|t| t.pass) {
            return Err("top-level pass disagrees with the theorem entries".into());
        }
        Ok(())
    }
}

/// Parses and validates a report document.
pub fn validate_json(text: &str) -> Result<Report, String> {
    let report: Report = serde_json::from_str(text).map_err(|e| e.to_string())?;
    report.validate()?;
    Ok(report)
}

/// Loads a CSV written by a command, checking its header.
pub fn load_table(path: &Path, columns: &[&'static str]) -> Result<Table, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let header = reader
        .headers()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        .clone();
    if header.iter().ne(columns.iter().copied()) {
        return Err(CliError::Usage(format!(
            "{}: header {:?} does not match {:?}",
            path.display(),
            header.iter().collect::<Vec<_>>(),
            columns
        )));
    }
    let mut table = Table::new(columns);
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        table.push(
            record
                .iter()
                .map(|s| {
                    if s.is_empty() {
                        Cell::Empty
                    } else {
                        Cell::Text(s.to_string())
                    }
                })
                .collect(),
        );
    }
    Ok(table)
}

fn entry(id: &str, claim: &str, sources: Vec<String>, j: Judgement) -> TheoremEntry {
    let details = if j.details.is_object() {
        j.details
    } else {
        serde_json::json!({ "value": j.details })
    };
    TheoremEntry {
        id: id.into(),
        claim: claim.into(),
        sources,
        pass: j.pass,
        fitted_exponents: j.exponents,
        details,
    }
}

/// Rebuilds every verdict from the CSVs in `dir`.
pub fn build(dir: &Path) -> Result<Report, CliError> {
    let load = |name: &str, columns: &[&'static str]| load_table(&dir.join(name), columns);
    let mut theorems = Vec::new();

    let t = load(NORM_CSV, NORM_COLUMNS)?;
    theorems.push(entry(
        "bms-norm",
        "‖T_m f‖ ≤ ‖f‖_∞ and ‖f‖_∞ - ‖T_m f‖ = O(1/m)",
        vec![NORM_CSV.into()],
        judge::norm(&t, judge::NORM_BOUND_SLACK)?,
    ));

    let t = load(BRACKET_CSV, BRACKET_COLUMNS)?;
    theorems.push(entry(
        "bms-bracket",
        "‖im[T_m f, T_m g] - T_m {f, g}‖ = O(1/m) after calibration",
        vec![BRACKET_CSV.into()],
        judge::bracket(&t, false, judge::LINEAR_BRACKET_TOL)?,
    ));

    let t = load(BRACKET_LINEAR_CSV, BRACKET_COLUMNS)?;
    theorems.push(entry(
        "bms-bracket-linear",
        "the calibrated bracket of linear symbols is exact at every m",
        vec![BRACKET_LINEAR_CSV.into()],
        judge::bracket(&t, true, judge::LINEAR_BRACKET_TOL)?,
    ));

    let mut spectrum_pass = true;
    let mut per_m = serde_json::Map::new();
    let mut sources = Vec::new();
    for &m in SPECTRUM_DIMENSIONS {
        let name = spectrum_csv(m);
        let t = load(&name, SPECTRUM_COLUMNS)?;
        let mut j = judge::spectrum(&t, judge::SPECTRUM_TOL)?;
        j.pass &= t.rows.len() == m;
        spectrum_pass &= j.pass;
        per_m.insert(
            format!("m={m}"),
            serde_json::json!({ "pass": j.pass, "details": j.details }),
        );
        sources.push(name);
    }
    theorems.push(entry(
        "laplacian-spectrum",
        "the noncommutative Laplacian has eigenvalues ℓ(ℓ+1) with multiplicity 2ℓ+1 for ℓ ≤ m-1",
        sources,
        Judgement {
            pass: spectrum_pass,
            details: Value::Object(per_m),
            exponents: vec![],
        },
    ));

    let t = load(BEREZIN_CSV, BEREZIN_COLUMNS)?;
    theorems.push(entry(
        "berezin-expansion",
        "the Berezin transform acts on degree-ℓ harmonics as 1 - ℓ(ℓ+1)/m + O(1/m²)",
        vec![BEREZIN_CSV.into()],
        judge::berezin(&t, judge::BEREZIN_TOL)?,
    ));

    let t = load(LAPLACIAN_CSV, LAPLACIAN_COLUMNS)?;
    theorems.push(entry(
        "laplacian-convergence",
        "σ_m(Δ_m T_m Y) → ΔY at rate O(1/m) for ℓ ≤ 3",
        vec![LAPLACIAN_CSV.into()],
        judge::laplacian(&t)?,
    ));

    let t = load(HEAT_CSV, HEAT_COLUMNS)?;
    theorems.push(entry(
        "heat-flow",
        "exp(-tΔ_m) damps each matrix harmonic by exp(-tℓ(ℓ+1)) and preserves the trace",
        vec![HEAT_CSV.into()],
        judge::heat(&t, judge::HEAT_TOL)?,
    ));

    let t = load(CIRCLE_CSV, CIRCLE_COLUMNS)?;
    let claims = [
        (
            "euler-consistency",
            "the forward Euler difference is a first-order consistent discretization of d/dθ",
        ),
        (
            "euler-leibniz",
            "the forward Euler difference violates the Leibniz rule at every n",
        ),
        (
            "block-diagonal",
            "Fourier truncation commutes with d/dθ exactly and is strongly structure preserving",
        ),
    ];
    for (id, j) in judge::circle(&t, judge::CIRCLE_TOL)? {
        let claim = claims.iter().find(|c| c.0 == id).map_or("", |c| c.1);
        theorems.push(entry(id, claim, vec![CIRCLE_CSV.into()], j));
    }

    let t = load(TRANSFER_ROTATION_CSV, TRANSFER_COLUMNS)?;
    theorems.push(entry(
        "transfer-rotation",
        "grid rotations discretize to permutation matrices that are orthogonal, stochastic and invertible",
        vec![TRANSFER_ROTATION_CSV.into()],
        judge::transfer(&t, true, judge::TRANSFER_TOL)?,
    ));

    let t = load(TRANSFER_DIFFEO_CSV, TRANSFER_COLUMNS)?;
    theorems.push(entry(
        "transfer-diffeo",
        "the transfer operator of θ ↦ θ + 0.3 sin θ is faithful and its diagram defect converges spectrally",
        vec![TRANSFER_DIFFEO_CSV.into()],
        judge::transfer(&t, false, judge::TRANSFER_TOL)?,
    ));

    let pass = theorems.iter().all(|t| t.pass);
    let report = Report {
        schema: SCHEMA.into(),
        pass,
        theorems,
    };
    report.validate().map_err(CliError::Usage)?;
    Ok(report)
}
