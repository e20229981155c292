//! Sweep commands.

use std::collections::BTreeMap;

use ncdisc_core::circle::{
    consistency_defect, fourier_multiplier, fourier_truncation, leibniz_defect, transfer_defect,
    transfer_group_checks, transfer_matrix,
};
use ncdisc_core::diagrams::fit_values;
use ncdisc_core::sphere_quant::{
    berezin_transform_eigenvalue, bms_defect, heat_evolve, laplacian_convergence_defect,
    matrix_harmonics, nc_laplacian_spectrum_for_dimension, norm_defect, spectrum_clusters,
};
use ncdisc_core::symbols::spherical_harmonic;
use ncdisc_core::{Complex64, HarmonicIndex, SphereContext};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{DiffeoSelector, RunConfig, Selectors};
use crate::judge::{self, Judgement};
use crate::table::{Cell, Outcome, Table};
use crate::CliError;

pub const BRACKET_COLUMNS: &[&str] = &[
    "m",
    "beta_m",
    "c_m",
    "defect",
    "norm_Tf",
    "supnorm_f",
    "fitted_p",
];
pub const NORM_COLUMNS: &[&str] = &[
    "f",
    "m",
    "norm_Tf",
    "supnorm_f",
    "gap",
    "fitted_p",
    "r_squared",
];
pub const LAPLACIAN_COLUMNS: &[&str] = &["ell", "mu", "m", "defect", "fitted_p"];
pub const SPECTRUM_COLUMNS: &[&str] = &[
    "ell",
    "expected",
    "cluster_mean",
    "cluster_width",
    "multiplicity",
];
pub const BEREZIN_COLUMNS: &[&str] = &[
    "ell",
    "m",
    "lambda",
    "m_one_minus_lambda",
    "expected",
    "relative_deviation",
];
pub const HEAT_COLUMNS: &[&str] = &[
    "t",
    "trace_re",
    "trace_im",
    "frobenius_norm",
    "coefficient_error",
    "hermiticity_defect",
];
pub const CIRCLE_COLUMNS: &[&str] = &[
    "n",
    "consistency_defect",
    "leibniz_defect",
    "blockdiag_defect",
];
pub const TRANSFER_COLUMNS: &[&str] = &[
    "n",
    "diagram_defect",
    "condition_number",
    "orthogonality_defect",
    "stochastic_defect",
    "is_permutation",
    "invertible",
];

/// Runs `f` over the resolutions in parallel, results in input order.
fn sweep<T: Send>(
    resolutions: &[usize],
    f: impl Fn(usize) -> Result<T, CliError> + Sync,
) -> Result<Vec<T>, CliError> {
    resolutions
        .par_iter()
        .map(|&n| f(n))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn outcome(command: &'static str, table: Table, j: Judgement) -> Outcome {
    let verdict = json!({ "details": j.details, "fitted_exponents": j.exponents });
    Outcome {
        command,
        table,
        pass: j.pass,
        verdict,
    }
}

fn fitted(points: &[(usize, f64)]) -> Cell {
    fit_values(points).map_or(Cell::Empty, |f| Cell::Float(f.exponent))
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match &cfg.selectors {
        Selectors::Bracket { f, g } => sphere_bracket(cfg, *f, *g),
        Selectors::Norm { fs } => sphere_norm(cfg, fs),
        Selectors::Laplacian { ells } => sphere_laplacian(cfg, ells),
        Selectors::Spectrum => sphere_spectrum(cfg),
        Selectors::Berezin { ells } => berezin(cfg, ells),
        Selectors::Heat { initial, times } => heat(cfg, initial, times),
        Selectors::Circle => circle(cfg),
        Selectors::Transfer { psi, f, weighted } => transfer(cfg, *psi, *f, *weighted),
    }
}

pub fn is_linear_pair(f: HarmonicIndex, g: HarmonicIndex) -> bool {
    f.ell() <= 1 && g.ell() <= 1
}

pub fn sphere_bracket(
    cfg: &RunConfig,
    f: HarmonicIndex,
    g: HarmonicIndex,
) -> Result<Outcome, CliError> {
    let (fs, gs) = (spherical_harmonic(f), spherical_harmonic(g));
    let degree = fs
        .degree()
        .max(gs.degree())
        .max(fs.poisson_bracket(&gs).degree()) as usize;
    let rows = sweep(&cfg.resolutions, |m| {
        let ctx = SphereContext::new(m, degree.max(1))?;
        let defect = bms_defect(&fs, &gs, &ctx)?;
        let nd = norm_defect(&fs, &ctx)?;
        let cal = ctx.calibration();
        Ok((m, cal.betam, cal.cm, defect, nd.toeplitz_norm, nd.sup_norm))
    })?;
    let points: Vec<(usize, f64)> = rows.iter().map(|r| (r.0, r.3)).collect();
    let mut table = Table::new(BRACKET_COLUMNS);
    for (i, r) in rows.iter().enumerate() {
        let p = if i + 1 == rows.len() {
            fitted(&points)
        } else {
            Cell::Empty
        };
        table.push(vec![
            r.0.into(),
            r.1.into(),
            r.2.into(),
            r.3.into(),
            r.4.into(),
            r.5.into(),
            p,
        ]);
    }
    let j = judge::bracket(
        &table,
        is_linear_pair(f, g),
        cfg.tol_or(judge::LINEAR_BRACKET_TOL),
    )?;
    Ok(outcome(cfg.command, table, j))
}

pub fn sphere_norm(cfg: &RunConfig, fs: &[HarmonicIndex]) -> Result<Outcome, CliError> {
    let mut table = Table::new(NORM_COLUMNS);
    for &idx in fs {
        let f = spherical_harmonic(idx);
        let rows = sweep(&cfg.resolutions, |m| {
            let nd = norm_defect(&f, &SphereContext::new(m, f.degree().max(1) as usize)?)?;
            Ok((m, nd))
        })?;
        let gaps: Vec<(usize, f64)> = rows.iter().map(|(m, nd)| (*m, nd.gap())).collect();
        let fit = fit_values(&gaps).ok();
        for (i, (m, nd)) in rows.iter().enumerate() {
            let last = i + 1 == rows.len();
            let (p, r2) = match (last, fit) {
                (true, Some(fit)) => (Cell::Float(fit.exponent), Cell::Float(fit.r_squared)),
                _ => (Cell::Empty, Cell::Empty),
            };
            table.push(vec![
                format!("Y{},{}", idx.ell(), idx.mu()).into(),
                (*m).into(),
                nd.toeplitz_norm.into(),
                nd.sup_norm.into(),
                nd.gap().into(),
                p,
                r2,
            ]);
        }
    }
    let j = judge::norm(&table, cfg.tol_or(judge::NORM_BOUND_SLACK))?;
    Ok(outcome(cfg.command, table, j))
}

pub fn sphere_laplacian(cfg: &RunConfig, ells: &[u32]) -> Result<Outcome, CliError> {
    let max_ell = ells.iter().copied().max().unwrap_or(0) as usize;
    let indices: Vec<HarmonicIndex> = ells
        .iter()
        .flat_map(|&l| (-(l as i64)..=l as i64).map(move |mu| (l, mu)))
        .map(|(l, mu)| HarmonicIndex::new(l as i64, mu).expect("mu ranges over -ell..=ell"))
        .collect();
    let per_m = sweep(&cfg.resolutions, |m| {
        let ctx = SphereContext::new(m, max_ell.max(1))?;
        indices
            .iter()
            .map(|&idx| laplacian_convergence_defect(idx, &ctx).map_err(CliError::from))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut table = Table::new(LAPLACIAN_COLUMNS);
    for (k, idx) in indices.iter().enumerate() {
        let points: Vec<(usize, f64)> = cfg
            .resolutions
            .iter()
            .zip(&per_m)
            .map(|(&m, d)| (m, d[k]))
            .collect();
        for (i, &(m, d)) in points.iter().enumerate() {
            let p = if i + 1 == points.len() {
                fitted(&points)
            } else {
                Cell::Empty
            };
            table.push(vec![
                idx.ell().into(),
                (idx.mu() as i64).into(),
                m.into(),
                d.into(),
                p,
            ]);
        }
    }
    let j = judge::laplacian(&table)?;
    Ok(outcome(cfg.command, table, j))
}

pub fn sphere_spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let &[m] = cfg.resolutions.as_slice() else {
        return Err(CliError::Usage("sphere-spectrum takes a single --m".into()));
    };
    let clusters = spectrum_clusters(&nc_laplacian_spectrum_for_dimension(m)?);
    let mut table = Table::new(SPECTRUM_COLUMNS);
    for c in &clusters {
        table.push(vec![
            c.ell.into(),
            c.expected.into(),
            c.mean.into(),
            c.width.into(),
            c.multiplicity.into(),
        ]);
    }
    let j = judge::spectrum(&table, cfg.tol_or(judge::SPECTRUM_TOL))?;
    if table.rows.len() != m {
        return Ok(outcome(
            cfg.command,
            table,
            Judgement {
                pass: false,
                details: json!({ "reason": format!("expected {m} clusters") }),
                exponents: vec![],
            },
        ));
    }
    Ok(outcome(cfg.command, table, j))
}

pub fn berezin(cfg: &RunConfig, ells: &[u32]) -> Result<Outcome, CliError> {
    let max_ell = ells.iter().copied().max().unwrap_or(1);
    let per_m = sweep(&cfg.resolutions, |m| {
        let ctx = SphereContext::new(m, max_ell.max(1) as usize)?;
        ells.iter()
            .map(|&l| berezin_transform_eigenvalue(l, &ctx).map_err(CliError::from))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut table = Table::new(BEREZIN_COLUMNS);
    for (k, &ell) in ells.iter().enumerate() {
        let expected = (ell * (ell + 1)) as f64;
        for (&m, lambdas) in cfg.resolutions.iter().zip(&per_m) {
            let lambda = lambdas[k];
            let scaled = m as f64 * (1.0 - lambda);
            table.push(vec![
                ell.into(),
                m.into(),
                lambda.into(),
                scaled.into(),
                expected.into(),
                ((scaled - expected).abs() / expected).into(),
            ]);
        }
    }
    let j = judge::berezin(&table, cfg.tol_or(judge::BEREZIN_TOL))?;
    Ok(outcome(cfg.command, table, j))
}

pub fn heat(
    cfg: &RunConfig,
    initial: &[(HarmonicIndex, f64)],
    times: &[f64],
) -> Result<Outcome, CliError> {
    let &[m] = cfg.resolutions.as_slice() else {
        return Err(CliError::Usage("heat takes a single --m".into()));
    };
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage(
            "heat times must be strictly increasing".into(),
        ));
    }
    let ctx = SphereContext::new(m, m.saturating_sub(1).max(1))?;
    let basis = matrix_harmonics(&ctx)?;
    let mut coefficients: BTreeMap<HarmonicIndex, Complex64> = BTreeMap::new();
    for &(idx, c) in initial {
        *coefficients.entry(idx).or_default() += c;
    }
    let mut table = Table::new(HEAT_COLUMNS);
    for &t in times {
        let a = heat_evolve(&coefficients, &basis, t)?;
        let measured = basis.coefficients(&a)?;
        let coefficient_error = basis
            .iter()
            .map(|(idx, _)| {
                let ell = idx.ell() as f64;
                let want = coefficients.get(&idx).copied().unwrap_or_default()
                    * (-t * ell * (ell + 1.0)).exp();
                (measured.get(&idx).copied().unwrap_or_default() - want).norm()
            })
            .fold(0.0, f64::max);
        let trace = a.trace();
        let frobenius = a.frobenius_norm();
        let hermiticity = a.hermiticity_defect();
        table.push(vec![
            t.into(),
            trace.re.into(),
            trace.im.into(),
            frobenius.into(),
            coefficient_error.into(),
            hermiticity.into(),
        ]);
    }
    let j = judge::heat(&table, cfg.tol_or(judge::HEAT_TOL))?;
    Ok(outcome(cfg.command, table, j))
}

/// `max` of the truncation's commutator defect and its derivation defect
/// on a fixed multiplier.
pub fn blockdiag_defect(n: usize) -> Result<f64, CliError> {
    let t = fourier_truncation(n, 1)?;
    let a = fourier_multiplier(
        &[
            (1, Complex64::new(1.0, 0.0)),
            (-2, Complex64::new(0.5, 0.0)),
        ],
        t.ambient_modes(),
    );
    Ok(t.commutator_defect().max(t.derivation_defect(&a)?))
}

pub fn circle(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rows = sweep(&cfg.resolutions, |n| {
        Ok((
            n,
            consistency_defect(f64::sin, f64::cos, n)?,
            leibniz_defect(f64::sin, f64::sin, n)?,
            blockdiag_defect(n)?,
        ))
    })?;
    let mut table = Table::new(CIRCLE_COLUMNS);
    for r in &rows {
        table.push(vec![r.0.into(), r.1.into(), r.2.into(), r.3.into()]);
    }
    let parts = judge::circle(&table, cfg.tol_or(judge::CIRCLE_TOL))?;
    let pass = parts.iter().all(|(_, j)| j.pass);
    let verdict = json!(parts
        .iter()
        .map(|(id, j)| (
            id.to_string(),
            json!({ "pass": j.pass, "details": j.details, "fitted_exponents": j.exponents })
        ))
        .collect::<serde_json::Map<_, _>>());
    Ok(Outcome {
        command: cfg.command,
        table,
        pass,
        verdict,
    })
}

pub fn transfer(
    cfg: &RunConfig,
    psi: DiffeoSelector,
    f: crate::config::CircleFunction,
    weighted: bool,
) -> Result<Outcome, CliError> {
    let rows = sweep(&cfg.resolutions, |n| {
        let op = transfer_matrix(psi.at(n), n, weighted)?;
        Ok((
            transfer_defect(&op, |t| f.eval(t))?,
            transfer_group_checks(&op),
        ))
    })?;
    let mut table = Table::new(TRANSFER_COLUMNS);
    for (d, r) in &rows {
        table.push(vec![
            r.n.into(),
            (*d).into(),
            r.condition_number.into(),
            r.orthogonality_defect.into(),
            r.stochastic_defect.into(),
            r.is_permutation.into(),
            r.invertible.into(),
        ]);
    }
    let rotation = matches!(psi, DiffeoSelector::GridRotation(_));
    let mut j = judge::transfer(&table, rotation, cfg.tol_or(judge::TRANSFER_TOL))?;
    if let Some(obj) = j.details.as_object_mut() {
        obj.insert("diffeo".into(), json!(psi.to_string()));
        obj.insert("function".into(), json!(f.to_string()));
        obj.insert("weighted".into(), json!(weighted));
    }
    Ok(outcome(cfg.command, table, j))
}
