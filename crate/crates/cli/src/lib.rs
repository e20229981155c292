//! `ncdisc` command-line front end.
//!
//! Exit codes: 0 when every verdict passes, 2 when a numerical verdict
//! fails, 1 on usage or configuration errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod judge;
pub mod report;
pub mod table;

use config::{
    parse_circle_function, parse_coefficient, parse_diffeo, parse_harmonic, parse_time,
    CircleFunction, DiffeoSelector, Format, RunConfig, Selectors,
};
use ncdisc_core::HarmonicIndex;
use table::Outcome;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "NCDISC_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => EXIT_FAIL,
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }
}

impl From<ncdisc_core::Error> for CliError {
    fn from(e: ncdisc_core::Error) -> Self {
        use ncdisc_core::Error as E;
        match e {
            E::Contract(_)
            | E::Dimension(_)
            | E::InvalidIndex { .. }
            | E::InsufficientExactness { .. }
            | E::SizeGuard(_)
            | E::Unsupported(_)
            | E::NonInvertible(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Output file (default standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override of the command's primary tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Calibrated bracket defect ‖im[T f, T g] - T{f, g}‖ over m.
    SphereBracket {
        #[arg(long, value_parser = parse_harmonic, default_value = "Y2,1")]
        f: HarmonicIndex,
        #[arg(long, value_parser = parse_harmonic, default_value = "Y3,-2")]
        g: HarmonicIndex,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        m: Vec<usize>,
    },
    /// Toeplitz norm against sup norm over m.
    SphereNorm {
        #[arg(long, value_parser = parse_harmonic, value_delimiter = ';', default_value = "Y1,0;Y2,0;Y2,2")]
        f: Vec<HarmonicIndex>,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        m: Vec<usize>,
    },
    /// Laplacian convergence defect for every Y_ℓμ with ℓ in the list.
    SphereLaplacian {
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        ell: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        m: Vec<usize>,
    },
    /// Eigenvalue clusters of the noncommutative Laplacian.
    SphereSpectrum {
        #[arg(long, default_value_t = 16)]
        m: usize,
    },
    /// Berezin transform eigenvalues against 1 - ℓ(ℓ+1)/m.
    Berezin {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        ell: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        m: Vec<usize>,
    },
    /// Heat flow exp(-tΔ_m) on a combination of matrix harmonics.
    Heat {
        #[arg(long, default_value_t = 8)]
        m: usize,
        /// `Y<ell>,<mu>=<value>`, repeatable.
        #[arg(long = "init", value_parser = parse_coefficient, default_values = ["Y0,0=1", "Y1,0=1", "Y2,0=0.5"])]
        init: Vec<(HarmonicIndex, f64)>,
        #[arg(long, value_parser = parse_time, value_delimiter = ',', default_value = "0,0.25,0.5,1,2")]
        t: Vec<f64>,
    },
    /// Euler, Leibniz and block-diagonal defects on the circle.
    Circle {
        #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256")]
        n: Vec<usize>,
    },
    /// Transfer operator of a circle diffeomorphism.
    Transfer {
        /// `rotation:<k>` (2πk/n), `shift:<radians>` or `sine:<amplitude>`.
        #[arg(long, value_parser = parse_diffeo, default_value = "sine:0.3")]
        psi: DiffeoSelector,
        /// Test function: `cos` or `poisson` (1/(1.25 - cos θ)).
        #[arg(long, value_parser = parse_circle_function, default_value = "poisson")]
        f: CircleFunction,
        /// Include the half-density weight J^{1/2}.
        #[arg(long)]
        weighted: bool,
        #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
        n: Vec<usize>,
    },
    /// Per-theorem verdict bundle over the CSVs of a full run.
    Report {
        #[arg(long)]
        dir: PathBuf,
    },
    /// Every sweep with default settings, then the report.
    All {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "ncdisc",
    version,
    about = "Structure-preserving discretization sweeps"
)]
struct Top {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

fn config_for(command: Command, output: &OutputArgs) -> Result<RunConfig, CliError> {
    let (name, resolutions, selectors) = match command {
        Command::SphereBracket { f, g, m } => ("sphere-bracket", m, Selectors::Bracket { f, g }),
        Command::SphereNorm { f, m } => ("sphere-norm", m, Selectors::Norm { fs: f }),
        Command::SphereLaplacian { ell, m } => {
            ("sphere-laplacian", m, Selectors::Laplacian { ells: ell })
        }
        Command::SphereSpectrum { m } => ("sphere-spectrum", vec![m], Selectors::Spectrum),
        Command::Berezin { ell, m } => ("berezin", m, Selectors::Berezin { ells: ell }),
        Command::Heat { m, init, t } => (
            "heat",
            vec![m],
            Selectors::Heat {
                initial: init,
                times: t,
            },
        ),
        Command::Circle { n } => ("circle", n, Selectors::Circle),
        Command::Transfer {
            psi,
            f,
            weighted,
            n,
        } => ("transfer", n, Selectors::Transfer { psi, f, weighted }),
        Command::Report { .. } | Command::All { .. } => unreachable!("handled before config"),
    };
    RunConfig::new(
        name,
        resolutions,
        selectors,
        output.out.clone(),
        output.format,
        output.tol,
    )
}

fn write_outcome(o: &Outcome, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => o.table.write_csv(&mut buf)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &o.to_json()).map_err(std::io::Error::from)?;
            buf.push(b'\n');
        }
    }
    emit(&buf, out)
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn report_bytes(r: &report::Report) -> Result<Vec<u8>, CliError> {
    let mut buf = serde_json::to_vec_pretty(r).map_err(std::io::Error::from)?;
    buf.push(b'\n');
    Ok(buf)
}

/// The sweeps of `all`, keyed by output file.
pub fn default_runs() -> Vec<(String, RunConfig)> {
    let idx = |l, mu| HarmonicIndex::new(l, mu).expect("valid default harmonic");
    let ms = vec![8, 16, 32, 64];
    let mk = |name: &'static str, res: Vec<usize>, sel: Selectors| {
        RunConfig::new(name, res, sel, None, Format::Csv, None).expect("default configs are valid")
    };
    let mut runs = vec![
        (
            report::BRACKET_CSV.to_string(),
            mk(
                "sphere-bracket",
                ms.clone(),
                Selectors::Bracket {
                    f: idx(2, 1),
                    g: idx(3, -2),
                },
            ),
        ),
        (
            report::BRACKET_LINEAR_CSV.to_string(),
            mk(
                "sphere-bracket",
                ms.clone(),
                Selectors::Bracket {
                    f: idx(1, 0),
                    g: idx(1, 1),
                },
            ),
        ),
        (
            report::NORM_CSV.to_string(),
            mk(
                "sphere-norm",
                ms.clone(),
                Selectors::Norm {
                    fs: vec![idx(1, 0), idx(2, 0), idx(2, 2)],
                },
            ),
        ),
        (
            report::LAPLACIAN_CSV.to_string(),
            mk(
                "sphere-laplacian",
                ms.clone(),
                Selectors::Laplacian {
                    ells: vec![0, 1, 2, 3],
                },
            ),
        ),
        (
            report::BEREZIN_CSV.to_string(),
            mk(
                "berezin",
                ms,
                Selectors::Berezin {
                    ells: vec![1, 2, 3],
                },
            ),
        ),
        (
            report::HEAT_CSV.to_string(),
            mk(
                "heat",
                vec![8],
                Selectors::Heat {
                    initial: vec![(idx(0, 0), 1.0), (idx(1, 0), 1.0), (idx(2, 0), 0.5)],
                    times: vec![0.0, 0.25, 0.5, 1.0, 2.0],
                },
            ),
        ),
        (
            report::CIRCLE_CSV.to_string(),
            mk("circle", vec![16, 32, 64, 128, 256], Selectors::Circle),
        ),
        (
            report::TRANSFER_ROTATION_CSV.to_string(),
            mk(
                "transfer",
                vec![8, 16, 32, 64],
                Selectors::Transfer {
                    psi: DiffeoSelector::GridRotation(3),
                    f: CircleFunction::Cos,
                    weighted: false,
                },
            ),
        ),
        (
            report::TRANSFER_DIFFEO_CSV.to_string(),
            mk(
                "transfer",
                vec![16, 32, 64],
                Selectors::Transfer {
                    psi: DiffeoSelector::Sine(0.3),
                    f: CircleFunction::Poisson,
                    weighted: false,
                },
            ),
        ),
    ];
    for &m in report::SPECTRUM_DIMENSIONS {
        runs.push((
            report::spectrum_csv(m),
            mk("sphere-spectrum", vec![m], Selectors::Spectrum),
        ));
    }
    runs
}

fn run_all(dir: &Path, out: Option<&Path>) -> Result<i32, CliError> {
    fs::create_dir_all(dir)?;
    for (file, cfg) in default_runs() {
        let outcome = commands::execute(&cfg)?;
        write_outcome(&outcome, Format::Csv, Some(&dir.join(&file)))?;
        eprintln!("{} {file}", if outcome.pass { "pass" } else { "FAIL" });
    }
    let r = report::build(dir)?;
    let bytes = report_bytes(&r)?;
    fs::write(dir.join("report.json"), &bytes)?;
    if let Some(path) = out {
        fs::write(path, &bytes)?;
    }
    Ok(if r.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Usage(format!("{THREADS_ENV}: {e}"))),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
    }
}

fn dispatch(top: Top) -> Result<i32, CliError> {
    let out = top.output.out.as_deref();
    match top.command {
        Command::All { dir } => run_all(&dir, out),
        Command::Report { dir } => {
            let r = report::build(&dir)?;
            emit(&report_bytes(&r)?, out)?;
            Ok(if r.pass { EXIT_PASS } else { EXIT_FAIL })
        }
        command => {
            let cfg = config_for(command, &top.output)?;
            let outcome = commands::execute(&cfg)?;
            write_outcome(&outcome, cfg.format, cfg.out.as_deref())?;
            if !outcome.pass {
                eprintln!("{}: verdict failed: {}", cfg.command, outcome.verdict);
            }
            Ok(if outcome.pass { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let top = match Top::try_parse_from(args) {
        Ok(top) => top,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    let result = thread_cap().and_then(|cap| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cap {
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
        std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            pool.install(|| dispatch(top))
        }))
        .unwrap_or_else(|_| {
            Err(CliError::Numeric(
                "internal error while running the command".into(),
            ))
        })
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ncdisc: {e}");
            e.exit_code()
        }
    }
}
