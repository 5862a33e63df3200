//! The `mflab` command line.
//!
//! Exit codes: 0 on success (or a true verdict), 1 when a verification
//! fails — a false lift verdict, a vanishing determinant, a rank short of
//! the dimension — and 2 for usage errors and contract violations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use mflab_core::lifts::{lift_precision_bound, lifted_g_coefficients};
use mflab_core::spanning::{default_rank_columns, read_records, JsonlSweepWriter, SweepOptions};
use mflab_core::{
    conjecture_sweep, eisenstein_g, f_coefficients, f_generator_series, f_rank_check, g_coefficients_at,
    g_generator_series, rankin_cohen, shimura_lift, theta, verify_theorem1_with, EntrySource, Error,
    GeneratorSpec, HalfWeight, LiftReport, OddFundamentalDiscriminant, QSeries, RankCheck, Rational,
    SweepRecord, VerifyOptions,
};

#[derive(Parser, Debug)]
#[command(name = "mflab", version, about = "Exact q-expansions, Rankin–Cohen brackets and Shimura lifts")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Worker threads (defaults to all cores).
    #[arg(long, env = "MFLAB_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Closed-form coefficient sums.
    Closed,
    /// Products of q-series.
    Series,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// θ(z) = Σ q^{n²}.
    Theta {
        #[arg(long)]
        prec: usize,
    },
    /// G_{k,D1,D2}, of weight k.
    Eisenstein {
        #[arg(long)]
        k: u32,
        #[arg(long, allow_negative_numbers = true)]
        d1: i64,
        #[arg(long, allow_negative_numbers = true)]
        d2: i64,
        #[arg(long)]
        prec: usize,
    },
    /// Rankin–Cohen bracket [f, g]_e of two series read from JSON files.
    Bracket {
        #[arg(long)]
        e: u32,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// The integral weight generator F_{D,k,e}.
    Fdke {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        prec: usize,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
    },
    /// The half-integral weight generator G_{D,k,e}, or with --lifted its D-th Shimura lift.
    Gdke {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        prec: usize,
        #[arg(long, value_enum, default_value_t = Method::Series)]
        method: Method,
        /// Emit the closed-form coefficients of the lift instead.
        #[arg(long)]
        lifted: bool,
    },
    /// D-th Shimura lift of a plus-space series of weight ℓ + ½ read from JSON.
    Lift {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        ell: u32,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        prec: usize,
    },
    /// Checks the lift identity S_D(G) = ratio · F to n_max coefficients.
    VerifyLift {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        nmax: u64,
        /// Coefficients cross-checked through the series routes.
        #[arg(long)]
        series_window: Option<u64>,
    },
    /// Determinant sweep over even ℓ in lmin..=lmax.
    Conjecture {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        lmin: u32,
        #[arg(long)]
        lmax: u32,
        /// Append records (with timings) to this JSONL file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Continue after the last ℓ recorded in --out.
        #[arg(long, requires = "out")]
        resume: bool,
        /// Use coefficients of the half-integral generators as entries.
        #[arg(long)]
        half_integral: bool,
    },
    /// Rank of the F_{D,ℓ−2e,e} coefficient matrix against dim S_{2ℓ}(1).
    RankCheck {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        ncols: Option<usize>,
    },
}

/// Failure modes of a subcommand, mapped to exit codes.
enum Failure {
    Usage(String),
    Verdict,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the CLI on `argv` (program name first), printing to stdout/stderr.
pub fn run(argv: &[String]) -> i32 {
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with(argv: &[String], out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be positive");
            return 2;
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(&cli, out)) {
        Ok(()) => 0,
        Err(Failure::Verdict) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut (dyn Write + Send)) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Theta { prec } => emit_series(out, fmt, &theta(positive(*prec)?)),
        Command::Eisenstein { k, d1, d2, prec } => {
            emit_series(out, fmt, &eisenstein_g(*k, *d1, *d2, positive(*prec)?)?)
        }
        Command::Bracket { e, f, g } => {
            let f = read_series(f)?;
            let g = read_series(g)?;
            let bracket = rankin_cohen(&f, HalfWeight::of(&f)?, &g, HalfWeight::of(&g)?, *e)?;
            emit_series(out, fmt, &bracket)
        }
        Command::Fdke { d, k, e, prec, method } => {
            let spec = GeneratorSpec::new(*d, *k, *e)?;
            let prec = positive(*prec)?;
            let series = match method {
                Method::Series => f_generator_series(&spec, prec)?,
                Method::Closed => {
                    let coeffs = with_zero_constant(f_coefficients(&spec, prec as u64 - 1));
                    QSeries::new(4 * spec.ell() as i64, coeffs)?
                }
            };
            emit_series(out, fmt, &series)
        }
        Command::Gdke { d, k, e, prec, method, lifted } => {
            let spec = GeneratorSpec::new(*d, *k, *e)?;
            let prec = positive(*prec)?;
            let series = if *lifted {
                let coeffs = with_zero_constant(lifted_g_coefficients(&spec, prec as u64 - 1));
                QSeries::new(4 * spec.ell() as i64, coeffs)?
            } else {
                match method {
                    Method::Series => g_generator_series(&spec, prec)?,
                    Method::Closed => {
                        let idx: Vec<u64> = (1..prec as u64).collect();
                        let coeffs = with_zero_constant(g_coefficients_at(&spec, &idx));
                        QSeries::new(2 * spec.ell() as i64 + 1, coeffs)?
                    }
                }
            };
            emit_series(out, fmt, &series)
        }
        Command::Lift { d, ell, input, prec } => {
            let disc = OddFundamentalDiscriminant::new(*d)?;
            let prec = positive(*prec)?;
            let g = read_series(input)?;
            let lifted = shimura_lift(&g, disc, *ell, prec).map_err(|e| match e {
                Error::InsufficientPrecision { .. } => Failure::Usage(format!(
                    "{e}; a lift to precision {prec} with |D| = {} needs |D|·(prec−1)² + 1 = {} input coefficients",
                    disc.abs(),
                    lift_precision_bound(disc, prec) + 1
                )),
                other => other.into(),
            })?;
            emit_series(out, fmt, &lifted)
        }
        Command::VerifyLift { d, k, e, nmax, series_window } => {
            let spec = GeneratorSpec::new(*d, *k, *e)?;
            if *nmax == 0 {
                return Err(Failure::Usage("--nmax must be positive".into()));
            }
            let report = verify_theorem1_with(&spec, *nmax, &VerifyOptions { series_window: *series_window });
            emit_report(out, fmt, &report)?;
            if report.verdict {
                Ok(())
            } else {
                Err(Failure::Verdict)
            }
        }
        Command::Conjecture { d, lmin, lmax, out: path, resume, half_integral } => {
            let source = if *half_integral { EntrySource::HalfIntegral } else { EntrySource::Lifted };
            run_sweep(out, fmt, *d, *lmin, *lmax, path.as_deref(), *resume, source)
        }
        Command::RankCheck { d, ell, ncols } => {
            let ncols = match ncols {
                Some(n) => *n,
                None => default_rank_columns(*ell)?,
            };
            let check = f_rank_check(*d, *ell, ncols)?;
            emit_rank(out, fmt, *d, *ell, &check)?;
            if check.equal {
                Ok(())
            } else {
                Err(Failure::Verdict)
            }
        }
    }
}

fn positive(prec: usize) -> std::result::Result<usize, Failure> {
    if prec == 0 {
        Err(Failure::Usage("--prec must be positive".into()))
    } else {
        Ok(prec)
    }
}

fn with_zero_constant(coeffs: Vec<Rational>) -> Vec<Rational> {
    let mut all = Vec::with_capacity(coeffs.len() + 1);
    all.push(Rational::zero());
    all.extend(coeffs);
    all
}

fn read_series(path: &Path) -> std::result::Result<QSeries, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn json_line<T: serde::Serialize>(out: &mut (dyn Write + Send), value: &T) -> Outcome {
    let text = serde_json::to_string(value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn emit_series(out: &mut (dyn Write + Send), fmt: Format, series: &QSeries) -> Outcome {
    match fmt {
        Format::Json => json_line(out, series),
        Format::Table => {
            writeln!(out, "# weight {}/2, prec {}", series.weight_times_two(), series.prec())?;
            for (n, c) in series.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                writeln!(out, "{n}\t{c}")?;
            }
            Ok(())
        }
    }
}

fn emit_report(out: &mut (dyn Write + Send), fmt: Format, report: &LiftReport) -> Outcome {
    match fmt {
        Format::Json => json_line(out, report),
        Format::Table => {
            let s = &report.spec;
            writeln!(out, "spec\tD={} k={} e={}", s.discriminant().value(), s.k(), s.e())?;
            writeln!(out, "n_max\t{}", report.n_max)?;
            writeln!(out, "series_window\t{}", report.series_window)?;
            writeln!(out, "ratio\t{}", report.ratio)?;
            writeln!(out, "verdict\t{}", report.verdict)?;
            for m in &report.mismatches {
                writeln!(out, "mismatch\t{:?} n={} {} != {}", m.check, m.index, m.lhs, m.rhs)?;
            }
            Ok(())
        }
    }
}

fn emit_rank(out: &mut (dyn Write + Send), fmt: Format, d: i64, ell: u32, check: &RankCheck) -> Outcome {
    match fmt {
        Format::Json => json_line(
            out,
            &serde_json::json!({ "D": d, "ell": ell, "rank": check.rank, "dim": check.dim, "equal": check.equal }),
        ),
        Format::Table => {
            writeln!(out, "D\tell\trank\tdim\tequal")?;
            writeln!(out, "{d}\t{ell}\t{}\t{}\t{}", check.rank, check.dim, check.equal)?;
            Ok(())
        }
    }
}

fn emit_record(out: &mut (dyn Write + Send), fmt: Format, record: &SweepRecord) -> Outcome {
    // Timings stay in the --out file so that stdout is reproducible.
    let shown = SweepRecord { ms: None, ..record.clone() };
    match fmt {
        Format::Json => json_line(out, &shown),
        Format::Table => {
            let det = match (&shown.det, &shown.error) {
                (Some(det), _) => det.to_string(),
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => "-".into(),
            };
            writeln!(out, "{}\t{}\t{}\t{det}", shown.d, shown.ell, shown.nonzero)?;
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    out: &mut (dyn Write + Send),
    fmt: Format,
    d: i64,
    lmin: u32,
    lmax: u32,
    path: Option<&Path>,
    resume: bool,
    source: EntrySource,
) -> Outcome {
    if lmin > lmax {
        return Err(Failure::Usage(format!("--lmin {lmin} exceeds --lmax {lmax}")));
    }
    if fmt == Format::Table {
        writeln!(out, "D\tell\tnonzero\tdet")?;
    }
    let mut all_nonzero = true;
    let mut writer = None;
    let mut start = lmin;
    if let Some(path) = path {
        let (w, last) = JsonlSweepWriter::open(path, resume)?;
        if let Some(last) = last {
            // Replay what is already on disk so stdout covers the full range.
            for record in read_records(path)? {
                if record.d == d && (lmin..=lmax).contains(&record.ell) {
                    all_nonzero &= record.nonzero;
                    emit_record(out, fmt, &record)?;
                }
            }
            start = start.max(last + 1);
        }
        writer = Some(w);
    }
    let opts = SweepOptions {
        source,
        timing: writer.is_some(),
    };
    let mut failure = None;
    if start <= lmax {
        conjecture_sweep(d, start, lmax, &opts, |record| {
            all_nonzero &= record.nonzero;
            if let Some(w) = writer.as_mut() {
                w.write(&record)?;
            }
            if let Err(f) = emit_record(out, fmt, &record) {
                failure = Some(f);
                return Err(Error::Io("stdout".into()));
            }
            Ok(())
        })
        .map_err(|e| failure.take().unwrap_or(Failure::from(e)))?;
    }
    if all_nonzero {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}
