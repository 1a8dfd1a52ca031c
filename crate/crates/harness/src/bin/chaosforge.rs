//! `chaosforge` command-line tool.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 for
//! usage or input errors.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use chaosforge_core::hermite::hermite_eval;
use chaosforge_core::Complex64;
use chaosforge_harness::formats::read_kernel;
use chaosforge_harness::mc::{mc_estimate, Moment};
use chaosforge_harness::report::{emit_report, write_report, ReportFormat};
use chaosforge_harness::sweep::{sweep_theorem, Family, SequenceSpec};
use chaosforge_harness::verify::{self, all_pass, Suite};
use chaosforge_harness::{HarnessError, VERSION};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "chaosforge",
    version,
    about = "Complex Wiener chaos: identity checks, sweeps and Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complex Hermite polynomials
    Hermite {
        #[command(subcommand)]
        command: HermiteCommand,
    },
    /// Run a verification suite and write its report
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report path; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Kernels in the identities and lemma31 corpora
        #[arg(long, default_value_t = verify::DEFAULT_CORPUS_SIZE)]
        corpus_size: usize,
    },
    /// Contraction profiles and gaps along a kernel sequence
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Sequence file (JSON array of kernels) for `--family file`
        #[arg(long, required_if_eq("family", "file"))]
        kernels: Option<PathBuf>,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        count: Option<usize>,
        /// Also estimate E|F|⁴ by Monte Carlo with this many draws
        #[arg(long)]
        mc_samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of a moment of I_{m,n}(f)
    Mc {
        /// Kernel JSON file
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long, value_enum)]
        moment: MomentArg,
        /// Number of draws, at least 1000
        #[arg(long = "n")]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fail unless the estimate is within 5 standard errors of this value
        #[arg(long, allow_hyphen_values = true)]
        expect: Option<f64>,
    },
}

#[derive(Subcommand)]
enum HermiteCommand {
    /// Evaluate J_{m,n}(z, rho)
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        z_re: f64,
        #[arg(long, allow_hyphen_values = true)]
        z_im: f64,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Hermite,
    Chaos,
    Malliavin,
    Identities,
    #[value(name = "lemma31")]
    Expansions,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Diagonal,
    RandomSparse,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum MomentArg {
    M2,
    M4,
    F2,
}

#[derive(Serialize)]
struct McOutput {
    moment: Moment,
    samples: usize,
    seed: u64,
    estimate: [f64; 2],
    stderr: f64,
}

fn banner(seed: Option<u64>) {
    match seed {
        Some(s) => eprintln!("chaosforge {VERSION} seed={s}"),
        None => eprintln!("chaosforge {VERSION} seed=none"),
    }
}

fn write_stdout(bytes: &[u8]) -> Result<(), HarnessError> {
    let mut out = io::stdout().lock();
    out.write_all(bytes)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Hermite {
            command:
                HermiteCommand::Eval {
                    m,
                    n,
                    z_re,
                    z_im,
                    rho,
                },
        } => {
            banner(None);
            let v = hermite_eval(m, n, Complex64::new(z_re, z_im), rho)?;
            println!("{} {}", v.re, v.im);
            Ok(true)
        }
        Command::Verify {
            suite,
            seed,
            out,
            format,
            corpus_size,
        } => {
            banner(Some(seed));
            let suite = match suite {
                SuiteArg::Hermite => Suite::Hermite,
                SuiteArg::Chaos => Suite::Chaos,
                SuiteArg::Malliavin => Suite::Malliavin,
                SuiteArg::Identities => Suite::Identities,
                SuiteArg::Expansions => Suite::Expansions,
            };
            let reports = match suite {
                Suite::Identities => verify::identities_suite(seed, corpus_size),
                Suite::Expansions => verify::expansion_suite(seed, corpus_size),
                other => verify::run_suite(other, seed),
            };
            let format = match format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
            };
            match out {
                Some(path) => emit_report(&reports, format, &path)?,
                None => {
                    let mut buf = Vec::new();
                    write_report(&mut buf, &reports, format)?;
                    write_stdout(&buf)?;
                }
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            eprintln!(
                "{}: {} checks, {} failed",
                suite.name(),
                reports.len(),
                failed
            );
            for r in reports.iter().filter(|r| !r.pass) {
                eprintln!(
                    "FAIL {} (m={}, n={}, d={}) rel_err={:e}",
                    r.case, r.m, r.n, r.d, r.rel_err
                );
            }
            Ok(all_pass(&reports))
        }
        Command::Sweep {
            family,
            kernels,
            m,
            n,
            dims,
            seed,
            count,
            mc_samples,
            out,
        } => {
            banner(Some(seed));
            let family = match family {
                FamilyArg::Diagonal => Family::Diagonal,
                FamilyArg::RandomSparse => Family::RandomSparse,
                FamilyArg::File => Family::File(kernels.expect("required by clap")),
            };
            let spec = SequenceSpec {
                family,
                m,
                n,
                dims,
                seed,
                count,
                mc_samples,
            };
            let result = sweep_theorem(&spec)?;
            let mut text = serde_json::to_string_pretty(&result)?;
            text.push('\n');
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|source| HarnessError::Io { path, source })?,
                None => write_stdout(text.as_bytes())?,
            }
            for row in &result.rows {
                eprintln!(
                    "k={} d={} gap={:.12e} max_plain={:.6e} max_sym={:.6e}",
                    row.k, row.d, row.gap, row.max_plain, row.max_symmetrized
                );
            }
            eprintln!("flags: {}", serde_json::to_string(&result.flags)?);
            Ok(result.flags.symmetrized_dominated && result.flags.gap_within_bound)
        }
        Command::Mc {
            kernel,
            moment,
            samples,
            seed,
            expect,
        } => {
            banner(Some(seed));
            let f = read_kernel(&kernel)?;
            let moment = match moment {
                MomentArg::M2 => Moment::M2,
                MomentArg::M4 => Moment::M4,
                MomentArg::F2 => Moment::F2,
            };
            let est = mc_estimate(&f, moment, samples, seed)?;
            let out = McOutput {
                moment,
                samples,
                seed,
                estimate: [est.estimate.re, est.estimate.im],
                stderr: est.stderr,
            };
            println!("{}", serde_json::to_string(&out)?);
            Ok(match expect {
                Some(target) => est.z_score(Complex64::new(target, 0.0)) <= 5.0,
                None => true,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
