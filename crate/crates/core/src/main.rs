use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::process::ExitCode;
use supergas::print::gexpr_string;
use supergas::report::Status;
use supergas::salg::catalog_records;
use supergas::solutions::{compare_reduced, reduce, reduction_spec};
use supergas::verify::{self, check_gamma, GammaMode, Record, Report};

#[derive(Parser)]
#[command(name = "supergas", version, about = "Symmetry checks for the supersymmetric polytropic gas system")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Run a group of checks.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Reduce the system by the invariants of a subalgebra.
    Reduce {
        /// Subalgebra id, e.g. L8.
        id: String,
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
    },
    /// List the one-dimensional subalgebras, one JSON object per line.
    Catalog,
    /// Residual of `def W = ...` and `def P = ...` read from a file.
    Check {
        file: std::path::PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<i64>,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Kernel properties and the print/parse round trip.
    Core {
        #[arg(long, default_value_t = verify::KERNEL_CASES)]
        cases: usize,
    },
    /// Anticommutators of the superspace operators.
    Operators {
        #[arg(long, default_value_t = verify::OPERATOR_CASES)]
        cases: usize,
    },
    /// The 36 supercommutators.
    Table1,
    /// Total derivative and prolongation coefficient listings.
    Prolongation,
    /// Symmetry criterion for the generators and the general symmetry.
    Symmetries {
        #[arg(long, allow_negative_numbers = true, conflicts_with = "symbolic")]
        gamma: Option<i64>,
        #[arg(long)]
        symbolic: bool,
    },
    /// Orbits, cocycle reduction, catalog and block decomposition.
    Classification,
    /// Invariants and reduced systems.
    Reductions,
    /// Solution families and nonstandard invariants.
    Solutions {
        #[arg(long, num_args = 1..)]
        id: Vec<String>,
    },
    /// Everything above.
    All,
}

/// Write to stdout; a closed pipe is not an error.
fn out(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn emit(report: &Report, format: Format) -> ExitCode {
    match format {
        Format::Text => out(&report.text()),
        Format::Structured => out(&report.structured()),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn reduce_record(id: &str, gamma: Option<i64>, k: Option<i64>) -> supergas::Result<Record> {
    if let Some(g) = gamma {
        check_gamma(g)?;
    }
    let spec = reduction_spec(id)?;
    let system = reduce(&spec, gamma, k)?;
    let mut detail = vec![
        format!("Delta1 = {}", gexpr_string(&system.residual.delta1)),
        format!("Delta2 = {}", gexpr_string(&system.residual.delta2)),
    ];
    let has_printed = spec.reduction.as_ref().is_some_and(|r| r.expected.iter().any(Option::is_some));
    let status = if system.at_fixture_params && has_printed {
        let cmp = compare_reduced(&spec)?;
        let rec = verify::reduced_record(&cmp);
        detail.push(match cmp.status() {
            Status::Pass => "matches fixture".to_string(),
            Status::Archived => "differs from fixture by the archived terms below".to_string(),
            Status::Fail => "does not match fixture".to_string(),
        });
        detail.extend(rec.detail);
        cmp.status()
    } else {
        detail.push("no printed form at these parameters".into());
        Status::Pass
    };
    Ok(Record::new(format!("reduce/{id}"), format!("reduced system of {id}"), status, detail))
}

fn run(cli: Cli) -> supergas::Result<ExitCode> {
    let format = cli.format;
    let report = match cli.command {
        Command::Catalog => {
            let lines: String = catalog_records()?
                .iter()
                .map(|r| serde_json::to_string(r).expect("catalog records serialize") + "\n")
                .collect();
            out(&lines);
            return Ok(ExitCode::SUCCESS);
        }
        Command::Reduce { id, gamma, k } => Report::collect(format!("reduce {id}"), || Ok(vec![reduce_record(&id, gamma, k)?]))?,
        Command::Check { file, gamma } => {
            let src = std::fs::read_to_string(&file).map_err(|e| supergas::Error::Invalid(format!("{}: {e}", file.display())))?;
            let name = file.display().to_string();
            Report::collect(format!("check {name}"), || verify::check_source(&name, &src, gamma))?
        }
        Command::Verify { what } => match what {
            Verify::Core { cases } => Report::collect("verify core", || verify::core(cases))?,
            Verify::Operators { cases } => Report::collect("verify operators", || verify::operators(cases))?,
            Verify::Table1 => Report::collect("verify table1", verify::table)?,
            Verify::Prolongation => Report::collect("verify prolongation", verify::prolongation)?,
            Verify::Symmetries { gamma, symbolic } => {
                let modes = match (gamma, symbolic) {
                    (Some(g), _) => {
                        check_gamma(g)?;
                        vec![GammaMode::Sampled(g)]
                    }
                    (None, true) => vec![GammaMode::Symbolic],
                    (None, false) => verify::DEFAULT_MODES.to_vec(),
                };
                Report::collect("verify symmetries", || verify::symmetries(&modes))?
            }
            Verify::Classification => Report::collect("verify classification", verify::classification)?,
            Verify::Reductions => Report::collect("verify reductions", verify::reductions)?,
            Verify::Solutions { id } => {
                let ids = (!id.is_empty()).then_some(id);
                Report::collect("verify solutions", || verify::solutions(ids.as_deref()))?
            }
            Verify::All => Report::collect("verify all", verify::all)?,
        },
    };
    Ok(emit(&report, format))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
