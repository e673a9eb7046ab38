use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use serde_json::Value;

use cicy_cli::battery;
use cicy_cli::commands::{self, BpsInput, PeriodMethod, Side};
use cicy_cli::input;
use cicy_cli::output::{render, Format};
use cicy_cli::{exit_code, Failure, EXIT_USAGE};
use cicy_core::monodromy::ScanRange;
use cicy_core::schubert::RankGuards;

/// Minuscule Schubert Calabi-Yau toolkit: posets, toric invariants, periods,
/// Picard-Fuchs operators, monodromy and BPS numbers.
#[derive(Parser)]
#[command(name = "cicy", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// working precision in decimal digits for analytic continuation
    #[arg(long, global = true)]
    digits: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Minuscule posets and Schubert varieties
    #[command(subcommand)]
    Minuscule(MinusculeCmd),
    /// Hibi toric varieties of order polytopes
    #[command(subcommand)]
    Hibi(HibiCmd),
    /// deg, c2.H, chi and the stringy Hodge data of a complete intersection
    Invariants {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        degrees: String,
    },
    /// Fundamental period coefficients
    Period {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        degrees: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long, value_enum, default_value = "flow")]
        method: PeriodMethod,
    },
    /// Picard-Fuchs operators
    #[command(subcommand)]
    Ode(OdeCmd),
    /// Quantum differential operators of minuscule G/P
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// Monodromy in an integral symplectic basis
    #[command(subcommand)]
    Monodromy(MonodromyCmd),
    /// Genus-0 BPS numbers
    Bps {
        #[arg(long, conflicts_with = "op")]
        poset: Option<String>,
        #[arg(long, requires = "poset")]
        degrees: Option<String>,
        /// named operator or operator file
        #[arg(long)]
        op: Option<String>,
        /// deg at the chosen MUM point; on the far side it defaults to the monodromy scan
        #[arg(long, allow_negative_numbers = true)]
        deg: Option<i64>,
        #[arg(long, value_enum, default_value = "x")]
        side: Side,
        /// x = c/z on the far side
        #[arg(long, default_value = "-1", allow_negative_numbers = true)]
        c: String,
        #[arg(long, default_value_t = 10)]
        dmax: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Recompute every published value and compare with the expected-values file
    ReproducePaper {
        /// groups to skip (repeatable or comma separated)
        #[arg(long, value_delimiter = ',')]
        skip: Vec<String>,
        /// expected-values file replacing the embedded one
        #[arg(long)]
        expected: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MinusculeCmd {
    /// W^Q lattice and its poset for a minuscule node
    Generate {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        node: usize,
        /// reduced word of a Schubert variety, e.g. 345134265431
        #[arg(long)]
        word: Option<String>,
    },
    /// Schubert report of a catalog poset
    Report {
        #[arg(long)]
        poset: String,
    },
    /// Smooth complete-intersection Calabi-Yau 3-folds in minuscule Schubert varieties
    Classify {
        #[arg(long, default_value_t = 12)]
        max_a: usize,
        #[arg(long, default_value_t = 8)]
        max_d: usize,
    },
}

#[derive(Subcommand)]
enum HibiCmd {
    /// l(kΔ) and l*(kΔ)
    Count {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        k: usize,
    },
    /// l*(kθ_e) for the facet of edge e of P̂
    FaceInterior {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        edge: usize,
        #[arg(long)]
        k: usize,
    },
    /// Singular components from minimal convex cycles
    Singular {
        #[arg(long)]
        poset: String,
    },
    /// Nef-partition of the edges for a degree vector
    Nef {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        degrees: String,
    },
}

#[derive(Subcommand)]
enum OdeCmd {
    /// Minimal θ-operator annihilating a series
    Fit {
        #[arg(long)]
        series: String,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Riemann scheme
    Scheme {
        #[arg(long)]
        op: String,
    },
    /// z^(-1) D z after x = c/z
    Invert {
        #[arg(long)]
        op: String,
        #[arg(long, default_value = "-1", allow_negative_numbers = true)]
        c: String,
        #[arg(long, default_value = "z")]
        var: String,
    },
}

#[derive(Subcommand)]
enum QuantumCmd {
    /// Scalar quantum differential operator of G/P
    Ode {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        node: usize,
    },
}

#[derive(Subcommand)]
enum MonodromyCmd {
    /// Monodromy around every singular point in the basis fixed by (deg, c2.H, chi)
    Run {
        #[arg(long)]
        op: String,
        #[arg(long, allow_negative_numbers = true)]
        invariants: String,
    },
    /// Also continue the basis at ∞ and compute the connection matrix
    Connect {
        #[arg(long)]
        op: String,
        #[arg(long, allow_negative_numbers = true)]
        invariants: String,
        #[arg(long, default_value = "-1", allow_negative_numbers = true)]
        c: String,
        /// far-side invariants; scanned when absent
        #[arg(long, allow_negative_numbers = true)]
        far_invariants: Option<String>,
        #[arg(long, default_value_t = 50)]
        max_deg: i64,
    },
}

fn run(cli: Cli) -> Result<(Value, bool)> {
    let v = match cli.cmd {
        Cmd::Minuscule(m) => match m {
            MinusculeCmd::Generate { kind, node, word } => commands::minuscule_generate(&kind, node, word.as_deref())?,
            MinusculeCmd::Report { poset } => commands::minuscule_report(&poset)?,
            MinusculeCmd::Classify { max_a, max_d } => commands::minuscule_classify(RankGuards { max_a, max_d })?,
        },
        Cmd::Hibi(h) => match h {
            HibiCmd::Count { poset, k } => commands::hibi_count(&input::poset(&poset)?, k)?,
            HibiCmd::FaceInterior { poset, edge, k } => commands::hibi_face_interior(&input::poset(&poset)?, edge, k)?,
            HibiCmd::Singular { poset } => commands::hibi_singular(&input::poset(&poset)?)?,
            HibiCmd::Nef { poset, degrees } => commands::hibi_nef(&input::poset(&poset)?, &input::degrees(&degrees)?)?,
        },
        Cmd::Invariants { poset, degrees } => commands::invariants(&input::poset(&poset)?, &input::degrees(&degrees)?)?,
        Cmd::Period { poset, degrees, terms, method } => {
            let s = commands::period_series(&input::poset(&poset)?, &input::degrees(&degrees)?, terms, method)?;
            commands::series_value(&s)
        }
        Cmd::Ode(o) => match o {
            OdeCmd::Fit { series, max_order, max_degree } => {
                commands::ode_fit(&input::series(&series)?, max_order, max_degree)?
            }
            OdeCmd::Scheme { op } => commands::ode_scheme(&input::operator(&op)?)?,
            OdeCmd::Invert { op, c, var } => commands::ode_invert(&input::operator(&op)?, &input::rational(&c)?, &var)?,
        },
        Cmd::Quantum(QuantumCmd::Ode { kind, node }) => commands::quantum_ode(&kind, node)?,
        Cmd::Monodromy(m) => {
            let digits = cli.digits.unwrap_or(120);
            let r = match m {
                MonodromyCmd::Run { op, invariants } => {
                    commands::monodromy_run(&input::operator(&op)?, digits, input::triple(&invariants)?)?
                }
                MonodromyCmd::Connect { op, invariants, c, far_invariants, max_deg } => {
                    let far = far_invariants.as_deref().map(input::triple).transpose()?;
                    let range = ScanRange { deg: (1, max_deg), ..ScanRange::default() };
                    commands::monodromy_connect(
                        &input::operator(&op)?,
                        digits,
                        input::triple(&invariants)?,
                        &input::rational(&c)?,
                        far,
                        &range,
                    )?
                }
            };
            serde_json::to_value(&r)?
        }
        Cmd::Bps { poset, degrees, op, deg, side, c, dmax, max_degree } => {
            let c = input::rational(&c)?;
            let (op, near_deg, near) = match (poset, op) {
                (Some(p), None) => {
                    let degrees = degrees.ok_or(Failure::Usage("--poset needs --degrees".into()))?;
                    let (p, d) = (input::poset(&p)?, input::degrees(&degrees)?);
                    let op = commands::operator_from_poset(&p, &d, max_degree)?;
                    let inst = cicy_core::CicyInstance::threefold(p, d)?;
                    let r = cicy_core::invariants::invariant_report(&inst)?;
                    let near = (r.deg as i64, r.c2h as i64, r.chi_x as i64);
                    (op, Some(r.deg as i64), Some(near))
                }
                (None, Some(o)) => (input::operator(&o)?, None, None),
                _ => return Err(Failure::Usage("give --poset with --degrees, or --op".into()).into()),
            };
            let deg = match (side, deg) {
                (_, Some(d)) => d,
                (Side::X, None) => near_deg.ok_or(Failure::Usage("--op needs --deg".into()))?,
                (Side::Z, None) => {
                    let near = near.ok_or(Failure::Usage("--op on the far side needs --deg".into()))?;
                    commands::far_degree(&op, near, &c, cli.digits.unwrap_or(40))?
                }
            };
            commands::bps_table(&BpsInput { op, deg, side, c, dmax })?
        }
        Cmd::ReproducePaper { skip, expected } => {
            let text = match &expected {
                Some(p) => std::fs::read_to_string(p)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?,
                None => battery::EXPECTED.to_string(),
            };
            let exp = battery::parse_expected(&text)?;
            let report = battery::run(&exp, &skip, cli.digits.unwrap_or(120))?;
            let ok = report.all_pass();
            let v = match cli.format {
                Format::Json => serde_json::to_value(&report)?,
                Format::Table => battery::summary_rows(&report),
            };
            if cli.format == Format::Table {
                emit(&format!(
                    "{}\n\n{} passed, {} failed, {} skipped",
                    render(&v, cli.format),
                    report.passed,
                    report.failed,
                    report.skipped
                ));
                return Ok((Value::Null, ok));
            }
            return Ok((v, ok));
        }
    };
    Ok((v, true))
}

/// Print to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok((v, ok)) => {
            if !v.is_null() {
                emit(&render(&v, format));
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: {}", Failure::Mismatch("values differ from the expected-values file".into()));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
