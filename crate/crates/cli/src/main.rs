use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use invforge::construct::{compute_phi, InvariantSet};
use invforge::gf::DEFAULT_MAX_Q;
use invforge::oracle::{self, compare, GroupTag};
use invforge::report::{export_invariants, parse_checks, run_verify, CheckKind, RunConfig};
use invforge::{Error, FieldCtx};

const MAX_Q_ENV: &str = "INVFORGE_MAX_Q";

#[derive(Parser)]
#[command(name = "invforge", version, about = "Exact invariants of SL2(F_q) and its Sylow p-subgroup on binary quadratic forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification checks and print a report.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        max_degree: Option<u32>,
        /// Comma separated subset of: p-relation, sl2-relation, invariance, sagbi, hilbert, phi, parity.
        #[arg(long)]
        checks: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
        /// Report elapsed_ms as 0 so output is byte-identical across runs.
        #[arg(long)]
        no_timing: bool,
    },
    /// Compute Phi with B^2 = Delta^q Gamma^2 + J Phi(Delta, J, Gamma).
    Phi {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare invariant dimensions with the predicted Hilbert series.
    Hilbert {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = GroupArg::Sl2)]
        group: GroupArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write the invariants and Phi to a directory, one file each.
    Export {
        #[command(flatten)]
        field: FieldArgs,
        /// Target directory; defaults to `invforge-q<q>`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: i64,
    #[arg(long, default_value_t = 1)]
    n: i64,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    P,
    Sl2,
    Both,
}

enum Failure {
    Checks,
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Config(e.to_string())
    }
}

fn max_q() -> Result<u64, Failure> {
    match std::env::var(MAX_Q_ENV) {
        Ok(v) => {
            let cap: u64 = v.trim().parse().map_err(|_| Failure::Config(format!("{MAX_Q_ENV}={v} is not an integer")))?;
            if cap > DEFAULT_MAX_Q {
                eprintln!(
                    "WARNING: {MAX_Q_ENV}={cap} raises the field size cap above {DEFAULT_MAX_Q}; \
                     construction and checks may take a long time and a lot of memory"
                );
            }
            Ok(cap)
        }
        Err(_) => Ok(DEFAULT_MAX_Q),
    }
}

fn field(args: &FieldArgs) -> Result<Arc<FieldCtx>, Failure> {
    Ok(Arc::new(FieldCtx::with_cap(args.p, args.n, max_q()?)?))
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify { field: f, max_degree, checks, output, no_timing } => {
            let mut cfg = RunConfig::new(f.p, f.n);
            cfg.max_q = max_q()?;
            cfg.max_degree = max_degree;
            cfg.timing = !no_timing;
            if let Some(list) = checks {
                cfg.checks = parse_checks(&list)?;
                if cfg.checks.is_empty() {
                    cfg.checks = CheckKind::ALL.to_vec();
                }
            }
            let report = run_verify(&cfg)?;
            let text = match output.format {
                Format::Text => report.to_text(),
                Format::Json => with_newline(report.to_json()),
            };
            emit(&output, &text)?;
            if report.pass() {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::Phi { field: f, output } => {
            let ctx = field(&f)?;
            let inv = InvariantSet::build(&ctx)?;
            let phi = compute_phi(&inv)?;
            let expr = phi.expr.restrict_to_used();
            let text = match output.format {
                Format::Text => format!(
                    "q = {}\nB^2 = Delta^{}*Gamma^2 + J*Phi\nPhi = {}\nvariables: {}\n",
                    ctx.q(),
                    ctx.q(),
                    expr.to_text(),
                    expr.names().join(", ")
                ),
                Format::Json => with_newline(
                    serde_json::to_string_pretty(&serde_json::json!({
                        "q": ctx.q(),
                        "phi": serde_json::from_str::<serde_json::Value>(&expr.to_json()).expect("valid json"),
                        "text": expr.to_text(),
                        "subduction_steps": phi.subduction_steps,
                    }))
                    .expect("serializes"),
                ),
            };
            emit(&output, &text)
        }
        Command::Hilbert { field: f, max_degree, group, output } => {
            let ctx = field(&f)?;
            let max_degree = max_degree.unwrap_or_else(|| oracle::default_max_degree(&ctx));
            let tags: &[GroupTag] = match group {
                GroupArg::P => &[GroupTag::P],
                GroupArg::Sl2 => &[GroupTag::SL2],
                GroupArg::Both => &[GroupTag::P, GroupTag::SL2],
            };
            let tables = tags.iter().map(|&t| compare(&ctx, t, max_degree)).collect::<Result<Vec<_>, _>>()?;
            let text = match output.format {
                Format::Text => tables.iter().map(|t| t.to_text()).collect::<Vec<_>>().join("\n"),
                Format::Json => with_newline(serde_json::to_string_pretty(&tables).expect("serializes")),
            };
            emit(&output, &text)?;
            if tables.iter().all(|t| t.pass()) {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::Export { field: f, out, format } => {
            let ctx = field(&f)?;
            let inv = InvariantSet::build(&ctx)?;
            let phi = compute_phi(&inv)?;
            let out = out.unwrap_or_else(|| PathBuf::from(format!("invforge-q{}", ctx.q())));
            fs::create_dir_all(&out).map_err(|e| Failure::Config(format!("cannot create {}: {e}", out.display())))?;
            let ext = if format == Format::Json { "json" } else { "txt" };
            let write = |name: &str, body: String| -> Result<(), Failure> {
                let path: PathBuf = Path::new(&out).join(format!("{name}.{ext}"));
                fs::write(&path, with_newline(body)).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
            };
            for (name, poly) in export_invariants(&inv) {
                write(name, if format == Format::Json { poly.to_json() } else { poly.to_text() })?;
            }
            let compact = phi.expr.restrict_to_used();
            write("Phi", if format == Format::Json { compact.to_json() } else { compact.to_text() })?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
