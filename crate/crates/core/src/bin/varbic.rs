use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use varbic::suite::{run, Command, RunConfig};

#[derive(Parser)]
#[command(name = "varbic", version, about = "Verify the variational bicomplex identities of general relativity")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bicomplex, Euler–Lagrange split, Lepage invariance, Noether current, Einstein tensor.
    VerifyGr,
    /// Homotopy momentum map identities for arities 1..=k.
    VerifyLinfty {
        /// Highest arity; defaults to the dimension.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Classical mechanics in a potential (--dim is the number of positions, --field the potential).
    VerifyMech,
    /// Tensorial behaviour under the diffeomorphism action.
    VerifyCovariance,
    /// The two covariant divergence formulas on random families.
    VerifyDivergence,
    /// Self-checks of the randomized evaluation oracle.
    OracleAudit,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true, default_value_t = 2)]
    dim: usize,
    #[arg(long, global = true, default_value_t = varbic::jetscalar::DEFAULT_JET_CAP)]
    jet_cap: usize,
    #[arg(long, global = true, default_value_t = varbic::jetscalar::DEFAULT_VSYM_CAP)]
    vsym_cap: usize,
    /// Oracle sample points per identity.
    #[arg(long, global = true, default_value_t = varbic::oracle::DEFAULT_POINTS)]
    points: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Permit dimension 4.
    #[arg(long, global = true)]
    allow_large: bool,
    /// Field declarations (or a file containing them); a potential for verify-mech.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit wall-clock times so the report is reproducible byte for byte.
    #[arg(long, global = true)]
    no_timings: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let command = match cli.command {
        Cmd::VerifyGr => Command::VerifyGr,
        Cmd::VerifyLinfty { k } => Command::VerifyLinfty { k },
        Cmd::VerifyMech => Command::VerifyMech,
        Cmd::VerifyCovariance => Command::VerifyCovariance,
        Cmd::VerifyDivergence => Command::VerifyDivergence,
        Cmd::OracleAudit => Command::OracleAudit,
    };
    let o = cli.opts;
    let field = match o.field {
        Some(f) if std::path::Path::new(&f).is_file() => match std::fs::read_to_string(&f) {
            Ok(s) => Some(s),
            Err(e) => {
                eprintln!("error: cannot read {f}: {e}");
                return ExitCode::from(2);
            }
        },
        other => other,
    };
    let cfg = RunConfig {
        command,
        dim: o.dim,
        jet_cap: o.jet_cap,
        vsym_cap: o.vsym_cap,
        points: o.points,
        seed: o.seed,
        jobs: o.jobs,
        allow_large: o.allow_large,
        field,
        timings: !o.no_timings,
        only: Vec::new(),
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let body = match o.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    match &o.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::from(if report.all_pass() { 0 } else { 1 })
}
