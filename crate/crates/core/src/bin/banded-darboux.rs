use std::path::PathBuf;
use std::process::ExitCode;

use banded_darboux::harness::{
    report_dir, run_command, write_outputs, Command, InstanceConfig, Overrides, EXIT_CONFIG,
};
use clap::{Args, Parser, Subcommand};

/// Exact Darboux transforms of banded Hessenberg matrices.
///
/// Reports go to the paths named in the config's `output` section, or to
/// `$BANDED_DARBOUX_REPORT_DIR` when set.
#[derive(Parser)]
#[command(name = "banded-darboux", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate the instance and orthogonality vector.
    Gen(Common),
    /// Shifted LU and bidiagonal chain.
    Factorize(Common),
    /// Transformed matrices J^(j).
    Transform(Common),
    /// Transformed polynomials P^(j)_n up to the window.
    Polys(Common),
    /// Full orthogonality certificate.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// Instance configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Shift, e.g. `1/2` or `-3`.
    #[arg(long = "C", allow_hyphen_values = true)]
    shift: Option<String>,
    #[arg(long)]
    window: Option<usize>,
    /// Restrict `transform` and `polys` to one stage.
    #[arg(long)]
    j: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Gen(a) => (Command::Gen, a),
        Cmd::Factorize(a) => (Command::Factorize, a),
        Cmd::Transform(a) => (Command::Transform, a),
        Cmd::Polys(a) => (Command::Polys, a),
        Cmd::Verify(a) => (Command::Verify, a),
    };

    let mut config = match InstanceConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    config.apply(&Overrides {
        p: args.p,
        seed: args.seed,
        shift: args.shift,
        window: args.window,
    });

    let outcome = run_command(command, &config, args.j);
    print!("{}", outcome.table);
    match write_outputs(&outcome, report_dir()) {
        Ok(paths) => {
            for p in paths {
                log::info!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    }
    if let Some(err) = &outcome.report.error {
        eprintln!("error: {}", err.message);
    }
    ExitCode::from(outcome.exit_code as u8)
}
