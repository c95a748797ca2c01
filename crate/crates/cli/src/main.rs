use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use qasym_cli::run::{DEFAULT_GRID, DEFAULT_REL_TOL};
use qasym_cli::{parse_t_grid, run, CliError, Command, RunConfig, SpecSource};
use qasym_core::expansion::{DEFAULT_L, DEFAULT_M};

/// Asymptotics of Eulerian q-series near q = 1.
#[derive(Debug, Parser)]
#[command(name = "qasym", version)]
struct Args {
    command: Command,
    /// JSON spec file.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    spec: Option<PathBuf>,
    /// Built-in series (run `qasym preset` for the list).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Comma-separated values of t = -log q.
    #[arg(
        long = "t",
        value_name = "LIST",
        value_delimiter = ',',
        conflicts_with = "t_grid"
    )]
    t: Vec<f64>,
    #[arg(long = "t-grid", value_name = "START:STOP:COUNT[:log]")]
    t_grid: Option<String>,
    /// Laplace correction order (in powers of t).
    #[arg(long = "order-L", value_name = "N", default_value_t = DEFAULT_L)]
    order_l: usize,
    /// Number of Pochhammer asymptotic terms.
    #[arg(long = "order-M", value_name = "N", default_value_t = DEFAULT_M)]
    order_m: usize,
    /// Relative tolerance of the integral.
    #[arg(long = "rel-tol", value_name = "X", default_value_t = DEFAULT_REL_TOL)]
    rel_tol: f64,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn config(args: Args) -> Result<RunConfig, CliError> {
    let t_grid = match (&args.t_grid, args.t.is_empty()) {
        (Some(g), _) => parse_t_grid(g)?,
        (None, false) => args.t,
        (None, true) => DEFAULT_GRID.to_vec(),
    };
    let spec_source = match (args.spec, args.preset) {
        (Some(p), _) => Some(SpecSource::File(p)),
        (None, Some(n)) => Some(SpecSource::Preset(n)),
        (None, None) => None,
    };
    RunConfig {
        command: args.command,
        spec_source,
        t_grid,
        order_l: args.order_l,
        order_m: args.order_m,
        rel_tol: args.rel_tol,
        output: args.out,
    }
    .normalized()
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {}", e.one_line());
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("bad arguments");
            return fail(&CliError::Usage(
                first.trim_start_matches("error: ").to_string(),
            ));
        }
    };
    qasym_core::specfun::init_tables();
    let cfg = match config(args) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &outcome.output).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{}", outcome.output);
            Ok(())
        }
    };
    if let Err(e) = written {
        return fail(&e);
    }
    match outcome.failure {
        Some(e) => fail(&e),
        None => ExitCode::SUCCESS,
    }
}
