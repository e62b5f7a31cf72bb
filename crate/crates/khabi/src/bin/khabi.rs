use clap::{Args, Parser, Subcommand, ValueEnum};
use khabi::cli::{self, CommandKind, OutputFormat, Precision, RhoSpec, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Sharp Paley-problem constants for plurisubharmonic functions of lower
/// order rho > 1.
#[derive(Parser)]
#[command(name = "khabi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// P_n, deficiency, J(rho), K_n(rho) and oracle residuals per (n, rho)
    Constants(GridArgs),
    /// Zeros of psi_rho with the D_-/D_+ decomposition and census evidence
    PsiRoots(GridArgs),
    /// Maximizing-sequence run: k, eps_k, J(s_k), gap, admissibility margin
    Maximize(MaximizeArgs),
    /// Gegenbauer comparison value vartheta(u_rho) against K_n and e^{n-1} P_n
    Dahlberg(GridArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Complex dimension (n >= 2)
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Single lower order rho (> 1)
    #[arg(long, conflicts_with_all = ["rho_min", "rho_max"])]
    rho: Option<f64>,
    /// Lower end of a rho range
    #[arg(long, requires = "rho_max")]
    rho_min: Option<f64>,
    /// Upper end of a rho range
    #[arg(long, requires = "rho_min")]
    rho_max: Option<f64>,
    /// Number of grid points in the rho range
    #[arg(long, default_value_t = 1)]
    steps: u32,
    /// Relative tolerance override (also via KHABI_TOL); quadrature uses it
    /// directly, root refinement is capped at 1e-13
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = PrecisionArg::Double)]
    precision: PrecisionArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
    /// Write the rendered output to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MaximizeArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Iteration budget K
    #[arg(long, default_value_t = 200)]
    iters: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Human,
}

fn to_config(kind: CommandKind, grid: &GridArgs, iters: u32) -> Result<RunConfig, String> {
    let rho = match (grid.rho, grid.rho_min, grid.rho_max) {
        (Some(v), None, None) => RhoSpec::Single(v),
        (None, Some(min), Some(max)) => RhoSpec::Range {
            min,
            max,
            steps: grid.steps,
        },
        _ => return Err("provide either --rho or --rho-min/--rho-max".into()),
    };
    Ok(RunConfig {
        command: kind,
        n: grid.n,
        rho,
        iters,
        tol: grid.tol,
        precision: match grid.precision {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Extended => Precision::Extended,
        },
        format: match grid.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Human => OutputFormat::Human,
        },
        out: grid.out.clone(),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = match &cli.command {
        Cmd::Constants(g) => to_config(CommandKind::Constants, g, 0),
        Cmd::PsiRoots(g) => to_config(CommandKind::PsiRoots, g, 0),
        Cmd::Maximize(m) => to_config(CommandKind::Maximize, &m.grid, m.iters),
        Cmd::Dahlberg(g) => to_config(CommandKind::Dahlberg, g, 0),
    };
    let config = match config {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("usage error: {msg}");
            return ExitCode::from(1);
        }
    };
    match cli::run(&config) {
        Ok(out) => {
            if config.out.is_none() {
                print!("{}", out.text);
            }
            if out.all_ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more oracle checks failed");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code_for_error(&e) as u8)
        }
    }
}
