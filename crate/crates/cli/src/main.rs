mod biinner;
mod convolve;
mod report;
mod source;
mod verify;

use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use fqg_core::biinner::SampleFamily;
use fqg_core::hopf::HopfAlgebra;
use fqg_core::ToleranceConfig;

use crate::report::{AlgebraSummary, Report};
use crate::source::BuildArgs;

#[derive(Parser)]
#[command(name = "fqg", version, about = "Finite quantum group workbench")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Relative equality tolerance
    #[arg(long, global = true, default_value_t = ToleranceConfig::default().eq_tol)]
    tol_eq: f64,

    /// Smallest singular value treated as invertible
    #[arg(long, global = true, default_value_t = ToleranceConfig::default().inv_tol)]
    tol_inv: f64,

    /// Eigenvalue floor for positivity
    #[arg(long, global = true, default_value_t = ToleranceConfig::default().psd_tol)]
    tol_psd: f64,

    /// Seed for every random draw
    #[arg(long, global = true, env = "FQG_SEED", default_value_t = 0)]
    seed: u64,

    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Print wall-clock time to stderr
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Hopf axioms, the dual, Fourier transform, convolution, Jordan decomposition
    /// and the multiplicative unitary
    Verify {
        #[command(flatten)]
        build: BuildArgs,

        /// Random samples per randomized check
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Compare the definitional bi-inner classifier with identity-component membership
    Biinner {
        #[command(flatten)]
        build: BuildArgs,

        /// Samples per family
        #[arg(long, default_value_t = 100)]
        samples: usize,

        /// Sample families: haar, identity_component, reflection
        #[arg(long, value_delimiter = ',', default_value = "haar", value_parser = parse_family)]
        families: Vec<SampleFamily>,
    },
    /// Convolve two elements, given inline as JSON lists of blocks or as files
    Convolve {
        #[command(flatten)]
        build: BuildArgs,

        #[arg(long, value_name = "ELEMENT", allow_hyphen_values = true)]
        a: String,

        #[arg(long, value_name = "ELEMENT", allow_hyphen_values = true)]
        b: String,
    },
}

fn parse_family(s: &str) -> Result<SampleFamily, String> {
    SampleFamily::parse(s).ok_or_else(|| {
        let names: Vec<&str> = SampleFamily::ALL.iter().map(|f| f.name()).collect();
        format!("unknown family {s:?}; expected one of {}", names.join(", "))
    })
}

fn build_args(command: &Command) -> &BuildArgs {
    match command {
        Command::Verify { build, .. }
        | Command::Biinner { build, .. }
        | Command::Convolve { build, .. } => build,
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    let tol = ToleranceConfig::new(g.tol_eq, g.tol_inv, g.tol_psd)?;
    let build = build_args(&cli.command);
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let mut report = Report::new(echo.join(" "), build.spec(), g.seed, tol);

    let h: HopfAlgebra = build.build(&tol)?;
    report.algebra = Some(AlgebraSummary::of(&h));
    if verify::axiom_checks(&mut report, &h, "axiom ", &tol) {
        match &cli.command {
            Command::Verify { samples, .. } => verify::run(&mut report, &h, *samples, &tol),
            Command::Biinner {
                samples, families, ..
            } => biinner::run(&mut report, &h, families, *samples, &tol),
            Command::Convolve { a, b, .. } => {
                let a = convolve::parse_element(a, &h)?;
                let b = convolve::parse_element(b, &h)?;
                convolve::run(&mut report, &h, &a, &b, &tol)?;
            }
        }
    }
    report.finish();
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    if cli.global.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(report) => {
            if cli.global.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
