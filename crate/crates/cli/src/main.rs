use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use smooth_transitions_cli::verify::{self, Suite};
use smooth_transitions_cli::{
    format, sample, Built, CliError, Descriptor, Family, Format, StepSpec, EXIT_FAILED, EXIT_OK,
    EXIT_USAGE,
};

/// Smooth step functions, blend-to-zero operators and smooth transitions.
#[derive(Parser)]
#[command(name = "smooth-transitions", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print `x,value[,d1..dk]` at the given points.
    Eval {
        #[command(flatten)]
        source: Source,
        /// Comma-separated evaluation points.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        at: Vec<f64>,
        /// Number of derivative columns.
        #[arg(long, default_value_t = 0)]
        derivs: usize,
    },
    /// Sample uniformly to CSV, JSON or SVG.
    Sample {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 101)]
        n: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        derivs: usize,
    },
    /// Run a verification suite; exit 0 if every check passes, 1 otherwise.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long, default_value_t = 4)]
        max_order: u32,
        #[arg(long)]
        max_m: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        /// A single `l,r` member (symmetry suite, beta/rational).
        #[arg(long, value_parser = parse_orders)]
        orders: Option<(u32, u32)>,
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Random cases per parameter combination.
        #[arg(long, default_value_t = 3)]
        cases: usize,
        /// Write the JSON report here (`-` for standard output).
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Source {
    #[arg(long, value_enum, conflicts_with = "descriptor", required_unless_present = "descriptor")]
    family: Option<Family>,
    /// Step orders `l,r` (beta, rational).
    #[arg(long, value_parser = parse_orders, default_value = "1,1")]
    orders: (u32, u32),
    /// Trig family parameter.
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Fabius iteration tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Fabius grid size.
    #[arg(long, default_value_t = 4096)]
    grid: usize,
    /// Transition or blend descriptor (JSON).
    #[arg(long)]
    descriptor: Option<PathBuf>,
}

fn parse_orders(s: &str) -> Result<(u32, u32), String> {
    let (l, r) = s.split_once(',').ok_or("expected `l,r`")?;
    let p = |v: &str| v.trim().parse::<u32>().map_err(|e| format!("`{v}`: {e}"));
    Ok((p(l)?, p(r)?))
}

impl Source {
    fn build(&self) -> Result<Built, CliError> {
        if let Some(path) = &self.descriptor {
            let (d, base) = Descriptor::from_path(path)?;
            return d.build(&base);
        }
        let family = self.family.expect("clap enforces family or descriptor");
        let spec = StepSpec {
            family,
            orders: self.orders,
            m: self.m,
            tol: self.tol,
            grid: self.grid,
        };
        Ok(Built::Blend(spec.build()?))
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Eval { source, at, derivs } => {
            let f = source.build()?;
            let mut out = String::new();
            for x in at {
                if !f.domain().contains(x) {
                    return Err(CliError::Usage(format!("x = {x} outside {}", f.domain())));
                }
                let mut row = vec![format::number(x), format::number(f.value(x))];
                if derivs > 0 {
                    let d = f.derivatives(x, derivs)?;
                    row.extend(d[1..].iter().map(|&v| format::number(v)));
                }
                out += &row.join(",");
                out.push('\n');
            }
            print!("{out}");
            Ok(EXIT_OK)
        }
        Command::Sample { source, n, output, format, derivs } => {
            let table = sample(&source.build()?, n, derivs)?;
            write_out(output.as_ref(), &table.render(format)?)?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite, family, max_order, max_m, m, orders, seed, cases, report } => {
            let opts = verify::Options { family, max_order, max_m, m, orders, seed, cases };
            let rep = verify::run(suite, &opts)?;
            print!("{}", rep.table());
            if let Some(path) = report {
                let json = serde_json::to_string_pretty(&rep).map_err(|e| CliError::Usage(e.to_string()))?;
                write_out(Some(&path), &(json + "\n"))?;
            }
            Ok(if rep.passed { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code as u8)
}
