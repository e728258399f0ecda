use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use precint::integral::DescentUpdate;
use precint_cli::commands::{self, CliError, CliResult, Output, RunOptions};
use precint_cli::parse::{parse_bound, parse_operator, parse_point};

#[derive(Parser)]
#[command(name = "precint", version, about = "Integral bases of shift operators with algebraic singularities")]
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
    Json,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Descent {
    #[default]
    Interpolate,
    TraceSum,
}

#[derive(Subcommand)]
enum Command {
    /// Anchored solution values along an orbit, as rational functions of q.
    Solutions {
        #[arg(long)]
        operator: String,
        /// A point of the orbit; offsets are relative to it.
        #[arg(long)]
        orbit: String,
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
        #[arg(long, allow_hyphen_values = true)]
        anchor: Option<i64>,
    },
    /// Value of an element of the quotient module at a point.
    Val {
        #[arg(long)]
        operator: String,
        #[arg(long)]
        element: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Reduce the element modulo the operator first.
        #[arg(long)]
        reduce: bool,
    },
    /// Singular offsets and valuation growths of an orbit.
    Growth {
        #[arg(long)]
        operator: String,
        #[arg(long, allow_hyphen_values = true)]
        orbit: String,
    },
    /// Local integral basis at one point, starting from 1, S, ..., S^(r-1).
    LocalBasis {
        #[arg(long)]
        operator: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_enum, default_value_t = Descent::Interpolate)]
        descent: Descent,
    },
    /// Global integral basis over the singular orbits.
    GlobalBasis {
        #[arg(long)]
        operator: String,
        /// `ORBIT=R`: only offsets up to R in the orbit count. Repeatable.
        #[arg(long = "right-bound", allow_hyphen_values = true)]
        right_bound: Vec<String>,
        /// Restrict to orbits of rational points.
        #[arg(long)]
        rational_only: bool,
        #[arg(long, value_enum, default_value_t = Descent::Interpolate)]
        descent: Descent,
    },
    /// Discriminant valuation of a basis at a point.
    Disc {
        #[arg(long)]
        operator: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Basis rows; defaults to 1, S, ..., S^(r-1).
        #[arg(long = "row", allow_hyphen_values = true)]
        rows: Vec<String>,
    },
    /// Compute a global basis and check it by random sampling.
    Verify {
        #[arg(long)]
        operator: String,
        #[arg(long = "right-bound", allow_hyphen_values = true)]
        right_bound: Vec<String>,
        #[arg(long)]
        rational_only: bool,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Scale this row (1-based) by the first point's norm before checking.
        #[arg(long)]
        perturb_row: Option<usize>,
        #[arg(long, value_enum, default_value_t = Descent::Interpolate)]
        descent: Descent,
    },
}

fn run_options(descent: Descent) -> CliResult<RunOptions> {
    Ok(RunOptions {
        update: match descent {
            Descent::Interpolate => DescentUpdate::Interpolate,
            Descent::TraceSum => DescentUpdate::TraceSum,
        },
        max_iter: commands::max_iter_from_env()?,
    })
}

fn bounds(raw: &[String]) -> CliResult<Vec<(String, i64)>> {
    raw.iter().map(|b| Ok(parse_bound(b)?)).collect()
}

fn dispatch(command: Command) -> CliResult<Output> {
    match command {
        Command::Solutions { operator, orbit, from, to, anchor } => {
            commands::solutions(&parse_operator(&operator)?, &parse_point(&orbit)?, from, to, anchor)
        }
        Command::Val { operator, element, at, reduce } => commands::val(
            &parse_operator(&operator)?,
            &parse_operator(&element)?,
            &parse_point(&at)?,
            reduce,
        ),
        Command::Growth { operator, orbit } => {
            commands::growth(&parse_operator(&operator)?, &parse_point(&orbit)?)
        }
        Command::LocalBasis { operator, at, descent } => {
            commands::local_basis(&parse_operator(&operator)?, &parse_point(&at)?, &run_options(descent)?)
        }
        Command::GlobalBasis { operator, right_bound, rational_only, descent } => {
            let z = commands::zspec(&bounds(&right_bound)?, rational_only);
            commands::global_basis(&parse_operator(&operator)?, &z, &run_options(descent)?)
        }
        Command::Disc { operator, at, rows } => {
            let rows = rows.iter().map(|r| parse_operator(r)).collect::<Result<Vec<_>, _>>()?;
            commands::disc(&parse_operator(&operator)?, &parse_point(&at)?, &rows)
        }
        Command::Verify { operator, right_bound, rational_only, samples, seed, perturb_row, descent } => {
            let z = commands::zspec(&bounds(&right_bound)?, rational_only);
            commands::verify(&parse_operator(&operator)?, &z, &run_options(descent)?, samples, seed, perturb_row)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
            }
            if out.clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let code = e.exit_code();
            if let (Format::Json, false) = (cli.format, matches!(e, CliError::Usage(_))) {
                let body = serde_json::json!({ "error": e.message(), "exit_code": code });
                println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            }
            eprintln!("error: {}", e.message());
            ExitCode::from(code as u8)
        }
    }
}
