use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod report;

use eulob::problem::load_problem;
use eulob::MonomialOrder;

#[derive(Parser, Debug)]
#[command(name = "eulob", version, about = "Exact local Euler obstructions and relative local Euler obstructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Problem file (JSON)
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Seed for every genericity draw; overrides the seed in the problem file
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monomial order used when printing ideal generators
    #[arg(long, global = true, value_enum, default_value_t = Order::Grevlex)]
    order: Order,

    /// Emit the report as JSON
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Conormal cycle of the regular part of X
    Conormal,
    /// Conormal-regular critical locus of f
    SigmaCnr,
    /// Lê–Vogel tower and numbers at the point
    Levogel,
    /// Relative local Euler obstruction by the Lê–Vogel route
    EuRel,
    /// Relative local Euler obstruction by the isolated intersection formula
    EuRelIsolated,
    /// Euler obstructions from stratification link data
    StratEu,
    /// Relative Euler obstruction from link and Milnor-fiber data
    StratEuRel,
    /// Characteristic-cycle coefficients of a constructible function
    Cc,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Conormal => "conormal",
            Command::SigmaCnr => "sigma-cnr",
            Command::Levogel => "levogel",
            Command::EuRel => "eu-rel",
            Command::EuRelIsolated => "eu-rel-isolated",
            Command::StratEu => "strat-eu",
            Command::StratEuRel => "strat-eu-rel",
            Command::Cc => "cc",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Order {
    Lex,
    Grevlex,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(input) = &cli.input else {
        eprintln!("error: --input PATH is required");
        return ExitCode::from(1);
    };
    let order = match cli.order {
        Order::Lex => MonomialOrder::Lex,
        Order::Grevlex => MonomialOrder::GrevLex,
    };
    let result = load_problem(input).and_then(|problem| {
        let opts = report::Options { seed: cli.seed, order, input: input.display().to_string() };
        report::run(cli.command, &problem, &opts)
    });
    match result {
        Ok(rep) => {
            let text = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&rep.body).expect("report serializes"))
            } else {
                report::render_text(&rep.body)
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(if rep.verified { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
