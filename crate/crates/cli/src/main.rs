//! `flagrank`: secant dimensions, osculating spaces and non-defectivity
//! bounds of flag varieties from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use flagrank::config::Settings;
use flagrank::parse::{parse_budget, parse_h_list, parse_shape_list};
use flagrank::verify::{Suite, VerifyOptions};
use flagrank::{cmd_bounds, cmd_dim, cmd_scan, cmd_secant, cmd_verify, point_flag_corpus, run_scan, CliError, Format, Output};
use flagrank_core::bounds::GateReading;
use flagrank_core::FlagShape;

#[derive(Parser)]
#[command(name = "flagrank", version, about = "Secant dimensions and non-defectivity bounds of flag varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Engine {
    /// Prime for the first computation.
    #[arg(long)]
    prime: Option<u64>,
    /// Prime for the confirming computation.
    #[arg(long)]
    prime2: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random specializations tried before accepting a rank below the expected one.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    cap_ambient: Option<usize>,
    #[arg(long)]
    cap_rows: Option<usize>,
    /// Report cache (newline-delimited JSON).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Worker threads (0: one per core).
    #[arg(long)]
    workers: Option<usize>,
}

impl Engine {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut s = Settings::from_env()?;
        if let Some(v) = self.prime {
            s.prime = v;
        }
        if let Some(v) = self.prime2 {
            s.prime2 = v;
        }
        if let Some(v) = self.seed {
            s.seed = v;
        }
        if let Some(v) = self.trials {
            s.trials = v;
        }
        if let Some(v) = self.cap_ambient {
            s.cap_ambient = v;
        }
        if let Some(v) = self.cap_rows {
            s.cap_rows = v;
        }
        if let Some(v) = &self.cache {
            s.cache = Some(v.clone());
        }
        if let Some(v) = self.workers {
            s.workers = v;
        }
        Ok(s)
    }
}

#[derive(Args, Clone, Copy, Default)]
struct FormatArgs {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

impl FormatArgs {
    fn format(self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Text
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, span and ambient dimension of a shape.
    Dim {
        shape: String,
        #[arg(long)]
        json: bool,
    },
    /// Dimension of the h-secant variety.
    Secant {
        shape: String,
        #[arg(long)]
        h: String,
        /// Skip the confirming run with the second prime.
        #[arg(long)]
        no_confirm: bool,
        /// Compute even when the previous secant is expected to fill the span.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        format: FormatArgs,
        #[command(flatten)]
        engine: Engine,
    },
    /// Closed-form non-defectivity and identifiability bounds.
    Bounds {
        shape: String,
        /// Read the identifiability gate with the product of factor dimensions.
        #[arg(long)]
        corid_literal: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite (osc, wb, flat, proj, chordal, cross).
    Verify {
        suite: String,
        /// Shapes separated by commas or spaces, e.g. "0,1;3,1,2;5".
        #[arg(long)]
        shapes: Option<String>,
        #[arg(long)]
        nmax: Option<usize>,
        /// Time budget such as 60s or 5m.
        #[arg(long)]
        budget: Option<String>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        engine: Engine,
    },
    /// Secant dimensions over a grid of shapes and h values.
    Scan {
        /// Shapes separated by commas or spaces.
        #[arg(long, conflicts_with = "nmax")]
        shapes: Option<String>,
        /// Scan F(0,k;n) for 2 <= n <= nmax.
        #[arg(long)]
        nmax: Option<usize>,
        /// Values of h: "2", "1..4" or "2,5".
        #[arg(long, default_value = "2")]
        h: String,
        #[arg(long)]
        budget: Option<String>,
        #[arg(long)]
        no_confirm: bool,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        format: FormatArgs,
        #[command(flatten)]
        engine: Engine,
    },
}

fn shape(text: &str) -> Result<FlagShape, CliError> {
    Ok(text.parse::<FlagShape>()?)
}

fn single_h(text: &str) -> Result<usize, CliError> {
    match parse_h_list(text)?.as_slice() {
        [h] => Ok(*h),
        _ => Err(CliError::Usage(format!("--h takes one value, got {:?}", text))),
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Dim { shape: s, json } => cmd_dim(&shape(&s)?, if json { Format::Json } else { Format::Text }),
        Command::Secant { shape: s, h, no_confirm, force, format, engine } => {
            cmd_secant(&shape(&s)?, single_h(&h)?, &engine.settings()?, force, !no_confirm, format.format())
        }
        Command::Bounds { shape: s, corid_literal, json } => {
            let reading = if corid_literal { GateReading::Literal } else { GateReading::Dimension };
            cmd_bounds(&shape(&s)?, reading, if json { Format::Json } else { Format::Text })
        }
        Command::Verify { suite, shapes, nmax, budget, json, engine } => {
            let options = VerifyOptions {
                shapes: shapes.as_deref().map(parse_shape_list).transpose()?,
                nmax,
                budget: budget.as_deref().map(parse_budget).transpose()?,
            };
            cmd_verify(suite.parse::<Suite>()?, &options, &engine.settings()?, if json { Format::Json } else { Format::Text })
        }
        Command::Scan { shapes, nmax, h, budget, no_confirm, force, format, engine } => {
            let shapes = match (shapes, nmax) {
                (Some(list), _) => parse_shape_list(&list)?,
                (None, Some(nmax)) => point_flag_corpus(nmax),
                (None, None) => return Err(CliError::Usage("scan needs --shapes or --nmax".into())),
            };
            let hs = parse_h_list(&h)?;
            let budget = budget.as_deref().map(parse_budget).transpose()?;
            let summary = run_scan(&shapes, &hs, &engine.settings()?, force, !no_confirm, budget)?;
            cmd_scan(&summary, format.format())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { flagrank::EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            println!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
