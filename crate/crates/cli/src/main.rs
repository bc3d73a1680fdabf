use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coverlab::Limits;
use coverlab_cli::{
    cmd_axioms, cmd_complete, cmd_heine_borel, cmd_locale_build, cmd_locale_points, cmd_locale_roundtrip, cmd_real_eval,
    cmd_reflect, parse_eps, Outcome, UsageError,
};

#[derive(Parser)]
#[command(name = "coverlab", version, about = "Finite cover spaces, locales and exact reals")]
struct Cli {
    /// Raise the carrier-size guards for enumerating operations.
    #[arg(long, global = true, value_name = "N")]
    max_carrier: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the cover space axioms on a space file.
    Axioms { file: String },
    /// Complete a space (after regular reflection if needed).
    Complete { file: String },
    /// Print the regular reflection of a space.
    Reflect { file: String },
    /// Locale of Cauchy covers.
    Locale {
        #[command(subcommand)]
        action: LocaleCmd,
    },
    /// Exact real arithmetic.
    Real {
        #[command(subcommand)]
        action: RealCmd,
    },
    /// Worked examples.
    Demo {
        #[command(subcommand)]
        action: DemoCmd,
    },
}

#[derive(Subcommand)]
enum LocaleCmd {
    Build { file: String },
    Points { file: String },
    Roundtrip { file: String },
}

#[derive(Subcommand)]
enum RealCmd {
    /// Evaluate an expression to within `--eps`.
    Eval {
        expr: String,
        #[arg(long, default_value = "1/1000000")]
        eps: String,
    },
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Finite subcover of the ε-ball cover of [0, 1].
    HeineBorel {
        #[arg(long, default_value = "1/10")]
        eps: String,
    },
}

fn read(path: &str) -> Result<String, UsageError> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| UsageError::Usage(format!("{path}: {e}")))?;
    Ok(text)
}

fn print(o: Outcome) -> ExitCode {
    let text = serde_json::to_string_pretty(&o.document).expect("json");
    // a closed pipe is not worth a panic
    let _ = writeln!(std::io::stdout(), "{text}");
    if o.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, UsageError> {
    let limits = match cli.max_carrier {
        Some(n) => {
            eprintln!("warning: size guards raised to carrier {n}; enumeration is exponential and may not finish");
            Limits::with_max_carrier(n)
        }
        None => Limits::DEFAULT,
    };
    Ok(match cli.command {
        Command::Axioms { file } => print(cmd_axioms(&read(&file)?)?),
        Command::Complete { file } => print(cmd_complete(&read(&file)?, &limits)?),
        Command::Reflect { file } => print(cmd_reflect(&read(&file)?, &limits)?),
        Command::Locale { action } => match action {
            LocaleCmd::Build { file } => print(cmd_locale_build(&read(&file)?, &limits)?),
            LocaleCmd::Points { file } => print(cmd_locale_points(&read(&file)?, &limits)?),
            LocaleCmd::Roundtrip { file } => print(cmd_locale_roundtrip(&read(&file)?, &limits)?),
        },
        Command::Real { action: RealCmd::Eval { expr, eps } } => {
            let (text, _) = cmd_real_eval(&expr, &parse_eps(&eps)?)?;
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Command::Demo { action: DemoCmd::HeineBorel { eps } } => print(cmd_heine_borel(&parse_eps(&eps)?)?),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
