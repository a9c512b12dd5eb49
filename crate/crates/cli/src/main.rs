use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use quadlat_cli::{run, Format, Options};

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

/// Decide embeddings and compute spinor norms of quadratic lattices over
/// local fields of odd residue characteristic.
#[derive(Parser)]
#[command(name = "quadlat", version)]
struct Args {
    /// Job document (JSON).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Cross-check the transporter reduction loop against the direct jump.
    #[arg(long)]
    check_fast_path: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("malformed input: input: {}: {e}", args.input.display());
            return ExitCode::from(2);
        }
    };
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    match run(&text, &Options { format, check_fast_path: args.check_fast_path }) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
