//! `plastic`: deterministic reports on substitution subshifts.
//!
//! Every run is reproducible from its command line alone: no
//! configuration files, no environment variables, byte-identical output
//! for identical inputs and flags. JSON reports carry the tool version
//! and a digest of the input file so results trace back to the exact
//! definition they came from; errors go to stderr only, never into the
//! data stream.

mod commands;
mod definition;
mod emit;

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use commands::{ConjugacyArgs, Failure, Format};

const AFTER_HELP: &str = "\
Definition files are line-oriented; '#' starts a comment:
  alphabet: a b
  rule: a -> a b
  rule: b -> a
  lengths: 1 1.618    (optional, one positive tile length per letter)

Exit codes: 0 success; 1 usage or parse error; 2 failed precondition
(non-primitive substitution, non-contracting length change); 3 iteration
did not converge or ran out of budget.";

#[derive(Parser)]
#[command(
    name = "plastic",
    version,
    about = "Reports on substitution subshifts: factors, balance, spectra, verdicts, conjugacies",
    after_help = AFTER_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every factor of length N, one per line in alphabet order
    Factors {
        /// Substitution definition file
        file: PathBuf,
        /// Factor length
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Occurrence spread (max minus min) of targets over all windows
    Balance {
        /// Substitution definition file
        file: PathBuf,
        /// Largest window length to profile
        #[arg(long)]
        max_n: usize,
        /// Target word, e.g. "a b" (or "ab" over single-character
        /// alphabets); repeatable, defaults to every letter
        #[arg(long = "word", value_name = "TOKENS")]
        words: Vec<String>,
        /// Recode with this collaring radius first and profile collared
        /// letters over a one-sided prefix scan
        #[arg(long, value_name = "R")]
        collar: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Perron eigendata and secondary spectrum of the substitution matrix
    Spectral {
        /// Substitution definition file
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Verdict combining the spectral certificate with balance evidence
    Plasticity {
        /// Substitution definition file
        file: PathBuf,
        /// New tile lengths, comma-separated in alphabet order
        #[arg(long, value_delimiter = ',', value_name = "L1,L2,...", required = true)]
        to: Vec<f64>,
        /// Balance observation horizon
        #[arg(long, default_value_t = 200)]
        max_n: usize,
        /// Also profile every factor up to this length as a word target
        #[arg(long, default_value_t = 2)]
        word_len: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Level-map trace toward a conjugacy onto new tile lengths
    Conjugacy {
        /// Substitution definition file
        file: PathBuf,
        /// Source tile lengths; defaults to the file's lengths line, or
        /// to unit lengths
        #[arg(long, value_delimiter = ',', value_name = "L1,L2,...")]
        from: Option<Vec<f64>>,
        /// Target tile lengths, comma-separated in alphabet order
        #[arg(long, value_delimiter = ',', value_name = "L1,L2,...", required = true)]
        to: Vec<f64>,
        /// Deepest supertile level to try
        #[arg(long, default_value_t = 30)]
        max_level: u32,
        /// Gap size under which successive levels count as converged
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Translation samples for the equivariance residual
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Base point: the canonical suspension translated this far
        #[arg(long, default_value_t = 0.0)]
        at: f64,
        /// First level of the gap-rate fit window
        #[arg(long, default_value_t = 5)]
        fit_from: u32,
        /// Last level of the gap-rate fit window
        #[arg(long, default_value_t = 15)]
        fit_to: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Window balance of a mechanical binary sequence prefix
    Sturmian {
        /// Slope, strictly between 0 and 1
        #[arg(long)]
        alpha: f64,
        /// Intercept in [0, 1)
        #[arg(long, default_value_t = 0.0)]
        rho: f64,
        /// Prefix length to scan
        #[arg(long)]
        length: usize,
        /// Largest window length to profile
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// The Thue-Morse factor family with linearly growing ab/ba surplus
    TmAdversary {
        /// Family index; the surplus over the mean rate grows like m/3
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Output {
    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Report format; each subcommand has a natural default
    #[arg(long, value_enum, value_name = "csv|json")]
    format: Option<Format>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits usage errors with status 2 by default, but 2 is
            // reserved for precondition failures here; usage is 1.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(f) = run(cli.command) {
        eprintln!("plastic: {}", f.message);
        std::process::exit(f.code);
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let (text, output) = match command {
        Command::Factors { file, n, output } => {
            let format = output.format.unwrap_or(Format::Csv);
            (commands::factors_cmd(&file, n, format)?, output)
        }
        Command::Balance {
            file,
            max_n,
            words,
            collar,
            output,
        } => {
            let format = output.format.unwrap_or(Format::Csv);
            (
                commands::balance_cmd(&file, max_n, &words, collar, format)?,
                output,
            )
        }
        Command::Spectral { file, output } => {
            let format = output.format.unwrap_or(Format::Json);
            (commands::spectral_cmd(&file, format)?, output)
        }
        Command::Plasticity {
            file,
            to,
            max_n,
            word_len,
            output,
        } => {
            let format = output.format.unwrap_or(Format::Json);
            (
                commands::plasticity_cmd(&file, &to, max_n, word_len, format)?,
                output,
            )
        }
        Command::Conjugacy {
            file,
            from,
            to,
            max_level,
            tolerance,
            samples,
            at,
            fit_from,
            fit_to,
            output,
        } => {
            let format = output.format.unwrap_or(Format::Csv);
            let args = ConjugacyArgs {
                from,
                to,
                max_level,
                tolerance,
                samples,
                at,
                fit_from,
                fit_to,
            };
            (commands::conjugacy_cmd(&file, &args, format)?, output)
        }
        Command::Sturmian {
            alpha,
            rho,
            length,
            max_n,
            output,
        } => {
            let format = output.format.unwrap_or(Format::Csv);
            (
                commands::sturmian_cmd(alpha, rho, length, max_n, format)?,
                output,
            )
        }
        Command::TmAdversary { m, output } => {
            let format = output.format.unwrap_or(Format::Json);
            (commands::tm_adversary_cmd(m, format)?, output)
        }
    };
    write_output(&text, output.out.as_deref())
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure {
                    code: 1,
                    message: format!("stdout: {e}"),
                })
        }
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 1,
            message: format!("{}: {e}", path.display()),
        }),
    }
}
