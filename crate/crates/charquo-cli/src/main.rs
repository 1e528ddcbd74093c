//! `charquo`: witness construction, orbit pipeline, counting oracle and the
//! quantum representation engine from the command line.
//!
//! JSON goes to stdout (or `--out`), diagnostics to stderr. Exit codes:
//! 0 success, 1 precondition or assumption failure, 2 budget, 3 internal
//! invariant violation.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use charquo::witness::{KeyVerification, PrimeMode, COUNT_BOUND};
use clap::{Parser, Subcommand, ValueEnum};

use commands::{CountArgs, OrbitArgs, QrepArgs, WitnessArgs};
use output::{atomic_write, json_bytes, render_text, Exit, Failure};

#[derive(Parser, Debug)]
#[command(name = "charquo", version, about = "Characteristic finite quotients of F2 from braid orbits over PSL2(F_p)")]
struct Cli {
    /// Worker threads (default: available parallelism; 1 forces the sequential path).
    #[arg(long, global = true, env = "CHARQUO_THREADS")]
    threads: Option<usize>,
    /// Write the JSON result to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print `key: value` lines instead of JSON on stdout.
    #[arg(long, global = true)]
    text: bool,
    /// Suppress diagnostics on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Strict,
    Relaxed,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum VerifyKeysArg {
    Auto,
    Always,
    Never,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the witness point at a prime and check its assumptions.
    Witness {
        /// Prime; when omitted, the least admissible prime >= --min.
        p: Option<u64>,
        #[arg(long, value_enum, default_value = "relaxed")]
        mode: ModeArg,
        #[arg(long, default_value_t = 2)]
        min: u64,
    },
    /// Enumerate the witness orbit and classify the induced permutation group.
    Orbit {
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4_000_000)]
        max_points: usize,
        /// Write the orbit keys in the binary dump format.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Random words tried by the giant certificate search.
        #[arg(long, default_value_t = 2000)]
        max_words: u64,
        #[arg(long, default_value_t = 100)]
        primitivity_samples: usize,
        #[arg(long, value_enum, default_value = "auto")]
        verify_keys: VerifyKeysArg,
        /// Include wall-clock stage timings (makes output non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Count the quotient set through its trace equations.
    Count {
        p: u64,
        /// Orbit dump; reports orbit size over the count.
        #[arg(long)]
        orbit: Option<PathBuf>,
        #[arg(long, default_value_t = COUNT_BOUND)]
        bound: u64,
    },
    /// Braid matrices on the highest-weight space W_{n,l}.
    Qrep {
        n: usize,
        ell: u32,
        #[arg(long)]
        verify: bool,
        /// Reduce mod a prime r at (q0, s0).
        #[arg(long, num_args = 3, value_names = ["R", "Q0", "S0"])]
        specialize: Option<Vec<u64>>,
        /// Write the Laurent matrices as JSON.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Write the reduced matrices as JSON (needs --specialize).
        #[arg(long)]
        export_specialized: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_ell: u32,
    },
    /// Quick checks of every subsystem.
    Selftest,
}

fn run(cli: &Cli) -> output::CmdResult {
    match &cli.cmd {
        Command::Witness { p, mode, min } => commands::witness(&WitnessArgs {
            p: *p,
            mode: match mode {
                ModeArg::Strict => PrimeMode::Strict,
                ModeArg::Relaxed => PrimeMode::Relaxed,
            },
            min: *min,
        }),
        Command::Orbit {
            p,
            seed,
            max_points,
            dump,
            max_words,
            primitivity_samples,
            verify_keys,
            timings,
        } => commands::orbit(&OrbitArgs {
            p: *p,
            seed: *seed,
            max_points: *max_points,
            dump: dump.clone(),
            giant_budget: *max_words,
            primitivity_samples: *primitivity_samples,
            verify_keys: match verify_keys {
                VerifyKeysArg::Auto => KeyVerification::Auto,
                VerifyKeysArg::Always => KeyVerification::Always,
                VerifyKeysArg::Never => KeyVerification::Never,
            },
            timings: *timings,
        }),
        Command::Count { p, orbit, bound } => commands::count(&CountArgs {
            p: *p,
            orbit: orbit.clone(),
            bound: *bound,
        }),
        Command::Qrep {
            n,
            ell,
            verify,
            specialize,
            export,
            export_specialized,
            max_n,
            max_ell,
        } => commands::qrep(&QrepArgs {
            n: *n,
            ell: *ell,
            verify: *verify,
            specialize: specialize.clone(),
            export: export.clone(),
            export_specialized: export_specialized.clone(),
            max_n: *max_n,
            max_ell: *max_ell,
        }),
        Command::Selftest => commands::selftest(),
    }
}

fn emit(cli: &Cli, v: &serde_json::Value) -> Result<(), Failure> {
    let json = json_bytes(v);
    match &cli.out {
        Some(path) => {
            atomic_write(path, json.as_bytes())?;
            if cli.text {
                print!("{}", render_text(v));
            }
        }
        None if cli.text => print!("{}", render_text(v)),
        None => print!("{json}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(Exit::Precondition as u8);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(Exit::Internal as u8);
        }
    }
    let code = match run(&cli) {
        Ok((v, exit)) => match emit(&cli, &v) {
            Ok(()) => exit,
            Err(f) => {
                eprintln!("error: {}", f.message);
                f.exit
            }
        },
        Err(f) => {
            if !cli.quiet {
                eprintln!("error: {}", f.message);
            }
            if let Some(partial) = &f.partial {
                if let Err(e) = emit(&cli, partial) {
                    eprintln!("error: {}", e.message);
                }
            }
            f.exit
        }
    };
    if code == Exit::Internal && !cli.quiet {
        eprintln!("error: an internal check failed; see the report");
    }
    ExitCode::from(code as u8)
}
