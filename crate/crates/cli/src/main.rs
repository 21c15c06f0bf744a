use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tbss_core::analysis::{compile_itrm, strong_looping_time, ItrmProgram};
use tbss_core::engine::{run_with, Restriction, RunConfig, TraceLevel, Variant, Verdict};
use tbss_core::lang::{decode_program, encode_program, parse_program, Program};
use tbss_core::number::Rational;
use tbss_core::ordinal::{ordinal_to_code, Ordinal};
use tbss_core::transforms::{iterate, iterate_prefix, to_unit_interval, Mode};

mod report;

#[derive(Parser)]
#[command(name = "tbss", version, about = "Transfinite BSS machine toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Machine {
    /// Limit rule: itbm, witbm, sitbm, bsitbm or ssitbm.
    #[arg(long, default_value = "sitbm")]
    variant: Variant,
    /// Last stage examined, in ordinal syntax such as `w^2+3`.
    #[arg(long, default_value = "w^3")]
    budget: Ordinal,
    /// Deepest limit level that is accelerated.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Allowed register values: rationals, integers, naturals, dyadics or `set:a,b,..`.
    #[arg(long = "restrict", default_value = "rationals")]
    restriction: Restriction,
    /// Input value for the next register, starting at R1.
    #[arg(long = "input")]
    inputs: Vec<Rational>,
    #[arg(long, value_enum, default_value = "off")]
    trace: Trace,
}

#[derive(Clone, Copy, ValueEnum)]
enum Trace {
    Off,
    Limits,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Witbm,
    Bsitbm,
    Ssitbm,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program and print its verdict.
    Run {
        file: PathBuf,
        #[command(flatten)]
        machine: Machine,
    },
    /// Print the conjugate of a program acting on (0, 1).
    Transform {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "witbm")]
        mode: ModeArg,
    },
    /// Print the rational code of a program.
    Encode { file: PathBuf },
    /// Print the program with the given code.
    Decode { code: Rational },
    /// Print the stage at which the first strong loop completes.
    Loopcheck {
        file: PathBuf,
        #[command(flatten)]
        machine: Machine,
    },
    /// Iterate a program on sequence codes up to `theta` (below w^2).
    Iterate {
        file: PathBuf,
        #[arg(long)]
        theta: Ordinal,
        /// Print this many leading bits instead of the exact value.
        #[arg(long)]
        bits: Option<usize>,
        #[command(flatten)]
        machine: Machine,
    },
    /// Compile an ITRM program into a BSS program.
    Itrm { file: PathBuf },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: 2, message: message.to_string() }
    }

    fn module(message: impl ToString) -> Self {
        Failure { code: 3, message: message.to_string() }
    }
}

impl Machine {
    fn config(&self) -> RunConfig {
        let level = match self.trace {
            Trace::Off => TraceLevel::Off,
            Trace::Limits => TraceLevel::Limits,
            Trace::All => TraceLevel::All,
        };
        RunConfig::new(self.variant)
            .budget(self.budget.clone())
            .depth(self.depth)
            .restriction(self.restriction.clone())
            .trace(level)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut buf = String::new();
        return std::io::stdin()
            .read_to_string(&mut buf)
            .map(|_| buf)
            .map_err(|e| Failure::usage(format!("stdin: {e}")));
    }
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Program, Failure> {
    parse_program(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn exit_code(v: &Verdict) -> u8 {
    match v {
        Verdict::Halted { .. } => 0,
        Verdict::Diverged { .. } => 10,
        Verdict::Crashed { .. } => 11,
        Verdict::Unresolved { .. } => 12,
        Verdict::BudgetExhausted { .. } => 13,
    }
}

fn execute(cmd: Command) -> Result<(String, u8), Failure> {
    match cmd {
        Command::Run { file, machine } => {
            let p = load(&file)?;
            let res = run_with(&p, &machine.inputs, &machine.config());
            let mut out = String::new();
            for rec in &res.trace {
                out.push_str(&format!("{rec}\n"));
            }
            out.push_str(&report::verdict_block(&res));
            Ok((out, exit_code(&res.verdict)))
        }
        Command::Transform { file, mode } => {
            let mode = match mode {
                ModeArg::Witbm => Mode::Witbm,
                ModeArg::Bsitbm => Mode::Bsitbm,
                ModeArg::Ssitbm => Mode::Ssitbm,
            };
            Ok((to_unit_interval(&load(&file)?, mode).to_string(), 0))
        }
        Command::Encode { file } => Ok((format!("{}\n", encode_program(&load(&file)?)), 0)),
        Command::Decode { code } => {
            let p = decode_program(&code).map_err(Failure::module)?;
            Ok((p.to_string(), 0))
        }
        Command::Loopcheck { file, machine } => {
            let p = load(&file)?;
            let t = strong_looping_time(&p, &machine.inputs, &machine.config()).map_err(Failure::module)?;
            Ok((format!("looping time: {t}\n"), 0))
        }
        Command::Iterate { file, theta, bits, machine } => {
            let p = load(&file)?;
            let code = ordinal_to_code(&theta, 12).map_err(Failure::usage)?;
            let (v, b) = (machine.variant, machine.budget.clone());
            match bits {
                Some(n) => {
                    let prefix = iterate_prefix(&p, &theta, &code, v, b, n).map_err(Failure::module)?;
                    let s: String = prefix.iter().map(|&x| if x { '1' } else { '0' }).collect();
                    Ok((format!("bits: {s}\n"), 0))
                }
                None => {
                    let out = iterate(&p, &theta, &code, v, b).map_err(Failure::module)?;
                    Ok((format!("value: {}\nruns: {}\n", out.value, out.runs), 0))
                }
            }
        }
        Command::Itrm { file } => {
            let q: ItrmProgram = read(&file)?.parse().map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
            Ok((compile_itrm(&q).to_string(), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
