use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use reprk::church::ProbeFn;
use reprk::combinators::table_csv;
use reprk::config::ExperimentConfig;
use reprk::fixtures::{self, FixtureSet};
use reprk::numerals::{
    digits_to_value, four_squares, prime_sum, value_to_digits, DigitString, PositionalSystem,
    SystemKind,
};
use reprk::obs::{Settled, Trace};
use reprk::report::{estimate_tables, ledger_csv, report_text, run_hierarchy, tables_csv};
use reprk::vm::assemble_bits;
use reprk::{Combinator, Nat, Oracle, OracleSource, Universe, Word};

#[derive(Parser)]
#[command(
    name = "repr",
    version,
    about = "Kolmogorov complexities of integer representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Numeral systems, four squares and prime sums.
    Numeral {
        #[command(subcommand)]
        action: NumeralCmd,
    },
    /// Run a program file (a word over {0,1}).
    Run(RunArgs),
    /// Wrap a program with a combinator header: couple(e, p).
    Compile {
        #[arg(long)]
        combinator: String,
        program: PathBuf,
    },
    /// Print the combinator table.
    Combinators {
        #[arg(long)]
        table: bool,
    },
    /// Assemble machine code into a RAW program word.
    Asm { source: PathBuf },
    /// Budgeted upper-bound tables by exhaustive enumeration.
    Estimate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Tables, the verified ledger and the text report.
    Hierarchy {
        #[arg(long)]
        config: PathBuf,
    },
    /// List the fixture corpus, or write it to a directory.
    Fixtures {
        #[arg(long, value_name = "DIR")]
        write: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum NumeralCmd {
    Encode {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 10)]
        k: u32,
        #[arg(allow_hyphen_values = true)]
        n: String,
    },
    Decode {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 10)]
        k: u32,
        #[arg(allow_hyphen_values = true)]
        digits: String,
    },
    Foursquares {
        n: u64,
    },
    Primesum {
        n: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RunMode {
    Halt,
    Stream,
    Func,
    Func2,
    Effop,
    Oracle,
    Ostream,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArgFnName {
    Succ,
    Double,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    mode: RunMode,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    /// Input value; repeat for two-argument functions.
    #[arg(long)]
    input: Vec<u64>,
    /// Argument function for effective operations.
    #[arg(long, value_enum, default_value_t = ArgFnName::Succ)]
    arg: ArgFnName,
    /// Scripted oracle answers, e.g. `1,0`; otherwise the registry-backed oracle.
    #[arg(long)]
    answers: Option<String>,
    program: PathBuf,
}

/// Failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl fmt::Display) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }

    fn missing(e: impl fmt::Display) -> Self {
        Failure {
            code: 3,
            message: e.to_string(),
        }
    }

    fn violation(e: impl fmt::Display) -> Self {
        Failure {
            code: 4,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Numeral { action } => numeral(action),
        Command::Run(args) => run(args),
        Command::Compile {
            combinator,
            program,
        } => {
            let comb: Combinator = combinator.parse().map_err(Failure::usage)?;
            if comb == Combinator::Unknown {
                return Err(Failure::usage("UNKNOWN is not a combinator"));
            }
            let p = read_word(&program)?;
            println!("{}", comb.compile(&p));
            Ok(())
        }
        Command::Combinators { table: _ } => {
            print!("{}", table_csv());
            Ok(())
        }
        Command::Asm { source } => {
            let text = fs::read_to_string(&source)
                .map_err(|e| Failure::usage(format!("{}: {e}", source.display())))?;
            let code = assemble_bits(&text).map_err(Failure::usage)?;
            println!("{}", fixtures::raw_word(&code));
            Ok(())
        }
        Command::Estimate { config } => {
            let cfg = read_config(&config)?;
            let set = load_fixtures(&cfg)?;
            let csv = tables_csv(&estimate_tables(&cfg, &set.universe(), &cfg.notions));
            write_output(&cfg.output_dir, "estimate.csv", &csv)?;
            print!("{csv}");
            Ok(())
        }
        Command::Hierarchy { config } => {
            let cfg = read_config(&config)?;
            let set = load_fixtures(&cfg)?;
            let h = run_hierarchy(&cfg, &set.universe()).map_err(Failure::violation)?;
            let report = report_text(&h);
            write_output(&cfg.output_dir, "tables.csv", &tables_csv(&h.tables))?;
            write_output(&cfg.output_dir, "ledger.csv", &ledger_csv(&h.witnesses))?;
            write_output(&cfg.output_dir, "report.txt", &report)?;
            print!("{report}");
            Ok(())
        }
        Command::Fixtures { write } => {
            let set = fixtures::builtin();
            if let Some(dir) = write {
                fixtures::write_dir(&set, &dir).map_err(Failure::usage)?;
                println!("wrote {} fixtures to {}", set.fixtures.len(), dir.display());
            } else {
                for f in &set.fixtures {
                    println!(
                        "{:<14} {:<8} {}",
                        f.name(),
                        f.meta.mode.to_string(),
                        f.meta.behavior
                    );
                }
            }
            Ok(())
        }
    }
}

fn numeral(action: NumeralCmd) -> Outcome {
    match action {
        NumeralCmd::Encode { system, k, n } => {
            let sys = system_of(&system, k)?;
            let n: BigInt = n
                .parse()
                .map_err(|_| Failure::usage(format!("not an integer: {n}")))?;
            println!("{}", value_to_digits(&sys, &n).map_err(Failure::usage)?);
        }
        NumeralCmd::Decode { system, k, digits } => {
            let sys = system_of(&system, k)?;
            let ds: DigitString = digits.parse().map_err(Failure::usage)?;
            println!("{}", digits_to_value(&sys, &ds).map_err(Failure::usage)?);
        }
        NumeralCmd::Foursquares { n } => {
            let (x, y, z, t) = four_squares(n);
            println!("{x} {y} {z} {t}");
        }
        NumeralCmd::Primesum { n } => {
            let ps = prime_sum(n).map_err(Failure::usage)?;
            let parts: Vec<String> = ps.iter().map(u64::to_string).collect();
            println!("{}", parts.join(" "));
        }
    }
    Ok(())
}

fn system_of(name: &str, k: u32) -> Result<PositionalSystem, Failure> {
    let kind: SystemKind = name.parse().map_err(Failure::usage)?;
    PositionalSystem::new(kind, k).map_err(Failure::usage)
}

fn read_word(path: &Path) -> Result<Word, Failure> {
    fixtures::read_program(path).map_err(Failure::usage)
}

fn read_config(path: &Path) -> Result<ExperimentConfig, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    text.parse().map_err(Failure::usage)
}

fn load_fixtures(cfg: &ExperimentConfig) -> Result<FixtureSet, Failure> {
    let dir = cfg.fixtures.clone().unwrap_or_else(fixtures::default_dir);
    fixtures::load_dir(&dir).map_err(Failure::missing)
}

fn write_output(dir: &Path, name: &str, contents: &str) -> Outcome {
    let io = |e: std::io::Error| Failure::usage(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join(name), contents).map_err(io)
}

fn settled_text(s: Settled) -> &'static str {
    match s {
        Settled::Complete => "complete",
        Settled::Stable => "stable",
        Settled::Unstable => "unstable",
    }
}

fn certainty_text(certain: bool) -> &'static str {
    if certain {
        ""
    } else {
        ", assumed oracle answers"
    }
}

fn print_halting(t: &Trace) {
    match &t.halted {
        Some(v) => println!(
            "Halted with {v} after {} steps{}",
            t.steps,
            certainty_text(t.certain)
        ),
        None => println!("No halt within {} steps", t.budget),
    }
}

fn print_stream(t: &Trace) {
    let settled = if t.settled.acceptable() {
        "stable"
    } else {
        "unstable"
    };
    println!(
        "Emitting {} ({settled}{})",
        t.emits(),
        certainty_text(t.certain)
    );
}

fn print_applied(label: String, value: Option<Nat>, steps: u64, budget: u64) {
    match value {
        Some(v) => println!("{label} = {v} ({steps} steps)"),
        None => println!("{label} undefined within {budget} steps"),
    }
}

fn run(args: RunArgs) -> Outcome {
    let program = read_word(&args.program)?;
    let set = match args.mode {
        // only oracle runs consult the registry
        RunMode::Oracle | RunMode::Ostream if args.answers.is_none() => {
            fixtures::load_dir(&fixtures::default_dir()).map_err(Failure::missing)?
        }
        _ => FixtureSet {
            fixtures: Vec::new(),
            registry: Default::default(),
        },
    };
    let u: Universe = set.universe();
    let mut oracle = match &args.answers {
        Some(list) => OracleSource::scripted(parse_answers(list)?),
        None => OracleSource::RegistryAugmented {
            budget: args.budget,
        },
    };
    let t = args.budget;
    let input = |i: usize| -> Result<Nat, Failure> {
        args.input
            .get(i)
            .map(|&x| Nat::from(x))
            .ok_or_else(|| Failure::usage(format!("mode needs --input #{}", i + 1)))
    };
    let eval = |e: reprk::EvalError| Failure::usage(e);
    match args.mode {
        RunMode::Halt => print_halting(&u.run_nat(&program, None, t).map_err(eval)?),
        RunMode::Stream => print_stream(&u.run_stream(&program, None, t).map_err(eval)?),
        RunMode::Oracle => {
            let tr = u
                .run_nat(&program, Some(&mut oracle as &mut dyn Oracle), t)
                .map_err(eval)?;
            print_halting(&tr);
        }
        RunMode::Ostream => {
            let tr = u
                .run_stream(&program, Some(&mut oracle as &mut dyn Oracle), t)
                .map_err(eval)?;
            print_stream(&tr);
        }
        RunMode::Func if args.input.is_empty() => {
            let d = u.domain(&program, t).map_err(eval)?;
            let points: Vec<String> = d.point_list().map(|p| p.to_string()).collect();
            println!(
                "Domain {{{}}} ({} points, {})",
                points.join(","),
                d.count(),
                settled_text(d.settled)
            );
        }
        RunMode::Func => {
            let x = input(0)?;
            let a = u.apply_func(&program, &x, t).map_err(eval)?;
            print_applied(format!("f({x})"), a.value, a.steps, t);
        }
        RunMode::Func2 => {
            let (x, y) = (input(0)?, input(1)?);
            let a = u.apply_rel(&program, &x, &y, t).map_err(eval)?;
            print_applied(format!("f({x},{y})"), a.value, a.steps, t);
        }
        RunMode::Effop => {
            let x = input(0)?;
            let (f, name) = match args.arg {
                ArgFnName::Succ => (ProbeFn::Successor, "succ"),
                ArgFnName::Double => (ProbeFn::Doubling, "double"),
            };
            let a = u.apply_effop(&program, f.as_arg(), &x, t).map_err(eval)?;
            print_applied(format!("F({name})({x})"), a.value, a.steps, t);
        }
    }
    Ok(())
}

fn parse_answers(list: &str) -> Result<Vec<bool>, Failure> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| match s.trim() {
            "1" | "yes" | "true" => Ok(true),
            "0" | "no" | "false" => Ok(false),
            other => Err(Failure::usage(format!("bad oracle answer {other:?}"))),
        })
        .collect()
}
