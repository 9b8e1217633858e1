//! `wpl`: batch front end for root classification on weighted projective lines.
//!
//! Exit status is 0 on success, 1 when a relation check finds a failing
//! instance and 2 on any usage or input error.

use std::io::{self, BufRead, Write};
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wpl_core::format::{class_to_json, class_to_text, parse_class, parse_object};
use wpl_core::{ClassVector, LoopModel, RootLattice, RootSystem, WeightType};

#[derive(Parser)]
#[command(
    name = "wpl",
    version,
    about = "Root classification for weighted projective lines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Weight type, e.g. `2,3,5` or `{"weights":[2,3,5]}`.
    #[arg(long, allow_hyphen_values = true)]
    weights: String,

    /// Read one input per line from stdin instead of the flag.
    #[arg(long)]
    stdin: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum VectorFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a class vector as not a root, real or imaginary.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Class vector in text (`*=1; [1,1]=1; d=0`) or JSON form.
        #[arg(long, required_unless_present = "stdin")]
        vector: Option<String>,
    },
    /// Enumerate roots by height bound and delta range, one JSON object per line.
    Roots {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_height: i64,
        /// Inclusive range `a..b` or a single integer.
        #[arg(long, default_value = "0..0", allow_hyphen_values = true)]
        delta: String,
    },
    /// Evaluate the symmetric form on two class vectors.
    Pair {
        #[command(flatten)]
        common: Common,
        #[arg(long, required_unless_present = "stdin")]
        u: Option<String>,
        #[arg(long, required_unless_present = "stdin")]
        v: Option<String>,
    },
    /// Print the class of a sheaf object `S[i,j]^r`, `Sgen^r` or `O(k=..;a=..)`.
    Encode {
        #[command(flatten)]
        common: Common,
        #[arg(long, required_unless_present = "stdin", allow_hyphen_values = true)]
        object: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: VectorFormat,
    },
    /// Reduce a vector by simple reflections to its terminal case.
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long, required_unless_present = "stdin")]
        vector: Option<String>,
    },
    /// Verify the loop-algebra relations on the symbolic model.
    CheckRelations {
        #[command(flatten)]
        common: Common,
        /// Loop indices range over `[-K, K]`.
        #[arg(long, default_value_t = 3)]
        truncation: i64,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output types always serialize")
}

fn parse_delta(text: &str) -> Result<RangeInclusive<i64>, Failure> {
    let bad = || Failure(format!("bad delta range `{text}`, expected `a..b`"));
    match text.split_once("..") {
        Some((a, b)) => {
            Ok(a.trim().parse().map_err(|_| bad())?..=b.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let r: i64 = text.trim().parse().map_err(|_| bad())?;
            Ok(r..=r)
        }
    }
}

/// The flag value, or each nonblank stdin line.
fn inputs(flag: Option<String>, stdin: bool) -> Result<Vec<String>, Failure> {
    if !stdin {
        return Ok(flag.into_iter().collect());
    }
    let mut out = Vec::new();
    for line in io::stdin().lock().lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(line);
        }
    }
    Ok(out)
}

fn vector(lattice: &RootLattice, text: &str) -> Result<ClassVector, Failure> {
    Ok(parse_class(lattice, text)?)
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    match cli.command {
        Command::Classify {
            common,
            vector: flag,
        } => {
            let system = RootSystem::new(WeightType::parse(&common.weights)?);
            for text in inputs(flag, common.stdin)? {
                let phi = vector(system.lattice(), &text)?;
                writeln!(out, "{}", json(&system.classify_hat(&phi)?))?;
            }
        }
        Command::Roots {
            common,
            max_height,
            delta,
        } => {
            let system = RootSystem::new(WeightType::parse(&common.weights)?);
            for root in system.enumerate_roots(max_height, parse_delta(&delta)?)? {
                writeln!(out, "{}", json(&root))?;
            }
        }
        Command::Pair { common, u, v } => {
            let lattice = RootLattice::new(WeightType::parse(&common.weights)?);
            let pairs = if common.stdin {
                inputs(None, true)?
                    .into_iter()
                    .map(|line| match line.split_once('|') {
                        Some((a, b)) => Ok((a.to_string(), b.to_string())),
                        None => Err(Failure(format!("expected `u | v`, got `{line}`"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                vec![(u.unwrap_or_default(), v.unwrap_or_default())]
            };
            for (a, b) in pairs {
                let value =
                    lattice.symmetric_form(&vector(&lattice, &a)?, &vector(&lattice, &b)?)?;
                writeln!(out, "{value}")?;
            }
        }
        Command::Encode {
            common,
            object,
            format,
        } => {
            let lattice = RootLattice::new(WeightType::parse(&common.weights)?);
            for text in inputs(object, common.stdin)? {
                let class = lattice.encode(&parse_object(&text)?)?;
                match format {
                    VectorFormat::Text => writeln!(out, "{}", class_to_text(&class))?,
                    VectorFormat::Json => writeln!(out, "{}", class_to_json(&class))?,
                }
            }
        }
        Command::Reduce {
            common,
            vector: flag,
        } => {
            let system = RootSystem::new(WeightType::parse(&common.weights)?);
            for text in inputs(flag, common.stdin)? {
                let phi = vector(system.lattice(), &text)?;
                writeln!(out, "{}", json(&system.reduce_to_case(&phi)?))?;
            }
        }
        Command::CheckRelations { common, truncation } => {
            if truncation < 1 {
                return Err(Failure(format!(
                    "truncation must be at least 1, got {truncation}"
                )));
            }
            let model = LoopModel::new(WeightType::parse(&common.weights)?);
            let report = model.check_loop_relations(truncation)?;
            writeln!(out, "{}", json(&report))?;
            if !report.is_success() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let head = text.split("\n\n").next().unwrap_or_default();
            let line: Vec<&str> = head
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("{}", line.join(" "));
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let status = run(cli, &mut out);
    let flushed = out.flush();
    match (status, flushed) {
        (Ok(code), Ok(())) => ExitCode::from(code),
        (Err(Failure(msg)), _) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        (Ok(_), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
