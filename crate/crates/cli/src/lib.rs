//! The `stonekernel` command line.
//!
//! Exit status 0 means success or that the checked property holds, 1 that a
//! property fails (the report carries a witness), 2 a usage, parse or
//! validation error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use stonekernel::dsl::Program;
use stonekernel::laws::{self, LawConfig};
use stonekernel::{proker, sample, Clopen, Error, InverseSystem};

#[derive(Debug, Parser)]
#[command(
    name = "stonekernel",
    version,
    about = "Exact finite and profinite stochastic kernels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the level-D matrix of a term.
    Eval {
        file: PathBuf,
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = 0)]
        depth: usize,
    },
    /// Compare two terms at every level up to D.
    CheckEq {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 0)]
        depth: usize,
    },
    /// Check that every level up to D is a 0/1 matrix.
    CheckDet {
        file: PathBuf,
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = 0)]
        depth: usize,
    },
    /// Conditional of a term `X -> Y x L` (Y the first codomain factor),
    /// written as a level table for levels 0..=D.
    Conditional {
        file: PathBuf,
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = 0)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
        /// Name of the kernel in the output file.
        #[arg(long, default_value = "k")]
        name: String,
    },
    /// Exact measure of a clopen "LEVEL:e1,e2,..." under a state.
    Measure {
        file: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        clopen: String,
    },
    /// Run the seeded property suites.
    Axioms {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Seeded draws from the level-D distribution of a state, one per line.
    Sample {
        file: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 0)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Append empirical frequencies (floating point) after the draws.
        #[arg(long)]
        summary: bool,
    },
}

/// Exit status and the text for stdout (or stderr when the status is 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { code: 0, output }
    }

    fn fails(output: String) -> Self {
        Outcome { code: 1, output }
    }
}

pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli.command),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            Outcome {
                code,
                output: e.render().to_string(),
            }
        }
    }
}

pub fn run(command: Command) -> Outcome {
    execute(command).unwrap_or_else(|e| Outcome {
        code: 2,
        output: format!("error: {e}\n"),
    })
}

fn load(path: &Path) -> Result<Program, Error> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    Program::parse(&src)
}

fn execute(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Eval { file, term, depth } => {
            let level = load(&file)?.eval(&term, depth)?;
            let k = &level.kernel;
            Ok(Outcome::ok(format!(
                "level {depth} (domain level {}): {} x {}\n{}",
                level.dom_level,
                k.dom(),
                k.cod(),
                k.render()
            )))
        }
        Command::CheckEq {
            file,
            left,
            right,
            depth,
        } => {
            let program = load(&file)?;
            let (l, r) = (program.lookup(&left)?, program.lookup(&right)?);
            if l.dom() != r.dom() || l.cod() != r.cod() {
                return Err(Error::TypeMismatch {
                    pos: 0,
                    msg: format!(
                        "left is {} -> {}, right is {} -> {}",
                        l.dom(),
                        l.cod(),
                        r.dom(),
                        r.cod()
                    ),
                });
            }
            Ok(match proker::first_difference(&l, &r, depth)? {
                None => Outcome::ok(format!("equal up to depth {depth}\n")),
                Some(d) => Outcome::fails(format!("not equal: {d}\n")),
            })
        }
        Command::CheckDet { file, term, depth } => {
            let k = load(&file)?.lookup(&term)?;
            Ok(match proker::first_unsharp_entry(&k, depth)? {
                None => Outcome::ok(format!("deterministic up to depth {depth}\n")),
                Some((level, row, col, value)) => Outcome::fails(format!(
                    "not deterministic: level {level}, row {row}, column {col} has entry {value}\n"
                )),
            })
        }
        Command::Conditional {
            file,
            term,
            depth,
            out,
            name,
        } => conditional(&load(&file)?, &term, depth, &out, &name),
        Command::Measure {
            file,
            state,
            clopen,
        } => {
            let s = load(&file)?.lookup(&state)?;
            let c = parse_clopen(s.cod(), &clopen)?;
            Ok(Outcome::ok(format!(
                "{}\n",
                proker::clopen_measure(&s, &c)?
            )))
        }
        Command::Axioms {
            seed,
            cases,
            max_size,
            depth,
        } => {
            let reports = laws::run_all(LawConfig {
                seed,
                cases,
                max_size,
                depth,
            });
            let mut output = String::new();
            for r in &reports {
                writeln!(output, "{r}").expect("string write");
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            writeln!(output, "{} suites, {failed} failed", reports.len()).expect("string write");
            Ok(Outcome {
                code: i32::from(failed > 0),
                output,
            })
        }
        Command::Sample {
            file,
            state,
            depth,
            seed,
            count,
            summary,
        } => {
            let s = load(&file)?.lookup(&state)?;
            let draws = sample::sample(&s, depth, seed, count)?;
            let mut output = String::with_capacity(draws.len() * 4);
            for d in &draws {
                writeln!(output, "{d}").expect("string write");
            }
            if summary {
                let mut counts = std::collections::BTreeMap::new();
                for d in &draws {
                    *counts.entry(*d).or_insert(0usize) += 1;
                }
                for (x, c) in counts {
                    writeln!(output, "# {x}: {c} ({:.6})", c as f64 / count.max(1) as f64)
                        .expect("string write");
                }
            }
            Ok(Outcome::ok(output))
        }
    }
}

fn conditional(
    program: &Program,
    term: &str,
    depth: usize,
    out: &Path,
    name: &str,
) -> Result<Outcome, Error> {
    let p = program.lookup(term)?;
    let factors = p.cod().factors();
    if factors.len() < 2 {
        return Err(Error::Validation(format!(
            "codomain {} is not a product Y x L",
            p.cod()
        )));
    }
    let y = factors[0].clone();
    let l = InverseSystem::product(factors[1..].iter().cloned());
    let k = proker::conditional(&p, &y, &l)?;
    let masses = proker::fiber_masses_at(&p, &y, &l, 0)?;
    let rebuilt = proker::recompose(&proker::first_marginal(&p, &y, &l)?, &k)?;
    let exact = proker::equal_at_depth(&rebuilt, &p, depth)?;
    let doc = program.export_kernel(name, &k, depth)?;
    std::fs::write(out, doc.to_toml()?)
        .map_err(|e| Error::Format(format!("cannot write {}: {e}", out.display())))?;
    let masses: Vec<String> = masses.iter().map(|m| m.to_string()).collect();
    let mut output = format!(
        "conditional {name}: {} -> {l}, levels 0..={depth} written to {}\n",
        k.dom(),
        out.display()
    );
    writeln!(output, "fiber masses: {}", masses.join(" ")).expect("string write");
    writeln!(output, "reconstruction exact up to depth {depth}: {exact}").expect("string write");
    Ok(Outcome {
        code: i32::from(!exact),
        output,
    })
}

/// `"LEVEL:e1,e2,..."`; the element list may be empty.
pub fn parse_clopen(sys: &InverseSystem, text: &str) -> Result<Clopen, Error> {
    let bad = || Error::Format(format!("clopen {text:?} is not LEVEL:e1,e2,..."));
    let (level, elems) = text.split_once(':').ok_or_else(bad)?;
    let level: usize = level.trim().parse().map_err(|_| bad())?;
    let elems = elems
        .split(',')
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .map(|e| e.parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    Clopen::new(sys, level, elems)
}
