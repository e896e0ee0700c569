//! The `tasc` command line.

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dot::{ra_to_dot, ta_to_dot};
use super::report::{predicate_report, Report, VerdictReport};
use super::{ModelFile, UNDEFINED};
use crate::model::{complete, product_all, sync_product, Kind, TimedAutomaton};
use crate::oracle::{check_controllability, check_nonblocking, check_safety, region_automaton, Verdict};
use crate::regions::Partition;
use crate::synthesis::{bsp, nbp, synthesize_with_requirements, Completion, Options};

#[derive(Debug, Parser)]
#[command(name = "tasc", version, about = "Supervisor synthesis for timed automata with forcible events")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synchronous product of every automaton in the files.
    Product {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Completes the product of the requirements in a file.
    Complete {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Synthesizes a supervisor for the plants of a file against the
    /// requirements in it and in every `--req` file.
    Synthesize {
        plant: PathBuf,
        #[arg(long = "req")]
        requirements: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Writes predicates and iterations as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Treat forcible events as merely controllable.
        #[arg(long)]
        no_forcing: bool,
        /// Recompute the predicates for the invariants adapted so far.
        #[arg(long)]
        invariant_feedback: bool,
    },
    /// Checks a property of the product of the automata in a file.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long)]
        plant: Option<PathBuf>,
        #[arg(long = "req")]
        requirement: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Lists the regions of the product and its state predicates.
    Regions {
        file: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Cross-checks classification on this many seeded random valuations.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Graphviz export of the product, or of its region automaton.
    ExportDot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        region_automaton: bool,
    },
    /// Prints a file in normal form.
    Fmt { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Nonblocking,
    Controllable,
    Safe,
}

/// A failure with its exit code: 1 for a failed property or an undefined
/// supervisor, 2 for bad input.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

type Outcome = Result<(), Failure>;

pub struct Console {
    pub color: bool,
}

impl Console {
    /// Colour follows `TASC_COLOR` when set, otherwise whether stderr is a
    /// terminal.
    pub fn from_env() -> Console {
        let color = match std::env::var("TASC_COLOR").as_deref() {
            Ok("0") => false,
            Ok("1") => true,
            _ => std::io::stderr().is_terminal(),
        };
        Console { color }
    }

    pub fn paint(&self, text: &str, code: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

fn load(path: &Path) -> Result<ModelFile, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    ModelFile::parse(&src).map_err(|e| usage(format!("{}:{e}", path.display())))
}

fn product_of(path: &Path, pick: impl Fn(&TimedAutomaton) -> bool) -> Result<TimedAutomaton, Failure> {
    let parts: Vec<_> = load(path)?.automata.into_iter().filter(|a| pick(a)).collect();
    if parts.is_empty() {
        return Err(usage(format!("{}: no matching automaton", path.display())));
    }
    product_all(&parts).map_err(usage)
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(usage),
    }
}

fn write_json(path: &Path, report: &Report) -> Outcome {
    let text = serde_json::to_string_pretty(report).map_err(usage)?;
    std::fs::write(path, text + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn verdict_line(v: &Verdict, console: &Console, out: &mut dyn Write) -> Outcome {
    let head = if v.passed { console.paint("PASS", "32") } else { console.paint("FAIL", "31") };
    let mut text = format!("{head} {}", v.property);
    if !v.passed {
        text.push_str(&format!(": {}", v.message));
        for step in &v.witness {
            let label = step.label.as_deref().map(|l| format!(" --{l}-->")).unwrap_or_default();
            text.push_str(&format!("\n  {} {}{label}", step.location, step.region));
        }
    }
    writeln!(out, "{text}").map_err(usage)
}

/// Runs one command, writing results to `out`.
pub fn run(cli: Cli, console: &Console, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Product { files, output } => {
            let mut parts = Vec::new();
            for f in &files {
                parts.extend(load(f)?.automata);
            }
            let p = product_all(&parts).map_err(usage)?;
            emit(output.as_deref(), &ModelFile::from_automata(vec![p]).serialize(), out)
        }
        Command::Complete { file, output } => {
            let r = product_of(&file, |a| a.kind == Kind::Requirement)?;
            let c = complete(&r).map_err(usage)?;
            emit(output.as_deref(), &ModelFile::from_automata(vec![c]).serialize(), out)
        }
        Command::Synthesize { plant, requirements, output, trace, no_forcing, invariant_feedback } => {
            let file = load(&plant)?;
            let (mut rs, plants): (Vec<_>, Vec<_>) =
                file.automata.into_iter().partition(|a| a.kind == Kind::Requirement);
            for r in &requirements {
                rs.extend(load(r)?.automata);
            }
            let g = product_all(&plants).map_err(usage)?;
            let options = Options { forcing: !no_forcing, invariant_feedback };
            let s = synthesize_with_requirements(&g, &rs, Completion::AfterProduct, options).map_err(usage)?;
            if let Some(t) = &trace {
                write_json(t, &Report::of_synthesis(&s.result))?;
            }
            let Some(sup) = &s.result.supervisor else {
                return Err(Failure { code: 1, message: UNDEFINED.into() });
            };
            let mut sup = sup.clone();
            sup.name = format!("Sup_{}", g.name);
            emit(output.as_deref(), &ModelFile::from_automata(vec![sup]).serialize(), out)
        }
        Command::Check { file, property, plant, requirement, json } => {
            let s = product_of(&file, |_| true)?;
            let plant_of = |p: &Path| product_of(p, |a| a.kind != Kind::Requirement);
            let verdict = match property {
                Property::Nonblocking => {
                    let target = match &plant {
                        Some(p) => sync_product(&s, &plant_of(p)?).map_err(usage)?,
                        None => s.clone(),
                    };
                    check_nonblocking(&target)
                }
                Property::Controllable => check_controllability(&s, &plant_of(need(&plant, property, "--plant")?)?),
                Property::Safe => {
                    let g = plant_of(need(&plant, property, "--plant")?)?;
                    let r = product_of(need(&requirement, property, "--req")?, |_| true)?;
                    check_safety(&s, &g, &r)
                }
            }
            .map_err(usage)?;
            if let Some(j) = &json {
                let report = Report {
                    ceiling: s.clock_ceiling(),
                    predicates: Default::default(),
                    nonblocking: Default::default(),
                    trace: Vec::new(),
                    verdict: Some(VerdictReport::from(&verdict)),
                    supervisor: None,
                    cells: Vec::new(),
                };
                write_json(j, &report)?;
            }
            verdict_line(&verdict, console, out)?;
            if verdict.passed {
                Ok(())
            } else {
                Err(Failure { code: 1, message: format!("{} fails", verdict.property) })
            }
        }
        Command::Regions { file, json, samples, seed } => {
            let g = product_of(&file, |_| true)?;
            let p = Partition::new(&g.clock_ceiling());
            let (n, _) = nbp(&g).map_err(usage)?;
            let (b, _) = bsp(&g, &n).map_err(usage)?;
            let mut text = format!("{} regions over {:?}\n", p.len(), p.ceiling());
            for (l, name) in n.locations.iter().enumerate() {
                text.push_str(&format!(
                    "{name}\n  nonblocking: {}\n  bad: {}\n",
                    n.sets[l].pretty(),
                    b.sets[l].pretty()
                ));
            }
            if samples > 0 {
                let wrong = classification_errors(&p, samples, seed);
                text.push_str(&format!("classification: {wrong} errors in {samples} samples (seed {seed})\n"));
                if wrong > 0 {
                    out.write_all(text.as_bytes()).map_err(usage)?;
                    return Err(Failure { code: 1, message: "classification errors".into() });
                }
            }
            if let Some(j) = &json {
                let report = Report {
                    ceiling: p.ceiling().clone(),
                    predicates: predicate_report(&b),
                    nonblocking: predicate_report(&n),
                    trace: Vec::new(),
                    verdict: None,
                    supervisor: None,
                    cells: p.regions().iter().map(|r| r.describe(&p)).collect(),
                };
                write_json(j, &report)?;
            }
            out.write_all(text.as_bytes()).map_err(usage)
        }
        Command::ExportDot { file, output, region_automaton: ra } => {
            let g = product_of(&file, |_| true)?;
            let text = if ra {
                ra_to_dot(&region_automaton(&g, &g.clock_ceiling()).map_err(usage)?)
            } else {
                ta_to_dot(&g)
            };
            emit(output.as_deref(), &text, out)
        }
        Command::Fmt { file } => emit(None, &load(&file)?.serialize(), out),
    }
}

fn need<'a>(p: &'a Option<PathBuf>, property: Property, flag: &str) -> Result<&'a Path, Failure> {
    p.as_deref().ok_or_else(|| usage(format!("--property {} needs {flag}", format!("{property:?}").to_lowercase())))
}

/// Samples valuations and counts those whose region's representative is
/// classified elsewhere or that satisfy a different set of region bounds.
fn classification_errors(p: &Partition, samples: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.clocks().len();
    let top = (0..n).map(|i| p.k(i)).max().unwrap_or(0) as i64 + 3;
    (0..samples)
        .filter(|_| {
            let u: Vec<_> = (0..n)
                .map(|_| {
                    let den = rng.gen_range(1..=12);
                    num_rational::Rational64::new(rng.gen_range(0..=top * den), den)
                })
                .collect();
            let region = p.classify(&u);
            match p.lookup(&region) {
                None => true,
                Some(r) => p.classify(p.representative(r as usize)) != region,
            }
        })
        .count()
}
