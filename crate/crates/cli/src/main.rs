use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use corgal::checker::{CheckError, Checker, WitnessReport};
use corgal::model::{contract, DEFAULT_CAP};
use corgal::validity::{run_suite, SuiteConfig, SUITE_NAMES};
use corgal::{pal_to_el, parse_formula, render_formula, EpistemicModel, Formula, ModelDocument};

const TRUE: u8 = 0;
const FALSE: u8 = 1;
const INPUT_ERROR: u8 = 2;
const CAP_EXCEEDED: u8 = 3;
const SUITE_FAILURE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "corgal",
    version,
    about = "Model checker for coalition and group announcement logic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a state.
    Check {
        #[arg(long)]
        model: PathBuf,
        /// Defaults to the model's designated state.
        #[arg(long)]
        state: Option<String>,
        /// Read from standard input when absent.
        #[arg(long)]
        formula: Option<String>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Print the announcements tried by the outermost quantifier.
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate a quantified formula and print the announcement behind the verdict.
    Witness {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        formula: Option<String>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        trace: bool,
    },
    /// Quotient a model by bisimilarity.
    Contract {
        #[arg(long)]
        model: PathBuf,
        /// Write the quotient here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite a public announcement formula without announcements.
    Translate {
        #[arg(long)]
        formula: Option<String>,
    },
    /// Run a validity suite and print its report.
    Suite {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITE_NAMES))]
        name: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of sampled models.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        max_states: Option<usize>,
        #[arg(long)]
        cap: Option<usize>,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure(u8, String);

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        let code = if e.is_cap_exceeded() {
            CAP_EXCEEDED
        } else {
            INPUT_ERROR
        };
        Failure(code, e.to_string())
    }
}

fn input<E: std::fmt::Display>(context: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure(INPUT_ERROR, format!("{context}: {e}"))
}

fn load_model(path: &Path, state: Option<&str>) -> Result<(EpistemicModel, usize), Failure> {
    let text = fs::read_to_string(path).map_err(input(&path.display().to_string()))?;
    let doc = ModelDocument::parse(&text).map_err(input(&path.display().to_string()))?;
    let m = doc.to_model().map_err(input(&path.display().to_string()))?;
    let name = state.or(doc.designated.as_deref()).ok_or_else(|| {
        Failure(
            INPUT_ERROR,
            "no --state given and the model designates none".into(),
        )
    })?;
    let w = Checker::state(&m, name)?;
    Ok((m, w))
}

fn read_formula(arg: Option<String>) -> Result<Formula, Failure> {
    let text = match arg {
        Some(t) => t,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(input("standard input"))?;
            s
        }
    };
    parse_formula(&text).map_err(input("formula"))
}

fn print_trace(report: &WitnessReport) {
    for entry in &report.trace {
        let choice: Vec<String> = entry
            .choice
            .iter()
            .map(|(a, states)| format!("{a}:{{{}}}", states.join(",")))
            .collect();
        println!(
            "trace {} [{}] -> {{{}}}: {}",
            entry.operator,
            choice.join(" "),
            entry.extension.join(","),
            entry.verdict
        );
    }
}

fn verdict_code(v: bool) -> u8 {
    if v {
        TRUE
    } else {
        FALSE
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check {
            model,
            state,
            formula,
            cap,
            trace,
        } => {
            let (m, w) = load_model(&model, state.as_deref())?;
            let f = read_formula(formula)?;
            let checker = Checker::new(cap);
            let verdict = checker.eval(&m, w, &f)?;
            println!("{verdict}");
            if trace {
                match checker.eval_witness(&m, w, &f) {
                    Ok(report) => print_trace(&report),
                    Err(CheckError::NotQuantified(_)) => {
                        eprintln!("note: no quantifier at the outermost position, nothing to trace")
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(verdict_code(verdict))
        }
        Command::Witness {
            model,
            state,
            formula,
            cap,
            trace,
        } => {
            let (m, w) = load_model(&model, state.as_deref())?;
            let f = read_formula(formula)?;
            let checker = Checker::new(cap);
            let report = checker.eval_witness(&m, w, &f)?;
            if !report.recheck(&checker, &m, w, &f)? {
                return Err(Failure(SUITE_FAILURE, "witness failed its re-check".into()));
            }
            println!("{}", report.verdict);
            match &report.witness {
                Some(wit) => {
                    println!(
                        "witness: {}",
                        render_formula(&wit.announcement.denotation())
                    );
                    for (a, states) in &wit.choice {
                        println!("choice {a}: {{{}}}", states.join(", "));
                    }
                    println!("extension: {{{}}}", wit.extension.join(", "));
                }
                None => println!("witness: none"),
            }
            if trace {
                print_trace(&report);
            }
            Ok(verdict_code(report.verdict))
        }
        Command::Contract { model, out } => {
            let text = fs::read_to_string(&model).map_err(input(&model.display().to_string()))?;
            let doc = ModelDocument::parse(&text).map_err(input(&model.display().to_string()))?;
            let m = doc
                .to_model()
                .map_err(input(&model.display().to_string()))?;
            let c = contract(&m);
            let designated = doc
                .designated
                .as_deref()
                .and_then(|s| m.state_index(s))
                .map(|w| c.map[w]);
            let rendered = ModelDocument::from_model(&c.model, designated).render();
            match out {
                Some(path) => fs::write(&path, format!("{rendered}\n"))
                    .map_err(input(&path.display().to_string()))?,
                None => println!("{rendered}"),
            }
            for (s, &t) in c.map.iter().enumerate() {
                println!("{} -> {}", m.state_name(s), c.model.state_name(t));
            }
            Ok(TRUE)
        }
        Command::Translate { formula } => {
            let f = read_formula(formula)?;
            let t = pal_to_el(&f).map_err(input("translate"))?;
            println!("{}", render_formula(&t));
            Ok(TRUE)
        }
        Command::Suite {
            name,
            seed,
            count,
            max_states,
            cap,
            out,
        } => {
            let defaults = SuiteConfig::default();
            let cfg = SuiteConfig {
                seed: seed.unwrap_or(defaults.seed),
                model_count: count.unwrap_or(defaults.model_count),
                max_states: max_states.unwrap_or(defaults.max_states),
                enumeration_cap: cap.unwrap_or(defaults.enumeration_cap),
                ..defaults
            };
            let report = run_suite(&name, &cfg).map_err(input("suite"))?;
            let json = report.to_json();
            match out {
                Some(path) => fs::write(&path, format!("{json}\n"))
                    .map_err(input(&path.display().to_string()))?,
                None => println!("{json}"),
            }
            eprint!("{report}");
            Ok(if report.passed() { TRUE } else { SUITE_FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
