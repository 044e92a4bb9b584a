//! Command-line front end. [`run`] takes its streams as arguments so that it can be
//! driven from tests.
//!
//! Exit codes: `2` on malformed input for every command. Otherwise `play` exits
//! 0/1/3 for WON_FIXPOINT/LOST/EXHAUSTED, `search` 0/1/3 for
//! NONDETERMINATE/ALL_PLAYS_LOSE/INCONCLUSIVE, `verify` 0/1 for pass/fail and
//! `solve-ogtp` 0/1 for found/NONE.

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::automata::{literal_tokens, parse_regex, Alphabet, AutomataError, Nfa, Word};
use crate::escape::{
    explore_words, run_play, Caps, EscapeError, GuidedStrategy, InteractiveStrategy, PlayResult, PlayTrace,
    Position, ScriptedStrategy, ShortestStrategy, Strategy, Verdict,
};
use crate::gadget::{build_grid, check_counterexample, decorate, GadgetError};
use crate::graphs::{GraphError, LabeledGraph, VertexId};
use crate::instance::{Instance, InstanceError};
use crate::ogtp::{compile_reduction, solve_bruteforce, GridTiling, OgtpError, OgtpInstance};
use crate::rpq;

#[derive(Debug, Parser)]
#[command(name = "rpq-escape", version, about = "Query determinacy workbench for regular path queries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a regular path query on a graph; prints "x y" per answer.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        query: String,
    },
    /// Compile a grid tiling instance into a determinacy instance.
    Reduce {
        #[arg(long)]
        ogtp: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play one Escape game and print its result.
    Play {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyName::Shortest)]
        strategy: StrategyName,
        /// Initial word of Q0, space separated.
        #[arg(long, conflicts_with = "cap")]
        word: Option<String>,
        /// Start from the shortlex-first word of Q0 no longer than this.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Trace to replay (scripted strategy).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Structure to follow (guided strategy).
        #[arg(long)]
        target: Option<PathBuf>,
        /// Where to write the trace of the play.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded search for a winning play.
    Search {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_initial_len: usize,
        #[arg(long, default_value_t = 3)]
        max_witness_len: usize,
        #[arg(long, default_value_t = 6)]
        max_rounds: usize,
        #[arg(long, default_value_t = 4)]
        max_branches: usize,
        #[arg(long)]
        jobs: Option<usize>,
        /// Where to write the certificate graph when one is found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the three counterexample conditions on a graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "a")]
        a: String,
        #[arg(long, default_value = "b")]
        b: String,
    },
    /// Write the doubled grid of size m, optionally shaded by a tiling.
    Grid {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        tiling: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force a grid tiling instance up to size max-n.
    SolveOgtp {
        #[arg(long)]
        ogtp: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    Shortest,
    Guided,
    Scripted,
    Interactive,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Escape(#[from] EscapeError),
    #[error(transparent)]
    Ogtp(#[from] OgtpError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error("{0}")]
    Usage(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    })
}

/// Writes to `path`, or to `out` when no path is given.
fn deliver(path: Option<&Path>, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => emit(out, text),
    }
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    Ok(Instance::from_json(&read(path)?)?)
}

fn load_graph(path: &Path) -> Result<LabeledGraph, CliError> {
    Ok(LabeledGraph::from_json(&read(path)?)?)
}

fn shortlex(s: &str) -> (usize, &str) {
    (s.len(), s)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, input, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cmd: Command, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Eval { graph, query } => cmd_eval(&load_graph(&graph)?, &query, out),
        Command::Reduce { ogtp, out: path } => {
            let inst = OgtpInstance::from_json(&read(&ogtp)?)?;
            let mut text = compile_reduction(&inst)?.to_json();
            text.push('\n');
            deliver(path.as_deref(), out, &text)?;
            Ok(0)
        }
        Command::Play {
            instance,
            strategy,
            word,
            cap,
            max_rounds,
            trace,
            target,
            out: path,
        } => {
            let inst = load_instance(&instance)?;
            let replayed = match &trace {
                Some(p) => Some(PlayTrace::from_jsonl(&read(p)?)?),
                None => None,
            };
            let initial = match (&word, cap, &replayed) {
                (Some(w), _, _) => Word::parse(w)?,
                (None, Some(c), _) => inst
                    .q0_nfa()
                    .enumerate_limited(c, 1)
                    .into_iter()
                    .next()
                    .ok_or_else(|| CliError::Usage(format!("Q0 has no word of length at most {c}")))?,
                (None, None, Some(t)) => t.initial_word.clone(),
                (None, None, None) => return Err(CliError::Usage("give --word or --cap".into())),
            };
            if !inst.q0_nfa().accepts(&initial)? {
                return Err(CliError::Usage(format!("'{initial}' is not a word of Q0")));
            }
            let max_rounds = max_rounds
                .or_else(|| replayed.as_ref().map(|t| t.rounds.len()))
                .unwrap_or(32);
            let mut s: Box<dyn Strategy + '_> = match strategy {
                StrategyName::Shortest => Box::new(ShortestStrategy),
                StrategyName::Scripted => {
                    let t = replayed.ok_or_else(|| CliError::Usage("scripted play needs --trace".into()))?;
                    Box::new(ScriptedStrategy::new(t.choices()))
                }
                StrategyName::Guided => {
                    let p = target.ok_or_else(|| CliError::Usage("guided play needs --target".into()))?;
                    let m = load_graph(&p)?;
                    let start = Position::initial(&initial)?;
                    Box::new(GuidedStrategy::from_position(m, &start).ok_or_else(|| {
                        CliError::Usage("the initial chain does not map into the target".into())
                    })?)
                }
                StrategyName::Interactive => Box::new(InteractiveStrategy::new(&mut *input, &mut *err)),
            };
            let outcome = run_play(&inst, s.as_mut(), &initial, max_rounds)?;
            drop(s);
            if let Some(p) = path {
                write_file(&p, &outcome.trace.to_jsonl())?;
            }
            emit(out, &format!("{}\n", outcome.result))?;
            Ok(match outcome.result {
                PlayResult::WonFixpoint(_) => 0,
                PlayResult::Lost(_) => 1,
                PlayResult::Exhausted(_) => 3,
            })
        }
        Command::Search {
            instance,
            max_initial_len,
            max_witness_len,
            max_rounds,
            max_branches,
            jobs,
            out: path,
        } => {
            let inst = load_instance(&instance)?;
            let caps = Caps::new(max_initial_len, max_witness_len, max_rounds, max_branches)?;
            let words = inst.q0_nfa().enumerate_words(caps.max_initial_len);
            let report = explore_words(&inst, &words, caps, jobs);
            emit(out, &format!("{}\n", report.verdict))?;
            let s = &report.stats;
            let _ = writeln!(
                err,
                "words={} won={} lost={} inconclusive={} positions={} max_loss_round={}",
                s.initial_words, s.won, s.lost, s.inconclusive, s.positions, s.max_loss_round
            );
            Ok(match report.verdict {
                Verdict::Nondeterminate(cert) => {
                    if let Some(p) = path {
                        write_file(&p, &format!("{}\n", cert.graph.to_json_pretty()))?;
                    }
                    0
                }
                Verdict::AllPlaysLose(_) => 1,
                Verdict::Inconclusive(_) => 3,
            })
        }
        Command::Verify { graph, instance, a, b } => {
            let m = load_graph(&graph)?;
            let inst = load_instance(&instance)?;
            let report = check_counterexample(&m, &inst, VertexId::new(&a)?, VertexId::new(&b)?)?;
            let mut line = report.to_string();
            if let Some((x, y, cid)) = report.violated_constraint {
                line.push_str(&format!("\nviolated: {x} {y} {}", inst.constraint_name(cid)));
            }
            emit(out, &format!("{line}\n"))?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Grid { m, tiling, out: path } => {
            if m == 0 {
                return Err(CliError::Usage("grid size must be at least 1".into()));
            }
            let mut g = build_grid(m);
            if let Some(p) = tiling {
                g = decorate(&g, &GridTiling::from_json(&read(&p)?)?)?;
            }
            deliver(path.as_deref(), out, &format!("{}\n", g.graph.to_json_pretty()))?;
            Ok(0)
        }
        Command::SolveOgtp { ogtp, max_n, out: path } => {
            let inst = OgtpInstance::from_json(&read(&ogtp)?)?;
            match solve_bruteforce(&inst, max_n)? {
                Some(t) => {
                    deliver(path.as_deref(), out, &format!("{}\n", t.to_json()))?;
                    Ok(0)
                }
                None => {
                    emit(out, "NONE\n")?;
                    Ok(1)
                }
            }
        }
    }
}

fn cmd_eval(g: &LabeledGraph, query: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut symbols: BTreeSet<_> = g.labels();
    symbols.extend(literal_tokens(query)?);
    let alphabet = Arc::new(Alphabet::new(symbols)?);
    let nfa = Nfa::compile(&parse_regex(query, &alphabet)?, alphabet)?;
    let mut pairs: Vec<_> = rpq::eval(&nfa, g).into_iter().collect();
    pairs.sort_by(|(x1, y1), (x2, y2)| {
        (shortlex(x1.name()), shortlex(y1.name())).cmp(&(shortlex(x2.name()), shortlex(y2.name())))
    });
    let mut text = String::new();
    for (x, y) in pairs {
        text.push_str(&format!("{x} {y}\n"));
    }
    emit(out, &text)?;
    Ok(0)
}
