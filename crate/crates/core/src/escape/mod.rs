//! The Escape game: positions, the step relation, strategies, plays and bounded search.
//!
//! A play starts from the green chain of a word of `Q0` between `a` and `b`. Each
//! round satisfies every current request at once; the play is lost as soon as a
//! red `Q0` path connects `a` to `b`, and won when no request is left.

mod explore;
mod strategy;
mod trace;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::automata::{Color, Nfa, Word};
use crate::constraints::{fresh_vertex_name, witness_edges, ConstraintError, ConstraintSet, Request};
use crate::graphs::{chain_graph, Edge, GraphError, LabeledGraph, VertexId};
use crate::instance::Instance;
use crate::rpq::GraphIndex;

pub use explore::{explore, explore_words, Caps, Certificate, ExploreReport, ExploreStats, Verdict};
pub use strategy::{
    Choice, GuidedStrategy, InteractiveStrategy, ScriptedStrategy, ShortestStrategy, Strategy,
};
pub use trace::{replay, PlayTrace, RoundRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EscapeError {
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("script exhausted at round {round}, request {request_index}")]
    ScriptExhausted { round: usize, request_index: usize },
    #[error("no path in the target structure for request {x} {y} {constraint}")]
    GuidanceFailed { x: String, y: String, constraint: usize },
    #[error("input closed while waiting for a witness")]
    InputClosed,
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed trace: {0}")]
    Trace(String),
    #[error("caps must be positive: {0}")]
    InvalidCaps(String),
}

/// A game position: the current structure, its endpoints and the number of moves made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Position {
    pub graph: LabeledGraph,
    pub a: VertexId,
    pub b: VertexId,
    pub round: usize,
}

impl Position {
    /// The green chain of `word` from `a` to `b`, at round 0.
    pub fn initial(word: &Word) -> Result<Position, EscapeError> {
        let (a, b) = (VertexId::named("a"), VertexId::named("b"));
        Ok(Position {
            graph: chain_graph(&word.recolor(Color::Green), a, b)?,
            a,
            b,
            round: 0,
        })
    }
}

/// One position per word of `q0` of length at most `cap`, in shortlex order.
pub fn initial_positions(q0: &Nfa, cap: usize) -> Vec<Position> {
    q0.enumerate_words(cap)
        .iter()
        .filter(|w| !w.is_empty())
        .map(|w| Position::initial(w).expect("non-empty chain"))
        .collect()
}

/// One move: every request of `p` is satisfied with the strategy's word, all at once.
///
/// Without requests the position is returned unchanged, with an empty record.
pub fn step(
    p: &Position,
    t: &ConstraintSet,
    s: &mut dyn Strategy,
) -> Result<(Position, RoundRecord), EscapeError> {
    let requests = t.requests(&p.graph);
    step_with(p, t, s, requests)
}

fn step_with(
    p: &Position,
    t: &ConstraintSet,
    s: &mut dyn Strategy,
    requests: Vec<Request>,
) -> Result<(Position, RoundRecord), EscapeError> {
    let round = p.round + 1;
    if requests.is_empty() {
        let record = RoundRecord {
            round: p.round,
            requests,
            choices: Vec::new(),
            added_edges: Vec::new(),
        };
        return Ok((p.clone(), record));
    }
    let mut choices = Vec::with_capacity(requests.len());
    let mut new_edges: BTreeSet<Edge> = BTreeSet::new();
    for (i, r) in requests.iter().enumerate() {
        let w = s.choose(&Choice {
            position: p,
            constraints: t,
            request: r,
            request_index: i,
            round,
        })?;
        for k in 1..w.len() {
            let v = fresh_vertex_name(round, i, k);
            if p.graph.contains_vertex(v) {
                return Err(GraphError::NameClash(v.to_string()).into());
            }
        }
        new_edges.extend(
            witness_edges(t, r, &w, round, i)?
                .into_iter()
                .filter(|e| !p.graph.contains_edge(e)),
        );
        choices.push(w);
    }
    let mut graph = p.graph.clone();
    for e in &new_edges {
        graph.add_edge(*e);
    }
    let next = Position {
        graph,
        a: p.a,
        b: p.b,
        round,
    };
    let record = RoundRecord {
        round,
        requests,
        choices,
        added_edges: new_edges.into_iter().collect(),
    };
    Ok((next, record))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlayResult {
    /// `R(Q0)(a, b)` first held after this many moves.
    Lost(usize),
    /// No requests remain after this many moves and the play was never lost.
    WonFixpoint(usize),
    /// The round bound was reached with requests still pending.
    Exhausted(usize),
}

impl PlayResult {
    pub fn keyword(&self) -> &'static str {
        match self {
            PlayResult::Lost(_) => "LOST",
            PlayResult::WonFixpoint(_) => "WON_FIXPOINT",
            PlayResult::Exhausted(_) => "EXHAUSTED",
        }
    }

    pub fn round(&self) -> usize {
        match *self {
            PlayResult::Lost(r) | PlayResult::WonFixpoint(r) | PlayResult::Exhausted(r) => r,
        }
    }
}

impl fmt::Display for PlayResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} round {}", self.keyword(), self.round())
    }
}

#[derive(Debug, Clone)]
pub struct PlayOutcome {
    pub result: PlayResult,
    pub trace: PlayTrace,
    pub position: Position,
}

/// Plays from the green chain of `initial_word` for at most `max_rounds` moves.
pub fn run_play(
    inst: &Instance,
    s: &mut dyn Strategy,
    initial_word: &Word,
    max_rounds: usize,
) -> Result<PlayOutcome, EscapeError> {
    let mut position = Position::initial(initial_word)?;
    let mut trace = PlayTrace::new(initial_word.clone(), &position.graph);
    let t = inst.constraints();
    let lost = |p: &Position, index: &GraphIndex| -> Result<bool, EscapeError> {
        Ok(index.holds(inst.red_q0(), p.a, p.b)?)
    };
    let mut index = GraphIndex::new(&position.graph);
    if lost(&position, &index)? {
        return Ok(PlayOutcome {
            result: PlayResult::Lost(0),
            trace,
            position,
        });
    }
    loop {
        let requests = t.requests_indexed(&index);
        if requests.is_empty() {
            let result = PlayResult::WonFixpoint(position.round);
            return Ok(PlayOutcome { result, trace, position });
        }
        if position.round >= max_rounds {
            let result = PlayResult::Exhausted(position.round);
            return Ok(PlayOutcome { result, trace, position });
        }
        let (next, record) = step_with(&position, t, s, requests)?;
        trace.rounds.push(record);
        position = next;
        index = GraphIndex::new(&position.graph);
        if lost(&position, &index)? {
            let result = PlayResult::Lost(position.round);
            return Ok(PlayOutcome { result, trace, position });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = r#"{
        "alphabet": ["alpha", "beta", "omega"],
        "q0": "alpha omega + beta beta omega",
        "views": {"good": ["alpha + beta", "omega"], "ugly": ["beta beta omega"]}
    }"#;

    fn toy() -> Instance {
        Instance::from_json(TOY).unwrap()
    }

    #[test]
    fn shortest_play_loses_on_the_query_itself() {
        let inst = toy();
        let w = Word::parse("alpha omega").unwrap();
        let out = run_play(&inst, &mut ShortestStrategy, &w, 5).unwrap();
        // R:alpha and R:omega are the shortlex choices and spell R(Q0).
        assert_eq!(out.result, PlayResult::Lost(1));
        assert!(out.trace.rounds[0]
            .added_edges
            .iter()
            .all(|e| e.label.color() == Some(Color::Red)));
    }

    #[test]
    fn scripted_beta_reaches_fixpoint() {
        let inst = toy();
        let w = Word::parse("alpha omega").unwrap();
        let script = vec![Word::parse("R:beta").unwrap(), Word::parse("R:omega").unwrap()];
        let out = run_play(&inst, &mut ScriptedStrategy::new(script), &w, 5).unwrap();
        // The green alpha already answers the backward arrow of alpha + beta.
        assert_eq!(out.result, PlayResult::WonFixpoint(1));
        let short = vec![Word::parse("R:beta").unwrap()];
        let out = run_play(&inst, &mut ScriptedStrategy::new(short), &w, 5);
        assert!(matches!(
            out,
            Err(EscapeError::ScriptExhausted { round: 1, request_index: 1 })
        ));
    }

    #[test]
    fn zero_rounds_exhausts_immediately() {
        let inst = toy();
        let w = Word::parse("alpha omega").unwrap();
        let out = run_play(&inst, &mut ShortestStrategy, &w, 0).unwrap();
        assert_eq!(out.result, PlayResult::Exhausted(0));
        assert!(out.trace.rounds.is_empty());
    }

    #[test]
    fn fixpoint_step_is_identity() {
        let inst = toy();
        let p = Position {
            graph: LabeledGraph::new(),
            a: VertexId::named("a"),
            b: VertexId::named("b"),
            round: 4,
        };
        let (q, rec) = step(&p, inst.constraints(), &mut ShortestStrategy).unwrap();
        assert_eq!(p, q);
        assert!(rec.requests.is_empty());
    }

    #[test]
    fn initial_positions_follow_shortlex() {
        let inst = toy();
        let ps = initial_positions(inst.q0_nfa(), 3);
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].graph.edge_count(), 2);
        assert_eq!(ps[1].graph.edge_count(), 3);
        assert!(initial_positions(inst.q0_nfa(), 0).is_empty());
    }
}
