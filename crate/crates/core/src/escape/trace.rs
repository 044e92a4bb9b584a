use serde::{Deserialize, Serialize};

use super::{run_play, EscapeError, PlayOutcome, ScriptedStrategy};
use crate::automata::Word;
use crate::constraints::Request;
use crate::graphs::{Edge, LabeledGraph, VertexId};
use crate::instance::Instance;

/// One move: the requests in canonical order, the word chosen for each, and the
/// edges that were new.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: usize,
    pub requests: Vec<Request>,
    pub choices: Vec<Word>,
    pub added_edges: Vec<Edge>,
}

/// Everything needed to replay a play: the initial word and every move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayTrace {
    pub initial_word: Word,
    pub initial_edges: Vec<Edge>,
    pub rounds: Vec<RoundRecord>,
}

#[derive(Serialize, Deserialize)]
struct Line {
    round: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial_word: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    requests: Option<Vec<(String, String, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    choices: Option<Vec<String>>,
    added_edges: Vec<Edge>,
}

impl PlayTrace {
    pub fn new(initial_word: Word, initial: &LabeledGraph) -> PlayTrace {
        PlayTrace {
            initial_word,
            initial_edges: initial.edges().iter().copied().collect(),
            rounds: Vec::new(),
        }
    }

    /// All chosen words, round by round, in request order.
    pub fn choices(&self) -> Vec<Word> {
        self.rounds.iter().flat_map(|r| r.choices.iter().cloned()).collect()
    }

    /// JSON lines: round 0 carries the initial word and chain, then one line per move.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let head = Line {
            round: 0,
            initial_word: Some(self.initial_word.to_string()),
            requests: None,
            choices: None,
            added_edges: self.initial_edges.clone(),
        };
        out.push_str(&serde_json::to_string(&head).expect("plain data"));
        out.push('\n');
        for r in &self.rounds {
            let line = Line {
                round: r.round,
                initial_word: None,
                requests: Some(
                    r.requests
                        .iter()
                        .map(|q| (q.x.to_string(), q.y.to_string(), q.constraint))
                        .collect(),
                ),
                choices: Some(r.choices.iter().map(|w| w.to_string()).collect()),
                added_edges: r.added_edges.clone(),
            };
            out.push_str(&serde_json::to_string(&line).expect("plain data"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<PlayTrace, EscapeError> {
        let bad = |m: String| EscapeError::Trace(m);
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head: Line = serde_json::from_str(lines.next().ok_or_else(|| bad("empty trace".into()))?)
            .map_err(|e| bad(e.to_string()))?;
        let word = head
            .initial_word
            .ok_or_else(|| bad("first line lacks initial_word".into()))?;
        let initial_word = Word::parse(&word).map_err(|e| bad(e.to_string()))?;
        let mut rounds = Vec::new();
        for (i, l) in lines.enumerate() {
            let line: Line = serde_json::from_str(l).map_err(|e| bad(e.to_string()))?;
            if line.round != i + 1 {
                return Err(bad(format!("expected round {}, found {}", i + 1, line.round)));
            }
            let requests = line
                .requests
                .unwrap_or_default()
                .into_iter()
                .map(|(x, y, c)| {
                    Ok(Request {
                        x: VertexId::new(&x)?,
                        y: VertexId::new(&y)?,
                        constraint: c,
                    })
                })
                .collect::<Result<Vec<_>, crate::graphs::GraphError>>()?;
            let choices = line
                .choices
                .unwrap_or_default()
                .iter()
                .map(|w| Word::parse(w))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bad(e.to_string()))?;
            rounds.push(RoundRecord {
                round: line.round,
                requests,
                choices,
                added_edges: line.added_edges,
            });
        }
        Ok(PlayTrace {
            initial_word,
            initial_edges: head.added_edges,
            rounds,
        })
    }
}

/// Replays a trace's choices with a scripted strategy for exactly as many moves.
pub fn replay(inst: &Instance, trace: &PlayTrace) -> Result<PlayOutcome, EscapeError> {
    let mut script = ScriptedStrategy::new(trace.choices());
    run_play(inst, &mut script, &trace.initial_word, trace.rounds.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::escape::ShortestStrategy;

    #[test]
    fn jsonl_round_trip_and_replay() {
        let inst = Instance::from_json(
            r#"{"alphabet":["alpha","beta","omega"],"q0":"beta omega",
                "views":{"good":["alpha + beta","omega","alpha omega"]}}"#,
        )
        .unwrap();
        let w = Word::parse("alpha omega").unwrap();
        let out = run_play(&inst, &mut ShortestStrategy, &w, 4).unwrap();
        let text = out.trace.to_jsonl();
        assert!(text.starts_with(r#"{"round":0,"initial_word":"alpha omega","added_edges":["#));
        let back = PlayTrace::from_jsonl(&text).unwrap();
        assert_eq!(back, out.trace);
        let again = replay(&inst, &back).unwrap();
        assert_eq!(again.result, out.result);
        assert_eq!(again.trace.to_jsonl(), text);
        assert_eq!(again.position, out.position);
    }

    #[test]
    fn rounds_must_be_consecutive() {
        let text = "{\"round\":0,\"initial_word\":\"alpha\",\"added_edges\":[]}\n{\"round\":2,\"added_edges\":[]}\n";
        assert!(matches!(PlayTrace::from_jsonl(text), Err(EscapeError::Trace(_))));
    }
}
