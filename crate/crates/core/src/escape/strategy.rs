use std::io::{BufRead, Write};

use super::{EscapeError, Position};
use crate::automata::Word;
use crate::constraints::{fresh_vertex_name, ConstraintSet, Request};
use crate::gadget::{find_homomorphism_pinned, is_homomorphism, VertexMap};
use crate::graphs::LabeledGraph;
use crate::rpq::GraphIndex;

/// What a strategy sees when asked for one witness.
pub struct Choice<'a> {
    pub position: &'a Position,
    pub constraints: &'a ConstraintSet,
    pub request: &'a Request,
    /// Index of the request in canonical order; also names the fresh vertices.
    pub request_index: usize,
    /// The round being produced (`position.round + 1`).
    pub round: usize,
}

/// Fugitive's behavior: a right-hand word for each request.
pub trait Strategy {
    fn choose(&mut self, c: &Choice<'_>) -> Result<Word, EscapeError>;
}

/// Always the shortest right-hand word, shortlex-least among those.
#[derive(Debug, Clone, Copy, Default)]
pub struct ShortestStrategy;

impl Strategy for ShortestStrategy {
    fn choose(&mut self, c: &Choice<'_>) -> Result<Word, EscapeError> {
        let rc = c.constraints.get(c.request.constraint)?;
        Ok(rc
            .rhs_nfa()
            .shortest_word()
            .expect("right-hand sides of violated constraints are non-empty"))
    }
}

/// Words consumed in order, one per request, across rounds.
#[derive(Debug, Clone)]
pub struct ScriptedStrategy {
    words: Vec<Word>,
    next: usize,
}

impl ScriptedStrategy {
    pub fn new(words: Vec<Word>) -> ScriptedStrategy {
        ScriptedStrategy { words, next: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.next
    }
}

impl Strategy for ScriptedStrategy {
    fn choose(&mut self, c: &Choice<'_>) -> Result<Word, EscapeError> {
        let w = self.words.get(self.next).cloned().ok_or(EscapeError::ScriptExhausted {
            round: c.round,
            request_index: c.request_index,
        })?;
        self.next += 1;
        Ok(w)
    }
}

/// Follows paths of a fixed structure `m`, keeping a homomorphism from the
/// current position into `m` and extending it over every fresh vertex.
#[derive(Debug, Clone)]
pub struct GuidedStrategy {
    target: LabeledGraph,
    index: GraphIndex,
    h: VertexMap,
}

impl GuidedStrategy {
    pub fn new(target: LabeledGraph, h0: VertexMap) -> GuidedStrategy {
        let index = GraphIndex::new(&target);
        GuidedStrategy { target, index, h: h0 }
    }

    /// Starts from a homomorphism of `initial` into `target` with `a` and `b` fixed.
    pub fn from_position(target: LabeledGraph, initial: &Position) -> Option<GuidedStrategy> {
        let pins = [(initial.a, initial.a), (initial.b, initial.b)];
        let h0 = find_homomorphism_pinned(&initial.graph, &target, &pins)?;
        Some(GuidedStrategy::new(target, h0))
    }

    pub fn map(&self) -> &VertexMap {
        &self.h
    }

    pub fn target(&self) -> &LabeledGraph {
        &self.target
    }

    /// Whether the maintained map is a homomorphism from `p` into the target.
    pub fn verify(&self, p: &Position) -> bool {
        is_homomorphism(&self.h, &p.graph, &self.target)
    }
}

impl Strategy for GuidedStrategy {
    fn choose(&mut self, c: &Choice<'_>) -> Result<Word, EscapeError> {
        let r = c.request;
        let fail = || EscapeError::GuidanceFailed {
            x: r.x.to_string(),
            y: r.y.to_string(),
            constraint: r.constraint,
        };
        let (hx, hy) = match (self.h.get(&r.x), self.h.get(&r.y)) {
            (Some(x), Some(y)) => (*x, *y),
            _ => return Err(fail()),
        };
        let rc = c.constraints.get(r.constraint)?;
        let (sx, sy) = (self.index.index_of(hx)?, self.index.index_of(hy)?);
        let (w, path) = self.index.find_path_idx(rc.rhs_nfa(), sx, sy).ok_or_else(fail)?;
        for (k, v) in path.iter().enumerate().take(w.len()).skip(1) {
            self.h
                .insert(fresh_vertex_name(c.round, c.request_index, k), self.index.vertex(*v));
        }
        Ok(w)
    }
}

/// Prompts for each witness on `output` and reads it from `input`.
///
/// An empty line takes the first suggestion, a number picks a suggestion, anything
/// else is read as a space-separated word. Rejected words are asked for again.
pub struct InteractiveStrategy<R, W> {
    input: R,
    output: W,
    suggestions: usize,
}

impl<R: BufRead, W: Write> InteractiveStrategy<R, W> {
    pub fn new(input: R, output: W) -> InteractiveStrategy<R, W> {
        InteractiveStrategy {
            input,
            output,
            suggestions: 5,
        }
    }

    fn say(&mut self, text: &str) -> Result<(), EscapeError> {
        self.output
            .write_all(text.as_bytes())
            .and_then(|_| self.output.flush())
            .map_err(|e| EscapeError::Io(e.to_string()))
    }
}

impl<R: BufRead, W: Write> Strategy for InteractiveStrategy<R, W> {
    fn choose(&mut self, c: &Choice<'_>) -> Result<Word, EscapeError> {
        let rc = c.constraints.get(c.request.constraint)?;
        let alphabet = c.constraints.alphabet();
        let len_cap = rc.rhs_nfa().shortest_word().map_or(1, |w| w.len()) + 2;
        let options = rc.rhs_nfa().enumerate_limited(len_cap, self.suggestions);
        let mut text = format!(
            "round {} request {}: {} {} by constraint {} ({} -> {})\n",
            c.round,
            c.request_index + 1,
            c.request.x,
            c.request.y,
            c.request.constraint,
            rc.lhs().to_text(alphabet),
            rc.rhs().to_text(alphabet),
        );
        for (i, w) in options.iter().enumerate() {
            text.push_str(&format!("  [{}] {}\n", i + 1, w));
        }
        self.say(&text)?;
        loop {
            self.say("witness> ")?;
            let mut line = String::new();
            let n = self
                .input
                .read_line(&mut line)
                .map_err(|e| EscapeError::Io(e.to_string()))?;
            if n == 0 {
                return Err(EscapeError::InputClosed);
            }
            let line = line.trim();
            let picked = if line.is_empty() {
                options.first().cloned()
            } else if let Ok(k) = line.parse::<usize>() {
                options.get(k.wrapping_sub(1)).cloned()
            } else {
                Word::parse(line).ok()
            };
            match picked {
                Some(w) if !w.is_empty() && rc.rhs_nfa().accepts(&w).unwrap_or(false) => return Ok(w),
                _ => self.say("not a word of the right-hand side, try again\n")?,
            }
        }
    }
}
