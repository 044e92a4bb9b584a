//! Bounded depth-first search for a winning play.
//!
//! Branches are initial words (shortlex, up to `max_initial_len`) and, in every
//! round, one capped witness per request. A witness is summarised by the relation
//! it induces on the states of the `R(Q0)` automaton, so whether a set of grafted
//! paths makes the play lost is decided without building the grafted graph.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;

use super::{EscapeError, Position};
use crate::automata::{Color, Nfa, Symbol, Word};
use crate::constraints::{witness_edges, Request};
use crate::graphs::{LabeledGraph, VertexId};
use crate::instance::Instance;
use crate::rpq::GraphIndex;

/// Bounds of the search. All must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_initial_len: usize,
    pub max_witness_len: usize,
    pub max_rounds: usize,
    /// Surviving witnesses tried per request, in shortlex order.
    pub max_branches: usize,
}

impl Caps {
    pub fn new(
        max_initial_len: usize,
        max_witness_len: usize,
        max_rounds: usize,
        max_branches: usize,
    ) -> Result<Caps, EscapeError> {
        let caps = Caps {
            max_initial_len,
            max_witness_len,
            max_rounds,
            max_branches,
        };
        for (name, v) in [
            ("max_initial_len", max_initial_len),
            ("max_witness_len", max_witness_len),
            ("max_rounds", max_rounds),
            ("max_branches", max_branches),
        ] {
            if v == 0 {
                return Err(EscapeError::InvalidCaps(name.into()));
            }
        }
        Ok(caps)
    }
}

impl fmt::Display for Caps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "initial<={} witness<={} rounds<={} branches<={}",
            self.max_initial_len, self.max_witness_len, self.max_rounds, self.max_branches
        )
    }
}

/// A finished winning play: its fixpoint and how to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub graph: LabeledGraph,
    pub a: VertexId,
    pub b: VertexId,
    pub initial_word: Word,
    pub rounds: usize,
    /// Chosen witnesses per round, in canonical request order.
    pub choices: Vec<Vec<Word>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// A play reached a fixpoint without loss; the fixpoint is a counterexample.
    Nondeterminate(Box<Certificate>),
    /// Every explored branch lost within the caps. Bounded evidence only.
    AllPlaysLose(Caps),
    /// Some branch hit a cap without losing, and none won.
    Inconclusive(Caps),
}

impl Verdict {
    pub fn keyword(&self) -> &'static str {
        match self {
            Verdict::Nondeterminate(_) => "NONDETERMINATE",
            Verdict::AllPlaysLose(_) => "ALL_PLAYS_LOSE",
            Verdict::Inconclusive(_) => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Nondeterminate(c) => write!(
                f,
                "NONDETERMINATE initial=\"{}\" rounds={} vertices={} edges={}",
                c.initial_word,
                c.rounds,
                c.graph.vertex_count(),
                c.graph.edge_count()
            ),
            Verdict::AllPlaysLose(caps) => write!(f, "ALL_PLAYS_LOSE {caps}"),
            Verdict::Inconclusive(caps) => write!(f, "INCONCLUSIVE {caps}"),
        }
    }
}

/// Counters over the explored tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExploreStats {
    pub initial_words: usize,
    pub won: usize,
    pub lost: usize,
    pub inconclusive: usize,
    /// Positions whose requests were computed.
    pub positions: usize,
    /// Latest round at which some branch was lost.
    pub max_loss_round: usize,
    /// Requests all of whose witnesses, of any length, lose.
    pub doomed_requests: usize,
    /// Requests all of whose capped witnesses lose.
    pub dead_requests: usize,
    /// Requests with no witness within the length cap and no proof of doom.
    pub stuck_requests: usize,
    /// Witness combinations cut because they lose during the move.
    pub losing_combinations: usize,
    /// Added edges whose color disagrees with the move's parity.
    pub parity_violations: usize,
}

impl ExploreStats {
    fn absorb(&mut self, o: &ExploreStats) {
        self.initial_words += o.initial_words;
        self.won += o.won;
        self.lost += o.lost;
        self.inconclusive += o.inconclusive;
        self.positions += o.positions;
        self.max_loss_round = self.max_loss_round.max(o.max_loss_round);
        self.doomed_requests += o.doomed_requests;
        self.dead_requests += o.dead_requests;
        self.stuck_requests += o.stuck_requests;
        self.losing_combinations += o.losing_combinations;
        self.parity_violations += o.parity_violations;
    }
}

#[derive(Debug, Clone)]
pub struct ExploreReport {
    pub verdict: Verdict,
    pub stats: ExploreStats,
}

/// Searches every initial word of `Q0` up to `caps.max_initial_len`.
pub fn explore(inst: &Instance, caps: Caps) -> ExploreReport {
    let words = inst.q0_nfa().enumerate_words(caps.max_initial_len);
    explore_words(inst, &words, caps, None)
}

/// Searches the given initial words, in order. With `jobs`, words are processed
/// by that many workers; the reported certificate is still the first in order.
pub fn explore_words(inst: &Instance, words: &[Word], caps: Caps, jobs: Option<usize>) -> ExploreReport {
    let explorer = Explorer::new(inst, caps);
    let pool = jobs.map(|n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
    });
    let mut stats = ExploreStats::default();
    let mut inconclusive = false;
    for chunk in words.chunks(CHUNK) {
        let run = || -> Vec<(Outcome, ExploreStats)> {
            chunk.par_iter().map(|w| explorer.run_word(w)).collect()
        };
        let results = match &pool {
            Some(p) => p.install(run),
            None => run(),
        };
        for (outcome, s) in results {
            stats.absorb(&s);
            match outcome {
                Outcome::Win(cert) => {
                    return ExploreReport {
                        verdict: Verdict::Nondeterminate(cert),
                        stats,
                    }
                }
                Outcome::Inconclusive => inconclusive = true,
                Outcome::Lose(_) => {}
            }
        }
    }
    let verdict = if inconclusive {
        Verdict::Inconclusive(caps)
    } else {
        Verdict::AllPlaysLose(caps)
    };
    ExploreReport { verdict, stats }
}

const CHUNK: usize = 256;

/// Search budget for the exact doom analysis of one constraint.
const BEHAVIOR_LIMIT: usize = 200_000;

#[derive(Debug)]
enum Outcome {
    Win(Box<Certificate>),
    Lose(usize),
    Inconclusive,
}

/// A binary relation on automaton states, one bit row per source state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Relation {
    width: usize,
    bits: Vec<u64>,
}

impl Relation {
    fn empty(n: usize) -> Relation {
        let width = n.div_ceil(64).max(1);
        Relation {
            width,
            bits: vec![0; n * width],
        }
    }

    fn identity(n: usize) -> Relation {
        let mut r = Relation::empty(n);
        for p in 0..n {
            r.set(p, p);
        }
        r
    }

    fn set(&mut self, p: usize, q: usize) {
        self.bits[p * self.width + q / 64] |= 1 << (q % 64);
    }

    fn row(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        let w = self.width;
        self.bits[p * w..(p + 1) * w]
            .iter()
            .enumerate()
            .flat_map(|(k, &word)| (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| k * 64 + b))
    }

    /// `self` followed by reading `letter` in `nfa`.
    fn then(&self, nfa: &Nfa, letter: Symbol) -> Relation {
        let n = nfa.state_count();
        let mut out = Relation::empty(n);
        for p in 0..n {
            for r in self.row(p) {
                for &(a, q) in nfa.transitions(r) {
                    if a == letter {
                        out.set(p, q);
                    }
                }
            }
        }
        out
    }

    fn of_word(nfa: &Nfa, w: &Word) -> Relation {
        w.iter()
            .fold(Relation::identity(nfa.state_count()), |r, &c| r.then(nfa, c))
    }

    fn is_subset(&self, other: &Relation) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

/// A grafted path from vertex index `x` to `y`, summarised by its relation.
type Graft<'r> = (usize, usize, &'r Relation);

struct Explorer<'i> {
    inst: &'i Instance,
    caps: Caps,
    /// Per constraint: right-hand words within the length cap, with their relations.
    candidates: Vec<Vec<(Word, Relation)>>,
    behaviors: Vec<OnceLock<Option<Vec<Relation>>>>,
}

impl<'i> Explorer<'i> {
    fn new(inst: &'i Instance, caps: Caps) -> Explorer<'i> {
        let red = inst.red_q0();
        let candidates = inst
            .constraints()
            .constraints()
            .iter()
            .map(|rc| {
                rc.rhs_nfa()
                    .enumerate_words(caps.max_witness_len)
                    .into_iter()
                    .filter(|w| !w.is_empty())
                    .map(|w| {
                        let r = Relation::of_word(red, &w);
                        (w, r)
                    })
                    .collect()
            })
            .collect();
        let behaviors = (0..inst.constraints().len()).map(|_| OnceLock::new()).collect();
        Explorer {
            inst,
            caps,
            candidates,
            behaviors,
        }
    }

    /// Whether `R(Q0)(a, b)` holds once the grafts are added.
    fn loses(&self, index: &GraphIndex, a: usize, b: usize, grafts: &[Graft<'_>]) -> bool {
        let red = self.inst.red_q0();
        let nq = red.state_count();
        if nq == 0 {
            return false;
        }
        let mut seen = vec![false; index.vertex_count() * nq];
        let mut queue = VecDeque::new();
        seen[a * nq + red.start()] = true;
        queue.push_back((a, red.start()));
        let mut visit = |v: usize, q: usize, queue: &mut VecDeque<(usize, usize)>| {
            if !seen[v * nq + q] {
                seen[v * nq + q] = true;
                queue.push_back((v, q));
            }
        };
        while let Some((v, q)) = queue.pop_front() {
            if v == b && red.is_accepting(q) {
                return true;
            }
            for &(label, w) in index.out_edges(v) {
                for &(c, t) in red.transitions(q) {
                    if c == label {
                        visit(w, t, &mut queue);
                    }
                }
            }
            for &(x, y, rel) in grafts {
                if x == v {
                    for t in rel.row(q) {
                        visit(y, t, &mut queue);
                    }
                }
            }
        }
        false
    }

    /// The inclusion-minimal relations of all right-hand words of `cid`, or `None`
    /// when the analysis exceeds its budget.
    fn behaviors(&self, cid: usize) -> Option<&[Relation]> {
        self.behaviors[cid]
            .get_or_init(|| {
                let rhs = self.inst.constraints().constraints()[cid].rhs_nfa();
                let red = self.inst.red_q0();
                let np = rhs.state_count();
                let set_of = |states: &[usize]| {
                    let mut s = vec![0u64; np.div_ceil(64).max(1)];
                    for &q in states {
                        s[q / 64] |= 1 << (q % 64);
                    }
                    s
                };
                let start = (set_of(&[rhs.start()]), Relation::identity(red.state_count()));
                let mut seen: HashSet<(Vec<u64>, Relation)> = HashSet::new();
                let mut found: HashSet<Relation> = HashSet::new();
                let mut queue = VecDeque::new();
                seen.insert(start.clone());
                queue.push_back(start);
                while let Some((set, rel)) = queue.pop_front() {
                    let members: Vec<usize> =
                        (0..np).filter(|q| set[q / 64] >> (q % 64) & 1 == 1).collect();
                    if members.iter().any(|&q| rhs.is_accepting(q)) {
                        found.insert(rel.clone());
                    }
                    let mut letters: Vec<Symbol> = members
                        .iter()
                        .flat_map(|&q| rhs.transitions(q).iter().map(|(c, _)| *c))
                        .collect();
                    letters.sort();
                    letters.dedup();
                    for c in letters {
                        let next: Vec<usize> = members
                            .iter()
                            .flat_map(|&q| rhs.transitions(q).iter().filter(|(d, _)| *d == c).map(|(_, t)| *t))
                            .collect();
                        let key = (set_of(&next), rel.then(red, c));
                        if seen.insert(key.clone()) {
                            if seen.len() > BEHAVIOR_LIMIT {
                                return None;
                            }
                            queue.push_back(key);
                        }
                    }
                }
                let all: Vec<Relation> = found.into_iter().collect();
                let minimal = all
                    .iter()
                    .filter(|r| !all.iter().any(|s| s != *r && s.is_subset(r)))
                    .cloned()
                    .collect();
                Some(minimal)
            })
            .as_deref()
    }

    /// Whether every right-hand word of `cid` grafted from `x` to `y` loses.
    fn doomed(&self, cid: usize, index: &GraphIndex, a: usize, b: usize, x: usize, y: usize) -> bool {
        match self.behaviors(cid) {
            Some(rels) => rels.iter().all(|r| self.loses(index, a, b, &[(x, y, r)])),
            None => false,
        }
    }

    fn run_word(&self, w: &Word) -> (Outcome, ExploreStats) {
        let mut run = Run {
            ex: self,
            stats: ExploreStats {
                initial_words: 1,
                ..ExploreStats::default()
            },
            word: w.clone(),
            choices: Vec::new(),
        };
        let outcome = match Position::initial(w) {
            Err(_) => Outcome::Inconclusive,
            Ok(p) => {
                let index = GraphIndex::new(&p.graph);
                if index
                    .holds(self.inst.red_q0(), p.a, p.b)
                    .expect("endpoints exist")
                {
                    Outcome::Lose(0)
                } else {
                    run.search(&p.graph, 0)
                }
            }
        };
        match &outcome {
            Outcome::Win(_) => run.stats.won += 1,
            Outcome::Lose(r) => {
                run.stats.lost += 1;
                run.stats.max_loss_round = run.stats.max_loss_round.max(*r);
            }
            Outcome::Inconclusive => run.stats.inconclusive += 1,
        }
        (outcome, run.stats)
    }
}

struct Run<'e, 'i> {
    ex: &'e Explorer<'i>,
    stats: ExploreStats,
    word: Word,
    choices: Vec<Vec<Word>>,
}

/// Outcome of the children of one position.
#[derive(Default)]
struct Fold {
    win: Option<Box<Certificate>>,
    inconclusive: bool,
    max_loss: usize,
}

impl Fold {
    fn add(&mut self, o: Outcome) {
        match o {
            Outcome::Win(c) => self.win = Some(c),
            Outcome::Inconclusive => self.inconclusive = true,
            Outcome::Lose(r) => self.max_loss = self.max_loss.max(r),
        }
    }

    fn finish(self) -> Outcome {
        match self.win {
            Some(c) => Outcome::Win(c),
            None if self.inconclusive => Outcome::Inconclusive,
            None => Outcome::Lose(self.max_loss),
        }
    }
}

struct Move<'r> {
    request: Request,
    x: usize,
    y: usize,
    options: Vec<&'r (Word, Relation)>,
}

impl Run<'_, '_> {
    /// Explores from a position that is not lost, `round` moves into the play.
    fn search(&mut self, g: &LabeledGraph, round: usize) -> Outcome {
        self.stats.positions += 1;
        let ex = self.ex;
        let t = ex.inst.constraints();
        let index = GraphIndex::new(g);
        let a = index.index_of(VertexId::named("a")).expect("endpoint a");
        let b = index.index_of(VertexId::named("b")).expect("endpoint b");
        if round >= ex.caps.max_rounds {
            return if t.requests_indexed(&index).is_empty() {
                self.win(g, round)
            } else {
                Outcome::Inconclusive
            };
        }
        let mut moves: Vec<Move<'_>> = Vec::new();
        let mut stuck = false;
        // Requests leaving `a` come first, which is where doomed ones usually sit.
        for x in 0..index.vertex_count() {
            for r in t.requests_from(&index, x) {
                let y = index.index_of(r.y).expect("request endpoint");
                let cands = &ex.candidates[r.constraint];
                if cands.is_empty() {
                    if ex.doomed(r.constraint, &index, a, b, x, y) {
                        self.stats.doomed_requests += 1;
                        return Outcome::Lose(round + 1);
                    }
                    self.stats.stuck_requests += 1;
                    stuck = true;
                    moves.push(Move {
                        request: r,
                        x,
                        y,
                        options: Vec::new(),
                    });
                    continue;
                }
                let options: Vec<_> = cands
                    .iter()
                    .filter(|(_, rel)| !ex.loses(&index, a, b, &[(x, y, rel)]))
                    .take(ex.caps.max_branches)
                    .collect();
                if options.is_empty() {
                    self.stats.dead_requests += 1;
                    return Outcome::Lose(round + 1);
                }
                moves.push(Move {
                    request: r,
                    x,
                    y,
                    options,
                });
            }
        }
        if moves.is_empty() {
            return self.win(g, round);
        }
        if stuck {
            return Outcome::Inconclusive;
        }
        let mut fold = Fold::default();
        let mut grafts = Vec::with_capacity(moves.len());
        let mut picks = Vec::with_capacity(moves.len());
        self.combine(g, &index, (a, b), round, &moves, &mut grafts, &mut picks, &mut fold);
        fold.finish()
    }

    #[allow(clippy::too_many_arguments)]
    fn combine<'r>(
        &mut self,
        g: &LabeledGraph,
        index: &GraphIndex,
        (a, b): (usize, usize),
        round: usize,
        moves: &[Move<'r>],
        grafts: &mut Vec<Graft<'r>>,
        picks: &mut Vec<&'r Word>,
        fold: &mut Fold,
    ) {
        if fold.win.is_some() {
            return;
        }
        let k = grafts.len();
        if k == moves.len() {
            let next = self.graft(g, round + 1, moves, picks);
            self.choices.push(picks.iter().map(|w| (*w).clone()).collect());
            let outcome = self.search(&next, round + 1);
            self.choices.pop();
            fold.add(outcome);
            return;
        }
        let m = &moves[k];
        for opt in &m.options {
            grafts.push((m.x, m.y, &opt.1));
            picks.push(&opt.0);
            if k > 0 && self.ex.loses(index, a, b, grafts) {
                self.stats.losing_combinations += 1;
                fold.add(Outcome::Lose(round + 1));
            } else {
                self.combine(g, index, (a, b), round, moves, grafts, picks, fold);
            }
            grafts.pop();
            picks.pop();
            if fold.win.is_some() {
                return;
            }
        }
    }

    fn graft(&mut self, g: &LabeledGraph, round: usize, moves: &[Move<'_>], picks: &[&Word]) -> LabeledGraph {
        let t = self.ex.inst.constraints();
        let ink = if round % 2 == 1 { Color::Red } else { Color::Green };
        let mut next = g.clone();
        for (i, (m, w)) in moves.iter().zip(picks).enumerate() {
            let edges = witness_edges(t, &m.request, w, round, i).expect("candidates are right-hand words");
            for e in edges {
                if next.add_edge(e) && e.label.color() != Some(ink) {
                    self.stats.parity_violations += 1;
                }
            }
        }
        next
    }

    fn win(&mut self, g: &LabeledGraph, round: usize) -> Outcome {
        Outcome::Win(Box::new(Certificate {
            graph: g.clone(),
            a: VertexId::named("a"),
            b: VertexId::named("b"),
            initial_word: self.word.clone(),
            rounds: round,
            choices: self.choices.clone(),
        }))
    }
}
