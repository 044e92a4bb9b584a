//! Regular path query evaluation by reachability in the product of a graph and an NFA.
//!
//! Semantics are arbitrary-path: a pair `(x, y)` is an answer when some walk from
//! `x` to `y`, not necessarily simple, spells a word of the query. A query
//! accepting the empty word relates every vertex to itself.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automata::{Nfa, Symbol, Word};
use crate::graphs::{GraphError, LabeledGraph, VertexId};

pub type PairSet = BTreeSet<(VertexId, VertexId)>;

/// Adjacency lists over dense vertex indices, built once and shared by many queries.
#[derive(Debug, Clone)]
pub struct GraphIndex {
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    out: Vec<Vec<(Symbol, usize)>>,
    inc: Vec<Vec<(Symbol, usize)>>,
}

impl GraphIndex {
    pub fn new(g: &LabeledGraph) -> GraphIndex {
        let vertices: Vec<VertexId> = g.vertices().iter().copied().collect();
        let index: HashMap<VertexId, usize> =
            vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inc = vec![Vec::new(); vertices.len()];
        for e in g.edges() {
            let (s, d) = (index[&e.src], index[&e.dst]);
            out[s].push((e.label, d));
            inc[d].push((e.label, s));
        }
        GraphIndex {
            vertices,
            index,
            out,
            inc,
        }
    }

    pub fn vertex(&self, i: usize) -> VertexId {
        self.vertices[i]
    }

    pub fn index_of(&self, v: VertexId) -> Result<usize, GraphError> {
        self.index
            .get(&v)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Outgoing `(label, target)` pairs of vertex index `v`.
    pub fn out_edges(&self, v: usize) -> &[(Symbol, usize)] {
        &self.out[v]
    }

    /// Whether a walk from `src` could start reading a word of `q` at all.
    fn may_start(&self, q: &Nfa, src: usize) -> bool {
        q.accepts_epsilon()
            || self.out[src]
                .iter()
                .any(|(l, _)| q.first_symbols().contains(l))
    }

    /// Product breadth-first search from `(src, start)`; calls `visit` on every
    /// vertex reached in an accepting state. Stops early when `visit` returns true.
    fn search<F: FnMut(usize) -> bool>(&self, q: &Nfa, src: usize, mut visit: F) {
        if !self.may_start(q, src) {
            return;
        }
        let nq = q.state_count();
        let mut seen = vec![false; self.vertices.len() * nq];
        let mut reported = vec![false; self.vertices.len()];
        let mut queue = VecDeque::new();
        seen[src * nq + q.start()] = true;
        queue.push_back((src, q.start()));
        while let Some((v, s)) = queue.pop_front() {
            if q.is_accepting(s) && !reported[v] {
                reported[v] = true;
                if visit(v) {
                    return;
                }
            }
            for &(label, w) in &self.out[v] {
                for &(a, t) in q.transitions(s) {
                    if a == label && !seen[w * nq + t] {
                        seen[w * nq + t] = true;
                        queue.push_back((w, t));
                    }
                }
            }
        }
    }

    /// Vertex indices `y` with `(src, y)` in the answer, ascending.
    pub fn targets(&self, q: &Nfa, src: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.search(q, src, |v| {
            out.push(v);
            false
        });
        out.sort_unstable();
        out
    }

    pub fn holds_idx(&self, q: &Nfa, src: usize, dst: usize) -> bool {
        let mut found = false;
        self.search(q, src, |v| {
            found = v == dst;
            found
        });
        found
    }

    pub fn holds(&self, q: &Nfa, x: VertexId, y: VertexId) -> Result<bool, GraphError> {
        let (s, d) = (self.index_of(x)?, self.index_of(y)?);
        Ok(self.holds_idx(q, s, d))
    }

    pub fn eval(&self, q: &Nfa) -> PairSet {
        let mut out = PairSet::new();
        for s in 0..self.vertices.len() {
            for d in self.targets(q, s) {
                out.insert((self.vertices[s], self.vertices[d]));
            }
        }
        out
    }

    /// Shortest witness (shortlex-least among shortest) together with the vertices it visits.
    pub fn find_path_idx(&self, q: &Nfa, src: usize, dst: usize) -> Option<(Word, Vec<usize>)> {
        let nq = q.state_count();
        let nv = self.vertices.len();
        let key = |v: usize, s: usize| v * nq + s;
        let mut rev_nfa: Vec<Vec<(Symbol, usize)>> = vec![Vec::new(); nq];
        for s in 0..nq {
            for &(a, t) in q.transitions(s) {
                rev_nfa[t].push((a, s));
            }
        }
        // Backward distances from every accepting copy of `dst`.
        let mut dist = vec![usize::MAX; nv * nq];
        let mut queue = VecDeque::new();
        for s in 0..nq {
            if q.is_accepting(s) {
                dist[key(dst, s)] = 0;
                queue.push_back((dst, s));
            }
        }
        while let Some((w, t)) = queue.pop_front() {
            let d = dist[key(w, t)];
            for &(label, v) in &self.inc[w] {
                for &(a, s) in &rev_nfa[t] {
                    if a == label && dist[key(v, s)] == usize::MAX {
                        dist[key(v, s)] = d + 1;
                        queue.push_back((v, s));
                    }
                }
            }
        }
        let len = dist[key(src, q.start())];
        if len == usize::MAX {
            return None;
        }
        // Greedy descent: smallest letter keeping the remaining distance exact.
        let alphabet = q.alphabet();
        let mut frontier: Vec<(usize, usize)> = vec![(src, q.start())];
        let mut parents: Vec<HashMap<(usize, usize), (usize, usize)>> = Vec::with_capacity(len);
        let mut letters = Vec::with_capacity(len);
        for remaining in (1..=len).rev() {
            let mut best: Option<(usize, Symbol)> = None;
            let mut next: Vec<((usize, usize), (usize, usize))> = Vec::new();
            for &(v, s) in &frontier {
                for &(label, w) in &self.out[v] {
                    for &(a, t) in q.transitions(s) {
                        if a != label || dist[key(w, t)] != remaining - 1 {
                            continue;
                        }
                        let rank = alphabet.rank(a).unwrap_or(usize::MAX);
                        match best {
                            Some((r, _)) if r < rank => continue,
                            Some((r, _)) if r > rank => next.clear(),
                            _ => {}
                        }
                        best = Some((rank, a));
                        next.push(((w, t), (v, s)));
                    }
                }
            }
            let (_, letter) = best.expect("distance guarantees a successor");
            letters.push(letter);
            let mut layer = HashMap::new();
            let mut states = Vec::new();
            for (state, parent) in next {
                if let std::collections::hash_map::Entry::Vacant(e) = layer.entry(state) {
                    e.insert(parent);
                    states.push(state);
                }
            }
            states.sort_unstable();
            parents.push(layer);
            frontier = states;
        }
        let mut state = *frontier
            .iter()
            .find(|(v, s)| *v == dst && q.is_accepting(*s))
            .expect("distance zero means an accepting copy of dst");
        let mut path = vec![state.0];
        for layer in parents.iter().rev() {
            state = layer[&state];
            path.push(state.0);
        }
        path.reverse();
        Some((Word::new(letters), path))
    }
}

/// All pairs `(x, y)` connected by a walk spelling a word of `q`.
pub fn eval(q: &Nfa, g: &LabeledGraph) -> PairSet {
    GraphIndex::new(g).eval(q)
}

/// Whether `(x, y)` is an answer of `q` on `g`, by single-source product search.
pub fn holds(q: &Nfa, g: &LabeledGraph, x: VertexId, y: VertexId) -> Result<bool, GraphError> {
    GraphIndex::new(g).holds(q, x, y)
}

/// A shortest witness word for `(x, y)`, ties broken shortlex; `None` when `(x, y)` is not an answer.
pub fn find_path(
    q: &Nfa,
    g: &LabeledGraph,
    x: VertexId,
    y: VertexId,
) -> Result<Option<Word>, GraphError> {
    Ok(find_path_with_vertices(q, g, x, y)?.map(|(w, _)| w))
}

/// Like [`find_path`], also returning the visited vertices (`|word| + 1` of them).
pub fn find_path_with_vertices(
    q: &Nfa,
    g: &LabeledGraph,
    x: VertexId,
    y: VertexId,
) -> Result<Option<(Word, Vec<VertexId>)>, GraphError> {
    let index = GraphIndex::new(g);
    let (s, d) = (index.index_of(x)?, index.index_of(y)?);
    Ok(index
        .find_path_idx(q, s, d)
        .map(|(w, path)| (w, path.into_iter().map(|i| index.vertex(i)).collect())))
}
