//! The doubled grid `G_m`, its shade decoration, the counterexample check and
//! homomorphism search.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::automata::{Color, Direction, Parity, Symbol, Temperature};
use crate::graphs::{Edge, EndpointedGraph, GraphError, LabeledGraph, VertexId};
use crate::instance::Instance;
use crate::ogtp::{grid_symbol, GridTiling, OgtpError};
use crate::rpq::GraphIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("tiling has size {tiling} but the grid has size {grid}")]
    SizeMismatch { grid: usize, tiling: usize },
    #[error("edge {0} is not a grid edge")]
    NotAGridEdge(String),
    #[error(transparent)]
    Tiling(#[from] OgtpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type VertexMap = BTreeMap<VertexId, VertexId>;

pub fn grid_vertex(i: usize, j: usize) -> VertexId {
    VertexId::named(&format!("v_{i}_{j}"))
}

fn grid_coords(v: VertexId) -> Option<(usize, usize)> {
    let rest = v.name().strip_prefix("v_")?;
    let (i, j) = rest.split_once('_')?;
    Some((i.parse().ok()?, j.parse().ok()?))
}

fn parity(i: usize, j: usize) -> Parity {
    if (i + j).is_multiple_of(2) {
        Parity::A
    } else {
        Parity::B
    }
}

/// The shade-less grid `G_m` with endpoints `a` and `b`.
///
/// Every neighbor pair gets a green Cold edge and a red Warm edge; edges leaving
/// `v(i,j)` are tagged `A` when `i + j` is even and `B` otherwise.
pub fn build_grid(m: usize) -> EndpointedGraph {
    assert!(m >= 1, "grid size must be at least 1");
    let (a, b) = (VertexId::named("a"), VertexId::named("b"));
    let mut g = LabeledGraph::new();
    let sym = |s: &str| Symbol::parse(s).expect("fixed token");
    g.add_edge(Edge::new(a, sym("G:alpha"), grid_vertex(0, 0)));
    g.add_edge(Edge::new(a, sym("R:beta"), grid_vertex(0, 0)));
    g.add_edge(Edge::new(grid_vertex(m, m), sym("G:omega"), b));
    g.add_edge(Edge::new(grid_vertex(m, m), sym("R:omega"), b));
    for i in 0..=m {
        for j in 0..=m {
            let from = grid_vertex(i, j);
            let mut succ = Vec::new();
            if i < m {
                succ.push((Direction::H, grid_vertex(i + 1, j)));
            }
            if j < m {
                succ.push((Direction::V, grid_vertex(i, j + 1)));
            }
            for (d, to) in succ {
                let p = parity(i, j);
                g.add_edge(Edge::new(from, grid_symbol(Some(Color::Green), p, d, Temperature::Cold, None), to));
                g.add_edge(Edge::new(from, grid_symbol(Some(Color::Red), p, d, Temperature::Warm, None), to));
            }
        }
    }
    EndpointedGraph::new(g, a, b).expect("endpoints are grid vertices")
}

/// Copies the tiling's shades onto the grid letters; green and red twins get the same shade.
pub fn decorate(g: &EndpointedGraph, t: &GridTiling) -> Result<EndpointedGraph, GadgetError> {
    t.validate()?;
    let m = g.graph.vertex_count().saturating_sub(2);
    let side = (m as f64).sqrt().round() as usize;
    if side * side != m || side < 2 || side - 1 != t.n {
        return Err(GadgetError::SizeMismatch {
            grid: side.saturating_sub(1),
            tiling: t.n,
        });
    }
    let mut out = LabeledGraph::new();
    for v in g.graph.vertices() {
        out.add_vertex(*v);
    }
    for e in g.graph.edges() {
        let Some(letter) = e.label.grid_letter() else {
            out.add_edge(*e);
            continue;
        };
        let not_grid = || GadgetError::NotAGridEdge(format!("{} {} {}", e.src, e.label, e.dst));
        let (i, j) = grid_coords(e.src).ok_or_else(not_grid)?;
        let shade = match letter.direction {
            Direction::H => t.h_label(i, j),
            Direction::V => t.v_label(i, j),
        }
        .ok_or_else(not_grid)?;
        let label = e.label.strip_shade().with_shade(shade).ok_or_else(not_grid)?;
        out.add_edge(Edge::new(e.src, label, e.dst));
    }
    Ok(EndpointedGraph::new(out, g.a, g.b)?)
}

/// Outcome of the three counterexample conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    /// First violated constraint, as `(x, y, constraint id)`, if any.
    pub violated_constraint: Option<(VertexId, VertexId, usize)>,
    pub green_q0: bool,
    pub red_q0: bool,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.violated_constraint.is_none() && self.green_q0 && !self.red_q0
    }

    /// Every failing condition, phrased for a one-line report.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.violated_constraint.is_some() {
            out.push("Q<-> fails");
        }
        if !self.green_q0 {
            out.push("G(Q0) fails");
        }
        if self.red_q0 {
            out.push("R(Q0) holds");
        }
        out
    }
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failures = self.failures();
        if failures.is_empty() {
            write!(f, "PASS")
        } else {
            write!(f, "FAIL {}", failures.join(", "))
        }
    }
}

/// Checks that `m` satisfies every lifted view constraint, connects `a` to `b` by a
/// green `Q0` path, and has no red `Q0` path from `a` to `b`.
pub fn check_counterexample(
    m: &LabeledGraph,
    inst: &Instance,
    a: VertexId,
    b: VertexId,
) -> Result<CounterexampleReport, GraphError> {
    m.require_vertex(a)?;
    m.require_vertex(b)?;
    let index = GraphIndex::new(m);
    let violated_constraint = inst
        .constraints()
        .requests_indexed(&index)
        .first()
        .map(|r| (r.x, r.y, r.constraint));
    Ok(CounterexampleReport {
        violated_constraint,
        green_q0: index.holds(inst.green_q0(), a, b)?,
        red_q0: index.holds(inst.red_q0(), a, b)?,
    })
}

/// Whether `h` maps every edge of `d` onto an edge of `m`.
pub fn is_homomorphism(h: &VertexMap, d: &LabeledGraph, m: &LabeledGraph) -> bool {
    d.vertices().iter().all(|v| h.get(v).is_some_and(|w| m.contains_vertex(*w)))
        && d.edges().iter().all(|e| {
            m.contains_edge(&Edge::new(h[&e.src], e.label, h[&e.dst]))
        })
}

struct Matcher {
    order: Vec<VertexId>,
    d_out: HashMap<VertexId, Vec<(Symbol, VertexId)>>,
    d_in: HashMap<VertexId, Vec<(Symbol, VertexId)>>,
    m_edges: HashSet<(VertexId, Symbol, VertexId)>,
    candidates: HashMap<VertexId, Vec<VertexId>>,
    injective: bool,
    used: HashSet<VertexId>,
    h: VertexMap,
}

impl Matcher {
    fn consistent(&self, u: VertexId, w: VertexId) -> bool {
        let out_ok = self.d_out[&u].iter().all(|(l, v)| match self.h.get(v) {
            Some(hv) => self.m_edges.contains(&(w, *l, *hv)),
            None if *v == u => self.m_edges.contains(&(w, *l, w)),
            None => true,
        });
        out_ok
            && self.d_in[&u].iter().all(|(l, v)| match self.h.get(v) {
                Some(hv) => self.m_edges.contains(&(*hv, *l, w)),
                None => true,
            })
    }

    fn search(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let u = self.order[k];
        for w in self.candidates[&u].clone() {
            if self.injective && self.used.contains(&w) {
                continue;
            }
            if !self.consistent(u, w) {
                continue;
            }
            self.h.insert(u, w);
            self.used.insert(w);
            if self.search(k + 1) {
                return true;
            }
            self.h.remove(&u);
            self.used.remove(&w);
        }
        false
    }
}

fn label_sets(g: &LabeledGraph) -> (HashMap<VertexId, BTreeSet<Symbol>>, HashMap<VertexId, BTreeSet<Symbol>>) {
    let mut out: HashMap<_, BTreeSet<Symbol>> = g.vertices().iter().map(|v| (*v, BTreeSet::new())).collect();
    let mut inc = out.clone();
    for e in g.edges() {
        out.get_mut(&e.src).unwrap().insert(e.label);
        inc.get_mut(&e.dst).unwrap().insert(e.label);
    }
    (out, inc)
}

fn search_map(
    d: &LabeledGraph,
    m: &LabeledGraph,
    pins: &[(VertexId, VertexId)],
    injective: bool,
) -> Option<VertexMap> {
    let mut d_out: HashMap<VertexId, Vec<(Symbol, VertexId)>> =
        d.vertices().iter().map(|v| (*v, Vec::new())).collect();
    let mut d_in = d_out.clone();
    for e in d.edges() {
        d_out.get_mut(&e.src).unwrap().push((e.label, e.dst));
        d_in.get_mut(&e.dst).unwrap().push((e.label, e.src));
    }
    let (dl_out, dl_in) = label_sets(d);
    let (ml_out, ml_in) = label_sets(m);
    let pinned: HashMap<VertexId, VertexId> = pins.iter().copied().collect();
    let mut candidates = HashMap::new();
    for u in d.vertices() {
        let list: Vec<VertexId> = match pinned.get(u) {
            Some(w) if m.contains_vertex(*w) => vec![*w],
            Some(_) => return None,
            None => m
                .vertices()
                .iter()
                .copied()
                .filter(|w| dl_out[u].is_subset(&ml_out[w]) && dl_in[u].is_subset(&ml_in[w]))
                .collect(),
        };
        if list.is_empty() {
            return None;
        }
        candidates.insert(*u, list);
    }
    // Pinned and most constrained vertices first, then grow along edges.
    let mut order: Vec<VertexId> = Vec::with_capacity(d.vertex_count());
    let mut placed: HashSet<VertexId> = HashSet::new();
    let mut rest: BTreeSet<VertexId> = d.vertices().clone();
    while !rest.is_empty() {
        let next = *rest
            .iter()
            .max_by_key(|u| {
                let linked = d_out[u].iter().chain(&d_in[u]).filter(|(_, v)| placed.contains(v)).count();
                (
                    pinned.contains_key(u),
                    linked,
                    std::cmp::Reverse(candidates[u].len()),
                    std::cmp::Reverse(**u),
                )
            })
            .expect("non-empty");
        rest.remove(&next);
        placed.insert(next);
        order.push(next);
    }
    let mut matcher = Matcher {
        order,
        d_out,
        d_in,
        m_edges: m.edges().iter().map(|e| (e.src, e.label, e.dst)).collect(),
        candidates,
        injective,
        used: HashSet::new(),
        h: VertexMap::new(),
    };
    matcher.search(0).then_some(matcher.h)
}

/// A label-preserving vertex map from `d` into `m`, found by backtracking.
pub fn find_homomorphism(d: &LabeledGraph, m: &LabeledGraph) -> Option<VertexMap> {
    search_map(d, m, &[], false)
}

/// Like [`find_homomorphism`] with some images fixed in advance (e.g. `a -> a`, `b -> b`).
pub fn find_homomorphism_pinned(
    d: &LabeledGraph,
    m: &LabeledGraph,
    pins: &[(VertexId, VertexId)],
) -> Option<VertexMap> {
    search_map(d, m, pins, false)
}

/// Isomorphism of labeled graphs: a bijection on vertices carrying edges onto edges.
pub fn isomorphism(d: &LabeledGraph, e: &LabeledGraph) -> Option<VertexMap> {
    if d.vertex_count() != e.vertex_count() || d.edge_count() != e.edge_count() {
        return None;
    }
    let count = |g: &LabeledGraph| {
        let mut c: BTreeMap<Symbol, usize> = BTreeMap::new();
        for x in g.edges() {
            *c.entry(x.label).or_default() += 1;
        }
        c
    };
    if count(d) != count(e) {
        return None;
    }
    // An injective edge-preserving map between graphs with equal edge counts is onto the edges.
    search_map(d, e, &[], true)
}

/// Isomorphism after erasing shades on both sides.
pub fn iso_shadeless(d: &LabeledGraph, e: &LabeledGraph) -> bool {
    isomorphism(&d.strip_shades(), &e.strip_shades()).is_some()
}
