//! Regular constraints `L -> L'`, requests and the Add procedure.
//!
//! A constraint is violated at `(x, y)` when the left language connects `x` to `y`
//! and the right one does not; such a triple is a [`Request`]. Add satisfies it by
//! grafting a fresh path spelling a chosen right-hand word.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{literal_tokens, parse_regex, Alphabet, AutomataError, Color, Nfa, Regex, Word};
use crate::graphs::{Edge, GraphError, LabeledGraph, VertexId};
use crate::rpq::GraphIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("language {0} contains the empty word")]
    EpsilonLanguage(usize),
    #[error("constraint {0} has an empty right-hand side but a non-empty left-hand side")]
    EmptyRhs(usize),
    #[error("view {0} uses colored symbols; views are over the base alphabet")]
    ColoredView(usize),
    #[error("witness '{word}' is not in the right-hand language of constraint {constraint}")]
    WitnessRejected { word: String, constraint: usize },
    #[error("no constraint with id {0}")]
    UnknownConstraint(usize),
    #[error("malformed constraint set: {0}")]
    Malformed(String),
}

/// `lhs -> rhs`, both over the colored alphabet.
#[derive(Debug, Clone)]
pub struct RegularConstraint {
    id: usize,
    lhs: Regex,
    rhs: Regex,
    lhs_nfa: Nfa,
    rhs_nfa: Nfa,
}

impl RegularConstraint {
    pub fn new(
        id: usize,
        lhs: Regex,
        rhs: Regex,
        alphabet: Arc<Alphabet>,
    ) -> Result<RegularConstraint, ConstraintError> {
        let lhs_nfa = Nfa::compile(&lhs, alphabet.clone())?;
        let rhs_nfa = Nfa::compile(&rhs, alphabet)?;
        if rhs_nfa.accepts_epsilon() {
            return Err(ConstraintError::EpsilonLanguage(id));
        }
        if rhs_nfa.is_empty() && !lhs_nfa.is_empty() {
            return Err(ConstraintError::EmptyRhs(id));
        }
        Ok(RegularConstraint {
            id,
            lhs,
            rhs,
            lhs_nfa,
            rhs_nfa,
        })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn lhs(&self) -> &Regex {
        &self.lhs
    }

    pub fn rhs(&self) -> &Regex {
        &self.rhs
    }

    pub fn lhs_nfa(&self) -> &Nfa {
        &self.lhs_nfa
    }

    pub fn rhs_nfa(&self) -> &Nfa {
        &self.rhs_nfa
    }
}

/// The lifted pair `(G(l) -> R(l), R(l) -> G(l))` with ids `first_id` and `first_id + 1`.
pub fn make_arrows(
    l: &Regex,
    colored: Arc<Alphabet>,
    first_id: usize,
) -> Result<(RegularConstraint, RegularConstraint), ConstraintError> {
    if l.symbols().iter().any(|s| s.color().is_some()) {
        return Err(ConstraintError::ColoredView(first_id / 2));
    }
    let green = l.recolor(Color::Green);
    let red = l.recolor(Color::Red);
    let green_nfa = Nfa::compile(&green, colored.clone())?;
    if green_nfa.accepts_epsilon() {
        return Err(ConstraintError::EpsilonLanguage(first_id / 2));
    }
    let forward = RegularConstraint::new(first_id, green.clone(), red.clone(), colored.clone())?;
    let backward = RegularConstraint::new(first_id + 1, red, green, colored)?;
    Ok((forward, backward))
}

/// An ordered constraint set; a constraint's id is its position.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    alphabet: Arc<Alphabet>,
    constraints: Vec<RegularConstraint>,
}

/// An unsatisfied triple: `lhs(x, y)` holds and `rhs(x, y)` does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Request {
    pub x: VertexId,
    pub y: VertexId,
    pub constraint: usize,
}

#[derive(Serialize, Deserialize)]
struct ConstraintJson {
    lhs: String,
    rhs: String,
}

#[derive(Serialize, Deserialize)]
struct ConstraintSetJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alphabet: Option<Vec<String>>,
    constraints: Vec<ConstraintJson>,
}

impl ConstraintSet {
    /// Builds a set from explicit pairs over a colored alphabet.
    pub fn new(
        alphabet: Arc<Alphabet>,
        pairs: Vec<(Regex, Regex)>,
    ) -> Result<ConstraintSet, ConstraintError> {
        let constraints = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (l, r))| RegularConstraint::new(i, l, r, alphabet.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ConstraintSet {
            alphabet,
            constraints,
        })
    }

    /// `Q<->`: both arrows of every view, in view order. `base` is the uncolored alphabet.
    pub fn from_views(views: &[Regex], base: &Alphabet) -> Result<ConstraintSet, ConstraintError> {
        let alphabet = Arc::new(base.colored());
        let mut constraints = Vec::with_capacity(2 * views.len());
        for (i, l) in views.iter().enumerate() {
            let (f, b) = make_arrows(l, alphabet.clone(), 2 * i)?;
            constraints.push(f);
            constraints.push(b);
        }
        Ok(ConstraintSet {
            alphabet,
            constraints,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn constraints(&self) -> &[RegularConstraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn get(&self, id: usize) -> Result<&RegularConstraint, ConstraintError> {
        self.constraints
            .get(id)
            .ok_or(ConstraintError::UnknownConstraint(id))
    }

    /// All requests, in canonical order (x name, y name, constraint id).
    pub fn requests(&self, g: &LabeledGraph) -> Vec<Request> {
        self.requests_indexed(&GraphIndex::new(g))
    }

    pub fn requests_indexed(&self, index: &GraphIndex) -> Vec<Request> {
        (0..index.vertex_count())
            .flat_map(|x| self.requests_from(index, x))
            .collect()
    }

    /// Requests whose first vertex has index `x`, ordered by (y name, constraint id).
    pub fn requests_from(&self, index: &GraphIndex, x: usize) -> Vec<Request> {
        let mut here: Vec<(usize, usize)> = Vec::new();
        for rc in &self.constraints {
            let lhs = index.targets(&rc.lhs_nfa, x);
            if lhs.is_empty() {
                continue;
            }
            let rhs = index.targets(&rc.rhs_nfa, x);
            here.extend(
                lhs.into_iter()
                    .filter(|y| rhs.binary_search(y).is_err())
                    .map(|y| (y, rc.id)),
            );
        }
        here.sort_unstable();
        here.into_iter()
            .map(|(y, c)| Request {
                x: index.vertex(x),
                y: index.vertex(y),
                constraint: c,
            })
            .collect()
    }

    pub fn is_satisfied(&self, g: &LabeledGraph) -> bool {
        let index = GraphIndex::new(g);
        self.constraints.iter().all(|rc| satisfied_indexed(rc, &index))
    }

    pub fn to_json(&self) -> String {
        let doc = ConstraintSetJson {
            alphabet: Some(
                self.alphabet
                    .symbols()
                    .iter()
                    .map(|s| s.name().to_string())
                    .collect(),
            ),
            constraints: self
                .constraints
                .iter()
                .map(|rc| ConstraintJson {
                    lhs: rc.lhs.to_text(&self.alphabet),
                    rhs: rc.rhs.to_text(&self.alphabet),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data")
    }

    /// Reads the constraint-set format. Without an explicit alphabet, the literal
    /// tokens of all regexes form it, in order of first appearance.
    pub fn from_json(text: &str) -> Result<ConstraintSet, ConstraintError> {
        let doc: ConstraintSetJson =
            serde_json::from_str(text).map_err(|e| ConstraintError::Malformed(e.to_string()))?;
        let alphabet = match doc.alphabet {
            Some(tokens) => Alphabet::from_tokens(&tokens)?,
            None => {
                let mut seen = std::collections::HashSet::new();
                let mut symbols = Vec::new();
                for c in &doc.constraints {
                    for s in literal_tokens(&c.lhs)?
                        .into_iter()
                        .chain(literal_tokens(&c.rhs)?)
                    {
                        if seen.insert(s) {
                            symbols.push(s);
                        }
                    }
                }
                Alphabet::new(symbols)?
            }
        };
        let pairs = doc
            .constraints
            .iter()
            .map(|c| Ok((parse_regex(&c.lhs, &alphabet)?, parse_regex(&c.rhs, &alphabet)?)))
            .collect::<Result<Vec<_>, AutomataError>>()?;
        ConstraintSet::new(Arc::new(alphabet), pairs)
    }
}

/// `g |= rc`: every lhs-connected pair is also rhs-connected.
pub fn satisfied(rc: &RegularConstraint, g: &LabeledGraph) -> bool {
    satisfied_indexed(rc, &GraphIndex::new(g))
}

fn satisfied_indexed(rc: &RegularConstraint, index: &GraphIndex) -> bool {
    (0..index.vertex_count()).all(|x| {
        let lhs = index.targets(&rc.lhs_nfa, x);
        lhs.is_empty() || {
            let rhs = index.targets(&rc.rhs_nfa, x);
            lhs.iter().all(|y| rhs.binary_search(y).is_ok())
        }
    })
}

/// Name of the `k`-th fresh vertex created for request `req_index` in round `round`.
pub fn fresh_vertex_name(round: usize, req_index: usize, k: usize) -> VertexId {
    VertexId::named(&format!("n{round}_{req_index}_{k}"))
}

/// The edges of the path spelling `w` from `r.x` to `r.y` through fresh vertices.
pub fn witness_edges(
    t: &ConstraintSet,
    r: &Request,
    w: &Word,
    round: usize,
    req_index: usize,
) -> Result<Vec<Edge>, ConstraintError> {
    let rc = t.get(r.constraint)?;
    let reject = || ConstraintError::WitnessRejected {
        word: w.to_string(),
        constraint: r.constraint,
    };
    if w.is_empty() || !rc.rhs_nfa.accepts(w).map_err(|_| reject())? {
        return Err(reject());
    }
    let n = w.len();
    let mut stops = Vec::with_capacity(n + 1);
    stops.push(r.x);
    stops.extend((1..n).map(|k| fresh_vertex_name(round, req_index, k)));
    stops.push(r.y);
    Ok(w
        .iter()
        .enumerate()
        .map(|(i, &l)| Edge::new(stops[i], l, stops[i + 1]))
        .collect())
}

/// Add: `g` plus a fresh path spelling `w` from `r.x` to `r.y`.
///
/// Fresh vertices are `n<round>_<req_index>_<k>` for `k` in `1..|w|`; an existing
/// vertex of that name is a [`GraphError::NameClash`].
pub fn apply_add(
    g: &LabeledGraph,
    t: &ConstraintSet,
    r: &Request,
    w: &Word,
    round: usize,
    req_index: usize,
) -> Result<LabeledGraph, ConstraintError> {
    let mut out = g.clone();
    add_in_place(&mut out, t, r, w, round, req_index)?;
    Ok(out)
}

/// In-place Add; returns the edges that were not already present.
pub fn add_in_place(
    g: &mut LabeledGraph,
    t: &ConstraintSet,
    r: &Request,
    w: &Word,
    round: usize,
    req_index: usize,
) -> Result<Vec<Edge>, ConstraintError> {
    g.require_vertex(r.x)?;
    g.require_vertex(r.y)?;
    let edges = witness_edges(t, r, w, round, req_index)?;
    for k in 1..w.len() {
        let v = fresh_vertex_name(round, req_index, k);
        if g.contains_vertex(v) {
            return Err(GraphError::NameClash(v.to_string()).into());
        }
    }
    Ok(edges.into_iter().filter(|e| g.add_edge(*e)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Symbol;
    use crate::graphs::chain_graph;

    fn base() -> Alphabet {
        Alphabet::from_tokens(&["alpha", "beta", "omega"]).unwrap()
    }

    fn views(texts: &[&str]) -> ConstraintSet {
        let b = base();
        let v: Vec<Regex> = texts.iter().map(|t| parse_regex(t, &b).unwrap()).collect();
        ConstraintSet::from_views(&v, &b).unwrap()
    }

    fn chain(text: &str) -> LabeledGraph {
        chain_graph(&Word::parse(text).unwrap(), VertexId::named("a"), VertexId::named("b")).unwrap()
    }

    #[test]
    fn arrows_come_in_pairs() {
        let t = views(&["omega", "alpha + beta"]);
        assert_eq!(t.len(), 4);
        assert_eq!(t.get(0).unwrap().lhs().to_text(t.alphabet()), "G:omega");
        assert_eq!(t.get(0).unwrap().rhs().to_text(t.alphabet()), "R:omega");
        assert_eq!(t.get(3).unwrap().lhs().to_text(t.alphabet()), "R:alpha + R:beta");
    }

    #[test]
    fn epsilon_views_are_rejected() {
        let b = base();
        let v = [parse_regex("alpha*", &b).unwrap()];
        assert_eq!(
            ConstraintSet::from_views(&v, &b).unwrap_err(),
            ConstraintError::EpsilonLanguage(0)
        );
    }

    #[test]
    fn empty_graph_satisfies_everything() {
        let t = views(&["omega", "alpha beta"]);
        assert!(t.is_satisfied(&LabeledGraph::new()));
        assert!(t.requests(&LabeledGraph::new()).is_empty());
    }

    #[test]
    fn requests_then_add_clears_them() {
        let t = views(&["alpha + beta", "omega"]);
        let g = chain("G:alpha G:omega");
        let rq = t.requests(&g);
        assert_eq!(rq.len(), 2);
        assert_eq!((rq[0].x.name(), rq[0].y.name(), rq[0].constraint), ("a", "x1", 0));
        assert_eq!((rq[1].x.name(), rq[1].y.name(), rq[1].constraint), ("x1", "b", 2));
        let g1 = apply_add(&g, &t, &rq[0], &Word::parse("R:beta").unwrap(), 1, 0).unwrap();
        assert_eq!(g1.vertex_count(), g.vertex_count());
        assert_eq!(g1.edge_count(), g.edge_count() + 1);
        assert!(!t.requests(&g1).contains(&rq[0]));
    }

    #[test]
    fn longer_witness_adds_fresh_vertices() {
        let t = views(&["alpha beta omega"]);
        let g = chain("G:alpha G:beta G:omega");
        let rq = t.requests(&g);
        assert_eq!(rq.len(), 1);
        let w = Word::parse("R:alpha R:beta R:omega").unwrap();
        let g1 = apply_add(&g, &t, &rq[0], &w, 1, 0).unwrap();
        assert_eq!(g1.vertex_count(), g.vertex_count() + 2);
        assert!(g1.contains_vertex(VertexId::named("n1_0_2")));
        assert!(g.is_subgraph_of(&g1));
        let again = apply_add(&g1, &t, &rq[0], &w, 1, 0);
        assert!(matches!(again, Err(ConstraintError::Graph(GraphError::NameClash(_)))));
    }

    #[test]
    fn wrong_witness_is_rejected() {
        let t = views(&["alpha + beta"]);
        let g = chain("G:alpha");
        let rq = t.requests(&g);
        let bad = Word::new(vec![Symbol::parse("G:alpha").unwrap()]);
        assert!(matches!(
            apply_add(&g, &t, &rq[0], &bad, 1, 0),
            Err(ConstraintError::WitnessRejected { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let t = views(&["alpha + beta", "omega"]);
        let back = ConstraintSet::from_json(&t.to_json()).unwrap();
        assert_eq!(back.len(), 4);
        for (a, b) in t.constraints().iter().zip(back.constraints()) {
            assert_eq!(a.lhs(), b.lhs());
            assert_eq!(a.rhs(), b.rhs());
        }
        let bare = r#"{"constraints":[{"lhs":"G:alpha G:beta","rhs":"R:alpha"}]}"#;
        let t2 = ConstraintSet::from_json(bare).unwrap();
        assert_eq!(t2.alphabet().len(), 3);
    }
}
