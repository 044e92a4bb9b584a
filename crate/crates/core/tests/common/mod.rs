#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rpq_escape::graphs::Edge;
use rpq_escape::{LabeledGraph, Regex, Symbol, VertexId, Word};

pub type Rel = BTreeSet<(VertexId, VertexId)>;

pub fn sym(s: &str) -> Symbol {
    Symbol::parse(s).unwrap()
}

pub fn v(s: &str) -> VertexId {
    VertexId::named(s)
}

/// Random graph on `n` vertices `u0..` with labels drawn from `labels`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, edges: usize, labels: &[Symbol]) -> LabeledGraph {
    let name = |i: usize| VertexId::named(&format!("u{i}"));
    let mut g = LabeledGraph::new();
    for i in 0..n {
        g.add_vertex(name(i));
    }
    for _ in 0..edges {
        let l = labels[rng.gen_range(0..labels.len())];
        g.add_edge(Edge::new(name(rng.gen_range(0..n)), l, name(rng.gen_range(0..n))));
    }
    g
}

/// Random regex of depth at most `depth` over `labels`.
pub fn random_regex(rng: &mut ChaCha8Rng, depth: usize, labels: &[Symbol]) -> Regex {
    let leaf = |rng: &mut ChaCha8Rng| match rng.gen_range(0..10) {
        0 => Regex::Epsilon,
        1 => Regex::Empty,
        2 => {
            let k = rng.gen_range(1..=labels.len());
            Regex::Class(labels.iter().take(k).copied().collect())
        }
        _ => Regex::lit(labels[rng.gen_range(0..labels.len())]),
    };
    if depth <= 1 || rng.gen_bool(0.3) {
        return leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => Regex::union(random_regex(rng, depth - 1, labels), random_regex(rng, depth - 1, labels)),
        1 => Regex::concat(random_regex(rng, depth - 1, labels), random_regex(rng, depth - 1, labels)),
        2 => Regex::star(random_regex(rng, depth - 1, labels)),
        _ => Regex::plus(random_regex(rng, depth - 1, labels)),
    }
}

fn compose(r: &Rel, s: &Rel) -> Rel {
    let mut out = Rel::new();
    for &(x, y) in r {
        out.extend(s.iter().filter(|(y2, _)| *y2 == y).map(|&(_, z)| (x, z)));
    }
    out
}

fn closure(r: &Rel) -> Rel {
    let mut acc = r.clone();
    loop {
        let next: Rel = acc.union(&compose(&acc, r)).copied().collect();
        if next.len() == acc.len() {
            return acc;
        }
        acc = next;
    }
}

/// Answer of `r` on `g` by relational algebra over the syntax tree.
pub fn relational_eval(r: &Regex, g: &LabeledGraph) -> Rel {
    let identity = || g.vertices().iter().map(|&x| (x, x)).collect::<Rel>();
    let edges = |ok: &dyn Fn(Symbol) -> bool| {
        g.edges()
            .iter()
            .filter(|e| ok(e.label))
            .map(|e| (e.src, e.dst))
            .collect::<Rel>()
    };
    match r {
        Regex::Empty => Rel::new(),
        Regex::Epsilon => identity(),
        Regex::Lit(a) => edges(&|l| l == *a),
        Regex::Class(set) => edges(&|l| set.contains(&l)),
        Regex::Union(a, b) => relational_eval(a, g).union(&relational_eval(b, g)).copied().collect(),
        Regex::Concat(a, b) => compose(&relational_eval(a, g), &relational_eval(b, g)),
        Regex::Star(a) => closure(&relational_eval(a, g)).union(&identity()).copied().collect(),
        Regex::Plus(a) => closure(&relational_eval(a, g)),
    }
}

/// End positions reachable by matching `r` on `w` from position `i`.
fn ends(r: &Regex, w: &[Symbol], i: usize) -> BTreeSet<usize> {
    match r {
        Regex::Empty => BTreeSet::new(),
        Regex::Epsilon => [i].into(),
        Regex::Lit(a) => (i < w.len() && w[i] == *a).then_some(i + 1).into_iter().collect(),
        Regex::Class(set) => (i < w.len() && set.contains(&w[i])).then_some(i + 1).into_iter().collect(),
        Regex::Union(a, b) => ends(a, w, i).union(&ends(b, w, i)).copied().collect(),
        Regex::Concat(a, b) => ends(a, w, i).into_iter().flat_map(|j| ends(b, w, j)).collect(),
        Regex::Star(a) | Regex::Plus(a) => {
            let mut seen: BTreeSet<usize> = BTreeSet::new();
            if matches!(r, Regex::Star(_)) {
                seen.insert(i);
            }
            let mut starts: BTreeSet<usize> = [i].into();
            let mut frontier = vec![i];
            while let Some(j) = frontier.pop() {
                for k in ends(a, w, j) {
                    seen.insert(k);
                    if starts.insert(k) {
                        frontier.push(k);
                    }
                }
            }
            seen
        }
    }
}

/// Whether `r` matches the whole of `w`, by backtracking over the syntax tree.
pub fn matches(r: &Regex, w: &Word) -> bool {
    ends(r, w.letters(), 0).contains(&w.len())
}

/// Whether every lhs pair is also an rhs pair, for each constraint of `t`.
pub fn satisfied_by_relations(t: &rpq_escape::constraints::ConstraintSet, g: &LabeledGraph) -> bool {
    t.constraints()
        .iter()
        .all(|rc| relational_eval(rc.lhs(), g).is_subset(&relational_eval(rc.rhs(), g)))
}

pub fn nullable(r: &Regex) -> bool {
    match r {
        Regex::Empty | Regex::Lit(_) | Regex::Class(_) => false,
        Regex::Epsilon | Regex::Star(_) => true,
        Regex::Union(a, b) => nullable(a) || nullable(b),
        Regex::Concat(a, b) => nullable(a) && nullable(b),
        Regex::Plus(a) => nullable(a),
    }
}

fn flatten_union(r: Regex, out: &mut Vec<Regex>) {
    match r {
        Regex::Union(a, b) => {
            flatten_union(*a, out);
            flatten_union(*b, out);
        }
        Regex::Empty => {}
        other => out.push(other),
    }
}

/// Union normalized up to associativity, commutativity and idempotence.
fn mk_union(parts: Vec<Regex>) -> Regex {
    let mut alts = Vec::new();
    for p in parts {
        flatten_union(p, &mut alts);
    }
    let mut keyed: Vec<(String, Regex)> = alts.into_iter().map(|r| (format!("{r:?}"), r)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed
        .into_iter()
        .map(|(_, r)| r)
        .reduce(Regex::union)
        .unwrap_or(Regex::Empty)
}

/// Right-associated concatenation with the unit and zero folded away.
fn mk_concat(a: Regex, b: Regex) -> Regex {
    match (a, b) {
        (Regex::Empty, _) | (_, Regex::Empty) => Regex::Empty,
        (Regex::Epsilon, x) | (x, Regex::Epsilon) => x,
        (Regex::Concat(p, q), b) => mk_concat(*p, mk_concat(*q, b)),
        (a, b) => Regex::concat(a, b),
    }
}

/// Brzozowski derivative of `r` by the letter `a`.
pub fn derivative(r: &Regex, a: Symbol) -> Regex {
    match r {
        Regex::Empty | Regex::Epsilon => Regex::Empty,
        Regex::Lit(b) => if *b == a { Regex::Epsilon } else { Regex::Empty },
        Regex::Class(set) => if set.contains(&a) { Regex::Epsilon } else { Regex::Empty },
        Regex::Union(x, y) => mk_union(vec![derivative(x, a), derivative(y, a)]),
        Regex::Concat(x, y) => {
            let head = mk_concat(derivative(x, a), (**y).clone());
            if nullable(x) {
                mk_union(vec![head, derivative(y, a)])
            } else {
                head
            }
        }
        Regex::Star(x) | Regex::Plus(x) => mk_concat(derivative(x, a), Regex::star((**x).clone())),
    }
}

/// Answer of `r` on `g` by enumerating walks of length at most `bound` from every vertex.
/// Walks are merged when they end at the same vertex with the same residual language,
/// so the second component counts distinct (vertex, residual) states visited.
pub fn walk_eval(r: &Regex, g: &LabeledGraph, bound: usize) -> (Rel, usize) {
    let mut out = Rel::new();
    let mut states = 0;
    for &x in g.vertices() {
        let start = mk_union(vec![r.clone()]);
        let mut seen: std::collections::HashSet<(VertexId, Regex)> = [(x, start.clone())].into();
        let mut layer = vec![(x, start)];
        for len in 0..=bound {
            for (y, d) in &layer {
                if nullable(d) {
                    out.insert((x, *y));
                }
            }
            states += layer.len();
            if len == bound {
                break;
            }
            let mut next = Vec::new();
            for (y, d) in &layer {
                for e in g.edges().iter().filter(|e| e.src == *y) {
                    let d2 = derivative(d, e.label);
                    if d2 != Regex::Empty && seen.insert((e.dst, d2.clone())) {
                        next.push((e.dst, d2));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
    }
    (out, states)
}
