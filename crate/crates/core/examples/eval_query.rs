//! Evaluates a few regular path queries on a small cyclic graph.

use std::sync::Arc;

use rpq_escape::graphs::Edge;
use rpq_escape::rpq::{eval, find_path};
use rpq_escape::{parse_regex, Alphabet, LabeledGraph, Nfa, Symbol, VertexId};

fn main() {
    let v = VertexId::named;
    let s = |t: &str| Symbol::parse(t).unwrap();
    let g = LabeledGraph::from_edges([
        Edge::new(v("a"), s("alpha"), v("p")),
        Edge::new(v("p"), s("beta"), v("q")),
        Edge::new(v("q"), s("beta"), v("p")),
        Edge::new(v("q"), s("omega"), v("b")),
    ]);
    let alphabet = Arc::new(Alphabet::from_tokens(&["alpha", "beta", "omega"]).unwrap());

    for text in ["alpha beta* omega", "beta^+", "alpha (beta beta)* omega", "eps"] {
        let nfa = Nfa::compile(&parse_regex(text, &alphabet).unwrap(), alphabet.clone()).unwrap();
        let pairs: Vec<String> = eval(&nfa, &g).iter().map(|(x, y)| format!("({x},{y})")).collect();
        println!("{text:<26} {}", pairs.join(" "));
    }

    let q = Nfa::compile(&parse_regex("alpha beta* omega", &alphabet).unwrap(), alphabet).unwrap();
    let w = find_path(&q, &g, v("a"), v("b")).unwrap().unwrap();
    println!("shortest witness a->b: {w}");
}
