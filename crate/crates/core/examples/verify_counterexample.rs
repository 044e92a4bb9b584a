//! Checks the counterexample conditions on a decorated grid, then breaks it.

use rpq_escape::gadget::{build_grid, check_counterexample, decorate};
use rpq_escape::graphs::Edge;
use rpq_escape::ogtp::{compile_reduction, GridTiling, OgtpInstance, BLACK};
use rpq_escape::{LabeledGraph, Symbol};

fn main() {
    let inst = compile_reduction(&OgtpInstance::new(&[BLACK], vec![]).unwrap())
        .unwrap()
        .instance()
        .unwrap();
    let m = decorate(&build_grid(2), &GridTiling::uniform(2, BLACK)).unwrap();
    println!("decorated grid: {}", check_counterexample(&m.graph, &inst, m.a, m.b).unwrap());

    let green_omega = Symbol::parse("G:omega").unwrap();
    let pruned: Vec<Edge> = m.graph.edges().iter().copied().filter(|e| e.label != green_omega).collect();
    let mut broken = LabeledGraph::from_edges(pruned);
    for v in m.graph.vertices() {
        broken.add_vertex(*v);
    }
    println!("without green omega: {}", check_counterexample(&broken, &inst, m.a, m.b).unwrap());
}
