//! Plays the all-black m = 2 instance while following the decorated grid, and shows
//! that the fixpoint is the grid itself.

use rpq_escape::escape::{run_play, GuidedStrategy, Position, Strategy};
use rpq_escape::gadget::{build_grid, decorate, iso_shadeless};
use rpq_escape::ogtp::{compile_reduction, GridTiling, OgtpInstance, BLACK};
use rpq_escape::Word;

fn main() {
    let m = 2;
    let inst = compile_reduction(&OgtpInstance::new(&[BLACK], vec![]).unwrap())
        .unwrap()
        .instance()
        .unwrap();
    let grid = build_grid(m);
    let target = decorate(&grid, &GridTiling::uniform(m, BLACK)).unwrap();

    let word = Word::parse("alpha A-H-C-black B-V-C-black A-H-C-black B-V-C-black omega").unwrap();
    let start = Position::initial(&word).unwrap();
    let mut guide = GuidedStrategy::from_position(target.graph.clone(), &start).unwrap();
    let out = run_play(&inst, &mut guide as &mut dyn Strategy, &word, 10).unwrap();

    println!("{}", out.result);
    for r in &out.trace.rounds {
        println!("round {}: {} requests, {} new edges", r.round, r.requests.len(), r.added_edges.len());
    }
    println!("homomorphism holds: {}", guide.verify(&out.position));
    let g = &out.position.graph;
    println!(
        "fixpoint: {} vertices, {} edges, isomorphic to G_{m} up to shades: {}",
        g.vertex_count(),
        g.edge_count(),
        iso_shadeless(g, &grid.graph)
    );
}
