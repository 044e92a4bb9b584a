//! Solves small tiling instances by brute force and prints the shaded grid.

use rpq_escape::automata::Direction;
use rpq_escape::gadget::{build_grid, decorate};
use rpq_escape::ogtp::{solve_bruteforce, OgtpInstance, BLACK};

fn main() {
    // Horizontal black may not be followed by horizontal black, so rows alternate.
    let tag = |d: Direction, s: &str| (d, s.to_string());
    let inst = OgtpInstance::new(
        &[BLACK, "white"],
        vec![(tag(Direction::H, BLACK), tag(Direction::H, BLACK))],
    )
    .unwrap();
    match solve_bruteforce(&inst, 2).unwrap() {
        Some(t) => {
            print!("{t}");
            let g = decorate(&build_grid(t.n), &t).unwrap();
            println!("decorated grid: {} vertices, {} edges", g.graph.vertex_count(), g.graph.edge_count());
        }
        None => println!("NONE"),
    }
    let blocked = OgtpInstance::new(&[BLACK], OgtpInstance::all_pairs(&[BLACK])).unwrap();
    println!("fully forbidden, n <= 3: {:?}", solve_bruteforce(&blocked, 3).unwrap());
}
