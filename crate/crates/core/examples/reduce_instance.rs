//! Compiles a grid tiling instance into a determinacy instance and prints its shape.

use rpq_escape::ogtp::{compile_reduction, OgtpInstance, BLACK};

fn main() {
    let inst = OgtpInstance::new(&[BLACK, "grey"], vec![]).unwrap();
    let out = compile_reduction(&inst).unwrap();
    println!("alphabet: {} letters", out.alphabet.len());
    println!(
        "views: {} good, {} bad, {} ugly",
        out.views.good.len(),
        out.views.bad.len(),
        out.views.ugly.len()
    );
    for (i, r) in out.views.all().enumerate() {
        println!("  {:<6} {}", out.views.name(i), r.to_text(&out.alphabet));
    }
    println!("Q_start = {}", out.q_start.to_text(&out.alphabet));
}
