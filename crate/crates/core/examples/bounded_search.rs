//! Bounded search on a solvable and an unsolvable tiling instance.

use rpq_escape::escape::{explore, Caps, Verdict};
use rpq_escape::gadget::check_counterexample;
use rpq_escape::ogtp::{compile_reduction, OgtpInstance, BLACK};

fn main() {
    let caps = Caps::new(6, 3, 6, 4).unwrap();
    for (name, forbidden) in [("free", vec![]), ("all forbidden", OgtpInstance::all_pairs(&[BLACK]))] {
        let ogtp = OgtpInstance::new(&[BLACK], forbidden).unwrap();
        let inst = compile_reduction(&ogtp).unwrap().instance().unwrap();
        let report = explore(&inst, caps);
        println!("{name}: {}", report.verdict);
        println!(
            "  words={} lost={} positions={} max_loss_round={}",
            report.stats.initial_words, report.stats.lost, report.stats.positions, report.stats.max_loss_round
        );
        if let Verdict::Nondeterminate(cert) = &report.verdict {
            let check = check_counterexample(&cert.graph, &inst, cert.a, cert.b).unwrap();
            println!("  certificate: {check}");
        }
    }
}
