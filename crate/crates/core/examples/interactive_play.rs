//! Plays a toy instance by hand. Witnesses are read from standard input: an empty
//! line takes the first suggestion, a number picks one, anything else is a word.
//!
//! Try `printf '2\n\n' | cargo run --example interactive_play`.

use std::io;

use rpq_escape::escape::{run_play, InteractiveStrategy};
use rpq_escape::instance::Instance;
use rpq_escape::Word;

const TOY: &str = r#"{
    "alphabet": ["alpha", "beta", "omega"],
    "q0": "alpha omega + beta beta omega",
    "views": {"good": ["alpha + beta", "omega"], "ugly": ["beta beta omega"]}
}"#;

fn main() {
    let inst = Instance::from_json(TOY).unwrap();
    let stdin = io::stdin();
    let mut s = InteractiveStrategy::new(stdin.lock(), io::stdout());
    let word = Word::parse("alpha omega").unwrap();
    match run_play(&inst, &mut s, &word, 6) {
        Ok(out) => {
            println!("\n{}", out.result);
            print!("{}", out.trace.to_jsonl());
        }
        Err(e) => println!("\nstopped: {e}"),
    }
}
