//! Bracket pairs of a few tangles, built both from text and from the API.
//!
//! ```bash
//! cargo run --example bracket_pair
//! cargo run --example bracket_pair -- "((1/2) + 1) * 2"
//! ```

use kbracket::{eval_expr, parse_tangle, EvalMode, TangleExpr};

fn main() {
    let inputs: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if inputs.is_empty() {
        [
            "1",
            "-1",
            "2",
            "3",
            "1/2",
            "(((1/2)+1)*2)+(-3)",
            "T10",
            "-T10",
        ]
        .map(String::from)
        .to_vec()
    } else {
        inputs
    };
    for text in &inputs {
        match parse_tangle(text) {
            Ok(e) => println!("br({e}) = {}", eval_expr(&e, &EvalMode::Exact)),
            Err(err) => eprintln!("{text}: {err}"),
        }
    }

    // The same tangle assembled directly.
    let half = TangleExpr::vtwist(2);
    let t821 = TangleExpr::sum(
        TangleExpr::star(
            TangleExpr::sum(half, TangleExpr::twist(1)),
            TangleExpr::twist(2),
        ),
        TangleExpr::twist(-3),
    );
    let pair = eval_expr(&t821, &EvalMode::Exact);
    println!("\nT821 has {} crossings", t821.crossing_count());
    println!("<num T821> = {}", pair.num_closure());
    println!("<den T821> = {}", pair.den_closure());
}
