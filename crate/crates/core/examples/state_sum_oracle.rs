//! Checks the pair calculus against brute-force smoothing enumeration.
//!
//! ```bash
//! cargo run --release --example state_sum_oracle
//! ```

use std::time::Instant;

use kbracket::diagram::{expand, DEFAULT_STATE_SUM_CAP};
use kbracket::{eval_expr, parse_tangle, Closure, EvalMode};

fn main() {
    for text in [
        "1",
        "1/2 + 1/3",
        "(2 * -1) + -(3 * 1/2)",
        "T821",
        "T10",
        "M1",
        "1 * M1",
        "M2",
    ] {
        let e = parse_tangle(text).unwrap();
        let algebraic = eval_expr(&e, &EvalMode::Exact);
        let diagram = expand(&e);
        let start = Instant::now();
        match diagram.state_sum_pair(DEFAULT_STATE_SUM_CAP) {
            Ok(states) => {
                let den = diagram
                    .close(Closure::Den)
                    .state_sum_bracket(DEFAULT_STATE_SUM_CAP)
                    .unwrap();
                println!(
                    "{text:<24} {:>2} crossings  pair {}  den {}  ({:.2?})",
                    diagram.crossing_count(),
                    if states == algebraic {
                        "equal"
                    } else {
                        "DIFFERENT"
                    },
                    if den == algebraic.den_closure() {
                        "equal"
                    } else {
                        "DIFFERENT"
                    },
                    start.elapsed()
                );
            }
            Err(err) => println!("{text:<24} {err}"),
        }
    }
}
