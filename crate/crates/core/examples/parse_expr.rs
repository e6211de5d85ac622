//! The tangle expression language: precedence, mirrors, named tangles and
//! error positions.
//!
//! ```bash
//! cargo run --example parse_expr -- "1 + 2 * 3"
//! ```

use kbracket::diagram::connectivity;
use kbracket::parse_tangle;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() {
        [
            "1 + 2 * 3",
            "-(1 + 1/2)",
            "-3 * -1/2",
            "T20",
            "M6",
            "inf * 0",
            "1 + * 2",
            "M0",
        ]
        .map(String::from)
        .to_vec()
    } else {
        args
    };
    for text in &inputs {
        match parse_tangle(text) {
            Ok(e) => {
                let c = connectivity(&e);
                let shown = e.to_string();
                let shown = if shown.len() > 48 {
                    format!("{}...", &shown[..45])
                } else {
                    shown
                };
                println!(
                    "{text:<14} => {shown:<48} {:>7} crossings, {:?} + {} loops",
                    e.crossing_count(),
                    c.pairing,
                    c.loops
                );
            }
            Err(err) => println!("{text:<14} => error: {err}"),
        }
    }
}
