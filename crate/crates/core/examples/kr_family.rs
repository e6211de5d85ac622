//! The knots K_r = den(1 * M_r): exact for small r, modular beyond.
//!
//! ```bash
//! cargo run --release --example kr_family -- 12
//! ```

use std::time::Instant;

use kbracket::jones::{jones_of_kr, Budget};
use kbracket::{EvalMode, Modulus};

fn main() {
    let max_r: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let budget = Budget::default();
    println!(
        "{:>3} {:>10} {:>8} {:>12}  leading term of chi",
        "r", "crossings", "V=1", "time"
    );
    for r in 1..=max_r {
        let start = Instant::now();
        let exact = jones_of_kr(r, &EvalMode::Exact, &budget);
        let report = match exact {
            Ok(k) => k,
            Err(_) => jones_of_kr(r, &EvalMode::Modular(Modulus::power_of_two(r)), &budget)
                .expect("modular run"),
        };
        let leading = report.chi_leading.map_or_else(
            || "(modular)".to_string(),
            |m| {
                let digits = m.coefficient.to_string();
                format!("{}-digit coefficient at t^{}", digits.len(), m.exponent)
            },
        );
        println!(
            "{r:>3} {:>10} {:>8} {:>12.2?}  {leading}",
            report.crossing_bound,
            report.jones_mod_trivial,
            start.elapsed()
        );
    }
}
