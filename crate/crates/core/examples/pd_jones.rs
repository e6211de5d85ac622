//! Jones polynomial of a planar-diagram code read from a file, or of the
//! trefoil when no file is given.
//!
//! ```bash
//! cargo run --example pd_jones -- knot.pd
//! ```

use kbracket::diagram::{pd_read, pd_write, DEFAULT_STATE_SUM_CAP};
use kbracket::jones::link_jones;

const TREFOIL: &str = "X[1,4,2,5]\nX[3,6,4,1]\nX[5,2,6,3]\n";

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}")),
        None => TREFOIL.to_string(),
    };
    let link = match pd_read(&text) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let j = link_jones(&link, DEFAULT_STATE_SUM_CAP).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(3);
    });
    println!("crossings  {}", link.crossing_count());
    println!("components {}", j.components);
    println!("planar     {}", link.is_planar());
    println!("writhe     {}", j.writhe);
    println!("<D>        {}", j.bracket);
    println!("V          {}", j.jones);
    print!("canonical PD:\n{}", pd_write(&link));
}
