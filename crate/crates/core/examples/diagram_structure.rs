//! Expanding expressions into crossing-level diagrams: components, writhe
//! and the one-component property of den(1 * M_r).
//!
//! ```bash
//! cargo run --example diagram_structure
//! ```

use kbracket::diagram::{expand, Convention};
use kbracket::{Closure, NamedTangle, TangleExpr};

fn main() {
    for r in 1..=4 {
        let m = NamedTangle::M(r).build().unwrap();
        let d = expand(&m);
        let k = expand(&TangleExpr::star(TangleExpr::Twist(1), m)).close(Closure::Den);
        println!(
            "M{r}: {:>4} crossings, writhe {:>2} (west to east) | den(1 * M{r}): {} component(s), writhe {:+}",
            d.crossing_count(),
            d.writhe(Convention::LeftRight).unwrap(),
            k.component_count(),
            k.writhe()
        );
    }
    let hopf = expand(&TangleExpr::Twist(2)).close(Closure::Num);
    let signs = hopf.orient(Convention::FirstStrand).unwrap().signs;
    println!(
        "num(2): {} components, signs {signs:?}",
        hopf.component_count()
    );
}
