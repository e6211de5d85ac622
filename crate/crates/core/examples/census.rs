//! Counting diagrams with trivial Jones polynomial modulo m in a small
//! inline table of PD codes.
//!
//! ```bash
//! cargo run --example census -- 2
//! ```

use kbracket::diagram::{pd_read_records, DEFAULT_STATE_SUM_CAP};
use kbracket::jones::{congruent_to_one, link_jones};
use kbracket::Modulus;

const TABLE: &str = "\
0_1 PD[Loop[1]]
3_1 PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]
4_1 PD[X[4,2,5,1], X[8,6,1,5], X[6,3,7,4], X[2,7,3,8]]
5_1 PD[X[1,6,2,7], X[3,8,4,9], X[5,10,6,1], X[7,2,8,3], X[9,4,10,5]]
";

fn main() {
    let m: Modulus = std::env::args()
        .nth(1)
        .as_deref()
        .unwrap_or("2")
        .parse()
        .expect("modulus >= 2");
    let records = pd_read_records(TABLE).expect("valid table");
    for rec in &records {
        let j = link_jones(&rec.diagram, DEFAULT_STATE_SUM_CAP).unwrap();
        println!(
            "{:<4} V = {:<40} V = 1 mod {m}: {}",
            rec.label,
            j.jones.to_string(),
            congruent_to_one(&j.jones, &m)
        );
    }
}
