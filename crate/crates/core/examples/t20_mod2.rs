//! T20 = T10 + (-T10) is invisible to the bracket modulo 2, yet its exact
//! pair has large leading terms.
//!
//! ```bash
//! cargo run --example t20_mod2
//! ```

use kbracket::{eval_expr, BracketPair, EvalMode, Modulus, NamedTangle};

fn main() {
    let two = Modulus::new(2).unwrap();
    let t10 = eval_expr(&NamedTangle::T10.build().unwrap(), &EvalMode::Exact);
    println!("br(T10)     = {t10}");
    println!("br_2(T10)   = {}", t10.mod_reduce(&two));
    println!("br_2(-T10)  = {}", t10.mirror().mod_reduce(&two));

    let t20 = NamedTangle::T20.build().unwrap();
    let modular = eval_expr(&t20, &EvalMode::Modular(two));
    println!("br_2(T20)   = {modular}");
    assert_eq!(modular, BracketPair::zero_tangle());

    let exact = eval_expr(&t20, &EvalMode::Exact);
    println!("lt f(T20)   = {}", exact.f.leading_term().unwrap());
    println!("lt g(T20)   = {}", exact.g.leading_term().unwrap());
    println!("terms in f, g: {}, {}", exact.f.len(), exact.g.len());
}
