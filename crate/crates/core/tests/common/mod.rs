#![allow(dead_code)]

use kbracket::TangleExpr;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TREFOIL_PD: &str = "X[1,4,2,5]\nX[3,6,4,1]\nX[5,2,6,3]\n";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn leaf(rng: &mut impl Rng, budget: u64) -> TangleExpr {
    let max = budget.min(4) as i64;
    match rng.gen_range(0..10) {
        0 => TangleExpr::Zero,
        1 => TangleExpr::Infinity,
        _ if max == 0 => TangleExpr::Zero,
        k => {
            let n = rng.gen_range(1..=max) * if rng.gen_bool(0.5) { 1 } else { -1 };
            if k % 2 == 0 {
                TangleExpr::Twist(n)
            } else {
                TangleExpr::VTwist(n)
            }
        }
    }
}

/// A random expression with at most `budget` crossings.
pub fn random_expr(rng: &mut impl Rng, budget: u64) -> TangleExpr {
    if budget <= 1 || rng.gen_bool(0.25) {
        return leaf(rng, budget);
    }
    match rng.gen_range(0..5) {
        0 => TangleExpr::mirror(random_expr(rng, budget)),
        k => {
            let left = rng.gen_range(0..=budget);
            let a = random_expr(rng, left);
            let b = random_expr(rng, budget - a.crossing_count());
            if k % 2 == 0 {
                TangleExpr::sum(a, b)
            } else {
                TangleExpr::star(a, b)
            }
        }
    }
}

/// `count` random expressions with at most `budget` crossings, at least one
/// crossing each.
pub fn corpus(seed: u64, count: usize, budget: u64) -> Vec<TangleExpr> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let e = random_expr(&mut rng, budget);
        if e.crossing_count() > 0 {
            out.push(e);
        }
    }
    out
}
