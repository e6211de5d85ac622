//! Bracket pairs of 4-ended tangles.
//!
//! The Kauffman bracket of a tangle `T` reduces to `f(T)<0> + g(T)<inf>` in the
//! basis of the two crossingless tangles; the pair `[f; g]` composes under the
//! horizontal and vertical sums by
//!
//! ```text
//! [f; g] + [f'; g'] = [f f'; f g' + g f' + delta g g']
//! [f; g] * [f'; g'] = [delta f f' + f g' + g f'; g g']
//! ```
//!
//! with `delta = -t^-2 - t^2`, and closes to `<num T> = delta f + g`,
//! `<den T> = f + delta g`.

use std::fmt;

use num_bigint::BigInt;

use crate::expr::{Node, TangleExpr};
use crate::laurent::{LaurentPoly, Modulus};

/// Sign of an elementary crossing: `+1` is the tangle `1`, `-1` its mirror.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of(k: i64) -> Sign {
        if k < 0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BracketPair {
    /// Coefficient of `<0>`.
    pub f: LaurentPoly,
    /// Coefficient of `<inf>`.
    pub g: LaurentPoly,
}

impl BracketPair {
    pub fn new(f: LaurentPoly, g: LaurentPoly) -> Self {
        BracketPair { f, g }
    }

    /// `[1; 0]`, the unit of the horizontal sum.
    pub fn zero_tangle() -> Self {
        BracketPair::new(LaurentPoly::one(), LaurentPoly::zero())
    }

    /// `[0; 1]`, the unit of the vertical sum.
    pub fn infinity_tangle() -> Self {
        BracketPair::new(LaurentPoly::zero(), LaurentPoly::one())
    }

    /// `br(1) = [t; t^-1]`, `br(-1) = [t^-1; t]`.
    pub fn generator(sign: Sign) -> Self {
        let e = sign.value();
        BracketPair::new(LaurentPoly::monomial(1, e), LaurentPoly::monomial(1, -e))
    }

    pub fn hsum(&self, other: &BracketPair) -> BracketPair {
        let gg = &self.g * &other.g;
        BracketPair {
            f: &self.f * &other.f,
            g: &self.f * &other.g + &self.g * &other.f + LaurentPoly::delta() * gg,
        }
    }

    pub fn vsum(&self, other: &BracketPair) -> BracketPair {
        let ff = &self.f * &other.f;
        BracketPair {
            f: LaurentPoly::delta() * ff + &self.f * &other.g + &self.g * &other.f,
            g: &self.g * &other.g,
        }
    }

    /// `self + self`, using squarings.
    pub fn hsum_double(&self) -> BracketPair {
        let fg = &self.f * &self.g;
        BracketPair {
            f: self.f.square(),
            g: fg.scale(&BigInt::from(2)) + LaurentPoly::delta() * self.g.square(),
        }
    }

    /// `self * self`, using squarings.
    pub fn vsum_double(&self) -> BracketPair {
        let fg = &self.f * &self.g;
        BracketPair {
            f: LaurentPoly::delta() * self.f.square() + fg.scale(&BigInt::from(2)),
            g: self.g.square(),
        }
    }

    pub fn mirror(&self) -> BracketPair {
        BracketPair::new(self.f.mirror(), self.g.mirror())
    }

    /// `(f, g) -> (g, f)`: the pair of the tangle rotated a quarter turn.
    pub fn swap(&self) -> BracketPair {
        BracketPair::new(self.g.clone(), self.f.clone())
    }

    pub fn num_closure(&self) -> LaurentPoly {
        LaurentPoly::delta() * &self.f + &self.g
    }

    pub fn den_closure(&self) -> LaurentPoly {
        &self.f + LaurentPoly::delta() * &self.g
    }

    pub fn mod_reduce(&self, m: &Modulus) -> BracketPair {
        BracketPair::new(self.f.mod_reduce(m), self.g.mod_reduce(m))
    }

    /// Largest absolute exponent in either component, 0 for `[0; 0]`.
    pub fn exponent_bound(&self) -> i64 {
        [&self.f, &self.g]
            .iter()
            .flat_map(|p| [p.min_degree(), p.max_degree()])
            .flatten()
            .map(i64::abs)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for BracketPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}]", self.f, self.g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalMode {
    Exact,
    /// Reduce every intermediate coefficient modulo `m`.
    Modular(Modulus),
}

impl EvalMode {
    fn reduce(&self, p: BracketPair) -> BracketPair {
        match self {
            EvalMode::Exact => p,
            EvalMode::Modular(m) => p.mod_reduce(m),
        }
    }
}

pub type Generator = fn(Sign) -> BracketPair;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("exponent {degree} exceeds the degree budget {limit}")]
pub struct DegreeExceeded {
    pub degree: i64,
    pub limit: u64,
}

/// Structural evaluation of tangle expressions into bracket pairs.
///
/// The elementary crossing values come from `generator`, normally
/// [`BracketPair::generator`]; the hook exists so verification code can be
/// exercised against a faulty calculus.
#[derive(Debug, Clone)]
pub struct Evaluator {
    mode: EvalMode,
    generator: Generator,
}

impl Evaluator {
    pub fn new(mode: EvalMode) -> Self {
        Evaluator {
            mode,
            generator: BracketPair::generator,
        }
    }

    pub fn with_generator(mut self, generator: Generator) -> Self {
        self.generator = generator;
        self
    }

    pub fn mode(&self) -> &EvalMode {
        &self.mode
    }

    pub fn generator(&self, sign: Sign) -> BracketPair {
        self.mode.reduce((self.generator)(sign))
    }

    pub fn eval(&self, e: &TangleExpr) -> BracketPair {
        self.try_eval(e, u64::MAX).expect("unbounded evaluation")
    }

    /// Evaluates, refusing any sum whose result could have an exponent
    /// beyond `max_degree` in absolute value. The bound used is
    /// `bound(a) + bound(b) + 2`, checked before multiplying.
    pub fn try_eval(&self, e: &TangleExpr, max_degree: u64) -> Result<BracketPair, DegreeExceeded> {
        let combine = |a: &BracketPair,
                       b: &BracketPair,
                       op: fn(&BracketPair, &BracketPair) -> BracketPair| {
            let degree = a
                .exponent_bound()
                .saturating_add(b.exponent_bound())
                .saturating_add(2);
            if degree.unsigned_abs() > max_degree {
                return Err(DegreeExceeded {
                    degree,
                    limit: max_degree,
                });
            }
            Ok(self.mode.reduce(op(a, b)))
        };
        e.fold(
            |node: Node<Result<BracketPair, DegreeExceeded>>| match node {
                Node::Zero => Ok(BracketPair::zero_tangle()),
                Node::Infinity => Ok(BracketPair::infinity_tangle()),
                Node::Twist(k) | Node::VTwist(k) => {
                    let op = if matches!(node, Node::Twist(_)) {
                        BracketPair::hsum
                    } else {
                        BracketPair::vsum
                    };
                    let unit = self.generator(Sign::of(k));
                    let mut acc = unit.clone();
                    for _ in 1..k.unsigned_abs() {
                        acc = combine(&acc, &unit, op)?;
                    }
                    Ok(acc)
                }
                Node::Sum(a, b) => {
                    let (a, b) = (a?, b?);
                    if a == b {
                        combine(&a, &a, |x, _| x.hsum_double())
                    } else {
                        combine(&a, &b, BracketPair::hsum)
                    }
                }
                Node::Star(a, b) => {
                    let (a, b) = (a?, b?);
                    if a == b {
                        combine(&a, &a, |x, _| x.vsum_double())
                    } else {
                        combine(&a, &b, BracketPair::vsum)
                    }
                }
                Node::Mirror(a) => Ok(a?.mirror()),
            },
        )
    }
}

pub fn eval_expr(e: &TangleExpr, mode: &EvalMode) -> BracketPair {
    Evaluator::new(mode.clone()).eval(e)
}
