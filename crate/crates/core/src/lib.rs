//! Exact Kauffman bracket-pair calculus on algebraic tangles.
//!
//! Tangle expressions ([`expr`]) evaluate to bracket pairs ([`bracket`]) over
//! `Z[t, t^-1]` ([`laurent`]). The same expressions expand into explicit
//! diagrams ([`diagram`]) whose state sums check the algebra independently,
//! and [`jones`] turns brackets into Jones polynomials.

pub mod bracket;
pub mod cli;
pub mod diagram;
pub mod expr;
pub mod jones;
pub mod laurent;

pub use bracket::{eval_expr, BracketPair, EvalMode, Evaluator, Sign};
pub use diagram::{expand, pd_read, pd_write, Connectivity, LinkDiagram, Pairing, TangleDiagram};
pub use expr::{build_named, parse_tangle, Closure, NamedTangle, TangleExpr};
pub use jones::{jones_of_kr, KrReport, QuarterLaurent};
pub use laurent::{LaurentPoly, Modulus, Monomial};
