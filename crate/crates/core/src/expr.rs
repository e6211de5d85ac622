//! Algebraic tangle expressions.
//!
//! An expression is built from the crossings `1` and `-1` with the horizontal
//! sum `+`, the vertical sum `*` and the mirror `-T`, plus the crossingless
//! tangles `0` and `inf`. Subtrees are reference counted so that doubling
//! families such as `M_r = M_{r-1} + M_{r-1}` stay linear in size; [`TangleExpr::fold`]
//! visits every shared subtree once.
//!
//! Text grammar (`*` binds tighter than `+`, both left-associative):
//!
//! ```text
//! expr   := term { "+" term }
//! term   := factor { "*" factor }
//! factor := int | "1" "/" posint | "-" factor | "(" expr ")" | name | "0" | "inf"
//! int    := [ "-" ] posint
//! name   := "T821" | "T10" | "T20" | "M" posint
//! ```
//!
//! A `-` directly in front of an integer literal negates the twist count
//! (`-3` is three negative crossings, `-1/2` the negative vertical 2-twist);
//! in front of anything else it is the mirror.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("tangle family index must be >= 1, got {0}")]
    InvalidIndex(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: expected {}; found {found}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TangleExpr {
    /// The crossingless tangle joining NW-NE and SW-SE.
    Zero,
    /// The crossingless tangle joining NW-SW and NE-SE.
    Infinity,
    /// `k = 1 + ... + 1` (or `(-1) + ... + (-1)` for negative `k`), `k != 0`.
    Twist(i64),
    /// `1/k = 1 * ... * 1` (or with `-1` crossings for negative `k`), `k != 0`.
    VTwist(i64),
    Sum(Arc<TangleExpr>, Arc<TangleExpr>),
    Star(Arc<TangleExpr>, Arc<TangleExpr>),
    Mirror(Arc<TangleExpr>),
}

/// One level of a [`TangleExpr`] with its children already folded.
#[derive(Debug, Clone)]
pub enum Node<T> {
    Zero,
    Infinity,
    Twist(i64),
    VTwist(i64),
    Sum(T, T),
    Star(T, T),
    Mirror(T),
}

impl TangleExpr {
    pub fn twist(k: i64) -> Self {
        assert!(k != 0, "twist count must be nonzero");
        TangleExpr::Twist(k)
    }

    pub fn vtwist(k: i64) -> Self {
        assert!(k != 0, "vertical twist count must be nonzero");
        TangleExpr::VTwist(k)
    }

    pub fn sum(a: impl Into<Arc<TangleExpr>>, b: impl Into<Arc<TangleExpr>>) -> Self {
        TangleExpr::Sum(a.into(), b.into())
    }

    pub fn star(a: impl Into<Arc<TangleExpr>>, b: impl Into<Arc<TangleExpr>>) -> Self {
        TangleExpr::Star(a.into(), b.into())
    }

    pub fn mirror(a: impl Into<Arc<TangleExpr>>) -> Self {
        TangleExpr::Mirror(a.into())
    }

    /// Bottom-up fold. A subtree shared through the same `Arc` is folded once
    /// and its value cloned at every other occurrence.
    pub fn fold<T: Clone>(&self, mut f: impl FnMut(Node<T>) -> T) -> T {
        let mut memo = HashMap::new();
        self.fold_rec(&mut f, &mut memo)
    }

    fn fold_rec<T: Clone>(
        &self,
        f: &mut impl FnMut(Node<T>) -> T,
        memo: &mut HashMap<*const TangleExpr, T>,
    ) -> T {
        let node = match self {
            TangleExpr::Zero => Node::Zero,
            TangleExpr::Infinity => Node::Infinity,
            TangleExpr::Twist(k) => Node::Twist(*k),
            TangleExpr::VTwist(k) => Node::VTwist(*k),
            TangleExpr::Sum(a, b) => {
                let a = Self::fold_child(a, f, memo);
                Node::Sum(a, Self::fold_child(b, f, memo))
            }
            TangleExpr::Star(a, b) => {
                let a = Self::fold_child(a, f, memo);
                Node::Star(a, Self::fold_child(b, f, memo))
            }
            TangleExpr::Mirror(a) => Node::Mirror(Self::fold_child(a, f, memo)),
        };
        f(node)
    }

    fn fold_child<T: Clone>(
        child: &Arc<TangleExpr>,
        f: &mut impl FnMut(Node<T>) -> T,
        memo: &mut HashMap<*const TangleExpr, T>,
    ) -> T {
        let key = Arc::as_ptr(child);
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let v = child.fold_rec(f, memo);
        memo.insert(key, v.clone());
        v
    }

    /// Number of crossings of the expanded diagram (saturating).
    pub fn crossing_count(&self) -> u64 {
        self.fold(|node: Node<u64>| match node {
            Node::Zero | Node::Infinity => 0,
            Node::Twist(k) | Node::VTwist(k) => k.unsigned_abs(),
            Node::Sum(a, b) | Node::Star(a, b) => a.saturating_add(b),
            Node::Mirror(a) => a,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            TangleExpr::Sum(..) => 0,
            TangleExpr::Star(..) => 1,
            _ => 2,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &TangleExpr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for TangleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TangleExpr::Zero => f.write_str("0"),
            TangleExpr::Infinity => f.write_str("inf"),
            TangleExpr::Twist(k) => write!(f, "{k}"),
            TangleExpr::VTwist(k) if *k < 0 => write!(f, "-1/{}", k.unsigned_abs()),
            TangleExpr::VTwist(k) => write!(f, "1/{k}"),
            TangleExpr::Sum(a, b) => {
                write_operand(f, a, 0)?;
                f.write_str(" + ")?;
                write_operand(f, b, 1)
            }
            TangleExpr::Star(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" * ")?;
                write_operand(f, b, 2)
            }
            TangleExpr::Mirror(a) => write!(f, "-({a})"),
        }
    }
}

impl FromStr for TangleExpr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tangle(s)
    }
}

/// Named members of the tangle family built on `T_{8,21}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedTangle {
    /// `(((1/2)+1)*2)+(-3)`
    T821,
    /// `T821 * 2`
    T10,
    /// `T10 + (-T10)`
    T20,
    /// `M_1 = T20`, `M_r = M_{r-1} + M_{r-1}`
    M(u32),
    /// The tangle `1 * M_r`, whose denominator closure is the knot `K_r`.
    D(u32),
}

/// Which pair of endpoints a closure joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    /// Joins NW-NE and SW-SE.
    Num,
    /// Joins NW-SW and NE-SE.
    Den,
}

impl FromStr for Closure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "num" => Ok(Closure::Num),
            "den" => Ok(Closure::Den),
            _ => Err(format!("unknown closure {s:?} (expected num or den)")),
        }
    }
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Closure::Num => "num",
            Closure::Den => "den",
        })
    }
}

impl NamedTangle {
    pub fn build(self) -> Result<TangleExpr, ExprError> {
        Ok(match self {
            NamedTangle::T821 => TangleExpr::sum(
                TangleExpr::star(
                    TangleExpr::sum(TangleExpr::VTwist(2), TangleExpr::Twist(1)),
                    TangleExpr::Twist(2),
                ),
                TangleExpr::Twist(-3),
            ),
            NamedTangle::T10 => TangleExpr::star(NamedTangle::T821.build()?, TangleExpr::Twist(2)),
            NamedTangle::T20 => {
                let t10 = Arc::new(NamedTangle::T10.build()?);
                TangleExpr::Sum(t10.clone(), Arc::new(TangleExpr::Mirror(t10)))
            }
            NamedTangle::M(0) | NamedTangle::D(0) => return Err(ExprError::InvalidIndex(0)),
            NamedTangle::M(r) => {
                let mut m = Arc::new(NamedTangle::T20.build()?);
                for _ in 1..r {
                    m = Arc::new(TangleExpr::Sum(m.clone(), m));
                }
                Arc::unwrap_or_clone(m)
            }
            NamedTangle::D(r) => TangleExpr::star(TangleExpr::Twist(1), NamedTangle::M(r).build()?),
        })
    }

    /// The closure under which the named object is a knot diagram, if any.
    pub fn closure(self) -> Option<Closure> {
        match self {
            NamedTangle::D(_) => Some(Closure::Den),
            _ => None,
        }
    }
}

pub fn build_named(name: NamedTangle) -> Result<TangleExpr, ExprError> {
    name.build()
}

pub fn parse_tangle(text: &str) -> Result<TangleExpr, ExprError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(p.unexpected(&["'+'", "'*'", "end of input"]).into()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Name(String),
    Plus,
    Star,
    Minus,
    Slash,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(k) => write!(f, "integer {k}"),
            Tok::Name(n) => write!(f, "'{n}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

const FACTOR_START: &[&str] = &["integer", "'-'", "'('", "tangle name", "'inf'"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let b = bytes[i];
            let start = i;
            let tok = match b {
                b if b.is_ascii_whitespace() => {
                    i += 1;
                    continue;
                }
                b'+' => Tok::Plus,
                b'*' => Tok::Star,
                b'-' => Tok::Minus,
                b'/' => Tok::Slash,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'0'..=b'9' => {
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let value = text[start..i].parse().map_err(|_| ParseError {
                        offset: start,
                        expected: vec!["integer that fits in 64 bits".into()],
                        found: text[start..i].to_string(),
                    })?;
                    toks.push((start, Tok::Int(value)));
                    continue;
                }
                b if b.is_ascii_alphabetic() => {
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    toks.push((start, Tok::Name(text[start..i].to_string())));
                    continue;
                }
                _ => {
                    let ch = text[start..].chars().next().unwrap_or('?');
                    return Err(ParseError {
                        offset: start,
                        expected: FACTOR_START.iter().map(|s| s.to_string()).collect(),
                        found: format!("{ch:?}"),
                    });
                }
            };
            toks.push((start, tok));
            i += 1;
        }
        toks.push((text.len(), Tok::End));
        Ok(Parser { toks, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn offset(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn expr(&mut self) -> Result<TangleExpr, ExprError> {
        let mut lhs = self.term()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            lhs = TangleExpr::sum(lhs, self.term()?);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<TangleExpr, ExprError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = TangleExpr::star(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    /// Parses an integer literal (already known to be next) with an optional
    /// `/k` suffix; `negative` applies the sign of a preceding `-`.
    fn literal(&mut self, negative: bool) -> Result<TangleExpr, ExprError> {
        let n_offset = self.offset();
        let Tok::Int(n) = self.bump() else {
            unreachable!("literal() called on a non-integer token")
        };
        let sign = if negative { -1 } else { 1 };
        if *self.peek() != Tok::Slash {
            return Ok(if n == 0 {
                TangleExpr::Zero
            } else {
                TangleExpr::Twist(sign * n)
            });
        }
        if n != 1 {
            return Err(ParseError {
                offset: n_offset,
                expected: vec!["1 before '/'".into()],
                found: format!("integer {n}"),
            }
            .into());
        }
        self.bump();
        match self.peek() {
            Tok::Int(k) if *k >= 1 => {
                let k = *k;
                self.bump();
                Ok(TangleExpr::VTwist(sign * k))
            }
            _ => Err(self.unexpected(&["positive integer"]).into()),
        }
    }

    fn factor(&mut self) -> Result<TangleExpr, ExprError> {
        match self.peek().clone() {
            Tok::Int(_) => self.literal(false),
            Tok::Minus => {
                self.bump();
                match self.peek() {
                    Tok::Int(n) if *n >= 1 => self.literal(true),
                    _ => Ok(TangleExpr::mirror(self.factor()?)),
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected(&["'+'", "'*'", "')'"]).into());
                }
                self.bump();
                Ok(e)
            }
            Tok::Name(name) => {
                let named = match name.as_str() {
                    "inf" => {
                        self.bump();
                        return Ok(TangleExpr::Infinity);
                    }
                    "T821" => NamedTangle::T821,
                    "T10" => NamedTangle::T10,
                    "T20" => NamedTangle::T20,
                    m if m.len() > 1
                        && m.starts_with('M')
                        && m[1..].bytes().all(|b| b.is_ascii_digit()) =>
                    {
                        match m[1..].parse::<u32>() {
                            Ok(r) if r >= 1 => NamedTangle::M(r),
                            _ => {
                                return Err(self
                                    .unexpected(&["M followed by an index >= 1"])
                                    .into())
                            }
                        }
                    }
                    _ => return Err(self.unexpected(FACTOR_START).into()),
                };
                self.bump();
                named.build()
            }
            _ => Err(self.unexpected(FACTOR_START).into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> TangleExpr {
        parse_tangle(s).unwrap()
    }

    fn err(s: &str) -> ParseError {
        match parse_tangle(s) {
            Err(ExprError::Parse(e)) => e,
            other => panic!("{s:?} gave {other:?}"),
        }
    }

    #[test]
    fn t821_literal_matches_named() {
        let e = parse("(((1/2)+1)*2)+(-3)");
        let expected = TangleExpr::sum(
            TangleExpr::star(
                TangleExpr::sum(TangleExpr::VTwist(2), TangleExpr::Twist(1)),
                TangleExpr::Twist(2),
            ),
            TangleExpr::Twist(-3),
        );
        assert_eq!(e, expected);
        assert_eq!(parse("T821"), expected);
        assert_eq!(e.crossing_count(), 8);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("1 + 2 * 3"),
            TangleExpr::sum(
                TangleExpr::Twist(1),
                TangleExpr::star(TangleExpr::Twist(2), TangleExpr::Twist(3))
            )
        );
        assert_eq!(
            parse("1 + 2 + 3"),
            TangleExpr::sum(
                TangleExpr::sum(TangleExpr::Twist(1), TangleExpr::Twist(2)),
                TangleExpr::Twist(3)
            )
        );
        assert_eq!(
            parse("1 * 2 * 3"),
            TangleExpr::star(
                TangleExpr::star(TangleExpr::Twist(1), TangleExpr::Twist(2)),
                TangleExpr::Twist(3)
            )
        );
    }

    #[test]
    fn minus_forms() {
        assert_eq!(parse("-3"), TangleExpr::Twist(-3));
        assert_eq!(parse("-1/4"), TangleExpr::VTwist(-4));
        assert_eq!(parse("-(3)"), TangleExpr::mirror(TangleExpr::Twist(3)));
        assert_eq!(parse("- -3"), TangleExpr::mirror(TangleExpr::Twist(-3)));
        assert_eq!(parse("-0"), TangleExpr::mirror(TangleExpr::Zero));
        assert_eq!(
            parse("2*-3"),
            TangleExpr::star(TangleExpr::Twist(2), TangleExpr::Twist(-3))
        );
        assert_eq!(parse("0"), TangleExpr::Zero);
        assert_eq!(parse(" inf "), TangleExpr::Infinity);
    }

    #[test]
    fn named_family() {
        let t10 = parse("T10");
        assert_eq!(t10, TangleExpr::star(parse("T821"), TangleExpr::Twist(2)));
        match parse("T20") {
            TangleExpr::Sum(a, b) => {
                assert_eq!(*a, t10);
                assert_eq!(*b, TangleExpr::mirror(t10.clone()));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(parse("M1"), parse("T20"));
        match parse("M3") {
            TangleExpr::Sum(a, b) => {
                assert!(Arc::ptr_eq(&a, &b));
                assert_eq!(*a, parse("M2"));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(NamedTangle::M(0).build(), Err(ExprError::InvalidIndex(0)));
        assert_eq!(
            NamedTangle::D(2).build().unwrap(),
            TangleExpr::star(TangleExpr::Twist(1), parse("M2"))
        );
    }

    #[test]
    fn crossing_counts() {
        assert_eq!(parse("M1").crossing_count(), 20);
        assert_eq!(
            TangleExpr::star(TangleExpr::Twist(1), parse("M2")).crossing_count(),
            41
        );
        assert_eq!(TangleExpr::Zero.crossing_count(), 0);
        assert_eq!(parse("-(1/3 + -2)").crossing_count(), 5);
        // Shared subtrees keep this cheap even though the expansion is huge.
        assert_eq!(parse("M40").crossing_count(), 20 << 39);
    }

    #[test]
    fn syntax_errors() {
        let e = err("1/0");
        assert_eq!(e.offset, 2);
        let e = err("2/3");
        assert_eq!(e.offset, 0);
        let e = err("1 + ");
        assert_eq!(e.offset, 4);
        assert!(e.expected.contains(&"integer".to_string()));
        let e = err("(1 + 2");
        assert_eq!(e.offset, 6);
        assert!(e.expected.contains(&"')'".to_string()));
        assert_eq!(err("1 2").offset, 2);
        assert_eq!(err("T11").offset, 0);
        assert_eq!(err("M0").offset, 0);
        assert_eq!(err("1 # 2").offset, 2);
        assert_eq!(err("").offset, 0);
        assert_eq!(err("1/-2").offset, 2);
    }

    #[test]
    fn display_reparses() {
        for s in [
            "(((1/2)+1)*2)+(-3)",
            "-(1 + 2) * inf",
            "1 + (2 + 3)",
            "1 * (2 * 3)",
            "-1/2 * -3",
            "-(-(1))",
            "0 + 0",
        ] {
            let e = parse(s);
            assert_eq!(parse(&e.to_string()), e, "{s} -> {e}");
        }
        assert_eq!(parse("1 + (2 * 3)").to_string(), "1 + 2 * 3");
        assert_eq!(parse("(1 + 2) * 3").to_string(), "(1 + 2) * 3");
    }
}
