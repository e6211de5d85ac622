//! Sparse Laurent polynomials in one variable `t` over arbitrary-precision integers.
//!
//! Terms are kept as a vector of `(exponent, coefficient)` pairs sorted by
//! ascending exponent, with no zero coefficients. That layout is canonical, so
//! derived equality and hashing are polynomial equality and hashing.
//!
//! The text format is the one produced by [`fmt::Display`] and accepted by
//! [`str::parse`]:
//!
//! ```text
//! poly        := "0" | signed_term { ws sign ws term }
//! signed_term := [ "-" ] term
//! term        := coeff | [ coeff ] "t" [ "^" integer ]
//! ```
//!
//! Display always emits terms by ascending exponent, suppresses a unit
//! coefficient except on the constant term and writes `t` for `t^1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("modulus must be an integer >= 2, got {0}")]
    InvalidModulus(String),
    #[error("polynomial parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// An integer modulus `m >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Modulus(BigInt);

impl Modulus {
    pub fn new(m: impl Into<BigInt>) -> Result<Self, LaurentError> {
        let m = m.into();
        if m < BigInt::from(2) {
            return Err(LaurentError::InvalidModulus(m.to_string()));
        }
        Ok(Modulus(m))
    }

    /// `2^r`, for `r >= 1`.
    pub fn power_of_two(r: u32) -> Self {
        assert!(r >= 1, "2^0 is not a valid modulus");
        Modulus(BigInt::one() << r as usize)
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    /// Representative of `c` in `0..m`.
    pub fn reduce(&self, c: &BigInt) -> BigInt {
        c.mod_floor(&self.0)
    }

    pub fn divides(&self, c: &BigInt) -> bool {
        c.is_multiple_of(&self.0)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Modulus {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let m: BigInt = s
            .trim()
            .parse()
            .map_err(|_| LaurentError::InvalidModulus(s.to_string()))?;
        Modulus::new(m)
    }
}

/// A single nonzero term `coefficient * t^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coefficient: BigInt,
    pub exponent: i64,
}

impl Monomial {
    pub fn new(coefficient: impl Into<BigInt>, exponent: i64) -> Self {
        let coefficient = coefficient.into();
        assert!(
            !coefficient.is_zero(),
            "monomial coefficient must be nonzero"
        );
        Monomial {
            coefficient,
            exponent,
        }
    }

    pub fn pow(&self, n: u32) -> Monomial {
        Monomial {
            coefficient: num_traits::pow(self.coefficient.clone(), n as usize),
            exponent: self.exponent * i64::from(n),
        }
    }
}

impl Mul for &Monomial {
    type Output = Monomial;

    fn mul(self, rhs: &Monomial) -> Monomial {
        Monomial {
            coefficient: &self.coefficient * &rhs.coefficient,
            exponent: self.exponent + rhs.exponent,
        }
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        &self * &rhs
    }
}

impl From<Monomial> for LaurentPoly {
    fn from(m: Monomial) -> Self {
        LaurentPoly {
            terms: vec![(m.exponent, m.coefficient)],
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        LaurentPoly::from(self.clone()).fmt(f)
    }
}

/// An element of `Z[t, t^-1]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: Vec<(i64, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, exponent: i64) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: vec![(exponent, c)],
        }
    }

    /// Loop value `-t^-2 - t^2`.
    pub fn delta() -> Self {
        LaurentPoly {
            terms: vec![(-2, BigInt::from(-1)), (2, BigInt::from(-1))],
        }
    }

    /// Builds a polynomial from arbitrary terms; repeated exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c.into();
        }
        Self::from_sorted_map(map)
    }

    fn from_sorted_map(map: BTreeMap<i64, BigInt>) -> Self {
        LaurentPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn coefficient(&self, exponent: i64) -> BigInt {
        match self.terms.binary_search_by_key(&exponent, |(e, _)| *e) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn leading_term(&self) -> Result<Monomial, LaurentError> {
        self.terms
            .last()
            .map(|(e, c)| Monomial {
                coefficient: c.clone(),
                exponent: *e,
            })
            .ok_or(LaurentError::ZeroPolynomial)
    }

    /// Substitutes `t <- t^-1`.
    pub fn mirror(&self) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| (-e, c.clone()))
                .collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Replaces each coefficient by its representative in `0..m`, dropping
    /// terms that vanish.
    pub fn mod_reduce(&self, m: &Modulus) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter_map(|(e, c)| {
                    let r = m.reduce(c);
                    (!r.is_zero()).then_some((*e, r))
                })
                .collect(),
        }
    }

    /// True iff `self - other` has every coefficient divisible by `m`.
    pub fn is_congruent(&self, other: &LaurentPoly, m: &Modulus) -> bool {
        (self - other).terms.iter().all(|(_, c)| m.divides(c))
    }

    pub fn square(&self) -> Self {
        let n = self.terms.len();
        if n == 0 {
            return Self::zero();
        }
        let mut layout = DenseLayout::for_product(&self.terms, &self.terms);
        if let Some(dense) = layout.as_mut() {
            let mut cross = vec![BigInt::zero(); dense.size];
            let mut diag = vec![BigInt::zero(); dense.size];
            for i in 0..n {
                let (ei, ci) = &self.terms[i];
                diag[dense.index(2 * ei)] += ci * ci;
                for (ej, cj) in &self.terms[i + 1..] {
                    cross[dense.index(ei + ej)] += ci * cj;
                }
            }
            for (d, c) in diag.iter_mut().zip(cross) {
                *d += c << 1usize;
            }
            return dense.collect(diag);
        }
        self * self
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }

    fn mul_terms(a: &[(i64, BigInt)], b: &[(i64, BigInt)]) -> Self {
        if a.is_empty() || b.is_empty() {
            return Self::zero();
        }
        if let Some(dense) = DenseLayout::for_product(a, b) {
            let mut acc = vec![BigInt::zero(); dense.size];
            for (ea, ca) in a {
                for (eb, cb) in b {
                    acc[dense.index(ea + eb)] += ca * cb;
                }
            }
            return dense.collect(acc);
        }
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                *map.entry(ea + eb).or_default() += ca * cb;
            }
        }
        Self::from_sorted_map(map)
    }

    fn add_terms(a: &[(i64, BigInt)], b: &[(i64, BigInt)], negate_b: bool) -> Self {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let rhs = |c: &BigInt| if negate_b { -c } else { c.clone() };
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some((ea, ca)), Some((eb, cb))) if ea == eb => {
                    let s = if negate_b { ca - cb } else { ca + cb };
                    if !s.is_zero() {
                        out.push((*ea, s));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((ea, ca)), Some((eb, _))) if ea < eb => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                (Some(_), Some((eb, cb))) => {
                    out.push((*eb, rhs(cb)));
                    j += 1;
                }
                (Some((ea, ca)), None) => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                (None, Some((eb, cb))) => {
                    out.push((*eb, rhs(cb)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        LaurentPoly { terms: out }
    }
}

/// Dense accumulator layout for a product whose exponents are
/// `base + k * stride`. Used when the result is not much sparser than the
/// number of partial products.
struct DenseLayout {
    base: i64,
    stride: i64,
    size: usize,
}

impl DenseLayout {
    fn for_product(a: &[(i64, BigInt)], b: &[(i64, BigInt)]) -> Option<Self> {
        let stride_of = |t: &[(i64, BigInt)]| {
            let lo = t[0].0;
            t.iter().fold(0i64, |g, (e, _)| g.gcd(&(e - lo)))
        };
        let stride = match stride_of(a).gcd(&stride_of(b)) {
            0 => 1,
            g => g,
        };
        let base = a[0].0 + b[0].0;
        let top = a[a.len() - 1].0 + b[b.len() - 1].0;
        let size = usize::try_from((top - base) / stride + 1).ok()?;
        let products = a.len().saturating_mul(b.len());
        (size <= products.saturating_mul(4).max(64)).then_some(DenseLayout { base, stride, size })
    }

    fn index(&self, e: i64) -> usize {
        ((e - self.base) / self.stride) as usize
    }

    fn collect(&self, acc: Vec<BigInt>) -> LaurentPoly {
        LaurentPoly {
            terms: acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (self.base + k as i64 * self.stride, c))
                .collect(),
        }
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::add_terms(&self.terms, &rhs.terms, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::add_terms(&self.terms, &rhs.terms, true)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::mul_terms(&self.terms, &rhs.terms)
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul);

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self + rhs;
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |acc, p| acc + p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if *e == 0 || !abs.is_one() {
                write!(f, "{abs}")?;
            }
            match e {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolyParser {
            src: s.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, LaurentError> {
        Err(LaurentError::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Option<&[u8]> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn parse(mut self) -> Result<LaurentPoly, LaurentError> {
        self.skip_ws();
        let rest = std::str::from_utf8(&self.src[self.pos..]).unwrap_or("");
        if rest.trim_end() == "0" {
            return Ok(LaurentPoly::zero());
        }
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek() == Some(b'-') {
            negative = true;
            self.pos += 1;
        }
        loop {
            let (e, c) = self.term()?;
            terms.push((e, if negative { -c } else { c }));
            self.skip_ws();
            negative = match self.peek() {
                None => break,
                Some(b'+') => false,
                Some(b'-') => true,
                Some(_) => return self.error("expected '+', '-' or end of input"),
            };
            self.pos += 1;
            self.skip_ws();
        }
        Ok(LaurentPoly::from_terms(terms))
    }

    fn term(&mut self) -> Result<(i64, BigInt), LaurentError> {
        let start = self.pos;
        let coeff = match self.digits() {
            Some(d) => {
                let c = BigInt::parse_bytes(d, 10).expect("ascii digits");
                if c.is_zero() {
                    self.pos = start;
                    return self.error("coefficient must be positive");
                }
                Some(c)
            }
            None => None,
        };
        if self.peek() != Some(b't') {
            return match coeff {
                Some(c) => Ok((0, c)),
                None => self.error("expected a coefficient or 't'"),
            };
        }
        self.pos += 1;
        let mut exponent = 1i64;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp_start = self.pos;
            let neg = self.peek() == Some(b'-');
            if neg {
                self.pos += 1;
            }
            let Some(d) = self.digits() else {
                return self.error("expected an integer exponent");
            };
            let text = std::str::from_utf8(d).expect("ascii digits");
            let magnitude: i64 = match text.parse() {
                Ok(v) => v,
                Err(_) => {
                    self.pos = exp_start;
                    return self.error("exponent out of range");
                }
            };
            exponent = if neg { -magnitude } else { magnitude };
        }
        Ok((exponent, coeff.unwrap_or_else(BigInt::one)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_cancels_to_canonical_form() {
        assert_eq!(p("t^-1 + t") + p("-t^-1 + t"), p("2t"));
        assert_eq!(LaurentPoly::delta() + p("t^-2 + t^2"), LaurentPoly::zero());
        let x = p("3t^-5 - 7 + t^9");
        assert_eq!(&x + &LaurentPoly::zero(), x);
    }

    #[test]
    fn multiplication() {
        let d = LaurentPoly::delta();
        assert_eq!(&d * &d, p("t^-4 + 2 + t^4"));
        assert_eq!(d.square(), p("t^-4 + 2 + t^4"));
        assert_eq!(
            LaurentPoly::t() * LaurentPoly::monomial(1, -1),
            LaurentPoly::one()
        );
    }

    #[test]
    fn sparse_product_with_wide_gaps() {
        let a = p("t^-1000000 + 1");
        let b = p("t^1000000 + 3");
        assert_eq!(&a * &b, p("3t^-1000000 + 4 + t^1000000"));
        assert_eq!(a.square(), p("t^-2000000 + 2t^-1000000 + 1"));
    }

    #[test]
    fn powers_of_the_leading_monomial() {
        let l1 = LaurentPoly::monomial(2, 28);
        assert_eq!(l1.pow(2), LaurentPoly::monomial(4, 56));
        assert_eq!(l1.pow(4), LaurentPoly::monomial(16, 112));
        assert_eq!(p("t^3 - 2").pow(0), LaurentPoly::one());
        assert_eq!(p("1 + t").pow(3), p("1 + 3t + 3t^2 + t^3"));
    }

    #[test]
    fn mirror_and_shift() {
        assert_eq!(LaurentPoly::t().mirror(), p("t^-1"));
        assert_eq!(LaurentPoly::delta().mirror(), LaurentPoly::delta());
        assert_eq!(p("t^-2 + 5t^3").shift(-6), p("t^-8 + 5t^-3"));
    }

    #[test]
    fn leading_term() {
        assert_eq!(p("5").leading_term().unwrap(), Monomial::new(5, 0));
        assert_eq!(
            p("t^-3 - 4t^8").leading_term().unwrap(),
            Monomial::new(-4, 8)
        );
        assert_eq!(
            LaurentPoly::zero().leading_term(),
            Err(LaurentError::ZeroPolynomial)
        );
    }

    #[test]
    fn modular_reduction() {
        let m4 = Modulus::new(4).unwrap();
        assert_eq!(p("-3t^4").mod_reduce(&m4), p("t^4"));
        assert_eq!(p("4t^2 - 8 + 5t").mod_reduce(&m4), p("t"));
        let m2 = Modulus::new(2).unwrap();
        assert!(p("3 + 2t").is_congruent(&LaurentPoly::one(), &m2));
        assert!(!p("3 + t").is_congruent(&LaurentPoly::one(), &m2));
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(-5).is_err());
        assert_eq!(Modulus::power_of_two(5).value(), &BigInt::from(32));
    }

    #[test]
    fn canonical_text() {
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(p("t^-7 - t^-3 + t").to_string(), "t^-7 - t^-3 + t");
        assert_eq!(p("1 - t^4").to_string(), "1 - t^4");
        assert_eq!(p("-t^-4+1").to_string(), "-t^-4 + 1");
        assert_eq!(p("-1").to_string(), "-1");
        assert_eq!(p("t^1 + 2t^0 + t^-1").to_string(), "t^-1 + 2 + t");
        assert_eq!(p("  2t^3   -  t ").to_string(), "-t + 2t^3");
        assert_eq!(
            p("123456789012345678901234567890t^2")
                .coefficient(2)
                .to_string(),
            "123456789012345678901234567890"
        );
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let cases = [
            ("", 0),
            ("t^", 2),
            ("2 + ", 4),
            ("t t", 2),
            ("0t", 0),
            ("t^x", 2),
            ("3 * t", 2),
        ];
        for (src, offset) in cases {
            match src.parse::<LaurentPoly>() {
                Err(LaurentError::Parse { offset: o, .. }) => assert_eq!(o, offset, "{src:?}"),
                other => panic!("{src:?} parsed as {other:?}"),
            }
        }
    }
}
