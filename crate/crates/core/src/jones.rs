//! Writhe normalization and the Jones polynomial.
//!
//! `chi(L) = (-t^3)^(-w) <D>` is an invariant of oriented links, and
//! `V(L) = chi(L)` with `t -> t^(-1/4)`. Jones polynomials therefore live in
//! quarter powers of `t`; [`QuarterLaurent`] stores exponents in units of
//! `t^(1/4)` so they cannot be confused with bracket exponents.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::bracket::{BracketPair, DegreeExceeded, EvalMode, Evaluator, Sign};
use crate::diagram::{expand, DiagramError, LinkDiagram};
use crate::expr::{Closure, ExprError, NamedTangle, TangleExpr};
use crate::laurent::{LaurentPoly, Modulus, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JonesError {
    #[error("{what} needs {needed}, over the limit of {limit}")]
    Budget {
        what: &'static str,
        needed: u64,
        limit: u64,
    },
    #[error(transparent)]
    Degree(#[from] DegreeExceeded),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("modulus {modulus} is not a multiple of 2^{r}")]
    IncompatibleModulus { modulus: Modulus, r: u32 },
}

/// Resource limits for exact evaluation and diagram expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest `|exponent|` allowed in any intermediate bracket pair.
    pub max_degree: u64,
    /// Largest diagram that will be expanded to compute a writhe.
    pub max_expanded_crossings: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_degree: 8192,
            max_expanded_crossings: 1 << 22,
        }
    }
}

impl Budget {
    pub fn check_expand(&self, crossings: u64) -> Result<(), JonesError> {
        if crossings > self.max_expanded_crossings {
            return Err(JonesError::Budget {
                what: "diagram expansion",
                needed: crossings,
                limit: self.max_expanded_crossings,
            });
        }
        Ok(())
    }
}

/// A Laurent polynomial in `t^(1/4)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct QuarterLaurent {
    quarters: LaurentPoly,
}

impl QuarterLaurent {
    /// Wraps a polynomial whose exponents count quarter powers of `t`.
    pub fn from_quarters(quarters: LaurentPoly) -> Self {
        QuarterLaurent { quarters }
    }

    pub fn one() -> Self {
        QuarterLaurent::from_quarters(LaurentPoly::one())
    }

    /// `(quarter exponent, coefficient)` pairs, ascending.
    pub fn terms(&self) -> &[(i64, BigInt)] {
        self.quarters.terms()
    }

    pub fn quarters(&self) -> &LaurentPoly {
        &self.quarters
    }

    /// Every exponent an integer power of `t`.
    pub fn is_integral(&self) -> bool {
        self.terms().iter().all(|(q, _)| q % 4 == 0)
    }

    /// The same polynomial in whole powers of `t`, if it is one.
    pub fn to_integral(&self) -> Option<LaurentPoly> {
        self.is_integral()
            .then(|| LaurentPoly::from_terms(self.terms().iter().map(|(q, c)| (q / 4, c.clone()))))
    }

    pub fn mod_reduce(&self, m: &Modulus) -> Self {
        QuarterLaurent::from_quarters(self.quarters.mod_reduce(m))
    }
}

impl fmt::Display for QuarterLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (q, c)) in terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if *q == 0 || !abs.is_one() {
                write!(f, "{abs}")?;
            }
            let g = num_integer::gcd(*q, 4);
            match (q / g, 4 / g) {
                (0, _) => {}
                (1, 1) => f.write_str("t")?,
                (n, 1) => write!(f, "t^{n}")?,
                (n, d) => write!(f, "t^({n}/{d})")?,
            }
        }
        Ok(())
    }
}

/// `(-t^3)^(-writhe) * bracket`.
pub fn normalized_bracket(bracket: &LaurentPoly, writhe: i64) -> LaurentPoly {
    let shifted = bracket.shift(-3 * writhe);
    if writhe % 2 == 0 {
        shifted
    } else {
        -shifted
    }
}

/// Substitutes `t -> t^(-1/4)`.
pub fn jones_from_chi(chi: &LaurentPoly) -> QuarterLaurent {
    QuarterLaurent::from_quarters(chi.mirror())
}

/// Whether every coefficient of `v - 1` is divisible by `m`.
pub fn congruent_to_one(v: &QuarterLaurent, m: &Modulus) -> bool {
    v.quarters.is_congruent(&LaurentPoly::one(), m)
}

/// Invariants of a closed diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkJones {
    pub bracket: LaurentPoly,
    pub writhe: i64,
    pub components: usize,
    pub chi: LaurentPoly,
    pub jones: QuarterLaurent,
}

impl LinkJones {
    fn new(bracket: LaurentPoly, writhe: i64, components: usize, mode: &EvalMode) -> Self {
        let mut chi = normalized_bracket(&bracket, writhe);
        if let EvalMode::Modular(m) = mode {
            chi = chi.mod_reduce(m);
        }
        let jones = jones_from_chi(&chi);
        LinkJones {
            bracket,
            writhe,
            components,
            chi,
            jones,
        }
    }
}

/// Jones polynomial of a closure of an algebraic tangle: the bracket comes
/// from the pair calculus, the writhe from the expanded diagram oriented
/// component by component.
pub fn closure_jones(
    e: &TangleExpr,
    closure: Closure,
    mode: &EvalMode,
    budget: &Budget,
) -> Result<LinkJones, JonesError> {
    budget.check_expand(e.crossing_count())?;
    let pair = Evaluator::new(mode.clone()).try_eval(e, budget.max_degree)?;
    let mut bracket = match closure {
        Closure::Num => pair.num_closure(),
        Closure::Den => pair.den_closure(),
    };
    if let EvalMode::Modular(m) = mode {
        bracket = bracket.mod_reduce(m);
    }
    let link = expand(e).close(closure);
    Ok(LinkJones::new(
        bracket,
        link.writhe(),
        link.component_count(),
        mode,
    ))
}

/// Jones polynomial of an explicit diagram by state-sum enumeration.
pub fn link_jones(link: &LinkDiagram, cap: usize) -> Result<LinkJones, JonesError> {
    let bracket = link.state_sum_bracket(cap)?;
    Ok(LinkJones::new(
        bracket,
        link.writhe(),
        link.component_count(),
        &EvalMode::Exact,
    ))
}

/// `1 + 20 * 2^(r-1)`, the crossing count of `den(1 * M_r)`.
pub fn kr_crossing_bound(r: u32) -> u64 {
    let copies = 1u64.checked_shl(r.saturating_sub(1)).unwrap_or(u64::MAX);
    20u64.saturating_mul(copies).saturating_add(1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KrReport {
    pub r: u32,
    /// Bracket pair of `M_r`, reduced in modular mode.
    pub pair: BracketPair,
    pub chi: LaurentPoly,
    /// Leading term of `chi`; only available from exact evaluation.
    pub chi_leading: Option<Monomial>,
    pub jones: QuarterLaurent,
    /// `V(K_r) = 1 mod 2^r`.
    pub jones_mod_trivial: bool,
    pub crossing_bound: u64,
}

/// Writhe of `den(1 * M_r)` under the west-to-east orientation of `M_r`:
/// the sum and its mirror cancel in every `M_r`, leaving the one crossing.
pub const KR_WRITHE: i64 = 1;

/// The knot `K_r = den(1 * M_r)`, its normalized bracket and Jones polynomial.
///
/// In modular mode the modulus must be a multiple of `2^r`; everything is
/// reduced modulo it and no leading term is reported.
pub fn jones_of_kr(r: u32, mode: &EvalMode, budget: &Budget) -> Result<KrReport, JonesError> {
    let m_r = NamedTangle::M(r).build()?;
    let crossing_bound = kr_crossing_bound(r);
    let two_r = Modulus::power_of_two(r);
    if let EvalMode::Modular(m) = mode {
        if !two_r.divides(m.value()) {
            return Err(JonesError::IncompatibleModulus {
                modulus: m.clone(),
                r,
            });
        }
    }
    let ev = Evaluator::new(mode.clone());
    let pair = ev.try_eval(&m_r, budget.max_degree)?;
    let d_r = ev.generator(Sign::Positive).vsum(&pair);
    let mut chi = normalized_bracket(&d_r.den_closure(), KR_WRITHE);
    if let EvalMode::Modular(m) = mode {
        chi = chi.mod_reduce(m);
    }
    let jones = jones_from_chi(&chi);
    let chi_leading = match mode {
        EvalMode::Exact => chi.leading_term().ok(),
        EvalMode::Modular(_) => None,
    };
    Ok(KrReport {
        r,
        pair,
        jones_mod_trivial: congruent_to_one(&jones, &two_r),
        chi,
        chi_leading,
        jones,
        crossing_bound,
    })
}
