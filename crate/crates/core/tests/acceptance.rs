//! Acceptance gate: one line per criterion, then a single assertion.
//!
//! Every check is exact (integer coefficients, no tolerance). Time limits are
//! wall-clock ceilings per criterion and count as part of the criterion.

mod common;

use std::io::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use kbracket::cli::run;
use kbracket::diagram::{connectivity, expand, Connectivity, Convention, Pairing};
use kbracket::jones::{jones_of_kr, Budget};
use kbracket::{
    BracketPair, Closure, EvalMode, Evaluator, LaurentPoly, Modulus, Monomial, NamedTangle,
    TangleExpr,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const PROPERTY_CASES: u32 = 1000;

struct Gate {
    lines: Vec<String>,
    failed: usize,
}

impl Gate {
    fn run(
        &mut self,
        id: &str,
        title: &str,
        limit: Duration,
        check: impl FnOnce() -> Result<String, String>,
    ) {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            self.failed += 1;
        }
        let line = format!(
            "[{}] {id} {title} ({elapsed:.2?} / {limit:?}): {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        // Straight to the stderr handle so the line survives output capture.
        let _ = writeln!(std::io::stderr().lock(), "{line}");
        self.lines.push(line);
    }
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn p(s: &str) -> LaurentPoly {
    s.parse().unwrap()
}

fn exact(e: &TangleExpr) -> BracketPair {
    Evaluator::new(EvalMode::Exact).eval(e)
}

fn named(n: NamedTangle) -> TangleExpr {
    n.build().unwrap()
}

fn ell(r: u32) -> Monomial {
    Monomial::new(2, 28).pow(1 << (r - 1))
}

fn ac1() -> Result<String, String> {
    let out = run(["kbracket", "bracket", "(((1/2)+1)*2)+(-3)"]);
    let want = "f = -2t^-6 + 2t^-2 - 2t^2 + t^6\ng = -2t^-4 + 3 - 4t^4 + 3t^8 - 2t^12 + t^16\n";
    ensure(
        out.code == 0 && out.stdout == want,
        format!("got {:?}", out.stdout),
    )?;
    Ok("f and g printed exactly".into())
}

fn ac2() -> Result<String, String> {
    for (s, f, g) in [
        ("2", "t^2", "-t^-4 + 1"),
        ("3", "t^3", "t^-7 - t^-3 + t"),
        ("1/2", "1 - t^4", "t^-2"),
    ] {
        let got = exact(&kbracket::parse_tangle(s).unwrap());
        ensure(
            got == BracketPair::new(p(f), p(g)),
            format!("br({s}) = {got}"),
        )?;
    }
    Ok("br(2), br(3), br(1/2) exact".into())
}

fn ac3() -> Result<String, String> {
    let t20 = named(NamedTangle::T20);
    let two = Modulus::new(2).unwrap();
    let modular = Evaluator::new(EvalMode::Modular(two.clone())).eval(&t20);
    let full = exact(&t20);
    ensure(
        modular == BracketPair::zero_tangle(),
        format!("br_2(T20) = {modular}"),
    )?;
    ensure(
        full.mod_reduce(&two) == BracketPair::zero_tangle(),
        "exact T20 mod 2",
    )?;
    let (lf, lg) = (
        full.f.leading_term().unwrap(),
        full.g.leading_term().unwrap(),
    );
    ensure(
        lf == Monomial::new(2, 28) && lg == Monomial::new(2, 26),
        format!("lt f = {lf}, lt g = {lg}"),
    )?;
    Ok(format!("br_2(T20) = [1; 0], lt f = {lf}, lt g = {lg}"))
}

fn ac4_exact() -> Result<String, String> {
    for r in 1..=8 {
        let pair = exact(&named(NamedTangle::M(r)));
        let m = Modulus::power_of_two(r);
        ensure(
            pair.mod_reduce(&m) == BracketPair::zero_tangle(),
            format!("M{r} mod {m}"),
        )?;
        let want_f = ell(r);
        let want_g = &want_f * &Monomial::new(1, -2);
        ensure(
            pair.f.leading_term().unwrap() == want_f,
            format!("lt f(M{r})"),
        )?;
        ensure(
            pair.g.leading_term().unwrap() == want_g,
            format!("lt g(M{r})"),
        )?;
    }
    Ok("r = 1..8: br_{2^r}(M_r) = [1; 0] and both leading terms exact".into())
}

fn ac4_modular() -> Result<String, String> {
    for r in 9..=20 {
        let m = Modulus::power_of_two(r);
        let pair = Evaluator::new(EvalMode::Modular(m.clone())).eval(&named(NamedTangle::M(r)));
        ensure(
            pair == BracketPair::zero_tangle(),
            format!("br_{m}(M{r}) = {pair}"),
        )?;
    }
    Ok("r = 9..20: br_{2^r}(M_r) = [1; 0]".into())
}

fn ac5() -> Result<String, String> {
    for r in 1..=8 {
        let k = jones_of_kr(r, &EvalMode::Exact, &Budget::default()).map_err(|e| e.to_string())?;
        let identity = &k.pair.f + k.pair.g.shift(-6);
        ensure(k.chi == identity, format!("chi(K{r}) != f + t^-6 g"))?;
        ensure(k.jones_mod_trivial, format!("V(K{r}) not 1 mod 2^{r}"))?;
        ensure(k.chi_leading == Some(ell(r)), format!("lt chi(K{r})"))?;
    }
    Ok("r = 1..8: chi identity, V = 1 mod 2^r, lt chi = l_r".into())
}

fn ac6() -> Result<String, String> {
    let mut exps = Vec::new();
    for r in 1..=8 {
        let k = jones_of_kr(r, &EvalMode::Exact, &Budget::default()).map_err(|e| e.to_string())?;
        let lt = k.chi_leading.ok_or("no leading term")?;
        ensure(
            lt.exponent == 28 << (r - 1),
            format!("exponent {} at r = {r}", lt.exponent),
        )?;
        exps.push(lt.exponent);
    }
    let mut sorted = exps.clone();
    sorted.dedup();
    ensure(sorted.len() == 8, "repeated exponent")?;
    Ok(format!("exponents {exps:?}"))
}

fn ac7_random() -> Result<String, String> {
    let corpus = common::corpus(0xacce97, 200, 12);
    for e in &corpus {
        let states = expand(e).state_sum_pair(24).map_err(|x| x.to_string())?;
        ensure(states == exact(e), format!("mismatch on {e}"))?;
    }
    let t821 = named(NamedTangle::T821);
    let d = expand(&t821);
    ensure(d.crossing_count() == 8, "T821 crossings")?;
    ensure(
        d.state_sum_pair(24).unwrap() == exact(&t821),
        "T821 mismatch",
    )?;
    Ok(format!(
        "{} random expressions and T821 (256 states)",
        corpus.len()
    ))
}

fn ac7_m1() -> Result<String, String> {
    let m1 = named(NamedTangle::M(1));
    let d = expand(&m1);
    ensure(d.crossing_count() == 20, "M1 crossings")?;
    let states = d.state_sum_pair(24).map_err(|e| e.to_string())?;
    ensure(states == exact(&m1), "M1 mismatch")?;
    Ok("M1 (2^20 states) equal".into())
}

fn ac8() -> Result<String, String> {
    for r in 1..=12 {
        let n = named(NamedTangle::M(r)).crossing_count();
        ensure(n == 20 << (r - 1), format!("crossing_count(M{r}) = {n}"))?;
    }
    let one = connectivity(&TangleExpr::Twist(1));
    for r in 1..=8 {
        let c = connectivity(&named(NamedTangle::M(r)));
        ensure(
            c == Connectivity {
                pairing: Pairing::ZeroType,
                loops: 0,
            },
            format!("M{r}: {c:?}"),
        )?;
        ensure(
            one.vsum(c).closure_components(Closure::Den) == 1,
            format!("tables: D{r}"),
        )?;
    }
    for r in 1..=4 {
        let m = named(NamedTangle::M(r));
        let w = expand(&m)
            .writhe(Convention::LeftRight)
            .map_err(|e| e.to_string())?;
        ensure(w == 0, format!("wri(M{r}) = {w}"))?;
        let k = expand(&TangleExpr::star(TangleExpr::Twist(1), m)).close(Closure::Den);
        ensure(k.component_count() == 1, format!("trace: D{r} components"))?;
        ensure(k.writhe() == 1, format!("wri(D{r}) = {}", k.writhe()))?;
    }
    Ok("counts r = 1..12; one component (trace r <= 4, tables r <= 8); writhes 0 and +1".into())
}

fn coefficient() -> impl Strategy<Value = BigInt> {
    prop_oneof![4 => (-5i64..=5).prop_map(BigInt::from), 1 => any::<i128>().prop_map(BigInt::from)]
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-10i64..10, coefficient()), 0..7).prop_map(LaurentPoly::from_terms)
}

fn pair() -> impl Strategy<Value = BracketPair> {
    (poly(), poly()).prop_map(|(f, g)| BracketPair::new(f, g))
}

fn fail<T: std::fmt::Debug>(name: &str, e: proptest::test_runner::TestError<T>) -> String {
    format!("{name}: {e:?}")
}

fn ac9() -> Result<String, String> {
    let runner = || {
        TestRunner::new(Config {
            cases: PROPERTY_CASES,
            failure_persistence: None,
            ..Config::default()
        })
    };

    runner()
        .run(&(poly(), poly(), poly()), |(a, b, c)| {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert!((&a - &a.clone()).is_zero());
            prop_assert_eq!(&a * LaurentPoly::one(), a.clone());
            Ok(())
        })
        .map_err(|e| fail("ring axioms", e))?;
    runner()
        .run(&(poly(), poly()), |(a, b)| {
            prop_assert_eq!(a.mirror().mirror(), a.clone());
            prop_assert_eq!((&a * &b).mirror(), a.mirror() * b.mirror());
            prop_assert_eq!((&a + &b).mirror(), a.mirror() + b.mirror());
            Ok(())
        })
        .map_err(|e| fail("mirror", e))?;
    runner()
        .run(&(poly(), poly(), 2u64..500), |(a, b, m)| {
            let m = Modulus::new(m).unwrap();
            let r = |x: &LaurentPoly| x.mod_reduce(&m);
            prop_assert_eq!(r(&(&a * &b)), r(&(r(&a) * r(&b))));
            prop_assert_eq!(r(&(&a + &b)), r(&(r(&a) + r(&b))));
            Ok(())
        })
        .map_err(|e| fail("mod-reduce", e))?;
    runner()
        .run(&(pair(), pair(), pair()), |(a, b, c)| {
            prop_assert_eq!(a.hsum(&BracketPair::zero_tangle()), a.clone());
            prop_assert_eq!(a.vsum(&BracketPair::infinity_tangle()), a.clone());
            prop_assert_eq!(a.hsum(&b), b.hsum(&a));
            prop_assert_eq!(a.vsum(&b), b.vsum(&a));
            prop_assert_eq!(a.hsum(&b).hsum(&c), a.hsum(&b.hsum(&c)));
            prop_assert_eq!(a.vsum(&b).vsum(&c), a.vsum(&b.vsum(&c)));
            Ok(())
        })
        .map_err(|e| fail("hsum/vsum", e))?;
    runner()
        .run(&(poly(), any::<u64>()), |(a, seed)| {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
            let e = common::random_expr(&mut common::rng(seed), 12);
            prop_assert_eq!(kbracket::parse_tangle(&e.to_string()).unwrap(), e);
            Ok(())
        })
        .map_err(|e| fail("round-trips", e))?;
    Ok(format!("5 suites x {PROPERTY_CASES} cases, zero failures"))
}

fn ac10() -> Result<String, String> {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "tests",
        "fixtures",
        "unknot_trefoil.pd",
    ]
    .iter()
    .collect();
    let out = run(["kbracket", "census", path.to_str().unwrap(), "--mod", "2"]);
    ensure(out.code == 0, out.stderr.clone())?;
    let want = "2 records\ncrossings 0: 1 of 1 with V ≡ 1 (mod 2)\ncrossings 3: 0 of 1 with V ≡ 1 (mod 2)\n";
    ensure(out.stdout == want, format!("got {:?}", out.stdout))?;
    Ok("count 1 of 2: unknot kept, trefoil excluded".into())
}

#[test]
fn acceptance() {
    let mut g = Gate {
        lines: Vec::new(),
        failed: 0,
    };
    let _ = writeln!(std::io::stderr().lock());
    let secs = Duration::from_secs;
    g.run("AC1", "bracket of T821", secs(1), ac1);
    g.run("AC2", "twist displays", secs(1), ac2);
    g.run("AC3", "T20 mod 2 and leading terms", secs(1), ac3);
    g.run("AC4a", "M_r exact, r <= 8", secs(10), ac4_exact);
    g.run("AC4b", "M_r modular, r = 9..20", secs(60), ac4_modular);
    g.run("AC5", "K_r Jones congruence", secs(10), ac5);
    g.run("AC6", "distinct leading terms", secs(10), ac6);
    g.run(
        "AC7a",
        "oracle: random corpus and T821",
        secs(300),
        ac7_random,
    );
    g.run("AC7b", "oracle: M1", secs(300), ac7_m1);
    g.run("AC8", "structure of M_r and D_r", secs(60), ac8);
    g.run("AC9", "property suites", secs(300), ac9);
    g.run("AC10", "census substitute", secs(10), ac10);
    assert_eq!(g.failed, 0, "failed criteria:\n{}", g.lines.join("\n"));
}
