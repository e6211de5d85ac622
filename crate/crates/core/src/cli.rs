//! Command-line front end.
//!
//! [`run`] parses arguments and returns the text to print together with the
//! process exit code, so the whole surface is testable in-process:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, all claims hold |
//! | 1 | a verification or oracle mismatch |
//! | 2 | unparsable input or invalid arguments |
//! | 3 | a resource limit was hit |

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::builder::TypedValueParser as _;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bracket::{BracketPair, EvalMode, Evaluator, Generator, Sign};
use crate::diagram::{
    connectivity, expand, pd_read_records, Connectivity, Convention, DiagramError, Pairing,
};
use crate::expr::{parse_tangle, Closure, NamedTangle, TangleExpr};
use crate::jones::{
    closure_jones, congruent_to_one, jones_from_chi, kr_crossing_bound, link_jones,
    normalized_bracket, Budget, JonesError, KR_WRITHE,
};
use crate::laurent::{LaurentPoly, Modulus, Monomial};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Largest `r` for which exact leading terms are verified; beyond it only
/// modular claims are checked.
pub const EXACT_MAX_R: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "kbracket",
    version,
    about = "Kauffman bracket pairs of algebraic tangles"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Largest crossing count the state-sum oracle will enumerate.
    #[arg(
        long,
        global = true,
        env = "KBRACKET_STATE_SUM_CAP",
        default_value_t = crate::diagram::DEFAULT_STATE_SUM_CAP,
        value_parser = clap::value_parser!(u64).range(1..=62).map(|v| v as usize)
    )]
    pub cap: usize,
    /// Largest |exponent| allowed in any intermediate polynomial.
    #[arg(long, global = true, default_value_t = Budget::default().max_degree)]
    pub max_degree: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bracket pair [f; g] of a tangle expression.
    Bracket {
        expr: String,
        #[arg(long = "mod")]
        modulus: Option<Modulus>,
    },
    /// Jones polynomial of the numerator or denominator closure.
    Jones {
        closure: Closure,
        expr: String,
        #[arg(long = "mod")]
        modulus: Option<Modulus>,
    },
    /// Check the bracket-pair identities and the K_r family claims.
    Verify {
        #[arg(long, default_value_t = EXACT_MAX_R, value_parser = clap::value_parser!(u32).range(1..=60))]
        max_r: u32,
    },
    /// Compare the pair calculus with a state-sum enumeration.
    Oracle { expr: String },
    /// Count PD diagrams whose Jones polynomial is 1 modulo m.
    Census {
        file: PathBuf,
        #[arg(long = "mod")]
        modulus: Modulus,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code,
        }
    }
}

/// Text and JSON renderings of one result.
trait Render: Serialize {
    fn text(&self) -> String;
}

fn emit(format: OutputFormat, value: &impl Render, code: i32) -> Outcome {
    let stdout = match format {
        OutputFormat::Text => value.text(),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("serializable output");
            s.push('\n');
            s
        }
    };
    Outcome {
        stdout,
        stderr: String::new(),
        code,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: rendered,
                    code: EXIT_INPUT,
                }
            } else {
                Outcome {
                    stdout: rendered,
                    stderr: String::new(),
                    code: EXIT_OK,
                }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let budget = Budget {
        max_degree: cli.max_degree,
        ..Budget::default()
    };
    match &cli.command {
        Command::Bracket { expr, modulus } => {
            cmd_bracket(cli.output, expr, modulus.as_ref(), &budget)
        }
        Command::Jones {
            closure,
            expr,
            modulus,
        } => cmd_jones(cli.output, *closure, expr, modulus.as_ref(), &budget),
        Command::Verify { max_r } => verify_outcome(cli.output, *max_r, BracketPair::generator),
        Command::Oracle { expr } => cmd_oracle(cli.output, expr, cli.cap),
        Command::Census { file, modulus } => cmd_census(cli.output, file, modulus, cli.cap),
    }
}

/// The `verify` command with elementary crossings valued by `generator`.
pub fn verify_outcome(format: OutputFormat, max_r: u32, generator: Generator) -> Outcome {
    let report = verify_claims(max_r, generator);
    let code = if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    emit(format, &report, code)
}

fn mode_of(modulus: Option<&Modulus>) -> EvalMode {
    modulus.map_or(EvalMode::Exact, |m| EvalMode::Modular(m.clone()))
}

fn parse(expr: &str) -> Result<TangleExpr, Outcome> {
    parse_tangle(expr).map_err(|e| Outcome::fail(EXIT_INPUT, e))
}

fn jones_failure(e: JonesError) -> Outcome {
    let code = match e {
        JonesError::Expr(_) | JonesError::IncompatibleModulus { .. } => EXIT_INPUT,
        JonesError::Diagram(DiagramError::PdParse { .. } | DiagramError::PdValidation(_))
        | JonesError::Diagram(DiagramError::NoComponents) => EXIT_INPUT,
        _ => EXIT_RESOURCE,
    };
    Outcome::fail(code, e)
}

#[derive(Debug, Serialize)]
struct PairOut {
    f: String,
    g: String,
}

impl Render for PairOut {
    fn text(&self) -> String {
        format!("f = {}\ng = {}\n", self.f, self.g)
    }
}

fn cmd_bracket(
    format: OutputFormat,
    expr: &str,
    modulus: Option<&Modulus>,
    budget: &Budget,
) -> Outcome {
    let e = match parse(expr) {
        Ok(e) => e,
        Err(o) => return o,
    };
    match Evaluator::new(mode_of(modulus)).try_eval(&e, budget.max_degree) {
        Ok(p) => emit(
            format,
            &PairOut {
                f: p.f.to_string(),
                g: p.g.to_string(),
            },
            EXIT_OK,
        ),
        Err(err) => Outcome::fail(EXIT_RESOURCE, err),
    }
}

#[derive(Debug, Serialize)]
struct JonesOut {
    components: usize,
    writhe: i64,
    chi: String,
    #[serde(rename = "V")]
    v: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    modulus: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    congruent_to_one: Option<bool>,
}

impl Render for JonesOut {
    fn text(&self) -> String {
        let mut s = format!(
            "components = {}\nwrithe = {}\nchi = {}\nV = {}\n",
            self.components, self.writhe, self.chi, self.v
        );
        if let (Some(m), Some(c)) = (&self.modulus, self.congruent_to_one) {
            s.push_str(&format!("V ≡ 1 (mod {m}): {c}\n"));
        }
        s
    }
}

fn cmd_jones(
    format: OutputFormat,
    closure: Closure,
    expr: &str,
    modulus: Option<&Modulus>,
    budget: &Budget,
) -> Outcome {
    let e = match parse(expr) {
        Ok(e) => e,
        Err(o) => return o,
    };
    let j = match closure_jones(&e, closure, &mode_of(modulus), budget) {
        Ok(j) => j,
        Err(err) => return jones_failure(err),
    };
    let out = JonesOut {
        components: j.components,
        writhe: j.writhe,
        chi: j.chi.to_string(),
        v: j.jones.to_string(),
        modulus: modulus.map(ToString::to_string),
        congruent_to_one: modulus.map(|m| congruent_to_one(&j.jones, m)),
    };
    let mut outcome = emit(format, &out, EXIT_OK);
    if j.components > 1 {
        outcome.stderr = format!(
            "warning: {} components; each is oriented from the first crossing it meets\n",
            j.components
        );
    }
    outcome
}

#[derive(Debug, Serialize)]
struct OracleOut {
    crossings: usize,
    states: u64,
    algebraic: PairOut,
    state_sum: PairOut,
    equal: bool,
}

impl Render for OracleOut {
    fn text(&self) -> String {
        format!(
            "crossings = {}\nstates = {}\nalgebraic f = {}\nalgebraic g = {}\nstate-sum f = {}\nstate-sum g = {}\n{}\n",
            self.crossings,
            self.states,
            self.algebraic.f,
            self.algebraic.g,
            self.state_sum.f,
            self.state_sum.g,
            if self.equal { "equal" } else { "unequal" }
        )
    }
}

fn cmd_oracle(format: OutputFormat, expr: &str, cap: usize) -> Outcome {
    let e = match parse(expr) {
        Ok(e) => e,
        Err(o) => return o,
    };
    let n = e.crossing_count();
    if n > cap as u64 {
        return Outcome::fail(
            EXIT_RESOURCE,
            DiagramError::CapExceeded {
                crossings: n as usize,
                cap,
            },
        );
    }
    let algebraic = Evaluator::new(EvalMode::Exact).eval(&e);
    let state_sum = match expand(&e).state_sum_pair(cap) {
        Ok(p) => p,
        Err(err) => return Outcome::fail(EXIT_RESOURCE, err),
    };
    let equal = algebraic == state_sum;
    let out = OracleOut {
        crossings: n as usize,
        states: 1u64 << n,
        algebraic: PairOut {
            f: algebraic.f.to_string(),
            g: algebraic.g.to_string(),
        },
        state_sum: PairOut {
            f: state_sum.f.to_string(),
            g: state_sum.g.to_string(),
        },
        equal,
    };
    emit(format, &out, if equal { EXIT_OK } else { EXIT_MISMATCH })
}

#[derive(Debug, Serialize)]
struct CensusRow {
    crossings: usize,
    total: u64,
    trivial: u64,
}

#[derive(Debug, Serialize)]
struct CensusOut {
    records: usize,
    modulus: String,
    by_crossings: Vec<CensusRow>,
}

impl Render for CensusOut {
    fn text(&self) -> String {
        let mut s = format!("{} records\n", self.records);
        for row in &self.by_crossings {
            s.push_str(&format!(
                "crossings {}: {} of {} with V ≡ 1 (mod {})\n",
                row.crossings, row.trivial, row.total, self.modulus
            ));
        }
        s
    }
}

fn cmd_census(format: OutputFormat, file: &PathBuf, modulus: &Modulus, cap: usize) -> Outcome {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(EXIT_INPUT, format!("{}: {e}", file.display())),
    };
    let records = match pd_read_records(&text) {
        Ok(r) => r,
        Err((index, e)) => return Outcome::fail(EXIT_INPUT, format!("record {index}: {e}")),
    };
    let mut rows: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    for rec in &records {
        let j = match link_jones(&rec.diagram, cap) {
            Ok(j) => j,
            Err(e) => return jones_failure(e),
        };
        let row = rows.entry(rec.diagram.crossing_count()).or_default();
        row.0 += 1;
        row.1 += u64::from(congruent_to_one(&j.jones, modulus));
    }
    let out = CensusOut {
        records: records.len(),
        modulus: modulus.to_string(),
        by_crossings: rows
            .into_iter()
            .map(|(crossings, (total, trivial))| CensusRow {
                crossings,
                total,
                trivial,
            })
            .collect(),
    };
    emit(format, &out, EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub status: Status,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub claims: Vec<Claim>,
    pub passed: usize,
    pub total: usize,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

impl Render for VerificationReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.claims {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            s.push_str(&format!(
                "{tag} {}: {}\n     {}\n",
                c.id, c.statement, c.witness
            ));
        }
        s.push_str(&format!("{}/{} claims passed\n", self.passed, self.total));
        s
    }
}

struct Claims(Vec<Claim>);

impl Claims {
    fn check(
        &mut self,
        id: impl Into<String>,
        statement: impl Into<String>,
        ok: bool,
        witness: impl Into<String>,
    ) {
        self.0.push(Claim {
            id: id.into(),
            statement: statement.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness: witness.into(),
        });
    }
}

fn poly(s: &str) -> LaurentPoly {
    s.parse().expect("literal polynomial")
}

fn pair(f: &str, g: &str) -> BracketPair {
    BracketPair::new(poly(f), poly(g))
}

/// Runs every claim about the pair calculus and the `K_r` family for
/// `r <= max_r`, with elementary crossings valued by `generator`.
///
/// Exact claims stop at [`EXACT_MAX_R`]; modular ones run to `max_r`.
pub fn verify_claims(max_r: u32, generator: Generator) -> VerificationReport {
    let exact = Evaluator::new(EvalMode::Exact).with_generator(generator);
    let named = |n: NamedTangle| n.build().expect("valid named tangle");
    let ev = |s: &str| exact.eval(&parse_tangle(s).expect("literal expression"));
    let mut c = Claims(Vec::new());

    let (pos, neg) = (
        exact.generator(Sign::Positive),
        exact.generator(Sign::Negative),
    );
    c.check(
        "generators",
        "br(1) = [t; t^-1] and br(-1) = [t^-1; t]",
        pos == pair("t", "t^-1") && neg == pair("t^-1", "t"),
        format!("br(1) = {pos}, br(-1) = {neg}"),
    );
    for (id, expr, want) in [
        ("twist-2", "2", pair("t^2", "-t^-4 + 1")),
        ("twist-3", "3", pair("t^3", "t^-7 - t^-3 + t")),
        ("vtwist-2", "1/2", pair("1 - t^4", "t^-2")),
    ] {
        let got = ev(expr);
        c.check(
            id,
            format!("br({expr}) = {want}"),
            got == want,
            format!("br({expr}) = {got}"),
        );
    }

    let t821_want = pair(
        "-2t^-6 + 2t^-2 - 2t^2 + t^6",
        "-2t^-4 + 3 - 4t^4 + 3t^8 - 2t^12 + t^16",
    );
    let t821 = exact.eval(&named(NamedTangle::T821));
    c.check(
        "t821-pair",
        format!("br((((1/2)+1)*2)+(-3)) = {t821_want}"),
        t821 == t821_want,
        format!("{t821}"),
    );

    let t10_want = pair(
        "2t^-10 - 2t^-6 + 2t^-2 - 2t^6 + 2t^10 - 2t^14 + t^18",
        "2t^-8 - 5t^-4 + 7 - 7t^4 + 5t^8 - 3t^12 + t^16",
    );
    let t10 = exact.eval(&named(NamedTangle::T10));
    c.check(
        "t10-pair",
        format!("br(T10) = {t10_want}"),
        t10 == t10_want,
        format!("{t10}"),
    );
    let mt10_want = pair(
        "t^-18 - 2t^-14 + 2t^-10 - 2t^-6 + 2t^2 - 2t^6 + 2t^10",
        "t^-16 - 3t^-12 + 5t^-8 - 7t^-4 + 7 - 5t^4 + 2t^8",
    );
    let mt10 = exact.eval(&TangleExpr::mirror(named(NamedTangle::T10)));
    c.check(
        "mirror-t10",
        format!("br(-T10) = {mt10_want}"),
        mt10 == mt10_want,
        format!("{mt10}"),
    );

    let two = Modulus::new(2).expect("2 is a modulus");
    let t10_mod2_want = pair("t^18", "t^-4 + 1 + t^4 + t^8 + t^12 + t^16");
    let t20_mod2 = Evaluator::new(EvalMode::Modular(two.clone()))
        .with_generator(generator)
        .eval(&named(NamedTangle::T20));
    let t10_mod2 = t10.mod_reduce(&two);
    c.check(
        "t20-mod2",
        format!("br_2(T10) = {t10_mod2_want} and br_2(T20) = [1; 0]"),
        t10_mod2 == t10_mod2_want && t20_mod2 == BracketPair::zero_tangle(),
        format!("br_2(T10) = {t10_mod2}, br_2(T20) = {t20_mod2}"),
    );
    let t20 = exact.eval(&named(NamedTangle::T20));
    let (lf, lg) = (t20.f.leading_term().ok(), t20.g.leading_term().ok());
    c.check(
        "t20-leading",
        "lt f(T20) = 2t^28 and lt g(T20) = 2t^26",
        lf == Some(Monomial::new(2, 28)) && lg == Some(Monomial::new(2, 26)),
        format!("lt f = {}, lt g = {}", show(&lf), show(&lg)),
    );

    let mut leading = Vec::new();
    for r in 1..=max_r {
        let m_r = named(NamedTangle::M(r));
        let modulus = Modulus::power_of_two(r);
        let modular = Evaluator::new(EvalMode::Modular(modulus.clone())).with_generator(generator);
        let reduced = modular.eval(&m_r);
        c.check(
            format!("m{r}-mod"),
            format!("br_{modulus}(M{r}) = [1; 0]"),
            reduced == BracketPair::zero_tangle(),
            format!("{reduced}"),
        );

        let copies = 1u64 << (r - 1);
        let conn = connectivity(&m_r);
        let crossings = m_r.crossing_count();
        let den_components = conn
            .vsum(connectivity(&TangleExpr::Twist(1)))
            .closure_components(Closure::Den);
        c.check(
            format!("m{r}-structure"),
            format!(
                "M{r} has {} crossings and pairs NW-NE, SW-SE; den(1 * M{r}) is a knot with {} crossings",
                20 * copies,
                kr_crossing_bound(r)
            ),
            crossings == 20 * copies
                && conn == (Connectivity { pairing: Pairing::ZeroType, loops: 0 })
                && den_components == 1,
            format!("crossings = {crossings}, connectivity = {conn:?}, components = {den_components}"),
        );

        if r <= 4 {
            let d = expand(&m_r);
            let wm = d.writhe(Convention::LeftRight);
            let k =
                expand(&TangleExpr::star(TangleExpr::Twist(1), m_r.clone())).close(Closure::Den);
            let (wk, comps) = (k.writhe(), k.component_count());
            c.check(
                format!("m{r}-writhe"),
                format!("wri(M{r}) = 0 left-right; den(1 * M{r}) has one component and writhe +1"),
                wm == Ok(0) && wk == 1 && comps == 1,
                format!("wri(M{r}) = {wm:?}, wri(D{r}) = {wk}, components = {comps}"),
            );
        }

        if r <= EXACT_MAX_R {
            let ell = Monomial::new(2, 28).pow(copies as u32);
            let p = exact.eval(&m_r);
            let (lf, lg) = (p.f.leading_term().ok(), p.g.leading_term().ok());
            let want_g = &ell * &Monomial::new(1, -2);
            c.check(
                format!("m{r}-leading"),
                format!("lt f(M{r}) = {ell} and lt g(M{r}) = {want_g}"),
                lf.as_ref() == Some(&ell) && lg.as_ref() == Some(&want_g),
                format!("lt f = {}, lt g = {}", show(&lf), show(&lg)),
            );

            let chi = normalized_bracket(
                &exact.generator(Sign::Positive).vsum(&p).den_closure(),
                KR_WRITHE,
            );
            let identity = chi == &p.f + p.g.shift(-6);
            let v = jones_from_chi(&chi);
            let trivial = congruent_to_one(&v, &modulus);
            let lt = chi.leading_term().ok();
            c.check(
                format!("k{r}-jones"),
                format!("chi(K{r}) = f(M{r}) + t^-6 g(M{r}), V(K{r}) = 1 mod {modulus}, lt chi(K{r}) = {ell}"),
                identity && trivial && lt.as_ref() == Some(&ell),
                format!("identity = {identity}, congruent = {trivial}, lt chi = {}", show(&lt)),
            );
            leading.push(lt);
        } else {
            let d_r = modular.generator(Sign::Positive).vsum(&reduced);
            let chi = normalized_bracket(&d_r.den_closure(), KR_WRITHE).mod_reduce(&modulus);
            let trivial = congruent_to_one(&jones_from_chi(&chi), &modulus);
            c.check(
                format!("k{r}-jones"),
                format!("V(K{r}) = 1 mod {modulus}"),
                trivial,
                format!("congruent = {trivial}"),
            );
        }
    }

    if !leading.is_empty() {
        let mut exps: Vec<Option<i64>> = leading
            .iter()
            .map(|m| m.as_ref().map(|m| m.exponent))
            .collect();
        let shown = exps
            .iter()
            .map(|e| e.map_or("none".to_string(), |e| e.to_string()))
            .collect::<Vec<_>>()
            .join(", ");
        exps.sort_unstable();
        exps.dedup();
        let n = leading.len();
        c.check(
            "distinct-leading",
            format!("lt chi(K_r) are pairwise distinct for r = 1..{n}"),
            exps.len() == n && exps.iter().all(Option::is_some),
            format!("exponents {shown}"),
        );
    }

    let claims = c.0;
    let passed = claims.iter().filter(|c| c.status == Status::Pass).count();
    VerificationReport {
        total: claims.len(),
        passed,
        claims,
    }
}

fn show(m: &Option<Monomial>) -> String {
    m.as_ref()
        .map_or_else(|| "none".to_string(), ToString::to_string)
}
