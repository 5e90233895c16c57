//! Command-line definitions and dispatch.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use equiquant_core::equivariant::{
    equivariance_report, resonance_index, solve_equivariant_map, star_product,
};
use equiquant_core::exact::Scalar;
use equiquant_core::geometry::is_closed_under_bracket;
use equiquant_core::sample::random_symbol;
use equiquant_core::{
    ConformalMetric, DiffOperator, Error, FlatStructure, QuantizationMap, Rational, RationalFunction, Symbol,
    Weights,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::json::{encode_field, encode_function, encode_operator, encode_symbol};
use crate::parse::{parse_expression, parse_function, parse_operator, parse_rational, parse_symbol, ExprError};
use crate::render;

#[derive(Parser, Debug)]
#[command(
    name = "equiquant",
    version,
    about = "Exact projectively and conformally equivariant quantization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Quantize a symbol (--symbol) into a differential operator
    Quantize(Common),
    /// Recover the symbol of an operator (--operator)
    SymbolOf(Common),
    /// Star product of --symbol and --symbol2, by powers of h
    Star(Common),
    /// Formal adjoint of --operator (mu defaults to 1 - lambda)
    Adjoint(Common),
    /// Solve for the equivariant map through degree --order
    SolveMap(Common),
    /// Run a verification (--what)
    Check(CheckArgs),
    /// Quantum Hamiltonian of the geodesic flow of F*eta (--factor)
    Geodesic(Common),
    /// List the generating vector fields of a structure
    Generators(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StructureArg {
    Projective,
    Conformal,
    Weyl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Equivariance,
    StarForm,
    Symmetry,
    Resonance,
    Closure,
}

#[derive(Args, Debug, Default)]
pub struct Common {
    /// Dimension (Euclidean signature for conformal structures)
    #[arg(long)]
    pub n: Option<usize>,
    /// Signature "p,q" of the flat metric
    #[arg(long)]
    pub signature: Option<String>,
    /// projective | conformal | weyl
    #[arg(long, value_enum)]
    pub structure: Option<StructureArg>,
    /// Source density weight (default 1/2)
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Target density weight (default lambda)
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Degree or truncation order
    #[arg(long)]
    pub order: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub symbol: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub symbol2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub operator: Option<String>,
    /// Conformal factor F of the metric F*eta
    #[arg(long, allow_hyphen_values = true)]
    pub factor: Option<String>,
    /// Weight difference for resonance checks
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Number of random samples for checks
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed for random samples
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print machine-readable JSON
    #[arg(long)]
    pub json: bool,
    /// Print with h replaced by i*r
    #[arg(long, allow_hyphen_values = true)]
    pub hbar_value: Option<String>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub what: CheckKind,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Engine(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Expr(ExprError::Syntax { .. }) => 2,
            CliError::Expr(ExprError::Index { .. }) => 1,
            CliError::Expr(ExprError::Domain { .. }) => 3,
            CliError::Engine(e) => match e {
                Error::Usage(_) | Error::Unsupported(_) => 1,
                Error::MathDomain(_) | Error::SingularSystem { .. } => 3,
            },
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    text: String,
    passed: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, passed: true }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(r) => Outcome {
            code: if r.passed { 0 } else { 4 },
            stdout: r.text,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Quantize(c) => quantize(c),
        Command::SymbolOf(c) => symbol_of(c),
        Command::Star(c) => star(c),
        Command::Adjoint(c) => adjoint(c),
        Command::SolveMap(c) => solve_map(c),
        Command::Check(a) => check(a.what, &a.common),
        Command::Geodesic(c) => geodesic(c),
        Command::Generators(c) => generators(c),
    }
}

fn rational_flag(name: &str, value: &Option<String>) -> Result<Option<Rational>, CliError> {
    match value {
        None => Ok(None),
        Some(s) => parse_rational(s)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("--{name} expects a rational number, got {s:?}"))),
    }
}

fn half() -> Rational {
    Rational::from_ratio(1, 2)
}

/// `(λ, μ)` with `λ` defaulting to 1/2 and `μ` to `default_mu(λ)`.
fn weights(c: &Common, default_mu: impl Fn(&Rational) -> Rational) -> Result<Weights, CliError> {
    let lambda = rational_flag("lambda", &c.lambda)?.unwrap_or_else(half);
    let mu = rational_flag("mu", &c.mu)?.unwrap_or_else(|| default_mu(&lambda));
    Ok(Weights::new(lambda, mu))
}

/// `(p, q)` from `--signature`, `--n`, or the highest index in `texts`.
fn dims(c: &Common, texts: &[&str]) -> Result<(usize, usize), CliError> {
    let sig = match &c.signature {
        Some(s) => {
            let parts: Vec<&str> = s.split(',').map(str::trim).collect();
            let parsed: Option<Vec<usize>> = parts.iter().map(|p| p.parse().ok()).collect();
            match parsed.as_deref() {
                Some([p, q]) if p + q > 0 => Some((*p, *q)),
                _ => return usage(format!("--signature expects \"p,q\" with p + q > 0, got {s:?}")),
            }
        }
        None => None,
    };
    match (sig, c.n) {
        (Some((p, q)), Some(n)) if p + q != n => usage(format!("--n {n} disagrees with --signature {p},{q}")),
        (Some(pq), _) => Ok(pq),
        (None, Some(0)) => usage("--n must be positive"),
        (None, Some(n)) => Ok((n, 0)),
        (None, None) => {
            let mut n = 0;
            for t in texts {
                n = n.max(parse_expression(t)?.max_index());
            }
            if texts.is_empty() {
                return usage("give the dimension with --n or --signature");
            }
            Ok((n.max(1), 0))
        }
    }
}

fn flat_structure(kind: StructureArg, p: usize, q: usize) -> Result<FlatStructure, CliError> {
    match kind {
        StructureArg::Conformal => Ok(FlatStructure::conformal(p, q)),
        _ if q > 0 => usage("a signature with q > 0 needs --structure conformal"),
        _ => Ok(FlatStructure::projective(p)),
    }
}

fn build_map(kind: StructureArg, p: usize, q: usize, w: &Weights, degree: u32) -> Result<QuantizationMap, CliError> {
    let n = p + q;
    let at_half = w.lambda == half() && w.mu == half();
    match kind {
        StructureArg::Weyl => {
            if !at_half {
                return usage("the Weyl map acts on half-densities: lambda = mu = 1/2");
            }
            if q > 0 {
                return usage("the Weyl map takes --n, not a signature");
            }
            Ok(QuantizationMap::weyl(n, degree))
        }
        StructureArg::Projective => {
            if q > 0 {
                return usage("a signature with q > 0 needs --structure conformal");
            }
            if at_half {
                Ok(QuantizationMap::projective_half(n, degree))
            } else {
                Ok(solve_equivariant_map(&FlatStructure::projective(n), degree, w)?)
            }
        }
        StructureArg::Conformal => {
            if at_half && degree <= 2 && n >= 3 {
                Ok(QuantizationMap::conformal_order2(p, q)?)
            } else {
                Ok(solve_equivariant_map(&FlatStructure::conformal(p, q), degree, w)?)
            }
        }
    }
}

fn hbar(c: &Common) -> Result<Option<Rational>, CliError> {
    rational_flag("hbar-value", &c.hbar_value)
}

fn show_symbol(s: &Symbol, r: &Option<Rational>) -> String {
    match r {
        Some(r) => render::symbol_at(s, r),
        None => render::symbol(s),
    }
}

fn show_operator(a: &DiffOperator, r: &Option<Rational>) -> String {
    match r {
        Some(r) => render::operator_at(a, r),
        None => render::operator(a),
    }
}

fn pretty(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

fn quantize(c: &Common) -> Result<Report, CliError> {
    let text = required(&c.symbol, "symbol")?;
    let (p, q) = dims(c, &[text])?;
    let sym = parse_symbol(text, p + q)?;
    let w = weights(c, |l| l.clone())?;
    let kind = c.structure.unwrap_or(StructureArg::Projective);
    let map = build_map(kind, p, q, &w, sym.degree().unwrap_or(0))?;
    let op = map.quantize(&sym)?;
    Ok(Report::ok(if c.json {
        pretty(serde_json::to_value(encode_operator(&op)).expect("serializable"))
    } else {
        format!("{}\n", show_operator(&op, &hbar(c)?))
    }))
}

fn symbol_of(c: &Common) -> Result<Report, CliError> {
    let text = required(&c.operator, "operator")?;
    let (p, q) = dims(c, &[text])?;
    let w = weights(c, |l| l.clone())?;
    let op = parse_operator(text, p + q, w.lambda.clone(), w.mu.clone())?;
    let kind = c.structure.unwrap_or(StructureArg::Projective);
    let map = build_map(kind, p, q, &w, op.order().unwrap_or(0))?;
    let sym = map.symbol_of(&op)?;
    Ok(Report::ok(if c.json {
        pretty(serde_json::to_value(encode_symbol(&sym)).expect("serializable"))
    } else {
        format!("{}\n", show_symbol(&sym, &hbar(c)?))
    }))
}

fn star(c: &Common) -> Result<Report, CliError> {
    let t1 = required(&c.symbol, "symbol")?;
    let t2 = required(&c.symbol2, "symbol2")?;
    let (p, q) = dims(c, &[t1, t2])?;
    let (a, b) = (parse_symbol(t1, p + q)?, parse_symbol(t2, p + q)?);
    let w = weights(c, |l| l.clone())?;
    let degree = a.degree().unwrap_or(0) + b.degree().unwrap_or(0);
    let map = build_map(c.structure.unwrap_or(StructureArg::Projective), p, q, &w, degree)?;
    let rep = star_product(&a, &b, &map, c.order.unwrap_or(2))?;
    if c.json {
        return Ok(Report::ok(pretty(json!({
            "order0": encode_symbol(&rep.order0),
            "order1": encode_symbol(&rep.order1),
            "orders": rep.orders.iter().map(encode_symbol).collect::<Vec<_>>(),
            "poisson_match": rep.poisson_match,
            "product": encode_symbol(&rep.product),
        }))));
    }
    let r = hbar(c)?;
    let mut out = String::new();
    for (j, s) in rep.orders.iter().enumerate() {
        writeln!(out, "order {j}: {}", show_symbol(s, &r)).unwrap();
    }
    writeln!(out, "poisson match: {}", rep.poisson_match).unwrap();
    writeln!(out, "product: {}", show_symbol(&rep.product, &r)).unwrap();
    Ok(Report::ok(out))
}

fn adjoint(c: &Common) -> Result<Report, CliError> {
    let text = required(&c.operator, "operator")?;
    let (p, q) = dims(c, &[text])?;
    let w = weights(c, |l| Rational::from_int(1) - l.clone())?;
    let op = parse_operator(text, p + q, w.lambda, w.mu)?;
    let adj = op.formal_adjoint()?;
    Ok(Report::ok(if c.json {
        pretty(serde_json::to_value(encode_operator(&adj)).expect("serializable"))
    } else {
        format!("{}\n", show_operator(&adj, &hbar(c)?))
    }))
}

fn solve_map(c: &Common) -> Result<Report, CliError> {
    let (p, q) = dims(c, &[])?;
    let kind = c.structure.unwrap_or(StructureArg::Projective);
    if kind == StructureArg::Weyl {
        return usage("solve-map needs --structure projective or conformal");
    }
    let s = flat_structure(kind, p, q)?;
    let w = weights(c, |l| l.clone())?;
    let map = solve_equivariant_map(&s, c.order.unwrap_or(2), &w)?;
    if c.json {
        let degrees: Vec<_> = map
            .table()
            .iter()
            .enumerate()
            .map(|(k, row)| {
                json!({
                    "degree": k,
                    "words": row.iter().map(|(word, coef)| json!({
                        "word": word.to_string(),
                        "coefficient": coef.to_string(),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        return Ok(Report::ok(pretty(json!({
            "structure": s.to_string(),
            "lambda": w.lambda.to_string(),
            "mu": w.mu.to_string(),
            "degrees": degrees,
        }))));
    }
    let mut out = format!("{s}, lambda = {}, mu = {}\n", w.lambda, w.mu);
    for (k, row) in map.table().iter().enumerate() {
        let terms: Vec<String> = row
            .iter()
            .map(|(word, coef)| {
                if word.is_identity() {
                    coef.to_string()
                } else {
                    format!("{coef}*{word}")
                }
            })
            .collect();
        writeln!(out, "degree {k}: {}", terms.join(" + ").replace("+ -", "- ")).unwrap();
    }
    Ok(Report::ok(out))
}

fn samples(c: &Common, n: usize, default_degree: u32, given: &[&Option<String>]) -> Result<Vec<Symbol>, CliError> {
    let given: Vec<&str> = given.iter().filter_map(|s| s.as_deref()).collect();
    if !given.is_empty() {
        return given
            .into_iter()
            .map(|t| parse_symbol(t, n).map_err(CliError::from))
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let degree = c.order.unwrap_or(default_degree);
    Ok((0..c.samples.unwrap_or(10))
        .map(|_| random_symbol(&mut rng, n, degree, 3, 2))
        .collect())
}

fn given_texts(c: &Common) -> Vec<&str> {
    [&c.symbol, &c.symbol2].iter().filter_map(|s| s.as_deref()).collect()
}

fn check(what: CheckKind, c: &Common) -> Result<Report, CliError> {
    match what {
        CheckKind::Resonance => check_resonance(c),
        CheckKind::Closure => check_closure(c),
        CheckKind::Equivariance => check_equivariance(c),
        CheckKind::StarForm => check_star_form(c),
        CheckKind::Symmetry => check_symmetry(c),
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn check_resonance(c: &Common) -> Result<Report, CliError> {
    let (p, q) = dims(c, &[])?;
    let kind = c.structure.unwrap_or(StructureArg::Projective);
    let s = flat_structure(kind, p, q)?;
    let delta = match rational_flag("delta", &c.delta)? {
        Some(d) => d,
        None if c.lambda.is_some() || c.mu.is_some() => weights(c, |l| l.clone())?.delta(),
        None => return usage("give --delta, or --lambda and --mu"),
    };
    let index = resonance_index(&s, &delta)?;
    if c.json {
        return Ok(Report::ok(pretty(json!({
            "structure": s.to_string(),
            "delta": delta.to_string(),
            "resonant": index.is_some(),
            "k": index,
        }))));
    }
    Ok(Report::ok(match index {
        Some(k) => format!("resonant (k={k})\n"),
        None => "not resonant\n".into(),
    }))
}

fn check_closure(c: &Common) -> Result<Report, CliError> {
    let (p, q) = dims(c, &[])?;
    let s = flat_structure(c.structure.unwrap_or(StructureArg::Projective), p, q)?;
    let fields = s.generators::<Rational>();
    let closed = is_closed_under_bracket(&fields);
    let passed = closed && fields.len() == s.generator_count();
    if c.json {
        return Ok(Report {
            text: pretty(json!({
                "structure": s.to_string(),
                "generators": fields.len(),
                "expected": s.generator_count(),
                "closed": closed,
                "passed": passed,
            })),
            passed,
        });
    }
    Ok(Report {
        text: format!(
            "{s}: {} generators (expected {}), closed under bracket: {closed}\n{}\n",
            fields.len(),
            s.generator_count(),
            verdict(passed)
        ),
        passed,
    })
}

fn check_equivariance(c: &Common) -> Result<Report, CliError> {
    let (p, q) = dims(c, &given_texts(c))?;
    let kind = c.structure.unwrap_or(StructureArg::Projective);
    let s = flat_structure(kind, p, q)?;
    let w = weights(c, |l| l.clone())?;
    let syms = samples(c, p + q, 3, &[&c.symbol])?;
    let degree = syms.iter().filter_map(Symbol::degree).max().unwrap_or(0);
    let map = build_map(kind, p, q, &w, degree)?;
    let report = equivariance_report(&map, &s, &syms)?;
    let passed = report.passed();
    if c.json {
        let violations: Vec<_> = report
            .violations
            .iter()
            .map(|v| {
                json!({
                    "generator": v.generator,
                    "field": encode_field(&v.field),
                    "sample": encode_symbol(&syms[v.sample]),
                    "residual": encode_operator(&v.residual),
                })
            })
            .collect();
        return Ok(Report {
            text: pretty(json!({
                "map": map.kind().to_string(),
                "structure": s.to_string(),
                "checks": report.checks,
                "violations": violations,
                "passed": passed,
            })),
            passed,
        });
    }
    let mut out = format!(
        "{} map against {s}: {} checks, {} violations\n",
        map.kind(),
        report.checks,
        report.violations.len()
    );
    for v in &report.violations {
        writeln!(
            out,
            "generator #{} ({}) on sample {}: residual {}",
            v.generator,
            render::vector_field(&v.field),
            render::symbol(&syms[v.sample]),
            render::operator(&v.residual)
        )
        .unwrap();
    }
    writeln!(out, "{}", verdict(passed)).unwrap();
    Ok(Report { text: out, passed })
}

fn check_star_form(c: &Common) -> Result<Report, CliError> {
    let (p, q) = dims(c, &given_texts(c))?;
    let n = p + q;
    let kind = c.structure.unwrap_or(StructureArg::Projective);
    let w = weights(c, |l| l.clone())?;
    let pairs: Vec<(Symbol, Symbol)> = match (&c.symbol, &c.symbol2) {
        (Some(a), Some(b)) => vec![(parse_symbol(a, n)?, parse_symbol(b, n)?)],
        (None, None) => {
            let all = samples(c, n, 2, &[])?;
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed.wrapping_add(1));
            let degree = c.order.unwrap_or(2);
            all.into_iter()
                .map(|a| (a, random_symbol(&mut rng, n, degree, 3, 2)))
                .collect()
        }
        _ => return usage("give both --symbol and --symbol2, or neither"),
    };
    let degree = pairs
        .iter()
        .map(|(a, b)| a.degree().unwrap_or(0) + b.degree().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let map = build_map(kind, p, q, &w, degree)?;
    let mut failures = Vec::new();
    for (i, (a, b)) in pairs.iter().enumerate() {
        let rep = star_product(a, b, &map, 1)?;
        let pointwise = rep.order0 == a * b;
        if !pointwise || !rep.poisson_match {
            failures.push((i, pointwise, rep.poisson_match));
        }
    }
    let passed = failures.is_empty();
    if c.json {
        let f: Vec<_> = failures
            .iter()
            .map(|(i, pw, pm)| json!({"pair": i, "order0_is_product": pw, "poisson_match": pm}))
            .collect();
        return Ok(Report {
            text: pretty(json!({"map": map.kind().to_string(), "pairs": pairs.len(), "failures": f, "passed": passed})),
            passed,
        });
    }
    let mut out = format!("{} map: {} pairs, {} failures\n", map.kind(), pairs.len(), failures.len());
    for (i, pw, pm) in &failures {
        let (a, b) = &pairs[*i];
        writeln!(
            out,
            "pair {i} ({} , {}): order 0 is PQ: {pw}, order 1 is {{P,Q}}/2: {pm}",
            render::symbol(a),
            render::symbol(b)
        )
        .unwrap();
    }
    writeln!(out, "{}", verdict(passed)).unwrap();
    Ok(Report { text: out, passed })
}

fn check_symmetry(c: &Common) -> Result<Report, CliError> {
    let (p, q) = dims(c, &given_texts(c))?;
    let kind = c.structure.unwrap_or(StructureArg::Projective);
    let w = weights(c, |l| l.clone())?;
    let syms = samples(c, p + q, 3, &[&c.symbol])?;
    let degree = syms.iter().filter_map(Symbol::degree).max().unwrap_or(0);
    let map = build_map(kind, p, q, &w, degree)?;
    let mut failing = Vec::new();
    for (i, s) in syms.iter().enumerate() {
        if !map.quantize(s)?.is_self_adjoint()? {
            failing.push(i);
        }
    }
    let passed = failing.is_empty();
    if c.json {
        return Ok(Report {
            text: pretty(json!({"map": map.kind().to_string(), "samples": syms.len(), "not_self_adjoint": failing, "passed": passed})),
            passed,
        });
    }
    let mut out = format!("{} map: {} samples, {} not self-adjoint\n", map.kind(), syms.len(), failing.len());
    for i in &failing {
        writeln!(out, "sample {}", render::symbol(&syms[*i])).unwrap();
    }
    writeln!(out, "{}", verdict(passed)).unwrap();
    Ok(Report { text: out, passed })
}

fn geodesic(c: &Common) -> Result<Report, CliError> {
    let text = required(&c.factor, "factor")?;
    let (p, q) = dims(c, &[text])?;
    let n = p + q;
    let factor = parse_function(text, n)?;
    let metric = ConformalMetric::new(p, q, factor)?;
    let kind = c.structure.unwrap_or(StructureArg::Conformal);
    let w = weights(c, |l| l.clone())?;
    if w.lambda != half() || w.mu != half() {
        return usage("geodesic quantization uses lambda = mu = 1/2");
    }
    let map = build_map(kind, p, q, &w, 2)?;
    let lap = metric.laplace_beltrami();
    let (ham, pot) = metric.quantum_hamiltonian(&map)?;
    let curvature = if n >= 2 { Some(metric.scalar_curvature()?) } else { None };
    let ratio = curvature
        .as_ref()
        .filter(|r| !r.is_zero())
        .and_then(|r| (&pot / r).as_constant());
    let residual = if n >= 2 {
        Some(&ham - &metric.expected_geodesic_hamiltonian()?)
    } else {
        None
    };
    let passed = kind != StructureArg::Conformal || residual.as_ref().is_some_and(DiffOperator::is_zero);
    if c.json {
        return Ok(Report {
            text: pretty(json!({
                "laplacian": encode_operator(&lap),
                "scalar_curvature": curvature.as_ref().map(encode_function),
                "potential": encode_function(&pot),
                "potential_over_curvature": ratio.as_ref().map(|r| r.to_string()),
                "hamiltonian": encode_operator(&ham),
                "residual": residual.as_ref().map(encode_operator),
            })),
            passed,
        });
    }
    let r = hbar(c)?;
    let show = |f: &RationalFunction| render::rational_function(f);
    let mut out = String::new();
    writeln!(out, "Delta_g = {}", show_operator(&lap, &r)).unwrap();
    if let Some(rg) = &curvature {
        writeln!(out, "R_g = {}", show(rg)).unwrap();
    }
    writeln!(out, "U = {}", show(&pot)).unwrap();
    if let Some(k) = &ratio {
        writeln!(out, "U = {k} * R_g").unwrap();
    }
    writeln!(out, "H = {}", show_operator(&ham, &r)).unwrap();
    if let Some(res) = &residual {
        writeln!(out, "residual = {}", render::operator(res)).unwrap();
    }
    Ok(Report { text: out, passed })
}

fn generators(c: &Common) -> Result<Report, CliError> {
    let (p, q) = dims(c, &[])?;
    let s = flat_structure(c.structure.unwrap_or(StructureArg::Projective), p, q)?;
    let fields = s.generators::<Rational>();
    if c.json {
        return Ok(Report::ok(pretty(json!({
            "structure": s.to_string(),
            "fields": fields.iter().map(encode_field).collect::<Vec<_>>(),
        }))));
    }
    let mut out = String::new();
    for x in &fields {
        writeln!(out, "{}", render::vector_field(x)).unwrap();
    }
    Ok(Report::ok(out))
}
