//! Canonical text form of engine values. Output re-parses to the same
//! value.

use equiquant_core::exact::Monomial;
use equiquant_core::{DiffOperator, HBarScalar, Polynomial, Rational, RationalFunction, Symbol, VectorField};
use num_traits::One;

fn join_terms(terms: Vec<String>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in terms.into_iter().enumerate() {
        if i == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}

fn product(c: &Rational, factors: &[String]) -> String {
    let factors: Vec<&String> = factors.iter().filter(|f| !f.is_empty()).collect();
    let body = factors.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("*");
    if body.is_empty() {
        return c.to_string();
    }
    if c.is_one() {
        body
    } else if (-c).is_one() {
        format!("-{body}")
    } else {
        format!("{c}*{body}")
    }
}

fn h_power(k: u32) -> String {
    match k {
        0 => String::new(),
        1 => "h".into(),
        _ => format!("h^{k}"),
    }
}

fn monomial(m: &Monomial, letter: &str) -> String {
    if m.is_one() {
        String::new()
    } else {
        m.render(letter)
    }
}

fn render_terms<'a>(terms: impl DoubleEndedIterator<Item = (&'a Monomial, &'a HBarScalar)>, letter: &str) -> String {
    let mut out = Vec::new();
    for (m, c) in terms.rev() {
        let head = monomial(m, letter);
        for (k, rf) in c.coefficients().rev() {
            let hk = h_power(k);
            match rf.as_polynomial() {
                Some(p) => {
                    for (xm, v) in p.terms().rev() {
                        out.push(product(v, &[monomial(xm, "x"), hk.clone(), head.clone()]));
                    }
                }
                None => out.push(product(&Rational::one(), &[rational_function(rf), hk.clone(), head.clone()])),
            }
        }
    }
    join_terms(out)
}

pub fn polynomial(p: &Polynomial) -> String {
    p.render("x")
}

/// `(num)/(den)`, or the bare polynomial when the denominator is 1.
pub fn rational_function(f: &RationalFunction) -> String {
    match f.as_polynomial() {
        Some(p) => polynomial(p),
        None => format!("({})/({})", polynomial(f.numerator()), polynomial(f.denominator())),
    }
}

pub fn symbol(s: &Symbol) -> String {
    render_terms(s.terms(), "p")
}

/// Normal-ordered: coefficients to the left of derivatives.
pub fn operator(a: &DiffOperator) -> String {
    render_terms(a.terms(), "d")
}

pub fn vector_field(x: &VectorField) -> String {
    x.render()
}

/// `h = i r`: the coefficient of each monomial as `re + im*i`.
fn complex_coefficient(c: &HBarScalar, r: &Rational) -> String {
    let n = c.nvars();
    let mut re = RationalFunction::zero(n);
    let mut im = RationalFunction::zero(n);
    for (k, rf) in c.coefficients() {
        let mut v = Rational::one();
        for _ in 0..k {
            v *= r;
        }
        // i^k
        if k % 4 >= 2 {
            v = -v;
        }
        let term = rf.scale(&v);
        if k % 2 == 0 {
            re = &re + &term;
        } else {
            im = &im + &term;
        }
    }
    let part = |f: &RationalFunction| format!("({})", rational_function(f));
    match (re.is_zero(), im.is_zero()) {
        (_, true) => format!("[{}]", part(&re)),
        (true, false) => format!("[{}*i]", part(&im)),
        (false, false) => format!("[{} + {}*i]", part(&re), part(&im)),
    }
}

fn render_at<'a>(terms: impl DoubleEndedIterator<Item = (&'a Monomial, &'a HBarScalar)>, letter: &str, r: &Rational) -> String {
    let parts: Vec<String> = terms
        .rev()
        .map(|(m, c)| {
            let coef = complex_coefficient(c, r);
            if m.is_one() {
                coef
            } else {
                format!("{coef}*{}", m.render(letter))
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Prints with `h` replaced by `i·r`; not re-parseable.
pub fn symbol_at(s: &Symbol, r: &Rational) -> String {
    render_at(s.terms(), "p", r)
}

pub fn operator_at(a: &DiffOperator, r: &Rational) -> String {
    render_at(a.terms(), "d", r)
}
