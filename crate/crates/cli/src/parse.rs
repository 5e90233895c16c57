//! Expression grammar for symbols, operators and coefficients.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | x1..x9 | p1..p9 | d1..d9 | h | '(' expr ')'
//! ```
//!
//! `p_i` is the momentum `ξ_i`, `d_i` the derivative `∂_i`, `h` the formal
//! `iħ`. Products of operators are compositions and are normal-ordered on
//! elaboration. Division is only by coefficients (functions of `x`).

use std::fmt;

use equiquant_core::exact::Scalar;
use equiquant_core::{DiffOperator, HBarScalar, Polynomial, Rational, RationalFunction, Symbol};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("parse error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("index out of range at {pos}: {msg}")]
    Index { pos: Pos, msg: String },
    #[error("math-domain error at {pos}: {msg}")]
    Domain { pos: Pos, msg: String },
}

fn syntax<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError::Syntax { pos, msg: msg.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X(usize),
    P(usize),
    D(usize),
    H,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::P(i) => write!(f, "p{i}"),
            Var::D(i) => write!(f, "d{i}"),
            Var::H => write!(f, "h"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Var(Var, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Var(..) => 5,
        }
    }

    /// Largest variable index used, 0 if none.
    pub fn max_index(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(v, _) => match v {
                Var::X(i) | Var::P(i) | Var::D(i) => *i,
                Var::H => 0,
            },
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_index(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
                a.max_index().max(b.max_index())
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, min: u8, f: &mut fmt::Formatter<'_>| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Var(v, _) => write!(f, "{v}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(a, 3, f)
            }
            Expr::Add(a, b) => {
                wrap(a, 1, f)?;
                write!(f, " + ")?;
                wrap(b, 2, f)
            }
            Expr::Sub(a, b) => {
                wrap(a, 1, f)?;
                write!(f, " - ")?;
                wrap(b, 2, f)
            }
            Expr::Mul(a, b) => {
                wrap(a, 2, f)?;
                write!(f, "*")?;
                wrap(b, 3, f)
            }
            Expr::Div(a, b, _) => {
                wrap(a, 2, f)?;
                write!(f, "/")?;
                wrap(b, 3, f)
            }
            Expr::Pow(a, e) => {
                wrap(a, 5, f)?;
                write!(f, "^{e}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "number {n}"),
            Tok::Var(v) => write!(f, "variable {v}"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            'h' => Some(Tok::Var(Var::H)),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Num(digits.parse().expect("digits")), pos));
            continue;
        }
        if matches!(c, 'x' | 'p' | 'd') {
            let Some(d) = chars.get(i + 1).and_then(|d| d.to_digit(10)) else {
                return syntax(pos, format!("'{c}' must be followed by an index digit"));
            };
            let idx = d as usize;
            let v = match c {
                'x' => Var::X(idx),
                'p' => Var::P(idx),
                _ => Var::D(idx),
            };
            out.push((Tok::Var(v), pos));
            i += 2;
            col += 2;
            continue;
        }
        return syntax(pos, format!("unexpected character {c:?}"));
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    let (_, pos) = self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (Tok::Num(n), pos) => {
                let e = n
                    .to_u32()
                    .ok_or_else(|| ExprError::Syntax { pos, msg: format!("exponent {n} is too large") })?;
                Ok(Expr::Pow(Box::new(base), e))
            }
            (t, pos) => syntax(pos, format!("expected a non-negative integer exponent, found {t}")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.bump() {
            (Tok::Num(n), _) => Ok(Expr::Num(n)),
            (Tok::Var(v), pos) => Ok(Expr::Var(v, pos)),
            (Tok::LParen, open) => {
                let e = self.expr()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(e),
                    (t, pos) => syntax(pos, format!("expected ')' to close the '(' at {open}, found {t}")),
                }
            }
            (t, pos) => syntax(pos, format!("expected a number, variable or '(', found {t}")),
        }
    }
}

/// Parses text into an expression tree.
pub fn parse_expression(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => syntax(p.pos(), format!("unexpected {t}")),
    }
}

/// Values an expression can elaborate into.
trait Algebra: Sized + Clone {
    fn constant(n: usize, c: Rational) -> Self;
    fn variable(n: usize, v: Var, pos: Pos) -> Result<Self, ExprError>;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// The value as an `h`-free function of `x`, if it is one.
    fn as_coefficient(&self) -> Option<RationalFunction>;
    fn left_divide(&self, c: &RationalFunction) -> Self;
}

fn check_index(n: usize, v: Var, pos: Pos) -> Result<usize, ExprError> {
    let i = match v {
        Var::X(i) | Var::P(i) | Var::D(i) => i,
        Var::H => return Ok(0),
    };
    if i == 0 || i > n {
        return Err(ExprError::Index {
            pos,
            msg: format!("{v} is outside dimension {n}"),
        });
    }
    Ok(i - 1)
}

impl Algebra for Symbol {
    fn constant(n: usize, c: Rational) -> Self {
        Symbol::from_coefficient(HBarScalar::constant(n, c))
    }

    fn variable(n: usize, v: Var, pos: Pos) -> Result<Self, ExprError> {
        let i = check_index(n, v, pos)?;
        match v {
            Var::X(_) => Ok(Symbol::x(n, i)),
            Var::P(_) => Ok(Symbol::xi(n, i)),
            Var::H => Ok(Symbol::h(n)),
            Var::D(_) => syntax(pos, format!("{v} is an operator variable; symbols use p1..p9")),
        }
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn as_coefficient(&self) -> Option<RationalFunction> {
        let n = self.nvars();
        match self.len() {
            0 => Some(RationalFunction::zero(n)),
            1 => {
                let (m, c) = self.terms().next()?;
                if m.is_one() {
                    c.as_rf()
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn left_divide(&self, c: &RationalFunction) -> Self {
        self.mul_rf(&c.inverse().expect("checked nonzero"))
    }
}

impl Algebra for DiffOperator {
    fn constant(n: usize, c: Rational) -> Self {
        let z = Rational::zero();
        DiffOperator::multiplication(HBarScalar::constant(n, c), z.clone(), z)
    }

    fn variable(n: usize, v: Var, pos: Pos) -> Result<Self, ExprError> {
        let i = check_index(n, v, pos)?;
        let z = Rational::zero();
        match v {
            Var::X(_) => Ok(DiffOperator::multiplication(
                HBarScalar::from_poly(Polynomial::var(n, i)),
                z.clone(),
                z,
            )),
            Var::D(_) => Ok(DiffOperator::partial(n, i, z)),
            Var::H => Ok(DiffOperator::multiplication(HBarScalar::h_pow(n, 1), z.clone(), z)),
            Var::P(_) => syntax(pos, format!("{v} is a symbol variable; operators use d1..d9")),
        }
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self.compose_unchecked(other)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn as_coefficient(&self) -> Option<RationalFunction> {
        match self.order() {
            None => Some(RationalFunction::zero(self.nvars())),
            Some(0) => self.coefficient(&equiquant_core::exact::Monomial::one(self.nvars())).as_rf(),
            _ => None,
        }
    }

    fn left_divide(&self, c: &RationalFunction) -> Self {
        self.mul_rf(&c.inverse().expect("checked nonzero"))
    }
}

fn elaborate<A: Algebra>(e: &Expr, n: usize) -> Result<A, ExprError> {
    match e {
        Expr::Num(v) => Ok(A::constant(n, Rational::from_integer(v.clone()))),
        Expr::Var(v, pos) => A::variable(n, *v, *pos),
        Expr::Neg(a) => Ok(elaborate::<A>(a, n)?.neg()),
        Expr::Add(a, b) => Ok(elaborate::<A>(a, n)?.add(&elaborate(b, n)?)),
        Expr::Sub(a, b) => Ok(elaborate::<A>(a, n)?.sub(&elaborate(b, n)?)),
        Expr::Mul(a, b) => Ok(elaborate::<A>(a, n)?.mul(&elaborate(b, n)?)),
        Expr::Div(a, b, pos) => {
            let num = elaborate::<A>(a, n)?;
            let den = elaborate::<A>(b, n)?;
            let Some(c) = den.as_coefficient() else {
                return syntax(*pos, "division is only by functions of x1..x9");
            };
            if c.is_zero() {
                return Err(ExprError::Domain {
                    pos: *pos,
                    msg: "division by zero".into(),
                });
            }
            Ok(num.left_divide(&c))
        }
        Expr::Pow(a, k) => {
            let base = elaborate::<A>(a, n)?;
            let mut out = A::constant(n, Rational::from_int(1));
            for _ in 0..*k {
                out = out.mul(&base);
            }
            Ok(out)
        }
    }
}

pub fn parse_symbol(text: &str, n: usize) -> Result<Symbol, ExprError> {
    elaborate(&parse_expression(text)?, n)
}

/// Parses an operator expression and normal-orders it; the result acts
/// between densities of weights `lambda` and `mu`.
pub fn parse_operator(text: &str, n: usize, lambda: Rational, mu: Rational) -> Result<DiffOperator, ExprError> {
    let op: DiffOperator = elaborate(&parse_expression(text)?, n)?;
    Ok(op.with_weights(lambda, mu))
}

/// Parses an `h`-free function of `x`.
pub fn parse_function(text: &str, n: usize) -> Result<RationalFunction, ExprError> {
    let s = parse_symbol(text, n)?;
    s.as_coefficient().ok_or_else(|| ExprError::Syntax {
        pos: Pos { line: 1, col: 1 },
        msg: format!("{text:?} is not a function of x1..x{n} alone"),
    })
}

pub fn parse_polynomial(text: &str, n: usize) -> Result<Polynomial, ExprError> {
    let f = parse_function(text, n)?;
    f.as_polynomial().cloned().ok_or_else(|| ExprError::Syntax {
        pos: Pos { line: 1, col: 1 },
        msg: format!("{text:?} is not a polynomial"),
    })
}

/// Parses a rational number such as `3`, `-1/2`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    Rational::parse(text.trim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use equiquant_core::exact::Monomial;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from_ratio(a, b)
    }

    #[test]
    fn symbol_example() {
        let s = parse_symbol("p1^2 + x1*p2", 2).unwrap();
        let expect = &(&Symbol::xi(2, 0) * &Symbol::xi(2, 0)) + &(&Symbol::x(2, 0) * &Symbol::xi(2, 1));
        assert_eq!(s, expect);
    }

    #[test]
    fn operator_products_are_normal_ordered() {
        let op = parse_operator("d1*x1", 1, q(0, 1), q(0, 1)).unwrap();
        let mut expect = DiffOperator::zero(1, q(0, 1), q(0, 1));
        expect.add_term(Monomial::var(1, 0), HBarScalar::from_poly(Polynomial::var(1, 0)));
        expect.add_term(Monomial::one(1), HBarScalar::one(1));
        assert_eq!(op, expect);
    }

    #[test]
    fn rational_function_coefficient() {
        let s = parse_symbol("(x1+1)/(x1-1) * p1", 1).unwrap();
        let c = s.coefficient(&Monomial::var(1, 0)).as_rf().unwrap();
        assert_eq!(c.denominator(), &(&Polynomial::var(1, 0) - &Polynomial::one(1)));
    }

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(parse_symbol("-x1^2", 1).unwrap(), -&(&Symbol::x(1, 0) * &Symbol::x(1, 0)));
        assert_eq!(parse_symbol("2 - 3 - 4", 1).unwrap(), Symbol::from_coefficient(HBarScalar::constant(1, q(-5, 1))));
        assert_eq!(parse_symbol("3/2*x1", 1).unwrap(), Symbol::x(1, 0).scale(&q(3, 2)));
        assert_eq!(parse_symbol("6/4/3", 1).unwrap(), Symbol::from_coefficient(HBarScalar::constant(1, q(1, 2))));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expression("x1 + * p1") {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, Pos { line: 1, col: 6 }),
            other => panic!("{other:?}"),
        }
        match parse_expression("x1 +\n  (p1") {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, Pos { line: 2, col: 6 }),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expression("x1 $"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expression("y1"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_symbol("x3", 2), Err(ExprError::Index { .. })));
        assert!(matches!(parse_symbol("x0", 2), Err(ExprError::Index { .. })));
        assert!(matches!(parse_symbol("d1", 2), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_operator("p1", 2, q(0, 1), q(0, 1)), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_symbol("x1/p1", 2), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_symbol("x1/h", 2), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_symbol("x1/(x2-x2)", 2), Err(ExprError::Domain { .. })));
    }

    #[test]
    fn display_keeps_structure() {
        for text in ["x1 - (x2 - p1)", "-(x1 + 1)^2", "x1/(x2*x3)", "(x1*x2)^3 + -h"] {
            let e = parse_expression(text).unwrap();
            let again = parse_expression(&e.to_string()).unwrap();
            assert_eq!(parse_symbol(&e.to_string(), 3).unwrap(), parse_symbol(text, 3).unwrap());
            assert_eq!(again.to_string(), e.to_string());
        }
    }

    #[test]
    fn max_index_scan() {
        assert_eq!(parse_expression("x1*p3 + h").unwrap().max_index(), 3);
        assert_eq!(parse_expression("2").unwrap().max_index(), 0);
    }
}
