//! Expression front-end: a recursive-descent parser for maps given as
//! formulas over `x1..xn`, plus a canonical printer.
//!
//! Grammar (left associative, unary minus binds at factor level):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' uint)?
//! base   := number | var | func '(' expr ')' | '(' expr ')'
//! ```

use std::fmt;

use num_traits::Zero;

use crate::scalar::{parse_rat, Elementary, Rat};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Rational literal. A division of two integer literals folds to one
    /// of these at parse time, so `3/2` is the exact fraction.
    Num(Rat),
    /// 0-based variable index; `x1` parses to `Var(0)`.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Func(Elementary, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for ParseError {}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser::new(text);
    let expr = parser.expr()?;
    parser.skip_ws();
    if let Some(c) = parser.peek() {
        return Err(parser.error(format!("unexpected character `{c}`")));
    }
    Ok(expr)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            text,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: String) -> ParseError {
        let mut line = 1;
        let mut col = 1;
        for (i, c) in self.text.chars().enumerate() {
            if i == self.pos {
                break;
            }
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        ParseError { line, col, message }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some('/') => {
                    self.bump();
                    let rhs = self.factor()?;
                    // Fold literal over literal into an exact rational.
                    lhs = match (&lhs, &rhs) {
                        (Expr::Num(a), Expr::Num(b)) if !b.is_zero() => Expr::Num(a / b),
                        _ => Expr::Div(Box::new(lhs), Box::new(rhs)),
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        if self.peek() == Some('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.bump();
            }
            if self.pos == start {
                return Err(self.error("expected a non-negative integer exponent".into()));
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let exp: u32 = digits
                .parse()
                .map_err(|_| self.error("exponent too large".into()))?;
            return Ok(Expr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                self.skip_ws();
                if self.bump() != Some(')') {
                    return Err(self.error("expected `)`".into()));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected character `{c}`"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.bump();
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        match parse_rat(&digits) {
            Some(r) => Ok(Expr::Num(r)),
            None => Err(self.error(format!("malformed number `{digits}`"))),
        }
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
            self.bump();
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(idx) = rest.parse::<usize>() {
                if idx >= 1 {
                    return Ok(Expr::Var(idx - 1));
                }
            }
        }
        let func = match name.as_str() {
            "sin" => Some(Elementary::Sin),
            "cos" => Some(Elementary::Cos),
            "exp" => Some(Elementary::Exp),
            "log" => Some(Elementary::Log),
            "sqrt" => Some(Elementary::Sqrt),
            _ => None,
        };
        if let Some(func) = func {
            self.skip_ws();
            if self.bump() != Some('(') {
                return Err(self.error(format!("expected `(` after `{name}`")));
            }
            let arg = self.expr()?;
            self.skip_ws();
            if self.bump() != Some(')') {
                return Err(self.error("expected `)`".into()));
            }
            return Ok(Expr::Func(func, Box::new(arg)));
        }
        Err(self.error(format!("unknown identifier `{name}`")))
    }
}

impl Expr {
    /// Largest variable index used, as a 1-based count (0 for constants).
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    /// Replaces variable `i` with `subs[i]`; used to compose maps
    /// symbolically. Variables beyond `subs` are left in place.
    pub fn substitute(&self, subs: &[Expr]) -> Expr {
        match self {
            Expr::Num(r) => Expr::Num(r.clone()),
            Expr::Var(i) => subs.get(*i).cloned().unwrap_or(Expr::Var(*i)),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(subs))),
            Expr::Add(a, b) => Expr::Add(Box::new(a.substitute(subs)), Box::new(b.substitute(subs))),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.substitute(subs)), Box::new(b.substitute(subs))),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.substitute(subs)), Box::new(b.substitute(subs))),
            Expr::Div(a, b) => Expr::Div(Box::new(a.substitute(subs)), Box::new(b.substitute(subs))),
            Expr::Pow(a, e) => Expr::Pow(Box::new(a.substitute(subs)), *e),
            Expr::Func(f, a) => Expr::Func(*f, Box::new(a.substitute(subs))),
        }
    }
}

// Canonical printer; fully parenthesized so parse(print(e)) == e.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => {
                if r.denom() == &num::BigInt::from(1) {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "({}/{})", r.numer(), r.denom())
                }
            }
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, e) => write!(f, "{a}^{e}"),
            Expr::Func(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn basic_shapes() {
        let e = parse("x1 + x1^2").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Var(0)),
                Box::new(Expr::Pow(Box::new(Expr::Var(0)), 2))
            )
        );
    }

    #[test]
    fn literal_division_folds_to_rational() {
        let e = parse("3/2*x2").unwrap();
        assert_eq!(
            e,
            Expr::Mul(Box::new(Expr::Num(rat(3, 2))), Box::new(Expr::Var(1)))
        );
    }

    #[test]
    fn syntax_error_reports_column() {
        let err = parse("sin(").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 5);
    }

    #[test]
    fn unknown_identifier() {
        let err = parse("foo + 1").unwrap_err();
        assert!(err.message.contains("foo"));
    }

    #[test]
    fn unary_minus_binds_below_power() {
        // -x1^2 is -(x1^2)
        let e = parse("-x1^2").unwrap();
        assert_eq!(
            e,
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var(0)), 2)))
        );
    }

    #[test]
    fn print_parse_roundtrip() {
        for text in [
            "x1 + x1^2",
            "3/2*x2 - sin(x1)",
            "-(x1*x2)/(1+x1)",
            "sqrt(1 + x2^3) * exp(x1)",
            "1.5*x1 - 2",
        ] {
            let once = parse(text).unwrap();
            let twice = parse(&once.to_string()).unwrap();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn decimal_literal_is_exact() {
        let e = parse("0.25").unwrap();
        assert_eq!(e, Expr::Num(rat(1, 4)));
    }
}
