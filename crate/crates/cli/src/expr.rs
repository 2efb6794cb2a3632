//! Rational-function expressions: integers, one single-letter variable,
//! unary minus, `+ - * /` and `^` with an integer exponent.
//!
//! Precedence from tightest: `^`, unary `-`, `* /`, `+ -`. Implicit
//! multiplication is not supported. Positions are character offsets.

use std::collections::BTreeSet;

use num::BigInt;
use pfuniform::exact::{Rational, RationalFunction};
use thiserror::Error;

/// Largest accepted exponent magnitude.
pub const MAX_EXPONENT: i64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: expected {}", expected.join(" or "))]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("division by zero at position {0}")]
    DivisionByZero(usize),
    #[error("exponent at position {0} exceeds {MAX_EXPONENT} in absolute value")]
    ExponentTooLarge(usize),
    #[error("variable {found} at position {position}, expected {expected}")]
    UnexpectedVariable { found: char, expected: char, position: usize },
    #[error("expression mixes the variables {0} and {1}")]
    TwoVariables(char, char),
    #[error("expected a constant, found the variable {0}")]
    NotConstant(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var { name: char, position: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `position` of the `/` sign.
    Div(Box<Expr>, Box<Expr>, usize),
    /// `position` of the `^` sign.
    Pow(Box<Expr>, i64, usize),
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    expected: BTreeSet<&'static str>,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    /// Consumes `c` if it is next; records it as expected otherwise.
    fn eat(&mut self, c: char, name: &'static str) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.expected.clear();
            true
        } else {
            self.expected.insert(name);
            false
        }
    }

    fn fail(&mut self) -> ParseError {
        self.skip_ws();
        ParseError { position: self.pos, expected: self.expected.iter().copied().collect() }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+', "'+'") {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-', "'-'") {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*', "'*'") {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some('/') {
                let at = self.pos;
                self.eat('/', "'/'");
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
            } else {
                self.expected.insert("'/'");
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-', "'-'") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            let at = self.pos;
            self.eat('^', "'^'");
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e, at));
        }
        self.expected.insert("'^'");
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = self.eat('(', "'('");
        let neg = self.eat('-', "'-'");
        let digits = self.digits().ok_or_else(|| {
            self.expected.insert("integer");
            self.fail()
        })?;
        if paren && !self.eat(')', "')'") {
            return Err(self.fail());
        }
        // saturate: the evaluator rejects anything past MAX_EXPONENT
        let v = digits.parse::<i64>().unwrap_or(i64::MAX);
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            self.expected.clear();
            self.chars[start..self.pos].iter().collect()
        })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        if let Some(d) = self.digits() {
            return Ok(Expr::Int(d.parse().expect("ascii digits")));
        }
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                let position = self.pos;
                self.pos += 1;
                self.expected.clear();
                Ok(Expr::Var { name: c, position })
            }
            Some('(') => {
                self.eat('(', "'('");
                let e = self.expr()?;
                if !self.eat(')', "')'") {
                    return Err(self.fail());
                }
                Ok(e)
            }
            _ => {
                self.expected.extend(["integer", "variable", "'('", "'-'"]);
                Err(self.fail())
            }
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, expected: BTreeSet::new() };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.fail());
    }
    p.expected.clear();
    Ok(e)
}

impl Expr {
    /// Distinct variable names with the position of their first use.
    pub fn variables(&self) -> Vec<(char, usize)> {
        let mut out: Vec<(char, usize)> = Vec::new();
        self.collect_vars(&mut out);
        out.sort_by_key(|v| v.1);
        out
    }

    fn collect_vars(&self, out: &mut Vec<(char, usize)>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var { name, position } => match out.iter_mut().find(|v| v.0 == *name) {
                Some(v) => v.1 = v.1.min(*position),
                None => out.push((*name, *position)),
            },
            Expr::Neg(a) | Expr::Pow(a, _, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Evaluates with every variable read as the coordinate.
    pub fn eval(&self) -> Result<RationalFunction, ExprError> {
        Ok(match self {
            Expr::Int(n) => RationalFunction::constant(Rational::from_integer(n.clone())),
            Expr::Var { .. } => RationalFunction::x(),
            Expr::Neg(a) => -&a.eval()?,
            Expr::Add(a, b) => &a.eval()? + &b.eval()?,
            Expr::Sub(a, b) => &a.eval()? - &b.eval()?,
            Expr::Mul(a, b) => &a.eval()? * &b.eval()?,
            Expr::Div(a, b, at) => {
                let d = b.eval()?;
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero(*at));
                }
                &a.eval()? / &d
            }
            Expr::Pow(a, e, at) => {
                if e.abs() > MAX_EXPONENT {
                    return Err(ExprError::ExponentTooLarge(*at));
                }
                let base = a.eval()?;
                if *e < 0 && base.is_zero() {
                    return Err(ExprError::DivisionByZero(*at));
                }
                base.pow(*e as i32)
            }
        })
    }
}

/// A rational function in at most one variable, whatever its name. Returns
/// the variable, if any.
pub fn parse_ratfunc_var(text: &str) -> Result<(RationalFunction, Option<char>), ExprError> {
    let e = parse_expr(text)?;
    let vars = e.variables();
    if vars.len() > 1 {
        return Err(ExprError::TwoVariables(vars[0].0, vars[1].0));
    }
    Ok((e.eval()?, vars.first().map(|v| v.0)))
}

/// A rational function in at most one variable.
pub fn parse_ratfunc(text: &str) -> Result<RationalFunction, ExprError> {
    parse_ratfunc_var(text).map(|r| r.0)
}

/// A rational function in the named variable.
pub fn parse_ratfunc_in(text: &str, var: char) -> Result<RationalFunction, ExprError> {
    let e = parse_expr(text)?;
    if let Some(&(found, position)) = e.variables().iter().find(|v| v.0 != var) {
        return Err(ExprError::UnexpectedVariable { found, expected: var, position });
    }
    e.eval()
}

/// A rational constant.
pub fn parse_constant(text: &str) -> Result<Rational, ExprError> {
    let e = parse_expr(text)?;
    if let Some(&(v, _)) = e.variables().first() {
        return Err(ExprError::NotConstant(v));
    }
    Ok(e.eval()?.as_constant().expect("no variables"))
}
