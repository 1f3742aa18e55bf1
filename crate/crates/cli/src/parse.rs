//! Expression grammar for polynomials and maps.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)*        (left-associative)
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Identifiers are `x` (one variable) or `x1..xn`, plus the optional
//! parameter symbol. Juxtaposition such as `3x` is rejected.

use ffkoopman::{Error as CoreError, Poly, PolyMap, RationalFunctionField, ScalarField};
use thiserror::Error;

/// Bound on the degree in the parameter of any subexpression. Parameter
/// exponents are never reduced, so this is what keeps inputs tractable.
pub const MAX_PARAM_DEGREE: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at column {}: expected {expected}", .position + 1)]
    Syntax { position: usize, expected: String },
    #[error("unknown variable `{name}` at column {}", .position + 1)]
    UnknownVariable { name: String, position: usize },
    #[error("negative exponent at column {}", .position + 1)]
    NegativeExponent { position: usize },
    #[error("exponent at column {} is too large (parameter degree is capped at 65536)", .position + 1)]
    ExponentTooLarge { position: usize },
    #[error(transparent)]
    Core(#[from] CoreError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(chars[start..i].iter().map(|t| t.1).collect()), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().map(|t| t.1).collect()), pos));
        } else if "+-*^()".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
        } else {
            return Err(ParseError::Syntax { position: pos, expected: "a number, variable, operator or parenthesis".into() });
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Num(String),
    Var(usize),
    Param,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u64),
}

impl Expr {
    /// Upper bound on the degree in the parameter.
    fn param_degree(&self) -> u128 {
        match self {
            Expr::Param => 1,
            Expr::Num(_) | Expr::Var(_) => 0,
            Expr::Add(a, b) | Expr::Sub(a, b) => a.param_degree().max(b.param_degree()),
            Expr::Mul(a, b) => a.param_degree().saturating_add(b.param_degree()),
            Expr::Neg(a) => a.param_degree(),
            Expr::Pow(a, e) => a.param_degree().saturating_mul(*e as u128),
        }
    }

    fn has_param(&self) -> bool {
        self.param_degree() > 0
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    nvars: usize,
    param: Option<&'a str>,
}

const AFTER_OPERAND: &str = "`+`, `-`, `*`, `^`, `)` or end of input";
const OPERAND: &str = "a number, variable or `(`";

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == &Tok::Op('*') {
            let pos = self.pos();
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            if lhs.param_degree() > MAX_PARAM_DEGREE {
                return Err(ParseError::ExponentTooLarge { position: pos });
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == &Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == &Tok::Op('^') {
            self.bump();
            let pos = self.pos();
            let e = match self.bump().0 {
                Tok::Num(digits) => digits.parse::<u64>().map_err(|_| ParseError::ExponentTooLarge { position: pos })?,
                Tok::Op('-') => return Err(ParseError::NegativeExponent { position: pos }),
                _ => return Err(ParseError::Syntax { position: pos, expected: "a non-negative integer exponent".into() }),
            };
            base = Expr::Pow(Box::new(base), e);
            if base.param_degree() > MAX_PARAM_DEGREE {
                return Err(ParseError::ExponentTooLarge { position: pos });
            }
        }
        // juxtaposition like `3x` or `x(x+1)` lands here
        match self.peek() {
            Tok::Num(_) | Tok::Ident(_) | Tok::Op('(') => {
                Err(ParseError::Syntax { position: self.pos(), expected: AFTER_OPERAND.into() })
            }
            _ => Ok(base),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump().0 {
            Tok::Num(d) => Ok(Expr::Num(d)),
            Tok::Ident(name) => self.ident(name, pos),
            Tok::Op('(') => {
                let inner = self.expr()?;
                let close = self.pos();
                match self.bump().0 {
                    Tok::Op(')') => Ok(inner),
                    _ => Err(ParseError::Syntax { position: close, expected: "`)`".into() }),
                }
            }
            _ => Err(ParseError::Syntax { position: pos, expected: OPERAND.into() }),
        }
    }

    fn ident(&self, name: String, position: usize) -> Result<Expr, ParseError> {
        if Some(name.as_str()) == self.param {
            return Ok(Expr::Param);
        }
        if self.nvars == 1 && name == "x" {
            return Ok(Expr::Var(0));
        }
        if let Some(idx) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
            if (1..=self.nvars).contains(&idx) && !name[1..].starts_with('0') {
                return Ok(Expr::Var(idx - 1));
            }
        }
        Err(ParseError::UnknownVariable { name, position })
    }
}

fn parse_ast(src: &str, nvars: usize, param: Option<&str>) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0, nvars, param };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(ParseError::Syntax { position: p.pos(), expected: AFTER_OPERAND.into() }),
    }
}

fn literal<K: ScalarField>(field: &K, digits: &str) -> K::Elem {
    let p = field.characteristic() as u128;
    let v = digits.bytes().fold(0u128, |acc, b| (acc * 10 + (b - b'0') as u128) % p);
    field.from_u64(v as u64)
}

fn build<K: ScalarField>(e: &Expr, field: &K, nvars: usize, param: &Option<K::Elem>) -> Result<Poly<K>, ParseError> {
    Ok(match e {
        Expr::Num(d) => Poly::constant(field.clone(), nvars, literal(field, d)),
        Expr::Var(i) => Poly::var(field.clone(), nvars, *i),
        Expr::Param => Poly::constant(field.clone(), nvars, param.clone().expect("parameter resolved by the parser")),
        Expr::Add(a, b) => build(a, field, nvars, param)?.checked_add(&build(b, field, nvars, param)?)?,
        Expr::Sub(a, b) => build(a, field, nvars, param)?.checked_sub(&build(b, field, nvars, param)?)?,
        Expr::Mul(a, b) => build(a, field, nvars, param)?.checked_mul(&build(b, field, nvars, param)?)?,
        Expr::Neg(a) => -&build(a, field, nvars, param)?,
        Expr::Pow(a, k) => build(a, field, nvars, param)?.pow(*k),
    })
}

/// Parses one polynomial over `F_p`. Exponents of variables are reduced.
pub fn parse_poly<K: ScalarField>(src: &str, field: &K, nvars: usize) -> Result<Poly<K>, ParseError> {
    build(&parse_ast(src, nvars, None)?, field, nvars, &None)
}

/// Parses one polynomial whose coefficients may involve `symbol`.
pub fn parse_param_poly(
    src: &str,
    field: &RationalFunctionField,
    nvars: usize,
) -> Result<Poly<RationalFunctionField>, ParseError> {
    let ast = parse_ast(src, nvars, Some(field.symbol()))?;
    build(&ast, field, nvars, &Some(field.param()))
}

/// Whether any `;`-separated component of `src` mentions `symbol`.
pub fn mentions_param(src: &str, nvars: usize, symbol: &str) -> Result<bool, ParseError> {
    for c in split_components(src) {
        if parse_ast(c, nvars, Some(symbol))?.has_param() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Splits on `;` and parses each component.
pub fn split_components(src: &str) -> Vec<&str> {
    src.split(';').map(str::trim).collect()
}

pub fn parse_map<K: ScalarField>(src: &str, field: &K, nvars: usize) -> Result<PolyMap<K>, ParseError> {
    let comps = split_components(src).into_iter().map(|c| parse_poly(c, field, nvars)).collect::<Result<_, _>>()?;
    Ok(PolyMap::new(comps)?)
}

pub fn parse_param_map(
    src: &str,
    field: &RationalFunctionField,
    nvars: usize,
) -> Result<PolyMap<RationalFunctionField>, ParseError> {
    let comps = split_components(src).into_iter().map(|c| parse_param_poly(c, field, nvars)).collect::<Result<_, _>>()?;
    Ok(PolyMap::new(comps)?)
}
