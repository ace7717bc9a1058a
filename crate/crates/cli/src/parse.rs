//! Polynomial expressions over `x`, `y`, `z` with exact rational literals.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := base ('^' nat)?
//! base   := rational | var | '(' expr ')'
//! ```
//!
//! A missing `*` before a variable or `(` is implicit multiplication (`2y`,
//! `3x(y+1)`).
//! Literals are integers, decimals (`0.25`) and fractions written without
//! spaces (`1/2`); any other `/` is rejected.

use std::fmt;

use liouville::{Jet, Rational, TrivarPoly};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub enum ExprAst {
    Num(Rational),
    Var(usize),
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
}

const VARS: [char; 3] = ['x', 'y', 'z'];

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Num(r) => write!(f, "({})", r),
            ExprAst::Var(i) => write!(f, "{}", VARS[*i]),
            ExprAst::Neg(a) => write!(f, "(-{})", a),
            ExprAst::Add(a, b) => write!(f, "({} + {})", a, b),
            ExprAst::Sub(a, b) => write!(f, "({} - {})", a, b),
            ExprAst::Mul(a, b) => write!(f, "{}*{}", a, b),
            ExprAst::Pow(a, k) => match **a {
                ExprAst::Var(_) | ExprAst::Num(_) => write!(f, "{}^{}", a, k),
                _ => write!(f, "({})^{}", a, k),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: match self.peek() {
                Some(c) => format!("'{}'", c),
                None => "end of input".into(),
            },
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        self.skip_ws();
        let neg = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if neg {
            ExprAst::Neg(Box::new(first))
        } else {
            first
        };
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = ExprAst::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    acc = ExprAst::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = ExprAst::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(c) if c == '(' || VARS.contains(&c) => {
                    acc = ExprAst::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.base()?;
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error(&["natural exponent"]));
        }
        let k = digits.parse::<u32>().map_err(|_| ParseError {
            offset: start,
            expected: vec!["exponent below 2^32".into()],
            found: digits.to_string(),
        })?;
        Ok(ExprAst::Pow(Box::new(base), k))
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn base(&mut self) -> Result<ExprAst, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error(&["')'", "operator"]));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if VARS.contains(&c) => {
                self.pos += 1;
                Ok(ExprAst::Var(VARS.iter().position(|&v| v == c).unwrap()))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.literal().map(ExprAst::Num),
            _ => Err(self.error(&["number", "variable", "'('"])),
        }
    }

    fn literal(&mut self) -> Result<Rational, ParseError> {
        let start = self.pos;
        let int = self.digits();
        let mut value = if int.is_empty() {
            Rational::zero()
        } else {
            Rational::from_integer(int.parse::<BigInt>().unwrap())
        };
        if self.peek() == Some('.') {
            self.pos += 1;
            let frac = self.digits();
            if int.is_empty() && frac.is_empty() {
                return Err(ParseError {
                    offset: start,
                    expected: vec!["digits".into()],
                    found: "'.'".into(),
                });
            }
            if !frac.is_empty() {
                let den = num_traits::pow(BigInt::from(10), frac.len());
                value += Rational::new(frac.parse::<BigInt>().unwrap(), den);
            }
            return Ok(value);
        }
        if self.peek() == Some('/') {
            let slash = self.pos;
            self.pos += 1;
            let den = self.digits();
            if den.is_empty() {
                self.pos = slash;
                return Err(self.error(&["denominator digits (division is not supported)"]));
            }
            let den = den.parse::<BigInt>().unwrap();
            if den.is_zero() {
                return Err(ParseError {
                    offset: slash + 1,
                    expected: vec!["nonzero denominator".into()],
                    found: "0".into(),
                });
            }
            value /= Rational::from_integer(den);
        }
        Ok(value)
    }
}

pub fn parse_expr(src: &str) -> Result<ExprAst, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(e),
        Some('/') => Err(p.error(&["operator (division is not supported)"])),
        Some(_) => Err(p.error(&["operator", "end of input"])),
    }
}

impl ExprAst {
    pub fn to_poly(&self) -> TrivarPoly {
        match self {
            ExprAst::Num(r) => TrivarPoly::constant(r.clone()),
            ExprAst::Var(i) => TrivarPoly::var(*i),
            ExprAst::Neg(a) => -&a.to_poly(),
            ExprAst::Add(a, b) => &a.to_poly() + &b.to_poly(),
            ExprAst::Sub(a, b) => &a.to_poly() - &b.to_poly(),
            ExprAst::Mul(a, b) => &a.to_poly() * &b.to_poly(),
            ExprAst::Pow(a, k) => a.to_poly().pow(*k),
        }
    }
}

/// Any polynomial in `x`, `y`, `z`.
pub fn parse_poly(src: &str) -> Result<TrivarPoly, ParseError> {
    Ok(parse_expr(src)?.to_poly())
}

#[derive(Debug, thiserror::Error)]
pub enum GermError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("a germ takes a single variable, found {0}")]
    SeveralVariables(String),
}

/// A univariate germ in `x` or `y`, truncated at `order`.
pub fn parse_germ(src: &str, order: usize) -> Result<Jet, GermError> {
    let p = parse_poly(src)?;
    let used: Vec<usize> = (0..3).filter(|&v| p.depends_on(v)).collect();
    match used.as_slice() {
        [] => Ok(p.to_univariate(0, order).expect("constant").truncate(order)),
        [v] if *v < 2 => Ok(p
            .to_univariate(*v, order)
            .expect("univariate")
            .truncate(order)),
        _ => Err(GermError::SeveralVariables(
            used.iter()
                .map(|&v| VARS[v].to_string())
                .collect::<Vec<_>>()
                .join(", "),
        )),
    }
}

/// A rational number written as an expression without variables.
pub fn parse_rational(src: &str) -> Result<Rational, GermError> {
    let p = parse_poly(src)?;
    if (0..3).any(|v| p.depends_on(v)) {
        return Err(GermError::SeveralVariables("a variable in a number".into()));
    }
    Ok(p.coeff(&[0, 0, 0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn literals() {
        assert_eq!(parse_rational("1/2").unwrap(), q(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-3").unwrap(), q(-3, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(Rational::one() == parse_rational("2/2").unwrap());
    }

    #[test]
    fn implicit_multiplication() {
        assert_eq!(parse_poly("2y").unwrap(), parse_poly("2*y").unwrap());
        assert_eq!(
            parse_poly("3x(y+1)").unwrap(),
            parse_poly("3*x*y + 3*x").unwrap()
        );
        assert_eq!(
            parse_poly("1/2 y^2").unwrap(),
            parse_poly("1/2*y^2").unwrap()
        );
    }

    #[test]
    fn division_rejected() {
        let e = parse_expr("y/2").unwrap_err();
        assert_eq!(e.offset, 1);
        let e = parse_expr("1/y").unwrap_err();
        assert_eq!(e.offset, 1);
        assert!(parse_expr("1/0").is_err());
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_expr("y + * 2").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.expected.contains(&"variable".to_string()));
        let e = parse_expr("(y + 1").unwrap_err();
        assert_eq!(e.offset, 6);
        assert_eq!(e.found, "end of input");
        assert!(parse_expr("y^-1").is_err());
        assert!(parse_expr("y^1.5").is_err());
        assert!(parse_expr("w").is_err());
    }

    #[test]
    fn germs() {
        let j = parse_germ("2*y + y^3", 5).unwrap();
        assert_eq!(j, Jet::from_ints(5, &[0, 2, 0, 1]));
        assert_eq!(parse_germ("2*x + x^3", 5).unwrap(), j);
        assert_eq!(parse_germ("y^7", 5).unwrap(), Jet::zero(5));
        assert!(parse_germ("x*y", 5).is_err());
        assert_eq!(parse_germ("1", 3).unwrap(), Jet::one(3));
    }
}
