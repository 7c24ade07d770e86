//! Polynomial expression parsing and exact expansion.
//!
//! Grammar: integer literals (arbitrary precision), the variable `x`,
//! operators `+ - * ^` with non-negative integer exponents, and parentheses.
//! Implicit multiplication is accepted exactly where factored notation needs
//! it: between a closing parenthesis or an exponent and a following opening
//! parenthesis, so `(x-1)^2(x-2)^3` parses. All other adjacency requires
//! an explicit `*`.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

/// Hard cap on exponents and on expanded coefficient vectors.
const EXPONENT_LIMIT: u32 = 100_000;
const COEFF_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("expansion exceeds {COEFF_LIMIT} coefficients")]
    TooLarge,
}

fn syntax(position: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        position,
        message: message.into(),
    }
}

/// Abstract syntax of a polynomial expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyExpr {
    Const(BigInt),
    Var,
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

impl PolyExpr {
    /// Expands to a dense coefficient vector over Z (constant term first,
    /// trailing zeros trimmed, never empty). No modular reduction happens
    /// here: expansion is exact.
    pub fn expand(&self) -> Result<Vec<BigInt>, ExprError> {
        let mut v = self.expand_inner()?;
        while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        Ok(v)
    }

    fn expand_inner(&self) -> Result<Vec<BigInt>, ExprError> {
        Ok(match self {
            PolyExpr::Const(c) => vec![c.clone()],
            PolyExpr::Var => vec![BigInt::zero(), BigInt::from(1)],
            PolyExpr::Neg(e) => {
                let mut v = e.expand_inner()?;
                for c in &mut v {
                    *c = -std::mem::take(c);
                }
                v
            }
            PolyExpr::Add(a, b) => combine(a.expand_inner()?, &b.expand_inner()?, false),
            PolyExpr::Sub(a, b) => combine(a.expand_inner()?, &b.expand_inner()?, true),
            PolyExpr::Mul(a, b) => convolve(&a.expand_inner()?, &b.expand_inner()?)?,
            PolyExpr::Pow(base, e) => {
                let mut acc = vec![BigInt::from(1)];
                let mut sq = base.expand_inner()?;
                let mut e = *e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = convolve(&acc, &sq)?;
                    }
                    e >>= 1;
                    if e > 0 {
                        sq = convolve(&sq, &sq)?;
                    }
                }
                acc
            }
        })
    }
}

fn combine(mut a: Vec<BigInt>, b: &[BigInt], subtract: bool) -> Vec<BigInt> {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        if subtract {
            *x -= y;
        } else {
            *x += y;
        }
    }
    a
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Result<Vec<BigInt>, ExprError> {
    let n = a.len() + b.len() - 1;
    if n > COEFF_LIMIT {
        return Err(ExprError::TooLarge);
    }
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    X,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        match bytes[i] {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i]
                    .parse()
                    .expect("digit run parses as an integer");
                toks.push((Tok::Num(n), start));
            }
            b'x' | b'X' => {
                toks.push((Tok::X, start));
                i += 1;
            }
            b'+' => {
                toks.push((Tok::Plus, start));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, start));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, start));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, start));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, start));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, start));
                i += 1;
            }
            c => {
                return Err(syntax(
                    start,
                    format!("unexpected character '{}'", c as char),
                ))
            }
        }
    }
    Ok(toks)
}

/// What a factor ended with; implicit multiplication is only legal after a
/// closing parenthesis or an exponent.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Tail {
    Paren,
    Exponent,
    Other,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<PolyExpr, ExprError> {
        let negated = if self.peek() == Some(&Tok::Minus) {
            self.advance();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negated {
            acc = PolyExpr::Neg(Box::new(acc));
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.advance();
                    acc = PolyExpr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.advance();
                    acc = PolyExpr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr, ExprError> {
        let (mut acc, mut tail) = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.advance();
                    let (f, t) = self.factor()?;
                    acc = PolyExpr::Mul(Box::new(acc), Box::new(f));
                    tail = t;
                }
                Some(Tok::LParen) if tail != Tail::Other => {
                    let (f, t) = self.factor()?;
                    acc = PolyExpr::Mul(Box::new(acc), Box::new(f));
                    tail = t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<(PolyExpr, Tail), ExprError> {
        let (base, tail) = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.advance();
            let at = self.here();
            match self.advance() {
                Some(Tok::Num(n)) => {
                    let e = u32::try_from(&n)
                        .ok()
                        .filter(|&e| e <= EXPONENT_LIMIT)
                        .ok_or_else(|| syntax(at, format!("exponent out of range (max {EXPONENT_LIMIT})")))?;
                    Ok((PolyExpr::Pow(Box::new(base), e), Tail::Exponent))
                }
                Some(Tok::Minus) => Err(syntax(at, "exponent must be a non-negative integer")),
                _ => Err(syntax(at, "expected an integer exponent after '^'")),
            }
        } else {
            Ok((base, tail))
        }
    }

    fn primary(&mut self) -> Result<(PolyExpr, Tail), ExprError> {
        let at = self.here();
        match self.advance() {
            Some(Tok::Num(n)) => Ok((PolyExpr::Const(n), Tail::Other)),
            Some(Tok::X) => Ok((PolyExpr::Var, Tail::Other)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.here();
                match self.advance() {
                    Some(Tok::RParen) => Ok((inner, Tail::Paren)),
                    _ => Err(syntax(close, "expected ')'")),
                }
            }
            Some(_) => Err(syntax(at, "expected a number, 'x', or '('")),
            None => Err(syntax(at, "unexpected end of expression")),
        }
    }
}

/// Parses an expression into its syntax tree.
pub fn parse_poly(text: &str) -> Result<PolyExpr, ExprError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = parser.expr()?;
    if parser.pos < parser.toks.len() {
        return Err(syntax(
            parser.here(),
            "unexpected token (adjacent factors need '*')",
        ));
    }
    Ok(e)
}

/// Parse-and-expand in one step.
pub fn expand_poly(text: &str) -> Result<Vec<BigInt>, ExprError> {
    parse_poly(text)?.expand()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn expands_running_example() {
        let got = expand_poly("x^10 - 10*x + 738").unwrap();
        let mut expected = vec![0i64; 11];
        expected[0] = 738;
        expected[1] = -10;
        expected[10] = 1;
        assert_eq!(got, ints(&expected));
    }

    #[test]
    fn bare_variable() {
        assert_eq!(expand_poly("x").unwrap(), ints(&[0, 1]));
    }

    #[test]
    fn factored_quintic_round_trip() {
        let factored = expand_poly("(x-1)^2*(x-2)^3").unwrap();
        assert_eq!(factored, ints(&[-8, 28, -38, 25, -8, 1]));
        // Implicit multiplication between ) or exponent and ( is accepted.
        assert_eq!(expand_poly("(x-1)^2(x-2)^3").unwrap(), factored);
        assert_eq!(
            expand_poly("(x-1)(x-2)").unwrap(),
            expand_poly("(x-1)*(x-2)").unwrap()
        );
    }

    #[test]
    fn timing_table_polynomial_expands_to_degree_19() {
        let got = expand_poly("(x-1234)^3(x-7193)^4(x-2030)^12").unwrap();
        assert_eq!(got.len(), 20);
        // Independent spot checks: leading term and constant term.
        assert_eq!(got[19], BigInt::from(1));
        let expected_const = BigInt::from(-1234).pow(3)
            * BigInt::from(-7193).pow(4)
            * BigInt::from(-2030).pow(12);
        assert_eq!(got[0], expected_const);
    }

    #[test]
    fn unary_minus_and_parenthesized_negatives() {
        assert_eq!(expand_poly("-x + 1").unwrap(), ints(&[1, -1]));
        assert_eq!(expand_poly("(-8)").unwrap(), ints(&[-8]));
        assert_eq!(expand_poly("x^2 + (-3)*x").unwrap(), ints(&[0, -3, 1]));
    }

    #[test]
    fn cancellation_trims_degree() {
        assert_eq!(expand_poly("(x-1)*(x+1) - x^2").unwrap(), ints(&[-1]));
        assert_eq!(expand_poly("x - x").unwrap(), ints(&[0]));
    }

    #[test]
    fn exponent_zero_and_one() {
        assert_eq!(expand_poly("(x+1)^0").unwrap(), ints(&[1]));
        assert_eq!(expand_poly("x^1").unwrap(), ints(&[0, 1]));
    }

    #[test]
    fn rejects_bad_syntax_with_positions() {
        // Number-parenthesis adjacency requires '*'.
        let err = parse_poly("738(x+1)").unwrap_err();
        assert!(matches!(err, ExprError::Syntax { position: 3, .. }), "{err}");

        let err = parse_poly("2x").unwrap_err();
        assert!(matches!(err, ExprError::Syntax { position: 1, .. }), "{err}");

        let err = parse_poly("x^-2").unwrap_err();
        assert!(err.to_string().contains("non-negative"), "{err}");

        assert!(parse_poly("x^(2)").is_err());
        assert!(parse_poly("(x+1").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x + @").is_err());
        assert!(parse_poly("x^99999999999").is_err());
    }
}
