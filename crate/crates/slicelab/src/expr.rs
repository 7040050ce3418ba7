//! Expression language for slice functions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := '-'* power
//! power    := atom ('^' uint)?
//! atom     := rational | blade | variable | '(' expr ')'
//! rational := uint ('/' uint)?
//! variable := 'x' uint                  e.g. x1, x2
//! blade    := 'e' digit+ | 'e{' uint (',' uint)* '}'
//! ```
//!
//! `e135` names the basis blade with indices {1,3,5} (one digit per
//! index); indices beyond 9 need the braced form `e{1,13}`. Products are
//! slice products taken in written order, so `x1^2 * (e1 + 2/3)` is the
//! one-sided monomial with its Clifford coefficient on the right.

use std::fmt;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::scalar::{rat_to_str, Rat, Scalar};
use crate::slice::SliceFunction;

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Rational(Rat),
    /// Basis blade by index mask.
    Blade(u32),
    /// 1-based variable.
    Variable(u32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number(i64),
    Variable(u32),
    Blade(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0usize;
    let read_uint = |i: &mut usize| -> Result<i64> {
        let start = *i;
        let mut v: i64 = 0;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add((bytes[*i] - b'0') as i64))
                .ok_or_else(|| err(start, "number too large"))?;
            *i += 1;
        }
        if *i == start {
            return Err(err(start, "expected digits"));
        }
        Ok(v)
    };
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let pos = i;
                let v = read_uint(&mut i)?;
                toks.push((pos, Tok::Number(v)));
            }
            'x' => {
                let pos = i;
                i += 1;
                let v = read_uint(&mut i)
                    .map_err(|_| err(pos, "expected variable index after 'x'"))?;
                if !(1..=32).contains(&v) {
                    return Err(err(pos, "variable index must be in 1..=32"));
                }
                toks.push((pos, Tok::Variable(v as u32)));
            }
            'e' => {
                let pos = i;
                i += 1;
                let mut mask = 0u32;
                let mut last = 0u32;
                if i < bytes.len() && bytes[i] == b'{' {
                    i += 1;
                    loop {
                        let v = read_uint(&mut i)
                            .map_err(|_| err(pos, "expected blade index"))?;
                        if !(1..=32).contains(&v) {
                            return Err(err(pos, "blade index must be in 1..=32"));
                        }
                        if v as u32 <= last {
                            return Err(err(pos, "blade indices must be strictly increasing"));
                        }
                        last = v as u32;
                        mask |= 1 << (v - 1);
                        if i < bytes.len() && bytes[i] == b',' {
                            i += 1;
                            continue;
                        }
                        break;
                    }
                    if i >= bytes.len() || bytes[i] != b'}' {
                        return Err(err(pos, "unclosed blade brace"));
                    }
                    i += 1;
                } else {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        let v = (bytes[i] - b'0') as u32;
                        if v == 0 {
                            return Err(err(pos, "blade index 0 is invalid"));
                        }
                        if v <= last {
                            return Err(err(pos, "blade indices must be strictly increasing"));
                        }
                        last = v;
                        mask |= 1 << (v - 1);
                        i += 1;
                    }
                    if i == start {
                        return Err(err(pos, "expected blade indices after 'e'"));
                    }
                }
                toks.push((pos, Tok::Blade(mask)));
            }
            _ => return Err(err(i, format!("unexpected character '{c}'"))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(err(pos, format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Number(v)) if (0..=u32::MAX as i64).contains(&v) => {
                    Ok(Expr::Pow(Box::new(base), v as u32))
                }
                _ => Err(err(pos, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Number(num)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Number(den)) if den != 0 => {
                            Ok(Expr::Rational(<Rat as Scalar>::from_ratio(num, den)))
                        }
                        Some(Tok::Number(_)) => Err(err(dpos, "denominator must be nonzero")),
                        _ => Err(err(dpos, "expected a denominator")),
                    }
                } else {
                    Ok(Expr::Rational(<Rat as Scalar>::from_int(num)))
                }
            }
            Some(Tok::Variable(v)) => Ok(Expr::Variable(v)),
            Some(Tok::Blade(mask)) => Ok(Expr::Blade(mask)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(err(pos, "expected a number, blade, variable, or '('")),
        }
    }
}

/// Parses an expression; positions in errors are byte offsets.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(err(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

impl Expr {
    /// Precedence for the canonical printer: Add/Sub 1, Mul 2, Neg 3,
    /// Pow 4, atoms 5.
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Rational(r) => {
                use num_traits::Signed;
                if r.is_negative() {
                    // Prints as a leading minus, exactly like a Neg node.
                    3
                } else if r.denom() == &num_bigint::BigInt::from(1) {
                    5
                } else {
                    4
                }
            }
            Expr::Blade(..) | Expr::Variable(..) => 5,
        }
    }

    fn write(&self, out: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let parens = self.prec() < min_prec;
        if parens {
            write!(out, "(")?;
        }
        match self {
            Expr::Rational(r) => {
                // Parse-normal form: negatives as an explicit minus on the
                // positive literal, integers without the unit denominator.
                use num_traits::Signed;
                if r.is_negative() {
                    write!(out, "-")?;
                    Expr::Rational(-r.clone()).write(out, 4)?;
                } else if r.denom() == &num_bigint::BigInt::from(1) {
                    write!(out, "{}", r.numer())?;
                } else {
                    write!(out, "{}", rat_to_str(r))?;
                }
            }
            Expr::Blade(mask) => {
                let idxs: Vec<u32> = (1..=32).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                if idxs.is_empty() {
                    // The identity blade reads back as the scalar one.
                    write!(out, "1")?;
                } else if idxs.iter().all(|&i| i <= 9) {
                    write!(out, "e")?;
                    for i in idxs {
                        write!(out, "{i}")?;
                    }
                } else {
                    let body = idxs
                        .iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    write!(out, "e{{{body}}}")?;
                }
            }
            Expr::Variable(v) => write!(out, "x{v}")?,
            Expr::Neg(a) => {
                write!(out, "-")?;
                a.write(out, 4)?;
            }
            Expr::Add(a, b) => {
                a.write(out, 1)?;
                write!(out, " + ")?;
                b.write(out, 2)?;
            }
            Expr::Sub(a, b) => {
                a.write(out, 1)?;
                write!(out, " - ")?;
                b.write(out, 2)?;
            }
            Expr::Mul(a, b) => {
                a.write(out, 2)?;
                write!(out, " * ")?;
                b.write(out, 3)?;
            }
            Expr::Pow(a, k) => {
                a.write(out, 5)?;
                write!(out, "^{k}")?;
            }
        }
        if parens {
            write!(out, ")")?;
        }
        Ok(())
    }

    /// Lowers the expression to a slice function over ℝ_m in n variables.
    pub fn to_function<S: Scalar>(&self, m: u32, n: u32) -> Result<SliceFunction<S>> {
        match self {
            Expr::Rational(r) => {
                SliceFunction::constant(m, n, Multivector::scalar(m, S::from_rat(r))?)
            }
            Expr::Blade(mask) => {
                SliceFunction::constant(m, n, Multivector::basis_blade(m, *mask)?)
            }
            Expr::Variable(v) => SliceFunction::variable(m, n, *v),
            Expr::Neg(a) => Ok(a.to_function::<S>(m, n)?.neg()),
            Expr::Add(a, b) => a.to_function::<S>(m, n)?.add(&b.to_function(m, n)?),
            Expr::Sub(a, b) => a.to_function::<S>(m, n)?.sub(&b.to_function(m, n)?),
            Expr::Mul(a, b) => a
                .to_function::<S>(m, n)?
                .slice_product(&b.to_function(m, n)?),
            Expr::Pow(a, k) => {
                let base = a.to_function::<S>(m, n)?;
                let mut acc = SliceFunction::constant(m, n, Multivector::scalar(m, S::one())?)?;
                for _ in 0..*k {
                    acc = acc.slice_product(&base)?;
                }
                Ok(acc)
            }
        }
    }

    /// Largest variable index mentioned; 0 when none.
    pub fn max_variable(&self) -> u32 {
        match self {
            Expr::Variable(v) => *v,
            Expr::Rational(..) | Expr::Blade(..) => 0,
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_variable(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.max_variable().max(b.max_variable())
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// Parse and lower in one step.
pub fn parse_to_function<S: Scalar>(src: &str, m: u32, n: u32) -> Result<SliceFunction<S>> {
    parse(src)?.to_function(m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn sc(m: u32, num: i64, den: i64) -> Multivector<Rat> {
        Multivector::scalar(m, <Rat as Scalar>::from_ratio(num, den)).unwrap()
    }

    #[test]
    fn parses_ordered_monomials() {
        let f: SliceFunction<Rat> = parse_to_function("x1^4 * x2^7", 5, 2).unwrap();
        let expected = SliceFunction::monomial(5, &[4, 7], sc(5, 1, 1)).unwrap();
        assert!(f.sub(&expected).unwrap().is_zero());
    }

    #[test]
    fn parses_right_coefficients() {
        let f: SliceFunction<Rat> = parse_to_function("x1^2 * (e1 + 2/3)", 5, 1).unwrap();
        let c = Multivector::from_terms(
            5,
            vec![
                (1u32, <Rat as Scalar>::one()),
                (0u32, <Rat as Scalar>::from_ratio(2, 3)),
            ],
        )
        .unwrap();
        let expected = SliceFunction::monomial(5, &[2], c).unwrap();
        assert!(f.sub(&expected).unwrap().is_zero());
    }

    #[test]
    fn precedence_and_unary_minus() {
        let f: SliceFunction<Rat> = parse_to_function("-x1^2 + 3 * x1", 5, 1).unwrap();
        let g: SliceFunction<Rat> = parse_to_function("3 * x1 - x1^2", 5, 1).unwrap();
        assert!(f.sub(&g).unwrap().is_zero());
        let h: SliceFunction<Rat> = parse_to_function("x1 - x1 - x1", 5, 1).unwrap();
        let neg_x: SliceFunction<Rat> = parse_to_function("-x1", 5, 1).unwrap();
        assert!(h.sub(&neg_x).unwrap().is_zero());
    }

    #[test]
    fn blade_forms() {
        let a = parse("e13").unwrap();
        let b = parse("e{1,3}").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, Expr::Blade(0b101));
        let c = parse("e{1,13}").unwrap();
        assert_eq!(c, Expr::Blade((1 << 0) | (1 << 12)));
        assert!(parse("e31").is_err());
        assert!(parse("e0").is_err());
        assert!(parse("e{3,3}").is_err());
        assert!(parse("e{1,3").is_err());
    }

    #[test]
    fn products_keep_written_order() {
        // e1 * x1 and x1 * e1 differ once evaluated off the real axis: the
        // slice product keeps the imaginary unit to the left of the
        // coefficient.
        let left: SliceFunction<Rat> = parse_to_function("e1 * x1", 3, 1).unwrap();
        let right: SliceFunction<Rat> = parse_to_function("x1 * e2", 3, 1).unwrap();
        assert!(!left.sub(&right).unwrap().is_zero());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse("x1 + + x2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse("x1 ^ -2").is_err());
        assert!(parse("2/0").is_err());
        assert!(parse("(x1").is_err());
        assert!(parse("x1 x2").is_err());
        assert!(parse("y1").is_err());
        assert!(parse("x1 + ").is_err());
    }

    #[test]
    fn lowering_checks_ranges() {
        assert!(matches!(
            parse_to_function::<Rat>("x3", 5, 2),
            Err(Error::VariableOutOfRange { h: 3, n: 2 })
        ));
        assert!(matches!(
            parse_to_function::<Rat>("e7", 5, 1),
            Err(Error::BladeOutOfRange { .. })
        ));
    }

    #[test]
    fn canonical_form_round_trips() {
        for src in [
            "x1^4 * x2^7",
            "x1^2 * (e1 + 2/3)",
            "-x1^2 + 3 * x1 - 1/6",
            "(x1 + x2)^3 * e12",
            "2/3^2",
            "-(-x1)",
            "x1 - (x2 - x3)",
            "e{1,13} * x1",
            "(1/2)^3",
        ] {
            let ast = parse(src).unwrap();
            let printed = ast.to_string();
            let reparsed = parse(&printed)
                .unwrap_or_else(|e| panic!("reparse of {printed:?} failed: {e}"));
            assert_eq!(ast, reparsed, "round trip changed {src:?} -> {printed:?}");
            assert_eq!(printed, reparsed.to_string());
        }
    }

    #[test]
    fn rational_powers_bind_to_the_whole_literal() {
        // "2/3^2" reads as (2/3)^2 because rationals are single literals.
        let f: SliceFunction<Rat> = parse_to_function("2/3^2", 5, 1).unwrap();
        let expected = SliceFunction::constant(5, 1, sc(5, 4, 9)).unwrap();
        assert!(f.sub(&expected).unwrap().is_zero());
    }
}
