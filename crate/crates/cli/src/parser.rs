//! Surface syntax for operators, elements and polynomials.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor (('*'|'/')? factor)*
//! factor := atom ('^' uint)?
//! atom   := integer | var | 'D' | '(' expr ')'
//! ```
//!
//! Products are noncommutative (`D*x = x*D + 1`); `a/q` multiplies `a` on
//! the right by `1/q` and requires `q` free of `D`.

use ibasis_core::exactmath::{QPoly, RatFun, Rational};
use ibasis_core::oreops::OrePoly;
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var,
    D,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn lex(text: &str, var: char, allow_d: bool) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let (at, c) = bytes[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                    i += 1;
                }
                let end = bytes.get(i).map_or(text.len(), |b| b.0);
                out.push((at, Tok::Int(text[bytes[start].0..end].parse().unwrap())));
                continue;
            }
            'D' if allow_d => Tok::D,
            c if c == var => Tok::Var,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::Open,
            ')' => Tok::Close,
            other => {
                return Err(ParseError { offset: at, message: format!("unexpected character '{}'", other) });
            }
        };
        out.push((at, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<OrePoly, ParseError> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                neg = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_) | Tok::Var | Tok::D | Tok::Open))
    }

    fn term(&mut self) -> Result<OrePoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let q = self.factor()?;
                    let q = match q.coeffs() {
                        [] => return Err(ParseError { offset: at, message: "division by zero".into() }),
                        [c] => c.clone(),
                        _ => return Err(ParseError { offset: at, message: "division by an expression containing D".into() }),
                    };
                    let inv = RatFun::one().div(&q).expect("nonzero divisor");
                    acc = acc.mul(&OrePoly::constant(inv));
                }
                _ if self.starts_factor() => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<OrePoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return self.fail("expected a nonnegative integer exponent");
        };
        let Ok(n) = u32::try_from(&n) else {
            return self.fail("exponent too large");
        };
        self.pos += 1;
        let mut acc = OrePoly::one();
        for _ in 0..n {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<OrePoly, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(OrePoly::constant(RatFun::constant(Rational::from_integer(n))))
            }
            Some(Tok::Var) => {
                self.pos += 1;
                Ok(OrePoly::x())
            }
            Some(Tok::D) => {
                self.pos += 1;
                Ok(OrePoly::d_pow(1))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.fail("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.fail("expected a number, variable, D or '('"),
            None => self.fail("unexpected end of input"),
        }
    }
}

fn parse_with(text: &str, var: char, allow_d: bool) -> Result<OrePoly, ParseError> {
    let toks = lex(text, var, allow_d)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    if p.peek().is_none() {
        return p.fail("empty expression");
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.fail("unexpected trailing input");
    }
    Ok(out)
}

/// An element of `Q(x)[D]`, collected as `sum c_i(x) D^i`.
pub fn parse_operator(text: &str) -> Result<OrePoly, ParseError> {
    parse_with(text, 'x', true)
}

/// A rational function in `var`.
pub fn parse_ratfun(text: &str, var: char) -> Result<RatFun, ParseError> {
    let op = parse_with(text, var, false)?;
    Ok(op.coeffs().first().cloned().unwrap_or_else(RatFun::zero))
}

/// A polynomial in `var`.
pub fn parse_poly(text: &str, var: char) -> Result<QPoly, ParseError> {
    let f = parse_ratfun(text, var)?;
    if !f.is_polynomial() {
        return Err(ParseError { offset: 0, message: "expected a polynomial".into() });
    }
    Ok(f.num().clone())
}

/// A rational number such as `0`, `-3` or `1/2`.
pub fn parse_rational_point(text: &str) -> Result<Rational, ParseError> {
    parse_ratfun(text, 'x')?
        .as_constant()
        .ok_or(ParseError { offset: 0, message: "expected a rational number".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ibasis_core::exactmath::rat;
    use proptest::prelude::*;

    fn q(cs: &[i64]) -> QPoly {
        QPoly::from_ints(cs)
    }

    #[test]
    fn exp_sqrt_operator() {
        let l = parse_operator("(2x+1) - (4x^2+1)*D + 2*(2x-1)*x*D^2").unwrap();
        assert_eq!(l, OrePoly::from_polys(vec![q(&[1, 2]), q(&[-1, 0, -4]), q(&[0, -2, 4])]));
    }

    #[test]
    fn noncommutative_products() {
        assert_eq!(parse_operator("D*x").unwrap().to_string(), "x*D + 1");
        assert_eq!(parse_operator("x D").unwrap().to_string(), "x*D");
        assert_eq!(parse_operator("D^2 x").unwrap().to_string(), "x*D^2 + 2*D");
        assert_eq!(parse_operator("D/x").unwrap().to_string(), "(1/x)*D - 1/x^2");
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(parse_operator("D^").unwrap_err().offset, 2);
        assert_eq!(parse_operator("x + * D").unwrap_err().offset, 4);
        assert_eq!(parse_operator("(x").unwrap_err().offset, 2);
        assert_eq!(parse_operator("x ? 1").unwrap_err().offset, 2);
        assert_eq!(parse_operator("1/0").unwrap_err().offset, 2);
        assert_eq!(parse_operator("x/D").unwrap_err().offset, 2);
        assert_eq!(parse_operator("").unwrap_err().offset, 0);
    }

    #[test]
    fn coefficients_and_polynomials() {
        assert_eq!(parse_ratfun("9/(2*x^3)", 'x').unwrap(), RatFun::new(q(&[9]), q(&[0, 0, 0, 2])).unwrap());
        assert_eq!(parse_poly("t^2-2", 't').unwrap(), q(&[-2, 0, 1]));
        assert_eq!(parse_ratfun("-1/2", 'x').unwrap(), RatFun::constant(rat(-1, 2)));
        assert!(parse_poly("1/t", 't').is_err());
    }

    fn arb_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec((-9i64..10, 1i64..5), 0..4)
            .prop_map(|cs| QPoly::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    fn arb_ratfun() -> impl Strategy<Value = RatFun> {
        (arb_poly(), arb_poly()).prop_map(|(n, d)| RatFun::new(n, d).unwrap_or_else(|_| RatFun::one()))
    }

    proptest! {
        #[test]
        fn printed_operators_parse_back(cs in prop::collection::vec(arb_ratfun(), 0..4)) {
            let l = OrePoly::new(cs);
            let text = l.to_string();
            prop_assert_eq!(parse_operator(&text).unwrap(), l, "{}", text);
        }

        #[test]
        fn printed_coefficients_parse_back(f in arb_ratfun()) {
            let text = f.display().to_string();
            prop_assert_eq!(parse_ratfun(&text, 'x').unwrap(), f, "{}", text);
        }
    }
}
