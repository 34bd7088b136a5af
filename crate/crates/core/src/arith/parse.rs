//! Text syntax for elements: `+ - * / ^`, parentheses, integer literals and
//! named variables (`u` for the generator of F_q, `t`, `x`, `T` for τ).
//! Expressions are parsed once and then evaluated in a target ring.

use super::ext::{ExtElem, ExtRing};
use super::fq::{FiniteField, Fq};
use super::poly::PolyA;
use super::ratfunc::RatFunc;
use super::{ArithError, Ring};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

fn err(pos: usize, msg: impl Into<String>) -> ArithError {
    ArithError::Parse { pos, msg: msg.into() }
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }
    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ArithError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ArithError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ArithError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let n = self.number()?;
            let e = u64::try_from(n).map_err(|_| err(start, "exponent must be nonnegative"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<i64, ArithError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(start, "expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| err(start, "integer literal out of range"))
    }

    fn atom(&mut self) -> Result<Expr, ArithError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(err(self.pos, "expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                Ok(Expr::Var(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()))
            }
            Some(c) => Err(err(self.pos, format!("unexpected '{}'", c as char))),
            None => Err(err(self.pos, "unexpected end of input")),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, ArithError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err(p.pos, "trailing input"));
    }
    Ok(e)
}

impl Expr {
    /// Evaluates in the ring of `one`; `var` resolves variable names.
    /// Division must be exact in that ring.
    pub fn eval<R: Ring>(&self, one: &R, var: &dyn Fn(&str) -> Option<R>) -> Result<R, ArithError> {
        Ok(match self {
            Expr::Int(n) => one.from_int(*n),
            Expr::Var(v) => var(v).ok_or_else(|| err(0, format!("unknown variable '{v}'")))?,
            Expr::Neg(a) => a.eval(one, var)?.neg_ref(),
            Expr::Add(a, b) => a.eval(one, var)?.add_ref(&b.eval(one, var)?),
            Expr::Sub(a, b) => a.eval(one, var)?.sub_ref(&b.eval(one, var)?),
            Expr::Mul(a, b) => a.eval(one, var)?.mul_ref(&b.eval(one, var)?),
            Expr::Div(a, b) => {
                let d = b.eval(one, var)?;
                if d.is_zero() {
                    return Err(ArithError::DivisionByZero);
                }
                a.eval(one, var)?.exact_div(&d).ok_or(ArithError::InexactDivision)?
            }
            Expr::Pow(a, e) => a.eval(one, var)?.pow(*e),
        })
    }
}

/// Parses `s` in the ring of `one`, with `vars` mapping names to elements.
pub fn parse_in<R: Ring>(s: &str, one: &R, vars: &[(&str, R)]) -> Result<R, ArithError> {
    parse_expr(s)?.eval(one, &|name| vars.iter().find(|(n, _)| *n == name).map(|(_, v)| v.clone()))
}

pub fn parse_fq(field: &FiniteField, s: &str) -> Result<Fq, ArithError> {
    let vars: Vec<(&str, Fq)> = field.u().map(|u| ("u", u)).into_iter().collect();
    parse_in(s, &field.one(), &vars)
}

pub fn parse_poly(field: &FiniteField, s: &str) -> Result<PolyA, ArithError> {
    let mut vars = vec![("t", PolyA::t(field))];
    if let Some(u) = field.u() {
        vars.push(("u", PolyA::from_fq(&u)));
    }
    parse_in(s, &PolyA::one(field), &vars)
}

pub fn parse_ratfunc(field: &FiniteField, s: &str) -> Result<RatFunc, ArithError> {
    let mut vars = vec![("t", RatFunc::t(field))];
    if let Some(u) = field.u() {
        vars.push(("u", RatFunc::from_fq(&u)));
    }
    parse_in(s, &RatFunc::one(field), &vars)
}

/// Parses an `x`-polynomial over F and reduces it in `ring`.
pub fn parse_ext(ring: &ExtRing, s: &str) -> Result<ExtElem, ArithError> {
    let field = ring.modulus().coeff_zero().field().clone();
    let mut vars = vec![("t", ring.from_base(&RatFunc::t(&field))), ("x", ring.gen())];
    if let Some(u) = field.u() {
        vars.push(("u", ring.from_base(&RatFunc::from_fq(&u))));
    }
    parse_in(s, &ring.one(), &vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::UPoly;
    use proptest::prelude::*;

    #[test]
    fn basic_literals() {
        let f = FiniteField::new(3).unwrap();
        let p = parse_poly(&f, "t^3+2*t+1").unwrap();
        assert_eq!(p.coeffs(), &[1, 2, 0, 1]);
        assert_eq!(p.to_string(), "t^3+2*t+1");
        let r = parse_ratfunc(&f, "(t+1)/(t^2+t+1)").unwrap();
        assert_eq!(r.to_string(), "(t+1)/(t^2+t+1)");
        assert!(parse_poly(&f, "1/t").is_err());
        assert!(parse_poly(&f, "t^").is_err());
        assert!(parse_poly(&f, "s+1").is_err());
        let f9 = FiniteField::new(9).unwrap();
        // the modulus of F_9 is u^2+1
        assert!(parse_fq(&f9, "u^2+1").unwrap().is_zero());
        assert_eq!(parse_fq(&f9, "2*u+1").unwrap().to_string(), "2*u+1");
    }

    #[test]
    fn ext_literal() {
        let f = FiniteField::new(3).unwrap();
        let z = RatFunc::zero(&f);
        let t = RatFunc::t(&f);
        let ring = ExtRing::field(UPoly::new(&z, vec![t.neg_ref(), z.clone(), z.one_like()], "x")).unwrap();
        let a = parse_ext(&ring, "x^3 + 1/t").unwrap();
        let s = a.to_string();
        assert_eq!(parse_ext(&ring, &s).unwrap(), a);
        assert_eq!(a, &(&ring.from_base(&t) * &ring.gen()) + &ring.from_base(&t.inv().unwrap()));
    }

    fn arb_poly(q: u32) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0..q, 0..7)
    }

    proptest! {
        #[test]
        fn ratfunc_roundtrip(q in prop::sample::select(vec![2u32, 3, 4, 5, 8, 9]), a in arb_poly(9), b in arb_poly(9)) {
            let f = FiniteField::new(q).unwrap();
            let num = PolyA::new(&f, a.iter().map(|&c| c % q).collect());
            let den = PolyA::new(&f, b.iter().map(|&c| c % q).collect());
            prop_assume!(!den.is_zero());
            let x = RatFunc::new(num.clone(), den).unwrap();
            prop_assert_eq!(parse_ratfunc(&f, &x.to_string()).unwrap(), x);
            prop_assert_eq!(parse_poly(&f, &num.to_string()).unwrap(), num);
        }
    }
}
