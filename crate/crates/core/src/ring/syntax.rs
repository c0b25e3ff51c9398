//! Element syntax: integers, `z<m>` roots of unity, variable names, `+ - * /`
//! (division only by units), `^` with integer exponents, parentheses, and
//! `(a, b, ...)` tuples for product rings.

use super::{Elem, Ring};
use crate::error::{Error, Result};
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Tuple(Vec<Expr>),
}

/// Something that can give meaning to an [`Expr`].
pub trait Evaluator {
    type Value: Clone;
    fn int(&self, k: &BigInt) -> Result<Self::Value>;
    fn name(&self, name: &str) -> Result<Self::Value>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn pow(&self, a: Self::Value, e: i64) -> Result<Self::Value>;
    fn tuple(&self, items: Vec<Self::Value>) -> Result<Self::Value>;

    fn eval(&self, e: &Expr) -> Result<Self::Value> {
        match e {
            Expr::Int(k) => self.int(k),
            Expr::Name(n) => self.name(n),
            Expr::Neg(a) => {
                let v = self.eval(a)?;
                self.neg(v)
            }
            Expr::Add(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                self.add(x, y)
            }
            Expr::Sub(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let ny = self.neg(y)?;
                self.add(x, ny)
            }
            Expr::Mul(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                self.mul(x, y)
            }
            Expr::Div(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                self.div(x, y)
            }
            Expr::Pow(a, k) => {
                let v = self.eval(a)?;
                self.pow(v, *k)
            }
            Expr::Tuple(items) => {
                let vals = items.iter().map(|i| self.eval(i)).collect::<Result<_>>()?;
                self.tuple(vals)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = vec![];
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Int(text.parse().unwrap()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in {:?}", self.src))
    }

    fn peek_sym(&self, c: char) -> bool {
        self.toks.get(self.pos) == Some(&Tok::Sym(c))
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_sym('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_sym('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_sym('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat_sym('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat_sym('^') {
            let neg = self.eat_sym('-');
            let Some(Tok::Int(k)) = self.toks.get(self.pos).cloned() else {
                return Err(self.err("expected an integer exponent"));
            };
            self.pos += 1;
            let k: i64 = i64::try_from(k).map_err(|_| self.err("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(Expr::Int(k))
            }
            Some(Tok::Name(n)) => {
                self.pos += 1;
                Ok(Expr::Name(n))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let first = self.expr()?;
                if self.eat_sym(',') {
                    let mut items = vec![first];
                    loop {
                        items.push(self.expr()?);
                        if !self.eat_sym(',') {
                            break;
                        }
                    }
                    if !self.eat_sym(')') {
                        return Err(self.err("expected ')'"));
                    }
                    return Ok(Expr::Tuple(items));
                }
                if !self.eat_sym(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(first)
            }
            _ => Err(self.err("expected a value")),
        }
    }
}

/// Parse element syntax into an expression tree.
pub fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0, src: s };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Root-of-unity names `z<m>` give their order.
pub fn root_name(name: &str) -> Option<u64> {
    name.strip_prefix('z').filter(|s| !s.is_empty()).and_then(|s| s.parse().ok())
}

impl Evaluator for Ring {
    type Value = Elem;

    fn int(&self, k: &BigInt) -> Result<Elem> {
        Ok(self.from_bigint(k))
    }

    fn name(&self, name: &str) -> Result<Elem> {
        match root_name(name) {
            Some(m) => self.root_of_unity(m).map_err(|e| match e {
                Error::RootsUnavailable(msg) => Error::Parse(msg),
                other => other,
            }),
            None => self.variable(name),
        }
    }

    fn add(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(a + b)
    }

    fn neg(&self, a: Elem) -> Result<Elem> {
        Ok(-a)
    }

    fn mul(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(a * b)
    }

    fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(a * b.inverse()?)
    }

    fn pow(&self, a: Elem, e: i64) -> Result<Elem> {
        a.pow_i(e)
    }

    fn tuple(&self, _items: Vec<Elem>) -> Result<Elem> {
        Err(Error::Parse(format!("tuple value in non-product ring {self}")))
    }

    fn eval(&self, e: &Expr) -> Result<Elem> {
        // tuples evaluate each entry in its own component ring
        if let (Expr::Tuple(items), Some(parts)) = (e, self.product_parts()) {
            if parts.len() != items.len() {
                return Err(Error::Parse(format!("{self} has {} components, got {}", parts.len(), items.len())));
            }
            let comps = parts.iter().zip(items).map(|(p, it)| p.eval(it)).collect::<Result<Vec<_>>>()?;
            return Ok(self.from_components(&comps));
        }
        default_eval(self, e)
    }
}

fn default_eval(r: &Ring, e: &Expr) -> Result<Elem> {
    match e {
        Expr::Int(k) => r.int(k),
        Expr::Name(n) => r.name(n),
        Expr::Neg(a) => Ok(-r.eval(a)?),
        Expr::Add(a, b) => Ok(r.eval(a)? + r.eval(b)?),
        Expr::Sub(a, b) => Ok(r.eval(a)? - r.eval(b)?),
        Expr::Mul(a, b) => Ok(r.eval(a)? * r.eval(b)?),
        Expr::Div(a, b) => r.div(r.eval(a)?, r.eval(b)?),
        Expr::Pow(a, k) => r.eval(a)?.pow_i(*k),
        Expr::Tuple(items) => {
            let vals = items.iter().map(|i| r.eval(i)).collect::<Result<_>>()?;
            r.tuple(vals)
        }
    }
}

pub(crate) fn parse_elem(ring: &Ring, s: &str) -> Result<Elem> {
    let e = parse_expr(s)?;
    ring.eval(&e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let q = Ring::rationals();
        assert_eq!(parse_elem(&q, "1 + 2*3^2").unwrap(), q.from_int(19));
        assert_eq!(parse_elem(&q, "-2^2").unwrap(), q.from_int(-4));
        assert_eq!(parse_elem(&q, "2/3 - 1/3").unwrap().to_string(), "1/3");
        assert_eq!(parse_elem(&q, "2^-1").unwrap().to_string(), "1/2");
    }

    #[test]
    fn roots_and_variables() {
        let r = Ring::parse("Q(z8)[T]").unwrap();
        let a = parse_elem(&r, "z8^3*T + z4").unwrap();
        assert_eq!(a.to_string(), "z8^2 + z8^3*T");
        assert!(parse_elem(&r, "z3").is_err());
        assert!(parse_elem(&r, "U").is_err());
    }

    #[test]
    fn division_by_non_unit() {
        let r = Ring::modular_cyclotomic(1, 5, 2).unwrap();
        assert!(matches!(parse_elem(&r, "1/5"), Err(Error::NotAUnit(_))));
        assert_eq!(parse_elem(&r, "1/2").unwrap().to_string(), "13");
    }

    #[test]
    fn malformed_input() {
        let q = Ring::rationals();
        for bad in ["", "1 +", "(1", "1 ? 2", "2^x"] {
            assert!(parse_elem(&q, bad).unwrap_err().is_parse(), "{bad}");
        }
    }
}
