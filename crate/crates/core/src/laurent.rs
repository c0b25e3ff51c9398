//! Laurent polynomials R[X, X⁻¹] and the fraction ring S⁻¹R[X, X⁻¹], where S
//! consists of the Laurent polynomials whose lowest and highest coefficients
//! are units.
//!
//! Fractions are never reduced; two fractions are equal when their
//! cross-products agree. This is a congruence because elements of S are
//! nonzerodivisors.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::syntax::{parse_expr, Evaluator};
use crate::ring::{join_terms, Elem, Ring, RingHom};
use num_bigint::BigInt;

/// A Laurent polynomial in the distinguished variable `X`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    ring: Ring,
    /// Exponent of `coeffs[0]`; zero when the polynomial is zero.
    low: i64,
    /// Trimmed: first and last entries nonzero, or empty.
    coeffs: Vec<Elem>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let k = self.low + i as i64;
                let mono = match k {
                    0 => String::new(),
                    1 => "X".to_string(),
                    _ => format!("X^{k}"),
                };
                (c.to_string(), mono)
            })
            .collect();
        f.write_str(&join_terms(terms))
    }
}

impl LaurentPoly {
    /// Build from coefficients of X^low, X^{low+1}, …; trims zeros.
    pub fn new(ring: &Ring, low: i64, coeffs: Vec<Elem>) -> LaurentPoly {
        for c in &coeffs {
            assert!(c.ring() == ring, "coefficient from {} in a Laurent polynomial over {}", c.ring(), ring);
        }
        let start = coeffs.iter().position(|c| !c.is_zero());
        let Some(start) = start else {
            return LaurentPoly::zero(ring);
        };
        let end = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        LaurentPoly { ring: ring.clone(), low: low + start as i64, coeffs: coeffs[start..=end].to_vec() }
    }

    /// Ordinary polynomial with coefficients lowest first.
    pub fn from_poly(ring: &Ring, coeffs: Vec<Elem>) -> LaurentPoly {
        LaurentPoly::new(ring, 0, coeffs)
    }

    pub fn zero(ring: &Ring) -> LaurentPoly {
        LaurentPoly { ring: ring.clone(), low: 0, coeffs: vec![] }
    }

    pub fn one(ring: &Ring) -> LaurentPoly {
        LaurentPoly::constant(&ring.one())
    }

    pub fn constant(c: &Elem) -> LaurentPoly {
        LaurentPoly::new(c.ring(), 0, vec![c.clone()])
    }

    /// c·X^k
    pub fn monomial(c: &Elem, k: i64) -> LaurentPoly {
        LaurentPoly::new(c.ring(), k, vec![c.clone()])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of X^k.
    pub fn coeff(&self, k: i64) -> Elem {
        let i = k - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            self.ring.zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn lowest_coeff(&self) -> Option<&Elem> {
        self.coeffs.first()
    }

    pub fn highest_coeff(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    /// Membership in S: nonzero with unit extreme coefficients.
    pub fn in_s(&self) -> bool {
        match (self.coeffs.first(), self.coeffs.last()) {
            (Some(a), Some(b)) => a.is_unit() && b.is_unit(),
            _ => false,
        }
    }

    fn check_ring(&self, o: &LaurentPoly) {
        if self.ring != o.ring {
            panic!("Laurent polynomials over different rings {} and {}", self.ring, o.ring);
        }
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        self.check_ring(o);
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let coeffs = (low..=high).map(|k| self.coeff(k) + o.coeff(k)).collect();
        LaurentPoly::new(&self.ring, low, coeffs)
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|c| -c).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &LaurentPoly) -> LaurentPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        self.check_ring(o);
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero(&self.ring);
        }
        let mut out = vec![self.ring.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        LaurentPoly::new(&self.ring, self.low + o.low, out)
    }

    pub fn scale(&self, c: &Elem) -> LaurentPoly {
        LaurentPoly::new(&self.ring, self.low, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by X^k.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { low: self.low + k, ..self.clone() }
    }

    pub fn pow(&self, e: u64) -> LaurentPoly {
        let mut acc = LaurentPoly::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute X ↦ c·X^k (k ≠ 0).
    pub fn substitute(&self, c: &Elem, k: i64) -> LaurentPoly {
        assert!(k != 0, "substitution exponent must be nonzero");
        let mut out = LaurentPoly::zero(&self.ring);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let e = self.low + i as i64;
            let cp = if e >= 0 { c.pow(e as u64) } else { c.inverse().expect("substitution constant must be a unit").pow(e.unsigned_abs()) };
            out = out.add(&LaurentPoly::monomial(&(a * &cp), e * k));
        }
        out
    }

    /// Apply a ring homomorphism to every coefficient.
    pub fn map(&self, h: &RingHom) -> Result<LaurentPoly> {
        if h.source() != &self.ring {
            return Err(Error::DescriptorMismatch(self.ring.to_string(), h.source().to_string()));
        }
        let coeffs = self.coeffs.iter().map(|c| h.apply(c)).collect::<Result<_>>()?;
        Ok(LaurentPoly::new(h.target(), self.low, coeffs))
    }
}

/// An element num/den of S⁻¹R[X, X⁻¹].
#[derive(Clone)]
pub struct SFraction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl fmt::Debug for SFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == LaurentPoly::one(&self.den.ring) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl PartialEq for SFraction {
    fn eq(&self, o: &SFraction) -> bool {
        self.equals(o)
    }
}

impl SFraction {
    /// Checks the denominator lies in S.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<SFraction> {
        if num.ring != den.ring {
            return Err(Error::DescriptorMismatch(num.ring.to_string(), den.ring.to_string()));
        }
        if !den.in_s() {
            return Err(Error::DenominatorNotInS(den.to_string()));
        }
        Ok(SFraction { num, den })
    }

    pub fn from_laurent(num: LaurentPoly) -> SFraction {
        let den = LaurentPoly::one(&num.ring);
        SFraction { num, den }
    }

    pub fn one(ring: &Ring) -> SFraction {
        SFraction::from_laurent(LaurentPoly::one(ring))
    }

    pub fn constant(c: &Elem) -> SFraction {
        SFraction::from_laurent(LaurentPoly::constant(c))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn ring(&self) -> &Ring {
        &self.num.ring
    }

    /// Cross-multiplication test; false for fractions over different rings.
    pub fn equals(&self, o: &SFraction) -> bool {
        self.ring() == o.ring() && self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &SFraction) -> SFraction {
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        SFraction { num, den: self.den.mul(&o.den) }
    }

    pub fn neg(&self) -> SFraction {
        SFraction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &SFraction) -> SFraction {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &SFraction) -> SFraction {
        SFraction { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn inverse(&self) -> Result<SFraction> {
        if !self.num.in_s() {
            return Err(Error::NumeratorNotInS(self.num.to_string()));
        }
        Ok(SFraction { num: self.den.clone(), den: self.num.clone() })
    }

    pub fn div(&self, o: &SFraction) -> Result<SFraction> {
        Ok(self.mul(&o.inverse()?))
    }

    /// The same fraction with denominator a polynomial of constant term 1.
    pub fn normalized(&self) -> SFraction {
        let Some(c) = self.den.lowest_coeff().and_then(|c| c.inverse().ok()) else {
            return self.clone();
        };
        let k = -self.den.low();
        SFraction { num: self.num.scale(&c).shift(k), den: self.den.scale(&c).shift(k) }
    }

    /// Substitute X ↦ c·X^k in numerator and denominator.
    pub fn substitute(&self, c: &Elem, k: i64) -> SFraction {
        SFraction { num: self.num.substitute(c, k), den: self.den.substitute(c, k) }
    }

    /// Apply a homomorphism coefficientwise; units map to units so the
    /// denominator stays in S.
    pub fn specialize(&self, h: &RingHom) -> Result<SFraction> {
        let num = self.num.map(h)?;
        let den = self.den.map(h)?;
        SFraction::new(num, den)
    }

    /// Parse `num / den` style element syntax with the distinguished
    /// variable `X`.
    pub fn parse(ring: &Ring, s: &str) -> Result<SFraction> {
        let e = parse_expr(s)?;
        FracEval { ring }.eval(&e)
    }
}

struct FracEval<'a> {
    ring: &'a Ring,
}

impl Evaluator for FracEval<'_> {
    type Value = SFraction;

    fn int(&self, k: &BigInt) -> Result<SFraction> {
        Ok(SFraction::constant(&self.ring.from_bigint(k)))
    }

    fn name(&self, name: &str) -> Result<SFraction> {
        if name == "X" {
            return Ok(SFraction::from_laurent(LaurentPoly::monomial(&self.ring.one(), 1)));
        }
        Ok(SFraction::constant(&self.ring.name(name)?))
    }

    fn add(&self, a: SFraction, b: SFraction) -> Result<SFraction> {
        Ok(a.add(&b))
    }

    fn neg(&self, a: SFraction) -> Result<SFraction> {
        Ok(a.neg())
    }

    fn mul(&self, a: SFraction, b: SFraction) -> Result<SFraction> {
        Ok(a.mul(&b))
    }

    fn div(&self, a: SFraction, b: SFraction) -> Result<SFraction> {
        if !b.num.in_s() {
            return Err(Error::DenominatorNotInS(b.num.to_string()));
        }
        a.div(&b)
    }

    fn pow(&self, a: SFraction, e: i64) -> Result<SFraction> {
        let base = if e < 0 { a.inverse()? } else { a };
        let mut acc = SFraction::one(self.ring);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn tuple(&self, _items: Vec<SFraction>) -> Result<SFraction> {
        Err(Error::Parse("tuples are not Laurent fractions".into()))
    }
}
