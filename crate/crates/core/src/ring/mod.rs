//! The coefficient-ring tower.
//!
//! A [`Ring`] is a cheap handle onto an immutable ring built from a
//! [`RingDescriptor`]; an [`Elem`] pairs a ring handle with canonical data so
//! that equality is structural. Arithmetic on elements of different rings is a
//! programming error and panics; fallible conversions between rings go through
//! [`RingHom`].

pub mod cyclotomic;
pub mod finite;
mod hom;
mod modular;
mod roots;
pub mod syntax;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use cyclotomic::{CycElem, CycField};
use finite::FiniteField;
use modular::ModCyc;

pub use hom::RingHom;
pub use roots::{adjoin_roots, cyclotomic_automorphism, extend_hom, galois_action, root_bound, DEFAULT_ROOT_BOUND, ROOT_BOUND_VAR};

/// Structural description of a ring in the tower.
///
/// The textual form (see [`fmt::Display`] / [`FromStr`]) is `Q`, `Q(z8)`,
/// `GF(7)`, `GF(5^2)`, `Z/7^2`, `Z[z3]/7^2`, with suffixes `[T]` for a
/// polynomial extension, `/(T^2 + 1)` for a quotient by a monic polynomial in
/// the last variable, and `Prod(A, B)` for products.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Rationals,
    /// ℚ[x]/Φ_m(x)
    Cyclotomic(u64),
    /// 𝔽_{ℓ^r} presented by the Conway polynomial.
    FiniteField { ell: u64, r: u32 },
    /// (ℤ[x]/Φ_m(x))/ℓⁿ
    ModularCyclotomic { m: u64, ell: u64, n: u32 },
    PolyExt { base: Box<RingDescriptor>, var: String },
    /// `base` must be a `PolyExt`; `modulus` is a monic polynomial in its
    /// variable, written in element syntax.
    Quotient { base: Box<RingDescriptor>, modulus: String },
    Product(Vec<RingDescriptor>),
}

impl RingDescriptor {
    pub fn poly(base: RingDescriptor, var: &str) -> Self {
        RingDescriptor::PolyExt { base: Box::new(base), var: var.to_string() }
    }

    pub fn quotient(base: RingDescriptor, modulus: &str) -> Self {
        RingDescriptor::Quotient { base: Box::new(base), modulus: modulus.to_string() }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Rationals => write!(f, "Q"),
            RingDescriptor::Cyclotomic(m) => write!(f, "Q(z{m})"),
            RingDescriptor::FiniteField { ell, r: 1 } => write!(f, "GF({ell})"),
            RingDescriptor::FiniteField { ell, r } => write!(f, "GF({ell}^{r})"),
            RingDescriptor::ModularCyclotomic { m, ell, n } => {
                if *m == 1 {
                    write!(f, "Z/{ell}")?;
                } else {
                    write!(f, "Z[z{m}]/{ell}")?;
                }
                if *n > 1 {
                    write!(f, "^{n}")?;
                }
                Ok(())
            }
            RingDescriptor::PolyExt { base, var } => write!(f, "{base}[{var}]"),
            RingDescriptor::Quotient { base, modulus } => write!(f, "{base}/({modulus})"),
            RingDescriptor::Product(parts) => {
                write!(f, "Prod(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for RingDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = DescParser { s: s.as_bytes(), pos: 0 };
        let d = p.descriptor()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(d)
    }
}

struct DescParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl DescParser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "ring descriptor {:?}: {what} at offset {}",
            String::from_utf8_lossy(self.s),
            self.pos
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {lit:?}")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected a number"))
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.eat("^") {
            let n = self.number()?;
            u32::try_from(n).map_err(|_| self.err("exponent too large"))
        } else {
            Ok(1)
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a variable name"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn descriptor(&mut self) -> Result<RingDescriptor> {
        let mut d = self.atom()?;
        loop {
            if self.eat("[") {
                let var = self.ident()?;
                self.expect("]")?;
                d = RingDescriptor::PolyExt { base: Box::new(d), var };
            } else if self.eat("/(") {
                let start = self.pos;
                let mut depth = 1;
                while self.pos < self.s.len() {
                    match self.s[self.pos] {
                        b'(' => depth += 1,
                        b')' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    self.pos += 1;
                }
                if depth != 0 {
                    return Err(self.err("unbalanced parentheses"));
                }
                let modulus = String::from_utf8_lossy(&self.s[start..self.pos]).trim().to_string();
                self.pos += 1;
                d = RingDescriptor::Quotient { base: Box::new(d), modulus };
            } else {
                return Ok(d);
            }
        }
    }

    fn atom(&mut self) -> Result<RingDescriptor> {
        if self.eat("Prod(") {
            let mut parts = vec![self.descriptor()?];
            while self.eat(",") {
                parts.push(self.descriptor()?);
            }
            self.expect(")")?;
            return Ok(RingDescriptor::Product(parts));
        }
        if self.eat("Q(z") {
            let m = self.number()?;
            self.expect(")")?;
            return Ok(RingDescriptor::Cyclotomic(m));
        }
        if self.eat("Q") {
            return Ok(RingDescriptor::Rationals);
        }
        if self.eat("GF(") {
            let ell = self.number()?;
            let r = self.exponent()?;
            self.expect(")")?;
            return Ok(RingDescriptor::FiniteField { ell, r });
        }
        if self.eat("Z[z") {
            let m = self.number()?;
            self.expect("]/")?;
            let ell = self.number()?;
            let n = self.exponent()?;
            return Ok(RingDescriptor::ModularCyclotomic { m, ell, n });
        }
        if self.eat("Z/") {
            let ell = self.number()?;
            let n = self.exponent()?;
            return Ok(RingDescriptor::ModularCyclotomic { m: 1, ell, n });
        }
        Err(self.err("unknown ring"))
    }
}

/// Canonical element data; interpretation depends on the owning ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Data {
    Rat(BigRational),
    Cyc(CycElem),
    Ff(Vec<u64>),
    Mod(Vec<u64>),
    /// Trimmed coefficient list, lowest degree first (also used by quotients).
    Poly(Vec<Data>),
    Tuple(Vec<Data>),
}

#[derive(Debug)]
pub(crate) enum Kind {
    Rationals,
    Cyclotomic(CycField),
    Finite(FiniteField),
    Modular(ModCyc),
    Poly { base: Ring, var: String },
    /// Quotient of the polynomial ring `poly` by a monic polynomial whose
    /// coefficients (over `poly`'s base) are `modulus`.
    Quotient { poly: Ring, modulus: Vec<Data> },
    Product(Vec<Ring>),
}

struct RingInner {
    desc: RingDescriptor,
    kind: Kind,
    roots: Mutex<HashMap<u64, Data>>,
}

/// Handle to a constructed ring. Cloning is cheap; equal descriptors yield the
/// same underlying ring.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.desc)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.desc.fmt(f)
    }
}

/// Characteristic of a ring in the tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Characteristic {
    Zero,
    Prime(u64),
    PrimePower(u64, u32),
    Mixed,
}

fn reserved_name(var: &str) -> bool {
    var == "X"
        || (var.len() > 1 && var.starts_with('z') && var[1..].bytes().all(|b| b.is_ascii_digit()))
        || !var.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        || !var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Construct (or fetch from the cache) the ring described by `desc`.
pub fn make_ring(desc: &RingDescriptor) -> Result<Ring> {
    static CACHE: OnceLock<Mutex<HashMap<RingDescriptor, Ring>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(desc) {
        return Ok(r.clone());
    }
    let (canonical, kind) = build_kind(desc)?;
    let ring = Ring(Arc::new(RingInner { desc: canonical.clone(), kind, roots: Mutex::new(HashMap::new()) }));
    let mut guard = cache.lock().unwrap();
    let ring = guard.entry(canonical.clone()).or_insert(ring).clone();
    guard.insert(desc.clone(), ring.clone());
    Ok(ring)
}

fn build_kind(desc: &RingDescriptor) -> Result<(RingDescriptor, Kind)> {
    let kind = match desc {
        RingDescriptor::Rationals => Kind::Rationals,
        RingDescriptor::Cyclotomic(m) => {
            if *m == 0 || *m > 100_000 {
                return Err(Error::InvalidInput(format!("cyclotomic index {m} out of range")));
            }
            Kind::Cyclotomic(CycField::new(*m))
        }
        RingDescriptor::FiniteField { ell, r } => Kind::Finite(FiniteField::new(*ell, *r)?),
        RingDescriptor::ModularCyclotomic { m, ell, n } => Kind::Modular(ModCyc::new(*m, *ell, *n)?),
        RingDescriptor::PolyExt { base, var } => {
            if reserved_name(var) {
                return Err(Error::InvalidInput(format!("{var:?} cannot be used as a variable name")));
            }
            let base = make_ring(base)?;
            if base.has_name(var) {
                return Err(Error::InvalidInput(format!("variable {var} already present in {base}")));
            }
            Kind::Poly { base, var: var.clone() }
        }
        RingDescriptor::Quotient { base, modulus } => {
            let poly = make_ring(base)?;
            let Kind::Poly { base: coeff_ring, .. } = &poly.0.kind else {
                return Err(Error::InvalidInput(format!("quotient base {poly} is not a polynomial ring")));
            };
            let f = Elem::parse(&poly, modulus)?;
            let Data::Poly(coeffs) = f.data.clone() else { unreachable!() };
            if coeffs.len() < 2 {
                return Err(Error::NonMonicModulus(format!("{f} has degree < 1")));
            }
            if !coeff_ring.d_is_one(coeffs.last().unwrap()) {
                return Err(Error::NonMonicModulus(f.to_string()));
            }
            let canonical = RingDescriptor::Quotient { base: base.clone(), modulus: f.to_string() };
            return Ok((canonical, Kind::Quotient { poly, modulus: coeffs }));
        }
        RingDescriptor::Product(parts) => {
            if parts.is_empty() {
                return Err(Error::InvalidInput("empty product".into()));
            }
            Kind::Product(parts.iter().map(make_ring).collect::<Result<_>>()?)
        }
    };
    Ok((desc.clone(), kind))
}

impl Ring {
    pub fn new(desc: &RingDescriptor) -> Result<Ring> {
        make_ring(desc)
    }

    /// Parse a descriptor string and construct the ring.
    pub fn parse(s: &str) -> Result<Ring> {
        make_ring(&s.parse()?)
    }

    pub fn rationals() -> Ring {
        make_ring(&RingDescriptor::Rationals).unwrap()
    }

    pub fn cyclotomic(m: u64) -> Result<Ring> {
        make_ring(&RingDescriptor::Cyclotomic(m))
    }

    pub fn finite_field(ell: u64, r: u32) -> Result<Ring> {
        make_ring(&RingDescriptor::FiniteField { ell, r })
    }

    pub fn modular_cyclotomic(m: u64, ell: u64, n: u32) -> Result<Ring> {
        make_ring(&RingDescriptor::ModularCyclotomic { m, ell, n })
    }

    pub fn poly(&self, var: &str) -> Result<Ring> {
        make_ring(&RingDescriptor::poly(self.desc().clone(), var))
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.desc
    }

    pub(crate) fn desc(&self) -> &RingDescriptor {
        &self.0.desc
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub(crate) fn elem(&self, data: Data) -> Elem {
        Elem { ring: self.clone(), data }
    }

    pub fn zero(&self) -> Elem {
        self.elem(self.d_zero())
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> Elem {
        self.elem(self.d_from_int(&BigInt::from(k)))
    }

    pub fn from_bigint(&self, k: &BigInt) -> Elem {
        self.elem(self.d_from_int(k))
    }

    /// Image of a rational number; fails when the denominator is not a unit.
    pub fn from_rational(&self, q: &BigRational) -> Result<Elem> {
        let num = self.from_bigint(q.numer());
        if q.denom().is_one() {
            return Ok(num);
        }
        let den = self.from_bigint(q.denom());
        let inv = den
            .inverse()
            .map_err(|_| Error::NotIntegral(format!("{q} has a denominator that is not a unit in {self}")))?;
        Ok(num * inv)
    }

    pub fn characteristic(&self) -> Characteristic {
        match self.kind() {
            Kind::Rationals | Kind::Cyclotomic(_) => Characteristic::Zero,
            Kind::Finite(f) => Characteristic::Prime(f.ell),
            Kind::Modular(m) if m.n == 1 => Characteristic::Prime(m.ell),
            Kind::Modular(m) => Characteristic::PrimePower(m.ell, m.n),
            Kind::Poly { base, .. } => base.characteristic(),
            Kind::Quotient { poly, .. } => poly.characteristic(),
            Kind::Product(parts) => {
                let c = parts[0].characteristic();
                if parts.iter().all(|p| p.characteristic() == c) {
                    c
                } else {
                    Characteristic::Mixed
                }
            }
        }
    }

    /// True when the ring is known to be a field. Quotients of degree > 1 are
    /// reported as non-fields since irreducibility is not tested.
    pub fn is_field(&self) -> bool {
        match self.kind() {
            Kind::Rationals | Kind::Cyclotomic(_) | Kind::Finite(_) => true,
            Kind::Modular(mc) => {
                if mc.n != 1 || mc.m % mc.ell == 0 {
                    return false;
                }
                // Φ_m is irreducible mod ℓ iff ℓ has order φ(m) modulo m
                let mut k = 1u64;
                let mut x = mc.ell % mc.m;
                while x != 1 % mc.m {
                    x = finite::mulmod(x, mc.ell, mc.m);
                    k += 1;
                }
                k as usize == mc.deg
            }
            Kind::Poly { .. } => false,
            Kind::Quotient { poly, modulus } => modulus.len() == 2 && poly.poly_base().unwrap().is_field(),
            Kind::Product(parts) => parts.len() == 1 && parts[0].is_field(),
        }
    }

    /// Characteristic-zero domain in the tower: ℚ, ℚ(ζ), polynomial rings over
    /// those, and quotients by squarefree moduli over fields.
    pub fn is_char0_reduced(&self) -> bool {
        match self.kind() {
            Kind::Rationals | Kind::Cyclotomic(_) => true,
            Kind::Poly { base, .. } => base.is_char0_reduced(),
            Kind::Quotient { poly, modulus } => {
                let base = poly.poly_base().unwrap();
                if !base.is_char0_reduced() {
                    return false;
                }
                if !base.is_field() {
                    return true;
                }
                let f: Vec<Elem> = modulus.iter().map(|d| base.elem(d.clone())).collect();
                crate::poly::is_squarefree_over_field(&f)
            }
            _ => false,
        }
    }

    /// The coefficient ring of a polynomial ring or of a quotient of one.
    pub fn poly_base(&self) -> Option<Ring> {
        match self.kind() {
            Kind::Poly { base, .. } => Some(base.clone()),
            Kind::Quotient { poly, .. } => poly.poly_base(),
            _ => None,
        }
    }

    pub fn product_parts(&self) -> Option<&[Ring]> {
        match self.kind() {
            Kind::Product(p) => Some(p),
            _ => None,
        }
    }

    /// Name of the adjoined variable of a polynomial ring or quotient.
    pub fn top_variable(&self) -> Option<&str> {
        match self.kind() {
            Kind::Poly { var, .. } => Some(var),
            Kind::Quotient { poly, .. } => poly.top_variable(),
            _ => None,
        }
    }

    fn has_name(&self, name: &str) -> bool {
        self.generators().iter().any(|(n, _)| n == name)
    }

    /// Named generators: adjoined roots of unity of leaves and polynomial
    /// variables, with their values in this ring.
    pub fn generators(&self) -> Vec<(String, Elem)> {
        match self.kind() {
            Kind::Rationals => vec![],
            Kind::Cyclotomic(c) if c.deg > 1 => {
                vec![(format!("z{}", c.m), self.elem(Data::Cyc(c.monomial(1))))]
            }
            Kind::Finite(f) if f.r > 1 => {
                vec![(format!("z{}", f.order - 1), self.elem(Data::Ff(f.generator())))]
            }
            Kind::Modular(mc) if mc.deg > 1 => {
                vec![(format!("z{}", mc.m), self.elem(Data::Mod(mc.monomial(1))))]
            }
            Kind::Cyclotomic(_) | Kind::Finite(_) | Kind::Modular(_) => vec![],
            Kind::Poly { base, var } => {
                let mut g: Vec<(String, Elem)> =
                    base.generators().into_iter().map(|(n, e)| (n, self.embed_const(&e))).collect();
                g.push((var.clone(), self.elem(Data::Poly(vec![base.d_zero(), base.d_from_int(&BigInt::one())]))));
                g
            }
            Kind::Quotient { poly, .. } => poly
                .generators()
                .into_iter()
                .map(|(n, e)| (n, self.elem(self.reduce_poly(poly_coeffs(e.data)))))
                .collect(),
            Kind::Product(_) => vec![],
        }
    }

    /// Value of a named polynomial variable.
    pub fn variable(&self, name: &str) -> Result<Elem> {
        if let Kind::Product(parts) = self.kind() {
            let comps = parts.iter().map(|p| p.variable(name).map(|e| e.data)).collect::<Result<_>>()?;
            return Ok(self.elem(Data::Tuple(comps)));
        }
        self.generators()
            .into_iter()
            .find(|(n, _)| n == name && !reserved_name(n))
            .map(|(_, e)| e)
            .ok_or_else(|| Error::Parse(format!("unknown name {name:?} in {self}")))
    }

    /// Embed an element of the coefficient ring into this polynomial ring or
    /// quotient as a constant.
    pub fn embed_const(&self, c: &Elem) -> Elem {
        let base = self.poly_base().expect("constant embedding needs a polynomial ring");
        if c.ring != base {
            panic!("embedding an element of {} into {}", c.ring, self);
        }
        self.elem(self.trim_poly(vec![c.data.clone()]))
    }

    /// Coefficients in the coefficient ring (polynomial rings and quotients).
    pub fn coefficients(&self, a: &Elem) -> Vec<Elem> {
        let base = self.poly_base().expect("coefficients need a polynomial ring");
        match &a.data {
            Data::Poly(v) => v.iter().map(|d| base.elem(d.clone())).collect(),
            _ => unreachable!(),
        }
    }

    /// Polynomial-ring element from coefficients (lowest first).
    pub fn from_coefficients(&self, coeffs: &[Elem]) -> Elem {
        let v = coeffs.iter().map(|c| c.data.clone()).collect();
        match self.kind() {
            Kind::Poly { .. } => self.elem(self.trim_poly(v)),
            Kind::Quotient { .. } => self.elem(self.reduce_poly(v)),
            _ => panic!("{self} is not a polynomial ring"),
        }
    }

    /// Tuple element of a product ring.
    pub fn from_components(&self, comps: &[Elem]) -> Elem {
        let parts = self.product_parts().expect("components need a product ring");
        assert_eq!(parts.len(), comps.len());
        for (p, c) in parts.iter().zip(comps) {
            assert!(*p == c.ring, "component of {} used in {}", c.ring, p);
        }
        self.elem(Data::Tuple(comps.iter().map(|c| c.data.clone()).collect()))
    }

    pub fn components(&self, a: &Elem) -> Vec<Elem> {
        let parts = self.product_parts().expect("components need a product ring");
        match &a.data {
            Data::Tuple(v) => parts.iter().zip(v).map(|(p, d)| p.elem(d.clone())).collect(),
            _ => unreachable!(),
        }
    }

    // ----- data-level arithmetic -----

    pub(crate) fn d_zero(&self) -> Data {
        match self.kind() {
            Kind::Rationals => Data::Rat(BigRational::zero()),
            Kind::Cyclotomic(c) => Data::Cyc(c.zero()),
            Kind::Finite(f) => Data::Ff(f.zero()),
            Kind::Modular(mc) => Data::Mod(mc.zero()),
            Kind::Poly { .. } | Kind::Quotient { .. } => Data::Poly(vec![]),
            Kind::Product(parts) => Data::Tuple(parts.iter().map(|p| p.d_zero()).collect()),
        }
    }

    pub(crate) fn d_from_int(&self, k: &BigInt) -> Data {
        match self.kind() {
            Kind::Rationals => Data::Rat(BigRational::from_integer(k.clone())),
            Kind::Cyclotomic(c) => Data::Cyc(c.from_int(k)),
            Kind::Finite(f) => {
                let r = (k % BigInt::from(f.ell) + BigInt::from(f.ell)) % BigInt::from(f.ell);
                Data::Ff(f.from_int(r.to_i128().unwrap()))
            }
            Kind::Modular(mc) => Data::Mod(mc.from_int(k)),
            Kind::Poly { base, .. } => self.trim_poly(vec![base.d_from_int(k)]),
            Kind::Quotient { poly, .. } => {
                let base = poly.poly_base().unwrap();
                self.reduce_poly(vec![base.d_from_int(k)])
            }
            Kind::Product(parts) => Data::Tuple(parts.iter().map(|p| p.d_from_int(k)).collect()),
        }
    }

    pub(crate) fn d_is_zero(&self, a: &Data) -> bool {
        match a {
            Data::Rat(x) => x.is_zero(),
            Data::Cyc(x) => x.is_zero(),
            Data::Ff(v) | Data::Mod(v) => v.iter().all(|&c| c == 0),
            Data::Poly(v) => v.is_empty(),
            Data::Tuple(v) => {
                let parts = self.product_parts().unwrap();
                parts.iter().zip(v).all(|(p, d)| p.d_is_zero(d))
            }
        }
    }

    pub(crate) fn d_is_one(&self, a: &Data) -> bool {
        *a == self.d_from_int(&BigInt::one())
    }

    fn trim_poly(&self, mut v: Vec<Data>) -> Data {
        let base = self.poly_base().unwrap();
        while v.last().is_some_and(|c| base.d_is_zero(c)) {
            v.pop();
        }
        Data::Poly(v)
    }

    /// Reduce a coefficient vector modulo the quotient's monic modulus.
    fn reduce_poly(&self, mut v: Vec<Data>) -> Data {
        let Kind::Quotient { poly, modulus } = self.kind() else {
            return self.trim_poly(v);
        };
        let base = poly.poly_base().unwrap();
        let d = modulus.len() - 1;
        if v.len() > d {
            for i in (d..v.len()).rev() {
                if base.d_is_zero(&v[i]) {
                    continue;
                }
                let c = std::mem::replace(&mut v[i], base.d_zero());
                for j in 0..d {
                    let t = base.d_mul(&c, &modulus[j]);
                    v[i - d + j] = base.d_sub(&v[i - d + j], &t);
                }
            }
            v.truncate(d);
        }
        self.trim_poly(v)
    }

    pub(crate) fn d_add(&self, a: &Data, b: &Data) -> Data {
        match (self.kind(), a, b) {
            (Kind::Rationals, Data::Rat(x), Data::Rat(y)) => Data::Rat(x + y),
            (Kind::Cyclotomic(c), Data::Cyc(x), Data::Cyc(y)) => Data::Cyc(c.add(x, y)),
            (Kind::Finite(f), Data::Ff(x), Data::Ff(y)) => Data::Ff(f.add(x, y)),
            (Kind::Modular(mc), Data::Mod(x), Data::Mod(y)) => Data::Mod(mc.add(x, y)),
            (Kind::Poly { base, .. }, Data::Poly(x), Data::Poly(y))
            | (Kind::Quotient { poly: base, .. }, Data::Poly(x), Data::Poly(y)) => {
                let base = if matches!(self.kind(), Kind::Quotient { .. }) { base.poly_base().unwrap() } else { base.clone() };
                let n = x.len().max(y.len());
                let v = (0..n)
                    .map(|i| match (x.get(i), y.get(i)) {
                        (Some(p), Some(q)) => base.d_add(p, q),
                        (Some(p), None) | (None, Some(p)) => p.clone(),
                        (None, None) => unreachable!(),
                    })
                    .collect();
                self.trim_poly(v)
            }
            (Kind::Product(parts), Data::Tuple(x), Data::Tuple(y)) => {
                Data::Tuple(parts.iter().zip(x.iter().zip(y)).map(|(p, (s, t))| p.d_add(s, t)).collect())
            }
            _ => unreachable!("data does not match ring {}", self),
        }
    }

    pub(crate) fn d_neg(&self, a: &Data) -> Data {
        match (self.kind(), a) {
            (Kind::Rationals, Data::Rat(x)) => Data::Rat(-x),
            (Kind::Cyclotomic(c), Data::Cyc(x)) => Data::Cyc(c.neg(x)),
            (Kind::Finite(f), Data::Ff(x)) => Data::Ff(f.neg(x)),
            (Kind::Modular(mc), Data::Mod(x)) => Data::Mod(mc.neg(x)),
            (Kind::Poly { .. } | Kind::Quotient { .. }, Data::Poly(x)) => {
                let base = self.poly_base().unwrap();
                Data::Poly(x.iter().map(|c| base.d_neg(c)).collect())
            }
            (Kind::Product(parts), Data::Tuple(x)) => {
                Data::Tuple(parts.iter().zip(x).map(|(p, s)| p.d_neg(s)).collect())
            }
            _ => unreachable!("data does not match ring {}", self),
        }
    }

    pub(crate) fn d_sub(&self, a: &Data, b: &Data) -> Data {
        self.d_add(a, &self.d_neg(b))
    }

    pub(crate) fn d_mul(&self, a: &Data, b: &Data) -> Data {
        match (self.kind(), a, b) {
            (Kind::Rationals, Data::Rat(x), Data::Rat(y)) => Data::Rat(x * y),
            (Kind::Cyclotomic(c), Data::Cyc(x), Data::Cyc(y)) => Data::Cyc(c.mul(x, y)),
            (Kind::Finite(f), Data::Ff(x), Data::Ff(y)) => Data::Ff(f.mul(x, y)),
            (Kind::Modular(mc), Data::Mod(x), Data::Mod(y)) => Data::Mod(mc.mul(x, y)),
            (Kind::Poly { .. } | Kind::Quotient { .. }, Data::Poly(x), Data::Poly(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Data::Poly(vec![]);
                }
                let base = self.poly_base().unwrap();
                let mut out = vec![base.d_zero(); x.len() + y.len() - 1];
                for (i, s) in x.iter().enumerate() {
                    if base.d_is_zero(s) {
                        continue;
                    }
                    for (j, t) in y.iter().enumerate() {
                        let prod = base.d_mul(s, t);
                        out[i + j] = base.d_add(&out[i + j], &prod);
                    }
                }
                self.reduce_poly(out)
            }
            (Kind::Product(parts), Data::Tuple(x), Data::Tuple(y)) => {
                Data::Tuple(parts.iter().zip(x.iter().zip(y)).map(|(p, (s, t))| p.d_mul(s, t)).collect())
            }
            _ => unreachable!("data does not match ring {}", self),
        }
    }

    fn d_pow(&self, a: &Data, mut e: u64) -> Data {
        let mut acc = self.d_from_int(&BigInt::one());
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.d_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.d_mul(&base, &base);
            }
        }
        acc
    }

    /// Exponent beyond which every nilpotent element vanishes, when known.
    fn nilpotency_bound(&self) -> Option<u64> {
        match self.kind() {
            Kind::Rationals | Kind::Cyclotomic(_) | Kind::Finite(_) => Some(1),
            Kind::Modular(mc) => Some(mc.nilpotency_bound()),
            Kind::Poly { base, .. } => (base.nilpotency_bound() == Some(1)).then_some(1),
            Kind::Quotient { poly, modulus } => {
                let b = poly.poly_base().unwrap().nilpotency_bound()?;
                let d = modulus.len() as u64 - 1;
                Some(d * (d * (b - 1) + 1))
            }
            Kind::Product(parts) => parts.iter().map(|p| p.nilpotency_bound()).try_fold(1, |acc, b| b.map(|b| acc.max(b))),
        }
    }

    pub(crate) fn d_is_nilpotent(&self, a: &Data) -> bool {
        match (self.kind(), a) {
            (Kind::Poly { base, .. }, Data::Poly(v)) => v.iter().all(|c| base.d_is_nilpotent(c)),
            (Kind::Product(parts), Data::Tuple(v)) => parts.iter().zip(v).all(|(p, d)| p.d_is_nilpotent(d)),
            _ => match self.nilpotency_bound() {
                Some(b) => self.d_is_zero(&self.d_pow(a, b)),
                None => self.d_is_zero(a),
            },
        }
    }

    pub(crate) fn d_inverse(&self, a: &Data) -> Option<Data> {
        match (self.kind(), a) {
            (Kind::Rationals, Data::Rat(x)) => (!x.is_zero()).then(|| Data::Rat(x.recip())),
            (Kind::Cyclotomic(c), Data::Cyc(x)) => c.inverse(x).ok().map(Data::Cyc),
            (Kind::Finite(f), Data::Ff(x)) => f.inverse(x).ok().map(Data::Ff),
            (Kind::Modular(mc), Data::Mod(x)) => mc.inverse(x).map(Data::Mod),
            (Kind::Poly { base, .. }, Data::Poly(v)) => {
                let c0 = v.first()?;
                let c0_inv = base.d_inverse(c0)?;
                if !v[1..].iter().all(|c| base.d_is_nilpotent(c)) {
                    return None;
                }
                // a = c0(1 + n) with n nilpotent: a⁻¹ = c0⁻¹ Σ (−n)^k
                let c0_inv_poly = self.trim_poly(vec![c0_inv]);
                let mut n = self.d_mul(a, &c0_inv_poly);
                n = self.d_sub(&n, &self.d_from_int(&BigInt::one()));
                let minus_n = self.d_neg(&n);
                let mut term = self.d_from_int(&BigInt::one());
                let mut sum = term.clone();
                loop {
                    term = self.d_mul(&term, &minus_n);
                    if self.d_is_zero(&term) {
                        break;
                    }
                    sum = self.d_add(&sum, &term);
                }
                Some(self.d_mul(&sum, &c0_inv_poly))
            }
            (Kind::Quotient { modulus, .. }, Data::Poly(_)) => {
                let base = self.poly_base().unwrap();
                let d = modulus.len() - 1;
                // multiplication-by-a matrix in the basis 1, T, …, T^{d−1}
                let mut rows = vec![vec![base.zero(); d]; d];
                for j in 0..d {
                    let mut mono = vec![base.d_zero(); j + 1];
                    mono[j] = base.d_from_int(&BigInt::one());
                    let col = poly_coeffs(self.d_mul(a, &self.reduce_poly(mono)));
                    for (i, c) in col.into_iter().enumerate() {
                        rows[i][j] = base.elem(c);
                    }
                }
                let m = Matrix::from_rows(&base, rows);
                let inv = m.inverse().ok()?;
                let coeffs = (0..d).map(|i| inv.get(i, 0).data.clone()).collect();
                Some(self.reduce_poly(coeffs))
            }
            (Kind::Product(parts), Data::Tuple(v)) => {
                let comps = parts.iter().zip(v).map(|(p, d)| p.d_inverse(d)).collect::<Option<_>>()?;
                Some(Data::Tuple(comps))
            }
            _ => unreachable!("data does not match ring {}", self),
        }
    }
}

fn poly_coeffs(d: Data) -> Vec<Data> {
    match d {
        Data::Poly(v) => v,
        _ => unreachable!(),
    }
}

/// An element of a ring in the tower, in canonical form.
#[derive(Clone)]
pub struct Elem {
    ring: Ring,
    pub(crate) data: Data,
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.data == other.data
    }
}

impl Eq for Elem {}

impl std::hash::Hash for Elem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.data.hash(state)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ∈ {}", self, self.ring)
    }
}

impl Elem {
    /// Parse element syntax in the given ring.
    pub fn parse(ring: &Ring, s: &str) -> Result<Elem> {
        syntax::parse_elem(ring, s)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.ring.d_is_zero(&self.data)
    }

    pub fn is_one(&self) -> bool {
        self.ring.d_is_one(&self.data)
    }

    pub fn pow(&self, e: u64) -> Elem {
        self.ring.elem(self.ring.d_pow(&self.data, e))
    }

    /// Power with a signed exponent; negative exponents require a unit.
    pub fn pow_i(&self, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    pub fn is_unit(&self) -> bool {
        self.ring.d_inverse(&self.data).is_some()
    }

    pub fn inverse(&self) -> Result<Elem> {
        self.ring
            .d_inverse(&self.data)
            .map(|d| self.ring.elem(d))
            .ok_or_else(|| Error::NotAUnit(format!("{} in {}", self, self.ring)))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.ring.d_is_nilpotent(&self.data)
    }

    /// Multiply by an integer.
    pub fn scale(&self, k: i64) -> Elem {
        self * &self.ring.from_int(k)
    }

    /// The rational value of an element of ℚ or of the constant part of
    /// ℚ(ζ), if it is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.data {
            Data::Rat(x) => Some(x.clone()),
            Data::Cyc(c) => c.num[1..].iter().all(Zero::is_zero).then(|| c.coeff(0)),
            _ => None,
        }
    }

    fn check_same(&self, other: &Elem, op: &str) {
        if self.ring != other.ring {
            panic!("{op} of elements of different rings {} and {}", self.ring, other.ring);
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $data:ident) => {
        impl $tr<&Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                self.check_same(rhs, stringify!($method));
                self.ring.elem(self.ring.$data(&self.data, &rhs.data))
            }
        }
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                (&self).$method(rhs)
            }
        }
        impl $tr<Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, d_add);
binop!(Sub, sub, d_sub);
binop!(Mul, mul, d_mul);

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.ring.elem(self.ring.d_neg(&self.data))
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

// ----- display -----

/// Join (coefficient, monomial) pairs into `a + b*m - c*m^2` form.
pub(crate) fn join_terms(terms: Vec<(String, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (coef, mono)) in terms.into_iter().enumerate() {
        let term = if mono.is_empty() {
            coef
        } else if coef == "1" {
            mono
        } else if coef == "-1" {
            format!("-{mono}")
        } else if is_compound(&coef) {
            format!("({coef})*{mono}")
        } else {
            format!("{coef}*{mono}")
        };
        if i == 0 {
            out.push_str(&term);
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    out
}

fn is_compound(s: &str) -> bool {
    s[1..].contains(" + ") || s[1..].contains(" - ") || s.starts_with('(')
}

fn power_name(name: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{k}"),
    }
}

impl Ring {
    pub(crate) fn fmt_data(&self, d: &Data) -> String {
        match (self.kind(), d) {
            (Kind::Rationals, Data::Rat(x)) => x.to_string(),
            (Kind::Cyclotomic(c), Data::Cyc(x)) => {
                let name = format!("z{}", c.m);
                let terms = (0..c.deg)
                    .filter(|&i| !x.num[i].is_zero())
                    .map(|i| (x.coeff(i).to_string(), power_name(&name, i)))
                    .collect();
                join_terms(terms)
            }
            (Kind::Finite(f), Data::Ff(v)) => {
                let name = format!("z{}", f.order - 1);
                join_terms(
                    v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, c)| (c.to_string(), power_name(&name, i))).collect(),
                )
            }
            (Kind::Modular(mc), Data::Mod(v)) => {
                let name = format!("z{}", mc.m);
                join_terms(
                    v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, c)| (c.to_string(), power_name(&name, i))).collect(),
                )
            }
            (Kind::Poly { .. } | Kind::Quotient { .. }, Data::Poly(v)) => {
                let base = self.poly_base().unwrap();
                let var = self.top_variable().unwrap().to_string();
                join_terms(
                    v.iter()
                        .enumerate()
                        .filter(|(_, c)| !base.d_is_zero(c))
                        .map(|(i, c)| (base.fmt_data(c), power_name(&var, i)))
                        .collect(),
                )
            }
            (Kind::Product(parts), Data::Tuple(v)) => {
                let inner: Vec<String> = parts.iter().zip(v).map(|(p, c)| p.fmt_data(c)).collect();
                format!("({})", inner.join(", "))
            }
            _ => unreachable!("data does not match ring {}", self),
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.fmt_data(&self.data))
    }
}

impl Elem {
    /// True when this is an integer (or rational) constant, used when
    /// comparing traces against integers.
    pub fn equals_int(&self, k: i64) -> bool {
        *self == self.ring.from_int(k)
    }

    /// Sign-normalized absolute value for rational elements (test helper).
    pub fn abs_rational(&self) -> Option<BigRational> {
        self.to_rational().map(|q| q.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Ring {
        Ring::rationals()
    }

    #[test]
    fn descriptor_round_trip() {
        for s in ["Q", "Q(z8)", "GF(7)", "GF(5^2)", "Z/7^2", "Z[z3]/7", "Q[T]", "Q(z3)[T]/(1 + T^2)", "Prod(Q, GF(7))"] {
            let d: RingDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
            make_ring(&d).unwrap();
        }
    }

    #[test]
    fn gaussian_integers() {
        let r = Ring::cyclotomic(4).unwrap();
        let i = r.root_of_unity(4).unwrap();
        assert_eq!(&i * &i, r.from_int(-1));
    }

    #[test]
    fn field_of_order_25() {
        let r = Ring::finite_field(5, 2).unwrap();
        let g = r.root_of_unity(24).unwrap();
        assert_eq!(g.pow(24), r.one());
        assert_ne!(g.pow(12), r.one());
        assert_ne!(g.pow(8), r.one());
    }

    #[test]
    fn units_in_rationals() {
        let two = q().from_int(2);
        assert!(two.is_unit());
        assert_eq!(two.inverse().unwrap().to_string(), "1/2");
        assert!(!q().zero().is_unit());
    }

    #[test]
    fn ell_nilpotent_in_modular_layer() {
        let r = Ring::modular_cyclotomic(1, 7, 2).unwrap();
        let ell = r.from_int(7);
        assert!(!ell.is_unit());
        assert!(ell.is_nilpotent());
        assert!(!ell.is_zero());
    }

    #[test]
    fn unit_with_nilpotent_tail() {
        let r = Ring::parse("Z/7^2[T]").unwrap();
        let a = Elem::parse(&r, "1 + 7*T").unwrap();
        let b = a.inverse().unwrap();
        // multiply out with 49 = 0: (1 + 7T)(1 − 7T) = 1
        assert_eq!(b, Elem::parse(&r, "1 - 7*T").unwrap());
        assert!(!Elem::parse(&r, "1 + T").unwrap().is_unit());
    }

    #[test]
    fn quotient_units() {
        let r = Ring::parse("Q[T]/(T^2 + 1)").unwrap();
        let a = Elem::parse(&r, "1 + T").unwrap();
        let b = a.inverse().unwrap();
        assert_eq!(&a * &b, r.one());
        assert_eq!(b.to_string(), "1/2 - 1/2*T");
        let r = Ring::parse("Q[T]/(T^2 - 1)").unwrap();
        assert!(!Elem::parse(&r, "1 + T").unwrap().is_unit());
    }

    #[test]
    fn non_monic_modulus_rejected() {
        assert!(matches!(Ring::parse("Q[T]/(2*T^2 + 1)"), Err(Error::NonMonicModulus(_))));
        assert!(matches!(Ring::parse("GF(6)"), Err(Error::CompositeModulusPrime(6))));
    }

    #[test]
    fn product_componentwise() {
        let r = Ring::parse("Prod(Q, GF(7))").unwrap();
        let a = Elem::parse(&r, "(2, 3)").unwrap();
        assert_eq!(a.inverse().unwrap().to_string(), "(1/2, 5)");
        assert!(!Elem::parse(&r, "(2, 0)").unwrap().is_unit());
    }

    #[test]
    fn display_formats() {
        let r = Ring::cyclotomic(3).unwrap();
        let z = r.root_of_unity(3).unwrap();
        assert_eq!((&z - &z.pow(2)).to_string(), "1 + 2*z3");
        let r = Ring::parse("Q(z3)[T]").unwrap();
        let e = Elem::parse(&r, "(1 + z3)*T^2 - T").unwrap();
        assert_eq!(e.to_string(), "-T + (1 + z3)*T^2");
    }
}
