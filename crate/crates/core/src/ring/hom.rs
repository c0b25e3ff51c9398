//! Ring homomorphisms between rings of the tower.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Data, Elem, Kind, Ring};
use crate::error::{Error, Result};

/// A homomorphism, determined by the images of the source's generators.
///
/// Construction checks that the images satisfy the source's defining
/// relations (Φ_m for cyclotomic leaves, the Conway polynomial and ℓ = 0 for
/// finite fields, ℓⁿ = 0 for modular layers, the modulus of a quotient).
#[derive(Clone)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    map: HomMap,
}

#[derive(Clone)]
enum HomMap {
    /// Leaf source: images of x^0, …, x^{deg−1} (empty for ℚ).
    Leaf { powers: Vec<Elem> },
    /// Polynomial ring or quotient: coefficient map and image of the variable.
    Poly { base: Box<RingHom>, var: Elem },
    /// Product source: project to a component, then map.
    Project { index: usize, then: Box<RingHom> },
    /// Product target: one map per component.
    Tuple(Vec<RingHom>),
}

impl fmt::Debug for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingHom({} -> {}: {})", self.source, self.target, self)
    }
}

impl fmt::Display for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.map {
            HomMap::Tuple(parts) => {
                let inner: Vec<String> = parts.iter().map(|h| format!("[{h}]")).collect();
                write!(f, "({})", inner.join(", "))
            }
            HomMap::Project { index, then } => write!(f, "pr{index} then [{then}]"),
            _ => {
                let images: Vec<String> =
                    self.generator_images().into_iter().map(|(n, e)| format!("{n} -> {e}")).collect();
                if images.is_empty() {
                    write!(f, "canonical")
                } else {
                    write!(f, "{}", images.join(", "))
                }
            }
        }
    }
}

impl RingHom {
    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn identity(ring: &Ring) -> RingHom {
        RingHom::from_images(ring, ring, &HashMap::new()).expect("identity is a homomorphism")
    }

    /// Homomorphism with the given generator images; generators without an
    /// explicit image go to the element of the same name in the target (a
    /// canonical root of unity or a variable).
    pub fn from_images(source: &Ring, target: &Ring, images: &HashMap<String, Elem>) -> Result<RingHom> {
        for e in images.values() {
            if e.ring() != target {
                return Err(Error::DescriptorMismatch(e.ring().to_string(), target.to_string()));
            }
        }
        if let Some(parts) = target.product_parts() {
            let comps = parts
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let imgs = images.iter().map(|(k, v)| (k.clone(), target.components(v)[i].clone())).collect();
                    RingHom::from_images(source, p, &imgs)
                })
                .collect::<Result<_>>()?;
            return Ok(RingHom { source: source.clone(), target: target.clone(), map: HomMap::Tuple(comps) });
        }
        let image_of = |name: &str| -> Result<Elem> {
            if let Some(e) = images.get(name) {
                return Ok(e.clone());
            }
            if let Some(k) = name.strip_prefix('z').and_then(|s| s.parse::<u64>().ok()) {
                return target.root_of_unity(k);
            }
            target.variable(name).map_err(|_| Error::InvalidHom(format!("no image for {name} in {target}")))
        };
        let map = match source.kind() {
            Kind::Rationals => HomMap::Leaf { powers: vec![] },
            Kind::Cyclotomic(_) | Kind::Finite(_) | Kind::Modular(_) => {
                let gens = source.generators();
                let (deg, w) = match gens.first() {
                    Some((name, _)) => (leaf_degree(source), Some(image_of(name)?)),
                    None => (1, None),
                };
                let step = w.clone().unwrap_or_else(|| target.one());
                let mut powers = Vec::with_capacity(deg);
                let mut cur = target.one();
                for _ in 0..deg {
                    powers.push(cur.clone());
                    cur = &cur * &step;
                }
                let hom = RingHom { source: source.clone(), target: target.clone(), map: HomMap::Leaf { powers } };
                hom.check_leaf_relations(w.as_ref())?;
                hom
                    .map
            }
            Kind::Poly { base, var } => {
                let b = RingHom::from_images(base, target, images)?;
                HomMap::Poly { base: Box::new(b), var: image_of(var)? }
            }
            Kind::Quotient { poly, modulus } => {
                let Kind::Poly { base, var } = poly.kind() else { unreachable!() };
                let b = RingHom::from_images(base, target, images)?;
                let v = image_of(var)?;
                let hom = RingHom { source: source.clone(), target: target.clone(), map: HomMap::Poly { base: Box::new(b), var: v } };
                let f = hom.eval_poly(modulus)?;
                if !f.is_zero() {
                    return Err(Error::InvalidHom(format!("quotient modulus maps to {f}, not 0")));
                }
                hom.map
            }
            Kind::Product(_) => {
                return Err(Error::InvalidHom(format!(
                    "a map out of the product {source} needs an explicit projection"
                )))
            }
        };
        Ok(RingHom { source: source.clone(), target: target.clone(), map })
    }

    /// Like [`RingHom::from_images`], with images written in element syntax.
    pub fn from_image_strs(source: &Ring, target: &Ring, images: &[(&str, &str)]) -> Result<RingHom> {
        let parsed = images
            .iter()
            .map(|(k, v)| Ok((k.to_string(), Elem::parse(target, v)?)))
            .collect::<Result<HashMap<_, _>>>()?;
        RingHom::from_images(source, target, &parsed)
    }

    /// Projection of a product onto one component followed by `then`.
    pub fn projection(source: &Ring, index: usize, then: RingHom) -> Result<RingHom> {
        let parts = source
            .product_parts()
            .ok_or_else(|| Error::InvalidHom(format!("{source} is not a product")))?;
        if parts.get(index) != Some(then.source()) {
            return Err(Error::DescriptorMismatch(
                parts.get(index).map(|p| p.to_string()).unwrap_or_default(),
                then.source().to_string(),
            ));
        }
        Ok(RingHom { source: source.clone(), target: then.target.clone(), map: HomMap::Project { index, then: Box::new(then) } })
    }

    /// Map into a product from one map per component.
    pub fn tuple(source: &Ring, target: &Ring, comps: Vec<RingHom>) -> Result<RingHom> {
        let parts = target
            .product_parts()
            .ok_or_else(|| Error::InvalidHom(format!("{target} is not a product")))?;
        if parts.len() != comps.len()
            || parts.iter().zip(&comps).any(|(p, h)| p != h.target() || h.source() != source)
        {
            return Err(Error::InvalidHom(format!("component maps do not match {source} -> {target}")));
        }
        Ok(RingHom { source: source.clone(), target: target.clone(), map: HomMap::Tuple(comps) })
    }

    fn check_leaf_relations(&self, w: Option<&Elem>) -> Result<()> {
        let target = &self.target;
        let check_root = |coeffs: &[BigInt], what: &str| -> Result<()> {
            if let Some(w) = w {
                let val = eval_int_poly(coeffs, w);
                if !val.is_zero() {
                    return Err(Error::InvalidHom(format!("{what}({w}) = {val} ≠ 0 in {target}")));
                }
            }
            Ok(())
        };
        match self.source.kind() {
            Kind::Cyclotomic(c) => {
                check_root(&super::cyclotomic::cyclotomic_poly(c.m), &format!("Φ_{}", c.m))?;
            }
            Kind::Finite(f) => {
                if !target.from_int(f.ell as i64).is_zero() {
                    return Err(Error::InvalidHom(format!("{target} does not have characteristic {}", f.ell)));
                }
                let conway: Vec<BigInt> = f.modulus.iter().map(|&c| BigInt::from(c)).collect();
                check_root(&conway, "conway")?;
            }
            Kind::Modular(mc) => {
                if !target.from_int(mc.modulus as i64).is_zero() {
                    return Err(Error::InvalidHom(format!("{} ≠ 0 in {target}", mc.modulus)));
                }
                check_root(&super::cyclotomic::cyclotomic_poly(mc.m), &format!("Φ_{}", mc.m))?;
            }
            _ => {}
        }
        Ok(())
    }

    /// Images of the named generators of the source.
    pub fn generator_images(&self) -> Vec<(String, Elem)> {
        self.source
            .generators()
            .into_iter()
            .filter_map(|(n, g)| self.apply(&g).ok().map(|e| (n, e)))
            .collect()
    }

    pub fn apply(&self, a: &Elem) -> Result<Elem> {
        if a.ring() != &self.source {
            return Err(Error::DescriptorMismatch(a.ring().to_string(), self.source.to_string()));
        }
        self.apply_data(&a.data)
    }

    fn apply_data(&self, a: &Data) -> Result<Elem> {
        let t = &self.target;
        match (&self.map, a) {
            (HomMap::Tuple(parts), _) => {
                let comps = parts.iter().map(|h| h.apply_data(a).map(|e| e.data)).collect::<Result<_>>()?;
                Ok(t.elem(Data::Tuple(comps)))
            }
            (HomMap::Leaf { .. }, Data::Rat(q)) => t.from_rational(q),
            (HomMap::Leaf { powers }, Data::Cyc(c)) => {
                let mut acc = t.zero();
                for (i, n) in c.num.iter().enumerate() {
                    if !n.is_zero() {
                        acc = acc + &powers[i] * &t.from_bigint(n);
                    }
                }
                if c.den == BigInt::from(1) {
                    return Ok(acc);
                }
                let inv = t.from_bigint(&c.den).inverse().map_err(|_| {
                    Error::NotIntegral(format!("{} has denominator {} not invertible in {t}", self.source.fmt_data(a), c.den))
                })?;
                Ok(acc * inv)
            }
            (HomMap::Leaf { powers }, Data::Ff(v) | Data::Mod(v)) => {
                let mut acc = t.zero();
                for (i, &c) in v.iter().enumerate() {
                    if c != 0 {
                        acc = acc + &powers[i] * &t.from_bigint(&BigInt::from(c));
                    }
                }
                Ok(acc)
            }
            (HomMap::Poly { .. }, Data::Poly(coeffs)) => self.eval_poly(coeffs),
            (HomMap::Project { index, then }, Data::Tuple(v)) => then.apply_data(&v[*index]),
            _ => unreachable!("homomorphism data mismatch"),
        }
    }

    fn eval_poly(&self, coeffs: &[Data]) -> Result<Elem> {
        let HomMap::Poly { base, var } = &self.map else { unreachable!() };
        let mut acc = self.target.zero();
        for c in coeffs.iter().rev() {
            acc = &acc * var + base.apply_data(c)?;
        }
        Ok(acc)
    }

    /// `then ∘ self`.
    pub fn then(&self, g: &RingHom) -> Result<RingHom> {
        if g.source != self.target {
            return Err(Error::DescriptorMismatch(self.target.to_string(), g.source.to_string()));
        }
        let target = g.target.clone();
        let map = match (&self.map, &g.map) {
            (_, HomMap::Tuple(gs)) => HomMap::Tuple(gs.iter().map(|gk| self.then(gk)).collect::<Result<_>>()?),
            (HomMap::Tuple(hs), HomMap::Project { index, then }) => return hs[*index].then(then),
            (HomMap::Leaf { powers }, _) => {
                HomMap::Leaf { powers: powers.iter().map(|p| g.apply(p)).collect::<Result<_>>()? }
            }
            (HomMap::Poly { base, var }, _) => HomMap::Poly { base: Box::new(base.then(g)?), var: g.apply(var)? },
            (HomMap::Project { index, then }, _) => HomMap::Project { index: *index, then: Box::new(then.then(g)?) },
            (HomMap::Tuple(_), _) => unreachable!("product target with non-product map"),
        };
        Ok(RingHom { source: self.source.clone(), target, map })
    }
}

fn leaf_degree(ring: &Ring) -> usize {
    match ring.kind() {
        Kind::Cyclotomic(c) => c.deg,
        Kind::Finite(f) => f.r as usize,
        Kind::Modular(mc) => mc.deg,
        _ => 1,
    }
}

fn eval_int_poly(coeffs: &[BigInt], w: &Elem) -> Elem {
    let r = w.ring();
    let mut acc = r.zero();
    for c in coeffs.iter().rev() {
        acc = &acc * w + r.from_bigint(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_at_five() {
        let qt = Ring::parse("Q[T]").unwrap();
        let q = Ring::rationals();
        let h = RingHom::from_image_strs(&qt, &q, &[("T", "5")]).unwrap();
        assert_eq!(h.apply(&Elem::parse(&qt, "T^2 + 1").unwrap()).unwrap(), q.from_int(26));
    }

    #[test]
    fn reduction_of_eisenstein_integers() {
        let src = Ring::cyclotomic(3).unwrap();
        let tgt = Ring::finite_field(7, 1).unwrap();
        // cube roots of unity in 𝔽₇ are 1, 2, 4
        let h = RingHom::from_image_strs(&src, &tgt, &[("z3", "2")]).unwrap();
        let a = Elem::parse(&src, "1 + z3").unwrap();
        assert_eq!(h.apply(&a).unwrap(), tgt.from_int(3));
        assert!(matches!(RingHom::from_image_strs(&src, &tgt, &[("z3", "3")]), Err(Error::InvalidHom(_))));
        // 1 is a cube root of unity but not a root of Φ₃ in 𝔽₇
        assert!(RingHom::from_image_strs(&src, &tgt, &[("z3", "1")]).is_err());
    }

    #[test]
    fn reduction_into_modular_layer() {
        let src = Ring::cyclotomic(3).unwrap();
        let tgt = Ring::modular_cyclotomic(3, 7, 1).unwrap();
        let h = RingHom::identity(&src).then(&RingHom::from_images(&src, &tgt, &HashMap::new()).unwrap()).unwrap();
        let a = Elem::parse(&src, "1/2 + z3").unwrap();
        assert_eq!(h.apply(&a).unwrap().to_string(), "4 + z3");
        let b = Elem::parse(&src, "1/7").unwrap();
        assert!(matches!(h.apply(&b), Err(Error::NotIntegral(_))));
    }

    #[test]
    fn mismatched_source_is_reported() {
        let q = Ring::rationals();
        let h = RingHom::identity(&q);
        let other = Ring::cyclotomic(3).unwrap().one();
        assert!(matches!(h.apply(&other), Err(Error::DescriptorMismatch(_, _))));
    }

    #[test]
    fn quotient_relation_checked() {
        let src = Ring::parse("Q[T]/(T^2 + 1)").unwrap();
        let tgt = Ring::cyclotomic(4).unwrap();
        assert!(RingHom::from_image_strs(&src, &tgt, &[("T", "z4")]).is_ok());
        assert!(RingHom::from_image_strs(&src, &tgt, &[("T", "1")]).is_err());
    }
}
