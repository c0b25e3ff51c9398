//! Canonical roots of unity and adjunction of roots.
//!
//! Every ring has a root order L such that all roots of unity of order
//! dividing L are available under the names `z<m>`, with z_a = z_L^{L/a}. In
//! ℚ(ζ_M) and its modular reductions z_M is the generator x (with z_{2M} =
//! −x^{(M+1)/2} when M is odd); in 𝔽_{ℓ^r} z_{ℓ^r−1} is the Conway generator,
//! so the names are compatible with the standard embeddings of finite fields.

use std::collections::HashMap;

use num_integer::Integer;

use super::{finite, Characteristic, Data, Elem, Kind, Ring, RingDescriptor};
use crate::error::{Error, Result};
use crate::ring::RingHom;

/// m ≡ 2 mod 4 gives the same cyclotomic field as m/2.
fn normalize(m: u64) -> u64 {
    if m % 4 == 2 {
        m / 2
    } else {
        m
    }
}

fn cyc_root_order(m: u64) -> u64 {
    if m.is_multiple_of(2) {
        m
    } else {
        2 * m
    }
}

impl Ring {
    /// Largest L with all L-th roots of unity canonically present.
    pub fn root_order(&self) -> u64 {
        match self.kind() {
            Kind::Rationals => 2,
            Kind::Cyclotomic(c) => cyc_root_order(c.m),
            Kind::Finite(f) => f.order - 1,
            Kind::Modular(mc) if mc.ell == 2 => mc.m,
            Kind::Modular(mc) => cyc_root_order(mc.m),
            Kind::Poly { base, .. } => base.root_order(),
            Kind::Quotient { poly, .. } => poly.root_order(),
            Kind::Product(parts) => parts.iter().map(|p| p.root_order()).fold(0, |a, b| a.gcd(&b)),
        }
    }

    /// The canonical primitive m-th root of unity z_m.
    pub fn root_of_unity(&self, m: u64) -> Result<Elem> {
        if m == 0 {
            return Err(Error::RootsUnavailable("order 0".into()));
        }
        let big_l = self.root_order();
        if !big_l.is_multiple_of(m) {
            return Err(Error::RootsUnavailable(format!("{self} has no canonical primitive {m}-th root of unity")));
        }
        if let Some(d) = self.0.roots.lock().unwrap().get(&m) {
            return Ok(self.elem(d.clone()));
        }
        let top = self.top_root();
        let z = top.pow(big_l / m);
        self.0.roots.lock().unwrap().insert(m, z.data.clone());
        Ok(z)
    }

    /// Σ_k coeffs[k]·z_l^k.
    pub fn root_power_sum(&self, l: u64, coeffs: &[i64]) -> Result<Elem> {
        if l == 0 || !self.root_order().is_multiple_of(l) {
            return Err(Error::RootsUnavailable(format!("{self} has no canonical primitive {l}-th root of unity")));
        }
        if let Kind::Cyclotomic(c) = self.kind() {
            let step = self.root_order() / l;
            // z_L = x for even m and −x^{(m+1)/2} for odd m
            let (odd, e) = if c.m % 2 == 0 { (false, 1) } else { (true, c.m.div_ceil(2)) };
            let mut wide = vec![0i64; c.m as usize];
            for (k, &ck) in coeffs.iter().enumerate() {
                if ck == 0 {
                    continue;
                }
                let big_k = (k as u64 % l) * step;
                let idx = ((big_k % (2 * c.m)) * e % c.m) as usize;
                let sign = if odd && big_k % 2 == 1 { -1 } else { 1 };
                wide[idx] += sign * ck;
            }
            return Ok(self.elem(Data::Cyc(c.from_small(&wide))));
        }
        let z = self.root_of_unity(l)?;
        let mut acc = self.zero();
        let mut w = self.one();
        for &ck in coeffs {
            if ck != 0 {
                acc = acc + w.scale(ck);
            }
            w = &w * &z;
        }
        Ok(acc)
    }

    /// z_L for L the root order.
    fn top_root(&self) -> Elem {
        match self.kind() {
            Kind::Rationals => self.from_int(-1),
            Kind::Cyclotomic(c) => {
                let x = self.elem(Data::Cyc(c.monomial(1)));
                if c.m % 2 == 0 {
                    x
                } else {
                    -x.pow(c.m.div_ceil(2))
                }
            }
            Kind::Finite(f) => self.elem(Data::Ff(f.generator())),
            Kind::Modular(mc) => {
                let x = self.elem(Data::Mod(mc.monomial(1)));
                if mc.m % 2 == 0 || mc.ell == 2 {
                    x
                } else {
                    -x.pow(mc.m.div_ceil(2))
                }
            }
            Kind::Poly { base, .. } => self.embed_const(&base.top_root()),
            Kind::Quotient { .. } => {
                let base = self.poly_base().unwrap();
                self.embed_const(&base.top_root())
            }
            Kind::Product(parts) => {
                let l = self.root_order();
                let comps: Vec<Elem> = parts.iter().map(|p| p.root_of_unity(l).unwrap()).collect();
                self.from_components(&comps)
            }
        }
    }

    /// The leaf at the bottom of a chain of polynomial rings and quotients.
    fn leaf(&self) -> Ring {
        match self.kind() {
            Kind::Poly { base, .. } => base.leaf(),
            Kind::Quotient { poly, .. } => poly.leaf(),
            _ => self.clone(),
        }
    }
}

/// Descriptor of the ring obtained by adjoining m-th roots of unity.
fn adjoined_descriptor(ring: &Ring, m: u64) -> Result<RingDescriptor> {
    if ring.root_order().is_multiple_of(m) {
        return Ok(ring.desc().clone());
    }
    Ok(match ring.kind() {
        Kind::Rationals => RingDescriptor::Cyclotomic(within_bound(normalize(2u64.lcm(&m)))?),
        Kind::Cyclotomic(c) => RingDescriptor::Cyclotomic(within_bound(normalize(cyc_root_order(c.m).lcm(&m)))?),
        Kind::Modular(mc) => {
            if m.gcd(&mc.ell) != 1 {
                return Err(Error::RootsUnavailable(format!("{m} shares a factor with the characteristic of {ring}")));
            }
            let new_m = within_bound(if mc.ell == 2 { mc.m.lcm(&m) } else { normalize(cyc_root_order(mc.m).lcm(&m)) })?;
            RingDescriptor::ModularCyclotomic { m: new_m, ell: mc.ell, n: mc.n }
        }
        Kind::Finite(f) => {
            if m.gcd(&f.ell) != 1 {
                return Err(Error::RootsUnavailable(format!("{m} shares a factor with the characteristic of {ring}")));
            }
            let mut r = f.r;
            loop {
                r += f.r;
                let order = finite::checked_pow(f.ell, r)
                    .filter(|&o| o <= 1 << 32)
                    .ok_or_else(|| Error::RootsUnavailable(format!("field containing {m}-th roots over {ring} too large")))?;
                if (order - 1) % m == 0 {
                    break;
                }
            }
            RingDescriptor::FiniteField { ell: f.ell, r }
        }
        Kind::Poly { base, var } => RingDescriptor::PolyExt { base: Box::new(adjoined_descriptor(base, m)?), var: var.clone() },
        Kind::Quotient { poly, .. } => {
            let new_poly = Ring::new(&adjoined_descriptor(poly, m)?)?;
            let emb = embedding(poly, &new_poly)?;
            let f = emb.apply(&ring_modulus(ring))?;
            RingDescriptor::Quotient { base: Box::new(new_poly.desc().clone()), modulus: f.to_string() }
        }
        Kind::Product(parts) => {
            RingDescriptor::Product(parts.iter().map(|p| adjoined_descriptor(p, m)).collect::<Result<_>>()?)
        }
    })
}

/// The modulus of a quotient ring as an element of its polynomial ring.
fn ring_modulus(ring: &Ring) -> Elem {
    let Kind::Quotient { poly, modulus } = ring.kind() else { unreachable!() };
    let base = poly.poly_base().unwrap();
    let coeffs: Vec<Elem> = modulus.iter().map(|d| base.elem(d.clone())).collect();
    poly.from_coefficients(&coeffs)
}

/// Canonical embedding: every generator goes to the element of the same name.
fn embedding(source: &Ring, target: &Ring) -> Result<RingHom> {
    match source.product_parts() {
        Some(parts) => {
            let tparts = target.product_parts().unwrap();
            let comps = parts
                .iter()
                .zip(tparts)
                .enumerate()
                .map(|(i, (s, t))| RingHom::projection(source, i, embedding(s, t)?))
                .collect::<Result<Vec<_>>>()?;
            RingHom::tuple(source, target, comps)
        }
        None => RingHom::from_images(source, target, &HashMap::new()),
    }
}

/// Environment variable overriding [`DEFAULT_ROOT_BOUND`].
pub const ROOT_BOUND_VAR: &str = "TAMEGAMMA_ROOT_BOUND";

/// Largest m for which primitive m-th roots of unity are adjoined on demand.
pub const DEFAULT_ROOT_BOUND: u64 = 20_000;

fn within_bound(m: u64) -> Result<u64> {
    let bound = root_bound();
    if m > bound {
        return Err(Error::RootsUnavailable(format!("order {m} exceeds the adjunction bound {bound} ({ROOT_BOUND_VAR})")));
    }
    Ok(m)
}

pub fn root_bound() -> u64 {
    static BOUND: std::sync::OnceLock<u64> = std::sync::OnceLock::new();
    *BOUND.get_or_init(|| {
        std::env::var(ROOT_BOUND_VAR).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_ROOT_BOUND)
    })
}

/// Adjoin primitive m-th roots of unity; returns the enlarged ring and the
/// canonical embedding (the identity when the roots are already present).
pub fn adjoin_roots(ring: &Ring, m: u64) -> Result<(Ring, RingHom)> {
    if m == 0 {
        return Err(Error::RootsUnavailable("order 0".into()));
    }
    let desc = adjoined_descriptor(ring, m)?;
    let big = Ring::new(&desc)?;
    let emb = embedding(ring, &big)?;
    Ok((big, emb))
}

/// The automorphism ζ ↦ ζ^a of every adjoined root of unity, fixing
/// polynomial variables. `a` must be prime to the root orders involved.
/// Applies ζ ↦ ζ^a for every root of unity of the ring to `e`.
pub fn galois_action(e: &Elem, a: u64) -> Result<Elem> {
    let ring = e.ring();
    match (ring.kind(), &e.data) {
        (Kind::Rationals, _) => Ok(e.clone()),
        (Kind::Cyclotomic(c), Data::Cyc(x)) if a.gcd(&c.m) == 1 => Ok(ring.elem(Data::Cyc(c.galois(x, a)))),
        _ => cyclotomic_automorphism(ring, a)?.apply(e),
    }
}

pub fn cyclotomic_automorphism(ring: &Ring, a: u64) -> Result<RingHom> {
    if let Some(parts) = ring.product_parts() {
        let comps = parts
            .iter()
            .enumerate()
            .map(|(i, p)| RingHom::projection(ring, i, cyclotomic_automorphism(p, a)?))
            .collect::<Result<Vec<_>>>()?;
        return RingHom::tuple(ring, ring, comps);
    }
    let images: HashMap<String, Elem> = ring
        .generators()
        .into_iter()
        .filter(|(n, _)| n.starts_with('z') && n[1..].parse::<u64>().is_ok())
        .map(|(n, g)| (n, g.pow(a)))
        .collect();
    RingHom::from_images(ring, ring, &images)
}

/// m with every factor of the characteristic of `ring` removed.
fn prime_to_characteristic(ring: &Ring, mut m: u64) -> u64 {
    if let Characteristic::Prime(l) | Characteristic::PrimePower(l, _) = ring.characteristic() {
        while m.is_multiple_of(l) {
            m /= l;
        }
    }
    m
}

/// Extensions of `h: R → S` to the rings with m-th roots adjoined.
///
/// Returns the embeddings R → R', S → S' and every extension h': R' → S'
/// with h' ∘ (R → R') = (S → S') ∘ h whose new root image is a canonical
/// root power in S'. Sources that are products get one extension.
pub fn extend_hom(h: &RingHom, m: u64) -> Result<(RingHom, RingHom, Vec<RingHom>)> {
    let (src_big, src_emb) = adjoin_roots(h.source(), m)?;
    let (tgt_big, tgt_emb) = adjoin_roots(h.target(), prime_to_characteristic(h.target(), m))?;
    let base_image = h.then(&tgt_emb)?;
    let candidates = extensions(&src_big, &base_image, &tgt_big)?;
    if candidates.is_empty() {
        return Err(Error::RootsUnavailable(format!("no extension of {h} to {src_big} -> {tgt_big}")));
    }
    Ok((src_emb, tgt_emb, candidates))
}

/// All homomorphisms `src_big → tgt` restricting to `h` (a map from a subring
/// of `src_big`) whose leaf-generator image is a canonical root power.
fn extensions(src_big: &Ring, h: &RingHom, tgt: &Ring) -> Result<Vec<RingHom>> {
    let src = h.source();
    if let Some(tparts) = tgt.product_parts() {
        // extend into each component separately and keep the first choice
        let mut comps = Vec::new();
        for (i, tp) in tparts.iter().enumerate() {
            let proj = RingHom::projection(tgt, i, RingHom::identity(tp))?;
            let hi = h.then(&proj)?;
            let e = extensions(src_big, &hi, tp)?;
            comps.push(e.into_iter().next().ok_or_else(|| Error::RootsUnavailable(format!("component {tp}")))?);
        }
        return Ok(vec![RingHom::tuple(src_big, tgt, comps)?]);
    }
    if src_big.product_parts().is_some() {
        return Err(Error::RootsUnavailable(format!("extension out of the product {src_big}")));
    }
    // images of the variables are forced by h
    let mut fixed: HashMap<String, Elem> = HashMap::new();
    for (name, g) in src.generators() {
        if !(name.starts_with('z') && name[1..].parse::<u64>().is_ok()) {
            fixed.insert(name, h.apply(&g)?);
        }
    }
    let leaf = src_big.leaf();
    let old_leaf = src.leaf();
    let Some((new_name, _)) = leaf.generators().into_iter().next() else {
        return Ok(vec![RingHom::from_images(src_big, tgt, &fixed)?]);
    };
    let new_order: u64 = new_name[1..].parse().unwrap();
    // the old generator is z_new^{new/old} under the canonical embedding
    let old = old_leaf.generators().into_iter().next();
    let (old_exp, old_image) = match &old {
        Some((old_name, g)) => {
            let old_order: u64 = old_name[1..].parse().unwrap();
            let image = h.apply(&lift_to(src, g))?;
            (new_order / old_order, Some(image))
        }
        None => (0, None),
    };
    // in characteristic ℓ the ℓ-power roots of unity collapse to 1
    let target_order = prime_to_characteristic(tgt, new_order);
    let big_l = tgt.root_order();
    if !big_l.is_multiple_of(target_order) {
        return Ok(vec![]);
    }
    let base_root = tgt.root_of_unity(target_order)?;
    let mut out = Vec::new();
    let mut w = tgt.one();
    for _k in 0..target_order {
        w = &w * &base_root;
        if let Some(img) = &old_image {
            if &w.pow(old_exp) != img {
                continue;
            }
        }
        let mut images = fixed.clone();
        images.insert(new_name.clone(), w.clone());
        if let Ok(hom) = RingHom::from_images(src_big, tgt, &images) {
            out.push(hom);
        }
    }
    Ok(out)
}

/// Embed a leaf element into a polynomial ring or quotient over that leaf.
fn lift_to(ring: &Ring, leaf_elem: &Elem) -> Elem {
    if leaf_elem.ring() == ring {
        return leaf_elem.clone();
    }
    let base = ring.poly_base().unwrap();
    ring.embed_const(&lift_to(&base, leaf_elem))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoin_to_rationals() {
        let q = Ring::rationals();
        let (r, h) = adjoin_roots(&q, 1).unwrap();
        assert_eq!(r, q);
        assert_eq!(h.apply(&q.from_int(3)).unwrap(), q.from_int(3));
        let (r, _) = adjoin_roots(&q, 8).unwrap();
        assert_eq!(r.descriptor(), &RingDescriptor::Cyclotomic(8));
        let (r, _) = adjoin_roots(&q, 6).unwrap();
        assert_eq!(r.descriptor(), &RingDescriptor::Cyclotomic(3));
    }

    #[test]
    fn eighth_roots_over_f7() {
        let f7 = Ring::finite_field(7, 1).unwrap();
        let (r, h) = adjoin_roots(&f7, 8).unwrap();
        // 8 divides 48 = |𝔽₄₉^×|
        assert_eq!(r.descriptor(), &RingDescriptor::FiniteField { ell: 7, r: 2 });
        let z = r.root_of_unity(8).unwrap();
        assert_eq!(z.pow(4), r.from_int(-1));
        assert_eq!(h.apply(&f7.from_int(5)).unwrap(), r.from_int(5));
        assert_eq!(h.apply(&f7.root_of_unity(6).unwrap()).unwrap(), r.root_of_unity(6).unwrap());
    }

    #[test]
    fn roots_of_odd_cyclotomic() {
        let r = Ring::cyclotomic(3).unwrap();
        let z6 = r.root_of_unity(6).unwrap();
        assert_eq!(z6.pow(2), r.root_of_unity(3).unwrap());
        assert_eq!(z6.pow(3), r.from_int(-1));
    }

    #[test]
    fn unavailable_roots() {
        let r = Ring::modular_cyclotomic(1, 5, 2).unwrap();
        assert!(matches!(adjoin_roots(&r, 10), Err(Error::RootsUnavailable(_))));
        assert!(matches!(Ring::rationals().root_of_unity(3), Err(Error::RootsUnavailable(_))));
    }

    #[test]
    fn automorphism_of_cyclotomic_polynomial_ring() {
        let r = Ring::parse("Q(z5)[T]").unwrap();
        let s = cyclotomic_automorphism(&r, 2).unwrap();
        let a = Elem::parse(&r, "z5 + T").unwrap();
        assert_eq!(s.apply(&a).unwrap(), Elem::parse(&r, "z5^2 + T").unwrap());
    }

    #[test]
    fn extension_is_compatible() {
        let src = Ring::cyclotomic(3).unwrap();
        let tgt = Ring::finite_field(7, 1).unwrap();
        let h = RingHom::from_image_strs(&src, &tgt, &[("z3", "4")]).unwrap();
        let (se, te, cands) = extend_hom(&h, 8).unwrap();
        assert!(!cands.is_empty());
        let z = src.root_of_unity(3).unwrap();
        for c in &cands {
            assert_eq!(c.apply(&se.apply(&z).unwrap()).unwrap(), te.apply(&h.apply(&z).unwrap()).unwrap());
        }
    }
}
