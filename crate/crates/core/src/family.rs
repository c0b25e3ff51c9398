//! γ_R for tame families over rings of the tower, the identities of the
//! tame comparison theorem, and specialization to fibers.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::factors::{
    coefficient_extension, epsilon0_prepared, epsilon0_reduce_mod_ell, gamma_field, AdditiveCharacter, Monomial,
};
use crate::laurent::{LaurentPoly, SFraction};
use crate::matrix::Matrix;
use crate::ring::{adjoin_roots, extend_hom, galois_action, Characteristic, Elem, Ring, RingHom};
use crate::weil::TameRep;

/// det(I − M·X).
pub fn char_rev(m: &Matrix) -> LaurentPoly {
    LaurentPoly::from_poly(m.ring(), m.charpoly_rev())
}

/// T = 1 + Σ + … + Σ^{q−1}.
pub fn t_operator(rep: &TameRep) -> Matrix {
    rep.t_operator()
}

/// det T, which is a unit for every valid tame representation and equals
/// q^{dim ρ^I} over fields of characteristic zero.
pub fn det_t(rep: &TameRep) -> Result<Elem> {
    let d = rep.t_operator().det();
    if !d.is_unit() {
        return Err(Error::DetTNotUnit(d.to_string()));
    }
    let ring = rep.ring();
    if ring.is_field() && ring.characteristic() == Characteristic::Zero {
        let (_, inv) = rep.inertia_invariants()?;
        if d != rep.q().pow(inv as u64) {
            return Err(Error::RelationViolated(format!("det T = {d} but q^dim ρ^I = {}", rep.q().pow(inv as u64))));
        }
    }
    Ok(d)
}

#[derive(Clone, Debug)]
pub struct GammaResult {
    pub gamma: SFraction,
    pub epsilon0: Elem,
    /// Swan conductor of the tame part, always 0.
    pub swan: u64,
    /// Sw + dim ρ·(n(ψ) + 1), before any wild factor.
    pub exponent: i64,
    pub det_t: Elem,
    /// ε₀(ρ^{>0}, X, ψ) when a wild summand was supplied.
    pub wild: Option<Monomial>,
}

/// γ_R(ρ, X, ψ) = ε₀·X^{dim ρ·(n(ψ)+1)}·det T·Char(Φ)/Char(TΦ).
///
/// `epsilon0` may lie in a cyclotomic enlargement of the ring of `rep`, in
/// which case the result is over that enlargement. A precomputed wild
/// ε₀-monomial is multiplied in when given.
pub fn gamma_family(
    rep: &TameRep,
    psi: &AdditiveCharacter,
    epsilon0: &Elem,
    wild: Option<&Monomial>,
) -> Result<GammaResult> {
    let rep = if epsilon0.ring() == rep.ring() {
        rep.clone()
    } else {
        let (big, emb) = adjoin_roots(rep.ring(), epsilon0.ring().root_order())?;
        if &big != epsilon0.ring() {
            return Err(Error::DescriptorMismatch(epsilon0.ring().to_string(), rep.ring().to_string()));
        }
        rep.base_change(&emb)?
    };
    let dt = det_t(&rep)?;
    let t = rep.t_operator();
    let exponent = rep.dim() as i64 * (psi.level + 1);
    let num = char_rev(rep.phi()).scale(&(epsilon0 * &dt)).shift(exponent);
    let den = char_rev(&t.mm(rep.phi()));
    let mut gamma = SFraction::new(num, den)?;
    if let Some(w) = wild {
        gamma = gamma.mul(&w.to_fraction());
    }
    Ok(GammaResult { gamma, epsilon0: epsilon0.clone(), swan: 0, exponent, det_t: dt, wild: wild.cloned() })
}

/// A family ρ = ρ₀ ⊗_{R₀} R presented by a representation over a reduced
/// characteristic-zero ring R₀ and a homomorphism f: R₀ → R.
#[derive(Clone, Debug)]
pub struct FamilyPresentation {
    pub rep0: TameRep,
    pub f: RingHom,
}

impl FamilyPresentation {
    pub fn new(rep0: TameRep, f: RingHom) -> Result<FamilyPresentation> {
        if f.source() != rep0.ring() {
            return Err(Error::DescriptorMismatch(f.source().to_string(), rep0.ring().to_string()));
        }
        if !rep0.ring().is_char0_reduced() {
            return Err(Error::InvalidInput(format!(
                "{} is not a reduced ring of characteristic zero",
                rep0.ring()
            )));
        }
        Ok(FamilyPresentation { rep0, f })
    }

    /// The constant family over the ring of `rep`.
    pub fn constant(rep: TameRep) -> Result<FamilyPresentation> {
        let f = RingHom::identity(rep.ring());
        FamilyPresentation::new(rep, f)
    }

    pub fn base(&self) -> &Ring {
        self.rep0.ring()
    }

    pub fn target(&self) -> &Ring {
        self.f.target()
    }

    /// ρ = ρ₀ ⊗ R.
    pub fn rep(&self) -> Result<TameRep> {
        self.rep0.base_change(&self.f)
    }

    /// Order of roots adjoined to R₀ for the eigen-decomposition of Σ.
    pub fn root_level(&self) -> u64 {
        self.rep0.order().lcm(&self.rep0.field().p)
    }
}

/// ε₀ of a family, computed over R₀′ = R₀[ζ_N, ζ_p] and carried to
/// R′ = R[ζ_N, ζ_p] along an extension f′ of f.
#[derive(Clone, Debug)]
pub struct FamilyEpsilon0 {
    pub value: Elem,
    /// ε₀ before applying f′.
    pub base_value: Elem,
    pub f_ext: RingHom,
    /// R → R′.
    pub target_emb: RingHom,
    /// Whether ε₀ over R₀′ is fixed by the automorphisms of R₀′ over R₀[ζ_p].
    pub descends: bool,
}

pub fn epsilon0_family(pres: &FamilyPresentation, psi: &AdditiveCharacter) -> Result<FamilyEpsilon0> {
    let (big0, _) = coefficient_extension(&pres.rep0)?;
    let base_value = epsilon0_prepared(&big0, psi)?;
    let big_ring = big0.ring();
    let fixed = pres.base().root_order().lcm(&pres.rep0.field().p);
    let l = big_ring.root_order();
    let mut descends = true;
    for a in (1..l).filter(|a| a.gcd(&l) == 1 && a % fixed == 1 % fixed) {
        if galois_action(&base_value, a)? != base_value {
            descends = false;
            break;
        }
    }
    let (_, target_emb, cands) = extend_hom(&pres.f, l)?;
    let f_ext = cands.into_iter().next().unwrap();
    let value = f_ext.apply(&base_value)?;
    if !value.is_unit() {
        return Err(Error::NotAUnit(format!("ε₀ = {value} in {}", value.ring())));
    }
    Ok(FamilyEpsilon0 { value, base_value, f_ext, target_emb, descends })
}

/// γ_R of a family together with the data needed to specialize it.
#[derive(Clone, Debug)]
pub struct FamilyGamma {
    pub result: GammaResult,
    pub epsilon0: FamilyEpsilon0,
    /// ρ over R′.
    pub rep: TameRep,
}

pub fn family_gamma(pres: &FamilyPresentation, psi: &AdditiveCharacter) -> Result<FamilyGamma> {
    let e0 = epsilon0_family(pres, psi)?;
    let rep = pres.rep()?.base_change(&e0.target_emb)?;
    let result = gamma_family(&rep, psi, &e0.value, None)?;
    Ok(FamilyGamma { result, epsilon0: e0, rep })
}

/// A point of Spec R: a homomorphism to a field, with a characteristic-zero
/// lift through R₀ when the field has characteristic ℓ.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub name: String,
    pub hom: RingHom,
    pub lift: Option<Lift>,
}

/// point: R₀ → K with K a cyclotomic field, and reduce: K → κ, such that
/// reduce ∘ point = hom ∘ f.
#[derive(Clone, Debug)]
pub struct Lift {
    pub point: RingHom,
    pub reduce: RingHom,
}

#[derive(Clone, Debug)]
pub struct FiberReport {
    pub name: String,
    pub characteristic: Characteristic,
    /// f(γ_R).
    pub specialized: SFraction,
    /// γ of the fiber, computed independently.
    pub direct: SFraction,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct InterpolationReport {
    pub gamma: SFraction,
    pub descends: bool,
    pub fibers: Vec<FiberReport>,
}

impl InterpolationReport {
    pub fn all_pass(&self) -> bool {
        self.fibers.iter().all(|f| f.pass)
    }
}

/// The smallest ring of the tower containing both rings' roots, with the
/// canonical embeddings.
pub fn common_extension(a: &Ring, b: &Ring) -> Result<(RingHom, RingHom)> {
    let m = a.root_order().lcm(&b.root_order());
    let (ca, ea) = adjoin_roots(a, m)?;
    let (cb, eb) = adjoin_roots(b, m)?;
    if ca != cb {
        return Err(Error::DescriptorMismatch(ca.to_string(), cb.to_string()));
    }
    Ok((ea, eb))
}

pub fn fractions_agree(x: &SFraction, y: &SFraction) -> Result<bool> {
    let (ex, ey) = common_extension(x.ring(), y.ring())?;
    Ok(x.specialize(&ex)?.equals(&y.specialize(&ey)?))
}

/// b with base^b = image, compared in a common extension.
fn relative_residue(image: &Elem, base: &Elem, p: u64, level: i64) -> Result<AdditiveCharacter> {
    let (ei, eb) = common_extension(image.ring(), base.ring())?;
    let x = ei.apply(image)?;
    let z = eb.apply(base)?;
    let mut w = z.clone();
    for b in 1..p {
        if w == x {
            return Ok(AdditiveCharacter::new(level, b));
        }
        w = &w * &z;
    }
    Err(Error::InvalidHom(format!("{image} is not a power of {base}")))
}

/// The additive character of level `level` whose residue root is `image`,
/// relative to the canonical ζ_p over `ring`.
fn residue_of(image: &Elem, ring: &Ring, p: u64, level: i64) -> Result<AdditiveCharacter> {
    let (with_p, _) = adjoin_roots(ring, p)?;
    relative_residue(image, &with_p.root_of_unity(p)?, p, level)
}

fn check_lift(pres: &FamilyPresentation, fiber: &Fiber, lift: &Lift) -> Result<()> {
    let k = lift.point.target();
    if !(k.is_field() && k.characteristic() == Characteristic::Zero) {
        return Err(Error::InvalidHom(format!("lift target {k} is not a field of characteristic zero")));
    }
    if lift.point.source() != pres.base() || lift.reduce.source() != k || lift.reduce.target() != fiber.hom.target() {
        return Err(Error::InvalidHom(format!("lift maps of fiber {} do not compose", fiber.name)));
    }
    for (name, x) in pres.base().generators() {
        let down = lift.reduce.apply(&lift.point.apply(&x)?)?;
        let across = fiber.hom.apply(&pres.f.apply(&x)?)?;
        if down != across {
            return Err(Error::InvalidHom(format!("lift of fiber {} disagrees on {name}", fiber.name)));
        }
    }
    Ok(())
}

/// Compare f(γ_R) with the γ of one fiber.
pub fn check_fiber(
    pres: &FamilyPresentation,
    fam: &FamilyGamma,
    psi: &AdditiveCharacter,
    fiber: &Fiber,
) -> Result<FiberReport> {
    let g = &fiber.hom;
    if g.source() != pres.target() {
        return Err(Error::DescriptorMismatch(g.source().to_string(), pres.target().to_string()));
    }
    let kappa = g.target();
    if !kappa.is_field() {
        return Err(Error::RingNotField(kappa.to_string()));
    }
    let p = pres.rep0.field().p;
    let l = fam.rep.ring().root_order();
    let (_, _, cands) = extend_hom(g, l)?;
    let g_ext = cands.into_iter().next().unwrap();
    let specialized = fam.result.gamma.specialize(&g_ext)?;
    // ψ on the fiber side: the image of ζ_p^a under g′ ∘ f′
    let zeta_p = psi.root(fam.epsilon0.base_value.ring(), p)?;
    let psi_image = g_ext.apply(&fam.epsilon0.f_ext.apply(&zeta_p)?)?;
    let fiber_rep = pres.rep()?.base_change(g)?;
    let characteristic = kappa.characteristic();
    let direct = match characteristic {
        Characteristic::Zero => {
            let psi_k = residue_of(&psi_image, kappa, p, psi.level)?;
            gamma_field(&fiber_rep, &psi_k)?
        }
        Characteristic::Prime(_) => {
            let lift = fiber
                .lift
                .as_ref()
                .ok_or_else(|| Error::BadPrimeChoice(format!("fiber {} has no characteristic-zero lift", fiber.name)))?;
            check_lift(pres, fiber, lift)?;
            let rep_k = pres.rep0.base_change(&lift.point)?;
            let (big_k, _) = coefficient_extension(&rep_k)?;
            let (_, _, reds) = extend_hom(&lift.reduce, big_k.ring().root_order())?;
            let red = reds.into_iter().next().unwrap();
            let zp = red.apply(&big_k.ring().root_of_unity(p)?)?;
            // red sends the canonical ζ_p of K′ to zp
            let psi_k = relative_residue(&psi_image, &zp, p, psi.level)?;
            let e0 = epsilon0_reduce_mod_ell(&rep_k, &psi_k, &red)?;
            gamma_family(&fiber_rep, psi, &e0, None)?.gamma
        }
        other => return Err(Error::RingNotField(format!("fiber of characteristic {other:?}"))),
    };
    let pass = fractions_agree(&specialized, &direct)?;
    Ok(FiberReport { name: fiber.name.clone(), characteristic, specialized, direct, pass })
}

/// γ_R and its comparison with every fiber.
pub fn verify_interpolation(
    pres: &FamilyPresentation,
    psi: &AdditiveCharacter,
    fibers: &[Fiber],
) -> Result<InterpolationReport> {
    let fam = family_gamma(pres, psi)?;
    let fibers = fibers.iter().map(|f| check_fiber(pres, &fam, psi, f)).collect::<Result<Vec<_>>>()?;
    Ok(InterpolationReport { gamma: fam.result.gamma, descends: fam.epsilon0.descends, fibers })
}

/// det T = q^{dim ρ^I} over a field of characteristic zero.
pub fn thm61_det_check(rep: &TameRep) -> Result<bool> {
    let (_, inv) = rep.inertia_invariants()?;
    Ok(rep.t_operator().det() == rep.q().pow(inv as u64))
}

/// Both sides of Char(Φ)/Char(TΦ) = L(ρ, qX)/L(ρ, X).
pub fn thm61_sides(rep: &TameRep) -> Result<(SFraction, SFraction)> {
    let t = rep.t_operator();
    let lhs = SFraction::new(char_rev(rep.phi()), char_rev(&t.mm(rep.phi())))?;
    let inv = rep.phi_on_invariants()?;
    let rhs = SFraction::new(char_rev(&inv), char_rev(&inv.scale(&rep.q())))?;
    Ok((lhs, rhs))
}

pub fn thm61_check(rep: &TameRep) -> bool {
    matches!(thm61_sides(rep), Ok((l, r)) if l.equals(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::{epsilon0_field, epsilon_field};
    use crate::weil::{induct_unramified, LocalFieldData};

    fn f3() -> LocalFieldData {
        LocalFieldData::new(3, 1, 7).unwrap()
    }

    fn line(ring: &Ring, u: &str, zeta: &str) -> TameRep {
        TameRep::character(f3(), &Elem::parse(ring, u).unwrap(), &Elem::parse(ring, zeta).unwrap()).unwrap()
    }

    fn hom(src: &Ring, tgt: &Ring, images: &[(&str, &str)]) -> RingHom {
        RingHom::from_image_strs(src, tgt, images).unwrap()
    }

    fn psi0() -> AdditiveCharacter {
        AdditiveCharacter::default()
    }

    #[test]
    fn t_operator_cases() {
        let q = Ring::rationals();
        assert_eq!(t_operator(&line(&q, "2", "1")), Matrix::scalar(&q, 1, &q.from_int(3)));
        assert!(t_operator(&line(&q, "2", "-1")).is_identity());
        assert_eq!(char_rev(&Matrix::zeros(&q, 2, 2)), LaurentPoly::one(&q));
        assert_eq!(char_rev(&Matrix::diagonal(&q, &[q.from_int(5)])), LaurentPoly::from_poly(&q, vec![q.one(), q.from_int(-5)]));
    }

    #[test]
    fn det_t_cases() {
        let q = Ring::rationals();
        assert!(det_t(&line(&q, "2", "1")).unwrap().equals_int(3));
        assert!(det_t(&line(&q, "2", "-1")).unwrap().is_one());
        let r = Ring::cyclotomic(8).unwrap();
        let f9 = LocalFieldData::new(3, 2, 7).unwrap();
        let xi = TameRep::character(f9, &r.from_int(5), &r.root_of_unity(8).unwrap()).unwrap();
        let ind = induct_unramified(&xi, 2).unwrap();
        let t = ind.t_operator();
        // 2×2 by hand: T = diag(1 + ζ + ζ², 1 + ζ³ + ζ⁶) and the product telescopes
        let z = r.root_of_unity(8).unwrap();
        let by_hand = (r.one() + z.clone() + z.pow(2)) * (r.one() + z.pow(3) + z.pow(6));
        assert_eq!(t.det(), by_hand);
        assert!(det_t(&ind).unwrap().is_one());
    }

    #[test]
    fn gamma_family_over_fields() {
        let q = Ring::rationals();
        let rep = line(&q, "2", "1");
        let g = gamma_family(&rep, &psi0(), &epsilon0_field(&rep, &psi0()).unwrap(), None).unwrap();
        assert_eq!(g.exponent, 1);
        // (−α)·X·3·(1 − αX)/(1 − 3αX) = −qαX(1 − αX)/(1 − qαX)
        assert_eq!(g.gamma, SFraction::parse(g.gamma.ring(), "(-6*X + 12*X^2) / (1 - 6*X)").unwrap());
        assert_eq!(g.gamma, gamma_field(&rep, &psi0()).unwrap());
        let rep = line(&q, "5", "-1");
        let g = gamma_family(&rep, &psi0(), &epsilon0_field(&rep, &psi0()).unwrap(), None).unwrap();
        let eps = epsilon_field(&rep, &psi0()).unwrap();
        assert_eq!(g.gamma, Monomial::new(eps, 1).to_fraction());
    }

    /// ℚ[T] modulo T(T−1)(T−2)(T−3), where 1 + T is a unit.
    fn four_points() -> Ring {
        Ring::parse("Q[T]/(T^4 - 6*T^3 + 11*T^2 - 6*T)").unwrap()
    }

    #[test]
    fn unramified_line_family() {
        let r = four_points();
        let rep = line(&r, "1 + T", "1");
        let pres = FamilyPresentation::constant(rep.clone()).unwrap();
        let fam = family_gamma(&pres, &psi0()).unwrap();
        let big = fam.rep.ring().clone();
        let expected = SFraction::parse(&big, "(-3*(1 + T)*X*(1 - (1 + T)*X)) / (1 - 3*(1 + T)*X)").unwrap();
        assert_eq!(fam.result.gamma, expected);
        assert!(fam.epsilon0.descends);
        let q = Ring::rationals();
        let at3 = FamilyPresentation::new(rep.clone(), hom(&r, &q, &[("T", "3")])).unwrap();
        assert!(epsilon0_family(&at3, &psi0()).unwrap().value.equals_int(-4));
        let fibers: Vec<Fiber> = (0..3)
            .map(|t| Fiber { name: format!("T={t}"), hom: hom(&r, &q, &[("T", &t.to_string())]), lift: None })
            .collect();
        let report = verify_interpolation(&pres, &psi0(), &fibers).unwrap();
        assert!(report.all_pass(), "{report:?}");
        for (t, fr) in report.fibers.iter().enumerate() {
            let alpha = line(&q, &(t + 1).to_string(), "1");
            assert!(fractions_agree(&fr.direct, &gamma_field(&alpha, &psi0()).unwrap()).unwrap());
        }
    }

    #[test]
    fn polynomial_family() {
        // unramified of dimension 2 with trace T and determinant 2
        let qt = Ring::parse("Q[T]").unwrap();
        let phi = Matrix::parse(&qt, &[vec!["0".into(), "-2".into()], vec!["1".into(), "T".into()]]).unwrap();
        let rep = TameRep::new(f3(), phi, Matrix::identity(&qt, 2)).unwrap();
        let pres = FamilyPresentation::constant(rep).unwrap();
        let fam = family_gamma(&pres, &psi0()).unwrap();
        let expected = SFraction::parse(fam.rep.ring(), "(18*X^2*(1 - T*X + 2*X^2)) / (1 - 3*T*X + 18*X^2)").unwrap();
        assert_eq!(fam.result.gamma, expected);
        let q = Ring::rationals();
        let fibers: Vec<Fiber> = [0, 3, -5]
            .iter()
            .map(|t| Fiber { name: format!("T={t}"), hom: hom(&qt, &q, &[("T", &t.to_string())]), lift: None })
            .collect();
        assert!(verify_interpolation(&pres, &psi0(), &fibers).unwrap().all_pass());
    }

    #[test]
    fn constant_family_matches_field() {
        let r = Ring::cyclotomic(8).unwrap();
        let f9 = LocalFieldData::new(3, 2, 7).unwrap();
        let xi = TameRep::character(f9, &r.from_int(5), &r.root_of_unity(8).unwrap()).unwrap();
        let ind = induct_unramified(&xi, 2).unwrap();
        let pres = FamilyPresentation::constant(ind.clone()).unwrap();
        let e = epsilon0_family(&pres, &psi0()).unwrap();
        assert_eq!(e.value, epsilon0_field(&ind, &psi0()).unwrap());
        let id = Fiber { name: "id".into(), hom: RingHom::identity(&r), lift: None };
        assert!(verify_interpolation(&pres, &psi0(), &[id]).unwrap().all_pass());
    }

    #[test]
    fn reduction_fibers() {
        let qt = four_points();
        let q = Ring::rationals();
        let gf7 = Ring::finite_field(7, 1).unwrap();
        let rep = line(&qt, "1 + T", "-1");
        let pres = FamilyPresentation::constant(rep).unwrap();
        let fibers: Vec<Fiber> = [0, 1, 2, 3]
            .iter()
            .map(|t| Fiber {
                name: format!("T={t} mod 7"),
                hom: hom(&qt, &gf7, &[("T", &t.to_string())]),
                lift: Some(Lift { point: hom(&qt, &q, &[("T", &t.to_string())]), reduce: hom(&q, &gf7, &[]) }),
            })
            .collect();
        let report = verify_interpolation(&pres, &psi0(), &fibers).unwrap();
        assert!(report.all_pass(), "{report:?}");
        // a lift that does not reduce to the fiber is rejected
        let bad = Fiber {
            name: "bad".into(),
            hom: hom(&qt, &gf7, &[("T", "1")]),
            lift: Some(Lift { point: hom(&qt, &q, &[("T", "2")]), reduce: hom(&q, &gf7, &[]) }),
        };
        assert!(matches!(verify_interpolation(&pres, &psi0(), &[bad]), Err(Error::InvalidHom(_))));
    }

    #[test]
    fn family_into_modular_layer() {
        let qt = four_points();
        let z7 = Ring::parse("Z/7").unwrap();
        let rep = line(&qt, "1 + T", "-1");
        let pres = FamilyPresentation::new(rep, hom(&qt, &z7, &[("T", "3")])).unwrap();
        let e = epsilon0_family(&pres, &psi0()).unwrap();
        // the fiber over ℚ at T = 3, reduced along the same choice of ζ₃
        let q = Ring::rationals();
        let fiber_rep = line(&q, "4", "-1");
        let (k_big, _) = coefficient_extension(&fiber_rep).unwrap();
        let z3 = e.base_value.ring().root_of_unity(3).unwrap();
        let image = e.f_ext.apply(&z3).unwrap();
        let red = RingHom::from_images(
            k_big.ring(),
            image.ring(),
            &[("z3".to_string(), image.clone())].into_iter().collect(),
        )
        .unwrap();
        let direct = epsilon0_reduce_mod_ell(&fiber_rep, &psi0(), &red).unwrap();
        assert_eq!(e.value, direct);
    }

    #[test]
    fn thm61_examples() {
        let q = Ring::rationals();
        let rep = line(&q, "2", "1");
        let (l, r) = thm61_sides(&rep).unwrap();
        assert_eq!(l, SFraction::parse(&q, "(1 - 2*X) / (1 - 6*X)").unwrap());
        assert_eq!(l, r);
        let (l, r) = thm61_sides(&line(&q, "2", "-1")).unwrap();
        assert_eq!(l, SFraction::one(&q));
        assert_eq!(r, SFraction::one(&q));
        assert!(thm61_det_check(&line(&q, "2", "1")).unwrap());
    }
}
