use std::fmt;

use num_integer::Integer;

use super::gauss::gauss_sum_at;
use super::psi::AdditiveCharacter;
use super::spectral::{coefficient_extension, epsilon0_prepared};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, SFraction};
use crate::matrix::Matrix;
use crate::ring::{extend_hom, Characteristic, Elem, Ring, RingHom};
use crate::weil::{artin_conductor, TameCharacter, TameRep, WDRep};

/// c·X^k.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub constant: Elem,
    pub exponent: i64,
}

impl Monomial {
    pub fn new(constant: Elem, exponent: i64) -> Monomial {
        Monomial { constant, exponent }
    }

    pub fn to_fraction(&self) -> SFraction {
        SFraction::from_laurent(LaurentPoly::monomial(&self.constant, self.exponent))
    }

    pub fn map(&self, h: &RingHom) -> Result<Monomial> {
        Ok(Monomial { constant: h.apply(&self.constant)?, exponent: self.exponent })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*X^{}", self.constant, self.exponent)
    }
}

fn require_char0_field(ring: &Ring) -> Result<()> {
    if ring.is_field() && ring.characteristic() == Characteristic::Zero {
        Ok(())
    } else {
        Err(Error::RingNotField(format!("{ring} is not a field of characteristic zero")))
    }
}

/// ε(χ, ψ) for a tame character of W_F at level 0: 1 when unramified and
/// otherwise u·Σ_{a ∈ k^×} χ̄⁻¹(a)ψ̄(a).
pub fn epsilon_character(chi: &TameCharacter, psi: &AdditiveCharacter) -> Result<Elem> {
    if chi.d != 1 {
        return Err(Error::InvalidInput(format!("character of W_E with [E:F] = {}", chi.d)));
    }
    if psi.level != 0 {
        return Err(Error::LevelUnsupported(psi.level));
    }
    let field = chi.field;
    let q = field.q();
    let (ring, emb) = crate::ring::adjoin_roots(chi.ring(), (q - 1).lcm(&field.p))?;
    if chi.is_unramified() {
        return Ok(ring.one());
    }
    let zeta = emb.apply(&chi.zeta)?;
    let z = ring.root_of_unity(q - 1)?;
    let mut w = ring.one();
    let mut j = 0;
    while w != zeta {
        w = &w * &z;
        j += 1;
    }
    let g = gauss_sum_at(&ring, q - 1, j, psi, field.p, field.f)?;
    Ok(emb.apply(&chi.u)? * g)
}

/// ε₀(ρ, ψ) over the field with ζ_N and ζ_p adjoined.
pub fn epsilon0_field(rep: &TameRep, psi: &AdditiveCharacter) -> Result<Elem> {
    require_char0_field(rep.ring())?;
    let (big, _) = coefficient_extension(rep)?;
    epsilon0_prepared(&big, psi)
}

/// det(−Φ | ρ^I).
fn det_minus_phi_invariants(rep: &TameRep) -> Result<Elem> {
    Ok(rep.phi_on_invariants()?.neg().det())
}

/// ε(ρ, ψ) = ε₀(ρ, ψ)·det(−Φ | ρ^I)⁻¹.
pub fn epsilon_field(rep: &TameRep, psi: &AdditiveCharacter) -> Result<Elem> {
    require_char0_field(rep.ring())?;
    let (big, _) = coefficient_extension(rep)?;
    let e0 = epsilon0_prepared(&big, psi)?;
    Ok(e0 * det_minus_phi_invariants(&big)?.inverse()?)
}

fn inverse_char(phi_restricted: &Matrix) -> Result<SFraction> {
    let ring = phi_restricted.ring();
    let den = LaurentPoly::from_poly(ring, phi_restricted.charpoly_rev());
    SFraction::new(LaurentPoly::one(ring), den)
}

/// L(ρ, X) = det(I − ΦX | ρ^I)⁻¹. Over a ring that is not a field ρ^I is
/// cut out by the idempotent e = (1/N)·Σ_k Σ^k, and det(I − ΦX | ρ^I) is
/// the reversed characteristic polynomial of Φe.
pub fn l_factor(rep: &TameRep) -> Result<SFraction> {
    if rep.ring().is_field() {
        return inverse_char(&rep.phi_on_invariants()?);
    }
    let ring = rep.ring();
    let n = rep.dim();
    let mut sum = Matrix::zeros(ring, n, n);
    let mut power = Matrix::identity(ring, n);
    for _ in 0..rep.order() {
        sum = sum.add(&power)?;
        power = power.mm(rep.sigma());
    }
    let e = sum.scale(&ring.from_int(rep.order() as i64).inverse()?);
    let den = LaurentPoly::from_poly(ring, rep.phi().mm(&e).charpoly_rev());
    SFraction::new(LaurentPoly::one(ring), den)
}

/// L((r, N), X) = det(I − ΦX | r_N^I)⁻¹.
pub fn l_factor_wd(rep: &WDRep) -> Result<SFraction> {
    inverse_char(&rep.phi().restrict(&rep.monodromy_invariants()?)?)
}

/// ε(ρ, X, ψ) = ε(ρ, ψ)·X^{a(ρ) + dim(ρ)·n(ψ)}.
pub fn epsilon_monomial(rep: &TameRep, psi: &AdditiveCharacter) -> Result<Monomial> {
    let a = artin_conductor(rep, 0)? as i64;
    Ok(Monomial::new(epsilon_field(rep, psi)?, a + rep.dim() as i64 * psi.level))
}

/// ε₀(ρ, X, ψ) = ε₀(ρ, ψ)·X^{Sw(ρ) + dim(ρ)·(n(ψ) + 1)}; Sw = 0 for tame ρ.
pub fn epsilon0_monomial(rep: &TameRep, psi: &AdditiveCharacter) -> Result<Monomial> {
    Ok(Monomial::new(epsilon0_field(rep, psi)?, rep.dim() as i64 * (psi.level + 1)))
}

/// det(−ΦX | r^I / r_N^I) as a monomial over the ring of `rep`.
fn quotient_monomial(rep: &WDRep) -> Result<Monomial> {
    let (basis_i, dim_i) = rep.tame().inertia_invariants()?;
    let basis_n = rep.monodromy_invariants()?;
    let k = dim_i - basis_n.cols();
    let full = rep.phi().restrict(&basis_i)?.det();
    let sub = rep.phi().restrict(&basis_n)?.det();
    let mut c = full * sub.inverse()?;
    if k % 2 == 1 {
        c = -c;
    }
    Ok(Monomial::new(c, k as i64))
}

/// ε((r, N), X, ψ) = ε(r, X, ψ)·det(−ΦX | r^I / r_N^I).
pub fn epsilon_wd(rep: &WDRep, psi: &AdditiveCharacter) -> Result<Monomial> {
    require_char0_field(rep.ring())?;
    let (big, _) = rep.with_roots(rep.tame().order().lcm(&rep.field().p))?;
    let e = epsilon_monomial(big.tame(), psi)?;
    let quot = quotient_monomial(&big)?;
    Ok(Monomial::new(e.constant * quot.constant, e.exponent + quot.exponent))
}

/// P(1/(qX)) for a polynomial P(X) given by its coefficients.
fn at_inverse_qx(coeffs: Vec<Elem>, q: &Elem) -> Result<LaurentPoly> {
    let ring = q.ring();
    Ok(LaurentPoly::from_poly(ring, coeffs).substitute(&q.inverse()?, -1))
}

/// L(r^∨, 1/(qX)) / L(r, X) for the invariant subspaces cut out by `inv`.
fn l_ratio(rep: &WDRep, dual: &WDRep, wd: bool) -> Result<SFraction> {
    let ring = rep.ring();
    let (p, pd) = if wd {
        (
            rep.phi().restrict(&rep.monodromy_invariants()?)?.charpoly_rev(),
            dual.phi().restrict(&dual.monodromy_invariants()?)?.charpoly_rev(),
        )
    } else {
        (rep.tame().phi_on_invariants()?.charpoly_rev(), dual.tame().phi_on_invariants()?.charpoly_rev())
    };
    SFraction::new(LaurentPoly::from_poly(ring, p), at_inverse_qx(pd, &rep.tame().q())?)
}

/// γ(ρ, X, ψ) = ε(ρ, X, ψ)·L(ρ^∨, 1/(qX)) / L(ρ, X).
pub fn gamma_field(rep: &TameRep, psi: &AdditiveCharacter) -> Result<SFraction> {
    gamma_wd(&WDRep::from_tame(rep.clone()), psi)
}

/// γ((r, N), X, ψ) = ε((r, N), X, ψ)·L((r^∨, N^∨), 1/(qX)) / L((r, N), X).
pub fn gamma_wd(rep: &WDRep, psi: &AdditiveCharacter) -> Result<SFraction> {
    require_char0_field(rep.ring())?;
    let (big, _) = rep.with_roots(rep.tame().order().lcm(&rep.field().p))?;
    let e = epsilon_wd(&big, psi)?;
    let ratio = l_ratio(&big, &big.dual()?, true)?;
    Ok(e.to_fraction().mul(&ratio))
}

/// Both sides of det(−ΦX | r^I/r_N^I) =
/// L(r^∨, 1/qX)/L(r, X) · L((r, N), X)/L((r^∨, N^∨), 1/qX).
pub fn lemma45_sides(rep: &WDRep) -> Result<(SFraction, SFraction)> {
    require_char0_field(rep.ring())?;
    let dual = rep.dual()?;
    let lhs = quotient_monomial(rep)?.to_fraction();
    let plain = l_ratio(rep, &dual, false)?;
    let with_n = l_ratio(rep, &dual, true)?;
    Ok((lhs, plain.div(&with_n)?))
}

pub fn lemma45_check(rep: &WDRep) -> bool {
    matches!(lemma45_sides(rep), Ok((l, r)) if l.equals(&r))
}

/// ε₀ of a tame representation with integral cyclotomic entries, reduced
/// along `reduce` to a ring of characteristic a power of ℓ.
///
/// `reduce` may start from the ring of `rep` or from its extension by ζ_N
/// and ζ_p; in the first case the first extension of `reduce` is used and
/// the target gains the same roots. The result lies in the target of the
/// extended map.
pub fn epsilon0_reduce_mod_ell(rep: &TameRep, psi: &AdditiveCharacter, reduce: &RingHom) -> Result<Elem> {
    let ell = rep.field().ell;
    if rep.ring().characteristic() != Characteristic::Zero {
        return Err(Error::BadPrimeChoice(format!("{} is not of characteristic zero", rep.ring())));
    }
    match reduce.target().characteristic() {
        Characteristic::Prime(l) | Characteristic::PrimePower(l, _) if l == ell => {}
        _ => return Err(Error::BadPrimeChoice(format!("{} does not have characteristic a power of {ell}", reduce.target()))),
    }
    let (big, emb) = coefficient_extension(rep)?;
    let ext = if reduce.source() == big.ring() {
        reduce.clone()
    } else if reduce.source() == rep.ring() {
        let m = big.ring().root_order();
        let (_, _, cands) = extend_hom(reduce, m).map_err(|e| Error::BadPrimeChoice(e.to_string()))?;
        cands.into_iter().next().unwrap()
    } else {
        return Err(Error::DescriptorMismatch(reduce.source().to_string(), rep.ring().to_string()));
    };
    debug_assert!(emb.target() == big.ring());
    let e0 = epsilon0_prepared(&big, psi)?;
    ext.apply(&e0).map_err(|e| match e {
        Error::NotIntegral(s) | Error::NotAUnit(s) => Error::BadPrimeChoice(format!("ε₀ does not reduce: {s}")),
        other => other,
    })
}

/// L, ε, ε₀ and γ of a Weil–Deligne representation over a field of
/// characteristic zero, all over the field with ζ_N and ζ_p adjoined.
#[derive(Clone, Debug)]
pub struct LocalFactors {
    pub l: SFraction,
    pub epsilon: Monomial,
    pub epsilon0: Monomial,
    pub gamma: SFraction,
}

pub fn local_factors(rep: &WDRep, psi: &AdditiveCharacter) -> Result<LocalFactors> {
    require_char0_field(rep.ring())?;
    let (big, _) = rep.with_roots(rep.tame().order().lcm(&rep.field().p))?;
    let l = l_factor_wd(&big)?;
    let epsilon = epsilon_wd(&big, psi)?;
    let epsilon0 = epsilon0_monomial(big.tame(), psi)?;
    let gamma = gamma_wd(&big, psi)?;
    let dual = big.dual()?;
    let l_dual = SFraction::new(
        LaurentPoly::one(big.ring()),
        at_inverse_qx(dual.phi().restrict(&dual.monodromy_invariants()?)?.charpoly_rev(), &big.tame().q())?,
    )?;
    let check = epsilon.to_fraction().mul(&l_dual).div(&l)?;
    if !check.equals(&gamma) {
        return Err(Error::RelationViolated(format!("γ = {gamma} but ε·L^∨/L = {check}")));
    }
    Ok(LocalFactors { l, epsilon, epsilon0, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::weil::{induct_unramified, sp, LocalFieldData};

    fn f3() -> LocalFieldData {
        LocalFieldData::new(3, 1, 7).unwrap()
    }

    fn unram(alpha: i64) -> TameRep {
        let q = Ring::rationals();
        TameRep::character(f3(), &q.from_int(alpha), &q.one()).unwrap()
    }

    fn quadratic(u: i64) -> TameRep {
        let q = Ring::rationals();
        TameRep::character(f3(), &q.from_int(u), &q.from_int(-1)).unwrap()
    }

    fn frac(ring: &Ring, s: &str) -> SFraction {
        SFraction::parse(ring, s).unwrap()
    }

    fn psi0() -> AdditiveCharacter {
        AdditiveCharacter::default()
    }

    #[test]
    fn l_over_a_polynomial_ring_specializes() {
        let r = Ring::parse("Q[T]").unwrap();
        let m = |rows: [[&str; 3]; 3]| Matrix::parse(&r, &rows.map(|row| row.map(String::from).to_vec())).unwrap();
        let phi = m([["T", "1", "0"], ["-1", "0", "0"], ["0", "0", "2"]]);
        let sigma = m([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]]);
        let rep = TameRep::new(f3(), phi, sigma).unwrap();
        let l = l_factor(&rep).unwrap();
        assert!(l.equals(&frac(&r, "1/(1 - T*X + X^2)")));
        let at3 = RingHom::from_image_strs(&r, &Ring::rationals(), &[("T", "3")]).unwrap();
        let direct = l_factor(&rep.base_change(&at3).unwrap()).unwrap();
        assert!(l.specialize(&at3).unwrap().equals(&direct));
    }

    #[test]
    fn character_epsilons() {
        let q = Ring::rationals();
        let chi = TameCharacter::new(f3(), 1, q.from_int(4), q.one()).unwrap();
        assert!(epsilon_character(&chi, &psi0()).unwrap().is_one());
        let chi = TameCharacter::new(f3(), 1, q.one(), q.from_int(-1)).unwrap();
        let e = epsilon_character(&chi, &psi0()).unwrap();
        let z3 = e.ring().root_of_unity(3).unwrap();
        // Σ_{a ∈ {1, 2}} χ̄(a)ζ₃^a with χ̄(2) = −1
        let g = &z3 - &z3.pow(2);
        assert_eq!(e, g);
        let chi5 = TameCharacter::new(f3(), 1, q.from_int(5), q.from_int(-1)).unwrap();
        assert_eq!(epsilon_character(&chi5, &psi0()).unwrap(), g.scale(5));
        assert!(matches!(epsilon_character(&chi, &AdditiveCharacter::new(1, 1)), Err(Error::LevelUnsupported(1))));
    }

    #[test]
    fn epsilon0_examples() {
        assert!(epsilon0_field(&unram(2), &psi0()).unwrap().equals_int(-2));
        let q = Ring::rationals();
        let chi = TameCharacter::new(f3(), 1, q.from_int(5), q.from_int(-1)).unwrap();
        assert_eq!(epsilon0_field(&quadratic(5), &psi0()).unwrap(), epsilon_character(&chi, &psi0()).unwrap());
        let sum = unram(2).direct_sum(&quadratic(5)).unwrap();
        let e = epsilon0_field(&sum, &psi0()).unwrap();
        let prod = epsilon0_field(&unram(2), &psi0()).unwrap() * epsilon0_field(&quadratic(5), &psi0()).unwrap();
        assert_eq!(e.ring(), prod.ring());
        assert_eq!(e, prod);
    }

    #[test]
    fn l_factors() {
        let q = Ring::rationals();
        assert_eq!(l_factor(&unram(2)).unwrap(), frac(&q, "1 / (1 - 2*X)"));
        assert_eq!(l_factor(&quadratic(5)).unwrap(), SFraction::one(&q));
        let s2 = sp(2, &q, f3()).unwrap();
        // ker N = span(e₂), where Φ acts by 1/3
        assert_eq!(l_factor_wd(&s2).unwrap(), frac(&q, "1 / (1 - 1/3*X)"));
    }

    #[test]
    fn monomial_exponents() {
        let e = epsilon_monomial(&unram(2), &psi0()).unwrap();
        assert!(e.constant.is_one());
        assert_eq!(e.exponent, 0);
        let e0 = epsilon0_monomial(&unram(2), &psi0()).unwrap();
        assert!(e0.constant.equals_int(-2));
        assert_eq!(e0.exponent, 1);
        assert_eq!(epsilon_monomial(&quadratic(1), &psi0()).unwrap().exponent, 1);
        assert_eq!(epsilon0_monomial(&quadratic(1), &psi0()).unwrap().exponent, 1);
        let r = Ring::cyclotomic(8).unwrap();
        let f9 = LocalFieldData::new(3, 2, 7).unwrap();
        let xi = TameRep::character(f9, &r.from_int(5), &r.root_of_unity(8).unwrap()).unwrap();
        let ind = induct_unramified(&xi, 2).unwrap();
        let psi1 = AdditiveCharacter::new(1, 1);
        assert_eq!(epsilon_monomial(&ind, &psi1).unwrap().exponent, 4);
        assert_eq!(epsilon0_monomial(&ind, &psi1).unwrap().exponent, 4);
    }

    #[test]
    fn level_twist_matches_coset_integral() {
        // shifting ψ to level 1 rescales the integration domain by ϖ⁻¹:
        // ε(χ, ψ₁) = χ(ϖ)·q·ε(χ, ψ₀)
        let e0 = epsilon_field(&quadratic(5), &psi0()).unwrap();
        let e1 = epsilon_field(&quadratic(5), &AdditiveCharacter::new(1, 1)).unwrap();
        assert_eq!(e1, e0.scale(15));
    }

    #[test]
    fn gamma_examples() {
        let g = gamma_field(&unram(2), &psi0()).unwrap();
        // −qαX(1 − αX)/(1 − qαX) at q = 3, α = 2
        assert_eq!(g, frac(g.ring(), "(-6*X + 12*X^2) / (1 - 6*X)"));
        let g = gamma_field(&quadratic(5), &psi0()).unwrap();
        let eps = epsilon_field(&quadratic(5), &psi0()).unwrap();
        assert_eq!(g, Monomial::new(eps, 1).to_fraction());
        let q = Ring::rationals();
        let st = sp(2, &q, f3()).unwrap().tensor(&WDRep::from_tame(unram(2))).unwrap();
        assert_eq!(gamma_wd(&st, &psi0()).unwrap(), gamma_field(st.tame(), &psi0()).unwrap());
    }

    #[test]
    fn lemma45_examples() {
        let q = Ring::rationals();
        assert!(lemma45_check(&WDRep::from_tame(unram(2))));
        assert!(lemma45_check(&sp(2, &q, f3()).unwrap()));
        let s3 = sp(3, &q, f3()).unwrap().tensor(&WDRep::from_tame(unram(5))).unwrap();
        assert!(lemma45_check(&s3));
        let (lhs, _) = lemma45_sides(&sp(2, &q, f3()).unwrap()).unwrap();
        // r^I / r_N^I is the line e₁ with Φ = 1
        assert_eq!(lhs, frac(&q, "-X"));
    }

    #[test]
    fn reduction_mod_seven() {
        let big = Ring::cyclotomic(3).unwrap();
        let gf7 = Ring::finite_field(7, 1).unwrap();
        let red = RingHom::from_image_strs(&big, &gf7, &[("z3", "2")]).unwrap();
        let e = epsilon0_reduce_mod_ell(&quadratic(1), &psi0(), &red).unwrap();
        assert!(e.equals_int(5));
        let red_q = RingHom::from_images(&Ring::rationals(), &gf7, &Default::default()).unwrap();
        let e = epsilon0_reduce_mod_ell(&unram(3), &psi0(), &red_q).unwrap();
        assert!(e.equals_int(-3));
        let bad = RingHom::identity(&big);
        assert!(matches!(epsilon0_reduce_mod_ell(&quadratic(1), &psi0(), &bad), Err(Error::BadPrimeChoice(_))));
    }

    #[test]
    fn local_factors_cross_check() {
        let q = Ring::rationals();
        let st = sp(2, &q, f3()).unwrap().direct_sum(&WDRep::from_tame(quadratic(2))).unwrap();
        let lf = local_factors(&st, &psi0()).unwrap();
        assert_eq!(lf.epsilon0.exponent, 3);
    }
}
