use super::field::LocalFieldData;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{adjoin_roots, Elem, Ring, RingHom};

/// Search bound for the multiplicative order of Σ.
pub const DEFAULT_ORDER_BOUND: u64 = 1_000_000;

/// A representation of the tame Weil group: Φ = ρ(Fr) and Σ = ρ(σ) with
/// ΦΣΦ⁻¹ = Σ^q and Σ of finite order prime to p.
#[derive(Clone, Debug, PartialEq)]
pub struct TameRep {
    field: LocalFieldData,
    phi: Matrix,
    sigma: Matrix,
    order: u64,
}

fn check_square_pair(phi: &Matrix, sigma: &Matrix) -> Result<()> {
    if phi.ring() != sigma.ring() {
        return Err(Error::DescriptorMismatch(phi.ring().to_string(), sigma.ring().to_string()));
    }
    if !phi.is_square() || !sigma.is_square() || phi.rows() != sigma.rows() {
        return Err(Error::DimensionMismatch(format!(
            "Φ is {}x{} and Σ is {}x{}",
            phi.rows(),
            phi.cols(),
            sigma.rows(),
            sigma.cols()
        )));
    }
    Ok(())
}

/// Smallest divisor k of `multiple` with m^k = I.
fn order_dividing(m: &Matrix, multiple: u64) -> u64 {
    let mut divisors: Vec<u64> = (1..=multiple).filter(|d| multiple.is_multiple_of(*d)).collect();
    divisors.sort_unstable();
    divisors.into_iter().find(|&d| m.pow(d).is_identity()).unwrap_or(multiple)
}

impl TameRep {
    pub fn new(field: LocalFieldData, phi: Matrix, sigma: Matrix) -> Result<TameRep> {
        TameRep::with_order_bound(field, phi, sigma, DEFAULT_ORDER_BOUND)
    }

    pub fn with_order_bound(field: LocalFieldData, phi: Matrix, sigma: Matrix, bound: u64) -> Result<TameRep> {
        check_square_pair(&phi, &sigma)?;
        if !phi.is_invertible() {
            return Err(Error::NotAUnit(format!("det Φ = {} is not a unit", phi.det())));
        }
        let lhs = phi.mm(&sigma);
        let rhs = sigma.pow(field.q()).mm(&phi);
        if lhs != rhs {
            return Err(Error::RelationViolated(format!("ΦΣΦ⁻¹ ≠ Σ^{} for Φ = {phi}, Σ = {sigma}", field.q())));
        }
        let order = sigma.multiplicative_order(bound).ok_or(Error::NotFiniteOrder(bound))?;
        if order % field.p == 0 {
            return Err(Error::OrderDivisibleByP { order, p: field.p });
        }
        Ok(TameRep { field, phi, sigma, order })
    }

    pub fn parse(field: LocalFieldData, ring: &Ring, phi: &[Vec<String>], sigma: &[Vec<String>]) -> Result<TameRep> {
        TameRep::new(field, Matrix::parse(ring, phi)?, Matrix::parse(ring, sigma)?)
    }

    /// The one-dimensional representation Fr ↦ u, σ ↦ ζ.
    pub fn character(field: LocalFieldData, u: &Elem, zeta: &Elem) -> Result<TameRep> {
        let ring = u.ring();
        TameRep::new(field, Matrix::diagonal(ring, std::slice::from_ref(u)), Matrix::diagonal(ring, std::slice::from_ref(zeta)))
    }

    pub fn field(&self) -> &LocalFieldData {
        &self.field
    }

    pub fn ring(&self) -> &Ring {
        self.phi.ring()
    }

    pub fn dim(&self) -> usize {
        self.phi.rows()
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    /// N_Σ, the multiplicative order of Σ.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn q(&self) -> Elem {
        self.ring().from_int(self.field.q() as i64)
    }

    pub fn is_unramified(&self) -> bool {
        self.order == 1
    }

    fn same_context(&self, o: &TameRep) -> Result<()> {
        if self.ring() != o.ring() {
            return Err(Error::DescriptorMismatch(self.ring().to_string(), o.ring().to_string()));
        }
        if self.field != o.field {
            return Err(Error::InvalidInput(format!("local fields differ: {:?} vs {:?}", self.field, o.field)));
        }
        Ok(())
    }

    pub fn direct_sum(&self, o: &TameRep) -> Result<TameRep> {
        self.same_context(o)?;
        TameRep::new(
            self.field,
            Matrix::block_diag(&[self.phi.clone(), o.phi.clone()]),
            Matrix::block_diag(&[self.sigma.clone(), o.sigma.clone()]),
        )
    }

    pub fn direct_sum_all(reps: &[TameRep]) -> Result<TameRep> {
        let (first, rest) = reps.split_first().ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        rest.iter().try_fold(first.clone(), |acc, r| acc.direct_sum(r))
    }

    /// Twist by the unramified character Fr ↦ u.
    pub fn twist_unramified(&self, u: &Elem) -> Result<TameRep> {
        if !u.is_unit() {
            return Err(Error::NotAUnit(u.to_string()));
        }
        TameRep::new(self.field, self.phi.scale(u), self.sigma.clone())
    }

    /// The contragredient: transpose-inverses of Φ and Σ.
    pub fn dual(&self) -> Result<TameRep> {
        Ok(TameRep {
            field: self.field,
            phi: self.phi.inverse()?.transpose(),
            sigma: self.sigma.inverse()?.transpose(),
            order: self.order,
        })
    }

    /// Conjugate by an invertible change of basis P: (PΦP⁻¹, PΣP⁻¹).
    pub fn conjugate(&self, p: &Matrix) -> Result<TameRep> {
        let pi = p.inverse()?;
        Ok(TameRep {
            field: self.field,
            phi: p.mul(&self.phi)?.mm(&pi),
            sigma: p.mul(&self.sigma)?.mm(&pi),
            order: self.order,
        })
    }

    /// ρ ⊗_R R′ along a ring homomorphism.
    pub fn base_change(&self, h: &RingHom) -> Result<TameRep> {
        if h.source() != self.ring() {
            return Err(Error::DescriptorMismatch(h.source().to_string(), self.ring().to_string()));
        }
        let phi = self.phi.map(h)?;
        let sigma = self.sigma.map(h)?;
        if !phi.is_invertible() {
            return Err(Error::NotAUnit(format!("det Φ = {} after base change", phi.det())));
        }
        let order = order_dividing(&sigma, self.order);
        Ok(TameRep { field: self.field, phi, sigma, order })
    }

    /// Base change to the ring with primitive m-th roots of unity adjoined.
    pub fn with_roots(&self, m: u64) -> Result<(TameRep, RingHom)> {
        let (_, emb) = adjoin_roots(self.ring(), m)?;
        Ok((self.base_change(&emb)?, emb))
    }

    /// T = 1 + Σ + … + Σ^{q−1}.
    pub fn t_operator(&self) -> Matrix {
        let n = self.dim();
        let mut acc = Matrix::zeros(self.ring(), n, n);
        let mut pw = Matrix::identity(self.ring(), n);
        for _ in 0..self.field.q() {
            acc = acc.add(&pw).unwrap();
            pw = pw.mm(&self.sigma);
        }
        acc
    }

    /// Basis (as columns) and dimension of ρ^I = ker(Σ − I). Needs a field.
    pub fn inertia_invariants(&self) -> Result<(Matrix, usize)> {
        let n = self.dim();
        let basis = self.sigma.sub(&Matrix::identity(self.ring(), n))?.kernel()?;
        // Φ preserves ρ^I because ΦΣΦ⁻¹ = Σ^q
        self.phi.restrict(&basis)?;
        let d = basis.cols();
        Ok((basis, d))
    }

    /// Φ acting on ρ^I, in the basis returned by [`Self::inertia_invariants`].
    pub fn phi_on_invariants(&self) -> Result<Matrix> {
        let (basis, _) = self.inertia_invariants()?;
        self.phi.restrict(&basis)
    }
}

/// A tame character of W_E for E/F unramified of degree d, recorded by
/// u = χ(Fr_E) = χ(ϖ_E) and ζ = χ(σ).
#[derive(Clone, Debug, PartialEq)]
pub struct TameCharacter {
    pub field: LocalFieldData,
    pub d: u32,
    pub u: Elem,
    pub zeta: Elem,
}

impl TameCharacter {
    /// `field` is the base F; the character lives on W_E with [E : F] = d.
    pub fn new(field: LocalFieldData, d: u32, u: Elem, zeta: Elem) -> Result<TameCharacter> {
        if u.ring() != zeta.ring() {
            return Err(Error::DescriptorMismatch(u.ring().to_string(), zeta.ring().to_string()));
        }
        if d == 0 {
            return Err(Error::InvalidInput("degree d must be positive".into()));
        }
        if !u.is_unit() {
            return Err(Error::NotAUnit(u.to_string()));
        }
        let e = field.extension(d)?;
        if !zeta.pow(e.q() - 1).is_one() {
            return Err(Error::RelationViolated(format!("{zeta} is not a {}-th root of unity", e.q() - 1)));
        }
        Ok(TameCharacter { field, d, u, zeta })
    }

    pub fn ring(&self) -> &Ring {
        self.u.ring()
    }

    pub fn is_unramified(&self) -> bool {
        self.zeta.is_one()
    }

    /// The character as a one-dimensional representation of W_E.
    pub fn rep(&self) -> Result<TameRep> {
        TameRep::character(self.field.extension(self.d)?, &self.u, &self.zeta)
    }

    /// Ind_{W_E}^{W_F} of the character.
    pub fn induce(&self) -> Result<TameRep> {
        induct_unramified(&self.rep()?, self.d)
    }
}

/// Induction from W_E to W_F for E/F unramified of degree d.
///
/// Σ becomes blockdiag(Σ_E, Σ_E^q, …, Σ_E^{q^{d−1}}) and Φ sends block i to
/// block i − 1, with Φ_E on the wrap-around block from block 0 to block d − 1.
pub fn induct_unramified(rep_e: &TameRep, d: u32) -> Result<TameRep> {
    let fe = rep_e.field();
    if d == 0 || !fe.f.is_multiple_of(d) {
        return Err(Error::InvalidInput(format!("degree {d} does not divide f = {}", fe.f)));
    }
    let field = LocalFieldData::new(fe.p, fe.f / d, fe.ell)?;
    if d == 1 {
        return TameRep::new(field, rep_e.phi.clone(), rep_e.sigma.clone());
    }
    let q = field.q();
    let n = rep_e.dim();
    let d = d as usize;
    let ring = rep_e.ring();
    let mut blocks = Vec::with_capacity(d);
    let mut s = rep_e.sigma.clone();
    for _ in 0..d {
        blocks.push(s.clone());
        s = s.pow(q);
    }
    let sigma = Matrix::block_diag(&blocks);
    let mut phi = Matrix::zeros(ring, n * d, n * d);
    for i in 1..d {
        for k in 0..n {
            phi.set((i - 1) * n + k, i * n + k, ring.one());
        }
    }
    for a in 0..n {
        for b in 0..n {
            phi.set((d - 1) * n + a, b, rep_e.phi.get(a, b).clone());
        }
    }
    TameRep::new(field, phi, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64, f: u32) -> LocalFieldData {
        LocalFieldData::new(p, f, 7).unwrap()
    }

    fn m(ring: &Ring, rows: &[&[&str]]) -> Matrix {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        Matrix::parse(ring, &rows).unwrap()
    }

    #[test]
    fn unramified_and_quadratic_characters() {
        let q = Ring::rationals();
        let r = TameRep::character(field(3, 1), &q.from_int(5), &q.one()).unwrap();
        assert_eq!(r.order(), 1);
        let r = TameRep::character(field(3, 1), &q.from_int(5), &q.from_int(-1)).unwrap();
        assert_eq!(r.order(), 2);
    }

    #[test]
    fn relation_is_checked() {
        let r = Ring::cyclotomic(8).unwrap();
        let phi = m(&r, &[&["1", "0"], &["0", "1"]]);
        let sigma = m(&r, &[&["z8", "0"], &["0", "z8^3"]]);
        assert!(matches!(TameRep::new(field(3, 1), phi, sigma.clone()), Err(Error::RelationViolated(_))));
        let phi = m(&r, &[&["0", "5"], &["1", "0"]]);
        assert_eq!(TameRep::new(field(3, 1), phi, sigma).unwrap().order(), 8);
    }

    #[test]
    fn p_torsion_in_sigma_breaks_relation() {
        // conjugation preserves the order of Σ, so Σ^q has the same order
        // only when p does not divide it
        let r = Ring::cyclotomic(3).unwrap();
        for f in [1, 2] {
            let err = TameRep::character(field(3, f), &r.one(), &r.root_of_unity(3).unwrap()).unwrap_err();
            assert!(matches!(err, Error::RelationViolated(_)));
        }
    }

    #[test]
    fn infinite_order_rejected() {
        let q = Ring::rationals();
        let err = TameRep::with_order_bound(field(3, 1), m(&q, &[&["1"]]), m(&q, &[&["1"]]), 5);
        assert!(err.is_ok());
        let phi = m(&q, &[&["1", "0"], &["0", "1"]]);
        let sigma = m(&q, &[&["1", "1"], &["0", "1"]]);
        // Σ unipotent: Σ^3 ≠ Σ so the relation already fails
        assert!(TameRep::with_order_bound(field(3, 1), phi, sigma, 50).is_err());
    }

    #[test]
    fn induced_example_matches_block_formula() {
        let r = Ring::cyclotomic(8).unwrap();
        let w = r.from_int(5);
        let xi = TameCharacter::new(field(3, 1), 2, w.clone(), r.root_of_unity(8).unwrap()).unwrap();
        let ind = xi.induce().unwrap();
        assert_eq!(ind.sigma(), &m(&r, &[&["z8", "0"], &["0", "z8^3"]]));
        assert_eq!(ind.phi(), &m(&r, &[&["0", "1"], &["5", "0"]]));
        // Φ² acts by w on each block
        assert_eq!(ind.phi().pow(2), Matrix::scalar(&r, 2, &w));
        let (_, dim) = ind.inertia_invariants().unwrap();
        assert_eq!(dim, 0);
    }

    #[test]
    fn induction_of_trivial_character_is_cycle() {
        let q = Ring::rationals();
        let one = TameCharacter::new(field(5, 1), 3, q.one(), q.one()).unwrap();
        let ind = one.induce().unwrap();
        assert!(ind.sigma().is_identity());
        // det(I − PX) = 1 − X³ for a 3-cycle P, oracle from the permutation
        let c = ind.phi().charpoly_rev();
        assert_eq!(c, vec![q.one(), q.zero(), q.zero(), q.from_int(-1)]);
    }

    #[test]
    fn invariants_of_diagonal_sigma() {
        let r = Ring::cyclotomic(8).unwrap();
        let phi = m(&r, &[&["2", "0"], &["0", "0"]]);
        let sigma = m(&r, &[&["1", "0"], &["0", "z8"]]);
        assert!(TameRep::new(field(3, 1), phi, sigma.clone()).is_err());
        // q = 9 fixes every 8th root of unity, so a diagonal Φ works
        let phi = m(&r, &[&["2", "0"], &["0", "3"]]);
        let rep = TameRep::new(field(3, 2), phi, sigma).unwrap();
        let (basis, dim) = rep.inertia_invariants().unwrap();
        assert_eq!(dim, 1);
        assert_eq!(basis, m(&r, &[&["1"], &["0"]]));
        assert_eq!(rep.phi_on_invariants().unwrap(), m(&r, &[&["2"]]));
    }

    #[test]
    fn twist_dual_and_base_change() {
        let q = Ring::rationals();
        let r = TameRep::character(field(3, 1), &q.from_int(2), &q.from_int(-1)).unwrap();
        let d = r.dual().unwrap();
        assert_eq!(d.phi().get(0, 0), &Elem::parse(&q, "1/2").unwrap());
        let t = r.twist_unramified(&q.from_int(3)).unwrap();
        assert_eq!(t.phi().get(0, 0), &q.from_int(6));
        assert_eq!(r.base_change(&RingHom::identity(&q)).unwrap(), r);
    }
}
