use num_integer::Integer;

use super::gauss::gauss_sum_at;
use super::psi::AdditiveCharacter;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Elem, RingHom};
use crate::weil::TameRep;

/// One Frobenius orbit {ζ, ζ^q, …, ζ^{q^{d−1}}} of Σ-eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitBlock {
    /// Exponents j of ζ_N^j along the orbit in increasing order; the first
    /// one is the exponent of `zeta`.
    pub exponents: Vec<u64>,
    pub zeta: Elem,
    /// Multiplicative order of ζ.
    pub zeta_order: u64,
    pub rank: usize,
    /// Projector onto the ζ-eigenspace V_ζ.
    pub projector: Matrix,
    /// det(Φ^d | V_ζ).
    pub frob_det: Elem,
    /// Φ^d on V_ζ in a basis of V_ζ, when the coefficients form a field.
    pub frob: Option<Matrix>,
}

impl OrbitBlock {
    pub fn degree(&self) -> u32 {
        self.exponents.len() as u32
    }

    pub fn is_unramified(&self) -> bool {
        self.exponents == [0]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    /// N_Σ; eigenvalues are written as powers of ζ_N.
    pub order: u64,
    pub blocks: Vec<OrbitBlock>,
}

/// Base change to the ring with ζ_N and ζ_p adjoined, N = N_Σ.
pub fn coefficient_extension(rep: &TameRep) -> Result<(TameRep, RingHom)> {
    rep.with_roots(rep.order().lcm(&rep.field().p))
}

fn eval_poly(coeffs: &[Elem], x: &Elem) -> Elem {
    coeffs.iter().rev().fold(x.ring().zero(), |acc, c| acc * x.clone() + c)
}

/// Eigen-decomposition of Σ grouped into Frobenius orbits. The ring of `rep`
/// must contain ζ_N; projectors come from Lagrange interpolation
/// Π_{η≠ζ} (Σ − η)/(ζ − η), so the differences of eigenvalues must be units.
pub(crate) fn spectral_blocks(rep: &TameRep) -> Result<SpectralData> {
    let ring = rep.ring();
    let n = rep.order();
    let q = rep.field().q();
    let dim = rep.dim();
    let z = ring.root_of_unity(n)?;
    let mut charpoly = rep.sigma().charpoly_rev();
    charpoly.reverse();
    let mut eigen: Vec<(u64, Elem)> = Vec::new();
    let mut w = ring.one();
    for j in 0..n {
        if eval_poly(&charpoly, &w).is_zero() {
            eigen.push((j, w.clone()));
        }
        w = &w * &z;
    }
    let id = Matrix::identity(ring, dim);
    let projector = |j: u64, zeta: &Elem| -> Result<Matrix> {
        let mut p = id.clone();
        for (k, eta) in &eigen {
            if *k == j {
                continue;
            }
            let diff = (zeta - eta).inverse().map_err(|_| {
                Error::NotAUnit(format!("eigenvalue difference {zeta} - {eta} in {ring}"))
            })?;
            p = p.mm(&rep.sigma().sub(&Matrix::scalar(ring, dim, eta))?).scale(&diff);
        }
        Ok(p)
    };
    let mut seen = vec![false; n as usize];
    let mut blocks = Vec::new();
    let mut total = 0;
    for (j, zeta) in &eigen {
        if seen[*j as usize] {
            continue;
        }
        let mut exponents = vec![*j];
        let mut k = (*j * q) % n;
        while k != *j {
            exponents.push(k);
            k = (k * q) % n;
        }
        for &e in &exponents {
            seen[e as usize] = true;
        }
        let d = exponents.len() as u64;
        let p = projector(*j, zeta)?;
        let rank = crate::weil::rank_of_idempotent(&p)?;
        let phid = rep.phi().pow(d);
        let complement = id.sub(&p)?;
        let frob_det = phid.mm(&p).add(&complement)?.det();
        let frob = if ring.is_field() {
            let basis = complement.kernel()?;
            Some(phid.restrict(&basis)?)
        } else {
            None
        };
        total += rank * exponents.len();
        exponents.sort_unstable();
        debug_assert_eq!(exponents[0], *j);
        blocks.push(OrbitBlock {
            exponents,
            zeta: zeta.clone(),
            zeta_order: n / n.gcd(j),
            rank,
            projector: p,
            frob_det,
            frob,
        });
    }
    if total != dim {
        return Err(Error::RelationViolated(format!("eigenspaces of Σ have total rank {total}, not {dim}")));
    }
    Ok(SpectralData { order: n, blocks })
}

/// Orbit blocks of a tame representation over a field of characteristic
/// zero, after adjoining ζ_N and ζ_p.
pub fn tame_spectral_data(rep: &TameRep) -> Result<(TameRep, SpectralData)> {
    let (big, _) = coefficient_extension(rep)?;
    let sd = spectral_blocks(&big)?;
    Ok((big, sd))
}

/// ε₀(ρ, ψ) for a representation whose ring already contains ζ_N and ζ_p.
///
/// Blockwise: det(−Φ | V_1) on the unramified part and, for each ramified
/// orbit of size d, det(Φ^d | V_ζ)·g(χ̄_ζ, ψ̄_d)^{dim V_ζ} with χ̄_ζ(g) = ζ for
/// the Conway generator g of 𝔽_{q^d}. A nonzero level twists by
/// det(Φ)^{n(ψ)}·q^{n(ψ)·dim ρ}.
pub fn epsilon0_prepared(rep: &TameRep, psi: &AdditiveCharacter) -> Result<Elem> {
    let ring = rep.ring();
    let field = rep.field();
    let sd = spectral_blocks(rep)?;
    let dim = rep.dim();
    let id = Matrix::identity(ring, dim);
    let mut value = ring.one();
    for b in &sd.blocks {
        if b.is_unramified() {
            let complement = id.sub(&b.projector)?;
            value = value * rep.phi().neg().mm(&b.projector).add(&complement)?.det();
        } else {
            let g = gauss_sum_at(ring, sd.order, b.exponents[0], psi, field.p, field.f * b.degree())?;
            value = value * b.frob_det.clone() * g.pow(b.rank as u64);
        }
    }
    if psi.level != 0 {
        let det = rep.phi().det();
        let q = rep.q();
        let twist = det.pow_i(psi.level)? * q.pow_i(psi.level * dim as i64)?;
        value = value * twist;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::weil::{LocalFieldData, TameCharacter};

    #[test]
    fn trivial_sigma_is_one_orbit() {
        let q = Ring::rationals();
        let f = LocalFieldData::new(3, 1, 7).unwrap();
        let phi = Matrix::diagonal(&q, &[q.from_int(2), q.from_int(5)]);
        let rep = TameRep::new(f, phi.clone(), Matrix::identity(&q, 2)).unwrap();
        let (_, sd) = tame_spectral_data(&rep).unwrap();
        assert_eq!(sd.blocks.len(), 1);
        assert_eq!(sd.blocks[0].rank, 2);
        assert_eq!(sd.blocks[0].frob.as_ref().unwrap().det(), sd.blocks[0].frob_det);
        assert!(sd.blocks[0].frob_det.equals_int(10));
    }

    #[test]
    fn induced_example_orbit() {
        let r = Ring::cyclotomic(8).unwrap();
        let f = LocalFieldData::new(3, 1, 7).unwrap();
        let xi = TameCharacter::new(f, 2, r.from_int(5), r.root_of_unity(8).unwrap()).unwrap();
        let ind = xi.induce().unwrap();
        let (_, sd) = tame_spectral_data(&ind).unwrap();
        assert_eq!(sd.order, 8);
        assert_eq!(sd.blocks.len(), 1);
        let b = &sd.blocks[0];
        assert_eq!(b.exponents, vec![1, 3]);
        assert_eq!(b.rank, 1);
        // Φ² = w·I, so Φ² acts on the line V_ζ by w = 5
        assert!(b.frob_det.equals_int(5));
        // the sum with an unramified line reports both orbits
        let big = b.zeta.ring().clone();
        let (ind_big, _) = ind.with_roots(24).unwrap();
        let line = TameRep::character(f, &big.from_int(2), &big.one()).unwrap();
        let (_, sd2) = tame_spectral_data(&ind_big.direct_sum(&line).unwrap()).unwrap();
        let mut ranks: Vec<(Vec<u64>, usize)> = sd2.blocks.iter().map(|b| (b.exponents.clone(), b.rank)).collect();
        ranks.sort();
        assert_eq!(ranks, vec![(vec![0], 1), (vec![1, 3], 1)]);
    }
}
