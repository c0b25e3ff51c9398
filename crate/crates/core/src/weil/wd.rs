use super::field::LocalFieldData;
use super::tame::TameRep;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly;
use crate::ring::{Characteristic, Elem, Ring, RingHom};

/// A Weil–Deligne representation (r, N) with ΣN = NΣ and ΦNΦ⁻¹ = q⁻¹N.
#[derive(Clone, Debug, PartialEq)]
pub struct WDRep {
    tame: TameRep,
    n: Matrix,
}

impl WDRep {
    pub fn new(tame: TameRep, n: Matrix) -> Result<WDRep> {
        if n.ring() != tame.ring() {
            return Err(Error::DescriptorMismatch(n.ring().to_string(), tame.ring().to_string()));
        }
        if !n.is_square() || n.rows() != tame.dim() {
            return Err(Error::DimensionMismatch(format!("N is {}x{}, dim ρ = {}", n.rows(), n.cols(), tame.dim())));
        }
        if tame.sigma().mm(&n) != n.mm(tame.sigma()) {
            return Err(Error::RelationViolated("ΣNΣ⁻¹ ≠ N".into()));
        }
        // ΦNΦ⁻¹ = q⁻¹N  ⟺  q·ΦN = NΦ
        if tame.phi().mm(&n).scale(&tame.q()) != n.mm(tame.phi()) {
            return Err(Error::RelationViolated("ΦNΦ⁻¹ ≠ q⁻¹N".into()));
        }
        if !n.pow(tame.dim() as u64).is_zero() {
            return Err(Error::RelationViolated("N is not nilpotent".into()));
        }
        Ok(WDRep { tame, n })
    }

    /// (r, 0).
    pub fn from_tame(tame: TameRep) -> WDRep {
        let n = Matrix::zeros(tame.ring(), tame.dim(), tame.dim());
        WDRep { tame, n }
    }

    pub fn tame(&self) -> &TameRep {
        &self.tame
    }

    pub fn n(&self) -> &Matrix {
        &self.n
    }

    pub fn phi(&self) -> &Matrix {
        self.tame.phi()
    }

    pub fn sigma(&self) -> &Matrix {
        self.tame.sigma()
    }

    pub fn dim(&self) -> usize {
        self.tame.dim()
    }

    pub fn ring(&self) -> &Ring {
        self.tame.ring()
    }

    pub fn field(&self) -> &LocalFieldData {
        self.tame.field()
    }

    pub fn direct_sum(&self, o: &WDRep) -> Result<WDRep> {
        let tame = self.tame.direct_sum(&o.tame)?;
        WDRep::new(tame, Matrix::block_diag(&[self.n.clone(), o.n.clone()]))
    }

    pub fn twist_unramified(&self, u: &Elem) -> Result<WDRep> {
        WDRep::new(self.tame.twist_unramified(u)?, self.n.clone())
    }

    /// (r^∨, N^∨) with N^∨ = −Nᵀ.
    pub fn dual(&self) -> Result<WDRep> {
        WDRep::new(self.tame.dual()?, self.n.transpose().neg())
    }

    /// (r ⊗ r′, N ⊗ 1 + 1 ⊗ N′).
    pub fn tensor(&self, o: &WDRep) -> Result<WDRep> {
        if self.field() != o.field() {
            return Err(Error::InvalidInput("tensor of representations of different Weil groups".into()));
        }
        let ia = Matrix::identity(self.ring(), self.dim());
        let ib = Matrix::identity(self.ring(), o.dim());
        let tame = TameRep::new(
            *self.field(),
            self.phi().kronecker(o.phi()),
            self.sigma().kronecker(o.sigma()),
        )?;
        let n = self.n.kronecker(&ib).add(&ia.kronecker(&o.n))?;
        WDRep::new(tame, n)
    }

    pub fn conjugate(&self, p: &Matrix) -> Result<WDRep> {
        let n = p.mul(&self.n)?.mm(&p.inverse()?);
        WDRep::new(self.tame.conjugate(p)?, n)
    }

    pub fn base_change(&self, h: &RingHom) -> Result<WDRep> {
        WDRep::new(self.tame.base_change(h)?, self.n.map(h)?)
    }

    pub fn with_roots(&self, m: u64) -> Result<(WDRep, RingHom)> {
        let (tame, emb) = self.tame.with_roots(m)?;
        Ok((WDRep::new(tame, self.n.map(&emb)?)?, emb))
    }

    /// Basis of r_N^I = ρ^I ∩ ker N, as columns. Needs a field.
    pub fn monodromy_invariants(&self) -> Result<Matrix> {
        let k = self.dim();
        let s = self.sigma().sub(&Matrix::identity(self.ring(), k))?;
        // ker [S; N] = ker of the transpose of [Sᵀ | Nᵀ]
        let stacked = s.transpose().hstack(&self.n.transpose())?.transpose();
        let basis = stacked.kernel()?;
        self.phi().restrict(&basis)?;
        Ok(basis)
    }
}

/// Sp(n): Σ = I, Φ = diag(1, q⁻¹, …, q^{−(n−1)}), N e_i = e_{i+1}.
pub fn sp(n: usize, ring: &Ring, field: LocalFieldData) -> Result<WDRep> {
    if n == 0 {
        return Err(Error::InvalidInput("Sp(0)".into()));
    }
    let q = ring.from_int(field.q() as i64);
    let qinv = q.inverse().map_err(|_| Error::QNotInvertible(field.q()))?;
    let diag: Vec<Elem> = (0..n).map(|i| qinv.pow(i as u64)).collect();
    let mut nm = Matrix::zeros(ring, n, n);
    for i in 0..n - 1 {
        nm.set(i + 1, i, ring.one());
    }
    let tame = TameRep::new(field, Matrix::diagonal(ring, &diag), Matrix::identity(ring, n))?;
    WDRep::new(tame, nm)
}

/// Replace Φ by the semisimple part of its Jordan–Chevalley decomposition.
///
/// Newton's iteration S ← S − f(S)·f′(S)⁻¹ on the squarefree part f of the
/// characteristic polynomial converges to the semisimple part in
/// characteristic zero.
pub fn frobenius_semisimplify(a: &WDRep) -> Result<WDRep> {
    let ring = a.ring();
    if ring.characteristic() != Characteristic::Zero || !ring.is_field() {
        return Err(Error::RingNotField(format!("{ring} is not a field of characteristic zero")));
    }
    let mut charpoly = a.phi().charpoly_rev();
    charpoly.reverse();
    let f = poly::squarefree_part(&charpoly);
    let df = poly::derivative(&f);
    let mut s = a.phi().clone();
    for _ in 0..64 {
        let fs = s.eval_poly(&f);
        if fs.is_zero() {
            let tame = TameRep::new(*a.field(), s, a.sigma().clone())?;
            return WDRep::new(tame, a.n().clone());
        }
        s = s.sub(&fs.mm(&s.eval_poly(&df).inverse()?))?;
    }
    Err(Error::InvalidInput("semisimplification did not converge".into()))
}
