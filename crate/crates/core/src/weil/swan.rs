use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::decompose::rank_of_idempotent;
use super::tame::TameRep;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Group closures larger than this are rejected.
const MAX_GROUP: usize = 10_000;

/// Ramification data: jumps v_1 < … < v_k with the finite groups
/// G_i = ρ(G^{v_i}), G_1 ⊇ G_2 ⊇ … ⊇ G_k.
#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationData {
    dim: usize,
    steps: Vec<(BigRational, Vec<Matrix>)>,
}

fn closure(gens: &[Matrix], n: usize) -> Result<Vec<Matrix>> {
    let ring = gens.first().map(|g| g.ring().clone());
    let Some(ring) = ring else {
        return Err(Error::InvalidFiltration("a jump with no group elements".into()));
    };
    let mut elems = vec![Matrix::identity(&ring, n)];
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in gens {
                let b = a.mm(g);
                if !elems.contains(&b) {
                    elems.push(b.clone());
                    next.push(b);
                    if elems.len() > MAX_GROUP {
                        return Err(Error::InvalidFiltration(format!("group has more than {MAX_GROUP} elements")));
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(elems)
}

fn check_group(g: &[Matrix]) -> Result<()> {
    for a in g {
        for b in g {
            if !g.contains(&a.mm(b)) {
                return Err(Error::InvalidFiltration("set is not closed under multiplication".into()));
            }
        }
        if !g.contains(&a.inverse()?) {
            return Err(Error::InvalidFiltration("set is not closed under inverses".into()));
        }
    }
    Ok(())
}

impl FiltrationData {
    /// The filtration of a tame representation: no jumps.
    pub fn tame(dim: usize) -> FiltrationData {
        FiltrationData { dim, steps: vec![] }
    }

    /// Validate explicit finite groups.
    pub fn new(dim: usize, steps: Vec<(BigRational, Vec<Matrix>)>) -> Result<FiltrationData> {
        let mut prev: Option<&(BigRational, Vec<Matrix>)> = None;
        for step in &steps {
            let (v, g) = step;
            if !v.is_positive() {
                return Err(Error::InvalidFiltration(format!("jump {v} is not positive")));
            }
            if g.is_empty() {
                return Err(Error::InvalidFiltration(format!("empty group at jump {v}")));
            }
            for m in g {
                if !m.is_square() || m.rows() != dim {
                    return Err(Error::DimensionMismatch(format!("group element of size {}x{}", m.rows(), m.cols())));
                }
                if m.ring() != g[0].ring() {
                    return Err(Error::DescriptorMismatch(m.ring().to_string(), g[0].ring().to_string()));
                }
            }
            check_group(g)?;
            if !g[0].ring().from_int(g.len() as i64).is_unit() {
                return Err(Error::InvalidFiltration(format!("|G| = {} is not invertible", g.len())));
            }
            if let Some((pv, pg)) = prev {
                if v <= pv {
                    return Err(Error::InvalidFiltration("jumps must increase".into()));
                }
                if g.iter().any(|m| !pg.contains(m)) {
                    return Err(Error::InvalidFiltration(format!("G at {v} is not contained in G at {pv}")));
                }
            }
            prev = Some(step);
        }
        Ok(FiltrationData { dim, steps })
    }

    /// Build each group as the closure of its generators.
    pub fn from_generators(dim: usize, steps: Vec<(BigRational, Vec<Matrix>)>) -> Result<FiltrationData> {
        let groups = steps
            .into_iter()
            .map(|(v, gens)| Ok((v, closure(&gens, dim)?)))
            .collect::<Result<Vec<_>>>()?;
        FiltrationData::new(dim, groups)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[(BigRational, Vec<Matrix>)] {
        &self.steps
    }

    pub fn is_tame(&self) -> bool {
        self.steps.is_empty()
    }
}

fn averaging_idempotent(g: &[Matrix]) -> Result<Matrix> {
    let ring = g[0].ring();
    let n = g[0].rows();
    let sum = g.iter().try_fold(Matrix::zeros(ring, n, n), |acc, m| acc.add(m))?;
    Ok(sum.scale(&ring.from_int(g.len() as i64).inverse()?))
}

/// Ranks of the break-v pieces, with the tame piece reported at v = 0 when
/// nonzero. The break-v_i rank is rk ρ^{G_{i+1}} − rk ρ^{G_i} with
/// G_{k+1} trivial.
pub fn break_decomposition(filt: &FiltrationData) -> Result<Vec<(BigRational, usize)>> {
    let n = filt.dim;
    let mut ranks = Vec::with_capacity(filt.steps.len() + 1);
    for (_, g) in &filt.steps {
        ranks.push(rank_of_idempotent(&averaging_idempotent(g)?)?);
    }
    ranks.push(n);
    let mut out = Vec::new();
    if ranks[0] > 0 {
        out.push((BigRational::zero(), ranks[0]));
    }
    for (i, (v, _)) in filt.steps.iter().enumerate() {
        let (lo, hi) = (ranks[i], ranks[i + 1]);
        if hi < lo {
            return Err(Error::NegativeBreakRank(format!("break {v} has rank {}", hi as i64 - lo as i64)));
        }
        if hi > lo {
            out.push((v.clone(), hi - lo));
        }
    }
    Ok(out)
}

/// Sw = Σ v·rk(ρ^v), which must be a nonnegative integer.
pub fn swan(filt: &FiltrationData) -> Result<u64> {
    let total = break_decomposition(filt)?
        .iter()
        .fold(BigRational::zero(), |acc, (v, r)| acc + v * BigRational::from_integer(BigInt::from(*r)));
    if !total.is_integer() {
        return Err(Error::NonIntegralSwan(format!("Σ v·rank = {total}")));
    }
    u64::try_from(total.to_integer()).map_err(|_| Error::NonIntegralSwan(format!("Σ v·rank = {total}")))
}

/// a(ρ) = Sw + dim ρ − dim ρ^I.
pub fn artin_conductor(rep: &TameRep, wild_swan: u64) -> Result<u64> {
    let (_, inv) = rep.inertia_invariants()?;
    Ok(wild_swan + (rep.dim() - inv) as u64)
}

/// a(ρ) = Sw + dim ρ − dim ρ^I with I generated by Σ and the generators
/// of the ramification filtration.
pub fn artin_conductor_filtered(rep: &TameRep, filt: &FiltrationData) -> Result<u64> {
    let n = rep.dim();
    let one = Matrix::identity(rep.ring(), n);
    let mut stacked = rep.sigma().sub(&one)?.transpose();
    for (_, gens) in filt.steps() {
        for g in gens {
            stacked = stacked.hstack(&g.sub(&one)?.transpose())?;
        }
    }
    let fixed = stacked.transpose().kernel()?.cols();
    Ok(swan(filt)? + (n - fixed) as u64)
}

#[cfg(test)]
mod tests {
    use super::super::{induct_unramified, LocalFieldData, TameCharacter};
    use super::*;
    use crate::ring::Ring;

    fn rat(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    fn p_cyclic(ring: &Ring, p: u64) -> Matrix {
        let z = ring.root_of_unity(p).unwrap();
        Matrix::diagonal(ring, &[z.clone(), z.inverse().unwrap()])
    }

    #[test]
    fn tame_swan_is_zero() {
        assert_eq!(swan(&FiltrationData::tame(3)).unwrap(), 0);
        assert_eq!(break_decomposition(&FiltrationData::tame(3)).unwrap(), vec![(rat("0"), 3)]);
    }

    #[test]
    fn p_cyclic_jump_at_one_half() {
        let r = Ring::cyclotomic(5).unwrap();
        let f = FiltrationData::from_generators(2, vec![(rat("1/2"), vec![p_cyclic(&r, 5)])]).unwrap();
        assert_eq!(f.steps()[0].1.len(), 5);
        assert_eq!(break_decomposition(&f).unwrap(), vec![(rat("1/2"), 2)]);
        assert_eq!(swan(&f).unwrap(), 1);
    }

    #[test]
    fn artin_counts_wild_inertia() {
        let r = Ring::cyclotomic(5).unwrap();
        let field = super::super::LocalFieldData::new(5, 1, 11).unwrap();
        let rep = TameRep::new(field, Matrix::identity(&r, 2), Matrix::identity(&r, 2)).unwrap();
        let f = FiltrationData::from_generators(2, vec![(rat("1/2"), vec![p_cyclic(&r, 5)])]).unwrap();
        // Sw = 1 and the wild generator fixes no line
        assert_eq!(artin_conductor_filtered(&rep, &f).unwrap(), 3);
        assert_eq!(artin_conductor_filtered(&rep, &FiltrationData::tame(2)).unwrap(), 0);
    }

    #[test]
    fn fractional_jump_is_rejected() {
        let r = Ring::cyclotomic(5).unwrap();
        let f = FiltrationData::from_generators(2, vec![(rat("1/3"), vec![p_cyclic(&r, 5)])]).unwrap();
        assert!(matches!(swan(&f), Err(Error::NonIntegralSwan(_))));
    }

    #[test]
    fn invalid_filtrations() {
        let r = Ring::cyclotomic(5).unwrap();
        let g = p_cyclic(&r, 5);
        let not_group = vec![Matrix::identity(&r, 2), g.clone()];
        assert!(FiltrationData::new(2, vec![(rat("1"), not_group)]).is_err());
        let full = closure(std::slice::from_ref(&g), 2).unwrap();
        let trivial = vec![Matrix::identity(&r, 2)];
        assert!(FiltrationData::new(2, vec![(rat("1"), trivial.clone()), (rat("2"), full.clone())]).is_err());
        assert!(FiltrationData::new(2, vec![(rat("2"), full.clone()), (rat("1"), trivial.clone())]).is_err());
        assert!(FiltrationData::new(2, vec![(rat("1"), full), (rat("2"), trivial)]).is_ok());
    }

    #[test]
    fn artin_conductors() {
        let r = Ring::cyclotomic(8).unwrap();
        let f = LocalFieldData::new(3, 1, 7).unwrap();
        let unram = TameRep::character(f, &r.from_int(2), &r.one()).unwrap();
        assert_eq!(artin_conductor(&unram, 0).unwrap(), 0);
        let ram = TameRep::character(f, &r.from_int(2), &r.from_int(-1)).unwrap();
        assert_eq!(artin_conductor(&ram, 0).unwrap(), 1);
        let xi = TameCharacter::new(f, 2, r.from_int(5), r.root_of_unity(8).unwrap()).unwrap();
        let ind = induct_unramified(&xi.rep().unwrap(), 2).unwrap();
        assert_eq!(artin_conductor(&ind, 0).unwrap(), 2);
        assert_eq!(artin_conductor(&ind, 3).unwrap(), 5);
    }
}
