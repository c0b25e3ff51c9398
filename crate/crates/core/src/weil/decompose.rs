use super::tame::TameRep;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::adjoin_roots;

/// One isotypic piece: the character h ↦ ζ_m^j, its projector and rank.
#[derive(Clone, Debug, PartialEq)]
pub struct Isotypic {
    pub j: u64,
    pub projector: Matrix,
    pub rank: usize,
}

/// The integer r ∈ [0, n] with trace(e) = r·1, for an idempotent e.
///
/// Over a field where several r match (small characteristic) the rank is
/// read off the echelon form instead.
pub fn rank_of_idempotent(e: &Matrix) -> Result<usize> {
    if !e.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} idempotent", e.rows(), e.cols())));
    }
    if e.mm(e) != *e {
        return Err(Error::InvalidInput(format!("{e} is not idempotent")));
    }
    let n = e.rows();
    let t = e.trace();
    let candidates: Vec<usize> = (0..=n).filter(|&r| e.ring().from_int(r as i64) == t).collect();
    match candidates.as_slice() {
        [r] => Ok(*r),
        [] => Err(Error::NonIntegerTrace(format!("trace {t} is not an integer in [0, {n}]"))),
        _ if e.ring().is_field() => {
            let r = e.rank()?;
            if candidates.contains(&r) {
                Ok(r)
            } else {
                Err(Error::NonIntegerTrace(format!("rank {r} does not match trace {t}")))
            }
        }
        _ => Err(Error::NonIntegerTrace(format!("trace {t} matches several ranks {candidates:?}"))),
    }
}

/// Decompose ρ along the characters of the cyclic group generated by h of
/// order m, with projectors e_j = (1/m)·Σ_i ζ_m^{−ij} h^i. Primitive m-th
/// roots of unity are adjoined when missing; the projectors live over the
/// enlarged ring. Only pieces of positive rank are returned.
pub fn isotypic_decompose(rep: &TameRep, h: &Matrix, m: u64) -> Result<Vec<Isotypic>> {
    if h.ring() != rep.ring() {
        return Err(Error::DescriptorMismatch(h.ring().to_string(), rep.ring().to_string()));
    }
    if !h.is_square() || h.rows() != rep.dim() {
        return Err(Error::DimensionMismatch(format!("h is {}x{}, dim ρ = {}", h.rows(), h.cols(), rep.dim())));
    }
    if m == 0 || m.is_multiple_of(rep.field().p) {
        return Err(Error::InvalidInput(format!("order {m} must be positive and prime to p")));
    }
    if !h.pow(m).is_identity() {
        return Err(Error::RelationViolated(format!("h^{m} ≠ I")));
    }
    let (ring, emb) = adjoin_roots(rep.ring(), m)?;
    let minv = ring.from_int(m as i64).inverse()?;
    let h = h.map(&emb)?;
    let zinv = ring.root_of_unity(m)?.inverse()?;
    let n = rep.dim();
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = Matrix::identity(&ring, n);
    for _ in 0..m {
        powers.push(cur.clone());
        cur = cur.mm(&h);
    }
    let mut out = Vec::new();
    for j in 0..m {
        let step = zinv.pow(j);
        let mut coeff = ring.one();
        let mut e = Matrix::zeros(&ring, n, n);
        for p in &powers {
            e = e.add(&p.scale(&coeff))?;
            coeff = &coeff * &step;
        }
        let e = e.scale(&minv);
        let rank = rank_of_idempotent(&e)?;
        if rank > 0 {
            out.push(Isotypic { j, projector: e, rank });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::LocalFieldData;
    use super::*;
    use crate::ring::Ring;

    fn m(ring: &Ring, rows: &[&[&str]]) -> Matrix {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        Matrix::parse(ring, &rows).unwrap()
    }

    fn trivial_rep(ring: &Ring, n: usize) -> TameRep {
        let f = LocalFieldData::new(5, 1, 3).unwrap();
        TameRep::new(f, Matrix::identity(ring, n), Matrix::identity(ring, n)).unwrap()
    }

    #[test]
    fn ranks_of_simple_idempotents() {
        let q = Ring::rationals();
        assert_eq!(rank_of_idempotent(&Matrix::identity(&q, 4)).unwrap(), 4);
        assert_eq!(rank_of_idempotent(&Matrix::zeros(&q, 3, 3)).unwrap(), 0);
        let r = Ring::modular_cyclotomic(1, 5, 2).unwrap();
        let e = m(&r, &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "0"]]);
        assert_eq!(rank_of_idempotent(&e).unwrap(), 2);
    }

    #[test]
    fn disconnected_spectrum_has_no_rank() {
        let r = Ring::parse("Prod(Q, Q)").unwrap();
        let e = m(&r, &[&["(1, 0)"]]);
        assert!(matches!(rank_of_idempotent(&e), Err(Error::NonIntegerTrace(_))));
    }

    #[test]
    fn trivial_and_sign_decompositions() {
        let q = Ring::rationals();
        let rep = trivial_rep(&q, 2);
        let d = isotypic_decompose(&rep, &Matrix::identity(&q, 2), 1).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rank, 2);
        let d = isotypic_decompose(&rep, &m(&q, &[&["1", "0"], &["0", "-1"]]), 2).unwrap();
        assert_eq!(d.iter().map(|c| (c.j, c.rank)).collect::<Vec<_>>(), vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn rotation_of_order_three() {
        let r = Ring::cyclotomic(3).unwrap();
        let rep = trivial_rep(&r, 2);
        // companion matrix of x² + x + 1, eigenvalues z3 and z3²
        let h = m(&r, &[&["0", "-1"], &["1", "-1"]]);
        let d = isotypic_decompose(&rep, &h, 3).unwrap();
        assert_eq!(d.iter().map(|c| (c.j, c.rank)).collect::<Vec<_>>(), vec![(1, 1), (2, 1)]);
        // h·e_j = z3^j·e_j
        for c in &d {
            let z = r.root_of_unity(3).unwrap().pow(c.j);
            assert_eq!(h.mm(&c.projector), c.projector.scale(&z));
        }
        let sum = d[0].projector.add(&d[1].projector).unwrap();
        assert!(sum.is_identity());
    }
}
