//! Dense matrices over a ring of the tower.
//!
//! Determinants and characteristic polynomials use Berkowitz's division-free
//! algorithm, so they are exact over every ring, including ones with
//! nilpotents. Kernels and solving need a field.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, RingHom};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.ring)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Elem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            for e in row {
                assert!(e.ring() == ring, "matrix entry from {} in {}", e.ring(), ring);
                data.push(e);
            }
        }
        Matrix { ring: ring.clone(), rows: r, cols: c, data }
    }

    /// Parse a row-major array of element strings.
    pub fn parse(ring: &Ring, rows: &[Vec<String>]) -> Result<Matrix> {
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("ragged matrix".into()));
        }
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| Elem::parse(ring, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(ring, parsed))
    }

    /// Entries as element strings, row-major.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect()
    }

    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        Matrix::scalar(ring, n, &ring.one())
    }

    pub fn scalar(ring: &Ring, n: usize, c: &Elem) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diagonal(ring: &Ring, entries: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(ring, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Elem) {
        self.data[i * self.cols + j] = e;
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Elem::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    fn same_shape(&self, o: &Matrix, op: &str) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols || self.ring != o.ring {
            return Err(Error::DimensionMismatch(format!(
                "{op}: {}x{} over {} vs {}x{} over {}",
                self.rows, self.cols, self.ring, o.rows, o.cols, o.ring
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Matrix) -> Result<Matrix> {
        self.same_shape(o, "add")?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn sub(&self, o: &Matrix) -> Result<Matrix> {
        self.same_shape(o, "sub")?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn neg(&self) -> Matrix {
        Matrix { data: self.data.iter().map(|a| -a).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        Matrix { data: self.data.iter().map(|a| a * c).collect(), ..self.clone() }
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows || self.ring != o.ring {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(&self.ring, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix product for operands already known to be compatible.
    pub fn mm(&self, o: &Matrix) -> Matrix {
        self.mul(o).expect("compatible matrices")
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut acc = Matrix::identity(&self.ring, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mm(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mm(&base);
            }
        }
        acc
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Elem {
        (0..self.rows.min(self.cols)).fold(self.ring.zero(), |acc, i| acc + self.get(i, i))
    }

    /// Coefficients [1, c_1, …, c_n] with det(I − M·X) = Σ c_k X^k,
    /// equivalently det(x·I − M) = x^n + c_1 x^{n−1} + … + c_n.
    pub fn charpoly_rev(&self) -> Vec<Elem> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let r = &self.ring;
        let mut v = vec![r.one()];
        for k in (0..n).rev() {
            let m = n - k - 1;
            let mut t = Vec::with_capacity(m + 2);
            t.push(r.one());
            t.push(-self.get(k, k));
            let mut col: Vec<Elem> = (k + 1..n).map(|i| self.get(i, k).clone()).collect();
            for _ in 0..m {
                let rc = (0..m).fold(r.zero(), |acc, j| acc + &(self.get(k, k + 1 + j) * &col[j]));
                t.push(-rc);
                col = (0..m)
                    .map(|i| (0..m).fold(r.zero(), |acc, j| acc + &(self.get(k + 1 + i, k + 1 + j) * &col[j])))
                    .collect();
            }
            let new_v = (0..m + 2)
                .map(|i| {
                    (0..=i.min(m)).fold(r.zero(), |acc, j| if i - j < t.len() { acc + &(&t[i - j] * &v[j]) } else { acc })
                })
                .collect();
            v = new_v;
        }
        v
    }

    pub fn det(&self) -> Elem {
        let c = self.charpoly_rev();
        let n = self.rows;
        if n.is_multiple_of(2) {
            c[n].clone()
        } else {
            -&c[n]
        }
    }

    /// Inverse via Cayley–Hamilton; fails with NotAUnit when det is not a unit.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.rows;
        let c = self.charpoly_rev();
        let det = if n.is_multiple_of(2) { c[n].clone() } else { -&c[n] };
        let det_inv = det.inverse().map_err(|_| Error::NotAUnit(format!("determinant {det} of {self}")))?;
        let mut b = Matrix::identity(&self.ring, n);
        for ck in c.iter().take(n).skip(1) {
            b = self.mm(&b).add(&Matrix::scalar(&self.ring, n, ck)).unwrap();
        }
        // M·B = −c_n·I and c_n = (−1)^n det
        let sign = if n.is_multiple_of(2) { -det_inv } else { det_inv };
        Ok(b.scale(&sign))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.det().is_unit()
    }

    fn require_field(&self) -> Result<()> {
        if self.ring.is_field() {
            Ok(())
        } else {
            Err(Error::RingNotField(self.ring.to_string()))
        }
    }

    /// Reduced row echelon form and pivot columns (field coefficients).
    pub fn rref(&self) -> Result<(Matrix, Vec<usize>)> {
        self.require_field()?;
        let mut m = self.clone();
        let mut pivots = vec![];
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else { continue };
            m.swap_rows(p, row);
            let inv = m.get(row, col).inverse()?;
            for j in 0..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i != row && !m.get(i, col).is_zero() {
                    let f = m.get(i, col).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j) - &(&f * m.get(row, j));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok((m, pivots))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// Basis of the kernel as the columns of an n×k matrix.
    pub fn kernel(&self) -> Result<Matrix> {
        let (r, pivots) = self.rref()?;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(&self.ring, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, self.ring.one());
            for (i, &p) in pivots.iter().enumerate() {
                basis.set(p, k, -r.get(i, f));
            }
        }
        Ok(basis)
    }

    /// Solve self·X = rhs for self of full column rank (field coefficients).
    /// Fails with DimensionMismatch when the system is inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        let aug = self.hstack(rhs)?;
        let (r, pivots) = aug.rref()?;
        if pivots.iter().any(|&p| p >= self.cols) || pivots.len() < self.cols {
            return Err(Error::DimensionMismatch("system has no unique solution".into()));
        }
        let mut x = Matrix::zeros(&self.ring, self.cols, rhs.cols);
        for i in 0..self.cols {
            for j in 0..rhs.cols {
                x.set(i, j, r.get(i, self.cols + j).clone());
            }
        }
        Ok(x)
    }

    pub fn hstack(&self, o: &Matrix) -> Result<Matrix> {
        if self.rows != o.rows {
            return Err(Error::DimensionMismatch("hstack".into()));
        }
        let mut out = Matrix::zeros(&self.ring, self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                out.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Matrix of `self` restricted to the span of the columns of `basis`,
    /// which must be invariant.
    pub fn restrict(&self, basis: &Matrix) -> Result<Matrix> {
        if basis.cols == 0 {
            return Ok(Matrix::zeros(&self.ring, 0, 0));
        }
        let image = self.mul(basis)?;
        basis
            .solve(&image)
            .map_err(|_| Error::RelationViolated("subspace is not invariant".into()))
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let ring = blocks[0].ring.clone();
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(&ring, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn kronecker(&self, o: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        out.set(i * o.rows + k, j * o.cols + l, a * o.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Submatrix on the given row and column ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Apply a ring homomorphism entrywise.
    pub fn map(&self, h: &RingHom) -> Result<Matrix> {
        let data = self.data.iter().map(|e| h.apply(e)).collect::<Result<_>>()?;
        Ok(Matrix { ring: h.target().clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Evaluate a polynomial (coefficients lowest first) at this matrix.
    pub fn eval_poly(&self, coeffs: &[Elem]) -> Matrix {
        let n = self.rows;
        let mut acc = Matrix::zeros(&self.ring, n, n);
        for c in coeffs.iter().rev() {
            acc = self.mm(&acc).add(&Matrix::scalar(&self.ring, n, c)).unwrap();
        }
        acc
    }

    /// Least k ≥ 1 with self^k = I, searching up to `bound`.
    pub fn multiplicative_order(&self, bound: u64) -> Option<u64> {
        let mut cur = self.clone();
        for k in 1..=bound {
            if cur.is_identity() {
                return Some(k);
            }
            cur = cur.mm(self);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Ring {
        Ring::rationals()
    }

    fn mat(ring: &Ring, rows: &[&[&str]]) -> Matrix {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        Matrix::parse(ring, &rows).unwrap()
    }

    /// Cofactor expansion, used as an independent determinant.
    fn det_laplace(m: &Matrix) -> Elem {
        let n = m.rows();
        if n == 0 {
            return m.ring().one();
        }
        let mut acc = m.ring().zero();
        for j in 0..n {
            let minor_rows: Vec<Vec<Elem>> =
                (1..n).map(|i| (0..n).filter(|&c| c != j).map(|c| m.get(i, c).clone()).collect()).collect();
            let minor = Matrix::from_rows(m.ring(), minor_rows);
            let term = m.get(0, j) * &det_laplace(&minor);
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        let r = Ring::parse("Z/5^2[T]").unwrap();
        let m = mat(&r, &[&["1 + T", "5", "2"], &["T^2", "3", "1 + 5*T"], &["7", "T", "4"]]);
        assert_eq!(m.det(), det_laplace(&m));
    }

    #[test]
    fn charpoly_of_diagonal() {
        let m = Matrix::diagonal(&q(), &[q().from_int(2), q().from_int(3)]);
        let c: Vec<String> = m.charpoly_rev().iter().map(|e| e.to_string()).collect();
        // (1 − 2X)(1 − 3X) = 1 − 5X + 6X²
        assert_eq!(c, ["1", "-5", "6"]);
    }

    #[test]
    fn inverse_over_cyclotomic() {
        let r = Ring::cyclotomic(8).unwrap();
        let m = mat(&r, &[&["z8", "1"], &["0", "z8^3"]]);
        let inv = m.inverse().unwrap();
        assert!(m.mm(&inv).is_identity());
    }

    #[test]
    fn singular_inverse_fails() {
        let m = mat(&q(), &[&["1", "2"], &["2", "4"]]);
        assert!(matches!(m.inverse(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn kernel_and_restriction() {
        let m = mat(&q(), &[&["1", "1", "0"], &["0", "1", "0"], &["0", "0", "2"]]);
        let minus_one = m.sub(&Matrix::identity(&q(), 3)).unwrap();
        let k = minus_one.kernel().unwrap();
        assert_eq!(k.cols(), 1);
        let r = m.restrict(&k).unwrap();
        assert!(r.is_identity());
    }

    #[test]
    fn kernel_needs_a_field() {
        let r = Ring::parse("Q[T]").unwrap();
        assert!(matches!(Matrix::identity(&r, 2).kernel(), Err(Error::RingNotField(_))));
    }
}
