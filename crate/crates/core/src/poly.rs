//! Univariate polynomials over a field of the tower, as coefficient vectors
//! (lowest degree first). Used for squarefree parts and projector algebra.

use crate::ring::Elem;

pub fn trim(mut a: Vec<Elem>) -> Vec<Elem> {
    while a.last().is_some_and(Elem::is_zero) {
        a.pop();
    }
    a
}

pub fn add(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) | (None, Some(x)) => x.clone(),
            _ => unreachable!(),
        })
        .collect();
    trim(v)
}

pub fn neg(a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|x| -x).collect()
}

pub fn sub(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    add(a, &neg(b))
}

pub fn mul(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let r = a[0].ring();
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(out)
}

pub fn derivative(a: &[Elem]) -> Vec<Elem> {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c.scale(i as i64)).collect())
}

/// Division with remainder by a polynomial with unit leading coefficient.
pub fn divrem(a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let ring = b[0].ring().clone();
    let lead_inv = b[db].inverse().expect("leading coefficient must be a unit");
    let mut q = vec![ring.zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&c * bj);
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

/// Monic gcd over a field.
pub fn gcd(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = divrem(&x, &y).1;
        x = std::mem::replace(&mut y, r);
    }
    if x.is_empty() {
        return x;
    }
    let inv = x.last().unwrap().inverse().expect("field coefficients");
    x.iter().map(|c| c * &inv).collect()
}

pub fn is_squarefree_over_field(f: &[Elem]) -> bool {
    gcd(f, &derivative(f)).len() <= 1
}

/// f / gcd(f, f′): the product of the distinct irreducible factors
/// (characteristic zero).
pub fn squarefree_part(f: &[Elem]) -> Vec<Elem> {
    let g = gcd(f, &derivative(f));
    divrem(f, &g).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn p(coeffs: &[i64]) -> Vec<Elem> {
        let q = Ring::rationals();
        coeffs.iter().map(|&c| q.from_int(c)).collect()
    }

    #[test]
    fn squarefree_part_of_square() {
        // (x − 1)²(x + 2) = x³ − 3x + 2
        let f = p(&[2, -3, 0, 1]);
        assert!(!is_squarefree_over_field(&f));
        let s = squarefree_part(&f);
        // leading coefficient 1: (x − 1)(x + 2) = x² + x − 2
        assert_eq!(s, p(&[-2, 1, 1]));
    }

    #[test]
    fn division_identity() {
        let a = p(&[1, 2, 3, 4]);
        let b = p(&[1, 1]);
        let (q, r) = divrem(&a, &b);
        assert_eq!(add(&mul(&q, &b), &r), a);
    }
}
