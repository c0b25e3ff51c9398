//! Dense arithmetic in ℚ(ζ_m) = ℚ[x]/Φ_m(x).
//!
//! Elements are stored as an integer numerator vector of length φ(m) over a
//! single positive denominator, normalized so that the gcd of all entries is
//! one. Equality of canonical forms is therefore structural.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer coefficients of the m-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    assert!(m >= 1, "cyclotomic index must be positive");
    // x^m - 1 divided by Φ_d for every proper divisor d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let div = cyclotomic_poly(d);
            num = exact_div_monic(&num, &div);
        }
    }
    cache.lock().unwrap().insert(m, num.clone());
    num
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// Euler's totient.
pub fn totient(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

#[derive(Debug)]
pub(crate) struct CycField {
    pub m: u64,
    pub deg: usize,
    /// Monic Φ_m, length deg + 1.
    phi: Vec<BigInt>,
    /// Nonzero (index, coefficient) pairs of Φ_m below the leading term,
    /// present when they all fit comfortably in machine integers.
    small_phi: Option<Vec<(usize, i128)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct CycElem {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl CycElem {
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    fn normalize(mut self) -> Self {
        if self.is_zero() {
            self.den = BigInt::one();
            return self;
        }
        if self.den.is_negative() {
            self.den = -self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
        self
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }
}

impl CycField {
    pub fn new(m: u64) -> Self {
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        let small_phi = phi[..deg]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| i128::try_from(c).ok().filter(|x| x.abs() < 1 << 20).map(|x| (j, x)))
            .collect();
        CycField { m, deg, phi, small_phi }
    }

    pub fn zero(&self) -> CycElem {
        CycElem { num: vec![BigInt::zero(); self.deg], den: BigInt::one() }
    }

    pub fn from_int(&self, k: &BigInt) -> CycElem {
        let mut z = self.zero();
        z.num[0] = k.clone();
        z
    }

    pub fn from_coeffs(&self, coeffs: &[BigRational]) -> CycElem {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut wide: Vec<BigInt> =
            coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        self.reduce_in_place(&mut wide);
        CycElem { num: wide, den }.normalize()
    }

    /// x^k reduced modulo Φ_m (k taken mod m).
    pub fn monomial(&self, k: u64) -> CycElem {
        let k = (k % self.m) as usize;
        let mut wide = vec![BigInt::zero(); (k + 1).max(self.deg)];
        wide[k] = BigInt::one();
        self.reduce_in_place(&mut wide);
        CycElem { num: wide, den: BigInt::one() }
    }

    /// Σ wide[k]·x^k for small integer coefficients, reduced in machine
    /// integers when Φ_m's coefficients allow it.
    pub fn from_small(&self, wide: &[i64]) -> CycElem {
        let small_phi: Option<Vec<i128>> = self.phi.iter().map(|c| i128::try_from(c).ok()).collect();
        let Some(phi) = small_phi.filter(|p| p.iter().all(|c| c.abs() < 1 << 20)) else {
            let mut big: Vec<BigInt> = wide.iter().map(|&c| BigInt::from(c)).collect();
            self.reduce_in_place(&mut big);
            return CycElem { num: big, den: BigInt::one() }.normalize();
        };
        let d = self.deg;
        let mut t: Vec<i128> = wide.iter().map(|&c| c as i128).collect();
        if t.len() < d {
            t.resize(d, 0);
        }
        for i in (d..t.len()).rev() {
            let c = t[i];
            if c == 0 {
                continue;
            }
            t[i] = 0;
            for j in 0..d {
                if phi[j] != 0 {
                    t[i - d + j] = t[i - d + j].checked_sub(c * phi[j]).expect("coefficient overflow in cyclotomic reduction");
                }
            }
        }
        t.truncate(d);
        CycElem { num: t.into_iter().map(BigInt::from).collect(), den: BigInt::one() }.normalize()
    }

    /// Reduce a wide integer vector modulo Φ_m and truncate to length deg.
    fn reduce_in_place(&self, t: &mut Vec<BigInt>) {
        let d = self.deg;
        if t.len() > d {
            for i in (d..t.len()).rev() {
                if t[i].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut t[i]);
                for j in 0..d {
                    if !self.phi[j].is_zero() {
                        t[i - d + j] -= &c * &self.phi[j];
                    }
                }
            }
        }
        t.resize(d, BigInt::zero());
    }

    pub fn add(&self, a: &CycElem, b: &CycElem) -> CycElem {
        if a.den == b.den {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect();
            return CycElem { num, den: a.den.clone() }.normalize();
        }
        let num = a.num.iter().zip(&b.num).map(|(x, y)| x * &b.den + y * &a.den).collect();
        CycElem { num, den: &a.den * &b.den }.normalize()
    }

    pub fn neg(&self, a: &CycElem) -> CycElem {
        CycElem { num: a.num.iter().map(|x| -x).collect(), den: a.den.clone() }
    }

    pub fn mul(&self, a: &CycElem, b: &CycElem) -> CycElem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if let Some(c) = self.mul_small(a, b) {
            return c;
        }
        let d = self.deg;
        let mut wide = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    wide[i + j] += x * y;
                }
            }
        }
        self.reduce_in_place(&mut wide);
        CycElem { num: wide, den: &a.den * &b.den }.normalize()
    }

    /// Product in machine integers when every coefficient is small; None
    /// when an intermediate value would overflow.
    fn mul_small(&self, a: &CycElem, b: &CycElem) -> Option<CycElem> {
        const LIMIT: i64 = 1 << 40;
        let small = |v: &[BigInt]| -> Option<Vec<i64>> {
            v.iter().map(|c| i64::try_from(c).ok().filter(|x| x.abs() < LIMIT)).collect()
        };
        let (x, y) = (small(&a.num)?, small(&b.num)?);
        let phi = self.small_phi.as_ref()?;
        let d = self.deg;
        let mut wide = vec![0i128; 2 * d - 1];
        for (i, &u) in x.iter().enumerate() {
            if u == 0 {
                continue;
            }
            let u = u as i128;
            for (w, &v) in wide[i..i + d].iter_mut().zip(&y) {
                *w += u * v as i128;
            }
        }
        for i in (d..wide.len()).rev() {
            let c = wide[i];
            if c == 0 {
                continue;
            }
            for &(j, f) in phi {
                let t = &mut wide[i - d + j];
                *t = t.checked_sub(c.checked_mul(f)?)?;
            }
        }
        wide.truncate(d);
        Some(CycElem { num: wide.into_iter().map(BigInt::from).collect(), den: &a.den * &b.den }.normalize())
    }

    /// The automorphism x ↦ x^a, a prime to m.
    pub fn galois(&self, e: &CycElem, a: u64) -> CycElem {
        let m = self.m as usize;
        let mut wide = vec![BigInt::zero(); m.max(self.deg)];
        for (k, c) in e.num.iter().enumerate() {
            if !c.is_zero() {
                wide[(k as u64 * a % self.m) as usize] += c;
            }
        }
        self.reduce_in_place(&mut wide);
        CycElem { num: wide, den: e.den.clone() }.normalize()
    }

    pub fn scale(&self, a: &CycElem, q: &BigRational) -> CycElem {
        let num = a.num.iter().map(|x| x * q.numer()).collect();
        CycElem { num, den: &a.den * q.denom() }.normalize()
    }

    /// Multiplicative inverse: solve (multiplication by num)·c = e₀ by
    /// fraction-free (Bareiss) elimination over ℤ.
    pub fn inverse(&self, a: &CycElem) -> Result<CycElem> {
        if a.is_zero() {
            return Err(Error::NotAUnit("0".into()));
        }
        let d = self.deg;
        // rows[i][j] = coefficient of x^i in x^j·num; column d is e₀
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(d);
        let mut v = a.num.clone();
        for _ in 0..d {
            cols.push(v.clone());
            let top = v.pop().unwrap_or_default();
            v.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (j, c) in self.phi[..d].iter().enumerate() {
                    if !c.is_zero() {
                        v[j] -= &top * c;
                    }
                }
            }
        }
        let mut m: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigInt> = cols.iter().map(|c| c[i].clone()).collect();
                row.push(if i == 0 { BigInt::one() } else { BigInt::zero() });
                row
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..d {
            let p = (k..d).find(|&i| !m[i][k].is_zero()).ok_or_else(|| Error::NotAUnit("singular multiplication map".into()))?;
            m.swap(k, p);
            let (head, tail) = m.split_at_mut(k + 1);
            let pivot_row = &head[k];
            for row in tail.iter_mut() {
                let f = row[k].clone();
                for j in k + 1..=d {
                    row[j] = (&pivot_row[k] * &row[j] - &f * &pivot_row[j]) / &prev;
                }
                row[k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let mut x = vec![BigRational::zero(); d];
        for i in (0..d).rev() {
            let mut acc = BigRational::from_integer(m[i][d].clone());
            for j in i + 1..d {
                if !m[i][j].is_zero() {
                    acc -= &x[j] * BigRational::from_integer(m[i][j].clone());
                }
            }
            x[i] = acc / BigRational::from_integer(m[i][i].clone());
        }
        // a = num/den, so a^{-1} = den·num^{-1}
        let inv = self.from_coeffs(&x);
        Ok(self.scale(&inv, &BigRational::from_integer(a.den.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(8), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_poly(105).len() - 1, 48);
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_poly(105).iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn totients() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(8), 4);
        assert_eq!(totient(240), 64);
        assert_eq!(totient(3120), 768);
    }

    #[test]
    fn inverse_roundtrip() {
        let k = CycField::new(7);
        let a = k.add(&k.monomial(1), &k.from_int(&BigInt::from(2)));
        let inv = k.inverse(&a).unwrap();
        let one = k.mul(&a, &inv);
        assert_eq!(one, k.from_int(&BigInt::one()));
    }

    #[test]
    fn monomial_wraps() {
        let k = CycField::new(5);
        assert_eq!(k.monomial(5), k.from_int(&BigInt::one()));
        let sum = (0..5).fold(k.zero(), |acc, i| k.add(&acc, &k.monomial(i)));
        assert!(sum.is_zero());
    }
}
