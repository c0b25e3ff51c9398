//! The leaf (ℤ[x]/Φ_m(x))/ℓⁿ with coefficients stored as residues in [0, ℓⁿ).

use super::cyclotomic::cyclotomic_poly;
use super::finite::{checked_pow, fp, is_prime, mulmod};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

#[derive(Debug)]
pub(crate) struct ModCyc {
    pub m: u64,
    pub ell: u64,
    pub n: u32,
    /// ℓⁿ
    pub modulus: u64,
    pub deg: usize,
    /// Monic Φ_m reduced mod ℓⁿ.
    phi: Vec<u64>,
}

impl ModCyc {
    pub fn new(m: u64, ell: u64, n: u32) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::CompositeModulusPrime(ell));
        }
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput("modular cyclotomic parameters must be positive".into()));
        }
        let modulus = checked_pow(ell, n)
            .filter(|&v| v < 1 << 62)
            .ok_or_else(|| Error::InvalidInput(format!("{ell}^{n} is too large")))?;
        let big = BigInt::from(modulus);
        let phi: Vec<u64> = cyclotomic_poly(m)
            .iter()
            .map(|c| {
                let r = ((c % &big) + &big) % &big;
                r.to_u64().unwrap()
            })
            .collect();
        Ok(ModCyc { m, ell, n, modulus, deg: phi.len() - 1, phi })
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.deg]
    }

    pub fn from_int(&self, k: &BigInt) -> Vec<u64> {
        let big = BigInt::from(self.modulus);
        let r = ((k % &big) + &big) % &big;
        let mut z = self.zero();
        z[0] = r.to_u64().unwrap();
        z
    }

    /// x^k reduced.
    pub fn monomial(&self, k: usize) -> Vec<u64> {
        let mut v = vec![0u64; k + 1];
        v[k] = 1;
        self.reduce(v)
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let q = self.modulus;
        let d = self.deg;
        for i in (d..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            for j in 0..=d {
                let t = mulmod(c, self.phi[j], q);
                v[i - d + j] = (v[i - d + j] + q - t) % q;
            }
        }
        v.resize(d, 0);
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| ((*x as u128 + *y as u128) % self.modulus as u128) as u64).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.modulus - x) % self.modulus).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let q = self.modulus;
        if self.deg == 0 {
            return vec![];
        }
        let mut out = vec![0u64; 2 * self.deg - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(x, y, q)) % q;
            }
        }
        self.reduce(out)
    }

    fn mod_ell(&self, a: &[u64]) -> Vec<u64> {
        fp::trim(a.iter().map(|c| c % self.ell).collect())
    }

    fn inverse_mod_ell(&self, a: &[u64]) -> Option<Vec<u64>> {
        let am = self.mod_ell(a);
        if am.is_empty() {
            return None;
        }
        let phim: Vec<u64> = self.phi.iter().map(|c| c % self.ell).collect();
        let (g, s) = fp::ext_gcd(&am, &phim, self.ell);
        if g != vec![1] {
            return None;
        }
        let mut s = fp::rem(&s, &phim, self.ell);
        s.resize(self.deg, 0);
        Some(s)
    }

    /// Inverse via the inverse mod ℓ lifted by Newton steps b ← b(2 − ab).
    pub fn inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        let mut b = self.inverse_mod_ell(a)?;
        let two = self.from_int(&BigInt::from(2));
        let mut precision = 1u32;
        while precision < self.n {
            let ab = self.mul(a, &b);
            b = self.mul(&b, &self.add(&two, &self.neg(&ab)));
            precision *= 2;
        }
        Some(b)
    }

    /// Every nilpotent element vanishes at this power.
    pub fn nilpotency_bound(&self) -> u64 {
        self.n as u64 * self.deg as u64
    }
}
