//! Prime-field polynomial arithmetic, Conway polynomials and the finite
//! field leaf 𝔽_{ℓ^r} = 𝔽_ℓ[x]/C_{ℓ,r}(x).
//!
//! Conway polynomials give every 𝔽_{ℓ^r} a distinguished primitive element x
//! whose norms to subfields are again the distinguished elements. Both the
//! coefficient leaf and the residue fields of the local field use them, so
//! multiplicative characters of residue fields are norm-compatible.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Polynomials over 𝔽_p as coefficient vectors, lowest degree first.
pub(crate) mod fp {
    use super::{mulmod, powmod};

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
            }
        }
        trim(out)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out = vec![0; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out[i] = (x + p - y) % p;
        }
        trim(out)
    }

    /// Remainder of a modulo b (b nonzero with invertible leading coefficient).
    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        divrem(a, b, p).1
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        if r.len() < b.len() {
            return (vec![], r);
        }
        let inv_lead = powmod(b[db], p - 2, p);
        let mut q = vec![0; r.len() - db];
        for i in (0..q.len()).rev() {
            let c = mulmod(r[i + db], inv_lead, p);
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    r[i + j] = (r[i + j] + p - mulmod(c, bj, p)) % p;
                }
            }
            q[i] = c;
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn mulmod_poly(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod_poly(a: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[1], m, p);
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod_poly(&acc, &base, m, p);
            }
            base = mulmod_poly(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    /// Extended gcd: returns (g, s) with s·a ≡ g (mod b), g monic.
    pub fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r0 = trim(b.to_vec());
        let mut r1 = trim(a.to_vec());
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.is_empty() {
            return (r0, s0);
        }
        let inv = powmod(*r0.last().unwrap(), p - 2, p);
        let g = r0.iter().map(|&c| mulmod(c, inv, p)).collect();
        let s = s0.iter().map(|&c| mulmod(c, inv, p)).collect();
        (g, s)
    }

    pub fn eval_at_poly(f: &[u64], y: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut acc: Vec<u64> = vec![];
        for &c in f.iter().rev() {
            acc = mulmod_poly(&acc, y, m, p);
            acc = trim({
                let mut v = acc.clone();
                if v.is_empty() {
                    v.push(0);
                }
                v[0] = (v[0] + c) % p;
                v
            });
        }
        acc
    }
}

/// Conway polynomial C_{p,n}, monic, lowest degree first.
pub fn conway_polynomial(p: u64, n: u32) -> Result<Vec<u64>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Vec<u64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&(p, n)) {
        return Ok(c.clone());
    }
    if !is_prime(p) {
        return Err(Error::CompositeModulusPrime(p));
    }
    let order = checked_pow(p, n)
        .filter(|&o| o <= 1 << 40)
        .ok_or_else(|| Error::InvalidInput(format!("field of order {p}^{n} is too large")))?;
    let group = order - 1;
    let primes = prime_factors(group);
    let maximal_divisors: Vec<u32> = prime_factors(n as u64).iter().map(|&r| n / r as u32).collect();
    let subfield_polys: Vec<(u32, Vec<u64>)> = maximal_divisors
        .iter()
        .filter(|&&d| d >= 1 && d < n)
        .map(|&d| conway_polynomial(p, d).map(|c| (d, c)))
        .collect::<Result<_>>()?;

    let nn = n as usize;
    let total = order; // p^n candidate tails
    for idx in 0..total {
        // digits a_{n-1}, ..., a_0 with a_{n-1} most significant
        let mut digits = vec![0u64; nn];
        let mut t = idx;
        for i in 0..nn {
            digits[i] = t % p;
            t /= p;
        }
        // digits[0] = a_0, ..., digits[n-1] = a_{n-1}
        if digits[0] == 0 {
            continue;
        }
        let mut f = vec![0u64; nn + 1];
        f[nn] = 1;
        for i in 0..nn {
            let sign_neg = (nn - i) % 2 == 1;
            f[i] = if sign_neg { (p - digits[i]) % p } else { digits[i] };
        }
        if !is_primitive(&f, p, group, &primes) {
            continue;
        }
        let compatible = subfield_polys.iter().all(|(d, c)| {
            let sub_order = p.pow(*d) - 1;
            let y = fp::powmod_poly(&[0, 1], (group / sub_order) as u128, &f, p);
            fp::eval_at_poly(c, &y, &f, p).is_empty()
        });
        if compatible {
            cache.lock().unwrap().insert((p, n), f.clone());
            return Ok(f);
        }
    }
    unreachable!("a Conway polynomial always exists")
}

fn is_primitive(f: &[u64], p: u64, group: u64, primes: &[u64]) -> bool {
    let x = [0u64, 1];
    if fp::powmod_poly(&x, group as u128, f, p) != vec![1] {
        return false;
    }
    primes.iter().all(|&r| fp::powmod_poly(&x, (group / r) as u128, f, p) != vec![1])
}

/// The leaf 𝔽_{ℓ^r}; elements are coefficient vectors of length r.
#[derive(Debug)]
pub(crate) struct FiniteField {
    pub ell: u64,
    pub r: u32,
    pub order: u64,
    pub modulus: Vec<u64>,
}

impl FiniteField {
    pub fn new(ell: u64, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidInput("finite field degree must be positive".into()));
        }
        let modulus = conway_polynomial(ell, r)?;
        Ok(FiniteField { ell, r, order: ell.pow(r), modulus })
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.r as usize]
    }

    fn pad(&self, mut v: Vec<u64>) -> Vec<u64> {
        v.resize(self.r as usize, 0);
        v
    }

    pub fn from_int(&self, k: i128) -> Vec<u64> {
        let mut z = self.zero();
        z[0] = k.rem_euclid(self.ell as i128) as u64;
        z
    }

    /// The distinguished primitive element (root of the Conway polynomial).
    pub fn generator(&self) -> Vec<u64> {
        self.pad(fp::rem(&[0, 1], &self.modulus, self.ell))
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.ell).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.ell - x) % self.ell).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.pad(fp::mulmod_poly(a, b, &self.modulus, self.ell))
    }

    pub fn pow(&self, a: &[u64], e: u128) -> Vec<u64> {
        self.pad(fp::powmod_poly(a, e, &self.modulus, self.ell))
    }

    pub fn inverse(&self, a: &[u64]) -> Result<Vec<u64>> {
        if a.iter().all(|&c| c == 0) {
            return Err(Error::NotAUnit("0".into()));
        }
        Ok(self.pow(a, (self.order - 2) as u128))
    }
}

/// Log table of 𝔽_{p^m}: the absolute trace to 𝔽_p of g^k for every k, where
/// g is the Conway generator.
#[derive(Debug)]
pub struct ResidueField {
    pub p: u64,
    pub m: u32,
    pub order: u64,
    /// `traces[k]` = Tr_{𝔽_{p^m}/𝔽_p}(g^k) for 0 ≤ k < p^m − 1.
    pub traces: Vec<u32>,
}

impl ResidueField {
    /// Cached residue field data for 𝔽_{p^m}.
    pub fn get(p: u64, m: u32) -> Result<Arc<ResidueField>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<ResidueField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&(p, m)) {
            return Ok(f.clone());
        }
        let field = FiniteField::new(p, m)?;
        if field.order > 20_000_000 {
            return Err(Error::InvalidInput(format!("residue field of order {} too large", field.order)));
        }
        let mm = m as usize;
        // trace of each basis monomial x^i, via sum of Frobenius conjugates
        let basis_traces: Vec<u64> = (0..mm)
            .map(|i| {
                let mut mono = vec![0u64; i + 1];
                mono[i] = 1;
                let mono = field.pad(fp::rem(&mono, &field.modulus, p));
                let mut acc = field.zero();
                let mut conj = mono;
                for _ in 0..m {
                    acc = field.add(&acc, &conj);
                    conj = field.pow(&conj, p as u128);
                }
                debug_assert!(acc[1..].iter().all(|&c| c == 0));
                acc[0]
            })
            .collect();
        let g = field.generator();
        let n = (field.order - 1) as usize;
        let mut traces = Vec::with_capacity(n);
        let mut cur = field.from_int(1);
        for _ in 0..n {
            let t = cur.iter().zip(&basis_traces).fold(0u64, |acc, (c, t)| (acc + c * t) % p);
            traces.push(t as u32);
            cur = field.mul(&cur, &g);
        }
        let rf = Arc::new(ResidueField { p, m, order: field.order, traces });
        cache.lock().unwrap().insert((p, m), rf.clone());
        Ok(rf)
    }
}
