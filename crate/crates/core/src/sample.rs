//! Seeded generators of valid inputs for the verification suites.
//!
//! Representations are assembled from induced tame characters, so the
//! relation ΦΣΦ⁻¹ = Σ^q holds by construction, and then hidden by a
//! unimodular change of basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::finite::prime_factors;
use crate::ring::{adjoin_roots, Elem, Ring};
use crate::weil::{sp, LocalFieldData, TameCharacter, TameRep, WDRep};

/// Largest φ(lcm(M, p)) allowed for the coefficient field Q(ζ_M).
pub const TOTIENT_CAP: u64 = 48;

const FIELDS: [(u64, u32); 4] = [(3, 1), (5, 1), (7, 1), (3, 2)];
const ELLS: [u64; 6] = [2, 3, 5, 7, 11, 13];

pub fn totient(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// The character of W_E, [E : F] = d, with σ ↦ ζ_o^j (j prime to o).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    pub d: u32,
    pub o: u64,
    pub j: u64,
}

/// A non-split extension 0 → sub → full → quotient → 0, in a hidden basis.
#[derive(Clone, Debug)]
pub struct Triangular {
    pub full: TameRep,
    pub sub: TameRep,
    pub quotient: TameRep,
}

/// A character ξ of W_E with E/F unramified of degree d.
#[derive(Clone, Debug)]
pub struct InducedPair {
    pub field: LocalFieldData,
    pub d: u32,
    pub xi: TameCharacter,
}

impl InducedPair {
    pub fn trivial(&self) -> Result<TameCharacter> {
        let r = self.xi.ring();
        TameCharacter::new(self.field, self.d, r.one(), r.one())
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    pub qmax: u64,
    pub dimmax: usize,
}

impl Sampler {
    /// Case `case` of the stream `seed`; independent of evaluation order.
    pub fn new(seed: u64, case: u64, qmax: u64, dimmax: usize) -> Sampler {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(case);
        Sampler { rng, qmax, dimmax: dimmax.max(1) }
    }

    pub fn field(&mut self) -> Result<LocalFieldData> {
        let choices: Vec<(u64, u32)> = FIELDS.iter().copied().filter(|&(p, f)| p.pow(f) <= self.qmax).collect();
        let &(p, f) = choices
            .choose(&mut self.rng)
            .ok_or_else(|| Error::InvalidInput(format!("no residue field with q ≤ {}", self.qmax)))?;
        let ells: Vec<u64> = ELLS.iter().copied().filter(|&l| l != p).collect();
        LocalFieldData::new(p, f, *ells.choose(&mut self.rng).unwrap())
    }

    /// A divisor o of n keeping φ(lcm(M, o, p)) within the cap.
    fn order_within(&mut self, n: u64, m: u64, p: u64) -> u64 {
        let ok: Vec<u64> = divisors(n).into_iter().filter(|o| totient(m.lcm(o).lcm(&p)) <= TOTIENT_CAP).collect();
        *ok.choose(&mut self.rng).unwrap_or(&1)
    }

    fn spec(&mut self, field: &LocalFieldData, dim_left: usize, m: &mut u64) -> BlockSpec {
        let q = field.q();
        let dmax = dim_left.min(3) as u32;
        let d = if dmax == 1 || self.rng.gen_bool(0.5) { 1 } else { self.rng.gen_range(2..=dmax) };
        let o = self.order_within(q.pow(d) - 1, *m, field.p);
        let units: Vec<u64> = (1..=o).filter(|j| j.gcd(&o) == 1).collect();
        let j = *units.choose(&mut self.rng).unwrap();
        *m = m.lcm(&o);
        BlockSpec { d, o, j }
    }

    /// Blocks of total dimension exactly `dim`; `m` accumulates the root
    /// order they need.
    pub fn specs(&mut self, field: &LocalFieldData, dim: usize, m: &mut u64) -> Vec<BlockSpec> {
        let mut out: Vec<BlockSpec> = Vec::new();
        let mut left = dim;
        while left > 0 {
            let repeat = out.last().copied().filter(|s| s.d as usize <= left && self.rng.gen_bool(0.25));
            let s = match repeat {
                Some(s) => s,
                None => self.spec(field, left, m),
            };
            left -= s.d as usize;
            out.push(s);
        }
        out
    }

    pub fn ring_for(m: u64) -> Result<Ring> {
        Ok(adjoin_roots(&Ring::rationals(), m.max(1))?.0)
    }

    /// ±(a/b)·ζ with a, b ∈ {1, 2, 3} and ζ a root of unity of the ring.
    pub fn unit(&mut self, ring: &Ring) -> Result<Elem> {
        let a: i64 = self.rng.gen_range(1..=3) * if self.rng.gen_bool(0.5) { 1 } else { -1 };
        let b: i64 = self.rng.gen_range(1..=3);
        let r = ring.from_rational(&BigRational::new(BigInt::from(a), BigInt::from(b)))?;
        let l = ring.root_order();
        let k = self.rng.gen_range(0..l);
        Ok(r * ring.root_of_unity(l)?.pow(k))
    }

    pub fn character(&mut self, field: &LocalFieldData, ring: &Ring, s: &BlockSpec) -> Result<TameCharacter> {
        let zeta = ring.root_of_unity(s.o)?.pow(s.j);
        TameCharacter::new(*field, s.d, self.unit(ring)?, zeta)
    }

    pub fn build(&mut self, field: &LocalFieldData, ring: &Ring, specs: &[BlockSpec]) -> Result<TameRep> {
        let blocks = specs
            .iter()
            .map(|s| self.character(field, ring, s)?.induce())
            .collect::<Result<Vec<_>>>()?;
        TameRep::direct_sum_all(&blocks)
    }

    /// A product of elementary integer matrices.
    pub fn unimodular(&mut self, ring: &Ring, n: usize) -> Matrix {
        let mut p = Matrix::identity(ring, n);
        if n < 2 {
            return p;
        }
        for _ in 0..2 * n {
            let i = self.rng.gen_range(0..n);
            let mut j = self.rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c = ring.from_int(*[-2i64, -1, 1, 2].choose(&mut self.rng).unwrap());
            for k in 0..n {
                let v = p.get(i, k) + &(&c * p.get(j, k));
                p.set(i, k, v);
            }
        }
        p
    }

    fn dim(&mut self, max: usize) -> usize {
        self.rng.gen_range(1..=max.max(1))
    }

    /// A semisimple tame representation over Q(ζ_M) of dimension ≤ dimmax.
    pub fn tame_semisimple(&mut self) -> Result<TameRep> {
        let field = self.field()?;
        let dim = self.dim(self.dimmax);
        let mut m = 1;
        let specs = self.specs(&field, dim, &mut m);
        let ring = Sampler::ring_for(m)?;
        let rep = self.build(&field, &ring, &specs)?;
        let p = self.unimodular(&ring, dim);
        rep.conjugate(&p)
    }

    pub fn block_triangular(&mut self) -> Result<Triangular> {
        let field = self.field()?;
        let total = self.dimmax.max(2);
        let twist = self.rng.gen_bool(0.5);
        let d1 = if twist { self.rng.gen_range(1..=total / 2) } else { self.rng.gen_range(1..total) };
        let d2 = if twist { d1 } else { self.rng.gen_range(1..=total - d1) };
        let mut m = 1;
        let specs1 = self.specs(&field, d1, &mut m);
        let specs2 = if twist { vec![] } else { self.specs(&field, d2, &mut m) };
        let ring = Sampler::ring_for(m)?;
        let sub = self.build(&field, &ring, &specs1)?;
        let quotient = if twist {
            let c = self.unit(&ring)?;
            sub.twist_unramified(&c)?
        } else {
            self.build(&field, &ring, &specs2)?
        };
        // B with B·Σ″ = Σ′^q·B, by averaging a random B₀ over ⟨σ⟩
        let mut b0 = Matrix::zeros(&ring, d1, d2);
        for i in 0..d1 {
            for j in 0..d2 {
                b0.set(i, j, ring.from_int(self.rng.gen_range(-2..=2)));
            }
        }
        let n = sub.order().lcm(&quotient.order());
        let left = sub.sigma().pow(field.q());
        let right = quotient.sigma().inverse()?;
        let mut acc = Matrix::zeros(&ring, d1, d2);
        let mut l = Matrix::identity(&ring, d1);
        let mut r = Matrix::identity(&ring, d2);
        for _ in 0..n {
            acc = acc.add(&l.mm(&b0).mm(&r))?;
            l = l.mm(&left);
            r = r.mm(&right);
        }
        let b = acc.scale(&ring.from_int(n as i64).inverse()?);
        let mut phi = Matrix::block_diag(&[sub.phi().clone(), quotient.phi().clone()]);
        for i in 0..d1 {
            for j in 0..d2 {
                phi.set(i, d1 + j, b.get(i, j).clone());
            }
        }
        let sigma = Matrix::block_diag(&[sub.sigma().clone(), quotient.sigma().clone()]);
        let full = TameRep::new(field, phi, sigma)?;
        let p = self.unimodular(&ring, d1 + d2);
        Ok(Triangular { full: full.conjugate(&p)?, sub, quotient })
    }

    /// A Frobenius-semisimple Weil–Deligne representation of dimension ≤ 5
    /// built from pieces r′ ⊗ Sp(n), n ≤ 4.
    pub fn wd(&mut self) -> Result<WDRep> {
        let field = self.field()?;
        let total = self.dimmax.clamp(1, 5);
        let mut shapes = Vec::new();
        let mut left = total;
        while left > 0 {
            let n = self.rng.gen_range(1..=left.min(4));
            let dim = self.rng.gen_range(1..=left / n);
            shapes.push((n, dim));
            left -= n * dim;
            if self.rng.gen_bool(0.5) {
                break;
            }
        }
        let mut m = 1;
        let specs: Vec<Vec<BlockSpec>> = shapes.iter().map(|&(_, dim)| self.specs(&field, dim, &mut m)).collect();
        let ring = Sampler::ring_for(m)?;
        let mut pieces = Vec::new();
        for (&(n, _), s) in shapes.iter().zip(&specs) {
            let r = WDRep::from_tame(self.build(&field, &ring, s)?);
            pieces.push(r.tensor(&sp(n, &ring, field)?)?);
        }
        let (first, rest) = pieces.split_first().unwrap();
        let rep = rest.iter().try_fold(first.clone(), |acc, r| acc.direct_sum(r))?;
        let p = self.unimodular(&ring, rep.dim());
        rep.conjugate(&p)
    }

    /// A character of W_E with [E : F] = d ∈ {2, 3, 4}.
    pub fn induced_pair(&mut self) -> Result<InducedPair> {
        let field = self.field()?;
        let d = self.rng.gen_range(2..=4);
        let mut m = 1;
        let o = self.order_within(field.q().pow(d) - 1, 1, field.p);
        let units: Vec<u64> = (1..=o).filter(|j| j.gcd(&o) == 1).collect();
        let spec = BlockSpec { d, o, j: *units.choose(&mut self.rng).unwrap() };
        m = m.lcm(&o);
        let ring = Sampler::ring_for(m)?;
        let xi = self.character(&field, &ring, &spec)?;
        Ok(InducedPair { field, d, xi })
    }

    pub fn gen_range(&mut self, range: std::ops::Range<u64>) -> u64 {
        self.rng.gen_range(range)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totients() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(81), 54);
    }

    #[test]
    fn samples_are_valid_and_reproducible() {
        for case in 0..20 {
            let a = Sampler::new(7, case, 9, 6).tame_semisimple().unwrap();
            let b = Sampler::new(7, case, 9, 6).tame_semisimple().unwrap();
            assert_eq!(a, b);
            assert!(a.dim() <= 6);
            let q = a.field().q();
            assert!([3, 5, 7, 9].contains(&q));
            assert_ne!(a.field().ell, a.field().p);
        }
    }

    #[test]
    fn triangular_extensions() {
        for case in 0..10 {
            let t = Sampler::new(3, case, 9, 5).block_triangular().unwrap();
            assert_eq!(t.full.dim(), t.sub.dim() + t.quotient.dim());
            assert!(t.full.dim() <= 5);
            assert_eq!(t.full.phi().charpoly_rev(), Matrix::block_diag(&[t.sub.phi().clone(), t.quotient.phi().clone()]).charpoly_rev());
        }
    }

    #[test]
    fn wd_shapes() {
        for case in 0..10 {
            let w = Sampler::new(5, case, 9, 5).wd().unwrap();
            assert!(w.dim() <= 5);
        }
    }

    #[test]
    fn qmax_restricts_fields() {
        for case in 0..10 {
            let f = Sampler::new(1, case, 3, 4).field().unwrap();
            assert_eq!(f.q(), 3);
        }
    }
}
