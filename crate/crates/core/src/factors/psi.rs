use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, RingHom};

/// An additive character ψ of F: its level n(ψ) and the residue character
/// x ↦ ζ_p^{a·Tr(x)}, where ζ_p is the canonical primitive p-th root of the
/// coefficient ring and a ∈ (ℤ/p)^×.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdditiveCharacter {
    pub level: i64,
    pub residue: u64,
}

impl Default for AdditiveCharacter {
    fn default() -> Self {
        AdditiveCharacter { level: 0, residue: 1 }
    }
}

impl AdditiveCharacter {
    pub fn new(level: i64, residue: u64) -> Self {
        AdditiveCharacter { level, residue }
    }

    fn check(&self, p: u64) -> Result<()> {
        if self.residue.is_multiple_of(p) {
            return Err(Error::InvalidInput(format!("residue character exponent {} is trivial mod {p}", self.residue)));
        }
        Ok(())
    }

    /// ζ_p^a in `ring`.
    pub fn root(&self, ring: &Ring, p: u64) -> Result<Elem> {
        self.check(p)?;
        Ok(ring.root_of_unity(p)?.pow(self.residue % p))
    }

    /// The same character viewed through `h`: the exponent a′ with
    /// h(ζ_p^a) = ζ_p^{a′} in the target.
    pub fn base_change(&self, h: &RingHom, p: u64) -> Result<AdditiveCharacter> {
        let image = h.apply(&self.root(h.source(), p)?)?;
        let z = h.target().root_of_unity(p)?;
        let mut w = h.target().one();
        for a in 1..p {
            w = &w * &z;
            if w == image {
                return Ok(AdditiveCharacter { level: self.level, residue: a });
            }
        }
        Err(Error::InvalidHom(format!("{h} does not send ζ_{p} to a primitive {p}-th root")))
    }
}
