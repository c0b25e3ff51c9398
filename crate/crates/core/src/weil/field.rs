use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::finite::{checked_pow, is_prime};

/// The residue data of a p-adic field F: residue field 𝔽_q with q = p^f, and
/// a coefficient prime ℓ ≠ p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalFieldData {
    pub p: u64,
    pub f: u32,
    pub ell: u64,
}

impl LocalFieldData {
    pub fn new(p: u64, f: u32, ell: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("p = {p} is not prime")));
        }
        if !is_prime(ell) {
            return Err(Error::InvalidInput(format!("ell = {ell} is not prime")));
        }
        if ell == p {
            return Err(Error::InvalidInput(format!("ell must differ from p = {p}")));
        }
        if f == 0 || checked_pow(p, f).is_none_or(|q| q > 1 << 31) {
            return Err(Error::InvalidInput(format!("residue degree f = {f} out of range")));
        }
        Ok(LocalFieldData { p, f, ell })
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }

    /// The unramified extension of degree d.
    pub fn extension(&self, d: u32) -> Result<Self> {
        LocalFieldData::new(self.p, self.f * d, self.ell)
    }
}
