use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use super::psi::AdditiveCharacter;
use crate::error::{Error, Result};
use crate::ring::finite::ResidueField;
use crate::ring::{adjoin_roots, galois_action, Elem, Ring};
use crate::weil::LocalFieldData;

/// counts[a·p + t] = #{k : k ≡ a mod o, Tr(g^k) = t} for 𝔽_{p^m}.
fn trace_counts(p: u64, m: u32, o: u64) -> Result<Arc<Vec<u32>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32, u64), Arc<Vec<u32>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&(p, m, o)) {
        return Ok(c.clone());
    }
    let rf = ResidueField::get(p, m)?;
    let mut counts = vec![0u32; (o * p) as usize];
    for (k, &t) in rf.traces.iter().enumerate() {
        counts[((k as u64 % o) * p + t as u64) as usize] += 1;
    }
    let counts = Arc::new(counts);
    cache.lock().unwrap().insert((p, m, o), counts.clone());
    Ok(counts)
}

/// Σ_{x ∈ 𝔽_{p^m}^×} χ̄⁻¹(x)·ψ̄(x) in `ring`, where χ̄(g) = z_n^j for the
/// Conway generator g, z_n^j has order dividing p^m − 1, and ψ̄(x) = ζ_p^{a·Tr(x)}.
pub fn gauss_sum_at(ring: &Ring, n: u64, j: u64, psi: &AdditiveCharacter, p: u64, m: u32) -> Result<Elem> {
    let rf = ResidueField::get(p, m)?;
    let j = j % n;
    let o = n / n.gcd(&j);
    if (rf.order - 1) % o != 0 {
        return Err(Error::InvalidInput(format!("order {o} does not divide {}", rf.order - 1)));
    }
    psi.root(ring, p)?;
    let l = n.lcm(&p);
    let counts = trace_counts(p, m, o)?;
    // χ̄⁻¹(g^a)·ψ̄(x) = z_l^{−a·j·l/n + res·t·l/p}
    let zeta_step = (j * (l / n)) % l;
    let psi_step = (psi.residue % p) * (l / p) % l;
    let mut coeffs = vec![0i64; l as usize];
    for a in 0..o {
        let base = (l - (a * zeta_step) % l) % l;
        for t in 0..p {
            let c = counts[(a * p + t) as usize];
            if c > 0 {
                coeffs[((base + t * psi_step) % l) as usize] += c as i64;
            }
        }
    }
    ring.root_power_sum(l, &coeffs)
}

/// The Gauss sum of the character χ̄(g) = ζ_N^j of 𝔽_{q^d}^× (N = q^d − 1)
/// against ψ̄ ∘ Tr, in the cyclotomic field generated by ζ_p and ζ_N.
pub fn gauss_sum(field: &LocalFieldData, d: u32, j: u64, psi: &AdditiveCharacter) -> Result<Elem> {
    let e = field.extension(d)?;
    let n = e.q() - 1;
    let (ring, _) = adjoin_roots(&Ring::rationals(), n.lcm(&field.p))?;
    gauss_sum_at(&ring, n, j, psi, field.p, e.f)
}

/// Complex conjugation ζ ↦ ζ⁻¹ on a cyclotomic field.
pub fn conjugate(a: &Elem) -> Result<Elem> {
    let l = a.ring().root_order();
    galois_action(a, l - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, fdeg: u32) -> LocalFieldData {
        LocalFieldData::new(p, fdeg, 11).unwrap()
    }

    #[test]
    fn trivial_character_sums_to_minus_one() {
        let g = gauss_sum(&f(3, 1), 1, 0, &AdditiveCharacter::default()).unwrap();
        assert!(g.equals_int(-1));
    }

    #[test]
    fn quadratic_gauss_sum_mod_three() {
        let g = gauss_sum(&f(3, 1), 1, 1, &AdditiveCharacter::default()).unwrap();
        // brute force over 𝔽₃^× = {1, 2}: χ̄(2) = −1, ψ̄(x) = ζ₃^x
        let z3 = g.ring().root_of_unity(3).unwrap();
        assert_eq!(g, &z3 - &z3.pow(2));
        assert!(g.pow(2).equals_int(-3));
    }

    #[test]
    fn norm_is_q_power() {
        for (p, fdeg, d) in [(3, 1, 1), (3, 1, 2), (5, 1, 1), (5, 1, 2), (7, 1, 1), (3, 2, 1), (2, 1, 3)] {
            let field = f(p, fdeg);
            let qd = field.extension(d).unwrap().q();
            for j in 1..qd - 1 {
                let g = gauss_sum(&field, d, j, &AdditiveCharacter::default()).unwrap();
                let norm = &g * &conjugate(&g).unwrap();
                assert!(norm.equals_int(qd as i64), "p={p} f={fdeg} d={d} j={j}");
            }
        }
    }
}
