//! The factor computations behind `compute` and `specialize`.

use std::collections::BTreeMap;
use std::path::Path;

use clap::ValueEnum;
use tamegamma::doc::{parse_fiber, FiberBlock, Parsed, RepDocument};
use tamegamma::factors::{l_factor, local_factors};
use tamegamma::family::{check_fiber, epsilon0_family, family_gamma, Fiber, FiberReport};
use tamegamma::ring::extend_hom;
use tamegamma::weil::{artin_conductor_filtered, swan};
use tamegamma::{Characteristic, Error, Monomial, Result, Ring, RingHom, SFraction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Factor {
    L,
    Epsilon,
    Epsilon0,
    Gamma,
    Swan,
    Artin,
}

pub fn load(path: &Path) -> Result<Parsed> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    RepDocument::from_json(&text)?.parse()
}

/// The innermost coefficient ring of a polynomial ring or quotient.
fn coefficient_ring(ring: &Ring) -> Ring {
    let mut r = ring.clone();
    while let Some(base) = r.poly_base() {
        r = base;
    }
    r
}

/// A fiber given as JSON, by name, or as `VAR=VALUE[,VAR=VALUE...][@RING]`.
pub fn resolve_fiber(parsed: &Parsed, spec: &str) -> Result<Fiber> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        let block: FiberBlock = serde_json::from_str(spec).map_err(|e| Error::Parse(format!("fiber: {e}")))?;
        return parse_fiber(&block, &parsed.family);
    }
    if let Some(f) = parsed.fiber(spec) {
        return Ok(f.clone());
    }
    if !spec.contains('=') {
        return Err(Error::Parse(format!("no fiber named {spec:?}")));
    }
    let (assignments, ring) = match spec.rsplit_once('@') {
        Some((a, r)) => (a, r.trim().to_string()),
        None => (spec, coefficient_ring(parsed.family.target()).to_string()),
    };
    let hom = assignments
        .split(',')
        .map(|a| {
            let (k, v) = a.split_once('=').ok_or_else(|| Error::Parse(format!("bad assignment {a:?}")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    parse_fiber(&FiberBlock { name: spec.to_string(), ring, hom, lift: None }, &parsed.family)
}

/// ε(X) = ε₀(X)/det(−ΦX | ρ^I), reading det(−Φ | ρ^I) off the top
/// coefficient of 1/L; `emb` carries L's ring into ε₀'s.
fn epsilon_from(e0: &Monomial, l: &SFraction, emb: &RingHom) -> Result<Monomial> {
    let (num, den) = (l.num(), l.den());
    if num.low() != num.high() {
        return Err(Error::InvalidInput(format!("L = {l} is not the inverse of a polynomial")));
    }
    let top = den.highest_coeff().cloned().unwrap_or_else(|| l.ring().one());
    let c = top * num.coeff(num.low()).inverse()?;
    let k = den.high() - num.low();
    Ok(Monomial::new(e0.constant.clone() * emb.apply(&c)?.inverse()?, e0.exponent - k))
}

fn over_char0_field(parsed: &Parsed) -> bool {
    let ring = parsed.family.target();
    parsed.family.base() == ring && ring.is_field() && ring.characteristic() == Characteristic::Zero
}

pub fn compute(parsed: &Parsed, factor: Factor, fiber: Option<&str>) -> Result<String> {
    let psi = &parsed.psi;
    let sw = || swan(&parsed.filtration);
    if let Some(spec) = fiber {
        if parsed.has_monodromy() {
            return Err(Error::InvalidInput("fibers of Weil–Deligne documents are not supported".into()));
        }
        let fiber = resolve_fiber(parsed, spec)?;
        let pres = &parsed.family;
        let rep = pres.rep()?.base_change(&fiber.hom)?;
        return Ok(match factor {
            Factor::Swan => sw()?.to_string(),
            Factor::Artin => artin_conductor_filtered(&rep, &parsed.filtration)?.to_string(),
            Factor::L => l_factor(&rep)?.normalized().to_string(),
            Factor::Gamma => {
                let fam = family_gamma(pres, psi)?;
                check_fiber(pres, &fam, psi, &fiber)?.direct.normalized().to_string()
            }
            Factor::Epsilon0 | Factor::Epsilon => {
                let e0 = epsilon0_family(pres, psi)?;
                let (_, emb, cands) = extend_hom(&fiber.hom, e0.value.ring().root_order())?;
                let g = cands.into_iter().next().expect("extend_hom returns a candidate");
                let e0 = Monomial::new(g.apply(&e0.value)?, rep.dim() as i64 * (psi.level + 1));
                if factor == Factor::Epsilon0 {
                    e0.to_string()
                } else {
                    epsilon_from(&e0, &l_factor(&rep)?, &emb)?.to_string()
                }
            }
        });
    }
    match factor {
        Factor::Swan => return Ok(sw()?.to_string()),
        Factor::Artin => return Ok(artin_conductor_filtered(parsed.tame(), &parsed.filtration)?.to_string()),
        _ => {}
    }
    if over_char0_field(parsed) {
        let lf = local_factors(&parsed.wd, psi)?;
        return Ok(match factor {
            Factor::L => lf.l.normalized().to_string(),
            Factor::Epsilon => lf.epsilon.to_string(),
            Factor::Epsilon0 => lf.epsilon0.to_string(),
            _ => lf.gamma.normalized().to_string(),
        });
    }
    if parsed.has_monodromy() {
        return Err(Error::RingNotField(format!(
            "Weil–Deligne documents need a field of characteristic zero, not {}",
            parsed.family.target()
        )));
    }
    let pres = &parsed.family;
    let rep = pres.rep()?;
    Ok(match factor {
        Factor::L => l_factor(&rep)?.normalized().to_string(),
        Factor::Gamma => family_gamma(pres, psi)?.result.gamma.normalized().to_string(),
        _ => {
            let e0 = epsilon0_family(pres, psi)?;
            let m = Monomial::new(e0.value.clone(), rep.dim() as i64 * (psi.level + 1));
            if factor == Factor::Epsilon0 {
                m.to_string()
            } else {
                epsilon_from(&m, &l_factor(&rep)?, &e0.target_emb)?.to_string()
            }
        }
    })
}

pub fn specialize(parsed: &Parsed, spec: &str) -> Result<FiberReport> {
    let fiber = resolve_fiber(parsed, spec)?;
    let fam = family_gamma(&parsed.family, &parsed.psi)?;
    check_fiber(&parsed.family, &fam, &parsed.psi, &fiber)
}
