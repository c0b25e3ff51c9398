//! Property suites over seeded random inputs and the bundled fixtures.
//!
//! Every case is generated from `(seed, case index)` alone, so reports are
//! identical however the cases are scheduled.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::doc::RepDocument;
use crate::error::{Error, Result};
use crate::factors::{conjugate, gamma_field, gamma_wd, gauss_sum_at, lemma45_sides, AdditiveCharacter};
use crate::family::{
    char_rev, common_extension, det_t, family_gamma, fractions_agree, thm61_sides, verify_interpolation,
    FamilyPresentation,
};
use crate::fixtures::FAMILIES;
use crate::laurent::SFraction;
use crate::ring::cyclotomic::cyclotomic_poly;
use crate::ring::finite::{is_prime, FiniteField};
use crate::ring::{adjoin_roots, Ring};
use crate::sample::Sampler;
use crate::weil::{TameCharacter, TameRep, WDRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Thm61,
    Consistency,
    Multiplicativity,
    Inductivity,
    Interpolation,
    Lemma45,
    Gauss,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Thm61,
        Suite::Consistency,
        Suite::Multiplicativity,
        Suite::Inductivity,
        Suite::Interpolation,
        Suite::Lemma45,
        Suite::Gauss,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Thm61 => "thm61",
            Suite::Consistency => "consistency",
            Suite::Multiplicativity => "multiplicativity",
            Suite::Inductivity => "inductivity",
            Suite::Interpolation => "interpolation",
            Suite::Lemma45 => "lemma45",
            Suite::Gauss => "gauss",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub trials: u64,
    pub seed: u64,
    pub qmax: u64,
    pub dimmax: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { trials: 100, seed: 0, qmax: 9, dimmax: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, lhs: impl fmt::Display, rhs: impl fmt::Display) -> Check {
        Check { name: name.into(), pass, lhs: lhs.to_string(), rhs: rhs.to_string() }
    }

    fn fractions(name: &str, lhs: &SFraction, rhs: &SFraction) -> Result<Check> {
        Ok(Check::new(name, fractions_agree(lhs, rhs)?, lhs, rhs))
    }
}

/// One line of a suite report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub suite: String,
    pub id: String,
    /// SHA-256 of the input document.
    pub digest: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// The input document; kept only for failing cases.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub document: Option<String>,
}

impl CaseReport {
    fn new(suite: Suite, id: String, document: String, outcome: Result<Vec<Check>>) -> CaseReport {
        let digest = hex(&Sha256::digest(document.as_bytes()));
        let (pass, checks, error) = match outcome {
            Ok(checks) => (checks.iter().all(|c| c.pass), checks, None),
            Err(e) => (false, vec![], Some(e.to_string())),
        };
        CaseReport {
            suite: suite.name().to_string(),
            id,
            digest,
            pass,
            checks,
            error,
            document: (!pass).then_some(document),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    /// Whether every check named `name` passed (and at least one ran).
    pub fn check_passed(&self, name: &str) -> bool {
        self.error.is_none()
            && self.checks.iter().any(|c| c.name == name)
            && self.checks.iter().filter(|c| c.name == name).all(|c| c.pass)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.pass).count()
    }

    pub fn failed(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.cases.len()
    }

    pub fn summary(&self) -> String {
        format!("{}: {}/{} pass", self.suite, self.passed(), self.cases.len())
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    let cases = match suite {
        Suite::Interpolation => interpolation_cases(),
        Suite::Gauss => gauss_cases(cfg),
        _ => (0..cfg.trials).into_par_iter().map(|i| random_case(suite, cfg, i)).collect(),
    };
    SuiteReport { suite, cases }
}

fn case_id(suite: Suite, i: u64) -> String {
    format!("{suite}-{i:05}")
}

/// Case `i` of a randomized suite.
pub fn run_one(suite: Suite, cfg: &SuiteConfig, i: u64) -> CaseReport {
    random_case(suite, cfg, i)
}

fn random_case(suite: Suite, cfg: &SuiteConfig, i: u64) -> CaseReport {
    let mut s = Sampler::new(cfg.seed, i, cfg.qmax, cfg.dimmax);
    let id = case_id(suite, i);
    let sampled = match suite {
        Suite::Thm61 => s.tame_semisimple().map(Input::Tame),
        Suite::Consistency if i.is_multiple_of(2) => s.tame_semisimple().map(Input::Tame),
        Suite::Consistency | Suite::Lemma45 => s.wd().map(Input::Wd),
        Suite::Multiplicativity => s.block_triangular().map(|t| Input::Triangular(t.full, t.sub, t.quotient)),
        Suite::Inductivity => s.induced_pair().map(|p| Input::Induced(p.d, p.xi)),
        Suite::Interpolation | Suite::Gauss => unreachable!(),
    };
    let input = match sampled {
        Ok(x) => x,
        Err(e) => return CaseReport::new(suite, id, String::new(), Err(e)),
    };
    let psi = random_psi(&mut s, input.p());
    let document = input.document(&psi);
    let outcome = match (&input, suite) {
        (Input::Tame(r), Suite::Thm61) => thm61_case(r),
        (Input::Tame(r), Suite::Consistency) => consistency_tame(r, &psi),
        (Input::Wd(w), Suite::Consistency) => consistency_wd(w, &psi),
        (Input::Wd(w), Suite::Lemma45) => lemma45_case(w),
        (Input::Triangular(full, sub, quot), _) => multiplicativity_case(full, sub, quot, &psi),
        (Input::Induced(d, xi), _) => inductivity_case(*d, xi, &psi),
        _ => unreachable!(),
    };
    CaseReport::new(suite, id, document, outcome)
}

enum Input {
    Tame(TameRep),
    Wd(WDRep),
    Triangular(TameRep, TameRep, TameRep),
    Induced(u32, TameCharacter),
}

impl Input {
    fn p(&self) -> u64 {
        match self {
            Input::Tame(r) | Input::Triangular(r, _, _) => r.field().p,
            Input::Wd(w) => w.field().p,
            Input::Induced(_, xi) => xi.field.p,
        }
    }

    fn document(&self, psi: &AdditiveCharacter) -> String {
        match self {
            Input::Tame(r) | Input::Triangular(r, _, _) => RepDocument::from_tame(r, psi).to_json(),
            Input::Wd(w) => RepDocument::from_wd(w, psi).to_json(),
            Input::Induced(d, xi) => {
                let rep = xi.rep().expect("sampled characters are valid");
                let mut doc = RepDocument::from_tame(&rep, psi);
                doc.field = xi.field;
                serde_json::json!({ "degree": d, "character": doc }).to_string()
            }
        }
    }
}

fn random_psi(s: &mut Sampler, p: u64) -> AdditiveCharacter {
    let level = s.gen_range(0..3) as i64 - 1;
    AdditiveCharacter::new(level, 1 + s.gen_range(0..p - 1))
}

fn gamma_r(rep: &TameRep, psi: &AdditiveCharacter) -> Result<SFraction> {
    Ok(family_gamma(&FamilyPresentation::constant(rep.clone())?, psi)?.result.gamma)
}

/// Bring two fractions into a common ring.
fn align(a: &SFraction, b: &SFraction) -> Result<(SFraction, SFraction)> {
    let (ea, eb) = common_extension(a.ring(), b.ring())?;
    Ok((a.specialize(&ea)?, b.specialize(&eb)?))
}

fn thm61_case(rep: &TameRep) -> Result<Vec<Check>> {
    let (_, inv) = rep.inertia_invariants()?;
    let dt = rep.t_operator().det();
    let qpow = rep.q().pow(inv as u64);
    let (lhs, rhs) = thm61_sides(rep)?;
    Ok(vec![Check::new("det", dt == qpow, dt, qpow), Check::fractions("ratio", &lhs, &rhs)?])
}

fn consistency_tame(rep: &TameRep, psi: &AdditiveCharacter) -> Result<Vec<Check>> {
    Ok(vec![Check::fractions("gamma", &gamma_r(rep, psi)?, &gamma_field(rep, psi)?)?])
}

/// γ_R of the underlying Weil representation against the Weil–Deligne γ.
fn consistency_wd(rep: &WDRep, psi: &AdditiveCharacter) -> Result<Vec<Check>> {
    Ok(vec![Check::fractions("gamma", &gamma_r(rep.tame(), psi)?, &gamma_wd(rep, psi)?)?])
}

fn lemma45_case(rep: &WDRep) -> Result<Vec<Check>> {
    let (lhs, rhs) = lemma45_sides(rep)?;
    Ok(vec![Check::new("lemma45", lhs.equals(&rhs), lhs, rhs)])
}

fn multiplicativity_case(
    full: &TameRep,
    sub: &TameRep,
    quot: &TameRep,
    psi: &AdditiveCharacter,
) -> Result<Vec<Check>> {
    let (gs, gq) = align(&gamma_r(sub, psi)?, &gamma_r(quot, psi)?)?;
    let gamma = Check::fractions("gamma", &gamma_r(full, psi)?, &gs.mul(&gq))?;
    let split = det_t(sub)? * det_t(quot)?;
    let dt = det_t(full)?;
    let tf = full.t_operator().mm(full.phi());
    let ts = sub.t_operator().mm(sub.phi());
    let tq = quot.t_operator().mm(quot.phi());
    let chars = char_rev(full.phi()) == char_rev(sub.phi()).mul(&char_rev(quot.phi()))
        && char_rev(&tf) == char_rev(&ts).mul(&char_rev(&tq));
    let (lhs, rhs) = thm61_sides(full)?;
    Ok(vec![
        gamma,
        Check::new("det_t", dt == split, &dt, &split),
        Check::new("char_rev", chars, char_rev(full.phi()), char_rev(sub.phi()).mul(&char_rev(quot.phi()))),
        Check::fractions("thm61_nonsemisimple", &lhs, &rhs)?,
    ])
}

/// γ_F(Ind ξ)/γ_F(Ind 1) against γ_E(ξ)/γ_E(1) at X^d.
fn inductivity_case(d: u32, xi: &TameCharacter, psi: &AdditiveCharacter) -> Result<Vec<Check>> {
    let r = xi.ring();
    let one = TameCharacter::new(xi.field, d, r.one(), r.one())?;
    let (a, b) = align(&gamma_r(&xi.induce()?, psi)?, &gamma_r(&one.induce()?, psi)?)?;
    let lhs = a.div(&b)?;
    let (a, b) = align(&gamma_r(&xi.rep()?, psi)?, &gamma_r(&one.rep()?, psi)?)?;
    let e = a.div(&b)?;
    let rhs = e.substitute(&e.ring().one(), d as i64);
    Ok(vec![Check::fractions("inductivity", &lhs, &rhs)?])
}

fn interpolation_cases() -> Vec<CaseReport> {
    FAMILIES
        .par_iter()
        .map(|(name, text)| interpolation_report(format!("interpolation-{name}"), text))
        .collect()
}

/// The interpolation checks of one family document.
pub fn interpolation_report(id: String, text: &str) -> CaseReport {
    CaseReport::new(Suite::Interpolation, id, text.to_string(), interpolation_case(text))
}

pub fn interpolation_case(text: &str) -> Result<Vec<Check>> {
    let parsed = RepDocument::from_json(text)?.parse()?;
    let report = verify_interpolation(&parsed.family, &parsed.psi, &parsed.fibers)?;
    let mut checks: Vec<Check> = report
        .fibers
        .iter()
        .map(|f| {
            let name = match f.characteristic {
                crate::ring::Characteristic::Zero => format!("fiber {} (char 0)", f.name),
                c => format!("fiber {} (char {c:?})", f.name),
            };
            Check::new(name, f.pass, &f.specialized, &f.direct)
        })
        .collect();
    checks.push(Check::new("descent", report.descends, report.descends, true));
    Ok(checks)
}

/// A nontrivial character χ̄(g) = ζ_n^j of 𝔽_{p^m}^×, n = p^m − 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GaussCase {
    pub p: u64,
    pub m: u32,
    pub j: u64,
    pub residue: u64,
}

impl GaussCase {
    pub fn q(&self) -> u64 {
        self.p.pow(self.m)
    }

    /// (order of χ̄, exponent of ζ_order).
    fn character(&self) -> (u64, u64) {
        let n = self.q() - 1;
        let g = n.gcd(&self.j);
        (n / g, self.j / g)
    }
}

/// Every nontrivial character of every 𝔽_q^× with q ≤ bound.
pub fn all_gauss_cases(bound: u64) -> Vec<GaussCase> {
    let mut out = Vec::new();
    for p in (2..=bound).filter(|&p| is_prime(p)) {
        let mut m = 1;
        while p.pow(m) <= bound {
            let q = p.pow(m);
            for j in 1..q - 1 {
                out.push(GaussCase { p, m, j, residue: 1 + j % (p - 1) });
            }
            m += 1;
        }
    }
    out
}

/// The suite covers q ≤ 81 exhaustively, or a seeded sample of `trials`
/// characters when fewer are requested.
fn gauss_cases(cfg: &SuiteConfig) -> Vec<CaseReport> {
    let all = all_gauss_cases(81);
    let chosen: Vec<(usize, GaussCase)> = if cfg.trials as usize >= all.len() || cfg.trials == 0 {
        all.into_iter().enumerate().collect()
    } else {
        let mut s = Sampler::new(cfg.seed, u64::MAX, cfg.qmax, cfg.dimmax);
        let mut idx: Vec<usize> = Vec::new();
        while idx.len() < cfg.trials as usize {
            let k = s.gen_range(0..all.len() as u64) as usize;
            if !idx.contains(&k) {
                idx.push(k);
            }
        }
        idx.sort_unstable();
        idx.into_iter().map(|k| (k, all[k])).collect()
    };
    chosen.into_par_iter().map(|(k, c)| gauss_report(k, &c)).collect()
}

pub fn gauss_report(k: usize, c: &GaussCase) -> CaseReport {
    let document = serde_json::to_string(c).expect("cases serialize");
    CaseReport::new(Suite::Gauss, format!("gauss-{k:05}"), document, gauss_case(c))
}

pub fn gauss_case(c: &GaussCase) -> Result<Vec<Check>> {
    let (o, j) = c.character();
    let q = c.q();
    let (ring, _) = adjoin_roots(&Ring::rationals(), o.lcm(&c.p))?;
    let psi = AdditiveCharacter::new(0, c.residue);
    let g = gauss_sum_at(&ring, o, j, &psi, c.p, c.m)?;
    let norm = &g * &conjugate(&g)?;
    let brute = brute_force_norm(c)?;
    let expected = q as i128;
    Ok(vec![
        Check::new("norm", norm.equals_int(q as i64), &norm, q),
        Check::new("brute_force", brute == expected, brute, q),
    ])
}

/// Σ_{x,y ∈ 𝔽_q^×} χ̄⁻¹(x)χ̄(y)ψ̄(x − y), evaluated as an integer
/// combination of L-th roots of unity and reduced modulo Φ_L; returns the
/// value when it is rational.
fn brute_force_norm(c: &GaussCase) -> Result<i128> {
    let (o, j) = c.character();
    let (p, q) = (c.p, c.q());
    let l = o.lcm(&p);
    let field = FiniteField::new(p, c.m)?;
    let g = field.generator();
    let mut elems = Vec::with_capacity(q as usize - 1);
    let mut x = field.from_int(1);
    for _ in 0..q - 1 {
        elems.push(x.clone());
        x = field.mul(&x, &g);
    }
    let trace = |x: &Vec<u64>| -> u64 {
        let mut t = field.zero();
        let mut y = x.clone();
        for _ in 0..c.m {
            t = field.add(&t, &y);
            y = field.pow(&y, p as u128);
        }
        t[0]
    };
    // x = g^k has χ̄(x) = ζ_o^{jk}
    let traces: Vec<u64> = elems.iter().map(trace).collect();
    let index: HashMap<&Vec<u64>, u64> = elems.iter().zip(0..).collect();
    debug_assert_eq!(index.len() as u64, q - 1);
    let (chi_step, psi_step) = (j * (l / o) % l, c.residue % p * (l / p) % l);
    let mut counts = vec![0i128; l as usize];
    for (kx, &tx) in traces.iter().enumerate() {
        for (ky, &ty) in traces.iter().enumerate() {
            let chi = (ky as u64 + (q - 1) - kx as u64) % o * chi_step % l;
            let psi = (tx + p - ty) % p * psi_step % l;
            counts[((chi + psi) % l) as usize] += 1;
        }
    }
    let phi: Vec<i128> = cyclotomic_poly(l).iter().map(|c| c.to_i128().unwrap()).collect();
    let deg = phi.len() - 1;
    let support: Vec<(usize, i128)> = phi[..deg].iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
    for i in (deg..counts.len()).rev() {
        let c = counts[i];
        if c != 0 {
            for &(k, a) in &support {
                counts[i - deg + k] -= c * a;
            }
            counts[i] = 0;
        }
    }
    if counts[1..].iter().any(|&c| c != 0) {
        return Err(Error::InvalidInput(format!("double sum for {c:?} is not rational")));
    }
    Ok(counts[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: u64) -> SuiteConfig {
        SuiteConfig { trials, seed: 11, qmax: 9, dimmax: 4 }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().unwrap_err().is_parse());
    }

    #[test]
    fn gauss_case_count() {
        // q = 3, 4, 5: 1 + 2 + 3 nontrivial characters
        assert_eq!(all_gauss_cases(5).len(), 6);
    }

    #[test]
    fn brute_force_small_fields() {
        for c in all_gauss_cases(16) {
            assert_eq!(brute_force_norm(&c).unwrap(), c.q() as i128, "{c:?}");
        }
    }

    #[test]
    fn small_random_suites_pass() {
        for suite in [Suite::Thm61, Suite::Consistency, Suite::Multiplicativity, Suite::Lemma45, Suite::Inductivity] {
            let r = run_suite(suite, &cfg(6));
            assert!(r.all_pass(), "{:?}", r.failed().collect::<Vec<_>>());
            assert_eq!(r.cases.len(), 6);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(Suite::Thm61, &cfg(5));
        let b = run_suite(Suite::Thm61, &cfg(5));
        let lines = |r: &SuiteReport| r.cases.iter().map(|c| c.to_json()).collect::<Vec<_>>();
        assert_eq!(lines(&a), lines(&b));
        assert!(a.cases.windows(2).all(|w| w[0].id < w[1].id));
    }
}
