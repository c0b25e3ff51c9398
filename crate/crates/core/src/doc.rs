//! JSON input documents: a tame or Weil–Deligne representation, optional
//! ramification data, an optional family presentation and its fibers.
//!
//! Ring elements are strings in element syntax and matrices are row-major
//! arrays of such strings.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factors::AdditiveCharacter;
use crate::family::{Fiber, FamilyPresentation, Lift};
use crate::matrix::Matrix;
use crate::ring::{Ring, RingHom};
use crate::weil::{FiltrationData, LocalFieldData, TameRep, WDRep};

pub type MatrixStrings = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiBlock {
    #[serde(default)]
    pub level: i64,
    #[serde(default = "one")]
    pub residue: u64,
}

fn one() -> u64 {
    1
}

impl Default for PsiBlock {
    fn default() -> Self {
        PsiBlock { level: 0, residue: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiltrationStep {
    /// A positive rational written as `a/b` or an integer.
    pub v: String,
    pub generators: Vec<MatrixStrings>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepBlock {
    pub phi: MatrixStrings,
    pub sigma: MatrixStrings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wd_n: Option<MatrixStrings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<Vec<FiltrationStep>>,
}

/// f: R₀ → R given by the images of the generators of R₀.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyBlock {
    pub target: String,
    #[serde(default)]
    pub hom: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftBlock {
    pub ring: String,
    #[serde(default)]
    pub point: BTreeMap<String, String>,
    #[serde(default)]
    pub reduce: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberBlock {
    pub name: String,
    pub ring: String,
    #[serde(default)]
    pub hom: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftBlock>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepDocument {
    pub field: LocalFieldData,
    pub ring: String,
    #[serde(default)]
    pub psi: PsiBlock,
    pub representation: RepBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fibers: Vec<FiberBlock>,
}

/// A validated document.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub psi: AdditiveCharacter,
    pub wd: WDRep,
    pub filtration: FiltrationData,
    pub family: FamilyPresentation,
    pub fibers: Vec<Fiber>,
}

impl Parsed {
    pub fn tame(&self) -> &TameRep {
        self.wd.tame()
    }

    pub fn has_monodromy(&self) -> bool {
        !self.wd.n().is_zero()
    }

    pub fn fiber(&self, name: &str) -> Option<&Fiber> {
        self.fibers.iter().find(|f| f.name == name)
    }
}

pub fn parse_hom(source: &Ring, target: &Ring, images: &BTreeMap<String, String>) -> Result<RingHom> {
    let pairs: Vec<(&str, &str)> = images.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    RingHom::from_image_strs(source, target, &pairs)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim().parse::<BigRational>().map_err(|_| Error::Parse(format!("jump {s:?} is not a rational number")))
}

impl RepDocument {
    pub fn from_json(text: &str) -> Result<RepDocument> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// A document for a tame representation with no family data.
    pub fn from_tame(rep: &TameRep, psi: &AdditiveCharacter) -> RepDocument {
        RepDocument {
            field: *rep.field(),
            ring: rep.ring().to_string(),
            psi: PsiBlock { level: psi.level, residue: psi.residue },
            representation: RepBlock {
                phi: rep.phi().to_strings(),
                sigma: rep.sigma().to_strings(),
                wd_n: None,
                filtration: None,
            },
            family: None,
            fibers: vec![],
        }
    }

    pub fn from_wd(rep: &WDRep, psi: &AdditiveCharacter) -> RepDocument {
        let mut doc = RepDocument::from_tame(rep.tame(), psi);
        doc.representation.wd_n = Some(rep.n().to_strings());
        doc
    }

    pub fn parse(&self) -> Result<Parsed> {
        let field = LocalFieldData::new(self.field.p, self.field.f, self.field.ell)?;
        let ring = Ring::parse(&self.ring)?;
        let psi = AdditiveCharacter::new(self.psi.level, self.psi.residue);
        let rep_block = &self.representation;
        let tame = TameRep::parse(field, &ring, &rep_block.phi, &rep_block.sigma)?;
        let wd = match &rep_block.wd_n {
            Some(n) => WDRep::new(tame.clone(), Matrix::parse(&ring, n)?)?,
            None => WDRep::from_tame(tame.clone()),
        };
        let filtration = match &rep_block.filtration {
            Some(steps) => {
                let steps = steps
                    .iter()
                    .map(|s| {
                        let gens = s.generators.iter().map(|g| Matrix::parse(&ring, g)).collect::<Result<Vec<_>>>()?;
                        Ok((parse_rational(&s.v)?, gens))
                    })
                    .collect::<Result<Vec<_>>>()?;
                FiltrationData::from_generators(tame.dim(), steps)?
            }
            None => FiltrationData::tame(tame.dim()),
        };
        let family = match &self.family {
            Some(fb) => {
                let target = Ring::parse(&fb.target)?;
                FamilyPresentation::new(tame.clone(), parse_hom(&ring, &target, &fb.hom)?)?
            }
            None => FamilyPresentation {
                rep0: tame.clone(),
                f: RingHom::identity(&ring),
            },
        };
        let fibers = self
            .fibers
            .iter()
            .map(|fb| parse_fiber(fb, &family))
            .collect::<Result<Vec<_>>>()?;
        Ok(Parsed { psi, wd, filtration, family, fibers })
    }
}

pub fn parse_fiber(fb: &FiberBlock, family: &FamilyPresentation) -> Result<Fiber> {
    let kappa = Ring::parse(&fb.ring)?;
    let hom = parse_hom(family.target(), &kappa, &fb.hom)?;
    let lift = match &fb.lift {
        Some(lb) => {
            let k = Ring::parse(&lb.ring)?;
            Some(Lift { point: parse_hom(family.base(), &k, &lb.point)?, reduce: parse_hom(&k, &kappa, &lb.reduce)? })
        }
        None => None,
    };
    Ok(Fiber { name: fb.name.clone(), hom, lift })
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNRAMIFIED: &str = r#"{
        "field": {"p": 3, "f": 1, "ell": 7},
        "ring": "Q",
        "representation": {"phi": [["2"]], "sigma": [["1"]]}
    }"#;

    #[test]
    fn minimal_document() {
        let doc = RepDocument::from_json(UNRAMIFIED).unwrap();
        assert_eq!(doc.psi, PsiBlock::default());
        let parsed = doc.parse().unwrap();
        assert_eq!(parsed.tame().dim(), 1);
        assert!(!parsed.has_monodromy());
        assert!(parsed.filtration.is_tame());
    }

    #[test]
    fn round_trip() {
        let doc = RepDocument::from_json(UNRAMIFIED).unwrap();
        let parsed = doc.parse().unwrap();
        let again = RepDocument::from_tame(parsed.tame(), &parsed.psi);
        assert_eq!(RepDocument::from_json(&again.to_json()).unwrap(), again);
        assert_eq!(again.parse().unwrap().tame(), parsed.tame());
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(RepDocument::from_json("{"), Err(Error::Parse(_))));
        let bad = UNRAMIFIED.replace(r#"[["1"]]"#, r#"[["-1"]]"#).replace(r#"[["2"]]"#, r#"[["0"]]"#);
        let err = RepDocument::from_json(&bad).unwrap().parse().unwrap_err();
        assert!(!err.is_parse(), "{err}");
    }

    #[test]
    fn family_with_fibers() {
        let text = r#"{
            "field": {"p": 3, "f": 1, "ell": 7},
            "ring": "Q[T]",
            "representation": {"phi": [["0", "-2"], ["1", "T"]], "sigma": [["1", "0"], ["0", "1"]]},
            "fibers": [
                {"name": "T=1", "ring": "Q", "hom": {"T": "1"}},
                {"name": "T=1 mod 7", "ring": "GF(7)", "hom": {"T": "1"},
                 "lift": {"ring": "Q", "point": {"T": "1"}}}
            ]
        }"#;
        let parsed = RepDocument::from_json(text).unwrap().parse().unwrap();
        assert_eq!(parsed.fibers.len(), 2);
        assert!(parsed.fiber("T=1 mod 7").unwrap().lift.is_some());
    }
}
