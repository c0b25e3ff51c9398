//! Exact local factors of tamely ramified Weil group representations over
//! a tower of coefficient rings, and the gamma factor of tame families.

pub mod doc;
pub mod error;
pub mod factors;
pub mod family;
pub mod fixtures;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod sample;
pub mod suites;
pub mod ring;
pub mod weil;

pub use error::{Error, Result};
pub use laurent::{LaurentPoly, SFraction};
pub use matrix::Matrix;
pub use ring::{adjoin_roots, make_ring, Characteristic, Elem, Ring, RingDescriptor, RingHom};
pub use factors::{AdditiveCharacter, LocalFactors, Monomial};
pub use weil::{FiltrationData, LocalFieldData, TameCharacter, TameRep, WDRep};
