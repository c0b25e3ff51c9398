//! Tame Weil group representations, Weil–Deligne triples and the
//! invariants built from them.

mod decompose;
mod field;
mod swan;
mod tame;
mod wd;

pub use decompose::{isotypic_decompose, rank_of_idempotent, Isotypic};
pub use field::LocalFieldData;
pub use swan::{artin_conductor, artin_conductor_filtered, break_decomposition, swan, FiltrationData};
pub use tame::{induct_unramified, TameCharacter, TameRep, DEFAULT_ORDER_BOUND};
pub use wd::{frobenius_semisimplify, sp, WDRep};
