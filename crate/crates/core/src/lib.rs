//! Exact arithmetic in monogenic rings of integers `Z[θ]`: ideals in Hermite
//! normal form, residue rings and their unit groups, Dirichlet characters with
//! conductors, arithmetical functions on ideals, and a verifier for
//! character-twisted Menon-type gcd-sum identities.
//!
//! Every value is exact. Character values live in `Z[ζ_m]` ([`cyclotomic::CycInt`]).

pub mod arith;
pub mod characters;
pub mod cyclotomic;
pub mod error;
pub mod hnf;
pub mod identity;
pub mod ideals;
pub mod numfield;
pub mod par;
pub mod poly;
pub mod residue;
pub mod sweep;

pub use error::{Error, Result};
