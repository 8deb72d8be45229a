//! Exact computation with fence (zig-zag) order preserving self-maps of ℕ.
//!
//! Maps are eventually quasi-periodic and stored in a canonical finite form
//! ([`FenceMap`]). On top of that sit the combinatorial invariants and class
//! predicates ([`invariants`]), the named generator families
//! ([`generators`]), constructive factorizations into those generators
//! ([`factor`]), and a brute-force reference implementation ([`oracle`]).

pub mod cli;
pub mod dsl;
mod error;
mod ext_nat;
pub mod factor;
pub mod generators;
pub mod invariants;
mod map;
pub mod oracle;

pub use error::{Error, Result};
pub use ext_nat::ExtNat;
pub use map::FenceMap;
