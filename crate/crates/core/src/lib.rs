//! Lower K-theory invariants of integral group rings of finite cyclic groups.
//!
//! The crate computes, with exact integer arithmetic only:
//!
//! * the rank of `K_{-1}(Z[Z/m])` from rank bookkeeping in Carter's four-term
//!   resolution, and independently as a sum of per-divisor localized pieces;
//! * the dimensions of the `+1` and `-1` eigenspaces of the duality involution on
//!   the rationalized `K_{-1}` and on `Wh_1(Z/m)`;
//! * the rank and eigenspace dimensions of `H_1(M; Wh_K(F))` rationally, using
//!   Betti numbers computed by Smith normal form;
//! * a verdict on the arithmetic hypotheses for infinitely many stably trivial
//!   `G`-smoothings, with the geometric hypotheses taken as attestations.

pub mod cli;
pub mod decide;
pub mod error;
pub mod galoisrep;
pub mod homology;
pub mod ktheory;
pub mod numtheory;

pub use error::{Error, Result};
pub use numtheory::GroupSpec;
