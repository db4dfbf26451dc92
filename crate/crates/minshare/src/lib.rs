//! Exact-arithmetic toolkit for secret-sharing schemes measured by
//! order-parameterized entropies.
//!
//! Everything probabilistic is carried as exact rationals — distributions,
//! power sums, conditional maxima — and floating point appears only when a
//! quantity is finally expressed in bits. That discipline is what lets the
//! verification layer decide equalities (independence, ideality, entropy
//! gaps at the extreme orders) without tolerances.
//!
//! The crate is organized bottom-up:
//!
//! * [`rational`] — exact rational plumbing: parsing, bit-length-safe
//!   `log2`, compact serialization.
//! * [`dist`] — probability distributions and joint tables over named
//!   variables, with a canonical JSON interchange form.
//! * [`entropy`] — order-parameterized entropy of a distribution and its
//!   conditional counterpart for joint tables, including both averaged and
//!   worst-case conditional min-entropy.
//! * [`field`] — prime-field arithmetic, share-polynomial evaluation, and
//!   interpolation at zero.
//! * [`access`] — monotone access structures, maximal forbidden sets, and
//!   the cumulative assignment of building-block indices.
//! * [`schemes`] — the three constructions (biased-XOR `(n,n)`, skewed-table
//!   `(k,n)` over a prime field, and the general monotone-structure
//!   compiler), each with share/combine and an exact joint-law oracle.
//!
//! Start with the `examples/` directory: each example exercises one major
//! capability end to end.

pub mod access;
pub mod cli;
pub mod dist;
pub mod entropy;
pub mod error;
pub mod field;
pub mod rational;
pub mod schemes;
pub mod verify;

pub use error::{Error, Result};
