//! Reversible group matrix ring codes over GF(4) with applications to DNA
//! code design.
//!
//! The crate builds generator matrices from coefficient grids over a pair of
//! reversibly listed finite groups, takes their row spaces as linear codes
//! over GF(4), maps codewords to DNA words, and checks the four standard DNA
//! code constraints (minimum Hamming distance, reverse, reverse-complement,
//! fixed GC-content). A seeded hill-climbing search over coefficient grids
//! looks for large codes at a target distance and emits re-verifiable bound
//! records.
//!
//! Modules:
//! - [`field`]: GF(4) arithmetic, packed vectors, the DNA alphabet map.
//! - [`group`]: Cayley-table groups and reversible element listings.
//! - [`construct`]: the block generator matrix and its structural checks.
//! - [`linalg`]: row reduction, codeword enumeration, minimum weight.
//! - [`dnacode`]: constraint verification, weight enumerators, bound records.
//! - [`search`]: seeded random-restart hill climbing over coefficient grids.
//! - [`cli`]: the `gkdna` command-line interface.
//!
//! ```
//! use gkdna::construct::{build_generator, parse_grid_text, CoefficientGrid};
//! use gkdna::group::dihedral_reversible;
//! use gkdna::linalg::{min_weight, DEFAULT_CAP};
//!
//! let (n, k, rows) = parse_grid_text("4 2\n0 W\nw W\nw 1\n0 1\n")?;
//! let grid = CoefficientGrid::new(
//!     dihedral_reversible(n / 2)?,
//!     dihedral_reversible(k / 2)?,
//!     rows,
//! )?;
//! let code = build_generator(&grid).reduce();
//! assert_eq!(code.rank(), 4);
//! assert_eq!(min_weight(&code, DEFAULT_CAP, 1)?, 4);
//! # Ok::<(), gkdna::Error>(())
//! ```

// Matrices here are indexed by group listing position on both sides;
// positional loops keep that symmetry readable.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod construct;
pub mod dnacode;
pub mod field;
pub mod group;
pub mod linalg;
pub mod search;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid GF(4) symbol {0:?} (expected one of 0, 1, w, W)")]
    InvalidSymbol(String),

    #[error("invalid DNA base {0:?} (expected uppercase A, C, G, T)")]
    InvalidBase(char),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("not an index-2 subgroup: {0}")]
    NotIndexTwoSubgroup(String),

    #[error("element {0} lies in the subgroup; the coset representative must not")]
    BetaInSubgroup(usize),

    #[error("element {0} is not self-inverse")]
    BetaNotInvolution(usize),

    #[error("block group order must be even and positive, got {0}")]
    OddBlockOrder(usize),

    #[error("enumeration cap exceeded: rank {rank} needs 4^{rank} = {needed} codewords, cap is {cap}")]
    CapExceeded { rank: usize, needed: u128, cap: u64 },

    #[error("operation undefined for the rank-0 code")]
    RankZero,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
