//! Exact combinatorics behind the cohomology of Deligne–Lusztig varieties for `GL_n`.
//!
//! The crate is organised bottom-up:
//!
//! - [`weyl`]: the symmetric group `S_n` as a Coxeter system (lengths, Bruhat order,
//!   supports, conjugacy classes, heights, minimal-length reduction).
//! - [`word`]: words in the free monoid on the simple reflections together with the
//!   cohomology-preserving rewrite moves and a certified reduction search.
//! - [`field`] and [`flag`]: finite fields `F_q`, partial flags of `F_q^n` as canonical
//!   coset representatives of `GL_n(F_q)/P_I(F_q)`, and q-analog counting.
//! - [`snf`]: arbitrary-precision integer matrices and Smith normal form.
//! - [`complex`]: the complex of induced permutation modules attached to a word with
//!   distinct letters, and its homology over `Z` and `Z/p^m`.
//! - [`cohomology`]: structured cohomology reports, spectral pages and cross-checks.
//! - [`verify`]: the end-to-end verification suite used by the CLI and the tests.

pub mod cohomology;
pub mod complex;
mod error;
pub mod field;
pub mod flag;
pub mod snf;
pub mod verify;
pub mod weyl;
pub mod word;

pub use error::{Error, Result};

/// Resource limits shared by the brute-force routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest `n` for which conjugacy classes of `S_n` are enumerated.
    pub max_rank: usize,
    /// Largest number of cosets `|GL_n(F_q)/P_I(F_q)|` that will be enumerated.
    pub max_cosets: usize,
    /// Step budget of the word reduction search.
    pub budget: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_rank: 7,
            max_cosets: 100_000,
            budget: 100_000,
        }
    }
}
