//! A workbench for zero-sum subsequence combinatorics over Z_n^d.
//!
//! The crate computes N^l(J) — the number of length-l subsequences of a
//! sequence J over Z_n^d whose element sum vanishes — exactly and modulo a
//! prime, and builds the machinery that connects those counts:
//!
//! - [`arith`]: Lucas-style binomials mod p and symbolic binomials of
//!   affine lengths q·p + r, plus the length-expression parser.
//! - [`sequences`]: the multiset data model, named extremal constructions,
//!   random generators, and sub-multiset enumeration.
//! - [`counting`]: the counting DP (exact and mod-p) and its brute-force
//!   enumeration oracle.
//! - [`identities`]: first-class counting congruences, the lifting
//!   transform, empirical verification campaigns, and forward derivation
//!   of count residues.
//! - [`linearfp`]: exact integer affine forms, the triangular systems the
//!   congruences assemble into, and exceptional-prime analysis of the
//!   solution vectors.
//! - [`polysum`]: the polynomial-method character sums, their reduction to
//!   count profiles, and a downsized literal-summation oracle.
//! - [`search`]: exhaustive zero-sum constants s_k(Z_n^d) with extremal
//!   witnesses, and statement-level falsification campaigns.
//! - [`cli`]: the `zslab` command-line front end with JSON/TSV output and
//!   a content-addressed result cache.
//!
//! Every randomized operation takes an explicit seed and is reproducible;
//! campaign reports echo the seed they were run with. See the `examples/`
//! directory for one runnable walkthrough per major capability.

pub mod arith;
pub mod cli;
pub mod counting;
pub mod error;
pub mod identities;
pub mod linearfp;
pub mod polysum;
pub mod search;
pub mod sequences;

pub use arith::{binom_mod, parse_length, symbolic_binom, PrimeModulus, SymbolicLength, SymbolicValue};
pub use counting::{brute_force_count, count_profile, count_subsequences, Count, CountMode, CountVector};
pub use error::{Error, Result};
pub use identities::{base_identity, lift_identity, remark_identity_zp2, verify_identity, CountIdentity};
pub use linearfp::{assemble_system, exceptional_primes, residual_check, solve_triangular, AffineForm};
pub use search::{has_zero_sum, s_constant, verify_statement};
pub use sequences::{GroupElement, ZSequence};
