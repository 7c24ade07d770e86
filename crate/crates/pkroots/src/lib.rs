//! Exact root counting for univariate integer polynomials over prime power
//! rings `Z/(p^k)`.
//!
//! The counting problem is reduced, residue class by residue class, to gcd
//! computations and randomized root isolation over the prime field `Z/(p)`,
//! so the cost scales with the degree and `k log p` instead of with `p^k`.
//! The engine is Las Vegas: the returned count is always a certified lower
//! bound, comes with an `exact` flag, and with overwhelming probability (at
//! default budgets) is the exact count.
//!
//! ```
//! use num_bigint::BigInt;
//! use pkroots::{count_integer_roots, CountConfig};
//!
//! // x^10 - 10x + 738 has exactly 190 roots in Z/(3^7).
//! let mut coeffs = vec![BigInt::from(0); 11];
//! coeffs[0] = BigInt::from(738);
//! coeffs[1] = BigInt::from(-10);
//! coeffs[10] = BigInt::from(1);
//! let result = count_integer_roots(&coeffs, 3, 7, 0, &CountConfig::default()).unwrap();
//! assert!(result.exact);
//! assert_eq!(result.count.to_string(), "190");
//! ```
//!
//! A longer, narrative introduction lives in the [`guide`] module and is
//! also rendered as a book (see `book/` in the repository).

mod count;
mod error;
mod lift;
mod oracle;
mod polyfp;
mod polymod;
mod ring;

pub use count::{
    auto_split_budget, build_tree, count_integer_roots, count_roots, tree_stats, CountConfig,
    CountResult, CountStats, TreeEdge, TreeNode, TreeStats,
};
pub use error::Error;
pub use lift::{child_poly, shift_valuation};
pub use oracle::{brute_force_count, DEFAULT_BRUTE_FORCE_GUARD};
pub use polyfp::{PolyFp, RootSet, SMALL_FIELD_LIMIT};
pub use polymod::PolyMod;
pub use ring::{is_prime_u64, CappedValuation, PrimePowerRing};

/// The chapters of the mdbook guide, included here so that every code block
/// in the book compiles and runs under `cargo test --doc`.
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/rings.md")]
    pub mod rings {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    pub mod polynomials {}
    #[doc = include_str!("../../../book/src/finite_field.md")]
    pub mod finite_field {}
    #[doc = include_str!("../../../book/src/lifting.md")]
    pub mod lifting {}
    #[doc = include_str!("../../../book/src/counting.md")]
    pub mod counting {}
    #[doc = include_str!("../../../book/src/reliability.md")]
    pub mod reliability {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
