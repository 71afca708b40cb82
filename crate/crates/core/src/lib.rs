//! Normalizers of primitive permutation groups of product-action type.
//!
//! Permutations act on the right: `x^(pq) = (x^p)^q`, and `p.compose(q)`
//! means "first `p`, then `q`". Points are 0-based in the API and 1-based in
//! text and JSON.

pub mod backtrack;
pub mod bench;
pub mod chain;
pub mod error;
pub mod group;
pub mod hom;
pub mod io;
pub mod morphism;
pub mod partition;
pub mod perm;
pub mod reduction;
pub mod structure;
pub mod wreath;

pub use chain::StabilizerChain;
pub use error::{Error, Result};
pub use group::PermGroup;
pub use hom::GroupHom;
pub use partition::Partition;
pub use perm::{Cycles, Permutation, Point};
