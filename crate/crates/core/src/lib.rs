//! Jordan normal bases of finite lattices with respect to nilpotent
//! join-homomorphisms, and Jordan chain bases of nilpotent matrices over
//! prime fields.
//!
//! The crate has two engines that check each other:
//!
//! * [`jnb`] works on an explicit [`FiniteLattice`] and a [`JoinHom`] on it,
//!   building a base by induction on the height of the lattice.
//! * [`gf`] works with exact matrices over GF(p) and builds Jordan chains of
//!   vectors.
//!
//! [`subspace_lattice`] enumerates the lattice of subspaces of GF(p)^n,
//! turns a matrix into the induced join-homomorphism `N ↦ A·N` and runs both
//! engines side by side.

pub mod fixtures;
pub mod formats;
pub mod gf;
pub mod jnb;
pub mod lattice;
pub mod lattice_map;
pub mod partition;
pub mod subspace_lattice;

pub use gf::{GfError, GfMatrix, JordanChainBasis, Subspace};
pub use jnb::{JnbError, JordanNormalBase};
pub use lattice::{FiniteLattice, IntervalEmbedding, LatticeError};
pub use lattice_map::{ConditionReport, JoinHom, MapError};
pub use subspace_lattice::{CrossReport, SubspaceLatticeModel};

/// Outcome of a structural predicate: either it holds, or it fails with the
/// first witness found in element-index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(f(w)),
        }
    }
}

impl<W> From<Option<W>> for Verdict<W> {
    fn from(witness: Option<W>) -> Self {
        match witness {
            None => Verdict::Holds,
            Some(w) => Verdict::Fails(w),
        }
    }
}
