//! Permutation groups at desk scale: explicit element enumeration under
//! configurable caps, subgroup towers in ℓ-groups, the Sylow decomposition of
//! transitive nilpotent groups, and allowable subgroups of direct powers.

mod allowable;
mod coset;
mod group;
mod iso;
mod lattice;
mod nilpotent;
mod permutation;
pub mod tables;
mod tower;

pub use allowable::{
    allowable_subgroups, allowable_subgroups_up_to_symmetry, check_deg_ind, AllowablePermSubgroup,
    DegIndReport, DegIndWitness, EnumerationMode,
};
pub use coset::{coset_action, normal_core};
pub use group::{ElementSet, PermGroup};
pub use iso::{is_perm_isomorphic, normalizer_in_symmetric, perm_isomorphism};
pub use lattice::{LatticeStats, ProductLattice};
pub use nilpotent::{direct_product_action, nilpotent_decomposition, sylow_subgroup};
pub use permutation::{split_generators, Permutation};
pub use tables::{data_override, parse_label, TableEntry, TransitiveTable, DATA_ENV};
pub use tower::{all_subgroup_towers, frattini_subgroup, subgroup_tower, SubgroupChain};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("cannot parse cycle notation: {0}")]
    Parse(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("group order exceeds enumeration cap {cap}")]
    OrderCap { cap: usize },
    #[error("|G|^k = {order} exceeds subgroup-lattice cap {cap}")]
    LatticeCap { order: u64, cap: usize },
    #[error("subgroup lattice has more than {cap} members; use the up-to-symmetry mode")]
    LatticeBudget { cap: usize },
    #[error("more than {limit} subgroup towers; raise the limit")]
    TooManyTowers { limit: usize },
    #[error("a(G) undefined for the trivial group")]
    TrivialGroup,
    #[error("not a subgroup")]
    NotSubgroup,
    #[error("group order {order} is not a power of {prime}")]
    NotPrimePower { order: u64, prime: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("group not nilpotent")]
    NotNilpotent,
    #[error("group not solvable")]
    NotSolvable,
    #[error("group not transitive")]
    NotTransitive,
    #[error("unknown transitive group label {0:?}")]
    UnknownLabel(String),
    #[error("group table: {0}")]
    Table(String),
}

/// Enumeration limits. Every operation that materializes elements or
/// subgroup lattices checks against these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_order: usize,
    pub max_degree: usize,
    /// Largest `|G|^k` accepted by the subgroup-lattice engine.
    pub max_lattice_order: usize,
    /// Largest number of subgroups the literal lattice mode will store.
    pub max_lattice_members: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_order: 100_000,
            max_degree: 4096,
            max_lattice_order: 2048,
            max_lattice_members: 250_000,
        }
    }
}

/// `degree - #cycles`, fixed points counted as cycles.
pub fn ind(g: &Permutation) -> usize {
    g.ind()
}

/// `a(G)`, the least index of a non-identity element.
pub fn group_min_index(g: &PermGroup) -> Result<usize, PermError> {
    g.min_index()
}

/// Orbits on points, each sorted, ordered by least point.
pub fn orbits(g: &PermGroup) -> Vec<Vec<usize>> {
    g.orbits()
}

pub fn is_transitive(g: &PermGroup) -> bool {
    g.is_transitive()
}
