//! Executable bounds, group constructions and counting functions around
//! ℓ-torsion in class groups and discriminant multiplicities.

pub mod arith;
pub mod bounds;
pub mod counting;
pub mod ingest;
pub mod perm;
pub mod quadforms;
