//! Partial permutations, cycle-path types, the set-partition lattice and
//! contraction along set partitions.

mod contract;
mod partial;
mod set_partition;
mod union_find;

pub use contract::{contract, quotient_type, Contraction, Contractor, Quotient};
pub use partial::{integer_partitions, part_multiplicities, CyclePathType, PartialPermutation};
pub use set_partition::{for_each_growth_string, set_partitions, SetPartition, SetPartitions};
pub use union_find::UnionFind;

pub(crate) use partial::join as join_u32;
pub(crate) use set_partition::mobius_from_sizes;
