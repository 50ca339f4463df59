//! Permutations, set partitions of {1..r} under refinement, strict chains
//! and the Möbius function of the partition lattice.

mod partition;
mod permutation;

pub use partition::{
    enumerate_partitions, enumerate_strict_chains, mobius_bottom_top, permute_partition, refines, Mask,
    PartitionChain, SetPartition, MAX_GROUND,
};
pub use permutation::{conjugacy_class_representatives, integer_partitions, Permutation};

pub(crate) use partition::{full_mask, mask_elements, mask_min, permute_mask};
