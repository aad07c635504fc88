//! Finite groups, their group algebras, modules and resolutions.

pub mod group;
pub mod module;
pub mod les;
pub mod resolution;

pub use group::{cycle_degree, parse_cycles, FiniteGroup, Permutation};
pub use module::{aug_power, induced_map, AModule, GroupAlgebra};
pub use resolution::{ext, ext_dims, ext_induced, free_resolution, lift_chain_map, ChainMap, ExtGroup, FreeResolution};
pub use les::{long_exact_sequence, LongExactSequence, Node, Term};
