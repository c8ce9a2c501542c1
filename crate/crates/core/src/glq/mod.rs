//! Representation theory of `GL_n(F_q)` and of its block-diagonal Levi subgroups.

mod chartable;
mod group;
mod levi;
pub mod matrix;
mod modp;

pub use chartable::{character_table, CharacterTable, ClassFunction};
pub use group::{conjugacy_classes, gl_order, group_bound, ConjClass, GLGroup, DEFAULT_GROUP_BOUND, GROUP_BOUND_ENV};
pub use matrix::{monic_irreducibles, similarity_key, FqMat, SimilarityKey};
pub use levi::{
    cuspidal_count, cuspidal_indices, cuspidal_support_matches, hom_dim, is_cuspidal, proper_compositions, support_multiplicity,
    unipotent_class_counts, unipotent_fixed_dims, LeviCharacter, ParabolicHistogram, TableCache,
};
