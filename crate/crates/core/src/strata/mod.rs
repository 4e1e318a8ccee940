//! Face stratifications of cluster and stacked-cluster moduli spaces.

mod cluster;
mod colored;
mod stratum;
mod width;

pub use cluster::{
    cell_f_vector, enumerate_cluster_strata, enumerate_cluster_strata_parallel, facet_term_bijection,
    quadratic_terms, TermDescriptor,
};
pub use colored::{
    coloring_cone_corank, coloring_cone_dim, enumerate_colored_trees, enumerate_stacked_strata,
    enumerate_stacked_strata_parallel, equality_system, is_generalized_corner, pinned_cone_dim,
    validate_coloring, ColoredParseError, ColoredTree, ColoringCertificate, ColoringViolation,
};
pub use stratum::{euler_characteristic, f_vector, Stratum};
pub use width::{
    intrinsic_width, stacked_gluing_lengths, stacked_gluing_lengths_at, stacked_total_length,
    GluingExpr, WidthError, WidthProfile,
};
