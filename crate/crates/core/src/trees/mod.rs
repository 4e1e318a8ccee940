//! Labelled planar trees: tuples, topology, metrics, decomposition, gluing.

mod decomposition;
mod enumerate;
mod gluing;
mod labels;
mod metric;
mod tree;

pub use decomposition::{fundamental_decomposition, ReducedComponent, TreeDecomposition, UniComponent};
pub use enumerate::{enumerate_stable_trees, enumerate_stable_trees_parallel, is_binary};
pub use gluing::{glue_trees, GlueError, Glued, Origin};
pub use labels::{classify_tuple, reduce_tuple, LagTuple, Label, ReducedTuple, TupleClass, TupleError};
pub use metric::{
    check_system_of_ends, glue_metrics, rho_to_length, EdgeLength, GlueParam, MetricError, MetricTree,
};
pub use tree::{Child, EdgeId, LabelledTree, Nested, Tree, TreeError};
