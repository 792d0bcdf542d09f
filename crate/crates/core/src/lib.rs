//! Sparse covers with shortest-path trees, and the distance structures built
//! on them: multi-scale distance labels, a path-reporting distance oracle for
//! unweighted graphs, and compact labeled routing.
//!
//! All distances are exact integers ([`Dist`]); edge weights are positive.

pub mod bench;
pub mod cover;
pub mod dist;
pub mod error;
pub mod graph;
pub mod labeling;
pub mod oracle;
pub mod path;
pub mod radius;
pub mod rng;
pub mod routing;
pub mod serial;
pub mod spt;
pub mod sssp;

pub use bench::{run_bench, BenchReport, ExperimentConfig, ExperimentRow, Queries, Structure};
pub use cover::{
    build_cover_deterministic, build_cover_randomized, build_cover_randomized_with_retries, verify_cover, ClusterId,
    SparseCover,
};
pub use dist::Dist;
pub use error::{Error, Result};
pub use graph::{generate, Graph, GraphKind, VertexId};
pub use labeling::{build_labeling, query_distance, LabelingScheme, VertexLabel};
pub use oracle::{build_oracle, OracleParams, PrunedOracle};
pub use path::{validate_path, Path};
pub use radius::Radius;
pub use routing::{build_routing, RouteResult, RoutingScheme};
pub use spt::{ShortestPathTree, TreeId};
pub use sssp::{ball, diameter_upper_bound, exact_distance, shortest_path_tree};
