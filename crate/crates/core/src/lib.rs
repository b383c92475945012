//! Lassos for rooted phylogenetic trees: deciding whether a set of known
//! leaf-to-leaf distances (cords) pins down an X-tree, either through the
//! child-edge-graph characterizations or through an exhaustive
//! definition-level oracle.

pub mod builders;
pub mod child_edge_graph;
pub mod cords;
pub mod io;
pub mod lasso;
pub mod oracle;
pub mod rational;
pub mod tree;
pub mod weighting;

pub use child_edge_graph::ChildEdgeGraph;
pub use cords::{Cord, CordSet};
pub use lasso::{classify, LassoError, LassoKind, LassoReport};
pub use rational::{parse_rational, Rational};
pub use tree::{LeafLabel, Shape, TreeError, Triplet, VertexId, XTree};
pub use weighting::{EdgeWeighting, HeightMap, WeightingError};
