//! Rooted leaf-labelled trees without unary vertices ("X-trees").
//!
//! Every [`XTree`] is stored in a normal form: leaves occupy vertex ids
//! `0..n` in sorted label order, interior vertices follow in pre-order and
//! children are kept sorted by their canonical encoding. Two trees are
//! therefore equivalent exactly when their canonical encodings agree.

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid leaf label `{0}`: labels must be nonempty and free of whitespace and `(),:;`")]
    InvalidLabel(String),
    #[error("leaf label `{0}` occurs more than once")]
    DuplicateLabel(String),
    #[error("unknown leaf label `{0}`")]
    UnknownLabel(String),
    #[error("interior vertex with a single child")]
    UnaryVertex,
    #[error("interior vertex without children")]
    EmptyNode,
    #[error("the two trees are on different leaf sets")]
    LeafSetMismatch,
    #[error("vertex {0} does not belong to this tree")]
    NoSuchVertex(VertexId),
    #[error("vertex {0} is a leaf, an interior vertex is required")]
    NotInterior(VertexId),
    #[error("richness is undefined at {0}: all of its children are leaves")]
    RichnessUndefined(VertexId),
    #[error("cannot restrict to an empty leaf set")]
    EmptyRestriction,
    #[error("at least {needed} leaves are required, the tree has {found}")]
    TooFewLeaves { needed: usize, found: usize },
    #[error("a cord needs two distinct leaves, got `{0}` twice")]
    DegenerateCord(String),
}

/// Name of a leaf.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LeafLabel(String);

impl LeafLabel {
    pub fn new(name: impl Into<String>) -> Result<Self, TreeError> {
        let name = name.into();
        let bad = |c: char| c.is_whitespace() || "(),:;".contains(c);
        if name.is_empty() || name.chars().any(bad) {
            return Err(TreeError::InvalidLabel(name));
        }
        Ok(LeafLabel(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for LeafLabel {
    type Error = TreeError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        LeafLabel::new(value)
    }
}

impl From<LeafLabel> for String {
    fn from(label: LeafLabel) -> Self {
        label.0
    }
}

impl FromStr for LeafLabel {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LeafLabel::new(s)
    }
}

impl Borrow<str> for LeafLabel {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for LeafLabel {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LeafLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Parses a comma or whitespace separated list of labels.
pub fn parse_label_list(text: &str) -> Result<Vec<LeafLabel>, TreeError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(LeafLabel::new)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub(crate) usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Nested description of a tree, used to construct [`XTree`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Leaf(LeafLabel),
    Node(Vec<Shape>),
}

impl Shape {
    pub fn leaf(name: &str) -> Result<Shape, TreeError> {
        Ok(Shape::Leaf(LeafLabel::new(name)?))
    }
}

/// The rooted triplet `ab|c`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triplet {
    cherry: (LeafLabel, LeafLabel),
    outlier: LeafLabel,
}

impl Triplet {
    pub fn new(a: LeafLabel, b: LeafLabel, c: LeafLabel) -> Result<Self, TreeError> {
        if a == b || a == c {
            return Err(TreeError::DuplicateLabel(a.0));
        }
        if b == c {
            return Err(TreeError::DuplicateLabel(b.0));
        }
        let cherry = if a < b { (a, b) } else { (b, a) };
        Ok(Triplet { cherry, outlier: c })
    }

    pub fn cherry(&self) -> (&LeafLabel, &LeafLabel) {
        (&self.cherry.0, &self.cherry.1)
    }

    pub fn outlier(&self) -> &LeafLabel {
        &self.outlier
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}|{}", self.cherry.0, self.cherry.1, self.outlier)
    }
}

/// A pseudo-cherry: the full leaf set of a vertex whose children are all
/// leaves, provided that set is not all of X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoCherry {
    pub parent: VertexId,
    pub leaves: Vec<LeafLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XTree {
    labels: Vec<LeafLabel>,
    parent: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
    depth: Vec<usize>,
    clusters: Vec<Vec<usize>>,
    canonical: String,
    root: VertexId,
}

struct RawNode {
    label: Option<LeafLabel>,
    children: Vec<usize>,
}

fn flatten(shape: &Shape, arena: &mut Vec<RawNode>) -> usize {
    let id = arena.len();
    match shape {
        Shape::Leaf(label) => arena.push(RawNode { label: Some(label.clone()), children: vec![] }),
        Shape::Node(kids) => {
            arena.push(RawNode { label: None, children: vec![] });
            let ids: Vec<usize> = kids.iter().map(|k| flatten(k, arena)).collect();
            arena[id].children = ids;
        }
    }
    id
}

impl XTree {
    pub fn from_shape(shape: &Shape) -> Result<XTree, TreeError> {
        Self::from_shape_mapped(shape).map(|(t, _)| t)
    }

    /// Builds the normal form and reports, for every node of `shape` in
    /// pre-order, the vertex it became.
    pub(crate) fn from_shape_mapped(shape: &Shape) -> Result<(XTree, Vec<VertexId>), TreeError> {
        let mut arena = Vec::new();
        flatten(shape, &mut arena);

        let mut labels = Vec::new();
        for node in &arena {
            match (&node.label, node.children.len()) {
                (Some(label), _) => labels.push(label.clone()),
                (None, 0) => return Err(TreeError::EmptyNode),
                (None, 1) => return Err(TreeError::UnaryVertex),
                _ => {}
            }
        }
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(TreeError::DuplicateLabel(w[0].0.clone()));
        }
        let n = labels.len();

        // Canonical encodings, children before parents (arena is pre-order).
        let mut enc = vec![String::new(); arena.len()];
        for i in (0..arena.len()).rev() {
            enc[i] = match &arena[i].label {
                Some(label) => label.0.clone(),
                None => {
                    let mut parts: Vec<&str> = arena[i].children.iter().map(|&c| enc[c].as_str()).collect();
                    parts.sort_unstable();
                    format!("({})", parts.join(","))
                }
            };
        }

        let total = arena.len();
        let mut mapping = vec![VertexId(0); total];
        let mut parent = vec![None; total];
        let mut children = vec![Vec::new(); total];
        let mut depth = vec![0usize; total];
        let mut next_interior = n;
        // (arena node, parent vertex, depth)
        let mut stack = vec![(0usize, None::<VertexId>, 0usize)];
        while let Some((node, par, d)) = stack.pop() {
            let vid = match &arena[node].label {
                Some(label) => VertexId(labels.binary_search(label).expect("label collected above")),
                None => {
                    let v = VertexId(next_interior);
                    next_interior += 1;
                    v
                }
            };
            mapping[node] = vid;
            parent[vid.0] = par;
            depth[vid.0] = d;
            if let Some(p) = par {
                children[p.0].push(vid);
            }
            let mut kids = arena[node].children.clone();
            kids.sort_by(|&a, &b| enc[a].cmp(&enc[b]));
            for &k in kids.iter().rev() {
                stack.push((k, Some(vid), d + 1));
            }
        }

        let root = mapping[0];
        let mut clusters = vec![Vec::new(); total];
        for (leaf, cluster) in clusters.iter_mut().enumerate().take(n) {
            cluster.push(leaf);
        }
        // Interior ids were assigned in pre-order, so descending ids visit
        // children before parents.
        for v in (n..total).rev() {
            let mut all: Vec<usize> = children[v].iter().flat_map(|c| clusters[c.0].iter().copied()).collect();
            all.sort_unstable();
            clusters[v] = all;
        }

        let tree = XTree { labels, parent, children, depth, clusters, canonical: enc[0].clone(), root };
        Ok((tree, mapping))
    }

    /// The star tree on the given labels.
    pub fn star(labels: &[LeafLabel]) -> Result<XTree, TreeError> {
        let shape = Shape::Node(labels.iter().cloned().map(Shape::Leaf).collect());
        XTree::from_shape(&shape)
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// Sorted leaf labels; the leaf with label `labels()[i]` is vertex `i`.
    pub fn labels(&self) -> &[LeafLabel] {
        &self.labels
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v.0]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v.0]
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v.0]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        v.0 < self.labels.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 < self.parent.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.parent.len()).map(VertexId)
    }

    /// Interior vertices in pre-order (root first).
    pub fn interior_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (self.labels.len()..self.parent.len()).map(VertexId)
    }

    pub fn interior_count(&self) -> usize {
        self.parent.len() - self.labels.len()
    }

    pub fn leaf(&self, label: &str) -> Option<VertexId> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok().map(VertexId)
    }

    pub(crate) fn require_leaf(&self, label: &str) -> Result<VertexId, TreeError> {
        self.leaf(label).ok_or_else(|| TreeError::UnknownLabel(label.to_string()))
    }

    pub fn label_of(&self, v: VertexId) -> Option<&LeafLabel> {
        self.labels.get(v.0)
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<(), TreeError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(TreeError::NoSuchVertex(v))
        }
    }

    pub(crate) fn check_interior(&self, v: VertexId) -> Result<(), TreeError> {
        self.check_vertex(v)?;
        if self.is_leaf(v) {
            Err(TreeError::NotInterior(v))
        } else {
            Ok(())
        }
    }

    /// Last common vertex of the root paths to `u` and `v`.
    pub fn lca_of(&self, mut u: VertexId, mut v: VertexId) -> VertexId {
        while self.depth[u.0] > self.depth[v.0] {
            u = self.parent[u.0].expect("non-root vertex has a parent");
        }
        while self.depth[v.0] > self.depth[u.0] {
            v = self.parent[v.0].expect("non-root vertex has a parent");
        }
        while u != v {
            u = self.parent[u.0].expect("non-root vertex has a parent");
            v = self.parent[v.0].expect("non-root vertex has a parent");
        }
        u
    }

    pub fn lca(&self, a: &str, b: &str) -> Result<VertexId, TreeError> {
        let u = self.require_leaf(a)?;
        let v = self.require_leaf(b)?;
        Ok(self.lca_of(u, v))
    }

    /// Child of `ancestor` on the path down to `v`; `None` if `v` is not a
    /// proper descendant of `ancestor`.
    pub fn child_toward(&self, ancestor: VertexId, mut v: VertexId) -> Option<VertexId> {
        while let Some(p) = self.parent[v.0] {
            if p == ancestor {
                return Some(v);
            }
            v = p;
        }
        None
    }

    /// Sorted leaf indices below `v` (`[v]` for a leaf).
    pub fn cluster(&self, v: VertexId) -> &[usize] {
        &self.clusters[v.0]
    }

    pub fn leaves_below(&self, v: VertexId) -> Result<Vec<&LeafLabel>, TreeError> {
        self.check_vertex(v)?;
        Ok(self.clusters[v.0].iter().map(|&i| &self.labels[i]).collect())
    }

    /// Smallest label below `v`.
    pub fn representative(&self, v: VertexId) -> &LeafLabel {
        &self.labels[self.clusters[v.0][0]]
    }

    /// Canonical Newick body (no trailing `;`).
    pub fn canonical_form(&self) -> &str {
        &self.canonical
    }

    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<XTree, TreeError> {
        if keep.is_empty() {
            return Err(TreeError::EmptyRestriction);
        }
        let mut wanted = vec![false; self.labels.len()];
        for label in keep {
            wanted[self.require_leaf(label.as_ref())?.0] = true;
        }
        let shape = self.restricted_shape(self.root, &wanted).expect("nonempty restriction");
        XTree::from_shape(&shape)
    }

    fn restricted_shape(&self, v: VertexId, wanted: &[bool]) -> Option<Shape> {
        if self.is_leaf(v) {
            return wanted[v.0].then(|| Shape::Leaf(self.labels[v.0].clone()));
        }
        let mut kids: Vec<Shape> = self.children[v.0].iter().filter_map(|&c| self.restricted_shape(c, wanted)).collect();
        match kids.len() {
            0 => None,
            1 => kids.pop(),
            _ => Some(Shape::Node(kids)),
        }
    }

    /// Resolves three distinct leaves: `Some(i)` names the outlier position
    /// (0, 1 or 2) of the displayed triplet, `None` means the three leaves
    /// form a star.
    pub(crate) fn triplet_outlier(&self, leaves: [usize; 3]) -> Option<usize> {
        let [a, b, c] = leaves.map(VertexId);
        let ab = self.depth[self.lca_of(a, b).0];
        let ac = self.depth[self.lca_of(a, c).0];
        let bc = self.depth[self.lca_of(b, c).0];
        if ab > ac {
            Some(2)
        } else if ac > ab {
            Some(1)
        } else if bc > ab {
            Some(0)
        } else {
            None
        }
    }

    /// Displayed triplets as `(cherry_lo, cherry_hi, outlier)` leaf indices.
    pub(crate) fn triplet_indices(&self) -> BTreeSet<(usize, usize, usize)> {
        let n = self.labels.len();
        let mut out = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    match self.triplet_outlier([a, b, c]) {
                        Some(2) => out.insert((a, b, c)),
                        Some(1) => out.insert((a, c, b)),
                        Some(0) => out.insert((b, c, a)),
                        _ => false,
                    };
                }
            }
        }
        out
    }

    pub fn triplets(&self) -> BTreeSet<Triplet> {
        self.triplet_indices()
            .into_iter()
            .map(|(a, b, c)| Triplet {
                cherry: (self.labels[a].clone(), self.labels[b].clone()),
                outlier: self.labels[c].clone(),
            })
            .collect()
    }

    pub fn displays(&self, triplet: &Triplet) -> Result<bool, TreeError> {
        let a = self.require_leaf(triplet.cherry.0.as_str())?.0;
        let b = self.require_leaf(triplet.cherry.1.as_str())?.0;
        let c = self.require_leaf(triplet.outlier.as_str())?.0;
        Ok(self.triplet_outlier([a, b, c]) == Some(2))
    }

    fn same_leaf_set(&self, other: &XTree) -> Result<(), TreeError> {
        if self.labels == other.labels {
            Ok(())
        } else {
            Err(TreeError::LeafSetMismatch)
        }
    }

    /// Root-preserving isomorphism fixing every leaf label.
    pub fn is_equivalent(&self, other: &XTree) -> Result<bool, TreeError> {
        self.same_leaf_set(other)?;
        Ok(self.canonical == other.canonical)
    }

    /// Whether `self` refines `coarser`, i.e. displays all of its triplets.
    pub fn refines(&self, coarser: &XTree) -> Result<bool, TreeError> {
        self.same_leaf_set(coarser)?;
        Ok(coarser.triplet_indices().is_subset(&self.triplet_indices()))
    }

    pub fn is_pseudo_cherry_parent(&self, v: VertexId) -> bool {
        !self.is_leaf(v)
            && self.clusters[v.0].len() < self.labels.len()
            && self.children[v.0].iter().all(|&c| self.is_leaf(c))
    }

    pub fn pseudo_cherries(&self) -> Vec<PseudoCherry> {
        self.interior_vertices()
            .filter(|&v| self.is_pseudo_cherry_parent(v))
            .map(|v| PseudoCherry {
                parent: v,
                leaves: self.clusters[v.0].iter().map(|&i| self.labels[i].clone()).collect(),
            })
            .collect()
    }

    /// Interior vertices that are not the parent of a pseudo-cherry.
    pub fn interior_minus(&self) -> Vec<VertexId> {
        self.interior_vertices().filter(|&v| !self.is_pseudo_cherry_parent(v)).collect()
    }

    pub fn is_binary(&self) -> bool {
        self.interior_vertices().all(|v| self.children[v.0].len() == 2)
    }

    pub fn is_star(&self) -> bool {
        self.interior_count() == 1
    }
}

impl fmt::Display for XTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.canonical)
    }
}
