//! Constructions of cord sets: minimum lassos of each kind, circular-ordering
//! lassos and bipartition lassos.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cords::{Cord, CordSet};
use crate::tree::{LeafLabel, TreeError, VertexId, XTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("requested {requested} cords but only {available} exist")]
    TooManyCords { requested: usize, available: usize },
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error("invalid circular ordering: {0}")]
    InvalidOrdering(String),
}

fn require_three(tree: &XTree) -> Result<(), TreeError> {
    if tree.leaf_count() < 3 {
        return Err(TreeError::TooFewLeaves { needed: 3, found: tree.leaf_count() });
    }
    Ok(())
}

fn cord(a: &LeafLabel, b: &LeafLabel) -> Cord {
    Cord::new(a.clone(), b.clone()).expect("representatives of distinct child edges differ")
}

fn child_representatives(tree: &XTree, v: VertexId) -> Vec<&LeafLabel> {
    tree.children(v).iter().map(|&c| tree.representative(c)).collect()
}

/// One cord per interior vertex, joining the two smallest representatives
/// among its child edges.
pub fn min_equidistant_lasso(tree: &XTree) -> Result<CordSet, TreeError> {
    require_three(tree)?;
    let mut out = CordSet::new();
    for v in tree.interior_vertices() {
        let mut reps = child_representatives(tree, v);
        reps.sort();
        out.insert(cord(reps[0], reps[1]));
    }
    Ok(out)
}

/// All representative pairs across distinct child edges, at every interior
/// vertex. The size is the sum of `C(children, 2)` over interior vertices.
pub fn min_topological_lasso(tree: &XTree) -> Result<CordSet, TreeError> {
    require_three(tree)?;
    let mut out = CordSet::new();
    for v in tree.interior_vertices() {
        let reps = child_representatives(tree, v);
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                out.insert(cord(a, b));
            }
        }
    }
    Ok(out)
}

/// Sum of `C(children, 2)` over interior vertices.
pub fn topological_lower_bound(tree: &XTree) -> usize {
    tree.interior_vertices().map(|v| tree.children(v).len()).map(|k| k * (k - 1) / 2).sum()
}

/// Rich child-edge graphs away from pseudo-cherries (clique on the subtree
/// edges plus every leaf-to-subtree pair) and a spanning path over the
/// leaves of each pseudo-cherry. The star tree gets the empty set.
///
/// A pseudo-cherry with `k` leaves costs `k - 1` cords here, which is what
/// connectivity needs.
pub fn min_weak_lasso(tree: &XTree) -> Result<CordSet, TreeError> {
    require_three(tree)?;
    let mut out = CordSet::new();
    if tree.is_star() {
        return Ok(out);
    }
    for v in tree.interior_vertices() {
        let children = tree.children(v);
        if tree.is_pseudo_cherry_parent(v) {
            for pair in children.windows(2) {
                out.insert(cord(tree.representative(pair[0]), tree.representative(pair[1])));
            }
            continue;
        }
        let (subtrees, leaves): (Vec<VertexId>, Vec<VertexId>) = children.iter().partition(|&&c| !tree.is_leaf(c));
        for (i, &s) in subtrees.iter().enumerate() {
            for &s2 in &subtrees[i + 1..] {
                out.insert(cord(tree.representative(s), tree.representative(s2)));
            }
            for &l in &leaves {
                out.insert(cord(tree.representative(l), tree.representative(s)));
            }
        }
    }
    Ok(out)
}

/// How children are ordered when walking the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChildOrder {
    #[default]
    Canonical,
    Shuffled(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircularOrdering {
    order: Vec<LeafLabel>,
}

impl CircularOrdering {
    /// Accepts any arrangement of distinct labels; whether it comes from a
    /// planar embedding of a given tree is checked by
    /// [`CircularOrdering::is_realized_by`].
    pub fn new(order: Vec<LeafLabel>) -> Result<Self, BuildError> {
        let distinct: BTreeSet<&LeafLabel> = order.iter().collect();
        if distinct.len() != order.len() {
            return Err(BuildError::InvalidOrdering("repeated label".into()));
        }
        Ok(CircularOrdering { order })
    }

    pub fn order(&self) -> &[LeafLabel] {
        &self.order
    }

    /// Consecutive pairs including the wrap-around pair.
    pub fn consecutive_pairs(&self) -> impl Iterator<Item = (&LeafLabel, &LeafLabel)> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| (&self.order[i], &self.order[(i + 1) % n]))
    }

    /// Every cluster of the tree occupies a cyclically contiguous block.
    pub fn is_realized_by(&self, tree: &XTree) -> bool {
        let n = self.order.len();
        if n != tree.leaf_count() {
            return false;
        }
        let Some(position): Option<Vec<usize>> = tree
            .labels()
            .iter()
            .map(|l| self.order.iter().position(|o| o == l))
            .collect()
        else {
            return false;
        };
        tree.interior_vertices().all(|v| {
            let cluster = tree.cluster(v);
            let inside: Vec<bool> = {
                let mut mark = vec![false; n];
                for &leaf in cluster {
                    mark[position[leaf]] = true;
                }
                mark
            };
            let boundaries = (0..n).filter(|&i| inside[i] != inside[(i + 1) % n]).count();
            boundaries <= 2
        })
    }
}

/// Leaves in the order of a depth-first walk.
pub fn circular_order(tree: &XTree, order: ChildOrder) -> CircularOrdering {
    let mut rng = match order {
        ChildOrder::Canonical => None,
        ChildOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut leaves = Vec::with_capacity(tree.leaf_count());
    let mut stack = vec![tree.root()];
    while let Some(v) = stack.pop() {
        if let Some(label) = tree.label_of(v) {
            leaves.push(label.clone());
            continue;
        }
        let mut children = tree.children(v).to_vec();
        if let Some(rng) = rng.as_mut() {
            children.shuffle(rng);
        }
        stack.extend(children.into_iter().rev());
    }
    CircularOrdering { order: leaves }
}

/// `{x_i x_{i+1}}` with indices taken cyclically.
pub fn circular_lasso(ordering: &CircularOrdering) -> Result<CordSet, BuildError> {
    if ordering.order.len() < 3 {
        return Err(TreeError::TooFewLeaves { needed: 3, found: ordering.order.len() }.into());
    }
    Ok(ordering.consecutive_pairs().map(|(a, b)| cord(a, b)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    a_side: BTreeSet<LeafLabel>,
    b_side: BTreeSet<LeafLabel>,
}

impl Bipartition {
    pub fn new(a_side: impl IntoIterator<Item = LeafLabel>, b_side: impl IntoIterator<Item = LeafLabel>) -> Result<Self, BuildError> {
        let a_side: BTreeSet<LeafLabel> = a_side.into_iter().collect();
        let b_side: BTreeSet<LeafLabel> = b_side.into_iter().collect();
        if a_side.is_empty() || b_side.is_empty() {
            return Err(BuildError::InvalidBipartition("both blocks must be nonempty".into()));
        }
        if let Some(shared) = a_side.intersection(&b_side).next() {
            return Err(BuildError::InvalidBipartition(format!("`{shared}` lies in both blocks")));
        }
        Ok(Bipartition { a_side, b_side })
    }

    /// Splits `x_set` into `a_side` and everything else.
    pub fn from_side(x_set: &[LeafLabel], a_side: &[LeafLabel]) -> Result<Self, BuildError> {
        if let Some(stray) = a_side.iter().find(|l| !x_set.contains(l)) {
            return Err(BuildError::InvalidBipartition(format!("`{stray}` is not a leaf")));
        }
        let b_side = x_set.iter().filter(|l| !a_side.contains(l)).cloned();
        Bipartition::new(a_side.iter().cloned(), b_side)
    }

    /// Every bipartition of `x_set`, each unordered pair listed once.
    pub fn all(x_set: &[LeafLabel]) -> Vec<Bipartition> {
        let n = x_set.len();
        if n < 2 {
            return Vec::new();
        }
        (1u64..1 << (n - 1))
            .map(|mask| {
                let a = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| x_set[i].clone());
                let b = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| x_set[i].clone());
                Bipartition::new(a, b).expect("mask is a proper nonempty subset")
            })
            .collect()
    }

    pub fn a_side(&self) -> &BTreeSet<LeafLabel> {
        &self.a_side
    }

    pub fn b_side(&self) -> &BTreeSet<LeafLabel> {
        &self.b_side
    }

    pub fn covers(&self, x_set: &[LeafLabel]) -> bool {
        let union: BTreeSet<&LeafLabel> = self.a_side.iter().chain(&self.b_side).collect();
        union == x_set.iter().collect()
    }

    /// Every pseudo-cherry of `tree` has leaves on both sides.
    pub fn splits_pseudo_cherries(&self, tree: &XTree) -> bool {
        tree.pseudo_cherries().iter().all(|pc| {
            pc.leaves.iter().any(|l| self.a_side.contains(l)) && pc.leaves.iter().any(|l| self.b_side.contains(l))
        })
    }
}

/// `A ∨ B`: every cord with one end in each block.
pub fn bipartition_lasso(bp: &Bipartition) -> CordSet {
    bp.a_side.iter().flat_map(|a| bp.b_side.iter().map(move |b| cord(a, b))).collect()
}

/// `k` distinct cords drawn uniformly from all cords on `x_set`.
pub fn random_cord_set(x_set: &[LeafLabel], k: usize, seed: u64) -> Result<CordSet, BuildError> {
    let all: Vec<Cord> = CordSet::complete(x_set).iter().cloned().collect();
    if k > all.len() {
        return Err(BuildError::TooManyCords { requested: k, available: all.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(all.choose_multiple(&mut rng, k).cloned().collect())
}
