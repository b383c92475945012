//! Equidistant proper edge-weightings, represented by vertex heights.
//!
//! An equidistant weighting is determined by the common distance from each
//! vertex down to any leaf below it (its height). Leaves sit at height 0,
//! every edge `{u, w}` with `u` the parent weighs `h(u) - h(w)`, and the
//! weighting is proper when every interior edge has positive weight, i.e.
//! heights strictly decrease along interior edges. Pendant edges may weigh 0.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cords::CordSet;
use crate::rational::{frac, Rational};
use crate::tree::{TreeError, VertexId, XTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightingError {
    #[error("edge above {0} has negative weight")]
    Negative(VertexId),
    #[error("interior edge above {0} has non-positive weight")]
    NotProper(VertexId),
    #[error("leaves below {0} are at different distances from it")]
    NotEquidistant(VertexId),
    #[error("edge above {0} has no weight")]
    MissingWeight(VertexId),
    #[error("height of {0} is negative")]
    NegativeHeight(VertexId),
    #[error("height of {0} is not strictly below the height of its parent")]
    NotMonotone(VertexId),
    #[error("expected {expected} heights, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Per-edge weights keyed by the child endpoint of each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWeighting {
    weights: Vec<Option<Rational>>,
}

impl EdgeWeighting {
    pub fn empty(tree: &XTree) -> Self {
        EdgeWeighting { weights: vec![None; tree.vertex_count()] }
    }

    pub fn set(&mut self, child: VertexId, weight: Rational) {
        self.weights[child.index()] = Some(weight);
    }

    /// Weight of the edge between `child` and its parent.
    pub fn get(&self, child: VertexId) -> Option<&Rational> {
        self.weights.get(child.index()).and_then(|w| w.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightMap {
    tree: XTree,
    heights: Vec<Rational>,
}

impl HeightMap {
    /// `interior` lists heights in the order of [`XTree::interior_vertices`].
    pub fn from_interior(tree: XTree, interior: Vec<Rational>) -> Result<HeightMap, WeightingError> {
        if interior.len() != tree.interior_count() {
            return Err(WeightingError::WrongLength { expected: tree.interior_count(), found: interior.len() });
        }
        let mut heights = vec![Rational::zero(); tree.leaf_count()];
        heights.extend(interior);
        let hm = HeightMap { tree, heights };
        hm.validate()?;
        Ok(hm)
    }

    fn validate(&self) -> Result<(), WeightingError> {
        for v in self.tree.interior_vertices() {
            if self.heights[v.index()].is_negative() {
                return Err(WeightingError::NegativeHeight(v));
            }
            if let Some(p) = self.tree.parent(v) {
                if self.heights[v.index()] >= self.heights[p.index()] {
                    return Err(WeightingError::NotMonotone(v));
                }
            }
        }
        Ok(())
    }

    pub fn tree(&self) -> &XTree {
        &self.tree
    }

    pub fn height(&self, v: VertexId) -> &Rational {
        &self.heights[v.index()]
    }

    pub fn interior_heights(&self) -> Vec<Rational> {
        self.tree.interior_vertices().map(|v| self.heights[v.index()].clone()).collect()
    }

    pub fn to_edge_weights(&self) -> EdgeWeighting {
        let mut w = EdgeWeighting::empty(&self.tree);
        for v in self.tree.vertices() {
            if let Some(p) = self.tree.parent(v) {
                w.set(v, &self.heights[p.index()] - &self.heights[v.index()]);
            }
        }
        w
    }

    /// Recovers heights from an equidistant proper edge-weighting.
    pub fn from_edge_weights(tree: &XTree, weights: &EdgeWeighting) -> Result<HeightMap, WeightingError> {
        let weight = |v: VertexId| weights.get(v).ok_or(WeightingError::MissingWeight(v));
        for v in tree.vertices().filter(|&v| v != tree.root()) {
            let w = weight(v)?;
            if w.is_negative() {
                return Err(WeightingError::Negative(v));
            }
            if !tree.is_leaf(v) && w.is_zero() {
                return Err(WeightingError::NotProper(v));
            }
        }
        let mut heights = vec![Rational::zero(); tree.vertex_count()];
        // Descending interior ids visit children before parents.
        for v in tree.interior_vertices().collect::<Vec<_>>().into_iter().rev() {
            let mut common: Option<Rational> = None;
            for &c in tree.children(v) {
                let h = &heights[c.index()] + weight(c)?;
                match &common {
                    None => common = Some(h),
                    Some(x) if *x == h => {}
                    Some(_) => return Err(WeightingError::NotEquidistant(v)),
                }
            }
            heights[v.index()] = common.expect("interior vertex has children");
        }
        let hm = HeightMap { tree: tree.clone(), heights };
        hm.validate()?;
        Ok(hm)
    }

    /// Path length between two leaves: twice the height of their LCA.
    pub fn leaf_distance(&self, a: &str, b: &str) -> Result<Rational, WeightingError> {
        let v = self.tree.lca(a, b)?;
        Ok(&self.heights[v.index()] * Rational::from_integer(2.into()))
    }

    pub(crate) fn index_distance(&self, a: usize, b: usize) -> Rational {
        let v = self.tree.lca_of(VertexId(a), VertexId(b));
        &self.heights[v.index()] * Rational::from_integer(2.into())
    }

    /// Whether both weighted trees induce the same distance on every cord.
    pub fn is_l_isometric(&self, other: &HeightMap, cords: &CordSet) -> Result<bool, WeightingError> {
        if self.tree.labels() != other.tree.labels() {
            return Err(TreeError::LeafSetMismatch.into());
        }
        for (a, b) in cords.resolve(&self.tree)? {
            if self.index_distance(a, b) != other.index_distance(a, b) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Seeded random proper heights with small denominators. Lowest interior
/// vertices may sit at height 0.
pub fn random_proper_heights(tree: &XTree, seed: u64) -> HeightMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut heights = vec![Rational::zero(); tree.vertex_count()];
    for v in tree.interior_vertices().collect::<Vec<_>>().into_iter().rev() {
        let below = tree
            .children(v)
            .iter()
            .filter(|&&c| !tree.is_leaf(c))
            .map(|c| heights[c.index()].clone())
            .max();
        heights[v.index()] = match below {
            None => frac(rng.gen_range(0..=4), 2),
            Some(h) => h + frac(rng.gen_range(1..=4), 2),
        };
    }
    let interior = tree.interior_vertices().map(|v| heights[v.index()].clone()).collect();
    HeightMap::from_interior(tree.clone(), interior).expect("generated heights are monotone")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::tree::tests::t;

    fn hm(tree: &str, interior: &[i64]) -> HeightMap {
        HeightMap::from_interior(t(tree), interior.iter().map(|&h| int(h)).collect()).unwrap()
    }

    #[test]
    fn to_edge_weights_examples() {
        let star = hm("(a,b,c)", &[1]);
        let w = star.to_edge_weights();
        for leaf in ["a", "b", "c"] {
            assert_eq!(w.get(star.tree().leaf(leaf).unwrap()), Some(&int(1)));
        }
        // interior order is pre-order: root, then the cherry parent
        let tri = hm("((a,b),c)", &[3, 1]);
        let tree = tri.tree();
        let w = tri.to_edge_weights();
        let cherry = tree.lca("a", "b").unwrap();
        assert_eq!(w.get(tree.leaf("a").unwrap()), Some(&int(1)));
        assert_eq!(w.get(tree.leaf("b").unwrap()), Some(&int(1)));
        assert_eq!(w.get(cherry), Some(&int(2)));
        assert_eq!(w.get(tree.leaf("c").unwrap()), Some(&int(3)));
        assert_eq!(w.get(tree.root()), None);
    }

    #[test]
    fn from_edge_weights_errors() {
        let tree = t("((a,b),c)");
        let (a, b, c) = (tree.leaf("a").unwrap(), tree.leaf("b").unwrap(), tree.leaf("c").unwrap());
        let cherry = tree.lca("a", "b").unwrap();
        let weights = |wa: i64, wb: i64, wi: i64, wc: i64| {
            let mut w = EdgeWeighting::empty(&tree);
            w.set(a, int(wa));
            w.set(b, int(wb));
            w.set(cherry, int(wi));
            w.set(c, int(wc));
            w
        };
        assert_eq!(
            HeightMap::from_edge_weights(&tree, &weights(1, 2, 2, 3)),
            Err(WeightingError::NotEquidistant(cherry))
        );
        assert_eq!(
            HeightMap::from_edge_weights(&tree, &weights(1, 1, 0, 1)),
            Err(WeightingError::NotProper(cherry))
        );
        assert_eq!(
            HeightMap::from_edge_weights(&tree, &weights(-1, -1, 2, 1)),
            Err(WeightingError::Negative(a))
        );
        let ok = HeightMap::from_edge_weights(&tree, &weights(1, 1, 2, 3)).unwrap();
        assert_eq!(ok.interior_heights(), vec![int(3), int(1)]);
        let mut missing = weights(1, 1, 2, 3);
        missing.weights[c.index()] = None;
        assert_eq!(HeightMap::from_edge_weights(&tree, &missing), Err(WeightingError::MissingWeight(c)));
    }

    #[test]
    fn zero_pendant_weights_are_allowed() {
        let z = hm("((a,b),c)", &[2, 0]);
        assert_eq!(z.leaf_distance("a", "b").unwrap(), int(0));
        assert_eq!(HeightMap::from_edge_weights(z.tree(), &z.to_edge_weights()).unwrap(), z);
    }

    #[test]
    fn heights_must_be_monotone() {
        let bad = HeightMap::from_interior(t("((a,b),c)"), vec![int(1), int(1)]);
        assert!(matches!(bad, Err(WeightingError::NotMonotone(_))));
        let neg = HeightMap::from_interior(t("(a,b)"), vec![int(-1)]);
        assert!(matches!(neg, Err(WeightingError::NegativeHeight(_))));
    }

    #[test]
    fn leaf_distance_examples() {
        let star = hm("(a,b,c)", &[1]);
        for (x, y) in [("a", "b"), ("a", "c"), ("b", "c")] {
            assert_eq!(star.leaf_distance(x, y).unwrap(), int(2));
        }
        let tri = hm("((a,b),c)", &[3, 1]);
        assert_eq!(tri.leaf_distance("a", "b").unwrap(), int(2));
        assert_eq!(tri.leaf_distance("a", "c").unwrap(), int(6));
        assert!(tri.leaf_distance("a", "q").is_err());
    }

    #[test]
    fn l_isometry_examples() {
        let one = hm("(a,b,c)", &[1]);
        let two = hm("(a,b,c)", &[2]);
        let ab = CordSet::from_compact("ab").unwrap();
        assert!(one.is_l_isometric(&one, &ab).unwrap());
        assert!(one.is_l_isometric(&two, &CordSet::new()).unwrap());
        assert!(!one.is_l_isometric(&two, &ab).unwrap());
        let other = hm("((a,b),c)", &[1, 0]);
        assert!(one.is_l_isometric(&other, &CordSet::from_compact("ac bc").unwrap()).unwrap());
        assert!(one.is_l_isometric(&hm("(a,b)", &[1]), &ab).is_err());
    }

    #[test]
    fn random_heights_are_deterministic_and_valid() {
        let tree = t("(((a,b),c),(d,e))");
        assert_eq!(random_proper_heights(&tree, 7), random_proper_heights(&tree, 7));
        let draws: std::collections::BTreeSet<_> =
            (0..10).map(|s| random_proper_heights(&tree, s).interior_heights()).collect();
        assert!(draws.len() >= 2);
        for seed in 0..50 {
            let h = random_proper_heights(&tree, seed);
            assert_eq!(HeightMap::from_edge_weights(&tree, &h.to_edge_weights()).unwrap(), h);
        }
    }
}
