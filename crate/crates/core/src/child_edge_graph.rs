//! The child-edge graph of an interior vertex.
//!
//! For an interior vertex `v`, the nodes are the edges from `v` to its
//! children (identified here by the child vertex). Two child edges are
//! adjacent when some cord `ab` has `lca(a, b) = v` with `a` below one of
//! them and `b` below the other. Child edges leading to a leaf form the
//! leaf part `E_l`, the others the subtree part `E_s`.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::cords::CordSet;
use crate::tree::{TreeError, VertexId, XTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChildEdgeGraph {
    owner: VertexId,
    nodes: Vec<VertexId>,
    leaf_edge: Vec<bool>,
    adjacent: Vec<Vec<bool>>,
}

impl ChildEdgeGraph {
    fn empty(tree: &XTree, owner: VertexId) -> Self {
        let nodes = tree.children(owner).to_vec();
        let k = nodes.len();
        ChildEdgeGraph {
            owner,
            leaf_edge: nodes.iter().map(|&c| tree.is_leaf(c)).collect(),
            nodes,
            adjacent: vec![vec![false; k]; k],
        }
    }

    /// Builds `G(L, v)` for one interior vertex.
    pub fn build(tree: &XTree, cords: &CordSet, v: VertexId) -> Result<Self, TreeError> {
        tree.check_interior(v)?;
        let mut g = Self::empty(tree, v);
        for (a, b) in cords.resolve(tree)? {
            g.add_cord(tree, a, b);
        }
        Ok(g)
    }

    /// Builds the graphs of all interior vertices at once; each cord is
    /// charged to the graph of its LCA only.
    pub fn build_all(tree: &XTree, cords: &CordSet) -> Result<BTreeMap<VertexId, ChildEdgeGraph>, TreeError> {
        let pairs = cords.resolve(tree)?;
        Ok(Self::build_all_resolved(tree, &pairs))
    }

    pub(crate) fn build_all_resolved(tree: &XTree, pairs: &[(usize, usize)]) -> BTreeMap<VertexId, ChildEdgeGraph> {
        let mut graphs: BTreeMap<VertexId, ChildEdgeGraph> =
            tree.interior_vertices().map(|v| (v, Self::empty(tree, v))).collect();
        for &(a, b) in pairs {
            let lca = tree.lca_of(VertexId(a), VertexId(b));
            graphs.get_mut(&lca).expect("lca of two leaves is interior").add_cord(tree, a, b);
        }
        graphs
    }

    fn add_cord(&mut self, tree: &XTree, a: usize, b: usize) {
        let (Some(ca), Some(cb)) = (tree.child_toward(self.owner, VertexId(a)), tree.child_toward(self.owner, VertexId(b)))
        else {
            return;
        };
        if ca == cb {
            return;
        }
        let i = self.position(ca);
        let j = self.position(cb);
        self.adjacent[i][j] = true;
        self.adjacent[j][i] = true;
    }

    fn position(&self, child: VertexId) -> usize {
        self.nodes.iter().position(|&c| c == child).expect("child of owner")
    }

    pub fn owner(&self) -> VertexId {
        self.owner
    }

    /// Child vertices naming the child edges, in the tree's child order.
    pub fn nodes(&self) -> &[VertexId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_edges(&self) -> Vec<VertexId> {
        self.nodes.iter().zip(&self.leaf_edge).filter(|(_, &l)| l).map(|(&c, _)| c).collect()
    }

    pub fn subtree_edges(&self) -> Vec<VertexId> {
        self.nodes.iter().zip(&self.leaf_edge).filter(|(_, &l)| !l).map(|(&c, _)| c).collect()
    }

    pub fn is_adjacent(&self, x: VertexId, y: VertexId) -> bool {
        match (self.nodes.iter().position(|&c| c == x), self.nodes.iter().position(|&c| c == y)) {
            (Some(i), Some(j)) => self.adjacent[i][j],
            _ => false,
        }
    }

    /// Edges as pairs of child vertices.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let k = self.nodes.len();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                if self.adjacent[i][j] {
                    out.push((self.nodes[i], self.nodes[j]));
                }
            }
        }
        out
    }

    pub fn has_edge(&self) -> bool {
        self.adjacent.iter().any(|row| row.iter().any(|&x| x))
    }

    pub fn is_connected(&self) -> bool {
        let k = self.nodes.len();
        if k == 0 {
            return true;
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if self.adjacent[i][j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_clique(&self) -> bool {
        let k = self.nodes.len();
        (0..k).all(|i| (i + 1..k).all(|j| self.adjacent[i][j]))
    }

    /// `E_s` induces a clique and every `E_l`-`E_s` pair is adjacent. Only
    /// defined when `E_s` is nonempty, i.e. away from pseudo-cherry parents.
    pub fn is_rich(&self) -> Result<bool, TreeError> {
        let subtree: Vec<usize> = (0..self.nodes.len()).filter(|&i| !self.leaf_edge[i]).collect();
        if subtree.is_empty() {
            return Err(TreeError::RichnessUndefined(self.owner));
        }
        let leafy: Vec<usize> = (0..self.nodes.len()).filter(|&i| self.leaf_edge[i]).collect();
        let s_clique = subtree.iter().enumerate().all(|(n, &i)| subtree[n + 1..].iter().all(|&j| self.adjacent[i][j]));
        let cross = leafy.iter().all(|&i| subtree.iter().all(|&j| self.adjacent[i][j]));
        Ok(s_clique && cross)
    }

    /// Graphviz rendering; nodes are labelled by the leaves below each child
    /// edge, leaf edges drawn as boxes.
    pub fn to_dot(&self, tree: &XTree) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph G_{} {{", self.owner.index());
        for (i, &c) in self.nodes.iter().enumerate() {
            let leaves: Vec<&str> = tree.cluster(c).iter().map(|&l| tree.labels()[l].as_str()).collect();
            let shape = if self.leaf_edge[i] { "box" } else { "ellipse" };
            let _ = writeln!(out, "  e{} [label=\"{}\", shape={}];", c.index(), leaves.join(" "), shape);
        }
        for (x, y) in self.edges() {
            let _ = writeln!(out, "  e{} -- e{};", x.index(), y.index());
        }
        out.push_str("}\n");
        out
    }

    #[cfg(test)]
    pub(crate) fn from_raw(leaf_edge: Vec<bool>, edges: &[(usize, usize)]) -> Self {
        let k = leaf_edge.len();
        let mut adjacent = vec![vec![false; k]; k];
        for &(i, j) in edges {
            adjacent[i][j] = true;
            adjacent[j][i] = true;
        }
        ChildEdgeGraph { owner: VertexId(usize::MAX), nodes: (0..k).map(VertexId).collect(), leaf_edge, adjacent }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::tests::t;

    fn cords(s: &str) -> CordSet {
        CordSet::from_compact(s).unwrap()
    }

    #[test]
    fn build_examples() {
        let tree = t("((a,b,c),d)");
        let cherry = tree.lca("a", "b").unwrap();
        let leaf = |x: &str| tree.leaf(x).unwrap();
        let g = ChildEdgeGraph::build(&tree, &cords("ab bc"), cherry).unwrap();
        assert_eq!(g.edges(), vec![(leaf("a"), leaf("b")), (leaf("b"), leaf("c"))]);
        assert!(g.is_connected() && !g.is_clique());

        let empty = ChildEdgeGraph::build(&tree, &CordSet::new(), tree.root()).unwrap();
        assert!(!empty.has_edge());

        let ad = cords("ad");
        let at_root = ChildEdgeGraph::build(&tree, &ad, tree.root()).unwrap();
        assert_eq!(at_root.edges(), vec![(cherry, leaf("d"))]);
        assert!(!ChildEdgeGraph::build(&tree, &ad, cherry).unwrap().has_edge());

        assert!(ChildEdgeGraph::build(&tree, &ad, leaf("a")).is_err());
        assert!(ChildEdgeGraph::build(&tree, &cords("az"), tree.root()).is_err());
    }

    #[test]
    fn build_all_matches_single_builds() {
        let tree = t("(((a,b),c),(d,e,f))");
        let l = cords("ab ac ad cf de bf");
        let all = ChildEdgeGraph::build_all(&tree, &l).unwrap();
        assert_eq!(all.len(), tree.interior_count());
        for (v, g) in all {
            assert_eq!(g, ChildEdgeGraph::build(&tree, &l, v).unwrap());
        }
    }

    #[test]
    fn predicates_on_small_graphs() {
        let edgeless = ChildEdgeGraph::from_raw(vec![true, true], &[]);
        assert!(!edgeless.has_edge() && !edgeless.is_connected() && !edgeless.is_clique());
        let path = ChildEdgeGraph::from_raw(vec![true; 3], &[(0, 1), (1, 2)]);
        assert!(path.has_edge() && path.is_connected() && !path.is_clique());
        let triangle = ChildEdgeGraph::from_raw(vec![true; 3], &[(0, 1), (1, 2), (0, 2)]);
        assert!(triangle.has_edge() && triangle.is_connected() && triangle.is_clique());
        let single = ChildEdgeGraph::from_raw(vec![false], &[]);
        assert!(single.is_connected() && single.is_clique());
    }

    #[test]
    fn richness() {
        assert!(ChildEdgeGraph::from_raw(vec![false], &[]).is_rich().unwrap());
        assert!(!ChildEdgeGraph::from_raw(vec![false, false], &[]).is_rich().unwrap());
        // E_l = {0}, E_s = {1, 2}
        let g = ChildEdgeGraph::from_raw(vec![true, false, false], &[(1, 2), (0, 1)]);
        assert!(!g.is_rich().unwrap());
        let g = ChildEdgeGraph::from_raw(vec![true, false, false], &[(1, 2), (0, 1), (0, 2)]);
        assert!(g.is_rich().unwrap());
        // nothing is required between two leaf edges
        let g = ChildEdgeGraph::from_raw(vec![true, true, false], &[(0, 2), (1, 2)]);
        assert!(g.is_rich().unwrap());
        assert!(ChildEdgeGraph::from_raw(vec![true, true], &[(0, 1)]).is_rich().is_err());
    }

    #[test]
    fn dot_export() {
        let tree = t("((a,b),c)");
        let g = ChildEdgeGraph::build(&tree, &cords("ac"), tree.root()).unwrap();
        let dot = g.to_dot(&tree);
        assert!(dot.starts_with("graph G_"));
        assert!(dot.contains("label=\"a b\", shape=ellipse"));
        assert!(dot.contains("label=\"c\", shape=box"));
        assert_eq!(dot.matches(" -- ").count(), 1);
    }
}
