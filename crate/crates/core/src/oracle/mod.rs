//! Definition-level lasso checks.
//!
//! Instead of child-edge graphs, these checks quantify over weightings and
//! rival trees directly: two height maps that agree on every cord are
//! searched for with an exact strict-feasibility LP, and rival trees come
//! from exhaustive enumeration of the X-trees on the leaf set.

pub mod enumerate;
pub mod lp;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cords::CordSet;
use crate::lasso::LassoKind;
use crate::rational::Rational;
use crate::tree::{LeafLabel, TreeError, XTree};
use crate::weighting::{HeightMap, WeightingError};

pub use enumerate::{enumerate_binary_xtrees, enumerate_xtrees, MAX_ENUMERATION_LEAVES};
pub use lp::{LinearConstraint, StrictLinearSystem};

/// Largest leaf set on which rival enumeration is run exhaustively.
pub const MAX_EXHAUSTIVE_LEAVES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Weighting(#[from] WeightingError),
    #[error("{found} leaves exceed the limit of {max} for this check")]
    TooManyLeaves { max: usize, found: usize },
}

/// Interior-vertex data of one tree, laid out for fast system assembly.
#[derive(Debug, Clone)]
struct Prepared {
    tree: XTree,
    n: usize,
    /// Interior index (vertex id minus leaf count) of each leaf pair's LCA.
    lca: Vec<usize>,
    /// Interior parent/child pairs, as interior indices.
    edges: Vec<(usize, usize)>,
    /// Outlier of each leaf triple `a < b < c` in lexicographic order.
    outliers: Vec<Option<usize>>,
}

impl Prepared {
    fn new(tree: XTree) -> Prepared {
        let n = tree.leaf_count();
        let mut lca = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    lca[a * n + b] = tree.lca_of(leaf_vertex(&tree, a), leaf_vertex(&tree, b)).index() - n;
                }
            }
        }
        let edges = tree
            .interior_vertices()
            .filter_map(|v| tree.parent(v).map(|p| (p.index() - n, v.index() - n)))
            .collect();
        let mut outliers = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    outliers.push(tree.triplet_outlier([a, b, c]));
                }
            }
        }
        Prepared { tree, n, lca, edges, outliers }
    }

    fn interior(&self) -> usize {
        self.tree.interior_count()
    }

    fn lca(&self, a: usize, b: usize) -> usize {
        self.lca[a * self.n + b]
    }

    /// Whether `self` displays every triplet of `coarser`.
    fn refines(&self, coarser: &Prepared) -> bool {
        self.outliers.iter().zip(&coarser.outliers).all(|(mine, theirs)| theirs.is_none() || mine == theirs)
    }

    fn equivalent(&self, other: &Prepared) -> bool {
        self.tree.canonical_form() == other.tree.canonical_form()
    }
}

fn leaf_vertex(tree: &XTree, index: usize) -> crate::tree::VertexId {
    tree.leaf(tree.labels()[index].as_str()).expect("leaf index in range")
}

/// Heights of `first` are variables `0..k1`, heights of `second` follow.
/// Both are nonnegative and strictly decrease along interior edges; every
/// cord ties the heights of its two LCAs.
fn paired_system(first: &Prepared, second: &Prepared, pairs: &[(usize, usize)]) -> StrictLinearSystem {
    let k1 = first.interior();
    let mut sys = StrictLinearSystem::new(k1 + second.interior());
    for v in 0..sys.num_vars() {
        sys.set_nonneg(v);
    }
    for &(p, c) in &first.edges {
        sys.add_greater(p, c);
    }
    for &(p, c) in &second.edges {
        sys.add_greater(k1 + p, k1 + c);
    }
    let ties: BTreeSet<(usize, usize)> = pairs.iter().map(|&(a, b)| (first.lca(a, b), second.lca(a, b))).collect();
    for (u, w) in ties {
        sys.add_equal(u, k1 + w);
    }
    sys
}

/// The system whose strictly feasible points are pairs of proper
/// equidistant height maps on `tree` and `rival` that agree on every cord.
pub fn joint_isometry_system(tree: &XTree, rival: &XTree, cords: &CordSet) -> Result<StrictLinearSystem, TreeError> {
    if tree.labels() != rival.labels() {
        return Err(TreeError::LeafSetMismatch);
    }
    let pairs = cords.resolve(tree)?;
    Ok(paired_system(&Prepared::new(tree.clone()), &Prepared::new(rival.clone()), &pairs))
}

/// Two cord-isometric weightings that violate the lasso property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: LassoKind,
    #[serde(serialize_with = "serialize_tree")]
    pub rival: XTree,
    #[serde(serialize_with = "serialize_heights")]
    pub heights_tree: HeightMap,
    #[serde(serialize_with = "serialize_heights")]
    pub heights_rival: HeightMap,
}

fn serialize_tree<S: serde::Serializer>(t: &XTree, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

fn serialize_heights<S: serde::Serializer>(h: &HeightMap, s: S) -> Result<S::Ok, S::Error> {
    let heights: Vec<String> = h.interior_heights().iter().map(crate::rational::format_rational).collect();
    s.collect_seq(heights)
}

impl Witness {
    /// Re-checks the witness exactly: both height maps are valid, they agree
    /// on every cord, and the claimed violation holds.
    pub fn verify(&self, tree: &XTree, cords: &CordSet) -> bool {
        let base_ok = self.heights_tree.tree().is_equivalent(tree).unwrap_or(false)
            && self.heights_rival.tree().is_equivalent(&self.rival).unwrap_or(false)
            && HeightMap::from_interior(tree.clone(), self.heights_tree.interior_heights()).is_ok()
            && HeightMap::from_interior(self.rival.clone(), self.heights_rival.interior_heights()).is_ok()
            && self.heights_tree.is_l_isometric(&self.heights_rival, cords).unwrap_or(false);
        if !base_ok {
            return false;
        }
        match self.kind {
            LassoKind::Equidistant => {
                self.rival.is_equivalent(tree).unwrap_or(false)
                    && self.heights_tree.interior_heights() != self.heights_rival.interior_heights()
            }
            LassoKind::Weak => !self.rival.refines(tree).unwrap_or(true),
            LassoKind::Topological => !self.rival.is_equivalent(tree).unwrap_or(true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    /// False when rivals were sampled rather than enumerated; a verdict that
    /// holds then only means no counterexample was found.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub equidistant: OracleVerdict,
    pub weak: OracleVerdict,
    pub topological: OracleVerdict,
    pub strong: bool,
}

impl OracleReport {
    pub fn get(&self, kind: LassoKind) -> &OracleVerdict {
        match kind {
            LassoKind::Equidistant => &self.equidistant,
            LassoKind::Weak => &self.weak,
            LassoKind::Topological => &self.topological,
        }
    }
}

/// Rival trees for one leaf set, prepared once and reused across queries.
#[derive(Debug, Clone)]
pub struct Oracle {
    labels: Vec<LeafLabel>,
    rivals: Vec<Prepared>,
    exhaustive: bool,
}

fn split_point(point: &[Rational], k: usize) -> (Vec<Rational>, Vec<Rational>) {
    (point[..k].to_vec(), point[k..].to_vec())
}

impl Oracle {
    /// Enumerates every X-tree on `x_set` as a rival.
    pub fn new(x_set: &[LeafLabel]) -> Result<Oracle, OracleError> {
        if x_set.len() > MAX_EXHAUSTIVE_LEAVES {
            return Err(OracleError::TooManyLeaves { max: MAX_EXHAUSTIVE_LEAVES, found: x_set.len() });
        }
        Self::from_rivals(x_set, enumerate_xtrees(x_set)?, true)
    }

    /// Uses `count` rivals drawn from the full enumeration; verdicts that
    /// the lasso property holds are then not conclusive.
    pub fn sampled(x_set: &[LeafLabel], count: usize, seed: u64) -> Result<Oracle, OracleError> {
        let all = enumerate_xtrees(x_set)?;
        if count >= all.len() {
            return Self::from_rivals(x_set, all, true);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked: Vec<XTree> = all.choose_multiple(&mut rng, count).cloned().collect();
        picked.sort_by(|a, b| a.canonical_form().cmp(b.canonical_form()));
        Self::from_rivals(x_set, picked, false)
    }

    fn from_rivals(x_set: &[LeafLabel], rivals: Vec<XTree>, exhaustive: bool) -> Result<Oracle, OracleError> {
        if x_set.len() < 3 {
            return Err(TreeError::TooFewLeaves { needed: 3, found: x_set.len() }.into());
        }
        let mut labels = x_set.to_vec();
        labels.sort();
        Ok(Oracle { labels, rivals: rivals.into_iter().map(Prepared::new).collect(), exhaustive })
    }

    pub fn labels(&self) -> &[LeafLabel] {
        &self.labels
    }

    pub fn rival_count(&self) -> usize {
        self.rivals.len()
    }

    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }

    fn prepare(&self, tree: &XTree, cords: &CordSet) -> Result<(Prepared, Vec<(usize, usize)>), OracleError> {
        if tree.labels() != self.labels.as_slice() {
            return Err(TreeError::LeafSetMismatch.into());
        }
        let pairs = cords.resolve(tree)?;
        Ok((Prepared::new(tree.clone()), pairs))
    }

    /// Searches, vertex by vertex, for two cord-isometric height maps on
    /// `tree` that differ at that vertex.
    pub fn equidistant(&self, tree: &XTree, cords: &CordSet) -> Result<OracleVerdict, OracleError> {
        let (prepared, pairs) = self.prepare(tree, cords)?;
        Ok(equidistant_verdict(&prepared, &pairs))
    }

    pub fn weak(&self, tree: &XTree, cords: &CordSet) -> Result<OracleVerdict, OracleError> {
        Ok(self.check(tree, cords)?.weak)
    }

    pub fn topological(&self, tree: &XTree, cords: &CordSet) -> Result<OracleVerdict, OracleError> {
        let (prepared, pairs) = self.prepare(tree, cords)?;
        let found = self.first_feasible(&prepared, &pairs, 0, |r| !r.equivalent(&prepared));
        Ok(self.verdict(&prepared, found, LassoKind::Topological))
    }

    /// All three verdicts. The weak and topological checks share one scan
    /// over the rivals: the first feasible non-equivalent rival is the
    /// topological witness, and the weak witness is the first feasible
    /// rival that does not refine the tree.
    pub fn check(&self, tree: &XTree, cords: &CordSet) -> Result<OracleReport, OracleError> {
        let (prepared, pairs) = self.prepare(tree, cords)?;
        let equidistant = equidistant_verdict(&prepared, &pairs);
        let topo_found = self.first_feasible(&prepared, &pairs, 0, |r| !r.equivalent(&prepared));
        let weak_found = match &topo_found {
            None => None,
            Some((i, point)) if !self.rivals[*i].refines(&prepared) => Some((*i, point.clone())),
            Some((i, _)) => self.first_feasible(&prepared, &pairs, i + 1, |r| !r.refines(&prepared)),
        };
        let topological = self.verdict(&prepared, topo_found, LassoKind::Topological);
        let weak = self.verdict(&prepared, weak_found, LassoKind::Weak);
        let strong = equidistant.holds && topological.holds;
        Ok(OracleReport { equidistant, weak, topological, strong })
    }

    /// The lowest-index rival from `start` on that passes `relevant` and
    /// admits a strictly feasible joint system. Parallel, but the result
    /// does not depend on scheduling.
    fn first_feasible<F>(
        &self,
        tree: &Prepared,
        pairs: &[(usize, usize)],
        start: usize,
        relevant: F,
    ) -> Option<(usize, Vec<Rational>)>
    where
        F: Fn(&Prepared) -> bool + Sync,
    {
        self.rivals[start.min(self.rivals.len())..]
            .par_iter()
            .enumerate()
            .filter(|(_, r)| relevant(r))
            .find_map_first(|(i, r)| paired_system(tree, r, pairs).strict_feasible().map(|p| (start + i, p)))
    }

    fn verdict(&self, tree: &Prepared, found: Option<(usize, Vec<Rational>)>, kind: LassoKind) -> OracleVerdict {
        let witness = found.map(|(i, point)| {
            let (ht, hr) = split_point(&point, tree.interior());
            let rival = self.rivals[i].tree.clone();
            Witness {
                kind,
                heights_tree: HeightMap::from_interior(tree.tree.clone(), ht).expect("feasible point is proper"),
                heights_rival: HeightMap::from_interior(rival.clone(), hr).expect("feasible point is proper"),
                rival,
            }
        });
        OracleVerdict { holds: witness.is_none(), witness, exhaustive: self.exhaustive }
    }
}

fn equidistant_verdict(tree: &Prepared, pairs: &[(usize, usize)]) -> OracleVerdict {
    let k = tree.interior();
    let witness = (0..k).find_map(|v| {
        let mut sys = paired_system(tree, tree, pairs);
        sys.add_greater(v, k + v);
        sys.strict_feasible()
    });
    let witness = witness.map(|point| {
        let (h1, h2) = split_point(&point, k);
        Witness {
            kind: LassoKind::Equidistant,
            rival: tree.tree.clone(),
            heights_tree: HeightMap::from_interior(tree.tree.clone(), h1).expect("feasible point is proper"),
            heights_rival: HeightMap::from_interior(tree.tree.clone(), h2).expect("feasible point is proper"),
        }
    });
    OracleVerdict { holds: witness.is_none(), witness, exhaustive: true }
}

fn exhaustive_oracle(tree: &XTree) -> Result<Oracle, OracleError> {
    Oracle::new(tree.labels())
}

pub fn oracle_equidistant(tree: &XTree, cords: &CordSet) -> Result<(bool, Option<Witness>), OracleError> {
    if tree.leaf_count() < 3 {
        return Err(TreeError::TooFewLeaves { needed: 3, found: tree.leaf_count() }.into());
    }
    let pairs = cords.resolve(tree)?;
    let v = equidistant_verdict(&Prepared::new(tree.clone()), &pairs);
    Ok((v.holds, v.witness))
}

pub fn oracle_weak(tree: &XTree, cords: &CordSet) -> Result<(bool, Option<Witness>), OracleError> {
    let v = exhaustive_oracle(tree)?.weak(tree, cords)?;
    Ok((v.holds, v.witness))
}

pub fn oracle_topological(tree: &XTree, cords: &CordSet) -> Result<(bool, Option<Witness>), OracleError> {
    let v = exhaustive_oracle(tree)?.topological(tree, cords)?;
    Ok((v.holds, v.witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::tests::{labels, t};

    fn cords(s: &str) -> CordSet {
        CordSet::from_compact(s).unwrap()
    }

    #[test]
    fn joint_system_examples() {
        let triplet = t("((a,b),c)");
        let star = t("(a,b,c)");
        assert!(joint_isometry_system(&triplet, &star, &cords("ab ac bc")).unwrap().strict_feasible().is_none());
        assert!(joint_isometry_system(&triplet, &star, &cords("ab")).unwrap().strict_feasible().is_some());
        for l in ["", "ab", "ab ac bc"] {
            assert!(joint_isometry_system(&triplet, &triplet, &cords(l)).unwrap().strict_feasible().is_some());
        }
        assert!(joint_isometry_system(&triplet, &t("((a,b),d)"), &CordSet::new()).is_err());
    }

    #[test]
    fn equidistant_examples() {
        let (holds, w) = oracle_equidistant(&t("(a,b,c)"), &cords("ab")).unwrap();
        assert!(holds && w.is_none());
        let tree = t("(((a,b),c),d)");
        let (holds, w) = oracle_equidistant(&tree, &CordSet::new()).unwrap();
        assert!(!holds);
        assert!(w.unwrap().verify(&tree, &CordSet::new()));
        assert!(oracle_equidistant(&tree, &cords("ab ac ad")).unwrap().0);
        let (holds, w) = oracle_equidistant(&tree, &cords("ab ac")).unwrap();
        assert!(!holds && w.unwrap().verify(&tree, &cords("ab ac")));
    }

    #[test]
    fn weak_examples() {
        for l in ["", "ab", "ab cd"] {
            assert!(oracle_weak(&t("(a,b,c,d)"), &cords(l)).unwrap().0);
        }
        let tree = t("((a,b,c),d)");
        let l = cords("ab ad");
        let (holds, w) = oracle_weak(&tree, &l).unwrap();
        let w = w.unwrap();
        assert!(!holds && w.verify(&tree, &l));
        assert!(!w.rival.refines(&tree).unwrap());
        assert!(oracle_weak(&tree, &cords("ab bc ad")).unwrap().0);
    }

    #[test]
    fn topological_examples() {
        let star = t("(a,b,c)");
        let l = cords("ab ac");
        let (holds, w) = oracle_topological(&star, &l).unwrap();
        let w = w.unwrap();
        assert!(!holds && w.verify(&star, &l));
        assert_eq!(w.rival.interior_count(), 2);
        assert!(oracle_topological(&t("(((a,b),c),d)"), &cords("ab ac ad")).unwrap().0);
        assert!(!oracle_topological(&t("(((a,b),c),d)"), &CordSet::new()).unwrap().0);
    }

    #[test]
    fn shared_scan_matches_separate_checks() {
        let oracle = Oracle::new(&labels("abcd")).unwrap();
        for tree in enumerate_xtrees(&labels("abcd")).unwrap().iter().step_by(5) {
            for l in CordSet::all_subsets(&labels("abcd")).iter().step_by(7) {
                let report = oracle.check(tree, l).unwrap();
                assert_eq!(report.weak, oracle.weak(tree, l).unwrap());
                assert_eq!(report.topological, oracle.topological(tree, l).unwrap());
                assert_eq!(report.equidistant, oracle.equidistant(tree, l).unwrap());
                for kind in LassoKind::ALL {
                    if let Some(w) = &report.get(kind).witness {
                        assert!(w.verify(tree, l), "{kind} witness for {tree} with {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_are_canonical_first() {
        let tree = t("((a,b,c),d)");
        let l = cords("ab ad");
        let oracle = Oracle::new(tree.labels()).unwrap();
        let w = oracle.weak(&tree, &l).unwrap().witness.unwrap();
        let first = enumerate_xtrees(tree.labels())
            .unwrap()
            .into_iter()
            .find(|r| {
                !r.refines(&tree).unwrap() && joint_isometry_system(&tree, r, &l).unwrap().strict_feasible().is_some()
            })
            .unwrap();
        assert_eq!(w.rival, first);
    }

    #[test]
    fn size_guards() {
        let big = t("(a,b,c,d,e,f)");
        assert!(matches!(oracle_weak(&big, &CordSet::new()), Err(OracleError::TooManyLeaves { .. })));
        let sampled = Oracle::sampled(big.labels(), 40, 1).unwrap();
        assert!(!sampled.is_exhaustive());
        assert_eq!(sampled.rival_count(), 40);
        let v = sampled.weak(&big, &CordSet::new()).unwrap();
        assert!(v.holds && !v.exhaustive);
        let v = sampled.topological(&big, &CordSet::new()).unwrap();
        assert!(!v.holds && v.witness.unwrap().verify(&big, &CordSet::new()));
    }
}
