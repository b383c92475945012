//! Cords: unordered pairs of distinct leaves, standing for known distances.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::tree::{LeafLabel, TreeError, XTree};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cord(LeafLabel, LeafLabel);

impl Cord {
    pub fn new(a: LeafLabel, b: LeafLabel) -> Result<Cord, TreeError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Cord(a, b)),
            std::cmp::Ordering::Greater => Ok(Cord(b, a)),
            std::cmp::Ordering::Equal => Err(TreeError::DegenerateCord(a.to_string())),
        }
    }

    pub fn parse(a: &str, b: &str) -> Result<Cord, TreeError> {
        Cord::new(LeafLabel::new(a)?, LeafLabel::new(b)?)
    }

    pub fn first(&self) -> &LeafLabel {
        &self.0
    }

    pub fn second(&self) -> &LeafLabel {
        &self.1
    }

    pub fn contains(&self, label: &LeafLabel) -> bool {
        &self.0 == label || &self.1 == label
    }

    /// The other end of the cord, if `label` is one end.
    pub fn other(&self, label: &LeafLabel) -> Option<&LeafLabel> {
        if &self.0 == label {
            Some(&self.1)
        } else if &self.1 == label {
            Some(&self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Cord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

/// A set of cords, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CordSet {
    cords: BTreeSet<Cord>,
}

impl CordSet {
    pub fn new() -> Self {
        CordSet::default()
    }

    /// Builds from whitespace-separated two-letter-style tokens such as
    /// `"ab bc cd"` where every label is a single character.
    pub fn from_compact(text: &str) -> Result<CordSet, TreeError> {
        let mut set = CordSet::new();
        for token in text.split_whitespace() {
            let chars: Vec<char> = token.chars().collect();
            if chars.len() != 2 {
                return Err(TreeError::InvalidLabel(token.to_string()));
            }
            set.insert(Cord::parse(&chars[0].to_string(), &chars[1].to_string())?);
        }
        Ok(set)
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<CordSet, TreeError> {
        pairs.into_iter().map(|(a, b)| Cord::parse(a, b)).collect()
    }

    /// All cords on the given labels.
    pub fn complete(labels: &[LeafLabel]) -> CordSet {
        let mut set = CordSet::new();
        for (i, a) in labels.iter().enumerate() {
            for b in &labels[i + 1..] {
                if let Ok(c) = Cord::new(a.clone(), b.clone()) {
                    set.insert(c);
                }
            }
        }
        set
    }

    pub fn insert(&mut self, cord: Cord) -> bool {
        self.cords.insert(cord)
    }

    pub fn remove(&mut self, cord: &Cord) -> bool {
        self.cords.remove(cord)
    }

    pub fn contains(&self, cord: &Cord) -> bool {
        self.cords.contains(cord)
    }

    pub fn len(&self) -> usize {
        self.cords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cords.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cord> + '_ {
        self.cords.iter()
    }

    pub fn union(&self, other: &CordSet) -> CordSet {
        CordSet { cords: self.cords.union(&other.cords).cloned().collect() }
    }

    pub fn is_subset(&self, other: &CordSet) -> bool {
        self.cords.is_subset(&other.cords)
    }

    /// Labels touched by at least one cord.
    pub fn support(&self) -> BTreeSet<&LeafLabel> {
        self.cords.iter().flat_map(|c| [&c.0, &c.1]).collect()
    }

    /// Leaf-index pairs `(i, j)` with `i < j` relative to `tree`.
    pub fn resolve(&self, tree: &XTree) -> Result<Vec<(usize, usize)>, TreeError> {
        self.cords
            .iter()
            .map(|c| {
                let a = tree.require_leaf(c.0.as_str())?.index();
                let b = tree.require_leaf(c.1.as_str())?.index();
                Ok((a.min(b), a.max(b)))
            })
            .collect()
    }

    /// Every subset of the complete cord set on `labels`, indexed by bitmask
    /// over the cords in sorted order.
    pub fn all_subsets(labels: &[LeafLabel]) -> Vec<CordSet> {
        let all: Vec<Cord> = CordSet::complete(labels).cords.into_iter().collect();
        assert!(all.len() < 32, "too many cords to enumerate subsets");
        (0u32..1 << all.len())
            .map(|mask| {
                all.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, c)| c.clone())
                    .collect()
            })
            .collect()
    }
}

impl FromIterator<Cord> for CordSet {
    fn from_iter<I: IntoIterator<Item = Cord>>(iter: I) -> Self {
        CordSet { cords: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a CordSet {
    type Item = &'a Cord;
    type IntoIter = std::collections::btree_set::Iter<'a, Cord>;
    fn into_iter(self) -> Self::IntoIter {
        self.cords.iter()
    }
}

impl fmt::Display for CordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.cords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}
