//! Enumeration of all X-trees (and all binary X-trees) on a small leaf set.

use std::collections::HashMap;

use crate::tree::{LeafLabel, Shape, TreeError, XTree};

use super::OracleError;

pub const MAX_ENUMERATION_LEAVES: usize = 6;

fn check_leaf_set(x_set: &[LeafLabel]) -> Result<Vec<LeafLabel>, OracleError> {
    let mut labels = x_set.to_vec();
    labels.sort();
    if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
        return Err(TreeError::DuplicateLabel(w[0].to_string()).into());
    }
    if labels.len() < 2 {
        return Err(TreeError::TooFewLeaves { needed: 2, found: labels.len() }.into());
    }
    if labels.len() > MAX_ENUMERATION_LEAVES {
        return Err(OracleError::TooManyLeaves { max: MAX_ENUMERATION_LEAVES, found: labels.len() });
    }
    Ok(labels)
}

fn finish(shapes: Vec<Shape>) -> Vec<XTree> {
    let mut trees: Vec<XTree> =
        shapes.iter().map(|s| XTree::from_shape(s).expect("enumerated shapes are valid X-trees")).collect();
    trees.sort_by(|a, b| a.canonical_form().cmp(b.canonical_form()));
    trees
}

/// Every X-tree on `x_set` exactly once, sorted by canonical form.
pub fn enumerate_xtrees(x_set: &[LeafLabel]) -> Result<Vec<XTree>, OracleError> {
    let labels = check_leaf_set(x_set)?;
    let full = (1u32 << labels.len()) - 1;
    let mut memo = HashMap::new();
    Ok(finish(shapes_on(full, &labels, &mut memo)))
}

/// All trees whose leaf set is the subset `mask`: the root splits the subset
/// into at least two blocks and each block carries a tree of its own.
fn shapes_on(mask: u32, labels: &[LeafLabel], memo: &mut HashMap<u32, Vec<Shape>>) -> Vec<Shape> {
    if let Some(done) = memo.get(&mask) {
        return done.clone();
    }
    let result = if mask.count_ones() == 1 {
        vec![Shape::Leaf(labels[mask.trailing_zeros() as usize].clone())]
    } else {
        let mut out = Vec::new();
        for blocks in set_partitions(mask) {
            if blocks.len() < 2 {
                continue;
            }
            let options: Vec<Vec<Shape>> = blocks.iter().map(|&b| shapes_on(b, labels, memo)).collect();
            for combo in cartesian(&options) {
                out.push(Shape::Node(combo));
            }
        }
        out
    };
    memo.insert(mask, result.clone());
    result
}

/// Set partitions of the bits of `mask`; the block holding the lowest
/// remaining bit is chosen first, so each partition appears once.
fn set_partitions(mask: u32) -> Vec<Vec<u32>> {
    if mask == 0 {
        return vec![Vec::new()];
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut out = Vec::new();
    let mut sub = rest;
    loop {
        let block = low | sub;
        for mut tail in set_partitions(rest & !sub) {
            tail.insert(0, block);
            out.push(tail);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

fn cartesian(options: &[Vec<Shape>]) -> Vec<Vec<Shape>> {
    let mut acc: Vec<Vec<Shape>> = vec![Vec::new()];
    for choices in options {
        let mut next = Vec::with_capacity(acc.len() * choices.len());
        for prefix in &acc {
            for c in choices {
                let mut v = prefix.clone();
                v.push(c.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// Every binary X-tree, built by inserting leaves one at a time on every
/// edge (including a new edge above the root).
pub fn enumerate_binary_xtrees(x_set: &[LeafLabel]) -> Result<Vec<XTree>, OracleError> {
    let labels = check_leaf_set(x_set)?;
    let mut current = vec![Shape::Node(vec![Shape::Leaf(labels[0].clone()), Shape::Leaf(labels[1].clone())])];
    for label in &labels[2..] {
        current = current.iter().flat_map(|s| insertions(s, label)).collect();
    }
    Ok(finish(current))
}

fn insertions(shape: &Shape, label: &LeafLabel) -> Vec<Shape> {
    let mut out = vec![Shape::Node(vec![shape.clone(), Shape::Leaf(label.clone())])];
    if let Shape::Node(children) = shape {
        for (i, child) in children.iter().enumerate() {
            for replaced in insertions(child, label) {
                let mut kids = children.clone();
                kids[i] = replaced;
                out.push(Shape::Node(kids));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::tests::labels;
    use std::collections::BTreeSet;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = ["ab", "abc", "abcd"].iter().map(|x| enumerate_xtrees(&labels(x)).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 4, 26]);
        let binary: Vec<usize> =
            ["ab", "abc", "abcd"].iter().map(|x| enumerate_binary_xtrees(&labels(x)).unwrap().len()).collect();
        assert_eq!(binary, vec![1, 3, 15]);
    }

    #[test]
    fn sorted_and_distinct() {
        let trees = enumerate_xtrees(&labels("abcd")).unwrap();
        let forms: Vec<&str> = trees.iter().map(|t| t.canonical_form()).collect();
        let mut sorted = forms.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(forms, sorted);
    }

    #[test]
    fn binary_trees_are_the_binary_members() {
        let x = labels("abcde");
        let all: BTreeSet<String> = enumerate_xtrees(&x)
            .unwrap()
            .into_iter()
            .filter(|t| t.is_binary())
            .map(|t| t.canonical_form().to_string())
            .collect();
        let bin: BTreeSet<String> =
            enumerate_binary_xtrees(&x).unwrap().into_iter().map(|t| t.canonical_form().to_string()).collect();
        assert_eq!(all, bin);
    }

    #[test]
    fn guards() {
        assert!(matches!(enumerate_xtrees(&labels("abcdefg")), Err(OracleError::TooManyLeaves { .. })));
        assert!(enumerate_xtrees(&labels("a")).is_err());
        assert!(enumerate_xtrees(&labels("aab")).is_err());
    }
}
