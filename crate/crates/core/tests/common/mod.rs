#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lassotree::io::parse_newick;
use lassotree::{CordSet, LeafLabel, Shape, XTree};

pub fn tree(newick: &str) -> XTree {
    let text = if newick.ends_with(';') { newick.to_string() } else { format!("{newick};") };
    parse_newick(&text).unwrap().tree
}

pub fn labels(n: usize) -> Vec<LeafLabel> {
    (0..n).map(|i| LeafLabel::new(format!("{}", (b'a' + i as u8) as char)).unwrap()).collect()
}

pub fn cords(compact: &str) -> CordSet {
    CordSet::from_compact(compact).unwrap()
}

fn count_nodes(shape: &Shape) -> usize {
    match shape {
        Shape::Leaf(_) => 1,
        Shape::Node(kids) => 1 + kids.iter().map(count_nodes).sum::<usize>(),
    }
}

/// Inserts `leaf` at the `target`-th node in pre-order, either as a new
/// sibling under a fresh parent or, for interior nodes when `as_child`, as an
/// extra child.
fn insert(shape: &mut Shape, target: &mut usize, leaf: &LeafLabel, as_child: bool) -> bool {
    if *target == 0 {
        match shape {
            Shape::Node(kids) if as_child => kids.push(Shape::Leaf(leaf.clone())),
            _ => {
                let old = std::mem::replace(shape, Shape::Node(Vec::new()));
                *shape = Shape::Node(vec![old, Shape::Leaf(leaf.clone())]);
            }
        }
        return true;
    }
    *target -= 1;
    if let Shape::Node(kids) = shape {
        for k in kids {
            if insert(k, target, leaf, as_child) {
                return true;
            }
        }
    }
    false
}

/// A seeded random X-tree on the first `n` letters (`n >= 2`).
pub fn random_tree(n: usize, seed: u64) -> XTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = labels(n);
    let mut shape = Shape::Node(vec![Shape::Leaf(x[0].clone()), Shape::Leaf(x[1].clone())]);
    for leaf in &x[2..] {
        let mut target = rng.gen_range(0..count_nodes(&shape));
        insert(&mut shape, &mut target, leaf, rng.gen_bool(0.5));
    }
    XTree::from_shape(&shape).unwrap()
}
