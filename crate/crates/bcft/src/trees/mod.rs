//! Labeled binary trees, the magma operad, and its 2-colored extension.
//!
//! A [`Tree`] with `r` leaves carries the labels `1..=r` exactly once each.
//! Composition `A ∘_p B` grafts `B` onto the leaf labeled `p` and relabels
//! so that the result again uses `1..=n+m-1`.
//!
//! ```
//! use bcft::trees::{parse_tree, format_tree};
//!
//! let a = parse_tree("3((12)4)").unwrap();
//! let b = parse_tree("2(13)").unwrap();
//! assert_eq!(format_tree(&a.compose(2, &b).unwrap()), "5((1(3(24)))6)");
//! ```

mod colored;
mod parse;

pub use colored::{all_closed, all_open_trees, Color, ColoredTree, DoubledLabel};
pub use parse::{format_tree, parse_any, parse_colored, parse_tree, ParsedTree};

use std::collections::BTreeSet;

use thiserror::Error;

/// Errors raised by tree construction, parsing and composition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("labels must be exactly 1..={expected}, found {found:?}")]
    Labels { expected: usize, found: Vec<u32> },
    #[error("open labels must increase from left to right: {0:?}")]
    OpenOrder(Vec<u32>),
    #[error("color mismatch: {0}")]
    Color(String),
    #[error("leaf {p} out of range 1..={n}")]
    Slot { p: u32, n: usize },
    #[error("cannot compose into the empty tree")]
    EmptyHost,
    #[error("permutation of size {got} does not act on {expected} labels")]
    PermSize { expected: usize, got: usize },
    #[error("not a permutation: {0:?}")]
    NotPermutation(Vec<u32>),
}

/// A labeled binary tree, or the empty tree `∅`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Empty,
    Leaf(u32),
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn leaf(label: u32) -> Tree {
        Tree::Leaf(label)
    }

    pub fn node(left: Tree, right: Tree) -> Tree {
        Tree::Node(Box::new(left), Box::new(right))
    }

    /// Number of leaves.
    pub fn size(&self) -> usize {
        match self {
            Tree::Empty => 0,
            Tree::Leaf(_) => 1,
            Tree::Node(l, r) => l.size() + r.size(),
        }
    }

    /// Leaf labels from left to right.
    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.size());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            Tree::Empty => {}
            Tree::Leaf(i) => out.push(*i),
            Tree::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// Checks that the labels are exactly `1..=r`.
    pub fn validate(&self) -> Result<(), TreeError> {
        check_labels(&self.leaves(), 1)
    }

    /// The unlabeled shape: every label replaced by `0`.
    pub fn shape(&self) -> Tree {
        self.map_labels(&|_| 0)
    }

    pub fn map_labels(&self, f: &dyn Fn(u32) -> u32) -> Tree {
        match self {
            Tree::Empty => Tree::Empty,
            Tree::Leaf(i) => Tree::Leaf(f(*i)),
            Tree::Node(l, r) => Tree::node(l.map_labels(f), r.map_labels(f)),
        }
    }

    /// Replaces each label `i` by `g[i-1]`.
    pub fn permute(&self, g: &[u32]) -> Result<Tree, TreeError> {
        if g.len() != self.size() {
            return Err(TreeError::PermSize { expected: self.size(), got: g.len() });
        }
        check_labels(g, 1).map_err(|_| TreeError::NotPermutation(g.to_vec()))?;
        Ok(self.map_labels(&|i| g[i as usize - 1]))
    }

    /// Partial composition `self ∘_p b`.
    ///
    /// Labels of `b` are shifted by `p-1` and labels of `self` above `p` by
    /// `m-1`. Composing with [`Tree::Empty`] erases leaf `p` and decrements
    /// the labels above it.
    pub fn compose(&self, p: u32, b: &Tree) -> Result<Tree, TreeError> {
        let n = self.size();
        if n == 0 {
            return Err(TreeError::EmptyHost);
        }
        if p == 0 || p as usize > n {
            return Err(TreeError::Slot { p, n });
        }
        let m = b.size() as u32;
        let shifted = b.map_labels(&|j| j + p - 1);
        Ok(graft(self, p, m, &shifted).unwrap_or(Tree::Empty))
    }

    /// Structural equality with the labels forgotten.
    pub fn same_shape(&self, other: &Tree) -> bool {
        self.shape() == other.shape()
    }
}

fn graft(a: &Tree, p: u32, m: u32, b: &Tree) -> Option<Tree> {
    match a {
        Tree::Empty => None,
        Tree::Leaf(i) if *i == p => match b {
            Tree::Empty => None,
            _ => Some(b.clone()),
        },
        Tree::Leaf(i) if *i > p => Some(Tree::Leaf(i + m - 1)),
        Tree::Leaf(i) => Some(Tree::Leaf(*i)),
        Tree::Node(l, r) => match (graft(l, p, m, b), graft(r, p, m, b)) {
            (Some(l), Some(r)) => Some(Tree::node(l, r)),
            (Some(x), None) | (None, Some(x)) => Some(x),
            (None, None) => None,
        },
    }
}

pub(crate) fn check_labels(labels: &[u32], start: u32) -> Result<(), TreeError> {
    let set: BTreeSet<u32> = labels.iter().copied().collect();
    let expected: BTreeSet<u32> = (start..start + labels.len() as u32).collect();
    if set.len() != labels.len() || set != expected {
        let mut found = labels.to_vec();
        found.sort_unstable();
        return Err(TreeError::Labels { expected: labels.len(), found });
    }
    Ok(())
}

/// All unlabeled binary tree shapes with `r ≥ 1` leaves (labels are `0`).
pub fn all_shapes(r: usize) -> Vec<Tree> {
    if r == 0 {
        return vec![Tree::Empty];
    }
    if r == 1 {
        return vec![Tree::Leaf(0)];
    }
    let mut out = Vec::new();
    for k in 1..r {
        for l in all_shapes(k) {
            for rt in all_shapes(r - k) {
                out.push(Tree::node(l.clone(), rt));
            }
        }
    }
    out
}

/// Every element of `𝒯_r`: all shapes with all labelings by `1..=r`.
pub fn all_trees(r: usize) -> Vec<Tree> {
    if r == 0 {
        return vec![Tree::Empty];
    }
    let labels: Vec<u32> = (1..=r as u32).collect();
    let mut out = Vec::new();
    for shape in all_shapes(r) {
        for perm in permutations(&labels) {
            let mut it = perm.into_iter();
            out.push(fill(&shape, &mut it));
        }
    }
    out
}

/// Fills the leaves of `shape` from left to right with the given labels.
pub fn fill(shape: &Tree, labels: &mut impl Iterator<Item = u32>) -> Tree {
    match shape {
        Tree::Empty => Tree::Empty,
        Tree::Leaf(_) => Tree::Leaf(labels.next().expect("enough labels")),
        Tree::Node(l, r) => {
            let l = fill(l, labels);
            let r = fill(r, labels);
            Tree::node(l, r)
        }
    }
}

/// All orderings of `items`, in lexicographic order of positions.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// A uniformly random labeling of a random shape with `r` leaves.
pub fn random_tree<R: rand::Rng + ?Sized>(rng: &mut R, r: usize) -> Tree {
    use rand::seq::SliceRandom;
    if r == 0 {
        return Tree::Empty;
    }
    let shape = random_shape(rng, r);
    let mut labels: Vec<u32> = (1..=r as u32).collect();
    labels.shuffle(rng);
    fill(&shape, &mut labels.into_iter())
}

fn random_shape<R: rand::Rng + ?Sized>(rng: &mut R, r: usize) -> Tree {
    if r == 1 {
        return Tree::Leaf(0);
    }
    let k = rng.random_range(1..r);
    Tree::node(random_shape(rng, k), random_shape(rng, r - k))
}
