//! Two-colored trees: closed leaves `cK`, open leaves `oK`, and the unary
//! color change `t(...)`.

use std::fmt;

use super::parse::colored_root;
use super::{check_labels, Tree, TreeError};

/// Output color of a colored tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Closed,
    Open,
}

/// A tree in `𝒯^c(r)` or `𝒯^o(r, s)`.
///
/// Closed labels are `1..=r`, open labels are `r+1..=r+s` and increase from
/// left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColoredTree {
    Closed(u32),
    Open(u32),
    Node(Box<ColoredTree>, Box<ColoredTree>),
    Tau(Box<ColoredTree>),
}

/// Meaning of a label of the doubled tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DoubledLabel {
    /// The bulk point `z_k`.
    Z(u32),
    /// Its mirror image `z̄_k`.
    ZBar(u32),
    /// The boundary point carrying open label `k`.
    X(u32),
}

impl DoubledLabel {
    /// Decodes a doubled label under the convention `k ↦ 2k-1, k̄ ↦ 2k, r+j ↦ 2r+j`.
    pub fn decode(label: u32, r: u32) -> DoubledLabel {
        if label <= 2 * r {
            if label % 2 == 1 {
                DoubledLabel::Z(label.div_ceil(2))
            } else {
                DoubledLabel::ZBar(label / 2)
            }
        } else {
            DoubledLabel::X(label - r)
        }
    }

    pub fn encode(self, r: u32) -> u32 {
        match self {
            DoubledLabel::Z(k) => 2 * k - 1,
            DoubledLabel::ZBar(k) => 2 * k,
            DoubledLabel::X(k) => k + r,
        }
    }

    /// Swaps `z_k` and `z̄_k`.
    pub fn conjugate(self) -> DoubledLabel {
        match self {
            DoubledLabel::Z(k) => DoubledLabel::ZBar(k),
            DoubledLabel::ZBar(k) => DoubledLabel::Z(k),
            x => x,
        }
    }
}

impl fmt::Display for DoubledLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DoubledLabel::Z(k) => write!(f, "z{k}"),
            DoubledLabel::ZBar(k) => write!(f, "zb{k}"),
            DoubledLabel::X(k) => write!(f, "x{k}"),
        }
    }
}

impl fmt::Display for ColoredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&colored_root(self))
    }
}

impl ColoredTree {
    pub fn node(l: ColoredTree, r: ColoredTree) -> ColoredTree {
        ColoredTree::Node(Box::new(l), Box::new(r))
    }

    pub fn tau(c: ColoredTree) -> ColoredTree {
        ColoredTree::Tau(Box::new(c))
    }

    /// Canonical text, as accepted by [`super::parse_colored`].
    pub fn format(&self) -> String {
        colored_root(self)
    }

    /// `(r, s)`: the number of closed and open leaves.
    pub fn rs(&self) -> (usize, usize) {
        match self {
            ColoredTree::Closed(_) => (1, 0),
            ColoredTree::Open(_) => (0, 1),
            ColoredTree::Tau(c) => c.rs(),
            ColoredTree::Node(l, r) => {
                let (a, b) = l.rs();
                let (c, d) = r.rs();
                (a + c, b + d)
            }
        }
    }

    /// Closed and open labels, each in left-to-right order.
    pub fn labels(&self) -> (Vec<u32>, Vec<u32>) {
        let mut closed = Vec::new();
        let mut open = Vec::new();
        self.collect(&mut closed, &mut open);
        (closed, open)
    }

    fn collect(&self, closed: &mut Vec<u32>, open: &mut Vec<u32>) {
        match self {
            ColoredTree::Closed(i) => closed.push(*i),
            ColoredTree::Open(i) => open.push(*i),
            ColoredTree::Tau(c) => c.collect(closed, open),
            ColoredTree::Node(l, r) => {
                l.collect(closed, open);
                r.collect(closed, open);
            }
        }
    }

    /// Output color, or an error if the coloring rules are violated.
    pub fn color(&self) -> Result<Color, TreeError> {
        match self {
            ColoredTree::Closed(_) => Ok(Color::Closed),
            ColoredTree::Open(_) => Ok(Color::Open),
            ColoredTree::Tau(c) => match c.color()? {
                Color::Closed => Ok(Color::Open),
                Color::Open => Err(TreeError::Color(format!("t(...) applied to open tree {c}"))),
            },
            ColoredTree::Node(l, r) => {
                let (a, b) = (l.color()?, r.color()?);
                if a != b {
                    return Err(TreeError::Color(format!("children {l} and {r} have different colors")));
                }
                Ok(a)
            }
        }
    }

    /// Checks colors, the label sets, and the left-to-right order of open labels.
    pub fn validate(&self) -> Result<(), TreeError> {
        self.color()?;
        let (closed, open) = self.labels();
        check_labels(&closed, 1)?;
        check_labels(&open, closed.len() as u32 + 1)?;
        if open.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TreeError::OpenOrder(open));
        }
        Ok(())
    }

    fn map(&self, closed: &dyn Fn(u32) -> u32, open: &dyn Fn(u32) -> u32) -> ColoredTree {
        match self {
            ColoredTree::Closed(i) => ColoredTree::Closed(closed(*i)),
            ColoredTree::Open(i) => ColoredTree::Open(open(*i)),
            ColoredTree::Tau(c) => ColoredTree::tau(c.map(closed, open)),
            ColoredTree::Node(l, r) => ColoredTree::node(l.map(closed, open), r.map(closed, open)),
        }
    }

    fn replace_leaf(&self, label: u32, is_open: bool, with: &ColoredTree) -> ColoredTree {
        match self {
            ColoredTree::Closed(i) if !is_open && *i == label => with.clone(),
            ColoredTree::Open(i) if is_open && *i == label => with.clone(),
            ColoredTree::Closed(_) | ColoredTree::Open(_) => self.clone(),
            ColoredTree::Tau(c) => ColoredTree::tau(c.replace_leaf(label, is_open, with)),
            ColoredTree::Node(l, r) => {
                ColoredTree::node(l.replace_leaf(label, is_open, with), r.replace_leaf(label, is_open, with))
            }
        }
    }

    /// Colored partial composition `self ∘_p x`, with `p` a leaf label.
    ///
    /// * `p` closed, `x` closed-colored with `t` leaves: labels of `x` shift by
    ///   `p-1`; closed labels above `p` and all open labels shift by `t-1`.
    /// * `p` open, `x` open-colored in `𝒯^o(t, u)`: closed labels of `x`
    ///   follow those of `self`; the open labels of `x` take the place of `p`.
    pub fn compose(&self, p: u32, x: &ColoredTree) -> Result<ColoredTree, TreeError> {
        self.validate()?;
        x.validate()?;
        let (r, s) = self.rs();
        let (t, u) = x.rs();
        let (r32, t32, u32_) = (r as u32, t as u32, u as u32);
        if p == 0 || p as usize > r + s {
            return Err(TreeError::Slot { p, n: r + s });
        }
        if p <= r32 {
            if x.color()? != Color::Closed {
                return Err(TreeError::Color(format!("closed leaf {p} needs a closed-colored argument, got {x}")));
            }
            let shifted = x.map(&|k| k + p - 1, &|k| k);
            let host = self.map(&|k| if k > p { k + t32 - 1 } else { k }, &|k| k + t32 - 1);
            Ok(host.replace_leaf(p, false, &shifted))
        } else {
            if x.color()? != Color::Open {
                return Err(TreeError::Color(format!("open leaf {p} needs an open-colored argument, got {x}")));
            }
            let jp = p - r32;
            let inner = x.map(&|k| r32 + k, &|k| r32 + t32 + jp + (k - t32) - 1);
            let host = self.map(
                &|k| k,
                &|k| {
                    let j = k - r32;
                    if j == jp {
                        u32::MAX
                    } else if j < jp {
                        r32 + t32 + j
                    } else {
                        r32 + t32 + j + u32_ - 1
                    }
                },
            );
            Ok(host.replace_leaf(u32::MAX, true, &inner))
        }
    }

    /// The doubled tree in `𝒯_{2r+s}`: every `t(T)` becomes the node `(T T̄)`.
    ///
    /// Closed label `k` becomes `2k-1`, its mirror copy `2k`, and open label
    /// `r+j` becomes `2r+j`.
    pub fn doubling(&self) -> Result<Tree, TreeError> {
        self.validate()?;
        if self.color()? != Color::Open {
            return Err(TreeError::Color(format!("doubling needs an open-colored tree, got {self}")));
        }
        let r = self.rs().0 as u32;
        Ok(self.double_rec(r))
    }

    fn double_rec(&self, r: u32) -> Tree {
        match self {
            ColoredTree::Open(k) => Tree::Leaf(k + r),
            ColoredTree::Closed(k) => Tree::Leaf(2 * k - 1),
            ColoredTree::Tau(c) => {
                let z = c.to_plain(&|k| 2 * k - 1);
                let zb = c.to_plain(&|k| 2 * k);
                Tree::node(z, zb)
            }
            ColoredTree::Node(l, rt) => Tree::node(l.double_rec(r), rt.double_rec(r)),
        }
    }

    fn to_plain(&self, f: &dyn Fn(u32) -> u32) -> Tree {
        match self {
            ColoredTree::Closed(k) | ColoredTree::Open(k) => Tree::Leaf(f(*k)),
            ColoredTree::Tau(c) => c.to_plain(f),
            ColoredTree::Node(l, r) => Tree::node(l.to_plain(f), r.to_plain(f)),
        }
    }

    /// A closed-colored tree viewed as a plain tree.
    pub fn closed_to_plain(&self) -> Result<Tree, TreeError> {
        if self.color()? != Color::Closed {
            return Err(TreeError::Color(format!("{self} is not closed-colored")));
        }
        Ok(self.to_plain(&|k| k))
    }

    /// A plain tree viewed as a closed-colored tree.
    pub fn from_plain(t: &Tree) -> Result<ColoredTree, TreeError> {
        match t {
            Tree::Empty => Err(TreeError::Color("empty tree has no colored counterpart".into())),
            Tree::Leaf(k) => Ok(ColoredTree::Closed(*k)),
            Tree::Node(l, r) => Ok(ColoredTree::node(ColoredTree::from_plain(l)?, ColoredTree::from_plain(r)?)),
        }
    }

    /// Leaves of [`ColoredTree::doubling`] in left-to-right order, decoded.
    pub fn doubled_leaf_order(&self) -> Result<Vec<DoubledLabel>, TreeError> {
        let r = self.rs().0 as u32;
        Ok(self.doubling()?.leaves().into_iter().map(|l| DoubledLabel::decode(l, r)).collect())
    }
}

/// All closed-colored trees on the given labels.
pub fn all_closed(labels: &[u32]) -> Vec<ColoredTree> {
    if labels.len() == 1 {
        return vec![ColoredTree::Closed(labels[0])];
    }
    let mut out = Vec::new();
    let n = labels.len();
    for mask in 1..(1u32 << n) - 1 {
        let (a, b): (Vec<u32>, Vec<u32>) = split(labels, mask);
        for l in all_closed(&a) {
            for r in all_closed(&b) {
                out.push(ColoredTree::node(l.clone(), r));
            }
        }
    }
    out
}

fn split(labels: &[u32], mask: u32) -> (Vec<u32>, Vec<u32>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        if mask >> i & 1 == 1 {
            a.push(l)
        } else {
            b.push(l)
        }
    }
    (a, b)
}

fn all_open_on(closed: &[u32], open: &[u32]) -> Vec<ColoredTree> {
    let mut out = Vec::new();
    if closed.is_empty() && open.len() == 1 {
        out.push(ColoredTree::Open(open[0]));
    }
    if open.is_empty() && !closed.is_empty() {
        out.extend(all_closed(closed).into_iter().map(ColoredTree::tau));
    }
    let n = closed.len();
    for k in 0..=open.len() {
        for mask in 0..(1u32 << n) {
            let (ca, cb) = split(closed, mask);
            if ca.len() + k == 0 || cb.len() + open.len() - k == 0 {
                continue;
            }
            let left = all_open_on(&ca, &open[..k]);
            if left.is_empty() {
                continue;
            }
            let right = all_open_on(&cb, &open[k..]);
            for l in &left {
                for r in &right {
                    out.push(ColoredTree::node(l.clone(), r.clone()));
                }
            }
        }
    }
    out
}

/// Every element of `𝒯^o(r, s)` for `r + s ≥ 1`.
pub fn all_open_trees(r: usize, s: usize) -> Vec<ColoredTree> {
    let closed: Vec<u32> = (1..=r as u32).collect();
    let open: Vec<u32> = (r as u32 + 1..=(r + s) as u32).collect();
    all_open_on(&closed, &open)
}
