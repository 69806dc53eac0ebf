//! Braid words, cabling, and parenthesized (colored) braids.
//!
//! A word is read left to right in time. `σ_i` exchanges the strands at
//! positions `i` and `i+1` counterclockwise (strand `i` passes over strand
//! `i+1`); `σ_i^{-1}` is the clockwise exchange. Complex conjugation of a path
//! mirrors its word.
//!
//! ```
//! use bcft::braids::{cable_compose, BraidWord};
//!
//! let g: BraidWord = "s1".parse().unwrap();
//! let h = g.clone();
//! let c = cable_compose(&g.with_strands(2), 2, &h.with_strands(2)).unwrap();
//! assert_eq!(c.to_string(), "s1 s2 s1");
//! assert_eq!(c.permutation(), vec![3, 2, 1]);
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::trees::{ColoredTree, DoubledLabel, Tree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("bad braid word: {0}")]
    Parse(String),
    #[error("generator s{gen} needs at least {} strands, word has {strands}", gen + 1)]
    Range { gen: u32, strands: usize },
    #[error("strand {p} out of range 1..={n}")]
    Slot { p: usize, n: usize },
    #[error("word permutation does not carry the source leaf order to the target leaf order")]
    Permutation,
    #[error("source and target have different sizes")]
    Size,
    #[error("unknown generator '{0}'")]
    Unknown(String),
    #[error("strand count mismatch: {0}")]
    Strands(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A word in the Artin generators on a fixed number of strands.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    gens: Vec<i32>,
}

impl BraidWord {
    pub fn identity(strands: usize) -> BraidWord {
        BraidWord { strands, gens: Vec::new() }
    }

    /// `gens` holds `±i` for `σ_i^{±1}`.
    pub fn new(strands: usize, gens: Vec<i32>) -> Result<BraidWord, BraidError> {
        for &g in &gens {
            let i = g.unsigned_abs();
            if g == 0 || i as usize >= strands {
                return Err(BraidError::Range { gen: i, strands });
            }
        }
        Ok(BraidWord { strands, gens })
    }

    /// The same word on `n` strands; panics if a generator is out of range.
    pub fn with_strands(&self, n: usize) -> BraidWord {
        BraidWord::new(n, self.gens.clone()).expect("generators fit")
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn gens(&self) -> &[i32] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// `perm[k-1]` is the final position of the strand starting at position `k`.
    pub fn permutation(&self) -> Vec<u32> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &g in &self.gens {
            let i = g.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0u32; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos as u32 + 1;
        }
        perm
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().iter().enumerate().all(|(k, &p)| p as usize == k + 1)
    }

    /// Negates every crossing, keeping the order.
    pub fn mirror(&self) -> BraidWord {
        BraidWord { strands: self.strands, gens: self.gens.iter().map(|g| -g).collect() }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord { strands: self.strands, gens: self.gens.iter().rev().map(|g| -g).collect() }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::Strands(format!("{} vs {}", self.strands, other.strands)));
        }
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Ok(BraidWord { strands: self.strands, gens })
    }

    /// Cancels adjacent `σ_i σ_i^{-1}` pairs.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.gens.len());
        for &g in &self.gens {
            if out.last() == Some(&-g) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        BraidWord { strands: self.strands, gens: out }
    }

    /// Signed crossing count for each unordered pair of strand labels, where
    /// `labels[k]` names the strand starting at position `k+1`.
    pub fn abelianization<L: Ord + Clone>(&self, labels: &[L]) -> BTreeMap<(L, L), i32> {
        assert_eq!(labels.len(), self.strands, "one label per strand");
        let mut at: Vec<L> = labels.to_vec();
        let mut out = BTreeMap::new();
        for &g in &self.gens {
            let i = g.unsigned_abs() as usize - 1;
            let (a, b) = (at[i].clone(), at[i + 1].clone());
            let key = if a <= b { (a, b) } else { (b, a) };
            *out.entry(key).or_insert(0) += g.signum();
            at.swap(i, i + 1);
        }
        out.retain(|_, v| *v != 0);
        out
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.gens.iter().map(|&g| if g > 0 { format!("s{g}") } else { format!("s{}^-1", -g) }).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;

    /// Parses `"s1 s2^-1 s1"`; the strand count is the smallest that fits.
    fn from_str(s: &str) -> Result<BraidWord, BraidError> {
        let mut gens = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let body = tok.strip_prefix('s').ok_or_else(|| BraidError::Parse(tok.into()))?;
            let (idx, inv) = match body.split_once('^') {
                Some((i, "-1")) => (i, true),
                Some((i, "1")) => (i, false),
                Some(_) => return Err(BraidError::Parse(tok.into())),
                None => (body, false),
            };
            let i: i32 = idx.parse().map_err(|_| BraidError::Parse(tok.into()))?;
            if i <= 0 {
                return Err(BraidError::Parse(tok.into()));
            }
            gens.push(if inv { -i } else { i });
        }
        let n = gens.iter().map(|g| g.unsigned_abs() as usize + 1).max().unwrap_or(1);
        BraidWord::new(n, gens)
    }
}

/// Parses a word on exactly `strands` strands.
pub fn parse_word(s: &str, strands: usize) -> Result<BraidWord, BraidError> {
    let w: BraidWord = s.parse()?;
    if w.strands > strands {
        return Err(BraidError::Range { gen: w.strands as u32 - 1, strands });
    }
    Ok(w.with_strands(strands))
}

/// Replaces strand `p` of `g` by the thin braid `h`; an `h` on zero strands
/// deletes strand `p`.
pub fn cable_compose(g: &BraidWord, p: usize, h: &BraidWord) -> Result<BraidWord, BraidError> {
    let n = g.strands;
    if p == 0 || p > n {
        return Err(BraidError::Slot { p, n });
    }
    let m = h.strands as i32;
    let mut w = p as i32;
    let mut out = Vec::new();
    for &gen in &g.gens {
        let (i, s) = (gen.abs(), gen.signum());
        if i == w {
            out.extend((0..m).rev().map(|k| s * (i + k)));
            w = i + 1;
        } else if i + 1 == w {
            out.extend((0..m).map(|k| s * (i + k)));
            w = i;
        } else if i < w {
            out.push(gen);
        } else {
            out.push(s * (i + m - 1));
        }
    }
    out.extend(h.gens.iter().map(|&x| x.signum() * (x.abs() + w - 1)));
    BraidWord::new((n as i32 + m - 1) as usize, out)
}

/// Block substitution of permutations, in the convention of
/// [`BraidWord::permutation`]: strand `p` of `g` becomes a block permuted by `h`.
pub fn substitute_permutation(g: &[u32], p: usize, h: &[u32]) -> Vec<u32> {
    let m = h.len() as u32;
    let gp = g[p - 1];
    let shift = |pos: u32| if pos < gp { pos } else { pos + m - 1 };
    let mut out = Vec::with_capacity(g.len() + h.len() - 1);
    for (k, &gk) in g.iter().enumerate() {
        if k + 1 == p {
            out.extend(h.iter().map(|&hk| gp + hk - 1));
        } else {
            out.push(shift(gk));
        }
    }
    out
}

fn order_matches<L: PartialEq>(word: &BraidWord, src: &[L], tgt: &[L]) -> bool {
    src.len() == word.strands
        && tgt.len() == word.strands
        && word.permutation().iter().enumerate().all(|(k, &p)| src[k] == tgt[p as usize - 1])
}

/// A morphism of parenthesized braids: a word carrying the leaf order of
/// `source` to that of `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaBMorphism {
    pub source: Tree,
    pub target: Tree,
    pub word: BraidWord,
}

/// Validates a parenthesized braid.
pub fn pab_morphism(source: &Tree, target: &Tree, word: &BraidWord) -> Result<PaBMorphism, BraidError> {
    source.validate()?;
    target.validate()?;
    if source.size() != target.size() {
        return Err(BraidError::Size);
    }
    if !order_matches(word, &source.leaves(), &target.leaves()) {
        return Err(BraidError::Permutation);
    }
    Ok(PaBMorphism { source: source.clone(), target: target.clone(), word: word.clone() })
}

impl PaBMorphism {
    pub fn identity(t: &Tree) -> PaBMorphism {
        PaBMorphism { source: t.clone(), target: t.clone(), word: BraidWord::identity(t.size()) }
    }

    /// Operadic composition `self ∘_p other` by cabling.
    pub fn compose(&self, p: u32, other: &PaBMorphism) -> Result<PaBMorphism, BraidError> {
        let pos = self.source.leaves().iter().position(|&l| l == p).ok_or(BraidError::Slot { p: p as usize, n: self.source.size() })?;
        let word = cable_compose(&self.word, pos + 1, &other.word)?;
        pab_morphism(&self.source.compose(p, &other.source)?, &self.target.compose(p, &other.target)?, &word)
    }
}

/// A morphism of colored parenthesized braids, stored as its doubled word on
/// `2r+s` strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaPBMorphism {
    pub source: ColoredTree,
    pub target: ColoredTree,
    pub word: BraidWord,
}

/// Validates a colored parenthesized braid against the doubled leaf orders.
pub fn papb_morphism(source: &ColoredTree, target: &ColoredTree, word: &BraidWord) -> Result<PaPBMorphism, BraidError> {
    let (a, b) = (source.doubled_leaf_order()?, target.doubled_leaf_order()?);
    if source.rs() != target.rs() {
        return Err(BraidError::Size);
    }
    if !order_matches(word, &a, &b) {
        return Err(BraidError::Permutation);
    }
    Ok(PaPBMorphism { source: source.clone(), target: target.clone(), word: word.clone() })
}

/// Names of the five generators.
pub const GENERATORS: [&str; 5] = ["alpha_o", "alpha_c", "sigma", "p", "q"];

/// One of the five generators `α_o, α_c, σ, p, q`.
pub fn papb_generator(name: &str) -> Result<PaPBMorphism, BraidError> {
    let c = |s: &str| crate::trees::parse_colored(s).expect("generator tree");
    let (src, tgt, word, n) = match name {
        "alpha_o" | "αo" => ("(o1 o2) o3", "o1 (o2 o3)", "", 3),
        "alpha_c" | "αc" => ("t((c1 c2) c3)", "t(c1 (c2 c3))", "", 6),
        "sigma" | "σ" => ("t(c1 c2)", "t(c2 c1)", "s1 s3^-1", 4),
        "p" => ("t(c1) o2", "o2 t(c1)", "s2^-1 s1", 3),
        "q" => ("t(c1 c2)", "t(c1) t(c2)", "s2", 4),
        _ => return Err(BraidError::Unknown(name.into())),
    };
    papb_morphism(&c(src), &c(tgt), &parse_word(word, n)?)
}

impl PaPBMorphism {
    pub fn identity(e: &ColoredTree) -> Result<PaPBMorphism, BraidError> {
        let n = e.doubled_leaf_order()?.len();
        papb_morphism(e, e, &BraidWord::identity(n))
    }

    /// The closed morphism `γ` realized on doubled strands as `γ ⊗ mirror(γ)`
    /// under `t(...)`.
    pub fn from_closed(gamma: &PaBMorphism) -> Result<PaPBMorphism, BraidError> {
        let src = ColoredTree::tau(ColoredTree::from_plain(&gamma.source)?);
        let tgt = ColoredTree::tau(ColoredTree::from_plain(&gamma.target)?);
        let m = gamma.word.strands();
        let mut gens = gamma.word.gens.clone();
        gens.extend(gamma.word.mirror().gens.iter().map(|&g| g.signum() * (g.abs() + m as i32)));
        papb_morphism(&src, &tgt, &BraidWord::new(2 * m, gens)?)
    }

    fn position(&self, label: DoubledLabel) -> Result<usize, BraidError> {
        let order = self.source.doubled_leaf_order()?;
        order.iter().position(|&l| l == label).map(|k| k + 1).ok_or(BraidError::Slot { p: 0, n: order.len() })
    }

    /// Composition at the open leaf `p` with an open-colored morphism.
    pub fn compose_open(&self, p: u32, other: &PaPBMorphism) -> Result<PaPBMorphism, BraidError> {
        let pos = self.position(DoubledLabel::X(p))?;
        let word = cable_compose(&self.word, pos, &other.word)?;
        papb_morphism(&self.source.compose(p, &other.source)?, &self.target.compose(p, &other.target)?, &word)
    }

    /// Composition at the closed leaf `p` with a closed morphism `γ`: the
    /// strand `z_p` is cabled with `γ` and `z̄_p` with `mirror(γ)`.
    pub fn compose_closed(&self, p: u32, gamma: &PaBMorphism) -> Result<PaPBMorphism, BraidError> {
        let a = self.position(DoubledLabel::Z(p))?;
        let b = self.position(DoubledLabel::ZBar(p))?;
        let mirrored = gamma.word.mirror();
        let word = if a < b {
            cable_compose(&cable_compose(&self.word, b, &mirrored)?, a, &gamma.word)?
        } else {
            cable_compose(&cable_compose(&self.word, a, &gamma.word)?, b, &mirrored)?
        };
        let src = ColoredTree::from_plain(&gamma.source)?;
        let tgt = ColoredTree::from_plain(&gamma.target)?;
        papb_morphism(&self.source.compose(p, &src)?, &self.target.compose(p, &tgt)?, &word)
    }

    /// Swapping every `z_k` with `z̄_k` and mirroring the word yields a valid
    /// morphism again.
    pub fn conjugation_symmetric(&self) -> bool {
        let (Ok(a), Ok(b)) = (self.source.doubled_leaf_order(), self.target.doubled_leaf_order()) else {
            return false;
        };
        let a: Vec<DoubledLabel> = a.into_iter().map(DoubledLabel::conjugate).collect();
        let b: Vec<DoubledLabel> = b.into_iter().map(DoubledLabel::conjugate).collect();
        order_matches(&self.word.mirror(), &a, &b)
    }

    /// Signed crossing counts per pair of doubled strands.
    pub fn abelianization(&self) -> BTreeMap<(DoubledLabel, DoubledLabel), i32> {
        self.word.abelianization(&self.source.doubled_leaf_order().expect("valid source"))
    }

    pub fn to_json(&self) -> Value {
        let strands: Vec<String> =
            self.source.doubled_leaf_order().expect("valid source").iter().map(|l| l.to_string()).collect();
        json!({
            "source": self.source.format(),
            "target": self.target.format(),
            "word": self.word.to_string(),
            "strands": strands,
            "permutation": self.word.permutation(),
        })
    }
}
