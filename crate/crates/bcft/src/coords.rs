//! Tree-adapted coordinates on configuration space and certificates for
//! their convergence regions.
//!
//! For a tree `A` with `r ≥ 2` leaves, every internal vertex `v` carries the
//! difference `z_v = z_{L(v)} - z_{R(v)}` and every internal edge `e` the
//! ratio `ζ_e = z_{d(e)} / z_{u(e)}`. Together with `x_A = z_{t_A}` and
//! `z_A = z_{r_A}` these are coordinates, with polynomial inverse
//! `z_i = z_A + x_A·Q_i(ζ)`.
//!
//! ```
//! use bcft::coords::CoordSystem;
//! use bcft::trees::parse_tree;
//! use num_complex::Complex64 as C;
//!
//! let cs = CoordSystem::new(&parse_tree("(23)((15)4)").unwrap()).unwrap();
//! let pt: Vec<C> = [4.0, 3.0, 2.0, 0.0, 1.0].iter().map(|&x| C::new(x, 0.0)).collect();
//! let cv = cs.psi(&pt).unwrap();
//! assert_eq!(cv.x, C::new(2.0, 0.0));
//! assert_eq!(cs.zeta_by_name(&cv, "zeta2"), Some(C::new(0.5, 0.0)));
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::trees::{ColoredTree, Tree, TreeError};

/// Tolerance used to decide whether a value lies on the cut `ℝ_{≤0}`.
pub const CUT_TOL: f64 = 1e-14;

/// True if `v` lies on the closed negative real axis.
pub fn on_cut(v: C64) -> bool {
    v.im.abs() <= CUT_TOL * (1.0 + v.re.abs()) && v.re <= 0.0
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoordError {
    #[error("coordinates need at least two leaves, got {0}")]
    TooFewLeaves(usize),
    #[error("expected {expected} points, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("points {0} and {1} coincide")]
    Coincident(u32, u32),
    #[error("pair ({0},{1}) has no unique minimal monomial with coefficient ±1")]
    NoCertificate(u32, u32),
    #[error("malformed point: {0}")]
    Malformed(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A sparse polynomial with integer coefficients in the edge variables `ζ_e`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Vec<u32>, i64>,
    nvars: usize,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { terms: BTreeMap::new(), nvars }
    }

    pub fn monomial(exps: Vec<u32>, coeff: i64) -> Poly {
        let nvars = exps.len();
        let mut p = Poly::zero(nvars);
        p.add_term(exps, coeff);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Vec<u32>, coeff: i64) {
        let e = self.terms.entry(exps).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (exponent vector, coefficient), in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, zeta: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, &c)| {
                e.iter().zip(zeta).fold(C64::new(c as f64, 0.0), |acc, (&k, z)| acc * z.powi(k as i32))
            })
            .sum()
    }

    /// `Σ |coeff|·Π p_e^{deg_e}`.
    pub fn majorant(&self, radii: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, &c)| e.iter().zip(radii).fold(c.unsigned_abs() as f64, |acc, (&k, p)| acc * p.powi(k as i32)))
            .sum()
    }
}

/// `z_i - z_j = x_A · sign · ζ^monomial · (1 + rest)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFactor {
    pub sign: i8,
    pub monomial: Vec<u32>,
    pub rest: Poly,
}

/// A child of an internal vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Child {
    Leaf(u32),
    Vertex(usize),
}

/// An internal vertex with its distinguished leaves `L(v)` and `R(v)`.
#[derive(Clone, Debug)]
pub struct Vertex {
    pub left: Child,
    pub right: Child,
    pub l: u32,
    pub r: u32,
    pub parent: Option<usize>,
    pub left_leaves: Vec<u32>,
    pub leaves: Vec<u32>,
}

/// Numeric values of `x_A`, `z_A` and the `ζ_e` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordValues {
    pub x: C64,
    pub z: C64,
    pub zeta: Vec<C64>,
}

impl CoordValues {
    /// Values in the variable order of [`CoordSystem::var_names`].
    pub fn as_vec(&self) -> Vec<C64> {
        let mut v = vec![self.x, self.z];
        v.extend_from_slice(&self.zeta);
        v
    }

    pub fn conj(&self) -> CoordValues {
        CoordValues { x: self.x.conj(), z: self.z.conj(), zeta: self.zeta.iter().map(|z| z.conj()).collect() }
    }
}

/// Result of [`CoordSystem::certificate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certificate {
    pub admissible: bool,
    pub margin: f64,
}

/// Result of [`CoordSystem::region_membership`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub in_ubar: bool,
    pub in_u: bool,
    pub margin: f64,
}

/// The coordinate system of a tree with at least two leaves.
#[derive(Clone, Debug)]
pub struct CoordSystem {
    tree: Tree,
    r: usize,
    vertices: Vec<Vertex>,
    edges: Vec<usize>,
    paths: Vec<Vec<u32>>,
    q: Vec<Poly>,
    pairs: BTreeMap<(u32, u32), Result<PairFactor, CoordError>>,
}

impl CoordSystem {
    pub fn new(tree: &Tree) -> Result<CoordSystem, CoordError> {
        tree.validate()?;
        let r = tree.size();
        if r < 2 {
            return Err(CoordError::TooFewLeaves(r));
        }
        let mut vertices = Vec::new();
        build(tree, None, &mut vertices);
        let edges: Vec<usize> = (1..vertices.len()).collect();
        let ne = edges.len();
        let mut paths = vec![vec![0u32; ne]; vertices.len()];
        for v in 1..vertices.len() {
            let parent = vertices[v].parent.unwrap();
            let mut p = paths[parent].clone();
            p[v - 1] += 1;
            paths[v] = p;
        }
        let mut q = vec![Poly::zero(ne); r];
        for (v, vert) in vertices.iter().enumerate() {
            for &i in &vert.left_leaves {
                q[i as usize - 1].add_term(paths[v].clone(), 1);
            }
        }
        let mut cs = CoordSystem { tree: tree.clone(), r, vertices, edges, paths, q, pairs: BTreeMap::new() };
        for i in 1..=r as u32 {
            for j in 1..=r as u32 {
                if i != j {
                    let f = cs.factor(i, j);
                    cs.pairs.insert((i, j), f);
                }
            }
        }
        Ok(cs)
    }

    /// Coordinates of the doubled tree of an open-colored tree.
    pub fn for_colored(e: &ColoredTree) -> Result<CoordSystem, CoordError> {
        CoordSystem::new(&e.doubling()?)
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn leaves(&self) -> usize {
        self.r
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Lower vertex `d(e)` and upper vertex `u(e)` of edge `e`.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        let d = self.edges[e];
        (d, self.vertices[d].parent.unwrap())
    }

    /// The rightmost leaf `r_A`.
    pub fn rightmost(&self) -> u32 {
        self.vertices[0].r
    }

    /// Exponent vector of `Π ζ_e` over the root path of vertex `v`.
    pub fn path_monomial(&self, v: usize) -> &[u32] {
        &self.paths[v]
    }

    /// `Q_i` with `z_i = z_A + x_A·Q_i(ζ)`.
    pub fn q(&self, i: u32) -> &Poly {
        &self.q[i as usize - 1]
    }

    /// Variable names: `x`, `z`, then `zeta{L(d(e))}` per edge.
    pub fn var_names(&self) -> Vec<String> {
        let mut v = vec!["x".to_string(), "z".to_string()];
        v.extend(self.edges.iter().map(|&d| format!("zeta{}", self.vertices[d].l)));
        v
    }

    /// Edge variable names with their defining ratios, e.g. `("zeta2", "(z2-z3)/(z3-z4)")`.
    pub fn edge_ratios(&self) -> Vec<(String, String)> {
        (0..self.edges.len())
            .map(|e| {
                let (d, u) = self.edge(e);
                let (vd, vu) = (&self.vertices[d], &self.vertices[u]);
                (format!("zeta{}", vd.l), format!("(z{}-z{})/(z{}-z{})", vd.l, vd.r, vu.l, vu.r))
            })
            .collect()
    }

    pub fn zeta_by_name(&self, cv: &CoordValues, name: &str) -> Option<C64> {
        self.var_names()[2..].iter().position(|n| n == name).map(|k| cv.zeta[k])
    }

    fn check_point(&self, point: &[C64]) -> Result<(), CoordError> {
        if point.len() != self.r {
            return Err(CoordError::Arity { expected: self.r, got: point.len() });
        }
        for i in 0..self.r {
            for j in i + 1..self.r {
                if point[i] == point[j] {
                    return Err(CoordError::Coincident(i as u32 + 1, j as u32 + 1));
                }
            }
        }
        Ok(())
    }

    /// `Ψ_A`: evaluates the coordinates at a point of `X_r(ℂ)`.
    pub fn psi(&self, point: &[C64]) -> Result<CoordValues, CoordError> {
        self.check_point(point)?;
        let zv: Vec<C64> =
            self.vertices.iter().map(|v| point[v.l as usize - 1] - point[v.r as usize - 1]).collect();
        let zeta = (0..self.edges.len())
            .map(|e| {
                let (d, u) = self.edge(e);
                zv[d] / zv[u]
            })
            .collect();
        Ok(CoordValues { x: zv[0], z: point[self.rightmost() as usize - 1], zeta })
    }

    /// `Ψ_A^{-1}`.
    pub fn inverse(&self, cv: &CoordValues) -> Vec<C64> {
        self.q.iter().map(|q| cv.z + cv.x * q.eval(&cv.zeta)).collect()
    }

    fn factor(&self, i: u32, j: u32) -> Result<PairFactor, CoordError> {
        let d = self.q(i).sub(self.q(j));
        let ne = self.edges.len();
        let mut m = vec![u32::MAX; ne];
        for (e, _) in d.terms() {
            for (k, &x) in e.iter().enumerate() {
                m[k] = m[k].min(x);
            }
        }
        if ne == 0 {
            m.clear();
        }
        let lead = d.terms().find(|(e, _)| **e == m).map(|(_, c)| c);
        let sign = match lead {
            Some(1) => 1,
            Some(-1) => -1,
            _ => return Err(CoordError::NoCertificate(i, j)),
        };
        let mut rest = Poly::zero(ne);
        for (e, c) in d.terms() {
            if *e != m {
                let shifted: Vec<u32> = e.iter().zip(&m).map(|(a, b)| a - b).collect();
                rest.add_term(shifted, c * sign as i64);
            }
        }
        Ok(PairFactor { sign, monomial: m, rest })
    }

    /// The factored form of `z_i - z_j`.
    pub fn pair_difference(&self, i: u32, j: u32) -> Result<&PairFactor, CoordError> {
        match self.pairs.get(&(i, j)) {
            Some(Ok(f)) => Ok(f),
            Some(Err(e)) => Err(e.clone()),
            None => Err(CoordError::Malformed(format!("no pair ({i},{j}) among {} leaves", self.r))),
        }
    }

    fn worst_sum(&self, radii: &[f64]) -> Option<f64> {
        let mut worst: f64 = 0.0;
        for i in 1..=self.r as u32 {
            for j in i + 1..=self.r as u32 {
                match self.pair_difference(i, j) {
                    Ok(f) => worst = worst.max(f.rest.majorant(radii)),
                    Err(_) => return None,
                }
            }
        }
        Some(worst)
    }

    /// Sufficient test that the polydisk of the given radii is admissible.
    pub fn certificate(&self, radii: &[f64]) -> Certificate {
        assert_eq!(radii.len(), self.edges.len(), "one radius per edge");
        match self.worst_sum(radii) {
            Some(w) => Certificate { admissible: w < 1.0, margin: 1.0 - w },
            None => Certificate { admissible: false, margin: f64::NEG_INFINITY },
        }
    }

    /// Membership of a point in `Ū_A` and `U_A`.
    pub fn region_membership(&self, point: &[C64]) -> Membership {
        let cv = match self.psi(point) {
            Ok(cv) => cv,
            Err(_) => return Membership { in_ubar: false, in_u: false, margin: f64::NEG_INFINITY },
        };
        let radii: Vec<f64> = cv.zeta.iter().map(|z| z.norm()).collect();
        let cert = self.certificate(&radii);
        let nonzero = cv.x != C64::new(0.0, 0.0) && cv.zeta.iter().all(|z| *z != C64::new(0.0, 0.0));
        let in_ubar = cert.admissible && nonzero;
        let in_u = in_ubar && !on_cut(cv.x) && !cv.zeta.iter().any(|z| on_cut(*z));
        Membership { in_ubar, in_u, margin: cert.margin }
    }
}

impl fmt::Display for CoordSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = &self.vertices[0];
        writeln!(f, "z_A = z{}", self.rightmost())?;
        writeln!(f, "x_A = z{}-z{}", root.l, root.r)?;
        for (name, ratio) in self.edge_ratios() {
            writeln!(f, "{name} = {ratio}")?;
        }
        Ok(())
    }
}

fn build(t: &Tree, parent: Option<usize>, out: &mut Vec<Vertex>) -> Child {
    match t {
        Tree::Leaf(i) => Child::Leaf(*i),
        Tree::Empty => unreachable!("empty subtree"),
        Tree::Node(l, r) => {
            let idx = out.len();
            let left_leaves = l.leaves();
            let leaves = t.leaves();
            out.push(Vertex {
                left: Child::Leaf(0),
                right: Child::Leaf(0),
                l: *left_leaves.last().unwrap(),
                r: *leaves.last().unwrap(),
                parent,
                left_leaves,
                leaves,
            });
            let left = build(l, Some(idx), out);
            let right = build(r, Some(idx), out);
            out[idx].left = left;
            out[idx].right = right;
            Child::Vertex(idx)
        }
    }
}

/// The doubling map `Φ(z_1..z_r, x_{r+1}..) = (z_1, z̄_1, …, z_r, z̄_r, x_{r+1}, …)`.
pub fn phi(bulk: &[C64], boundary: &[f64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(2 * bulk.len() + boundary.len());
    for z in bulk {
        out.push(*z);
        out.push(z.conj());
    }
    out.extend(boundary.iter().map(|&x| C64::new(x, 0.0)));
    out
}

/// Checks a point of `X_{r,s}(H̄)`: bulk points in the open upper half-plane,
/// pairwise distinct, boundary points strictly decreasing in label.
pub fn check_open_point(bulk: &[C64], boundary: &[f64]) -> Result<(), CoordError> {
    if let Some(k) = bulk.iter().position(|z| z.im <= 0.0 || !z.im.is_finite()) {
        return Err(CoordError::Malformed(format!("bulk point {} is not in the upper half-plane", k + 1)));
    }
    for i in 0..bulk.len() {
        for j in i + 1..bulk.len() {
            if bulk[i] == bulk[j] {
                return Err(CoordError::Coincident(i as u32 + 1, j as u32 + 1));
            }
        }
    }
    if boundary.windows(2).any(|w| w[0] <= w[1]) {
        return Err(CoordError::Malformed("boundary points must strictly decrease with their label".into()));
    }
    Ok(())
}

/// Membership of a point of `X_{r,s}(H̄)` in `U_E^o`, via the doubled tree.
pub fn open_membership(e: &ColoredTree, bulk: &[C64], boundary: &[f64]) -> Result<Membership, CoordError> {
    let (r, s) = e.rs();
    if bulk.len() != r || boundary.len() != s {
        return Err(CoordError::Arity { expected: r + s, got: bulk.len() + boundary.len() });
    }
    check_open_point(bulk, boundary)?;
    let doubled = e.doubling()?;
    if doubled.size() < 2 {
        return Ok(Membership { in_ubar: true, in_u: true, margin: 1.0 });
    }
    Ok(CoordSystem::new(&doubled)?.region_membership(&phi(bulk, boundary)))
}

/// `true` iff the point lies in `U_E^o`.
pub fn region_membership_open(e: &ColoredTree, bulk: &[C64], boundary: &[f64]) -> Result<bool, CoordError> {
    Ok(open_membership(e, bulk, boundary)?.in_ubar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{parse_colored, parse_tree};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn cs(s: &str) -> CoordSystem {
        CoordSystem::new(&parse_tree(s).unwrap()).unwrap()
    }

    #[test]
    fn worked_example_coordinates() {
        let a = cs("(23)((15)4)");
        let ratios: BTreeMap<String, String> = a.edge_ratios().into_iter().collect();
        assert_eq!(ratios["zeta2"], "(z2-z3)/(z3-z4)");
        assert_eq!(ratios["zeta1"], "(z1-z5)/(z5-z4)");
        assert_eq!(ratios["zeta5"], "(z5-z4)/(z3-z4)");
        assert_eq!(a.rightmost(), 4);
        let cv = a.psi(&[c(4.0), c(3.0), c(2.0), c(0.0), c(1.0)]).unwrap();
        assert_eq!((cv.x, cv.z), (c(2.0), c(0.0)));
        assert_eq!(a.zeta_by_name(&cv, "zeta2"), Some(c(0.5)));
        assert_eq!(a.zeta_by_name(&cv, "zeta1"), Some(c(3.0)));
        assert_eq!(a.zeta_by_name(&cv, "zeta5"), Some(c(0.5)));
    }

    #[test]
    fn worked_example_inverse() {
        let a = cs("(23)((15)4)");
        let names = a.var_names();
        let idx = |n: &str| names[2..].iter().position(|x| x == n).unwrap();
        let (za, zb, zc) = (idx("zeta2"), idx("zeta1"), idx("zeta5"));
        let mono = |ks: &[(usize, u32)]| {
            let mut e = vec![0u32; 3];
            for &(k, p) in ks {
                e[k] = p;
            }
            e
        };
        let mut q1 = Poly::zero(3);
        q1.add_term(mono(&[(zc, 1)]), 1);
        q1.add_term(mono(&[(zc, 1), (zb, 1)]), 1);
        assert_eq!(a.q(1), &q1);
        let mut q2 = Poly::zero(3);
        q2.add_term(mono(&[]), 1);
        q2.add_term(mono(&[(za, 1)]), 1);
        assert_eq!(a.q(2), &q2);
        assert_eq!(a.q(3), &Poly::monomial(mono(&[]), 1));
        assert!(a.q(4).is_zero());
        assert_eq!(a.q(5), &Poly::monomial(mono(&[(zc, 1)]), 1));
    }

    #[test]
    fn two_leaves() {
        let a = cs("12");
        assert_eq!(a.num_edges(), 0);
        let cv = a.psi(&[c(1.0), c(0.0)]).unwrap();
        assert_eq!((cv.x, cv.z), (c(1.0), c(0.0)));
        assert!(a.certificate(&[]).admissible);
        assert!(matches!(CoordSystem::new(&parse_tree("1").unwrap()), Err(CoordError::TooFewLeaves(1))));
    }

    #[test]
    fn worked_pair_difference() {
        let a = cs("(23)((15)4)");
        let f = a.pair_difference(2, 1).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.monomial, vec![0, 0, 0]);
        assert_eq!(f.rest.len(), 3);
        let root = a.pair_difference(3, 4).unwrap();
        assert_eq!((root.sign, root.rest.is_empty()), (1, true));
        assert_eq!(a.pair_difference(4, 3).unwrap().sign, -1);
    }

    #[test]
    fn coincident_points_are_rejected() {
        let a = cs("1(23)");
        assert!(matches!(a.psi(&[c(1.0), c(1.0), c(0.0)]), Err(CoordError::Coincident(1, 2))));
        assert!(matches!(a.psi(&[c(1.0)]), Err(CoordError::Arity { .. })));
    }

    #[test]
    fn comb_membership() {
        let a = cs("1(2(3(45)))");
        let inside = [c(8.0), c(4.0), c(2.0), c(1.0), c(0.0)];
        let m = a.region_membership(&inside);
        assert!(m.in_ubar && m.in_u);
        let neg = [c(-8.0), c(4.0), c(2.0), c(1.0), c(0.0)];
        let m = a.region_membership(&neg);
        assert!(m.in_ubar && !m.in_u);
        let bad = [c(1.5), c(4.0), c(2.0), c(1.0), c(0.0)];
        assert!(!a.region_membership(&bad).in_ubar);
    }

    #[test]
    fn open_regions() {
        let e = parse_colored("t(c1) o2").unwrap();
        assert!(region_membership_open(&e, &[C64::new(4.0, 1.0)], &[0.0]).unwrap());
        assert!(!region_membership_open(&e, &[C64::new(0.5, 1.0)], &[0.0]).unwrap());
        assert!(region_membership_open(&e, &[C64::new(4.0, -1.0)], &[0.0]).is_err());
        let q = parse_colored("t(c1 c2)").unwrap();
        let z2 = C64::new(0.0, 1.0);
        for (z1, expect) in [(C64::new(0.3, 1.0), true), (C64::new(0.0, 2.5), false), (C64::new(1.2, 1.0), false)] {
            let direct = ((z1 - z2).norm() + (z1.conj() - z2.conj()).norm()) / (z2 - z2.conj()).norm() < 1.0;
            assert_eq!(direct, expect);
            assert_eq!(region_membership_open(&q, &[z1, z2], &[]).unwrap(), expect);
        }
        let t = parse_colored("t(c1)").unwrap();
        assert!(region_membership_open(&t, &[C64::new(-3.0, 1e-3)], &[]).unwrap());
        let oo = parse_colored("o1 o2").unwrap();
        assert!(region_membership_open(&oo, &[], &[0.0, 1.0]).is_err());
    }
}
