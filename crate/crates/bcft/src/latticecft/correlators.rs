//! Closed-form correlators and their per-tree expansions.

use num_complex::Complex64 as C64;

use super::{BoundaryData, Charge, LatticeError, NarainModel};
use crate::coords::{check_open_point, phi, CoordSystem};
use crate::series::{evaluate_closed, expand_in, BranchPlan, Exponent, GenSeries, PowerProduct};
use crate::trees::{ColoredTree, DoubledLabel, Tree};

/// Charges of the bulk insertions `1..=r` and the boundary insertions `r+1..=r+s`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Charges {
    pub bulk: Vec<Charge>,
    pub boundary: Vec<Charge>,
}

impl Charges {
    pub fn new(bulk: Vec<Charge>, boundary: Vec<Charge>) -> Charges {
        Charges { bulk, boundary }
    }

    pub fn rs(&self) -> (usize, usize) {
        (self.bulk.len(), self.boundary.len())
    }

    /// Charge at a colored label: closed `k` or open `r+j`.
    pub fn at(&self, label: u32) -> Charge {
        let r = self.bulk.len();
        let k = label as usize;
        if k <= r {
            self.bulk[k - 1]
        } else {
            self.boundary[k - r - 1]
        }
    }

    pub fn total(&self) -> Charge {
        self.bulk.iter().chain(&self.boundary).fold((0, 0), |a, c| add(a, *c))
    }
}

fn add(a: Charge, b: Charge) -> Charge {
    (a.0 + b.0, a.1 + b.1)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Exponent of `(w_u - w_v)` between two doubled insertions.
pub fn doubled_exponent(bd: &BoundaryData, u: DoubledLabel, v: DoubledLabel, charges: &Charges) -> Exponent {
    use DoubledLabel::*;
    let m = &bd.model;
    let ch = |l: DoubledLabel| match l {
        Z(k) | ZBar(k) | X(k) => charges.at(k),
    };
    let (a, b) = (ch(u), ch(v));
    match (u, v) {
        (Z(_), Z(_)) => m.aa(a, b),
        (ZBar(_), ZBar(_)) => m.bb(a, b),
        (Z(_), ZBar(_)) => bd.p_phipbar(a, b),
        (ZBar(_), Z(_)) => bd.phipbar_p(a, b),
        (Z(_), X(_)) => bd.p_t(a, b),
        (X(_), Z(_)) => bd.p_t(b, a),
        (ZBar(_), X(_)) => bd.phipbar_t(a, b),
        (X(_), ZBar(_)) => bd.phipbar_t(b, a),
        (X(_), X(_)) => bd.t_t(a, b),
    }
}

fn all_doubled(r: usize, s: usize) -> Vec<DoubledLabel> {
    let mut out = Vec::with_capacity(2 * r + s);
    for k in 1..=r as u32 {
        out.push(DoubledLabel::Z(k));
        out.push(DoubledLabel::ZBar(k));
    }
    out.extend((r as u32 + 1..=(r + s) as u32).map(DoubledLabel::X));
    out
}

/// `Π (w_u - w_v)^{q_uq_v}` over doubled pairs, with `u` before `v` in `order`.
fn doubled_product(bd: &BoundaryData, order: &[DoubledLabel], charges: &Charges) -> PowerProduct {
    let r = charges.bulk.len() as u32;
    let mut f = PowerProduct::one();
    for (i, &u) in order.iter().enumerate() {
        for &v in &order[i + 1..] {
            f.mul_pair(u.encode(r), v.encode(r), doubled_exponent(bd, u, v, charges));
        }
    }
    f
}

fn bulk_plan(r: usize) -> BranchPlan {
    let mut pairs = Vec::new();
    for i in 1..=r as u32 {
        for j in i + 1..=r as u32 {
            pairs.push(((2 * i - 1, 2 * j - 1), (2 * i, 2 * j)));
        }
    }
    BranchPlan { pairs }
}

/// The label-ordered doubled product of the mixed correlator.
pub fn label_product(bd: &BoundaryData, charges: &Charges) -> PowerProduct {
    let (r, s) = charges.rs();
    doubled_product(bd, &all_doubled(r, s), charges)
}

/// The doubled product oriented along the leaves of `doubling(E)`.
pub fn tree_product(bd: &BoundaryData, e: &ColoredTree, charges: &Charges) -> Result<PowerProduct, LatticeError> {
    check_colored(e, charges)?;
    Ok(doubled_product(bd, &e.doubled_leaf_order()?, charges))
}

fn check_colored(e: &ColoredTree, charges: &Charges) -> Result<(), LatticeError> {
    e.validate()?;
    let (r, s) = e.rs();
    if (r, s) != charges.rs() {
        return Err(LatticeError::Arity { expected: r + s, got: charges.bulk.len() + charges.boundary.len() });
    }
    Ok(())
}

/// `Π ε(α_L, α_R)` over the internal vertices of a bulk tree, and the total charge.
pub fn bulk_kappa(model: &NarainModel, a: &Tree, charges: &[Charge]) -> (i64, Charge) {
    match a {
        Tree::Empty => (1, (0, 0)),
        Tree::Leaf(k) => (1, charges[*k as usize - 1]),
        Tree::Node(l, r) => {
            let (kl, al) = bulk_kappa(model, l, charges);
            let (kr, ar) = bulk_kappa(model, r, charges);
            (kl * kr * model.epsilon(al, ar), add(al, ar))
        }
    }
}

/// Prefactor of a colored tree: `ε` at closed vertices, `σ` at `τ`, `η` at open vertices.
pub fn colored_kappa(bd: &BoundaryData, e: &ColoredTree, charges: &Charges) -> (C64, Charge) {
    match e {
        ColoredTree::Closed(k) | ColoredTree::Open(k) => (one(), charges.at(*k)),
        ColoredTree::Tau(c) => {
            let (k, a) = colored_kappa(bd, c, charges);
            (k * bd.sigma(a), a)
        }
        ColoredTree::Node(l, r) => {
            let (kl, al) = colored_kappa(bd, l, charges);
            let (kr, ar) = colored_kappa(bd, r, charges);
            let closed = matches!(l.color(), Ok(crate::trees::Color::Closed));
            let v = if closed { C64::new(bd.model.epsilon(al, ar) as f64, 0.0) } else { bd.eta(al, ar) };
            (kl * kr * v, add(al, ar))
        }
    }
}

/// `(((t(c1) t(c2)) …) o_{r+1}) …`: the tree whose region carries the label order.
pub fn reference_tree(r: usize, s: usize) -> ColoredTree {
    let leaves = (1..=r as u32)
        .map(|k| ColoredTree::tau(ColoredTree::Closed(k)))
        .chain((r as u32 + 1..=(r + s) as u32).map(ColoredTree::Open));
    leaves.reduce(ColoredTree::node).expect("at least one insertion")
}

/// `⟨α_0^∨, Y(e_{α_1}, z_1) ⋯ Y(e_{α_r}, z_r) 1⟩`.
///
/// ```
/// use bcft::latticecft::{bulk_correlator, NarainModel};
/// use bcft::series::rat;
/// use num_complex::Complex64 as C64;
///
/// let m = NarainModel::new(rat(2, 1)).unwrap();
/// let (z1, z2) = (C64::new(0.3, 1.0), C64::new(-1.0, 0.5));
/// let v = bulk_correlator(&m, (1, 1), &[((1, 0), z1), ((0, 1), z2)]).unwrap();
/// let w = z1 - z2;
/// assert!((v - w / w.norm()).norm() < 1e-14);
/// ```
pub fn bulk_correlator(model: &NarainModel, dual: Charge, insertions: &[(Charge, C64)]) -> Result<C64, LatticeError> {
    let charges: Vec<Charge> = insertions.iter().map(|i| i.0).collect();
    let points: Vec<C64> = insertions.iter().map(|i| i.1).collect();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(LatticeError::Point(format!("z{} = z{}", i + 1, j + 1)));
            }
        }
    }
    if charges.iter().fold((0, 0), |a, c| add(a, *c)) != dual {
        return Ok(C64::new(0.0, 0.0));
    }
    let r = charges.len();
    let mut f = PowerProduct::one();
    let mut sign = 1;
    for i in 0..r {
        for j in i + 1..r {
            sign *= model.epsilon(charges[i], charges[j]);
            let (u, v) = (i as u32 + 1, j as u32 + 1);
            f.mul_pair(2 * u - 1, 2 * v - 1, model.aa(charges[i], charges[j]));
            f.mul_pair(2 * u, 2 * v, model.bb(charges[i], charges[j]));
        }
    }
    f.constant = C64::new(sign as f64, 0.0);
    Ok(evaluate_closed(&f, &phi(&points, &[]), &bulk_plan(r))?)
}

/// `⟨u^∨, Y(e_{α_1}, z_1) ⋯ Y(e_{α_r}, z_r) e_{γ_{r+1}}(x_{r+1}) ⋯ 1⟩` on the
/// upper half-plane, with `dual` the boundary charge index of `u`.
pub fn mixed_correlator(
    bd: &BoundaryData,
    dual: i64,
    bulk: &[(Charge, C64)],
    boundary: &[(Charge, f64)],
) -> Result<C64, LatticeError> {
    let zs: Vec<C64> = bulk.iter().map(|b| b.1).collect();
    let xs: Vec<f64> = boundary.iter().map(|b| b.1).collect();
    check_open_point(&zs, &xs)?;
    let charges = Charges::new(bulk.iter().map(|b| b.0).collect(), boundary.iter().map(|b| b.0).collect());
    let (r, s) = charges.rs();
    if r + s == 0 {
        return Ok(if dual == 0 { one() } else { C64::new(0.0, 0.0) });
    }
    if bd.m_index(charges.total()) != dual {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut f = label_product(bd, &charges);
    f.constant = colored_kappa(bd, &reference_tree(r, s), &charges).0;
    Ok(evaluate_closed(&f, &phi(&zs, &xs), &bulk_plan(r))?)
}

/// A correlator expanded in the coordinates of one tree.
#[derive(Clone, Debug)]
pub struct TreeExpansion {
    pub prefactor: C64,
    pub holomorphic: GenSeries,
    /// The `z̄` factor of a bulk expansion, evaluated at conjugate coordinates.
    pub antiholomorphic: Option<GenSeries>,
    pub coords: Option<CoordSystem>,
}

impl TreeExpansion {
    fn value(&self, cs_point: &[C64]) -> Result<C64, LatticeError> {
        let cs = match &self.coords {
            None => return Ok(self.prefactor * self.holomorphic.evaluate(&[])?),
            Some(cs) => cs,
        };
        let cv = cs.psi(cs_point)?;
        let mut v = self.prefactor * self.holomorphic.evaluate(&cv.as_vec())?;
        if let Some(a) = &self.antiholomorphic {
            v *= a.evaluate(&cv.conj().as_vec())?;
        }
        Ok(v)
    }

    /// Value of a bulk expansion at `z_1..z_r`.
    pub fn evaluate_bulk(&self, points: &[C64]) -> Result<C64, LatticeError> {
        self.value(points)
    }

    /// Value of a bulk-boundary expansion at `(z_1..z_r, x_{r+1}..)`.
    pub fn evaluate_open(&self, bulk: &[C64], boundary: &[f64]) -> Result<C64, LatticeError> {
        check_open_point(bulk, boundary)?;
        self.value(&phi(bulk, boundary))
    }
}

fn trivial(prefactor: C64) -> TreeExpansion {
    TreeExpansion { prefactor, holomorphic: GenSeries::constant(&[], 0, one()), antiholomorphic: None, coords: None }
}

/// The bulk correlator expanded in the coordinates of `a`, truncated at order `n`.
pub fn tree_expansion_bulk(model: &NarainModel, a: &Tree, charges: &[Charge], n: u32) -> Result<TreeExpansion, LatticeError> {
    a.validate()?;
    if a.size() != charges.len() {
        return Err(LatticeError::Arity { expected: a.size(), got: charges.len() });
    }
    let prefactor = C64::new(bulk_kappa(model, a, charges).0 as f64, 0.0);
    if a.size() < 2 {
        return Ok(trivial(prefactor));
    }
    let cs = CoordSystem::new(a)?;
    let order = a.leaves();
    let mut hol = PowerProduct::one();
    let mut anti = PowerProduct::one();
    for (i, &u) in order.iter().enumerate() {
        for &v in &order[i + 1..] {
            let (cu, cv) = (charges[u as usize - 1], charges[v as usize - 1]);
            hol.mul_pair(u, v, model.aa(cu, cv));
            anti.mul_pair(u, v, model.bb(cu, cv));
        }
    }
    Ok(TreeExpansion {
        prefactor,
        holomorphic: expand_in(&cs, &hol, n)?,
        antiholomorphic: Some(expand_in(&cs, &anti, n)?),
        coords: Some(cs),
    })
}

/// The bulk-boundary correlator expanded in the coordinates of `doubling(E)`.
///
/// ```
/// use bcft::latticecft::{build_boundary, tree_expansion, Charges, NarainModel};
/// use bcft::series::rat;
/// use bcft::trees::parse_colored;
///
/// let bd = build_boundary(&NarainModel::new(rat(2, 1)).unwrap(), 1).unwrap();
/// let e = parse_colored("t(c1) o2").unwrap();
/// let ex = tree_expansion(&bd, &e, &Charges::new(vec![(1, 0)], vec![(0, 1)]), 4).unwrap();
/// let lead = &ex.holomorphic.terms()[0];
/// assert_eq!(lead.exponents[0], bd.t_t((1, 0), (0, 1)) + bd.p_phipbar((1, 0), (1, 0)));
/// ```
pub fn tree_expansion(bd: &BoundaryData, e: &ColoredTree, charges: &Charges, n: u32) -> Result<TreeExpansion, LatticeError> {
    let f = tree_product(bd, e, charges)?;
    let prefactor = colored_kappa(bd, e, charges).0;
    let doubled = e.doubling()?;
    if doubled.size() < 2 {
        return Ok(trivial(prefactor));
    }
    let cs = CoordSystem::new(&doubled)?;
    Ok(TreeExpansion { prefactor, holomorphic: expand_in(&cs, &f, n)?, antiholomorphic: None, coords: Some(cs) })
}

#[cfg(test)]
mod tests {
    use super::super::build_boundary;
    use super::*;
    use crate::series::{principal_pow, rat};
    use crate::trees::{parse_colored, parse_tree};

    fn model() -> NarainModel {
        NarainModel::new(rat(2, 1)).unwrap()
    }

    #[test]
    fn bulk_vacuum_and_conservation() {
        let m = model();
        let z = C64::new(0.2, 0.7);
        assert_eq!(bulk_correlator(&m, (0, 0), &[((0, 0), z)]).unwrap(), one());
        assert_eq!(bulk_correlator(&m, (1, 0), &[((0, 0), z)]).unwrap(), C64::new(0.0, 0.0));
        assert!(bulk_correlator(&m, (0, 0), &[((1, 0), z), ((-1, 0), z)]).is_err());
    }

    #[test]
    fn mixed_trivial_charges() {
        let bd = build_boundary(&model(), 1).unwrap();
        let zs = [((0, 0), C64::new(0.2, 0.7)), ((0, 0), C64::new(-1.0, 0.1))];
        let xs = [((0, 0), 3.0), ((0, 0), -2.0)];
        assert!((mixed_correlator(&bd, 0, &zs, &xs).unwrap() - one()).norm() < 1e-15);
        assert!(mixed_correlator(&bd, 0, &zs, &[((0, 0), -2.0), ((0, 0), 3.0)]).is_err());
    }

    #[test]
    fn one_one_closed_form() {
        for rho in [1, -1] {
            let bd = build_boundary(&NarainModel::new(rat(3, 1)).unwrap(), rho).unwrap();
            let (a, b) = ((1, -1), (2, 1));
            let (z, x) = (C64::new(0.4, 0.9), -0.7);
            let v = mixed_correlator(&bd, bd.m_index((3, 0)), &[(a, z)], &[(b, x)]).unwrap();
            let xc = C64::new(x, 0.0);
            let g = bd.sigma(a)
                * bd.eta(a, b)
                * principal_pow(z - z.conj(), &bd.p_phipbar(a, a)).unwrap()
                * principal_pow(z - xc, &bd.p_t(a, b)).unwrap()
                * principal_pow(z.conj() - xc, &bd.phipbar_t(a, b)).unwrap();
            assert!((v - g).norm() < 1e-12 * g.norm());
        }
    }

    #[test]
    fn two_zero_closed_form() {
        let bd = build_boundary(&model(), -1).unwrap();
        let m = &bd.model;
        let (a, b) = ((1, 1), (0, -1));
        let (z1, z2) = (C64::new(0.4, 0.9), C64::new(-1.3, 0.2));
        let v = mixed_correlator(&bd, bd.m_index((1, 0)), &[(a, z1), (b, z2)], &[]).unwrap();
        let w = z1 - z2;
        let f = bd.sigma(a)
            * bd.sigma(b)
            * bd.eta(a, b)
            * principal_pow(w, &m.aa(a, b)).unwrap()
            * principal_pow(w.conj(), &m.bb(a, b)).unwrap()
            * principal_pow(z1 - z2.conj(), &bd.p_phipbar(a, b)).unwrap()
            * principal_pow(z1.conj() - z2, &bd.phipbar_p(a, b)).unwrap()
            * principal_pow(z1 - z1.conj(), &bd.p_phipbar(a, a)).unwrap()
            * principal_pow(z2 - z2.conj(), &bd.p_phipbar(b, b)).unwrap();
        assert!((v - f).norm() < 1e-12 * f.norm());
    }

    #[test]
    fn two_point_bulk_tree_is_exact() {
        let m = model();
        let a = parse_tree("21").unwrap();
        let ch = [(1, 0), (0, 1)];
        let ex = tree_expansion_bulk(&m, &a, &ch, 3).unwrap();
        assert_eq!(ex.holomorphic.len(), 1);
        let pts = [C64::new(0.1, 0.2), C64::new(1.5, -0.4)];
        let closed = bulk_correlator(&m, (1, 1), &[(ch[0], pts[0]), (ch[1], pts[1])]).unwrap();
        assert!((ex.evaluate_bulk(&pts).unwrap() - closed).norm() < 1e-13);
    }

    #[test]
    fn reversed_open_tree_leading_prefactor() {
        let bd = build_boundary(&model(), 1).unwrap();
        let ch = Charges::new(vec![(1, 0)], vec![(0, 1)]);
        let e = parse_colored("o2 t(c1)").unwrap();
        let ex = tree_expansion(&bd, &e, &ch, 2).unwrap();
        assert_eq!(ex.prefactor, bd.sigma((1, 0)) * bd.eta((0, 1), (1, 0)));
        assert_eq!(reference_tree(1, 1), parse_colored("t(c1) o2").unwrap());
    }
}
