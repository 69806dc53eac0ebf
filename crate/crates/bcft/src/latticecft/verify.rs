//! Verification reports and the bootstrap and consistency checks.

use std::time::Duration;

use num_complex::Complex64 as C64;
use serde::Deserialize;
use serde_json::{json, Value};

use super::correlators::{label_product, tree_product, Charges};
use super::sampling::OpenPoint;
use super::{
    build_boundary, bulk_correlator, mixed_correlator, tree_expansion, tree_expansion_bulk, BoundaryData, Charge,
    LatticeError, NarainModel,
};
use crate::coords::phi;
use crate::series::{evaluate_closed, parse_exponent, phase_pi, BranchPlan, PowerProduct};
use crate::trees::{parse_colored, ColoredTree, DoubledLabel, ParsedTree, Tree};

/// Tolerance for unit-complex phase comparisons.
pub const PHASE_TOL: f64 = 1e-10;

/// Outcome of one verification run.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub check: String,
    pub parameters: Value,
    pub errors: Vec<f64>,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub failures: Vec<String>,
    pub extra: serde_json::Map<String, Value>,
    pub runtime: Option<Duration>,
}

impl VerifyReport {
    pub fn new(check: &str, parameters: Value, tolerance: f64) -> VerifyReport {
        VerifyReport {
            check: check.into(),
            parameters,
            errors: Vec::new(),
            max_error: 0.0,
            tolerance,
            passed: true,
            failures: Vec::new(),
            extra: serde_json::Map::new(),
            runtime: None,
        }
    }

    pub fn push(&mut self, err: f64) {
        self.errors.push(err);
    }

    /// Records a failure that is not captured by the error list.
    pub fn fail(&mut self, msg: String) {
        self.passed = false;
        self.failures.push(msg);
    }

    pub fn finish(mut self) -> VerifyReport {
        self.max_error = self.errors.iter().copied().fold(0.0, f64::max);
        if self.errors.iter().any(|e| e.is_nan()) {
            self.max_error = f64::NAN;
        }
        self.passed = self.passed && self.errors.iter().all(|&e| e <= self.tolerance);
        self
    }

    /// JSON form; the runtime is left out so that reruns are byte-identical.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "check": self.check,
            "parameters": self.parameters,
            "samples": self.errors.len(),
            "errors": self.errors,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "failures": self.failures,
        });
        for (k, x) in &self.extra {
            v[k] = x.clone();
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{}: {} ({} samples, max error {:.3e}, tolerance {:.1e})",
            self.check,
            if self.passed { "PASS" } else { "FAIL" },
            self.errors.len(),
            self.max_error,
            self.tolerance
        );
        if let Some(t) = self.runtime {
            s += &format!(" in {:.3}s", t.as_secs_f64());
        }
        for f in self.failures.iter().take(10) {
            s += &format!("\n  {f}");
        }
        s
    }
}

fn add(a: Charge, b: Charge) -> Charge {
    (a.0 + b.0, a.1 + b.1)
}

fn box_charges(b: i64) -> Vec<Charge> {
    (-b..=b).flat_map(|n| (-b..=b).map(move |m| (n, m))).collect()
}

/// Conditions (1)-(3) on `σ` and `η` for all `α, β` in `[-b, b]²`.
pub fn bootstrap_check(bd: &BoundaryData, b: i64) -> VerifyReport {
    let one = C64::new(1.0, 0.0);
    let mut report = VerifyReport::new("bootstrap", json!({ "rho": bd.rho(), "box": b }), 1e-12);
    let e0 = (bd.sigma((0, 0)) - one).norm();
    if e0 > 1e-12 {
        report.fail(format!("σ(0) = {}", bd.sigma((0, 0))));
    }
    let m = &bd.model;
    for &a in &box_charges(b) {
        for &c in &box_charges(b) {
            let lhs2 = m.epsilon(a, c) as f64 * bd.sigma(add(a, c)) * phase_pi(&bd.phipbar_p(a, c));
            let rhs2 = bd.sigma(a) * bd.sigma(c) * bd.eta(a, c);
            let e2 = (lhs2 - rhs2).norm();
            let e3 = (bd.eta(a, c) / bd.eta(c, a) - bd.c(a, c)).norm();
            if e2 > 1e-12 && report.failures.len() < 5 {
                report.failures.push(format!("condition (2) fails at {a:?}, {c:?}"));
            }
            if e3 > 1e-12 && report.failures.len() < 5 {
                report.failures.push(format!("condition (3) fails at {a:?}, {c:?}"));
            }
            report.push(e0.max(e2).max(e3));
        }
    }
    report.finish()
}

/// `c(α, β) = 1` for every `α ∈ ker t` and `β` in `[-b, b]²`.
pub fn ker_t_check(bd: &BoundaryData, b: i64) -> VerifyReport {
    let mut report = VerifyReport::new("ker-t", json!({ "rho": bd.rho(), "box": b }), 1e-12);
    for &a in box_charges(b).iter().filter(|a| bd.in_kernel(**a)) {
        for &c in &box_charges(b) {
            report.push((bd.c(a, c) - C64::new(1.0, 0.0)).norm());
        }
    }
    report.finish()
}

fn bulk_leaf_pairs(a: &Tree) -> Vec<(u32, u32)> {
    let order = a.leaves();
    let mut out = Vec::new();
    for (i, &u) in order.iter().enumerate() {
        for &v in &order[i + 1..] {
            out.push((u, v));
        }
    }
    out
}

/// The phase `(label-ordered product) / (tree-ordered product)` predicted from
/// the pairs that the tree reverses.
pub fn predicted_phase(bd: &BoundaryData, tree: &ParsedTree, charges: &Charges) -> Result<C64, LatticeError> {
    let mut phase = C64::new(1.0, 0.0);
    match tree {
        ParsedTree::Plain(a) => {
            for (u, v) in bulk_leaf_pairs(a).into_iter().filter(|(u, v)| u > v) {
                if bd.model.lattice_pairing(charges.at(u), charges.at(v)) % 2 != 0 {
                    phase = -phase;
                }
            }
        }
        ParsedTree::Colored(e) => {
            let r = charges.bulk.len() as u32;
            let order = e.doubled_leaf_order()?;
            for (i, &v) in order.iter().enumerate() {
                for &u in &order[i + 1..] {
                    if u.encode(r) > v.encode(r) {
                        continue;
                    }
                    let q = super::doubled_exponent(bd, u, v, charges);
                    phase *= match (u, v) {
                        (DoubledLabel::Z(_), DoubledLabel::Z(_)) => continue,
                        (DoubledLabel::ZBar(i), DoubledLabel::ZBar(j)) => {
                            let lat = bd.model.lattice_pairing(charges.at(i), charges.at(j));
                            C64::new(if lat % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
                        }
                        (DoubledLabel::Z(_), _) => phase_pi(&q),
                        _ => phase_pi(&-q),
                    };
                }
            }
        }
    }
    Ok(phase)
}

fn doubled_plan(r: usize) -> BranchPlan {
    let mut pairs = Vec::new();
    for i in 1..=r as u32 {
        for j in i + 1..=r as u32 {
            pairs.push(((2 * i - 1, 2 * j - 1), (2 * i, 2 * j)));
            pairs.push(((2 * j - 1, 2 * i - 1), (2 * j, 2 * i)));
        }
    }
    BranchPlan { pairs }
}

fn bulk_product(model: &NarainModel, pairs: &[(u32, u32)], charges: &Charges) -> PowerProduct {
    let mut f = PowerProduct::one();
    for &(u, v) in pairs {
        let (a, b) = (charges.at(u), charges.at(v));
        f.mul_pair(2 * u - 1, 2 * v - 1, model.aa(a, b));
        f.mul_pair(2 * u, 2 * v, model.bb(a, b));
    }
    f
}

/// The measured ratio of label-ordered and tree-ordered products at a point.
pub fn measured_phase(bd: &BoundaryData, tree: &ParsedTree, charges: &Charges, p: &OpenPoint) -> Result<C64, LatticeError> {
    let r = charges.bulk.len();
    let pt = phi(&p.bulk, &p.boundary);
    let (num, den) = match tree {
        ParsedTree::Plain(a) => {
            let mut label = Vec::new();
            for u in 1..=r as u32 {
                for v in u + 1..=r as u32 {
                    label.push((u, v));
                }
            }
            (bulk_product(&bd.model, &label, charges), bulk_product(&bd.model, &bulk_leaf_pairs(a), charges))
        }
        ParsedTree::Colored(e) => (label_product(bd, charges), tree_product(bd, e, charges)?),
    };
    let plan = match tree {
        ParsedTree::Plain(_) => doubled_plan(r),
        ParsedTree::Colored(_) => BranchPlan::default(),
    };
    Ok(evaluate_closed(&num, &pt, &plan)? / evaluate_closed(&den, &pt, &plan)?)
}

fn tree_text(t: &ParsedTree) -> String {
    match t {
        ParsedTree::Plain(a) => crate::trees::format_tree(a),
        ParsedTree::Colored(e) => e.format(),
    }
}

fn c64_json(z: C64) -> Value {
    json!([z.re, z.im])
}

/// Compares each tree expansion with the closed-form correlator at the given
/// points of its region, and the measured inter-region phases with their predictions.
pub fn expansion_consistency_check(
    bd: &BoundaryData,
    charges: &Charges,
    trees: &[ParsedTree],
    samples: &[Vec<OpenPoint>],
    n: u32,
    tol: f64,
) -> Result<VerifyReport, LatticeError> {
    let names: Vec<String> = trees.iter().map(tree_text).collect();
    let params = json!({
        "R_squared": bd.model.r_squared().to_string(),
        "reflection": bd.rho(),
        "bulk_charges": charges.bulk,
        "boundary_charges": charges.boundary,
        "trees": names,
        "truncation": n,
    });
    let mut report = VerifyReport::new("expansion-consistency", params, tol);
    let mut phases = Vec::new();
    let mut measured_by_tree = Vec::new();
    for ((tree, pts), name) in trees.iter().zip(samples).zip(&names) {
        let predicted = predicted_phase(bd, tree, charges)?;
        let mut measured = None;
        match tree {
            ParsedTree::Plain(a) => {
                let ex = tree_expansion_bulk(&bd.model, a, &charges.bulk, n)?;
                for p in pts {
                    let ins: Vec<(Charge, C64)> = charges.bulk.iter().copied().zip(p.bulk.iter().copied()).collect();
                    let closed = bulk_correlator(&bd.model, charges.total(), &ins)?;
                    report.push((ex.evaluate_bulk(&p.bulk)? - closed).norm() / closed.norm());
                    let ph = measured_phase(bd, tree, charges, p)?;
                    if (ph - predicted).norm() > PHASE_TOL {
                        report.fail(format!("{name}: phase {ph} differs from {predicted}"));
                    }
                    measured.get_or_insert(ph);
                }
            }
            ParsedTree::Colored(e) => {
                let ex = tree_expansion(bd, e, charges, n)?;
                for p in pts {
                    let bulk: Vec<(Charge, C64)> = charges.bulk.iter().copied().zip(p.bulk.iter().copied()).collect();
                    let bnd: Vec<(Charge, f64)> = charges.boundary.iter().copied().zip(p.boundary.iter().copied()).collect();
                    let closed = mixed_correlator(bd, bd.m_index(charges.total()), &bulk, &bnd)?;
                    report.push((ex.evaluate_open(&p.bulk, &p.boundary)? - closed).norm() / closed.norm());
                    let ph = measured_phase(bd, tree, charges, p)?;
                    if (ph - predicted).norm() > PHASE_TOL {
                        report.fail(format!("{name}: phase {ph} differs from {predicted}"));
                    }
                    measured.get_or_insert(ph);
                }
            }
        }
        phases.push(json!({
            "tree": name,
            "measured": measured.map(c64_json),
            "predicted": c64_json(predicted),
        }));
        measured_by_tree.push(measured);
    }
    let region = region_phase(bd, charges, trees, &measured_by_tree);
    if let Some((lhs, rhs)) = region {
        if (lhs - rhs).norm() > PHASE_TOL {
            report.fail(format!("inter-region phase {lhs} differs from {rhs}"));
        }
        report.extra.insert("region_phase".into(), json!({ "measured": c64_json(lhs), "predicted": c64_json(rhs) }));
    }
    report.extra.insert("phases".into(), Value::Array(phases));
    Ok(report.finish())
}

/// The measured phase between the two regions of a `(1,1)` or `(2,0)` pair,
/// with its closed-form prediction, when both regions are among `trees`.
fn region_phase(bd: &BoundaryData, charges: &Charges, trees: &[ParsedTree], measured: &[Option<C64>]) -> Option<(C64, C64)> {
    let find = |s: &str| {
        let t = parse_colored(s).ok()?;
        let k = trees.iter().position(|x| matches!(x, ParsedTree::Colored(e) if *e == t))?;
        measured[k]
    };
    match charges.rs() {
        (1, 1) => {
            let (a, b) = (charges.bulk[0], charges.boundary[0]);
            let ratio = find("o2 t(c1)")? / find("t(c1) o2")?;
            let k = bd.model.lattice_pairing(a, b) + bd.lattice_phi(a, b);
            Some((ratio, phase_pi(&crate::series::rat(k, 1))))
        }
        (2, 0) => {
            let (a, b) = (charges.bulk[0], charges.bulk[1]);
            let ratio = find("t(c1 c2)")? / find("t(c1) t(c2)")?;
            Some((ratio, phase_pi(&-bd.phipbar_p(a, b))))
        }
        _ => None,
    }
}

/// The model configuration file.
#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct ModelConfig {
    #[serde(rename = "R_squared")]
    pub r_squared: String,
    #[serde(default = "default_reflection")]
    pub reflection: String,
    #[serde(default)]
    pub charges: Vec<[i64; 2]>,
    #[serde(default = "default_truncation")]
    pub truncation: u32,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_reflection() -> String {
    "+1".into()
}

fn default_truncation() -> u32 {
    30
}

fn default_tolerance() -> f64 {
    1e-6
}

impl ModelConfig {
    pub fn model(&self) -> Result<NarainModel, LatticeError> {
        NarainModel::new(parse_exponent(&self.r_squared).ok_or(LatticeError::Radius)?)
    }

    pub fn rho(&self) -> Result<i64, LatticeError> {
        match self.reflection.trim() {
            "+1" | "1" | "+" => Ok(1),
            "-1" | "-" => Ok(-1),
            other => Err(LatticeError::Reflection(other.parse().unwrap_or(0))),
        }
    }

    pub fn boundary(&self) -> Result<BoundaryData, LatticeError> {
        build_boundary(&self.model()?, self.rho()?)
    }

    pub fn charges(&self) -> Vec<Charge> {
        self.charges.iter().map(|c| (c[0], c[1])).collect()
    }
}

/// The trees of a colored tree list, as parsed trees.
pub fn colored(trees: &[ColoredTree]) -> Vec<ParsedTree> {
    trees.iter().cloned().map(ParsedTree::Colored).collect()
}
