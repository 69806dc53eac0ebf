//! Numeric analytic continuation along polyline paths: single-valuedness,
//! skew-symmetry, and the monodromy of the braid generators.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde_json::json;

use super::correlators::{colored_kappa, doubled_exponent, Charges};
use super::{bulk_correlator, BoundaryData, Charge, LatticeError, NarainModel, VerifyReport};
use crate::braids::{papb_generator, PaPBMorphism};
use crate::coords::{open_membership, phi};
use crate::series::{exponent_f64, principal_pow};
use crate::trees::DoubledLabel;

/// Segments used for every sampled path.
pub const SEGMENTS: usize = 64;

fn wrap(d: f64) -> f64 {
    let mut d = d % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    d
}

fn diffs(p: &[C64], pairs: &[(usize, usize)]) -> Result<Vec<C64>, LatticeError> {
    pairs
        .iter()
        .map(|&(u, v)| {
            let d = p[u] - p[v];
            if d.norm() == 0.0 {
                Err(LatticeError::Point(format!("path hits a collision of points {} and {}", u + 1, v + 1)))
            } else {
                Ok(d)
            }
        })
        .collect()
}

fn segment(a: &[C64], b: &[C64], pairs: &[(usize, usize)], theta: &mut [f64], depth: u32) -> Result<(), LatticeError> {
    let (da, db) = (diffs(a, pairs)?, diffs(b, pairs)?);
    let steps: Vec<f64> = da.iter().zip(&db).map(|(x, y)| wrap(y.arg() - x.arg())).collect();
    if steps.iter().any(|s| s.abs() > 0.5) {
        if depth > 40 {
            return Err(LatticeError::Point("path passes too close to a collision".into()));
        }
        let mid: Vec<C64> = a.iter().zip(b).map(|(x, y)| (x + y) * 0.5).collect();
        segment(a, &mid, pairs, theta, depth + 1)?;
        return segment(&mid, b, pairs, theta, depth + 1);
    }
    for (t, s) in theta.iter_mut().zip(steps) {
        *t += s;
    }
    Ok(())
}

/// Continuous arguments of `p[u] - p[v]` at the last vertex of a polyline,
/// starting from principal values at the first.
pub fn continue_args(vertices: &[Vec<C64>], pairs: &[(usize, usize)]) -> Result<Vec<f64>, LatticeError> {
    let first = vertices.first().ok_or_else(|| LatticeError::Point("empty path".into()))?;
    let mut theta: Vec<f64> = diffs(first, pairs)?.iter().map(|d| d.arg()).collect();
    for w in vertices.windows(2) {
        segment(&w[0], &w[1], pairs, &mut theta, 0)?;
    }
    Ok(theta)
}

fn circle(center: C64, start: C64, turn: f64) -> Vec<C64> {
    (0..=SEGMENTS).map(|k| center + (start - center) * C64::from_polar(1.0, turn * k as f64 / SEGMENTS as f64)).collect()
}

fn lerp(a: C64, b: C64) -> Vec<C64> {
    (0..=SEGMENTS).map(|k| a + (b - a) * (k as f64 / SEGMENTS as f64)).collect()
}

fn paired_value(theta: f64, modulus: f64, a: f64, abar: f64, theta_bar: f64) -> C64 {
    C64::from_polar(modulus.powf(a + abar), a * theta + abar * theta_bar)
}

/// Continues a bulk correlator around closed loops `z_i ↦ z_j + (z_i - z_j)e^{2πit}`
/// and compares with the starting value.
pub fn single_valuedness_check(
    model: &NarainModel,
    charges: &[Charge],
    samples: &[Vec<C64>],
    tol: f64,
) -> Result<VerifyReport, LatticeError> {
    let r = charges.len();
    let dual = charges.iter().fold((0, 0), |a, c| (a.0 + c.0, a.1 + c.1));
    let mut report = VerifyReport::new("single-valuedness", json!({ "charges": charges, "loops": "all ordered pairs" }), tol);
    let mut pairs = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            pairs.push((2 * i, 2 * j));
            pairs.push((2 * i + 1, 2 * j + 1));
        }
    }
    for pts in samples {
        let start = bulk_correlator(model, dual, &charges.iter().copied().zip(pts.iter().copied()).collect::<Vec<_>>())?;
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                let path: Vec<Vec<C64>> = circle(pts[j], pts[i], 2.0 * PI)
                    .into_iter()
                    .map(|zi| {
                        let mut p = pts.clone();
                        p[i] = zi;
                        phi(&p, &[])
                    })
                    .collect();
                let theta = continue_args(&path, &pairs)?;
                let end = path.last().unwrap();
                let mut v = C64::new(1.0, 0.0);
                for (k, (a, b)) in (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).enumerate() {
                    v *= model.epsilon(charges[a], charges[b]) as f64;
                    let m = (end[2 * a] - end[2 * b]).norm();
                    let (s, sb) = (exponent_f64(&model.aa(charges[a], charges[b])), exponent_f64(&model.bb(charges[a], charges[b])));
                    v *= paired_value(theta[2 * k], m, s, sb, theta[2 * k + 1]);
                }
                report.push((v - start).norm() / start.norm().max(f64::MIN_POSITIVE));
            }
        }
    }
    Ok(report.finish())
}

/// Rotates `z_1, z_2` a half turn counterclockwise about their midpoint and
/// compares the continued `C_{αβ}` with `C_{βα}` and its phase with `ε(β,α)/ε(α,β)`.
pub fn skew_symmetry_check(
    model: &NarainModel,
    alpha: Charge,
    beta: Charge,
    samples: &[(C64, C64)],
    tol: f64,
) -> Result<VerifyReport, LatticeError> {
    let dual = (alpha.0 + beta.0, alpha.1 + beta.1);
    let ratio = (model.epsilon(beta, alpha) * model.epsilon(alpha, beta)) as f64;
    let mut report = VerifyReport::new("skew", json!({ "alpha": alpha, "beta": beta, "epsilon_ratio": ratio }), tol);
    let (s, sb) = (exponent_f64(&model.aa(alpha, beta)), exponent_f64(&model.bb(alpha, beta)));
    for &(z1, z2) in samples {
        let mid = (z1 + z2) * 0.5;
        let path: Vec<Vec<C64>> =
            circle(mid, z1, PI).into_iter().zip(circle(mid, z2, PI)).map(|(a, b)| phi(&[a, b], &[])).collect();
        let theta = continue_args(&path, &[(0, 2), (1, 3)])?;
        let m = (z1 - z2).norm();
        let eps = model.epsilon(alpha, beta) as f64;
        let continued = eps * paired_value(theta[0], m, s, sb, theta[1]);
        let start = eps * paired_value((z1 - z2).arg(), m, s, sb, (z1 - z2).conj().arg());
        let phase = continued / start;
        let swapped = bulk_correlator(model, dual, &[(beta, z1), (alpha, z2)])?;
        let e1 = (continued - swapped).norm() / swapped.norm();
        let e2 = (phase - ratio).norm();
        report.push(e1.max(e2));
    }
    Ok(report.finish())
}

/// A generator of the colored braid groupoid with a physical path realizing it.
#[derive(Clone, Debug)]
pub struct GeneratorPath {
    pub name: String,
    pub morphism: PaPBMorphism,
    /// Polyline vertices `(z_1..z_r, x_{r+1}..)`.
    pub vertices: Vec<(Vec<C64>, Vec<f64>)>,
}

/// The sampled path of one of `alpha_o, alpha_c, sigma, p, q`.
pub fn generator_path(name: &str) -> Result<GeneratorPath, LatticeError> {
    let morphism = papb_generator(name)?;
    let i = C64::new(0.0, 1.0);
    let c = |re: f64, im: f64| C64::new(re, im);
    let t = |k: usize| k as f64 / SEGMENTS as f64;
    let vertices: Vec<(Vec<C64>, Vec<f64>)> = match name {
        "p" => (0..=SEGMENTS).map(|k| (vec![c(4.0, 1.0)], vec![8.0 * t(k)])).collect(),
        "q" => lerp(c(0.25, 1.0), c(8.0, 1.0)).into_iter().map(|z1| (vec![z1, i], vec![])).collect(),
        "sigma" | "σ" => {
            let mid = c(0.125, 1.0);
            circle(mid, c(0.25, 1.0), PI).into_iter().zip(circle(mid, i, PI)).map(|(a, b)| (vec![a, b], vec![])).collect()
        }
        "alpha_o" | "αo" => (0..=SEGMENTS).map(|k| (vec![], vec![1.5 + 2.5 * t(k), 1.0, 0.0])).collect(),
        _ => lerp(c(0.11, 1.0), c(0.1, 1.0))
            .into_iter()
            .zip(lerp(c(0.1, 1.0), c(0.01, 1.0)))
            .map(|(z1, z2)| (vec![z1, z2, i], vec![]))
            .collect(),
    };
    Ok(GeneratorPath { name: name.into(), morphism, vertices })
}

/// Outcome of continuing a tree correlator along a generator path.
#[derive(Clone, Debug)]
pub struct MonodromyReport {
    pub generator: String,
    /// Relative error between the continued source correlator and the target correlator.
    pub value_error: f64,
    /// Signed crossing numbers measured from the continued arguments.
    pub measured: BTreeMap<(DoubledLabel, DoubledLabel), i32>,
    /// Signed crossing numbers read from the braid word.
    pub expected: BTreeMap<(DoubledLabel, DoubledLabel), i32>,
    pub passed: bool,
}

/// Continues `κ_E Π (w_u - w_v)^{q_uv}`, oriented along `doubling(E)`, along the
/// path of a generator `E → E'` and compares with the same product for `E'`.
pub fn monodromy_check(bd: &BoundaryData, gen: &GeneratorPath, charges: &Charges, tol: f64) -> Result<MonodromyReport, LatticeError> {
    let m = &gen.morphism;
    let (r, s) = m.source.rs();
    if charges.rs() != (r, s) {
        return Err(LatticeError::Arity { expected: r + s, got: charges.bulk.len() + charges.boundary.len() });
    }
    let (first, last) = (gen.vertices.first().unwrap(), gen.vertices.last().unwrap());
    if !open_membership(&m.source, &first.0, &first.1)?.in_u || !open_membership(&m.target, &last.0, &last.1)?.in_u {
        return Err(LatticeError::Point(format!("path of {} does not join the two regions", gen.name)));
    }
    let src = m.source.doubled_leaf_order()?;
    let tgt = m.target.doubled_leaf_order()?;
    let idx = |l: DoubledLabel| l.encode(r as u32) as usize - 1;
    let mut pairs = Vec::new();
    let mut labels = Vec::new();
    for (a, &u) in src.iter().enumerate() {
        for &v in &src[a + 1..] {
            pairs.push((idx(u), idx(v)));
            labels.push((u, v));
        }
    }
    let path: Vec<Vec<C64>> = gen.vertices.iter().map(|(z, x)| phi(z, x)).collect();
    let theta = continue_args(&path, &pairs)?;
    let end = path.last().unwrap();
    let pos = |l: DoubledLabel| tgt.iter().position(|&x| x == l).unwrap();
    let mut continued = colored_kappa(bd, &m.source, charges).0;
    let mut target = colored_kappa(bd, &m.target, charges).0;
    let mut measured = BTreeMap::new();
    let mut crossing_error: f64 = 0.0;
    for (k, &(u, v)) in labels.iter().enumerate() {
        let q = doubled_exponent(bd, u, v, charges);
        let d = end[idx(u)] - end[idx(v)];
        let d_tgt = if pos(u) < pos(v) { d } else { -d };
        continued *= C64::from_polar(d.norm().powf(exponent_f64(&q)), exponent_f64(&q) * theta[k]);
        target *= principal_pow(d_tgt, &q)?;
        let c = (theta[k] - d_tgt.arg()) / PI;
        crossing_error = crossing_error.max((c - c.round()).abs());
        let c = c.round() as i32;
        if c != 0 {
            measured.insert(if u <= v { (u, v) } else { (v, u) }, c);
        }
    }
    let expected = m.abelianization();
    let value_error = (continued - target).norm() / target.norm();
    let passed = value_error <= tol && crossing_error < 1e-9 && measured == expected;
    Ok(MonodromyReport { generator: gen.name.clone(), value_error, measured, expected, passed })
}

#[cfg(test)]
mod tests {
    use super::super::build_boundary;
    use super::*;
    use crate::series::rat;

    #[test]
    fn winding_is_tracked() {
        let path: Vec<Vec<C64>> = circle(C64::new(0.0, 0.0), C64::new(1.0, 0.0), 4.0 * PI)
            .into_iter()
            .map(|z| vec![z, C64::new(0.0, 0.0)])
            .collect();
        let th = continue_args(&path, &[(0, 1)]).unwrap();
        assert!((th[0] - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn loops_return() {
        let m = NarainModel::new(rat(3, 2)).unwrap();
        let pts = vec![vec![C64::new(0.3, 0.1), C64::new(-1.0, 0.4), C64::new(2.0, -1.0)]];
        let rep = single_valuedness_check(&m, &[(1, 2), (-1, 1), (0, -3)], &pts, 1e-12).unwrap();
        assert!(rep.passed, "{}", rep.max_error);
    }

    #[test]
    fn skew_pairs() {
        let m = NarainModel::new(rat(2, 1)).unwrap();
        let pts = [(C64::new(0.3, 0.1), C64::new(-1.0, 0.4))];
        let rep = skew_symmetry_check(&m, (1, 0), (0, 1), &pts, 1e-10).unwrap();
        assert!(rep.passed, "{}", rep.max_error);
        assert_eq!(rep.parameters["epsilon_ratio"], -1.0);
    }

    #[test]
    fn generators_act_by_their_words() {
        let bd = build_boundary(&NarainModel::new(rat(2, 1)).unwrap(), 1).unwrap();
        let cases = [
            ("p", Charges::new(vec![(1, 1)], vec![(2, 0)])),
            ("q", Charges::new(vec![(1, 0), (1, -1)], vec![])),
            ("sigma", Charges::new(vec![(1, 2), (0, 1)], vec![])),
            ("alpha_o", Charges::new(vec![], vec![(1, 0), (2, 1), (-1, 0)])),
            ("alpha_c", Charges::new(vec![(1, 0), (0, 1), (1, 1)], vec![])),
        ];
        for (name, ch) in cases {
            let rep = monodromy_check(&bd, &generator_path(name).unwrap(), &ch, 1e-10).unwrap();
            assert!(rep.passed, "{name}: {rep:?}");
        }
    }
}
