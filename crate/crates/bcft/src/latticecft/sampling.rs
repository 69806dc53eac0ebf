//! Seeded sampling of points inside tree regions.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;

use super::LatticeError;
use crate::coords::{open_membership, phi, CoordSystem, CoordValues};
use crate::trees::{ColoredTree, Tree};

const MAX_ATTEMPTS: usize = 2_000_000;

/// Bounds on the certificate sum `1 - margin` and on coordinate phases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSpec {
    pub min_sum: f64,
    pub max_sum: f64,
    /// Largest `|arg|` allowed for `x_A` and every `ζ_e` in bulk sampling.
    pub max_phase: f64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { min_sum: 0.0, max_sum: 0.2, max_phase: PI }
    }
}

/// A point of `X_{r,s}(H̄)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenPoint {
    pub bulk: Vec<C64>,
    pub boundary: Vec<f64>,
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// `true` iff for every pair `u` left of `v`, `Arg x + Σ m_e Arg ζ_e + Arg(1 + P)`
/// equals the principal `Arg(w_u - w_v)`.
pub fn branch_compatible(cs: &CoordSystem, cv: &CoordValues, point: &[C64]) -> bool {
    let order = cs.tree().leaves();
    for (a, &u) in order.iter().enumerate() {
        for &v in &order[a + 1..] {
            let Ok(pf) = cs.pair_difference(u, v) else { return false };
            let mut arg = cv.x.arg() + (C64::new(1.0, 0.0) + pf.rest.eval(&cv.zeta)).arg();
            for (&m, z) in pf.monomial.iter().zip(&cv.zeta) {
                arg += m as f64 * z.arg();
            }
            let d = point[u as usize - 1] - point[v as usize - 1];
            if pf.sign < 0 || (arg - d.arg()).abs() > 1e-9 {
                return false;
            }
        }
    }
    true
}

/// Points of `U_A` drawn in coordinates: `|x_A| ∈ [0.5, 2]`, `z_A` in the unit
/// square, and ratios whose certificate sum lies in `[min_sum, max_sum]`.
pub fn sample_bulk_points<R: Rng + ?Sized>(
    tree: &Tree,
    rng: &mut R,
    count: usize,
    spec: SampleSpec,
) -> Result<Vec<Vec<C64>>, LatticeError> {
    let cs = CoordSystem::new(tree)?;
    let ne = cs.num_edges();
    let mut out = Vec::with_capacity(count);
    for _ in 0..MAX_ATTEMPTS {
        if out.len() == count {
            break;
        }
        let x = C64::from_polar(rng.random_range(0.5..2.0), rng.random_range(-spec.max_phase..spec.max_phase));
        let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let zeta: Vec<C64> = (0..ne)
            .map(|_| C64::from_polar(rng.random_range(0.01..spec.max_sum), rng.random_range(-spec.max_phase..spec.max_phase)))
            .collect();
        let radii: Vec<f64> = zeta.iter().map(|z| z.norm()).collect();
        let sum = 1.0 - cs.certificate(&radii).margin;
        if sum < spec.min_sum || sum > spec.max_sum {
            continue;
        }
        let cv = CoordValues { x, z, zeta };
        let point = cs.inverse(&cv);
        if cs.region_membership(&point).in_u {
            out.push(point);
        }
    }
    if out.len() < count {
        return Err(LatticeError::Sampling(format!("found {} of {count} points for {}", out.len(), crate::trees::format_tree(tree))));
    }
    Ok(out)
}

fn propose<R: Rng + ?Sized>(rng: &mut R, r: usize, s: usize) -> OpenPoint {
    let mut bulk: Vec<C64> = Vec::with_capacity(r);
    let mut anchors: Vec<f64> = Vec::new();
    for k in 0..r {
        let z = if k == 0 {
            C64::new(rng.random_range(-2.0..2.0), log_uniform(rng, 0.01, 3.0))
        } else {
            let base = bulk[rng.random_range(0..k)];
            let mut z = base + C64::from_polar(log_uniform(rng, 0.001, 4.0), rng.random_range(-PI..PI));
            if z.im <= 0.0 {
                z.im = log_uniform(rng, 0.01, 3.0);
            }
            z
        };
        anchors.push(z.re);
        bulk.push(z);
    }
    let mut boundary: Vec<f64> = Vec::with_capacity(s);
    for _ in 0..s {
        let x = if anchors.is_empty() {
            rng.random_range(-2.0..2.0)
        } else {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            anchors[rng.random_range(0..anchors.len())] + sign * log_uniform(rng, 0.001, 4.0)
        };
        anchors.push(x);
        boundary.push(x);
    }
    boundary.sort_by(|a, b| b.partial_cmp(a).unwrap());
    OpenPoint { bulk, boundary }
}

/// Points of `U_E^o` with certificate sum at most `spec.max_sum`, restricted to
/// where the factored expansion sits on the principal branch of every
/// tree-oriented difference.
pub fn sample_open_points<R: Rng + ?Sized>(
    e: &ColoredTree,
    rng: &mut R,
    count: usize,
    spec: SampleSpec,
) -> Result<Vec<OpenPoint>, LatticeError> {
    let (r, s) = e.rs();
    let doubled = e.doubling()?;
    let cs = if doubled.size() >= 2 { Some(CoordSystem::new(&doubled)?) } else { None };
    let mut out = Vec::with_capacity(count);
    for _ in 0..MAX_ATTEMPTS {
        if out.len() == count {
            break;
        }
        let p = propose(rng, r, s);
        if p.boundary.windows(2).any(|w| w[0] <= w[1]) {
            continue;
        }
        let m = open_membership(e, &p.bulk, &p.boundary)?;
        if !m.in_u || 1.0 - m.margin > spec.max_sum || 1.0 - m.margin < spec.min_sum {
            continue;
        }
        if let Some(cs) = &cs {
            let pt = phi(&p.bulk, &p.boundary);
            if !branch_compatible(cs, &cs.psi(&pt)?, &pt) {
                continue;
            }
        }
        out.push(p);
    }
    if out.len() < count {
        return Err(LatticeError::Sampling(format!("found {} of {count} points for {e}", out.len())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{parse_colored, parse_tree};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bulk_samples_are_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = parse_tree("(1(23))4").unwrap();
        let cs = CoordSystem::new(&a).unwrap();
        for p in sample_bulk_points(&a, &mut rng, 20, SampleSpec::default()).unwrap() {
            let m = cs.region_membership(&p);
            assert!(m.in_u && m.margin >= 0.8 - 1e-12);
        }
    }

    #[test]
    fn open_samples_are_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for t in ["t(c1) o2", "o2 t(c1)", "t(c1 c2)", "t(c1) t(c2)"] {
            let e = parse_colored(t).unwrap();
            let pts = sample_open_points(&e, &mut rng, 5, SampleSpec::default()).unwrap();
            for p in pts {
                assert!(open_membership(&e, &p.bulk, &p.boundary).unwrap().in_u);
            }
        }
    }
}
