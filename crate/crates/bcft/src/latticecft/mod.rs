//! The compactified free boson on the lattice `II_{1,1}` with Dirichlet or
//! Neumann boundary data.
//!
//! A charge `α = n e_1 + m e_2` has left and right momenta
//! `a = (n/R + mR)/√2`, `ā = (n/R - mR)/√2`. Every exponent that enters a
//! correlator is a rational combination of `nn'/R²`, `nm'`, `mn'`, `mm'R²`,
//! so with `R²` rational all exponents are exact.
//!
//! ```
//! use bcft::latticecft::{build_boundary, NarainModel};
//! use bcft::series::rat;
//!
//! let model = NarainModel::new(rat(2, 1)).unwrap();
//! assert_eq!(model.lattice_pairing((1, 0), (0, 1)), 1);
//! assert_eq!(model.aa((1, 0), (0, 1)), rat(1, 2));
//! assert_eq!(model.epsilon((0, 1), (1, 0)), -1);
//! let bd = build_boundary(&model, 1).unwrap();
//! assert_eq!(bd.sigma((0, 0)), num_complex::Complex64::new(1.0, 0.0));
//! ```

mod continuation;
mod correlators;
mod sampling;
mod verify;

pub use continuation::{
    continue_args, generator_path, monodromy_check, single_valuedness_check, skew_symmetry_check, GeneratorPath,
    MonodromyReport,
};
pub use correlators::{
    bulk_correlator, bulk_kappa, colored_kappa, doubled_exponent, label_product, mixed_correlator, reference_tree,
    tree_expansion, tree_expansion_bulk, tree_product, Charges, TreeExpansion,
};
pub use sampling::{branch_compatible, sample_bulk_points, sample_open_points, OpenPoint, SampleSpec};
pub use verify::{
    bootstrap_check, colored, expansion_consistency_check, ker_t_check, measured_phase, predicted_phase, ModelConfig,
    VerifyReport, PHASE_TOL,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::braids::BraidError;
use crate::coords::CoordError;
use crate::series::{phase_pi, Exponent, SeriesError};
use crate::trees::TreeError;

/// A lattice vector `n e_1 + m e_2` as `(n, m)`.
pub type Charge = (i64, i64);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("R² must be a positive rational")]
    Radius,
    #[error("reflection must be +1 or -1, got {0}")]
    Reflection(i64),
    #[error("ε' is not symmetric at {0:?}, {1:?}")]
    NotSymmetric(Charge, Charge),
    #[error("charges do not add up to the dual charge")]
    Conservation,
    #[error("expected {expected} charges, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid point: {0}")]
    Point(String),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Coord(#[from] CoordError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Braid(#[from] BraidError),
}

fn int(k: i64) -> Exponent {
    BigRational::from_integer(BigInt::from(k))
}

/// The Narain model at radius `R` with `R²` rational.
#[derive(Clone, Debug, PartialEq)]
pub struct NarainModel {
    r2: Exponent,
}

impl NarainModel {
    pub fn new(r2: Exponent) -> Result<NarainModel, LatticeError> {
        if !r2.is_positive() {
            return Err(LatticeError::Radius);
        }
        Ok(NarainModel { r2 })
    }

    pub fn r_squared(&self) -> &Exponent {
        &self.r2
    }

    /// `(α, β)_lat` for the Gram matrix `[[0,1],[1,0]]`.
    pub fn lattice_pairing(&self, a: Charge, b: Charge) -> i64 {
        a.0 * b.1 + a.1 * b.0
    }

    fn parts(&self, a: Charge, b: Charge) -> [Exponent; 4] {
        [int(a.0 * b.0) / &self.r2, int(a.0 * b.1), int(a.1 * b.0), int(a.1 * b.1) * &self.r2]
    }

    /// `a(α)a(β) = (pα, pβ)`.
    pub fn aa(&self, a: Charge, b: Charge) -> Exponent {
        let [x, y, z, w] = self.parts(a, b);
        (x + y + z + w) / int(2)
    }

    /// `ā(α)ā(β) = (p̄α, p̄β)`.
    pub fn bb(&self, a: Charge, b: Charge) -> Exponent {
        let [x, y, z, w] = self.parts(a, b);
        (x - y - z + w) / int(2)
    }

    /// `a(α)ā(β)`.
    pub fn ab(&self, a: Charge, b: Charge) -> Exponent {
        let [x, y, z, w] = self.parts(a, b);
        (x - y + z - w) / int(2)
    }

    /// `ā(α)a(β)`.
    pub fn ba(&self, a: Charge, b: Charge) -> Exponent {
        self.ab(b, a)
    }

    pub fn a(&self, c: Charge) -> f64 {
        let r = self.r2.to_f64().unwrap().sqrt();
        (c.0 as f64 / r + c.1 as f64 * r) / std::f64::consts::SQRT_2
    }

    pub fn abar(&self, c: Charge) -> f64 {
        let r = self.r2.to_f64().unwrap().sqrt();
        (c.0 as f64 / r - c.1 as f64 * r) / std::f64::consts::SQRT_2
    }

    /// Conformal weights `(h, h̄) = (a²/2, ā²/2)`.
    pub fn weights(&self, c: Charge) -> (Exponent, Exponent) {
        (self.aa(c, c) / int(2), self.bb(c, c) / int(2))
    }

    /// The bimultiplicative cocycle with `ε(e_2, e_1) = -1` and `ε(e_k, e_l) = 1` for `k ≤ l`.
    pub fn epsilon(&self, a: Charge, b: Charge) -> i64 {
        if (a.1 * b.0).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

/// Boundary data: reflection sign, the charge map `t`, the cocycle `η` on
/// `M = t(II_{1,1}) ≅ ℤ`, and the trivialization `σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryData {
    pub model: NarainModel,
    rho: i64,
    eta_generator: C64,
    sigma_generators: [C64; 2],
    overrides: BTreeMap<Charge, C64>,
}

/// Builds `η` from the commutator map and `σ` by trivializing `ε'`.
pub fn build_boundary(model: &NarainModel, rho: i64) -> Result<BoundaryData, LatticeError> {
    if rho != 1 && rho != -1 {
        return Err(LatticeError::Reflection(rho));
    }
    let mut bd = BoundaryData {
        model: model.clone(),
        rho,
        eta_generator: C64::new(1.0, 0.0),
        sigma_generators: [C64::new(1.0, 0.0); 2],
        overrides: BTreeMap::new(),
    };
    // M has rank one with basis f = t(g); the alternating form vanishes on (f, f),
    // so the basis rule η(f_i, f_j) = c(f_i, f_j) for i > j, 1 otherwise, gives η(f, f) = 1.
    let g = bd.m_generator();
    bd.eta_generator = if bd.c(g, g) == C64::new(1.0, 0.0) { C64::new(1.0, 0.0) } else { bd.c(g, g) };
    let basis = [(1, 0), (0, 1), (1, 1), (1, -1)];
    for &a in &basis {
        for &b in &basis {
            if (bd.eps_prime(a, b) - bd.eps_prime(b, a)).norm() > 1e-12 {
                return Err(LatticeError::NotSymmetric(a, b));
            }
        }
    }
    Ok(bd)
}

impl BoundaryData {
    pub fn rho(&self) -> i64 {
        self.rho
    }

    /// `(pα, φp̄β) = ρ a(α)ā(β)`.
    pub fn p_phipbar(&self, a: Charge, b: Charge) -> Exponent {
        self.model.ab(a, b) * int(self.rho)
    }

    /// `(φp̄α, pβ) = ρ ā(α)a(β)`.
    pub fn phipbar_p(&self, a: Charge, b: Charge) -> Exponent {
        self.model.ba(a, b) * int(self.rho)
    }

    /// `(pα, tβ)`.
    pub fn p_t(&self, a: Charge, b: Charge) -> Exponent {
        self.model.aa(a, b) + self.p_phipbar(a, b)
    }

    /// `(φp̄α, tβ)`.
    pub fn phipbar_t(&self, a: Charge, b: Charge) -> Exponent {
        self.phipbar_p(a, b) + self.model.bb(a, b)
    }

    /// `(tα, tβ)`.
    pub fn t_t(&self, a: Charge, b: Charge) -> Exponent {
        self.p_t(a, b) + self.phipbar_t(a, b)
    }

    /// `(α, φβ)_lat`.
    pub fn lattice_phi(&self, a: Charge, b: Charge) -> i64 {
        self.rho * (a.1 * b.0 - a.0 * b.1)
    }

    /// `t(α)` as a real number in the frame of `v`.
    pub fn t_value(&self, c: Charge) -> f64 {
        self.model.a(c) + self.rho as f64 * self.model.abar(c)
    }

    /// The coordinate of `tα` in `M ≅ ℤ`.
    pub fn m_index(&self, c: Charge) -> i64 {
        if self.rho == 1 {
            c.0
        } else {
            c.1
        }
    }

    /// A lattice vector whose image generates `M`.
    pub fn m_generator(&self) -> Charge {
        if self.rho == 1 {
            (1, 0)
        } else {
            (0, 1)
        }
    }

    /// Generator of `ker t`.
    pub fn kernel_generator(&self) -> Charge {
        if self.rho == 1 {
            (0, 1)
        } else {
            (1, 0)
        }
    }

    pub fn in_kernel(&self, c: Charge) -> bool {
        self.m_index(c) == 0
    }

    /// `c(α, β) = exp(-πi((α,β)_lat + (α,φβ)_lat))`.
    pub fn c(&self, a: Charge, b: Charge) -> C64 {
        phase_pi(&int(-(self.model.lattice_pairing(a, b) + self.lattice_phi(a, b))))
    }

    /// `η` on `M`, bimultiplicative in the indices.
    pub fn eta_m(&self, k: i64, l: i64) -> C64 {
        self.eta_generator.powi((k * l) as i32)
    }

    /// `η(tα, tβ)`.
    pub fn eta(&self, a: Charge, b: Charge) -> C64 {
        self.eta_m(self.m_index(a), self.m_index(b))
    }

    /// `ε'(α,β) = ε(α,β) η(tα,tβ)^{-1} exp(πi(φp̄α, pβ))`.
    pub fn eps_prime(&self, a: Charge, b: Charge) -> C64 {
        C64::new(self.model.epsilon(a, b) as f64, 0.0) / self.eta(a, b) * phase_pi(&self.phipbar_p(a, b))
    }

    fn sigma_walk(&self, c: Charge) -> C64 {
        let mut s = C64::new(1.0, 0.0);
        let mut at: Charge = (0, 0);
        let steps = [((1, 0), c.0), ((0, 1), c.1)];
        for (k, (e, count)) in steps.into_iter().enumerate() {
            let se = self.sigma_generators[k];
            for _ in 0..count.abs() {
                if count > 0 {
                    s = s * se / self.eps_prime(at, e);
                    at = (at.0 + e.0, at.1 + e.1);
                } else {
                    let prev = (at.0 - e.0, at.1 - e.1);
                    s = s * self.eps_prime(prev, e) / se;
                    at = prev;
                }
            }
        }
        s
    }

    /// `σ(α)` with `σ(0) = 1` and `ε'(α,β) = σ(α)σ(β)σ(α+β)^{-1}`.
    pub fn sigma(&self, c: Charge) -> C64 {
        if let Some(v) = self.overrides.get(&c) {
            return *v;
        }
        self.sigma_walk(c)
    }

    /// A copy with `σ` replaced at a single lattice point.
    pub fn with_sigma_at(&self, c: Charge, value: C64) -> BoundaryData {
        let mut out = self.clone();
        out.overrides.insert(c, value);
        out
    }
}
