//! The expansion map from power products to tree-adapted series.

use num_complex::Complex64 as C64;
use num_traits::Zero;

use super::{phase_pi, principal_pow, rat, Exponent, GenSeries, PowerProduct, SeriesError, Var};
use crate::coords::{CoordSystem, CoordValues, PairFactor};
use crate::trees::Tree;

/// Series variables of a coordinate system: `x`, `z`, then one `ζ_e` per edge.
pub fn series_vars(cs: &CoordSystem) -> Vec<Var> {
    let names = cs.var_names();
    let mut vars = vec![Var::scale(&names[0]), Var::translation(&names[1])];
    vars.extend(names[2..].iter().map(|n| Var::ratio(n)));
    vars
}

fn pair_series(cs: &CoordSystem, vars: &[Var], f: &PairFactor, s: &Exponent, n: u32) -> Result<GenSeries, SeriesError> {
    let mut one_plus = GenSeries::one(vars, n);
    for (e, c) in f.rest.terms() {
        let mut exps = vec![Exponent::zero(), Exponent::zero()];
        exps.extend(e.iter().map(|&k| rat(k as i64, 1)));
        let t = GenSeries::monomial(vars, n, &exps, &vec![0; vars.len()], C64::new(c as f64, 0.0))?;
        one_plus = one_plus.add(&t)?;
    }
    let mut lead = vec![s.clone(), Exponent::zero()];
    lead.extend(f.monomial.iter().map(|&k| s * rat(k as i64, 1)));
    let c = if f.sign < 0 { phase_pi(s) } else { C64::new(1.0, 0.0) };
    debug_assert_eq!(lead.len(), 2 + cs.num_edges());
    let mut out = one_plus.pow(s)?.mul_monomial(&lead, c)?;
    out.set_sign_flag(f.sign < 0);
    Ok(out)
}

fn point_series(cs: &CoordSystem, vars: &[Var], i: u32, n: u32) -> Result<GenSeries, SeriesError> {
    let mut out = GenSeries::var(vars, n, 1);
    for (e, c) in cs.q(i).terms() {
        let mut exps = vec![rat(1, 1), Exponent::zero()];
        exps.extend(e.iter().map(|&k| rat(k as i64, 1)));
        out = out.add(&GenSeries::monomial(vars, n, &exps, &vec![0; vars.len()], C64::new(c as f64, 0.0))?)?;
    }
    Ok(out)
}

fn check_points(cs: &CoordSystem, f: &PowerProduct) -> Result<(), SeriesError> {
    let n = f.num_points();
    if n as usize > cs.leaves() {
        return Err(SeriesError::TooFewLeaves(n, cs.leaves()));
    }
    Ok(())
}

/// `e_A(f)` truncated at order `n`, in the coordinates of `cs`.
pub fn expand_in(cs: &CoordSystem, f: &PowerProduct, n: u32) -> Result<GenSeries, SeriesError> {
    check_points(cs, f)?;
    let vars = series_vars(cs);
    let mut out = GenSeries::constant(&vars, n, f.constant);
    let mut flag = false;
    for (&(i, j), s) in &f.pairs {
        let pf = cs.pair_difference(i, j).map_err(|_| SeriesError::Uncertifiable(i, j))?;
        flag |= pf.sign < 0;
        out = out.mul(&pair_series(cs, &vars, pf, s, n)?)?;
    }
    for (&i, &k) in &f.powers {
        out = out.mul(&point_series(cs, &vars, i, n)?.pow(&rat(k as i64, 1))?)?;
    }
    out.set_sign_flag(flag);
    Ok(out)
}

/// `e_A(f)` truncated at order `n`.
///
/// ```
/// use bcft::series::{expand, parse_power_product};
/// use bcft::trees::parse_tree;
///
/// let a = parse_tree("(23)((15)4)").unwrap();
/// let s = expand(&a, &parse_power_product("(z2-z1)^-1").unwrap(), 2).unwrap();
/// assert_eq!(s.len(), 7);
/// ```
pub fn expand(tree: &Tree, f: &PowerProduct, n: u32) -> Result<GenSeries, SeriesError> {
    expand_in(&CoordSystem::new(tree)?, f, n)
}

/// The resummed value of `e_A(f)`: each factor `x^s c^s ζ^{sm} (1+P)^s` and
/// each `(z_A + x_A Q_i)^k` evaluated on the principal branch.
pub fn evaluate_factored(cs: &CoordSystem, f: &PowerProduct, cv: &CoordValues) -> Result<C64, SeriesError> {
    check_points(cs, f)?;
    let mut value = f.constant;
    for (&(i, j), s) in &f.pairs {
        let pf = cs.pair_difference(i, j).map_err(|_| SeriesError::Uncertifiable(i, j))?;
        let mut v = principal_pow(cv.x, s)?;
        if pf.sign < 0 {
            v *= phase_pi(s);
        }
        let mono = pf.monomial.iter().zip(&cv.zeta).fold(C64::new(1.0, 0.0), |acc, (&k, z)| acc * z.powi(k as i32));
        v *= principal_pow(mono, s)?;
        v *= principal_pow(C64::new(1.0, 0.0) + pf.rest.eval(&cv.zeta), s)?;
        value *= v;
    }
    for (&i, &k) in &f.powers {
        value *= (cv.z + cv.x * cs.q(i).eval(&cv.zeta)).powi(k as i32);
    }
    Ok(value)
}
