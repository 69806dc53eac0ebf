//! Truncated generalized power series with rational exponents and log powers.
//!
//! A [`GenSeries`] lives over an ordered variable set: a scale variable
//! `x_A` (any rational power), a translation variable `z_A` (polynomial) and
//! ratio variables `ζ_e` (rational powers, truncated). Terms are grouped into
//! sectors that share the non-ratio exponents, the fractional parts of the
//! ratio exponents and the log powers. Inside a sector the integer parts of
//! the ratio exponents form an ordinary Laurent polynomial, truncated at total
//! degree `N` above the sector's minimum.
//!
//! ```
//! use bcft::series::{GenSeries, Var, rat};
//! use num_complex::Complex64 as C;
//!
//! let vars = vec![Var::ratio("zeta")];
//! let one_plus = GenSeries::one(&vars, 3).add(&GenSeries::var(&vars, 3, 0)).unwrap();
//! let inv = one_plus.pow(&rat(-1, 1)).unwrap();
//! let coeffs: Vec<C> = (0..4).map(|k| inv.coefficient(&[rat(k, 1)], &[0])).collect();
//! assert_eq!(coeffs, [C::new(1.0, 0.0), C::new(-1.0, 0.0), C::new(1.0, 0.0), C::new(-1.0, 0.0)]);
//! ```

mod expand;
mod power;

pub use expand::{evaluate_factored, expand, expand_in, series_vars};
pub use power::{evaluate_closed, parse_power_product, BranchPlan, PowerProduct};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coords::{on_cut, CoordError};

/// An exact rational exponent.
pub type Exponent = BigRational;

/// `p/q` as an [`Exponent`].
pub fn rat(p: i64, q: i64) -> Exponent {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"`, `"p/q"` or `"-p/q"`.
pub fn parse_exponent(s: &str) -> Option<Exponent> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<BigInt>().ok()?, q.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if q.is_zero() {
        return None;
    }
    Some(BigRational::new(p, q))
}

/// Text form of an exponent: `"p"` for integers, `"p/q"` otherwise.
pub fn format_exponent(e: &Exponent) -> String {
    e.to_string()
}

pub fn exponent_f64(e: &Exponent) -> f64 {
    e.to_f64().expect("finite exponent")
}

/// Splits `e` into `floor(e)` and `e - floor(e) ∈ [0,1)`.
pub fn split_exponent(e: &Exponent) -> (i32, Exponent) {
    let fl = e.floor();
    let i = fl.to_integer().to_i32().expect("exponent fits in i32");
    (i, e - fl)
}

/// `v^q` on the principal branch; integer powers are exact products.
pub fn principal_pow(v: C64, q: &Exponent) -> Result<C64, SeriesError> {
    if q.is_integer() {
        let k = q.to_integer().to_i32().ok_or(SeriesError::Overflow)?;
        if k < 0 && v == C64::new(0.0, 0.0) {
            return Err(SeriesError::Singular);
        }
        return Ok(v.powi(k));
    }
    if on_cut(v) {
        return Err(SeriesError::OnCut(v.re, v.im));
    }
    Ok((v.ln() * exponent_f64(q)).exp())
}

/// `exp(iπq)`, with `q` reduced mod 2 exactly before rounding.
pub fn phase_pi(q: &Exponent) -> C64 {
    let two = BigRational::from_integer(BigInt::from(2));
    let r = q - (q / &two).floor() * &two;
    let t = exponent_f64(&r);
    if r.is_integer() {
        return C64::new(if t == 0.0 { 1.0 } else { -1.0 }, 0.0);
    }
    if (&r * BigInt::from(2)).is_integer() {
        return C64::new(0.0, if t < 1.0 { 1.0 } else { -1.0 });
    }
    C64::from_polar(1.0, std::f64::consts::PI * t)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("variable sets differ")]
    VarMismatch,
    #[error("series has no invertible leading term")]
    NoLeadingTerm,
    #[error("log1p needs a unit constant term")]
    NotUnit,
    #[error("z_A must carry a nonnegative integer exponent and no logarithm")]
    Translation,
    #[error("value {0}{1:+}i lies on the cut")]
    OnCut(f64, f64),
    #[error("negative power of zero")]
    Singular,
    #[error("expected {expected} variable values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("exponent out of range")]
    Overflow,
    #[error("pair ({0},{1}) cannot be certified in this tree")]
    Uncertifiable(u32, u32),
    #[error("function uses z{0} but the tree has {1} leaves")]
    TooFewLeaves(u32, usize),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("branch plan: {0}")]
    Plan(String),
    #[error(transparent)]
    Coord(#[from] CoordError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// `x_A`: arbitrary rational powers, never truncated.
    Scale,
    /// `z_A`: nonnegative integer powers only.
    Translation,
    /// `ζ_e`: rational powers, truncated by total degree.
    Ratio,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub kind: VarKind,
}

impl Var {
    pub fn scale(name: &str) -> Var {
        Var { name: name.into(), kind: VarKind::Scale }
    }
    pub fn translation(name: &str) -> Var {
        Var { name: name.into(), kind: VarKind::Translation }
    }
    pub fn ratio(name: &str) -> Var {
        Var { name: name.into(), kind: VarKind::Ratio }
    }
}

/// Sector key: exponents of the non-ratio variables, fractional parts of the
/// ratio exponents, and log powers of all variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorKey {
    pub base: Vec<Exponent>,
    pub frac: Vec<Exponent>,
    pub logs: Vec<u32>,
}

type Terms = Vec<(Vec<i32>, C64)>;

fn degree(e: &[i32]) -> i64 {
    e.iter().map(|&k| k as i64).sum()
}

/// One term of a series, with full exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub exponents: Vec<Exponent>,
    pub logs: Vec<u32>,
    pub coeff: C64,
}

/// A truncated generalized power series.
#[derive(Clone, Debug, PartialEq)]
pub struct GenSeries {
    vars: Vec<Var>,
    ratio: Vec<usize>,
    other: Vec<usize>,
    order: u32,
    sectors: BTreeMap<SectorKey, Terms>,
    sign_flag: bool,
}

impl GenSeries {
    pub fn zero(vars: &[Var], order: u32) -> GenSeries {
        let ratio = vars.iter().enumerate().filter(|(_, v)| v.kind == VarKind::Ratio).map(|(i, _)| i).collect();
        let other = vars.iter().enumerate().filter(|(_, v)| v.kind != VarKind::Ratio).map(|(i, _)| i).collect();
        GenSeries { vars: vars.to_vec(), ratio, other, order, sectors: BTreeMap::new(), sign_flag: false }
    }

    pub fn constant(vars: &[Var], order: u32, c: C64) -> GenSeries {
        let mut s = GenSeries::zero(vars, order);
        if c != C64::new(0.0, 0.0) {
            let zero = s.zero_key();
            s.sectors.insert(zero, vec![(vec![0; s.ratio.len()], c)]);
        }
        s
    }

    pub fn one(vars: &[Var], order: u32) -> GenSeries {
        GenSeries::constant(vars, order, C64::new(1.0, 0.0))
    }

    /// The variable with index `i` to the first power.
    pub fn var(vars: &[Var], order: u32, i: usize) -> GenSeries {
        let mut e = vec![Exponent::zero(); vars.len()];
        e[i] = Exponent::one();
        GenSeries::monomial(vars, order, &e, &vec![0; vars.len()], C64::new(1.0, 0.0)).expect("valid monomial")
    }

    /// `c · Π v^{e_v} (log v)^{k_v}`.
    pub fn monomial(vars: &[Var], order: u32, exps: &[Exponent], logs: &[u32], c: C64) -> Result<GenSeries, SeriesError> {
        let mut s = GenSeries::zero(vars, order);
        if exps.len() != vars.len() || logs.len() != vars.len() {
            return Err(SeriesError::Arity { expected: vars.len(), got: exps.len() });
        }
        for (i, v) in vars.iter().enumerate() {
            if v.kind == VarKind::Translation && (!exps[i].is_integer() || exps[i].is_negative() || logs[i] != 0) {
                return Err(SeriesError::Translation);
            }
        }
        if c == C64::new(0.0, 0.0) {
            return Ok(s);
        }
        let base = s.other.iter().map(|&i| exps[i].clone()).collect();
        let mut ints = Vec::with_capacity(s.ratio.len());
        let mut frac = Vec::with_capacity(s.ratio.len());
        for &i in &s.ratio {
            let (k, f) = split_exponent(&exps[i]);
            ints.push(k);
            frac.push(f);
        }
        s.sectors.insert(SectorKey { base, frac, logs: logs.to_vec() }, vec![(ints, c)]);
        Ok(s)
    }

    fn zero_key(&self) -> SectorKey {
        SectorKey {
            base: vec![Exponent::zero(); self.other.len()],
            frac: vec![Exponent::zero(); self.ratio.len()],
            logs: vec![0; self.vars.len()],
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// True if a `c = -1` leading sign was resolved as `e^{iπs}` somewhere.
    pub fn sign_flag(&self) -> bool {
        self.sign_flag
    }

    pub fn set_sign_flag(&mut self, flag: bool) {
        self.sign_flag = flag;
    }

    pub fn is_zero(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.sectors.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn num_sectors(&self) -> usize {
        self.sectors.len()
    }

    pub fn sectors(&self) -> impl Iterator<Item = (&SectorKey, &[(Vec<i32>, C64)])> {
        self.sectors.iter().map(|(k, v)| (k, v.as_slice()))
    }

    fn full_exponents(&self, key: &SectorKey, ints: &[i32]) -> Vec<Exponent> {
        let mut e = vec![Exponent::zero(); self.vars.len()];
        for (k, &i) in self.other.iter().enumerate() {
            e[i] = key.base[k].clone();
        }
        for (k, &i) in self.ratio.iter().enumerate() {
            e[i] = &key.frac[k] + BigRational::from_integer(BigInt::from(ints[k]));
        }
        e
    }

    /// All terms in canonical order (sector key, then ratio degree, then exponents).
    pub fn terms(&self) -> Vec<Term> {
        let mut out = Vec::with_capacity(self.len());
        for (key, terms) in &self.sectors {
            for (ints, c) in terms {
                out.push(Term { exponents: self.full_exponents(key, ints), logs: key.logs.clone(), coeff: *c });
            }
        }
        out
    }

    /// Coefficient of `Π v^{e_v} (log v)^{k_v}`, zero if absent.
    pub fn coefficient(&self, exps: &[Exponent], logs: &[u32]) -> C64 {
        let base: Vec<Exponent> = self.other.iter().map(|&i| exps[i].clone()).collect();
        let (ints, frac): (Vec<i32>, Vec<Exponent>) = self.ratio.iter().map(|&i| split_exponent(&exps[i])).unzip();
        let key = SectorKey { base, frac, logs: logs.to_vec() };
        self.sectors
            .get(&key)
            .and_then(|t| t.iter().find(|(e, _)| *e == ints))
            .map_or(C64::new(0.0, 0.0), |(_, c)| *c)
    }

    fn check(&self, other: &GenSeries) -> Result<(), SeriesError> {
        if self.vars != other.vars {
            return Err(SeriesError::VarMismatch);
        }
        Ok(())
    }

    fn with_accum(&self, order: u32, acc: FxHashMap<SectorKey, FxHashMap<Vec<i32>, C64>>, flag: bool) -> GenSeries {
        let mut s = GenSeries::zero(&self.vars, order);
        s.sign_flag = flag;
        for (key, map) in acc {
            let terms: Terms = map.into_iter().filter(|(_, c)| *c != C64::new(0.0, 0.0)).collect();
            if !terms.is_empty() {
                s.sectors.insert(key, terms);
            }
        }
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let n = self.order as i64;
        let mut empty = Vec::new();
        for (key, terms) in self.sectors.iter_mut() {
            terms.retain(|(_, c)| *c != C64::new(0.0, 0.0));
            if let Some(min) = terms.iter().map(|(e, _)| degree(e)).min() {
                terms.retain(|(e, _)| degree(e) - min <= n);
                terms.sort_by(|a, b| degree(&a.0).cmp(&degree(&b.0)).then_with(|| a.0.cmp(&b.0)));
            }
            if terms.is_empty() {
                empty.push(key.clone());
            }
        }
        for k in empty {
            self.sectors.remove(&k);
        }
    }

    /// Re-truncates at a (possibly smaller) order.
    pub fn truncate(&self, order: u32) -> GenSeries {
        let mut s = self.clone();
        s.order = order.min(self.order);
        s.normalize();
        s
    }

    fn accum(&self) -> FxHashMap<SectorKey, FxHashMap<Vec<i32>, C64>> {
        self.sectors.iter().map(|(k, t)| (k.clone(), t.iter().cloned().collect())).collect()
    }

    pub fn add(&self, other: &GenSeries) -> Result<GenSeries, SeriesError> {
        self.check(other)?;
        let mut acc = self.accum();
        for (key, terms) in &other.sectors {
            let m = acc.entry(key.clone()).or_default();
            for (e, c) in terms {
                *m.entry(e.clone()).or_insert(C64::new(0.0, 0.0)) += c;
            }
        }
        Ok(self.with_accum(self.order.min(other.order), acc, self.sign_flag || other.sign_flag))
    }

    pub fn sub(&self, other: &GenSeries) -> Result<GenSeries, SeriesError> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> GenSeries {
        let mut s = self.clone();
        for terms in s.sectors.values_mut() {
            for t in terms.iter_mut() {
                t.1 *= c;
            }
        }
        s.normalize();
        s
    }

    fn mul_key(&self, a: &SectorKey, b: &SectorKey) -> (SectorKey, Vec<i32>) {
        let base = a.base.iter().zip(&b.base).map(|(x, y)| x + y).collect();
        let mut frac = Vec::with_capacity(a.frac.len());
        let mut carry = Vec::with_capacity(a.frac.len());
        for (x, y) in a.frac.iter().zip(&b.frac) {
            let f = x + y;
            if f >= Exponent::one() {
                frac.push(f - Exponent::one());
                carry.push(1);
            } else {
                frac.push(f);
                carry.push(0);
            }
        }
        let logs = a.logs.iter().zip(&b.logs).map(|(x, y)| x + y).collect();
        (SectorKey { base, frac, logs }, carry)
    }

    pub fn mul(&self, other: &GenSeries) -> Result<GenSeries, SeriesError> {
        self.check(other)?;
        let order = self.order.min(other.order);
        let n = order as i64;
        let mut acc: FxHashMap<SectorKey, FxHashMap<Vec<i32>, C64>> = FxHashMap::default();
        for (ka, ta) in &self.sectors {
            for (kb, tb) in &other.sectors {
                let (key, carry) = self.mul_key(ka, kb);
                let (Some(ma), Some(mb)) = (ta.first().map(|t| degree(&t.0)), tb.first().map(|t| degree(&t.0))) else {
                    continue;
                };
                let bound = ma + mb + n;
                let m = acc.entry(key).or_default();
                let mut e = vec![0i32; carry.len()];
                for (ea, ca) in ta {
                    let da = degree(ea);
                    if da + mb > bound {
                        break;
                    }
                    for (eb, cb) in tb {
                        if da + degree(eb) > bound {
                            break;
                        }
                        for k in 0..e.len() {
                            e[k] = ea[k] + eb[k] + carry[k];
                        }
                        *m.entry(e.clone()).or_insert(C64::new(0.0, 0.0)) += ca * cb;
                    }
                }
            }
        }
        Ok(self.with_accum(order, acc, self.sign_flag || other.sign_flag))
    }

    /// Multiplies by the monomial `c·Π v^{e_v}`.
    pub fn mul_monomial(&self, exps: &[Exponent], c: C64) -> Result<GenSeries, SeriesError> {
        let m = GenSeries::monomial(&self.vars, self.order, exps, &vec![0; self.vars.len()], c)?;
        self.mul(&m)
    }

    fn leading(&self) -> Result<(&SectorKey, &(Vec<i32>, C64)), SeriesError> {
        if self.sectors.len() != 1 {
            return Err(SeriesError::NoLeadingTerm);
        }
        let (key, terms) = self.sectors.iter().next().unwrap();
        if terms.len() > 1 && degree(&terms[0].0) == degree(&terms[1].0) {
            return Err(SeriesError::NoLeadingTerm);
        }
        Ok((key, &terms[0]))
    }

    /// Splits `self = c·M·(1+u)` with `u` of strictly positive ratio degree.
    fn factor_leading(&self) -> Result<(C64, Vec<Exponent>, GenSeries), SeriesError> {
        let (key, (lead_e, c)) = self.leading()?;
        if key.logs.iter().any(|&k| k != 0) {
            return Err(SeriesError::NoLeadingTerm);
        }
        let exps = self.full_exponents(key, lead_e);
        let mut u = GenSeries::zero(&self.vars, self.order);
        let terms: Terms = self.sectors[key][1..]
            .iter()
            .map(|(e, d)| (e.iter().zip(lead_e).map(|(a, b)| a - b).collect(), d / c))
            .collect();
        if !terms.is_empty() {
            u.sectors.insert(self.zero_key(), terms);
        }
        Ok((*c, exps, u))
    }

    /// `(1+u)^q = Σ_k binom(q,k) u^k` for `u` of positive ratio degree.
    fn binomial(u: &GenSeries, q: &Exponent) -> Result<GenSeries, SeriesError> {
        let one = GenSeries::one(&u.vars, u.order);
        if u.is_zero() {
            return Ok(one);
        }
        let qf = exponent_f64(q);
        let kmax = if q.is_integer() && !q.is_negative() { q.to_integer().to_u32().unwrap_or(u.order).min(u.order) } else { u.order };
        let mut acc = one.clone();
        for k in (1..=kmax).rev() {
            let c = (qf - k as f64 + 1.0) / k as f64;
            acc = one.add(&u.mul(&acc)?.scale(C64::new(c, 0.0)))?;
        }
        Ok(acc)
    }

    /// `self^q`. Nonnegative integer powers work for any series; other powers
    /// need a single log-free sector with a unique leading term.
    pub fn pow(&self, q: &Exponent) -> Result<GenSeries, SeriesError> {
        if q.is_integer() && !q.is_negative() {
            let mut k = q.to_integer().to_u64().ok_or(SeriesError::Overflow)?;
            let mut base = self.clone();
            let mut acc = GenSeries::one(&self.vars, self.order);
            acc.sign_flag = self.sign_flag;
            while k > 0 {
                if k & 1 == 1 {
                    acc = acc.mul(&base)?;
                }
                k >>= 1;
                if k > 0 {
                    base = base.mul(&base)?;
                }
            }
            return Ok(acc);
        }
        let (c, exps, u) = self.factor_leading()?;
        let new_exps: Vec<Exponent> = exps.iter().map(|e| e * q).collect();
        for (i, v) in self.vars.iter().enumerate() {
            if v.kind == VarKind::Translation && (!new_exps[i].is_integer() || new_exps[i].is_negative()) {
                return Err(SeriesError::Translation);
            }
        }
        let lead = if c.im == 0.0 && c.re < 0.0 {
            phase_pi(q) * c.norm().powf(exponent_f64(q))
        } else {
            (c.ln() * exponent_f64(q)).exp()
        };
        let mut out = GenSeries::binomial(&u, q)?.mul_monomial(&new_exps, lead)?;
        out.sign_flag = self.sign_flag;
        Ok(out)
    }

    /// `log(s)` for `s = 1 + u` with `u` of positive ratio degree.
    pub fn log1p(&self) -> Result<GenSeries, SeriesError> {
        let zero = self.zero_key();
        let ok = self.sectors.len() == 1
            && self.sectors.contains_key(&zero)
            && self.sectors[&zero][0].0.iter().all(|&k| k == 0)
            && (self.sectors[&zero][0].1 - C64::new(1.0, 0.0)).norm() <= 1e-12
            && self.sectors[&zero].get(1).is_none_or(|t| degree(&t.0) > 0);
        if !ok {
            return Err(SeriesError::NotUnit);
        }
        let mut u = self.clone();
        u.sectors.get_mut(&zero).unwrap().remove(0);
        u.normalize();
        let mut acc = GenSeries::zero(&self.vars, self.order);
        if u.is_zero() {
            return Ok(acc);
        }
        for k in (1..=self.order).rev() {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let c = GenSeries::constant(&self.vars, self.order, C64::new(sign / k as f64, 0.0));
            acc = c.add(&u.mul(&acc)?)?;
        }
        u.mul(&acc)
    }

    /// `log(c·M·(1+u)) = Log c + Σ e_v log v + log(1+u)`; produces log-power terms.
    pub fn ln(&self) -> Result<GenSeries, SeriesError> {
        let (c, exps, u) = self.factor_leading()?;
        let nv = self.vars.len();
        let mut out = GenSeries::constant(&self.vars, self.order, c.ln());
        for (i, e) in exps.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if self.vars[i].kind == VarKind::Translation {
                return Err(SeriesError::Translation);
            }
            let mut logs = vec![0; nv];
            logs[i] = 1;
            let t = GenSeries::monomial(&self.vars, self.order, &vec![Exponent::zero(); nv], &logs, C64::new(exponent_f64(e), 0.0))?;
            out = out.add(&t)?;
        }
        let one = GenSeries::one(&self.vars, self.order);
        out.add(&one.add(&u)?.log1p()?)
    }

    /// `Σ coeff · Π v^{e_v} (Log v)^{k_v}` on the principal branch.
    pub fn evaluate(&self, values: &[C64]) -> Result<C64, SeriesError> {
        if values.len() != self.vars.len() {
            return Err(SeriesError::Arity { expected: self.vars.len(), got: values.len() });
        }
        let zeta: Vec<C64> = self.ratio.iter().map(|&i| values[i]).collect();
        let nr = zeta.len();
        let (mut lo, mut hi) = (vec![0i32; nr], vec![0i32; nr]);
        for terms in self.sectors.values() {
            for (e, _) in terms {
                for k in 0..nr {
                    lo[k] = lo[k].min(e[k]);
                    hi[k] = hi[k].max(e[k]);
                }
            }
        }
        let mut tables = Vec::with_capacity(nr);
        for k in 0..nr {
            if lo[k] < 0 && zeta[k] == C64::new(0.0, 0.0) {
                return Err(SeriesError::Singular);
            }
            tables.push((lo[k]..=hi[k]).map(|p| zeta[k].powi(p)).collect::<Vec<C64>>());
        }
        let mut total = C64::new(0.0, 0.0);
        for (key, terms) in &self.sectors {
            let mut pre = C64::new(1.0, 0.0);
            for (k, &i) in self.other.iter().enumerate() {
                pre *= principal_pow(values[i], &key.base[k])?;
            }
            for (k, &i) in self.ratio.iter().enumerate() {
                if !key.frac[k].is_zero() {
                    pre *= principal_pow(values[i], &key.frac[k])?;
                }
            }
            for (i, &l) in key.logs.iter().enumerate() {
                if l > 0 {
                    let v = values[i];
                    if on_cut(v) {
                        return Err(SeriesError::OnCut(v.re, v.im));
                    }
                    pre *= v.ln().powi(l as i32);
                }
            }
            let mut sum = C64::new(0.0, 0.0);
            for (e, c) in terms {
                let mut t = *c;
                for k in 0..nr {
                    t *= tables[k][(e[k] - lo[k]) as usize];
                }
                sum += t;
            }
            total += pre * sum;
        }
        Ok(total)
    }

    /// JSON form: a list of `{exponents, logs, re, im}` in canonical order.
    pub fn to_json(&self) -> Value {
        let mut terms: Vec<(Vec<Exponent>, Vec<u32>, C64)> =
            self.terms().into_iter().map(|t| (t.exponents, t.logs, t.coeff)).collect();
        terms.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        Value::Array(
            terms
                .into_iter()
                .map(|(e, l, c)| {
                    let exps: BTreeMap<&str, String> = self
                        .vars
                        .iter()
                        .zip(&e)
                        .filter(|(_, e)| !e.is_zero())
                        .map(|(v, e)| (v.name.as_str(), format_exponent(e)))
                        .collect();
                    let logs: BTreeMap<&str, u32> =
                        self.vars.iter().zip(&l).filter(|(_, k)| **k != 0).map(|(v, k)| (v.name.as_str(), *k)).collect();
                    json!({ "exponents": exps, "logs": logs, "re": c.re, "im": c.im })
                })
                .collect(),
        )
    }
}

impl fmt::Display for GenSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (n, t) in terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)", t.coeff.re, t.coeff.im)?;
            for (v, (e, l)) in self.vars.iter().zip(t.exponents.iter().zip(&t.logs)) {
                if !e.is_zero() {
                    if e.is_one() {
                        write!(f, "*{}", v.name)?;
                    } else {
                        write!(f, "*{}^({})", v.name, e)?;
                    }
                }
                if *l > 0 {
                    write!(f, "*log({})^{}", v.name, l)?;
                }
            }
        }
        Ok(())
    }
}
