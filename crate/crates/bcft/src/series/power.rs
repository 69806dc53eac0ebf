//! Products of powers of coordinate differences and their closed-form values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64 as C64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{parse_exponent, principal_pow, Exponent, SeriesError};

/// `c · Π (z_i - z_j)^{s_ij} · Π z_i^{k_i}`.
///
/// Pair keys are stored as written: `(2,1)` means `z_2 - z_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerProduct {
    pub constant: C64,
    pub pairs: BTreeMap<(u32, u32), Exponent>,
    pub powers: BTreeMap<u32, u32>,
}

impl Default for PowerProduct {
    fn default() -> Self {
        PowerProduct::one()
    }
}

impl PowerProduct {
    pub fn one() -> PowerProduct {
        PowerProduct { constant: C64::new(1.0, 0.0), pairs: BTreeMap::new(), powers: BTreeMap::new() }
    }

    /// The single factor `(z_i - z_j)^s`.
    pub fn pair(i: u32, j: u32, s: Exponent) -> PowerProduct {
        let mut f = PowerProduct::one();
        f.mul_pair(i, j, s);
        f
    }

    pub fn mul_pair(&mut self, i: u32, j: u32, s: Exponent) {
        assert!(i != j && i > 0 && j > 0, "pair needs two distinct positive labels");
        let e = self.pairs.entry((i, j)).or_insert_with(Exponent::zero);
        *e += s;
        if e.is_zero() {
            self.pairs.remove(&(i, j));
        }
    }

    pub fn mul_power(&mut self, i: u32, k: u32) {
        assert!(i > 0, "labels start at 1");
        if k > 0 {
            *self.powers.entry(i).or_insert(0) += k;
        }
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let mut out = self.clone();
        out.constant *= other.constant;
        for ((i, j), s) in &other.pairs {
            out.mul_pair(*i, *j, s.clone());
        }
        for (i, k) in &other.powers {
            out.mul_power(*i, *k);
        }
        out
    }

    /// Largest label used, zero for a constant.
    pub fn num_points(&self) -> u32 {
        let a = self.pairs.keys().map(|&(i, j)| i.max(j)).max().unwrap_or(0);
        let b = self.powers.keys().copied().max().unwrap_or(0);
        a.max(b)
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.constant != C64::new(1.0, 0.0) {
            if self.constant.im == 0.0 {
                parts.push(format!("{}", self.constant.re));
            } else {
                parts.push(format!("({}{:+}i)", self.constant.re, self.constant.im));
            }
        }
        for ((i, j), s) in &self.pairs {
            if s.is_one() {
                parts.push(format!("(z{i}-z{j})"));
            } else {
                parts.push(format!("(z{i}-z{j})^{s}"));
            }
        }
        for (i, k) in &self.powers {
            if *k == 1 {
                parts.push(format!("z{i}"));
            } else {
                parts.push(format!("z{i}^{k}"));
            }
        }
        if parts.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", parts.join(" * "))
    }
}

struct Lexer {
    toks: Vec<(usize, char)>,
    i: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.toks.get(self.i).map(|t| t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.0).unwrap_or_else(|| self.toks.last().map_or(0, |t| t.0 + 1))
    }

    fn err<T>(&self, msg: &str) -> Result<T, SeriesError> {
        Err(SeriesError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SeriesError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected '{c}'"))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| f(*c)) {
            s.push(c);
            self.i += 1;
        }
        s
    }

    fn label(&mut self) -> Result<u32, SeriesError> {
        self.expect('z')?;
        let digits = self.take_while(|c| c.is_ascii_digit());
        match digits.parse::<u32>() {
            Ok(v) if v > 0 => Ok(v),
            _ => self.err("expected a positive point label"),
        }
    }

    fn rational(&mut self) -> Result<Exponent, SeriesError> {
        let start = self.pos();
        let text = self.take_while(|c| c.is_ascii_digit() || c == '-' || c == '/');
        parse_exponent(&text).ok_or(SeriesError::Parse { pos: start, msg: format!("bad exponent '{text}'") })
    }

    fn exponent(&mut self) -> Result<Exponent, SeriesError> {
        if !self.eat('^') {
            return Ok(Exponent::one());
        }
        if self.eat('(') {
            let e = self.rational()?;
            self.expect(')')?;
            Ok(e)
        } else {
            self.rational()
        }
    }
}

/// Parses `"(z2-z1)^-1 * (z1-z3)^1/2 * z4^2"`; `"1"` is the empty product.
pub fn parse_power_product(text: &str) -> Result<PowerProduct, SeriesError> {
    let mut lx = Lexer { toks: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(), i: 0 };
    let mut f = PowerProduct::one();
    if lx.peek().is_none() {
        return lx.err("empty expression");
    }
    loop {
        match lx.peek() {
            Some('(') => {
                lx.i += 1;
                let start = lx.pos();
                let i = lx.label()?;
                lx.expect('-')?;
                let j = lx.label()?;
                lx.expect(')')?;
                if i == j {
                    return Err(SeriesError::Parse { pos: start, msg: format!("(z{i}-z{i}) vanishes") });
                }
                let e = lx.exponent()?;
                f.mul_pair(i, j, e);
            }
            Some('z') => {
                let i = lx.label()?;
                let start = lx.pos();
                let e = lx.exponent()?;
                if !e.is_integer() || e.is_negative() {
                    return Err(SeriesError::Parse { pos: start, msg: "powers of a single point must be nonnegative integers".into() });
                }
                f.mul_power(i, e.to_integer().to_u32().ok_or(SeriesError::Overflow)?);
            }
            Some(c) if c.is_ascii_digit() || c == '.' || c == '-' => {
                let start = lx.pos();
                let num = lx.take_while(|c| c.is_ascii_digit() || c == '.' || c == '-' || c == 'e');
                let v: f64 = num.parse().map_err(|_| SeriesError::Parse { pos: start, msg: format!("bad number '{num}'") })?;
                f.constant *= v;
            }
            _ => return lx.err("expected '(zi-zj)', 'zi' or a number"),
        }
        if lx.peek().is_none() {
            return Ok(f);
        }
        lx.expect('*')?;
    }
}

/// Conjugate factor pairs `(z_i - z_j)^a (z_k - z_l)^{ā}` whose bases are
/// complex conjugates, to be evaluated as `|w|^{2ā} w^{a-ā}` with `w = z_i - z_j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BranchPlan {
    pub pairs: Vec<((u32, u32), (u32, u32))>,
}

/// Direct evaluation at `point` (indexed by label − 1) following `plan`.
pub fn evaluate_closed(f: &PowerProduct, point: &[C64], plan: &BranchPlan) -> Result<C64, SeriesError> {
    let n = f.num_points() as usize;
    if point.len() < n {
        return Err(SeriesError::Arity { expected: n, got: point.len() });
    }
    let base = |(i, j): (u32, u32)| point[i as usize - 1] - point[j as usize - 1];
    let mut value = f.constant;
    let mut used = BTreeSet::new();
    for &(hol, anti) in &plan.pairs {
        let a = f.pairs.get(&hol).cloned().unwrap_or_else(Exponent::zero);
        let abar = f.pairs.get(&anti).cloned().unwrap_or_else(Exponent::zero);
        if !used.insert(hol) || !used.insert(anti) {
            return Err(SeriesError::Plan(format!("factor used twice in {hol:?}/{anti:?}")));
        }
        let spin = &a - &abar;
        if !spin.is_integer() {
            return Err(SeriesError::Plan(format!("exponents {a} and {abar} differ by a non-integer")));
        }
        let w = base(hol);
        if w == C64::new(0.0, 0.0) {
            if a.is_zero() && abar.is_zero() {
                continue;
            }
            return Err(SeriesError::Singular);
        }
        let k = spin.to_integer().to_i32().ok_or(SeriesError::Overflow)?;
        value *= w.norm().powf(2.0 * super::exponent_f64(&abar)) * w.powi(k);
    }
    for (key, s) in &f.pairs {
        if !used.contains(key) {
            value *= principal_pow(base(*key), s)?;
        }
    }
    for (i, k) in &f.powers {
        value *= point[*i as usize - 1].powi(*k as i32);
    }
    Ok(value)
}
