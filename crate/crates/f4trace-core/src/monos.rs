//! Exponent-vector monomials, grevlex/grlex, divisibility and the
//! enumerations M_{d,i}.
//!
//! Variables are `x1 > x2 > ... > xn`. The `Ord` impl on [`Monomial`] is
//! grevlex, so a `BTreeSet<Monomial>` iterated in reverse is grevlex-descending.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

pub type Exp = u16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonoOrder {
    Grevlex,
    Grlex,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<Exp>,
    deg: u32,
}

impl Monomial {
    pub fn new(exps: Vec<Exp>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, deg }
    }

    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n], deg: 0 }
    }

    /// The variable `x_k` (1-based).
    pub fn var(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k - 1] = 1;
        Monomial { exps: e, deg: 1 }
    }

    /// `x_k^e` (1-based).
    pub fn var_pow(n: usize, k: usize, e: Exp) -> Self {
        let mut v = vec![0; n];
        v[k - 1] = e;
        Monomial::new(v)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn exps(&self) -> &[Exp] {
        &self.exps
    }

    /// Exponent of `x_k`, 1-based.
    #[inline]
    pub fn exp(&self, k: usize) -> Exp {
        self.exps[k - 1]
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Largest k with a positive exponent on x_k; 0 for the monomial 1.
    pub fn ind(&self) -> usize {
        self.exps.iter().rposition(|&e| e > 0).map_or(0, |k| k + 1)
    }

    /// pi_i: keep x_1..x_i, zero the rest.
    pub fn project(&self, i: usize) -> Monomial {
        let mut e = self.exps.clone();
        for x in e.iter_mut().skip(i) {
            *x = 0;
        }
        Monomial::new(e)
    }

    pub fn project_and_index(&self, i: usize) -> (Monomial, usize) {
        (self.project(i), self.ind())
    }

    /// Does `other` divide `self`?
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        other.deg <= self.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| b <= a)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.divisible_by(self)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            deg: self.deg + other.deg,
        }
    }

    /// `self / other`, failing unless `other | self`.
    pub fn quotient(&self, other: &Monomial) -> Result<Monomial> {
        if !self.divisible_by(other) {
            return Err(Error::NotDivisible);
        }
        Ok(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
            deg: self.deg - other.deg,
        })
    }

    /// The unique variable index if this is a single variable x_c.
    pub fn as_variable(&self) -> Option<usize> {
        if self.deg == 1 {
            Some(self.ind())
        } else {
            None
        }
    }

    pub fn cmp_grevlex(&self, other: &Monomial) -> Ordering {
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.exps.iter().zip(&other.exps).rev() {
            if a != b {
                // smaller exponent in the last differing variable wins
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }

    pub fn cmp_grlex(&self, other: &Monomial) -> Ordering {
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => self.exps.cmp(&other.exps),
            o => o,
        }
    }

    pub fn cmp_with(&self, other: &Monomial, ord: MonoOrder) -> Ordering {
        match ord {
            MonoOrder::Grevlex => self.cmp_grevlex(other),
            MonoOrder::Grlex => self.cmp_grlex(other),
        }
    }

    /// Comma-separated exponent text, e.g. `2,0,1`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, e) in self.exps.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(&alloc::format!("{e}"));
        }
        s
    }

    pub fn from_text(s: &str, n: usize) -> core::result::Result<Monomial, String> {
        let exps: core::result::Result<Vec<Exp>, _> = s.trim().split(',').map(|t| t.trim().parse::<Exp>()).collect();
        let exps = exps.map_err(|e| alloc::format!("bad monomial '{s}': {e}"))?;
        if exps.len() != n {
            return Err(alloc::format!("monomial '{s}' has {} exponents, expected {n}", exps.len()));
        }
        Ok(Monomial::new(exps))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_grevlex(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders as `x1^2*x3`, or `1`.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deg == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (k, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", k + 1)?;
            } else {
                write!(f, "x{}^{}", k + 1, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Compare with an explicit dimension check.
pub fn compare(m1: &Monomial, m2: &Monomial, ord: MonoOrder) -> Result<Ordering> {
    if m1.n() != m2.n() {
        return Err(Error::DimensionMismatch { expected: m1.n(), got: m2.n() });
    }
    Ok(m1.cmp_with(m2, ord))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumKind {
    /// M_{d,i}
    Exact,
    /// M_{<=d,i}
    UpTo,
    /// M_{d,i} minus M_{d,i-1}
    Band,
}

/// A grevlex-descending list of distinct monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MonomialSet {
    elements: Vec<Monomial>,
}

impl MonomialSet {
    /// Sorts descending and removes duplicates.
    pub fn from_vec(mut v: Vec<Monomial>) -> Self {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v.dedup();
        MonomialSet { elements: v }
    }

    pub fn elements(&self) -> &[Monomial] {
        &self.elements
    }

    pub fn into_vec(self) -> Vec<Monomial> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.elements.binary_search_by(|x| m.cmp(x)).is_ok()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.elements.binary_search_by(|x| m.cmp(x)).ok()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Monomial> {
        self.elements.iter()
    }
}

/// All exponent vectors of total degree d in the first i of n variables.
fn exact_raw(n: usize, d: u32, i: usize, out: &mut Vec<Monomial>) {
    if i == 0 {
        if d == 0 {
            out.push(Monomial::one(n));
        }
        return;
    }
    let mut e = vec![0 as Exp; n];
    fn rec(e: &mut Vec<Exp>, k: usize, i: usize, left: u32, out: &mut Vec<Monomial>) {
        if k + 1 == i {
            e[k] = left as Exp;
            out.push(Monomial::new(e.clone()));
            e[k] = 0;
            return;
        }
        for a in 0..=left {
            e[k] = a as Exp;
            rec(e, k + 1, i, left - a, out);
        }
        e[k] = 0;
    }
    rec(&mut e, 0, i, d, out);
}

/// Enumerate M_{d,i}, M_{<=d,i} or the band M_{d,i} \ M_{d,i-1} inside n variables.
pub fn enumerate(n: usize, d: u32, i: usize, kind: EnumKind) -> MonomialSet {
    assert!(i <= n, "i={i} exceeds n={n}");
    let mut out = Vec::new();
    match kind {
        EnumKind::Exact => exact_raw(n, d, i, &mut out),
        EnumKind::UpTo => {
            for e in 0..=d {
                exact_raw(n, e, i, &mut out);
            }
        }
        EnumKind::Band => {
            exact_raw(n, d, i, &mut out);
            out.retain(|m| m.ind() == i);
        }
    }
    MonomialSet::from_vec(out)
}

/// Binomial coefficient in u128, for small arguments.
pub fn binom_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for t in 0..k {
        r = r * (n - t) as u128 / (t + 1) as u128;
    }
    r
}
