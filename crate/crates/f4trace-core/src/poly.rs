//! Sparse polynomials over Z/p with terms sorted grevlex-descending.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::monos::{Exp, Monomial};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    n: usize,
    field: PrimeField,
    terms: Vec<(Monomial, Fp)>,
}

/// Leading data of a nonzero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leading {
    pub lm: Monomial,
    pub lc: Fp,
    pub ind: usize,
    pub deg: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
}

impl Poly {
    pub fn zero(n: usize, field: PrimeField) -> Self {
        Poly { n, field, terms: Vec::new() }
    }

    pub fn constant(n: usize, field: PrimeField, c: Fp) -> Self {
        Self::monomial(Monomial::one(n), c, field)
    }

    pub fn monomial(m: Monomial, c: Fp, field: PrimeField) -> Self {
        let n = m.n();
        let terms = if c.is_zero() { Vec::new() } else { alloc::vec![(m, c)] };
        Poly { n, field, terms }
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges equal
    /// monomials, drops zero coefficients.
    pub fn from_terms(n: usize, field: PrimeField, terms: Vec<(Monomial, Fp)>) -> Self {
        let mut acc: BTreeMap<Monomial, Fp> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.n(), n, "monomial dimension");
            let e = acc.entry(m).or_insert(Fp::ZERO);
            *e = field.add(*e, c);
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { n, field, terms }
    }

    /// Trusts that `terms` is already strictly descending with nonzero coefficients.
    pub fn from_sorted_terms(n: usize, field: PrimeField, terms: Vec<(Monomial, Fp)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly { n, field, terms }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, Fp)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter().map(|(m, _)| m)
    }

    /// Leading monomial; panics on zero. Use [`Poly::leading`] for a checked variant.
    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> Fp {
        self.terms[0].1
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    pub fn leading(&self) -> Result<Leading> {
        let (lm, lc) = self.terms.first().ok_or(Error::ZeroPolynomial)?;
        Ok(Leading { lm: lm.clone(), lc: *lc, ind: lm.ind(), deg: lm.degree() })
    }

    pub fn coeff(&self, m: &Monomial) -> Fp {
        self.terms
            .binary_search_by(|(x, _)| m.cmp(x))
            .map_or(Fp::ZERO, |k| self.terms[k].1)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch { expected: self.field.p(), got: other.field.p() });
        }
        Ok(())
    }

    /// `self + c * other`, merge-based.
    pub fn add_scaled(&self, other: &Poly, c: Fp) -> Result<Poly> {
        self.check(other)?;
        let f = self.field;
        if c.is_zero() || other.is_zero() {
            return Ok(self.clone());
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (0, 0);
        while a < self.terms.len() && b < other.terms.len() {
            let (ma, ca) = &self.terms[a];
            let (mb, cb) = &other.terms[b];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), *ca));
                    a += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), f.mul(*cb, c)));
                    b += 1;
                }
                Ordering::Equal => {
                    let s = f.add(*ca, f.mul(*cb, c));
                    if !s.is_zero() {
                        out.push((ma.clone(), s));
                    }
                    a += 1;
                    b += 1;
                }
            }
        }
        out.extend(self.terms[a..].iter().cloned());
        out.extend(other.terms[b..].iter().map(|(m, cb)| (m.clone(), f.mul(*cb, c))));
        Ok(Poly { n: self.n, field: f, terms: out })
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.add_scaled(other, Fp::ONE)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add_scaled(other, self.field.neg(Fp::ONE))
    }

    pub fn scale(&self, c: Fp) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n, self.field);
        }
        let f = self.field;
        Poly { n: self.n, field: f, terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect() }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: Fp) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n, self.field);
        }
        let f = self.field;
        Poly { n: self.n, field: f, terms: self.terms.iter().map(|(t, a)| (t.mul(m), f.mul(*a, c))).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut acc = Poly::zero(self.n, self.field);
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_term(m, *c))?;
        }
        Ok(acc)
    }

    pub fn make_monic(&self) -> Result<Poly> {
        let lc = self.terms.first().ok_or(Error::ZeroPolynomial)?.1;
        Ok(self.scale(self.field.inv(lc)?))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    /// Homogeneous component of highest degree.
    pub fn hd(&self) -> Poly {
        let d = self.degree();
        Poly {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().take_while(|(m, _)| m.degree() == d).cloned().collect(),
        }
    }

    /// phi(f, j): drop every term involving x_{j+1}..x_n. The result keeps
    /// the ambient n; see [`Poly::shrink`] to read it in j variables.
    pub fn phi(&self, j: usize) -> Poly {
        Poly {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().filter(|(m, _)| m.ind() <= j).cloned().collect(),
        }
    }

    pub fn top_and_truncate(&self, j: usize) -> (Poly, Poly) {
        (self.hd(), self.phi(j))
    }

    /// Reinterpret in the first `j` variables. Panics if a term uses x_{j+1}.. .
    pub fn shrink(&self, j: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                assert!(m.ind() <= j, "term {m} uses a variable beyond x{j}");
                (Monomial::new(m.exps()[..j].to_vec()), *c)
            })
            .collect();
        Poly { n: j, field: self.field, terms }
    }

    /// Reinterpret in `n2 >= n` variables (new variables absent).
    pub fn widen(&self, n2: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.exps().to_vec();
                e.resize(n2, 0);
                (Monomial::new(e), *c)
            })
            .collect();
        Poly { n: n2, field: self.field, terms }
    }

    pub fn arith(&self, other: &Poly, kind: PolyOp) -> Result<Poly> {
        match kind {
            PolyOp::Add => self.add(other),
            PolyOp::Sub => self.sub(other),
        }
    }

    /// Canonical text: coefficients in symmetric range, e.g. `x1^2 - 3*x1*x2 + 5`.
    pub fn to_text(&self) -> String {
        alloc::format!("{self}")
    }

    /// Parses one line of the polynomial grammar.
    pub fn parse(s: &str, n: usize, field: PrimeField) -> core::result::Result<Poly, String> {
        parse_poly(s, n, field)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let v = self.field.to_signed(*c);
            let (neg, a) = if v < 0 { (true, -v) } else { (false, v) };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_coeff(tok: &str, field: PrimeField) -> core::result::Result<Fp, String> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(alloc::format!("bad coefficient '{tok}'"));
    }
    let p = field.p() as u64;
    let mut v = 0u64;
    for b in tok.bytes() {
        v = (v * 10 + (b - b'0') as u64) % p;
    }
    Ok(Fp(v as u32))
}

fn parse_term(tok: &str, n: usize, field: PrimeField) -> core::result::Result<(Monomial, Fp), String> {
    let mut c = Fp::ONE;
    let mut e: Vec<Exp> = alloc::vec![0; n];
    for factor in tok.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(alloc::format!("empty factor in term '{tok}'"));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (idx, pow) = match rest.split_once('^') {
                Some((a, b)) => (a, b.trim().parse::<Exp>().map_err(|_| alloc::format!("bad exponent in '{factor}'"))?),
                None => (rest, 1),
            };
            let k: usize = idx.trim().parse().map_err(|_| alloc::format!("bad variable '{factor}'"))?;
            if k == 0 || k > n {
                return Err(alloc::format!("variable x{k} out of range 1..={n}"));
            }
            e[k - 1] = e[k - 1]
                .checked_add(pow)
                .ok_or_else(|| alloc::format!("exponent overflow in '{tok}'"))?;
        } else {
            c = field.mul(c, parse_coeff(factor, field)?);
        }
    }
    Ok((Monomial::new(e), c))
}

fn parse_poly(s: &str, n: usize, field: PrimeField) -> core::result::Result<Poly, String> {
    let s = s.split('#').next().unwrap_or("");
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(String::from("empty polynomial"));
    }
    let mut terms = Vec::new();
    let mut sign = Fp::ONE;
    let mut cur = String::new();
    let minus = field.neg(Fp::ONE);
    let bytes: Vec<char> = compact.chars().collect();
    for (k, &ch) in bytes.iter().enumerate() {
        // a '-' right after '^' is never valid, so +/- always split terms
        if (ch == '+' || ch == '-') && !(k > 0 && bytes[k - 1] == '^') {
            if !cur.is_empty() {
                let (m, c) = parse_term(&cur, n, field)?;
                terms.push((m, field.mul(c, sign)));
                cur.clear();
            } else if k > 0 {
                return Err(alloc::format!("dangling sign in '{s}'"));
            }
            sign = if ch == '-' { minus } else { Fp::ONE };
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(alloc::format!("trailing sign in '{s}'"));
    }
    let (m, c) = parse_term(&cur, n, field)?;
    terms.push((m, field.mul(c, sign)));
    Ok(Poly::from_terms(n, field, terms))
}

/// Full multivariate division remainder of `f` by `divisors` (all terms reduced).
pub fn remainder(f: &Poly, divisors: &[Poly]) -> Result<Poly> {
    let field = f.field();
    let mut p = f.clone();
    let mut r: Vec<(Monomial, Fp)> = Vec::new();
    'outer: while !p.is_zero() {
        let (lm, lc) = p.terms[0].clone();
        for g in divisors.iter().filter(|g| !g.is_zero()) {
            if lm.divisible_by(g.lm()) {
                let q = lm.quotient(g.lm())?;
                let c = field.div(lc, g.lc())?;
                p = p.add_scaled(&g.mul_term(&q, Fp::ONE), field.neg(c))?;
                continue 'outer;
            }
        }
        r.push((lm, lc));
        p.terms.remove(0);
    }
    Ok(Poly::from_sorted_terms(f.n(), field, r))
}
