//! Truncated power series, Hilbert-series coefficient families, cost
//! formulas for F4T and its competitors, the asymptotic constants, and the
//! two numeric tables built from them.
//!
//! Counts are exact big integers; a real exponent `omega` only enters when
//! a cost is evaluated, and that happens in the log domain (natural logs),
//! since C(n+D, D)^omega overflows f64 long before n = delta = 50.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::monos::{enumerate, EnumKind, MonomialSet};

/// Coefficients c_0..c_D of a truncated series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigInt>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        PowerSeries { coeffs }
    }

    /// (1 - z^delta)^s / (1 - z)^i up to z^order.
    pub fn expand_ratio(s: u32, i: u32, delta: u32, order: usize) -> Self {
        let mut c = vec![BigInt::zero(); order + 1];
        let mut binom = BigInt::one();
        for k in 0..=s as usize {
            let e = k * delta as usize;
            if e > order {
                break;
            }
            if k % 2 == 0 {
                c[e] += &binom;
            } else {
                c[e] -= &binom;
            }
            binom = binom * BigInt::from(s as usize - k) / BigInt::from(k + 1);
        }
        for _ in 0..i {
            for t in 1..=order {
                let prev = c[t - 1].clone();
                c[t] += prev;
            }
        }
        PowerSeries { coeffs: c }
    }

    /// [S]_+: zero from the first non-positive coefficient on.
    pub fn plus_truncate(&self) -> Self {
        let mut out = self.coeffs.clone();
        if let Some(cut) = out.iter().position(|c| c.sign() != Sign::Plus) {
            for c in &mut out[cut..] {
                *c = BigInt::zero();
            }
        }
        PowerSeries { coeffs: out }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of z^d (zero beyond the truncation order).
    pub fn coeff(&self, d: usize) -> BigInt {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

/// (D, d') = (n(delta-1)+1, floor((D-1)/2)+1).
pub fn bounds(n: usize, delta: u32) -> (u32, u32) {
    let d = n as u32 * (delta - 1) + 1;
    (d, (d - 1) / 2 + 1)
}

/// beta_{d,i}: coefficients of [(1-z^delta)^n/(1-z)^i]_+ up to `order`.
pub fn beta_i(n: usize, delta: u32, i: usize, order: usize) -> PowerSeries {
    PowerSeries::expand_ratio(n as u32, i as u32, delta, order).plus_truncate()
}

/// beta_d = beta_{d,n-1}, the last-dimension family, up to D.
pub fn beta_last(n: usize, delta: u32) -> PowerSeries {
    beta_i(n, delta, n - 1, bounds(n, delta).0 as usize)
}

/// b_d^{(i)}: coefficients of z^delta * ((1-z^delta)/(1-z))^{i-1} up to `order`.
pub fn b_family(delta: u32, i: usize, order: usize) -> PowerSeries {
    let inner = PowerSeries::expand_ratio(i as u32 - 1, i as u32 - 1, delta, order);
    let mut c = vec![BigInt::zero(); order + 1];
    for d in delta as usize..=order {
        c[d] = inner.coeff(d - delta as usize);
    }
    PowerSeries { coeffs: c }
}

pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for t in 0..k {
        r = r * BigUint::from(n - t) / BigUint::from(t + 1);
    }
    r
}

/// Natural log of a nonnegative big integer; -inf for 0.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 900;
    libm::log((x >> shift).to_f64().unwrap_or(f64::INFINITY)) + shift as f64 * core::f64::consts::LN_2
}

fn ln_int(x: &BigInt) -> f64 {
    match x.sign() {
        Sign::Plus => ln_big(x.magnitude()),
        _ => f64::NEG_INFINITY,
    }
}

/// ln(e^a + e^b).
fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + libm::log(libm::exp(a - m) + libm::exp(b - m))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostParams {
    pub n: usize,
    pub delta: u32,
    pub omega: f64,
    pub epsilon: f64,
}

impl CostParams {
    pub fn new(n: usize, delta: u32, omega: f64) -> Result<Self> {
        let p = CostParams { n, delta, omega, epsilon: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.delta < 2 || !(2.0..=3.0).contains(&self.omega) || self.epsilon < 0.0 {
            return Err(Error::Domain(format!(
                "need n >= 2, delta >= 2, 2 <= omega <= 3, epsilon >= 0 (got n={}, delta={}, omega={}, epsilon={})",
                self.n, self.delta, self.omega, self.epsilon
            )));
        }
        Ok(())
    }
}

/// Staircase and basis counts of an actual lm ideal, indexed `[d][i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measured {
    /// gamma[d][j]: basis elements of degree d with variable index j (j = 0..=n).
    pub gamma: Vec<Vec<u64>>,
    /// stair[d][i]: staircase monomials of degree d in x_1..x_i (i = 0..=n).
    pub stair: Vec<Vec<u64>>,
}

impl Measured {
    /// Counts from the lm set of a zero-dimensional basis, degrees 0..=max_d.
    pub fn from_lms(lms: &MonomialSet, n: usize, max_d: u32) -> Self {
        let mut gamma = vec![vec![0u64; n + 1]; max_d as usize + 1];
        for m in lms.iter() {
            if m.degree() <= max_d {
                gamma[m.degree() as usize][m.ind()] += 1;
            }
        }
        let mut stair = vec![vec![0u64; n + 1]; max_d as usize + 1];
        for d in 0..=max_d {
            for m in enumerate(n, d, n, EnumKind::Exact).iter() {
                if lms.iter().any(|l| m.divisible_by(l)) {
                    continue;
                }
                for cell in stair[d as usize].iter_mut().skip(m.ind()) {
                    *cell += 1;
                }
            }
        }
        Measured { gamma, stair }
    }

    fn gamma_at(&self, d: usize, j: usize) -> u64 {
        self.gamma.get(d).map_or(0, |r| r[j])
    }

    fn stair_at(&self, d: usize, i: usize) -> u64 {
        self.stair.get(d).map_or(0, |r| r[i])
    }
}

#[derive(Clone, Copy, Debug)]
pub enum CostSource<'a> {
    /// Generic counts substituted from the series (the "bar" formula).
    Bar,
    Measured(&'a Measured),
}

/// Costs as natural logs (`-inf` for an empty sum).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostLogs {
    pub n1: f64,
    pub n2: f64,
    pub total: f64,
}

impl CostLogs {
    pub fn total_value(&self) -> f64 {
        libm::exp(self.total)
    }
}

/// The exact (omega-free) ingredients of the cost formulas for one (n, delta).
#[derive(Clone, Debug)]
pub struct CostTables {
    pub n: usize,
    pub delta: u32,
    pub big_d: u32,
    pub dprime: u32,
    /// beta[i] = [(1-z^delta)^n/(1-z)^i]_+ for i = 0..=n, up to D.
    beta: Vec<PowerSeries>,
    /// b[i] = b^{(i)} for i = 1..=n (b[0] unused), up to D.
    b: Vec<PowerSeries>,
}

impl CostTables {
    pub fn new(n: usize, delta: u32) -> Result<Self> {
        if n < 2 || delta < 2 {
            return Err(Error::Domain(format!("need n >= 2 and delta >= 2, got n={n}, delta={delta}")));
        }
        let (big_d, dprime) = bounds(n, delta);
        let order = big_d as usize;
        let beta = (0..=n).map(|i| beta_i(n, delta, i, order)).collect();
        let mut b = vec![PowerSeries::new(vec![BigInt::zero(); order + 1])];
        b.extend((1..=n).map(|i| b_family(delta, i, order)));
        Ok(CostTables { n, delta, big_d, dprime, beta, b })
    }

    /// N1, N2 and N_F4T for the given omega.
    pub fn cost_f4t(&self, omega: f64, source: CostSource<'_>) -> CostLogs {
        let (n, delta, big_d, dprime) = (self.n, self.delta as usize, self.big_d as usize, self.dprime as usize);
        let mut n1 = f64::NEG_INFINITY;
        let s_bar: Vec<BigInt> = (0..=big_d).map(|d| (1..=n).map(|j| self.b[j].coeff(d)).sum()).collect();
        for d in delta..=(dprime + 1).min(big_d) {
            let lc = ln_big(&binom((n + d) as u64, d as u64));
            for i in 1..=n {
                let band = BigInt::from(binom((i - 1 + d) as u64, d as u64))
                    - if i >= 2 { BigInt::from(binom((i - 2 + d) as u64, d as u64)) } else { BigInt::zero() };
                let (r, s) = match source {
                    CostSource::Bar => (band - (self.beta[i].coeff(d) - self.beta[i - 1].coeff(d)), s_bar[d].clone()),
                    CostSource::Measured(m) => {
                        let stair = BigInt::from(m.stair_at(d, i)) - BigInt::from(m.stair_at(d, i - 1));
                        let s: u64 = (i..=n).map(|j| m.gamma_at(d, j)).sum();
                        (band - stair, BigInt::from(s))
                    }
                };
                let (lr, ls) = (ln_int(&r), ln_int(&s));
                let mut t = f64::NEG_INFINITY;
                if lr.is_finite() && ls.is_finite() {
                    t = lr + ls - (3.0 - omega) * lr.min(ls);
                }
                if ls.is_finite() {
                    t = ln_add(t, (omega - 1.0) * ls);
                }
                n1 = ln_add(n1, lc + t);
            }
        }
        let mut n2 = f64::NEG_INFINITY;
        for d in dprime + 2..=big_d {
            let g = match source {
                CostSource::Bar => self.beta[n - 1].coeff(big_d - d),
                CostSource::Measured(m) => BigInt::from(m.gamma_at(d, n)),
            };
            let lg = ln_int(&g);
            if !lg.is_finite() {
                continue;
            }
            let k = big_d - d;
            let reductors: BigUint = (0..3).map(|t| binom((n - 2 + k + t) as u64, (k + t) as u64)).sum();
            n2 = ln_add(n2, (omega - 2.0) * lg + ln_big(&binom((n + d) as u64, d as u64)) + ln_big(&reductors));
        }
        CostLogs { n1, n2, total: ln_add(n1, n2) }
    }

    /// ln N_Lazard = ln(n * C(n+D, D)^omega).
    pub fn ln_lazard(&self, omega: f64) -> f64 {
        libm::log(self.n as f64) + omega * ln_big(&binom(self.n as u64 + self.big_d as u64, self.big_d as u64))
    }

    /// N_F5, exact.
    pub fn f5(&self) -> BigUint {
        let (n, big_d) = (self.n, self.big_d as usize);
        let mut acc = BigInt::zero();
        for i in 1..=n {
            for d in self.delta as usize..=big_d {
                let b = self.b[i].coeff(d);
                if b.is_zero() {
                    continue;
                }
                acc += b * BigInt::from(binom((i - 1 + d) as u64, d as u64)) * BigInt::from(binom((n + d) as u64, d as u64));
            }
        }
        acc.to_biguint().unwrap_or_default()
    }

    /// Table value a = log_delta(N)/n from a natural log.
    pub fn per_var(&self, ln_cost: f64) -> f64 {
        ln_cost / libm::log(self.delta as f64) / self.n as f64
    }
}

/// (N1, N2, total) for `params`; see [`CostTables::cost_f4t`].
pub fn cost_f4t(params: &CostParams, source: CostSource<'_>) -> Result<CostLogs> {
    params.validate()?;
    Ok(CostTables::new(params.n, params.delta)?.cost_f4t(params.omega, source))
}

/// (ln N_Lazard, ln N_F5).
pub fn cost_competitors(params: &CostParams) -> Result<(f64, f64)> {
    params.validate()?;
    let t = CostTables::new(params.n, params.delta)?;
    Ok((t.ln_lazard(params.omega), ln_big(&t.f5())))
}

/// |G| = 1 + sum_{i<n} sum_d beta_{d,i} for a generic minimal grevlex basis.
pub fn gb_cardinality(n: usize, delta: u32) -> BigUint {
    // [(1-z^delta)^n/(1-z)^i]_+ is cut before degree n*delta for i < n
    let order = n * delta as usize + 1;
    let mut total = BigInt::one();
    for i in 1..n {
        total += beta_i(n, delta, i, order).sum();
    }
    total.to_biguint().unwrap_or_default()
}

/// E_p(delta).
pub fn e_p(p: f64, delta: u32) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("E_p needs p in (0, 1], got {p}")));
    }
    let a = p * (delta as f64 - 1.0);
    Ok(libm::log((1.0 + a) / delta as f64) + a * libm::log((1.0 + a) / a))
}

/// L_omega(delta), with L_2 = 1.
pub fn l_omega(omega: f64, delta: u32) -> f64 {
    if omega <= 2.0 {
        return 1.0;
    }
    let d = delta as f64;
    d / (1.0 - libm::exp(-1.0 / (omega - 2.0))) - 1.0 / (1.0 - libm::exp(-1.0 / (d * (omega - 2.0))))
}

/// l(omega) = L_omega(2).
pub fn ell(omega: f64) -> f64 {
    l_omega(omega, 2)
}

/// Closed form of L_omega(2) = 1/(1 + e^{-1/(2(omega-2))}) for omega > 2.
pub fn ell_closed(omega: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-1.0 / (2.0 * (omega - 2.0))))
}

/// c(epsilon, delta, omega) = E_{1/2}(delta) + E_{l(omega)+epsilon}(delta).
pub fn c_const(epsilon: f64, delta: u32, omega: f64) -> Result<f64> {
    Ok(e_p(0.5, delta)? + e_p(ell(omega) + epsilon, delta)?)
}

/// g(omega, delta) = 2.81 delta^{3-omega} / e^{E_{1/2}(delta) + E_{l(omega)}(delta)}.
pub fn gain(omega: f64, delta: u32) -> Result<f64> {
    let e = c_const(0.0, delta, omega)?;
    Ok(2.81 * libm::pow(delta as f64, 3.0 - omega) / libm::exp(e))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Constant {
    Ep(f64),
    LOmega,
    Ell,
    C,
    Gain,
}

/// Dispatcher over the asymptotic constants.
pub fn asymptotic_constant(delta: u32, omega: f64, epsilon: f64, which: Constant) -> Result<f64> {
    match which {
        Constant::Ep(p) => e_p(p, delta),
        Constant::LOmega => Ok(l_omega(omega, delta)),
        Constant::Ell => Ok(ell(omega)),
        Constant::C => c_const(epsilon, delta, omega),
        Constant::Gain => gain(omega, delta),
    }
}

/// One row of the cost/cardinality table.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub delta: u32,
    pub n: usize,
    pub omega: f64,
    pub f4t_bar: f64,
    pub lazard: f64,
    pub f5: f64,
    pub card: f64,
}

/// Rows for every (n, delta) of `grid` and every omega.
pub fn table_rows(grid: &[(usize, u32)], omegas: &[f64]) -> Result<Vec<TableRow>> {
    let mut out = Vec::new();
    for &(n, delta) in grid {
        out.extend(table_rows_for(n, delta, omegas)?);
    }
    Ok(out)
}

/// The rows of a single grid cell (what a worker computes).
pub fn table_rows_for(n: usize, delta: u32, omegas: &[f64]) -> Result<Vec<TableRow>> {
    let t = CostTables::new(n, delta)?;
    let f5 = t.per_var(ln_big(&t.f5()));
    let card = t.per_var(ln_big(&gb_cardinality(n, delta)));
    let mut out = Vec::new();
    for &omega in omegas {
        CostParams::new(n, delta, omega)?;
        out.push(TableRow {
            delta,
            n,
            omega,
            f4t_bar: t.per_var(t.cost_f4t(omega, CostSource::Bar).total),
            lazard: t.per_var(t.ln_lazard(omega)),
            f5,
            card,
        });
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "delta,n,omega,a_F4Tbar,a_Lazard,a_F5,b_card,a_F4Tbar_full,a_Lazard_full,a_F5_full,b_card_full";

/// CSV with values rounded to `precision` decimals plus full-precision columns.
pub fn emit_csv(rows: &[TableRow], precision: usize) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let p = precision;
        let _ = writeln!(
            s,
            "{},{},{},{:.p$},{:.p$},{:.p$},{:.p$},{},{},{},{}",
            r.delta, r.n, r.omega, r.f4t_bar, r.lazard, r.f5, r.card, r.f4t_bar, r.lazard, r.f5, r.card
        );
    }
    s
}

/// Rows of the table for the default grid, rendered as CSV.
pub fn emit_tables(grid: &[(usize, u32)], omegas: &[f64], precision: usize) -> Result<String> {
    Ok(emit_csv(&table_rows(grid, omegas)?, precision))
}
