//! Checks of the structural properties of generic F4 runs on concrete
//! systems. Each check returns a [`Report`]; an unmet prerequisite is an
//! `Err(PreconditionUnmet)` rather than a failing verdict.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::analysis::{beta_last, bounds, PowerSeries};
use crate::engine::{f4, inter_reduce, lm_set, staircase, F4Options, GBResult};
use crate::error::{Error, Result};
use crate::field::{Fp, OpCounter};
use crate::linalg::{echelon, MacaulayMatrix, RowLabel};
use crate::monos::{binom_u128, enumerate, EnumKind, Monomial, MonomialSet};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyKind {
    Bezout,
    HilbertRegular,
    SemiRegular,
    Stable,
    PsiBijection,
    Type1Pairs,
    DegreeMonotone,
    TruncationGb,
    HalfStaircase,
    LmAffineHomog,
    NonemptyDegrees,
    RrefContainsGb,
    NoetherPosition,
    ReductorBand,
}

impl PropertyKind {
    pub const ALL: [PropertyKind; 14] = [
        PropertyKind::Bezout,
        PropertyKind::HilbertRegular,
        PropertyKind::SemiRegular,
        PropertyKind::Stable,
        PropertyKind::PsiBijection,
        PropertyKind::Type1Pairs,
        PropertyKind::DegreeMonotone,
        PropertyKind::TruncationGb,
        PropertyKind::HalfStaircase,
        PropertyKind::LmAffineHomog,
        PropertyKind::NonemptyDegrees,
        PropertyKind::RrefContainsGb,
        PropertyKind::NoetherPosition,
        PropertyKind::ReductorBand,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            PropertyKind::Bezout => "bezout",
            PropertyKind::HilbertRegular => "hilbert_regular",
            PropertyKind::SemiRegular => "semi_regular",
            PropertyKind::Stable => "stable",
            PropertyKind::PsiBijection => "psi_bijection",
            PropertyKind::Type1Pairs => "type1_pairs",
            PropertyKind::DegreeMonotone => "degree_monotone",
            PropertyKind::TruncationGb => "truncation_gb",
            PropertyKind::HalfStaircase => "half_staircase",
            PropertyKind::LmAffineHomog => "lm_affine_homog",
            PropertyKind::NonemptyDegrees => "nonempty_degrees",
            PropertyKind::RrefContainsGb => "rref_contains_gb",
            PropertyKind::NoetherPosition => "noether_position",
            PropertyKind::ReductorBand => "reductor_band",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.tag() == s)
    }

    /// Properties whose failure on a random instance may just be bad luck.
    pub fn genericity_sensitive(self) -> bool {
        matches!(self, PropertyKind::Type1Pairs | PropertyKind::HalfStaircase | PropertyKind::Stable)
    }
}

/// Where a checked system came from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub delta: u32,
    pub p: u32,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// `genericity_candidate`: a random instance may simply be non-generic.
    Fail { witness: String, genericity_candidate: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub property: PropertyKind,
    pub instance: Instance,
    pub verdict: Verdict,
    pub stats: Vec<(String, String)>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// A system with its F4 run (minimal basis), shared by all checks.
#[derive(Clone, Debug)]
pub struct Subject {
    pub system: Vec<Poly>,
    pub n: usize,
    pub run: GBResult,
    pub lms: MonomialSet,
}

impl Subject {
    pub fn new(system: Vec<Poly>) -> Result<Self> {
        let run = f4(&system, F4Options::default())?;
        let n = system.first().map_or(0, |f| f.n());
        let lms = run.lm_set();
        Ok(Subject { system, n, run, lms })
    }

    fn degrees(&self) -> Vec<u32> {
        self.system.iter().filter(|f| !f.is_zero()).map(|f| f.degree()).collect()
    }

    fn hd(&self) -> Vec<Poly> {
        self.system.iter().map(|f| f.hd()).collect()
    }

    fn is_homogeneous(&self) -> bool {
        self.system.iter().all(|f| f.is_homogeneous())
    }

    /// delta when the system is n polynomials all of degree delta.
    fn square_uniform(&self) -> Result<u32> {
        let d = self.degrees();
        if d.len() == self.n && d.windows(2).all(|w| w[0] == w[1]) && !d.is_empty() {
            Ok(d[0])
        } else {
            Err(Error::PreconditionUnmet("square_uniform_degree".to_string()))
        }
    }

    fn zero_dim_staircase(&self) -> Result<Vec<Monomial>> {
        staircase(&self.lms, self.n).ok_or_else(|| Error::PreconditionUnmet("zero_dimensional".to_string()))
    }
}

struct Check {
    stats: Vec<(String, String)>,
    failure: Option<String>,
}

impl Check {
    fn new() -> Self {
        Check { stats: Vec::new(), failure: None }
    }

    fn stat(&mut self, k: &str, v: impl ToString) {
        self.stats.push((k.to_string(), v.to_string()));
    }

    fn fail(&mut self, w: String) {
        if self.failure.is_none() {
            self.failure = Some(w);
        }
    }
}

pub fn verify(kind: PropertyKind, subj: &Subject, inst: &Instance) -> Result<Report> {
    let mut c = Check::new();
    match kind {
        PropertyKind::Bezout => bezout(subj, &mut c)?,
        PropertyKind::HilbertRegular => hilbert_regular(subj, &mut c)?,
        PropertyKind::SemiRegular => semi_regular(subj, &mut c)?,
        PropertyKind::Stable => stable(subj, &mut c),
        PropertyKind::PsiBijection => psi_bijection(subj, &mut c)?,
        PropertyKind::Type1Pairs => type1_pairs(subj, &mut c),
        PropertyKind::DegreeMonotone => degree_monotone(subj, &mut c)?,
        PropertyKind::TruncationGb => truncation_gb(subj, &mut c)?,
        PropertyKind::HalfStaircase => half_staircase(subj, &mut c)?,
        PropertyKind::LmAffineHomog => lm_affine_homog(subj, &mut c)?,
        PropertyKind::NonemptyDegrees => nonempty_degrees(subj, &mut c)?,
        PropertyKind::RrefContainsGb => rref_contains_gb(subj, &mut c)?,
        PropertyKind::NoetherPosition => noether_position(subj, &mut c)?,
        PropertyKind::ReductorBand => reductor_band(subj, &mut c)?,
    }
    let verdict = match c.failure {
        None => Verdict::Pass,
        Some(witness) => Verdict::Fail { witness, genericity_candidate: kind.genericity_sensitive() && inst.seed.is_some() },
    };
    Ok(Report { property: kind, instance: inst.clone(), verdict, stats: c.stats })
}

/// Dimension of the degree-d part of k[x]/<lms>, for d = 0..=upto.
pub fn hilbert_coeffs(lms: &MonomialSet, n: usize, upto: u32) -> Vec<u64> {
    (0..=upto)
        .map(|d| enumerate(n, d, n, EnumKind::Exact).iter().filter(|m| !lms.iter().any(|l| m.divisible_by(l))).count() as u64)
        .collect()
}

/// Coefficients of prod_i (1 - z^{d_i}) / (1 - z)^n up to `upto`.
fn ci_series(degrees: &[u32], n: usize, upto: u32) -> Vec<i128> {
    let mut c = vec![0i128; upto as usize + 1];
    c[0] = 1;
    for &d in degrees {
        for t in (d as usize..=upto as usize).rev() {
            c[t] -= c[t - d as usize];
        }
    }
    for _ in 0..n {
        for t in 1..=upto as usize {
            c[t] += c[t - 1];
        }
    }
    c
}

fn compare_series(c: &mut Check, got: &[u64], want: &[i128]) {
    for (d, (&g, &w)) in got.iter().zip(want).enumerate() {
        if g as i128 != w {
            c.fail(format!("degree {d}: dimension {g}, expected {w}"));
            return;
        }
    }
}

fn bezout(s: &Subject, c: &mut Check) -> Result<()> {
    let stair = s.zero_dim_staircase()?;
    let want: u128 = s.degrees().iter().map(|&d| d as u128).product();
    c.stat("dimension", stair.len());
    c.stat("expected", want);
    if stair.len() as u128 != want {
        c.fail(format!("quotient dimension {} != product of degrees {want}", stair.len()));
    }
    Ok(())
}

fn hd_lms(s: &Subject) -> Result<MonomialSet> {
    if s.is_homogeneous() {
        return Ok(s.lms.clone());
    }
    Ok(f4(&s.hd(), F4Options::default())?.lm_set())
}

fn hilbert_regular(s: &Subject, c: &mut Check) -> Result<()> {
    let degs = s.degrees();
    let upto = degs.iter().map(|d| d - 1).sum::<u32>() + 2;
    let got = hilbert_coeffs(&hd_lms(s)?, s.n, upto);
    let want = ci_series(&degs, s.n, upto);
    c.stat("checked_up_to", upto);
    compare_series(c, &got, &want);
    Ok(())
}

fn semi_regular(s: &Subject, c: &mut Check) -> Result<()> {
    let degs = s.degrees();
    if degs.is_empty() || degs.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::PreconditionUnmet("uniform_degree".to_string()));
    }
    let delta = degs[0];
    let upto = s.n as u32 * (delta - 1) + 2;
    let got = hilbert_coeffs(&hd_lms(s)?, s.n, upto);
    let series = PowerSeries::expand_ratio(degs.len() as u32, s.n as u32, delta, upto as usize).plus_truncate();
    let want: Vec<i128> = series.coeffs().iter().map(|x| x.to_i128().unwrap_or(i128::MAX)).collect();
    c.stat("generators", degs.len());
    c.stat("checked_up_to", upto);
    compare_series(c, &got, &want);
    Ok(())
}

/// First (m, i, j) with x_i | m, j < i and x_j m / x_i outside the ideal.
pub fn stability_witness(lms: &MonomialSet) -> Option<(Monomial, usize, usize)> {
    for m in lms.iter() {
        for i in 1..=m.n() {
            if m.exp(i) == 0 {
                continue;
            }
            for j in 1..i {
                let mut e = m.exps().to_vec();
                e[i - 1] -= 1;
                e[j - 1] += 1;
                let t = Monomial::new(e);
                if !lms.iter().any(|l| t.divisible_by(l)) {
                    return Some((m.clone(), i, j));
                }
            }
        }
    }
    None
}

fn stable(s: &Subject, c: &mut Check) {
    c.stat("generators", s.lms.len());
    if let Some((m, i, j)) = stability_witness(&s.lms) {
        c.fail(format!("m={m} i={i} j={j}: x{j}*m/x{i} not in lm ideal"));
    }
}

fn in_ideal(m: &Monomial, lms: &MonomialSet) -> bool {
    lms.iter().any(|l| m.divisible_by(l))
}

fn psi_bijection(s: &Subject, c: &mut Check) -> Result<()> {
    let stair = s.zero_dim_staircase()?;
    if stability_witness(&s.lms).is_some() {
        return Err(Error::PreconditionUnmet("stable".to_string()));
    }
    let n = s.n;
    for l in 1..=n {
        let domain: Vec<&Monomial> = stair.iter().filter(|m| m.ind() < l).collect();
        let target: MonomialSet = MonomialSet::from_vec(s.lms.iter().filter(|m| m.ind() == l).cloned().collect());
        let mut image = Vec::with_capacity(domain.len());
        for m in domain.iter() {
            let mut k: u16 = 0;
            let mut t = (*m).clone();
            while !in_ideal(&t, &s.lms) {
                k += 1;
                t = t.mul(&Monomial::var(n, l));
                if k as u32 > stair.len() as u32 + 1 {
                    c.fail(format!("l={l}: no alpha for m={m}"));
                    return Ok(());
                }
            }
            if !target.contains(&t) {
                c.fail(format!("l={l}: psi({m}) = {t} is not a basis lm with index {l}"));
                return Ok(());
            }
            image.push(t);
        }
        let img = MonomialSet::from_vec(image.clone());
        if img.len() != image.len() {
            c.fail(format!("l={l}: psi is not injective"));
            return Ok(());
        }
        if let Some(miss) = target.iter().find(|t| !img.contains(t)) {
            c.fail(format!("l={l}: {miss} has no preimage"));
            return Ok(());
        }
        c.stat(&format!("domain_{l}"), domain.len());
    }
    Ok(())
}

fn type1_pairs(s: &Subject, c: &mut Check) {
    let mut total = 0;
    for (r, round) in s.run.rounds.iter().enumerate() {
        for p in &round.pairs {
            total += 1;
            if !p.type1 {
                c.fail(format!(
                    "round {} (deg {}): pair ({}, {}) with tj={} and lm(g_j)={}",
                    r + 1,
                    round.degree,
                    p.i + 1,
                    p.j + 1,
                    p.pair.tj,
                    p.lm_gj
                ));
            }
        }
    }
    c.stat("pairs", total);
}

fn require_regular(s: &Subject) -> Result<()> {
    let mut c = Check::new();
    hilbert_regular(s, &mut c)?;
    if c.failure.is_some() {
        return Err(Error::PreconditionUnmet("hilbert_regular".to_string()));
    }
    Ok(())
}

fn degree_monotone(s: &Subject, c: &mut Check) -> Result<()> {
    require_regular(s)?;
    let mut prev = None;
    for (r, round) in s.run.rounds.iter().enumerate() {
        if prev.is_some_and(|p| round.degree <= p) {
            c.fail(format!("round {} has degree {} after degree {}", r + 1, round.degree, prev.unwrap_or(0)));
        }
        if let Some(m) = round.new_lms.iter().find(|m| m.degree() != round.degree) {
            c.fail(format!("round {} (deg {}) adopted lm {m} of degree {}", r + 1, round.degree, m.degree()));
        }
        prev = Some(round.degree);
    }
    c.stat("rounds", s.run.rounds.len());
    Ok(())
}

fn reduced_gb(f: &[Poly]) -> Result<Vec<Poly>> {
    Ok(f4(f, F4Options { minimalize: true, inter_reduce: true })?.basis)
}

fn truncation_gb(s: &Subject, c: &mut Check) -> Result<()> {
    if !s.is_homogeneous() {
        return Err(Error::PreconditionUnmet("homogeneous".to_string()));
    }
    let full = reduced_gb(&s.system)?;
    for j in 1..s.n {
        let phi: Vec<Poly> = s.system.iter().map(|f| f.phi(j).shrink(j)).filter(|f| !f.is_zero()).collect();
        let lhs = if phi.is_empty() { Vec::new() } else { reduced_gb(&phi)? };
        let mut rhs = Vec::new();
        for g in full.iter().filter(|g| g.lm().ind() <= j) {
            rhs.push(g.phi(j).shrink(j).make_monic()?);
        }
        let rhs = inter_reduce(&rhs)?;
        c.stat(&format!("size_{j}"), lhs.len());
        if lhs != rhs {
            let l = lm_set(&lhs);
            let r = lm_set(&rhs);
            let w = match l.iter().find(|m| !r.contains(m)).or_else(|| r.iter().find(|m| !l.contains(m))) {
                Some(m) => format!("j={j}: leading monomial {m} in only one basis"),
                None => format!("j={j}: same leading monomials, different tails"),
            };
            c.fail(w);
        }
    }
    Ok(())
}

fn half_staircase(s: &Subject, c: &mut Check) -> Result<()> {
    let delta = s.square_uniform()?;
    let stair = s.zero_dim_staircase()?;
    let n = s.n;
    let (big_d, dprime) = bounds(n, delta);
    let beta = beta_last(n, delta);
    for d in dprime + 1..=big_d {
        let got = MonomialSet::from_vec(s.lms.iter().filter(|m| m.degree() == d).cloned().collect());
        let shift = Monomial::var_pow(n, n, (2 * d - big_d) as u16);
        let want = MonomialSet::from_vec(
            stair.iter().filter(|m| m.degree() == big_d - d && m.ind() < n).map(|m| m.mul(&shift)).collect(),
        );
        let count = beta.coeff((big_d - d) as usize);
        if got != want {
            let m = got.iter().find(|m| !want.contains(m)).or_else(|| want.iter().find(|m| !got.contains(m)));
            c.fail(format!("degree {d}: lm sets differ at {}", m.map_or(String::from("?"), |m| m.to_string())));
        } else if count != (got.len() as u64).into() {
            c.fail(format!("degree {d}: {} elements, beta gives {count}", got.len()));
        }
        c.stat(&format!("deg_{d}"), got.len());
    }
    Ok(())
}

fn lm_affine_homog(s: &Subject, c: &mut Check) -> Result<()> {
    require_regular(s)?;
    let h = hd_lms(s)?;
    c.stat("size", s.lms.len());
    if h != s.lms {
        let m = s.lms.iter().find(|m| !h.contains(m)).or_else(|| h.iter().find(|m| !s.lms.contains(m)));
        c.fail(format!("lm sets differ at {}", m.map_or(String::from("?"), |m| m.to_string())));
    }
    Ok(())
}

fn nonempty_degrees(s: &Subject, c: &mut Check) -> Result<()> {
    let delta = s.square_uniform()?;
    let (big_d, _) = bounds(s.n, delta);
    let present: Vec<u32> = {
        let mut v: Vec<u32> = s.lms.iter().map(|m| m.degree()).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let want: Vec<u32> = (delta..=big_d).collect();
    c.stat("max_degree", present.last().copied().unwrap_or(0));
    if present != want {
        let d = want.iter().find(|d| !present.contains(d)).or_else(|| present.iter().find(|d| !want.contains(d)));
        c.fail(format!("degree {} breaks the range {delta}..={big_d}", d.copied().unwrap_or(0)));
    }
    Ok(())
}

fn rref_contains_gb(s: &Subject, c: &mut Check) -> Result<()> {
    if !s.is_homogeneous() {
        return Err(Error::PreconditionUnmet("homogeneous".to_string()));
    }
    let field = s.system[0].field();
    let g = reduced_gb(&s.system)?;
    let n = s.n;
    let mut degrees: Vec<u32> = g.iter().map(|p| p.degree()).collect();
    degrees.dedup();
    let ops = OpCounter::new();
    for e in degrees {
        let mut rows = Vec::new();
        for f in s.system.iter().filter(|f| !f.is_zero() && f.degree() <= e) {
            for m in enumerate(n, e - f.degree(), n, EnumKind::Exact).iter() {
                rows.push(f.mul_term(m, Fp::ONE));
            }
        }
        let labels = (0..rows.len()).map(RowLabel::Input).collect();
        let mac = MacaulayMatrix::from_polys(&rows, labels, enumerate(n, e, n, EnumKind::Exact), field)?;
        let (rref, _) = echelon(&mac, true, &ops);
        let have: Vec<Poly> = rref.nonzero_polys().into_iter().map(|(p, _)| p).collect();
        for p in g.iter().filter(|p| p.degree() == e) {
            if !have.contains(p) {
                c.fail(format!("degree {e}: basis element with lm {} is not a row", p.lm()));
            }
        }
    }
    Ok(())
}

fn noether_position(s: &Subject, c: &mut Check) -> Result<()> {
    let delta = s.square_uniform()?;
    let n = s.n;
    let hd = s.hd();
    let field = hd[0].field();
    for i in 1..=n {
        // left: the truncation phi((hd f)_{1..i}, i) is regular in k[x_1..x_i]
        let trunc: Vec<Poly> = hd[..i].iter().map(|f| f.phi(i).shrink(i)).collect();
        let left = if trunc.iter().any(|f| f.is_zero()) {
            false
        } else {
            let lms = f4(&trunc, F4Options::default())?.lm_set();
            let upto = i as u32 * (delta - 1) + 1;
            let want = ci_series(&vec![delta; i], i, upto);
            hilbert_coeffs(&lms, i, upto).iter().zip(&want).all(|(&a, &b)| a as i128 == b)
        };
        // right: k[x_{i+1}..x_n] -> k[x]/<hd f_1..f_i> is a Noether normalisation:
        // finite (adding x_{i+1}..x_n gives a zero-dimensional ideal) and
        // injective (the Hilbert series is that of a complete intersection)
        let mut with_vars = hd[..i].to_vec();
        for k in i + 1..=n {
            with_vars.push(Poly::monomial(Monomial::var(n, k), Fp::ONE, field));
        }
        let finite = staircase(&f4(&with_vars, F4Options::default())?.lm_set(), n).is_some();
        let upto = i as u32 * (delta - 1) + delta + 1;
        let lms = f4(&hd[..i], F4Options::default())?.lm_set();
        let want = ci_series(&vec![delta; i], n, upto);
        let ci = hilbert_coeffs(&lms, n, upto).iter().zip(&want).all(|(&a, &b)| a as i128 == b);
        let right = finite && ci;
        c.stat(&format!("i{i}"), format!("{left}/{right}"));
        if left != right {
            c.fail(format!("i={i}: truncation regular = {left}, Noether position = {right}"));
        }
    }
    Ok(())
}

/// Sum_{k=0}^{2} C(n-2+D-d+k, D-d+k).
pub fn reductor_bound(n: usize, big_d: u32, d: u32) -> u128 {
    let k0 = (big_d - d) as u64;
    (0..3).map(|k| binom_u128(n as u64 - 2 + k0 + k, k0 + k)).sum()
}

fn reductor_band(s: &Subject, c: &mut Check) -> Result<()> {
    let delta = s.square_uniform()?;
    if !s.is_homogeneous() {
        return Err(Error::PreconditionUnmet("homogeneous".to_string()));
    }
    let n = s.n;
    let (big_d, dprime) = bounds(n, delta);
    let mut checked = 0;
    for round in s.run.rounds.iter().filter(|r| r.degree >= dprime + 2 && r.degree <= big_d) {
        let d = round.degree;
        let (lo, hi) = ((2 * d).saturating_sub(big_d + 2), 2 * d - big_d);
        for m in &round.reductor_lms {
            let e = m.exp(n) as u32;
            if m.ind() < n || e < lo || e > hi {
                c.fail(format!("degree {d}: reductor lm {m} outside x{n}-degree [{lo}, {hi}] or ind < n"));
            }
        }
        let bound = reductor_bound(n, big_d, d);
        if round.reductor_lms.len() as u128 > bound {
            c.fail(format!("degree {d}: {} reductors, bound {bound}", round.reductor_lms.len()));
        }
        c.stat(&format!("deg_{d}"), format!("{}/{bound}", round.reductor_lms.len()));
        checked += 1;
    }
    c.stat("rounds_checked", checked);
    Ok(())
}
