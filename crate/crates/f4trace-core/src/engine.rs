//! The F4 driver, its trace-recording (F4B) and trace-replaying (F4T)
//! variants, random instances, and two independent oracles (Buchberger,
//! Lazard).
//!
//! Basis elements are stored in insertion order and referred to by that
//! "id"; pair bookkeeping switches to ap positions (see [`pairs::ap_order`])
//! only where the Gebauer-Moller test and the canonical row order need it.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Fp, OpCounter, PrimeField};
use crate::linalg::{echelon, reduction, MacaulayMatrix, RowLabel};
use crate::monos::{enumerate, EnumKind, Monomial, MonomialSet};
use crate::pairs::{self, ap_cmp, ap_order, make_pair_and_spoly, CriticalPair, SyzygyId};
use crate::poly::{remainder, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Homogeneous,
    Affine,
}

/// `n` dense polynomials of degree `delta` in `n` variables. Every monomial of
/// degree `delta` (or `<= delta` for [`Shape::Affine`]) gets an independent
/// uniform coefficient drawn from a ChaCha8 stream seeded with `seed`.
pub fn gen_random_system(n: usize, delta: u32, field: PrimeField, shape: Shape, seed: u64) -> Result<Vec<Poly>> {
    if n < 2 || delta < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2 and delta >= 2, got n={n}, delta={delta}")));
    }
    let kind = match shape {
        Shape::Homogeneous => EnumKind::Exact,
        Shape::Affine => EnumKind::UpTo,
    };
    let monos = enumerate(n, delta, n, kind);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = field.p();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let terms = monos.iter().map(|m| (m.clone(), Fp(rng.gen_range(0..p)))).collect();
        out.push(Poly::from_terms(n, field, terms));
    }
    Ok(out)
}

/// Sel: positions of the pairs of minimal degree.
pub fn select(degrees: &[u32]) -> Result<Vec<usize>> {
    let d = *degrees.iter().min().ok_or(Error::EmptyPairSet)?;
    Ok((0..degrees.len()).filter(|&k| degrees[k] == d).collect())
}

/// One reductor row `m * g`.
#[derive(Clone, Debug)]
pub struct Reductor {
    pub poly: Poly,
    pub m: Monomial,
    /// Basis id of `g`.
    pub g: usize,
}

/// Output of [`symbolic_preprocessing`]. `reductors` is sorted by descending
/// leading monomial, so its Macaulay matrix is already in echelon form;
/// `theta[k] = (m, lm(g))` describes `reductors[k]`.
#[derive(Clone, Debug, Default)]
pub struct Preprocessed {
    pub reductors: Vec<Reductor>,
    pub theta: Vec<(Monomial, Monomial)>,
}

/// Among the basis elements whose lm divides `m`, the one first in ap order.
fn pick_divisor(m: &Monomial, basis: &[Poly]) -> Option<usize> {
    basis
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_zero() && m.divisible_by(g.lm()))
        .min_by(|a, b| ap_cmp(a.1.lm(), b.1.lm()))
        .map(|(k, _)| k)
}

/// Worklist closure over supp(S u R): every monomial divisible by some lm(g)
/// gets exactly one reductor `(m/lm g) * g`, whose support is then queued.
pub fn symbolic_preprocessing(s: &[Poly], basis: &[Poly]) -> Result<Preprocessed> {
    let mut todo: BTreeSet<Monomial> = s.iter().flat_map(|f| f.support().cloned()).collect();
    let mut done: BTreeSet<Monomial> = BTreeSet::new();
    let mut out = Preprocessed::default();
    while let Some(m) = todo.pop_last() {
        if !done.insert(m.clone()) {
            continue;
        }
        let Some(k) = pick_divisor(&m, basis) else { continue };
        let g = &basis[k];
        let q = m.quotient(g.lm())?;
        let poly = g.mul_term(&q, Fp::ONE);
        for t in poly.support().skip(1) {
            if !done.contains(t) {
                todo.insert(t.clone());
            }
        }
        out.theta.push((q.clone(), g.lm().clone()));
        out.reductors.push(Reductor { poly, m: q, g: k });
    }
    sort_reductors(&mut out);
    Ok(out)
}

fn sort_reductors(p: &mut Preprocessed) {
    let mut idx: Vec<usize> = (0..p.reductors.len()).collect();
    idx.sort_by(|&a, &b| p.reductors[b].poly.lm().cmp(p.reductors[a].poly.lm()));
    p.reductors = idx.iter().map(|&k| p.reductors[k].clone()).collect();
    p.theta = idx.iter().map(|&k| p.theta[k].clone()).collect();
}

/// ConstructReductors: keep `(m1, m2)` when `m1*m2` is above `floor` (if
/// any) and some current basis element has leading monomial `m2`.
pub fn construct_reductors(theta: &[(Monomial, Monomial)], floor: Option<&Monomial>, basis: &[Poly]) -> Preprocessed {
    let mut out = Preprocessed::default();
    for (m1, m2) in theta {
        let lm = m1.mul(m2);
        if floor.is_some_and(|f| lm <= *f) {
            continue;
        }
        if let Some(k) = basis.iter().position(|g| !g.is_zero() && g.lm() == m2) {
            out.reductors.push(Reductor { poly: basis[k].mul_term(m1, Fp::ONE), m: m1.clone(), g: k });
            out.theta.push((m1.clone(), m2.clone()));
        }
    }
    sort_reductors(&mut out);
    out
}

/// A GM-surviving pair as the engine consumed it (ap positions at the time).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub pair: CriticalPair,
    pub lm_gj: Monomial,
    pub type1: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundStats {
    pub degree: u32,
    pub selected: usize,
    pub after_gm: usize,
    /// S-rows actually built (differs from `after_gm` only under replay).
    pub spairs: usize,
    pub reductors: usize,
    pub rows: usize,
    pub cols: usize,
    pub ops: u64,
    pub zero_rows: usize,
    pub new_lms: Vec<Monomial>,
    pub reductor_lms: Vec<Monomial>,
    pub pairs: Vec<PairRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Replay diverged from the trace in this round (0 = initial basis).
    TraceMismatch { round: usize, reason: String },
}

#[derive(Clone, Debug)]
pub struct GBResult {
    /// Monic basis, in ap order of the leading monomials.
    pub basis: Vec<Poly>,
    pub rounds: Vec<RoundStats>,
    pub status: Status,
    /// Field operations of the initial echelon form.
    pub init_ops: u64,
    pub ops: u64,
}

impl GBResult {
    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn lm_set(&self) -> MonomialSet {
        lm_set(&self.basis)
    }

    pub fn zero_reductions(&self) -> usize {
        self.rounds.iter().map(|r| r.zero_rows).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct F4Options {
    /// Drop basis elements whose lm is divisible by another one.
    pub minimalize: bool,
    /// Tail-reduce into the reduced basis (implies `minimalize`).
    pub inter_reduce: bool,
}

impl Default for F4Options {
    fn default() -> Self {
        F4Options { minimalize: true, inter_reduce: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceHeader {
    pub n: usize,
    pub p: u32,
    pub delta: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRound {
    pub degree: u32,
    /// 1-based canonical positions of the S-rows that did not reduce to zero.
    pub sigma: Vec<usize>,
    pub theta: Vec<(Monomial, Monomial)>,
    pub gamma: MonomialSet,
}

/// Gamma_0 plus one (Gamma, Sigma, Theta) triple per round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub header: TraceHeader,
    pub gamma0: MonomialSet,
    pub rounds: Vec<TraceRound>,
}

pub fn lm_set(basis: &[Poly]) -> MonomialSet {
    MonomialSet::from_vec(basis.iter().filter(|g| !g.is_zero()).map(|g| g.lm().clone()).collect())
}

fn check_system(f: &[Poly]) -> Result<(usize, PrimeField)> {
    let first = f.first().ok_or_else(|| Error::InvalidArgument("empty input system".to_string()))?;
    let (n, field) = (first.n(), first.field());
    for g in f {
        if g.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: g.n() });
        }
        if g.field() != field {
            return Err(Error::FieldMismatch { expected: field.p(), got: g.field().p() });
        }
    }
    Ok((n, field))
}

/// Engine state shared by F4, F4B and F4T.
struct State {
    field: PrimeField,
    basis: Vec<Poly>,
    pairs: Vec<(usize, usize)>,
    ops: OpCounter,
    init_ops: u64,
    rounds: Vec<RoundStats>,
}

/// The S-rows of one round, in canonical order.
struct Prepared {
    degree: u32,
    selected: usize,
    records: Vec<PairRecord>,
    spolys: Vec<Poly>,
}

/// What a round produced.
struct Outcome {
    nonzero: Vec<usize>,
    new_lms: MonomialSet,
    zero_rows: usize,
}

impl State {
    fn new(f: &[Poly]) -> Result<Self> {
        let (_, field) = check_system(f)?;
        let ops = OpCounter::new();
        let polys: Vec<Poly> = f.iter().filter(|g| !g.is_zero()).cloned().collect();
        let labels = (0..polys.len()).map(RowLabel::Input).collect();
        let mac = MacaulayMatrix::from_polys_auto(&polys, labels, field)?;
        let (e, _) = echelon(&mac, false, &ops);
        let mut st = State { field, basis: Vec::new(), pairs: Vec::new(), init_ops: ops.get(), ops, rounds: Vec::new() };
        for (g, _) in e.nonzero_polys() {
            st.basis.push(g.make_monic()?);
        }
        let k = st.basis.len();
        st.pairs = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
        Ok(st)
    }

    /// Sel, GM filter and canonical ordering; builds the S-polynomials.
    fn prepare(&mut self) -> Result<Prepared> {
        let degrees: Vec<u32> =
            self.pairs.iter().map(|&(a, b)| self.basis[a].lm().lcm(self.basis[b].lm()).degree()).collect();
        let sel = select(&degrees)?;
        let degree = degrees[sel[0]];
        let chosen: Vec<(usize, usize)> = sel.iter().map(|&k| self.pairs[k]).collect();
        let mut keep = vec![true; self.pairs.len()];
        for &k in &sel {
            keep[k] = false;
        }
        let mut it = keep.iter();
        self.pairs.retain(|_| *it.next().unwrap());

        let lms: Vec<Monomial> = self.basis.iter().map(|g| g.lm().clone()).collect();
        let perm = ap_order(&lms)?;
        let mut pos = vec![0; perm.len()];
        for (p, &id) in perm.iter().enumerate() {
            pos[id] = p;
        }
        let ap_lms: Vec<Monomial> = perm.iter().map(|&id| lms[id].clone()).collect();
        let syz: Vec<SyzygyId> = chosen.iter().map(|&(a, b)| SyzygyId::new(pos[a], pos[b])).collect();
        let mut surv = pairs::gm_filter(&syz, &ap_lms);
        surv.sort_by(|a, b| {
            let ta = ap_lms[a.i].lcm(&ap_lms[a.j]);
            let tb = ap_lms[b.i].lcm(&ap_lms[b.j]);
            tb.cmp(&ta).then(a.cmp(b))
        });
        let mut records = Vec::with_capacity(surv.len());
        let mut spolys = Vec::with_capacity(surv.len());
        for s in surv {
            let (gi, gj) = (perm[s.i], perm[s.j]);
            let (pair, sp) = make_pair_and_spoly(&self.basis[gi], &self.basis[gj], gi, gj)?;
            let lm_gj = self.basis[gj].lm().clone();
            let type1 = pairs::is_type1(&pair, &lm_gj);
            records.push(PairRecord { i: s.i, j: s.j, pair, lm_gj, type1 });
            spolys.push(sp);
        }
        Ok(Prepared { degree, selected: sel.len(), records, spolys })
    }

    /// Linear algebra of a round and adoption of the new rows.
    fn reduce_and_adopt(&mut self, prep: Prepared, red: &Preprocessed, after_gm: usize) -> Result<Outcome> {
        let mut support: Vec<Monomial> = Vec::new();
        for f in prep.spolys.iter().chain(red.reductors.iter().map(|r| &r.poly)) {
            support.extend(f.support().cloned());
        }
        let t = MonomialSet::from_vec(support);
        let s_labels = (0..prep.spolys.len()).map(RowLabel::SPair).collect();
        let s = MacaulayMatrix::from_polys(&prep.spolys, s_labels, t.clone(), self.field)?;
        let r_polys: Vec<Poly> = red.reductors.iter().map(|r| r.poly.clone()).collect();
        let r_labels = red.reductors.iter().map(|r| RowLabel::Reductor { m: r.m.clone(), g: r.g }).collect();
        let r = MacaulayMatrix::from_polys(&r_polys, r_labels, t.clone(), self.field)?;
        let reduced = reduction(&s, &r, &t, &self.ops)?;

        let old_lms: Vec<Monomial> = self.basis.iter().map(|g| g.lm().clone()).collect();
        let mut nonzero = Vec::new();
        let mut zero_rows = 0;
        let mut new_lms = Vec::new();
        let mut adopted = Vec::new();
        for k in 0..reduced.n.nrows() {
            if reduced.n.is_zero_row(k) {
                zero_rows += 1;
                continue;
            }
            if let RowLabel::SPair(c) = reduced.n.labels()[k] {
                nonzero.push(c + 1);
            }
            let g = reduced.n.row_poly(k).make_monic()?;
            if !old_lms.iter().any(|l| g.lm().divisible_by(l)) {
                new_lms.push(g.lm().clone());
                adopted.push(g);
            }
        }
        nonzero.sort_unstable();
        for g in adopted {
            let id = self.basis.len();
            self.basis.push(g);
            self.pairs.extend((0..id).map(|a| (a, id)));
        }
        let new_lms = MonomialSet::from_vec(new_lms);
        self.rounds.push(RoundStats {
            degree: prep.degree,
            selected: prep.selected,
            after_gm,
            spairs: prep.spolys.len(),
            reductors: red.reductors.len(),
            rows: s.nrows() + r.nrows(),
            cols: t.len(),
            ops: reduced.ops,
            zero_rows,
            new_lms: new_lms.elements().to_vec(),
            reductor_lms: r_polys.iter().map(|f| f.lm().clone()).collect(),
            pairs: prep.records,
        });
        Ok(Outcome { nonzero, new_lms, zero_rows })
    }

    fn finish(self, opts: F4Options, status: Status) -> Result<GBResult> {
        let mut basis = self.basis;
        if opts.inter_reduce {
            basis = inter_reduce(&basis)?;
        } else if opts.minimalize {
            basis = minimalize(&basis);
        } else {
            sort_ap(&mut basis);
        }
        Ok(GBResult { basis, rounds: self.rounds, status, init_ops: self.init_ops, ops: self.ops.get() })
    }
}

fn f4_impl(f: &[Poly], opts: F4Options, mut trace: Option<&mut Vec<TraceRound>>) -> Result<(GBResult, MonomialSet, u32)> {
    let mut st = State::new(f)?;
    let gamma0 = lm_set(&st.basis);
    let delta = f.iter().filter(|g| !g.is_zero()).map(|g| g.degree()).max().unwrap_or(0);
    while !st.pairs.is_empty() {
        let prep = st.prepare()?;
        let after_gm = prep.spolys.len();
        let red = symbolic_preprocessing(&prep.spolys, &st.basis)?;
        let degree = prep.degree;
        let theta = red.theta.clone();
        let out = st.reduce_and_adopt(prep, &red, after_gm)?;
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(TraceRound { degree, sigma: out.nonzero, theta, gamma: out.new_lms });
        }
    }
    Ok((st.finish(opts, Status::Ok)?, gamma0, delta))
}

/// Algorithm F4 with the Gebauer-Moller criterion and top-reduction.
pub fn f4(f: &[Poly], opts: F4Options) -> Result<GBResult> {
    Ok(f4_impl(f, opts, None)?.0)
}

/// F4B: F4 that also records the trace.
pub fn f4_build(f: &[Poly], opts: F4Options) -> Result<(GBResult, Trace)> {
    let mut rounds = Vec::new();
    let (res, gamma0, delta) = f4_impl(f, opts, Some(&mut rounds))?;
    let first = &f[0];
    let header = TraceHeader { n: first.n(), p: first.field().p(), delta };
    Ok((res, Trace { header, gamma0, rounds }))
}

/// F4T: replays `trace` on `f2`. A divergence is reported through
/// [`Status::TraceMismatch`], not as an error.
pub fn f4_trace(f2: &[Poly], trace: &Trace, opts: F4Options) -> Result<GBResult> {
    let (n, field) = check_system(f2)?;
    let h = &trace.header;
    if h.n != n || h.p != field.p() {
        return Err(Error::HeaderMismatch(format!("trace has n={} p={}, system has n={} p={}", h.n, h.p, n, field.p())));
    }
    let delta = f2.iter().filter(|g| !g.is_zero()).map(|g| g.degree()).max().unwrap_or(0);
    if delta != h.delta {
        return Err(Error::HeaderMismatch(format!("trace has delta={}, system has delta={delta}", h.delta)));
    }
    let mut st = State::new(f2)?;
    if lm_set(&st.basis) != trace.gamma0 {
        return st.finish(opts, mismatch(0, "initial leading monomials differ"));
    }
    let last = trace.rounds.iter().rposition(|r| !r.sigma.is_empty()).map_or(0, |k| k + 1);
    for (idx, round) in trace.rounds[..last].iter().enumerate() {
        let iota = idx + 1;
        if round.sigma.is_empty() {
            continue;
        }
        if st.pairs.is_empty() {
            return st.finish(opts, mismatch(iota, "pair set exhausted"));
        }
        let mut prep = st.prepare()?;
        let after_gm = prep.spolys.len();
        if prep.degree != round.degree {
            return st.finish(opts, mismatch(iota, &format!("round degree {} instead of {}", prep.degree, round.degree)));
        }
        if round.sigma.iter().any(|&k| k == 0 || k > after_gm) {
            return st.finish(opts, mismatch(iota, "sigma index out of range"));
        }
        let keep: Vec<usize> = round.sigma.iter().map(|&k| k - 1).collect();
        prep.spolys = keep.iter().map(|&k| prep.spolys[k].clone()).collect();
        prep.records = keep.iter().map(|&k| prep.records[k].clone()).collect();
        let floor = round.gamma.elements().last();
        let red = construct_reductors(&round.theta, floor, &st.basis);
        let out = st.reduce_and_adopt(prep, &red, after_gm)?;
        if out.zero_rows > 0 {
            return st.finish(opts, mismatch(iota, "reduction to zero"));
        }
        if out.new_lms != round.gamma {
            return st.finish(opts, mismatch(iota, "new leading monomials differ"));
        }
    }
    st.finish(opts, Status::Ok)
}

fn mismatch(round: usize, reason: &str) -> Status {
    Status::TraceMismatch { round, reason: reason.to_string() }
}

fn sort_ap(basis: &mut [Poly]) {
    basis.sort_by(|a, b| match (a.is_zero(), b.is_zero()) {
        (false, false) => ap_cmp(a.lm(), b.lm()),
        (x, y) => x.cmp(&y),
    });
}

/// Drops zero polynomials and every element whose lm is divisible by the lm
/// of another one (keeping the first among equal lms). Output in ap order.
pub fn minimalize(basis: &[Poly]) -> Vec<Poly> {
    let nz: Vec<&Poly> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut out: Vec<Poly> = Vec::new();
    for (k, g) in nz.iter().enumerate() {
        let redundant = nz.iter().enumerate().any(|(l, h)| {
            l != k && g.lm().divisible_by(h.lm()) && (g.lm() != h.lm() || l < k)
        });
        if !redundant {
            out.push((*g).clone());
        }
    }
    sort_ap(&mut out);
    out
}

/// The reduced Groebner basis from any Groebner basis.
pub fn inter_reduce(basis: &[Poly]) -> Result<Vec<Poly>> {
    let min = minimalize(basis);
    let mut out = Vec::with_capacity(min.len());
    for (k, g) in min.iter().enumerate() {
        let others: Vec<Poly> = min.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, h)| h.clone()).collect();
        out.push(remainder(g, &others)?.make_monic()?);
    }
    Ok(out)
}

/// Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner(basis: &[Poly]) -> Result<bool> {
    let g: Vec<&Poly> = basis.iter().filter(|g| !g.is_zero()).collect();
    let divisors: Vec<Poly> = g.iter().map(|&p| p.clone()).collect();
    for a in 0..g.len() {
        for b in a + 1..g.len() {
            let (_, s) = make_pair_and_spoly(g[a], g[b], a, b)?;
            if !remainder(&s, &divisors)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    Buchberger,
    /// Degree bound for the Macaulay matrix (None: n(delta-1)+1).
    Lazard(Option<u32>),
}

pub fn oracle_gb(f: &[Poly], method: OracleMethod) -> Result<GBResult> {
    match method {
        OracleMethod::Buchberger => buchberger(f),
        OracleMethod::Lazard(d) => lazard(f, d),
    }
}

fn plain_result(basis: Vec<Poly>, ops: u64) -> GBResult {
    GBResult { basis, rounds: Vec::new(), status: Status::Ok, init_ops: 0, ops }
}

/// Textbook Buchberger: one pair at a time (lowest lcm degree first), full
/// multivariate division, no criteria. Returns the reduced basis.
pub fn buchberger(f: &[Poly]) -> Result<GBResult> {
    check_system(f)?;
    let mut g: Vec<Poly> = Vec::new();
    for p in f.iter().filter(|p| !p.is_zero()) {
        g.push(p.make_monic()?);
    }
    let mut queue: Vec<(usize, usize)> = (0..g.len()).flat_map(|a| (a + 1..g.len()).map(move |b| (a, b))).collect();
    while !queue.is_empty() {
        let k = (0..queue.len())
            .min_by_key(|&k| {
                let (a, b) = queue[k];
                (g[a].lm().lcm(g[b].lm()).degree(), k)
            })
            .unwrap();
        let (a, b) = queue.swap_remove(k);
        let (_, s) = make_pair_and_spoly(&g[a], &g[b], a, b)?;
        let r = remainder(&s, &g)?;
        if !r.is_zero() {
            let id = g.len();
            g.push(r.make_monic()?);
            queue.extend((0..id).map(|a| (a, id)));
        }
    }
    Ok(plain_result(inter_reduce(&g)?, 0))
}

/// The Macaulay bound n(delta-1)+1 for `n` equations of maximal degree `delta`.
pub fn macaulay_bound(n: usize, delta: u32) -> u32 {
    n as u32 * (delta.max(1) - 1) + 1
}

/// Lazard's method: one reduced echelon form of all m*f_i of degree <= D.
pub fn lazard(f: &[Poly], bound: Option<u32>) -> Result<GBResult> {
    let (n, field) = check_system(f)?;
    let nz: Vec<&Poly> = f.iter().filter(|p| !p.is_zero()).collect();
    let delta = nz.iter().map(|p| p.degree()).max().unwrap_or(0);
    let d = bound.unwrap_or_else(|| macaulay_bound(n, delta));
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for p in &nz {
        if p.degree() > d {
            continue;
        }
        for m in enumerate(n, d - p.degree(), n, EnumKind::UpTo).iter() {
            rows.push(p.mul_term(m, Fp::ONE));
            labels.push(RowLabel::Reductor { m: m.clone(), g: labels.len() });
        }
    }
    let ops = OpCounter::new();
    let mac = MacaulayMatrix::from_polys_auto(&rows, labels, field)?;
    let (e, _) = echelon(&mac, true, &ops);
    let cands: Vec<Poly> = e.nonzero_polys().into_iter().map(|(p, _)| p).collect();
    let g = minimalize(&cands);
    if !is_groebner(&g)? {
        return Err(Error::DegreeBoundTooSmall(d));
    }
    Ok(plain_result(inter_reduce(&g)?, ops.get()))
}

// ---------------------------------------------------------------------------
// trace text format

fn mono_list(ms: &[Monomial]) -> String {
    ms.iter().map(|m| m.to_text()).collect::<Vec<_>>().join(";")
}

impl Trace {
    pub fn to_text(&self) -> String {
        let h = &self.header;
        let mut s = String::new();
        let _ = writeln!(s, "F4TRACE v1 n={} p={} delta={} ord=grevlex", h.n, h.p, h.delta);
        let _ = writeln!(s, "GAMMA0: {}", mono_list(self.gamma0.elements()));
        for (k, r) in self.rounds.iter().enumerate() {
            let _ = writeln!(s, "ROUND {} deg={}", k + 1, r.degree);
            let sigma: Vec<String> = r.sigma.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(s, "SIGMA: {}", sigma.join(","));
            let theta: Vec<String> = r.theta.iter().map(|(a, b)| format!("{}|{}", a.to_text(), b.to_text())).collect();
            let _ = writeln!(s, "THETA: {}", theta.join(";"));
            let _ = writeln!(s, "GAMMA: {}", mono_list(r.gamma.elements()));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Trace> {
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim_end())).filter(|(_, l)| !l.is_empty());
        let (ln, head) = lines.next().ok_or_else(|| Error::parse(1, "empty trace"))?;
        let header = parse_header(ln, head)?;
        let n = header.n;
        let (ln, g0) = lines.next().ok_or_else(|| Error::parse(ln + 1, "missing GAMMA0 line"))?;
        let gamma0 = MonomialSet::from_vec(parse_monos(ln, field_after(ln, g0, "GAMMA0:")?, n)?);
        let mut rounds = Vec::new();
        while let Some((ln, l)) = lines.next() {
            let rest = l.strip_prefix("ROUND ").ok_or_else(|| Error::parse(ln, "expected ROUND"))?;
            let mut it = rest.split_whitespace();
            let idx: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| Error::parse(ln, "bad round index"))?;
            if idx != rounds.len() + 1 {
                return Err(Error::parse(ln, format!("round {idx} out of sequence")));
            }
            let degree: u32 = it
                .next()
                .and_then(|t| t.strip_prefix("deg="))
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::parse(ln, "bad deg= field"))?;
            let mut next = |tag: &str| -> Result<(usize, &str)> {
                let (k, l) = lines.next().ok_or_else(|| Error::parse(ln, format!("truncated round: missing {tag}")))?;
                Ok((k, field_after(k, l, tag)?))
            };
            let (ks, s) = next("SIGMA:")?;
            let (kt, t) = next("THETA:")?;
            let (kg, g) = next("GAMMA:")?;
            let sigma = if s.is_empty() {
                Vec::new()
            } else {
                s.split(',')
                    .map(|x| x.trim().parse::<usize>().map_err(|_| Error::parse(ks, format!("bad index '{x}'"))))
                    .collect::<Result<Vec<_>>>()?
            };
            let mut theta = Vec::new();
            if !t.is_empty() {
                for item in t.split(';') {
                    let (a, b) = item.split_once('|').ok_or_else(|| Error::parse(kt, "theta entry without '|'"))?;
                    theta.push((parse_mono(kt, a, n)?, parse_mono(kt, b, n)?));
                }
            }
            let gamma = MonomialSet::from_vec(parse_monos(kg, g, n)?);
            rounds.push(TraceRound { degree, sigma, theta, gamma });
        }
        Ok(Trace { header, gamma0, rounds })
    }
}

fn field_after<'a>(ln: usize, l: &'a str, tag: &str) -> Result<&'a str> {
    l.strip_prefix(tag).map(str::trim).ok_or_else(|| Error::parse(ln, format!("expected {tag}")))
}

fn parse_mono(ln: usize, s: &str, n: usize) -> Result<Monomial> {
    Monomial::from_text(s.trim(), n).map_err(|e| Error::parse(ln, e))
}

fn parse_monos(ln: usize, s: &str, n: usize) -> Result<Vec<Monomial>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(|x| parse_mono(ln, x, n)).collect()
}

fn parse_header(ln: usize, l: &str) -> Result<TraceHeader> {
    let toks: Vec<&str> = l.split_whitespace().collect();
    if toks.first() != Some(&"F4TRACE") {
        return Err(Error::parse(ln, "not a trace file (missing F4TRACE tag)"));
    }
    match toks.get(1) {
        Some(&"v1") => {}
        Some(v) => return Err(Error::parse(ln, format!("unsupported trace version '{v}'"))),
        None => return Err(Error::parse(ln, "missing version")),
    }
    let (mut n, mut p, mut delta, mut ord) = (None, None, None, None);
    for t in &toks[2..] {
        let (k, v) = t.split_once('=').ok_or_else(|| Error::parse(ln, format!("bad header field '{t}'")))?;
        let bad = || Error::parse(ln, format!("bad value in '{t}'"));
        match k {
            "n" => n = Some(v.parse::<usize>().map_err(|_| bad())?),
            "p" => p = Some(v.parse::<u32>().map_err(|_| bad())?),
            "delta" => delta = Some(v.parse::<u32>().map_err(|_| bad())?),
            "ord" => ord = Some(v),
            _ => return Err(Error::parse(ln, format!("unknown header field '{k}'"))),
        }
    }
    if ord != Some("grevlex") {
        return Err(Error::parse(ln, "ord must be grevlex"));
    }
    match (n, p, delta) {
        (Some(n), Some(p), Some(delta)) if n >= 1 => Ok(TraceHeader { n, p, delta }),
        _ => Err(Error::parse(ln, "header needs n, p and delta")),
    }
}

/// Monomials of the quotient ring for a zero-dimensional lm ideal, None if
/// the staircase is infinite. Ascending grevlex.
pub fn staircase(lms: &MonomialSet, n: usize) -> Option<Vec<Monomial>> {
    // zero-dimensional iff every variable has a pure power among the lms
    let mut cap = 0u32;
    for k in 0..n {
        let e = lms.iter().filter(|m| is_pure_power(m, k)).map(|m| m.degree()).min()?;
        cap += e - 1;
    }
    let mut out = Vec::new();
    for d in 0..=cap {
        for m in enumerate(n, d, n, EnumKind::Exact).iter().rev() {
            if !lms.iter().any(|l| m.divisible_by(l)) {
                out.push(m.clone());
            }
        }
    }
    Some(out)
}

fn is_pure_power(m: &Monomial, k: usize) -> bool {
    m.degree() > 0 && m.exps()[k] as u32 == m.degree()
}
