//! Critical pairs, S-polynomials, the orderings used by the Gebauer-Moller
//! test, the set B(G) and the type-1 predicate.
//!
//! Index arguments `i, j, k` below are positions in the ap-ordered basis
//! (0-based; see [`ap_order`]).

use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::monos::Monomial;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    /// lcm(lm(g_i), lm(g_j))
    pub t: Monomial,
    pub ti: Monomial,
    pub tj: Monomial,
    /// Generator ids (insertion order in the engine's basis).
    pub gi: usize,
    pub gj: usize,
    pub degree: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SyzygyId {
    pub i: usize,
    pub j: usize,
}

impl SyzygyId {
    pub fn new(a: usize, b: usize) -> Self {
        SyzygyId { i: a.min(b), j: a.max(b) }
    }
}

/// The graded lexicographic precedence used to number the basis: lower
/// degree first, then lexicographically larger first (so x1^2, x1*x2, x2^3).
/// `Less` means `a` comes first.
pub fn ap_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| b.exps().cmp(a.exps()))
}

/// Permutation `perm` with `perm[pos] = original index`, numbering the
/// leading monomials by [`ap_cmp`].
pub fn ap_order(lms: &[Monomial]) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..lms.len()).collect();
    perm.sort_by(|&a, &b| ap_cmp(&lms[a], &lms[b]));
    for w in perm.windows(2) {
        if lms[w[0]] == lms[w[1]] {
            return Err(Error::DuplicateLeadingMonomial(lms[w[0]].to_string()));
        }
    }
    Ok(perm)
}

/// Pair data and S-polynomial of (g_i, g_j), with `gi`/`gj` the caller's ids.
pub fn make_pair_and_spoly(f: &Poly, g: &Poly, gi: usize, gj: usize) -> Result<(CriticalPair, Poly)> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field();
    let t = f.lm().lcm(g.lm());
    let ti = t.quotient(f.lm())?;
    let tj = t.quotient(g.lm())?;
    let a = f.mul_term(&ti, field.inv(f.lc())?);
    let b = g.mul_term(&tj, field.inv(g.lc())?);
    let s = a.sub(&b)?;
    let degree = t.degree();
    Ok((CriticalPair { t, ti, tj, gi, gj, degree }, s))
}

/// T_{i,j} for ap positions.
fn lcm_ij(lms: &[Monomial], s: SyzygyId) -> Monomial {
    lms[s.i].lcm(&lms[s.j])
}

/// The syzygy order: S_a < S_b when T_a precedes T_b under [`ap_cmp`]
/// (in particular when T_a has lower degree); equal lcms are broken by j,
/// then i.
pub fn syz_compare(a: SyzygyId, b: SyzygyId, lms: &[Monomial]) -> Ordering {
    let (ta, tb) = (lcm_ij(lms, a), lcm_ij(lms, b));
    ap_cmp(&ta, &tb).then(a.j.cmp(&b.j)).then(a.i.cmp(&b.i))
}

/// The first k (increasing) witnessing S_{i,j} in B(G), if any. `lms` must
/// be in ap order.
pub fn b_witness(s: SyzygyId, lms: &[Monomial]) -> Option<usize> {
    let tij = lcm_ij(lms, s);
    (0..lms.len()).find(|&k| {
        if k == s.i || k == s.j || !tij.divisible_by(&lms[k]) {
            return false;
        }
        let a = SyzygyId::new(s.i, k);
        let b = SyzygyId::new(s.j, k);
        syz_compare(s, a, lms) == Ordering::Greater && syz_compare(s, b, lms) == Ordering::Greater
    })
}

pub fn in_b(s: SyzygyId, lms: &[Monomial]) -> bool {
    b_witness(s, lms).is_some()
}

/// Drop every pair lying in B(G); the rest is T*(G) restricted to `pairs`.
pub fn gm_filter(pairs: &[SyzygyId], lms: &[Monomial]) -> Vec<SyzygyId> {
    pairs.iter().copied().filter(|&s| !in_b(s, lms)).collect()
}

/// t_j = x_c for a single variable with c < ind(g_j).
pub fn is_type1(p: &CriticalPair, lm_gj: &Monomial) -> bool {
    match p.tj.as_variable() {
        Some(c) => c < lm_gj.ind(),
        None => false,
    }
}

/// lm(S) is below the pair's lcm (or S vanished).
pub fn spoly_is_cancelled(s: &Poly, t: &Monomial) -> bool {
    s.is_zero() || s.lm() < t
}
