//! Dense Macaulay matrices, echelon forms, normal forms against an echelon
//! reducer, and the blocked `Reduction` sweep.
//!
//! Columns are grevlex-descending, so "leftmost" means "largest monomial".
//! Every routine charges its field operations to the supplied [`OpCounter`].

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{Counted, Fp, OpCounter, PrimeField};
use crate::monos::{Monomial, MonomialSet};
use crate::poly::Poly;

/// Provenance of a matrix row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowLabel {
    /// Row built from the S-polynomial at this canonical position.
    SPair(usize),
    /// Row `m * g` for basis element number `g`.
    Reductor { m: Monomial, g: usize },
    /// Row from the input system (position in the input).
    Input(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacaulayMatrix {
    columns: MonomialSet,
    rows: Vec<Vec<Fp>>,
    labels: Vec<RowLabel>,
    field: PrimeField,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EchelonReport {
    /// (row position, column monomial), top to bottom.
    pub pivots: Vec<(usize, Monomial)>,
    pub rank: usize,
    pub ops: u64,
}

impl MacaulayMatrix {
    pub fn new(columns: MonomialSet, field: PrimeField) -> Self {
        MacaulayMatrix { columns, rows: Vec::new(), labels: Vec::new(), field }
    }

    /// Rows are the given polynomials; each support must lie in `columns`.
    pub fn from_polys(polys: &[Poly], labels: Vec<RowLabel>, columns: MonomialSet, field: PrimeField) -> Result<Self> {
        assert_eq!(polys.len(), labels.len());
        let mut m = MacaulayMatrix::new(columns, field);
        for (f, l) in polys.iter().zip(labels) {
            m.push_poly(f, l)?;
        }
        Ok(m)
    }

    /// Columns = union of supports.
    pub fn from_polys_auto(polys: &[Poly], labels: Vec<RowLabel>, field: PrimeField) -> Result<Self> {
        let cols = MonomialSet::from_vec(polys.iter().flat_map(|f| f.support().cloned()).collect());
        Self::from_polys(polys, labels, cols, field)
    }

    pub fn push_poly(&mut self, f: &Poly, label: RowLabel) -> Result<()> {
        let mut row = vec![Fp::ZERO; self.columns.len()];
        for (m, c) in f.terms() {
            let k = self
                .columns
                .position(m)
                .ok_or_else(|| Error::InvalidArgument(alloc::format!("monomial {m} not among the columns")))?;
            row[k] = *c;
        }
        self.rows.push(row);
        self.labels.push(label);
        Ok(())
    }

    pub fn push_row(&mut self, row: Vec<Fp>, label: RowLabel) {
        assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
        self.labels.push(label);
    }

    pub fn columns(&self) -> &MonomialSet {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Fp>] {
        &self.rows
    }

    pub fn labels(&self) -> &[RowLabel] {
        &self.labels
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    /// Leftmost nonzero column of row `r`.
    pub fn pivot(&self, r: usize) -> Option<usize> {
        leading_col(&self.rows[r])
    }

    pub fn is_zero_row(&self, r: usize) -> bool {
        self.rows[r].iter().all(|c| c.is_zero())
    }

    pub fn row_poly(&self, r: usize) -> Poly {
        let n = self.columns.elements().first().map_or(0, |m| m.n());
        let terms = self.rows[r]
            .iter()
            .zip(self.columns.iter())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| (m.clone(), *c))
            .collect();
        Poly::from_sorted_terms(n, self.field, terms)
    }

    /// Nonzero rows as polynomials, top to bottom, with their labels.
    pub fn nonzero_polys(&self) -> Vec<(Poly, RowLabel)> {
        (0..self.nrows())
            .filter(|&r| !self.is_zero_row(r))
            .map(|r| (self.row_poly(r), self.labels[r].clone()))
            .collect()
    }

    /// Rows whose leftmost nonzero column is strictly to the right of the previous row's.
    pub fn is_echelon(&self) -> bool {
        let mut last: Option<usize> = None;
        let mut seen_zero = false;
        for r in 0..self.nrows() {
            match self.pivot(r) {
                None => seen_zero = true,
                Some(c) => {
                    if seen_zero || last.is_some_and(|l| c <= l) {
                        return false;
                    }
                    last = Some(c);
                }
            }
        }
        true
    }

    /// Keep only the rows at `idx` (in that order).
    pub fn sub_rows(&self, idx: &[usize]) -> MacaulayMatrix {
        MacaulayMatrix {
            columns: self.columns.clone(),
            rows: idx.iter().map(|&r| self.rows[r].clone()).collect(),
            labels: idx.iter().map(|&r| self.labels[r].clone()).collect(),
            field: self.field,
        }
    }

    /// Stack `other` below `self` (same columns).
    pub fn stack(&self, other: &MacaulayMatrix) -> MacaulayMatrix {
        assert_eq!(self.columns, other.columns);
        let mut m = self.clone();
        m.rows.extend(other.rows.iter().cloned());
        m.labels.extend(other.labels.iter().cloned());
        m
    }

    /// Debug dump: one row per line, `label : c@monomial ...`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (row, label) in self.rows.iter().zip(&self.labels) {
            let l = match label {
                RowLabel::SPair(i) => alloc::format!("S{i}"),
                RowLabel::Reductor { m, g } => alloc::format!("R({m})g{g}"),
                RowLabel::Input(i) => alloc::format!("F{i}"),
            };
            s.push_str(&l);
            s.push_str(" :");
            for (c, m) in row.iter().zip(self.columns.iter()) {
                if !c.is_zero() {
                    s.push_str(&alloc::format!(" {c}@{m}"));
                }
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for MacaulayMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

#[inline]
fn leading_col(row: &[Fp]) -> Option<usize> {
    row.iter().position(|c| !c.is_zero())
}

/// `dst -= c * src` on columns `from..`.
#[inline]
fn axpy(k: &Counted<'_>, dst: &mut [Fp], src: &[Fp], c: Fp, from: usize) {
    let f = k.field;
    for (d, s) in dst[from..].iter_mut().zip(&src[from..]) {
        if !s.is_zero() {
            *d = f.sub(*d, f.mul(c, *s));
        }
    }
    k.ops.charge(2 * (dst.len() - from) as u64);
}

fn scale_row(k: &Counted<'_>, row: &mut [Fp], from: usize) -> Result<()> {
    let lc = row[from];
    if lc == Fp::ONE {
        return Ok(());
    }
    let inv = k.inv(lc)?;
    let f = k.field;
    for x in row[from..].iter_mut() {
        *x = f.mul(*x, inv);
    }
    k.ops.charge((row.len() - from) as u64);
    Ok(())
}

/// Row echelon form in place: leftmost column first, first eligible row as
/// pivot, monic pivots, zero rows sink to the bottom. Returns the report.
fn echelon_in_place(m: &mut MacaulayMatrix, reduced: bool, ops: &OpCounter) -> EchelonReport {
    let start = ops.get();
    let k = m.field.counted(ops);
    let ncols = m.ncols();
    let nrows = m.nrows();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(r) = (rank..nrows).find(|&r| !m.rows[r][col].is_zero()) else {
            continue;
        };
        m.rows.swap(rank, r);
        m.labels.swap(rank, r);
        scale_row(&k, &mut m.rows[rank], col).expect("pivot is nonzero");
        let (above, rest) = m.rows.split_at_mut(rank);
        let (piv, below) = rest.split_first_mut().unwrap();
        for row in below.iter_mut() {
            let c = row[col];
            if !c.is_zero() {
                axpy(&k, row, piv, c, col);
            }
        }
        if reduced {
            for row in above.iter_mut() {
                let c = row[col];
                if !c.is_zero() {
                    axpy(&k, row, piv, c, col);
                }
            }
        }
        pivots.push((rank, m.columns.elements()[col].clone()));
        rank += 1;
    }
    EchelonReport { pivots, rank, ops: ops.get() - start }
}

/// ech(M): row echelon form (reduced if asked), row space preserved.
pub fn echelon(m: &MacaulayMatrix, reduced: bool, ops: &OpCounter) -> (MacaulayMatrix, EchelonReport) {
    let mut out = m.clone();
    let rep = echelon_in_place(&mut out, reduced, ops);
    (out, rep)
}

/// Checks `R` is an echelon form without zero rows; returns its pivot columns.
fn reducer_pivots(r: &MacaulayMatrix) -> Result<Vec<usize>> {
    let mut piv = Vec::with_capacity(r.nrows());
    for k in 0..r.nrows() {
        let c = r.pivot(k).ok_or_else(|| Error::MalformedReducer(alloc::format!("row {k} is zero")))?;
        if let Some(&last) = piv.last() {
            if c <= last {
                return Err(Error::MalformedReducer(alloc::format!("row {k} pivot column {c} not right of {last}")));
            }
        }
        piv.push(c);
    }
    Ok(piv)
}

/// Result of [`normal_form_with_quotient`].
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub n: MacaulayMatrix,
    /// `q[s][k]`: multiple of reducer row k subtracted from row s.
    pub q: Vec<Vec<Fp>>,
    pub ops: u64,
}

/// NF(S | R) by forward substitution against the triangular block R_{*,J}:
/// returns N with zeros on every pivot column of R and Q with S = Q R + N.
pub fn normal_form_with_quotient(s: &MacaulayMatrix, r: &MacaulayMatrix, ops: &OpCounter) -> Result<NormalForm> {
    if s.columns != r.columns {
        return Err(Error::InvalidArgument(String::from("S and R have different columns")));
    }
    let piv = reducer_pivots(r)?;
    let start = ops.get();
    let k = s.field.counted(ops);
    // inverses of the pivots, one per reducer row
    let mut pinv = Vec::with_capacity(piv.len());
    for (row, &c) in r.rows.iter().zip(&piv) {
        pinv.push(if row[c] == Fp::ONE { Fp::ONE } else { k.inv(row[c])? });
    }
    let mut n = s.clone();
    let mut q = vec![vec![Fp::ZERO; r.nrows()]; s.nrows()];
    for (srow, qrow) in n.rows.iter_mut().zip(q.iter_mut()) {
        for (j, &c) in piv.iter().enumerate() {
            let v = srow[c];
            if v.is_zero() {
                continue;
            }
            let coef = if pinv[j] == Fp::ONE { v } else { k.mul(v, pinv[j]) };
            qrow[j] = coef;
            axpy(&k, srow, &r.rows[j], coef, c);
        }
    }
    Ok(NormalForm { n, q, ops: ops.get() - start })
}

pub fn normal_form(s: &MacaulayMatrix, r: &MacaulayMatrix, ops: &OpCounter) -> Result<(MacaulayMatrix, u64)> {
    let nf = normal_form_with_quotient(s, r, ops)?;
    Ok((nf.n, nf.ops))
}

/// Row indices whose leftmost nonzero column lies in `t1`.
pub fn select_row_indices(m: &MacaulayMatrix, t1: &MonomialSet) -> Vec<usize> {
    (0..m.nrows())
        .filter(|&r| m.pivot(r).is_some_and(|c| t1.contains(&m.columns.elements()[c])))
        .collect()
}

/// Rows(T, M, T1).
pub fn select_rows(m: &MacaulayMatrix, t1: &MonomialSet) -> MacaulayMatrix {
    m.sub_rows(&select_row_indices(m, t1))
}

/// Column groups of the sweep: `groups[i]` for i in 1..=n holds the degree-d
/// columns with variable index i, `groups[0]` the lower-degree columns.
pub fn column_groups(t: &MonomialSet, n: usize) -> Vec<MonomialSet> {
    let d = t.elements().first().map_or(0, |m| m.degree());
    let mut g: Vec<Vec<Monomial>> = vec![Vec::new(); n + 1];
    for m in t.iter() {
        if m.degree() == d && d > 0 {
            g[m.ind()].push(m.clone());
        } else {
            g[0].push(m.clone());
        }
    }
    g.into_iter().map(MonomialSet::from_vec).collect()
}

/// Output of [`reduction`]: the reduced S-block (same row count as S, labels
/// carried along) and the field operations spent.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub n: MacaulayMatrix,
    pub ops: u64,
}

impl Reduced {
    /// [R; N] with N's zero rows at the bottom.
    pub fn stacked(&self, r: &MacaulayMatrix) -> MacaulayMatrix {
        r.stack(&self.n)
    }
}

/// One pass of the sweep on column group `group`.
fn sweep_group(sp: &mut MacaulayMatrix, r: &MacaulayMatrix, group: &MonomialSet, ops: &OpCounter) -> Result<()> {
    if group.is_empty() {
        return Ok(());
    }
    let s_idx = select_row_indices(sp, group);
    if s_idx.is_empty() {
        return Ok(());
    }
    let r_i = select_rows(r, group);
    let block = sp.sub_rows(&s_idx);
    let mut block = if r_i.nrows() > 0 { normal_form(&block, &r_i, ops)?.0 } else { block };
    echelon_in_place(&mut block, false, ops);
    for (slot, (row, label)) in s_idx.iter().zip(block.rows.into_iter().zip(block.labels)) {
        sp.rows[*slot] = row;
        sp.labels[*slot] = label;
    }
    Ok(())
}

/// Algorithm Reduction: for i = 1..n, normal-form the S-rows with pivot in
/// D_i against the R-rows with pivot in D_i, echelonize them in place; then
/// the same on D_0 (lower degree columns). [R; N] is then a row echelon form
/// of [R; S] up to a row permutation.
pub fn reduction(s: &MacaulayMatrix, r: &MacaulayMatrix, t: &MonomialSet, ops: &OpCounter) -> Result<Reduced> {
    if s.columns != *t || r.columns != *t {
        return Err(Error::InvalidArgument(String::from("S, R and T are not conformal")));
    }
    reducer_pivots(r)?;
    let start = ops.get();
    let n = t.elements().first().map_or(0, |m| m.n());
    let groups = column_groups(t, n);
    let mut sp = s.clone();
    for g in groups.iter().skip(1) {
        sweep_group(&mut sp, r, g, ops)?;
    }
    sweep_group(&mut sp, r, &groups[0], ops)?;
    Ok(Reduced { n: sp, ops: ops.get() - start })
}

/// Rank by an independent route: elimination choosing, at each step, the
/// entry in the remaining submatrix with the smallest (row, col) index sum.
/// Used only as a test oracle.
pub fn rank_full_pivoting(m: &MacaulayMatrix) -> usize {
    let f = m.field;
    let mut a: Vec<Vec<Fp>> = m.rows.clone();
    let (nr, nc) = (a.len(), m.ncols());
    let mut row_used = vec![false; nr];
    let mut col_used = vec![false; nc];
    let mut rank = 0;
    loop {
        let mut best = None;
        for (r, row) in a.iter().enumerate() {
            if row_used[r] {
                continue;
            }
            for (c, v) in row.iter().enumerate() {
                if !col_used[c] && !v.is_zero() && best.is_none_or(|(br, bc)| r + c < br + bc) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        row_used[pr] = true;
        col_used[pc] = true;
        rank += 1;
        let inv = f.inv(a[pr][pc]).unwrap();
        let prow = a[pr].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == pr || row[pc].is_zero() {
                continue;
            }
            let c = f.mul(row[pc], inv);
            for (x, y) in row.iter_mut().zip(&prow) {
                *x = f.sub(*x, f.mul(c, *y));
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::monos::{enumerate, EnumKind};

    fn field() -> PrimeField {
        PrimeField::new(65521).unwrap()
    }

    fn cols(k: usize) -> MonomialSet {
        // k distinct monomials of degree 2 and below in 3 variables
        let all = enumerate(3, 2, 3, EnumKind::UpTo);
        MonomialSet::from_vec(all.elements()[..k].to_vec())
    }

    fn mat(rows: &[&[i64]]) -> MacaulayMatrix {
        let f = field();
        let mut m = MacaulayMatrix::new(cols(rows[0].len()), f);
        for (i, r) in rows.iter().enumerate() {
            m.push_row(r.iter().map(|&v| f.from_i64(v)).collect(), RowLabel::Input(i));
        }
        m
    }

    #[test]
    fn echelon_examples() {
        let ops = OpCounter::new();
        let (_, rep) = echelon(&mat(&[&[0, 1], &[1, 0]]), false, &ops);
        assert_eq!(rep.rank, 2);
        assert_eq!(rep.pivots.iter().map(|p| p.0).collect::<Vec<_>>(), vec![0, 1]);
        let (_, rep) = echelon(&mat(&[&[0, 0], &[0, 0]]), false, &ops);
        assert_eq!(rep.rank, 0);
        let (e, rep) = echelon(&mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]), false, &ops);
        assert_eq!(rep.rank, 2);
        assert!(e.is_zero_row(2));
        assert!(e.is_echelon());
        assert_eq!(e.labels()[2], RowLabel::Input(1));
    }

    #[test]
    fn normal_form_example() {
        let ops = OpCounter::new();
        let r = mat(&[&[1, 2, 3], &[0, 1, 4]]);
        let s = mat(&[&[2, 3, 1]]);
        let nf = normal_form_with_quotient(&s, &r, &ops).unwrap();
        let f = field();
        assert_eq!(nf.n.rows()[0], vec![Fp(0), Fp(0), f.from_i64(-1)]);
        assert_eq!(nf.q[0], vec![Fp(2), f.from_i64(-1)]);
        // empty reducer
        let empty = MacaulayMatrix::new(r.columns().clone(), f);
        assert_eq!(normal_form(&s, &empty, &ops).unwrap().0, s);
        // malformed reducers
        assert!(matches!(normal_form(&s, &mat(&[&[0, 1, 0], &[1, 0, 0]]), &ops), Err(Error::MalformedReducer(_))));
        assert!(matches!(normal_form(&s, &mat(&[&[1, 0, 0], &[0, 0, 0]]), &ops), Err(Error::MalformedReducer(_))));
    }

    #[test]
    fn select_rows_example() {
        let m = mat(&[&[1, 5, 0], &[0, 1, 2], &[0, 0, 3]]);
        let mid = MonomialSet::from_vec(vec![m.columns().elements()[1].clone()]);
        let sel = select_rows(&m, &mid);
        assert_eq!(sel.nrows(), 1);
        assert_eq!(sel.labels()[0], RowLabel::Input(1));
        assert_eq!(select_rows(&m, m.columns()).nrows(), 3);
        assert_eq!(select_rows(&m, &MonomialSet::default()).nrows(), 0);
    }

    #[test]
    fn full_pivot_rank() {
        assert_eq!(rank_full_pivoting(&mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
        assert_eq!(rank_full_pivoting(&mat(&[&[0, 1], &[1, 0]])), 2);
    }
}
