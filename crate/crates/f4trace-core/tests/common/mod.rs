//! Test-side oracles shared by the integration tests.
#![allow(dead_code)]

use f4trace_core::field::{Fp, OpCounter};
use f4trace_core::linalg::{echelon, normal_form_with_quotient, reduction, MacaulayMatrix, RowLabel};
use f4trace_core::monos::{enumerate, EnumKind};
use f4trace_core::{MonomialSet, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Plain Gauss-Jordan over u64, kept separate from the library code.
pub fn rref(rows: &[Vec<u64>], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut a: Vec<Vec<u64>> = rows.to_vec();
    let nc = a.first().map_or(0, |r| r.len());
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        let Some(k) = (r..a.len()).find(|&k| a[k][c] != 0) else { continue };
        a.swap(r, k);
        let inv = pow(a[r][c], p - 2, p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for k in 0..a.len() {
            if k != r && a[k][c] != 0 {
                let f = a[k][c];
                for j in 0..nc {
                    a[k][j] = (a[k][j] + p - f * a[r][j] % p) % p;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, piv)
}

pub fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn raw(m: &MacaulayMatrix) -> Vec<Vec<u64>> {
    m.rows().iter().map(|r| r.iter().map(|x| x.value() as u64).collect()).collect()
}

/// Random reducer in echelon form and random S rows on the columns of
/// degrees <= d; about a third of the entries are zero.
pub fn block_instance(seed: u64, p: u32) -> (MacaulayMatrix, MacaulayMatrix, MonomialSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = PrimeField::new(p).unwrap();
    let n = rng.gen_range(2..=3);
    let d = rng.gen_range(2..=3);
    let t = enumerate(n, d, n, EnumKind::UpTo);
    let nc = t.len();
    let entry = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.35) { Fp(0) } else { Fp(rng.gen_range(1..p)) };
    let mut r = MacaulayMatrix::new(t.clone(), field);
    for c in 0..nc {
        if rng.gen_bool(0.4) {
            let row: Vec<Fp> = (0..nc)
                .map(|j| match j.cmp(&c) {
                    std::cmp::Ordering::Less => Fp(0),
                    std::cmp::Ordering::Equal => Fp(rng.gen_range(1..p)),
                    std::cmp::Ordering::Greater => entry(&mut rng),
                })
                .collect();
            r.push_row(row, RowLabel::Input(c));
        }
    }
    let mut s = MacaulayMatrix::new(t.clone(), field);
    for k in 0..rng.gen_range(1..=8) {
        let row: Vec<Fp> = (0..nc).map(|_| entry(&mut rng)).collect();
        s.push_row(row, RowLabel::SPair(k + 1));
    }
    (r, s, t)
}

pub fn check_reduction(seed: u64, p: u32) -> Result<(), String> {
    let (r, s, t) = block_instance(seed, p);
    let pl = p as u64;
    let ops = OpCounter::new();
    let red = reduction(&s, &r, &t, &ops).map_err(|e| e.to_string())?;
    let stacked = red.stacked(&r);
    let mut both = raw(&r);
    both.extend(raw(&s));
    let (want, want_piv) = rref(&both, pl);
    let (got, got_piv) = rref(&raw(&stacked), pl);
    ensure(got == want, || format!("row space differs, seed {seed}"))?;
    ensure(got_piv == want_piv, || format!("pivot set differs, seed {seed}"))?;
    // [R; N] is an echelon form up to row order: distinct pivots, matching the oracle's
    let mut lead: Vec<usize> = (0..stacked.nrows()).filter_map(|k| stacked.pivot(k)).collect();
    lead.sort_unstable();
    let before = lead.len();
    lead.dedup();
    ensure(lead.len() == before, || format!("repeated pivot, seed {seed}"))?;
    ensure(lead == want_piv, || format!("leading columns differ, seed {seed}"))?;
    let (e, rep) = echelon(&stacked, false, &OpCounter::new());
    ensure(e.is_echelon() && rep.rank == want_piv.len(), || format!("rank differs, seed {seed}"))?;

    let nf = normal_form_with_quotient(&s, &r, &OpCounter::new()).map_err(|e| e.to_string())?;
    let rp: Vec<usize> = (0..r.nrows()).map(|k| r.pivot(k).unwrap()).collect();
    let (rs, ns, ss) = (raw(&r), raw(&nf.n), raw(&s));
    for (i, nrow) in ns.iter().enumerate() {
        for &c in &rp {
            ensure(nrow[c] == 0, || format!("N nonzero on a pivot column, seed {seed}"))?;
        }
        for c in 0..t.len() {
            let mut v = nrow[c];
            for (k, q) in nf.q[i].iter().enumerate() {
                v = (v + q.value() as u64 * rs[k][c]) % pl;
            }
            ensure(v == ss[i][c], || format!("S != QR + N, seed {seed}"))?;
        }
    }
    Ok(())
}
