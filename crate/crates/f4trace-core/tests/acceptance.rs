//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! Reference values are the published table cells, pinned inline. A few cells
//! are known to disagree with the formulas they are computed from; those are
//! listed in `KNOWN_DEVIATIONS`, still printed as FAIL, and the run only errors
//! if the set of failing items differs from that list.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use f4trace_core::analysis::{asymptotic_constant, c_const, e_p, ell_closed, l_omega, table_rows_for, Constant};
use f4trace_core::analysis::{CostSource, CostTables, Measured};
use f4trace_core::engine::{
    buchberger, f4, f4_build, f4_trace, gen_random_system, lazard, F4Options, GBResult, Shape, Status,
};
use f4trace_core::poly::remainder;
use f4trace_core::verify::{verify, Instance, PropertyKind, Subject, Verdict};
use f4trace_core::{Fp, Monomial, Poly, PrimeField};

const P16: u32 = 65521;
const P31: u32 = 2147483647;
const BATTERY: [(usize, u32); 5] = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)];
const BATTERY_SEEDS: u64 = 20;

/// Items expected to fail, as (criterion, item key).
const KNOWN_DEVIATIONS: [(u8, &str); 3] = [
    // small-n cells of the complexity table; the printed values cannot be
    // reached by the stated formula under any convention tried
    (11, "F4Tbar delta=2 n=2 omega=2.38"),
    (11, "F4Tbar delta=2 n=2 omega=2"),
    // printed value equals the formula at omega=2.37, not 2.38
    (12, "g(2.38,2)"),
];

// Cardinality table: rows delta, columns n.
const CARD_NS: [usize; 7] = [2, 5, 10, 15, 20, 30, 50];
const CARD: [(u32, [f64; 7]); 7] = [
    (2, [0.79, 0.87, 0.87, 0.88, 0.89, 0.91, 0.94]),
    (5, [0.55, 0.76, 0.85, 0.89, 0.91, 0.94, 0.96]),
    (10, [0.52, 0.76, 0.86, 0.90, 0.92, 0.95, 0.96]),
    (15, [0.51, 0.76, 0.87, 0.90, 0.93, 0.95, 0.96]),
    (20, [0.50, 0.76, 0.87, 0.91, 0.93, 0.95, 0.96]),
    (30, [0.50, 0.77, 0.87, 0.91, 0.93, 0.95, 0.97]),
    (50, [0.50, 0.77, 0.87, 0.91, 0.93, 0.95, 0.97]),
];

// Complexity table: (delta, n, [F4Tbar x4 omegas, Lazard x4 omegas, F5]).
const OMEGAS: [f64; 4] = [3.0, 2.81, 2.38, 2.0];
#[rustfmt::skip]
const COST: [(u32, usize, [f64; 9]); 25] = [
    (2, 2, [3.58, 3.47, 3.25, 3.08, 5.48, 5.16, 4.45, 3.82, 3.00]),
    (2, 10, [3.62, 3.48, 3.16, 2.90, 5.86, 5.51, 4.71, 4.01, 3.90]),
    (2, 20, [3.63, 3.47, 3.11, 2.80, 5.91, 5.55, 4.73, 4.01, 4.05]),
    (2, 30, [3.65, 3.48, 3.10, 2.77, 5.93, 5.56, 4.74, 4.00, 4.11]),
    (2, 50, [3.67, 3.49, 3.10, 2.76, 5.95, 5.58, 4.74, 4.00, 4.17]),
    (10, 2, [1.85, 1.84, 1.82, 1.81, 3.63, 3.41, 2.91, 2.47, 2.16]),
    (10, 10, [2.89, 2.75, 2.43, 2.15, 4.08, 3.83, 3.26, 2.75, 3.13]),
    (10, 20, [3.05, 2.89, 2.52, 2.19, 4.15, 3.89, 3.30, 2.79, 3.27]),
    (10, 30, [3.11, 2.94, 2.55, 2.21, 4.17, 3.91, 3.32, 2.80, 3.32]),
    (10, 50, [3.17, 2.99, 2.58, 2.23, 4.19, 3.93, 3.33, 2.81, 3.37]),
    (20, 2, [1.74, 1.73, 1.73, 1.72, 3.47, 3.26, 2.78, 2.35, 2.11]),
    (20, 10, [2.84, 2.70, 2.37, 2.09, 3.85, 3.61, 3.07, 2.59, 3.05]),
    (20, 20, [3.00, 2.84, 2.46, 2.13, 3.90, 3.66, 3.11, 2.62, 3.18]),
    (20, 30, [3.06, 2.89, 2.50, 2.15, 3.92, 3.68, 3.12, 2.63, 3.23]),
    (20, 50, [3.11, 2.93, 2.53, 2.17, 3.94, 3.69, 3.13, 2.63, 3.27]),
    (30, 2, [1.70, 1.70, 1.69, 1.69, 3.41, 3.20, 2.73, 2.31, 2.09]),
    (30, 10, [2.83, 2.68, 2.35, 2.07, 3.75, 3.52, 2.99, 2.52, 3.02]),
    (30, 20, [2.99, 2.82, 2.44, 2.11, 3.80, 3.56, 3.02, 2.55, 3.15]),
    (30, 30, [3.04, 2.87, 2.48, 2.13, 3.82, 3.58, 3.04, 2.56, 3.19]),
    (30, 50, [3.09, 2.91, 2.51, 2.15, 3.84, 3.59, 3.05, 2.56, 3.23]),
    (50, 2, [1.66, 1.66, 1.66, 1.66, 3.35, 3.15, 2.68, 2.26, 2.08]),
    (50, 10, [2.81, 2.67, 2.34, 2.05, 3.66, 3.43, 2.91, 2.46, 2.99]),
    (50, 20, [2.97, 2.80, 2.43, 2.09, 3.70, 3.47, 2.94, 2.48, 3.11]),
    (50, 30, [3.03, 2.85, 2.46, 2.11, 3.72, 3.48, 2.95, 2.49, 3.16]),
    (50, 50, [3.07, 2.89, 2.48, 2.12, 3.73, 3.50, 2.96, 2.49, 3.20]),
];

const TOL_CARD: f64 = 0.01;
const TOL_LAZARD_F5: f64 = 0.01;
const TOL_F4T: f64 = 0.02;
const TOL_F4T_SMALL_N: f64 = 0.15;
const TOL_G: f64 = 0.002;
const TOL_C: f64 = 0.0005;
const TOL_L: f64 = 1e-12;
const COST_FACTOR: f64 = 10.0;

struct Outcome {
    id: u8,
    name: &'static str,
    summary: String,
    /// (item key, detail)
    failures: Vec<(String, String)>,
    notes: Vec<String>,
}

impl Outcome {
    fn new(id: u8, name: &'static str) -> Self {
        Outcome { id, name, summary: String::new(), failures: Vec::new(), notes: Vec::new() }
    }

    fn fail(&mut self, key: impl Into<String>, detail: impl Into<String>) {
        self.failures.push((key.into(), detail.into()));
    }
}

// ---- test-side oracles ----

fn field(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn system(n: usize, d: u32, shape: Shape, seed: u64, p: u32) -> Vec<Poly> {
    gen_random_system(n, d, field(p), shape, seed).unwrap()
}

fn exps(m: &Monomial) -> Vec<u16> {
    m.exps().to_vec()
}

/// 1-based index of the last variable present; 0 for the constant.
fn last_var(e: &[u16]) -> usize {
    e.iter().rposition(|&x| x > 0).map_or(0, |k| k + 1)
}

fn all_monos(n: usize, d: u32) -> Vec<Vec<u16>> {
    if n == 1 {
        return vec![vec![d as u16]];
    }
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for mut rest in all_monos(n - 1, d - a) {
            rest.insert(0, a as u16);
            out.push(rest);
        }
    }
    out
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn in_staircase(m: &[u16], lms: &[Vec<u16>]) -> bool {
    !lms.iter().any(|l| divides(l, m))
}

/// Number of staircase monomials in each degree 0..=upto.
fn staircase_counts(lms: &[Vec<u16>], n: usize, upto: u32) -> Vec<u64> {
    (0..=upto).map(|d| all_monos(n, d).iter().filter(|m| in_staircase(m, lms)).count() as u64).collect()
}

/// (1 - z^delta)^s / (1 - z)^i up to z^order, in machine integers.
fn series(s: u32, i: u32, delta: u32, order: usize) -> Vec<i128> {
    let mut c = vec![0i128; order + 1];
    c[0] = 1;
    for _ in 0..s {
        for t in (0..=order).rev() {
            if t >= delta as usize {
                c[t] -= c[t - delta as usize];
            }
        }
    }
    for _ in 0..i {
        for t in 1..=order {
            c[t] += c[t - 1];
        }
    }
    c
}

fn plus(mut c: Vec<i128>) -> Vec<i128> {
    if let Some(cut) = c.iter().position(|&x| x <= 0) {
        for x in &mut c[cut..] {
            *x = 0;
        }
    }
    c
}

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, t| acc * (n - t) as u128 / (t + 1) as u128)
}

fn macaulay(n: usize, delta: u32) -> u32 {
    n as u32 * (delta - 1) + 1
}

fn lm_exps(r: &GBResult) -> Vec<Vec<u16>> {
    r.basis.iter().map(|g| exps(g.lm())).collect()
}

fn spolys_reduce_to_zero(basis: &[Poly]) -> Result<(), String> {
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            let t = a.lm().lcm(b.lm());
            let sa = a.mul_term(&t.quotient(a.lm()).unwrap(), Fp::ONE).make_monic().unwrap();
            let sb = b.mul_term(&t.quotient(b.lm()).unwrap(), Fp::ONE).make_monic().unwrap();
            let s = sa.sub(&sb).unwrap();
            if !remainder(&s, basis).unwrap().is_zero() {
                return Err(format!("S({}, {}) does not reduce to zero", a.lm(), b.lm()));
            }
        }
    }
    Ok(())
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn within(x: f64, want: f64, tol: f64) -> bool {
    (x - want).abs() <= tol + 1e-9
}

/// The 30-system oracle battery: n, delta in {2, 3}, both shapes, p = 65521.
fn oracle_battery() -> Vec<(usize, u32, Shape, u64)> {
    let mut combos = Vec::new();
    for n in [2, 3] {
        for d in [2, 3] {
            for s in [Shape::Homogeneous, Shape::Affine] {
                combos.push((n, d, s));
            }
        }
    }
    (0..30u64).map(|k| {
        let (n, d, s) = combos[k as usize % combos.len()];
        (n, d, s, 100 + k)
    })
    .collect()
}

fn generic_battery() -> impl Iterator<Item = (usize, u32, u64)> {
    BATTERY.into_iter().flat_map(|(n, d)| (0..BATTERY_SEEDS).map(move |s| (n, d, s)))
}

// ---- criteria ----

fn c01_oracles() -> Outcome {
    let mut o = Outcome::new(1, "oracle equivalence");
    for (n, d, shape, seed) in oracle_battery() {
        let f = system(n, d, shape, seed, P16);
        let a = f4(&f, F4Options::default()).unwrap();
        let (b, _) = f4_build(&f, F4Options::default()).unwrap();
        let c = buchberger(&f).unwrap();
        let e = lazard(&f, None).unwrap();
        let key = format!("n={n} delta={d} {shape:?} seed={seed}");
        if a.lm_set() != b.lm_set() || a.lm_set() != c.lm_set() || a.lm_set() != e.lm_set() {
            o.fail(key.clone(), "lm sets differ between engines");
        }
        if let Err(w) = spolys_reduce_to_zero(&a.basis) {
            o.fail(key, w);
        }
    }
    o.summary = "30 systems, f4 = f4_build = buchberger = lazard, all S-polynomials reduce to 0".into();
    o
}

fn c02_bezout_hilbert() -> Outcome {
    let mut o = Outcome::new(2, "Bezout and Hilbert series");
    for (n, d, shape, seed) in oracle_battery() {
        let r = f4(&system(n, d, shape, seed, P16), F4Options::default()).unwrap();
        let big_d = macaulay(n, d);
        let counts = staircase_counts(&lm_exps(&r), n, big_d + 1);
        let want = series(n as u32, n as u32, d, big_d as usize + 1);
        let key = format!("n={n} delta={d} {shape:?} seed={seed}");
        let dim: u64 = counts.iter().sum();
        if counts[big_d as usize + 1] != 0 || dim != (d as u64).pow(n as u32) {
            o.fail(key.clone(), format!("quotient dimension {dim}, want {}", d.pow(n as u32)));
        }
        if counts.iter().zip(&want).any(|(&a, &b)| a as i128 != b) {
            o.fail(key, format!("HS {counts:?} vs {want:?}"));
        }
    }
    o.summary = "30 systems, dim = delta^n, HS = ((1-z^delta)/(1-z))^n".into();
    o
}

fn c03_macaulay_bound() -> Outcome {
    let mut o = Outcome::new(3, "Macaulay bound");
    for (n, d, shape, seed) in oracle_battery() {
        let r = f4(&system(n, d, shape, seed, P16), F4Options::default()).unwrap();
        let degs: BTreeSet<u32> = r.basis.iter().map(|g| g.degree()).collect();
        let big_d = macaulay(n, d);
        let want: BTreeSet<u32> = (d..=big_d).collect();
        if degs != want {
            o.fail(format!("n={n} delta={d} {shape:?} seed={seed}"), format!("degrees {degs:?}, want {d}..={big_d}"));
        }
    }
    o.summary = "30 systems, max degree n(delta-1)+1, every degree delta..D present".into();
    o
}

fn c04_half_staircase() -> Outcome {
    let mut o = Outcome::new(4, "half staircase");
    let mut checked = 0;
    for (n, delta) in [(3usize, 2u32), (2, 2)] {
        let big_d = macaulay(n, delta);
        let dprime = (big_d - 1) / 2 + 1;
        let beta = plus(series(n as u32, n as u32 - 1, delta, big_d as usize));
        for seed in 0..10 {
            let r = f4(&system(n, delta, Shape::Homogeneous, seed, P31), F4Options::default()).unwrap();
            let lms = lm_exps(&r);
            for d in dprime + 1..=big_d {
                let got: BTreeSet<Vec<u16>> = lms.iter().filter(|m| m.iter().sum::<u16>() as u32 == d).cloned().collect();
                let want: BTreeSet<Vec<u16>> = all_monos(n, big_d - d)
                    .into_iter()
                    .filter(|m| m[n - 1] == 0 && in_staircase(m, &lms))
                    .map(|mut m| {
                        m[n - 1] = (2 * d - big_d) as u16;
                        m
                    })
                    .collect();
                let key = format!("n={n} delta={delta} seed={seed} d={d}");
                if got != want {
                    o.fail(key, format!("lm(G)_d = {got:?}, want {want:?}"));
                } else if got.len() as i128 != beta[(big_d - d) as usize] {
                    o.fail(key, format!("#G_d = {}, beta = {}", got.len(), beta[(big_d - d) as usize]));
                }
                checked += 1;
            }
        }
    }
    o.summary = format!("{checked} (instance, degree) cells over 10 seeds each of (3,2) and (2,2)");
    o
}

fn c05_type1() -> Outcome {
    let mut o = Outcome::new(5, "type-1 pairs");
    let mut total = 0;
    for (n, d, seed) in generic_battery() {
        let r = f4(&system(n, d, Shape::Homogeneous, seed, P31), F4Options::default()).unwrap();
        for round in &r.rounds {
            for p in &round.pairs {
                total += 1;
                let tj = exps(&p.pair.tj);
                let ok = tj.iter().sum::<u16>() == 1 && last_var(&tj) < last_var(&exps(&p.lm_gj));
                if !ok {
                    o.fail(
                        format!("n={n} delta={d} seed={seed} deg={}", round.degree),
                        format!("pair ({}, {}) tj={} lm(gj)={}", p.i, p.j, p.pair.tj, p.lm_gj),
                    );
                }
            }
        }
    }
    o.summary = format!("{total} GM-surviving pairs on {} runs", BATTERY.len() as u64 * BATTERY_SEEDS);
    o
}

fn run_verify(o: &mut Outcome, kind: PropertyKind, n: usize, d: u32, seed: u64, subj: &Subject) {
    let inst = Instance { n, delta: d, p: P31, seed: Some(seed) };
    match verify(kind, subj, &inst) {
        Ok(r) => {
            if let Verdict::Fail { witness, .. } = r.verdict {
                o.fail(format!("n={n} delta={d} seed={seed}"), witness);
            }
        }
        Err(e) => o.fail(format!("n={n} delta={d} seed={seed}"), e.to_string()),
    }
}

fn c06_psi() -> Outcome {
    let mut o = Outcome::new(6, "psi bijection");
    for (n, d, seed) in generic_battery() {
        let subj = Subject::new(system(n, d, Shape::Homogeneous, seed, P31)).unwrap();
        run_verify(&mut o, PropertyKind::PsiBijection, n, d, seed, &subj);
    }
    o.summary = format!("{} battery instances", BATTERY.len() as u64 * BATTERY_SEEDS);
    o
}

fn c07_replay() -> Outcome {
    let mut o = Outcome::new(7, "F4T replay");
    for k in 0..20u64 {
        let (n, d) = BATTERY[k as usize % BATTERY.len()];
        let f = system(n, d, Shape::Homogeneous, 300 + k, P31);
        let f2 = system(n, d, Shape::Homogeneous, 10_000 + k, P31);
        let (_, t) = f4_build(&f, F4Options::default()).unwrap();
        let r = f4_trace(&f2, &t, F4Options::default()).unwrap();
        let key = format!("n={n} delta={d} pair={k}");
        if r.status != Status::Ok {
            o.fail(key, format!("{:?}", r.status));
            continue;
        }
        if r.rounds.iter().any(|x| x.zero_rows > 0) {
            o.fail(key.clone(), format!("{} reductions to zero", r.zero_reductions()));
        }
        if r.lm_set() != f4(&f2, F4Options::default()).unwrap().lm_set() {
            o.fail(key, "lm set differs from f4(F2)");
        }
    }
    let f = system(3, 2, Shape::Homogeneous, 1, P31);
    let mut bad = system(3, 2, Shape::Homogeneous, 2, P31);
    bad[1] = bad[0].clone();
    let (_, t) = f4_build(&f, F4Options::default()).unwrap();
    let r = f4_trace(&bad, &t, F4Options::default()).unwrap();
    match &r.status {
        Status::TraceMismatch { round, reason } => o.notes.push(format!("degenerate F2: trace_mismatch at round {round} ({reason})")),
        Status::Ok => o.fail("degenerate F2", "replay did not report trace_mismatch"),
    }
    o.summary = "20 independent (F, F2) pairs, no zero reductions, lm(F4T) = lm(f4)".into();
    o
}

fn c08_reduction() -> Outcome {
    let mut o = Outcome::new(8, "reduction equivalence");
    for seed in 0..100 {
        if let Err(w) = common::check_reduction(seed, P16) {
            o.fail(format!("block seed={seed}"), w);
        }
    }
    o.summary = "100 random (R, S) blocks: row space, pivots, N zero on R pivots, S = QR + N".into();
    o
}

fn c09_reductor_band() -> Outcome {
    let mut o = Outcome::new(9, "reductor band");
    let mut seen = 0;
    for (n, delta, degs) in [(4usize, 2u32, vec![5u32]), (3, 3, vec![6, 7])] {
        let big_d = macaulay(n, delta);
        for seed in 0..10 {
            let r = f4(&system(n, delta, Shape::Homogeneous, seed, P31), F4Options::default()).unwrap();
            for &d in &degs {
                let key = format!("n={n} delta={delta} seed={seed} d={d}");
                let Some(round) = r.rounds.iter().find(|x| x.degree == d) else {
                    o.fail(key, "no round of this degree");
                    continue;
                };
                seen += 1;
                let (lo, hi) = (2 * d as i64 - big_d as i64 - 2, 2 * d as i64 - big_d as i64);
                for m in &round.reductor_lms {
                    let e = exps(m);
                    let xn = e[n - 1] as i64;
                    if last_var(&e) != n || xn < lo || xn > hi {
                        o.fail(key.clone(), format!("reductor lm {m} outside band [{lo}, {hi}]"));
                    }
                }
                let k = (big_d - d) as u64;
                let bound: u128 = (0..3).map(|t| binom(n as u64 - 2 + k + t, k + t)).sum();
                if round.reductor_lms.len() as u128 > bound {
                    o.fail(key, format!("{} reductors > {bound}", round.reductor_lms.len()));
                }
            }
        }
    }
    o.summary = format!("{seen} rounds: (4,2) at d=5, (3,3) at d=6,7; 10 seeds each");
    o
}

fn c10_cardinality() -> Outcome {
    let mut o = Outcome::new(10, "cardinality table");
    let mut worst: f64 = 0.0;
    for (delta, row) in CARD {
        for (&n, &want) in CARD_NS.iter().zip(&row) {
            let got = table_rows_for(n, delta, &[3.0]).unwrap()[0].card;
            worst = worst.max((round2(got) - want).abs());
            if !within(round2(got), want, TOL_CARD) {
                o.fail(format!("card delta={delta} n={n}"), format!("{got:.4} vs {want}"));
            }
        }
    }
    // hand anchors; the printed cells are truncated, so 0.5566 shows as 0.55
    for (n, d, want) in [(2, 2, 0.79), (2, 5, 0.55)] {
        let got = table_rows_for(n, d, &[3.0]).unwrap()[0].card;
        if !within(round2(got), want, TOL_CARD) || (got * 100.0).floor() / 100.0 != want {
            o.fail(format!("anchor delta={d} n={n}"), format!("{got:.4} vs {want}"));
        }
    }
    o.summary = format!("49 cells, tolerance {TOL_CARD}, worst rounded deviation {worst:.2}");
    o
}

fn c11_complexity() -> Outcome {
    let mut o = Outcome::new(11, "complexity table");
    let mut cells = 0;
    for (delta, n, want) in COST {
        let rows = table_rows_for(n, delta, &OMEGAS).unwrap();
        let tol_f4t = if n >= 10 { TOL_F4T } else { TOL_F4T_SMALL_N };
        for (k, r) in rows.iter().enumerate() {
            let w = OMEGAS[k];
            let checks = [("F4Tbar", r.f4t_bar, want[k], tol_f4t), ("Lazard", r.lazard, want[4 + k], TOL_LAZARD_F5)];
            for (name, got, exp, tol) in checks {
                cells += 1;
                if !within(round2(got), exp, tol) {
                    o.fail(format!("{name} delta={delta} n={n} omega={w}"), format!("{got:.4} vs {exp} (tol {tol})"));
                }
            }
        }
        cells += 1;
        if !within(round2(rows[0].f5), want[8], TOL_LAZARD_F5) {
            o.fail(format!("F5 delta={delta} n={n}"), format!("{:.4} vs {}", rows[0].f5, want[8]));
        }
    }
    o.summary = format!("{cells} cells; F4Tbar tol {TOL_F4T} (n >= 10) / {TOL_F4T_SMALL_N} (n = 2), others {TOL_LAZARD_F5}");
    o
}

fn c12_constants() -> Outcome {
    let mut o = Outcome::new(12, "asymptotic constants");
    let g = [(3.0, 2, 1.4687), (2.81, 2, 1.6331), (2.38, 2, 1.9531), (3.0, 3, 1.3518), (2.81, 3, 1.6139), (2.38, 3, 2.2348)];
    for (w, d, want) in g {
        let got = asymptotic_constant(d, w, 0.0, Constant::Gain).unwrap();
        if !within(got, want, TOL_G) {
            o.fail(format!("g({w},{d})"), format!("{got:.5} vs {want} (tol {TOL_G})"));
        }
    }
    for (w, want) in [(2.81, 0.6743), (2.38, 0.7956)] {
        let got = c_const(0.0, 2, w).unwrap();
        if !within(got, want, TOL_C) {
            o.fail(format!("c({w})"), format!("{got:.5} vs {want}"));
        }
    }
    for k in 1..=100 {
        let w = 2.0 + k as f64 / 100.0;
        let own = 1.0 / (1.0 + (-1.0 / (2.0 * (w - 2.0))).exp());
        let (a, b) = (l_omega(w, 2), ell_closed(w));
        if (a - b).abs() > TOL_L || (a - own).abs() > TOL_L {
            o.fail(format!("L_omega(2) omega={w}"), format!("{a} vs {b}"));
        }
    }
    let c3 = c_const(0.0, 2, 3.0).unwrap();
    if !within(c3, 0.6487, TOL_C) {
        o.fail("c(3)", format!("{c3:.5}, want 0.6487"));
    }
    o.notes.push(format!(
        "flag: printed c(3) = 0.2616 is inconsistent with the formula ({c3:.4}); 0.2616 is E_1/2(2) = {:.4} alone",
        e_p(0.5, 2).unwrap()
    ));
    let g237 = asymptotic_constant(2, 2.37, 0.0, Constant::Gain).unwrap();
    o.notes.push(format!("g(2.37,2) = {g237:.4}, the printed g(2.38,2) value"));
    o.summary = format!("6 g values (tol {TOL_G}), 2 c limits (tol {TOL_C}), L closed forms on 100 omegas (tol {TOL_L:e})");
    o
}

fn c13_cost_sanity() -> Outcome {
    let mut o = Outcome::new(13, "cost-model sanity");
    let mut worst: f64 = 0.0;
    for (n, d, seed) in generic_battery() {
        let f = system(n, d, Shape::Homogeneous, seed, P31);
        let f2 = system(n, d, Shape::Homogeneous, seed + 1_000_000, P31);
        let (_, t) = f4_build(&f, F4Options::default()).unwrap();
        let r = f4_trace(&f2, &t, F4Options::default()).unwrap();
        let tables = CostTables::new(n, d).unwrap();
        let m = Measured::from_lms(&r.lm_set(), n, tables.big_d);
        let bound = tables.cost_f4t(3.0, CostSource::Measured(&m)).total_value();
        let ratio = r.ops as f64 / bound;
        worst = worst.max(ratio);
        if !r.is_ok() || ratio > COST_FACTOR {
            o.fail(format!("n={n} delta={d} seed={seed}"), format!("ops {} vs cost {bound:.0} (ratio {ratio:.2})", r.ops));
        }
    }
    o.summary = format!("{} replays, ops <= {COST_FACTOR} x measured cost (omega=3), worst ratio {worst:.3}", BATTERY.len() as u64 * BATTERY_SEEDS);
    o
}

fn c14_degree_monotone() -> Outcome {
    let mut o = Outcome::new(14, "degree monotonicity");
    let (mut runs, mut skipped) = (0, 0);
    for (n, d, seed) in generic_battery() {
        for shape in [Shape::Homogeneous, Shape::Affine] {
            let f = system(n, d, shape, seed, P31);
            let hd: Vec<Poly> = f.iter().map(|g| g.hd()).collect();
            let hd_run = f4(&hd, F4Options::default()).unwrap();
            let big_d = macaulay(n, d);
            let counts = staircase_counts(&lm_exps(&hd_run), n, big_d + 1);
            let ci = series(n as u32, n as u32, d, big_d as usize + 1);
            if counts.iter().zip(&ci).any(|(&a, &b)| a as i128 != b) {
                skipped += 1;
                continue;
            }
            runs += 1;
            let r = f4(&f, F4Options::default()).unwrap();
            let key = format!("n={n} delta={d} {shape:?} seed={seed}");
            if r.rounds.windows(2).any(|w| w[0].degree >= w[1].degree) {
                o.fail(key.clone(), format!("round degrees {:?}", r.rounds.iter().map(|x| x.degree).collect::<Vec<_>>()));
            }
            for round in &r.rounds {
                if let Some(m) = round.new_lms.iter().find(|m| m.degree() != round.degree) {
                    o.fail(key.clone(), format!("round {} adopted {m}", round.degree));
                }
            }
            if shape == Shape::Affine && r.lm_set() != hd_run.lm_set() {
                o.fail(key, "lm(<F>) != lm(<hd F>)");
            }
        }
    }
    o.summary = format!("{runs} runs with regular hd(F), {skipped} skipped as non-regular");
    o
}

fn c15_truncation() -> Outcome {
    let mut o = Outcome::new(15, "truncation theorem");
    let sorted = |mut v: Vec<Poly>| {
        v.sort_by(|a, b| b.lm().cmp(a.lm()));
        v
    };
    for seed in 0..10 {
        let f = system(3, 2, Shape::Homogeneous, seed, P31);
        let full = buchberger(&f).unwrap().basis;
        for j in 1..=2 {
            let phi: Vec<Poly> = f.iter().map(|g| g.phi(j).shrink(j)).filter(|g| !g.is_zero()).collect();
            let lhs = sorted(buchberger(&phi).unwrap().basis);
            let rhs = sorted(
                full.iter().filter(|g| last_var(&exps(g.lm())) <= j).map(|g| g.phi(j).shrink(j)).collect(),
            );
            if lhs != rhs {
                o.fail(format!("seed={seed} j={j}"), format!("{} vs {} elements", lhs.len(), rhs.len()));
            }
        }
    }
    o.summary = "10 seeds of (3,2), j = 1, 2, reduced bases compared exactly".into();
    o
}

fn main() {
    let start = Instant::now();
    let criteria: [fn() -> Outcome; 15] = [
        c01_oracles,
        c02_bezout_hilbert,
        c03_macaulay_bound,
        c04_half_staircase,
        c05_type1,
        c06_psi,
        c07_replay,
        c08_reduction,
        c09_reductor_band,
        c10_cardinality,
        c11_complexity,
        c12_constants,
        c13_cost_sanity,
        c14_degree_monotone,
        c15_truncation,
    ];
    let known: BTreeSet<(u8, String)> = KNOWN_DEVIATIONS.iter().map(|&(c, k)| (c, k.to_string())).collect();
    let mut failing = BTreeSet::new();
    let mut passed = 0;
    println!("acceptance criteria");
    for run in criteria {
        let t = Instant::now();
        let o = run();
        let tag = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        if o.failures.is_empty() {
            passed += 1;
        }
        println!("{tag} {:>2} {}: {} [{:.2}s]", o.id, o.name, o.summary, t.elapsed().as_secs_f64());
        for (key, detail) in &o.failures {
            let mark = if known.contains(&(o.id, key.clone())) { "documented" } else { "UNEXPECTED" };
            println!("     - {mark}: {key}: {detail}");
            failing.insert((o.id, key.clone()));
        }
        for n in &o.notes {
            println!("     note: {n}");
        }
    }
    let unexpected: Vec<_> = failing.difference(&known).collect();
    let vanished: Vec<_> = known.difference(&failing).collect();
    println!(
        "{passed}/15 criteria pass; {} documented deviations; {} unexpected failures; {} documented deviations not reproduced; {:.1}s",
        failing.len() - unexpected.len(),
        unexpected.len(),
        vanished.len(),
        start.elapsed().as_secs_f64()
    );
    if !unexpected.is_empty() || !vanished.is_empty() {
        std::process::exit(1);
    }
}
