//! System and trace files.
//!
//! A system file starts with a header line `p=<prime> n=<vars>` followed by
//! one polynomial per line; `#` starts a comment, blank lines are skipped.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use f4trace_core::engine::Trace;
use f4trace_core::{Poly, PrimeField};

#[derive(Clone, Debug)]
pub struct System {
    pub field: PrimeField,
    pub n: usize,
    pub polys: Vec<Poly>,
}

impl System {
    pub fn degree(&self) -> u32 {
        self.polys.iter().filter(|f| !f.is_zero()).map(|f| f.degree()).max().unwrap_or(0)
    }
}

fn strip_comment(l: &str) -> &str {
    l.split('#').next().unwrap_or("").trim()
}

fn parse_header(l: &str) -> Result<(u32, usize)> {
    let (mut p, mut n) = (None, None);
    for tok in l.split_whitespace() {
        match tok.split_once('=') {
            Some(("p", v)) => p = Some(v.parse::<u32>().with_context(|| format!("bad prime '{v}'"))?),
            Some(("n", v)) => n = Some(v.parse::<usize>().with_context(|| format!("bad variable count '{v}'"))?),
            _ => bail!("unexpected header field '{tok}'"),
        }
    }
    match (p, n) {
        (Some(p), Some(n)) if n >= 1 => Ok((p, n)),
        _ => bail!("header must be 'p=<prime> n=<vars>'"),
    }
}

pub fn parse_system(text: &str) -> Result<System> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, strip_comment(l))).filter(|(_, l)| !l.is_empty());
    let (ln, head) = lines.next().ok_or_else(|| anyhow!("empty system file"))?;
    let (p, n) = parse_header(head).with_context(|| format!("line {ln}"))?;
    let field = PrimeField::new(p).with_context(|| format!("line {ln}"))?;
    let mut polys = Vec::new();
    for (ln, l) in lines {
        let f = Poly::parse(l, n, field).map_err(|e| anyhow!("line {ln}: {e}"))?;
        polys.push(f);
    }
    if polys.is_empty() {
        bail!("system has no polynomials");
    }
    Ok(System { field, n, polys })
}

pub fn format_system(polys: &[Poly]) -> String {
    let (p, n) = polys.first().map_or((0, 0), |f| (f.field().p(), f.n()));
    let mut s = format!("p={p} n={n}\n");
    for f in polys {
        s.push_str(&f.to_text());
        s.push('\n');
    }
    s
}

pub fn read_system(path: &Path) -> Result<System> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_system(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_trace(path: &Path) -> Result<Trace> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Trace::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes to `path`, or stdout when `path` is None.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
