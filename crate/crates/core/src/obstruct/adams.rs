//! Explicit finite modules and the Adams condition on them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bv::{apply_sq, PolyElement};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Echelon};
use crate::odd::{apply_beta, apply_p, is_prime, OddElement};
use crate::span::GradedSpan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableOp {
    Sq(u32),
    P(u32),
    Beta,
}

impl TableOp {
    pub fn degree(&self, prime: u32) -> u32 {
        match self {
            TableOp::Sq(i) => *i,
            TableOp::P(i) => 2 * (prime - 1) * i,
            TableOp::Beta => 1,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let num = |s: &str| {
            s.parse::<u32>().map_err(|_| Error::InconsistentTable(format!("bad operation `{text}`")))
        };
        if let Some(rest) = t.strip_prefix("Sq^") {
            Ok(TableOp::Sq(num(rest)?))
        } else if let Some(rest) = t.strip_prefix("P^") {
            Ok(TableOp::P(num(rest)?))
        } else if t == "beta" {
            Ok(TableOp::Beta)
        } else {
            Err(Error::InconsistentTable(format!("unknown operation `{text}` (Sq^n, P^n or beta)")))
        }
    }

    fn allowed_at(&self, prime: u32) -> bool {
        matches!(self, TableOp::Sq(_)) == (prime == 2)
    }

    /// Unstable: vanishes on classes of degree below this.
    fn excess(&self) -> u32 {
        match self {
            TableOp::Sq(i) => *i,
            TableOp::P(i) => 2 * i,
            TableOp::Beta => 0,
        }
    }
}

impl fmt::Display for TableOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableOp::Sq(i) => write!(f, "Sq^{i}"),
            TableOp::P(i) => write!(f, "P^{i}"),
            TableOp::Beta => write!(f, "beta"),
        }
    }
}

/// A finite graded `F_p`-vector space with labelled basis and the action of
/// finitely many operations; unspecified actions are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModuleTable {
    prime: u32,
    labels: Vec<String>,
    degrees: Vec<u32>,
    actions: BTreeMap<TableOp, BTreeMap<usize, Vec<(usize, u32)>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    #[serde(default = "two")]
    prime: u32,
    #[serde(default, rename = "class")]
    classes: Vec<RawClass>,
    #[serde(default, rename = "action")]
    actions: Vec<RawAction>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClass {
    label: String,
    degree: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    op: String,
    from: String,
    to: String,
}

fn two() -> u32 {
    2
}

fn inconsistent<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InconsistentTable(msg.into()))
}

impl FiniteModuleTable {
    pub fn new(prime: u32) -> Result<Self> {
        if !is_prime(prime) {
            return inconsistent(format!("{prime} is not a prime"));
        }
        Ok(FiniteModuleTable { prime, labels: Vec::new(), degrees: Vec::new(), actions: BTreeMap::new() })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn add_class(&mut self, label: impl Into<String>, degree: u32) -> Result<usize> {
        let label = label.into();
        if label.is_empty() || label.contains(|c: char| c.is_whitespace() || c == '+' || c == '*') {
            return inconsistent(format!("bad class label `{label}`"));
        }
        if self.index(&label).is_some() {
            return inconsistent(format!("duplicate class label `{label}`"));
        }
        self.labels.push(label);
        self.degrees.push(degree);
        Ok(self.labels.len() - 1)
    }

    /// Sets `op(from) = Σ c * to`, checking degrees and instability.
    pub fn set_action(&mut self, op: TableOp, from: usize, image: Vec<(usize, u32)>) -> Result<()> {
        let p = self.prime;
        if !op.allowed_at(p) {
            return inconsistent(format!("`{op}` is not available at p = {p}"));
        }
        let src = *self.degrees.get(from).ok_or_else(|| Error::InconsistentTable(format!("no class {from}")))?;
        let mut merged: BTreeMap<usize, u32> = BTreeMap::new();
        for (i, c) in image {
            let deg = *self.degrees.get(i).ok_or_else(|| Error::InconsistentTable(format!("no class {i}")))?;
            if deg != src + op.degree(p) {
                return inconsistent(format!(
                    "{op} {} lands in degree {}, but {} has degree {deg}",
                    self.labels[from],
                    src + op.degree(p),
                    self.labels[i]
                ));
            }
            let e = merged.entry(i).or_insert(0);
            *e = (*e + c % p) % p;
        }
        let image: Vec<(usize, u32)> = merged.into_iter().filter(|&(_, c)| c != 0).collect();
        if !image.is_empty() && src < op.excess() {
            return inconsistent(format!("instability: {op} is nonzero on {} in degree {src}", self.labels[from]));
        }
        let slot = self.actions.entry(op).or_default();
        if image.is_empty() {
            slot.remove(&from);
        } else {
            slot.insert(from, image);
        }
        Ok(())
    }

    pub fn classes_in_degree(&self, n: u32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degrees[i] == n).collect()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.degrees.iter().copied().max()
    }

    /// `op` on the vector `coords` over `classes_in_degree(n)`, as coordinates
    /// over `classes_in_degree(n + |op|)`.
    pub fn apply(&self, op: TableOp, n: u32, coords: &[u32]) -> Vec<u32> {
        let p = self.prime;
        let source = self.classes_in_degree(n);
        let target = self.classes_in_degree(n + op.degree(p));
        let mut out = vec![0u32; target.len()];
        let Some(map) = self.actions.get(&op) else { return out };
        for (&cls, &c) in source.iter().zip(coords) {
            if c == 0 {
                continue;
            }
            for &(to, a) in map.get(&cls).map(Vec::as_slice).unwrap_or(&[]) {
                let k = target.iter().position(|&t| t == to).expect("degrees checked on insertion");
                out[k] = ((u64::from(out[k]) + u64::from(a) * u64::from(c)) % u64::from(p)) as u32;
            }
        }
        out
    }

    fn describe(&self, n: u32, coords: &[u32]) -> String {
        let classes = self.classes_in_degree(n);
        let parts: Vec<String> = classes
            .iter()
            .zip(coords)
            .filter(|(_, &c)| c != 0)
            .map(|(&i, &c)| if c == 1 { self.labels[i].clone() } else { format!("{c}*{}", self.labels[i]) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawTable = toml::from_str(text).map_err(|e| Error::InconsistentTable(e.message().to_string()))?;
        let mut t = FiniteModuleTable::new(raw.prime)?;
        for c in raw.classes {
            t.add_class(c.label, c.degree)?;
        }
        let mut seen = std::collections::BTreeSet::new();
        for a in raw.actions {
            let op = TableOp::parse(&a.op)?;
            let from = t.index(a.from.trim()).ok_or_else(|| Error::InconsistentTable(format!("unknown class `{}`", a.from)))?;
            if !seen.insert((op, from)) {
                return inconsistent(format!("{op} on `{}` given twice", a.from));
            }
            let image = t.parse_combination(&a.to)?;
            t.set_action(op, from, image)?;
        }
        Ok(t)
    }

    fn parse_combination(&self, text: &str) -> Result<Vec<(usize, u32)>> {
        let text = text.trim();
        if text.is_empty() || text == "0" {
            return Ok(Vec::new());
        }
        text.split('+')
            .map(|part| {
                let part = part.trim();
                let (c, label) = match part.split_once('*') {
                    Some((c, l)) => (
                        c.trim().parse::<u32>().map_err(|_| Error::InconsistentTable(format!("bad coefficient in `{part}`")))?,
                        l.trim(),
                    ),
                    None => (1, part),
                };
                let i = self.index(label).ok_or_else(|| Error::InconsistentTable(format!("unknown class `{label}`")))?;
                Ok((i, c))
            })
            .collect()
    }

    /// The part of a computed span in degrees `[lo, hi]`, with the actions of
    /// `Sq^{2^i}` that stay inside the window.
    pub fn from_span_window(span: &GradedSpan<PolyElement>, lo: u32, hi: u32) -> Result<Self> {
        let mut t = FiniteModuleTable::new(2)?;
        let ids = add_window_classes(&mut t, span, lo, hi)?;
        for (&n, classes) in &ids {
            for (k, x) in span.basis(n).iter().enumerate() {
                let mut i = 1;
                while i <= n && n + i <= hi {
                    set_from_span(&mut t, span, TableOp::Sq(i), classes[k], &apply_sq(i, x), &ids)?;
                    i *= 2;
                }
            }
        }
        Ok(t)
    }

    /// As [`Self::from_span_window`] at an odd prime, with `β` and `P^{p^i}`.
    pub fn from_odd_span_window(span: &GradedSpan<OddElement>, p: u32, lo: u32, hi: u32) -> Result<Self> {
        let mut t = FiniteModuleTable::new(p)?;
        let ids = add_window_classes(&mut t, span, lo, hi)?;
        for (&n, classes) in &ids {
            for (k, x) in span.basis(n).iter().enumerate() {
                if n < hi {
                    set_from_span(&mut t, span, TableOp::Beta, classes[k], &apply_beta(x), &ids)?;
                }
                let mut i = 1;
                while 2 * i <= n && n + 2 * (p - 1) * i <= hi {
                    set_from_span(&mut t, span, TableOp::P(i), classes[k], &apply_p(i, x), &ids)?;
                    i *= p;
                }
            }
        }
        Ok(t)
    }
}

fn add_window_classes<V: crate::span::SpanVector>(
    t: &mut FiniteModuleTable,
    span: &GradedSpan<V>,
    lo: u32,
    hi: u32,
) -> Result<BTreeMap<u32, Vec<usize>>> {
    if span.computed_through().is_none_or(|c| c < hi) {
        return Err(Error::Precondition(format!("span not computed through degree {hi}")));
    }
    let mut ids = BTreeMap::new();
    for n in span.occupied().into_iter().filter(|&n| n >= lo && n <= hi) {
        let v: Vec<usize> = (0..span.dim(n)).map(|k| t.add_class(format!("e{n}_{k}"), n)).collect::<Result<_>>()?;
        ids.insert(n, v);
    }
    Ok(ids)
}

fn set_from_span<V: crate::span::SpanVector>(
    t: &mut FiniteModuleTable,
    span: &GradedSpan<V>,
    op: TableOp,
    from: usize,
    y: &V,
    ids: &BTreeMap<u32, Vec<usize>>,
) -> Result<()> {
    let Some(deg) = y.degree() else { return Ok(()) };
    let coords = span
        .coordinates(y)
        .ok_or_else(|| Error::Internal(format!("{op} leaves the span in degree {deg}")))?;
    let image = ids[&deg].iter().copied().zip(coords).collect();
    t.set_action(op, from, image)
}

/// A class `x` in the common kernel of the lower operations whose image under
/// the top operation escapes the sum of their images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdamsViolation {
    pub degree: u32,
    pub k: u32,
    pub witness: String,
    pub image: String,
    /// Dimension of the escaping part of the top operation on the kernel.
    pub escape_rank: usize,
}

fn adams_general(table: &FiniteModuleTable, k_min: u32, low: &dyn Fn(u32) -> Vec<TableOp>, top: &dyn Fn(u32) -> TableOp) -> Vec<AdamsViolation> {
    let p = table.prime;
    let Some(max) = table.max_degree() else { return Vec::new() };
    let mut degrees: Vec<u32> = table.degrees.clone();
    degrees.sort_unstable();
    degrees.dedup();
    let mut out = Vec::new();
    for &n in &degrees {
        let dim = table.classes_in_degree(n).len();
        let mut k = k_min;
        loop {
            let top_op = top(k);
            let target = u64::from(n) + u64::from(top_op.degree(p));
            if target > u64::from(max) {
                break;
            }
            let target = target as u32;
            let target_dim = table.classes_in_degree(target).len();
            k += 1;
            if target_dim == 0 {
                continue;
            }
            let lows = low(k - 1);
            let images: Vec<Vec<u32>> = (0..dim)
                .map(|j| {
                    let mut e = vec![0u32; dim];
                    e[j] = 1;
                    lows.iter().flat_map(|&o| table.apply(o, n, &e)).collect()
                })
                .collect();
            let stacked: usize = lows.iter().map(|o| table.classes_in_degree(n + o.degree(p)).len()).sum();
            let kernel = kernel_basis(p, &images, stacked);
            if kernel.is_empty() {
                continue;
            }
            let mut w = Echelon::new(p, target_dim);
            for &o in &lows {
                let od = o.degree(p);
                if od > target {
                    continue;
                }
                let src = target - od;
                let sdim = table.classes_in_degree(src).len();
                for j in 0..sdim {
                    let mut e = vec![0u32; sdim];
                    e[j] = 1;
                    w.insert(&table.apply(o, src, &e));
                }
            }
            let base_rank = w.rank();
            let mut first = None;
            for v in &kernel {
                let y = table.apply(top_op, n, v);
                if w.insert(&y).is_none() && w.rank() > base_rank && first.is_none() {
                    first = Some((v.clone(), y));
                }
            }
            if let Some((v, y)) = first {
                out.push(AdamsViolation {
                    degree: n,
                    k: k - 1,
                    witness: table.describe(n, &v),
                    image: table.describe(target, &y),
                    escape_rank: w.rank() - base_rank,
                });
            }
        }
    }
    out
}

/// For `k >= 4` and `x` with `Sq^{2^i} x = 0` for all `i < k`, checks
/// `Sq^{2^k} x ∈ Σ_{i<k} Im Sq^{2^i}`.
pub fn adams_check(table: &FiniteModuleTable) -> Result<Vec<AdamsViolation>> {
    if table.prime != 2 {
        return Err(Error::Precondition("adams_check works at p = 2; use adams_check_odd".into()));
    }
    Ok(adams_general(table, 4, &|k| (0..k).map(|i| TableOp::Sq(1 << i)).collect(), &|k| TableOp::Sq(1 << k)))
}

/// For `k >= 1` and `x` with `βx = 0`, `P^{p^i} x = 0` for all `i < k`,
/// checks `P^{p^k} x ∈ Σ_{i<k} Im P^{p^i} + Im β`.
pub fn adams_check_odd(table: &FiniteModuleTable) -> Result<Vec<AdamsViolation>> {
    let p = table.prime;
    if p == 2 {
        return Err(Error::Precondition("adams_check_odd needs an odd prime".into()));
    }
    Ok(adams_general(
        table,
        1,
        &|k| std::iter::once(TableOp::Beta).chain((0..k).map(|i| TableOp::P(p.pow(i)))).collect(),
        &|k| TableOp::P(p.pow(k)),
    ))
}
