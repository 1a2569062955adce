//! The mod 2 Steenrod algebra in the Milnor basis.
//!
//! Basis elements `Sq(r_1, ..., r_k)` multiply by Milnor's matrix formula; the
//! coefficient of each matrix is a product of multinomials along its
//! antidiagonals, which is odd exactly when the binary digits of the entries on
//! every antidiagonal are disjoint.

use std::collections::BTreeSet;
use std::fmt;

use crate::binomial::multinomial_is_odd;
use crate::error::{Error, Result};

/// A Milnor basis element `Sq(r_1, ..., r_k)` with trailing zeros trimmed.
/// The empty sequence is the unit `Sq() = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MilnorElement(Vec<u32>);

impl MilnorElement {
    pub fn new(exponents: impl Into<Vec<u32>>) -> Self {
        let mut v = exponents.into();
        while v.last() == Some(&0) {
            v.pop();
        }
        MilnorElement(v)
    }

    pub fn unit() -> Self {
        MilnorElement(Vec::new())
    }

    /// `Sq^n = Sq(n)`.
    pub fn sq(n: u32) -> Self {
        MilnorElement::new(vec![n])
    }

    /// `P_{t+1}^s`: the element with `2^s` in position `t + 1`.
    pub fn p_part(t: u32, s: u32) -> Self {
        let mut v = vec![0; t as usize + 1];
        v[t as usize] = 1 << s;
        MilnorElement::new(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        milnor_degree(self)
    }
}

impl fmt::Display for MilnorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sq(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Accepts `Sq(r_1,...,r_k)`, the bare `(r_1,...,r_k)` and `Sq^n` for `Sq(n)`.
impl std::str::FromStr for MilnorElement {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let syntax = |message: &str| Error::Syntax { column: 1, message: format!("{message} in `{text}`") };
        if let Some(n) = t.strip_prefix("Sq^") {
            let n = n.trim().parse::<u32>().map_err(|_| syntax("expected an integer after Sq^"))?;
            return Ok(MilnorElement::sq(n));
        }
        let t = t.strip_prefix("Sq").unwrap_or(t).trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| syntax("expected Sq(r1,...,rk)"))?;
        if inner.trim().is_empty() {
            return Ok(MilnorElement::unit());
        }
        let exps = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| syntax("expected non-negative integers"))?;
        Ok(MilnorElement::new(exps))
    }
}

/// `sum_i r_i (2^i - 1)`.
pub fn milnor_degree(e: &MilnorElement) -> u64 {
    e.0.iter()
        .enumerate()
        .map(|(i, &r)| u64::from(r) * ((1u64 << (i + 1)) - 1))
        .sum()
}

/// A homogeneous `F_2`-linear combination of Milnor basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OperationSum {
    terms: BTreeSet<MilnorElement>,
    degree: Option<u64>,
}

impl OperationSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = MilnorElement>) -> Result<Self> {
        let mut sum = Self::zero();
        for t in terms {
            sum.insert(t)?;
        }
        Ok(sum)
    }

    /// Adds `e` to the sum; a term already present cancels.
    pub fn insert(&mut self, e: MilnorElement) -> Result<()> {
        let deg = e.degree();
        if let Some(expected) = self.degree {
            if expected != deg {
                return Err(Error::MixedDegree { expected, found: deg });
            }
        }
        if !self.terms.remove(&e) {
            self.terms.insert(e);
        }
        self.degree = if self.terms.is_empty() { None } else { Some(deg) };
        Ok(())
    }

    pub fn add(&self, other: &OperationSum) -> Result<OperationSum> {
        let mut out = self.clone();
        for t in &other.terms {
            out.insert(t.clone())?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of the terms, `None` for the zero sum.
    pub fn degree(&self) -> Option<u64> {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = &MilnorElement> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, e: &MilnorElement) -> bool {
        self.terms.contains(e)
    }

    pub fn mul(&self, other: &OperationSum) -> OperationSum {
        let mut out = OperationSum::zero();
        for a in &self.terms {
            for b in &other.terms {
                for t in milnor_multiply(a, b).terms {
                    // all products of two homogeneous sums share one degree
                    out.insert(t).expect("product of homogeneous sums is homogeneous");
                }
            }
        }
        out
    }
}

impl From<MilnorElement> for OperationSum {
    fn from(e: MilnorElement) -> Self {
        let degree = Some(e.degree());
        OperationSum { terms: BTreeSet::from([e]), degree }
    }
}

impl fmt::Display for OperationSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Product of two Milnor basis elements.
pub fn milnor_multiply(a: &MilnorElement, b: &MilnorElement) -> OperationSum {
    if a.is_unit() {
        return b.clone().into();
    }
    if b.is_unit() {
        return a.clone().into();
    }
    let r = &a.0;
    let s = &b.0;
    let rows = r.len() + 1;
    let cols = s.len() + 1;
    let mut m = MatrixSearch {
        rows,
        cols,
        x: vec![0; rows * cols],
        row_left: std::iter::once(0).chain(r.iter().copied()).collect(),
        col_left: std::iter::once(0).chain(s.iter().copied()).collect(),
        out: BTreeSet::new(),
    };
    m.search(1, 1);
    let degree = a.degree() + b.degree();
    let terms = m.out;
    OperationSum { degree: (!terms.is_empty()).then_some(degree), terms }
}

struct MatrixSearch {
    rows: usize,
    cols: usize,
    // row-major; row 0 and column 0 are filled from the leftover budgets
    x: Vec<u32>,
    row_left: Vec<u32>,
    col_left: Vec<u32>,
    out: BTreeSet<MilnorElement>,
}

impl MatrixSearch {
    fn search(&mut self, i: usize, j: usize) {
        if i == self.rows {
            self.emit();
            return;
        }
        if j == self.cols {
            // x_{i0} absorbs what is left of row i
            self.x[i * self.cols] = self.row_left[i];
            self.search(i + 1, 1);
            return;
        }
        let max = (self.row_left[i] >> j).min(self.col_left[j]);
        for v in 0..=max {
            self.x[i * self.cols + j] = v;
            self.row_left[i] -= v << j;
            self.col_left[j] -= v;
            self.search(i, j + 1);
            self.row_left[i] += v << j;
            self.col_left[j] += v;
        }
        self.x[i * self.cols + j] = 0;
    }

    fn emit(&mut self) {
        for j in 1..self.cols {
            self.x[j] = self.col_left[j];
        }
        let diags = self.rows + self.cols - 2;
        let mut t = Vec::with_capacity(diags);
        let mut diag = Vec::with_capacity(self.rows);
        for n in 1..=diags {
            diag.clear();
            let lo = n.saturating_sub(self.cols - 1);
            let hi = n.min(self.rows - 1);
            for i in lo..=hi {
                diag.push(self.x[i * self.cols + (n - i)]);
            }
            if !multinomial_is_odd(&diag) {
                return;
            }
            t.push(diag.iter().sum());
        }
        let e = MilnorElement::new(t);
        if !self.out.remove(&e) {
            self.out.insert(e);
        }
    }
}

/// `ab + ba`. Inputs are homogeneous by construction of [`OperationSum`].
pub fn commutator(a: &OperationSum, b: &OperationSum) -> OperationSum {
    a.mul(b).add(&b.mul(a)).expect("ab and ba have equal degree")
}

/// Resource limits for tower computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MilnorConfig {
    pub max_t: u32,
    pub max_s: u32,
    pub max_degree: u64,
}

impl Default for MilnorConfig {
    fn default() -> Self {
        MilnorConfig { max_t: 6, max_s: 6, max_degree: 256 }
    }
}

/// Degree of `Q_t^s`, namely `2^s (2^{t+1} - 1)`.
pub fn qts_degree(t: u32, s: u32) -> u64 {
    (1u64 << s) * ((1u64 << (t + 1)) - 1)
}

/// Milnor-basis expansion of `Q_t^s`, built from `Q_0^s = Sq^{2^s}` and
/// `Q_{t+1}^s = [Sq^{2^{s+t+1}}, Q_t^s]`.
pub fn qts_milnor(t: u32, s: u32, config: &MilnorConfig) -> Result<OperationSum> {
    if t > config.max_t {
        return Err(Error::ResourceBound {
            what: "t",
            value: t.into(),
            limit: config.max_t.into(),
        });
    }
    if s > config.max_s {
        return Err(Error::ResourceBound {
            what: "s",
            value: s.into(),
            limit: config.max_s.into(),
        });
    }
    let deg = qts_degree(t, s);
    if deg > config.max_degree {
        return Err(Error::ResourceBound { what: "degree", value: deg, limit: config.max_degree });
    }
    let mut q: OperationSum = MilnorElement::sq(1 << s).into();
    for step in 1..=t {
        let sq: OperationSum = MilnorElement::sq(1 << (s + step)).into();
        q = commutator(&sq, &q);
    }
    Ok(q)
}

/// All Milnor basis elements of degree `n`, in lexicographic order.
pub fn milnor_basis(n: u64) -> Vec<MilnorElement> {
    fn go(n: u64, pos: usize, current: &mut Vec<u32>, out: &mut Vec<MilnorElement>) {
        if pos == 0 {
            if n == 0 {
                out.push(MilnorElement::new(current.clone()));
            }
            return;
        }
        let w = (1u64 << pos) - 1;
        for r in 0..=n / w {
            current[pos - 1] = r as u32;
            go(n - r * w, pos - 1, current, out);
        }
        current[pos - 1] = 0;
    }
    let mut width = 0usize;
    while (1u64 << (width + 1)) - 1 <= n {
        width += 1;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; width];
    go(n, width, &mut cur, &mut out);
    out.sort();
    out
}
