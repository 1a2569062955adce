//! Exchanges between basic monomials, chains, classes and their supports.
//!
//! A `g`-exchange at position `i` for `α` with `β` is a pair agreeing outside
//! two positions `i != j` where
//! `α_i = 2u_i + 1, α_j = 2u_j + step, β_i = 2u_i + step, β_j = 2u_j + 1`,
//! with `step = 2^{g+1}` at the prime 2 and `step = 2p^g` at an odd prime
//! (odd exponents then encode an exterior generator).

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::bv::{qts_apply, sq0_level, sq0_root, BasicMonomial, PolyElement};
use crate::error::{Error, Result};
use crate::span::{SpanBuilder, SquaresAction};

/// The exponent gap of a `g`-exchange at the given prime.
pub fn exchange_step(prime: u32, g: u32) -> u64 {
    if prime == 2 {
        1u64 << (g + 1)
    } else {
        2 * u64::from(prime).pow(g)
    }
}

/// Positions are 0-based; `i` is the odd position of `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeWitness {
    pub g: u32,
    pub i: usize,
    pub j: usize,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl fmt::Display for ExchangeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-exchange at positions ({}, {}) between {:?} and {:?}",
            self.g,
            self.i + 1,
            self.j + 1,
            self.alpha,
            self.beta
        )
    }
}

fn check_pair(a: &BasicMonomial, b: &BasicMonomial) -> Result<()> {
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch { expected: a.d(), found: b.d() });
    }
    if a.degree() != b.degree() {
        return Err(Error::MixedDegree { expected: a.degree().into(), found: b.degree().into() });
    }
    Ok(())
}

fn matches_at(a: &[u32], b: &[u32], i: usize, j: usize, step: u64) -> bool {
    let (ai, aj, bi, bj) = (u64::from(a[i]), u64::from(a[j]), u64::from(b[i]), u64::from(b[j]));
    ai % 2 == 1 && bj % 2 == 1 && bi == ai - 1 + step && aj == bj - 1 + step
}

/// Exchange test on raw exponent vectors of equal length.
pub fn exchange_positions(a: &[u32], b: &[u32], step: u64) -> Option<(usize, usize)> {
    let mut diff = a.iter().zip(b).enumerate().filter(|(_, (x, y))| x != y).map(|(k, _)| k);
    let (x, y) = (diff.next()?, diff.next()?);
    if diff.next().is_some() {
        return None;
    }
    // lexicographic in (i, j): (x, y) before (y, x)
    if matches_at(a, b, x, y, step) {
        Some((x, y))
    } else if matches_at(a, b, y, x, step) {
        Some((y, x))
    } else {
        None
    }
}

/// Is there a `g`-exchange (prime 2) between `alpha` and `beta`?
pub fn is_g_exchange(alpha: &BasicMonomial, beta: &BasicMonomial, g: u32) -> Result<Option<ExchangeWitness>> {
    is_g_exchange_at_prime(alpha, beta, g, 2)
}

/// Exchange test with the step of the given prime.
pub fn is_g_exchange_at_prime(
    alpha: &BasicMonomial,
    beta: &BasicMonomial,
    g: u32,
    prime: u32,
) -> Result<Option<ExchangeWitness>> {
    check_pair(alpha, beta)?;
    if alpha.summand != beta.summand {
        return Ok(None);
    }
    Ok(exchange_positions(&alpha.exponents, &beta.exponents, exchange_step(prime, g)).map(|(i, j)| {
        ExchangeWitness { g, i, j, alpha: alpha.exponents.clone(), beta: beta.exponents.clone() }
    }))
}

/// A connected component of the `(l, s)`-exchange graph, with the edges found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainComponent {
    pub members: Vec<BasicMonomial>,
    pub witnesses: Vec<ExchangeWitness>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Components of the graph whose edges are `m`-exchanges, `l <= m <= s`.
pub fn chain_components(monomials: &[BasicMonomial], l: u32, s: u32) -> Result<Vec<ChainComponent>> {
    chain_components_at_prime(monomials, l, s, 2)
}

pub fn chain_components_at_prime(
    monomials: &[BasicMonomial],
    l: u32,
    s: u32,
    prime: u32,
) -> Result<Vec<ChainComponent>> {
    if l > s {
        return Err(Error::Precondition(format!("chain range needs l <= s, got ({l}, {s})")));
    }
    let set: BTreeSet<&BasicMonomial> = monomials.iter().collect();
    let items: Vec<&BasicMonomial> = set.into_iter().collect();
    if let Some(first) = items.first() {
        for m in &items[1..] {
            check_pair(first, m)?;
        }
    }
    let mut uf = UnionFind::new(items.len());
    let mut edges = Vec::new();
    for a in 0..items.len() {
        for b in a + 1..items.len() {
            for g in l..=s {
                if let Some(w) = is_g_exchange_at_prime(items[a], items[b], g, prime)?
                    .or(is_g_exchange_at_prime(items[b], items[a], g, prime)?)
                {
                    uf.union(a, b);
                    edges.push((a, w));
                }
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut comps: Vec<ChainComponent> = Vec::new();
    for k in 0..items.len() {
        let r = uf.find(k);
        let idx = match roots.iter().position(|&x| x == r) {
            Some(idx) => idx,
            None => {
                roots.push(r);
                comps.push(ChainComponent { members: Vec::new(), witnesses: Vec::new() });
                roots.len() - 1
            }
        };
        comps[idx].members.push(items[k].clone());
    }
    for (a, w) in edges {
        let r = uf.find(a);
        let idx = roots.iter().position(|&x| x == r).expect("root recorded");
        comps[idx].witnesses.push(w);
    }
    Ok(comps)
}

/// Positions (0-based) where every member carries the same even exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Support {
    pub positions: Vec<usize>,
    pub values: Vec<u32>,
}

impl Support {
    pub fn size(&self) -> usize {
        self.positions.len()
    }
}

pub fn compute_support(set: &[BasicMonomial]) -> Result<Support> {
    let first = set.first().ok_or_else(|| Error::Precondition("support of an empty set".into()))?;
    let d = first.d();
    if let Some(m) = set.iter().find(|m| m.d() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: m.d() });
    }
    let mut positions = Vec::new();
    let mut values = Vec::new();
    for k in 0..d {
        let v = first.exponents[k];
        if v % 2 == 0 && set.iter().all(|m| m.exponents[k] == v) {
            positions.push(k);
            values.push(v);
        }
    }
    Ok(Support { positions, values })
}

/// An `(l, s)`-class together with its support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LsClass {
    pub l: u32,
    pub s: u32,
    pub members: Vec<BasicMonomial>,
    pub support: Support,
    pub witnesses: Vec<ExchangeWitness>,
}

impl LsClass {
    pub fn tau(&self) -> usize {
        self.support.size()
    }

    /// Checks the defining property directly: each member has an odd
    /// exponent, and for every odd position `i` and every `m` in `[l, s]` some
    /// member is reached by an `m`-exchange at position `i`.
    pub fn verify(&self, prime: u32) -> Result<bool> {
        for a in &self.members {
            if !a.has_odd_exponent() {
                return Ok(false);
            }
            for (i, &e) in a.exponents.iter().enumerate() {
                if e % 2 == 0 {
                    continue;
                }
                for m in self.l..=self.s {
                    let mut found = false;
                    for b in &self.members {
                        if let Some(w) = is_g_exchange_at_prime(a, b, m, prime)? {
                            if w.i == i {
                                found = true;
                                break;
                            }
                        }
                    }
                    if !found {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// The `(p, q)`-classes of `x`, read off from the chain components once the
/// annihilation `Q_t x = 0` for `p <= t <= q` has been confirmed.
pub fn find_ls_classes(x: &PolyElement, p: u32, q: u32) -> Result<Vec<LsClass>> {
    if p > q {
        return Err(Error::Precondition(format!("class range needs p <= q, got ({p}, {q})")));
    }
    if x.is_zero() {
        return Err(Error::Precondition("find_ls_classes on the zero element".into()));
    }
    for t in p..=q {
        let y = qts_apply(t, 0, x);
        if let Some(m) = y.leading() {
            return Err(Error::AnnihilationFails { t, monomial: m.to_string() });
        }
    }
    let monomials: Vec<BasicMonomial> = x.monomials().cloned().collect();
    let mut classes = Vec::new();
    for comp in chain_components(&monomials, p, q)? {
        if !comp.members.iter().any(BasicMonomial::has_odd_exponent) {
            continue;
        }
        let support = compute_support(&comp.members)?;
        classes.push(LsClass { l: p, s: q, members: comp.members, support, witnesses: comp.witnesses });
    }
    Ok(classes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pr2Outcome {
    pub holds: bool,
    /// `s - l + #T`
    pub lhs: i64,
    /// `d - 2`
    pub rhs: i64,
}

impl fmt::Display for Pr2Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.holds { "<=" } else { ">" };
        write!(f, "s - l + #T = {} {rel} d - 2 = {}", self.lhs, self.rhs)
    }
}

/// The bound `s - l + #T <= d - 2` for an `(l, s)`-class.
pub fn pr2_check(class: &LsClass, d: usize) -> Pr2Outcome {
    pr2_bound(class.l, class.s, class.tau(), d)
}

pub fn pr2_bound(l: u32, s: u32, tau: usize, d: usize) -> Pr2Outcome {
    let lhs = i64::from(s) - i64::from(l) + tau as i64;
    let rhs = d as i64 - 2;
    Pr2Outcome { holds: lhs <= rhs, lhs, rhs }
}

/// Longest run of consecutive `t` with `Q_t^s x = 0`, `s` the `Sq_0`-level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingRun {
    pub s: u32,
    pub t_max: u32,
    /// `vanishes[t]` for `t = 0..=t_max`
    pub vanishes: Vec<bool>,
    /// `(p, q)` of the longest run, smallest `p` on ties.
    pub run: Option<(u32, u32)>,
    /// No monomial of the `Sq_0`-root has an odd exponent, so every `Q_t^s`
    /// vanishes for parity reasons alone.
    pub parity_degenerate: bool,
}

impl VanishingRun {
    /// `q - p` of the run, `None` when empty.
    pub fn spread(&self) -> Option<i64> {
        self.run.map(|(p, q)| i64::from(q) - i64::from(p))
    }
}

pub(crate) fn longest_run(vanishes: &[bool]) -> Option<(u32, u32)> {
    let mut best: Option<(u32, u32)> = None;
    let mut start: Option<u32> = None;
    for (t, &v) in vanishes.iter().enumerate() {
        let t = t as u32;
        if v {
            let p = *start.get_or_insert(t);
            if best.is_none_or(|(bp, bq)| t - p > bq - bp) {
                best = Some((p, t));
            }
        } else {
            start = None;
        }
    }
    best
}

pub fn vanishing_run(x: &PolyElement, t_max: u32) -> Result<VanishingRun> {
    if x.is_zero() {
        return Err(Error::Precondition("vanishing_run on the zero element".into()));
    }
    let level = sq0_level(x);
    let s = level.unwrap_or(0);
    let root = sq0_root(x, s)?;
    let parity_degenerate = !root.monomials().any(BasicMonomial::has_odd_exponent);
    let vanishes: Vec<bool> = (0..=t_max).map(|t| qts_apply(t, s, x).is_zero()).collect();
    let run = longest_run(&vanishes);
    Ok(VanishingRun { s, t_max, vanishes, run, parity_degenerate })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Co2Verdict {
    /// No `k >= d - 2` with `2^k <= l`.
    Vacuous,
    Pass,
    Fail,
    /// No nonzero degree above `|x|` within the span bound.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Co2Report {
    pub degree: u32,
    /// Length `l` of the gap `(|x|, |x| + l]`, when its upper end was found.
    pub gap: Option<u32>,
    pub k: Option<u32>,
    pub required_level: Option<u32>,
    pub level: Option<u32>,
    pub verdict: Co2Verdict,
}

/// Largest `k >= k_min` with `unit * base^k <= l`.
pub(crate) fn largest_power_below(l: u64, unit: u64, base: u64, k_min: u32) -> Option<u32> {
    let mut k = k_min;
    let mut v = unit.checked_mul(base.checked_pow(k_min)?)?;
    if v > l {
        return None;
    }
    while let Some(next) = v.checked_mul(base).filter(|&n| n <= l) {
        v = next;
        k += 1;
    }
    Some(k)
}

/// A gap of length `l >= 2^k`, `k >= d - 2`, right above `|x|` forces
/// `x` into the image of `Sq_0^{k-d+2}`.
pub fn co2_check(x: &PolyElement, span_bound: u32) -> Result<Co2Report> {
    let degree = x.degree().ok_or_else(|| Error::Precondition("co2_check on the zero element".into()))?;
    let d = x.d() as u32;
    let level = sq0_level(x);
    let mut builder = SpanBuilder::new(SquaresAction, [x.clone()]);
    builder.advance();
    let mut upper = None;
    while builder.next_degree() <= span_bound {
        let (n, dim) = builder.advance();
        if dim > 0 {
            upper = Some(n);
            break;
        }
    }
    let Some(upper) = upper else {
        return Ok(Co2Report { degree, gap: None, k: None, required_level: None, level, verdict: Co2Verdict::Inconclusive });
    };
    let l = upper - degree - 1;
    let k = largest_power_below(u64::from(l), 1, 2, d.saturating_sub(2));
    let required_level = k.map(|k| k + 2 - d);
    let verdict = match required_level {
        None => Co2Verdict::Vacuous,
        Some(r) if level.is_none_or(|s| s >= r) => Co2Verdict::Pass,
        Some(_) => Co2Verdict::Fail,
    };
    Ok(Co2Report { degree, gap: Some(l), k, required_level, level, verdict })
}
