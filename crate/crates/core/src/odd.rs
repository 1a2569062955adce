//! The mod `p` action (`p` odd) on `H*(B(Z/p)^d; F_p)^{⊕α}`.
//!
//! A basic monomial `(n_1, ..., n_d)` with `n_i = 2m_i + ε_i` stands for
//! `t^{ε_1} u^{m_1} ⊗ ... ⊗ t^{ε_d} u^{m_d}`, `|t| = 1`, `|u| = 2`, so its
//! degree is `Σ n_i`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::binomial::{binomial_mod_p, inv_mod_p};
use crate::bv::BasicMonomial;
use crate::error::{Error, Result};
use crate::exchange::{largest_power_below, longest_run};
use crate::span::{Action, SpanBuilder, SpanVector};

pub type OddMonomial = BasicMonomial;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

/// A homogeneous `F_p`-linear combination of basic monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OddElement {
    p: u32,
    d: usize,
    terms: BTreeMap<OddMonomial, u32>,
}

impl OddElement {
    pub fn zero(p: u32, d: usize) -> Self {
        OddElement { p, d, terms: BTreeMap::new() }
    }

    pub fn monomial(p: u32, m: OddMonomial, c: u32) -> Self {
        let mut x = OddElement::zero(p, m.d());
        x.add_term_unchecked(m, c);
        x
    }

    pub fn from_exponents(p: u32, exponents: &[u32]) -> Self {
        Self::monomial(p, OddMonomial::new(exponents.to_vec()), 1)
    }

    pub fn from_terms(p: u32, d: usize, terms: impl IntoIterator<Item = (OddMonomial, u32)>) -> Result<Self> {
        let mut x = OddElement::zero(p, d);
        for (m, c) in terms {
            x.add_term(m, c)?;
        }
        Ok(x)
    }

    /// Adds `c * m`, checking dimension and degree.
    pub fn add_term(&mut self, m: OddMonomial, c: u32) -> Result<()> {
        if m.d() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: m.d() });
        }
        if let Some(deg) = self.degree() {
            if deg != m.degree() {
                return Err(Error::MixedDegree { expected: deg.into(), found: m.degree().into() });
            }
        }
        self.add_term_unchecked(m, c);
        Ok(())
    }

    fn add_term_unchecked(&mut self, m: OddMonomial, c: u32) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = (*o.get() + c) % self.p;
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(OddMonomial::degree)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&OddMonomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &OddMonomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&OddMonomial, u32)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn scale(&self, c: u32) -> OddElement {
        let mut out = OddElement::zero(self.p, self.d);
        for (m, &a) in &self.terms {
            out.add_term_unchecked(m.clone(), (u64::from(a) * u64::from(c % self.p) % u64::from(self.p)) as u32);
        }
        out
    }

    pub fn neg(&self) -> OddElement {
        self.scale(self.p - 1)
    }

    pub fn add(&self, other: &OddElement) -> Result<OddElement> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &OddElement) -> Result<OddElement> {
        self.add(&other.neg())
    }

    pub fn add_assign(&mut self, other: &OddElement) -> Result<()> {
        if other.p != self.p {
            return Err(Error::Precondition(format!("mixing primes {} and {}", self.p, other.p)));
        }
        if other.d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: other.d });
        }
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            if a != b {
                return Err(Error::MixedDegree { expected: a.into(), found: b.into() });
            }
        }
        self.add_unchecked(other);
        Ok(())
    }

    fn add_unchecked(&mut self, other: &OddElement) {
        for (m, &c) in &other.terms {
            self.add_term_unchecked(m.clone(), c);
        }
    }

    /// Graded-commutative product of two elements of the same summand
    /// structure; factors are multiplied position by position, with the Koszul
    /// sign of moving each factor of `other` past the later factors of `self`.
    pub fn product(&self, other: &OddElement) -> Result<OddElement> {
        if other.d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: other.d });
        }
        let mut out = OddElement::zero(self.p, self.d);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                if a.summand != b.summand {
                    continue;
                }
                if a.exponents.iter().zip(&b.exponents).any(|(x, y)| x % 2 == 1 && y % 2 == 1) {
                    continue;
                }
                let mut odd_swaps = 0u32;
                for i in 0..self.d {
                    let later: u32 = a.exponents[i + 1..].iter().sum();
                    odd_swaps += (b.exponents[i] % 2) * (later % 2);
                }
                let e: Vec<u32> = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
                let mut c = u64::from(ca) * u64::from(cb) % u64::from(self.p);
                if odd_swaps % 2 == 1 {
                    c = (u64::from(self.p) - c) % u64::from(self.p);
                }
                out.add_term_unchecked(OddMonomial::in_summand(a.summand, e), c as u32);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for OddElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, &c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c != 1 {
                write!(f, "{c}*")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Calls `f(split, coefficient)` for every `(k_1, ..., k_d)` summing to `k`
/// with nonzero `Π C(m_i, k_i)` mod `p`, `m_i = n_i / 2`.
fn for_each_p_split(m: &[u32], k: u32, p: u32, f: &mut impl FnMut(&[u32], u32)) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        m: &[u32],
        pos: usize,
        rest: u32,
        tail_max: &[u32],
        p: u32,
        coeff: u32,
        cur: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32], u32),
    ) {
        if pos == m.len() {
            if rest == 0 {
                f(cur, coeff);
            }
            return;
        }
        if rest > tail_max[pos] {
            return;
        }
        let lo = rest.saturating_sub(tail_max[pos + 1]);
        for j in lo..=m[pos].min(rest) {
            let c = binomial_mod_p(m[pos].into(), j.into(), p);
            if c != 0 {
                cur.push(j);
                go(m, pos + 1, rest - j, tail_max, p, coeff * c % p, cur, f);
                cur.pop();
            }
        }
    }
    let mut tail_max = vec![0u32; m.len() + 1];
    for i in (0..m.len()).rev() {
        tail_max[i] = tail_max[i + 1] + m[i];
    }
    go(m, 0, k, &tail_max, p, 1, &mut Vec::with_capacity(m.len()), f);
}

fn apply_p_monomial(k: u32, mono: &OddMonomial, c: u32, out: &mut OddElement) {
    let p = out.p;
    let half: Vec<u32> = mono.exponents.iter().map(|n| n / 2).collect();
    for_each_p_split(&half, k, p, &mut |split, coeff| {
        let e: Vec<u32> = mono.exponents.iter().zip(split).map(|(n, j)| n + 2 * (p - 1) * j).collect();
        out.add_term_unchecked(OddMonomial::in_summand(mono.summand, e), coeff * c % p);
    });
}

/// `P^k x`: `P^j u^m = C(m, j) u^{m+(p-1)j}`, `P^j t = 0` for `j > 0`, Cartan.
pub fn apply_p(k: u32, x: &OddElement) -> OddElement {
    let mut out = OddElement::zero(x.p, x.d);
    for (m, &c) in &x.terms {
        apply_p_monomial(k, m, c, &mut out);
    }
    out
}

/// `β x`: `β t = u`, `β u = 0`, a derivation with sign `(-1)^{|a|}` when
/// passing a factor of degree `|a|`.
pub fn apply_beta(x: &OddElement) -> OddElement {
    let p = x.p;
    let mut out = OddElement::zero(p, x.d);
    for (m, &c) in &x.terms {
        let mut prefix = 0u32;
        for (i, &n) in m.exponents.iter().enumerate() {
            if n % 2 == 1 {
                let mut e = m.exponents.clone();
                e[i] += 1;
                let sign = if prefix % 2 == 1 { p - c } else { c };
                out.add_term_unchecked(OddMonomial::in_summand(m.summand, e), sign);
            }
            prefix += n;
        }
    }
    out
}

/// The top operation as an operator: `P^{|x|/2} x` in even degrees and
/// `β P^{(|x|-1)/2} x` in odd degrees, applied to each homogeneous piece.
pub fn p0_operator(x: &OddElement) -> OddElement {
    match x.degree() {
        None => x.clone(),
        Some(n) if n % 2 == 0 => apply_p(n / 2, x),
        Some(n) => apply_beta(&apply_p((n - 1) / 2, x)),
    }
}

fn p0_exponent(n: u32, s: u32, p: u32) -> u32 {
    if s == 0 {
        return n;
    }
    let (m, eps) = (n / 2, n % 2);
    let q = p.pow(s - 1);
    2 * p * q * m + 2 * q * eps
}

/// `P_0^s` through the exponent map `2m + ε ↦ 2p^s m + 2p^{s-1} ε`.
pub fn p0_power(x: &OddElement, s: u32) -> OddElement {
    let mut out = OddElement::zero(x.p, x.d);
    for (m, &c) in &x.terms {
        let e = m.exponents.iter().map(|&n| p0_exponent(n, s, x.p)).collect::<Vec<_>>();
        out.add_term_unchecked(OddMonomial::in_summand(m.summand, e), c);
    }
    out
}

/// Largest `s` with `n = 2p^{s-1} l`, `l ≡ 0, 1 mod p`; `None` for `n = 0`.
fn exponent_level(n: u32, p: u32) -> Option<u32> {
    if n == 0 {
        return None;
    }
    if n % 2 == 1 {
        return Some(0);
    }
    let mut q = n / 2;
    let mut v = 0;
    while q % p == 0 {
        q /= p;
        v += 1;
    }
    Some(v + u32::from(q % p == 1))
}

/// Largest `s` with `x ∈ Im(P_0^s)` by the exponent description; `None`
/// for infinity (zero, or only constant monomials).
pub fn p0_level(x: &OddElement) -> Option<u32> {
    x.terms.keys().flat_map(|m| m.exponents.iter()).filter_map(|&n| exponent_level(n, x.p)).min()
}

/// Inverse of [`p0_power`]; requires `s <= p0_level(x)`.
pub fn p0_root(x: &OddElement, s: u32) -> Result<OddElement> {
    if let Some(level) = p0_level(x) {
        if s > level {
            return Err(Error::Precondition(format!(
                "p0_root with s = {s} but x lies only in Im(P_0^{level})"
            )));
        }
    }
    if s == 0 {
        return Ok(x.clone());
    }
    let q = x.p.pow(s - 1);
    let mut out = OddElement::zero(x.p, x.d);
    for (m, &c) in &x.terms {
        let e = m
            .exponents
            .iter()
            .map(|&n| {
                let l = n / (2 * q);
                2 * (l / x.p) + l % x.p
            })
            .collect::<Vec<_>>();
        out.add_term_unchecked(OddMonomial::in_summand(m.summand, e), c);
    }
    Ok(out)
}

fn commutator_with_p(k: u32, f: &dyn Fn(&OddElement) -> OddElement, x: &OddElement) -> OddElement {
    let mut a = apply_p(k, &f(x));
    a.add_unchecked(&f(&apply_p(k, x)).neg());
    a
}

/// `Q_t^s x`: `Q_0^0 = β`, `Q_0^s = P^{p^{s-1}}`, and
/// `Q_{t+1}^s = P^{p^{s+t}} Q_t^s - Q_t^s P^{p^{s+t}}`.
pub fn qts_apply_odd(t: u32, s: u32, x: &OddElement) -> OddElement {
    if x.is_zero() {
        return x.clone();
    }
    if t == 0 {
        return if s == 0 { apply_beta(x) } else { apply_p(x.p.pow(s - 1), x) };
    }
    let k = x.p.pow(s + t - 1);
    commutator_with_p(k, &|y| qts_apply_odd(t - 1, s, y), x)
}

/// Degree of `Q_t^s` at the prime `p`.
pub fn qts_degree_odd(t: u32, s: u32, p: u32) -> u64 {
    let p = u64::from(p);
    if s == 0 {
        2 * p.pow(t) - 1
    } else {
        2 * (p.pow(t + s) - p.pow(s - 1))
    }
}

impl SpanVector for OddElement {
    type Key = OddMonomial;

    fn leading(&self) -> Option<(OddMonomial, u32)> {
        OddElement::leading(self).map(|(m, c)| (m.clone(), c))
    }

    fn modulus(&self) -> u32 {
        self.p
    }

    fn is_zero(&self) -> bool {
        OddElement::is_zero(self)
    }

    fn degree(&self) -> Option<u32> {
        OddElement::degree(self)
    }

    fn sub_scaled(&mut self, other: &Self, c: u32) {
        self.add_unchecked(&other.scale(self.p - c % self.p));
    }

    fn normalize(&mut self) {
        if let Some((_, c)) = OddElement::leading(self) {
            *self = self.scale(inv_mod_p(c, self.p));
        }
    }
}

/// Closure under `β` and every `P^i`, `i >= 1`.
#[derive(Clone, Copy, Debug)]
pub struct OddAction {
    pub p: u32,
}

impl Action for OddAction {
    type Vector = OddElement;

    fn lowest_source(&self, target: u32) -> u32 {
        target.div_ceil(self.p)
    }

    fn images(&self, v: &OddElement, shift: u32) -> Vec<OddElement> {
        let Some(deg) = v.degree() else { return Vec::new() };
        let step = 2 * (self.p - 1);
        if shift == 1 {
            vec![apply_beta(v)]
        } else if shift % step == 0 && 2 * (shift / step) <= deg {
            vec![apply_p(shift / step, v)]
        } else {
            Vec::new()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Le5Report {
    pub s: u32,
    pub t_max: u32,
    pub vanishes: Vec<bool>,
    pub run: Option<(u32, u32)>,
    /// The `P_0`-root has no exterior factor, so every `Q_t^s` vanishes.
    pub parity_degenerate: bool,
    /// `r - q <= d - 2`; `None` when there is no run or the input is degenerate.
    pub bound_holds: Option<bool>,
}

/// Longest run of `t <= t_max` with `Q_t^s x = 0`, `s = p0_level(x)`.
pub fn le5_run_check(x: &OddElement, t_max: u32) -> Result<Le5Report> {
    if x.is_zero() {
        return Err(Error::Precondition("le5_run_check on the zero element".into()));
    }
    let s = p0_level(x).unwrap_or(0);
    let root = p0_root(x, s)?;
    let parity_degenerate = !root.terms.keys().any(OddMonomial::has_odd_exponent);
    let vanishes: Vec<bool> = (0..=t_max).map(|t| qts_apply_odd(t, s, x).is_zero()).collect();
    let run = longest_run(&vanishes);
    let bound_holds = match run {
        Some((q, r)) if !parity_degenerate => Some(i64::from(r) - i64::from(q) <= x.d as i64 - 2),
        _ => None,
    };
    Ok(Le5Report { s, t_max, vanishes, run, parity_degenerate, bound_holds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Le6Verdict {
    Vacuous,
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Le6Report {
    pub degree: u32,
    pub gap: Option<u32>,
    pub k: Option<u32>,
    pub required_level: Option<u32>,
    pub level: Option<u32>,
    pub verdict: Le6Verdict,
}

/// A gap `(|x|, |x| + l]` with `l >= 2(p-1)p^k`, `k >= d - 3`, forces
/// `x ∈ Im(P_0^{k-d+3})`.
pub fn le6_check(x: &OddElement, span_bound: u32) -> Result<Le6Report> {
    let degree = x.degree().ok_or_else(|| Error::Precondition("le6_check on the zero element".into()))?;
    let d = x.d as u32;
    let level = p0_level(x);
    let mut builder = SpanBuilder::new(OddAction { p: x.p }, [x.clone()]);
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
        return Ok(Le6Report { degree, gap: None, k: None, required_level: None, level, verdict: Le6Verdict::Inconclusive });
    };
    let l = upper - degree - 1;
    let k = largest_power_below(u64::from(l), 2 * u64::from(x.p - 1), u64::from(x.p), d.saturating_sub(3));
    let required_level = k.map(|k| k + 3 - d);
    let verdict = match required_level {
        None => Le6Verdict::Vacuous,
        Some(r) if level.is_none_or(|s| s >= r) => Le6Verdict::Pass,
        Some(_) => Le6Verdict::Fail,
    };
    Ok(Le6Report { degree, gap: Some(l), k, required_level, level, verdict })
}

/// Pairs `(m_i, m_j)` whose difference is `1` or `2(p-1)`.
pub fn cond2_violations(layers: &[u32], p: u32) -> Vec<(u32, u32)> {
    let bad = [1, 2 * (p - 1)];
    let mut out = Vec::new();
    for (a, &mi) in layers.iter().enumerate() {
        for &mj in &layers[a + 1..] {
            if bad.contains(&mi.abs_diff(mj)) {
                out.push((mi, mj));
            }
        }
    }
    out
}

pub fn cond2_check(layers: &[u32], p: u32) -> bool {
    cond2_violations(layers, p).is_empty()
}
