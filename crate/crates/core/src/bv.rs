//! The action of the mod 2 Steenrod algebra on `H*(BV_d)^{⊕α}`, i.e. on
//! direct sums of polynomial rings `F_2[x_1, ..., x_d]` with `|x_i| = 1`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// `x_1^{n_1} ... x_d^{n_d}` in summand `summand` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct BasicMonomial {
    pub summand: u32,
    pub exponents: Vec<u32>,
}

impl BasicMonomial {
    pub fn new(exponents: impl Into<Vec<u32>>) -> Self {
        BasicMonomial { summand: 0, exponents: exponents.into() }
    }

    pub fn in_summand(summand: u32, exponents: impl Into<Vec<u32>>) -> Self {
        BasicMonomial { summand, exponents: exponents.into() }
    }

    pub fn d(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn has_odd_exponent(&self) -> bool {
        self.exponents.iter().any(|e| e % 2 == 1)
    }
}

impl fmt::Display for BasicMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")?;
        if self.summand > 0 {
            write!(f, "@{}", self.summand + 1)?;
        }
        Ok(())
    }
}

/// A homogeneous `F_2`-sum of distinct basic monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyElement {
    d: usize,
    terms: BTreeSet<BasicMonomial>,
}

impl PolyElement {
    pub fn zero(d: usize) -> Self {
        PolyElement { d, terms: BTreeSet::new() }
    }

    pub fn monomial(m: BasicMonomial) -> Self {
        PolyElement { d: m.d(), terms: BTreeSet::from([m]) }
    }

    /// Shorthand for a single monomial in the first summand.
    pub fn from_exponents(exponents: &[u32]) -> Self {
        Self::monomial(BasicMonomial::new(exponents.to_vec()))
    }

    pub fn from_monomials(d: usize, monomials: impl IntoIterator<Item = BasicMonomial>) -> Result<Self> {
        let mut x = PolyElement::zero(d);
        for m in monomials {
            x.toggle(m)?;
        }
        Ok(x)
    }

    /// Adds a monomial; an existing copy cancels.
    pub fn toggle(&mut self, m: BasicMonomial) -> Result<()> {
        if m.d() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: m.d() });
        }
        if let Some(deg) = self.degree() {
            if deg != m.degree() {
                return Err(Error::MixedDegree { expected: deg.into(), found: m.degree().into() });
            }
        }
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
        Ok(())
    }

    // Callers guarantee matching dimension and degree.
    fn toggle_unchecked(&mut self, m: BasicMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().next().map(BasicMonomial::degree)
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

    pub fn monomials(&self) -> impl DoubleEndedIterator<Item = &BasicMonomial> {
        self.terms.iter()
    }

    pub fn contains(&self, m: &BasicMonomial) -> bool {
        self.terms.contains(m)
    }

    pub fn leading(&self) -> Option<&BasicMonomial> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &PolyElement) -> Result<PolyElement> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &PolyElement) -> Result<()> {
        if other.d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: other.d });
        }
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            if a != b {
                return Err(Error::MixedDegree { expected: a.into(), found: b.into() });
            }
        }
        for m in &other.terms {
            self.toggle_unchecked(m.clone());
        }
        Ok(())
    }

    /// Product inside one summand: exponents add. Both factors must live in
    /// the same summand.
    pub fn product(&self, other: &PolyElement) -> Result<PolyElement> {
        if other.d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: other.d });
        }
        let mut out = PolyElement::zero(self.d);
        for a in &self.terms {
            for b in &other.terms {
                if a.summand != b.summand {
                    return Err(Error::Precondition("product across summands".into()));
                }
                let e = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect::<Vec<_>>();
                out.toggle_unchecked(BasicMonomial::in_summand(a.summand, e));
            }
        }
        Ok(out)
    }

    /// External tensor product `x ⊗ y` in `H*(BV_{d1 + d2})`.
    pub fn tensor(&self, other: &PolyElement) -> PolyElement {
        let mut out = PolyElement::zero(self.d + other.d);
        for a in &self.terms {
            for b in &other.terms {
                let mut e = a.exponents.clone();
                e.extend_from_slice(&b.exponents);
                out.toggle_unchecked(BasicMonomial::in_summand(a.summand, e));
            }
        }
        out
    }
}

impl fmt::Display for PolyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Calls `f` with every `(k_1, ..., k_d)` summing to `k` such that each
/// `C(n_i, k_i)` is odd, i.e. `k_i` is a binary submask of `n_i`.
fn for_each_odd_split(n: &[u32], k: u32, f: &mut impl FnMut(&[u32])) {
    fn go(n: &[u32], pos: usize, rest: u32, tail_max: &[u32], cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if pos == n.len() {
            if rest == 0 {
                f(cur);
            }
            return;
        }
        if rest > tail_max[pos] {
            return;
        }
        let ni = n[pos];
        // enumerate submasks of ni that do not exceed rest
        let mut sub = ni;
        loop {
            if sub <= rest {
                cur.push(sub);
                go(n, pos + 1, rest - sub, tail_max, cur, f);
                cur.pop();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & ni;
        }
    }
    let mut tail_max = vec![0u32; n.len() + 1];
    for i in (0..n.len()).rev() {
        tail_max[i] = tail_max[i + 1] + n[i];
    }
    go(n, 0, k, &tail_max, &mut Vec::with_capacity(n.len()), f);
}

/// `Sq^k` on a single monomial, by the Cartan formula and
/// `Sq^j x^n = C(n, j) x^{n+j}`.
pub fn apply_sq_monomial(k: u32, m: &BasicMonomial, out: &mut PolyElement) {
    if k == 0 {
        out.toggle_unchecked(m.clone());
        return;
    }
    for_each_odd_split(&m.exponents, k, &mut |split| {
        let e = m.exponents.iter().zip(split).map(|(a, b)| a + b).collect::<Vec<_>>();
        out.toggle_unchecked(BasicMonomial::in_summand(m.summand, e));
    });
}

/// `Sq^k x`.
pub fn apply_sq(k: u32, x: &PolyElement) -> PolyElement {
    let mut out = PolyElement::zero(x.d);
    for m in &x.terms {
        apply_sq_monomial(k, m, &mut out);
    }
    out
}

/// Applies a composition of squares, rightmost first.
pub fn apply_composition(ops: &[u32], x: &PolyElement) -> PolyElement {
    ops.iter().rev().fold(x.clone(), |acc, &k| apply_sq(k, &acc))
}

/// `Sq_0^s`: every exponent multiplied by `2^s`.
pub fn sq0_power(x: &PolyElement, s: u32) -> PolyElement {
    let mut out = PolyElement::zero(x.d);
    for m in &x.terms {
        let e = m.exponents.iter().map(|&n| n << s).collect::<Vec<_>>();
        out.toggle_unchecked(BasicMonomial::in_summand(m.summand, e));
    }
    out
}

/// Largest `s` with `x ∈ Im(Sq_0^s)`; `None` stands for infinity (zero, or
/// only constant monomials).
pub fn sq0_level(x: &PolyElement) -> Option<u32> {
    x.terms
        .iter()
        .flat_map(|m| m.exponents.iter())
        .filter(|&&n| n != 0)
        .map(|n| n.trailing_zeros())
        .min()
}

/// Inverse of [`sq0_power`]; requires `s <= sq0_level(x)`.
pub fn sq0_root(x: &PolyElement, s: u32) -> Result<PolyElement> {
    if let Some(level) = sq0_level(x) {
        if s > level {
            return Err(Error::Precondition(format!(
                "sq0_root with s = {s} but x lies only in Im(Sq_0^{level})"
            )));
        }
    }
    let mut out = PolyElement::zero(x.d);
    for m in &x.terms {
        let e = m.exponents.iter().map(|&n| n >> s).collect::<Vec<_>>();
        out.toggle_unchecked(BasicMonomial::in_summand(m.summand, e));
    }
    Ok(out)
}

/// `Q_t^s x`, evaluated through `Q_0^s = Sq^{2^s}` and
/// `Q_{t+1}^s = Sq^{2^{s+t+1}} Q_t^s + Q_t^s Sq^{2^{s+t+1}}`.
pub fn qts_apply(t: u32, s: u32, x: &PolyElement) -> PolyElement {
    if x.is_zero() {
        return x.clone();
    }
    if t == 0 {
        return apply_sq(1 << s, x);
    }
    let k = 1 << (s + t);
    let mut a = apply_sq(k, &qts_apply(t - 1, s, x));
    let b = qts_apply(t - 1, s, &apply_sq(k, x));
    for m in b.terms {
        a.toggle_unchecked(m);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u32]) -> PolyElement {
        PolyElement::from_exponents(v)
    }

    fn sum(v: &[&[u32]]) -> PolyElement {
        PolyElement::from_monomials(v[0].len(), v.iter().map(|m| BasicMonomial::new(m.to_vec())))
            .unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(apply_sq(1, &e(&[1])), e(&[2]));
        assert_eq!(apply_sq(2, &e(&[1, 1])), e(&[2, 2]));
        assert!(apply_sq(3, &e(&[2])).is_zero());
        assert_eq!(apply_sq(0, &e(&[3, 4])), e(&[3, 4]));
        // Sq^1 (x1 x2) = x1^2 x2 + x1 x2^2
        assert_eq!(apply_sq(1, &e(&[1, 1])), sum(&[&[2, 1], &[1, 2]]));
    }

    #[test]
    fn sq0_examples() {
        assert_eq!(sq0_power(&e(&[1, 2]), 1), e(&[2, 4]));
        assert_eq!(sq0_power(&e(&[1, 2]), 0), e(&[1, 2]));
        assert_eq!(sq0_power(&sum(&[&[1, 1], &[2, 0]]), 2), sum(&[&[4, 4], &[8, 0]]));
        assert_eq!(sq0_level(&sum(&[&[4, 6], &[2, 8]])), Some(1));
        assert_eq!(sq0_level(&e(&[1, 0])), Some(0));
        assert_eq!(sq0_level(&sum(&[&[8, 0], &[0, 8]])), Some(3));
        assert_eq!(sq0_level(&PolyElement::zero(2)), None);
        assert!(sq0_root(&e(&[2, 4]), 2).is_err());
        assert_eq!(sq0_root(&e(&[2, 4]), 1).unwrap(), e(&[1, 2]));
    }

    #[test]
    fn qts_examples() {
        assert_eq!(qts_apply(1, 1, &e(&[2])), e(&[8]));
        assert!(qts_apply(1, 0, &e(&[2])).is_zero());
        assert_eq!(qts_apply(0, 0, &e(&[3])), e(&[4]));
        // Q_1 x = x^4 on the degree one class
        assert_eq!(qts_apply(1, 0, &e(&[1])), e(&[4]));
    }

    #[test]
    fn homogeneity_and_dimension_are_enforced() {
        let mut x = e(&[1, 2]);
        assert!(matches!(x.toggle(BasicMonomial::new(vec![1, 1])), Err(Error::MixedDegree { .. })));
        assert!(matches!(x.toggle(BasicMonomial::new(vec![3])), Err(Error::DimensionMismatch { .. })));
        x.toggle(BasicMonomial::new(vec![1, 2])).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn summands_are_kept_apart() {
        let m = BasicMonomial::in_summand(1, vec![1, 1]);
        let x = PolyElement::monomial(m);
        let y = apply_sq(2, &x);
        assert_eq!(y, PolyElement::monomial(BasicMonomial::in_summand(1, vec![2, 2])));
        assert_eq!(y.to_string(), "(2,2)@2");
    }
}
