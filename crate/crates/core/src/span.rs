//! Degree-wise closure of a set of generators under the positive-degree
//! generating operations of the Steenrod algebra, with an echelon basis kept
//! in every degree.

use std::collections::BTreeMap;

use crate::bv::{apply_sq, BasicMonomial, PolyElement};
use crate::error::{Error, Result};

/// A vector with a distinguished leading coordinate, so that echelon bases
/// can be kept keyed by pivot.
pub trait SpanVector: Clone {
    type Key: Ord + Clone;

    fn leading(&self) -> Option<(Self::Key, u32)>;
    /// Characteristic of the coefficient field.
    fn modulus(&self) -> u32;
    fn is_zero(&self) -> bool;
    fn degree(&self) -> Option<u32>;
    /// `self -= c * other`.
    fn sub_scaled(&mut self, other: &Self, c: u32);
    /// Rescales so that the leading coefficient becomes one.
    fn normalize(&mut self);
}

impl SpanVector for PolyElement {
    type Key = BasicMonomial;

    fn leading(&self) -> Option<(BasicMonomial, u32)> {
        PolyElement::leading(self).map(|m| (m.clone(), 1))
    }

    fn modulus(&self) -> u32 {
        2
    }

    fn is_zero(&self) -> bool {
        PolyElement::is_zero(self)
    }

    fn degree(&self) -> Option<u32> {
        PolyElement::degree(self)
    }

    fn sub_scaled(&mut self, other: &Self, c: u32) {
        if c % 2 == 1 {
            self.add_assign(other).expect("span vectors share degree and dimension");
        }
    }

    fn normalize(&mut self) {}
}

/// The generating operations used for closure.
pub trait Action {
    type Vector: SpanVector;

    /// Lowest source degree from which a generating operation can land in
    /// `target` (instability bounds the operation degree by the source).
    fn lowest_source(&self, target: u32) -> u32;

    /// Images of `v` under the generating operations of degree `shift`.
    fn images(&self, v: &Self::Vector, shift: u32) -> Vec<Self::Vector>;
}

/// Closure under every `Sq^i`, `i >= 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SquaresAction;

impl Action for SquaresAction {
    type Vector = PolyElement;

    fn lowest_source(&self, target: u32) -> u32 {
        target.div_ceil(2)
    }

    fn images(&self, v: &PolyElement, shift: u32) -> Vec<PolyElement> {
        match v.degree() {
            Some(deg) if shift >= 1 && shift <= deg => vec![apply_sq(shift, v)],
            _ => Vec::new(),
        }
    }
}

/// Per-degree echelon bases of a submodule.
#[derive(Clone, Debug)]
pub struct GradedSpan<V: SpanVector> {
    bases: BTreeMap<u32, BTreeMap<V::Key, V>>,
    computed_through: Option<u32>,
}

impl<V: SpanVector> GradedSpan<V> {
    fn empty() -> Self {
        GradedSpan { bases: BTreeMap::new(), computed_through: None }
    }

    /// Degrees in which the span is nonzero, ascending.
    pub fn occupied(&self) -> Vec<u32> {
        self.bases.keys().copied().collect()
    }

    pub fn dim(&self, degree: u32) -> usize {
        self.bases.get(&degree).map_or(0, BTreeMap::len)
    }

    pub fn basis(&self, degree: u32) -> Vec<V> {
        self.bases.get(&degree).map(|b| b.values().cloned().collect()).unwrap_or_default()
    }

    /// Highest degree that has been fully computed.
    pub fn computed_through(&self) -> Option<u32> {
        self.computed_through
    }

    /// Reduces `v` against the basis in its degree; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &V) -> V {
        let mut v = v.clone();
        if let Some(deg) = v.degree() {
            if let Some(basis) = self.bases.get(&deg) {
                reduce_against(basis, &mut v);
            }
        }
        v
    }

    /// Coefficients of `v` on `basis(degree)`, or `None` if `v` is not in
    /// the span.
    pub fn coordinates(&self, v: &V) -> Option<Vec<u32>> {
        let Some(deg) = v.degree() else { return Some(Vec::new()) };
        let basis = self.bases.get(&deg)?;
        let p = v.modulus();
        let mut coords = vec![0u32; basis.len()];
        let mut v = v.clone();
        while let Some((key, c)) = v.leading() {
            let (idx, b) = basis.iter().enumerate().find(|(_, (k, _))| **k == key).map(|(i, (_, b))| (i, b))?;
            v.sub_scaled(b, c);
            coords[idx] = (coords[idx] + c) % p;
        }
        Some(coords)
    }
}

fn reduce_against<V: SpanVector>(basis: &BTreeMap<V::Key, V>, v: &mut V) {
    // Pivots are distinct leading keys, so every nonzero element of the span
    // leads with a pivot. Eliminating the leading key strictly lowers it.
    while let Some((key, c)) = v.leading() {
        match basis.get(&key) {
            Some(b) => v.sub_scaled(b, c),
            None => return,
        }
    }
}

/// Incremental closure: computes one degree at a time.
pub struct SpanBuilder<A: Action> {
    action: A,
    generators: BTreeMap<u32, Vec<A::Vector>>,
    span: GradedSpan<A::Vector>,
    next_degree: u32,
}

impl<A: Action> SpanBuilder<A> {
    pub fn new(action: A, generators: impl IntoIterator<Item = A::Vector>) -> Self {
        let mut by_degree: BTreeMap<u32, Vec<A::Vector>> = BTreeMap::new();
        for g in generators {
            if let Some(deg) = g.degree() {
                by_degree.entry(deg).or_default().push(g);
            }
        }
        let next_degree = by_degree.keys().next().copied().unwrap_or(0);
        SpanBuilder { action, generators: by_degree, span: GradedSpan::empty(), next_degree }
    }

    pub fn lowest_generator_degree(&self) -> Option<u32> {
        self.generators.keys().next().copied()
    }

    pub fn next_degree(&self) -> u32 {
        self.next_degree
    }

    /// Computes the next degree and returns `(degree, dimension)`.
    pub fn advance(&mut self) -> (u32, usize) {
        let n = self.next_degree;
        let mut basis: BTreeMap<<A::Vector as SpanVector>::Key, A::Vector> = BTreeMap::new();
        let insert = |mut v: A::Vector, basis: &mut BTreeMap<_, A::Vector>| {
            reduce_against(basis, &mut v);
            if let Some((key, _)) = v.leading() {
                v.normalize();
                basis.insert(key, v);
            }
        };
        if let Some(gens) = self.generators.get(&n) {
            for g in gens {
                insert(g.clone(), &mut basis);
            }
        }
        let lo = self.action.lowest_source(n);
        for (&m, source) in self.span.bases.range(lo..n) {
            for v in source.values() {
                for img in self.action.images(v, n - m) {
                    if !img.is_zero() {
                        insert(img, &mut basis);
                    }
                }
            }
        }
        let dim = basis.len();
        if dim > 0 {
            self.span.bases.insert(n, basis);
        }
        self.span.computed_through = Some(n);
        self.next_degree = n + 1;
        (n, dim)
    }

    pub fn span(&self) -> &GradedSpan<A::Vector> {
        &self.span
    }

    pub fn into_span(self) -> GradedSpan<A::Vector> {
        self.span
    }
}

/// Closes `generators` under `action` in every degree up to `bound`.
pub fn close<A: Action>(
    action: A,
    generators: &[A::Vector],
    bound: u32,
) -> Result<GradedSpan<A::Vector>> {
    if let Some(max) = generators.iter().filter_map(SpanVector::degree).max() {
        if max > bound {
            return Err(Error::Precondition(format!(
                "degree bound {bound} is below generator degree {max}"
            )));
        }
    }
    let mut b = SpanBuilder::new(action, generators.iter().cloned());
    if b.lowest_generator_degree().is_none() {
        return Ok(b.into_span());
    }
    while b.next_degree() <= bound {
        b.advance();
    }
    Ok(b.into_span())
}

/// The `A_2`-submodule generated by `generators`, computed through `bound`.
pub fn span_degrees(generators: &[PolyElement], bound: u32) -> Result<GradedSpan<PolyElement>> {
    close(SquaresAction, generators, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: u32) -> PolyElement {
        PolyElement::from_exponents(&[n])
    }

    // Brute force: the span of u^a inside F_2[u] is spanned by monomials, and
    // u^n is reachable iff some chain of single squares with odd binomials
    // leads there.
    fn reachable_powers(seeds: &[u32], bound: u32) -> Vec<u32> {
        let mut hit = vec![false; bound as usize + 1];
        for &s in seeds {
            hit[s as usize] = true;
        }
        for n in 1..=bound {
            if !hit[n as usize] {
                continue;
            }
            for i in 1..=n {
                let m = n + i;
                if m <= bound && crate::binomial::binomial_is_odd(n, i) {
                    hit[m as usize] = true;
                }
            }
        }
        (1..=bound).filter(|&n| hit[n as usize]).collect()
    }

    #[test]
    fn span_of_u_is_powers_of_two() {
        let span = span_degrees(&[u(1)], 300).unwrap();
        assert_eq!(span.occupied(), vec![1, 2, 4, 8, 16, 32, 64, 128, 256]);
        assert_eq!(span.computed_through(), Some(300));
    }

    #[test]
    fn empty_generators_give_empty_span() {
        let span = span_degrees(&[], 50).unwrap();
        assert!(span.occupied().is_empty());
    }

    #[test]
    fn span_of_first_three_powers() {
        let span = span_degrees(&[u(1), u(2), u(3)], 20).unwrap();
        let expected = reachable_powers(&[1, 2, 3], 20);
        assert_eq!(span.occupied(), expected);
        // u^7 is indecomposable: no square lands on it from below
        assert_eq!(expected, vec![1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 16, 17, 18, 20]);
    }

    #[test]
    fn bound_below_generator_is_rejected() {
        assert!(span_degrees(&[u(5)], 4).is_err());
    }

    #[test]
    fn membership_by_reduction() {
        // span of x1 x2 in degree 3: Sq^1(x1 x2) = x1^2 x2 + x1 x2^2
        let g = PolyElement::from_exponents(&[1, 1]);
        let span = span_degrees(&[g], 4).unwrap();
        assert_eq!(span.dim(3), 1);
        let inside = PolyElement::from_monomials(
            2,
            [BasicMonomial::new(vec![2, 1]), BasicMonomial::new(vec![1, 2])],
        )
        .unwrap();
        assert!(span.reduce(&inside).is_zero());
        assert!(!span.reduce(&PolyElement::from_exponents(&[2, 1])).is_zero());
        // degree 4: Sq^2(x1 x2) = x1^2 x2^2 only
        assert_eq!(span.dim(4), 1);
    }
}
