//! Change of basis from the Milnor basis to admissible compositions
//! `Sq^{i_1} Sq^{i_2} ... Sq^{i_k}` with `i_j >= 2 i_{j+1}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::milnor::{milnor_basis, MilnorElement, OperationSum};

/// An admissible composition, leftmost operation first. The empty sequence
/// is the identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Admissible(pub Vec<u32>);

impl Admissible {
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&i| u64::from(i)).sum()
    }

    /// Milnor-basis expansion of the composition.
    pub fn to_milnor(&self) -> OperationSum {
        let mut acc: OperationSum = MilnorElement::unit().into();
        for &i in &self.0 {
            acc = acc.mul(&MilnorElement::sq(i).into());
        }
        acc
    }
}

impl fmt::Display for Admissible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "Sq^{i}")?;
        }
        Ok(())
    }
}

/// Admissible sequences of degree `n`.
pub fn admissible_basis(n: u64) -> Vec<Admissible> {
    fn go(rest: u64, max_next: u64, cur: &mut Vec<u32>, out: &mut Vec<Admissible>) {
        if rest == 0 {
            out.push(Admissible(cur.clone()));
            return;
        }
        // the remaining tail after choosing i sums to at most i - 1
        for i in (1..=max_next.min(rest)).rev() {
            if rest - i > i.saturating_sub(1) {
                break;
            }
            cur.push(i as u32);
            go(rest - i, i / 2, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Degree-wise inverse of the admissible-to-Milnor change of basis.
#[derive(Clone, Debug)]
pub struct BasisChange {
    degree: u64,
    milnor: Vec<MilnorElement>,
    admissible: Vec<Admissible>,
    // columns of the inverse, indexed like `milnor`
    inverse: Vec<Vec<u32>>,
}

impl BasisChange {
    pub fn new(degree: u64) -> Result<Self> {
        let milnor = milnor_basis(degree);
        let admissible = admissible_basis(degree);
        if milnor.len() != admissible.len() {
            return Err(Error::Internal(format!(
                "degree {degree}: {} Milnor elements but {} admissibles",
                milnor.len(),
                admissible.len()
            )));
        }
        let index: BTreeMap<&MilnorElement, usize> =
            milnor.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let rows: Vec<Vec<u32>> = admissible
            .iter()
            .map(|a| {
                let mut v = vec![0u32; milnor.len()];
                for t in a.to_milnor().terms() {
                    v[index[t]] = 1;
                }
                v
            })
            .collect();
        let mut ech = Echelon::new(2, milnor.len());
        for r in &rows {
            if ech.insert(r).is_some() {
                return Err(Error::Internal(format!(
                    "admissible expansions are dependent in degree {degree}"
                )));
            }
        }
        let inverse = (0..milnor.len())
            .map(|i| {
                let mut target = vec![0u32; milnor.len()];
                target[i] = 1;
                ech.reduce(&target).combination
            })
            .collect();
        Ok(BasisChange { degree, milnor, admissible, inverse })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Writes a Milnor basis element of this degree as a sum of admissibles.
    pub fn to_admissible(&self, e: &MilnorElement) -> Result<Vec<Admissible>> {
        let i = self.milnor.binary_search(e).map_err(|_| {
            Error::Precondition(format!("{e} does not have degree {}", self.degree))
        })?;
        Ok(self.inverse[i]
            .iter()
            .zip(&self.admissible)
            .filter(|(&c, _)| c == 1)
            .map(|(_, a)| a.clone())
            .collect())
    }
}

/// Change of basis for every degree up to a bound, built once.
#[derive(Clone, Debug)]
pub struct BasisChangeTable {
    by_degree: Vec<BasisChange>,
}

impl BasisChangeTable {
    pub fn new(max_degree: u64) -> Result<Self> {
        let by_degree = (0..=max_degree).map(BasisChange::new).collect::<Result<_>>()?;
        Ok(BasisChangeTable { by_degree })
    }

    pub fn to_admissible(&self, e: &MilnorElement) -> Result<Vec<Admissible>> {
        let deg = e.degree();
        let bc = self.by_degree.get(deg as usize).ok_or(Error::ResourceBound {
            what: "degree",
            value: deg,
            limit: self.by_degree.len() as u64 - 1,
        })?;
        bc.to_admissible(e)
    }
}

/// Expresses `e` as a sum of admissible compositions, with the degree limited
/// by `max_degree`.
pub fn milnor_to_admissible(e: &MilnorElement, max_degree: u64) -> Result<Vec<Admissible>> {
    let deg = e.degree();
    if deg > max_degree {
        return Err(Error::ResourceBound { what: "degree", value: deg, limit: max_degree });
    }
    BasisChange::new(deg)?.to_admissible(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_counts_match_milnor() {
        for n in 0..30 {
            let adm = admissible_basis(n);
            assert_eq!(adm.len(), milnor_basis(n).len(), "degree {n}");
            for a in &adm {
                assert_eq!(a.degree(), n);
                assert!(a.0.windows(2).all(|w| w[0] >= 2 * w[1]));
            }
        }
    }

    #[test]
    fn examples() {
        let e = MilnorElement::new(vec![3]);
        assert_eq!(milnor_to_admissible(&e, 256).unwrap(), vec![Admissible(vec![3])]);
        let q1 = MilnorElement::new(vec![0, 1]);
        let mut got = milnor_to_admissible(&q1, 256).unwrap();
        got.sort();
        assert_eq!(got, vec![Admissible(vec![2, 1]), Admissible(vec![3])]);
        assert_eq!(
            milnor_to_admissible(&MilnorElement::unit(), 256).unwrap(),
            vec![Admissible(vec![])]
        );
    }

    #[test]
    fn round_trip_through_milnor() {
        let table = BasisChangeTable::new(20).unwrap();
        for n in 0..=20 {
            for e in milnor_basis(n) {
                let mut back = OperationSum::zero();
                for a in table.to_admissible(&e).unwrap() {
                    back = back.add(&a.to_milnor()).unwrap();
                }
                assert_eq!(back, OperationSum::from(e.clone()));
            }
        }
    }

    #[test]
    fn degree_limit() {
        let e = MilnorElement::new(vec![0, 0, 0, 1]);
        assert!(matches!(milnor_to_admissible(&e, 10), Err(Error::ResourceBound { .. })));
    }
}
