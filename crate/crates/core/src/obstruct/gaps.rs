//! Occupied degrees and gaps.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::expr::Element;
use crate::odd::{OddAction, OddElement};
use crate::span::{close, SquaresAction};
use crate::bv::PolyElement;

use super::description::ModuleDescription;

/// The interval `(start, start + length]`: both `start` and
/// `start + length + 1` are occupied, everything strictly between is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    pub start: i64,
    pub length: u64,
}

impl Gap {
    pub fn end(&self) -> i64 {
        self.start + self.length as i64
    }
}

impl std::fmt::Display for Gap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{}]", self.start, self.end())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    /// Occupied degrees after suspension, ascending.
    pub occupied: Vec<i64>,
    pub gaps: Vec<Gap>,
    /// Last degree examined, after suspension.
    pub bound: i64,
    /// The last occupied degree lies below the bound, so a gap may still be
    /// opening at the top.
    pub bound_truncated: bool,
}

impl GapReport {
    pub fn from_occupied(occupied: Vec<i64>, bound: i64) -> Self {
        let gaps = occupied
            .windows(2)
            .filter(|w| w[1] - w[0] >= 2)
            .map(|w| Gap { start: w[0], length: (w[1] - w[0] - 1) as u64 })
            .collect();
        let bound_truncated = occupied.last().is_none_or(|&last| last < bound);
        GapReport { occupied, gaps, bound, bound_truncated }
    }

    pub fn is_occupied(&self, degree: i64) -> bool {
        self.occupied.binary_search(&degree).is_ok()
    }
}

/// Runs `[first, length]` of consecutive occupied degrees.
pub fn run_length(occupied: &[i64]) -> Vec<(i64, u64)> {
    let mut runs: Vec<(i64, u64)> = Vec::new();
    for &n in occupied {
        match runs.last_mut() {
            Some((start, len)) if *start + *len as i64 == n => *len += 1,
            _ => runs.push((n, 1)),
        }
    }
    runs
}

/// Occupancy of one reduced layer `R_m`, in its own grading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerOccupancy {
    pub m: u32,
    /// `R_m` is computed in degrees `<= degree_bound - m`.
    pub computed_through: u32,
    pub degrees: Vec<u32>,
    /// Still growing at the bound: some occupied degree `n` has
    /// `2n > computed_through`, so the top operation leaves the window.
    pub infinite: bool,
}

pub(crate) fn occupied_degrees(generators: &[Element], prime: u32, bound: u32) -> Result<Vec<u32>> {
    if prime == 2 {
        let gens: Vec<PolyElement> = generators
            .iter()
            .filter_map(|g| match g {
                Element::Mod2(x) => Some(x.clone()),
                Element::Odd(_) => None,
            })
            .collect();
        Ok(close(SquaresAction, &gens, bound)?.occupied())
    } else {
        let gens: Vec<OddElement> = generators
            .iter()
            .filter_map(|g| match g {
                Element::Odd(x) => Some(x.clone()),
                Element::Mod2(_) => None,
            })
            .collect();
        Ok(close(OddAction { p: prime }, &gens, bound)?.occupied())
    }
}

pub fn layer_occupancy(m: &ModuleDescription) -> Result<Vec<LayerOccupancy>> {
    m.validate()?;
    m.layers()
        .into_iter()
        .map(|(shift, gens)| {
            let through = m.degree_bound - shift;
            let degrees = occupied_degrees(gens, m.prime, through)?;
            let infinite = degrees.iter().any(|&n| 2 * u64::from(n) > u64::from(through));
            Ok(LayerOccupancy { m: shift, computed_through: through, degrees, infinite })
        })
        .collect()
}

pub(crate) fn report_from_layers(m: &ModuleDescription, layers: &[LayerOccupancy]) -> GapReport {
    let mut all: Vec<i64> = layers
        .iter()
        .flat_map(|l| l.degrees.iter().map(move |&n| i64::from(n) + i64::from(l.m) + m.suspension))
        .collect();
    all.sort_unstable();
    all.dedup();
    GapReport::from_occupied(all, i64::from(m.degree_bound) + m.suspension)
}

/// Occupied degrees and gaps of the module, through its degree bound.
pub fn gap_scan(m: &ModuleDescription) -> Result<GapReport> {
    let layers = layer_occupancy(m)?;
    Ok(report_from_layers(m, &layers))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaps_between_occupied_degrees() {
        let r = GapReport::from_occupied(vec![1, 2, 4, 8], 10);
        assert_eq!(r.gaps, vec![Gap { start: 2, length: 1 }, Gap { start: 4, length: 3 }]);
        assert!(r.bound_truncated);
        let r = GapReport::from_occupied(vec![1, 2, 3], 3);
        assert!(r.gaps.is_empty());
        assert!(!r.bound_truncated);
        assert!(GapReport::from_occupied(vec![], 3).bound_truncated);
        assert_eq!(Gap { start: 64, length: 63 }.to_string(), "(64,127]");
    }

    #[test]
    fn runs() {
        assert_eq!(run_length(&[1, 2, 3, 5, 8, 9]), vec![(1, 3), (5, 1), (8, 2)]);
        assert!(run_length(&[]).is_empty());
    }
}
