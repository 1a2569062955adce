//! Type-T certification, the conditions on filtration shifts, and verdicts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::odd::cond2_violations;

use super::description::ModuleDescription;
use super::gaps::{layer_occupancy, report_from_layers, Gap, GapReport, LayerOccupancy};

/// Smallest `δ >= 0` with `p^δ >= t`.
pub fn delta_for(prime: u32, t: usize) -> u32 {
    let mut delta = 0;
    let mut power = 1u64;
    while power < t as u64 {
        power *= u64::from(prime);
        delta += 1;
    }
    delta
}

/// Largest spacing index `J`: `j` runs over `1..=J` and `n_1, ..., n_{J+1}`
/// enter the threshold. Fractional counts are rounded up.
///
/// At `p = 2` the count is `1 + (d + δ - 1) 2^{d-2}`; at odd `p` it is
/// `1 + (d + δ)(p - 1)^2 p^{d-2}`.
pub fn j_range(prime: u32, d: usize, delta: u32) -> u64 {
    let d = d as u64;
    let delta = u64::from(delta);
    if prime == 2 {
        1 + ((d + delta - 1) << d).div_ceil(4)
    } else {
        let p = u64::from(prime);
        1 + ((d + delta) * (p - 1) * (p - 1) * p.pow(d as u32)).div_ceil(p * p)
    }
}

/// The fixed part of the threshold: `(m_t + 1) 2^{d+4}` at `p = 2`,
/// `2 (m_t + 1)(p - 1) p^{d+2}` at odd `p`.
pub fn base_threshold(prime: u32, d: usize, m_top: u32) -> u64 {
    let m1 = u64::from(m_top) + 1;
    if prime == 2 {
        m1 << (d + 4)
    } else {
        let p = u64::from(prime);
        2 * m1 * (p - 1) * p.pow(d as u32 + 2)
    }
}

/// Differences `m_j - m_i` that the filtration shifts must avoid.
pub fn forbidden_differences(prime: u32) -> Vec<u32> {
    if prime == 2 {
        vec![1, 2, 4, 8]
    } else {
        vec![1, 2 * (prime - 1)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionTable {
    /// `1` at the prime 2, `2` at odd primes.
    pub condition: u32,
    pub forbidden: Vec<u32>,
    /// `(m_i, m_j)` with a forbidden difference.
    pub violations: Vec<(u32, u32)>,
}

impl ConditionTable {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ConditionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return write!(f, "Condition {} holds", self.condition);
        }
        write!(f, "Condition {} violated: ", self.condition)?;
        for (k, (a, b)) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "difference {} (m = {a}, {b})", a.abs_diff(*b))?;
        }
        Ok(())
    }
}

/// No pairwise difference of the shifts equals 1, 2, 4 or 8.
pub fn condition1_check(ms: &[u32]) -> ConditionTable {
    condition_table(2, ms)
}

pub fn condition_table(prime: u32, ms: &[u32]) -> ConditionTable {
    let forbidden = forbidden_differences(prime);
    let violations = if prime == 2 {
        let mut v = Vec::new();
        for (a, &mi) in ms.iter().enumerate() {
            for &mj in &ms[a + 1..] {
                if forbidden.contains(&mi.abs_diff(mj)) {
                    v.push((mi, mj));
                }
            }
        }
        v
    } else {
        cond2_violations(ms, prime)
    };
    ConditionTable { condition: if prime == 2 { 1 } else { 2 }, forbidden, violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateLayer {
    pub m: u32,
    pub infinite: bool,
    /// `n_{1,i} < ... < n_{J+1,i}` for infinite layers, empty otherwise.
    pub first_degrees: Vec<u32>,
}

/// Everything needed to re-check a type-T gap without recomputing spans.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub prime: u32,
    pub d: usize,
    pub suspension: i64,
    pub filtration: bool,
    pub layers: Vec<CertificateLayer>,
    pub delta: u32,
    pub j_range: u64,
    pub base_threshold: u64,
    pub spacing_threshold: u64,
    pub threshold: u64,
    /// `min(m_i + n_{1,i})` over infinite layers, unsuspended.
    pub start_bound: u64,
    /// The witnessing gap, in suspended degrees.
    pub gap: Gap,
    /// Unsuspended occupied degrees of the whole module from `start_bound`
    /// through the upper end of the gap.
    pub window: Vec<u64>,
    pub condition: Option<ConditionTable>,
}

impl Certificate {
    /// Re-checks every inequality from the stored data alone.
    pub fn revalidate(&self) -> std::result::Result<(), String> {
        let fail = |msg: String| Err(msg);
        if self.layers.is_empty() {
            return fail("no layers".into());
        }
        if self.layers.windows(2).any(|w| w[0].m >= w[1].m) {
            return fail("layer shifts are not strictly increasing".into());
        }
        let delta = delta_for(self.prime, self.layers.len());
        if delta != self.delta {
            return fail(format!("delta {} should be {delta}", self.delta));
        }
        let j = j_range(self.prime, self.d, delta);
        if j != self.j_range {
            return fail(format!("j-range {} should be {j}", self.j_range));
        }
        let m_top = self.layers.last().map(|l| l.m).unwrap_or(0);
        let base = base_threshold(self.prime, self.d, m_top);
        if base != self.base_threshold {
            return fail(format!("base threshold {} should be {base}", self.base_threshold));
        }
        let mut spacing = 0u64;
        let mut start = None::<u64>;
        for l in self.layers.iter().filter(|l| l.infinite) {
            if l.first_degrees.len() as u64 != j + 1 {
                return fail(format!("layer m = {} lists {} degrees, need {}", l.m, l.first_degrees.len(), j + 1));
            }
            for w in l.first_degrees.windows(2) {
                if w[1] <= w[0] {
                    return fail(format!("layer m = {} degrees are not increasing", l.m));
                }
                spacing = spacing.max(u64::from(w[1] - w[0]));
            }
            let s = u64::from(l.m) + u64::from(l.first_degrees[0]);
            start = Some(start.map_or(s, |x| x.min(s)));
        }
        let Some(start) = start else {
            return fail("no infinite layer".into());
        };
        if spacing != self.spacing_threshold {
            return fail(format!("spacing threshold {} should be {spacing}", self.spacing_threshold));
        }
        if self.threshold != base.max(spacing) {
            return fail(format!("threshold {} should be {}", self.threshold, base.max(spacing)));
        }
        if start != self.start_bound {
            return fail(format!("start bound {} should be {start}", self.start_bound));
        }
        let s = self.gap.start - self.suspension;
        if s < start as i64 {
            return fail(format!("gap starts at {s}, below {start}"));
        }
        if self.gap.length < self.threshold {
            return fail(format!("gap length {} below threshold {}", self.gap.length, self.threshold));
        }
        let (s, top) = (s as u64, s as u64 + self.gap.length + 1);
        let occupied = |n: u64| self.window.binary_search(&n).is_ok();
        if !self.window.windows(2).all(|w| w[0] < w[1]) {
            return fail("window is not sorted".into());
        }
        if !occupied(s) || !occupied(top) {
            return fail("gap endpoints are not occupied".into());
        }
        if self.window.iter().any(|&n| n > s && n < top) {
            return fail("gap interior is occupied".into());
        }
        for l in self.layers.iter().filter(|l| l.infinite) {
            for &n in &l.first_degrees {
                let n = u64::from(l.m) + u64::from(n);
                if n >= start && n <= top && !occupied(n) {
                    return fail(format!("layer degree {n} missing from window"));
                }
            }
        }
        if self.filtration {
            let ms: Vec<u32> = self.layers.iter().map(|l| l.m).collect();
            let table = condition_table(self.prime, &ms);
            if self.condition.as_ref() != Some(&table) || !table.holds() {
                return fail(format!("{table}"));
            }
        } else if self.condition.is_some() {
            return fail("span certificates carry no condition table".into());
        }
        Ok(())
    }
}

/// Result of a type-T search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TypeT {
    Certified(Certificate),
    Absent(String),
}

pub(crate) fn type_t_search(m: &ModuleDescription, layers: &[LayerOccupancy], report: &GapReport) -> TypeT {
    let t = layers.len();
    let delta = delta_for(m.prime, t);
    let j = j_range(m.prime, m.d, delta);
    let m_top = layers.last().map(|l| l.m).unwrap_or(0);
    let base = base_threshold(m.prime, m.d, m_top);
    if report.occupied.is_empty() {
        return TypeT::Absent("trivial module".into());
    }
    let mut spacing = 0u64;
    let mut start = None::<u64>;
    let mut cert_layers = Vec::new();
    for l in layers {
        if !l.infinite {
            cert_layers.push(CertificateLayer { m: l.m, infinite: false, first_degrees: Vec::new() });
            continue;
        }
        if (l.degrees.len() as u64) < j + 1 {
            return TypeT::Absent(format!(
                "bound truncation: layer m = {} has {} occupied degrees within bound, {} needed",
                l.m,
                l.degrees.len(),
                j + 1
            ));
        }
        let first: Vec<u32> = l.degrees[..=j as usize].to_vec();
        for w in first.windows(2) {
            spacing = spacing.max(u64::from(w[1] - w[0]));
        }
        let s = u64::from(l.m) + u64::from(first[0]);
        start = Some(start.map_or(s, |x| x.min(s)));
        cert_layers.push(CertificateLayer { m: l.m, infinite: true, first_degrees: first });
    }
    let Some(start) = start else {
        return TypeT::Absent("no infinite layer within bound".into());
    };
    let threshold = base.max(spacing);
    let start_susp = start as i64 + m.suspension;
    let found = report.gaps.iter().find(|g| g.start >= start_susp && g.length >= threshold);
    let Some(&gap) = found else {
        let reason = if report.bound_truncated { "bound truncation before qualifying gap" } else { "no qualifying gap" };
        return TypeT::Absent(reason.into());
    };
    let top = gap.end() + 1;
    let window = report
        .occupied
        .iter()
        .filter(|&&n| n >= start_susp && n <= top)
        .map(|&n| (n - m.suspension) as u64)
        .collect();
    let condition = m.is_filtration().then(|| condition_table(m.prime, &layers.iter().map(|l| l.m).collect::<Vec<_>>()));
    TypeT::Certified(Certificate {
        prime: m.prime,
        d: m.d,
        suspension: m.suspension,
        filtration: m.is_filtration(),
        layers: cert_layers,
        delta,
        j_range: j,
        base_threshold: base,
        spacing_threshold: spacing,
        threshold,
        start_bound: start,
        gap,
        window,
        condition,
    })
}

fn require(m: &ModuleDescription, filtration: bool, prime2: bool) -> Result<()> {
    if m.is_filtration() != filtration {
        let want = if filtration { "a filtration" } else { "a span" };
        return Err(Error::Precondition(format!("this check needs {want} description")));
    }
    if prime2 && m.prime != 2 {
        return Err(Error::Precondition(format!("this check works at p = 2, got p = {}", m.prime)));
    }
    Ok(())
}

/// Type-T search for a span at `p = 2`.
pub fn type_t_check(m: &ModuleDescription) -> Result<TypeT> {
    require(m, false, true)?;
    let layers = layer_occupancy(m)?;
    let report = report_from_layers(m, &layers);
    Ok(type_t_search(m, &layers, &report))
}

/// Type-T search for a filtration at `p = 2`.
pub fn type_t_filtration_check(m: &ModuleDescription) -> Result<TypeT> {
    require(m, true, true)?;
    let layers = layer_occupancy(m)?;
    let report = report_from_layers(m, &layers);
    Ok(type_t_search(m, &layers, &report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    NotRealizable { certificate: Certificate },
    /// Never a claim of realizability.
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub gaps: GapReport,
    pub layers: Vec<LayerOccupancy>,
}

impl Verdict {
    pub fn is_not_realizable(&self) -> bool {
        matches!(self.outcome, Outcome::NotRealizable { .. })
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            Outcome::NotRealizable { certificate } => Some(certificate),
            Outcome::Inconclusive { .. } => None,
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match &self.outcome {
            Outcome::NotRealizable { .. } => None,
            Outcome::Inconclusive { reason } => Some(reason),
        }
    }
}

fn verdict_any(m: &ModuleDescription) -> Result<Verdict> {
    let layers = layer_occupancy(m)?;
    let gaps = report_from_layers(m, &layers);
    let outcome = match type_t_search(m, &layers, &gaps) {
        TypeT::Absent(reason) => Outcome::Inconclusive { reason },
        TypeT::Certified(certificate) => match &certificate.condition {
            Some(table) if !table.holds() => Outcome::Inconclusive { reason: table.to_string() },
            _ => Outcome::NotRealizable { certificate },
        },
    };
    Ok(Verdict { outcome, gaps, layers })
}

/// The verdict at `p = 2`: a type-T gap, plus Condition 1 for filtrations.
pub fn verdict(m: &ModuleDescription) -> Result<Verdict> {
    if m.prime != 2 {
        return Err(Error::Precondition(format!("verdict works at p = 2; use verdict_odd for p = {}", m.prime)));
    }
    verdict_any(m)
}

/// The verdict at an odd prime, with the odd thresholds and Condition 2.
pub fn verdict_odd(m: &ModuleDescription) -> Result<Verdict> {
    if m.prime == 2 {
        return Err(Error::Precondition("verdict_odd needs an odd prime".into()));
    }
    verdict_any(m)
}

/// Dispatches on the prime.
pub fn check(m: &ModuleDescription) -> Result<Verdict> {
    verdict_any(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deltas() {
        assert_eq!(delta_for(2, 1), 0);
        assert_eq!(delta_for(2, 2), 1);
        assert_eq!(delta_for(2, 3), 2);
        assert_eq!(delta_for(2, 4), 2);
        assert_eq!(delta_for(3, 3), 1);
        assert_eq!(delta_for(3, 4), 2);
    }

    #[test]
    fn j_ranges() {
        // 1 + (d - 1) 2^{d-2} for a span at p = 2
        assert_eq!(j_range(2, 1, 0), 1);
        assert_eq!(j_range(2, 2, 0), 2);
        assert_eq!(j_range(2, 3, 0), 5);
        assert_eq!(j_range(2, 4, 0), 13);
        // d = 1, δ = 1: 1 + 1/2 rounds up to 2
        assert_eq!(j_range(2, 1, 1), 2);
        // p = 3, d = 1, δ = 0: 1 + 4/3 rounds up to 3
        assert_eq!(j_range(3, 1, 0), 3);
        assert_eq!(j_range(3, 2, 0), 9);
    }

    #[test]
    fn bases() {
        assert_eq!(base_threshold(2, 1, 0), 32);
        assert_eq!(base_threshold(2, 1, 3), 128);
        assert_eq!(base_threshold(3, 1, 0), 108);
    }

    #[test]
    fn condition1() {
        assert!(condition1_check(&[0, 3]).holds());
        assert!(!condition1_check(&[0, 1]).holds());
        let t = condition1_check(&[0, 3, 8]);
        assert_eq!(t.violations, vec![(0, 8)]);
        assert_eq!(t.to_string(), "Condition 1 violated: difference 8 (m = 0, 8)");
        assert!(!condition_table(3, &[0, 4]).holds());
        assert!(condition_table(3, &[0, 5]).holds());
    }
}
