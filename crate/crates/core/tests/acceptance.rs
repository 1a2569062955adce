//! Acceptance run: one line per criterion, with the time budget pinned next
//! to each. Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use steenrod_core::milnor::{qts_milnor, MilnorConfig, MilnorElement, OperationSum};
use steenrod_core::obstruct::{
    adams_check, check, gap_scan, ModuleDescription, Outcome, FiniteModuleTable, Gap,
};
use steenrod_core::suites::{self, SuiteReport, DEFAULT_SEED};

const HOPF: &str = include_str!("../../../data/hopf_span.mod");
const FULL: &str = include_str!("../../../data/full_polynomial.mod");
const FILTRATION_0_3: &str = include_str!("../../../data/filtration_0_3.mod");
const FILTRATION_0_1: &str = include_str!("../../../data/filtration_0_1.mod");
const ADAMS_SQ16: &str = include_str!("../../../data/adams_sq16.table");
const ADAMS_SQ8: &str = include_str!("../../../data/adams_sq8.table");

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sum(terms: &[&[u32]]) -> OperationSum {
    OperationSum::from_terms(terms.iter().map(|t| MilnorElement::new(t.to_vec()))).unwrap()
}

fn suite_verdict(r: &SuiteReport) -> Verdict {
    let summary: Vec<String> =
        r.checks.iter().map(|c| format!("{}: {}/{} failed", c.name, c.failures, c.cases)).collect();
    if r.passed() {
        Ok(summary.join("; "))
    } else {
        Err(format!("{r}"))
    }
}

/// Degrees `n <= bound` reachable from `seeds` in `F_2[u]` by single squares
/// with odd binomial coefficient; `C(n, i)` is odd iff `i & n == i`.
fn reachable_powers(seeds: &[u32], bound: u32) -> Vec<i64> {
    let mut hit = vec![false; bound as usize + 1];
    for &s in seeds {
        hit[s as usize] = true;
    }
    for n in 1..=bound {
        if hit[n as usize] {
            for i in (1..=n).filter(|&i| i & n == i) {
                if n + i <= bound {
                    hit[(n + i) as usize] = true;
                }
            }
        }
    }
    (1..=bound).filter(|&n| hit[n as usize]).map(i64::from).collect()
}

fn load(text: &str) -> Result<ModuleDescription, String> {
    ModuleDescription::from_toml_str(text).map_err(|e| e.to_string())
}

fn c1_appendix_fixtures() -> Verdict {
    let cfg = MilnorConfig::default();
    let cases: [(u32, u32, OperationSum); 4] = [
        (1, 1, sum(&[&[0, 2]])),
        (1, 2, sum(&[&[0, 4], &[3, 3]])),
        (1, 3, sum(&[&[0, 8], &[6, 6], &[3, 7]])),
        (2, 1, sum(&[&[0, 0, 2], &[7, 0, 1], &[4, 1, 1]])),
    ];
    for (t, s, expected) in &cases {
        let q = qts_milnor(*t, *s, &cfg).map_err(|e| e.to_string())?;
        ensure(&q == expected, || format!("Q_{t}^{s} = {q}, expected {expected}"))?;
    }
    Ok("Q_1^1, Q_1^2, Q_1^3, Q_2^1 bit-exact".into())
}

fn c2_milnor_primitives() -> Verdict {
    let cfg = MilnorConfig::default();
    for t in 0..=4u32 {
        let q = qts_milnor(t, 0, &cfg).map_err(|e| e.to_string())?;
        let mut e = vec![0u32; t as usize + 1];
        e[t as usize] = 1;
        let expected: OperationSum = MilnorElement::new(e).into();
        ensure(q == expected, || format!("Q_{t} = {q}, expected {expected}"))?;
    }
    Ok("Q_t = P_{t+1}^0 for t <= 4".into())
}

fn c3_pr1() -> Verdict {
    suite_verdict(&suites::pr1_suite())
}

fn c4_pr2() -> Verdict {
    let r = suites::pr2_suite(DEFAULT_SEED, 10_000);
    let n = r.check("annihilation instances").map_or(0, |c| c.cases);
    ensure(n >= 10_000, || format!("only {n} instances"))?;
    suite_verdict(&r)
}

fn c5_co1() -> Verdict {
    suite_verdict(&suites::co1_suite(3, 9, 3))
}

fn c6_co2() -> Verdict {
    suite_verdict(&suites::co2_suite(DEFAULT_SEED, 200, 512).map_err(|e| e.to_string())?)
}

fn c7_hopf() -> Verdict {
    let m = load(HOPF)?;
    let expected: Vec<i64> = (0..=8).map(|k| 1i64 << k).collect();
    ensure(reachable_powers(&[1], 300) == expected, || "oracle disagrees with the fixture".into())?;
    let gaps = gap_scan(&m).map_err(|e| e.to_string())?;
    ensure(gaps.occupied == expected, || format!("occupied {:?}", gaps.occupied))?;
    let v = check(&m).map_err(|e| e.to_string())?;
    let Outcome::NotRealizable { certificate: c } = &v.outcome else {
        return Err(format!("verdict {:?}", v.outcome));
    };
    ensure(c.threshold == 32, || format!("l* = {}", c.threshold))?;
    ensure(c.gap == Gap { start: 64, length: 63 }, || format!("gap {}", c.gap))?;
    c.revalidate()?;
    Ok(format!("occupied 2^0..2^8, l* = {}, gap {}, NotRealizable", c.threshold, c.gap))
}

fn c8_negative_control() -> Verdict {
    let m = load(FULL)?;
    let gaps = gap_scan(&m).map_err(|e| e.to_string())?;
    let all: Vec<i64> = (1..=300).collect();
    ensure(reachable_powers(&[1, 3, 7, 15, 31, 63, 127, 255], 300) == all, || "oracle: not all degrees".into())?;
    ensure(gaps.occupied == all, || "span misses degrees".into())?;
    let v = check(&m).map_err(|e| e.to_string())?;
    ensure(v.reason() == Some("no qualifying gap"), || format!("verdict {:?}", v.outcome))?;
    Ok("Inconclusive: no qualifying gap".into())
}

fn c9_filtration() -> Verdict {
    let m = load(FILTRATION_0_3)?;
    let v = check(&m).map_err(|e| e.to_string())?;
    let Outcome::NotRealizable { certificate: c } = &v.outcome else {
        return Err(format!("verdict {:?}", v.outcome));
    };
    ensure(c.condition.as_ref().is_some_and(|t| t.holds()), || "Condition 1 not recorded as holding".into())?;
    ensure(c.threshold == 128, || format!("l* = {}", c.threshold))?;
    ensure(c.gap == Gap { start: 259, length: 252 }, || format!("gap {}", c.gap))?;
    c.revalidate()?;
    let flipped = check(&load(FILTRATION_0_1)?).map_err(|e| e.to_string())?;
    let reason = flipped.reason().unwrap_or_default().to_string();
    ensure(
        !flipped.is_not_realizable() && reason.contains("Condition 1") && reason.contains("difference 1"),
        || format!("mutated layers gave {:?}", flipped.outcome),
    )?;
    Ok(format!("l* = 128, gap {}; (0,1) layers: {reason}", c.gap))
}

fn c10_adams() -> Verdict {
    let t16 = FiniteModuleTable::from_toml_str(ADAMS_SQ16).map_err(|e| e.to_string())?;
    let v = adams_check(&t16).map_err(|e| e.to_string())?;
    ensure(v.len() == 1 && v[0].k == 4, || format!("Sq^16 table: {v:?}"))?;
    let t8 = FiniteModuleTable::from_toml_str(ADAMS_SQ8).map_err(|e| e.to_string())?;
    let v8 = adams_check(&t8).map_err(|e| e.to_string())?;
    ensure(v8.is_empty(), || format!("Sq^8 table: {v8:?}"))?;
    Ok("Sq^16: one violation at k = 4; Sq^8: none".into())
}

fn c11_odd() -> Verdict {
    suite_verdict(&suites::odd_suite().map_err(|e| e.to_string())?)
}

fn c12_oracle() -> Verdict {
    suite_verdict(&suites::oracle_suite(16).map_err(|e| e.to_string())?)
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Verdict); 12] = [
        (1, "appendix fixtures", 1, c1_appendix_fixtures),
        (2, "Milnor primitives", 1, c2_milnor_primitives),
        (3, "Le1 / Pr1 property suite", 60, c3_pr1),
        (4, "Pr2 bound on random classes", 300, c4_pr2),
        (5, "Co1 exhaustive", 300, c5_co1),
        (6, "Co2 random gaps", 300, c6_co2),
        (7, "Hopf invariant one reproduction", 10, c7_hopf),
        (8, "negative control F_2[u]", 10, c8_negative_control),
        (9, "filtration case", 30, c9_filtration),
        (10, "Adams table check", 1, c10_adams),
        (11, "odd prime identities and Le5", 300, c11_odd),
        (12, "Milnor product oracle", 600, c12_oracle),
    ];
    let mut failed = 0;
    for (id, title, budget, run) in criteria {
        let budget = Duration::from_secs(budget);
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let verdict = match verdict {
            Ok(detail) if elapsed > budget => Err(format!("over budget ({detail})")),
            v => v,
        };
        let (status, detail) = match &verdict {
            Ok(d) => ("PASS", d.as_str()),
            Err(e) => ("FAIL", e.as_str()),
        };
        println!("criterion {id:>2} {status} [{:>8.3}s / {}s] {title}: {detail}", elapsed.as_secs_f64(), budget.as_secs());
        if verdict.is_err() {
            failed += 1;
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
