//! Severity-weighted scores and the multi-framework scorecard.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rules::Severity;
use crate::scan::Finding;

pub const BASELINE: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Grade {
    Secure,
    ReviewRequired,
    CriticalExposure,
    Broken,
}

impl Grade {
    /// Lower bounds are inclusive: 85, 60, 30.
    pub const fn from_score(score: u32) -> Grade {
        match score {
            85.. => Grade::Secure,
            60..=84 => Grade::ReviewRequired,
            30..=59 => Grade::CriticalExposure,
            _ => Grade::Broken,
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            Grade::Secure => "Secure",
            Grade::ReviewRequired => "Review Required",
            Grade::CriticalExposure => "Critical Exposure",
            Grade::Broken => "Broken",
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `max(0, 100 - 20*crit - 8*high - 3*med)` and its grade.
pub fn compute_score(crit: u32, high: u32, med: u32) -> (u32, Grade) {
    let penalty = crit
        .saturating_mul(Severity::Critical.weight())
        .saturating_add(high.saturating_mul(Severity::High.weight()))
        .saturating_add(med.saturating_mul(Severity::Medium.weight()));
    let score = BASELINE.saturating_sub(penalty);
    (score, Grade::from_score(score))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameworkScore {
    pub name: String,
    pub crit: u32,
    pub high: u32,
    pub med: u32,
    pub score: u32,
    pub grade: Grade,
}

impl FrameworkScore {
    /// Counts only findings that are neither mitigated nor filter-suppressed.
    pub fn from_findings(name: &str, findings: &[Finding]) -> Self {
        let (mut crit, mut high, mut med) = (0u32, 0u32, 0u32);
        for f in findings.iter().filter(|f| f.is_active()) {
            let slot = match f.severity {
                Severity::Critical => &mut crit,
                Severity::High => &mut high,
                Severity::Medium => &mut med,
            };
            *slot = slot.saturating_add(1);
        }
        let (score, grade) = compute_score(crit, high, med);
        FrameworkScore { name: name.to_string(), crit, high, med, score, grade }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub crit: u64,
    pub high: u64,
    pub med: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scorecard {
    /// Ascending by score, then by name.
    pub rows: Vec<FrameworkScore>,
    pub totals: Totals,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("duplicate framework name `{0}`")]
pub struct DuplicateName(pub String);

pub fn build_scorecard<'a, I>(trees: I) -> Result<Scorecard, DuplicateName>
where
    I: IntoIterator<Item = (&'a str, &'a [Finding])>,
{
    let mut seen = BTreeSet::new();
    let mut rows = Vec::new();
    for (name, findings) in trees {
        if !seen.insert(name) {
            return Err(DuplicateName(name.to_string()));
        }
        rows.push(FrameworkScore::from_findings(name, findings));
    }
    Ok(scorecard_from_rows(rows))
}

pub(crate) fn scorecard_from_rows(mut rows: Vec<FrameworkScore>) -> Scorecard {
    rows.sort_by(|a, b| a.score.cmp(&b.score).then_with(|| a.name.cmp(&b.name)));
    let totals = rows.iter().fold(Totals::default(), |t, r| Totals {
        crit: t.crit + u64::from(r.crit),
        high: t.high + u64::from(r.high),
        med: t.med + u64::from(r.med),
    });
    Scorecard { rows, totals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::Mitigation;
    use proptest::prelude::*;

    fn finding(severity: Severity, mitigated: bool, suppressed: bool) -> Finding {
        Finding {
            rule_id: "X".into(),
            cwe: 1,
            severity,
            path: "a".into(),
            line: 1,
            column: 1,
            snippet: String::new(),
            operand: None,
            mitigation: Mitigation::Unguarded,
            mitigated,
            suppressed_by_filter: suppressed.then(|| "test-path".to_string()),
            verdict: None,
            provenance: None,
        }
    }

    #[test]
    fn table_rows() {
        assert_eq!(compute_score(7, 59, 0), (0, Grade::Broken));
        assert_eq!(compute_score(0, 1, 1), (89, Grade::Secure));
        assert_eq!(compute_score(0, 1, 0), (92, Grade::Secure));
        assert_eq!(compute_score(0, 2, 2), (78, Grade::ReviewRequired));
        assert_eq!(compute_score(0, 3, 0), (76, Grade::ReviewRequired));
        assert_eq!(compute_score(0, 2, 0), (84, Grade::ReviewRequired));
        assert_eq!(compute_score(0, 0, 0), (100, Grade::Secure));
    }

    #[test]
    fn boundaries() {
        for (s, g) in [
            (85, Grade::Secure),
            (84, Grade::ReviewRequired),
            (60, Grade::ReviewRequired),
            (59, Grade::CriticalExposure),
            (30, Grade::CriticalExposure),
            (29, Grade::Broken),
            (0, Grade::Broken),
        ] {
            assert_eq!(Grade::from_score(s), g, "{s}");
        }
    }

    #[test]
    fn saturates() {
        assert_eq!(compute_score(u32::MAX, u32::MAX, u32::MAX), (0, Grade::Broken));
    }

    #[test]
    fn inactive_findings_do_not_count() {
        let fs = vec![
            finding(Severity::Critical, true, false),
            finding(Severity::High, false, true),
            finding(Severity::Medium, false, false),
        ];
        let row = FrameworkScore::from_findings("x", &fs);
        assert_eq!((row.crit, row.high, row.med, row.score), (0, 0, 1, 97));
    }

    #[test]
    fn scorecard_order_and_totals() {
        let high = [finding(Severity::High, false, false)];
        let none: Vec<Finding> = Vec::new();
        let card = build_scorecard([("b", &high[..]), ("c", &none[..]), ("a", &high[..])]).unwrap();
        let names: Vec<_> = card.rows.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["a", "b", "c"]);
        assert_eq!(card.totals, Totals { crit: 0, high: 2, med: 0 });
        assert_eq!(build_scorecard([("a", &none[..]), ("a", &none[..])]), Err(DuplicateName("a".into())));
        assert_eq!(build_scorecard(std::iter::empty()).unwrap(), Scorecard::default());
    }

    proptest! {
        #[test]
        fn monotone(c in 0u32..10, h in 0u32..20, m in 0u32..40, which in 0usize..3) {
            let (base, _) = compute_score(c, h, m);
            let bumped = match which {
                0 => compute_score(c + 1, h, m),
                1 => compute_score(c, h + 1, m),
                _ => compute_score(c, h, m + 1),
            };
            prop_assert!(bumped.0 <= base);
        }

        #[test]
        fn formula(c in 0u32..10, h in 0u32..20, m in 0u32..40) {
            let expect = (100i64 - 20 * i64::from(c) - 8 * i64::from(h) - 3 * i64::from(m)).max(0) as u32;
            prop_assert_eq!(compute_score(c, h, m).0, expect);
        }
    }
}
