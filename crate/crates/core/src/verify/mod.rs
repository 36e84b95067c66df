//! Proof obligations for rule classes and the engine that discharges them.

mod formula;
mod registry;
mod solver;

pub use formula::{parse_formula, Cmp, ConstraintFormula, FormulaError, FormulaErrorKind, Predicate, Term};
pub use registry::{run_obligations, Obligation, ObligationFormula, ProofRow, ProofTable, Registry};
pub use solver::{
    simulate_doubling_index, solve, solve_boolean, solve_within, BoolAssignment, BoolVar, BooleanFormula,
    DoublingIndex, Status, Verdict, Witness, BITS_TABLE_LEN,
};

use crate::rules::RuleSet;
use crate::scan::Finding;

/// Fills `verdict` on every finding whose rule links to an obligation.
pub fn annotate_findings(findings: &mut [Finding], rules: &RuleSet, registry: &Registry) {
    let mut cache = std::collections::BTreeMap::new();
    for finding in findings.iter_mut() {
        let obligation = rules.get(&finding.rule_id).and_then(|r| r.obligation.as_deref());
        finding.verdict = obligation
            .and_then(|id| *cache.entry(id.to_string()).or_insert_with(|| registry.get(id).map(|o| o.formula.solve())));
    }
}
