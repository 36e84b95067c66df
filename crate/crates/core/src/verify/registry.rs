use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::formula::{parse_formula, ConstraintFormula};
use super::solver::{solve, solve_boolean, BoolAssignment, BoolVar, BooleanFormula, Status, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "formula", rename_all = "snake_case")]
pub enum ObligationFormula {
    Bitvector(ConstraintFormula),
    Boolean(BooleanFormula),
}

impl ObligationFormula {
    pub fn solve(&self) -> Verdict {
        match self {
            ObligationFormula::Bitvector(f) => solve(f),
            ObligationFormula::Boolean(f) => solve_boolean(f),
        }
    }

    /// ASCII rendering; bitvector formulas re-parse from it.
    pub fn text(&self) -> String {
        match self {
            ObligationFormula::Bitvector(f) => f.to_string(),
            ObligationFormula::Boolean(f) => f.to_string(),
        }
    }

    pub fn pretty(&self) -> String {
        match self {
            ObligationFormula::Bitvector(f) => f.pretty(),
            ObligationFormula::Boolean(f) => f.pretty(),
        }
    }
}

/// A satisfiability question attached to a rule class, with the verdict it
/// is expected to produce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obligation {
    pub id: String,
    /// Short source pattern the obligation models, e.g. `np.zeros(2**n)`.
    pub pattern: String,
    pub formula: ObligationFormula,
    pub expected: Verdict,
    pub note: String,
    /// True for rows that pad the table by analogy rather than mirroring a
    /// published proof one to one.
    #[serde(default)]
    pub reconstructed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    obligations: BTreeMap<String, Obligation>,
}

impl Registry {
    pub fn new(obligations: impl IntoIterator<Item = Obligation>) -> Self {
        Registry { obligations: obligations.into_iter().map(|o| (o.id.clone(), o)).collect() }
    }

    pub fn get(&self, id: &str) -> Option<&Obligation> {
        self.obligations.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.obligations.contains_key(id)
    }

    /// Obligations in id order.
    pub fn iter(&self) -> impl Iterator<Item = &Obligation> {
        self.obligations.values()
    }

    pub fn len(&self) -> usize {
        self.obligations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obligations.is_empty()
    }

    pub fn builtin() -> Self {
        let bv = |id: &str, pattern: &str, text: &str, witness: u64, note: &str| Obligation {
            id: id.into(),
            pattern: pattern.into(),
            formula: ObligationFormula::Bitvector(parse_formula(text).expect("builtin obligation formulas parse")),
            expected: Verdict::sat_at(witness),
            note: note.into(),
            reconstructed: false,
        };
        let injection = |id: &str, pattern: &str, sanitized: bool, note: &str, reconstructed: bool| {
            let formula = BooleanFormula {
                attacker_controls_string: BoolVar::Fixed(true),
                qasm_sanitized: BoolVar::Fixed(sanitized),
            };
            let expected = if sanitized {
                Verdict::unsat()
            } else {
                Verdict::sat(Witness::Bool(BoolAssignment { attacker_controls_string: true, qasm_sanitized: false }))
            };
            Obligation {
                id: id.into(),
                pattern: pattern.into(),
                formula: ObligationFormula::Boolean(formula),
                expected,
                note: note.into(),
                reconstructed,
            }
        };
        Registry::new([
            bv("QAI-001", "BITS[num_qubits]", "n >= 64", 64, "64-entry BITS table indexed by qubit count"),
            bv("QAI-002", "1ULL << (num_qubits * 2)", "2*n >= 64", 32, "shift by doubled qubit count reaches 64"),
            bv(
                "QAI-003",
                "set_num_qubits(2 * num_qubits)",
                "n < 64 && 2*n >= 64",
                32,
                "in-range qubit count doubled past the BITS table",
            ),
            bv("QAI-004", "1ULL << (num_qubits + 1)", "n + 1 >= 64", 63, "shift by successor of qubit count"),
            bv("QAI-005", "1ULL << num_qubits", "n >= 64", 64, "direct shift by qubit count"),
            bv("QAI-PY-001", "np.zeros(2**n)", "n >= 40", 40, "statevector allocation of 16 TB or more"),
            bv("QAI-PY-002", "range(2**n)", "n >= 30", 30, "loop of 10^9 or more iterations"),
            bv(
                "QAI-PY-003",
                "2**(2*n) density matrix",
                "n < 64 && 2*n >= 64",
                32,
                "density-matrix exponent crosses 64 bits",
            ),
            bv("QAI-PY-004", "shape=(2**n,...)", "n >= 30", 30, "matrix dimension from exponential shape"),
            injection(
                "QAI-QA-001",
                "from_qasm_str(user_input)",
                false,
                "attacker-controlled QASM reaches the parser unsanitized",
                false,
            ),
            injection(
                "QAI-QA-001-mitigated",
                "from_qasm_str(validate(user_input))",
                true,
                "allowlist validator in front of the parser",
                false,
            ),
            injection(
                "QAI-DS-001",
                "pickle.load(f)",
                false,
                "attacker-supplied pickle reaches the loader without integrity check",
                true,
            ),
            injection(
                "QAI-DS-001-mitigated",
                "pickle.load(verified(f))",
                true,
                "integrity-checked input in front of the loader",
                true,
            ),
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofRow {
    pub id: String,
    pub pattern: String,
    pub formula: String,
    pub constraint: String,
    pub status: Status,
    pub witness: Option<Witness>,
    pub expected: Verdict,
    pub matches: bool,
    pub reconstructed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTable {
    pub rows: Vec<ProofRow>,
}

impl ProofTable {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }

    pub fn matching(&self) -> usize {
        self.rows.iter().filter(|r| r.matches).count()
    }

    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }
}

/// Discharges every obligation, in id order.
pub fn run_obligations(registry: &Registry) -> ProofTable {
    let rows = registry
        .iter()
        .map(|o| {
            let verdict = o.formula.solve();
            ProofRow {
                id: o.id.clone(),
                pattern: o.pattern.clone(),
                formula: o.formula.text(),
                constraint: o.formula.pretty(),
                status: verdict.status,
                witness: verdict.witness,
                expected: o.expected,
                matches: verdict == o.expected,
                reconstructed: o.reconstructed,
            }
        })
        .collect();
    ProofTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness_of(table: &ProofTable, id: &str) -> Option<Witness> {
        table.rows.iter().find(|r| r.id == id).and_then(|r| r.witness)
    }

    #[test]
    fn builtin_table_matches_expectations() {
        let table = run_obligations(&Registry::builtin());
        assert_eq!(table.rows.len(), 13);
        assert!(table.all_match(), "{table:#?}");
        assert_eq!(table.count(Status::Sat), 11);
        let unsat: Vec<_> = table.rows.iter().filter(|r| r.status == Status::Unsat).map(|r| r.id.as_str()).collect();
        assert_eq!(unsat, ["QAI-DS-001-mitigated", "QAI-QA-001-mitigated"]);
    }

    #[test]
    fn rows_sorted_by_id() {
        let table = run_obligations(&Registry::builtin());
        let ids: Vec<_> = table.rows.iter().map(|r| r.id.clone()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn doubling_obligations_share_witness_32() {
        let table = run_obligations(&Registry::builtin());
        for id in ["QAI-002", "QAI-003", "QAI-PY-003"] {
            assert_eq!(witness_of(&table, id), Some(Witness::Int(32)), "{id}");
        }
    }

    #[test]
    fn wrong_expectation_is_flagged() {
        let mut o = Registry::builtin().get("QAI-PY-001").unwrap().clone();
        o.expected = Verdict::sat_at(41);
        let table = run_obligations(&Registry::new([o]));
        assert_eq!(table.rows.len(), 1);
        assert!(!table.rows[0].matches);
        assert_eq!(table.rows[0].witness, Some(Witness::Int(40)));
    }

    #[test]
    fn empty_registry_gives_empty_table() {
        assert!(run_obligations(&Registry::default()).rows.is_empty());
    }

    #[test]
    fn obligation_serde_round_trip() {
        let reg = Registry::builtin();
        for o in reg.iter() {
            let json = serde_json::to_string(o).unwrap();
            let back: Obligation = serde_json::from_str(&json).unwrap();
            assert_eq!(&back, o);
        }
    }
}
