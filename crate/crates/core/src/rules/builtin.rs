use super::{ContextPredicate, Matcher, Rule, Scope, Severity, Target};

use ContextPredicate::*;

// Dotted Python name such as `num_qubits` or `self.n`.
const PY_NAME: &str = r"[A-Za-z_]\w*(?:\.[A-Za-z_]\w*)*";
const C_NAME: &str = r"[A-Za-z_]\w*";
const ALLOC: &str = r"\b(?:np|numpy|jnp|cp|xp|paddle|torch|tf)\.(?:zeros|ones|empty|full|eye|identity)";

struct Spec {
    id: &'static str,
    cwe: u32,
    severity: Severity,
    scope: Scope,
    pattern: String,
    predicates: &'static [ContextPredicate],
    obligation: Option<&'static str>,
    target: Target,
    description: &'static str,
}

impl Spec {
    fn build(self) -> Rule {
        Rule {
            id: self.id.into(),
            cwe: self.cwe,
            severity: self.severity,
            scope: self.scope,
            matcher: Matcher::new(&self.pattern)
                .unwrap_or_else(|e| panic!("builtin pattern {} does not compile: {e}", self.id)),
            predicates: self.predicates.to_vec(),
            obligation: self.obligation.map(str::to_string),
            target: self.target,
            description: self.description.into(),
        }
    }
}

fn cpp(id: &'static str, cwe: u32, severity: Severity, pattern: String, description: &'static str) -> Spec {
    Spec {
        id,
        cwe,
        severity,
        scope: Scope::Cpp,
        pattern,
        predicates: &[],
        obligation: Some(id),
        target: Target::Call,
        description,
    }
}

fn py(id: &'static str, cwe: u32, severity: Severity, pattern: String, description: &'static str) -> Spec {
    Spec {
        id,
        cwe,
        severity,
        scope: Scope::Python,
        pattern,
        predicates: &[],
        obligation: None,
        target: Target::Call,
        description,
    }
}

pub(super) fn rules() -> Vec<Rule> {
    use Severity::*;
    let pow2 = |group: &str| format!(r"2\s*\*\*\s*\(?\s*(?P<{group}>{PY_NAME})");
    let specs = vec![
        // C++ memory corruption.
        cpp(
            "QAI-001",
            125,
            Critical,
            format!(r"\bBITS\s*\[\s*(?P<n>{C_NAME})\s*\]"),
            "Fixed 64-entry BITS table indexed by an unchecked qubit count",
        ),
        cpp(
            "QAI-002",
            190,
            Critical,
            format!(r"<<\s*\(\s*(?:(?P<n>{C_NAME})\s*\*\s*2|2\s*\*\s*(?P<n2>{C_NAME}))\s*\)"),
            "Shift amount derived from twice the qubit count; undefined at 32 qubits",
        ),
        cpp(
            "QAI-003",
            190,
            Critical,
            format!(r"\bset_num_qubits\s*\(\s*(?:2\s*\*\s*(?P<n>{C_NAME})|(?P<n2>{C_NAME})\s*\*\s*2)\s*\)"),
            "Qubit count doubled before dispatch to the base allocator (overflow into out-of-bounds read)",
        ),
        cpp(
            "QAI-004",
            190,
            High,
            format!(r"<<\s*\(\s*(?P<n>{C_NAME})\s*\+\s*1\s*\)"),
            "Shift by qubit count plus one; undefined at 63 qubits",
        ),
        cpp(
            "QAI-005",
            190,
            High,
            format!(
                r"\b1(?:ULL|ull|UL|ul|LL|ll|U|u|L|l)?\s*<<\s*(?P<n>{C_NAME})\s*(?:[)\];,+\-<>=&|^?:}}]|$)"
            ),
            "Direct shift by qubit count, including variable-length arrays sized by it",
        ),
        // Python resource exhaustion.
        Spec {
            obligation: Some("QAI-PY-001"),
            ..py(
                "QAI-PY-001",
                400,
                High,
                format!(r"(?:{ALLOC}\s*\(\s*|(?:=|\breturn\b|\()\s*\[[^\]]*\]\s*\*\s*\(?\s*){}", pow2("n")),
                "Array of 2**n elements allocated from an unbounded qubit count",
            )
        },
        Spec {
            obligation: Some("QAI-PY-002"),
            ..py(
                "QAI-PY-002",
                400,
                High,
                format!(r"\brange\s*\(\s*(?:0\s*,\s*)?{}", pow2("n")),
                "Loop over range(2**n) from an unbounded qubit count",
            )
        },
        Spec {
            obligation: Some("QAI-PY-003"),
            ..py(
                "QAI-PY-003",
                400,
                High,
                format!(r"2\s*\*\*\s*\(\s*2\s*\*\s*(?P<n>{PY_NAME})\s*\)"),
                "Exponent 2*n (density-matrix size) from an unbounded qubit count",
            )
        },
        Spec {
            obligation: Some("QAI-PY-004"),
            ..py(
                "QAI-PY-004",
                400,
                High,
                format!(r"(?:{ALLOC}\s*\((?:[^()\[\]]*\*\s*)?|\bshape\s*=\s*)[\(\[][^)\]]*?{}", pow2("n")),
                "2**n inside an allocation shape tuple",
            )
        },
        py(
            "QAI-PY-005",
            400,
            Medium,
            format!(r"^\s*{PY_NAME}\s*=\s*{}\s*\)?\s*$", pow2("n")),
            "Exponential size 2**n bound to a variable, with no allocation on the same line",
        ),
        // Unsafe deserialization and code injection.
        py(
            "QAI-DS-001",
            502,
            Critical,
            r"\b(?:pickle|cPickle|_pickle)\.(?:load|loads|Unpickler)\s*\(".into(),
            "pickle deserialization executes attacker-controlled bytecode",
        ),
        py(
            "QAI-DS-002",
            502,
            Critical,
            r"\bdill\.(?:load|loads)\s*\(".into(),
            "dill deserialization executes attacker-controlled bytecode",
        ),
        py(
            "QAI-DS-003",
            502,
            Critical,
            r"\bjoblib\.load\s*\(".into(),
            "joblib.load is pickle-backed",
        ),
        Spec {
            predicates: &[NoWeightsOnlyFlag],
            ..py(
                "QAI-DS-004",
                502,
                High,
                r"\btorch\.load\s*\(".into(),
                "torch.load without weights_only=True unpickles arbitrary objects",
            )
        },
        Spec {
            predicates: &[NoSafeLoader],
            ..py(
                "QAI-DS-005",
                502,
                High,
                r"\byaml\.(?:load|load_all)\s*\(".into(),
                "yaml.load without a safe loader can construct arbitrary objects",
            )
        },
        Spec {
            predicates: &[CallsiteNotDefinition, ArgNotStringLiteral],
            ..py(
                "QAI-DS-006",
                94,
                High,
                r"(?:^|[^\w.])eval\s*\(".into(),
                "eval() on a non-literal string",
            )
        },
        // QASM injection.
        Spec {
            predicates: &[ArgNotStringLiteral],
            obligation: Some("QAI-QA-001"),
            ..py(
                "QAI-QA-001",
                77,
                Critical,
                r"\b(?:from_qasm_str|qasm2\.loads|qasm3\.loads|circuit_from_qasm_str)\s*\(".into(),
                "QASM string parser called with a non-literal argument",
            )
        },
        Spec {
            predicates: &[ArgNotStringLiteral],
            obligation: Some("QAI-QA-001"),
            ..py(
                "QAI-QA-002",
                22,
                Critical,
                r"\b(?:from_qasm_file|qasm2\.load|qasm3\.load|circuit_from_qasm)\s*\(".into(),
                "QASM file loader called with a non-literal path",
            )
        },
        Spec {
            obligation: Some("QAI-QA-001"),
            target: Target::Definition,
            ..py(
                "QAI-QA-003",
                77,
                High,
                r"^\s*def\s+(?:from_qasm\w*|circuit_from_qasm\w*|load_qasm\w*|loads_qasm\w*|parse_qasm\w*|read_qasm\w*)\s*\("
                    .into(),
                "Public API accepting raw QASM without sanitization",
            )
        },
    ];
    specs.into_iter().map(Spec::build).collect()
}
