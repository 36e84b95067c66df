//! Static analysis for quantum-simulator source trees.
//!
//! The pipeline is: [`scan`] trees with a [`rules::RuleSet`], attach
//! [`verify`] verdicts to findings, fold carried findings in from
//! [`vendor`] edges, then [`score`] and [`report`].

pub mod report;
pub mod rules;
pub mod scan;
pub mod score;
pub mod vendor;
pub mod verify;

pub use rules::{load_builtin_rules, load_rule_file, Rule, RuleSet, Severity};
pub use scan::{scan_tree, Finding, ScanOptions, ScanResult};
pub use score::{build_scorecard, compute_score, FrameworkScore, Grade, Scorecard};
pub use verify::{run_obligations, Registry};
