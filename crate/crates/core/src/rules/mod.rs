//! Detection rules: the model, the built-in library, and user rule files.

mod builtin;
mod file;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::scan::LanguageKind;
use crate::verify::Registry;

pub use file::{RuleError, RuleFileError, RuleFileErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    #[serde(alias = "critical")]
    Critical,
    #[serde(alias = "high")]
    High,
    #[serde(alias = "medium")]
    Medium,
}

impl Severity {
    /// Points deducted from a 100-point baseline per unmitigated finding.
    pub const fn weight(self) -> u32 {
        match self {
            Severity::Critical => 20,
            Severity::High => 8,
            Severity::Medium => 3,
        }
    }

    pub const fn as_str(self) -> &'static str {
        match self {
            Severity::Critical => "CRITICAL",
            Severity::High => "HIGH",
            Severity::Medium => "MEDIUM",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Cpp,
    Python,
    Qasm,
    Any,
}

impl Scope {
    pub fn applies_to(self, kind: LanguageKind) -> bool {
        match self {
            Scope::Any => true,
            Scope::Cpp => kind == LanguageKind::Cpp,
            Scope::Python => kind == LanguageKind::Python,
            Scope::Qasm => kind == LanguageKind::Qasm,
        }
    }
}

/// Extra conditions checked on a matched line. The set is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContextPredicate {
    /// The first argument of the matched call is not a plain string literal.
    ArgNotStringLiteral,
    /// No `weights_only=True` on the line.
    NoWeightsOnlyFlag,
    /// No `Loader=SafeLoader` (or `CSafeLoader`/`BaseLoader`) on the line.
    NoSafeLoader,
    /// The line is not a function definition.
    CallsiteNotDefinition,
}

impl ContextPredicate {
    pub const ALL: [ContextPredicate; 4] = [
        ContextPredicate::ArgNotStringLiteral,
        ContextPredicate::NoWeightsOnlyFlag,
        ContextPredicate::NoSafeLoader,
        ContextPredicate::CallsiteNotDefinition,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            ContextPredicate::ArgNotStringLiteral => "arg_not_string_literal",
            ContextPredicate::NoWeightsOnlyFlag => "no_weights_only_flag",
            ContextPredicate::NoSafeLoader => "no_safe_loader",
            ContextPredicate::CallsiteNotDefinition => "callsite_not_definition",
        }
    }
}

impl FromStr for ContextPredicate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ContextPredicate::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| s.to_string())
    }
}

impl fmt::Display for ContextPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What kind of line a rule is meant to flag. Definition rules are exempt
/// from the definition-line production filter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    #[default]
    Call,
    Definition,
}

/// A compiled line pattern. Named groups `n`, `n2`, `n3`, ... mark the
/// qubit-count operand used for guard binding.
#[derive(Debug, Clone)]
pub struct Matcher {
    source: String,
    regex: Regex,
}

impl Matcher {
    pub fn new(source: &str) -> Result<Self, regex::Error> {
        Ok(Matcher { source: source.to_string(), regex: Regex::new(source)? })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn regex(&self) -> &Regex {
        &self.regex
    }

    pub fn has_operand(&self) -> bool {
        self.regex.capture_names().flatten().any(is_operand_group)
    }
}

pub(crate) fn is_operand_group(name: &str) -> bool {
    name.strip_prefix('n').is_some_and(|rest| rest.chars().all(|c| c.is_ascii_digit()))
}

impl PartialEq for Matcher {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl Eq for Matcher {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub cwe: u32,
    pub severity: Severity,
    pub scope: Scope,
    pub matcher: Matcher,
    pub predicates: Vec<ContextPredicate>,
    pub obligation: Option<String>,
    pub target: Target,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Builtin,
    File(PathBuf),
}

/// Rules keyed and iterated by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: BTreeMap<String, Rule>,
    provenance: Vec<Provenance>,
}

impl RuleSet {
    pub fn from_rules(rules: impl IntoIterator<Item = Rule>, provenance: Provenance) -> Self {
        RuleSet { rules: rules.into_iter().map(|r| (r.id.clone(), r)).collect(), provenance: vec![provenance] }
    }

    pub fn get(&self, id: &str) -> Option<&Rule> {
        self.rules.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rule> {
        self.rules.values()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Sources merged into this set, oldest first.
    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn has_any_scope(&self) -> bool {
        self.rules.values().any(|r| r.scope == Scope::Any)
    }

    /// Adds or replaces a rule by id.
    pub fn insert(&mut self, rule: Rule) -> Option<Rule> {
        self.rules.insert(rule.id.clone(), rule)
    }

    /// Obligation ids referenced by rules but absent from `registry`.
    pub fn dangling_obligations(&self, registry: &Registry) -> Vec<(String, String)> {
        self.rules
            .values()
            .filter_map(|r| r.obligation.as_ref().map(|o| (r.id.clone(), o.clone())))
            .filter(|(_, o)| !registry.contains(o))
            .collect()
    }

    /// Serializes to the rule-file format.
    pub fn to_toml(&self) -> String {
        file::to_toml(self)
    }

    /// Parses rule-file text and merges it over `self`; `origin` is recorded as provenance.
    pub fn merge_toml(&self, text: &str, origin: Option<&Path>) -> Result<RuleSet, RuleFileError> {
        file::merge(self, text, origin)
    }
}

/// The full built-in library, covering memory-safety, resource-exhaustion,
/// deserialization and QASM-injection patterns.
pub fn load_builtin_rules() -> RuleSet {
    let set = RuleSet::from_rules(builtin::rules(), Provenance::Builtin);
    let dangling = set.dangling_obligations(&Registry::builtin());
    assert!(dangling.is_empty(), "builtin rules reference unknown obligations: {dangling:?}");
    set
}

/// Reads a rule file and merges it over `base`. File rules replace base
/// rules with the same id.
pub fn load_rule_file(path: &Path, base: &RuleSet) -> Result<RuleSet, RuleError> {
    let text = std::fs::read_to_string(path).map_err(|source| RuleError::Io { path: path.to_path_buf(), source })?;
    base.merge_toml(&text, Some(path)).map_err(RuleError::Parse)
}
