use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

use super::{ContextPredicate, Matcher, Provenance, Rule, RuleSet, Scope, Severity, Target};
use crate::verify::Registry;

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("cannot read rule file {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Parse(RuleFileError),
}

/// A rule-file problem, located by 1-based line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct RuleFileError {
    pub path: Option<PathBuf>,
    pub line: usize,
    pub kind: RuleFileErrorKind,
}

impl fmt::Display for RuleFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(path) = &self.path {
            write!(f, "{}:", path.display())?;
        }
        write!(f, "{}: {}", self.line, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleFileErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("rule id must not be empty")]
    EmptyId,
    #[error("duplicate rule id `{0}`")]
    DuplicateId(String),
    #[error("unknown predicate `{0}` (known: arg_not_string_literal, no_weights_only_flag, no_safe_loader, callsite_not_definition)")]
    UnknownPredicate(String),
    #[error("rule `{id}`: invalid pattern: {message}")]
    InvalidPattern { id: String, message: String },
    #[error("rule `{id}`: unknown obligation `{obligation}`")]
    UnknownObligation { id: String, obligation: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    rule: Vec<RawRule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    id: Spanned<String>,
    cwe: u32,
    severity: Severity,
    scope: Scope,
    pattern: Spanned<String>,
    predicates: Option<Spanned<String>>,
    obligation: Option<Spanned<String>>,
    #[serde(default)]
    target: Target,
    #[serde(default)]
    description: String,
}

#[derive(Serialize)]
struct OutFile<'a> {
    rule: Vec<OutRule<'a>>,
}

#[derive(Serialize)]
struct OutRule<'a> {
    id: &'a str,
    cwe: u32,
    severity: Severity,
    scope: Scope,
    pattern: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicates: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    obligation: Option<&'a str>,
    target: Target,
    description: &'a str,
}

fn line_of(text: &str, offset: usize) -> usize {
    text.as_bytes()[..offset.min(text.len())].iter().filter(|&&b| b == b'\n').count() + 1
}

pub(super) fn merge(base: &RuleSet, text: &str, origin: Option<&Path>) -> Result<RuleSet, RuleFileError> {
    let err =
        |offset: usize, kind| RuleFileError { path: origin.map(Path::to_path_buf), line: line_of(text, offset), kind };
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        err(offset, RuleFileErrorKind::Syntax(e.message().trim().to_string()))
    })?;

    let registry = Registry::builtin();
    let mut merged = base.clone();
    let mut seen = std::collections::BTreeSet::new();
    for raw in raw.rule {
        let id = raw.id.get_ref().trim().to_string();
        if id.is_empty() {
            return Err(err(raw.id.span().start, RuleFileErrorKind::EmptyId));
        }
        if !seen.insert(id.clone()) {
            return Err(err(raw.id.span().start, RuleFileErrorKind::DuplicateId(id)));
        }

        let mut predicates = Vec::new();
        if let Some(list) = &raw.predicates {
            for name in list.get_ref().split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let p: ContextPredicate =
                    name.parse().map_err(|name| err(list.span().start, RuleFileErrorKind::UnknownPredicate(name)))?;
                if !predicates.contains(&p) {
                    predicates.push(p);
                }
            }
        }

        let pattern = raw.pattern.get_ref();
        let matcher = if pattern.is_empty() {
            Err("pattern is empty".to_string())
        } else {
            Matcher::new(pattern).map_err(|e| e.to_string())
        }
        .map_err(|message| {
            err(raw.pattern.span().start, RuleFileErrorKind::InvalidPattern { id: id.clone(), message })
        })?;

        let obligation = match &raw.obligation {
            None => None,
            Some(o) if o.get_ref().trim().is_empty() => None,
            Some(o) => {
                let name = o.get_ref().trim().to_string();
                if !registry.contains(&name) {
                    return Err(err(
                        o.span().start,
                        RuleFileErrorKind::UnknownObligation { id: id.clone(), obligation: name },
                    ));
                }
                Some(name)
            }
        };

        merged.insert(Rule {
            id,
            cwe: raw.cwe,
            severity: raw.severity,
            scope: raw.scope,
            matcher,
            predicates,
            obligation,
            target: raw.target,
            description: raw.description,
        });
    }
    if let Some(path) = origin {
        merged.provenance.push(Provenance::File(path.to_path_buf()));
    }
    Ok(merged)
}

pub(super) fn to_toml(set: &RuleSet) -> String {
    let rule = set
        .iter()
        .map(|r| OutRule {
            id: &r.id,
            cwe: r.cwe,
            severity: r.severity,
            scope: r.scope,
            pattern: r.matcher.source(),
            predicates: (!r.predicates.is_empty())
                .then(|| r.predicates.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")),
            obligation: r.obligation.as_deref(),
            target: r.target,
            description: &r.description,
        })
        .collect();
    toml::to_string(&OutFile { rule }).expect("rule sets always serialize")
}
