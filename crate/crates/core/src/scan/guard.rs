//! Bounds-check recognition in the lines preceding a finding.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::LanguageKind;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mitigation {
    #[default]
    Unguarded,
    /// A comparison that only warns; execution continues.
    WarningOnly,
    /// A comparison that aborts (throw, raise, exit).
    HardGuard,
}

impl Mitigation {
    pub const fn as_str(self) -> &'static str {
        match self {
            Mitigation::Unguarded => "unguarded",
            Mitigation::WarningOnly => "warning_only",
            Mitigation::HardGuard => "hard_guard",
        }
    }
}

static HARD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b(?:throw|raise|abort|exit|_exit|terminate)\b").unwrap());
static WARN: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"\b(?:warn|warning|warnings|cerr|clog|printf?|fprintf|puts|log|logger|logging)\b").unwrap()
});
const CMP: &str = r"(?:<=|>=|==|!=|<|>)";
const CONST: &str = r"(?:0[xX][0-9a-fA-F]+|\d+|(?:[A-Za-z_]\w*\.)*[A-Z][A-Z0-9_]*\b)";

/// Classifies the strongest guard on `operand` visible from line `idx`.
///
/// Only `if` statements in the enclosing scope, at most `window` lines up,
/// whose condition compares the same operand token to a constant count.
pub fn detect_guard(lines: &[String], idx: usize, operand: &str, kind: LanguageKind, window: usize) -> Mitigation {
    if operand.is_empty() || idx >= lines.len() {
        return Mitigation::Unguarded;
    }
    let op = regex::escape(operand);
    let test = Regex::new(&format!(r"(?:^|[^\w.]){op}\s*{CMP}\s*{CONST}|{CONST}\s*{CMP}\s*{op}(?:$|[^\w.(\[])"))
        .expect("escaped operand forms a valid pattern");
    let lo = idx.saturating_sub(window);
    let candidates = match kind {
        LanguageKind::Python => python_ifs(lines, idx, lo),
        LanguageKind::Cpp => c_ifs(lines, idx, lo),
        _ => Vec::new(),
    };
    let mut best = Mitigation::Unguarded;
    for (cond, body) in candidates {
        if !test.is_match(&cond) {
            continue;
        }
        if HARD.is_match(&body) {
            return Mitigation::HardGuard;
        }
        if WARN.is_match(&body) {
            best = Mitigation::WarningOnly;
        }
    }
    best
}

fn indent(line: &str) -> usize {
    line.len() - line.trim_start().len()
}

/// `(condition, body)` for each candidate Python `if` above `idx`.
fn python_ifs(lines: &[String], idx: usize, lo: usize) -> Vec<(String, String)> {
    let mut scope = indent(&lines[idx]);
    let mut out = Vec::new();
    for j in (lo..idx).rev() {
        let line = &lines[j];
        let text = line.trim_start();
        if text.is_empty() {
            continue;
        }
        let ind = indent(line);
        if ind < scope {
            if text.starts_with("def ") || text.starts_with("async def ") || text.starts_with("class ") {
                break;
            }
            scope = ind;
        }
        if ind > scope {
            continue;
        }
        let Some(rest) = text.strip_prefix("if ").or_else(|| text.strip_prefix("elif ")) else {
            continue;
        };
        let (cond, inline) = split_python_header(rest);
        let mut body = inline.to_string();
        if inline.trim().is_empty() {
            for l in &lines[j + 1..idx] {
                if !l.trim().is_empty() && indent(l) <= ind {
                    break;
                }
                body.push('\n');
                body.push_str(l);
            }
        }
        out.push((cond.to_string(), body));
    }
    out
}

/// Splits `cond: body` at the first top-level colon outside strings.
fn split_python_header(rest: &str) -> (&str, &str) {
    let b = rest.as_bytes();
    let mut depth = 0i32;
    let mut quote = None;
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        match quote {
            Some(_) if c == b'\\' => i += 1,
            Some(q) if c == q => quote = None,
            Some(_) => {}
            None => match c {
                b'"' | b'\'' => quote = Some(c),
                b'(' | b'[' | b'{' => depth += 1,
                b')' | b']' | b'}' => depth -= 1,
                b':' if depth <= 0 => return (&rest[..i], &rest[i + 1..]),
                _ => {}
            },
        }
        i += 1;
    }
    (rest, "")
}

fn is_c_if(text: &str) -> Option<&str> {
    let text = text.strip_prefix('}').map_or(text, str::trim_start);
    let text = text.strip_prefix("else").map_or(text, str::trim_start);
    let rest = text.strip_prefix("if")?;
    let rest = rest.trim_start();
    let rest = rest.strip_prefix("constexpr").map_or(rest, str::trim_start);
    rest.starts_with('(').then_some(rest)
}

const CONTROL: [&str; 9] = ["if", "else", "for", "while", "do", "switch", "try", "case", "default"];

/// `(condition, body)` for each candidate C/C++ `if` in the block enclosing `idx`.
fn c_ifs(lines: &[String], idx: usize, lo: usize) -> Vec<(String, String)> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    for j in (lo..idx).rev() {
        let line = &lines[j];
        let mut opened_enclosing = false;
        for c in line.bytes().rev() {
            match c {
                b'}' => depth += 1,
                b'{' => {
                    depth -= 1;
                    if depth < 0 {
                        depth = 0;
                        opened_enclosing = true;
                    }
                }
                _ => {}
            }
        }
        let text = line.trim();
        if depth != 0 {
            continue;
        }
        if let Some(rest) = is_c_if(text) {
            if let Some((cond, after)) = split_paren(rest) {
                out.push((cond.to_string(), c_body(after, &lines[j + 1..idx])));
            }
            continue;
        }
        if opened_enclosing {
            let head = if text == "{" && j > 0 { lines[j - 1].trim() } else { text };
            let word = head.split(|c: char| !c.is_alphanumeric() && c != '_').find(|w| !w.is_empty());
            if !word.is_some_and(|w| CONTROL.contains(&w)) {
                break;
            }
        }
    }
    out
}

/// Splits `(cond) rest` at the matching parenthesis.
fn split_paren(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some((&s[1..i], &s[i + 1..]));
                }
            }
            _ => {}
        }
    }
    None
}

fn c_body(after: &str, following: &[String]) -> String {
    let after = after.trim();
    if !after.is_empty() && !after.starts_with('{') {
        return after.to_string();
    }
    let mut body = after.to_string();
    let mut depth: i32 = after.matches('{').count() as i32 - after.matches('}').count() as i32;
    if after.is_empty() {
        // Single statement or a brace on the next non-blank line.
        let Some(next) = following.iter().find(|l| !l.trim().is_empty()) else {
            return body;
        };
        if !next.trim().starts_with('{') {
            return next.clone();
        }
        depth = 0;
    } else if depth <= 0 {
        return body;
    }
    for l in following {
        body.push('\n');
        body.push_str(l);
        depth += l.matches('{').count() as i32 - l.matches('}').count() as i32;
        if depth <= 0 && l.contains('}') {
            break;
        }
    }
    body
}
