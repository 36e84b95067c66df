use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use walkdir::WalkDir;

use super::{classify, language_for_path, scan_source, Finding, LanguageKind, ScanOptions};
use crate::rules::RuleSet;

const VCS_DIRS: [&str; 3] = [".git", ".hg", ".svn"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedFile {
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub root: PathBuf,
    pub files_scanned: usize,
    pub skipped: Vec<SkippedFile>,
    pub findings: Vec<Finding>,
}

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("cannot read scan root {}: {source}", path.display())]
    Root { path: PathBuf, source: std::io::Error },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

enum Outcome {
    Scanned(Vec<Finding>),
    Skipped(SkippedFile),
    Ignored,
}

pub(crate) fn relative_path(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    let parts: Vec<_> = rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect();
    if parts.is_empty() {
        path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
    } else {
        parts.join("/")
    }
}

/// Files under `root` in walk order, plus walk errors as skip notices.
/// A file `root` yields itself.
pub(crate) fn collect_files(root: &Path, follow_symlinks: bool) -> Result<(Vec<PathBuf>, Vec<SkippedFile>), ScanError> {
    let meta = std::fs::metadata(root).map_err(|source| ScanError::Root { path: root.to_path_buf(), source })?;
    if meta.is_file() {
        return Ok((vec![root.to_path_buf()], Vec::new()));
    }
    std::fs::read_dir(root).map_err(|source| ScanError::Root { path: root.to_path_buf(), source })?;
    let mut files = Vec::new();
    let mut skipped = Vec::new();
    let walker = WalkDir::new(root)
        .follow_links(follow_symlinks)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| !(e.file_type().is_dir() && VCS_DIRS.iter().any(|d| e.file_name() == *d)));
    for entry in walker {
        match entry {
            Ok(e) if e.file_type().is_file() => files.push(e.into_path()),
            Ok(_) => {}
            Err(e) => skipped.push(SkippedFile {
                path: e.path().map(|p| relative_path(root, p)).unwrap_or_default(),
                reason: e.to_string(),
            }),
        }
    }
    Ok((files, skipped))
}

fn scan_one(root: &Path, path: &Path, rules: &RuleSet, opts: &ScanOptions) -> Outcome {
    let rel = relative_path(root, path);
    let by_ext = language_for_path(path);
    if by_ext.is_none() && path.extension().is_some() {
        return Outcome::Ignored;
    }
    let skip = |reason: String| {
        if by_ext.is_some() {
            Outcome::Skipped(SkippedFile { path: rel.clone(), reason })
        } else {
            Outcome::Ignored
        }
    };
    match std::fs::metadata(path) {
        Ok(m) if m.len() > opts.max_file_bytes => {
            return skip(format!("larger than {} bytes", opts.max_file_bytes));
        }
        Ok(_) => {}
        Err(e) => return skip(e.to_string()),
    }
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => return skip(e.to_string()),
    };
    let kind = classify(path, &bytes);
    if kind == LanguageKind::Other {
        return skip("binary or not UTF-8".into());
    }
    let text = String::from_utf8(bytes).expect("classify rejects non-UTF-8");
    Outcome::Scanned(scan_source(&rel, &text, kind, rules, opts))
}

/// Scans every source file under `root`.
///
/// Output is independent of `opts.jobs`: findings are sorted by path,
/// line and rule id, skip notices by path.
pub fn scan_tree(root: &Path, rules: &RuleSet, opts: &ScanOptions) -> Result<ScanResult, ScanError> {
    let (files, mut skipped) = collect_files(root, opts.follow_symlinks)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.unwrap_or(0)).build()?;
    let outcomes: Vec<Outcome> = pool.install(|| files.par_iter().map(|p| scan_one(root, p, rules, opts)).collect());

    let mut files_scanned = 0;
    let mut findings = Vec::new();
    for outcome in outcomes {
        match outcome {
            Outcome::Scanned(f) => {
                files_scanned += 1;
                findings.extend(f);
            }
            Outcome::Skipped(s) => skipped.push(s),
            Outcome::Ignored => {}
        }
    }
    findings.sort_by(|a, b| (&a.path, a.line, &a.rule_id).cmp(&(&b.path, b.line, &b.rule_id)));
    skipped.sort_by(|a, b| (&a.path, &a.reason).cmp(&(&b.path, &b.reason)));
    Ok(ScanResult { root: root.to_path_buf(), files_scanned, skipped, findings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::load_builtin_rules;
    use std::fs;

    fn write(root: &Path, rel: &str, text: &[u8]) {
        let p = root.join(rel);
        fs::create_dir_all(p.parent().unwrap()).unwrap();
        fs::write(p, text).unwrap();
    }

    #[test]
    fn walks_and_sorts() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "b/m.py", b"x = pickle.load(f)\n");
        write(dir.path(), "a/qv.hpp", b"s = BITS[n];\n");
        write(dir.path(), ".git/hooks/h.py", b"x = pickle.load(f)\n");
        write(dir.path(), "notes.md", b"pickle.load(f)\n");
        write(dir.path(), "blob.py", b"\0\0pickle.load(f)");
        let r = scan_tree(dir.path(), &load_builtin_rules(), &ScanOptions::default()).unwrap();
        assert_eq!(r.files_scanned, 2);
        let paths: Vec<_> = r.findings.iter().map(|f| f.path.as_str()).collect();
        assert_eq!(paths, ["a/qv.hpp", "b/m.py"]);
        assert_eq!(r.skipped.len(), 1);
        assert_eq!(r.skipped[0].path, "blob.py");
    }

    #[test]
    fn oversized_files_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "m.py", b"x = pickle.load(f)\n");
        let opts = ScanOptions { max_file_bytes: 4, ..ScanOptions::default() };
        let r = scan_tree(dir.path(), &load_builtin_rules(), &opts).unwrap();
        assert_eq!(r.files_scanned, 0);
        assert!(r.skipped[0].reason.contains("larger than 4"));
    }

    #[test]
    fn missing_root_is_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = scan_tree(&dir.path().join("nope"), &load_builtin_rules(), &ScanOptions::default());
        assert!(matches!(err, Err(ScanError::Root { .. })));
    }

    #[test]
    fn file_root() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "m.py", b"x = pickle.load(f)\n");
        let r = scan_tree(&dir.path().join("m.py"), &load_builtin_rules(), &ScanOptions::default()).unwrap();
        assert_eq!(r.findings[0].path, "m.py");
    }

    #[test]
    fn jobs_do_not_change_output() {
        let dir = tempfile::tempdir().unwrap();
        for i in 0..40 {
            write(
                dir.path(),
                &format!("d{}/f{i}.py", i % 7),
                format!("a = pickle.load(f{i})\nb = eval(x)\n").as_bytes(),
            );
        }
        let rules = load_builtin_rules();
        let one = scan_tree(dir.path(), &rules, &ScanOptions { jobs: Some(1), ..Default::default() }).unwrap();
        let many = scan_tree(dir.path(), &rules, &ScanOptions { jobs: Some(8), ..Default::default() }).unwrap();
        assert_eq!(one, many);
        assert_eq!(one.findings.len(), 80);
    }
}
