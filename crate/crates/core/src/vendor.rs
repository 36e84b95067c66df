//! Vendored-tree detection by whole-file fingerprints, and propagation of
//! findings along the resulting edges.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::scan::tree::{collect_files, relative_path};
use crate::scan::{classify, Finding, LanguageKind, ScanError, SkippedFile};

pub const DEFAULT_MIN_SHARED_FILES: usize = 10;

/// Canonical form used for hashing: LF line endings, trailing whitespace
/// removed, blank lines dropped. Comments are kept.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for line in text.split('\n').flat_map(|l| l.split('\r')) {
        let line = line.trim_end();
        if !line.is_empty() {
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

/// SHA-256 of the normalized text, lowercase hex.
pub fn content_hash(text: &str) -> String {
    hex::encode(Sha256::digest(normalize(text).as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub rel_path: String,
    pub normalized_hash: String,
    /// Length of the normalized text.
    pub size_bytes: u64,
}

impl Fingerprint {
    pub fn of(rel_path: &str, text: &str) -> Self {
        let norm = normalize(text);
        Fingerprint {
            rel_path: rel_path.to_string(),
            normalized_hash: hex::encode(Sha256::digest(norm.as_bytes())),
            size_bytes: norm.len() as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintSet {
    pub root: PathBuf,
    /// Display name of the tree, taken from the root directory name.
    pub label: String,
    pub fingerprints: Vec<Fingerprint>,
    pub skipped: Vec<SkippedFile>,
}

pub fn root_label(root: &Path) -> String {
    let canon = std::fs::canonicalize(root).unwrap_or_else(|_| root.to_path_buf());
    canon
        .file_name()
        .or_else(|| root.file_name())
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| root.display().to_string())
}

/// One fingerprint per classifiable source file under `root`, sorted by path.
pub fn fingerprint_tree(root: &Path, follow_symlinks: bool) -> Result<FingerprintSet, ScanError> {
    let (files, mut skipped) = collect_files(root, follow_symlinks)?;
    let results: Vec<Result<Option<Fingerprint>, SkippedFile>> = files
        .par_iter()
        .map(|path| {
            let rel = relative_path(root, path);
            let bytes = std::fs::read(path).map_err(|e| SkippedFile { path: rel.clone(), reason: e.to_string() })?;
            if classify(path, &bytes) == LanguageKind::Other {
                return Ok(None);
            }
            let text = std::str::from_utf8(&bytes).expect("classify rejects non-UTF-8");
            Ok(Some(Fingerprint::of(&rel, text)))
        })
        .collect();
    let mut fingerprints = Vec::new();
    for r in results {
        match r {
            Ok(Some(fp)) => fingerprints.push(fp),
            Ok(None) => {}
            Err(s) => skipped.push(s),
        }
    }
    fingerprints.sort();
    Ok(FingerprintSet { root: root.to_path_buf(), label: root_label(root), fingerprints, skipped })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SharedFile {
    pub source_path: String,
    pub target_path: String,
}

/// `source_root` was copied into `target_root`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagationEdge {
    pub source_root: String,
    pub target_root: String,
    /// Directory under which the shared files sit in each tree (may be empty).
    pub source_prefix: String,
    pub target_prefix: String,
    pub shared_files: usize,
    pub shared_bytes: u64,
    /// Set when nesting depth could not decide the direction.
    pub bidirectional: bool,
    pub files: Vec<SharedFile>,
    #[serde(default)]
    pub carried_findings: Vec<Finding>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionOverride {
    /// The first tree is the source.
    FirstIsSource,
    /// The second tree is the source.
    SecondIsSource,
}

fn split_common_suffix<'a>(a: &'a str, b: &'a str) -> (String, String) {
    let pa: Vec<&str> = a.split('/').collect();
    let pb: Vec<&str> = b.split('/').collect();
    let common = pa.iter().rev().zip(pb.iter().rev()).take_while(|(x, y)| x == y).count();
    (pa[..pa.len() - common].join("/"), pb[..pb.len() - common].join("/"))
}

fn depth(prefix: &str) -> usize {
    if prefix.is_empty() {
        0
    } else {
        prefix.split('/').count()
    }
}

/// Finds a whole-subtree copy between two trees.
///
/// Shared files (same normalized hash) are grouped by the prefix pair that
/// remains after removing their longest common path suffix. The largest
/// group becomes an edge when it holds at least `min_shared_files` files.
/// The tree whose copy sits deeper is the target; equal depth yields a
/// single edge flagged `bidirectional` in argument order.
pub fn detect_vendoring(
    a: &FingerprintSet,
    b: &FingerprintSet,
    min_shared_files: usize,
    direction: Option<DirectionOverride>,
) -> Vec<PropagationEdge> {
    let mut by_hash: BTreeMap<&str, Vec<&Fingerprint>> = BTreeMap::new();
    for fp in &b.fingerprints {
        by_hash.entry(&fp.normalized_hash).or_default().push(fp);
    }
    // (prefix_a, prefix_b) -> a path -> (b path, size)
    type Pairs<'p> = BTreeMap<&'p str, (&'p str, u64)>;
    let mut groups: BTreeMap<(String, String), Pairs> = BTreeMap::new();
    for fa in &a.fingerprints {
        for fb in by_hash.get(fa.normalized_hash.as_str()).into_iter().flatten() {
            let key = split_common_suffix(&fa.rel_path, &fb.rel_path);
            groups.entry(key).or_default().insert(&fa.rel_path, (&fb.rel_path, fa.size_bytes));
        }
    }
    let canonical =
        |(pa, pb): &(String, String)| if pa <= pb { (pa.clone(), pb.clone()) } else { (pb.clone(), pa.clone()) };
    let best = groups
        .iter()
        .max_by(|(ka, ga), (kb, gb)| ga.len().cmp(&gb.len()).then_with(|| canonical(kb).cmp(&canonical(ka))));
    let Some(((pa, pb), files)) = best else {
        return Vec::new();
    };
    if files.len() < min_shared_files.max(1) {
        return Vec::new();
    }

    let (da, db) = (depth(pa), depth(pb));
    let first_is_source = match direction {
        Some(DirectionOverride::FirstIsSource) => true,
        Some(DirectionOverride::SecondIsSource) => false,
        None => da <= db,
    };
    let bidirectional = direction.is_none() && da == db;
    let shared_bytes = files.values().map(|&(_, size)| size).sum();
    let mut shared: Vec<SharedFile> = files
        .iter()
        .map(|(&pa_path, &(pb_path, _))| {
            let (source_path, target_path) = if first_is_source { (pa_path, pb_path) } else { (pb_path, pa_path) };
            SharedFile { source_path: source_path.into(), target_path: target_path.into() }
        })
        .collect();
    shared.sort();
    let (src, dst, sp, tp) = if first_is_source { (a, b, pa, pb) } else { (b, a, pb, pa) };
    vec![PropagationEdge {
        source_root: src.label.clone(),
        target_root: dst.label.clone(),
        source_prefix: sp.clone(),
        target_prefix: tp.clone(),
        shared_files: shared.len(),
        shared_bytes,
        bidirectional,
        files: shared,
        carried_findings: Vec::new(),
    }]
}

/// Copies source-tree findings on shared files to their target paths.
pub fn carry_findings(edge: &PropagationEdge, source_findings: &[Finding]) -> Vec<Finding> {
    let map: BTreeMap<&str, &str> =
        edge.files.iter().map(|f| (f.source_path.as_str(), f.target_path.as_str())).collect();
    source_findings
        .iter()
        .filter_map(|f| {
            let target = map.get(f.path.as_str())?;
            let mut carried = f.clone();
            carried.path = target.to_string();
            carried.provenance = Some(format!("vendored-from: {}", edge.source_root));
            Some(carried)
        })
        .collect()
}

/// Adds carried findings to a tree's own, skipping any already present at
/// the same rule, path and line.
pub fn merge_carried(own: &mut Vec<Finding>, carried: &[Finding]) {
    let seen: BTreeSet<(String, String, usize)> =
        own.iter().map(|f| (f.rule_id.clone(), f.path.clone(), f.line)).collect();
    own.extend(carried.iter().filter(|f| !seen.contains(&(f.rule_id.clone(), f.path.clone(), f.line))).cloned());
    own.sort_by(|a, b| (&a.path, a.line, &a.rule_id).cmp(&(&b.path, b.line, &b.rule_id)));
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub edges: Vec<PropagationEdge>,
    /// Maximal paths, each listing tree labels in propagation order.
    pub chains: Vec<Vec<String>>,
    pub warnings: Vec<String>,
}

impl ChainReport {
    pub fn rendered_chains(&self) -> Vec<String> {
        self.chains.iter().map(|c| c.join(" → ")).collect()
    }
}

/// Assembles maximal simple paths. Edges on a cycle are reported with a
/// warning and take no part in any chain.
pub fn build_chain_report(edges: Vec<PropagationEdge>) -> ChainReport {
    let mut adj: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for e in &edges {
        adj.entry(&e.source_root).or_default().insert(&e.target_root);
    }
    let reaches = |from: &str, to: &str| {
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(n) = stack.pop() {
            if n == to {
                return true;
            }
            if seen.insert(n) {
                stack.extend(adj.get(n).into_iter().flatten().copied());
            }
        }
        false
    };
    let mut warnings = Vec::new();
    let mut acyclic: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut nodes = BTreeSet::new();
    for e in &edges {
        if reaches(&e.target_root, &e.source_root) {
            warnings
                .push(format!("cycle: {} → {} lies on a cycle; excluded from chains", e.source_root, e.target_root));
            continue;
        }
        acyclic.entry(&e.source_root).or_default().insert(&e.target_root);
        nodes.insert(e.source_root.as_str());
        nodes.insert(e.target_root.as_str());
    }
    warnings.sort();
    warnings.dedup();

    let has_incoming: BTreeSet<&str> = acyclic.values().flatten().copied().collect();
    let mut chains = Vec::new();
    for start in nodes.iter().filter(|n| !has_incoming.contains(*n)) {
        let mut path = vec![*start];
        extend_paths(&acyclic, &mut path, &mut chains);
    }
    ChainReport { edges, chains, warnings }
}

fn extend_paths<'a>(adj: &BTreeMap<&'a str, BTreeSet<&'a str>>, path: &mut Vec<&'a str>, out: &mut Vec<Vec<String>>) {
    let last = *path.last().expect("paths start non-empty");
    let next: Vec<&str> = adj.get(last).into_iter().flatten().copied().filter(|n| !path.contains(n)).collect();
    if next.is_empty() {
        if path.len() > 1 {
            out.push(path.iter().map(|s| s.to_string()).collect());
        }
        return;
    }
    for n in next {
        path.push(n);
        extend_paths(adj, path, out);
        path.pop();
    }
}
