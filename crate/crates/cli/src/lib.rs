//! The `qai` command line. [`run`] is the whole program minus process
//! plumbing, so tests drive it with in-memory writers.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use qai_core::report::{emit_json, emit_markdown, emit_sarif, render_proof_table, ScanReport, TargetReport};
use qai_core::rules::{load_builtin_rules, load_rule_file, RuleError, RuleSet};
use qai_core::scan::{scan_tree, Finding, ScanError, ScanOptions};
use qai_core::score::FrameworkScore;
use qai_core::vendor::{
    build_chain_report, carry_findings, detect_vendoring, fingerprint_tree, merge_carried, root_label, ChainReport,
    DirectionOverride, PropagationEdge, DEFAULT_MIN_SHARED_FILES,
};
use qai_core::verify::{annotate_findings, run_obligations, Registry, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BELOW_THRESHOLD: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub const TIMESTAMP_ENV: &str = "QAI_TIMESTAMP";
pub const NO_COLOR_ENV: &str = "QAI_NO_COLOR";

#[derive(Parser, Debug)]
#[command(
    name = "qai",
    version,
    about = "Audit quantum simulator source trees for memory-safety, resource-exhaustion, deserialization and QASM-injection flaws"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scan one or more source trees and report findings and scores.
    Scan(ScanArgs),
    /// Discharge the built-in proof obligations.
    Prove(ProveArgs),
    /// Detect a vendored copy between two trees and carry findings across it.
    Vendor(VendorArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Sarif,
    Markdown,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Tree roots; each becomes one framework named after its directory.
    #[arg(required = true)]
    roots: Vec<PathBuf>,
    /// Rule file merged over the built-in rules.
    #[arg(long, value_name = "FILE")]
    rules: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Exit 1 when any framework scores below N.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(0..=100))]
    fail_under: Option<u32>,
    /// Do not suppress findings under test, benchmark, example or docs directories.
    #[arg(long)]
    include_tests: bool,
    /// Skip the solver; findings carry no verdicts and no proof table is attached.
    #[arg(long)]
    no_verify: bool,
    /// Fixed report timestamp (otherwise $QAI_TIMESTAMP, otherwise now).
    #[arg(long)]
    timestamp: Option<String>,
    /// Worker threads (default: one per core).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Lines above a sink searched for a bounds check.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    guard_window: u64,
    #[arg(long, default_value_t = 4 * 1024 * 1024)]
    max_file_bytes: u64,
    #[arg(long)]
    follow_symlinks: bool,
    /// Also detect vendored copies between the roots and carry findings along them.
    #[arg(long)]
    vendor: bool,
    #[arg(long, default_value_t = DEFAULT_MIN_SHARED_FILES)]
    min_shared_files: usize,
}

#[derive(Args, Debug)]
struct ProveArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: TextFormat,
}

#[derive(Args, Debug)]
struct VendorArgs {
    root_a: PathBuf,
    root_b: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MIN_SHARED_FILES)]
    min_shared_files: usize,
    /// Force the direction, as `SOURCE:TARGET` using root names or paths.
    #[arg(long, value_name = "A:B")]
    vendor_direction: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: TextFormat,
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long)]
    follow_symlinks: bool,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INTERNAL, message: message.into() }
    }
}

impl From<ScanError> for Failure {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Root { .. } => Failure::usage(e.to_string()),
            other => Failure::internal(other.to_string()),
        }
    }
}

impl From<RuleError> for Failure {
    fn from(e: RuleError) -> Self {
        Failure::usage(e.to_string())
    }
}

struct Ui {
    color: bool,
}

impl Ui {
    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

/// Runs without colour. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_color(args, stdout, stderr, false)
}

pub fn run_with_color<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let ui = Ui { color: color && std::env::var_os(NO_COLOR_ENV).is_none() };
    let result = match cli.command {
        Command::Scan(args) => scan(args, stdout, stderr),
        Command::Prove(args) => prove(args, stdout, &ui),
        Command::Vendor(args) => vendor(args, stdout, stderr, &ui),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "qai: {}", f.message);
            f.code
        }
    }
}

fn load_rules(path: Option<&Path>) -> Result<RuleSet, Failure> {
    let base = load_builtin_rules();
    match path {
        Some(p) => Ok(load_rule_file(p, &base)?),
        None => Ok(base),
    }
}

fn timestamp(flag: Option<String>) -> String {
    flag.or_else(|| std::env::var(TIMESTAMP_ENV).ok().filter(|s| !s.is_empty()))
        .unwrap_or_else(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
}

fn write_output(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::internal(format!("cannot write {}: {e}", path.display())))
        }
        None => stdout.write_all(text.as_bytes()).map_err(|e| Failure::internal(format!("stdout: {e}"))),
    }
}

fn to_usize(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

fn scan(args: ScanArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let rules = load_rules(args.rules.as_deref())?;
    let options = ScanOptions {
        include_test_paths: args.include_tests,
        guard_window: to_usize(args.guard_window),
        follow_symlinks: args.follow_symlinks,
        max_file_bytes: args.max_file_bytes,
        jobs: args.jobs.map(to_usize),
    };

    let mut names = BTreeSet::new();
    for root in &args.roots {
        if !root.exists() {
            return Err(Failure::usage(format!("scan root {} does not exist", root.display())));
        }
        let name = root_label(root);
        if !names.insert(name.clone()) {
            return Err(Failure::usage(format!("two roots share the framework name `{name}`")));
        }
    }

    let registry = Registry::builtin();
    let mut targets = Vec::new();
    for root in &args.roots {
        let mut result = scan_tree(root, &rules, &options)?;
        if !args.no_verify {
            annotate_findings(&mut result.findings, &rules, &registry);
        }
        for s in &result.skipped {
            let _ = writeln!(stderr, "qai: skipped {}/{}: {}", root.display(), s.path, s.reason);
        }
        targets.push(TargetReport {
            name: root_label(root),
            root: root.display().to_string(),
            files_scanned: result.files_scanned,
            skipped: result.skipped,
            score: FrameworkScore::from_findings("", &[]),
            findings: result.findings,
        });
    }

    let propagation = if args.vendor && args.roots.len() > 1 {
        Some(propagate(&args.roots, &mut targets, args.min_shared_files, args.follow_symlinks, stderr)?)
    } else {
        None
    };

    for t in &mut targets {
        t.score = FrameworkScore::from_findings(&t.name, &t.findings);
    }
    let mut report = ScanReport::new(&timestamp(args.timestamp), options, !args.no_verify);
    report.targets = targets;
    report.collect_rule_meta(&rules);
    if !args.no_verify {
        report.proof_table = Some(run_obligations(&registry));
    }
    report.propagation = propagation;

    let text = match args.format {
        ReportFormat::Json => emit_json(&report),
        ReportFormat::Sarif => emit_sarif(&report),
        ReportFormat::Markdown => emit_markdown(&report.scorecard(), report.proof_table.as_ref()),
    };
    write_output(args.out.as_deref(), &text, stdout)?;

    if let Some(n) = args.fail_under {
        let below: Vec<_> = report.targets.iter().filter(|t| t.score.score < n).collect();
        if !below.is_empty() {
            for t in below {
                let _ = writeln!(stderr, "qai: {} scored {}/100, below --fail-under {n}", t.name, t.score.score);
            }
            return Ok(EXIT_BELOW_THRESHOLD);
        }
    }
    Ok(EXIT_OK)
}

/// Pairwise vendoring detection over all roots; carried findings are merged
/// into each target before scoring.
fn propagate(
    roots: &[PathBuf],
    targets: &mut [TargetReport],
    min_shared_files: usize,
    follow_symlinks: bool,
    stderr: &mut dyn Write,
) -> Result<ChainReport, Failure> {
    let sets = roots.iter().map(|r| fingerprint_tree(r, follow_symlinks)).collect::<Result<Vec<_>, _>>()?;
    let own: Vec<Vec<Finding>> = targets.iter().map(|t| t.findings.clone()).collect();
    let mut edges = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            for mut edge in detect_vendoring(&sets[i], &sets[j], min_shared_files, None) {
                let (src, dst) = if edge.source_root == sets[i].label { (i, j) } else { (j, i) };
                edge.carried_findings = carry_findings(&edge, &own[src]);
                merge_carried(&mut targets[dst].findings, &edge.carried_findings);
                edges.push(edge);
            }
        }
    }
    let chains = build_chain_report(edges);
    for w in &chains.warnings {
        let _ = writeln!(stderr, "qai: warning: {w}");
    }
    Ok(chains)
}

fn prove(args: ProveArgs, stdout: &mut dyn Write, ui: &Ui) -> Result<i32, Failure> {
    let table = run_obligations(&Registry::builtin());
    let text = match args.format {
        TextFormat::Json => {
            let mut s = serde_json::to_string_pretty(&table).map_err(|e| Failure::internal(e.to_string()))?;
            s.push('\n');
            s
        }
        TextFormat::Text => {
            let mut s = render_proof_table(&table);
            if ui.color {
                s = s.replace("| SAT |", &format!("| {} |", ui.paint("31", "SAT")));
                s = s.replace("| UNSAT |", &format!("| {} |", ui.paint("32", "UNSAT")));
            }
            let sat = table.count(Status::Sat);
            let summary = format!(
                "\n{sat} SAT, {} UNSAT; {}/{} match expected verdicts\n",
                table.count(Status::Unsat),
                table.matching(),
                table.rows.len()
            );
            s.push_str(&if table.all_match() { summary } else { ui.paint("1;31", &summary) });
            for r in table.rows.iter().filter(|r| !r.matches) {
                s.push_str(&format!("mismatch: {} expected {:?}\n", r.id, r.expected));
            }
            s
        }
    };
    write_output(None, &text, stdout)?;
    Ok(if table.all_match() { EXIT_OK } else { EXIT_INTERNAL })
}

fn parse_direction(spec: &str, a: &Path, b: &Path) -> Result<DirectionOverride, Failure> {
    let (src, dst) = spec
        .split_once(':')
        .ok_or_else(|| Failure::usage(format!("--vendor-direction expects SOURCE:TARGET, got `{spec}`")))?;
    let names = |p: &Path| [root_label(p), p.display().to_string()];
    let is = |name: &str, p: &Path| names(p).iter().any(|n| n == name);
    if is(src, a) && is(dst, b) {
        Ok(DirectionOverride::FirstIsSource)
    } else if is(src, b) && is(dst, a) {
        Ok(DirectionOverride::SecondIsSource)
    } else {
        Err(Failure::usage(format!(
            "--vendor-direction `{spec}` must name the two roots ({} and {})",
            root_label(a),
            root_label(b)
        )))
    }
}

fn vendor(args: VendorArgs, stdout: &mut dyn Write, stderr: &mut dyn Write, ui: &Ui) -> Result<i32, Failure> {
    for root in [&args.root_a, &args.root_b] {
        if !root.exists() {
            return Err(Failure::usage(format!("root {} does not exist", root.display())));
        }
    }
    if root_label(&args.root_a) == root_label(&args.root_b) {
        return Err(Failure::usage("the two roots share a name; edges would be ambiguous"));
    }
    let direction =
        args.vendor_direction.as_deref().map(|d| parse_direction(d, &args.root_a, &args.root_b)).transpose()?;
    let rules = load_rules(args.rules.as_deref())?;
    let a = fingerprint_tree(&args.root_a, args.follow_symlinks)?;
    let b = fingerprint_tree(&args.root_b, args.follow_symlinks)?;
    let options = ScanOptions { follow_symlinks: args.follow_symlinks, ..ScanOptions::default() };

    let mut edges: Vec<PropagationEdge> = detect_vendoring(&a, &b, args.min_shared_files, direction);
    for edge in &mut edges {
        let source = if edge.source_root == a.label { &args.root_a } else { &args.root_b };
        let found = scan_tree(source, &rules, &options)?;
        edge.carried_findings = carry_findings(edge, &found.findings);
    }
    let report = build_chain_report(edges);
    for w in &report.warnings {
        let _ = writeln!(stderr, "qai: warning: {w}");
    }

    let text = match args.format {
        TextFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).map_err(|e| Failure::internal(e.to_string()))?;
            s.push('\n');
            s
        }
        TextFormat::Text => render_vendor_text(&report, ui),
    };
    write_output(None, &text, stdout)?;
    Ok(EXIT_OK)
}

fn render_vendor_text(report: &ChainReport, ui: &Ui) -> String {
    let mut s = String::new();
    if report.edges.is_empty() {
        s.push_str("no vendored copy detected\n");
    }
    for e in &report.edges {
        let arrow = if e.bidirectional { "↔" } else { "→" };
        s.push_str(&format!(
            "edge: {} {arrow} {} ({} shared files, {} bytes)\n",
            ui.paint("1", &e.source_root),
            ui.paint("1", &e.target_root),
            e.shared_files,
            e.shared_bytes
        ));
        if !e.target_prefix.is_empty() {
            s.push_str(&format!("  copied under: {}/\n", e.target_prefix));
        }
        let active: Vec<_> = e.carried_findings.iter().filter(|f| f.is_active()).collect();
        s.push_str(&format!("  carried findings: {} ({} active)\n", e.carried_findings.len(), active.len()));
        for f in &e.carried_findings {
            let sev = match f.severity.as_str() {
                "CRITICAL" => ui.paint("31", "CRITICAL"),
                other => other.to_string(),
            };
            let note = if f.is_active() { "" } else { " (inactive)" };
            s.push_str(&format!("    {} {sev} {}:{}{note}\n", f.rule_id, f.path, f.line));
        }
    }
    if !report.chains.is_empty() {
        s.push_str("chains:\n");
        for c in report.rendered_chains() {
            s.push_str(&format!("  {c}\n"));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("qai").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&[]).0, EXIT_USAGE);
        assert_eq!(run_str(&["scan"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["scan", ".", "--format", "xml"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["scan", ".", "--fail-under", "101"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["scan", ".", "--jobs", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_and_version_exit_0() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("scan"));
        assert_eq!(run_str(&["--version"]).0, EXIT_OK);
    }

    #[test]
    fn nonexistent_root() {
        let (code, _, err) = run_str(&["scan", "/nonexistent/qai-root"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("does not exist"));
    }

    #[test]
    fn prove_text() {
        let (code, out, _) = run_str(&["prove"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("13/13 match"), "{out}");
        assert!(!out.contains('\x1b'));
    }

    #[test]
    fn direction_parsing() {
        let a = Path::new("x/aer-mini");
        let b = Path::new("y/xacc-mini");
        assert_eq!(parse_direction("aer-mini:xacc-mini", a, b).ok(), Some(DirectionOverride::FirstIsSource));
        assert_eq!(parse_direction("xacc-mini:aer-mini", a, b).ok(), Some(DirectionOverride::SecondIsSource));
        assert!(parse_direction("aer-mini", a, b).is_err());
        assert!(parse_direction("a:b", a, b).is_err());
    }

    #[test]
    fn paint_respects_flag() {
        assert_eq!(Ui { color: false }.paint("31", "x"), "x");
        assert_eq!(Ui { color: true }.paint("31", "x"), "\x1b[31mx\x1b[0m");
    }
}
