use crate::score::Scorecard;
use crate::verify::{ProofTable, Witness};

fn cell(text: &str) -> String {
    text.replace('|', "\\|")
}

fn witness(w: Option<&Witness>) -> String {
    match w {
        None => "-".into(),
        Some(Witness::Int(n)) => n.to_string(),
        Some(Witness::Bool(a)) => {
            format!("attacker={}, sanitized={}", a.attacker_controls_string, a.qasm_sanitized)
        }
    }
}

/// Proof rows as a pipe table: ID, Pattern, Constraint, Result, Witness.
pub fn render_proof_table(table: &ProofTable) -> String {
    let mut out = String::from("| ID | Pattern | Constraint | Result | Witness |\n|---|---|---|---|---|\n");
    for r in &table.rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            cell(&r.id),
            cell(&r.pattern),
            cell(&r.constraint),
            r.status,
            cell(&witness(r.witness.as_ref())),
        ));
    }
    out
}

pub fn emit_markdown(card: &Scorecard, proofs: Option<&ProofTable>) -> String {
    let mut out = String::from("## Security scorecard\n\n");
    out.push_str("| Framework | Org | CRIT | HIGH | MED | Score | Grade |\n");
    out.push_str("|---|---|---:|---:|---:|---:|---|\n");
    for r in &card.rows {
        out.push_str(&format!(
            "| {} | - | {} | {} | {} | {}/100 | {} |\n",
            cell(&r.name),
            r.crit,
            r.high,
            r.med,
            r.score,
            r.grade
        ));
    }
    if !card.rows.is_empty() {
        let t = card.totals;
        out.push_str(&format!("| **Total** | | {} | {} | {} | | |\n", t.crit, t.high, t.med));
    }
    if let Some(table) = proofs {
        out.push_str(&format!(
            "\n## Proof obligations\n\n{} of {} obligations match their expected verdict.\n\n",
            table.matching(),
            table.rows.len()
        ));
        out.push_str(&render_proof_table(table));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::Finding;
    use crate::score::build_scorecard;
    use crate::verify::{run_obligations, Registry};

    #[test]
    fn row_format() {
        let mut card = build_scorecard(std::iter::empty::<(&str, &[Finding])>()).unwrap();
        let (score, grade) = crate::score::compute_score(0, 1, 1);
        card.rows.push(crate::score::FrameworkScore { name: "braket".into(), crit: 0, high: 1, med: 1, score, grade });
        let md = emit_markdown(&card, None);
        assert!(md.lines().any(|l| l.starts_with("| braket |") && l.ends_with("| 89/100 | Secure |")), "{md}");
    }

    #[test]
    fn empty_is_header_only() {
        let md = emit_markdown(&Scorecard::default(), None);
        let rows: Vec<_> = md.lines().filter(|l| l.starts_with('|')).collect();
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn proof_rows() {
        let md = render_proof_table(&run_obligations(&Registry::builtin()));
        assert!(md.contains("QAI-PY-001 | np.zeros(2**n) | n ≥ 40 | SAT | 40"), "{md}");
        assert!(md.contains("| SAT | attacker=true, sanitized=false |"));
        assert!(md.contains("| UNSAT | - |"));
        assert!(md.contains("n < 64 ∧ 2n ≥ 64"));
    }
}
