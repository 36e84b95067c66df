//! Exact minimal-witness search for [`ConstraintFormula`] and the two-variable
//! injection model.
//!
//! Each predicate answers "smallest `n >= x` that satisfies me" exactly.
//! Predicates with one constant side reduce to finding the first `t` with
//! `(a*t + b) mod 2^64` inside a range, which is solved with a Euclid-style
//! recursion in O(log) steps. Predicates with a variable on both sides are
//! walked piece by piece between wrap points, where both sides are linear.
//! The conjunction is then solved by advancing a shared lower bound until
//! every predicate accepts it, which yields the minimal common witness.

use serde::{Deserialize, Serialize};

use super::formula::{Cmp, ConstraintFormula, Predicate};

const MODULUS: u128 = 1 << 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Sat,
    Unsat,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
        })
    }
}

/// A satisfying assignment for the injection model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoolAssignment {
    pub attacker_controls_string: bool,
    pub qasm_sanitized: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Int(u64),
    Bool(BoolAssignment),
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Int(n) => write!(f, "{n}"),
            Witness::Bool(a) => write!(
                f,
                "attacker_controls_string={}, qasm_sanitized={}",
                a.attacker_controls_string, a.qasm_sanitized
            ),
        }
    }
}

/// Solver outcome. `witness` is present exactly when the status is SAT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn sat(witness: Witness) -> Self {
        Verdict { status: Status::Sat, witness: Some(witness) }
    }

    pub fn sat_at(n: u64) -> Self {
        Self::sat(Witness::Int(n))
    }

    pub fn unsat() -> Self {
        Verdict { status: Status::Unsat, witness: None }
    }

    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }
}

/// A boolean input to the injection model: either free or pinned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoolVar {
    Free,
    Fixed(bool),
}

impl BoolVar {
    fn domain(self) -> &'static [bool] {
        match self {
            BoolVar::Free => &[false, true],
            BoolVar::Fixed(true) => &[true],
            BoolVar::Fixed(false) => &[false],
        }
    }
}

/// `attacker_controls_string ∧ ¬qasm_sanitized`, with either input optionally fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanFormula {
    pub attacker_controls_string: BoolVar,
    pub qasm_sanitized: BoolVar,
}

impl BooleanFormula {
    pub fn holds(&self, assignment: BoolAssignment) -> bool {
        assignment.attacker_controls_string && !assignment.qasm_sanitized
    }

    pub fn pretty(&self) -> String {
        let mut text = "attacker_controls_string ∧ ¬qasm_sanitized".to_string();
        let pins: Vec<String> =
            [("attacker_controls_string", self.attacker_controls_string), ("qasm_sanitized", self.qasm_sanitized)]
                .iter()
                .filter_map(|(name, var)| match var {
                    BoolVar::Fixed(v) => Some(format!("{name}={v}")),
                    BoolVar::Free => None,
                })
                .collect();
        if !pins.is_empty() {
            text.push_str(&format!(" [{}]", pins.join(", ")));
        }
        text
    }
}

impl std::fmt::Display for BooleanFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.pretty().replace('∧', "&&").replace('¬', "!"))
    }
}

/// Minimal satisfying `n` over the full 64-bit domain, or UNSAT.
pub fn solve(formula: &ConstraintFormula) -> Verdict {
    solve_within(formula, u64::MAX).expect("unbounded")
}

/// Like [`solve`], but gives up with `None` after `rounds` passes over the
/// conjuncts. One pass per conjunct is cheap, but several conjuncts whose
/// solution sets are sparse and unrelated can need many passes.
pub fn solve_within(formula: &ConstraintFormula, rounds: u64) -> Option<Verdict> {
    Some(match minimal_witness(formula.conjuncts(), rounds)? {
        Some(n) => Verdict::sat_at(n),
        None => Verdict::unsat(),
    })
}

/// Enumerates the (at most four) assignments; the first satisfying one in
/// (attacker true first, sanitized false first) order is the witness.
pub fn solve_boolean(formula: &BooleanFormula) -> Verdict {
    for &attacker in formula.attacker_controls_string.domain().iter().rev() {
        for &sanitized in formula.qasm_sanitized.domain() {
            let a = BoolAssignment { attacker_controls_string: attacker, qasm_sanitized: sanitized };
            if formula.holds(a) {
                return Verdict::sat(Witness::Bool(a));
            }
        }
    }
    Verdict::unsat()
}

fn minimal_witness(conjuncts: &[Predicate], rounds: u64) -> Option<Option<u64>> {
    let mut x = 0u64;
    for _ in 0..rounds {
        let mut moved = false;
        for p in conjuncts {
            let Some(next) = next_satisfying(p, x) else { return Some(None) };
            if next > x {
                x = next;
                moved = true;
            }
        }
        if !moved {
            return Some(Some(x));
        }
    }
    None
}

/// Smallest `n >= from` with `p(n)` true.
pub(crate) fn next_satisfying(p: &Predicate, from: u64) -> Option<u64> {
    let (a1, b1) = p.lhs.affine();
    let (a2, b2) = p.rhs.affine();
    match (a1, a2) {
        (0, 0) => p.cmp.holds(b1, b2).then_some(from),
        (_, 0) => next_in_value_range(a1, b1, value_range(p.cmp, b2)?, from),
        (0, _) => next_in_value_range(a2, b2, value_range(p.cmp.flipped(), b1)?, from),
        _ if p.cmp == Cmp::Eq => {
            // a1*n + b1 = a2*n + b2  iff  (a1 - a2)*n + (b1 - b2) = 0, all mod 2^64.
            let slope = a1.wrapping_sub(a2);
            let intercept = b1.wrapping_sub(b2);
            if slope == 0 {
                (intercept == 0).then_some(from)
            } else {
                next_in_value_range(slope, intercept, (0, 0), from)
            }
        }
        _ => next_ordered(p, from),
    }
}

/// Values `v` with `v CMP c`, as an inclusive range, or `None` when empty.
fn value_range(cmp: Cmp, c: u64) -> Option<(u64, u64)> {
    match cmp {
        Cmp::Lt => c.checked_sub(1).map(|hi| (0, hi)),
        Cmp::Le => Some((0, c)),
        Cmp::Ge => Some((c, u64::MAX)),
        Cmp::Gt => c.checked_add(1).map(|lo| (lo, u64::MAX)),
        Cmp::Eq => Some((c, c)),
    }
}

/// Smallest `n >= from` with `(a*n + b) mod 2^64` in `[lo, hi]`.
fn next_in_value_range(a: u64, b: u64, (lo, hi): (u64, u64), from: u64) -> Option<u64> {
    // Shift to n = from + t; the start value is (a*from + b) mod 2^64.
    let start = a.wrapping_mul(from).wrapping_add(b) as u128;
    let lo = (lo as u128 + MODULUS - start) % MODULUS;
    let hi = (hi as u128 + MODULUS - start) % MODULUS;
    let t = if lo <= hi {
        first_multiple_in_range(a as u128, MODULUS, lo, hi)
    } else {
        // The shifted range wraps past zero, and t = 0 lands in [0, hi].
        Some(0)
    }?;
    let n = from as u128 + t;
    (n < MODULUS).then_some(n as u64)
}

/// Smallest `t >= 0` with `(a*t) mod m` in `[lo, hi]`, where `lo <= hi < m`.
///
/// Either some multiple of `a` lands in `[lo, hi]` before the first wrap, or
/// we need the fewest wraps `y` such that a multiple of `a` falls into
/// `[lo + m*y, hi + m*y]`. Writing `lo = p*a + lo'` and `hi = p*a + hi'`,
/// that holds exactly when `(m*y) mod a` is in `[a - hi', a - lo']`, which is
/// the same problem with `(m mod a, a)` in place of `(a, m)`, so the depth
/// follows Euclid's algorithm.
pub(crate) fn first_multiple_in_range(a: u128, m: u128, lo: u128, hi: u128) -> Option<u128> {
    debug_assert!(lo <= hi && hi < m);
    if lo == 0 {
        return Some(0);
    }
    let a = a % m;
    if a == 0 {
        return None;
    }
    let t = lo.div_ceil(a);
    if a * t <= hi {
        return Some(t);
    }
    // No multiple of a in [lo, hi]: hi - lo < a and 0 < lo % a <= hi % a.
    let y = first_multiple_in_range(m % a, a, a - hi % a, a - lo % a)?;
    Some((lo + m * y).div_ceil(a))
}

/// Both sides depend on `n` and `p.cmp` is an ordering.
///
/// With `x` the lhs, `y` the rhs and `d = y - x` (mod 2^64), the predicate
/// can be read as a relation between any two of them: `x cmp y`, or `y` against
/// `d` because `x <= y` iff `d <= y`. The side whose slope is closest to zero
/// is tracked by its range over a window, the other is searched exactly.
fn next_ordered(p: &Predicate, from: u64) -> Option<u64> {
    let x = p.lhs.affine();
    let y = p.rhs.affine();
    let d = (y.0.wrapping_sub(x.0), y.1.wrapping_sub(x.1));
    if d.0 == 0 {
        // Equal slopes: x and y differ by the constant d.
        let range = match p.cmp {
            Cmp::Lt if d.1 == 0 => return None,
            Cmp::Ge if d.1 == 0 => return Some(from),
            Cmp::Lt | Cmp::Le => value_range(Cmp::Ge, d.1),
            _ => value_range(Cmp::Lt, d.1),
        }?;
        return next_in_value_range(y.0, y.1, range, from);
    }
    let check = |n: u64| p.holds(n);
    let mut best = [(x, y, p.cmp), (y, x, p.cmp.flipped())]
        .into_iter()
        .min_by_key(|&(_, t, _)| steepness(t.0))
        .expect("two candidates");
    let mut equal_at = None;
    if steepness(d.0) < steepness(best.1 .0) {
        best = match p.cmp {
            Cmp::Lt | Cmp::Le => (y, d, Cmp::Ge),
            _ => (y, d, Cmp::Lt),
        };
        if p.cmp == Cmp::Ge {
            // x >= y also holds wherever d == 0, which `d > y` misses.
            equal_at = if d.0 == 0 { (d.1 == 0).then_some(from) } else { next_in_value_range(d.0, d.1, (0, 0), from) };
        }
    }
    let (s, t, rel) = best;
    let found = branch_and_bound(s, t, rel, from, &check);
    match (found, equal_at) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// Distance of a slope from zero when read as a signed 64-bit step.
fn steepness(a: u64) -> u64 {
    a.min(a.wrapping_neg())
}

/// Smallest `n >= from` with `check(n)`, where `check(n)` implies `s(n) rel t(n)`.
///
/// A window is dropped when no `n` in it has `s(n) rel v` for any `v` in the
/// range `t` takes over the window. Otherwise the first such `n` is tested and
/// the rest of the window is halved, left half first.
fn branch_and_bound(s: (u64, u64), t: (u64, u64), rel: Cmp, from: u64, check: &dyn Fn(u64) -> bool) -> Option<u64> {
    let mut stack = vec![(from as u128, MODULUS)];
    while let Some((lo, hi)) = stack.pop() {
        let (tmin, tmax) = term_range(t, lo, hi);
        let range = match rel {
            Cmp::Lt => tmax.checked_sub(1).map(|hi| (0, hi)),
            Cmp::Le => Some((0, tmax)),
            Cmp::Gt => tmin.checked_add(1).map(|lo| (lo, u64::MAX)),
            Cmp::Ge => Some((tmin, u64::MAX)),
            Cmp::Eq => unreachable!("equalities are solved directly"),
        };
        let Some(n) = range.and_then(|r| next_in_value_range(s.0, s.1, r, lo as u64)) else {
            continue;
        };
        let n = n as u128;
        if n >= hi {
            continue;
        }
        if check(n as u64) {
            return Some(n as u64);
        }
        let mid = n + 1 + (hi - n - 1) / 2;
        for w in [(mid, hi), (n + 1, mid)] {
            if w.0 < w.1 {
                stack.push(w);
            }
        }
    }
    None
}

/// Inclusive range of `(a*n + b) mod 2^64` over `n` in `[lo, hi)`.
fn term_range((a, b): (u64, u64), lo: u128, hi: u128) -> (u64, u64) {
    if a == 0 {
        return (b, b);
    }
    if a > u64::MAX / 2 {
        // Read the term through its complement u64::MAX - v, which rises.
        let (cmin, cmax) = term_range((a.wrapping_neg(), u64::MAX - b), lo, hi);
        return (u64::MAX - cmax, u64::MAX - cmin);
    }
    let first = a as u128 * lo + b as u128;
    let last = a as u128 * (hi - 1) + b as u128;
    if first / MODULUS != last / MODULUS {
        return (0, u64::MAX);
    }
    ((first % MODULUS) as u64, (last % MODULUS) as u64)
}

/// The 64-entry power-of-two lookup table in the C++ statevector allocator.
pub const BITS_TABLE_LEN: u64 = 64;

/// Index reached by `set_num_qubits(2 * n)` and whether it runs off the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingIndex {
    pub index: u64,
    pub oob: bool,
}

pub fn simulate_doubling_index(n: u64) -> DoublingIndex {
    let index = n.wrapping_mul(2);
    DoublingIndex { index, oob: index >= BITS_TABLE_LEN }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::formula::{parse_formula, Term};
    use proptest::prelude::*;

    fn solve_text(text: &str) -> Verdict {
        solve(&parse_formula(text).unwrap())
    }

    // Independent oracle: evaluate the formula directly on every candidate.
    fn brute_force(f: &ConstraintFormula, limit: u64) -> Option<u64> {
        (0..limit).find(|&n| f.holds(n))
    }

    fn brute_first_multiple(a: u128, m: u128, lo: u128, hi: u128) -> Option<u128> {
        (0..m).find(|&t| (a * t % m) >= lo && (a * t % m) <= hi)
    }

    #[test]
    fn out_of_bounds_index_witness() {
        assert_eq!(solve_text("n >= 64"), Verdict::sat_at(64));
    }

    #[test]
    fn doubling_chain_witness() {
        assert_eq!(solve_text("n < 64 && 2*n >= 64"), Verdict::sat_at(32));
        assert_eq!(solve_text("2*n >= 64"), Verdict::sat_at(32));
    }

    #[test]
    fn python_allocation_witnesses() {
        assert_eq!(solve_text("n >= 40"), Verdict::sat_at(40));
        assert_eq!(solve_text("n >= 30"), Verdict::sat_at(30));
    }

    #[test]
    fn shift_by_successor_wraps_first() {
        // u64::MAX + 1 wraps to 0, so the only solutions are 63..MAX-1.
        assert_eq!(solve_text("n + 1 >= 64"), Verdict::sat_at(63));
    }

    #[test]
    fn empty_interval_is_unsat() {
        assert_eq!(solve_text("n >= 64 && n < 32"), Verdict::unsat());
    }

    #[test]
    fn three_way_conjunction_matches_oracle() {
        let f = parse_formula("2*n >= 64 && n < 64 && n + 1 >= 64").unwrap();
        let oracle = brute_force(&f, 128);
        assert_eq!(oracle, Some(63));
        assert_eq!(solve(&f), Verdict::sat_at(63));
    }

    #[test]
    fn wraparound_witness() {
        let v = solve_text("2*n == 0 && n > 0");
        assert_eq!(v, Verdict::sat_at(1 << 63));
        assert!(parse_formula("2*n == 0 && n > 0").unwrap().holds(1 << 63));
    }

    #[test]
    fn large_witness_beyond_any_brute_force() {
        // 3n mod 2^64 < 2 has solutions 0 and the inverse-of-3 point; excluding 0:
        let f = parse_formula("3*n < 2 && n > 0").unwrap();
        let v = solve(&f);
        let Some(Witness::Int(w)) = v.witness else { panic!("expected SAT") };
        assert!(f.holds(w));
        assert_eq!(w.wrapping_mul(3), 1);
    }

    #[test]
    fn unsatisfiable_modular_equation() {
        assert_eq!(solve_text("2*n == 1"), Verdict::unsat());
        assert_eq!(solve_text("0*n == 1"), Verdict::unsat());
        assert_eq!(solve_text("n > 18446744073709551615"), Verdict::unsat());
        assert_eq!(solve_text("n < 0"), Verdict::unsat());
    }

    #[test]
    fn both_sides_variable() {
        assert_eq!(solve_text("2*n > n + 5"), Verdict::sat_at(6));
        assert_eq!(solve_text("n == n + 1"), Verdict::unsat());
        // n + 1 < n only when n + 1 wraps.
        assert_eq!(solve_text("n + 1 < n"), Verdict::sat_at(u64::MAX));
    }

    #[test]
    fn two_sided_equation_with_large_slope() {
        // 1511666660*n = 0 mod 2^64 first holds past zero at n = 2^62.
        assert_eq!(solve_text("6*n == 1511666666*n && n > 1"), Verdict::sat_at(1 << 62));
        assert_eq!(solve_text("3*n == n + 1"), Verdict::unsat());
        assert_eq!(solve_text("n + 5 == n + 5 && n > 9"), Verdict::sat_at(10));
    }

    #[test]
    fn two_sided_ordering_with_steep_slopes() {
        // -n < n first holds just past the midpoint.
        assert_eq!(solve_text("18446744073709551615*n < n"), Verdict::sat_at((1 << 63) + 1));
        assert_eq!(solve_text("18446744073709551615*n > n"), Verdict::sat_at(1));
        // Witnesses below were found by exhaustive search.
        assert_eq!(solve_text("n > 4177076707677777777*n"), Verdict::sat_at(5083357008));
        let steep = "4177076707677777777*n < 4177076707677777776*n";
        assert_eq!(solve_text(steep), Verdict::sat_at(5083357008));
        assert_eq!(solve_text("4177076707677777777*n >= 4177076707677777776*n"), Verdict::sat_at(0));
        assert_eq!(solve_text("n + 1 <= n"), Verdict::sat_at(u64::MAX));
        assert_eq!(solve_text("n < n"), Verdict::unsat());
        let tail = "n >= n + 74 && 18446744073709551611*n >= 18446744073709551606*n";
        assert_eq!(solve_text(tail), Verdict::unsat());
    }

    #[test]
    fn round_budget() {
        let f = parse_formula("n >= 40 && 2*n <= 100").unwrap();
        assert_eq!(solve_within(&f, 2), Some(Verdict::sat_at(40)));
        let sparse = parse_formula("n >= 111010666560666*n && n >= 1110666560666*n && n > 1").unwrap();
        assert_eq!(solve_within(&sparse, 100), None);
    }

    #[test]
    fn boolean_model() {
        let pinned =
            BooleanFormula { attacker_controls_string: BoolVar::Fixed(true), qasm_sanitized: BoolVar::Fixed(false) };
        assert!(solve_boolean(&pinned).is_sat());
        let mitigated =
            BooleanFormula { attacker_controls_string: BoolVar::Free, qasm_sanitized: BoolVar::Fixed(true) };
        assert_eq!(solve_boolean(&mitigated), Verdict::unsat());
        let free = BooleanFormula { attacker_controls_string: BoolVar::Free, qasm_sanitized: BoolVar::Free };
        assert_eq!(
            solve_boolean(&free).witness,
            Some(Witness::Bool(BoolAssignment { attacker_controls_string: true, qasm_sanitized: false }))
        );
    }

    #[test]
    fn doubling_index_boundary() {
        assert_eq!(simulate_doubling_index(32), DoublingIndex { index: 64, oob: true });
        assert_eq!(simulate_doubling_index(31), DoublingIndex { index: 62, oob: false });
        assert_eq!(simulate_doubling_index(0), DoublingIndex { index: 0, oob: false });
    }

    #[test]
    fn first_multiple_exhaustive_small_moduli() {
        for m in 1u128..=24 {
            for a in 0..m {
                for lo in 0..m {
                    for hi in lo..m {
                        assert_eq!(
                            first_multiple_in_range(a, m, lo, hi),
                            brute_first_multiple(a, m, lo, hi),
                            "a={a} m={m} [{lo},{hi}]"
                        );
                    }
                }
            }
        }
    }

    fn term() -> impl Strategy<Value = Term> {
        prop_oneof![
            (0u64..=256).prop_map(Term::Const),
            Just(Term::Var),
            (0u64..=16).prop_map(Term::Scaled),
            (0u64..=256).prop_map(Term::Offset),
            (0u64..=u64::MAX).prop_map(Term::Const),
            (0u64..=u64::MAX).prop_map(Term::Offset),
            (0u64..=u64::MAX).prop_map(Term::Scaled),
            (1u64..=16).prop_map(|c| Term::Scaled(c.wrapping_neg())),
        ]
    }

    fn cmp() -> impl Strategy<Value = Cmp> {
        prop_oneof![Just(Cmp::Lt), Just(Cmp::Le), Just(Cmp::Ge), Just(Cmp::Gt), Just(Cmp::Eq)]
    }

    proptest! {
        #[test]
        fn first_multiple_matches_brute_force(m in 1u128..400, a in 0u128..400, lo in 0u128..400, span in 0u128..400) {
            let a = a % m;
            let lo = lo % m;
            let hi = (lo + span).min(m - 1);
            prop_assert_eq!(first_multiple_in_range(a, m, lo, hi), brute_first_multiple(a, m, lo, hi));
        }

        #[test]
        fn next_satisfying_is_minimal(lhs in term(), c in cmp(), rhs in term(), from in 0u64..2048) {
            let p = Predicate::new(lhs, c, rhs);
            let expected = (from..from + 4096).find(|&n| p.holds(n));
            match next_satisfying(&p, from) {
                Some(n) if n < from + 4096 => prop_assert_eq!(Some(n), expected),
                Some(n) => {
                    prop_assert!(expected.is_none());
                    prop_assert!(p.holds(n));
                }
                None => prop_assert!(expected.is_none()),
            }
        }

        #[test]
        fn solve_agrees_with_oracle(preds in prop::collection::vec((term(), cmp(), term()), 1..4)) {
            let f = ConstraintFormula::new(
                preds.into_iter().map(|(l, c, r)| Predicate::new(l, c, r)).collect()
            ).unwrap();
            let limit = 1 << 12;
            let oracle = brute_force(&f, limit);
            // Sparse conjunctions with full-width slopes can run long; those are skipped.
            let verdict = solve_within(&f, 20_000);
            prop_assume!(verdict.is_some());
            match (oracle, verdict.unwrap().witness) {
                (Some(n), w) => prop_assert_eq!(w, Some(Witness::Int(n))),
                (None, Some(Witness::Int(w))) => {
                    prop_assert!(w >= limit);
                    prop_assert!(f.holds(w));
                }
                (None, None) => {}
                (None, Some(other)) => prop_assert!(false, "unexpected witness {:?}", other),
            }
        }
    }
}
