//! Exhaustive checkers for statements about long zero-sumfree sequences.
//!
//! Each checker enumerates every zero-sumfree sequence in the qualifying
//! length range and reports the lexicographically least violation, if any.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::constructions;
use crate::formulas;
use crate::group::AbelianGroup;
use crate::search::{self, ClaimValue, Flow, Node, Runtime, SearchBudget, Space};
use crate::seq::GSequence;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    /// `k(S) ≤ Σ (n_i−1)/n_i` for zero-sumfree `|S| ≥ d*(G)`.
    CrossNumber,
    /// `|S| ≤ Σ (ν_i−1)` for zero-sumfree `S` with `k(S) ≥ k*(G)`.
    Dual,
    /// `n_1 | ord(g)` for every `g` in a zero-sumfree `S` above a threshold.
    OrderDivisibility,
    /// Every element of a zero-sumfree `|S| ≥ d(G)−p+2` has height 1.
    Heights,
    /// A zero-sumfree `|S| = d(G)` has at least `exp(G)−1` elements of
    /// maximal order.
    CorollaryMaxOrder,
    /// `Γ_δ(G)` equals the upper bound.
    GammaConjecture,
    /// `Σ α(g) ≤ d(G)` for every zero-sumfree `S`.
    Olson,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        CheckKind::CrossNumber,
        CheckKind::Dual,
        CheckKind::OrderDivisibility,
        CheckKind::Heights,
        CheckKind::CorollaryMaxOrder,
        CheckKind::GammaConjecture,
        CheckKind::Olson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::CrossNumber => "cross-number",
            CheckKind::Dual => "dual",
            CheckKind::OrderDivisibility => "order-divisibility",
            CheckKind::Heights => "heights",
            CheckKind::CorollaryMaxOrder => "corollary-max-order",
            CheckKind::GammaConjecture => "gamma-conjecture",
            CheckKind::Olson => "olson",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Whether the check needs a p-group.
    pub fn requires_p_group(self) -> bool {
        matches!(
            self,
            CheckKind::Heights | CheckKind::CorollaryMaxOrder | CheckKind::GammaConjecture | CheckKind::Olson
        )
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Counterexample,
    BudgetExceeded,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Counterexample => "counterexample",
            Verdict::BudgetExceeded => "budget-exceeded",
        }
    }
}

/// Outcome of one checker run.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub kind: CheckKind,
    pub group: AbelianGroup,
    pub delta: Option<u64>,
    /// Shortest length examined.
    pub min_length: u64,
    /// Longest length examined, when bounded in advance.
    pub max_length: Option<u64>,
    pub verdict: Verdict,
    pub counterexample: Option<GSequence>,
    /// The statement is a theorem for this group and parameter set, so a
    /// counterexample points at this code rather than at the mathematics.
    pub proven: bool,
    pub implementation_bug: bool,
    pub nodes: u64,
    /// Sequences in the qualifying length range.
    pub sequences_checked: u64,
    /// Named values computed along the way (`Γ_δ` and its bounds).
    pub values: Vec<(&'static str, ClaimValue)>,
    pub elapsed_seconds: Option<f64>,
    pub note: Option<String>,
}

impl CheckReport {
    fn new(kind: CheckKind, group: &AbelianGroup, min_length: u64, max_length: Option<u64>) -> Self {
        CheckReport {
            kind,
            group: group.clone(),
            delta: None,
            min_length,
            max_length,
            verdict: Verdict::Verified,
            counterexample: None,
            proven: false,
            implementation_bug: false,
            nodes: 0,
            sequences_checked: 0,
            values: Vec::new(),
            elapsed_seconds: None,
            note: None,
        }
    }

    pub fn value(&self, name: &str) -> Option<ClaimValue> {
        self.values.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    /// Re-run the violated predicate on the stored counterexample with the
    /// sequence-level routines only. `Ok(())` when there is nothing to
    /// reproduce or the violation is reproduced.
    pub fn reverify(&self) -> Result<()> {
        let Some(seq) = &self.counterexample else {
            return match self.verdict {
                Verdict::Counterexample => Err(Error::WitnessRejected(
                    "counterexample verdict without a witness".into(),
                )),
                _ => Ok(()),
            };
        };
        let reject = |why: &str| Err(Error::WitnessRejected(format!("{seq}: {why}")));
        if !seq.is_zero_sumfree() {
            return reject("not zero-sumfree");
        }
        let len = seq.len() as u64;
        if len < self.min_length || self.max_length.is_some_and(|m| len > m) {
            return reject("length outside the checked range");
        }
        let group = seq.group();
        let violated = match self.kind {
            CheckKind::CrossNumber => seq.cross_number() > formulas::invariant_cross_bound(group),
            CheckKind::Dual => {
                seq.cross_number() >= formulas::k_star(group)
                    && len > formulas::primary_length_bound(group)
            }
            CheckKind::OrderDivisibility => {
                let n1 = group.invariant_factors()[0];
                seq.counts().any(|(g, _)| group.order_unchecked(&g) % n1 != 0)
            }
            CheckKind::Heights => {
                let mut any = false;
                for (g, _) in seq.counts() {
                    any |= group.height(&g)? != 1;
                }
                any
            }
            CheckKind::CorollaryMaxOrder => (seq.max_order_count() as u64) < group.exponent() - 1,
            CheckKind::Olson => formulas::olson_predicate(seq)?,
            CheckKind::GammaConjecture => {
                let delta = self.delta.ok_or(Error::WitnessRejected("missing δ".into()))?;
                seq.max_order_count() as u64 != formulas::gamma_upper(group, delta)?
            }
        };
        if violated {
            Ok(())
        } else {
            reject("does not violate the checked statement")
        }
    }
}

/// Enumerate zero-sumfree sequences with `min_len ≤ |S| ≤ max_len` and
/// record the first one for which `violates` holds.
fn scan<R, P>(
    report: &mut CheckReport,
    budget: &SearchBudget,
    runtime: &R,
    violates: P,
) -> Result<()>
where
    R: Runtime,
    P: Fn(&Node<'_>) -> bool + Sync,
{
    let space = Space::zero_sumfree(&report.group);
    let min_len = report.min_length as usize;
    let max_len = report.max_length.map_or(usize::MAX, |m| m as usize);
    let started = runtime.elapsed_seconds();
    type Acc = (u64, Option<Vec<usize>>);
    let run = space.explore(max_len, budget, runtime, || (0u64, None), |acc: &mut Acc, node| {
        if node.len() >= min_len {
            acc.0 += 1;
            if acc.1.is_none() && violates(node) {
                acc.1 = Some(node.ranks().to_vec());
            }
        }
        Flow::Descend
    });
    report.elapsed_seconds = elapsed(runtime, started);
    let run = match run {
        Ok(run) => run,
        Err(Error::BudgetExceeded { nodes, .. }) => {
            report.verdict = Verdict::BudgetExceeded;
            report.nodes = nodes;
            report.note = Some(format!("budget exhausted after {nodes} nodes"));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    report.nodes = run.nodes;
    // the empty sequence is zero-sumfree and qualifies when min_len = 0
    report.sequences_checked = u64::from(min_len == 0);
    for (count, violation) in run.per_root {
        report.sequences_checked += count;
        if report.counterexample.is_none() {
            if let Some(ranks) = violation {
                report.counterexample = Some(GSequence::from_ranks(&report.group, &ranks));
            }
        }
    }
    if report.counterexample.is_some() {
        report.verdict = Verdict::Counterexample;
        report.implementation_bug = report.proven;
    }
    Ok(())
}

fn elapsed<R: Runtime>(runtime: &R, started: Option<f64>) -> Option<f64> {
    Some(runtime.elapsed_seconds()? - started?)
}

fn p_group_length(group: &AbelianGroup) -> Option<u64> {
    formulas::davenport_p_group(group).ok()
}

/// Groups for which the cross-number bound is known: p-groups, cyclic
/// groups, rank two, and `C_2 ⊕ C_2 ⊕ C_2n`.
fn cross_bound_known(group: &AbelianGroup) -> bool {
    let f = group.invariant_factors();
    group.is_p_group()
        || f.len() <= 2
        || (f.len() == 3 && f[0] == 2 && f[1] == 2 && f[2] % 2 == 0)
}

pub fn check_cross_number_conjecture<R: Runtime>(
    group: &AbelianGroup,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        CheckKind::CrossNumber,
        group,
        formulas::d_star(group),
        p_group_length(group),
    );
    report.proven = cross_bound_known(group);
    let exp = group.exponent();
    let bound: u64 = group.invariant_factors().iter().map(|&n| (n - 1) * (exp / n)).sum();
    scan(&mut report, budget, runtime, |node| node.scaled_cross_number() > bound)?;
    Ok(report)
}

pub fn check_dual_conjecture<R: Runtime>(
    group: &AbelianGroup,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(CheckKind::Dual, group, 1, p_group_length(group));
    report.proven = group.is_p_group();
    let exp = group.exponent();
    let parts = group.primary_decomposition();
    let k_star_scaled: u64 = parts.iter().map(|&q| (q - 1) * (exp / q)).sum();
    let length_bound = formulas::primary_length_bound(group) as usize;
    scan(&mut report, budget, runtime, |node| {
        node.len() > length_bound && node.scaled_cross_number() >= k_star_scaled
    })?;
    Ok(report)
}

/// Default threshold for [`check_order_divisibility`]: `d(G) − p + 2` for
/// p-groups, `d*(G)` otherwise.
pub fn default_order_threshold(group: &AbelianGroup) -> u64 {
    match (group.prime(), p_group_length(group)) {
        (Some(p), Some(d)) => d + 2 - p,
        _ => formulas::d_star(group),
    }
}

pub fn check_order_divisibility<R: Runtime>(
    group: &AbelianGroup,
    threshold: u64,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(CheckKind::OrderDivisibility, group, threshold, p_group_length(group));
    let d_star = formulas::d_star(group);
    report.proven = match (group.prime(), p_group_length(group)) {
        (Some(p), Some(d)) => threshold + p >= d + 2,
        _ => threshold >= d_star && (group.rank() <= 2 || cross_bound_known(group)),
    };
    let n1 = group.invariant_factors()[0];
    let space_group = group.clone();
    let bad: Vec<bool> = space_group
        .elements()
        .map(|g| space_group.order_unchecked(&g) % n1 != 0)
        .collect();
    scan(&mut report, budget, runtime, |node| node.ranks().iter().any(|&r| bad[r]))?;
    Ok(report)
}

pub fn check_heights<R: Runtime>(
    group: &AbelianGroup,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<CheckReport> {
    let p = group.prime().ok_or(Error::NotPGroup)?;
    let d = formulas::davenport_p_group(group)?;
    let mut report = CheckReport::new(CheckKind::Heights, group, d + 2 - p, Some(d));
    report.proven = true;
    let tall: Vec<bool> = group
        .elements()
        .map(|g| !g.is_zero() && group.height(&g).expect("nonzero in a p-group") != 1)
        .collect();
    scan(&mut report, budget, runtime, |node| node.ranks().iter().any(|&r| tall[r]))?;
    Ok(report)
}

pub fn check_corollary_max_order<R: Runtime>(
    group: &AbelianGroup,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<CheckReport> {
    let d = formulas::davenport_p_group(group)?;
    let mut report = CheckReport::new(CheckKind::CorollaryMaxOrder, group, d, Some(d));
    report.proven = true;
    let need = (group.exponent() - 1) as usize;
    scan(&mut report, budget, runtime, |node| node.max_order_count() < need)?;
    Ok(report)
}

/// Exhaustive contrapositive of Olson's theorem: no zero-sumfree sequence
/// has height sum above `d(G)`.
pub fn check_olson<R: Runtime>(
    group: &AbelianGroup,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<CheckReport> {
    let d = formulas::davenport_p_group(group)?;
    let mut report = CheckReport::new(CheckKind::Olson, group, 1, Some(d));
    report.proven = true;
    let heights: Vec<u64> = group
        .elements()
        .map(|g| if g.is_zero() { 0 } else { group.height(&g).expect("p-group") })
        .collect();
    scan(&mut report, budget, runtime, |node| {
        node.ranks().iter().map(|&r| heights[r]).sum::<u64>() > d
    })?;
    Ok(report)
}

/// Compare `Γ_δ(G)` from the search oracle with the upper bound. Values
/// `gamma_exact`, `gamma_lower` and `gamma_upper` are attached to the report.
pub fn check_gamma_conjecture<R: Runtime>(
    group: &AbelianGroup,
    delta: u64,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<CheckReport> {
    let bounds = formulas::gamma_bounds(group, delta)?;
    let d = formulas::davenport_p_group(group)?;
    let mut report = CheckReport::new(CheckKind::GammaConjecture, group, d - delta, Some(d - delta));
    report.delta = Some(delta);
    let (p, _) = group.require_p_group()?;
    let j0 = formulas::j0(group)?;
    report.proven = j0 == group.rank() || (j0 == 1 && delta + 2 <= p);
    report.values.push(("gamma_lower", ClaimValue::Integer(bounds.lower)));
    report.values.push(("gamma_upper", ClaimValue::Integer(bounds.upper)));

    let started = runtime.elapsed_seconds();
    let found = search::gamma_exact(group, delta, budget, runtime);
    report.elapsed_seconds = elapsed(runtime, started);
    let found = match found {
        Ok(found) => found,
        Err(Error::BudgetExceeded { nodes, .. }) => {
            report.verdict = Verdict::BudgetExceeded;
            report.nodes = nodes;
            report.note = Some(format!("budget exhausted after {nodes} nodes"));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.nodes = found.nodes;
    report.sequences_checked = found.nodes;
    report.values.push(("gamma_exact", ClaimValue::Integer(found.value)));

    if found.value < bounds.lower {
        // the lower bound is a theorem for every p-group
        report.verdict = Verdict::Counterexample;
        report.implementation_bug = true;
        report.counterexample = Some(found.witness.sequence);
        report.note = Some(format!("search value {} below the lower bound {}", found.value, bounds.lower));
    } else if found.value > bounds.upper {
        // the explicit construction attains the upper bound, so the search missed it
        report.verdict = Verdict::Counterexample;
        report.implementation_bug = true;
        report.counterexample = Some(constructions::gamma_extremal_sequence(group, delta)?);
        report.note = Some(format!("search value {} above the constructed {}", found.value, bounds.upper));
    } else if found.value < bounds.upper {
        report.verdict = Verdict::Counterexample;
        report.implementation_bug = report.proven;
        report.counterexample = Some(found.witness.sequence);
    }
    Ok(report)
}

/// Run one check with its default parameters. `delta` is required for the
/// Γ check and `threshold` overrides the order-divisibility default.
pub fn run_check<R: Runtime>(
    kind: CheckKind,
    group: &AbelianGroup,
    delta: Option<u64>,
    threshold: Option<u64>,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<CheckReport> {
    if kind.requires_p_group() && !group.is_p_group() {
        return Err(Error::NotPGroup);
    }
    match kind {
        CheckKind::CrossNumber => check_cross_number_conjecture(group, budget, runtime),
        CheckKind::Dual => check_dual_conjecture(group, budget, runtime),
        CheckKind::OrderDivisibility => {
            let t = threshold.unwrap_or_else(|| default_order_threshold(group));
            check_order_divisibility(group, t, budget, runtime)
        }
        CheckKind::Heights => check_heights(group, budget, runtime),
        CheckKind::CorollaryMaxOrder => check_corollary_max_order(group, budget, runtime),
        CheckKind::Olson => check_olson(group, budget, runtime),
        CheckKind::GammaConjecture => {
            let delta = delta.ok_or(Error::DeltaOutOfRange { delta: u64::MAX, max: 0 })?;
            check_gamma_conjecture(group, delta, budget, runtime)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::Sequential;

    fn grp(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f).unwrap()
    }

    fn b() -> SearchBudget {
        SearchBudget::default()
    }

    fn verified(r: &CheckReport) {
        assert_eq!(r.verdict, Verdict::Verified, "{} on {}: {:?}", r.kind, r.group, r.counterexample);
        assert!(r.counterexample.is_none());
        r.reverify().unwrap();
    }

    #[test]
    fn cross_number_examples() {
        for f in [&[2u64, 4][..], &[6], &[2]] {
            verified(&check_cross_number_conjecture(&grp(f), &b(), &Sequential).unwrap());
        }
    }

    #[test]
    fn dual_examples() {
        for f in [&[3u64, 3][..], &[6], &[2]] {
            verified(&check_dual_conjecture(&grp(f), &b(), &Sequential).unwrap());
        }
    }

    #[test]
    fn order_divisibility_examples() {
        verified(&check_order_divisibility(&grp(&[2, 4]), 4, &b(), &Sequential).unwrap());
        verified(&check_order_divisibility(&grp(&[9]), 8, &b(), &Sequential).unwrap());
        for n in [4u64, 6, 10, 12] {
            let g = grp(&[n]);
            verified(&check_order_divisibility(&g, formulas::d_star(&g), &b(), &Sequential).unwrap());
        }
        assert_eq!(default_order_threshold(&grp(&[2, 4])), 4);
        assert_eq!(default_order_threshold(&grp(&[9])), 7);
        assert_eq!(default_order_threshold(&grp(&[2, 6])), 6);
    }

    #[test]
    fn order_divisibility_fails_below_threshold() {
        let r = check_order_divisibility(&grp(&[4, 4]), 1, &b(), &Sequential).unwrap();
        assert_eq!(r.verdict, Verdict::Counterexample);
        assert!(!r.proven && !r.implementation_bug);
        r.reverify().unwrap();
    }

    #[test]
    fn heights_and_corollary_examples() {
        for f in [&[2u64, 4][..], &[9], &[2]] {
            verified(&check_heights(&grp(f), &b(), &Sequential).unwrap());
        }
        for f in [&[2u64, 4][..], &[3, 3], &[8]] {
            verified(&check_corollary_max_order(&grp(f), &b(), &Sequential).unwrap());
        }
        assert!(matches!(check_heights(&grp(&[6]), &b(), &Sequential), Err(Error::NotPGroup)));
    }

    #[test]
    fn gamma_conjecture_examples() {
        let g = grp(&[2, 4]);
        for delta in 0..4 {
            verified(&check_gamma_conjecture(&g, delta, &b(), &Sequential).unwrap());
        }
        let r = check_gamma_conjecture(&grp(&[2, 2]), 0, &b(), &Sequential).unwrap();
        verified(&r);
        assert_eq!(r.value("gamma_exact"), Some(ClaimValue::Integer(2)));
        for delta in [0, 1] {
            let r = check_gamma_conjecture(&grp(&[3, 3]), delta, &b(), &Sequential).unwrap();
            assert!(r.proven);
            verified(&r);
        }
    }

    #[test]
    fn budget_exhaustion_is_a_verdict() {
        let r = check_olson(&grp(&[2, 8]), &SearchBudget::with_nodes(10), &Sequential).unwrap();
        assert_eq!(r.verdict, Verdict::BudgetExceeded);
        assert!(r.counterexample.is_none());
    }

    #[test]
    fn check_names_round_trip() {
        for k in CheckKind::ALL {
            assert_eq!(CheckKind::from_name(k.name()), Some(k));
        }
    }
}
