//! Exhaustive search oracles.
//!
//! Sequences are enumerated in canonical form (ranks nondecreasing) by a
//! depth-first search that carries the set of reachable subsums. A candidate
//! `g` may extend the current prefix only if no forbidden element becomes a
//! subsum, which for zero-sumfree sequences is the test `−g ∉ reachable`.
//!
//! The tree is split by the first (smallest) element of the sequence. Each
//! subtree is explored independently and results are merged in root order,
//! so values, witnesses and node counts do not depend on how the subtrees
//! were scheduled. Within a subtree the preorder is the lexicographic order
//! of rank vectors, which makes "first found" the lexicographically least.

use alloc::format;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicBool, AtomicU64, AtomicU8, Ordering};

use crate::formulas::{self, DivisorPair};
use crate::group::AbelianGroup;
use crate::rational::ExactRational;
use crate::seq::{BitSet, GSequence, OrderMode};
use crate::{BudgetLimit, Error, Result};

/// Limits for a single search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBudget {
    /// Total tree nodes across all subtrees.
    pub max_nodes: u64,
    /// Wall-clock limit; only enforced by runtimes that have a clock.
    pub max_seconds: f64,
    /// Number of worker threads requested from the runtime.
    pub parallel_width: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 100_000_000,
            max_seconds: 300.0,
            parallel_width: 1,
        }
    }
}

impl SearchBudget {
    pub fn with_nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            ..Self::default()
        }
    }
}

/// Executes independent subtree tasks and optionally provides a clock.
pub trait Runtime: Sync {
    /// Run `f(0), …, f(tasks − 1)` and return the results in index order.
    fn map<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;

    /// Seconds since the runtime was started, if a clock is available.
    fn elapsed_seconds(&self) -> Option<f64> {
        None
    }
}

/// Runs every task on the calling thread. Has no clock, so time limits are
/// not enforced.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Runtime for Sequential {
    fn map<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..tasks).map(f).collect()
    }
}

/// What to do after visiting a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Descend,
    /// Skip the extensions of this node.
    Prune,
    /// Abandon the rest of this subtree.
    Stop,
}

/// A nonempty canonical sequence reached by the search.
pub struct Node<'a> {
    space: &'a Space,
    ranks: &'a [usize],
    subsums: &'a BitSet,
}

impl Node<'_> {
    /// Element ranks, nondecreasing.
    pub fn ranks(&self) -> &[usize] {
        self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn is_subsum(&self, rank: usize) -> bool {
        self.subsums.get(rank)
    }

    /// `k(S)·exp(G)`, an integer.
    pub fn scaled_cross_number(&self) -> u64 {
        self.ranks.iter().map(|&r| self.space.scaled_recip[r]).sum()
    }

    pub fn max_order_count(&self) -> usize {
        self.ranks.iter().filter(|&&r| self.space.is_max_order[r]).count()
    }

    pub fn to_sequence(&self) -> GSequence {
        GSequence::from_ranks(&self.space.group, self.ranks)
    }
}

/// Per-subtree accumulators from [`Space::explore`], in root order.
#[derive(Debug)]
pub struct Exploration<A> {
    pub per_root: Vec<A>,
    /// Total nodes visited.
    pub nodes: u64,
}

/// The search space: which elements may occur and which subsums are
/// forbidden.
#[derive(Clone, Debug)]
pub struct Space {
    group: AbelianGroup,
    universe: Vec<usize>,
    forbidden: Vec<usize>,
    scaled_recip: Vec<u64>,
    is_max_order: Vec<bool>,
}

const CLOCK_CHECK_INTERVAL: u64 = 1024;

impl Space {
    /// Zero-sumfree sequences over all of `G`.
    pub fn zero_sumfree(group: &AbelianGroup) -> Self {
        Self::build(group, (1..group.size()).collect(), alloc::vec![0])
    }

    /// Sequences over `G_d` with no nonempty subsum in `G_{d/d'}`.
    pub fn avoiding(group: &AbelianGroup, pair: DivisorPair) -> Result<Self> {
        pair.validate(group)?;
        let forbidden = group.subgroup_ranks(pair.quotient())?;
        let universe = group
            .subgroup_ranks(pair.d)?
            .into_iter()
            .filter(|r| forbidden.binary_search(r).is_err())
            .collect();
        Ok(Self::build(group, universe, forbidden))
    }

    fn build(group: &AbelianGroup, universe: Vec<usize>, forbidden: Vec<usize>) -> Self {
        let exp = group.exponent();
        let orders: Vec<u64> = group.elements().map(|g| group.order_unchecked(&g)).collect();
        Space {
            group: group.clone(),
            universe,
            forbidden,
            scaled_recip: orders.iter().map(|&o| exp / o).collect(),
            is_max_order: orders.iter().map(|&o| o == exp).collect(),
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// Number of subtrees (one per admissible first element).
    pub fn roots(&self) -> usize {
        self.universe.len()
    }

    #[inline]
    fn admissible(&self, reach: &BitSet, g: usize) -> bool {
        let neg = self.group.neg_rank(g);
        self.forbidden
            .iter()
            .all(|&f| !reach.get(self.group.add_ranks(f, neg)))
    }

    /// Visit every nonempty canonical sequence of length at most `max_len`
    /// in the space. `init` creates one accumulator per subtree and `visit`
    /// is called on each node in preorder.
    pub fn explore<R, A, I, V>(
        &self,
        max_len: usize,
        budget: &SearchBudget,
        runtime: &R,
        init: I,
        visit: V,
    ) -> Result<Exploration<A>>
    where
        R: Runtime,
        A: Send,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, &Node<'_>) -> Flow + Sync,
    {
        let shared = Shared {
            nodes: AtomicU64::new(0),
            abort: AtomicBool::new(false),
            reason: AtomicU8::new(0),
        };
        let results = runtime.map(self.roots(), |root| {
            let mut acc = init();
            let mut walker = Walker {
                space: self,
                budget,
                runtime,
                shared: &shared,
                local: 0,
            };
            let done = max_len > 0 && walker.walk(root, max_len, &mut acc, &visit);
            (acc, walker.local, done || max_len == 0)
        });

        let nodes = results.iter().map(|r| r.1).sum();
        let completed = results.iter().filter(|r| r.2).count();
        if completed < results.len() {
            let limit = if shared.reason.load(Ordering::Relaxed) == 2 {
                BudgetLimit::Seconds
            } else {
                BudgetLimit::Nodes
            };
            return Err(Error::BudgetExceeded {
                limit,
                nodes,
                completed_roots: completed,
                total_roots: results.len(),
            });
        }
        Ok(Exploration {
            per_root: results.into_iter().map(|r| r.0).collect(),
            nodes,
        })
    }
}

struct Shared {
    nodes: AtomicU64,
    abort: AtomicBool,
    reason: AtomicU8,
}

struct Walker<'a, R> {
    space: &'a Space,
    budget: &'a SearchBudget,
    runtime: &'a R,
    shared: &'a Shared,
    local: u64,
}

impl<R: Runtime> Walker<'_, R> {
    /// Count a node; `false` once the budget is exhausted.
    fn tick(&mut self) -> bool {
        if self.shared.abort.load(Ordering::Relaxed) {
            return false;
        }
        let total = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if total > self.budget.max_nodes {
            self.fail(1);
            return false;
        }
        self.local += 1;
        if self.local % CLOCK_CHECK_INTERVAL == 1 {
            if let Some(t) = self.runtime.elapsed_seconds() {
                if t > self.budget.max_seconds {
                    self.fail(2);
                    return false;
                }
            }
        }
        true
    }

    fn fail(&self, reason: u8) {
        let _ = self
            .shared
            .reason
            .compare_exchange(0, reason, Ordering::Relaxed, Ordering::Relaxed);
        self.shared.abort.store(true, Ordering::Relaxed);
    }

    /// Depth-first walk of the subtree whose smallest element is
    /// `universe[root]`. Returns `false` if the budget ran out.
    fn walk<A, V>(&mut self, root: usize, max_len: usize, acc: &mut A, visit: &V) -> bool
    where
        V: Fn(&mut A, &Node<'_>) -> Flow,
    {
        let space = self.space;
        let size = space.group.size();
        let universe = &space.universe;

        // tables[k] holds the subsums of the first k elements
        let mut tables: Vec<BitSet> = alloc::vec![BitSet::new(size), BitSet::new(size)];
        let mut ranks: Vec<usize> = alloc::vec![universe[root]];
        // cursor[k]: next universe index to try at depth k
        let mut cursor: Vec<usize> = alloc::vec![0, root];
        tables[1].set(universe[root]);

        if !self.tick() {
            return false;
        }
        let node = Node {
            space,
            ranks: &ranks,
            subsums: &tables[1],
        };
        match visit(acc, &node) {
            Flow::Descend if max_len > 1 => {}
            _ => return true,
        }

        let mut depth = 1;
        while depth > 0 {
            let start = cursor[depth];
            let next = (start..universe.len()).find(|&j| space.admissible(&tables[depth], universe[j]));
            let Some(j) = next else {
                depth -= 1;
                ranks.pop();
                continue;
            };
            cursor[depth] = j + 1;
            let g = universe[j];
            if tables.len() <= depth + 1 {
                tables.push(BitSet::new(size));
                cursor.push(0);
            }
            let (lo, hi) = tables.split_at_mut(depth + 1);
            hi[0].extend_from(&lo[depth], &space.group, g);
            ranks.push(g);
            depth += 1;
            cursor[depth] = j;

            if !self.tick() {
                return false;
            }
            let node = Node {
                space,
                ranks: &ranks,
                subsums: &tables[depth],
            };
            match visit(acc, &node) {
                Flow::Stop => return true,
                Flow::Descend if depth < max_len => {}
                _ => {
                    depth -= 1;
                    ranks.pop();
                }
            }
        }
        true
    }
}

/// The property a [`Witness`] supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClaimKind {
    /// A zero-sumfree sequence of length `d(G)`.
    LongestZeroSumfree,
    /// A zero-sumfree sequence of cross number `k(G)`.
    MaxCross,
    /// A zero-sumfree sequence of length `d(G) − δ` with `Γ_δ(G)` elements of
    /// maximal order.
    Gamma { delta: u64 },
    /// A sequence over `G_d` of length `D_(d',d)(G) − 1` with no subsum in
    /// `G_{d/d'}`.
    DPair { pair: DivisorPair },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClaimValue {
    Integer(u64),
    Rational(ExactRational),
}

/// A sequence backing a claimed extremal value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub sequence: GSequence,
    pub claim: ClaimKind,
    pub value: ClaimValue,
}

/// Result of a search oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found<T> {
    pub value: T,
    pub witness: Witness,
    pub nodes: u64,
}

fn reject(msg: alloc::string::String) -> Error {
    Error::WitnessRejected(msg)
}

impl Witness {
    pub fn group(&self) -> &AbelianGroup {
        self.sequence.group()
    }

    /// Check the witness from scratch: a fresh subsum table (and the
    /// all-subsets enumeration when `|S| ≤ 12`), then the claim-specific
    /// length or count.
    pub fn reverify(&self) -> Result<()> {
        let seq = &self.sequence;
        let group = seq.group();
        let forbidden = match self.claim {
            ClaimKind::DPair { pair } => {
                pair.validate(group)?;
                let in_gd = seq.order_filter(pair.d, OrderMode::Divides)?;
                if in_gd.len() != seq.len() {
                    return Err(reject(format!("{seq} has elements outside G_{}", pair.d)));
                }
                group.subgroup_ranks(pair.quotient())?
            }
            _ => alloc::vec![0],
        };
        let table = seq.subsums();
        if seq.len() <= 12 {
            let by_subsets = seq.subsums_by_subsets().expect("short sequence");
            if by_subsets != table {
                return Err(Error::Internal(format!(
                    "incremental subsums of {seq} disagree with subset enumeration"
                )));
            }
        }
        if let Some(f) = forbidden.iter().find(|&&f| table.contains_rank(f)) {
            return Err(reject(format!(
                "{seq} has forbidden subsum {}",
                group.element_at(*f)
            )));
        }
        match (self.claim, self.value) {
            (ClaimKind::LongestZeroSumfree, ClaimValue::Integer(d)) if seq.len() as u64 == d => {
                Ok(())
            }
            (ClaimKind::MaxCross, ClaimValue::Rational(k)) if seq.cross_number() == k => Ok(()),
            (ClaimKind::Gamma { delta }, ClaimValue::Integer(count)) => {
                let d = formulas::davenport_p_group(group)?;
                formulas::check_delta(group, delta)?;
                if seq.len() as u64 != d - delta {
                    return Err(reject(format!("length {} is not d(G) − δ = {}", seq.len(), d - delta)));
                }
                if seq.max_order_count() as u64 != count {
                    return Err(reject(format!(
                        "{seq} has {} elements of maximal order, claimed {count}",
                        seq.max_order_count()
                    )));
                }
                Ok(())
            }
            (ClaimKind::DPair { .. }, ClaimValue::Integer(value)) if seq.len() as u64 + 1 == value => {
                Ok(())
            }
            _ => Err(reject(format!("{seq} does not support {:?} = {:?}", self.claim, self.value))),
        }
    }
}

/// Longest sequence in `space`, lexicographically least among the longest.
fn longest_in<R: Runtime>(
    space: &Space,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<(Vec<usize>, u64)> {
    let run = space.explore(usize::MAX, budget, runtime, Vec::new, |best: &mut Vec<usize>, node| {
        if node.len() > best.len() {
            *best = node.ranks().to_vec();
        }
        Flow::Descend
    })?;
    let mut best: Vec<usize> = Vec::new();
    for candidate in run.per_root {
        if candidate.len() > best.len() {
            best = candidate;
        }
    }
    Ok((best, run.nodes))
}

/// Visit each canonical zero-sumfree sequence of exactly `length` elements.
/// Returns the number of visits. `visitor` may be called concurrently.
pub fn enumerate_zero_sumfree<R, F>(
    group: &AbelianGroup,
    length: usize,
    budget: &SearchBudget,
    runtime: &R,
    visitor: F,
) -> Result<u64>
where
    R: Runtime,
    F: Fn(&[usize]) + Sync,
{
    if length == 0 {
        visitor(&[]);
        return Ok(1);
    }
    let run = Space::zero_sumfree(group).explore(length, budget, runtime, || 0u64, |count, node| {
        if node.len() == length {
            visitor(node.ranks());
            *count += 1;
        }
        Flow::Descend
    })?;
    Ok(run.per_root.iter().sum())
}

/// Counts of zero-sumfree sequences by length, up to `max_len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    /// `by_length[l]` is the number of zero-sumfree sequences of length `l`;
    /// entry 0 counts the empty sequence.
    pub by_length: Vec<u64>,
    pub nodes: u64,
}

pub fn census<R: Runtime>(
    group: &AbelianGroup,
    max_len: usize,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<Census> {
    let run = Space::zero_sumfree(group).explore(max_len, budget, runtime, Vec::new, |counts: &mut Vec<u64>, node| {
        if counts.len() <= node.len() {
            counts.resize(node.len() + 1, 0);
        }
        counts[node.len()] += 1;
        Flow::Descend
    })?;
    let mut by_length = alloc::vec![1u64];
    for counts in run.per_root {
        if by_length.len() < counts.len() {
            by_length.resize(counts.len(), 0);
        }
        for (l, c) in counts.into_iter().enumerate().skip(1) {
            by_length[l] += c;
        }
    }
    Ok(Census {
        by_length,
        nodes: run.nodes,
    })
}

/// `d(G)` by exhaustive search, with the lexicographically least longest
/// zero-sumfree sequence.
pub fn longest_zero_sumfree<R: Runtime>(
    group: &AbelianGroup,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<Found<u64>> {
    let (ranks, nodes) = longest_in(&Space::zero_sumfree(group), budget, runtime)?;
    let value = ranks.len() as u64;
    Ok(Found {
        value,
        witness: Witness {
            sequence: GSequence::from_ranks(group, &ranks),
            claim: ClaimKind::LongestZeroSumfree,
            value: ClaimValue::Integer(value),
        },
        nodes,
    })
}

/// `k(G)` by exhaustive search over zero-sumfree sequences of every length.
pub fn max_cross_number<R: Runtime>(
    group: &AbelianGroup,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<Found<ExactRational>> {
    type Best = Option<(u64, Vec<usize>)>;
    let run = Space::zero_sumfree(group).explore(usize::MAX, budget, runtime, || None, |best: &mut Best, node| {
        let k = node.scaled_cross_number();
        if best.as_ref().is_none_or(|(b, _)| k > *b) {
            *best = Some((k, node.ranks().to_vec()));
        }
        Flow::Descend
    })?;
    let mut best: Best = None;
    for candidate in run.per_root.into_iter().flatten() {
        if best.as_ref().is_none_or(|(b, _)| candidate.0 > *b) {
            best = Some(candidate);
        }
    }
    let (scaled, ranks) = best.ok_or_else(|| Error::Internal("group has no nonzero element".into()))?;
    let value = ExactRational::new(scaled as i64, group.exponent() as i64).expect("exp > 0");
    Ok(Found {
        value,
        witness: Witness {
            sequence: GSequence::from_ranks(group, &ranks),
            claim: ClaimKind::MaxCross,
            value: ClaimValue::Rational(value),
        },
        nodes: run.nodes,
    })
}

/// `D_(d',d)(G)`: one more than the longest sequence over `G_d` with no
/// nonempty subsum in `G_{d/d'}`.
pub fn d_pair_bruteforce<R: Runtime>(
    group: &AbelianGroup,
    pair: DivisorPair,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<Found<u64>> {
    let (ranks, nodes) = longest_in(&Space::avoiding(group, pair)?, budget, runtime)?;
    let value = ranks.len() as u64 + 1;
    Ok(Found {
        value,
        witness: Witness {
            sequence: GSequence::from_ranks(group, &ranks),
            claim: ClaimKind::DPair { pair },
            value: ClaimValue::Integer(value),
        },
        nodes,
    })
}

/// `Γ_δ(G)` by exhaustive search over zero-sumfree sequences of length
/// exactly `d(G) − δ`.
///
/// Deleting an element keeps a sequence zero-sumfree and never raises its
/// count of maximal-order elements, so the minimum over lengths `≥ d(G) − δ`
/// is attained at `d(G) − δ`.
pub fn gamma_exact<R: Runtime>(
    group: &AbelianGroup,
    delta: u64,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<Found<u64>> {
    formulas::check_delta(group, delta)?;
    let length = (formulas::davenport_p_group(group)? - delta) as usize;
    type Best = Option<(usize, Vec<usize>)>;
    let run = Space::zero_sumfree(group).explore(length, budget, runtime, || None, |best: &mut Best, node| {
        let count = node.max_order_count();
        // extensions only add elements, so they cannot beat an equal count
        // found earlier in lexicographic order
        if best.as_ref().is_some_and(|(b, _)| count >= *b) {
            return Flow::Prune;
        }
        if node.len() == length {
            *best = Some((count, node.ranks().to_vec()));
        }
        Flow::Descend
    })?;
    let mut best: Best = None;
    for candidate in run.per_root.into_iter().flatten() {
        if best.as_ref().is_none_or(|(b, _)| candidate.0 < *b) {
            best = Some(candidate);
        }
    }
    let (count, ranks) = best.ok_or_else(|| {
        Error::Internal(format!("no zero-sumfree sequence of length {length} in {group}"))
    })?;
    let value = count as u64;
    Ok(Found {
        value,
        witness: Witness {
            sequence: GSequence::from_ranks(group, &ranks),
            claim: ClaimKind::Gamma { delta },
            value: ClaimValue::Integer(value),
        },
        nodes: run.nodes,
    })
}

/// `D(G)` by search, for groups without a closed form.
pub fn davenport_by_search<R: Runtime>(
    group: &AbelianGroup,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<u64> {
    Ok(longest_zero_sumfree(group, budget, runtime)?.value + 1)
}

/// [`formulas::d_pair_formula`], falling back to the search oracle for the
/// Davenport constant of reduced groups outside the closed-form classes.
pub fn d_pair_formula_or_oracle<R: Runtime>(
    group: &AbelianGroup,
    pair: DivisorPair,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<u64> {
    formulas::d_pair_formula_with(group, pair, |reduced| davenport_by_search(reduced, budget, runtime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use std::sync::Mutex;

    fn grp(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f).unwrap()
    }

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    fn collect(g: &AbelianGroup, len: usize) -> Vec<Vec<usize>> {
        let seen = Mutex::new(Vec::new());
        let n = enumerate_zero_sumfree(g, len, &budget(), &Sequential, |r| {
            seen.lock().unwrap().push(r.to_vec())
        })
        .unwrap();
        let seen = seen.into_inner().unwrap();
        assert_eq!(n as usize, seen.len());
        seen
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(collect(&grp(&[3]), 2), vec![vec![1, 1], vec![2, 2]]);
        assert_eq!(collect(&grp(&[2]), 1), vec![vec![1]]);
        assert_eq!(collect(&grp(&[2, 2]), 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(collect(&grp(&[2, 2]), 0), vec![Vec::<usize>::new()]);
        assert!(collect(&grp(&[2, 2]), 3).is_empty());
    }

    #[test]
    fn longest_examples() {
        let g = grp(&[2, 4]);
        let found = longest_zero_sumfree(&g, &budget(), &Sequential).unwrap();
        assert_eq!(found.value, 4);
        assert_eq!(found.witness.sequence.ranks(), vec![1, 2, 2, 2]);
        found.witness.reverify().unwrap();
        assert_eq!(longest_zero_sumfree(&grp(&[2]), &budget(), &Sequential).unwrap().value, 1);
        let c6 = longest_zero_sumfree(&grp(&[6]), &budget(), &Sequential).unwrap();
        assert_eq!(c6.value, 5);
        assert_eq!(c6.witness.sequence.ranks(), vec![1; 5]);
    }

    #[test]
    fn cross_examples() {
        let k = |f: &[u64]| max_cross_number(&grp(f), &budget(), &Sequential).unwrap();
        assert_eq!(k(&[3, 3]).value, ExactRational::new(4, 3).unwrap());
        assert_eq!(k(&[2]).value, ExactRational::new(1, 2).unwrap());
        let c6 = k(&[6]);
        assert_eq!(c6.value, ExactRational::new(7, 6).unwrap());
        c6.witness.reverify().unwrap();
    }

    #[test]
    fn d_pair_examples() {
        let g = grp(&[2, 4]);
        let run = |dp, d| d_pair_bruteforce(&g, DivisorPair::new(dp, d), &budget(), &Sequential).unwrap();
        assert_eq!(run(2, 4).value, 2);
        assert_eq!(run(4, 4).value, 5);
        for d in [1, 2, 4] {
            let found = run(1, d);
            assert_eq!(found.value, 1);
            assert!(found.witness.sequence.is_empty());
        }
        run(2, 4).witness.reverify().unwrap();
    }

    #[test]
    fn gamma_examples() {
        let gamma = |f: &[u64], delta| gamma_exact(&grp(f), delta, &budget(), &Sequential).unwrap();
        assert_eq!(gamma(&[2, 4], 1).value, 1);
        assert_eq!(gamma(&[2, 2], 0).value, 2);
        assert_eq!(gamma(&[3], 1).value, 1);
        gamma(&[2, 4], 1).witness.reverify().unwrap();
        assert!(matches!(
            gamma_exact(&grp(&[2, 4]), 4, &budget(), &Sequential),
            Err(Error::DeltaOutOfRange { .. })
        ));
    }

    #[test]
    fn node_budget_is_an_error() {
        let err = longest_zero_sumfree(&grp(&[2, 8]), &SearchBudget::with_nodes(50), &Sequential).unwrap_err();
        match err {
            Error::BudgetExceeded { limit, nodes, completed_roots, total_roots } => {
                assert_eq!(limit, BudgetLimit::Nodes);
                assert!(nodes <= 50);
                assert!(completed_roots < total_roots);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    struct FrozenClock;

    impl Runtime for FrozenClock {
        fn map<T: Send, F: Fn(usize) -> T + Sync>(&self, tasks: usize, f: F) -> Vec<T> {
            (0..tasks).map(f).collect()
        }
        fn elapsed_seconds(&self) -> Option<f64> {
            Some(1000.0)
        }
    }

    #[test]
    fn time_budget_is_an_error() {
        let err = census(&grp(&[2, 8]), usize::MAX, &budget(), &FrozenClock).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { limit: BudgetLimit::Seconds, .. }));
    }

    #[test]
    fn witness_rejects_tampering() {
        let g = grp(&[2, 4]);
        let mut w = longest_zero_sumfree(&g, &budget(), &Sequential).unwrap().witness;
        w.sequence.push(&g.zero(), 1).unwrap();
        assert!(matches!(w.reverify(), Err(Error::WitnessRejected(_))));
        let mut w = gamma_exact(&g, 1, &budget(), &Sequential).unwrap().witness;
        w.value = ClaimValue::Integer(0);
        assert!(matches!(w.reverify(), Err(Error::WitnessRejected(_))));
    }
}
