//! Sequences (multisets) over a group and their subsums.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::group::{AbelianGroup, GroupElement};
use crate::rational::ExactRational;
use crate::{Error, Result};

/// Dense bit set over element ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn new(len: usize) -> Self {
        BitSet {
            words: alloc::vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn copy_from(&mut self, other: &BitSet) {
        self.words.copy_from_slice(&other.words);
    }

    pub(crate) fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    /// `self := src ∪ (src + g) ∪ {g}`, translating by rank arithmetic.
    pub(crate) fn extend_from(&mut self, src: &BitSet, group: &AbelianGroup, g: usize) {
        self.copy_from(src);
        for x in src.ones() {
            self.set(group.add_ranks(x, g));
        }
        self.set(g);
    }
}

/// A finite multiset of group elements, stored as multiplicities keyed by
/// element rank. Iteration is in ascending rank, which is the canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GSequence {
    group: AbelianGroup,
    counts: BTreeMap<usize, u32>,
    len: usize,
}

/// How [`GSequence::order_filter`] compares element orders with `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderMode {
    Divides,
    Equals,
}

impl GSequence {
    pub fn new(group: &AbelianGroup) -> Self {
        GSequence {
            group: group.clone(),
            counts: BTreeMap::new(),
            len: 0,
        }
    }

    pub fn from_elements<'a>(
        group: &AbelianGroup,
        elements: impl IntoIterator<Item = &'a GroupElement>,
    ) -> Result<Self> {
        let mut s = Self::new(group);
        for g in elements {
            s.push(g, 1)?;
        }
        Ok(s)
    }

    /// Build from element ranks (repetitions allowed, any order).
    pub fn from_ranks(group: &AbelianGroup, ranks: &[usize]) -> Self {
        let mut s = Self::new(group);
        for &r in ranks {
            s.push_rank(r, 1);
        }
        s
    }

    /// Add `count` copies of `g`.
    pub fn push(&mut self, g: &GroupElement, count: u32) -> Result<()> {
        self.group.check(g)?;
        let r = self.group.rank_of(g);
        self.push_rank(r, count);
        Ok(())
    }

    pub(crate) fn push_rank(&mut self, rank: usize, count: u32) {
        assert!(rank < self.group.size(), "rank {rank} outside the group");
        if count > 0 {
            *self.counts.entry(rank).or_insert(0) += count;
            self.len += count as usize;
        }
    }

    /// Remove one copy of the element with the given rank; returns whether
    /// it was present.
    pub fn remove_one_rank(&mut self, rank: usize) -> bool {
        match self.counts.get_mut(&rank) {
            Some(c) => {
                *c -= 1;
                if *c == 0 {
                    self.counts.remove(&rank);
                }
                self.len -= 1;
                true
            }
            None => false,
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `v_g(S)`.
    pub fn multiplicity(&self, g: &GroupElement) -> u32 {
        if self.group.check(g).is_err() {
            return 0;
        }
        self.counts.get(&self.group.rank_of(g)).copied().unwrap_or(0)
    }

    /// Distinct `(rank, multiplicity)` pairs, ascending rank.
    pub fn rank_counts(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.counts.iter().map(|(&r, &c)| (r, c))
    }

    /// Distinct `(element, multiplicity)` pairs, ascending rank.
    pub fn counts(&self) -> impl Iterator<Item = (GroupElement, u32)> + '_ {
        self.rank_counts().map(|(r, c)| (self.group.element_at(r), c))
    }

    /// Ranks with repetition, nondecreasing.
    pub fn ranks(&self) -> Vec<usize> {
        self.rank_counts()
            .flat_map(|(r, c)| core::iter::repeat_n(r, c as usize))
            .collect()
    }

    /// Elements with repetition, in canonical order.
    pub fn elements(&self) -> Vec<GroupElement> {
        self.ranks().into_iter().map(|r| self.group.element_at(r)).collect()
    }

    pub fn contains_zero(&self) -> bool {
        self.counts.contains_key(&0)
    }

    pub fn sum(&self) -> GroupElement {
        let mut acc = 0usize;
        for (r, c) in self.rank_counts() {
            for _ in 0..c {
                acc = self.group.add_ranks(acc, r);
            }
        }
        self.group.element_at(acc)
    }

    /// Multiset union.
    pub fn union(&self, other: &GSequence) -> Result<GSequence> {
        if self.group != other.group {
            return Err(Error::DimensionMismatch {
                expected: self.group.rank(),
                got: other.group.rank(),
            });
        }
        let mut out = self.clone();
        for (r, c) in other.rank_counts() {
            out.push_rank(r, c);
        }
        Ok(out)
    }

    /// Sub-multiset obtained by keeping, for each rank, the given number of
    /// copies (`0` drops it); counts above the current multiplicity are capped.
    pub fn restrict(&self, mut keep: impl FnMut(usize, u32) -> u32) -> GSequence {
        let mut out = GSequence::new(&self.group);
        for (r, c) in self.rank_counts() {
            out.push_rank(r, keep(r, c).min(c));
        }
        out
    }

    /// Every nonempty subsum, built incrementally: for each occurrence `g`,
    /// `reachable := reachable ∪ (reachable + g) ∪ {g}`.
    pub fn subsums(&self) -> SubsumTable {
        let size = self.group.size();
        let mut cur = BitSet::new(size);
        let mut next = BitSet::new(size);
        for (r, c) in self.rank_counts() {
            for _ in 0..c {
                next.extend_from(&cur, &self.group, r);
                core::mem::swap(&mut cur, &mut next);
            }
        }
        SubsumTable {
            group: self.group.clone(),
            members: cur,
        }
    }

    /// Subsums by enumerating every nonempty index subset. Exponential; only
    /// available for `|S| ≤ 24`.
    pub fn subsums_by_subsets(&self) -> Option<SubsumTable> {
        if self.len > 24 {
            return None;
        }
        let ranks = self.ranks();
        let mut members = BitSet::new(self.group.size());
        for mask in 1u32..(1 << ranks.len()) {
            let mut acc = 0usize;
            for (i, &r) in ranks.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc = self.group.add_ranks(acc, r);
                }
            }
            members.set(acc);
        }
        Some(SubsumTable {
            group: self.group.clone(),
            members,
        })
    }

    pub fn is_zero_sumfree(&self) -> bool {
        !self.contains_zero() && !self.subsums().contains_rank(0)
    }

    /// Total sum is zero and no proper nonempty sub-multiset sums to zero.
    ///
    /// A proper zero-sum subsequence misses some element `g`, so it suffices
    /// that `S·g⁻¹` is zero-sumfree for every distinct `g` in `S`.
    pub fn is_minimal_zero_sum(&self) -> Result<bool> {
        if self.is_empty() {
            return Err(Error::EmptySequence);
        }
        if !self.sum().is_zero() {
            return Ok(false);
        }
        Ok(self.rank_counts().all(|(r, _)| {
            let mut rest = self.clone();
            rest.remove_one_rank(r);
            rest.is_zero_sumfree()
        }))
    }

    /// `k(S) = Σ 1/ord(g_i)`.
    pub fn cross_number(&self) -> ExactRational {
        self.counts()
            .map(|(g, c)| ExactRational::recip_of(self.group.order_unchecked(&g)) * c as i64)
            .sum()
    }

    /// Elements whose order divides (or equals) `d`, multiplicities kept.
    pub fn order_filter(&self, d: u64, mode: OrderMode) -> Result<GSequence> {
        if d == 0 || self.group.exponent() % d != 0 {
            return Err(Error::NotADivisor {
                d,
                exponent: self.group.exponent(),
            });
        }
        Ok(self.restrict(|r, c| {
            let ord = self.group.order_unchecked(&self.group.element_at(r));
            let keep = match mode {
                OrderMode::Divides => d % ord == 0,
                OrderMode::Equals => ord == d,
            };
            if keep {
                c
            } else {
                0
            }
        }))
    }

    /// Number of elements (with multiplicity) of order `exp(G)`.
    pub fn max_order_count(&self) -> usize {
        self.order_filter(self.group.exponent(), OrderMode::Equals)
            .map(|s| s.len())
            .unwrap_or(0)
    }
}

impl fmt::Display for GSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        for (i, (g, c)) in self.counts().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            if c == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{c}")?;
            }
        }
        Ok(())
    }
}

/// Which elements are nonempty subsums of a sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsumTable {
    group: AbelianGroup,
    members: BitSet,
}

impl SubsumTable {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn contains_rank(&self, rank: usize) -> bool {
        self.members.get(rank)
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.group.check(g).is_ok() && self.members.get(self.group.rank_of(g))
    }

    /// Number of distinct subsums.
    pub fn count(&self) -> usize {
        self.members.count()
    }

    /// Ranks of all subsums, ascending.
    pub fn ranks(&self) -> Vec<usize> {
        self.members.ones().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grp(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f).unwrap()
    }

    fn seq(g: &AbelianGroup, coords: &[&[i64]]) -> GSequence {
        let els: Vec<_> = coords.iter().map(|c| g.element(c).unwrap()).collect();
        GSequence::from_elements(g, &els).unwrap()
    }

    #[test]
    fn subsum_examples() {
        let c3 = grp(&[3]);
        assert_eq!(seq(&c3, &[&[1], &[1]]).subsums().ranks(), vec![1, 2]);
        assert_eq!(seq(&c3, &[&[1], &[2]]).subsums().ranks(), vec![0, 1, 2]);
        assert_eq!(GSequence::new(&c3).subsums().ranks(), vec![]);
    }

    #[test]
    fn zero_sumfree_examples() {
        let g = grp(&[2, 4]);
        let s = seq(&g, &[&[1, 0], &[0, 1], &[0, 1], &[0, 1]]);
        assert!(s.is_zero_sumfree());
        assert!(!seq(&g, &[&[0, 0], &[0, 1]]).is_zero_sumfree());
        assert!(!seq(&grp(&[3]), &[&[1], &[2]]).is_zero_sumfree());
        assert!(GSequence::new(&g).is_zero_sumfree());
    }

    #[test]
    fn minimal_zero_sum_examples() {
        let c3 = grp(&[3]);
        assert_eq!(seq(&c3, &[&[1], &[2]]).is_minimal_zero_sum(), Ok(true));
        assert_eq!(seq(&c3, &[&[1], &[1], &[1]]).is_minimal_zero_sum(), Ok(true));
        assert_eq!(seq(&c3, &[&[1], &[1]]).is_minimal_zero_sum(), Ok(false));
        assert_eq!(seq(&c3, &[&[1], &[2], &[1], &[2]]).is_minimal_zero_sum(), Ok(false));
        assert_eq!(seq(&c3, &[&[0]]).is_minimal_zero_sum(), Ok(true));
        assert_eq!(GSequence::new(&c3).is_minimal_zero_sum(), Err(Error::EmptySequence));
    }

    #[test]
    fn cross_numbers() {
        let g = grp(&[2, 4]);
        let s = seq(&g, &[&[1, 0], &[0, 1], &[0, 1], &[0, 1]]);
        assert_eq!(s.cross_number(), ExactRational::new(5, 4).unwrap());
        assert_eq!(GSequence::new(&g).cross_number(), ExactRational::zero());
        let c6 = grp(&[6]);
        let ones = GSequence::from_ranks(&c6, &[1; 5]);
        assert_eq!(ones.cross_number(), ExactRational::new(5, 6).unwrap());
    }

    #[test]
    fn order_filters() {
        let g = grp(&[2, 4]);
        let s = seq(&g, &[&[1, 0], &[0, 1], &[0, 1], &[0, 1]]);
        assert_eq!(s.order_filter(2, OrderMode::Divides).unwrap(), seq(&g, &[&[1, 0]]));
        assert_eq!(
            s.order_filter(4, OrderMode::Equals).unwrap(),
            seq(&g, &[&[0, 1], &[0, 1], &[0, 1]])
        );
        assert_eq!(s.order_filter(4, OrderMode::Divides).unwrap(), s);
        assert!(matches!(s.order_filter(3, OrderMode::Divides), Err(Error::NotADivisor { .. })));
        assert_eq!(s.max_order_count(), 3);
        assert_eq!(GSequence::new(&g).max_order_count(), 0);
        let c6 = grp(&[6]);
        assert_eq!(GSequence::from_ranks(&c6, &[1; 5]).max_order_count(), 5);
    }

    #[test]
    fn canonical_form_ignores_insertion_order() {
        let g = grp(&[2, 4]);
        let a = GSequence::from_ranks(&g, &[5, 1, 5, 2]);
        let b = GSequence::from_ranks(&g, &[2, 5, 1, 5]);
        assert_eq!(a, b);
        assert_eq!(a.ranks(), vec![1, 2, 5, 5]);
        assert_eq!(a.len(), 4);
    }
}
