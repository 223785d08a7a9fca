//! Finite abelian groups in invariant-factor form and their elements.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{factorize, gcd, prime_power, valuation};
use crate::{Error, Result};

/// Largest cardinality accepted by [`AbelianGroup::new`].
pub const DEFAULT_CARDINALITY_CAP: u64 = 1_000_000;

/// `C_{n_1} ⊕ … ⊕ C_{n_r}` with `2 ≤ n_1 | n_2 | … | n_r`.
///
/// Elements are indexed by their mixed-radix rank
/// `a_1 + n_1·(a_2 + n_2·(a_3 + …))`, which is the canonical order used for
/// sequences and for dense tables over the group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<u64>,
    cardinality: u64,
    prime: Option<u64>,
    exponents: Vec<u32>,
}

/// An element `[a_1, …, a_r]` with `0 ≤ a_i < n_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Canonicalise an arbitrary list of cyclic factors into invariant-factor
/// form, using the default cardinality cap.
pub fn normalize_group(factors: &[u64]) -> Result<AbelianGroup> {
    AbelianGroup::with_cap(factors, DEFAULT_CARDINALITY_CAP)
}

impl AbelianGroup {
    /// Same as [`normalize_group`].
    pub fn new(factors: &[u64]) -> Result<Self> {
        normalize_group(factors)
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    /// Normalise `factors` (any order, any cyclic factors ≥ 2) through the
    /// primary decomposition, rejecting groups larger than `cap`.
    pub fn with_cap(factors: &[u64], cap: u64) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("empty factor list".into()));
        }
        if let Some(&bad) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(format!("factor {bad} is below 2")));
        }
        let mut cardinality = 1u64;
        for &n in factors {
            cardinality = cardinality
                .checked_mul(n)
                .filter(|&c| c <= cap)
                .ok_or_else(|| Error::GroupTooLarge {
                    cardinality: factors.iter().fold(1u64, |a, &n| a.saturating_mul(n)),
                    cap,
                })?;
        }

        // prime -> exponents of that prime across the factors, largest first
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &n in factors {
            for (p, a) in factorize(n) {
                by_prime.entry(p).or_default().push(a);
            }
        }
        let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut chain = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut n = 1u64;
            for (&p, exps) in by_prime.iter_mut() {
                exps.sort_unstable_by(|a, b| b.cmp(a));
                if let Some(&a) = exps.get(i) {
                    n *= p.pow(a);
                }
            }
            chain.push(n);
        }
        chain.reverse();
        Ok(Self::from_chain(chain, cardinality))
    }

    fn from_chain(factors: Vec<u64>, cardinality: u64) -> Self {
        let (prime, exponents) = match prime_power(cardinality) {
            Some((p, _)) => {
                let exps = factors.iter().map(|&n| valuation(n, p)).collect();
                (Some(p), exps)
            }
            None => (None, Vec::new()),
        };
        AbelianGroup {
            factors,
            cardinality,
            prime,
            exponents,
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    /// Number of elements as a table size.
    pub fn size(&self) -> usize {
        self.cardinality as usize
    }

    pub fn exponent(&self) -> u64 {
        *self.factors.last().expect("rank >= 1")
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn is_p_group(&self) -> bool {
        self.prime.is_some()
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    /// `(a_1, …, a_r)` with `n_i = p^{a_i}`, for p-groups.
    pub fn exponents(&self) -> Option<&[u32]> {
        self.prime.map(|_| self.exponents.as_slice())
    }

    pub(crate) fn require_p_group(&self) -> Result<(u64, &[u32])> {
        match self.prime {
            Some(p) => Ok((p, &self.exponents)),
            None => Err(Error::NotPGroup),
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: alloc::vec![0; self.rank()],
        }
    }

    /// Build an element from arbitrary integer coordinates, reducing each
    /// modulo its factor.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        let coords = coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement { coords })
    }

    /// The `i`-th basis vector `e_i` (0-based), of order `n_i`.
    pub fn basis_element(&self, i: usize) -> GroupElement {
        let mut g = self.zero();
        g.coords[i] = 1;
        g
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if g.coords.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: g.coords.len(),
            });
        }
        for (index, (&value, &modulus)) in g.coords.iter().zip(&self.factors).enumerate() {
            if value >= modulus {
                return Err(Error::NotAMember {
                    index,
                    value,
                    modulus,
                });
            }
        }
        Ok(())
    }

    /// Rank of `element_at(a) + element_at(b)` without materialising elements.
    pub fn add_ranks(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut out, mut place) = (0u64, 1u64);
        for &n in &self.factors {
            out += ((a % n + b % n) % n) * place;
            place *= n;
            a /= n;
            b /= n;
        }
        out as usize
    }

    /// Rank of `-element_at(a)`.
    pub fn neg_rank(&self, a: usize) -> usize {
        let mut a = a as u64;
        let (mut out, mut place) = (0u64, 1u64);
        for &n in &self.factors {
            out += ((n - a % n) % n) * place;
            place *= n;
            a /= n;
        }
        out as usize
    }

    /// Mixed-radix rank of a member element.
    pub fn rank_of(&self, g: &GroupElement) -> usize {
        let mut r = 0u64;
        for (&c, &n) in g.coords.iter().zip(&self.factors).rev() {
            r = r * n + c;
        }
        r as usize
    }

    /// Inverse of [`rank_of`](Self::rank_of).
    pub fn element_at(&self, rank: usize) -> GroupElement {
        debug_assert!(rank < self.size());
        let mut rest = rank as u64;
        let coords = self
            .factors
            .iter()
            .map(|&n| {
                let c = rest % n;
                rest /= n;
                c
            })
            .collect();
        GroupElement { coords }
    }

    /// All elements in ascending rank order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.size()).map(move |r| self.element_at(r))
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.add_unchecked(g, h))
    }

    pub(crate) fn add_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let coords = g
            .coords
            .iter()
            .zip(&h.coords)
            .zip(&self.factors)
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        GroupElement { coords }
    }

    /// `k·g`; negative `k` is allowed.
    pub fn scale(&self, k: i64, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(self.scale_unchecked(k, g))
    }

    pub(crate) fn scale_unchecked(&self, k: i64, g: &GroupElement) -> GroupElement {
        let coords = g
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&a, &n)| {
                let k = k.rem_euclid(n as i64) as u128;
                ((k * a as u128) % n as u128) as u64
            })
            .collect();
        GroupElement { coords }
    }

    pub fn negate(&self, g: &GroupElement) -> Result<GroupElement> {
        self.scale(-1, g)
    }

    /// `ord_G(g)`, the least `t ≥ 1` with `t·g = 0`.
    pub fn order(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        Ok(self.order_unchecked(g))
    }

    pub(crate) fn order_unchecked(&self, g: &GroupElement) -> u64 {
        g.coords
            .iter()
            .zip(&self.factors)
            .fold(1u64, |acc, (&a, &n)| num_integer::lcm(acc, n / gcd(a, n)))
    }

    /// Height `α(g)`: the largest power `p^k` such that `g ∈ p^k·G`.
    ///
    /// In `⊕ C_{p^{a_i}}` the multiples of `p^k` in each coordinate are the
    /// multiples of `p^{min(k, a_i)}`, so for `g ≠ 0` the height is `p` raised
    /// to the least valuation among the nonzero coordinates.
    pub fn height(&self, g: &GroupElement) -> Result<u64> {
        let (p, _) = self.require_p_group()?;
        self.check(g)?;
        let k = g
            .coords
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| valuation(c, p))
            .min()
            .ok_or(Error::ZeroHeight)?;
        Ok(p.pow(k))
    }

    fn require_divisor(&self, d: u64) -> Result<()> {
        if d == 0 || self.exponent() % d != 0 {
            return Err(Error::NotADivisor {
                d,
                exponent: self.exponent(),
            });
        }
        Ok(())
    }

    /// Ranks of `G_d = {x | d·x = 0}`, ascending.
    pub fn subgroup_ranks(&self, d: u64) -> Result<Vec<usize>> {
        self.require_divisor(d)?;
        // coordinate i ranges over the multiples of n_i / gcd(d, n_i)
        let steps: Vec<u64> = self.factors.iter().map(|&n| n / gcd(d, n)).collect();
        let mut out = Vec::new();
        let mut coords = alloc::vec![0u64; self.rank()];
        loop {
            let mut r = 0u64;
            for (&c, &n) in coords.iter().zip(&self.factors).rev() {
                r = r * n + c;
            }
            out.push(r as usize);
            let mut i = 0;
            loop {
                if i == coords.len() {
                    return Ok(out);
                }
                coords[i] += steps[i];
                if coords[i] < self.factors[i] {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
    }

    /// Elements of `G_d` in ascending rank order.
    pub fn subgroup_elements(&self, d: u64) -> Result<Vec<GroupElement>> {
        Ok(self
            .subgroup_ranks(d)?
            .into_iter()
            .map(|r| self.element_at(r))
            .collect())
    }

    /// The prime powers `ν_1, …, ν_s` of the longest cyclic decomposition,
    /// sorted by prime, then by size.
    pub fn primary_decomposition(&self) -> Vec<u64> {
        let mut parts: Vec<(u64, u64)> = self
            .factors
            .iter()
            .flat_map(|&n| factorize(n).into_iter().map(|(p, a)| (p, p.pow(a))))
            .collect();
        parts.sort_unstable();
        parts.into_iter().map(|(_, q)| q).collect()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("⊕")?;
            }
            write!(f, "C{n}")?;
        }
        Ok(())
    }
}
