//! Closed forms for the invariants, and the two sufficient criteria
//! (Olson's height bound and the `D_(d',d)` counting lemma) that certify a
//! sequence is not zero-sumfree.

use alloc::vec::Vec;

use crate::arith::{divisors, gcd, lcm};
use crate::group::AbelianGroup;
use crate::rational::ExactRational;
use crate::seq::{GSequence, OrderMode};
use crate::{Error, Result};

/// `1 ≤ d' | d | exp(G)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorPair {
    pub d_prime: u64,
    pub d: u64,
}

impl DivisorPair {
    pub fn new(d_prime: u64, d: u64) -> Self {
        DivisorPair { d_prime, d }
    }

    pub fn validate(&self, group: &AbelianGroup) -> Result<()> {
        let ok = self.d_prime >= 1
            && self.d % self.d_prime == 0
            && group.exponent() % self.d == 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidPair {
                d_prime: self.d_prime,
                d: self.d,
            })
        }
    }

    /// `d / d'`.
    pub fn quotient(&self) -> u64 {
        self.d / self.d_prime
    }

    /// Every valid pair for `group`, ordered by `(d, d')`.
    pub fn all(group: &AbelianGroup) -> Vec<DivisorPair> {
        divisors(group.exponent())
            .into_iter()
            .flat_map(|d| divisors(d).into_iter().map(move |dp| DivisorPair::new(dp, d)))
            .collect()
    }
}

/// Bounds on `Γ_δ(G)` for a p-group.
///
/// `lower` and `upper` are clamped at zero; the unclamped values are kept
/// in `raw_lower` and `raw_upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaBounds {
    pub delta: u64,
    pub lower: u64,
    pub upper: u64,
    pub raw_lower: i64,
    pub raw_upper: i64,
    /// Closed-form exact value, available when `j_0 = r`.
    pub exact: Option<u64>,
}

/// `d*(G) = Σ (n_i − 1)`.
pub fn d_star(group: &AbelianGroup) -> u64 {
    group.invariant_factors().iter().map(|n| n - 1).sum()
}

/// `k*(G) = Σ (ν_i − 1)/ν_i` over the primary decomposition.
pub fn k_star(group: &AbelianGroup) -> ExactRational {
    group
        .primary_decomposition()
        .into_iter()
        .map(|q| ExactRational::new(q as i64 - 1, q as i64).expect("q >= 2"))
        .sum()
}

/// `Σ (n_i − 1)/n_i` over the invariant factors. Differs from `k*(G)` unless
/// `G` is a p-group.
pub fn invariant_cross_bound(group: &AbelianGroup) -> ExactRational {
    group
        .invariant_factors()
        .iter()
        .map(|&n| ExactRational::new(n as i64 - 1, n as i64).expect("n >= 2"))
        .sum()
}

/// `Σ (ν_i − 1)` over the primary decomposition.
pub fn primary_length_bound(group: &AbelianGroup) -> u64 {
    group.primary_decomposition().iter().map(|q| q - 1).sum()
}

/// `d(G) = Σ (p^{a_i} − 1)` for a p-group.
pub fn davenport_p_group(group: &AbelianGroup) -> Result<u64> {
    group.require_p_group()?;
    Ok(d_star(group))
}

/// `k(G) = Σ (p^{a_i} − 1)/p^{a_i}` for a p-group.
pub fn little_cross_p_group(group: &AbelianGroup) -> Result<ExactRational> {
    group.require_p_group()?;
    Ok(invariant_cross_bound(group))
}

/// `υ_i(d',d) = A_i / gcd(A_i, B_i)` with `A_i = gcd(d', n_i)` and
/// `B_i = lcm(d, n_i) / lcm(d', n_i)`.
pub fn upsilon_vector(group: &AbelianGroup, pair: DivisorPair) -> Result<Vec<u64>> {
    pair.validate(group)?;
    Ok(group
        .invariant_factors()
        .iter()
        .map(|&n| {
            let a = gcd(pair.d_prime, n);
            let b = lcm(pair.d, n) / lcm(pair.d_prime, n);
            a / gcd(a, b)
        })
        .collect())
}

/// `⊕ C_{υ_i}` with trivial factors dropped; `None` when every `υ_i = 1`.
pub fn reduced_group(group: &AbelianGroup, pair: DivisorPair) -> Result<Option<AbelianGroup>> {
    let factors: Vec<u64> = upsilon_vector(group, pair)?
        .into_iter()
        .filter(|&u| u > 1)
        .collect();
    if factors.is_empty() {
        return Ok(None);
    }
    AbelianGroup::with_cap(&factors, u64::MAX).map(Some)
}

/// `D(G)` where a closed form is available: cyclic `C_n` gives `n`, a
/// p-group gives `d*(G) + 1`.
pub fn davenport_closed_form(group: &AbelianGroup) -> Option<u64> {
    if group.is_cyclic() {
        Some(group.exponent())
    } else if group.is_p_group() {
        Some(d_star(group) + 1)
    } else {
        None
    }
}

/// `D_(d',d)(G) = D(C_{υ_1} ⊕ … ⊕ C_{υ_r})` when the reduced group is
/// trivial, cyclic or a p-group.
pub fn d_pair_formula(group: &AbelianGroup, pair: DivisorPair) -> Result<u64> {
    d_pair_formula_with(group, pair, |reduced| {
        Err(Error::NeedsOracle {
            factors: reduced.invariant_factors().to_vec(),
        })
    })
}

/// Like [`d_pair_formula`], computing `D` of a reduced group outside the
/// closed-form classes with `oracle`.
pub fn d_pair_formula_with(
    group: &AbelianGroup,
    pair: DivisorPair,
    oracle: impl FnOnce(&AbelianGroup) -> Result<u64>,
) -> Result<u64> {
    match reduced_group(group, pair)? {
        None => Ok(1),
        Some(reduced) => match davenport_closed_form(&reduced) {
            Some(value) => Ok(value),
            None => oracle(&reduced),
        },
    }
}

/// `j_0 = min{i | a_i = a_r}`, 1-based.
pub fn j0(group: &AbelianGroup) -> Result<usize> {
    let (_, exps) = group.require_p_group()?;
    let top = *exps.last().expect("rank >= 1");
    Ok(exps.iter().position(|&a| a == top).expect("top is present") + 1)
}

/// Checks `δ ∈ [0, d(G) − 1]` for a p-group.
pub fn check_delta(group: &AbelianGroup, delta: u64) -> Result<()> {
    let d = davenport_p_group(group)?;
    if delta >= d {
        return Err(Error::DeltaOutOfRange { delta, max: d - 1 });
    }
    Ok(())
}

struct PShape {
    p: i64,
    top: i64,      // p^{a_r}
    below: i64,    // p^{a_r - 1}
    r_minus_j0: i64,
}

fn p_shape(group: &AbelianGroup, delta: u64) -> Result<PShape> {
    check_delta(group, delta)?;
    let (p, exps) = group.require_p_group()?;
    let a_r = *exps.last().expect("rank >= 1");
    Ok(PShape {
        p: p as i64,
        top: p.pow(a_r) as i64,
        below: p.pow(a_r - 1) as i64,
        r_minus_j0: (group.rank() - j0(group)?) as i64,
    })
}

/// Lower bound on `Γ_δ(G)` before clamping:
/// `(p^{a_r}−1) + (r−j_0)(p−1)p^{a_r−1} − δ − ⌊δ / ((r−j_0+1)(p−1))⌋`.
pub fn gamma_lower_raw(group: &AbelianGroup, delta: u64) -> Result<i64> {
    let s = p_shape(group, delta)?;
    let delta = delta as i64;
    Ok((s.top - 1) + s.r_minus_j0 * (s.p - 1) * s.below
        - delta
        - delta / ((s.r_minus_j0 + 1) * (s.p - 1)))
}

pub fn gamma_lower(group: &AbelianGroup, delta: u64) -> Result<u64> {
    Ok(gamma_lower_raw(group, delta)?.max(0) as u64)
}

/// `f(δ) = min(⌊δ/(p−1)⌋, (r−j_0+1)(p^{a_r−1}−1))`.
pub fn upper_correction(group: &AbelianGroup, delta: u64) -> Result<i64> {
    let s = p_shape(group, delta)?;
    Ok((delta as i64 / (s.p - 1)).min((s.r_minus_j0 + 1) * (s.below - 1)))
}

/// Upper bound on `Γ_δ(G)` before clamping:
/// `(r−j_0+1)(p^{a_r}−1) − δ − f(δ)`.
pub fn gamma_upper_raw(group: &AbelianGroup, delta: u64) -> Result<i64> {
    let s = p_shape(group, delta)?;
    let f = upper_correction(group, delta)?;
    Ok((s.r_minus_j0 + 1) * (s.top - 1) - delta as i64 - f)
}

pub fn gamma_upper(group: &AbelianGroup, delta: u64) -> Result<u64> {
    Ok(gamma_upper_raw(group, delta)?.max(0) as u64)
}

/// `Γ_δ(G) = max(0, (p^{a_r}−1) − δ − ⌊δ/(p−1)⌋)`, valid when `j_0 = r`.
pub fn gamma_exact_formula(group: &AbelianGroup, delta: u64) -> Result<u64> {
    let s = p_shape(group, delta)?;
    let j = j0(group)?;
    if j != group.rank() {
        return Err(Error::NotApplicable {
            j0: j,
            rank: group.rank(),
        });
    }
    let delta = delta as i64;
    Ok(((s.top - 1) - delta - delta / (s.p - 1)).max(0) as u64)
}

pub fn gamma_bounds(group: &AbelianGroup, delta: u64) -> Result<GammaBounds> {
    let raw_lower = gamma_lower_raw(group, delta)?;
    let raw_upper = gamma_upper_raw(group, delta)?;
    let exact = match gamma_exact_formula(group, delta) {
        Ok(v) => Some(v),
        Err(Error::NotApplicable { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(GammaBounds {
        delta,
        lower: raw_lower.max(0) as u64,
        upper: raw_upper.max(0) as u64,
        raw_lower,
        raw_upper,
        exact,
    })
}

/// `Σ α(g_i)` over a sequence in a p-group.
pub fn height_sum(seq: &GSequence) -> Result<u64> {
    let group = seq.group();
    group.require_p_group()?;
    if seq.contains_zero() {
        return Err(Error::ZeroElement);
    }
    let mut total = 0;
    for (g, c) in seq.counts() {
        total += group.height(&g)? * c as u64;
    }
    Ok(total)
}

/// `Σ α(g_i) > d(G)`. `true` certifies that `seq` is not zero-sumfree.
pub fn olson_predicate(seq: &GSequence) -> Result<bool> {
    let sum = height_sum(seq)?;
    Ok(sum > davenport_p_group(seq.group())?)
}

/// `|T| + ⌊(|U| − |T|) / D_(d',d)(G)⌋ ≥ D_(d/d', d/d')(G)` where `T` holds
/// the elements of order dividing `d/d'` and `U` those of order dividing `d`.
/// `true` certifies that `seq` is not zero-sumfree.
pub fn key_lemma_predicate(seq: &GSequence, pair: DivisorPair) -> Result<bool> {
    key_lemma_predicate_with(seq, pair, |p| d_pair_formula(seq.group(), p))
}

/// [`key_lemma_predicate`] with caller-supplied `D_(·,·)(G)` values.
pub fn key_lemma_predicate_with(
    seq: &GSequence,
    pair: DivisorPair,
    d_pair: impl Fn(DivisorPair) -> Result<u64>,
) -> Result<bool> {
    pair.validate(seq.group())?;
    let q = pair.quotient();
    let t = seq.order_filter(q, OrderMode::Divides)?.len() as u64;
    let u = seq.order_filter(pair.d, OrderMode::Divides)?.len() as u64;
    let step = d_pair(pair)?;
    let target = d_pair(DivisorPair::new(q, q))?;
    Ok(t + (u - t) / step >= target)
}
