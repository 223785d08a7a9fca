//! Explicit extremal sequences.

use alloc::format;
use alloc::vec::Vec;

use crate::formulas::{self, check_delta};
use crate::group::{AbelianGroup, GroupElement};
use crate::seq::GSequence;
use crate::{Error, Result};

/// `(e_1, …, e_r)` with `ord(e_i) = n_i`.
pub fn standard_basis(group: &AbelianGroup) -> Vec<GroupElement> {
    (0..group.rank()).map(|i| group.basis_element(i)).collect()
}

fn ensure_zero_sumfree(seq: &GSequence, what: &str) -> Result<()> {
    if seq.is_zero_sumfree() {
        Ok(())
    } else {
        Err(Error::Internal(format!("{what} construction {seq} is not zero-sumfree")))
    }
}

/// `∏ e_i^{n_i − 1}`, a zero-sumfree sequence of length `d*(G)`.
pub fn dstar_sequence(group: &AbelianGroup) -> Result<GSequence> {
    let mut seq = GSequence::new(group);
    for (e, &n) in standard_basis(group).iter().zip(group.invariant_factors()) {
        seq.push(e, (n - 1) as u32)?;
    }
    ensure_zero_sumfree(&seq, "d*")?;
    Ok(seq)
}

/// `∏ f_j^{ν_j − 1}` for a basis `(f_j)` with `ord(f_j) = ν_j` running over
/// the primary decomposition; its cross number is `k*(G)`.
pub fn kstar_sequence(group: &AbelianGroup) -> Result<GSequence> {
    let mut seq = GSequence::new(group);
    for (i, (e, &n)) in standard_basis(group)
        .iter()
        .zip(group.invariant_factors())
        .enumerate()
    {
        for (p, a) in crate::arith::factorize(n) {
            let q = p.pow(a);
            let f = group.scale((n / q) as i64, e)?;
            debug_assert_eq!(group.order(&f)?, q, "component {i}");
            seq.push(&f, (q - 1) as u32)?;
        }
    }
    ensure_zero_sumfree(&seq, "k*")?;
    if seq.cross_number() != formulas::k_star(group) {
        return Err(Error::Internal(format!("k* construction {seq} has the wrong cross number")));
    }
    Ok(seq)
}

/// Which family [`gamma_extremal_sequence`] used for a given `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaCase {
    /// `δ < (r−j_0+1)(p−1)(p^{a_r−1}−1)`.
    Small,
    /// `δ < (r−j_0+1)(p−1)p^{a_r−1}`.
    Medium,
    /// Everything else; no element of maximal order is needed.
    Large,
}

/// The case selected for `δ`; the three ranges partition `[0, d(G) − 1]`.
pub fn gamma_case(group: &AbelianGroup, delta: u64) -> Result<GammaCase> {
    check_delta(group, delta)?;
    let (p, exps) = group.require_p_group()?;
    let a_r = *exps.last().expect("rank >= 1");
    let m = (group.rank() - formulas::j0(group)? + 1) as u64;
    let below = p.pow(a_r - 1);
    Ok(if delta < m * (p - 1) * (below - 1) {
        GammaCase::Small
    } else if delta < m * (p - 1) * below {
        GammaCase::Medium
    } else {
        GammaCase::Large
    })
}

/// A zero-sumfree sequence of length `d(G) − δ` whose number of
/// maximal-order elements equals the upper bound `gamma_upper(G, δ)`.
pub fn gamma_extremal_sequence(group: &AbelianGroup, delta: u64) -> Result<GSequence> {
    let case = gamma_case(group, delta)?;
    let (p, exps) = group.require_p_group()?;
    let r = group.rank();
    let j0 = formulas::j0(group)?;
    let a_r = *exps.last().expect("rank >= 1");
    let top = p.pow(a_r);
    let below = p.pow(a_r - 1);
    let basis = standard_basis(group);
    // 1-based accessors matching the usual indexing of the basis
    let e = |i: usize| &basis[i - 1];
    let pe = |i: usize| group.scale_unchecked(p as i64, &basis[i - 1]);
    let n = |i: usize| group.invariant_factors()[i - 1];
    let mut seq = GSequence::new(group);
    let mut push = |g: &GroupElement, count: u64| seq.push(g, count as u32);

    match case {
        GammaCase::Small => {
            let block = (p - 1) * (below - 1);
            let (d1, d2) = ((delta / block) as usize, delta % block);
            if d1 > r - j0 {
                return Err(Error::Internal(format!("δ_1 = {d1} exceeds r − j_0 = {}", r - j0)));
            }
            for i in 1..r - d1 {
                push(e(i), n(i) - 1)?;
            }
            for i in r - d1..r {
                push(e(i), p - 1)?;
                push(&pe(i), n(i) / p - 1)?;
            }
            let carried = d2 / (p - 1);
            push(e(r), top - 1 - d2 - carried)?;
            push(&pe(r), carried)?;
        }
        GammaCase::Medium => {
            let shifted = delta - (r - j0 + 1) as u64 * (p - 1) * (below - 1);
            let (d1, d2) = ((shifted / (p - 1)) as usize, shifted % (p - 1));
            if d1 > r - j0 {
                return Err(Error::Internal(format!("δ'_1 = {d1} exceeds r − j_0 = {}", r - j0)));
            }
            for i in 1..j0 {
                push(e(i), n(i) - 1)?;
            }
            for i in j0..r - d1 {
                push(e(i), p - 1)?;
                push(&pe(i), below - 1)?;
            }
            for i in r - d1..r {
                push(&pe(i), below - 1)?;
            }
            push(e(r), p - 1 - d2)?;
            push(&pe(r), below - 1)?;
        }
        GammaCase::Large => {
            for i in 1..j0 {
                push(e(i), n(i) - 1)?;
            }
            for i in j0..=r {
                push(&pe(i), below - 1)?;
            }
            let target = (formulas::davenport_p_group(group)? - delta) as usize;
            if seq.len() < target {
                return Err(Error::Internal(format!(
                    "case-3 sequence has {} elements, fewer than d(G) − δ = {target}",
                    seq.len()
                )));
            }
            // keep the lowest-ranked elements
            let mut left = target as u32;
            seq = seq.restrict(|_, c| {
                let take = c.min(left);
                left -= take;
                take
            });
        }
    }

    ensure_zero_sumfree(&seq, "Γ_δ")?;
    let d = formulas::davenport_p_group(group)?;
    if seq.len() as u64 != d - delta {
        return Err(Error::Internal(format!(
            "Γ_δ construction for δ = {delta} has length {}, expected {}",
            seq.len(),
            d - delta
        )));
    }
    let upper = formulas::gamma_upper(group, delta)?;
    if seq.max_order_count() as u64 != upper {
        return Err(Error::Internal(format!(
            "Γ_δ construction for δ = {delta} has {} maximal-order elements, upper bound is {upper}",
            seq.max_order_count()
        )));
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ExactRational;
    use alloc::vec;

    fn grp(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f).unwrap()
    }

    #[test]
    fn bases() {
        let g = grp(&[2, 4]);
        assert_eq!(
            standard_basis(&g),
            vec![g.element(&[1, 0]).unwrap(), g.element(&[0, 1]).unwrap()]
        );
        assert_eq!(standard_basis(&grp(&[6])), vec![grp(&[6]).element(&[1]).unwrap()]);
        assert_eq!(standard_basis(&grp(&[3, 3])).len(), 2);
    }

    #[test]
    fn dstar_examples() {
        let g = grp(&[2, 4]);
        let s = dstar_sequence(&g).unwrap();
        assert_eq!(s.ranks(), vec![1, 2, 2, 2]);
        assert_eq!(dstar_sequence(&grp(&[6])).unwrap().ranks(), vec![1; 5]);
        assert_eq!(dstar_sequence(&grp(&[2])).unwrap().ranks(), vec![1]);
        for f in [&[2u64, 12][..], &[6, 6], &[3, 9], &[2, 2, 2]] {
            let g = grp(f);
            assert_eq!(dstar_sequence(&g).unwrap().len() as u64, formulas::d_star(&g));
        }
    }

    #[test]
    fn kstar_examples() {
        let c6 = grp(&[6]);
        let s = kstar_sequence(&c6).unwrap();
        assert_eq!(s.ranks(), vec![2, 2, 3]);
        assert_eq!(s.cross_number(), ExactRational::new(7, 6).unwrap());
        let g = grp(&[2, 4]);
        assert_eq!(kstar_sequence(&g).unwrap().ranks(), vec![1, 2, 2, 2]);
        assert_eq!(kstar_sequence(&grp(&[2])).unwrap().ranks(), vec![1]);
        let g = grp(&[2, 12]);
        assert_eq!(kstar_sequence(&g).unwrap().cross_number(), formulas::k_star(&g));
    }

    #[test]
    fn gamma_construction_examples() {
        let g = grp(&[2, 4]);
        let e1 = g.element(&[1, 0]).unwrap();
        let e2 = g.element(&[0, 1]).unwrap();
        let two_e2 = g.element(&[0, 2]).unwrap();

        assert_eq!(gamma_case(&g, 0), Ok(GammaCase::Small));
        let s = gamma_extremal_sequence(&g, 0).unwrap();
        assert_eq!(s, GSequence::from_elements(&g, [&e1, &e2, &e2, &e2]).unwrap());

        assert_eq!(gamma_case(&g, 1), Ok(GammaCase::Medium));
        let s = gamma_extremal_sequence(&g, 1).unwrap();
        assert_eq!(s, GSequence::from_elements(&g, [&e1, &e2, &two_e2]).unwrap());
        assert_eq!(s.max_order_count(), 1);

        assert_eq!(gamma_case(&g, 2), Ok(GammaCase::Large));
        let s = gamma_extremal_sequence(&g, 2).unwrap();
        assert_eq!(s, GSequence::from_elements(&g, [&e1, &two_e2]).unwrap());
        assert_eq!(s.max_order_count(), 0);

        let s = gamma_extremal_sequence(&g, 3).unwrap();
        assert_eq!(s, GSequence::from_elements(&g, [&e1]).unwrap());
    }

    #[test]
    fn gamma_constructions_meet_the_upper_bound() {
        for f in [
            &[2u64][..], &[4], &[8], &[9], &[27], &[2, 2], &[3, 3], &[2, 4], &[4, 4],
            &[2, 8], &[2, 2, 4], &[3, 9], &[9, 9], &[2, 4, 4], &[5, 25], &[2, 2, 2, 2],
            &[4, 8, 8], &[3, 3, 9],
        ] {
            let g = grp(f);
            let d = formulas::davenport_p_group(&g).unwrap();
            for delta in 0..d {
                let s = gamma_extremal_sequence(&g, delta)
                    .unwrap_or_else(|e| panic!("{g} δ={delta}: {e}"));
                assert_eq!(s.len() as u64, d - delta);
                assert_eq!(s.max_order_count() as u64, formulas::gamma_upper(&g, delta).unwrap());
            }
        }
    }

    #[test]
    fn gamma_rejects_bad_input() {
        assert!(matches!(gamma_extremal_sequence(&grp(&[6]), 0), Err(Error::NotPGroup)));
        assert!(matches!(
            gamma_extremal_sequence(&grp(&[2, 4]), 4),
            Err(Error::DeltaOutOfRange { .. })
        ));
    }
}
