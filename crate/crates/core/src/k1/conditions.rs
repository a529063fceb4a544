//! The `Psi^G` conditions M1-M4.

use rayon::prelude::*;

use super::maps::{alphas, psi_quotient, CharacterChoice};
use super::PsiTuple;
use crate::additive::conditions::conj_relabel;
use crate::additive::{trace_ideal, ConditionReport, ConditionResult, Witness};
use crate::error::{Error, Result};
use crate::group::SubgroupLattice;
use crate::padic::Zp;
use crate::ring::{GroupRing, Subquotient};

/// Digits to which two residue vectors agree, capped at the precision.
fn agree(ring: &Zp, a: &[u128], b: &[u128]) -> i64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = ring.sub(x, y);
            if d == 0 {
                ring.prec()
            } else {
                ring.valuation(d)
            }
        })
        .min()
        .unwrap_or(ring.prec()) as i64
}

pub fn check_psi_conditions(lat: &SubgroupLattice, t: &PsiTuple, n_check: u32) -> Result<ConditionReport> {
    check_psi_conditions_with(lat, t, n_check, CharacterChoice::Canonical)
}

/// M1-M4 at `n_check` digits. M4 is decided modulo the `p`-power torsion
/// of `Z_p[P]^x` (`+-P` for `p = 2`, `P` otherwise), which `K~_1` discards.
pub fn check_psi_conditions_with(
    lat: &SubgroupLattice,
    t: &PsiTuple,
    n_check: u32,
    choice: CharacterChoice,
) -> Result<ConditionReport> {
    let ring = t.ring;
    if ring.prec() < n_check {
        return Err(Error::PrecisionExhausted(format!("tuple has {} digits, need {n_check}", ring.prec())));
    }
    if t.entries.len() != lat.len() {
        return Err(Error::DimensionMismatch(t.entries.len(), lat.len()));
    }
    let g = &lat.group;

    let pairs: Vec<(usize, usize)> = lat.admissible_pairs().into_iter().filter(|(h, h1)| h != h1).collect();
    let m1_res: Vec<i64> = pairs
        .par_iter()
        .map(|&(h, h1)| {
            let sq = Subquotient::new(lat, h, h1)?;
            let a = sq.nr(lat, ring, &t.entries[h1])?;
            Ok(agree(&ring, &a, &sq.pi(ring, &t.entries[h])))
        })
        .collect::<Result<_>>()?;
    let mut m1 = ConditionResult::new("M1");
    for (&(h, h1), &r) in pairs.iter().zip(&m1_res) {
        m1.record(r >= n_check as i64, || Witness { subgroups: vec![h, h1], element: None, residual: Some(r) });
    }

    let mut m2 = ConditionResult::new("M2");
    for &x in g.generators() {
        for h in 0..lat.len() {
            let (target, op) = conj_relabel(lat, h, x);
            let moved = op.apply(lat, &[], &ring, &t.entries[h]);
            let r = agree(&ring, &moved, &t.entries[target]);
            m2.record(r >= n_check as i64, || Witness { subgroups: vec![h, target], element: Some(x), residual: Some(r) });
        }
    }

    let a = alphas(lat, t, choice)?;
    let small = ring.with_prec(n_check)?;
    let p = lat.p();
    let verdicts: Vec<(bool, Option<bool>)> = (0..lat.len())
        .into_par_iter()
        .map(|h| {
            let q = psi_quotient(lat, h, t, &a)?;
            let hab = &lat.info[h].hab;
            let gr = GroupRing::new(&hab.group, ring);
            let m3 = gr.augmentation(&q) % p as u128 == 1 % p as u128;
            if !lat.info[h].is_cyclic() {
                return Ok((m3, None));
            }
            let target = trace_ideal(lat, h, small)?.scaled(small.reduce(p as u128 * lat.info[h].order() as u128));
            let signs: &[bool] = if p == 2 { &[false, true] } else { &[false] };
            let mut m4 = false;
            'search: for z in 0..hab.order() {
                let shifted = gr.mul(&q, &gr.basis(z));
                for &neg in signs {
                    let mut w: Vec<u128> = shifted.iter().map(|&c| small.reduce(if neg { ring.neg(c) } else { c })).collect();
                    w[0] = small.sub(w[0], 1);
                    if target.contains(&w)? {
                        m4 = true;
                        break 'search;
                    }
                }
            }
            Ok((m3, Some(m4)))
        })
        .collect::<Result<_>>()?;
    let mut m3 = ConditionResult::new("M3");
    let mut m4 = ConditionResult::new("M4");
    for (h, &(ok3, ok4)) in verdicts.iter().enumerate() {
        m3.record(ok3, || Witness { subgroups: vec![h], element: None, residual: None });
        if let Some(ok4) = ok4 {
            m4.record(ok4, || Witness { subgroups: vec![h], element: None, residual: None });
        }
    }
    Ok(ConditionReport::new("psi_g", n_check, vec![m1, m2, m3, m4]))
}
