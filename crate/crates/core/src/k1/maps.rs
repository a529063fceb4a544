//! `theta`, `nr`, `alpha`, `u_{G,H}`, `L`, the tuple logarithm and the two
//! identity checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PsiTuple;
use crate::additive::maps::log_order;
use crate::additive::{beta_h, phi_power, PhiTuple, Shape};
use crate::error::{Error, Result};
use crate::group::SubgroupLattice;
use crate::padic::{QpVec, Zp};
use crate::ring::{character_values, conj_project, log_unit, pushforward, theta, twist_norm, GroupRing, Subquotient};

/// Which order-`p` character of each cyclic `P` defines `alpha_P`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterChoice {
    /// `gen -> zeta` for the canonical generator.
    #[default]
    Canonical,
    /// `gen^2 -> zeta`; the same character when `p = 2`.
    Alternate,
}

/// `theta^G = (theta^G_H(u))_H`.
pub fn theta_all(lat: &SubgroupLattice, ring: Zp, u: &[u128]) -> Result<PsiTuple> {
    let entries = (0..lat.len()).into_par_iter().map(|h| theta(lat, h, ring, u)).collect::<Result<Vec<_>>>()?;
    Ok(PsiTuple { ring, entries })
}

/// `nr_{H,H1}: Z_p[H1^ab]^x -> Z_p[H/[H1,H1]]^x`.
pub fn nr_map(lat: &SubgroupLattice, h: usize, h1: usize, ring: Zp, x: &[u128]) -> Result<Vec<u128>> {
    if !lat.is_sub(h, h1) || !lat.is_sub(lat.info[h1].commutator, h) {
        return Err(Error::PreconditionViolated(format!("(#{h}, #{h1}) is not an admissible pair")));
    }
    if x.len() != lat.info[h1].hab.order() {
        return Err(Error::DimensionMismatch(x.len(), lat.info[h1].hab.order()));
    }
    Subquotient::new(lat, h, h1)?.nr(lat, ring, x)
}

pub fn alpha(lat: &SubgroupLattice, pidx: usize, ring: Zp, x: &[u128]) -> Result<Vec<u128>> {
    alpha_with(lat, pidx, ring, x, CharacterChoice::Canonical)
}

/// `alpha_P(x) = x^p / prod_k twist_k(x)` for cyclic `P`, on the `P^ab`
/// basis; the identity for trivial `P`.
pub fn alpha_with(lat: &SubgroupLattice, pidx: usize, ring: Zp, x: &[u128], choice: CharacterChoice) -> Result<Vec<u128>> {
    let info = &lat.info[pidx];
    if !info.is_cyclic() {
        return Err(Error::NotCyclic);
    }
    let ab = &info.hab.group;
    if x.len() != ab.order() {
        return Err(Error::DimensionMismatch(x.len(), ab.order()));
    }
    let gr = GroupRing::new(ab, ring);
    if !gr.is_unit(x) {
        return Err(Error::NotAUnit);
    }
    if info.order() == 1 {
        return Ok(x.to_vec());
    }
    let p = lat.p();
    let mut gen = info.hab.project(info.subgroup.canonical_generator().expect("cyclic"));
    if choice == CharacterChoice::Alternate && p > 2 {
        gen = ab.pow(gen, 2);
    }
    let values = character_values(ab, &ab.whole(), gen)?;
    let den = twist_norm(ab, ring, &values, x)?;
    Ok(gr.mul(&gr.pow(x, p), &gr.invert_unit(&den)?))
}

pub(crate) fn alphas(lat: &SubgroupLattice, t: &PsiTuple, choice: CharacterChoice) -> Result<Vec<(usize, Vec<u128>)>> {
    lat.cyclic_indices()
        .into_par_iter()
        .map(|pidx| Ok((pidx, alpha_with(lat, pidx, t.ring, &t.entries[pidx], choice)?)))
        .collect()
}

/// `prod_{P cyclic, P^p <= H} im_H(ver(alpha_P))^|P^p|`.
pub(crate) fn u_from_alphas(lat: &SubgroupLattice, h: usize, ring: Zp, alphas: &[(usize, Vec<u128>)]) -> Vec<u128> {
    let g = &lat.group;
    let p = lat.p() as usize;
    let hab = &lat.info[h].hab;
    let gr = GroupRing::new(&hab.group, ring);
    let mut acc = gr.one();
    for (pidx, a) in alphas {
        let info = &lat.info[*pidx];
        let pp = info.power.expect("cyclic subgroups carry P^p");
        if !lat.is_sub(pp, h) {
            continue;
        }
        let lifts = &info.hab.lifts;
        let v = pushforward(&ring, hab.order(), a, |i| hab.project(g.pow(lifts[i], p)));
        acc = gr.mul(&acc, &gr.pow(&v, lat.info[pp].order() as u64));
    }
    acc
}

/// `u_{G,H}((x_P))`.
pub fn u_map(lat: &SubgroupLattice, h: usize, t: &PsiTuple) -> Result<Vec<u128>> {
    let a = alphas(lat, t, CharacterChoice::Canonical)?;
    Ok(u_from_alphas(lat, h, t.ring, &a))
}

/// `x_H^(p|H|) / u_{G,H}`.
pub(crate) fn psi_quotient(lat: &SubgroupLattice, h: usize, t: &PsiTuple, alphas: &[(usize, Vec<u128>)]) -> Result<Vec<u128>> {
    let gr = GroupRing::new(&lat.info[h].hab.group, t.ring);
    let u = u_from_alphas(lat, h, t.ring, alphas);
    let e = lat.p() * lat.info[h].order() as u64;
    Ok(gr.mul(&gr.pow(&t.entries[h], e), &gr.invert_unit(&u)?))
}

fn log_lambda(lat: &SubgroupLattice, ring: Zp, u: &[u128]) -> Result<QpVec> {
    let lg = log_unit(&GroupRing::new(&lat.group, ring), u)?;
    Ok(conj_project(&lat.classes.class_of, lat.classes.len(), &lg))
}

fn l_unchecked(lat: &SubgroupLattice, ring: Zp, u: &[u128]) -> Result<QpVec> {
    let lam = log_lambda(lat, ring, u)?;
    Ok(lam.sub(&phi_power(lat, &lam)?.mul_p_pow(-1)))
}

/// `L(u) = log u - (1/p) phi(log u)` on `Z_p[Conj(G)]`; fails with
/// `IntegralityViolation` on a negative valuation.
pub fn integral_log_l(lat: &SubgroupLattice, ring: Zp, u: &[u128]) -> Result<QpVec> {
    if u.len() != lat.group.order() {
        return Err(Error::DimensionMismatch(u.len(), lat.group.order()));
    }
    let l = l_unchecked(lat, ring, u)?;
    if !l.is_integral() {
        return Err(Error::IntegralityViolation(format!("L has valuation {}", l.min_valuation().unwrap_or(0))));
    }
    Ok(l)
}

fn normalized_log(lat: &SubgroupLattice, h: usize, ring: Zp, q: &[u128]) -> Result<QpVec> {
    let gr = GroupRing::new(&lat.info[h].hab.group, ring);
    Ok(log_unit(&gr, q)?.mul_p_pow(-(1 + log_order(lat, h))))
}

/// The tuple logarithm `(1/(p|P|)) log(x_P^(p|P|) / u_{G,P})` over all `P`.
pub fn script_l(lat: &SubgroupLattice, t: &PsiTuple) -> Result<PhiTuple> {
    script_l_with(lat, t, CharacterChoice::Canonical)
}

pub fn script_l_with(lat: &SubgroupLattice, t: &PsiTuple, choice: CharacterChoice) -> Result<PhiTuple> {
    let a = alphas(lat, t, choice)?;
    let p = lat.p() as u128;
    let entries = (0..lat.len())
        .into_par_iter()
        .map(|h| {
            let q = psi_quotient(lat, h, t, &a)?;
            if q.iter().fold(0u128, |s, &c| t.ring.add(s, c)) % p != 1 % p {
                return Err(Error::M3Violation(h));
            }
            let v = normalized_log(lat, h, t.ring, &q)?;
            if !v.is_integral() {
                return Err(Error::IntegralityViolation(format!(
                    "tuple logarithm at #{h} has valuation {}",
                    v.min_valuation().unwrap_or(0)
                )));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhiTuple { shape: Shape::AllSubgroups, subgroups: (0..lat.len()).collect(), entries })
}

/// Agreement in digits of `beta^G_H(L(u))` and
/// `(1/(p|H|)) log(theta_H(u)^(p|H|) / u_{G,H}(theta(u)))`.
pub fn key_identity_check(lat: &SubgroupLattice, h: usize, ring: Zp, u: &[u128]) -> Result<i64> {
    Ok(key_identity_all(lat, ring, u, &[h])?[0])
}

/// `key_identity_check` for several subgroups, sharing `L(u)` and `theta(u)`.
pub fn key_identity_all(lat: &SubgroupLattice, ring: Zp, u: &[u128], subgroups: &[usize]) -> Result<Vec<i64>> {
    let l = l_unchecked(lat, ring, u)?;
    let th = theta_all(lat, ring, u)?;
    let a = alphas(lat, &th, CharacterChoice::Canonical)?;
    subgroups
        .par_iter()
        .map(|&h| {
            let lhs = beta_h(lat, lat.whole(), h, &l)?;
            let rhs = normalized_log(lat, h, ring, &psi_quotient(lat, h, &th, &a)?)?;
            Ok(lhs.residual(&rhs))
        })
        .collect()
}

/// Agreement in digits of `beta^G_H(log u)` and `log(theta_H(u))`.
pub fn oliver_taylor_check(lat: &SubgroupLattice, h: usize, ring: Zp, u: &[u128]) -> Result<i64> {
    let lhs = beta_h(lat, lat.whole(), h, &log_lambda(lat, ring, u)?)?;
    let gr = GroupRing::new(&lat.info[h].hab.group, ring);
    let rhs = log_unit(&gr, &theta(lat, h, ring, u)?)?;
    Ok(lhs.residual(&rhs))
}
