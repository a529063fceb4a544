//! Twisting `Z_p[P]` by powers of an order-`p` character of a cyclic `P`.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::padic::{CycloElt, CycloRing, Zp};

/// The surjection `P -> Z/p` sending `gen^j` to `j mod p`, indexed by
/// ambient element id (`usize::MAX` outside `P`).
pub fn character_values(g: &FiniteGroup, pgrp: &Subgroup, gen: usize) -> Result<Vec<usize>> {
    if !pgrp.is_cyclic() || !pgrp.contains(gen) || g.element_order(gen) != pgrp.order() {
        return Err(Error::NotCyclic);
    }
    let p = g.p() as usize;
    let mut values = vec![usize::MAX; g.order()];
    let mut x = 0;
    for j in 0..pgrp.order() {
        values[x] = j % p;
        x = g.mul(x, gen);
    }
    Ok(values)
}

/// `sum c_h h -> sum c_h zeta^(k a(h)) h` for the character values `a`.
pub fn char_twist(cr: &CycloRing, values: &[usize], x: &[u128], k: usize) -> Vec<CycloElt> {
    let p = cr.base().p() as usize;
    x.iter()
        .zip(values)
        .map(|(&c, &a)| {
            if c == 0 || a == usize::MAX {
                vec![0; cr.degree()]
            } else {
                let z = cr.zeta_pow(k * a % p);
                z.iter().map(|&zi| cr.base().mul(zi, c)).collect()
            }
        })
        .collect()
}

/// Embeds `Z_p[G]` coefficients into the cyclotomic extension.
pub fn to_cyclo(cr: &CycloRing, x: &[u128]) -> Vec<CycloElt> {
    x.iter().map(|&c| cr.from_base(c)).collect()
}

/// Descends cyclotomic coefficients to `Z_p`, if all are constants.
pub fn from_cyclo(cr: &CycloRing, x: &[CycloElt]) -> Option<Vec<u128>> {
    x.iter().map(|c| cr.as_base(c)).collect()
}

/// `prod_{k=0}^{p-1}` of the twists of `x`, descended to `Z_p`.
pub fn twist_norm(g: &FiniteGroup, ring: Zp, values: &[usize], x: &[u128]) -> Result<Vec<u128>> {
    let cr = CycloRing::new(ring);
    let gr = super::element::GroupRing::new(g, cr);
    let mut acc = to_cyclo(&cr, x);
    for k in 1..g.p() as usize {
        acc = gr.mul(&acc, &char_twist(&cr, values, x, k));
    }
    from_cyclo(&cr, &acc).ok_or(Error::GaloisDescentFailure)
}
