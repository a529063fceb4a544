//! The multiplicative side: `theta`, `nr`, `alpha`, `u_{G,H}`, the integral
//! logarithm `L`, the tuple logarithm, and the `Psi^G` conditions.
//!
//! Elements of `K_1` are handled through unit representatives.

pub mod conditions;
pub mod maps;
pub mod units;

use serde::{Deserialize, Serialize};

use crate::additive::{hab_basis, TupleEntryJson};
use crate::error::{Error, Result};
use crate::group::SubgroupLattice;
use crate::padic::Zp;
use crate::ring::{ElementJson, GroupRing};

pub use conditions::{check_psi_conditions, check_psi_conditions_with};
pub use maps::{
    alpha, alpha_with, integral_log_l, key_identity_all, key_identity_check, nr_map, oliver_taylor_check, script_l, script_l_with,
    theta_all, u_map, CharacterChoice,
};
pub use units::{random_unit, seeded_rng, UnitShape};

/// `(x_H)` with `x_H` a unit of `Z_p[H^ab]`, one entry per subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiTuple {
    pub ring: Zp,
    pub entries: Vec<Vec<u128>>,
}

impl PsiTuple {
    pub fn new(lat: &SubgroupLattice, ring: Zp, entries: Vec<Vec<u128>>) -> Result<Self> {
        if entries.len() != lat.len() {
            return Err(Error::DimensionMismatch(entries.len(), lat.len()));
        }
        for (h, e) in entries.iter().enumerate() {
            let hab = &lat.info[h].hab;
            if e.len() != hab.order() {
                return Err(Error::DimensionMismatch(e.len(), hab.order()));
            }
            if !GroupRing::new(&hab.group, ring).is_unit(e) {
                return Err(Error::NotAUnit);
            }
        }
        Ok(PsiTuple { ring, entries })
    }

    /// The constant tuple `c` in every entry.
    pub fn diagonal(lat: &SubgroupLattice, ring: Zp, c: u128) -> Result<Self> {
        let entries = lat.info.iter().map(|i| GroupRing::new(&i.hab.group, ring).scalar(c)).collect();
        Self::new(lat, ring, entries)
    }

    pub fn ones(lat: &SubgroupLattice, ring: Zp) -> Self {
        Self::diagonal(lat, ring, 1).expect("1 is a unit")
    }

    pub fn is_one(&self) -> bool {
        self.entries.iter().all(|e| e[0] == 1 && e[1..].iter().all(|&c| c == 0))
    }

    pub fn to_json(&self, lat: &SubgroupLattice) -> PsiTupleJson {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(h, e)| TupleEntryJson { subgroup: h, elt: ElementJson::new(hab_basis(lat, h), &self.ring, e, 0) })
            .collect();
        PsiTupleJson { schema: crate::SCHEMA.to_string(), entries }
    }

    pub fn from_json(lat: &SubgroupLattice, j: &PsiTupleJson) -> Result<Self> {
        if j.entries.len() != lat.len() {
            return Err(Error::DimensionMismatch(j.entries.len(), lat.len()));
        }
        let mut ring = None;
        let mut entries = Vec::with_capacity(j.entries.len());
        for (h, e) in j.entries.iter().enumerate() {
            if e.subgroup != h || e.elt.basis != hab_basis(lat, h) {
                return Err(Error::BasisMismatch(format!("entry {h} does not match subgroup #{h}")));
            }
            if e.elt.shift != 0 {
                return Err(Error::NonIntegralInput);
            }
            let (r, v) = e.elt.dense()?;
            if *ring.get_or_insert(r) != r {
                return Err(Error::BasisMismatch("entries at different precisions".into()));
            }
            entries.push(v);
        }
        let ring = ring.ok_or_else(|| Error::BadParams("empty tuple".into()))?;
        Self::new(lat, ring, entries)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiTupleJson {
    pub schema: String,
    pub entries: Vec<TupleEntryJson>,
}
