//! The additive side: `beta`, `tau`, `q`, `v`, `v_G`, trace ideals, the
//! condition systems for `Phi_C` and `Phi^G`, `phi` and `omega`.
//!
//! Tuples use the basis of `H^ab` for every subgroup `H`; for cyclic `H`
//! this is `Z_p[H]` itself.

pub mod conditions;
pub mod maps;
pub mod omega;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::SubgroupLattice;
use crate::padic::{QpVec, Zp};
use crate::ring::{BasisJson, BasisKind, ElementJson};

pub use conditions::{check_phi_conditions, phi_module_basis, trace_ideal, ConditionReport, ConditionResult, Witness};
pub use maps::{
    beta_all, beta_cyclic, beta_h, eta, phi_power, q_map, t_map, tau, v_g_composite, v_g_explicit, v_g_map, v_map,
};
pub use omega::{abelian_basis, ker_omega_basis, omega_map, AbelianBasis, OmegaValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    AllSubgroups,
    CyclicOnly,
}

impl Shape {
    pub fn indices(self, lat: &SubgroupLattice) -> Vec<usize> {
        match self {
            Shape::AllSubgroups => (0..lat.len()).collect(),
            Shape::CyclicOnly => lat.cyclic_indices(),
        }
    }
}

/// `(a_H)` with `a_H` in `Q_p[H^ab]`, for the subgroups of the shape.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiTuple {
    pub shape: Shape,
    pub subgroups: Vec<usize>,
    pub entries: Vec<QpVec>,
}

fn dims(lat: &SubgroupLattice, subgroups: &[usize]) -> Vec<usize> {
    subgroups.iter().map(|&h| lat.info[h].hab.order()).collect()
}

impl PhiTuple {
    pub fn zero(lat: &SubgroupLattice, shape: Shape, ring: Zp) -> Self {
        let subgroups = shape.indices(lat);
        let entries = dims(lat, &subgroups).into_iter().map(|d| QpVec::zero(ring, d)).collect();
        PhiTuple { shape, subgroups, entries }
    }

    pub fn integral(lat: &SubgroupLattice, shape: Shape, ring: Zp, entries: Vec<Vec<u128>>) -> Result<Self> {
        let subgroups = shape.indices(lat);
        let d = dims(lat, &subgroups);
        if entries.len() != d.len() {
            return Err(Error::DimensionMismatch(entries.len(), d.len()));
        }
        for (e, &n) in entries.iter().zip(&d) {
            if e.len() != n {
                return Err(Error::DimensionMismatch(e.len(), n));
            }
        }
        let entries = entries.into_iter().map(|e| QpVec::integral(ring, e)).collect();
        Ok(PhiTuple { shape, subgroups, entries })
    }

    /// Entry dimensions, in order.
    pub fn dims(lat: &SubgroupLattice, shape: Shape) -> Vec<usize> {
        dims(lat, &shape.indices(lat))
    }

    pub fn position(&self, h: usize) -> Option<usize> {
        self.subgroups.binary_search(&h).ok()
    }

    pub fn entry(&self, h: usize) -> &QpVec {
        &self.entries[self.position(h).expect("subgroup present in tuple")]
    }

    /// Restriction to cyclic subgroups.
    pub fn project(&self, lat: &SubgroupLattice) -> PhiTuple {
        let subgroups = lat.cyclic_indices();
        let entries = subgroups.iter().map(|&h| self.entry(h).clone()).collect();
        PhiTuple { shape: Shape::CyclicOnly, subgroups, entries }
    }

    pub fn add(&self, other: &PhiTuple) -> PhiTuple {
        assert_eq!(self.subgroups, other.subgroups, "tuple shape mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        PhiTuple { shape: self.shape, subgroups: self.subgroups.clone(), entries }
    }

    pub fn sub(&self, other: &PhiTuple) -> PhiTuple {
        assert_eq!(self.subgroups, other.subgroups, "tuple shape mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        PhiTuple { shape: self.shape, subgroups: self.subgroups.clone(), entries }
    }

    pub fn scale(&self, c: i64) -> PhiTuple {
        let entries = self.entries.iter().map(|a| a.scale(c)).collect();
        PhiTuple { shape: self.shape, subgroups: self.subgroups.clone(), entries }
    }

    pub fn truncate(&self, abs: i64) -> PhiTuple {
        let entries = self.entries.iter().map(|a| a.truncate(abs)).collect();
        PhiTuple { shape: self.shape, subgroups: self.subgroups.clone(), entries }
    }

    pub fn abs_precision(&self) -> i64 {
        self.entries.iter().map(QpVec::abs_precision).min().unwrap_or(i64::MAX)
    }

    pub fn min_valuation(&self) -> Option<i64> {
        self.entries.iter().filter_map(QpVec::min_valuation).min()
    }

    /// Certified agreement: minimum residual over entries.
    pub fn residual(&self, other: &PhiTuple) -> i64 {
        assert_eq!(self.subgroups, other.subgroups, "tuple shape mismatch");
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.residual(b)).min().unwrap_or(i64::MAX)
    }

    pub fn to_integral(&self, prec: u32) -> Result<Vec<Vec<u128>>> {
        self.entries.iter().map(|e| e.to_integral(prec)).collect()
    }

    /// Concatenated integral coordinates modulo `p^prec`.
    pub fn flatten(&self, prec: u32) -> Result<Vec<u128>> {
        Ok(self.to_integral(prec)?.concat())
    }

    pub fn from_flat(lat: &SubgroupLattice, shape: Shape, ring: Zp, flat: &[u128]) -> Result<Self> {
        let subgroups = shape.indices(lat);
        let d = dims(lat, &subgroups);
        let total: usize = d.iter().sum();
        if flat.len() != total {
            return Err(Error::DimensionMismatch(flat.len(), total));
        }
        let mut entries = Vec::with_capacity(d.len());
        let mut off = 0;
        for n in d {
            entries.push(QpVec::integral(ring, flat[off..off + n].iter().map(|&x| ring.reduce(x)).collect()));
            off += n;
        }
        Ok(PhiTuple { shape, subgroups, entries })
    }

    pub fn to_json(&self, lat: &SubgroupLattice) -> PhiTupleJson {
        let entries = self
            .subgroups
            .iter()
            .zip(&self.entries)
            .map(|(&h, e)| {
                let n = e.normalize();
                TupleEntryJson { subgroup: h, elt: ElementJson::new(hab_basis(lat, h), &n.ring(), n.numerators(), n.shift()) }
            })
            .collect();
        PhiTupleJson { schema: crate::SCHEMA.to_string(), shape: self.shape, entries }
    }

    /// Entries must cover the subgroups of the shape in order. They are
    /// brought to a common denominator and the smallest precision.
    pub fn from_json(lat: &SubgroupLattice, j: &PhiTupleJson) -> Result<Self> {
        let subgroups = j.shape.indices(lat);
        if j.entries.len() != subgroups.len() {
            return Err(Error::DimensionMismatch(j.entries.len(), subgroups.len()));
        }
        let mut parts = Vec::with_capacity(subgroups.len());
        for (e, &h) in j.entries.iter().zip(&subgroups) {
            if e.subgroup != h || e.elt.basis != hab_basis(lat, h) {
                return Err(Error::BasisMismatch(format!("entry for #{} does not match subgroup #{h}", e.subgroup)));
            }
            parts.push((e.elt.dense()?.1, e.elt.shift, e.elt.precision));
        }
        let shift = parts.iter().map(|x| x.1).max().unwrap_or(0);
        let abs = parts.iter().map(|x| x.2).min().unwrap_or(0);
        let prec = u32::try_from(abs + shift as i64).map_err(|_| Error::InvalidPrecision(format!("precision {abs}")))?;
        let p = j.entries.first().map_or(lat.p(), |e| e.elt.p);
        if p != lat.p() || j.entries.iter().any(|e| e.elt.p != p) {
            return Err(Error::BasisMismatch(format!("entries are not over Z_{}", lat.p())));
        }
        let ring = Zp::new(p, prec)?;
        let entries = parts
            .into_iter()
            .map(|(v, s, _)| {
                let up = ring.p_pow(shift - s);
                QpVec::from_parts(ring, v.into_iter().map(|x| ring.mul(ring.reduce(x), up)).collect(), shift)
            })
            .collect();
        Ok(PhiTuple { shape: j.shape, subgroups, entries })
    }
}

/// Basis labels of `Z_p[H^ab]`: each coset is named by its smallest member.
pub fn hab_basis(lat: &SubgroupLattice, h: usize) -> BasisJson {
    let hab = &lat.info[h].hab;
    BasisJson {
        kind: BasisKind::Quotient,
        group: lat.group.table_hash(),
        labels: hab.lifts.iter().map(|&x| format!("g{x}")).collect(),
    }
}

/// Basis labels of `Z_p[Conj(G)]`: each class is named by its smallest member.
pub fn conj_basis(lat: &SubgroupLattice) -> BasisJson {
    BasisJson {
        kind: BasisKind::Conj,
        group: lat.group.table_hash(),
        labels: lat.classes.representatives.iter().map(|&x| format!("[g{x}]")).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleEntryJson {
    pub subgroup: usize,
    pub elt: ElementJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiTupleJson {
    pub schema: String,
    pub shape: Shape,
    pub entries: Vec<TupleEntryJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;

    #[test]
    fn json_round_trip_with_mixed_denominators() {
        let lat = SubgroupLattice::new(catalog_group("D4", &[]).unwrap()).unwrap();
        let ring = Zp::new(2, 20).unwrap();
        let a = QpVec::integral(ring, (0..lat.classes.len() as u128).map(|x| 3 * x + 1).collect());
        let t = beta_all(&lat, &a).unwrap();
        let q = q_map(&lat, &t.project(&lat)).unwrap();
        let back = PhiTuple::from_json(&lat, &q.to_json(&lat)).unwrap();
        assert!(back.residual(&q) >= back.abs_precision().min(q.abs_precision()));
        assert!(back.residual(&t) >= 16);
        let text = serde_json::to_string(&t.to_json(&lat)).unwrap();
        let j: PhiTupleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(PhiTuple::from_json(&lat, &j).unwrap().residual(&t), 20);
        let mut wrong = j.clone();
        wrong.entries.swap(0, 1);
        assert!(matches!(PhiTuple::from_json(&lat, &wrong), Err(Error::BasisMismatch(_))));
    }
}
