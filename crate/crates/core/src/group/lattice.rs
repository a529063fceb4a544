//! The subgroup inventory of a group, with the per-subgroup data every map
//! on the additive and multiplicative sides needs.

use std::collections::HashMap;

use rayon::prelude::*;

use super::subgroup::{ConjClassSet, ElementSet, QuotientGroup, Subgroup};
use super::FiniteGroup;
use crate::error::{Error, Result};

pub const DEFAULT_SUBGROUP_CAP: usize = 4096;

/// Conjugacy classes of a subgroup `K`, indexed by ambient element ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubClasses {
    /// Class index of each element of `K`; `usize::MAX` outside `K`.
    pub class_of: Vec<usize>,
    /// Smallest ambient id in each class.
    pub reps: Vec<usize>,
}

impl SubClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SubgroupInfo {
    pub subgroup: Subgroup,
    pub normalizer: usize,
    /// Coset representatives of `H` in `N_G H`.
    pub weyl_reps: Vec<usize>,
    /// Representatives `x` with `G = ⊔ x H`.
    pub coset_reps: Vec<usize>,
    pub commutator: usize,
    pub hab: QuotientGroup,
    /// `P^p`, for cyclic subgroups.
    pub power: Option<usize>,
    /// Index of `g H g^-1` for each generator `g` of `G`.
    pub conj_by_gen: Vec<usize>,
    pub classes: SubClasses,
}

impl SubgroupInfo {
    pub fn order(&self) -> usize {
        self.subgroup.order()
    }

    pub fn is_cyclic(&self) -> bool {
        self.subgroup.is_cyclic()
    }

    pub fn index_in_group(&self) -> usize {
        self.coset_reps.len()
    }
}

#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    pub group: FiniteGroup,
    pub classes: ConjClassSet,
    pub info: Vec<SubgroupInfo>,
    index: HashMap<ElementSet, usize>,
    contained: Vec<Vec<bool>>,
}

fn sub_classes(g: &FiniteGroup, k: &Subgroup) -> SubClasses {
    let mut class_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for &x in k.elements() {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &y in k.elements() {
            class_of[g.conj(y, x)] = c;
        }
    }
    SubClasses { class_of, reps }
}

impl SubgroupLattice {
    pub fn new(group: FiniteGroup) -> Result<Self> {
        Self::with_cap(group, DEFAULT_SUBGROUP_CAP)
    }

    pub fn with_cap(group: FiniteGroup, max_subgroups: usize) -> Result<Self> {
        let subs = group.all_subgroups(max_subgroups)?;
        let index: HashMap<ElementSet, usize> = subs.iter().enumerate().map(|(i, s)| (s.members().clone(), i)).collect();
        let lookup = |s: &Subgroup| -> Result<usize> {
            index
                .get(s.members())
                .copied()
                .ok_or_else(|| Error::InternalMismatch("subgroup missing from inventory".into()))
        };
        let info = subs
            .par_iter()
            .map(|h| {
                let normalizer = group.normalizer(h);
                let commutator = group.commutator_subgroup(h);
                let power = match h.is_cyclic() {
                    true => Some(lookup(&group.power_subgroup(h)?)?),
                    false => None,
                };
                let conj_by_gen = group
                    .generators()
                    .iter()
                    .map(|&g| lookup(&group.conjugate_subgroup(h, g)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SubgroupInfo {
                    subgroup: h.clone(),
                    normalizer: lookup(&normalizer)?,
                    weyl_reps: group.left_coset_reps_in(&normalizer, h),
                    coset_reps: group.coset_reps(h),
                    commutator: lookup(&commutator)?,
                    hab: group.quotient(h, &commutator)?,
                    power,
                    conj_by_gen,
                    classes: sub_classes(&group, h),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let contained = subs.iter().map(|a| subs.iter().map(|b| a.is_subgroup_of(b)).collect()).collect();
        let classes = group.conjugacy_classes();
        Ok(SubgroupLattice { group, classes, info, index, contained })
    }

    pub fn len(&self) -> usize {
        self.info.len()
    }

    pub fn is_empty(&self) -> bool {
        self.info.is_empty()
    }

    pub fn p(&self) -> u64 {
        self.group.p()
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.info[i].subgroup
    }

    pub fn index_of(&self, s: &Subgroup) -> Option<usize> {
        self.index.get(s.members()).copied()
    }

    pub fn index_of_set(&self, s: &ElementSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Index of the subgroup generated by `g`.
    pub fn cyclic_index(&self, g: usize) -> usize {
        self.index[&self.group.closure(&[g])]
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn whole(&self) -> usize {
        self.info.len() - 1
    }

    /// `H_i <= H_j`.
    pub fn is_sub(&self, i: usize, j: usize) -> bool {
        self.contained[i][j]
    }

    pub fn cyclic_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.info[i].is_cyclic()).collect()
    }

    /// Pairs `(H, H1)` with `H <= H1` and `[H1, H1] <= H`.
    pub fn admissible_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for h1 in 0..self.len() {
            let d = self.info[h1].commutator;
            for h in 0..self.len() {
                if self.is_sub(h, h1) && self.is_sub(d, h) {
                    out.push((h, h1));
                }
            }
        }
        out
    }

    /// Index of `g H_i g^-1` for arbitrary `g`.
    pub fn conjugate_index(&self, i: usize, g: usize) -> usize {
        let set = ElementSet::from_ids(
            self.group.order(),
            self.info[i].subgroup.elements().iter().map(|&x| self.group.conj(g, x)),
        );
        self.index[&set]
    }
}

#[cfg(test)]
mod tests {
    use super::super::catalog::catalog_group;
    use super::*;

    #[test]
    fn lattice_inventory() {
        for name in ["C8", "D4", "Q8", "Heis27", "C3xC3", "C25"] {
            let g = catalog_group(name, &[]).unwrap();
            let lat = SubgroupLattice::new(g.clone()).unwrap();
            assert_eq!(lat.subgroup(0).order(), 1);
            assert_eq!(lat.subgroup(lat.whole()).order(), g.order());
            for (i, info) in lat.info.iter().enumerate() {
                let n = lat.subgroup(info.normalizer);
                assert!(info.subgroup.is_subgroup_of(n));
                assert_eq!(info.weyl_reps.len() * info.order(), n.order());
                assert_eq!(info.hab.order() * lat.subgroup(info.commutator).order(), info.order());
                assert!(info.hab.group.is_abelian());
                for (k, &g) in lat.group.generators().iter().enumerate() {
                    assert_eq!(info.conj_by_gen[k], lat.conjugate_index(i, g));
                }
                let sizes: usize = info.classes.reps.iter().map(|&r| {
                    info.subgroup.elements().iter().filter(|&&x| info.classes.class_of[x] == info.classes.class_of[r]).count()
                }).sum();
                assert_eq!(sizes, info.order());
            }
        }
    }

    #[test]
    fn admissible_pairs_include_diagonal() {
        let lat = SubgroupLattice::new(catalog_group("Q8", &[]).unwrap()).unwrap();
        let pairs = lat.admissible_pairs();
        for i in 0..lat.len() {
            assert!(pairs.contains(&(i, i)));
        }
        // [Q8, Q8] has order 2, so the trivial subgroup pairs only with abelian H1
        assert!(!pairs.contains(&(0, lat.whole())));
    }
}
