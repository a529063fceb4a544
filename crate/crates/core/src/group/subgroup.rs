//! Subgroups, conjugacy, cosets and quotients of a [`FiniteGroup`].

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::FiniteGroup;
use crate::error::{Error, Result};

/// Bitset over element ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    bits: Vec<u64>,
    n: usize,
}

impl ElementSet {
    pub fn new(n: usize) -> Self {
        ElementSet { bits: vec![0; n.div_ceil(64)], n }
    }

    pub fn from_ids(n: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut s = ElementSet::new(n);
        for i in ids {
            s.insert(i);
        }
        s
    }

    /// Returns true when `i` was not yet present.
    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.bits[w] & b == 0;
        self.bits[w] |= b;
        fresh
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    pub fn universe(&self) -> usize {
        self.n
    }
}

/// A subgroup with its sorted member list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: ElementSet,
    elements: Vec<usize>,
    generators: Vec<usize>,
    cyclic_generator: Option<usize>,
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.order(), &self.elements).cmp(&(other.order(), &other.elements))
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.contains(g)
    }

    /// A small generating set, chosen greedily in id order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator.is_some()
    }

    /// Smallest id generating the subgroup, if cyclic.
    pub fn canonical_generator(&self) -> Option<usize> {
        self.cyclic_generator
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// Conjugacy classes, ordered by representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjClassSet {
    pub class_of: Vec<usize>,
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl ConjClassSet {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// `source / kernel` as a group in its own right.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub source: Subgroup,
    pub kernel: Subgroup,
    pub group: FiniteGroup,
    /// Ambient element id to coset id; `None` outside `source`.
    pub projection: Vec<Option<usize>>,
    /// Smallest ambient id in each coset.
    pub lifts: Vec<usize>,
}

impl QuotientGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn project(&self, g: usize) -> usize {
        self.projection[g].expect("element lies in the quotient source")
    }
}

impl FiniteGroup {
    /// Builds the subgroup with the given member set.
    fn subgroup_from_set(&self, members: ElementSet) -> Subgroup {
        let elements: Vec<usize> = members.iter().collect();
        let mut generators = Vec::new();
        let mut span = ElementSet::from_ids(self.order(), [0]);
        for &g in &elements {
            if !span.contains(g) {
                generators.push(g);
                span = self.closure(&generators);
            }
        }
        let n = elements.len();
        let cyclic_generator = elements.iter().copied().find(|&g| self.element_order(g) == n);
        Subgroup { members, elements, generators, cyclic_generator }
    }

    pub fn subgroup_generated(&self, gens: &[usize]) -> Subgroup {
        self.subgroup_from_set(self.closure(gens))
    }

    /// Validates that `ids` is a subgroup.
    pub fn subgroup_from_elements(&self, ids: &[usize]) -> Result<Subgroup> {
        let set = ElementSet::from_ids(self.order(), ids.iter().copied());
        let closed = self.closure(ids);
        if closed != set {
            return Err(Error::BadParams("element list is not a subgroup".into()));
        }
        Ok(self.subgroup_from_set(set))
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup_from_set(ElementSet::from_ids(self.order(), 0..self.order()))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.subgroup_from_set(ElementSet::from_ids(self.order(), [0]))
    }

    pub fn conjugacy_classes(&self) -> ConjClassSet {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let c = representatives.len();
            let mut size = 0;
            for x in 0..n {
                let y = self.conj(x, g);
                if class_of[y] == usize::MAX {
                    class_of[y] = c;
                    size += 1;
                }
            }
            representatives.push(g);
            sizes.push(size);
        }
        ConjClassSet { class_of, representatives, sizes }
    }

    /// Every subgroup: cyclic subgroups closed under pairwise joins,
    /// sorted by (order, member list). Fails past `max_count` subgroups.
    pub fn all_subgroups(&self, max_count: usize) -> Result<Vec<Subgroup>> {
        let mut seen: HashSet<ElementSet> = HashSet::new();
        let mut all: Vec<(ElementSet, Vec<usize>)> = Vec::new();
        for g in 0..self.order() {
            let s = self.closure(&[g]);
            if seen.insert(s.clone()) {
                all.push((s, vec![g]));
            }
        }
        let mut frontier = 0;
        while frontier < all.len() {
            let end = all.len();
            for i in frontier..end {
                for j in 0..i {
                    let (a, b) = (&all[i].0, &all[j].0);
                    if a.is_subset(b) || b.is_subset(a) {
                        continue;
                    }
                    let gens: Vec<usize> = all[i].1.iter().chain(&all[j].1).copied().collect();
                    let s = self.closure(&gens);
                    if seen.insert(s.clone()) {
                        if all.len() >= max_count {
                            return Err(Error::GroupTooLarge { cap: max_count });
                        }
                        all.push((s, gens));
                    }
                }
            }
            frontier = end;
        }
        let mut subs: Vec<Subgroup> = all.into_iter().map(|(s, _)| self.subgroup_from_set(s)).collect();
        subs.sort();
        Ok(subs)
    }

    pub fn cyclic_subgroup(&self, g: usize) -> Subgroup {
        self.subgroup_generated(&[g])
    }

    /// `g H g^-1`.
    pub fn conjugate_subgroup(&self, h: &Subgroup, g: usize) -> Subgroup {
        let set = ElementSet::from_ids(self.order(), h.elements().iter().map(|&x| self.conj(g, x)));
        self.subgroup_from_set(set)
    }

    pub fn normalizes(&self, g: usize, h: &Subgroup) -> bool {
        h.elements().iter().all(|&x| h.contains(self.conj(g, x)))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let set = ElementSet::from_ids(self.order(), (0..self.order()).filter(|&g| self.normalizes(g, h)));
        self.subgroup_from_set(set)
    }

    /// Normalizer of `h` inside `k`.
    pub fn normalizer_in(&self, k: &Subgroup, h: &Subgroup) -> Subgroup {
        let set = ElementSet::from_ids(
            self.order(),
            k.elements().iter().copied().filter(|&g| self.normalizes(g, h)),
        );
        self.subgroup_from_set(set)
    }

    pub fn is_normal_in(&self, h: &Subgroup, k: &Subgroup) -> bool {
        h.is_subgroup_of(k) && k.generators().iter().all(|&g| self.normalizes(g, h))
    }

    /// Representatives `x` with `k = ⊔ x h`, the smallest id of each coset,
    /// in increasing order.
    pub fn left_coset_reps_in(&self, k: &Subgroup, h: &Subgroup) -> Vec<usize> {
        let mut covered = ElementSet::new(self.order());
        let mut reps = Vec::with_capacity(k.order() / h.order());
        for &x in k.elements() {
            if covered.contains(x) {
                continue;
            }
            reps.push(x);
            for &y in h.elements() {
                covered.insert(self.mul(x, y));
            }
        }
        reps
    }

    pub fn coset_reps(&self, h: &Subgroup) -> Vec<usize> {
        self.left_coset_reps_in(&self.whole(), h)
    }

    /// Coset representatives of `h` in its normalizer.
    pub fn weyl_reps(&self, h: &Subgroup) -> Vec<usize> {
        self.left_coset_reps_in(&self.normalizer(h), h)
    }

    /// `[a, b]` for `a, b` ranging over `h`.
    pub fn commutator_subgroup(&self, h: &Subgroup) -> Subgroup {
        let mut comms = ElementSet::new(self.order());
        for &a in h.elements() {
            for &b in h.elements() {
                comms.insert(self.commutator(a, b));
            }
        }
        let gens: Vec<usize> = comms.iter().collect();
        self.subgroup_generated(&gens)
    }

    pub fn center(&self) -> Subgroup {
        let n = self.order();
        let set = ElementSet::from_ids(n, (0..n).filter(|&z| (0..n).all(|g| self.mul(z, g) == self.mul(g, z))));
        self.subgroup_from_set(set)
    }

    /// `P^p` for cyclic `P`.
    pub fn power_subgroup(&self, pgrp: &Subgroup) -> Result<Subgroup> {
        let g = pgrp.canonical_generator().ok_or(Error::NotCyclic)?;
        Ok(self.cyclic_subgroup(self.pow(g, self.p() as usize)))
    }

    /// Partitions `list` into orbits under conjugation by `acting`;
    /// each orbit is a list of indices into `list`, smallest first.
    pub fn subgroup_orbits(&self, acting: &Subgroup, list: &[Subgroup]) -> Vec<Vec<usize>> {
        let index: HashMap<&ElementSet, usize> = list.iter().enumerate().map(|(i, s)| (s.members(), i)).collect();
        let mut done = vec![false; list.len()];
        let mut orbits = Vec::new();
        for i in 0..list.len() {
            if done[i] {
                continue;
            }
            let mut orbit = Vec::new();
            for &g in acting.elements() {
                let c = self.conjugate_subgroup(&list[i], g);
                if let Some(&j) = index.get(c.members()) {
                    if !done[j] {
                        done[j] = true;
                        orbit.push(j);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    /// `source / kernel`. Coset ids are ordered by their smallest member.
    pub fn quotient(&self, source: &Subgroup, kernel: &Subgroup) -> Result<QuotientGroup> {
        if !self.is_normal_in(kernel, source) {
            return Err(Error::PreconditionViolated("kernel is not normal in the source".into()));
        }
        let mut projection = vec![None; self.order()];
        let mut lifts = Vec::new();
        for &x in source.elements() {
            if projection[x].is_some() {
                continue;
            }
            let c = lifts.len();
            lifts.push(x);
            for &k in kernel.elements() {
                projection[self.mul(x, k)] = Some(c);
            }
        }
        let m = lifts.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &lifts {
            for &b in &lifts {
                table.push(projection[self.mul(a, b)].expect("closed") as u32);
            }
        }
        let gens: Vec<usize> = {
            let mut g: Vec<usize> = source.generators().iter().map(|&s| projection[s].expect("in source")).collect();
            g.retain(|&x| x != 0);
            g.dedup();
            g
        };
        let group = FiniteGroup::from_table(self.p(), m, table, gens)?;
        Ok(QuotientGroup { source: source.clone(), kernel: kernel.clone(), group, projection, lifts })
    }

    pub fn abelianization(&self, h: &Subgroup) -> QuotientGroup {
        self.quotient(h, &self.commutator_subgroup(h)).expect("commutator subgroup is normal")
    }

    /// `H / [H1, H1]` with its embedding into `H1^ab` (quotient id to
    /// `H1^ab` id).
    pub fn subquotient(&self, h: &Subgroup, h1: &Subgroup) -> Result<(QuotientGroup, Vec<usize>)> {
        let d = self.commutator_subgroup(h1);
        if !h.is_subgroup_of(h1) || !d.is_subgroup_of(h) {
            return Err(Error::PreconditionViolated("need H <= H1 and [H1,H1] <= H".into()));
        }
        let q = self.quotient(h, &d)?;
        let ab = self.quotient(h1, &d)?;
        let embed = q.lifts.iter().map(|&x| ab.project(x)).collect();
        Ok((q, embed))
    }
}

#[cfg(test)]
mod tests {
    use super::super::catalog::catalog_group;
    use super::*;

    // exhaustive search over subsets closed under multiplication
    fn brute_subgroup_count(g: &FiniteGroup) -> usize {
        let n = g.order();
        assert!(n <= 16);
        let mut count = 0;
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let ids: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if ids.iter().all(|&a| ids.iter().all(|&b| mask >> g.mul(a, b) & 1 == 1)) {
                count += 1;
            }
        }
        count
    }

    fn orbit_sizes(g: &FiniteGroup) -> Vec<usize> {
        let n = g.order();
        let mut seen = vec![false; n];
        let mut sizes = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let orbit: HashSet<usize> = (0..n).map(|y| g.mul(g.mul(y, x), g.inv(y))).collect();
            for &o in &orbit {
                seen[o] = true;
            }
            sizes.push(orbit.len());
        }
        sizes.sort_unstable();
        sizes
    }

    #[test]
    fn subgroup_counts_match_brute_force() {
        for (name, count) in [("C8", 4), ("Q8", 6), ("D4", 10), ("V4", 5), ("C2", 2), ("C3", 2), ("C4", 3)] {
            let g = catalog_group(name, &[]).unwrap();
            let subs = g.all_subgroups(10_000).unwrap();
            assert_eq!(subs.len(), count, "{name}");
            if g.order() <= 16 {
                assert_eq!(brute_subgroup_count(&g), count, "{name}");
            }
        }
    }

    #[test]
    fn conjugacy_classes() {
        let d4 = catalog_group("D4", &[]).unwrap();
        let cls = d4.conjugacy_classes();
        assert_eq!(cls.len(), 5);
        let mut sizes = cls.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, orbit_sizes(&d4));

        let q8 = catalog_group("Q8", &[]).unwrap();
        let mut sizes = q8.conjugacy_classes().sizes;
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
        assert_eq!(sizes, orbit_sizes(&q8));

        let c9 = catalog_group("C9", &[]).unwrap();
        assert_eq!(c9.conjugacy_classes().len(), 9);
    }

    #[test]
    fn heisenberg_center() {
        let g = catalog_group("Heis27", &[]).unwrap();
        assert_eq!(g.order(), 27);
        let n = g.order();
        let brute = (0..n).filter(|&z| (0..n).all(|x| g.mul(z, x) == g.mul(x, z))).count();
        assert_eq!(brute, 3);
        assert_eq!(g.center().order(), 3);
        assert_eq!(g.commutator_subgroup(&g.whole()), g.center());
    }

    #[test]
    fn reflection_normalizer() {
        let g = catalog_group("D4", &[]).unwrap();
        let z = g.center();
        let s = (0..8)
            .find(|&x| g.element_order(x) == 2 && !z.contains(x))
            .unwrap();
        let h = g.cyclic_subgroup(s);
        let n = g.normalizer(&h);
        let brute = (0..8).filter(|&x| (0..8).all(|y| h.contains(y) == h.contains(g.conj(x, y)))).count();
        assert_eq!(n.order(), brute);
        assert_eq!(n.order(), 4);
        assert_eq!(g.weyl_reps(&h).len(), 2);
    }

    #[test]
    fn reflections_conjugate_under_rotation() {
        let g = catalog_group("D4", &[]).unwrap();
        let subs = g.all_subgroups(1000).unwrap();
        let orbits = g.subgroup_orbits(&g.whole(), &subs);
        for orbit in &orbits {
            for &i in orbit {
                assert_eq!(g.normalizer(&subs[i]).order() * orbit.len(), g.order());
            }
        }
        // C2 subgroups: center alone, two pairs of reflections
        let mut c2_orbits: Vec<usize> =
            orbits.iter().filter(|o| subs[o[0]].order() == 2).map(|o| o.len()).collect();
        c2_orbits.sort_unstable();
        assert_eq!(c2_orbits, vec![1, 2, 2]);
    }

    #[test]
    fn cosets_tile() {
        for name in ["D4", "Q8", "Heis27", "C3xC3"] {
            let g = catalog_group(name, &[]).unwrap();
            for h in g.all_subgroups(1000).unwrap() {
                let reps = g.coset_reps(&h);
                assert_eq!(reps.len() * h.order(), g.order());
                let mut hit = vec![0; g.order()];
                for &x in &reps {
                    for &y in h.elements() {
                        hit[g.mul(x, y)] += 1;
                    }
                }
                assert!(hit.iter().all(|&c| c == 1), "{name}");
                let sorted: Vec<usize> = {
                    let mut r = reps.clone();
                    r.sort_unstable();
                    r
                };
                assert_eq!(reps, sorted);
            }
        }
    }

    #[test]
    fn subgroups_closed_under_conjugation() {
        for name in ["D4", "Q8", "Heis27"] {
            let g = catalog_group(name, &[]).unwrap();
            let subs = g.all_subgroups(1000).unwrap();
            let set: HashSet<&Subgroup> = subs.iter().collect();
            for h in &subs {
                for &x in g.generators() {
                    assert!(set.contains(&g.conjugate_subgroup(h, x)));
                }
            }
        }
    }

    #[test]
    fn quaternion_abelianization() {
        let g = catalog_group("Q8", &[]).unwrap();
        let ab = g.abelianization(&g.whole());
        assert_eq!(ab.order(), 4);
        assert!(ab.group.is_abelian());
        assert!((0..4).all(|x| ab.group.element_order(x) <= 2));
        // commutator enumeration oracle
        let comms: HashSet<usize> = (0..8).flat_map(|a| (0..8).map(move |b| (a, b))).map(|(a, b)| g.commutator(a, b)).collect();
        assert_eq!(comms.len(), 2);
    }

    #[test]
    fn subquotient_embeds() {
        for name in ["D4", "Q8", "Heis27"] {
            let g = catalog_group(name, &[]).unwrap();
            let subs = g.all_subgroups(1000).unwrap();
            for h1 in &subs {
                let d = g.commutator_subgroup(h1);
                for h in subs.iter().filter(|h| h.is_subgroup_of(h1) && d.is_subgroup_of(h)) {
                    let (q, embed) = g.subquotient(h, h1).unwrap();
                    let distinct: HashSet<&usize> = embed.iter().collect();
                    assert_eq!(distinct.len(), q.order());
                    let ab = g.abelianization(h1);
                    for a in 0..q.order() {
                        for b in 0..q.order() {
                            assert_eq!(embed[q.group.mul(a, b)], ab.group.mul(embed[a], embed[b]));
                        }
                    }
                    if h == h1 {
                        assert_eq!(q.order(), ab.order());
                    }
                }
            }
        }
        let g = catalog_group("Q8", &[]).unwrap();
        assert!(g.subquotient(&g.trivial_subgroup(), &g.whole()).is_err());
    }

    #[test]
    fn power_subgroups() {
        let c4 = catalog_group("C4", &[]).unwrap();
        assert_eq!(c4.power_subgroup(&c4.whole()).unwrap().order(), 2);
        let c9 = catalog_group("C9", &[]).unwrap();
        assert_eq!(c9.power_subgroup(&c9.whole()).unwrap().order(), 3);
        let c3 = catalog_group("C3", &[]).unwrap();
        assert!(c3.power_subgroup(&c3.whole()).unwrap().is_trivial());
        let v4 = catalog_group("V4", &[]).unwrap();
        assert_eq!(v4.power_subgroup(&v4.whole()), Err(Error::NotCyclic));
    }

    #[test]
    fn canonical_generator_is_smallest() {
        let g = catalog_group("C8", &[]).unwrap();
        for h in g.all_subgroups(100).unwrap() {
            let c = h.canonical_generator().unwrap();
            let smallest = h.elements().iter().copied().find(|&x| g.cyclic_subgroup(x) == h).unwrap();
            assert_eq!(c, smallest);
        }
    }
}
