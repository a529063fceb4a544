//! Finite `p`-groups as explicit Cayley tables.
//!
//! Groups are closed by breadth-first search from permutation generators;
//! element ids follow discovery order, so id 0 is the identity and the
//! numbering is a deterministic function of the generator list.

pub mod catalog;
pub mod lattice;
pub mod subgroup;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use catalog::{catalog_group, parse_group_arg, GroupSpec, CATALOG_NAMES, DEFAULT_SUITE};
pub use lattice::{SubgroupInfo, SubgroupLattice};
pub use subgroup::{ConjClassSet, ElementSet, QuotientGroup, Subgroup};

pub const DEFAULT_ORDER_CAP: usize = 256;

/// A permutation of `0..n`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Builds a permutation of `n` points from cycles of 1-based points.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut img: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt == 0 || pt > n {
                    return Err(Error::InvalidPermutation(format!("point {pt} outside 1..={n}")));
                }
                if seen[pt - 1] {
                    return Err(Error::InvalidPermutation(format!("point {pt} repeated")));
                }
                seen[pt - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                if next == 0 || next > n {
                    return Err(Error::InvalidPermutation(format!("point {next} outside 1..={n}")));
                }
                img[pt - 1] = next - 1;
            }
        }
        Ok(Permutation(img))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }
}

/// A finite `p`-group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    p: u64,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    generators: Vec<usize>,
    element_orders: Vec<usize>,
}

fn is_power_of(p: u64, n: usize) -> bool {
    let mut n = n;
    while n > 1 {
        if !n.is_multiple_of(p as usize) {
            return false;
        }
        n /= p as usize;
    }
    n == 1
}

impl FiniteGroup {
    /// Validates a multiplication table with identity 0.
    pub fn from_table(p: u64, order: usize, table: Vec<u32>, generators: Vec<usize>) -> Result<Self> {
        if table.len() != order * order {
            return Err(Error::BadParams("table size does not match order".into()));
        }
        if !is_power_of(p, order) {
            return Err(Error::NotAPGroup { order, p });
        }
        for a in 0..order {
            if table[a] as usize != a || table[a * order] as usize != a {
                return Err(Error::BadParams("id 0 is not the identity".into()));
            }
        }
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| table[a * order + b] == 0)
                .ok_or_else(|| Error::BadParams(format!("element {a} has no inverse")))?;
            inverse[a] = b as u32;
        }
        let mut g = FiniteGroup { p, order, table, inverse, generators, element_orders: Vec::new() };
        g.element_orders = (0..order).map(|x| g.compute_element_order(x)).collect();
        Ok(g)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g h g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    fn compute_element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn element_order(&self, g: usize) -> usize {
        self.element_orders[g]
    }

    /// Smallest `e` with `I^e = 0` for the augmentation ideal `I` of
    /// `F_p[G]`, from the Jennings series
    /// `D_1 = G`, `D_i = [D_(i-1), G] (D_ceil(i/p))^p`:
    /// `e = 1 + (p-1) sum_i i log_p [D_i : D_(i+1)]`.
    pub fn radical_index(&self) -> usize {
        let p = self.p as usize;
        let mut d: Vec<ElementSet> = vec![ElementSet::new(self.order), self.closure(&(0..self.order).collect::<Vec<_>>())];
        let mut e = 1;
        let mut i = 1;
        while d[i].count() > 1 {
            i += 1;
            let mut gens = Vec::new();
            for a in d[i - 1].iter() {
                for g in 0..self.order {
                    gens.push(self.commutator(a, g));
                }
            }
            for a in d[i.div_ceil(p)].iter() {
                gens.push(self.pow(a, p));
            }
            gens.sort_unstable();
            gens.dedup();
            let next = self.closure(&gens);
            let mut ratio = d[i - 1].count() / next.count();
            while ratio > 1 {
                ratio /= p;
                e += (p - 1) * (i - 1);
            }
            d.push(next);
        }
        e
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn check_associative(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    /// Elements reachable from `gens` by right multiplication (the
    /// subgroup they generate).
    pub fn closure(&self, gens: &[usize]) -> ElementSet {
        let mut set = ElementSet::new(self.order);
        set.insert(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// FNV-1a digest of the multiplication table, as hex.
    pub fn table_hash(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &x in std::iter::once(&(self.order as u32)).chain(&self.table) {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        format!("{h:016x}")
    }

    pub fn to_info(&self) -> GroupInfoJson {
        GroupInfoJson {
            p: self.p,
            order: self.order,
            generators: self.generators.clone(),
            table_hash: self.table_hash(),
            abelian: self.is_abelian(),
            element_orders: self.element_orders.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInfoJson {
    pub p: u64,
    pub order: usize,
    pub generators: Vec<usize>,
    pub table_hash: String,
    pub abelian: bool,
    pub element_orders: Vec<usize>,
}

/// Closes the permutation generators into a group and numbers its elements
/// in breadth-first discovery order.
pub fn build_group(generators: &[Permutation], p: u64, cap: usize) -> Result<FiniteGroup> {
    let degree = generators.first().map_or(1, |g| g.degree());
    if generators.iter().any(|g| g.degree() != degree) {
        return Err(Error::InvalidPermutation("generators act on different point sets".into()));
    }
    for g in generators {
        let mut seen = vec![false; degree];
        for &i in &g.0 {
            if i >= degree || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation("not a bijection".into()));
            }
        }
    }
    let mut elements = vec![Permutation::identity(degree)];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut gen_ids = Vec::with_capacity(generators.len());
    let mut head = 0;
    while head < elements.len() {
        for s in generators {
            let y = elements[head].then(s);
            if !index.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
        head += 1;
    }
    for s in generators {
        gen_ids.push(index[s]);
    }
    let order = elements.len();
    if !is_power_of(p, order) {
        return Err(Error::NotAPGroup { order, p });
    }
    let mut table = Vec::with_capacity(order * order);
    for a in &elements {
        for b in &elements {
            table.push(index[&a.then(b)] as u32);
        }
    }
    FiniteGroup::from_table(p, order, table, gen_ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    // words in the generators until nothing new appears
    fn brute_closure(gens: &[Permutation]) -> usize {
        let n = gens[0].degree();
        let mut set: HashSet<Permutation> = HashSet::from([Permutation::identity(n)]);
        loop {
            let mut next = set.clone();
            for a in &set {
                for g in gens {
                    next.insert(a.then(g));
                    next.insert(g.then(a));
                }
            }
            if next.len() == set.len() {
                return set.len();
            }
            set = next;
        }
    }

    #[test]
    fn single_involution() {
        let g = build_group(&[perm(2, &[&[1, 2]])], 2, 256).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn dihedral_from_permutations() {
        let gens = [perm(4, &[&[1, 2, 3, 4]]), perm(4, &[&[1, 3]])];
        let g = build_group(&gens, 2, 256).unwrap();
        assert_eq!(g.order(), brute_closure(&gens));
        assert_eq!(g.order(), 8);
        assert!(g.check_associative());
        assert!(!g.is_abelian());
    }

    #[test]
    fn rejects_non_p_groups() {
        let err = build_group(&[perm(3, &[&[1, 2, 3]])], 2, 256).unwrap_err();
        assert_eq!(err, Error::NotAPGroup { order: 3, p: 2 });
    }

    #[test]
    fn cap_is_enforced() {
        let err = build_group(&[perm(8, &[&[1, 2, 3, 4, 5, 6, 7, 8]])], 2, 4).unwrap_err();
        assert_eq!(err, Error::GroupTooLarge { cap: 4 });
    }

    #[test]
    fn bad_cycles_rejected() {
        assert!(Permutation::from_cycles(3, &[vec![1, 4]]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]).is_err());
    }

    // dimension of I^k over F_p by repeated multiplication, until it vanishes
    fn brute_radical_index(g: &FiniteGroup) -> usize {
        let p = g.p() as u32;
        let n = g.order();
        let reduce = |rows: Vec<Vec<u32>>| -> Vec<Vec<u32>> {
            let mut basis: Vec<Vec<u32>> = Vec::new();
            for mut r in rows {
                for b in &basis {
                    let piv = b.iter().position(|&x| x != 0).unwrap();
                    if r[piv] != 0 {
                        let c = r[piv];
                        for k in 0..n {
                            r[k] = (r[k] + p * p - c * b[k] % p) % p;
                        }
                    }
                }
                if let Some(piv) = r.iter().position(|&x| x != 0) {
                    let inv = (1..p).find(|&y| r[piv] * y % p == 1).unwrap();
                    for x in r.iter_mut() {
                        *x = *x * inv % p;
                    }
                    for b in basis.iter_mut() {
                        let c = b[piv];
                        if c != 0 {
                            for k in 0..n {
                                b[k] = (b[k] + p * p - c * r[k] % p) % p;
                            }
                        }
                    }
                    basis.push(r);
                }
            }
            basis
        };
        let aug: Vec<Vec<u32>> = (1..n)
            .map(|h| {
                let mut v = vec![0; n];
                v[h] = 1;
                v[0] = p - 1;
                v
            })
            .collect();
        let mut power = reduce(aug.clone());
        let mut e = 1;
        while !power.is_empty() {
            let mut prods = Vec::new();
            for b in &power {
                for a in &aug {
                    let mut out = vec![0u32; n];
                    for x in 0..n {
                        for y in 0..n {
                            out[g.mul(x, y)] = (out[g.mul(x, y)] + b[x] * a[y]) % p;
                        }
                    }
                    prods.push(out);
                }
            }
            power = reduce(prods);
            e += 1;
        }
        e
    }

    #[test]
    fn radical_index_matches_ideal_powers() {
        use super::catalog::catalog_group;
        for name in ["C2", "C4", "C8", "V4", "D4", "Q8", "C3", "C9", "C3xC3", "C5"] {
            let g = catalog_group(name, &[]).unwrap();
            assert_eq!(g.radical_index(), brute_radical_index(&g), "{name}");
        }
        assert_eq!(catalog_group("C2", &[]).unwrap().radical_index(), 2);
        assert_eq!(catalog_group("C4", &[]).unwrap().radical_index(), 4);
        let trivial = build_group(&[], 3, 256).unwrap();
        assert_eq!(trivial.radical_index(), 1);
    }

    #[test]
    fn deterministic_numbering() {
        let gens = [perm(4, &[&[1, 2, 3, 4]]), perm(4, &[&[1, 3]])];
        let a = build_group(&gens, 2, 256).unwrap();
        let b = build_group(&gens, 2, 256).unwrap();
        assert_eq!(a.table_hash(), b.table_hash());
        assert_eq!(a.generators(), &[1, 2]);
    }
}
