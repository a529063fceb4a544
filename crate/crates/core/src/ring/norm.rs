//! Multiplication matrices over subgroup rings, and the norm and trace
//! maps built from them.

use super::det::{det_local, Matrix};
use super::element::GroupRing;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, QuotientGroup, Subgroup, SubgroupLattice};
use crate::padic::Zp;

/// Matrix of right multiplication by `u` on `R[X]`, viewed as a free left
/// `R[Y]`-module on the right-coset basis `y_i = x_i^-1` (for left coset
/// representatives `x_i`). Row `i` holds `y_i u = sum_j M_ij y_j`, with
/// entries pushed into `R[T]` through `rho: Y -> T`.
pub fn mult_matrix(
    x: &FiniteGroup,
    y: &Subgroup,
    rho: impl Fn(usize) -> usize,
    t_order: usize,
    ring: Zp,
    u: &[u128],
) -> Matrix {
    let reps: Vec<usize> = x.coset_reps(y).iter().map(|&r| x.inv(r)).collect();
    let n = reps.len();
    // w = h y_j  ->  (j, rho(h))
    let mut locate = vec![(0usize, 0usize); x.order()];
    for (j, &yj) in reps.iter().enumerate() {
        for &h in y.elements() {
            locate[x.mul(h, yj)] = (j, rho(h));
        }
    }
    let mut m = vec![vec![vec![0u128; t_order]; n]; n];
    for (i, &yi) in reps.iter().enumerate() {
        for (g, &c) in u.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (j, t) = locate[x.mul(yi, g)];
            m[i][j][t] = ring.add(m[i][j][t], c);
        }
    }
    m
}

/// `theta^G_H(u)`: the norm to `Z_p[H]` followed by abelianization,
/// realized as a determinant over `Z_p[H^ab]`.
pub fn theta(lat: &SubgroupLattice, h: usize, ring: Zp, u: &[u128]) -> Result<Vec<u128>> {
    let g = &lat.group;
    if !ring.is_unit(u.iter().fold(0, |a, &c| ring.add(a, c))) {
        return Err(Error::NotAUnit);
    }
    let info = &lat.info[h];
    let hab = &info.hab;
    let m = mult_matrix(g, &info.subgroup, |x| hab.project(x), hab.order(), ring, u);
    Ok(det_local(&GroupRing::new(&hab.group, ring), &m))
}

/// `H / [H1, H1]` inside `H1^ab`, for `H <= H1` with `[H1, H1] <= H`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub h: usize,
    pub h1: usize,
    /// `H / [H1, H1]`.
    pub quotient: QuotientGroup,
    /// Its image in `H1^ab`, as a subgroup of `H1^ab`.
    pub image: Subgroup,
    /// `H1^ab` id to quotient id, on the image.
    pub to_quotient: Vec<usize>,
    /// `H^ab` id to quotient id (the natural surjection).
    pub from_hab: Vec<usize>,
}

impl Subquotient {
    pub fn new(lat: &SubgroupLattice, h: usize, h1: usize) -> Result<Self> {
        let g = &lat.group;
        let (quotient, embed) = g.subquotient(lat.subgroup(h), lat.subgroup(h1))?;
        let ab1 = &lat.info[h1].hab;
        let image = ab1.group.subgroup_from_elements(&embed)?;
        let mut to_quotient = vec![usize::MAX; ab1.order()];
        for (qid, &a) in embed.iter().enumerate() {
            to_quotient[a] = qid;
        }
        let hab = &lat.info[h].hab;
        let from_hab = hab.lifts.iter().map(|&x| quotient.project(x)).collect();
        Ok(Subquotient { h, h1, quotient, image, to_quotient, from_hab })
    }

    fn matrix(&self, lat: &SubgroupLattice, ring: Zp, x: &[u128]) -> Matrix {
        let ab1 = &lat.info[self.h1].hab.group;
        mult_matrix(ab1, &self.image, |a| self.to_quotient[a], self.quotient.order(), ring, x)
    }

    /// `nr_{H,H1}`: determinant of multiplication by `x` on `Z_p[H1^ab]`
    /// over `Z_p[H / [H1, H1]]`.
    pub fn nr(&self, lat: &SubgroupLattice, ring: Zp, x: &[u128]) -> Result<Vec<u128>> {
        if !ring.is_unit(x.iter().fold(0, |a, &c| ring.add(a, c))) {
            return Err(Error::NotAUnit);
        }
        let m = self.matrix(lat, ring, x);
        Ok(det_local(&GroupRing::new(&self.quotient.group, ring), &m))
    }

    /// `tr_{H,H1}`: trace of multiplication by `x`.
    pub fn trace(&self, lat: &SubgroupLattice, ring: Zp, x: &[u128]) -> Vec<u128> {
        let m = self.matrix(lat, ring, x);
        let mut out = vec![0u128; self.quotient.order()];
        for (i, row) in m.iter().enumerate() {
            for (o, &c) in out.iter_mut().zip(&row[i]) {
                *o = ring.add(*o, c);
            }
        }
        out
    }

    /// `pi_{H,H1}`: pushforward along `H^ab -> H / [H1, H1]`.
    pub fn pi(&self, ring: Zp, x: &[u128]) -> Vec<u128> {
        super::element::pushforward(&ring, self.quotient.order(), x, |a| self.from_hab[a])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;
    use rand::{Rng, SeedableRng};

    fn lattice(name: &str) -> SubgroupLattice {
        SubgroupLattice::new(catalog_group(name, &[]).unwrap()).unwrap()
    }

    fn random_unit(g: &FiniteGroup, ring: Zp, rng: &mut impl Rng) -> Vec<u128> {
        let gr = GroupRing::new(g, ring);
        let mut a: Vec<u128> = (0..g.order()).map(|_| rng.gen_range(0..ring.modulus())).collect();
        while !gr.is_unit(&a) {
            a[0] = ring.add(a[0], 1);
        }
        a
    }

    #[test]
    fn c2_to_trivial() {
        let lat = lattice("C2");
        let ring = Zp::new(2, 16).unwrap();
        let (a, b) = (7u128, 4u128);
        let t = theta(&lat, 0, ring, &[a, b]).unwrap();
        // matrix [[a, b], [b, a]]
        assert_eq!(t, vec![ring.sub(ring.mul(a, a), ring.mul(b, b))]);
    }

    #[test]
    fn whole_group_abelian_is_identity() {
        let lat = lattice("C9");
        let ring = Zp::new(3, 12).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let u = random_unit(&lat.group, ring, &mut rng);
        let t = theta(&lat, lat.whole(), ring, &u).unwrap();
        let hab = &lat.info[lat.whole()].hab;
        let pushed = super::super::element::pushforward(&ring, hab.order(), &u, |x| hab.project(x));
        assert_eq!(t, pushed);
    }

    #[test]
    fn scalar_norm_is_power() {
        let lat = lattice("Q8");
        let ring = Zp::new(2, 16).unwrap();
        let gr = GroupRing::new(&lat.group, ring);
        let u = gr.scalar(3);
        for h in 0..lat.len() {
            let t = theta(&lat, h, ring, &u).unwrap();
            let idx = lat.info[h].index_in_group() as u128;
            assert_eq!(t[0], ring.pow(3, idx));
            assert!(t[1..].iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn multiplicative_and_rep_independent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for name in ["D4", "Q8", "Heis27"] {
            let lat = lattice(name);
            let g = &lat.group;
            let ring = Zp::new(g.p(), 14).unwrap();
            let gr = GroupRing::new(g, ring);
            let u = random_unit(g, ring, &mut rng);
            let v = random_unit(g, ring, &mut rng);
            for h in 0..lat.len() {
                let hab = &lat.info[h].hab;
                let hr = GroupRing::new(&hab.group, ring);
                let lhs = theta(&lat, h, ring, &gr.mul(&u, &v)).unwrap();
                let rhs = hr.mul(&theta(&lat, h, ring, &u).unwrap(), &theta(&lat, h, ring, &v).unwrap());
                assert_eq!(lhs, rhs, "{name} H#{h}");
                // second representative system: x_i h for a fixed h in H
                let info = &lat.info[h];
                let shift = info.subgroup.elements()[info.order() - 1];
                let reps: Vec<usize> = g.coset_reps(&info.subgroup).iter().map(|&r| g.inv(g.mul(r, shift))).collect();
                let n = reps.len();
                let mut m = vec![vec![vec![0u128; hab.order()]; n]; n];
                for (i, &yi) in reps.iter().enumerate() {
                    for (x, &c) in u.iter().enumerate() {
                        let w = g.mul(yi, x);
                        let j = reps.iter().position(|&yj| info.subgroup.contains(g.mul(w, g.inv(yj)))).unwrap();
                        let t = hab.project(g.mul(w, g.inv(reps[j])));
                        m[i][j][t] = ring.add(m[i][j][t], c);
                    }
                }
                assert_eq!(det_local(&hr, &m), theta(&lat, h, ring, &u).unwrap(), "{name} H#{h}");
            }
        }
    }

    #[test]
    fn nr_and_trace_basics() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for name in ["D4", "Q8", "C9", "Heis27"] {
            let lat = lattice(name);
            let ring = Zp::new(lat.p(), 12).unwrap();
            for (h, h1) in lat.admissible_pairs() {
                let sq = Subquotient::new(&lat, h, h1).unwrap();
                let ab1 = &lat.info[h1].hab;
                let r1 = GroupRing::new(&ab1.group, ring);
                let rq = GroupRing::new(&sq.quotient.group, ring);
                let idx = (ab1.order() / sq.quotient.order()) as u128;
                let x = random_unit(&ab1.group, ring, &mut rng);
                let y = random_unit(&ab1.group, ring, &mut rng);
                assert_eq!(
                    sq.nr(&lat, ring, &r1.mul(&x, &y)).unwrap(),
                    rq.mul(&sq.nr(&lat, ring, &x).unwrap(), &sq.nr(&lat, ring, &y).unwrap())
                );
                assert_eq!(sq.nr(&lat, ring, &r1.scalar(5)).unwrap(), rq.scalar(ring.pow(5, idx)));
                // trace of a monomial: index times itself inside the image, else 0
                for a in 0..ab1.order() {
                    let t = sq.trace(&lat, ring, &r1.basis(a));
                    if sq.image.contains(a) {
                        assert_eq!(t, rq.scalar_mul(&(idx), &rq.basis(sq.to_quotient[a])));
                    } else {
                        assert!(rq.is_zero(&t));
                    }
                }
                if h == h1 {
                    assert_eq!(sq.nr(&lat, ring, &x).unwrap(), sq.pi(ring, &x));
                }
            }
        }
    }
}
