//! Seeded random units of `Z_p[G]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::group::FiniteGroup;
use crate::padic::Zp;
use crate::ring::GroupRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitShape {
    /// A group element.
    Trivial,
    /// `1 + p r`.
    Principal,
    /// Teichmüller scalar times group element times `1 + m`, `m` in the
    /// maximal ideal.
    General,
}

/// Independent deterministic stream `stream` under `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Bound on the integer coefficients drawn, so that a seed gives the same
/// unit at every precision.
pub const COEFF_BOUND: i64 = 1 << 15;

pub fn random_unit(g: &FiniteGroup, ring: Zp, shape: UnitShape, rng: &mut impl Rng) -> Vec<u128> {
    let gr = GroupRing::new(g, ring);
    let p = ring.p() as u128;
    let elt = rng.gen_range(0..g.order());
    let mut r: Vec<u128> = (0..g.order()).map(|_| ring.from_i64(rng.gen_range(-COEFF_BOUND..=COEFF_BOUND))).collect();
    match shape {
        UnitShape::Trivial => gr.basis(elt),
        UnitShape::Principal => {
            let pr = ring.reduce(p);
            r.iter_mut().for_each(|c| *c = ring.mul(*c, pr));
            gr.add(&gr.one(), &r)
        }
        UnitShape::General => {
            let delta = gr.augmentation(&r) % p;
            r[0] = ring.sub(r[0], ring.reduce(delta));
            let c = ring.teichmueller(rng.gen_range(1..p)).expect("nonzero residue");
            let x = gr.add(&gr.one(), &r);
            gr.scalar_mul(&c, &gr.mul(&gr.basis(elt), &x))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;

    #[test]
    fn shapes_are_units_and_reproducible() {
        let g = catalog_group("Q8", &[]).unwrap();
        let ring = Zp::new(2, 20).unwrap();
        let gr = GroupRing::new(&g, ring);
        for shape in [UnitShape::Trivial, UnitShape::Principal, UnitShape::General] {
            let a = random_unit(&g, ring, shape, &mut seeded_rng(9, 1));
            let b = random_unit(&g, ring, shape, &mut seeded_rng(9, 1));
            assert_eq!(a, b);
            assert!(gr.is_unit(&a));
        }
        let t = random_unit(&g, ring, UnitShape::Trivial, &mut seeded_rng(3, 0));
        assert_eq!(t.iter().filter(|&&c| c == 1).count(), 1);
        assert_eq!(t.iter().filter(|&&c| c == 0).count(), 7);
        let pr = random_unit(&g, ring, UnitShape::Principal, &mut seeded_rng(3, 0));
        assert_eq!(gr.augmentation(&pr) % 2, 1);
        assert!(pr[1..].iter().all(|&c| c % 2 == 0));
    }

    #[test]
    fn precision_independent() {
        let g = catalog_group("D4", &[]).unwrap();
        let lo = Zp::new(2, 20).unwrap();
        let hi = Zp::new(2, 40).unwrap();
        for shape in [UnitShape::Trivial, UnitShape::Principal, UnitShape::General] {
            let a = random_unit(&g, lo, shape, &mut seeded_rng(4, 2));
            let b = random_unit(&g, hi, shape, &mut seeded_rng(4, 2));
            assert_eq!(a, b.iter().map(|&x| lo.reduce(x)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn streams_differ() {
        let g = catalog_group("C9", &[]).unwrap();
        let ring = Zp::new(3, 12).unwrap();
        let a = random_unit(&g, ring, UnitShape::General, &mut seeded_rng(1, 0));
        let b = random_unit(&g, ring, UnitShape::General, &mut seeded_rng(1, 1));
        assert_ne!(a, b);
    }
}
