//! `Z_p[zeta_p]` as dense polynomials modulo the cyclotomic polynomial
//! `1 + X + ... + X^(p-1)`.

use super::zp::Zp;
use super::CoeffRing;

/// Element `sum c_i zeta^i`, `i < p - 1`.
pub type CycloElt = Vec<u128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycloRing {
    base: Zp,
}

impl CycloRing {
    pub fn new(base: Zp) -> Self {
        CycloRing { base }
    }

    pub fn base(&self) -> &Zp {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.base.p() as usize - 1
    }

    pub fn from_base(&self, c: u128) -> CycloElt {
        let mut v = vec![0; self.degree()];
        v[0] = c;
        v
    }

    /// `zeta^k`, reduced.
    pub fn zeta_pow(&self, k: usize) -> CycloElt {
        let p = self.base.p() as usize;
        let mut full = vec![0u128; p];
        full[k % p] = 1;
        self.reduce_full(&full)
    }

    // Reduces a length-p vector in Z[X]/(X^p - 1) modulo the cyclotomic
    // polynomial: X^(p-1) = -(1 + ... + X^(p-2)).
    fn reduce_full(&self, full: &[u128]) -> CycloElt {
        let d = self.degree();
        let top = full[d];
        (0..d).map(|i| self.base.sub(full[i], top)).collect()
    }

    /// Galois automorphism `zeta -> zeta^k`, `k` prime to `p`.
    pub fn galois(&self, x: &CycloElt, k: usize) -> CycloElt {
        let p = self.base.p() as usize;
        let mut full = vec![0u128; p];
        for (i, &c) in x.iter().enumerate() {
            let j = (i * k) % p;
            full[j] = self.base.add(full[j], c);
        }
        self.reduce_full(&full)
    }

    /// The base-ring value if the element is a constant.
    pub fn as_base(&self, x: &CycloElt) -> Option<u128> {
        x[1..].iter().all(|&c| c == 0).then_some(x[0])
    }
}

impl CoeffRing for CycloRing {
    type Elem = CycloElt;

    fn zero(&self) -> CycloElt {
        vec![0; self.degree()]
    }

    fn one(&self) -> CycloElt {
        self.from_base(self.base.reduce(1))
    }

    fn add(&self, a: &CycloElt, b: &CycloElt) -> CycloElt {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }

    fn sub(&self, a: &CycloElt, b: &CycloElt) -> CycloElt {
        a.iter().zip(b).map(|(&x, &y)| self.base.sub(x, y)).collect()
    }

    fn mul(&self, a: &CycloElt, b: &CycloElt) -> CycloElt {
        let p = self.base.p() as usize;
        let mut full = vec![0u128; p];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let k = (i + j) % p;
                full[k] = self.base.add(full[k], self.base.mul(x, y));
            }
        }
        self.reduce_full(&full)
    }

    fn is_zero(&self, a: &CycloElt) -> bool {
        a.iter().all(|&c| c == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomial_vanishes() {
        for p in [2u64, 3, 5, 7] {
            let r = CycloRing::new(Zp::new(p, 10).unwrap());
            let mut sum = r.zero();
            for k in 0..p as usize {
                sum = r.add(&sum, &r.zeta_pow(k));
            }
            assert!(r.is_zero(&sum), "p = {p}");
            let z = r.zeta_pow(1);
            let mut acc = r.one();
            for _ in 0..p {
                acc = r.mul(&acc, &z);
            }
            assert_eq!(acc, r.one());
        }
    }

    #[test]
    fn zeta_two_is_minus_one() {
        let base = Zp::new(2, 8).unwrap();
        let r = CycloRing::new(base);
        assert_eq!(r.zeta_pow(1), vec![base.neg(1)]);
    }

    fn norm(r: &CycloRing, x: &CycloElt) -> CycloElt {
        let p = r.base().p() as usize;
        (1..p).fold(r.one(), |acc, k| r.mul(&acc, &r.galois(x, k)))
    }

    #[test]
    fn norm_of_base_element_is_power() {
        let base = Zp::new(5, 12).unwrap();
        let r = CycloRing::new(base);
        assert_eq!(r.as_base(&norm(&r, &r.from_base(7))), Some(base.pow(7, 4)));
    }

    #[test]
    fn norm_descends_to_base() {
        for p in [3u64, 5, 7] {
            let base = Zp::new(p, 10).unwrap();
            let r = CycloRing::new(base);
            let x: CycloElt = (0..r.degree()).map(|i| (3 * i as u128 + 2) % base.modulus()).collect();
            assert!(r.as_base(&norm(&r, &x)).is_some(), "p = {p}");
        }
    }
}
