//! Residues modulo `p^N`.
//!
//! Values are plain `u128` representatives in `[0, p^N)`; the [`Zp`] value
//! carries the modulus and a reducer. Powers of two reduce by masking, odd
//! moduli by Montgomery reduction (64-bit limbs below `2^63`, a 128-bit
//! variant above that). The modulus is capped below `2^126` so sums of two
//! residues never overflow.

use crate::error::{Error, Result};

/// Largest supported modulus, exclusive.
pub const MODULUS_LIMIT: u128 = 1 << 126;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Reducer {
    Mask(u128),
    Mont64 { m: u64, minv: u64, r2: u64 },
    Mont128 { minv: u128, r2: u128 },
    Trivial,
}

/// The ring `Z/p^N`, viewed as `Z_p` truncated at absolute precision `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zp {
    p: u64,
    prec: u32,
    modulus: u128,
    reducer: Reducer,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^k` if it stays below [`MODULUS_LIMIT`].
pub fn checked_pow(p: u64, k: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p as u128)?;
        if acc >= MODULUS_LIMIT {
            return None;
        }
    }
    Some(acc)
}

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a1, a0) = (a >> 64, a & u64::MAX as u128);
    let (b1, b0) = (b >> 64, b & u64::MAX as u128);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & u64::MAX as u128) + (p10 & u64::MAX as u128);
    let lo = (p00 & u64::MAX as u128) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

// a*b mod m by doubling; only used to set up Montgomery constants.
fn mul_mod_slow(a: u128, b: u128, m: u128) -> u128 {
    let mut acc = 0u128;
    for bit in (0..128).rev() {
        acc <<= 1;
        if acc >= m {
            acc -= m;
        }
        if (b >> bit) & 1 == 1 {
            acc += a;
            if acc >= m {
                acc -= m;
            }
        }
    }
    acc
}

impl Zp {
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadParams(format!("{p} is not prime")));
        }
        let modulus = checked_pow(p, prec).ok_or_else(|| {
            Error::InvalidPrecision(format!("{p}^{prec} exceeds the supported modulus"))
        })?;
        let reducer = if modulus == 1 {
            Reducer::Trivial
        } else if p == 2 {
            Reducer::Mask(modulus - 1)
        } else if modulus < (1u128 << 63) {
            let m = modulus as u64;
            let mut x = m;
            for _ in 0..6 {
                x = x.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(x)));
            }
            let r = (1u128 << 64) % modulus;
            let r2 = ((r * r) % modulus) as u64;
            Reducer::Mont64 { m, minv: x.wrapping_neg(), r2 }
        } else {
            let m = modulus;
            let mut x = m;
            for _ in 0..7 {
                x = x.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(x)));
            }
            let r1 = (u128::MAX % m + 1) % m;
            Reducer::Mont128 { minv: x.wrapping_neg(), r2: mul_mod_slow(r1, r1, m) }
        };
        Ok(Zp { p, prec, modulus, reducer })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// Same prime, different precision.
    pub fn with_prec(&self, prec: u32) -> Result<Zp> {
        Zp::new(self.p, prec)
    }

    #[inline]
    pub fn reduce(&self, x: u128) -> u128 {
        match self.reducer {
            Reducer::Mask(mask) => x & mask,
            Reducer::Trivial => 0,
            _ => x % self.modulus,
        }
    }

    pub fn from_i64(&self, x: i64) -> u128 {
        if x >= 0 {
            self.reduce(x as u128)
        } else {
            self.neg(self.reduce(x.unsigned_abs() as u128))
        }
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u128) -> u128 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        match self.reducer {
            Reducer::Mask(mask) => a.wrapping_mul(b) & mask,
            Reducer::Mont64 { m, minv, r2 } => {
                let redc = |t: u128| -> u64 {
                    let q = (t as u64).wrapping_mul(minv);
                    let s = t + (q as u128) * (m as u128);
                    let r = (s >> 64) as u64;
                    if r >= m {
                        r - m
                    } else {
                        r
                    }
                };
                let x = redc(a * b);
                redc(x as u128 * r2 as u128) as u128
            }
            Reducer::Mont128 { minv, r2 } => {
                let m = self.modulus;
                let redc = |(hi, lo): (u128, u128)| -> u128 {
                    let q = lo.wrapping_mul(minv);
                    let (qh, ql) = mul_wide(q, m);
                    let carry = u128::from(lo.overflowing_add(ql).1);
                    let r = hi + qh + carry;
                    if r >= m {
                        r - m
                    } else {
                        r
                    }
                };
                let x = redc(mul_wide(a, b));
                redc(mul_wide(x, r2))
            }
            Reducer::Trivial => 0,
        }
    }

    pub fn pow(&self, a: u128, mut e: u128) -> u128 {
        let mut base = a;
        let mut acc = self.reduce(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `p^k` reduced; zero once `k >= prec`.
    pub fn p_pow(&self, k: u32) -> u128 {
        if k >= self.prec {
            0
        } else {
            (self.p as u128).pow(k)
        }
    }

    pub fn is_unit(&self, a: u128) -> bool {
        !a.is_multiple_of(self.p as u128)
    }

    /// Multiplicative inverse of a unit, by Newton lifting from `mod p`.
    pub fn inv(&self, a: u128) -> Option<u128> {
        if !self.is_unit(a) {
            return None;
        }
        if self.prec == 0 {
            return Some(0);
        }
        let p = self.p as u128;
        let r = (a % p) as u64;
        // Fermat inverse mod p
        let mut x = {
            let mut base = r as u128;
            let mut e = self.p - 2;
            let mut acc = 1u128;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % p;
                }
                base = base * base % p;
                e >>= 1;
            }
            acc
        };
        let two = self.reduce(2);
        let mut good = 1u32;
        while good < self.prec {
            x = self.mul(x, self.sub(two, self.mul(a, x)));
            good *= 2;
        }
        Some(self.reduce(x))
    }

    /// `p`-adic valuation of a residue; `prec` for zero.
    pub fn valuation(&self, a: u128) -> u32 {
        if a == 0 {
            return self.prec;
        }
        let p = self.p as u128;
        let mut v = 0;
        let mut x = a;
        while x.is_multiple_of(p) {
            x /= p;
            v += 1;
        }
        v
    }

    /// Signed representative in `(-m/2, m/2]`, as a string.
    pub fn to_signed_string(&self, a: u128) -> String {
        if a > self.modulus / 2 {
            format!("-{}", self.modulus - a)
        } else {
            a.to_string()
        }
    }

    /// Parses a decimal string (optionally negative) into a residue.
    pub fn parse(&self, s: &str) -> Result<u128> {
        let s = s.trim();
        let (neg, digits) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let v: u128 = digits
            .parse()
            .map_err(|_| Error::BadParams(format!("not a decimal coefficient: `{s}`")))?;
        let v = self.reduce(v);
        Ok(if neg { self.neg(v) } else { v })
    }

    /// The Teichmüller lift of `a mod p`: the unique `(p-1)`-th root of
    /// unity congruent to `a`, reached by iterated `p`-th powering.
    pub fn teichmueller(&self, a: u128) -> Result<u128> {
        if a.is_multiple_of(self.p as u128) {
            return Err(Error::ZeroResidue);
        }
        let mut x = self.reduce(a % self.p as u128);
        loop {
            let next = self.pow(x, self.p as u128);
            if next == x {
                return Ok(x);
            }
            x = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn oracle_mul(a: u128, b: u128, m: u128) -> u128 {
        let r = (BigUint::from(a) * BigUint::from(b)) % BigUint::from(m);
        r.to_string().parse().unwrap()
    }

    proptest! {
        #[test]
        fn mul_matches_bignum(p in prop::sample::select(vec![2u64, 3, 5, 7]), prec in 1u32..50, a: u128, b: u128) {
            let Ok(r) = Zp::new(p, prec) else { return Ok(()); };
            let (a, b) = (r.reduce(a), r.reduce(b));
            prop_assert_eq!(r.mul(a, b), oracle_mul(a, b, r.modulus()));
        }

        #[test]
        fn inverse_is_inverse(p in prop::sample::select(vec![2u64, 3, 5]), prec in 1u32..40, a: u128) {
            let Ok(r) = Zp::new(p, prec) else { return Ok(()); };
            let a = r.reduce(a);
            match r.inv(a) {
                Some(x) => prop_assert_eq!(r.mul(a, x), r.reduce(1)),
                None => prop_assert!(!r.is_unit(a)),
            }
        }
    }

    #[test]
    fn large_odd_modulus_uses_wide_path() {
        let r = Zp::new(5, 40).unwrap();
        assert!(r.modulus() > 1 << 63);
        let a = r.modulus() - 3;
        assert_eq!(r.mul(a, a), 9);
    }

    #[test]
    fn teichmueller_examples() {
        let r = Zp::new(3, 20).unwrap();
        assert_eq!(r.teichmueller(1).unwrap(), 1);
        assert_eq!(r.teichmueller(2).unwrap(), r.modulus() - 1);
        assert_eq!(r.teichmueller(0), Err(Error::ZeroResidue));

        // oracle: iterate a^(5^k) at double precision, then truncate
        let r5 = Zp::new(5, 12).unwrap();
        let wide = Zp::new(5, 24).unwrap();
        let mut x = 2u128;
        for _ in 0..30 {
            x = wide.pow(x, 5);
        }
        assert_eq!(r5.teichmueller(2).unwrap(), x % r5.modulus());
    }

    proptest! {
        #[test]
        fn teichmueller_is_root_of_unity(p in prop::sample::select(vec![3u64, 5, 7, 11]), a in 1u64..1000) {
            let r = Zp::new(p, 16).unwrap();
            prop_assume!(a % p != 0);
            let t = r.teichmueller(a as u128).unwrap();
            prop_assert_eq!(r.pow(t, (p - 1) as u128), 1);
            prop_assert_eq!(t % p as u128, (a % p) as u128);
        }
    }
}
