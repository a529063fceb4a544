//! Approximate elements of `Q_p`.
//!
//! Every rational quantity in this crate has a `p`-power denominator, so a
//! vector of `Q_p` approximations is stored as integral numerators over a
//! shared `p^shift`. The numerators are known modulo `p^prec`, which makes
//! the absolute precision of each entry `prec - shift`. Precision is tracked
//! honestly: dividing by `p` costs a digit, and sums keep the weaker side.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::zp::{checked_pow, Zp};
use crate::error::{Error, Result};

fn max_prec(p: u64) -> u32 {
    let mut k = 0;
    while checked_pow(p, k + 1).is_some() {
        k += 1;
    }
    k
}

/// A single `Q_p` approximation: `unit * p^valuation + O(p^precision)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QpApprox {
    pub p: u64,
    pub valuation: i64,
    pub unit: u128,
    pub precision: i64,
    /// Set when the value is zero to the known precision.
    pub exact_zero: bool,
}

impl QpApprox {
    pub fn is_zero(&self) -> bool {
        self.exact_zero
    }
}

impl fmt::Display for QpApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            write!(f, "O({}^{})", self.p, self.precision)
        } else {
            write!(f, "{}*{}^{} + O({}^{})", self.unit, self.p, self.valuation, self.p, self.precision)
        }
    }
}

/// A vector of `Q_p` approximations sharing the denominator `p^shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpVec {
    ring: Zp,
    num: Vec<u128>,
    shift: u32,
}

impl QpVec {
    /// Integral vector; entries are residues of `ring`.
    pub fn integral(ring: Zp, num: Vec<u128>) -> Self {
        QpVec { ring, num, shift: 0 }
    }

    pub fn from_parts(ring: Zp, num: Vec<u128>, shift: u32) -> Self {
        QpVec { ring, num, shift }
    }

    pub fn zero(ring: Zp, len: usize) -> Self {
        QpVec { ring, num: vec![0; len], shift: 0 }
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn ring(&self) -> Zp {
        self.ring
    }

    pub fn numerators(&self) -> &[u128] {
        &self.num
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn abs_precision(&self) -> i64 {
        self.ring.prec() as i64 - self.shift as i64
    }

    /// Numerators over `p^new_shift`, known to absolute precision `new_abs`.
    fn rescaled(&self, new_shift: u32, new_abs: i64) -> (Zp, Vec<u128>) {
        debug_assert!(new_shift >= self.shift && new_abs <= self.abs_precision());
        let prec = (new_abs + new_shift as i64).max(0) as u32;
        let ring = self.ring.with_prec(prec).expect("rescaled precision fits");
        let factor = ring.p_pow(new_shift - self.shift);
        let num = self.num.iter().map(|&x| ring.mul(ring.reduce(x), factor)).collect();
        (ring, num)
    }

    fn combine(&self, other: &QpVec, f: impl Fn(&Zp, u128, u128) -> u128) -> QpVec {
        assert_eq!(self.len(), other.len(), "QpVec length mismatch");
        assert_eq!(self.p(), other.p(), "QpVec prime mismatch");
        let shift = self.shift.max(other.shift);
        let abs = self.abs_precision().min(other.abs_precision());
        let (ring, a) = self.rescaled(shift, abs);
        let (_, b) = other.rescaled(shift, abs);
        let num = a.iter().zip(&b).map(|(&x, &y)| f(&ring, x, y)).collect();
        QpVec { ring, num, shift }
    }

    pub fn add(&self, other: &QpVec) -> QpVec {
        self.combine(other, |r, x, y| r.add(x, y))
    }

    pub fn sub(&self, other: &QpVec) -> QpVec {
        self.combine(other, |r, x, y| r.sub(x, y))
    }

    pub fn neg(&self) -> QpVec {
        let num = self.num.iter().map(|&x| self.ring.neg(x)).collect();
        QpVec { ring: self.ring, num, shift: self.shift }
    }

    /// Multiplies by an integer.
    pub fn scale(&self, c: i64) -> QpVec {
        let c = self.ring.from_i64(c);
        let num = self.num.iter().map(|&x| self.ring.mul(x, c)).collect();
        QpVec { ring: self.ring, num, shift: self.shift }
    }

    /// Multiplies by `p^k` for any integer `k`.
    pub fn mul_p_pow(&self, k: i64) -> QpVec {
        if k <= 0 {
            return QpVec { ring: self.ring, num: self.num.clone(), shift: self.shift + k.unsigned_abs() as u32 };
        }
        let k = k as u32;
        if self.shift >= k {
            return QpVec { ring: self.ring, num: self.num.clone(), shift: self.shift - k };
        }
        let extra = k - self.shift;
        let prec = (self.ring.prec() + extra).min(max_prec(self.p()));
        let ring = self.ring.with_prec(prec).expect("bounded by max_prec");
        let factor = ring.p_pow(extra);
        let num = self.num.iter().map(|&x| ring.mul(x, factor)).collect();
        QpVec { ring, num, shift: 0 }
    }

    /// Drops precision to at most `abs` absolute digits.
    pub fn truncate(&self, abs: i64) -> QpVec {
        if abs >= self.abs_precision() {
            return self.clone();
        }
        let prec = (abs + self.shift as i64).max(0) as u32;
        let ring = self.ring.with_prec(prec).expect("smaller precision fits");
        let num = self.num.iter().map(|&x| ring.reduce(x)).collect();
        QpVec { ring, num, shift: self.shift }
    }

    /// Removes common factors of `p` from numerators and denominator.
    pub fn normalize(&self) -> QpVec {
        let mut out = self.clone();
        let p = self.p() as u128;
        while out.shift > 0 && out.ring.prec() > 0 && out.num.iter().all(|&x| x % p == 0) {
            let ring = out.ring.with_prec(out.ring.prec() - 1).expect("smaller precision fits");
            out.num = out.num.iter().map(|&x| x / p).collect();
            out.ring = ring;
            out.shift -= 1;
        }
        out
    }

    /// Valuation of entry `i`; `None` when it is zero to the known precision.
    pub fn valuation(&self, i: usize) -> Option<i64> {
        let x = self.num[i];
        if x == 0 {
            None
        } else {
            Some(self.ring.valuation(x) as i64 - self.shift as i64)
        }
    }

    pub fn min_valuation(&self) -> Option<i64> {
        (0..self.len()).filter_map(|i| self.valuation(i)).min()
    }

    pub fn is_integral(&self) -> bool {
        self.min_valuation().is_none_or(|v| v >= 0)
    }

    /// Largest `n` such that `self == other mod p^n` is certified, i.e. the
    /// minimum valuation of the difference, capped at its known precision.
    pub fn residual(&self, other: &QpVec) -> i64 {
        let d = self.sub(other);
        let abs = d.abs_precision();
        d.min_valuation().map_or(abs, |v| v.min(abs))
    }

    /// Integral residues modulo `p^prec`. Fails if the precision is short or
    /// some entry has negative valuation.
    pub fn to_integral(&self, prec: u32) -> Result<Vec<u128>> {
        if self.abs_precision() < prec as i64 {
            return Err(Error::PrecisionExhausted(format!(
                "need {prec} digits, have {}",
                self.abs_precision()
            )));
        }
        if !self.is_integral() {
            return Err(Error::NonIntegralResult(format!(
                "minimum valuation {}",
                self.min_valuation().unwrap_or(0)
            )));
        }
        let target = self.ring.with_prec(prec)?;
        let den = (self.p() as u128).pow(self.shift);
        Ok(self.num.iter().map(|&x| target.reduce(x / den)).collect())
    }

    pub fn coeff(&self, i: usize) -> QpApprox {
        let precision = self.abs_precision();
        match self.valuation(i) {
            None => QpApprox { p: self.p(), valuation: precision, unit: 0, precision, exact_zero: true },
            Some(v) => {
                let vv = (v + self.shift as i64) as u32;
                let unit = self.num[i] / (self.p() as u128).pow(vv);
                QpApprox { p: self.p(), valuation: v, unit, precision, exact_zero: false }
            }
        }
    }

    /// Applies a `Z`-linear map to the numerators. Precision and denominator
    /// are preserved.
    pub fn map_linear(&self, out_len: usize, f: impl Fn(&Zp, &[u128], &mut [u128])) -> QpVec {
        let mut out = vec![0u128; out_len];
        f(&self.ring, &self.num, &mut out);
        QpVec { ring: self.ring, num: out, shift: self.shift }
    }

    /// Rendering as `[a/p^s, ...]` with signed numerators.
    pub fn to_strings(&self) -> Vec<String> {
        let n = self.normalize();
        n.num
            .iter()
            .map(|&x| {
                let s = n.ring.to_signed_string(x);
                if n.shift == 0 {
                    s
                } else {
                    format!("{s}/{}^{}", n.p(), n.shift)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32) -> Zp {
        Zp::new(p, n).unwrap()
    }

    #[test]
    fn division_costs_precision() {
        let v = QpVec::integral(ring(3, 10), vec![9, 1]);
        let w = v.mul_p_pow(-2);
        assert_eq!(w.abs_precision(), 8);
        assert_eq!(w.valuation(0), Some(0));
        assert_eq!(w.valuation(1), Some(-2));
        assert!(!w.is_integral());
        let back = w.mul_p_pow(2);
        assert_eq!(back.to_integral(10).unwrap(), vec![9, 1]);
    }

    #[test]
    fn sums_align_denominators() {
        let r = ring(2, 12);
        let a = QpVec::integral(r, vec![1, 0]).mul_p_pow(-1);
        let b = QpVec::integral(r, vec![1, 2]).mul_p_pow(-1);
        let s = a.add(&b);
        assert_eq!(s.to_integral(11).unwrap(), vec![1, 1]);
        assert_eq!(s.abs_precision(), 11);
    }

    #[test]
    fn residual_detects_difference() {
        let r = ring(5, 10);
        let a = QpVec::integral(r, vec![1, 2]);
        let b = QpVec::integral(r, vec![1, 2 + 125]);
        assert_eq!(a.residual(&b), 3);
        assert_eq!(a.residual(&a), 10);
    }

    #[test]
    fn coeff_view() {
        let r = ring(3, 8);
        let v = QpVec::integral(r, vec![18, 0]).mul_p_pow(-1);
        let c = v.coeff(0);
        assert_eq!((c.valuation, c.unit, c.precision), (1, 2, 7));
        assert!(v.coeff(1).is_zero());
    }

    #[test]
    fn normalize_keeps_value() {
        let r = ring(2, 10);
        let v = QpVec::integral(r, vec![4, 8]).mul_p_pow(-3);
        let n = v.normalize();
        assert_eq!(n.shift(), 1);
        assert_eq!(v.residual(&n), 7);
    }
}
