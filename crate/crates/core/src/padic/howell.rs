//! Howell normal form over `Z/p^N`.
//!
//! `Z/p^N` is a chain ring, so the echelon pivots can be normalized to
//! `p^v`. After a pivot row is fixed, its multiple by `p^(N-v)` (which
//! vanishes at the pivot column) is fed back into the remaining rows; this
//! is what gives the Howell property: every span element with zeros in the
//! first `k` columns is a combination of the rows whose pivot lies at or
//! after column `k`. With entries above each pivot reduced into `[0, p^v)`
//! the form is canonical, so spans compare by equality of bases.

use serde::{Deserialize, Serialize};

use super::zp::Zp;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellBasis {
    ring: Zp,
    ncols: usize,
    rows: Vec<Vec<u128>>,
    pivots: Vec<(usize, u32)>,
}

/// Row-major decimal serialization of a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HowellJson {
    pub p: u64,
    pub precision: u32,
    pub ncols: usize,
    pub rows: Vec<Vec<String>>,
}

fn sub_scaled(ring: &Zp, target: &mut [u128], q: u128, row: &[u128], from: usize) {
    if q == 0 {
        return;
    }
    for j in from..target.len() {
        if row[j] != 0 {
            target[j] = ring.sub(target[j], ring.mul(q, row[j]));
        }
    }
}

impl HowellBasis {
    pub fn new<I>(ring: Zp, ncols: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<u128>>,
    {
        let mut m = Vec::new();
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(row.len(), ncols));
            }
            let row: Vec<u128> = row.into_iter().map(|x| ring.reduce(x)).collect();
            if row.iter().any(|&x| x != 0) {
                m.push(row);
            }
        }
        Ok(Self::from_reduced(ring, ncols, m))
    }

    fn from_reduced(ring: Zp, ncols: usize, mut m: Vec<Vec<u128>>) -> Self {
        let n = ring.prec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let best = (r..m.len()).filter(|&i| m[i][c] != 0).min_by_key(|&i| ring.valuation(m[i][c]));
            let Some(b) = best else { continue };
            m.swap(r, b);
            let v = ring.valuation(m[r][c]);
            let pv = ring.p_pow(v);
            let unit = m[r][c] / pv;
            let uinv = ring.inv(unit).expect("cofactor of the pivot is a unit");
            for x in m[r][c..].iter_mut() {
                *x = ring.mul(*x, uinv);
            }
            let (head, tail) = m.split_at_mut(r + 1);
            let pivot_row = &head[r];
            for row in tail.iter_mut() {
                if row[c] != 0 {
                    let q = row[c] / pv;
                    sub_scaled(&ring, row, q, pivot_row, c);
                }
            }
            if v > 0 {
                let f = ring.p_pow(n - v);
                let extra: Vec<u128> = pivot_row.iter().map(|&x| ring.mul(x, f)).collect();
                if extra.iter().any(|&x| x != 0) {
                    m.push(extra);
                }
            }
            pivots.push((c, v));
            r += 1;
        }
        m.truncate(r);
        for k in 0..r {
            let (c, v) = pivots[k];
            let pv = ring.p_pow(v);
            let (head, tail) = m.split_at_mut(k);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                let q = row[c] / pv;
                sub_scaled(&ring, row, q, pivot_row, c);
            }
        }
        HowellBasis { ring, ncols, rows: m, pivots }
    }

    pub fn empty(ring: Zp, ncols: usize) -> Self {
        HowellBasis { ring, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn ring(&self) -> Zp {
        self.ring
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<u128>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    /// `log_p` of the number of elements in the span.
    pub fn log_size(&self) -> u64 {
        self.pivots.iter().map(|&(_, v)| (self.ring.prec() - v) as u64).sum()
    }

    /// Minimal number of generators, `dim M/pM`.
    pub fn generator_count(&self) -> usize {
        let p = self.ring.reduce(self.ring.p() as u128);
        (self.log_size() - self.scaled(p).log_size()) as usize
    }

    /// Decides membership by reduction against the rows.
    pub fn contains(&self, v: &[u128]) -> Result<bool> {
        if v.len() != self.ncols {
            return Err(Error::DimensionMismatch(v.len(), self.ncols));
        }
        let ring = &self.ring;
        let mut w: Vec<u128> = v.iter().map(|&x| ring.reduce(x)).collect();
        for (row, &(c, val)) in self.rows.iter().zip(&self.pivots) {
            if w[..c].iter().any(|&x| x != 0) {
                return Ok(false);
            }
            if w[c] == 0 {
                continue;
            }
            if ring.valuation(w[c]) < val {
                return Ok(false);
            }
            let q = w[c] / ring.p_pow(val);
            sub_scaled(ring, &mut w, q, row, c);
        }
        Ok(w.iter().all(|&x| x == 0))
    }

    pub fn equals(&self, other: &HowellBasis) -> Result<bool> {
        if self.ncols != other.ncols {
            return Err(Error::DimensionMismatch(self.ncols, other.ncols));
        }
        if self.ring != other.ring {
            return Err(Error::BasisMismatch("different moduli".into()));
        }
        Ok(self.rows == other.rows)
    }

    /// Whether the span of `self` lies inside the span of `other`.
    pub fn is_contained_in(&self, other: &HowellBasis) -> Result<bool> {
        for row in &self.rows {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The image of the span modulo a smaller power of `p`.
    pub fn reduce_to(&self, prec: u32) -> Result<HowellBasis> {
        let ring = self.ring.with_prec(prec)?;
        HowellBasis::new(ring, self.ncols, self.rows.iter().cloned())
    }

    /// Basis of `c * span`.
    pub fn scaled(&self, c: u128) -> HowellBasis {
        let ring = self.ring;
        let rows = self.rows.iter().map(|r| r.iter().map(|&x| ring.mul(x, c)).collect());
        HowellBasis::new(ring, self.ncols, rows).expect("same dimension")
    }

    pub fn to_json(&self) -> HowellJson {
        HowellJson {
            p: self.ring.p(),
            precision: self.ring.prec(),
            ncols: self.ncols,
            rows: self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        }
    }

    pub fn from_json(j: &HowellJson) -> Result<HowellBasis> {
        let ring = Zp::new(j.p, j.precision)?;
        let rows = j
            .rows
            .iter()
            .map(|r| r.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        HowellBasis::new(ring, j.ncols, rows)
    }
}

/// Generators of the kernel of `y -> sum_j y_j * columns[j]`, where every
/// column lives in `(Z/p^N)^m`. Uses the Howell form of `[columns^T | I]`:
/// the rows vanishing on the first block span the kernel.
pub fn kernel(ring: Zp, m: usize, columns: &[Vec<u128>]) -> Result<Vec<Vec<u128>>> {
    let n = columns.len();
    let mut rows = Vec::with_capacity(n);
    for (j, col) in columns.iter().enumerate() {
        if col.len() != m {
            return Err(Error::DimensionMismatch(col.len(), m));
        }
        let mut row = Vec::with_capacity(m + n);
        row.extend(col.iter().map(|&x| ring.reduce(x)));
        row.extend((0..n).map(|k| if k == j { ring.reduce(1) } else { 0 }));
        rows.push(row);
    }
    let h = HowellBasis::new(ring, m + n, rows)?;
    Ok(h
        .rows
        .iter()
        .zip(&h.pivots)
        .filter(|(_, &(c, _))| c >= m)
        .map(|(r, _)| r[m..].to_vec())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn ring(p: u64, n: u32) -> Zp {
        Zp::new(p, n).unwrap()
    }

    // all Z/q-combinations of the rows, by brute force
    fn brute_span(q: u128, rows: &[Vec<u128>], ncols: usize) -> HashSet<Vec<u128>> {
        let mut span = HashSet::new();
        span.insert(vec![0u128; ncols]);
        for row in rows {
            let mut next = HashSet::new();
            for v in &span {
                for c in 0..q {
                    next.insert(v.iter().zip(row).map(|(&a, &b)| (a + c * b) % q).collect::<Vec<_>>());
                }
            }
            span = next;
        }
        span
    }

    #[test]
    fn empty_rows_contain_only_zero() {
        let h = HowellBasis::new(ring(3, 4), 2, Vec::<Vec<u128>>::new()).unwrap();
        assert!(h.contains(&[0, 0]).unwrap());
        assert!(!h.contains(&[1, 0]).unwrap());
    }

    #[test]
    fn forced_span_structure() {
        let r = ring(2, 2);
        let h = HowellBasis::new(r, 2, vec![vec![2, 0], vec![0, 1]]).unwrap();
        assert!(h.contains(&[2, 0]).unwrap());
        assert!(!h.contains(&[1, 0]).unwrap());
    }

    #[test]
    fn howell_property_needed() {
        // span of (2, 1) over Z/4 contains (0, 2) = 2*(2, 1)
        let r = ring(2, 2);
        let h = HowellBasis::new(r, 2, vec![vec![2, 1]]).unwrap();
        assert!(h.contains(&[0, 2]).unwrap());
        assert_eq!(h.rows().len(), 2);
        assert!(!h.contains(&[0, 1]).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let h = HowellBasis::new(ring(2, 3), 2, vec![vec![1, 1]]).unwrap();
        assert_eq!(h.contains(&[1]), Err(Error::DimensionMismatch(1, 2)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn span_matches_brute_force(entries in prop::collection::vec(0u128..8, 16)) {
            let r = ring(2, 3);
            let rows: Vec<Vec<u128>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let h = HowellBasis::new(r, 4, rows.clone()).unwrap();
            let span = brute_span(8, &rows, 4);
            prop_assert_eq!(h.log_size(), (span.len() as f64).log2().round() as u64);
            for v in &span {
                prop_assert!(h.contains(v).unwrap());
            }
            // every vector outside the span is rejected
            for code in 0..4096u128 {
                let v: Vec<u128> = (0..4).map(|k| (code >> (3 * k)) & 7).collect();
                prop_assert_eq!(h.contains(&v).unwrap(), span.contains(&v));
            }
        }

        #[test]
        fn idempotent_and_order_invariant(entries in prop::collection::vec(0u128..27, 12), seed in 0usize..6) {
            let r = ring(3, 3);
            let mut rows: Vec<Vec<u128>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let h = HowellBasis::new(r, 3, rows.clone()).unwrap();
            let again = HowellBasis::new(r, 3, h.rows().to_vec()).unwrap();
            prop_assert_eq!(&h, &again);
            let k = seed % rows.len();
            rows.rotate_left(k);
            rows.reverse();
            let permuted = HowellBasis::new(r, 3, rows).unwrap();
            prop_assert!(h.equals(&permuted).unwrap());
        }

        #[test]
        fn multiples_are_members(v in prop::collection::vec(0u128..625, 3), c in 0u128..625) {
            let r = ring(5, 4);
            let h = HowellBasis::new(r, 3, vec![v.clone()]).unwrap();
            let w: Vec<u128> = v.iter().map(|&x| r.mul(x, c)).collect();
            prop_assert!(h.contains(&w).unwrap());
            prop_assert!(h.contains(&[0, 0, 0]).unwrap());
        }

        #[test]
        fn kernel_is_exact(entries in prop::collection::vec(0u128..8, 9)) {
            // 3 columns in (Z/8)^3; compare with brute-force kernel
            let r = ring(2, 3);
            let cols: Vec<Vec<u128>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let ker = kernel(r, 3, &cols).unwrap();
            let kb = HowellBasis::new(r, 3, ker.clone()).unwrap();
            for code in 0..512u128 {
                let y: Vec<u128> = (0..3).map(|k| (code >> (3 * k)) & 7).collect();
                let image: Vec<u128> = (0..3)
                    .map(|i| (0..3).map(|j| y[j] * cols[j][i]).sum::<u128>() % 8)
                    .collect();
                prop_assert_eq!(kb.contains(&y).unwrap(), image.iter().all(|&x| x == 0));
            }
        }
    }
}
