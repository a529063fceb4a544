//! Determinants over commutative local group rings `Z_p[A]`.

use super::element::GroupRing;
use crate::padic::Zp;

pub type Matrix = Vec<Vec<Vec<u128>>>;

/// Determinant by elimination with unit pivots, falling back to the
/// division-free Berkowitz algorithm when no unit pivot exists (which
/// happens only for non-invertible matrices).
pub fn det_local(gr: &GroupRing<'_, Zp>, m: &Matrix) -> Vec<u128> {
    debug_assert!(gr.group().is_abelian());
    let n = m.len();
    let mut a = m.clone();
    let mut det = gr.one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| gr.is_unit(&a[i][k])) else {
            return berkowitz(gr, m);
        };
        if piv != k {
            a.swap(piv, k);
            det = gr.scalar_mul(&gr.ring().neg(1), &det);
        }
        det = gr.mul(&det, &a[k][k]);
        let inv = gr.invert_unit(&a[k][k]).expect("unit pivot");
        let pivot_row = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            if gr.is_zero(&row[k]) {
                continue;
            }
            let f = gr.mul(&row[k], &inv);
            for j in k..n {
                row[j] = gr.sub(&row[j], &gr.mul(&f, &pivot_row[j]));
            }
        }
    }
    det
}

/// Division-free determinant: the characteristic polynomial is built up
/// over leading principal submatrices with Toeplitz factors
/// `[1, -a_kk, -R C, -R A C, ..., -R A^(k-2) C]`.
pub fn berkowitz(gr: &GroupRing<'_, Zp>, m: &Matrix) -> Vec<u128> {
    let n = m.len();
    if n == 0 {
        return gr.one();
    }
    let neg = |x: &[u128]| gr.sub(&gr.zero(), x);
    let mut poly = vec![gr.one()];
    for k in 0..n {
        // leading block is rows/cols 0..k, new row/col k
        let mut t = Vec::with_capacity(k + 2);
        t.push(gr.one());
        t.push(neg(&m[k][k]));
        let mut v: Vec<Vec<u128>> = (0..k).map(|i| m[i][k].clone()).collect();
        for _ in 0..k {
            let rc = (0..k).fold(gr.zero(), |acc, j| gr.add(&acc, &gr.mul(&m[k][j], &v[j])));
            t.push(neg(&rc));
            v = (0..k)
                .map(|i| (0..k).fold(gr.zero(), |acc, j| gr.add(&acc, &gr.mul(&m[i][j], &v[j]))))
                .collect();
        }
        let mut next = vec![gr.zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in poly.iter().enumerate().take(i + 1) {
                if i - j < t.len() {
                    *slot = gr.add(slot, &gr.mul(&t[i - j], pj));
                }
            }
        }
        poly = next;
    }
    let c = poly.pop().expect("nonempty");
    if n % 2 == 1 {
        neg(&c)
    } else {
        c
    }
}
