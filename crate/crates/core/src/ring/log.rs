//! The `p`-adic logarithm on units of `Z_p[G]`.

use super::element::GroupRing;
use crate::error::{Error, Result};
use crate::padic::{QpVec, Zp};

const MAX_LOG_TERMS: usize = 1 << 17;

/// Number of series terms needed so that every omitted term
/// `x^k / k`, `x` in the maximal ideal, has valuation at least `n`.
/// With `m^e ⊆ pR`, `v(x^k / k) >= k/e - 1 - log_p k`, which increases
/// once `k > e / ln p`.
pub fn log_terms(p: u64, e: usize, n: u32) -> Result<usize> {
    let lnp = (p as f64).ln();
    let threshold = e as f64 / lnp;
    let mut k = 1usize;
    loop {
        let kf = k as f64;
        if kf > threshold && kf / e as f64 - 1.0 - kf.ln() / lnp >= n as f64 {
            return Ok(k);
        }
        k += 1;
        if k > MAX_LOG_TERMS {
            return Err(Error::PrecisionExhausted(format!(
                "log series needs more than {MAX_LOG_TERMS} terms for {n} digits"
            )));
        }
    }
}

fn floor_log(p: u64, k: usize) -> u32 {
    let mut v = 0;
    let mut acc = p as usize;
    while acc <= k {
        acc *= p as usize;
        v += 1;
    }
    v
}

/// `log u` for a unit `u`, with absolute precision equal to the ring's.
/// The Teichmüller part of the augmentation is split off first, so
/// `log` vanishes on roots of unity exactly.
pub fn log_unit(gr: &GroupRing<'_, Zp>, u: &[u128]) -> Result<QpVec> {
    let ring = *gr.ring();
    let aug = gr.augmentation(u);
    if !ring.is_unit(aug) {
        return Err(Error::NotAUnit);
    }
    let n = ring.prec();
    let c = ring.teichmueller(aug)?;
    let c_inv = ring.inv(c).ok_or(Error::NotAUnit)?;
    let x = gr.sub(&gr.scalar_mul(&c_inv, u), &gr.one());
    let e = gr.group().radical_index();
    let terms = log_terms(ring.p(), e, n)?;
    let shift = floor_log(ring.p(), terms);
    let wide = ring
        .with_prec(n + shift)
        .map_err(|_| Error::PrecisionExhausted(format!("log needs {} digits internally", n + shift)))?;
    let wr = GroupRing::new(gr.group(), wide);
    let x: Vec<u128> = x.iter().map(|&c| wide.reduce(c)).collect();
    let mut acc = wr.zero();
    let mut power = wr.one();
    let p = ring.p() as usize;
    for k in 1..terms {
        power = wr.mul(&power, &x);
        if wr.is_zero(&power) {
            break;
        }
        let mut v = 0;
        let mut unit = k;
        while unit % p == 0 {
            unit /= p;
            v += 1;
        }
        let factor = wide.mul(wide.inv(unit as u128).expect("prime to p"), wide.p_pow(shift - v));
        let term = wr.scalar_mul(&factor, &power);
        acc = if k % 2 == 1 { wr.add(&acc, &term) } else { wr.sub(&acc, &term) };
    }
    Ok(QpVec::from_parts(wide, acc, shift))
}

/// Sums coefficients over classes: `class_of[g]` is the class of `g`
/// (`usize::MAX` to drop `g`).
pub fn conj_project(class_of: &[usize], nclasses: usize, x: &QpVec) -> QpVec {
    x.map_linear(nclasses, |r, src, out| {
        for (g, &c) in src.iter().enumerate() {
            let k = class_of[g];
            if k != usize::MAX {
                out[k] = r.add(out[k], c);
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, catalog_group};
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};

    fn random_unit(gr: &GroupRing<'_, Zp>, rng: &mut impl Rng) -> Vec<u128> {
        let ring = *gr.ring();
        let mut a: Vec<u128> = (0..gr.dim()).map(|_| rng.gen_range(0..ring.modulus())).collect();
        while !gr.is_unit(&a) {
            a[0] = ring.add(a[0], 1);
        }
        a
    }

    // sum_{k < 400} (-1)^(k+1) 3^k / k mod 3^40, in big integers
    fn scalar_log_oracle(n: u32) -> BigUint {
        let m = BigUint::from(3u32).pow(40);
        let mut acc = BigUint::from(0u32);
        for k in 1u32..400 {
            let mut v = 0;
            let mut w = k;
            while w % 3 == 0 {
                w /= 3;
                v += 1;
            }
            let num = BigUint::from(3u32).pow(k - v);
            let winv = BigUint::from(w).modpow(&(BigUint::from(2u32) * BigUint::from(3u32).pow(39) - 1u32), &m);
            let term = num * winv % &m;
            acc = if k % 2 == 1 { (acc + term) % &m } else { (acc + &m - term) % &m };
        }
        acc % BigUint::from(3u32).pow(n)
    }

    #[test]
    fn scalar_series() {
        let g = build_group(&[], 3, 256).unwrap();
        let ring = Zp::new(3, 20).unwrap();
        let gr = GroupRing::new(&g, ring);
        let l = log_unit(&gr, &[4]).unwrap();
        let got = l.to_integral(20).unwrap()[0];
        assert_eq!(BigUint::from(got), scalar_log_oracle(20));
    }

    #[test]
    fn log_of_one_and_torsion() {
        let g = catalog_group("Q8", &[]).unwrap();
        let ring = Zp::new(2, 20).unwrap();
        let gr = GroupRing::new(&g, ring);
        assert!(log_unit(&gr, &gr.one()).unwrap().min_valuation().is_none());
        let minus = gr.scalar(ring.neg(1));
        assert!(log_unit(&gr, &minus).unwrap().min_valuation().is_none());
        let g5 = catalog_group("C5", &[]).unwrap();
        let r5 = Zp::new(5, 16).unwrap();
        let gr5 = GroupRing::new(&g5, r5);
        let t = r5.teichmueller(2).unwrap();
        assert!(log_unit(&gr5, &gr5.scalar(t)).unwrap().min_valuation().is_none());
    }

    #[test]
    fn homomorphism_on_classes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for name in ["C4", "D4", "Q8", "C9", "Heis27", "C5"] {
            let g = catalog_group(name, &[]).unwrap();
            let ring = Zp::new(g.p(), 22).unwrap();
            let gr = GroupRing::new(&g, ring);
            let cls = g.conjugacy_classes();
            for _ in 0..4 {
                let u = random_unit(&gr, &mut rng);
                let v = random_unit(&gr, &mut rng);
                let proj = |x: &QpVec| conj_project(&cls.class_of, cls.len(), x);
                let luv = proj(&log_unit(&gr, &gr.mul(&u, &v)).unwrap());
                let sum = proj(&log_unit(&gr, &u).unwrap()).add(&proj(&log_unit(&gr, &v).unwrap()));
                assert!(luv.residual(&sum) >= 16, "{name}");
                let lu2 = log_unit(&gr, &gr.mul(&u, &u)).unwrap();
                let twice = log_unit(&gr, &u).unwrap().scale(2);
                assert!(lu2.residual(&twice) >= 16, "{name}");
            }
        }
    }

    #[test]
    fn term_bound_is_finite() {
        assert!(log_terms(2, 8, 30).unwrap() > 8);
        assert!(log_terms(5, 25, 24).unwrap() > 25);
    }
}
