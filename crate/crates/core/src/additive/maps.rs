//! The integral and rational maps between class functions and tuples.

use rayon::prelude::*;

use super::{PhiTuple, Shape};
use crate::error::{Error, Result};
use crate::group::SubgroupLattice;
use crate::padic::QpVec;

pub(crate) fn log_order(lat: &SubgroupLattice, h: usize) -> i64 {
    let p = lat.p() as usize;
    let mut n = lat.info[h].order();
    let mut k = 0;
    while n > 1 {
        n /= p;
        k += 1;
    }
    k
}

/// `t^K_H`: `Z_p[Conj(K)] -> Z_p[Conj(H)]`, `[g] -> sum_x [x^-1 g x]` over
/// left coset representatives `x` of `H` in `K` with `x^-1 g x` in `H`.
pub fn t_map(lat: &SubgroupLattice, k: usize, h: usize, a: &QpVec) -> Result<QpVec> {
    if !lat.is_sub(h, k) {
        return Err(Error::PreconditionViolated(format!("subgroup #{h} is not inside #{k}")));
    }
    let ck = &lat.info[k].classes;
    let ch = &lat.info[h].classes;
    if a.len() != ck.len() {
        return Err(Error::DimensionMismatch(a.len(), ck.len()));
    }
    let g = &lat.group;
    let reps = g.left_coset_reps_in(lat.subgroup(k), lat.subgroup(h));
    let targets: Vec<Vec<usize>> = ck
        .reps
        .iter()
        .map(|&r| {
            reps.iter()
                .map(|&x| g.mul(g.mul(g.inv(x), r), x))
                .filter(|&y| lat.subgroup(h).contains(y))
                .map(|y| ch.class_of[y])
                .collect()
        })
        .collect();
    Ok(a.map_linear(ch.len(), |ring, src, out| {
        for (c, ts) in src.iter().zip(&targets) {
            for &t in ts {
                out[t] = ring.add(out[t], *c);
            }
        }
    }))
}

/// Pushforward `Z_p[Conj(H)] -> Z_p[H^ab]`.
fn classes_to_hab(lat: &SubgroupLattice, h: usize, a: &QpVec) -> QpVec {
    let info = &lat.info[h];
    let f: Vec<usize> = info.classes.reps.iter().map(|&r| info.hab.project(r)).collect();
    a.map_linear(info.hab.order(), |ring, src, out| {
        for (c, &t) in src.iter().zip(&f) {
            out[t] = ring.add(out[t], *c);
        }
    })
}

/// `beta^K_H = ab_H o t^K_H`.
pub fn beta_h(lat: &SubgroupLattice, k: usize, h: usize, a: &QpVec) -> Result<QpVec> {
    Ok(classes_to_hab(lat, h, &t_map(lat, k, h, a)?))
}

fn beta_shape(lat: &SubgroupLattice, shape: Shape, a: &QpVec) -> Result<PhiTuple> {
    let subgroups = shape.indices(lat);
    let whole = lat.whole();
    let entries = subgroups.par_iter().map(|&h| beta_h(lat, whole, h, a)).collect::<Result<Vec<_>>>()?;
    Ok(PhiTuple { shape, subgroups, entries })
}

/// `beta^G = (beta^G_H)_H` over all subgroups.
pub fn beta_all(lat: &SubgroupLattice, a: &QpVec) -> Result<PhiTuple> {
    beta_shape(lat, Shape::AllSubgroups, a)
}

/// `beta_C`: the cyclic components of `beta^G`.
pub fn beta_cyclic(lat: &SubgroupLattice, a: &QpVec) -> Result<PhiTuple> {
    beta_shape(lat, Shape::CyclicOnly, a)
}

/// Generator mask of a cyclic `P` over its `P^ab` basis. The trivial
/// group counts its identity as generator.
pub(crate) fn generator_mask(lat: &SubgroupLattice, pidx: usize) -> Result<Vec<bool>> {
    let info = &lat.info[pidx];
    if !info.is_cyclic() {
        return Err(Error::NotCyclic);
    }
    let n = info.order();
    Ok(info.hab.lifts.iter().map(|&x| lat.group.element_order(x) == n).collect())
}

/// `eta_P`: keeps the coefficients of generators of the cyclic `P`.
pub fn eta(lat: &SubgroupLattice, pidx: usize, a: &QpVec) -> Result<QpVec> {
    let mask = generator_mask(lat, pidx)?;
    if a.len() != mask.len() {
        return Err(Error::DimensionMismatch(a.len(), mask.len()));
    }
    Ok(a.map_linear(mask.len(), |_, src, out| {
        for ((o, &c), &keep) in out.iter_mut().zip(src).zip(&mask) {
            if keep {
                *o = c;
            }
        }
    }))
}

/// Applies `P^ab -> H^ab`, `x -> f(lift x)`, to `a`.
fn push_from(lat: &SubgroupLattice, pidx: usize, hidx: usize, a: &QpVec, f: impl Fn(usize) -> usize) -> QpVec {
    let hab = &lat.info[hidx].hab;
    let map: Vec<usize> = lat.info[pidx].hab.lifts.iter().map(|&x| hab.project(f(x))).collect();
    a.map_linear(hab.order(), |ring, src, out| {
        for (c, &t) in src.iter().zip(&map) {
            out[t] = ring.add(out[t], *c);
        }
    })
}

/// `[.] : Z_p[P] -> Z_p[Conj(G)]` for cyclic `P`.
fn cyclic_to_classes(lat: &SubgroupLattice, pidx: usize, a: &QpVec) -> QpVec {
    let map: Vec<usize> = lat.info[pidx].hab.lifts.iter().map(|&x| lat.classes.class_of[x]).collect();
    a.map_linear(lat.classes.len(), |ring, src, out| {
        for (c, &t) in src.iter().zip(&map) {
            out[t] = ring.add(out[t], *c);
        }
    })
}

fn expect_shape(t: &PhiTuple, lat: &SubgroupLattice, shape: Shape) -> Result<()> {
    if t.shape != shape || t.subgroups != shape.indices(lat) {
        return Err(Error::PreconditionViolated(format!("expected a {shape:?} tuple")));
    }
    for (e, &h) in t.entries.iter().zip(&t.subgroups) {
        if e.len() != lat.info[h].hab.order() {
            return Err(Error::DimensionMismatch(e.len(), lat.info[h].hab.order()));
        }
    }
    Ok(())
}

/// `tau_C`: `(a_H) -> sum_H [G:H]^-1 [eta_H(a_H)]` over cyclic `H`.
pub fn tau(lat: &SubgroupLattice, t: &PhiTuple) -> Result<QpVec> {
    expect_shape(t, lat, Shape::CyclicOnly)?;
    let ring = t.entries[0].ring();
    let mut acc = QpVec::zero(ring, lat.classes.len());
    for (&h, a) in t.subgroups.iter().zip(&t.entries) {
        let term = cyclic_to_classes(lat, h, &eta(lat, h, a)?).scale(lat.info[h].order() as i64);
        acc = acc.add(&term);
    }
    Ok(acc.mul_p_pow(-log_order(lat, lat.whole())))
}

/// `q`: `Phi_C -> Phi^G`, `q_H(a) = sum_{P <= H cyclic} [H:P]^-1 im_H(eta_P(a_P))`.
pub fn q_map(lat: &SubgroupLattice, t: &PhiTuple) -> Result<PhiTuple> {
    expect_shape(t, lat, Shape::CyclicOnly)?;
    let subgroups = Shape::AllSubgroups.indices(lat);
    let etas: Vec<QpVec> = t.subgroups.iter().zip(&t.entries).map(|(&p, a)| eta(lat, p, a)).collect::<Result<_>>()?;
    let entries = subgroups
        .par_iter()
        .map(|&h| {
            let ring = t.entries[0].ring();
            let mut acc = QpVec::zero(ring, lat.info[h].hab.order());
            for (&p, e) in t.subgroups.iter().zip(&etas) {
                if lat.is_sub(p, h) {
                    acc = acc.add(&push_from(lat, p, h, e, |x| x).scale(lat.info[p].order() as i64));
                }
            }
            acc.mul_p_pow(-log_order(lat, h))
        })
        .collect();
    Ok(PhiTuple { shape: Shape::AllSubgroups, subgroups, entries })
}

/// The `v`-type sum over cyclic `P` with `P^p <= H`:
/// `|H|^-1 sum |P| im_H(ver(eta_P(a_P)))`.
fn ver_sum(lat: &SubgroupLattice, cyc: &PhiTuple, h: usize) -> Result<QpVec> {
    let g = &lat.group;
    let p = lat.p() as usize;
    let ring = cyc.entries[0].ring();
    let mut acc = QpVec::zero(ring, lat.info[h].hab.order());
    for (&pidx, a) in cyc.subgroups.iter().zip(&cyc.entries) {
        let pp = lat.info[pidx].power.expect("cyclic subgroups carry P^p");
        if !lat.is_sub(pp, h) {
            continue;
        }
        let e = eta(lat, pidx, a)?;
        acc = acc.add(&push_from(lat, pidx, h, &e, |x| g.pow(x, p)).scale(lat.info[pidx].order() as i64));
    }
    Ok(acc.mul_p_pow(-log_order(lat, h)))
}

/// `v`: `Phi_C -> Phi_C`.
pub fn v_map(lat: &SubgroupLattice, t: &PhiTuple) -> Result<PhiTuple> {
    expect_shape(t, lat, Shape::CyclicOnly)?;
    let entries = t.subgroups.par_iter().map(|&h| ver_sum(lat, t, h)).collect::<Result<Vec<_>>>()?;
    Ok(PhiTuple { shape: Shape::CyclicOnly, subgroups: t.subgroups.clone(), entries })
}

/// `v_G` by its explicit formula.
pub fn v_g_explicit(lat: &SubgroupLattice, t: &PhiTuple) -> Result<PhiTuple> {
    expect_shape(t, lat, Shape::AllSubgroups)?;
    let cyc = t.project(lat);
    let subgroups = t.subgroups.clone();
    let entries = subgroups.par_iter().map(|&h| ver_sum(lat, &cyc, h)).collect::<Result<Vec<_>>>()?;
    Ok(PhiTuple { shape: Shape::AllSubgroups, subgroups, entries })
}

/// `v_G = q o v o proj`.
pub fn v_g_composite(lat: &SubgroupLattice, t: &PhiTuple) -> Result<PhiTuple> {
    expect_shape(t, lat, Shape::AllSubgroups)?;
    q_map(lat, &v_map(lat, &t.project(lat))?)
}

/// `v_G`, computed both ways; they must agree to `n_check` digits.
pub fn v_g_map(lat: &SubgroupLattice, t: &PhiTuple, n_check: u32) -> Result<PhiTuple> {
    let a = v_g_composite(lat, t)?;
    let b = v_g_explicit(lat, t)?;
    let r = a.residual(&b);
    if r < n_check as i64 {
        return Err(Error::InternalMismatch(format!(
            "v_G composite and explicit forms agree to {r} digits, need {n_check}"
        )));
    }
    Ok(a)
}

/// `phi`: `[g] -> [g^p]` on `Z_p[Conj(G)]`.
pub fn phi_power(lat: &SubgroupLattice, a: &QpVec) -> Result<QpVec> {
    let cl = &lat.classes;
    if a.len() != cl.len() {
        return Err(Error::DimensionMismatch(a.len(), cl.len()));
    }
    let g = &lat.group;
    let map: Vec<usize> = cl.representatives.iter().map(|&r| cl.class_of[g.pow(r, lat.p() as usize)]).collect();
    Ok(a.map_linear(cl.len(), |ring, src, out| {
        for (c, &t) in src.iter().zip(&map) {
            out[t] = ring.add(out[t], *c);
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;
    use crate::padic::Zp;
    use rand::{Rng, SeedableRng};

    fn lattice(name: &str) -> SubgroupLattice {
        SubgroupLattice::new(catalog_group(name, &[]).unwrap()).unwrap()
    }

    fn random_classes(lat: &SubgroupLattice, ring: Zp, rng: &mut impl Rng) -> QpVec {
        QpVec::integral(ring, (0..lat.classes.len()).map(|_| rng.gen_range(0..ring.modulus())).collect())
    }

    // Direct oracle: t^G_H of a class sum, enumerating every element of G
    // and dividing by |H| (each x in a coset xH gives the same class).
    fn t_oracle(lat: &SubgroupLattice, h: usize, a: &[u128], ring: Zp) -> Vec<u128> {
        let g = &lat.group;
        let ch = &lat.info[h].classes;
        let mut out = vec![0u128; ch.len()];
        let hord = lat.info[h].order() as u128;
        let mut counts = vec![0u128; ch.len()];
        for (c, &r) in lat.classes.representatives.iter().enumerate() {
            counts.iter_mut().for_each(|x| *x = 0);
            for x in 0..g.order() {
                let y = g.mul(g.mul(g.inv(x), r), x);
                if lat.subgroup(h).contains(y) {
                    counts[ch.class_of[y]] += 1;
                }
            }
            for (o, &k) in out.iter_mut().zip(&counts) {
                assert_eq!(k % hord, 0);
                *o = ring.add(*o, ring.mul(a[c], ring.reduce(k / hord)));
            }
        }
        out
    }

    #[test]
    fn t_map_matches_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for name in ["D4", "Q8", "Heis27", "C9"] {
            let lat = lattice(name);
            let ring = Zp::new(lat.p(), 12).unwrap();
            let a = random_classes(&lat, ring, &mut rng);
            for h in 0..lat.len() {
                let t = t_map(&lat, lat.whole(), h, &a).unwrap();
                assert_eq!(t.to_integral(12).unwrap(), t_oracle(&lat, h, a.numerators(), ring), "{name} #{h}");
            }
        }
    }

    #[test]
    fn t_is_transitive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        for name in ["D4", "Q8", "Heis27"] {
            let lat = lattice(name);
            let ring = Zp::new(lat.p(), 12).unwrap();
            let a = random_classes(&lat, ring, &mut rng);
            for k in 0..lat.len() {
                let tk = t_map(&lat, lat.whole(), k, &a).unwrap();
                for h in (0..lat.len()).filter(|&h| lat.is_sub(h, k)) {
                    let two = t_map(&lat, k, h, &tk).unwrap();
                    assert_eq!(two, t_map(&lat, lat.whole(), h, &a).unwrap(), "{name} {h}<{k}");
                }
            }
        }
    }

    #[test]
    fn beta_of_trivial_and_abelian() {
        let lat = lattice("C4");
        let ring = Zp::new(2, 10).unwrap();
        let a = QpVec::integral(ring, vec![1, 2, 3, 4]);
        // abelian whole group: beta is the identity
        assert_eq!(beta_h(&lat, lat.whole(), lat.whole(), &a).unwrap().numerators(), a.numerators());
        // trivial subgroup: [G:1] times the coefficient of the identity
        assert_eq!(beta_h(&lat, lat.whole(), 0, &a).unwrap().numerators(), &[4]);
    }

    #[test]
    fn tau_recovers_class_function_from_beta() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for name in ["C8", "D4", "Q8", "Heis27", "C3xC3", "C25"] {
            let lat = lattice(name);
            let ring = Zp::new(lat.p(), 20).unwrap();
            let a = random_classes(&lat, ring, &mut rng);
            let back = tau(&lat, &beta_cyclic(&lat, &a).unwrap()).unwrap();
            assert!(back.residual(&a) >= 20 - log_order(&lat, lat.whole()), "{name}");
        }
    }

    #[test]
    fn q_inverts_projection_on_beta_images() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(24);
        for name in ["D4", "Q8", "Heis27", "C9", "V4"] {
            let lat = lattice(name);
            let ring = Zp::new(lat.p(), 20).unwrap();
            let a = random_classes(&lat, ring, &mut rng);
            let all = beta_all(&lat, &a).unwrap();
            let q = q_map(&lat, &all.project(&lat)).unwrap();
            assert!(q.residual(&all) >= 20 - log_order(&lat, lat.whole()), "{name}");
            assert!(q.min_valuation().is_none_or(|v| v >= 0), "{name}");
        }
    }

    #[test]
    fn v_g_forms_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(25);
        for name in ["D4", "Q8", "Heis27", "C8", "C3xC3"] {
            let lat = lattice(name);
            let ring = Zp::new(lat.p(), 24).unwrap();
            let a = random_classes(&lat, ring, &mut rng);
            let all = beta_all(&lat, &a).unwrap();
            assert!(v_g_map(&lat, &all, 12).is_ok(), "{name}");
        }
    }

    #[test]
    fn phi_power_on_cyclic() {
        let lat = lattice("C9");
        let ring = Zp::new(3, 8).unwrap();
        let mut a = vec![0u128; 9];
        a[lat.classes.class_of[1]] = 1;
        let out = phi_power(&lat, &QpVec::integral(ring, a)).unwrap();
        let g = &lat.group;
        let mut expect = [0u128; 9];
        expect[lat.classes.class_of[g.pow(1, 3)]] = 1;
        assert_eq!(out.numerators(), &expect[..]);
    }

    #[test]
    fn eta_requires_cyclic() {
        let lat = lattice("V4");
        let ring = Zp::new(2, 8).unwrap();
        let v = QpVec::zero(ring, 4);
        assert_eq!(eta(&lat, lat.whole(), &v), Err(Error::NotCyclic));
    }
}
