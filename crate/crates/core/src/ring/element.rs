use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::padic::{CoeffRing, Zp};

/// `R[G]` for a finite group `G`. Elements are dense coefficient vectors
/// indexed by element id.
#[derive(Clone, Copy, Debug)]
pub struct GroupRing<'g, R: CoeffRing = Zp> {
    group: &'g FiniteGroup,
    ring: R,
}

impl<'g, R: CoeffRing> GroupRing<'g, R> {
    pub fn new(group: &'g FiniteGroup, ring: R) -> Self {
        GroupRing { group, ring }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn zero(&self) -> Vec<R::Elem> {
        vec![self.ring.zero(); self.dim()]
    }

    pub fn one(&self) -> Vec<R::Elem> {
        self.scalar(self.ring.one())
    }

    pub fn scalar(&self, c: R::Elem) -> Vec<R::Elem> {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    /// The group element `g` as a ring element.
    pub fn basis(&self, g: usize) -> Vec<R::Elem> {
        let mut v = self.zero();
        v[g] = self.ring.one();
        v
    }

    pub fn add(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        a.iter().zip(b).map(|(x, y)| self.ring.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        a.iter().zip(b).map(|(x, y)| self.ring.sub(x, y)).collect()
    }

    pub fn scalar_mul(&self, c: &R::Elem, a: &[R::Elem]) -> Vec<R::Elem> {
        a.iter().map(|x| self.ring.mul(c, x)).collect()
    }

    /// Convolution through the Cayley table.
    pub fn mul(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        let n = self.dim();
        let mut out = self.zero();
        let nz: Vec<usize> = (0..n).filter(|&j| !self.ring.is_zero(&b[j])).collect();
        for (i, x) in a.iter().enumerate() {
            if self.ring.is_zero(x) {
                continue;
            }
            for &j in &nz {
                let k = self.group.mul(i, j);
                out[k] = self.ring.add(&out[k], &self.ring.mul(x, &b[j]));
            }
        }
        out
    }

    pub fn pow(&self, a: &[R::Elem], mut e: u64) -> Vec<R::Elem> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn augmentation(&self, a: &[R::Elem]) -> R::Elem {
        a.iter().fold(self.ring.zero(), |acc, x| self.ring.add(&acc, x))
    }

    /// `h -> g h g^-1` on monomials.
    pub fn conj_by(&self, g: usize, a: &[R::Elem]) -> Vec<R::Elem> {
        let mut out = self.zero();
        for (h, x) in a.iter().enumerate() {
            out[self.group.conj(g, h)] = x.clone();
        }
        out
    }

    pub fn is_zero(&self, a: &[R::Elem]) -> bool {
        a.iter().all(|x| self.ring.is_zero(x))
    }
}

/// Linear extension of a map on monomials, `x[i] -> out[f(i)]`.
pub fn pushforward<R: CoeffRing>(ring: &R, target_dim: usize, a: &[R::Elem], f: impl Fn(usize) -> usize) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); target_dim];
    for (i, x) in a.iter().enumerate() {
        if !ring.is_zero(x) {
            let j = f(i);
            out[j] = ring.add(&out[j], x);
        }
    }
    out
}

/// Checks that `f` is a homomorphism on the generators of `source`.
pub fn check_homomorphism(source: &FiniteGroup, target: &FiniteGroup, f: impl Fn(usize) -> usize) -> Result<()> {
    if f(0) != 0 {
        return Err(Error::NotAHomomorphism);
    }
    for &s in source.generators() {
        for x in 0..source.order() {
            if f(source.mul(x, s)) != target.mul(f(x), f(s)) {
                return Err(Error::NotAHomomorphism);
            }
        }
    }
    Ok(())
}

/// Pushforward along a group homomorphism, verified on generators.
pub fn pushforward_hom(
    ring: &Zp,
    source: &FiniteGroup,
    target: &FiniteGroup,
    a: &[u128],
    f: impl Fn(usize) -> usize,
) -> Result<Vec<u128>> {
    check_homomorphism(source, target, &f)?;
    Ok(pushforward(ring, target.order(), a, f))
}

impl<'g> GroupRing<'g, Zp> {
    pub fn from_i64(&self, coeffs: &[i64]) -> Vec<u128> {
        coeffs.iter().map(|&c| self.ring.from_i64(c)).collect()
    }

    /// Units of a local ring: augmentation prime to `p`.
    pub fn is_unit(&self, a: &[u128]) -> bool {
        self.ring.is_unit(self.augmentation(a))
    }

    /// Inverse of a unit: an approximate inverse modulo `p` from the
    /// nilpotent geometric series, then Newton iteration `z <- z(2 - xz)`.
    pub fn invert_unit(&self, a: &[u128]) -> Result<Vec<u128>> {
        let aug_inv = self.ring.inv(self.augmentation(a)).ok_or(Error::NotAUnit)?;
        let e = self.group.radical_index();
        let n = self.sub(&self.one(), &self.scalar_mul(&aug_inv, a));
        let mut series = self.one();
        let mut term = self.one();
        for _ in 1..e {
            term = self.mul(&term, &n);
            series = self.add(&series, &term);
        }
        let mut z = self.scalar_mul(&aug_inv, &series);
        let two = self.scalar(self.ring.reduce(2));
        let mut good = 1u32;
        while good < self.ring.prec() {
            z = self.mul(&z, &self.sub(&two, &self.mul(a, &z)));
            good *= 2;
        }
        Ok(z)
    }

    /// Signed integer coefficients in `(-p^N/2, p^N/2]`, as strings.
    pub fn to_strings(&self, a: &[u128]) -> Vec<String> {
        a.iter().map(|&x| self.ring.to_signed_string(x)).collect()
    }
}

/// Which monomial basis a serialized element lives on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Group,
    Quotient,
    Conj,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisJson {
    pub kind: BasisKind,
    /// Table hash of the group carrying the basis.
    pub group: String,
    pub labels: Vec<String>,
}

/// Serialized element: nonzero coefficients keyed by basis label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub basis: BasisJson,
    pub p: u64,
    pub precision: i64,
    /// Denominator exponent: coefficients are `value / p^shift`.
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub shift: u32,
    pub coeffs: BTreeMap<String, String>,
}

fn is_zero_u32(x: &u32) -> bool {
    *x == 0
}

impl ElementJson {
    pub fn new(basis: BasisJson, ring: &Zp, coeffs: &[u128], shift: u32) -> Self {
        let map = basis
            .labels
            .iter()
            .zip(coeffs)
            .filter(|(_, &c)| c != 0)
            .map(|(l, &c)| (l.clone(), ring.to_signed_string(c)))
            .collect();
        ElementJson { basis, p: ring.p(), precision: ring.prec() as i64 - shift as i64, shift, coeffs: map }
    }

    /// Dense numerators modulo `p^(precision + shift)`.
    pub fn dense(&self) -> Result<(Zp, Vec<u128>)> {
        let prec = u32::try_from(self.precision + self.shift as i64)
            .map_err(|_| Error::InvalidPrecision(format!("precision {}", self.precision)))?;
        let ring = Zp::new(self.p, prec)?;
        let mut out = vec![0u128; self.basis.labels.len()];
        for (label, value) in &self.coeffs {
            let i = self
                .basis
                .labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::BasisMismatch(format!("unknown label `{label}`")))?;
            out[i] = ring.parse(value)?;
        }
        Ok((ring, out))
    }
}

pub fn group_basis(g: &FiniteGroup) -> BasisJson {
    BasisJson { kind: BasisKind::Group, group: g.table_hash(), labels: (0..g.order()).map(|i| format!("g{i}")).collect() }
}
