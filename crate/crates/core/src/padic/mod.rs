//! Arithmetic in `Z/p^N`, approximate `Q_p`, `Z_p[zeta_p]` and Howell-form
//! linear algebra.

pub mod cyclo;
pub mod howell;
pub mod precision;
pub mod qp;
pub mod zp;

pub use cyclo::{CycloElt, CycloRing};
pub use howell::{kernel, HowellBasis, HowellJson};
pub use precision::{PrecisionContext, DEFAULT_CHECK_PRECISION, INTERNAL_HEADROOM};
pub use qp::{QpApprox, QpVec};
pub use zp::{checked_pow, is_prime, Zp};

/// Commutative coefficient ring for group-ring arithmetic.
pub trait CoeffRing {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

impl CoeffRing for Zp {
    type Elem = u128;

    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        self.reduce(1)
    }
    fn add(&self, a: &u128, b: &u128) -> u128 {
        Zp::add(self, *a, *b)
    }
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        Zp::sub(self, *a, *b)
    }
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        Zp::mul(self, *a, *b)
    }
    fn is_zero(&self, a: &u128) -> bool {
        *a == 0
    }
}
