//! Group rings over `Z/p^N` and the cyclotomic extension: arithmetic,
//! units, logarithm, determinants, norms and character twists.

pub mod det;
pub mod element;
pub mod log;
pub mod norm;
pub mod twist;

pub use det::{berkowitz, det_local, Matrix};
pub use element::{group_basis, pushforward, pushforward_hom, BasisJson, BasisKind, ElementJson, GroupRing};
pub use log::{conj_project, log_unit};
pub use norm::{mult_matrix, theta, Subquotient};
pub use twist::{char_twist, character_values, twist_norm};
