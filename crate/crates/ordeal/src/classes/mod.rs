//! Ideal classes: weak equivalence, principality, Picard groups, and the
//! ideal class monoid.

pub mod icm;
pub mod picard;
pub mod principal;
pub mod resunits;
pub mod weak;
