//! Unramified Heisenberg extensions of quadratic fields from n-torsion on
//! hyperelliptic Jacobians.
//!
//! The crate is layered bottom-up: exact arithmetic ([`arith`]), the
//! Heisenberg groups themselves ([`heisenberg`]), Jacobian arithmetic on
//! hyperelliptic curves ([`jacobian`]), Weil pairings over prime fields
//! ([`pairing`]), the torsor certifier with explicit Kummer functions
//! ([`certifier`]) and finally specialization to quadratic fields
//! ([`specialization`]).

pub mod arith;
pub mod certifier;
pub mod heisenberg;
pub mod ser;
pub mod jacobian;
pub mod pairing;
pub mod specialization;
