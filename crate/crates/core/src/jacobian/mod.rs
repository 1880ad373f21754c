//! Hyperelliptic curves, their Jacobians in Mumford representation, the
//! two-parameter curve family with its explicit torsion, and reduction
//! modulo primes.

pub mod cantor;
pub mod count;
pub mod curve;
pub mod function;
pub mod torsion;

use num_bigint::BigInt;
use thiserror::Error;

pub use cantor::{Jacobian, Mumford};
pub use count::{jacobian_order_mod_p, l_polynomial};
pub use curve::{family_curve, to_odd_model, Family, FamilyParams, HyperellipticCurve, OddModel};
pub use function::{EffectiveDivisor, Factor, MillerFunction};
pub use torsion::{class_order, good_prime, reduce_curve, reduce_divisor, torsion_search, TorsionClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JacobianError {
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("curve needs degree at least 3, got {0}")]
    DegreeTooSmall(usize),
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("family parameters need lambda not in {{0, 1, -1}}")]
    DegenerateLambda,
    #[error("family parameters need odd n > 1, got {0}")]
    BadN(u64),
    #[error("operation needs an odd-degree model")]
    NotOddModel,
    #[error("({0}) is not a rational Weierstrass point")]
    NotWeierstrass(String),
    #[error("u does not divide v^2 - f: corrupt divisor")]
    CorruptDivisor,
    #[error("divisor meets the swapped point or infinity and cannot be transported")]
    NotTransportable,
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: BigInt, reason: String },
    #[error("genus {0} is above the supported bound 3")]
    GenusTooLarge(usize),
    #[error("torsion search exhausted after {tried} candidates with {found} classes found")]
    SearchExhausted { tried: usize, found: usize },
    #[error(transparent)]
    Arith(#[from] crate::arith::ArithError),
}
