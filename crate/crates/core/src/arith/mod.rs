//! Exact arithmetic: integers, rationals, residue rings, prime fields and
//! dense univariate polynomials.

pub mod ext;
pub mod field;
pub mod int;
pub mod modint;
pub mod poly;

use num_bigint::BigInt;
use thiserror::Error;

pub use ext::{ExtField, Fq};
pub use field::{centered, Field, Fp, FromRat, PrimeField};
pub use int::{
    factor_int, is_prime_u64, is_probable_prime, jacobi, squarefree_part, valuation, FactorBudget,
    Factorization,
};
pub use modint::ModInt;
pub use poly::{poly_discriminant, poly_gcd, Poly};

/// Arbitrary-precision integers.
pub type Int = BigInt;
/// Rationals in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("{0}: argument must be nonzero")]
    Zero(&'static str),
    #[error("factorization incomplete; composite cofactor {0} left")]
    IncompleteFactorization(BigInt),
    #[error("jacobi symbol needs an odd positive modulus, got {0}")]
    EvenModulus(BigInt),
    #[error("operands live in different coefficient domains")]
    DomainMismatch,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(BigInt),
}

/// Parses `a`, `-a` or `a/b` into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if num_traits::Zero::is_zero(&b) {
                return None;
            }
            Some(Rat::new(a, b))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

pub fn rat(a: i64, b: i64) -> Rat {
    Rat::new(a.into(), b.into())
}
