//! Residues modulo an arbitrary modulus `m >= 2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ArithError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModInt {
    value: BigInt,
    modulus: BigInt,
}

impl ModInt {
    pub fn new(value: impl Into<BigInt>, modulus: impl Into<BigInt>) -> Result<Self, ArithError> {
        let modulus = modulus.into();
        if modulus < BigInt::from(2) {
            return Err(ArithError::BadModulus(modulus));
        }
        Ok(ModInt {
            value: value.into().mod_floor(&modulus),
            modulus,
        })
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    fn with(&self, v: BigInt) -> Self {
        ModInt {
            value: v.mod_floor(&self.modulus),
            modulus: self.modulus.clone(),
        }
    }

    pub fn zero_mod(modulus: &BigInt) -> Self {
        ModInt {
            value: BigInt::zero(),
            modulus: modulus.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ArithError> {
        self.check(o)?;
        Ok(self.with(&self.value + &o.value))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ArithError> {
        self.check(o)?;
        Ok(self.with(&self.value * &o.value))
    }

    fn check(&self, o: &Self) -> Result<(), ArithError> {
        if self.modulus == o.modulus {
            Ok(())
        } else {
            Err(ArithError::DomainMismatch)
        }
    }

    pub fn inv(&self) -> Option<Self> {
        let e = self.value.extended_gcd(&self.modulus);
        e.gcd.is_one().then(|| self.with(e.x))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.with(BigInt::one());
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// Reduction to a divisor `m'` of the modulus.
    pub fn reduce(&self, m: &BigInt) -> Result<Self, ArithError> {
        if !(&self.modulus % m).is_zero() {
            return Err(ArithError::DomainMismatch);
        }
        ModInt::new(self.value.clone(), m.clone())
    }
}

impl fmt::Debug for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// The panicking operators are for internal code that has already matched
// moduli; public entry points use the checked variants.
impl Add for &ModInt {
    type Output = ModInt;
    fn add(self, o: &ModInt) -> ModInt {
        assert_eq!(self.modulus, o.modulus, "modulus mismatch");
        self.with(&self.value + &o.value)
    }
}

impl Sub for &ModInt {
    type Output = ModInt;
    fn sub(self, o: &ModInt) -> ModInt {
        assert_eq!(self.modulus, o.modulus, "modulus mismatch");
        self.with(&self.value - &o.value)
    }
}

impl Mul for &ModInt {
    type Output = ModInt;
    fn mul(self, o: &ModInt) -> ModInt {
        assert_eq!(self.modulus, o.modulus, "modulus mismatch");
        self.with(&self.value * &o.value)
    }
}

impl Neg for &ModInt {
    type Output = ModInt;
    fn neg(self) -> ModInt {
        self.with(-&self.value)
    }
}
