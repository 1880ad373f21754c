//! Scalar fields used as polynomial coefficients: the rationals and prime
//! fields `F_p` with word-sized `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::int::is_prime_u64;
use super::{ArithError, Rat};

/// A commutative field whose elements carry enough context to build
/// constants (`zero_like`, `one_like`) without a separate ring object.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn from_i64_like(&self, k: i64) -> Self;

    /// Elements of `F_p` and `F_q` with `p != q` must never be combined.
    fn same_domain(&self, _other: &Self) -> bool {
        true
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// `self^e` for a signed exponent; `None` when `self` is zero and `e < 0`.
    fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|x| x.pow(e.unsigned_abs()))
        }
    }
}

/// Fields into which rationals map (with possible failure when a
/// denominator vanishes, as for reduction modulo `p`).
pub trait FromRat: Field {
    fn from_rat_like(&self, r: &Rat) -> Option<Self>;
}

impl Field for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64_like(&self, k: i64) -> Self {
        Rat::from_integer(BigInt::from(k))
    }
}

impl FromRat for Rat {
    fn from_rat_like(&self, r: &Rat) -> Option<Self> {
        Some(r.clone())
    }
}

/// An element of `F_p`, `p` an odd or even prime below `2^62`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    /// Builds `v mod p` without re-checking primality of `p`; use
    /// [`PrimeField`] to obtain a checked modulus.
    pub(crate) fn raw(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Legendre symbol of the element: 1, -1 (as `p - 1`), or 0.
    pub fn legendre(&self) -> i32 {
        if self.v == 0 {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        let t = self.pow((self.p - 1) / 2);
        if t.v == 1 {
            1
        } else {
            -1
        }
    }

    /// Tonelli–Shanks square root; `None` for non-residues.
    pub fn sqrt(&self) -> Option<Fp> {
        let p = self.p;
        if self.v == 0 || p == 2 {
            return Some(*self);
        }
        if self.legendre() != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow((p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = Fp::raw(2, p);
        while z.legendre() != -1 {
            z = z + Fp::raw(1, p);
        }
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = self.pow(q);
        let mut r = self.pow(q.div_ceil(2));
        while t.v != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt.v != 1 {
                tt = tt * tt;
                i += 1;
            }
            let b = c.pow(1u64 << (m - i - 1));
            m = i;
            c = b * b;
            t = t * c;
            r = r * b;
        }
        Some(r)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        let s = self.v + o.v;
        Fp {
            v: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp {
            v: if self.v >= o.v {
                self.v - o.v
            } else {
                self.v + self.p - o.v
            },
            p: self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp {
            v: ((self.v as u128 * o.v as u128) % self.p as u128) as u64,
            p: self.p,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1 % self.p, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        let e = (self.v as i128).extended_gcd(&(self.p as i128));
        debug_assert_eq!(e.gcd, 1);
        Some(Fp {
            v: e.x.rem_euclid(self.p as i128) as u64,
            p: self.p,
        })
    }
    fn from_i64_like(&self, k: i64) -> Self {
        Fp {
            v: (k as i128).rem_euclid(self.p as i128) as u64,
            p: self.p,
        }
    }
    fn same_domain(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl FromRat for Fp {
    fn from_rat_like(&self, r: &Rat) -> Option<Self> {
        let pf = PrimeField { p: self.p };
        pf.from_rat(r)
    }
}

/// A checked prime modulus; the factory for [`Fp`] elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if p >= 1 << 62 || !is_prime_u64(p) {
            return Err(ArithError::NotPrime(BigInt::from(p)));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, k: i64) -> Fp {
        Fp::raw((k as i128).rem_euclid(self.p as i128) as u64, self.p)
    }

    pub fn from_u64(&self, k: u64) -> Fp {
        Fp::raw(k, self.p)
    }

    pub fn zero(&self) -> Fp {
        self.from_u64(0)
    }

    pub fn one(&self) -> Fp {
        self.from_u64(1)
    }

    pub fn from_bigint(&self, k: &BigInt) -> Fp {
        let r = k.mod_floor(&BigInt::from(self.p));
        Fp::raw(r.to_u64().expect("reduced below p"), self.p)
    }

    /// Reduction of a rational; `None` when `p` divides the denominator.
    pub fn from_rat(&self, r: &Rat) -> Option<Fp> {
        let den = self.from_bigint(r.denom());
        let inv = den.inv()?;
        Some(self.from_bigint(r.numer()) * inv)
    }

    /// Smallest primitive root modulo `p`.
    pub fn primitive_root(&self) -> Fp {
        let p = self.p;
        if p == 2 {
            return self.one();
        }
        let fac = super::int::factor_u64(p - 1);
        (2..p)
            .map(|g| self.from_u64(g))
            .find(|g| fac.iter().all(|&(q, _)| g.pow((p - 1) / q).v != 1))
            .expect("a primitive root exists")
    }
}

/// Lifts `x in F_p` to the symmetric residue in `(-p/2, p/2]`.
pub fn centered(x: Fp) -> BigInt {
    let v = x.value() as i128;
    let p = x.modulus() as i128;
    let c = if v > p / 2 { v - p } else { v };
    BigInt::from(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_mod_p_exhaustive_small() {
        for p in [3u64, 5, 7, 13, 17, 41, 97] {
            let f = PrimeField::new(p).unwrap();
            for v in 0..p {
                let x = f.from_u64(v);
                match x.sqrt() {
                    Some(r) => assert_eq!(r * r, x),
                    None => assert_eq!(x.legendre(), -1),
                }
            }
        }
    }

    #[test]
    fn inverse_and_primitive_root() {
        let f = PrimeField::new(19).unwrap();
        for v in 1..19 {
            let x = f.from_u64(v);
            assert!((x * x.inv().unwrap()).is_one());
        }
        let g = f.primitive_root();
        assert_eq!(g.value(), 2);
        assert!(PrimeField::new(21).is_err());
    }

    #[test]
    fn rational_reduction_rejects_bad_denominator() {
        let f = PrimeField::new(7).unwrap();
        let r = Rat::new(BigInt::from(5), BigInt::from(14));
        assert!(f.from_rat(&r).is_none());
        let r = Rat::new(BigInt::from(5), BigInt::from(2));
        assert_eq!(f.from_rat(&r).unwrap(), f.elem(6));
    }
}
