//! Quadratic fields `Q(sqrt d)` and exact arithmetic on their elements.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{Field, FromRat, Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    d: Int,
    delta: Int,
}

impl QuadField {
    /// `d` must be squarefree and different from 0 and 1; squarefreeness
    /// is the caller's responsibility.
    pub fn new(d: Int) -> Option<Self> {
        if d.is_zero() || d.is_one() {
            return None;
        }
        let delta = if d.mod_floor(&BigInt::from(4)) == BigInt::one() {
            d.clone()
        } else {
            &d * 4
        };
        Some(QuadField { d, delta })
    }

    pub fn d(&self) -> &Int {
        &self.d
    }

    pub fn discriminant(&self) -> &Int {
        &self.delta
    }

    pub fn is_imaginary(&self) -> bool {
        self.d.is_negative()
    }

    /// Whether the ring of integers is `Z[(1 + sqrt d)/2]`.
    pub fn half_integral(&self) -> bool {
        self.delta == self.d
    }

    pub fn elt(&self, a: Rat, b: Rat) -> QuadElt {
        QuadElt {
            a,
            b,
            d: self.d.clone(),
        }
    }

    pub fn from_rat(&self, a: Rat) -> QuadElt {
        self.elt(a, Rat::zero())
    }

    pub fn sqrt_d(&self) -> QuadElt {
        self.elt(Rat::zero(), Rat::one())
    }

    pub fn record(&self) -> QuadFieldRecord {
        QuadFieldRecord {
            d: self.d.to_string(),
            discriminant: self.delta.to_string(),
            signature: if self.is_imaginary() { "imaginary" } else { "real" }.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadFieldRecord {
    pub d: String,
    pub discriminant: String,
    pub signature: String,
}

/// `a + b sqrt(d)`.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadElt {
    pub a: Rat,
    pub b: Rat,
    d: Int,
}

impl QuadElt {
    pub fn d(&self) -> &Int {
        &self.d
    }

    pub fn norm(&self) -> Rat {
        &self.a * &self.a - Rat::from_integer(self.d.clone()) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rat {
        &self.a + &self.a
    }

    pub fn conj(&self) -> QuadElt {
        QuadElt {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.numer().is_zero()
    }

    /// `(u + v sqrt d) / w` with integers, `w > 0` and `gcd(u, v, w) = 1`.
    pub fn integral_form(&self) -> (Int, Int, Int) {
        let w = self.a.denom().lcm(self.b.denom());
        let u = self.a.numer() * (&w / self.a.denom());
        let v = self.b.numer() * (&w / self.b.denom());
        let g = u.gcd(&v).gcd(&w);
        (u / &g, v / &g, w / g)
    }

    pub fn powi(&self, e: i64) -> Option<QuadElt> {
        Field::powi(self, e)
    }

    pub fn record(&self) -> QuadEltRecord {
        QuadEltRecord {
            a: self.a.to_string(),
            b: self.b.to_string(),
        }
    }
}

impl fmt::Debug for QuadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadEltRecord {
    pub a: String,
    pub b: String,
}

impl Add for QuadElt {
    type Output = QuadElt;
    fn add(self, o: QuadElt) -> QuadElt {
        debug_assert_eq!(self.d, o.d);
        QuadElt {
            a: self.a + o.a,
            b: self.b + o.b,
            d: self.d,
        }
    }
}

impl Sub for QuadElt {
    type Output = QuadElt;
    fn sub(self, o: QuadElt) -> QuadElt {
        debug_assert_eq!(self.d, o.d);
        QuadElt {
            a: self.a - o.a,
            b: self.b - o.b,
            d: self.d,
        }
    }
}

impl Mul for QuadElt {
    type Output = QuadElt;
    fn mul(self, o: QuadElt) -> QuadElt {
        debug_assert_eq!(self.d, o.d);
        let dd = Rat::from_integer(self.d.clone());
        QuadElt {
            a: &self.a * &o.a + dd * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        }
    }
}

impl Neg for QuadElt {
    type Output = QuadElt;
    fn neg(self) -> QuadElt {
        QuadElt {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl Field for QuadElt {
    fn zero_like(&self) -> Self {
        QuadElt {
            a: Rat::zero(),
            b: Rat::zero(),
            d: self.d.clone(),
        }
    }
    fn one_like(&self) -> Self {
        QuadElt {
            a: Rat::one(),
            b: Rat::zero(),
            d: self.d.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.a.numer().is_zero() && self.b.numer().is_zero()
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.numer().is_zero() {
            return None;
        }
        Some(QuadElt {
            a: &self.a / &n,
            b: -&self.b / &n,
            d: self.d.clone(),
        })
    }
    fn from_i64_like(&self, k: i64) -> Self {
        QuadElt {
            a: Rat::from_integer(k.into()),
            b: Rat::zero(),
            d: self.d.clone(),
        }
    }
    fn same_domain(&self, other: &Self) -> bool {
        self.d == other.d
    }
}

impl FromRat for QuadElt {
    fn from_rat_like(&self, r: &Rat) -> Option<Self> {
        Some(QuadElt {
            a: r.clone(),
            b: Rat::zero(),
            d: self.d.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn discriminants() {
        for (d, delta) in [(-1, -4), (-3, -3), (2, 8), (5, 5), (-95, -95), (-5, -20), (3, 12)] {
            let k = QuadField::new(d.into()).unwrap();
            assert_eq!(*k.discriminant(), BigInt::from(delta));
            assert_eq!(k.is_imaginary(), d < 0);
        }
        assert!(QuadField::new(1.into()).is_none());
    }

    #[test]
    fn arithmetic() {
        let k = QuadField::new((-95).into()).unwrap();
        let x = k.elt(rat(-7, 12), rat(1, 12));
        assert_eq!(x.norm(), rat(1, 1));
        let y = k.elt(rat(3, 2), rat(-2, 5));
        let p = x.clone() * y.clone();
        assert_eq!(p.norm(), x.norm() * y.norm());
        assert!((y.clone() * y.inv().unwrap()).is_one());
        assert_eq!(x.integral_form(), ((-7).into(), 1.into(), 12.into()));
        let s = k.sqrt_d();
        assert_eq!(s.clone() * s, k.from_rat(rat(-95, 1)));
    }
}
