//! Mumford representation and Cantor's composition/reduction on the
//! Jacobian of an odd-degree model `w^2 = F(z)`.
//!
//! Every operation also reports the function it divides out, so that
//! `D1 + D2 = D3 + div(h)` holds exactly; Miller accumulation builds on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::curve::HyperellipticCurve;
use super::function::Factor;
use super::JacobianError;
use crate::arith::{Field, Poly};

/// `(u, v)` with `u` monic and `u | v^2 - F`, standing for the divisor
/// `E - deg(u) oo` where `E` is the set of points `(r, v(r))`, `u(r) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mumford<F> {
    u: Poly<F>,
    v: Poly<F>,
}

impl<F: Field> Mumford<F> {
    /// No validation; callers either construct from Cantor output or check
    /// with [`Jacobian::is_valid`].
    pub fn new_unchecked(u: Poly<F>, v: Poly<F>) -> Self {
        Mumford { u, v }
    }

    pub fn u(&self) -> &Poly<F> {
        &self.u
    }

    pub fn v(&self) -> &Poly<F> {
        &self.v
    }

    pub fn degree(&self) -> usize {
        self.u.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.u.degree() == Some(0)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mumford<G> {
        Mumford {
            u: self.u.map(&f),
            v: self.v.map(&f),
        }
    }

    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<Mumford<G>> {
        Some(Mumford {
            u: self.u.try_map(&f)?,
            v: self.v.try_map(&f)?,
        })
    }
}

/// Cantor steps record the functions they divide out as `(factor, exponent)`.
pub type StepFunction<F> = Vec<(Factor<F>, i64)>;

#[derive(Clone, Debug, PartialEq)]
pub struct Jacobian<F> {
    curve: HyperellipticCurve<F>,
    one: F,
}

impl<F: Field> Jacobian<F> {
    pub fn new(curve: HyperellipticCurve<F>) -> Result<Self, JacobianError> {
        if !curve.is_odd_model() {
            return Err(JacobianError::NotOddModel);
        }
        let one = curve.f().leading().unwrap().one_like();
        Ok(Jacobian { curve, one })
    }

    pub fn curve(&self) -> &HyperellipticCurve<F> {
        &self.curve
    }

    pub fn f(&self) -> &Poly<F> {
        self.curve.f()
    }

    pub fn genus(&self) -> usize {
        self.curve.genus()
    }

    pub fn one(&self) -> &F {
        &self.one
    }

    pub fn zero(&self) -> Mumford<F> {
        Mumford {
            u: Poly::constant(self.one.clone()),
            v: Poly::zero(),
        }
    }

    /// The class `[P - oo]` of an affine point.
    pub fn point(&self, x: &F, y: &F) -> Option<Mumford<F>> {
        self.curve.contains(x, y).then(|| Mumford {
            u: Poly::linear_root(x.clone()),
            v: Poly::constant(y.clone()),
        })
    }

    /// `u` monic, `deg v < deg u` and `u | v^2 - F`.
    pub fn is_valid(&self, d: &Mumford<F>) -> bool {
        d.u.is_monic()
            && d.v.deg_i() < d.u.deg_i()
            && (&(&d.v * &d.v) - self.f()).rem(&d.u).is_zero()
    }

    pub fn is_reduced(&self, d: &Mumford<F>) -> bool {
        self.is_valid(d) && d.degree() <= self.genus()
    }

    /// Composition without reduction: `D1 + D2 = D3 + div(d)` with `D3`
    /// semi-reduced and `d` a monic polynomial in `z`.
    pub fn compose(&self, a: &Mumford<F>, b: &Mumford<F>) -> (Mumford<F>, Poly<F>) {
        let (d1, e1, e2) = Poly::xgcd(&a.u, &b.u);
        let (d, c1, c2) = Poly::xgcd(&d1, &(&a.v + &b.v));
        let s1 = &c1 * &e1;
        let s2 = &c1 * &e2;
        let s3 = c2;
        let u = (&a.u * &b.u).div_exact(&(&d * &d)).expect("d^2 | u1 u2");
        let num = &(&(&(&s1 * &a.u) * &b.v) + &(&(&s2 * &b.u) * &a.v)) + &(&s3 * &(&(&a.v * &b.v) + self.f()));
        let v = num.div_exact(&d).expect("d divides the composed v").rem(&u);
        (Mumford { u, v }, d)
    }

    /// One reduction step `D = D' + div((w - v) / u')`.
    fn reduce_step(&self, d: &Mumford<F>) -> Mumford<F> {
        let up = (self.f() - &(&d.v * &d.v)).div_exact(&d.u).expect("u | F - v^2").monic();
        let vp = (-&d.v).rem(&up);
        Mumford { u: up, v: vp }
    }

    /// Reduces a semi-reduced divisor, recording `D = D_red + div(h)`.
    pub fn reduce_with_fn(&self, d: &Mumford<F>) -> (Mumford<F>, StepFunction<F>) {
        let mut cur = d.clone();
        let mut h = Vec::new();
        while cur.degree() > self.genus() {
            let next = self.reduce_step(&cur);
            h.push((Factor::new(-&cur.v, Poly::constant(self.one.clone())), 1));
            h.push((Factor::vertical(next.u.clone()), -1));
            cur = next;
        }
        (cur, h)
    }

    pub fn reduce(&self, d: &Mumford<F>) -> Mumford<F> {
        let mut cur = d.clone();
        while cur.degree() > self.genus() {
            cur = self.reduce_step(&cur);
        }
        cur
    }

    /// `D1 + D2 = D3 + div(h)` with `D3` reduced.
    pub fn add_with_fn(&self, a: &Mumford<F>, b: &Mumford<F>) -> (Mumford<F>, StepFunction<F>) {
        let (semi, d) = self.compose(a, b);
        let (red, mut h) = self.reduce_with_fn(&semi);
        if d.degree().unwrap_or(0) > 0 {
            h.push((Factor::vertical(d), 1));
        }
        (red, h)
    }

    pub fn add(&self, a: &Mumford<F>, b: &Mumford<F>) -> Mumford<F> {
        let (semi, _) = self.compose(a, b);
        self.reduce(&semi)
    }

    /// The hyperelliptic involution, which is negation on classes.
    pub fn neg(&self, d: &Mumford<F>) -> Mumford<F> {
        Mumford {
            u: d.u.clone(),
            v: (-&d.v).rem(&d.u),
        }
    }

    pub fn sub(&self, a: &Mumford<F>, b: &Mumford<F>) -> Mumford<F> {
        self.add(a, &self.neg(b))
    }

    /// Double-and-add scalar multiplication; negative `k` negates.
    pub fn mul(&self, k: &BigInt, d: &Mumford<F>) -> Mumford<F> {
        let base = if k.is_negative() { self.neg(d) } else { d.clone() };
        let k = k.abs();
        let mut acc = self.zero();
        for i in (0..k.bits()).rev() {
            acc = self.add(&acc, &acc);
            if k.bit(i) {
                acc = self.add(&acc, &base);
            }
        }
        acc
    }

    pub fn mul_i(&self, k: i64, d: &Mumford<F>) -> Mumford<F> {
        self.mul(&BigInt::from(k), d)
    }

    /// Validating addition for external inputs.
    pub fn cantor_add(&self, a: &Mumford<F>, b: &Mumford<F>) -> Result<Mumford<F>, JacobianError> {
        if !self.is_valid(a) || !self.is_valid(b) {
            return Err(JacobianError::CorruptDivisor);
        }
        Ok(self.add(&self.reduce(a), &self.reduce(b)))
    }

    pub fn cantor_neg(&self, d: &Mumford<F>) -> Result<Mumford<F>, JacobianError> {
        if !self.is_valid(d) {
            return Err(JacobianError::CorruptDivisor);
        }
        Ok(self.neg(&self.reduce(d)))
    }

    pub fn scalar_mul(&self, k: &BigInt, d: &Mumford<F>) -> Result<Mumford<F>, JacobianError> {
        if !self.is_valid(d) {
            return Err(JacobianError::CorruptDivisor);
        }
        Ok(self.mul(k, &self.reduce(d)))
    }

    /// Least `k` in `1..=bound` with `k D = 0`.
    pub fn order_naive(&self, d: &Mumford<F>, bound: u64) -> Option<u64> {
        let mut acc = d.clone();
        for k in 1..=bound {
            if acc.is_zero() {
                return Some(k);
            }
            acc = self.add(&acc, d);
        }
        None
    }

    /// Exact order given a multiple `m` of it (for instance `#J(F_p)`).
    pub fn order_dividing(&self, d: &Mumford<F>, m: &BigInt) -> BigInt {
        debug_assert!(self.mul(m, d).is_zero());
        let mut ord = m.clone();
        let small = m.to_u64().map(crate::arith::int::factor_u64);
        let primes: Vec<BigInt> = match small {
            Some(f) => f.into_iter().map(|(p, _)| BigInt::from(p)).collect(),
            None => crate::arith::factor_int(m, Default::default())
                .map(|f| f.primes().cloned().collect())
                .unwrap_or_default(),
        };
        for p in primes {
            while ord.is_multiple_of(&p) && self.mul(&(&ord / &p), d).is_zero() {
                ord /= &p;
            }
        }
        if ord.is_zero() {
            BigInt::zero()
        } else {
            ord
        }
    }
}
