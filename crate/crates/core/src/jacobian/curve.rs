//! Curves `y^2 = f(x)`, the family `f = (x^n - 1)(x^n - lambda^2)`, and the
//! change of model moving a rational Weierstrass point to infinity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::cantor::{Jacobian, Mumford};
use super::JacobianError;
use crate::arith::{Field, Poly, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct HyperellipticCurve<F> {
    f: Poly<F>,
    genus: usize,
}

impl<F: Field> HyperellipticCurve<F> {
    /// Validates `f`: degree at least 3, squarefree, odd characteristic.
    pub fn new(f: Poly<F>) -> Result<Self, JacobianError> {
        let deg = f.degree().unwrap_or(0);
        if deg < 3 {
            return Err(JacobianError::DegreeTooSmall(deg));
        }
        let one = f.leading().unwrap().one_like();
        if (one.clone() + one).is_zero() {
            return Err(JacobianError::CharacteristicTwo);
        }
        if !f.is_squarefree() {
            return Err(JacobianError::NotSquarefree);
        }
        Ok(HyperellipticCurve {
            genus: (deg - 1) / 2,
            f,
        })
    }

    pub fn f(&self) -> &Poly<F> {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn is_odd_model(&self) -> bool {
        self.f.degree().unwrap() % 2 == 1
    }

    pub fn contains(&self, x: &F, y: &F) -> bool {
        y.clone() * y.clone() == self.f.eval(x)
    }

    /// The Jacobian of an odd-degree model.
    pub fn jacobian(&self) -> Result<Jacobian<F>, JacobianError> {
        Jacobian::new(self.clone())
    }
}

/// Parameters of the family `y^2 = x^(2n) - (1 + lambda^2) x^n + lambda^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyParams {
    pub n: u64,
    pub lambda: Rat,
}

impl FamilyParams {
    pub fn new(n: u64, lambda: Rat) -> Result<Self, JacobianError> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(JacobianError::BadN(n));
        }
        if lambda.is_zero() || (&lambda * &lambda).is_one() {
            return Err(JacobianError::DegenerateLambda);
        }
        Ok(FamilyParams { n, lambda })
    }
}

fn rat(k: i64) -> Rat {
    Rat::from_integer(k.into())
}

/// `x^(2n) - (1 + lambda^2) x^n + lambda^2`.
pub fn family_polynomial(n: usize, lambda: &Rat) -> Poly<Rat> {
    let l2 = lambda * lambda;
    let mut c = vec![rat(0); 2 * n + 1];
    c[0] = l2.clone();
    c[n] = -(rat(1) + l2);
    c[2 * n] = rat(1);
    Poly::new(c)
}

pub fn family_curve(p: &FamilyParams) -> Result<HyperellipticCurve<Rat>, JacobianError> {
    let p = FamilyParams::new(p.n, p.lambda.clone())?;
    HyperellipticCurve::new(family_polynomial(p.n as usize, &p.lambda))
}

/// An odd-degree model `w^2 = F(z)` of a curve with a rational Weierstrass
/// point `W = (x_W, 0)`, via `z = 1/(x - x_W)`, `w = y z^(g+1)`. The point
/// `W` goes to infinity.
#[derive(Clone, Debug)]
pub struct OddModel<F> {
    source: HyperellipticCurve<F>,
    odd: HyperellipticCurve<F>,
    xw: F,
}

/// `z^k f(x_W + 1/z)` with `k = 2g + 2`.
fn odd_polynomial<F: Field>(f: &Poly<F>, xw: &F, g: usize) -> Poly<F> {
    let one = xw.one_like();
    let k = 2 * g + 2;
    // f(x_W + y) then reverse in y
    let shifted = f.compose(&Poly::new(vec![xw.clone(), one]));
    shifted.reverse(k)
}

pub fn to_odd_model<F: Field>(c: &HyperellipticCurve<F>, xw: &F) -> Result<OddModel<F>, JacobianError> {
    if !c.f.eval(xw).is_zero() {
        return Err(JacobianError::NotWeierstrass(format!("{xw:?}, 0")));
    }
    let odd = HyperellipticCurve::new(odd_polynomial(&c.f, xw, c.genus))?;
    debug_assert_eq!(odd.f.degree(), Some(2 * c.genus + 1));
    Ok(OddModel {
        source: c.clone(),
        odd,
        xw: xw.clone(),
    })
}

/// Moves `(u, v)` along `s -> t = 1/(s - a) + b` with values multiplied by
/// `T^(g+1)`, `T = t - b`. Both directions of the model change are of this
/// shape: `(a, b) = (x_W, 0)` forwards and `(0, x_W)` backwards.
fn transport_uv<F: Field>(
    u: &Poly<F>,
    v: &Poly<F>,
    a: &F,
    b: &F,
    g: usize,
) -> Option<(Poly<F>, Poly<F>)> {
    let one = a.one_like();
    let du = u.degree()?;
    if du == 0 {
        return Some((u.clone(), Poly::zero()));
    }
    let shift = Poly::new(vec![a.clone(), one.clone()]);
    let big_u = u.compose(&shift);
    if big_u.eval(&a.zero_like()).is_zero() {
        return None;
    }
    let ur = big_u.reverse(du);
    let back = Poly::new(vec![-b.clone(), one.clone()]);
    let u_new = ur.compose(&back).monic();
    // value v(a + 1/T) T^(g+1) computed modulo ur in the variable T
    let big_v = v.compose(&shift);
    let m = big_v.degree().unwrap_or(0);
    let vr = big_v.reverse(m);
    let t = Poly::new(vec![a.zero_like(), one]);
    let val = if g + 1 >= m {
        (&vr * &t.pow((g + 1 - m) as u32)).rem(&ur)
    } else {
        let inv = t.pow((m - g - 1) as u32).inv_mod(&ur)?;
        (&vr * &inv).rem(&ur)
    };
    let v_new = val.compose(&back).rem(&u_new);
    Some((u_new, v_new))
}

impl<F: Field> OddModel<F> {
    pub fn source(&self) -> &HyperellipticCurve<F> {
        &self.source
    }

    pub fn odd(&self) -> &HyperellipticCurve<F> {
        &self.odd
    }

    pub fn weierstrass_x(&self) -> &F {
        &self.xw
    }

    pub fn jacobian(&self) -> Jacobian<F> {
        Jacobian::new(self.odd.clone()).expect("odd model")
    }

    /// `(x, y) -> (1/(x - x_W), y / (x - x_W)^(g+1))`; `None` at `W`.
    pub fn point_to_odd(&self, x: &F, y: &F) -> Option<(F, F)> {
        let z = (x.clone() - self.xw.clone()).inv()?;
        let w = y.clone() * z.pow(self.odd.genus as u64 + 1);
        Some((z, w))
    }

    /// Inverse of [`Self::point_to_odd`]; `None` over `z = 0`, the points at
    /// infinity of the source model.
    pub fn point_from_odd(&self, z: &F, w: &F) -> Option<(F, F)> {
        let zi = z.inv()?;
        let y = w.clone() * zi.pow(self.odd.genus as u64 + 1);
        Some((self.xw.clone() + zi, y))
    }

    /// Carries the source divisor `E - deg(E) W`, with `E` affine and
    /// avoiding `W`, to the odd-model class `E' - deg(E) oo`.
    pub fn divisor_to_odd(&self, u: &Poly<F>, v: &Poly<F>) -> Result<Mumford<F>, JacobianError> {
        let zero = self.xw.zero_like();
        let (u2, v2) =
            transport_uv(u, v, &self.xw, &zero, self.odd.genus).ok_or(JacobianError::NotTransportable)?;
        let jac = self.jacobian();
        let d = Mumford::new_unchecked(u2, v2);
        if !jac.is_valid(&d) {
            return Err(JacobianError::CorruptDivisor);
        }
        Ok(jac.reduce(&d))
    }

    /// Inverse transport: `E' - k oo` becomes `(u, v)` of `E` on the source
    /// model, meaning `E - k W`. Fails if `E'` meets `z = 0`.
    pub fn divisor_from_odd(&self, d: &Mumford<F>) -> Result<(Poly<F>, Poly<F>), JacobianError> {
        let zero = self.xw.zero_like();
        transport_uv(d.u(), d.v(), &zero, &self.xw, self.odd.genus).ok_or(JacobianError::NotTransportable)
    }
}

/// A member of the family together with its odd model at `P0 = (1, 0)` and
/// the constants of its two explicit order-`n` classes.
#[derive(Clone, Debug)]
pub struct Family {
    pub params: FamilyParams,
    pub curve: HyperellipticCurve<Rat>,
    pub model: OddModel<Rat>,
}

impl Family {
    pub fn new(params: FamilyParams) -> Result<Self, JacobianError> {
        let curve = family_curve(&params)?;
        let model = to_odd_model(&curve, &rat(1))?;
        Ok(Family { params, curve, model })
    }

    pub fn n(&self) -> u64 {
        self.params.n
    }

    pub fn lambda(&self) -> &Rat {
        &self.params.lambda
    }

    pub fn genus(&self) -> usize {
        self.curve.genus()
    }

    /// `s = (1 + lambda^2)/2`.
    pub fn s(&self) -> Rat {
        (rat(1) + self.lambda() * self.lambda()) / rat(2)
    }

    /// `t = (1 - lambda^2)/2`.
    pub fn t(&self) -> Rat {
        (rat(1) - self.lambda() * self.lambda()) / rat(2)
    }

    /// `kappa = (1 - lambda^2)/(2 lambda)`.
    pub fn kappa(&self) -> Rat {
        self.t() / self.lambda()
    }

    /// `kappa' = (1 + lambda^2)/(2 lambda)`.
    pub fn kappa_prime(&self) -> Rat {
        self.s() / self.lambda()
    }

    fn xn(&self) -> Poly<Rat> {
        Poly::monomial(rat(1), self.n() as usize)
    }

    /// `(x^n - s)^2 - f == t^2`, checked on coefficients.
    pub fn seed_identity_holds(&self) -> bool {
        let a = &self.xn() - &Poly::constant(self.s());
        &(&a * &a) - self.curve.f() == Poly::constant(self.t() * self.t())
    }

    /// `(lambda - kappa' x^n)^2 - f == kappa^2 x^(2n)`.
    pub fn second_identity_holds(&self) -> bool {
        let g = &Poly::constant(self.lambda().clone()) - &self.xn().scale(&self.kappa_prime());
        let k2 = self.kappa() * self.kappa();
        &(&g * &g) - self.curve.f() == Poly::monomial(k2, 2 * self.n() as usize)
    }

    pub fn jacobian(&self) -> Jacobian<Rat> {
        self.model.jacobian()
    }

    /// The odd-model images of the two points at infinity, `(0, 1)` and
    /// `(0, -1)`.
    pub fn infinity_points(&self) -> [(Rat, Rat); 2] {
        [(rat(0), rat(1)), (rat(0), rat(-1))]
    }

    /// The odd-model image of `Q = (0, lambda)`: `(-1, -lambda)` for odd `n`.
    pub fn q_point(&self) -> (Rat, Rat) {
        self.model.point_to_odd(&rat(0), self.lambda()).unwrap()
    }

    /// The class of `oo+ - oo-`, i.e. `2[(0, 1) - oo]` on the odd model.
    pub fn seed_class(&self) -> Mumford<Rat> {
        let jac = self.jacobian();
        let p = jac.point(&rat(0), &rat(1)).unwrap();
        jac.add(&p, &p)
    }

    /// The class of `Q - tau(Q)` with `Q = (0, lambda)`, i.e. `2[Q - oo]`.
    pub fn second_class(&self) -> Mumford<Rat> {
        let jac = self.jacobian();
        let (z, w) = self.q_point();
        let p = jac.point(&z, &w).unwrap();
        jac.add(&p, &p)
    }

    /// Rational points of the source model with `x = a/b`, `max(|a|, b) <= h`.
    pub fn rational_points(&self, h: u64) -> Vec<(Rat, Rat)> {
        let mut out = Vec::new();
        for x in small_rationals(h) {
            let fx = self.curve.f().eval(&x);
            if let Some(y) = rat_sqrt(&fx) {
                out.push((x.clone(), y.clone()));
                if !y.is_zero() {
                    out.push((x, -y));
                }
            }
        }
        out
    }

    /// Rational roots of `f`: `x = 1` always, plus rational `n`-th roots of
    /// `lambda^2`.
    pub fn rational_weierstrass_points(&self) -> Vec<Rat> {
        let mut out = vec![rat(1)];
        let l2 = self.lambda() * self.lambda();
        let n = self.n() as u32;
        if let (Some(a), Some(b)) = (
            crate::arith::int::exact_root(&l2.numer().abs(), n),
            crate::arith::int::exact_root(l2.denom(), n),
        ) {
            // n odd: the only rational n-th root of lambda^2 > 0 is positive
            let r = Rat::new(a, b);
            if !r.is_one() {
                out.push(r);
            }
        }
        out.sort();
        out
    }
}

/// `a/b` in lowest terms with `b >= 1` and `max(|a|, b) <= h`, ordered by
/// height then numerator then denominator.
pub fn small_rationals(h: u64) -> Vec<Rat> {
    let h = h as i64;
    let mut v: Vec<(i64, i64, i64)> = Vec::new();
    for b in 1..=h {
        for a in -h..=h {
            if a.gcd(&b) == 1 {
                v.push((a.abs().max(b), a, b));
            }
        }
    }
    v.sort();
    v.into_iter().map(|(_, a, b)| Rat::new(a.into(), b.into())).collect()
}

/// Exact square root of a rational square.
pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rat::new(n, d))
}

/// Exact square root of an integer square.
pub fn int_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}
