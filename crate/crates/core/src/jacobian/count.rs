//! Naive point counting over `F_(p^k)` and the Jacobian order from the
//! L-polynomial.

use num_bigint::BigInt;

use super::curve::HyperellipticCurve;
use super::JacobianError;
use crate::arith::{Field, Fp};

/// `F_(p^k)` as `F_p[t]/(m(t))`, elements as coefficient vectors of length `k`.
#[derive(Clone, Debug)]
pub struct GfExt {
    p: u64,
    k: usize,
    /// Monic irreducible modulus, low degree first, without the leading 1.
    m: Vec<u64>,
}

impl GfExt {
    /// Finds the lexicographically first monic irreducible of degree `k <= 3`
    /// (irreducible iff rootless in that range).
    pub fn new(p: u64, k: usize) -> Self {
        assert!((1..=3).contains(&k), "extension degree must be 1..=3");
        if k == 1 {
            return GfExt { p, k, m: vec![0] };
        }
        for idx in 0..p.pow(k as u32) {
            let m: Vec<u64> = (0..k).map(|i| idx / p.pow(i as u32) % p).collect();
            let rootless = (0..p).all(|x| {
                let mut acc = 1u64;
                for c in m.iter().rev() {
                    acc = (acc * x + c) % p;
                }
                acc != 0
            });
            if rootless {
                return GfExt { p, k, m };
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    pub fn element(&self, mut idx: u64) -> Vec<u64> {
        (0..self.k)
            .map(|_| {
                let c = idx % self.p;
                idx /= self.p;
                c
            })
            .collect()
    }

    pub fn from_base(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = c % self.p;
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p as u128;
        let k = self.k;
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + *x as u128 * *y as u128) % p;
            }
        }
        // t^k = -m(t)
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c != 0 {
                for (j, mj) in self.m.iter().enumerate() {
                    prod[i - k + j] = (prod[i - k + j] + (p - c) * *mj as u128) % p;
                }
            }
            prod[i] = 0;
        }
        prod[..k].iter().map(|&c| c as u64).collect()
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.from_base(1);
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// Quadratic character: 0, 1 or -1.
    pub fn chi(&self, a: &[u64]) -> i64 {
        if self.is_zero(a) {
            return 0;
        }
        let r = self.pow(a, (self.order() - 1) / 2);
        if r == self.from_base(1) {
            1
        } else {
            -1
        }
    }
}

/// `#C(F_(p^k))` on the smooth projective model of `y^2 = f(x)`.
pub fn count_points(c: &HyperellipticCurve<Fp>, k: usize) -> u64 {
    let f = c.f();
    let p = f.leading().unwrap().modulus();
    let gf = GfExt::new(p, k);
    let coeffs: Vec<Vec<u64>> = f.coeffs().iter().map(|x| gf.from_base(x.value())).collect();
    let mut affine: i64 = 0;
    for idx in 0..gf.order() {
        let x = gf.element(idx);
        let mut acc = gf.from_base(0);
        for cf in coeffs.iter().rev() {
            acc = gf.add(&gf.mul(&acc, &x), cf);
        }
        affine += 1 + gf.chi(&acc);
    }
    let at_infinity = if c.is_odd_model() {
        1
    } else {
        1 + gf.chi(&gf.from_base(f.leading().unwrap().value()))
    };
    (affine + at_infinity) as u64
}

/// Coefficients `a_0..a_2g` of `L(T) = prod (1 - alpha_i T)` from point
/// counts over `F_(p^k)`, `k <= g`, by Newton's identities and the
/// functional equation `a_(2g-j) = p^(g-j) a_j`.
pub fn l_polynomial(c: &HyperellipticCurve<Fp>) -> Result<Vec<BigInt>, JacobianError> {
    let g = c.genus();
    if g > 3 {
        return Err(JacobianError::GenusTooLarge(g));
    }
    let p = c.f().leading().unwrap().modulus();
    // power sums S_k = q^k + 1 - N_k of the Frobenius eigenvalues
    let s: Vec<BigInt> = (1..=g)
        .map(|k| BigInt::from(p).pow(k as u32) + 1 - BigInt::from(count_points(c, k)))
        .collect();
    let mut a = vec![BigInt::from(1)];
    for j in 1..=g {
        let mut acc = BigInt::from(0);
        for i in 1..=j {
            acc += &s[i - 1] * &a[j - i];
        }
        a.push(-acc / BigInt::from(j));
    }
    for j in (0..g).rev() {
        a.push(BigInt::from(p).pow((g - j) as u32) * &a[j]);
    }
    Ok(a)
}

/// `#J(F_p) = L(1)`.
pub fn jacobian_order_mod_p(c: &HyperellipticCurve<Fp>) -> Result<BigInt, JacobianError> {
    Ok(l_polynomial(c)?.into_iter().sum())
}

/// Every reduced Mumford divisor over `F_p`, by exhaustive search; used as
/// an oracle for small `p` and `g`.
pub fn enumerate_reduced_divisors(c: &HyperellipticCurve<Fp>) -> Vec<super::Mumford<Fp>> {
    use crate::arith::Poly;
    let f = c.f();
    let one = f.leading().unwrap().one_like();
    let p = one.modulus();
    let g = c.genus();
    let mut out = Vec::new();
    for deg in 0..=g {
        let count = p.pow(deg as u32);
        for ui in 0..count {
            let mut uc: Vec<Fp> = (0..deg).map(|i| Fp::raw(ui / p.pow(i as u32) % p, p)).collect();
            uc.push(one);
            let u = Poly::new(uc);
            for vi in 0..count {
                let v = Poly::new((0..deg).map(|i| Fp::raw(vi / p.pow(i as u32) % p, p)).collect());
                if (&(&v * &v) - f).rem(&u).is_zero() {
                    out.push(super::Mumford::new_unchecked(u.clone(), v));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Poly, PrimeField, Rat};
    use crate::jacobian::curve::{Family, FamilyParams};

    fn reduce(f: &Poly<Rat>, p: u64) -> HyperellipticCurve<Fp> {
        let pf = PrimeField::new(p).unwrap();
        HyperellipticCurve::new(f.map(|r| pf.from_rat(r).unwrap())).unwrap()
    }

    #[test]
    fn genus_one_count_by_enumeration() {
        // y^2 = x^3 + x over F_5: x = 0 gives one point, x = 2, 3 give two
        // each (f = 0), x = 1 gives f = 2 (non-residue), x = 4 gives f = 3
        // (non-residue), plus infinity: 1 + 1 + 1 + 1 = 4.
        let c = reduce(&Poly::from_i64s(&[0, 1, 0, 1]), 5);
        let direct = {
            let pf = PrimeField::new(5).unwrap();
            let mut n = 1;
            for x in 0..5 {
                for y in 0..5 {
                    if c.contains(&pf.from_u64(x), &pf.from_u64(y)) {
                        n += 1;
                    }
                }
            }
            n
        };
        assert_eq!(count_points(&c, 1), direct);
        assert_eq!(jacobian_order_mod_p(&c).unwrap(), BigInt::from(direct));
    }

    #[test]
    fn jacobian_order_matches_divisor_enumeration() {
        let fam = Family::new(FamilyParams::new(3, crate::arith::rat(2, 1)).unwrap()).unwrap();
        for p in [7u64, 11, 13] {
            let c = reduce(fam.model.odd().f(), p);
            let n = enumerate_reduced_divisors(&c).len();
            assert_eq!(jacobian_order_mod_p(&c).unwrap(), BigInt::from(n), "p = {p}");
        }
    }

    #[test]
    fn both_models_give_the_same_jacobian_order() {
        let fam = Family::new(FamilyParams::new(3, crate::arith::rat(2, 1)).unwrap()).unwrap();
        for p in [7u64, 13, 19] {
            let even = reduce(fam.curve.f(), p);
            let odd = reduce(fam.model.odd().f(), p);
            assert_eq!(count_points(&even, 1), count_points(&odd, 1));
            assert_eq!(jacobian_order_mod_p(&even).unwrap(), jacobian_order_mod_p(&odd).unwrap());
        }
    }

    #[test]
    fn functional_equation_from_higher_counts() {
        // For g = 2 the counts over F_(p^3) are not used to build L; they
        // must agree with the power sum predicted by L.
        let fam = Family::new(FamilyParams::new(3, crate::arith::rat(2, 1)).unwrap()).unwrap();
        let c = reduce(fam.model.odd().f(), 7);
        let a = l_polynomial(&c).unwrap();
        // Newton: S_3 = -3 a_3 - S_1 a_2 - S_2 a_1
        let s1 = -&a[1];
        let s2 = -(&s1 * &a[1]) - 2 * &a[2];
        let s3 = -(&s1 * &a[2]) - (&s2 * &a[1]) - 3 * &a[3];
        let predicted = BigInt::from(7u64.pow(3)) + 1 - s3;
        assert_eq!(predicted, BigInt::from(count_points(&c, 3)));
    }

    #[test]
    fn genus_above_three_rejected() {
        let fam = Family::new(FamilyParams::new(5, crate::arith::rat(2, 1)).unwrap()).unwrap();
        let c = reduce(fam.model.odd().f(), 11);
        assert_eq!(jacobian_order_mod_p(&c), Err(JacobianError::GenusTooLarge(4)));
    }
}
