//! Finite fields `F_(p^k) = F_p[t]/(m(t))` as a [`Field`], for evaluating
//! functions at divisors that need more room than `F_p` offers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use super::int::factor_u64;
use super::{ArithError, Field, Fp, Poly, PrimeField};

#[derive(Debug, PartialEq)]
struct Ctx {
    pf: PrimeField,
    k: usize,
    m: Poly<Fp>,
}

/// A fixed model of `F_(p^k)`; cheap to clone.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtField(Arc<Ctx>);

#[derive(Clone, PartialEq)]
pub struct Fq {
    c: Poly<Fp>,
    ctx: Arc<Ctx>,
}

fn mulmod(a: &Poly<Fp>, b: &Poly<Fp>, m: &Poly<Fp>) -> Poly<Fp> {
    (a * b).rem(m)
}

fn powmod(a: &Poly<Fp>, mut e: u128, m: &Poly<Fp>, one: Fp) -> Poly<Fp> {
    let mut acc = Poly::constant(one);
    let mut b = a.rem(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m);
        }
        b = mulmod(&b, &b, m);
        e >>= 1;
    }
    acc
}

/// Rabin's test: `m | t^(p^k) - t` and `gcd(t^(p^(k/r)) - t, m) = 1` for
/// every prime `r | k`.
pub fn is_irreducible(m: &Poly<Fp>) -> bool {
    let Some(k) = m.degree() else { return false };
    if k == 0 {
        return false;
    }
    let one = m.leading().unwrap().one_like();
    let p = one.modulus();
    let t = Poly::monomial(one, 1);
    let frob = |j: usize| {
        let mut h = t.clone();
        for _ in 0..j {
            h = powmod(&h, p as u128, m, one);
        }
        h
    };
    if !(&frob(k) - &t).rem(m).is_zero() {
        return false;
    }
    factor_u64(k as u64)
        .iter()
        .all(|&(r, _)| Poly::gcd(&(&frob(k / r as usize) - &t), m).degree() == Some(0))
}

impl ExtField {
    /// The lexicographically first monic irreducible of degree `k` defines
    /// the model; requires `p^k < 2^63`.
    pub fn new(pf: PrimeField, k: usize) -> Result<Self, ArithError> {
        let p = pf.p();
        let q = (p as u128).checked_pow(k as u32).filter(|&q| q < 1 << 63);
        if k == 0 || q.is_none() {
            return Err(ArithError::BadModulus(p.into()));
        }
        let mut idx = 0u64;
        loop {
            let mut c: Vec<Fp> = (0..k).map(|i| pf.from_u64(idx / p.pow(i as u32) % p)).collect();
            c.push(pf.one());
            let m = Poly::new(c);
            if is_irreducible(&m) {
                return Ok(ExtField(Arc::new(Ctx { pf, k, m })));
            }
            idx += 1;
        }
    }

    /// Smallest extension of `F_p` with at least `min` elements.
    pub fn at_least(pf: PrimeField, min: u64) -> Result<Self, ArithError> {
        let p = pf.p();
        let mut k = 1;
        while (p as u128).pow(k as u32) < min as u128 {
            k += 1;
        }
        ExtField::new(pf, k)
    }

    pub fn degree(&self) -> usize {
        self.0.k
    }

    pub fn order(&self) -> u64 {
        self.0.pf.p().pow(self.0.k as u32)
    }

    pub fn embed(&self, x: Fp) -> Fq {
        Fq {
            c: Poly::constant(x),
            ctx: self.0.clone(),
        }
    }

    pub fn zero(&self) -> Fq {
        self.embed(self.0.pf.zero())
    }

    pub fn one(&self) -> Fq {
        self.embed(self.0.pf.one())
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> Fq {
        let p = self.0.pf.p();
        let c = (0..self.0.k).map(|_| self.0.pf.from_u64(rng.gen_range(0..p))).collect();
        Fq {
            c: Poly::new(c),
            ctx: self.0.clone(),
        }
    }
}

impl Fq {
    /// The element as an `F_p` value when it lies in the prime field.
    pub fn to_base(&self) -> Option<Fp> {
        match self.c.degree() {
            None => Some(self.ctx.pf.zero()),
            Some(0) => Some(self.c.coeffs()[0]),
            _ => None,
        }
    }

    fn order(&self) -> u64 {
        self.ctx.pf.p().pow(self.ctx.k as u32)
    }

    /// Tonelli-Shanks; the non-residue is found by scanning `t + j`.
    pub fn sqrt(&self) -> Option<Fq> {
        if Field::is_zero(self) {
            return Some(self.clone());
        }
        let q = self.order();
        if !self.pow((q - 1) / 2).is_one() {
            return None;
        }
        let mut s = 0;
        let mut odd = q - 1;
        while odd.is_multiple_of(2) {
            odd /= 2;
            s += 1;
        }
        let pf = &self.ctx.pf;
        let z = (0..pf.p())
            .flat_map(|j| {
                [
                    self.from_i64_like(j as i64),
                    Fq {
                        c: Poly::new(vec![pf.from_u64(j), pf.one()]).rem(&self.ctx.m),
                        ctx: self.ctx.clone(),
                    },
                ]
            })
            .find(|z| !Field::is_zero(z) && !z.pow((q - 1) / 2).is_one())?;
        let mut m = s;
        let mut c = z.pow(odd);
        let mut t = self.pow(odd);
        let mut r = self.pow(odd.div_ceil(2));
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = t2.clone() * t2;
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..m - i - 1 {
                b = b.clone() * b;
            }
            m = i;
            c = b.clone() * b.clone();
            t = t * c.clone();
            r = r * b;
        }
        Some(r)
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.coeffs().iter().map(|x| x.value().to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Add for Fq {
    type Output = Fq;
    fn add(self, o: Fq) -> Fq {
        Fq {
            c: &self.c + &o.c,
            ctx: self.ctx,
        }
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(self, o: Fq) -> Fq {
        Fq {
            c: &self.c - &o.c,
            ctx: self.ctx,
        }
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, o: Fq) -> Fq {
        Fq {
            c: mulmod(&self.c, &o.c, &self.ctx.m),
            ctx: self.ctx,
        }
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        Fq {
            c: -&self.c,
            ctx: self.ctx,
        }
    }
}

impl Field for Fq {
    fn zero_like(&self) -> Self {
        Fq {
            c: Poly::zero(),
            ctx: self.ctx.clone(),
        }
    }
    fn one_like(&self) -> Self {
        Fq {
            c: Poly::constant(self.ctx.pf.one()),
            ctx: self.ctx.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.c.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        Some(Fq {
            c: self.c.inv_mod(&self.ctx.m)?,
            ctx: self.ctx.clone(),
        })
    }
    fn from_i64_like(&self, k: i64) -> Self {
        Fq {
            c: Poly::constant(self.ctx.pf.elem(k)),
            ctx: self.ctx.clone(),
        }
    }
    fn same_domain(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn irreducibility_against_root_search() {
        // in degree 2 and 3, irreducible iff rootless
        let pf = PrimeField::new(5).unwrap();
        for deg in [2usize, 3] {
            for idx in 0..5u64.pow(deg as u32) {
                let mut c: Vec<Fp> = (0..deg).map(|i| pf.from_u64(idx / 5u64.pow(i as u32) % 5)).collect();
                c.push(pf.one());
                let m = Poly::new(c);
                let rootless = (0..5).all(|x| m.eval(&pf.from_u64(x)).value() != 0);
                assert_eq!(is_irreducible(&m), rootless, "{m:?}");
            }
        }
        // (t^2 + 2)^2 over F_5 is rootless but reducible
        let sq = Poly::new(vec![pf.elem(2), pf.zero(), pf.one()]).pow(2);
        assert!(!is_irreducible(&sq));
    }

    #[test]
    fn multiplicative_group_order() {
        let f = ExtField::new(PrimeField::new(7).unwrap(), 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = f.random(&mut rng);
            if !Field::is_zero(&x) {
                assert!(x.pow(f.order() - 1).is_one());
                assert!((x.clone() * x.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn at_least_picks_smallest_degree() {
        let f = ExtField::at_least(PrimeField::new(7).unwrap(), 1000).unwrap();
        assert_eq!(f.degree(), 4);
        let f = ExtField::at_least(PrimeField::new(1009).unwrap(), 1000).unwrap();
        assert_eq!(f.degree(), 1);
    }

    proptest! {
        #[test]
        fn sqrt_squares_back(seed in any::<u64>(), p in prop::sample::select(vec![3u64, 5, 7, 13, 17])) {
            let f = ExtField::new(PrimeField::new(p).unwrap(), 3).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = f.random(&mut rng);
            let sq = x.clone() * x;
            let r = sq.sqrt().unwrap();
            prop_assert_eq!(r.clone() * r, sq);
        }
    }
}
