//! The Weil pairing on `J[n](F_p)` for `p = 1 mod n`, from Miller functions
//! evaluated at randomized divisors with disjoint supports.

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{int::valuation, ExtField, Field, Fp, Fq, Poly, PrimeField};
use crate::jacobian::count::{enumerate_reduced_divisors, jacobian_order_mod_p};
use crate::jacobian::torsion::is_independent;
use crate::jacobian::{HyperellipticCurve, Jacobian, JacobianError, MillerFunction, Mumford};

/// Representatives are drawn over the smallest `F_(p^k)` of at least this
/// size, so that random supports rarely meet the Miller functions' zeros.
pub const MIN_FIELD_SIZE: u64 = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("p = {p} is not 1 mod n = {n}")]
    PrimeNotOneModN { p: u64, n: u64 },
    #[error("input class is not killed by n")]
    NotTorsion,
    #[error("randomization budget of {0} attempts exhausted")]
    BudgetExhausted(usize),
    #[error("{0} combinations exceed the enumeration budget")]
    TooManyCombinations(u128),
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
}

/// A degree-zero divisor `plus - minus + (deg minus - deg plus) oo` over
/// the working extension; fully affine when the degrees agree.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineRep {
    pub plus: Mumford<Fq>,
    pub minus: Mumford<Fq>,
}

impl AffineRep {
    pub fn is_affine(&self) -> bool {
        self.plus.degree() == self.minus.degree()
    }

    fn supports(&self) -> [&Poly<Fq>; 2] {
        [self.plus.u(), self.minus.u()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairingValue {
    pub value: u64,
    /// `log_zeta(value)` for the fixed generator `zeta` of `mu_n(F_p)`.
    pub log: u64,
}

/// Pairing computations on one Jacobian over `F_p` with `p = 1 mod n`.
#[derive(Clone, Debug)]
pub struct PairingContext {
    base: Jacobian<Fp>,
    ext: ExtField,
    jac: Jacobian<Fq>,
    pf: PrimeField,
    n: u64,
    zeta: Fp,
    budget: usize,
}

fn coprime<F: Field>(a: &Poly<F>, b: &Poly<F>) -> bool {
    Poly::gcd(a, b).degree() == Some(0)
}

impl PairingContext {
    pub fn new(curve: HyperellipticCurve<Fp>, n: u64) -> Result<Self, PairingError> {
        let base = Jacobian::new(curve)?;
        let p = base.one().modulus();
        if p % n != 1 {
            return Err(PairingError::PrimeNotOneModN { p, n });
        }
        let pf = PrimeField::new(p).map_err(JacobianError::from)?;
        let ext = ExtField::at_least(pf, MIN_FIELD_SIZE).map_err(JacobianError::from)?;
        let jac = Jacobian::new(HyperellipticCurve::new(base.f().map(|c| ext.embed(*c)))?)?;
        // zeta = g^((p-1)/n) for the smallest primitive root g
        let zeta = pf.primitive_root().pow((p - 1) / n);
        Ok(PairingContext {
            base,
            ext,
            jac,
            pf,
            n,
            zeta,
            budget: 200,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn jacobian(&self) -> &Jacobian<Fp> {
        &self.base
    }

    pub fn extension(&self) -> &ExtField {
        &self.ext
    }

    pub fn p(&self) -> u64 {
        self.pf.p()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn zeta(&self) -> Fp {
        self.zeta
    }

    pub fn lift(&self, d: &Mumford<Fp>) -> Mumford<Fq> {
        d.map(|c| self.ext.embed(*c))
    }

    fn random_ext_point<R: Rng>(&self, rng: &mut R) -> Mumford<Fq> {
        loop {
            let x = self.ext.random(rng);
            if let Some(y) = self.jac.f().eval(&x).sqrt() {
                let y = if rng.gen_bool(0.5) { -y } else { y };
                return self.jac.point(&x, &y).unwrap();
            }
        }
    }

    /// A sum of `g` random points over the working extension.
    fn random_ext_class<R: Rng>(&self, rng: &mut R) -> Mumford<Fq> {
        let mut acc = self.jac.zero();
        for _ in 0..self.jac.genus() {
            acc = self.jac.add(&acc, &self.random_ext_point(rng));
        }
        acc
    }

    /// A sum of `g` random `F_p`-points.
    pub fn random_class<R: Rng>(&self, rng: &mut R) -> Mumford<Fp> {
        let p = self.p();
        let mut acc = self.base.zero();
        let mut added = 0;
        while added < self.base.genus() {
            let x = self.pf.from_u64(rng.gen_range(0..p));
            if let Some(y) = self.base.f().eval(&x).sqrt() {
                let y = if rng.gen_bool(0.5) { -y } else { y };
                acc = self.base.add(&acc, &self.base.point(&x, &y).unwrap());
                added += 1;
            }
        }
        acc
    }

    /// A random element of `J(F_p)[n]`, from the `n`-primary part of a
    /// random class; `None` if `n` does not divide `order` or every draw
    /// has trivial `n`-part.
    pub fn random_torsion<R: Rng>(&self, order: &BigInt, rng: &mut R) -> Option<Mumford<Fp>> {
        let n = BigInt::from(self.n);
        let v = valuation(order, &n);
        if v == 0 {
            return None;
        }
        let cofactor = order / num_traits::Pow::pow(&n, v);
        for _ in 0..self.budget {
            let mut q = self.base.mul(&cofactor, &self.random_class(rng));
            if q.is_zero() {
                continue;
            }
            loop {
                let next = self.base.mul(&n, &q);
                if next.is_zero() {
                    return Some(q);
                }
                q = next;
            }
        }
        None
    }

    /// A representative of `[d]` avoiding the supports of `avoid` (and,
    /// when asked, infinity), built as `(d + r) - r` for random `r` over
    /// the working extension.
    pub fn disjoint_representative<R: Rng>(
        &self,
        d: &Mumford<Fp>,
        avoid: &[Mumford<Fq>],
        avoid_infinity: bool,
        rng: &mut R,
    ) -> Result<AffineRep, PairingError> {
        let d = self.lift(d);
        let clear = |u: &Poly<Fq>| avoid.iter().all(|a| coprime(u, a.u()));
        if (!avoid_infinity || d.is_zero()) && clear(d.u()) {
            return Ok(AffineRep {
                plus: d,
                minus: self.jac.zero(),
            });
        }
        for _ in 0..self.budget {
            let r = self.random_ext_class(rng);
            let x = self.jac.add(&d, &r);
            if x.degree() != r.degree() || !coprime(x.u(), r.u()) {
                continue;
            }
            if clear(x.u()) && clear(r.u()) {
                return Ok(AffineRep { plus: x, minus: r });
            }
        }
        Err(PairingError::BudgetExhausted(self.budget))
    }

    /// `f(E)` for a Miller function and a degree-zero divisor.
    fn eval_rep(&self, f: &MillerFunction<Fq>, e: &AffineRep) -> Option<Fq> {
        let a = f.eval_divisor(&e.plus)?;
        let b = f.eval_divisor(&e.minus)?;
        Some(a * b.inv()?)
    }

    /// `f_(n,D)(E)` with `div f_(n,D) = n D - [nD]`; `None` on a support
    /// collision anywhere in the accumulation.
    pub fn miller_eval(&self, d: &Mumford<Fp>, e: &AffineRep) -> Option<Fq> {
        let (f, _) = self.jac.miller(&self.lift(d), self.n);
        self.eval_rep(&f, e)
    }

    /// The function with divisor `n (plus - minus)` for `n`-torsion
    /// `[plus - minus]`: `f_(n,plus) / f_(n,minus)`, since the reduced
    /// representatives of `n plus` and `n minus` coincide.
    fn rep_function(&self, rep: &AffineRep) -> MillerFunction<Fq> {
        let (fp, np) = self.jac.miller(&rep.plus, self.n);
        let (fm, nm) = self.jac.miller(&rep.minus, self.n);
        debug_assert_eq!(np, nm);
        fp.mul(&fm.inv())
    }

    pub fn log(&self, x: Fp) -> Option<u64> {
        let mut acc = self.pf.one();
        for k in 0..self.n {
            if acc == x {
                return Some(k);
            }
            acc = acc * self.zeta;
        }
        None
    }

    /// `e_n(D1, D2) = f_(D1')(D2') / f_(D2')(D1')` for affine disjoint
    /// representatives `D1'`, `D2'`, retried on any collision. Evaluating at
    /// degree-zero divisors leaves no sign factor: the quotient already lies
    /// in `mu_n`.
    pub fn weil_pairing<R: Rng>(
        &self,
        d1: &Mumford<Fp>,
        d2: &Mumford<Fp>,
        rng: &mut R,
    ) -> Result<PairingValue, PairingError> {
        let n = self.n as i64;
        if !self.base.mul_i(n, d1).is_zero() || !self.base.mul_i(n, d2).is_zero() {
            return Err(PairingError::NotTorsion);
        }
        for _ in 0..self.budget {
            let a = self.disjoint_representative(d1, &[], true, rng)?;
            let Ok(b) = self.disjoint_representative(d2, &[a.plus.clone(), a.minus.clone()], true, rng) else {
                continue;
            };
            if a.supports().iter().any(|x| b.supports().iter().any(|y| !coprime(x, y))) {
                continue;
            }
            let fa = self.rep_function(&a);
            let fb = self.rep_function(&b);
            let (Some(num), Some(den)) = (self.eval_rep(&fa, &b), self.eval_rep(&fb, &a)) else {
                continue;
            };
            let e = (num * den.inv().expect("nonzero"))
                .to_base()
                .expect("pairing values lie in F_p");
            let log = self.log(e).expect("pairing values are n-th roots of unity");
            return Ok(PairingValue { value: e.value(), log });
        }
        Err(PairingError::BudgetExhausted(self.budget))
    }

/// The matrix of pairing logs, and independence decided by walking all
    /// `n^k` combinations rather than from the matrix.
    pub fn pairing_profile<R: Rng>(
        &self,
        classes: &[Mumford<Fp>],
        rng: &mut R,
    ) -> Result<PairingProfile, PairingError> {
        let combos = (self.n as u128).checked_pow(classes.len() as u32).unwrap_or(u128::MAX);
        if combos > 1_000_000 {
            return Err(PairingError::TooManyCombinations(combos));
        }
        let k = classes.len();
        let mut logs = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                logs[i][j] = self.weil_pairing(&classes[i], &classes[j], rng)?.log;
            }
        }
        Ok(PairingProfile {
            p: self.p(),
            n: self.n,
            logs,
            independent: is_independent(&self.base, classes, self.n),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingProfile {
    pub p: u64,
    pub n: u64,
    pub logs: Vec<Vec<u64>>,
    pub independent: bool,
}

/// Frobenius on an `F_p`-rational divisor: coefficientwise `x -> x^p`.
pub fn frobenius(d: &Mumford<Fp>) -> Mumford<Fp> {
    let p = d.u().leading().unwrap().modulus();
    d.map(|x| x.pow(p))
}

/// An elliptic curve `y^2 = x^3 + a x + b` over `F_p` whose group of
/// rational points is exactly `(Z/nZ)^2`, found by search; returns the
/// curve and all its classes.
pub fn full_torsion_toy(p: u64, n: u64) -> Option<(HyperellipticCurve<Fp>, Vec<Mumford<Fp>>)> {
    let pf = PrimeField::new(p).ok()?;
    for a in 0..p {
        for b in 0..p {
            let f = Poly::new(vec![pf.from_u64(b), pf.from_u64(a), pf.zero(), pf.one()]);
            let Ok(c) = HyperellipticCurve::new(f) else {
                continue;
            };
            if jacobian_order_mod_p(&c).ok()? != BigInt::from(n * n) {
                continue;
            }
            let jac = Jacobian::new(c.clone()).ok()?;
            let all = enumerate_reduced_divisors(&c);
            if all.iter().all(|d| jac.mul_i(n as i64, d).is_zero()) {
                return Some((c, all));
            }
        }
    }
    None
}
