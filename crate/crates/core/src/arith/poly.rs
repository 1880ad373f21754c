//! Dense univariate polynomials over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, FromRat};
use super::{ArithError, Rat};

/// Coefficients are stored lowest degree first, with no trailing zeros; the
/// zero polynomial is the empty vector and has degree `None`.
#[derive(Clone, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![c.zero_like(); k];
        v.push(c);
        Poly::new(v)
    }

    /// `x - a`.
    pub fn linear_root(a: F) -> Self {
        Poly::new(vec![-a.clone(), a.one_like()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&F> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`, convenient in
    /// inequalities.
    pub fn deg_i(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Divides by the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.from_i64_like(i as i64) * c.clone())
                .collect(),
        )
    }

    /// Euclidean division; panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.leading().unwrap().inv().expect("field element");
        if self.deg_i() < dd as isize {
            return (Poly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![inv.zero_like(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone() * inv.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] = r[i + j].clone() - c.clone() * dc.clone();
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact quotient; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = match self.coeffs.first() {
            Some(c) => Poly::constant(c.one_like()),
            None => return if e == 0 { panic!("0^0") } else { Poly::zero() },
        };
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Extended Euclid: `(g, s, t)` with `g = s*a + t*b`, `g` monic (or zero).
    pub fn xgcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let one = match a.coeffs.first().or(b.coeffs.first()) {
            Some(c) => c.one_like(),
            None => return (Poly::zero(), Poly::zero(), Poly::zero()),
        };
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::constant(one.clone()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(one));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = lc.inv().unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = std::mem::replace(&mut y, r);
        }
        x.monic()
    }

    /// Inverse of `self` modulo `m`, when coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = Poly::xgcd(self, m);
        (g.degree() == Some(0)).then(|| s.rem(m))
    }

    /// `lc(a)^deg(b) * prod_{a(r)=0} b(r)`.
    pub fn resultant(a: &Self, b: &Self) -> F {
        let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
            let z = a.coeffs.first().or(b.coeffs.first()).expect("nonzero input");
            return z.zero_like();
        };
        if db == 0 {
            return b.coeffs[0].pow(da as u64);
        }
        if da == 0 {
            return a.coeffs[0].pow(db as u64);
        }
        // res(a, b) = (-1)^(da db) res(b, a) and res(b, a) = lc(b)^(da - dr) res(b, r).
        let r = a.rem(b);
        let sign = if (da * db) % 2 == 1 {
            -b.coeffs[0].one_like()
        } else {
            b.coeffs[0].one_like()
        };
        if r.is_zero() {
            return b.coeffs[0].zero_like();
        }
        let dr = r.degree().unwrap();
        let lcb = b.leading().unwrap().pow((da - dr) as u64);
        sign * lcb * Poly::resultant(b, &r)
    }

    pub fn is_squarefree(&self) -> bool {
        let g = Poly::gcd(self, &self.derivative());
        g.degree() == Some(0)
    }

    /// Composition `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<Poly<G>> {
        let v: Option<Vec<G>> = self.coeffs.iter().map(f).collect();
        v.map(Poly::new)
    }

    /// Polynomial reversal `x^k f(1/x)` for `k >= deg f`.
    pub fn reverse(&self, k: usize) -> Self {
        assert!(self.deg_i() <= k as isize);
        let zero = match self.coeffs.first() {
            Some(c) => c.zero_like(),
            None => return Poly::zero(),
        };
        let mut v = vec![zero; k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[k - i] = c.clone();
        }
        Poly::new(v)
    }
}

impl Poly<Rat> {
    /// Evaluates a rational polynomial inside any field rationals embed into.
    pub fn eval_in<E: FromRat>(&self, x: &E) -> Option<E> {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + x.from_rat_like(c)?;
        }
        Some(acc)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }
}

/// Monic gcd of two polynomials; `gcd(0, 0) = 0`. Fails when the inputs
/// live over different prime fields.
pub fn poly_gcd<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Result<Poly<F>, ArithError> {
    if let (Some(x), Some(y)) = (a.coeffs.first(), b.coeffs.first()) {
        if !x.same_domain(y) {
            return Err(ArithError::DomainMismatch);
        }
    }
    Ok(Poly::gcd(a, b))
}

/// Discriminant via `disc f = (-1)^(m(m-1)/2) res(f, f') / lc(f)`.
pub fn poly_discriminant(f: &Poly<Rat>) -> Result<Rat, ArithError> {
    let m = match f.degree() {
        Some(m) if m >= 1 => m,
        _ => return Err(ArithError::ConstantPolynomial),
    };
    let res = Poly::resultant(f, &f.derivative());
    let lc = f.leading().unwrap().clone();
    let sign = if (m * (m - 1) / 2) % 2 == 1 {
        -Rat::from_integer(1.into())
    } else {
        Rat::from_integer(1.into())
    };
    Ok(sign * res / lc)
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &Poly<F>) -> Poly<F> {
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut v = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            v[i] = v[i].clone() + c.clone();
        }
        Poly::new(v)
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &Poly<F>) -> Poly<F> {
        self + &(-o)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, o: Poly<F>) -> Poly<F> {
                (&self).$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

impl<F: Field + fmt::Display> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<F: fmt::Debug> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}
