//! Class groups of imaginary quadratic orders through reduced positive
//! definite binary quadratic forms.

use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::int::factor_u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BqfError {
    #[error("discriminant {0} is not negative and 0 or 1 mod 4")]
    BadDiscriminant(i128),
    #[error("|discriminant| {delta} exceeds the enumeration bound {bound}")]
    TooLarge { delta: i128, bound: u64 },
}

/// `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl Form {
    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn identity(delta: i128) -> Form {
        let b = delta.rem_euclid(2);
        Form {
            a: 1,
            b,
            c: (b * b - delta) / 4,
        }
        .reduce()
    }

    /// The form `(a, b, (b^2 - delta)/(4a))`; `b^2 = delta mod 4a` is required.
    pub fn with(a: i128, b: i128, delta: i128) -> Form {
        debug_assert_eq!((b * b - delta).rem_euclid(4 * a), 0);
        Form {
            a,
            b,
            c: (b * b - delta) / (4 * a),
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a && self.a <= self.c && (self.b >= 0 || (self.b.abs() != self.a && self.a != self.c))
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1
    }

    fn normalize(self) -> Form {
        let Form { a, b, .. } = self;
        if -a < b && b <= a {
            return self;
        }
        let r = Integer::div_floor(&(a - b), &(2 * a));
        let delta = self.discriminant();
        Form::with(a, b + 2 * r * a, delta)
    }

    pub fn reduce(self) -> Form {
        let mut f = self.normalize();
        while f.a > f.c {
            f = Form {
                a: f.c,
                b: -f.b,
                c: f.a,
            }
            .normalize();
        }
        if f.a == f.c && f.b < 0 {
            f.b = -f.b;
        }
        f
    }

    pub fn inverse(&self) -> Form {
        Form {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
        .reduce()
    }

    /// Dirichlet composition followed by reduction.
    pub fn compose(&self, other: &Form) -> Form {
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let s = (f1.b + f2.b) / 2;
        let n = f2.b - s;
        let (d, y1) = if f2.a % f1.a == 0 {
            (f1.a, 0)
        } else {
            let e = f2.a.extended_gcd(&f1.a);
            (e.gcd, e.x)
        };
        let (d1, x2, y2) = if s % d == 0 {
            (d, 0, -1)
        } else {
            let e = s.extended_gcd(&d);
            (e.gcd, e.x, -e.y)
        };
        let v1 = f1.a / d1;
        let v2 = f2.a / d1;
        let r = (y1 * y2 * n - x2 * f2.c).rem_euclid(v1);
        let b3 = f2.b + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (f2.c * d1 + r * (f2.b + v2 * r)) / v1;
        Form { a: a3, b: b3, c: c3 }.reduce()
    }

    pub fn pow(&self, mut e: u128) -> Form {
        let mut acc = Form::identity(self.discriminant());
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&b);
            }
            b = b.compose(&b);
            e >>= 1;
        }
        acc
    }
}

fn check(delta: i128) -> Result<(), BqfError> {
    if delta >= 0 || !matches!(delta.rem_euclid(4), 0 | 1) {
        return Err(BqfError::BadDiscriminant(delta));
    }
    Ok(())
}

/// All primitive reduced forms of discriminant `delta < 0`.
pub fn reduced_forms(delta: i128) -> Result<Vec<Form>, BqfError> {
    check(delta)?;
    let d = i64::try_from(delta).map_err(|_| BqfError::BadDiscriminant(delta))?;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * (a as i128) * (a as i128) <= -delta {
        let four_a = 4 * a;
        let mut b = -a + 1;
        if (b - d).rem_euclid(2) != 0 {
            b += 1;
        }
        // b^2 - delta, updated incrementally modulo 4a
        let mut num = (b as i128 * b as i128 - delta).rem_euclid(four_a as i128) as i64;
        while b <= a {
            if num == 0 {
                let c = (b as i128 * b as i128 - delta) / four_a as i128;
                let f = Form { a: a as i128, b: b as i128, c };
                if c >= a as i128 && f.is_reduced() && f.a.gcd(&f.b).gcd(&c) == 1 {
                    out.push(f);
                }
            }
            // (b + 2)^2 - b^2 = 4b + 4
            num += 4 * b + 4;
            while num >= four_a {
                num -= four_a;
            }
            if num < 0 {
                num += four_a;
            }
            b += 2;
        }
        a += 1;
    }
    Ok(out)
}

/// A finite abelian group given by invariant factors `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants(pub Vec<u64>);

impl Invariants {
    pub fn order(&self) -> u64 {
        self.0.iter().product()
    }

    /// Number of invariant factors divisible by `n`.
    pub fn n_rank(&self, n: u64) -> u32 {
        self.0.iter().filter(|&&d| d % n == 0).count() as u32
    }
}

#[derive(Clone, Debug)]
pub struct ClassGroupBqf {
    pub delta: i128,
    pub forms: Vec<Form>,
    pub invariants: Invariants,
}

impl ClassGroupBqf {
    pub fn class_number(&self) -> u64 {
        self.forms.len() as u64
    }

    pub fn n_rank(&self, n: u64) -> u32 {
        self.invariants.n_rank(n)
    }
}

/// Enumerates the reduced forms and reads off the group structure from
/// the sizes of `G[p^j]`.
pub fn class_group_bqf(delta: i128, bound: u64) -> Result<ClassGroupBqf, BqfError> {
    check(delta)?;
    if (-delta) as u128 > bound as u128 {
        return Err(BqfError::TooLarge { delta, bound });
    }
    let forms = reduced_forms(delta)?;
    let h = forms.len() as u64;
    let id = Form::identity(delta);
    // rank[p] = [r_1, r_2, ...], r_j = number of cyclic factors of order >= p^j
    let mut ranks: Vec<(u64, Vec<u32>)> = Vec::new();
    for (p, e) in factor_u64(h) {
        let pe = p.pow(e);
        let cofactor = (h / pe) as u128;
        // p-order exponent of each element's p-primary component
        let mut counts: HashMap<u32, u64> = HashMap::new();
        for f in &forms {
            let mut x = f.pow(cofactor);
            let mut j = 0;
            while x != id {
                x = x.pow(p as u128);
                j += 1;
            }
            *counts.entry(j).or_default() += 1;
        }
        let mut r = Vec::new();
        let mut prev = 1u64;
        for j in 1..=e {
            let within: u64 = counts.iter().filter(|(&k, _)| k <= j).map(|(_, &c)| c).sum();
            let size = within / (h / pe);
            let mut step = size / prev;
            let mut k = 0;
            while step > 1 {
                step /= p;
                k += 1;
            }
            if k == 0 {
                break;
            }
            r.push(k);
            prev = size;
        }
        ranks.push((p, r));
    }
    let len = ranks.iter().map(|(_, r)| r.first().copied().unwrap_or(0)).max().unwrap_or(0) as usize;
    let mut inv = vec![1u64; len];
    for (p, r) in &ranks {
        // the r_j largest factors pick up one factor p at each level j
        for &rj in r {
            for slot in inv.iter_mut().rev().take(rj as usize) {
                *slot *= p;
            }
        }
    }
    Ok(ClassGroupBqf {
        delta,
        forms,
        invariants: Invariants(inv),
    })
}
