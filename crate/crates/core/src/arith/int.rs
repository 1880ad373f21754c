//! Integer number theory: primality, effort-bounded factorization, squarefree
//! parts and the Jacobi symbol.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;

/// Miller–Rabin bases that are deterministic for every `u64`.
const U64_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Rounds used for integers above `2^64`: the first 24 primes as bases.
pub const BIG_MR_ROUNDS: usize = 24;

const TRIAL_BOUND: u64 = 10_000;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &U64_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &U64_BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn small_primes(bound: u64) -> Vec<u64> {
    let b = bound as usize;
    let mut sieve = vec![true; b + 1];
    sieve[0] = false;
    if b >= 1 {
        sieve[1] = false;
    }
    let mut i = 2;
    while i * i <= b {
        if sieve[i] {
            let mut j = i * i;
            while j <= b {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=b).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// Primality of an arbitrary integer: deterministic below `2^64`,
/// Miller–Rabin with [`BIG_MR_ROUNDS`] fixed prime bases above.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n = n.magnitude();
    for p in small_primes(100).into_iter().take(BIG_MR_ROUNDS) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for a in small_primes(100).into_iter().take(BIG_MR_ROUNDS) {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Result of [`factor_int`]: prime factors of `|m|` in increasing order plus
/// an optional composite cofactor left over when the effort bound ran out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigInt, u32)>,
    pub residual: Option<BigInt>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.residual.is_none()
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Product of the listed factors (and the residual, if any).
    pub fn product(&self) -> BigInt {
        let mut acc = self.residual.clone().unwrap_or_else(BigInt::one);
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        acc
    }

    fn push(&mut self, p: BigInt) {
        match self.factors.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += 1,
            None => self.factors.push((p, 1)),
        }
    }
}

/// Work budget for [`factor_int`]: the total number of Pollard–Brent
/// iterations allowed across all cofactors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget(pub u64);

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget(2_000_000)
    }
}

fn brent_u64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let (mut x, mut y, mut q, mut g) = (2u64, 2u64, 1u64, 1u64);
    let mut r = 1u64;
    let m = 64u64;
    let mut ys = 0;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += m;
            let spent = m.min(r);
            if *budget < spent {
                return None;
            }
            *budget -= spent;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn brent_big(n: &BigUint, c: u64, budget: &mut u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut x = BigUint::from(2u32);
    let mut y = x.clone();
    let mut g = BigUint::one();
    let mut q = BigUint::one();
    let mut ys = y.clone();
    let mut r = 1u64;
    let m = 64u64;
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (q * absdiff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += m;
            let spent = m.min(r);
            if *budget < spent {
                return None;
            }
            *budget -= spent;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = absdiff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

/// Splits a composite `n` (no small factors) into a nontrivial divisor.
fn split(n: &BigInt, budget: &mut u64) -> Option<BigInt> {
    let r = n.sqrt();
    if &(&r * &r) == n {
        return Some(r);
    }
    for c in 1..40u64 {
        if *budget == 0 {
            return None;
        }
        let found = match n.to_u64() {
            Some(small) => brent_u64(small, c, budget).map(BigInt::from),
            None => brent_big(n.magnitude(), c, budget).map(BigInt::from),
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Factors `|m|` by trial division followed by Pollard–Brent rho, giving up
/// (with a composite residual) once `budget` iterations are spent.
pub fn factor_int(m: &BigInt, budget: FactorBudget) -> Result<Factorization, ArithError> {
    if m.is_zero() {
        return Err(ArithError::Zero("factor_int"));
    }
    let mut out = Factorization {
        factors: Vec::new(),
        residual: None,
    };
    let mut n = m.abs();
    for p in small_primes(TRIAL_BOUND) {
        if n.is_one() {
            break;
        }
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        while (&n % &bp).is_zero() {
            n /= &bp;
            out.push(bp.clone());
        }
    }
    let mut stack = Vec::new();
    if !n.is_one() {
        stack.push(n);
    }
    let mut left = budget.0;
    let mut residual = BigInt::one();
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if c < BigInt::from(TRIAL_BOUND * TRIAL_BOUND) || is_probable_prime(&c) {
            out.push(c);
            continue;
        }
        match split(&c, &mut left) {
            Some(d) => {
                let e = &c / &d;
                stack.push(d);
                stack.push(e);
            }
            None => residual *= c,
        }
    }
    out.factors.sort();
    if !residual.is_one() {
        out.residual = Some(residual);
    }
    Ok(out)
}

/// Complete factorization of a word-sized integer (always succeeds).
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let f = factor_int(&BigInt::from(n.max(1)), FactorBudget(u64::MAX)).expect("nonzero");
    f.factors
        .into_iter()
        .map(|(p, e)| (p.to_u64().expect("fits"), e))
        .collect()
}

/// Writes `m = d * s^2` with `d` squarefree and `sign(d) = sign(m)`.
pub fn squarefree_part(m: &BigInt, budget: FactorBudget) -> Result<(BigInt, BigInt), ArithError> {
    if m.is_zero() {
        return Err(ArithError::Zero("squarefree_part"));
    }
    let f = factor_int(m, budget)?;
    if let Some(r) = f.residual {
        return Err(ArithError::IncompleteFactorization(r));
    }
    let mut d = if m.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut s = BigInt::one();
    for (p, e) in f.factors {
        if e % 2 == 1 {
            d *= &p;
        }
        s *= num_traits::pow(p, (e / 2) as usize);
    }
    Ok((d, s))
}

/// Jacobi symbol `(a / m)` for odd positive `m`.
pub fn jacobi(a: &BigInt, m: &BigInt) -> Result<i32, ArithError> {
    if m.is_even() || !m.is_positive() {
        return Err(ArithError::EvenModulus(m.clone()));
    }
    let mut a = a.mod_floor(m);
    let mut n = m.clone();
    let mut t = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { t } else { 0 })
}

/// Exponent of the prime `p` in `m` (`m != 0`).
pub fn valuation(m: &BigInt, p: &BigInt) -> u32 {
    debug_assert!(!m.is_zero());
    let mut m = m.clone();
    let mut v = 0;
    while (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

/// Exact integer `k`-th root of `m`, if one exists (sign-aware for odd `k`).
pub fn exact_root(m: &BigInt, k: u32) -> Option<BigInt> {
    if m.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-m, k).map(|r| -r);
    }
    let r = m.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *m {
        Some(r)
    } else {
        None
    }
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    small_primes(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn fac(xs: &[(i64, u32)]) -> Vec<(BigInt, u32)> {
        xs.iter().map(|&(p, e)| (b(p), e)).collect()
    }

    #[test]
    fn factor_examples() {
        let f = factor_int(&b(144), FactorBudget::default()).unwrap();
        assert_eq!(f.factors, fac(&[(2, 4), (3, 2)]));
        let f = factor_int(&b(7991), FactorBudget::default()).unwrap();
        assert_eq!(f.factors, fac(&[(61, 1), (131, 1)]));
        let f = factor_int(&b(1), FactorBudget::default()).unwrap();
        assert!(f.factors.is_empty() && f.is_complete());
        assert!(factor_int(&b(0), FactorBudget::default()).is_err());
    }

    #[test]
    fn factor_large_semiprime_and_budget_exhaustion() {
        // 1000000007 * 998244353
        let n = b(1_000_000_007) * b(998_244_353);
        let f = factor_int(&n, FactorBudget::default()).unwrap();
        assert_eq!(f.factors, fac(&[(998_244_353, 1), (1_000_000_007, 1)]));
        let f = factor_int(&n, FactorBudget(0)).unwrap();
        assert_eq!(f.residual, Some(n.clone()));
        assert_eq!(f.product(), n);
    }

    #[test]
    fn squarefree_examples() {
        let bd = FactorBudget::default();
        assert_eq!(squarefree_part(&b(12), bd).unwrap(), (b(3), b(2)));
        assert_eq!(squarefree_part(&b(-95), bd).unwrap(), (b(-95), b(1)));
        assert_eq!(squarefree_part(&b(4096), bd).unwrap(), (b(1), b(64)));
        assert!(squarefree_part(&b(0), bd).is_err());
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(&b(2), &b(7)).unwrap(), 1);
        assert_eq!(jacobi(&b(0), &b(9)).unwrap(), 0);
        assert_eq!(jacobi(&b(1), &b(15)).unwrap(), 1);
        assert!(jacobi(&b(3), &b(8)).is_err());
    }

    #[test]
    fn jacobi_matches_euler_criterion_for_primes() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            for a in 0..p {
                let e = powmod(a, (p - 1) / 2, p);
                let want = if a == 0 { 0 } else if e == 1 { 1 } else { -1 };
                assert_eq!(jacobi(&b(a as i64), &b(p as i64)).unwrap(), want);
            }
        }
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let ps = small_primes(5000);
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), ps.binary_search(&n).is_ok(), "{n}");
        }
        // 2^61 - 1 is prime; 2^61 + 1 is divisible by 3.
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64((1 << 61) + 1));
        let m127 = (BigInt::one() << 127) - 1;
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&(&m127 * b(3))));
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(m in 1i64..2_000_000_000_000) {
            let f = factor_int(&b(m), FactorBudget::default()).unwrap();
            prop_assert!(f.is_complete());
            prop_assert_eq!(f.product(), b(m));
            for (p, _) in &f.factors {
                prop_assert!(is_probable_prime(p));
            }
        }

        #[test]
        fn squarefree_roundtrip(m in -1_000_000_000i64..1_000_000_000) {
            prop_assume!(m != 0);
            let (d, s) = squarefree_part(&b(m), FactorBudget::default()).unwrap();
            prop_assert_eq!(&d * &s * &s, b(m));
            let fd = factor_int(&d, FactorBudget::default()).unwrap();
            prop_assert!(fd.factors.iter().all(|(_, e)| *e == 1));
        }
    }
}
