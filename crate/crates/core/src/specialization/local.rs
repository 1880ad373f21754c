//! Local data of a quadratic field at a rational prime: splitting type,
//! valuations of elements at the primes above it, `q`-adic square roots,
//! and local `n`-th power tests.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::quad::{QuadElt, QuadField};
use crate::arith::{jacobi, valuation, Field, Fp, Int, PrimeField, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl Splitting {
    /// Residue degree of each prime above `q`.
    pub fn residue_degree(self) -> u32 {
        match self {
            Splitting::Inert => 2,
            _ => 1,
        }
    }
}

pub fn splitting(k: &QuadField, q: &Int) -> Splitting {
    if k.discriminant().mod_floor(q).is_zero() {
        return Splitting::Ramified;
    }
    if *q == BigInt::from(2) {
        return if k.d().mod_floor(&BigInt::from(8)) == BigInt::one() {
            Splitting::Split
        } else {
            Splitting::Inert
        };
    }
    match jacobi(k.d(), q).expect("odd prime") {
        1 => Splitting::Split,
        _ => Splitting::Inert,
    }
}

/// A prime of `L` above `q`. Split primes carry the residue of the image
/// of `sqrt d` that cuts them out: modulo `q` (the smaller of the two) for
/// odd `q`, modulo 4 for `q = 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Place {
    pub q: String,
    pub root: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceValuation {
    pub place: Place,
    pub splitting: Splitting,
    pub v: i64,
}

fn modpow(b: &Int, e: &Int, m: &Int) -> Int {
    b.mod_floor(m).modpow(e, m)
}

fn modinv(a: &Int, m: &Int) -> Option<Int> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Square root of `a` modulo an odd prime `p`, when `a` is a nonzero square.
fn sqrt_mod_prime(a: &Int, p: &Int) -> Option<Int> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return None;
    }
    let one = Int::one();
    let half = (p - &one) >> 1;
    if modpow(&a, &half, p) != one {
        return None;
    }
    let mut q = p - &one;
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = Int::from(2);
    while modpow(&z, &half, p) == one {
        z += 1;
    }
    let mut m = s;
    let mut c = modpow(&z, &q, p);
    let mut t = modpow(&a, &q, p);
    let mut r = modpow(&a, &((&q + 1u32) >> 1), p);
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = &t2 * &t2 % p;
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..m - i - 1 {
            b = &b * &b % p;
        }
        m = i;
        c = &b * &b % p;
        t = t * &c % p;
        r = r * b % p;
    }
    Some(r)
}

/// The `q`-adic square root of `d` cutting out the first prime above a
/// split `q`, correct modulo `q^prec`.
pub fn qadic_sqrt(d: &Int, q: &Int, prec: u32) -> Option<Int> {
    let two = Int::from(2);
    if *q == two {
        if d.mod_floor(&Int::from(8)) != Int::one() {
            return None;
        }
        // r^2 = d mod 2^(m+1) pins r mod 2^m up to sign; keep r = 1 mod 4
        let mut r = Int::one();
        for m in 3..prec + 2 {
            let modulus = Int::one() << (m + 1);
            if (&r * &r - d).mod_floor(&modulus) != Int::zero() {
                r += Int::one() << (m - 1);
            }
        }
        return Some(r.mod_floor(&(Int::one() << prec.max(1))));
    }
    let r0 = sqrt_mod_prime(d, q)?;
    let mut r = r0.clone().min(q - &r0);
    let mut k = 1u32;
    while k < prec {
        k = (2 * k).min(prec);
        let m = num_traits::pow(q.clone(), k as usize);
        let inv = modinv(&(&r * 2u32), &m)?;
        r = (&r - (&r * &r - d) * inv).mod_floor(&m);
    }
    Some(r.mod_floor(&num_traits::pow(q.clone(), prec as usize)))
}

fn root_label(r: &Int, q: &Int) -> String {
    if *q == BigInt::from(2) {
        r.mod_floor(&BigInt::from(4)).to_string()
    } else {
        r.mod_floor(q).to_string()
    }
}

/// Valuations of `alpha` at the primes above `q`.
pub fn valuations_at(alpha: &QuadElt, k: &QuadField, q: &Int) -> Vec<PlaceValuation> {
    let (u, v, w) = alpha.integral_form();
    let nb = &u * &u - k.d() * &v * &v;
    let vw = valuation(&w, q) as i64;
    let sp = splitting(k, q);
    let place = |root: Option<String>| Place {
        q: q.to_string(),
        root,
    };
    match sp {
        Splitting::Inert => vec![PlaceValuation {
            place: place(None),
            splitting: sp,
            v: valuation(&nb, q) as i64 / 2 - vw,
        }],
        Splitting::Ramified => vec![PlaceValuation {
            place: place(None),
            splitting: sp,
            v: valuation(&nb, q) as i64 - 2 * vw,
        }],
        Splitting::Split => {
            let prec = valuation(&nb, q) + 2;
            let r = qadic_sqrt(k.d(), q, prec).expect("split prime");
            let m = num_traits::pow(q.clone(), prec as usize);
            [r.clone(), -r]
                .into_iter()
                .map(|s| {
                    let x = (&u + &v * &s).mod_floor(&m);
                    PlaceValuation {
                        place: place(Some(root_label(&s, q))),
                        splitting: sp,
                        v: valuation(&x, q) as i64 - vw,
                    }
                })
                .collect()
        }
    }
}

/// `(Z / q^K)[w] / (w^2 - t w - c)`: the completion of the ring of
/// integers above `q`, truncated. For odd `q`, `w = sqrt d`; for `q = 2`
/// and `d = 1 mod 4`, `w = (1 + sqrt d)/2`.
#[derive(Clone, Debug)]
pub struct LocalRing {
    q: u64,
    m: u128,
    t: u128,
    c: u128,
    half: bool,
}

impl LocalRing {
    pub fn new(k: &QuadField, q: u64, prec: u32) -> Self {
        let m = (q as u128).pow(prec);
        assert!(m < 1 << 63, "local precision too large");
        let mb = BigInt::from(m);
        let half = q == 2 && k.half_integral();
        let (t, c) = if half {
            (1, ((k.d() - 1u32) / 4u32).mod_floor(&mb))
        } else {
            (0, k.d().mod_floor(&mb))
        };
        LocalRing {
            q,
            m,
            t,
            c: c.to_u128().unwrap(),
            half,
        }
    }

    pub fn modulus(&self) -> u128 {
        self.m
    }

    fn red(&self, x: &Rat) -> Option<u128> {
        let mb = BigInt::from(self.m);
        let inv = modinv(x.denom(), &mb)?;
        (x.numer() * inv).mod_floor(&mb).to_u128()
    }

    /// Coordinates of a `q`-integral element in the basis `1, w`.
    pub fn embed(&self, x: &QuadElt) -> Option<(u128, u128)> {
        if self.half {
            let a = x.a.clone() - x.b.clone();
            let b = x.b.clone() * Rat::from_integer(2.into());
            Some((self.red(&a)?, self.red(&b)?))
        } else {
            Some((self.red(&x.a)?, self.red(&x.b)?))
        }
    }

    pub fn mul(&self, x: (u128, u128), y: (u128, u128)) -> (u128, u128) {
        let m = self.m;
        let yy = x.1 * y.1 % m;
        (
            (x.0 * y.0 % m + self.c * yy % m) % m,
            (x.0 * y.1 % m + x.1 * y.0 % m + self.t * yy % m) % m,
        )
    }

    pub fn pow(&self, mut x: (u128, u128), mut e: u128) -> (u128, u128) {
        let mut acc = (1 % self.m, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, x: (u128, u128)) -> bool {
        let q = self.q as u128;
        let (a, b) = (x.0 % q, x.1 % q);
        // norm of a + b w
        let n = (a * a + self.t * a % q * b + (q - self.c % q) * b % q * b) % q;
        n != 0
    }

    /// The `n`-th powers of units, by enumeration.
    pub fn nth_powers(&self, n: u64) -> HashSet<(u128, u128)> {
        let mut out = HashSet::new();
        for a in 0..self.m {
            for b in 0..self.m {
                if self.is_unit((a, b)) {
                    out.insert(self.pow((a, b), n as u128));
                }
            }
        }
        out
    }
}

/// A local uniformizer at the prime above a non-split `q`.
fn uniformizer(k: &QuadField, sp: Splitting, q: &Int) -> QuadElt {
    match sp {
        Splitting::Inert => k.from_rat(Rat::from_integer(q.clone())),
        Splitting::Ramified if k.d().mod_floor(q).is_zero() => k.sqrt_d(),
        // q = 2, d = 3 mod 4
        _ => k.elt(Rat::one(), Rat::one()),
    }
}

/// `2 v_q(n) + 1`: the precision at which a unit that is an `n`-th power
/// modulo `q^K` is an `n`-th power in the completion.
pub fn hensel_precision(q: u64, n: u64) -> u32 {
    2 * valuation(&BigInt::from(n), &BigInt::from(q)) + 1
}

/// Whether a unit of `Z_q` given modulo `q^prec` is an `n`-th power there.
fn is_power_zq(unit: &Int, q: u64, n: u64, prec: u32) -> bool {
    if q == 2 {
        // n odd: every 2-adic unit is an n-th power
        return true;
    }
    let m = num_traits::pow(BigInt::from(q), prec as usize);
    let phi = &m / q * (q - 1);
    let g = phi.gcd(&BigInt::from(n));
    modpow(unit, &(&phi / g), &m).is_one()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPower {
    pub place: Place,
    pub v: i64,
    pub nth_power: bool,
}

/// For each prime above `q` (`q` of at most 63 bits, `n` odd): the
/// valuation of `alpha` and whether `alpha` is an `n`-th power in the
/// completion there. `prec` overrides the Hensel precision.
pub fn local_nth_power(alpha: &QuadElt, k: &QuadField, q: u64, n: u64, prec: Option<u32>) -> Vec<LocalPower> {
    let prec = prec.unwrap_or_else(|| hensel_precision(q, n));
    let qb = BigInt::from(q);
    let places = valuations_at(alpha, k, &qb);
    let sp = places[0].splitting;
    match sp {
        Splitting::Split => {
            let (u, v, w) = alpha.integral_form();
            let nb = &u * &u - k.d() * &v * &v;
            let rp = valuation(&nb, &qb) + prec + 2;
            let r = qadic_sqrt(k.d(), &qb, rp).unwrap();
            let mfull = num_traits::pow(qb.clone(), rp as usize);
            let m = num_traits::pow(qb.clone(), prec as usize);
            let vw = valuation(&w, &qb);
            let w_unit = &w / num_traits::pow(qb.clone(), vw as usize);
            places
                .into_iter()
                .zip([r.clone(), -r])
                .map(|(pv, s)| {
                    let x = (&u + &v * &s).mod_floor(&mfull);
                    let t = valuation(&x, &qb);
                    let unit = (x / num_traits::pow(qb.clone(), t as usize)) * modinv(&w_unit, &m).unwrap();
                    let ok = pv.v % n as i64 == 0 && is_power_zq(&unit.mod_floor(&m), q, n, prec);
                    LocalPower {
                        place: pv.place,
                        v: pv.v,
                        nth_power: ok,
                    }
                })
                .collect()
        }
        _ => {
            let pv = places.into_iter().next().unwrap();
            let mut ok = pv.v % n as i64 == 0;
            if ok {
                let pi = uniformizer(k, sp, &qb);
                let eps = alpha.clone() * pi.powi(-pv.v).unwrap();
                let ring = LocalRing::new(k, q, prec);
                let e = ring.embed(&eps).expect("unit at a non-split prime is q-integral");
                debug_assert!(ring.is_unit(e));
                ok = if !n.is_multiple_of(q) {
                    residue_power(&ring, k, sp, e, n)
                } else {
                    ring.nth_powers(n).contains(&e)
                };
            }
            vec![LocalPower {
                place: pv.place,
                v: pv.v,
                nth_power: ok,
            }]
        }
    }
}

/// `q` prime to `n`: a unit is an `n`-th power iff its residue is.
fn residue_power(ring: &LocalRing, k: &QuadField, sp: Splitting, e: (u128, u128), n: u64) -> bool {
    let q = ring.q as u128;
    let red = LocalRing::new(k, ring.q, 1);
    let x = (e.0 % q, e.1 % q);
    match sp {
        Splitting::Inert => {
            let order = q * q - 1;
            let g = order.gcd(&(n as u128));
            red.pow(x, order / g) == (1 % q, 0)
        }
        _ if q == 2 => true,
        _ => {
            // sqrt d lies in the prime, so the residue is the rational part
            let order = q - 1;
            let g = order.gcd(&(n as u128));
            red.pow((x.0, 0), order / g).0 == 1
        }
    }
}

/// `g^((p-1)/n)` for the least primitive root `g` of `p = 1 mod n`.
pub fn mu_n_generator(p: u64, n: u64) -> Fp {
    let pf = PrimeField::new(p).expect("prime");
    pf.primitive_root().pow((p - 1) / n)
}

/// Power-residue logs `log_zeta (alpha^((p-1)/n))` of each `alpha` at the
/// two primes above a split `p = 1 mod n`, first prime first. `None`
/// unless every `alpha` is a unit at both.
pub fn power_residue_logs(alphas: &[QuadElt], k: &QuadField, p: u64, n: u64) -> Option<[Vec<u64>; 2]> {
    let pf = PrimeField::new(p).ok()?;
    let r = pf.from_bigint(k.d()).sqrt()?;
    let r = if r.value() * 2 > p { -r } else { r };
    let zeta = mu_n_generator(p, n);
    let log = |c: Fp| {
        let mut acc = pf.one();
        (0..n).find(|_| {
            let hit = acc == c;
            acc = acc * zeta;
            hit
        })
    };
    let mut out = [Vec::new(), Vec::new()];
    for a in alphas {
        let (u, v, w) = a.integral_form();
        let (u, v) = (pf.from_bigint(&u), pf.from_bigint(&v));
        let winv = pf.from_bigint(&w).inv()?;
        for (slot, s) in out.iter_mut().zip([r, -r]) {
            let x = (u + v * s) * winv;
            if x.value() == 0 {
                return None;
            }
            slot.push(log(x.pow((p - 1) / n))?);
        }
    }
    Some(out)
}

/// Exact `n`-th root of `beta` in `L`, found `q`-adically at a split prime
/// where `n`-th roots of units are unique, then checked exactly.
pub fn nth_root(beta: &QuadElt, k: &QuadField, n: u64) -> Option<QuadElt> {
    if beta.is_zero() {
        return Some(beta.clone());
    }
    let (u, v, w) = beta.integral_form();
    let nb = &u * &u - k.d() * &v * &v;
    let bits = u.bits().max(v.bits()).max(w.bits());
    let q = (3u64..)
        .filter(|&q| crate::arith::is_prime_u64(q))
        .filter(|&q| (q - 1).gcd(&n) == 1 && !n.is_multiple_of(q))
        .take(200)
        .map(BigInt::from)
        .find(|q| {
            splitting(k, q) == Splitting::Split && !w.mod_floor(q).is_zero() && !nb.mod_floor(q).is_zero()
        })?;
    let mut target = 64u64;
    while target <= 4 * bits + 256 {
        let prec = (target / q.bits() + 1) as u32;
        let m = num_traits::pow(q.clone(), prec as usize);
        let phi = &m / &q * (&q - 1u32);
        let e = modinv(&BigInt::from(n), &phi)?;
        let r = qadic_sqrt(k.d(), &q, prec)?;
        let winv = modinv(&w, &m)?;
        let plus = modpow(&((&u + &v * &r) * &winv), &e, &m);
        let minus = modpow(&((&u - &v * &r) * &winv), &e, &m);
        let inv2 = modinv(&BigInt::from(2), &m)?;
        let a = ((&plus + &minus) * &inv2).mod_floor(&m);
        let b = ((&plus - &minus) * &inv2 * modinv(&r, &m)?).mod_floor(&m);
        if let (Some(a), Some(b)) = (rational_reconstruction(&a, &m), rational_reconstruction(&b, &m)) {
            let g = k.elt(a, b);
            if g.pow(n) == *beta {
                return Some(g);
            }
        }
        target *= 2;
    }
    None
}

/// `x = r/s mod m` with `|r|, s <= sqrt(m/2)`.
pub fn rational_reconstruction(x: &Int, m: &Int) -> Option<Rat> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut s0, mut s1) = (Int::zero(), Int::one());
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let s2 = &s0 - &qt * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Rat::new(r1, s1))
}
