//! Generalized Heisenberg groups `Heis_{2d+1}(Z/nZ)` as `(a, b, c)` triples,
//! the `(Z/nZ)^x` twist modelling the `mu_n` coefficients, and the order of
//! `GSp_{2g}(Z/nZ)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::int::factor_u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeisError {
    #[error("invalid group parameters n={n}, d={d}")]
    InvalidParams { n: u64, d: usize },
    #[error("elements come from different groups")]
    Mismatch,
    #[error("twist {t} is not invertible mod {n}")]
    NonInvertibleTwist { t: u64, n: u64 },
    #[error("moduli {p} and {q} are not coprime")]
    NonCoprime { p: u64, q: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HeisGroup {
    pub n: u64,
    pub d: usize,
}

/// The unipotent matrix with first row `(1, a, c)`, middle block the
/// identity and last column `(c, b, 1)^T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeisElement {
    n: u64,
    a: Vec<u64>,
    b: Vec<u64>,
    c: u64,
}

fn dot(a: &[u64], b: &[u64], n: u64) -> u64 {
    a.iter()
        .zip(b)
        .fold(0u128, |s, (&x, &y)| (s + x as u128 * y as u128) % n as u128) as u64
}

impl HeisGroup {
    pub fn new(n: u64, d: usize) -> Result<Self, HeisError> {
        if n < 2 || d < 1 {
            return Err(HeisError::InvalidParams { n, d });
        }
        Ok(HeisGroup { n, d })
    }

    /// `n^(2d+1)`.
    pub fn order(&self) -> BigInt {
        BigInt::from(self.n).pow(2 * self.d as u32 + 1)
    }

    pub fn identity(&self) -> HeisElement {
        HeisElement {
            n: self.n,
            a: vec![0; self.d],
            b: vec![0; self.d],
            c: 0,
        }
    }

    pub fn element(&self, a: &[i64], b: &[i64], c: i64) -> Result<HeisElement, HeisError> {
        if a.len() != self.d || b.len() != self.d {
            return Err(HeisError::Mismatch);
        }
        let r = |x: i64| x.rem_euclid(self.n as i64) as u64;
        Ok(HeisElement {
            n: self.n,
            a: a.iter().map(|&x| r(x)).collect(),
            b: b.iter().map(|&x| r(x)).collect(),
            c: r(c),
        })
    }

    pub fn contains(&self, g: &HeisElement) -> bool {
        g.n == self.n && g.a.len() == self.d
    }

    /// The central element `(0, 0, c)`.
    pub fn embed_center(&self, c: i64) -> HeisElement {
        let mut e = self.identity();
        e.c = c.rem_euclid(self.n as i64) as u64;
        e
    }

    /// Decodes `0 <= k < n^(2d+1)` into an element; enumeration order.
    pub fn element_at(&self, mut k: u64) -> HeisElement {
        let mut e = self.identity();
        let n = self.n;
        for x in e.a.iter_mut().chain(e.b.iter_mut()) {
            *x = k % n;
            k /= n;
        }
        e.c = k % n;
        e
    }

    pub fn elements(&self) -> impl Iterator<Item = HeisElement> + '_ {
        let total = self.n.pow(2 * self.d as u32 + 1);
        (0..total).map(move |k| self.element_at(k))
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> HeisElement {
        let n = self.n;
        HeisElement {
            n,
            a: (0..self.d).map(|_| rng.gen_range(0..n)).collect(),
            b: (0..self.d).map(|_| rng.gen_range(0..n)).collect(),
            c: rng.gen_range(0..n),
        }
    }
}

impl HeisElement {
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn a(&self) -> &[u64] {
        &self.a
    }
    pub fn b(&self) -> &[u64] {
        &self.b
    }
    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn is_identity(&self) -> bool {
        self.c == 0 && self.a.iter().chain(&self.b).all(|&x| x == 0)
    }

    fn same_group(&self, h: &Self) -> Result<(), HeisError> {
        if self.n == h.n && self.a.len() == h.a.len() {
            Ok(())
        } else {
            Err(HeisError::Mismatch)
        }
    }

    /// `(a + a', b + b', c + c' + a.b')`.
    pub fn mul(&self, h: &Self) -> Result<Self, HeisError> {
        self.same_group(h)?;
        let n = self.n;
        Ok(HeisElement {
            n,
            a: self.a.iter().zip(&h.a).map(|(x, y)| (x + y) % n).collect(),
            b: self.b.iter().zip(&h.b).map(|(x, y)| (x + y) % n).collect(),
            c: (self.c + h.c + dot(&self.a, &h.b, n)) % n,
        })
    }

    /// `(-a, -b, -c + a.b)`.
    pub fn inv(&self) -> Self {
        let n = self.n;
        let neg = |x: &u64| (n - x) % n;
        HeisElement {
            n,
            a: self.a.iter().map(neg).collect(),
            b: self.b.iter().map(neg).collect(),
            c: (n - self.c + dot(&self.a, &self.b, n)) % n,
        }
    }

    /// `g h g^-1 h^-1`.
    pub fn commutator(&self, h: &Self) -> Result<Self, HeisError> {
        self.mul(h)?.mul(&self.inv())?.mul(&h.inv())
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = HeisElement {
            n: self.n,
            a: vec![0; self.a.len()],
            b: vec![0; self.b.len()],
            c: 0,
        };
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same group");
            }
            base = base.mul(&base).expect("same group");
            k >>= 1;
        }
        acc
    }

    /// Least `k >= 1` with `g^k = 1`; a divisor of `n^2`, found among
    /// divisors of `n^2` in increasing order.
    pub fn order(&self) -> u64 {
        let m = self.n * self.n;
        let mut divs: Vec<u64> = (1..=m).filter(|k| m.is_multiple_of(*k)).collect();
        divs.sort_unstable();
        divs.into_iter()
            .find(|&k| self.pow(k).is_identity())
            .expect("g^(n^2) = 1")
    }

    /// The quotient map to `(Z/nZ)^(2d)`, as `a` followed by `b`.
    pub fn project(&self) -> Vec<u64> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    /// `(t a, t b, t^2 c)`.
    pub fn twist(&self, t: u64) -> Result<Self, HeisError> {
        let n = self.n;
        if t.gcd(&n) != 1 {
            return Err(HeisError::NonInvertibleTwist { t, n });
        }
        let t = t % n;
        let m = |x: &u64| ((t as u128 * *x as u128) % n as u128) as u64;
        Ok(HeisElement {
            n,
            a: self.a.iter().map(m).collect(),
            b: self.b.iter().map(m).collect(),
            c: ((t as u128 * t as u128 % n as u128) * self.c as u128 % n as u128) as u64,
        })
    }

    /// Reduction to `Heis(Z/mZ)` for `m | n`.
    pub fn reduce(&self, m: u64) -> Self {
        debug_assert_eq!(self.n % m, 0);
        HeisElement {
            n: m,
            a: self.a.iter().map(|x| x % m).collect(),
            b: self.b.iter().map(|x| x % m).collect(),
            c: self.c % m,
        }
    }

    /// The `(d+2) x (d+2)` unipotent matrix, entries mod `n`.
    pub fn to_matrix(&self) -> Vec<Vec<u64>> {
        let d = self.a.len();
        let mut m = vec![vec![0u64; d + 2]; d + 2];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1 % self.n;
        }
        for i in 0..d {
            m[0][i + 1] = self.a[i];
            m[i + 1][d + 1] = self.b[i];
        }
        m[0][d + 1] = self.c;
        m
    }

    pub fn from_matrix(m: &[Vec<u64>], n: u64) -> Self {
        let d = m.len() - 2;
        HeisElement {
            n,
            a: (0..d).map(|i| m[0][i + 1] % n).collect(),
            b: (0..d).map(|i| m[i + 1][d + 1] % n).collect(),
            c: m[0][d + 1] % n,
        }
    }
}

/// `twist_apply(t, g)` with the unit checked against `n`.
pub fn twist_apply(t: u64, g: &HeisElement) -> Result<HeisElement, HeisError> {
    g.twist(t)
}

/// Splits an element of `Heis(Z/pqZ)` into its reductions mod `p` and `q`.
pub fn crt_split(g: &HeisElement, p: u64, q: u64) -> Result<(HeisElement, HeisElement), HeisError> {
    if p.gcd(&q) != 1 || p * q != g.n {
        return Err(HeisError::NonCoprime { p, q });
    }
    Ok((g.reduce(p), g.reduce(q)))
}

/// Inverse of [`crt_split`].
pub fn crt_combine(x: &HeisElement, y: &HeisElement) -> Result<HeisElement, HeisError> {
    let (p, q) = (x.n, y.n);
    if p.gcd(&q) != 1 || x.a.len() != y.a.len() {
        return Err(HeisError::NonCoprime { p, q });
    }
    let n = p * q;
    let e = (p as i128).extended_gcd(&(q as i128));
    // u = 1 mod p, 0 mod q and w = 0 mod p, 1 mod q
    let u = (e.y * q as i128).rem_euclid(n as i128) as u128;
    let w = (e.x * p as i128).rem_euclid(n as i128) as u128;
    let comb = |s: u64, t: u64| ((s as u128 * u + t as u128 * w) % n as u128) as u64;
    Ok(HeisElement {
        n,
        a: x.a.iter().zip(&y.a).map(|(&s, &t)| comb(s, t)).collect(),
        b: x.b.iter().zip(&y.b).map(|(&s, &t)| comb(s, t)).collect(),
        c: comb(x.c, y.c),
    })
}

/// `|GSp_2g(Z/nZ)|`, multiplicative over the prime powers of `n`:
/// `|GSp_2g(F_p)| = (p-1) p^(g^2) prod_{i=1..g} (p^(2i) - 1)`, and each
/// further power of `p` multiplies by `p^dim` with `dim = g(2g+1) + 1`.
pub fn gsp_order(g: u32, n: u64) -> BigInt {
    assert!(g >= 1 && n >= 2, "gsp_order needs g >= 1, n >= 2");
    let dim = g * (2 * g + 1) + 1;
    let mut total = BigInt::one();
    for (p, k) in factor_u64(n) {
        let p = BigInt::from(p);
        let mut o = (&p - 1u32) * Pow::pow(&p, g * g);
        for i in 1..=g {
            o *= Pow::pow(&p, 2 * i) - 1u32;
        }
        o *= Pow::pow(&p, (k - 1) * dim);
        total *= o;
    }
    total
}

/// Structural facts about one group, checked exhaustively or by sampling.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub n: u64,
    pub d: usize,
    pub exhaustive: bool,
    #[serde(serialize_with = "crate::ser::big")]
    pub order: BigInt,
    pub counted_order: Option<u64>,
    pub exponent: u64,
    pub center_order: Option<u64>,
    pub center_cyclic: bool,
    pub exact_sequence: bool,
    pub associativity: bool,
    pub identity_and_inverse: bool,
    pub twist_automorphism: bool,
    pub twist_composition: bool,
    pub commutators_central: bool,
    pub crt: Option<bool>,
    pub samples: usize,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        let odd_exp = self.n.is_multiple_of(2) || self.exponent == self.n;
        self.center_cyclic
            && self.exact_sequence
            && self.associativity
            && self.identity_and_inverse
            && self.twist_automorphism
            && self.twist_composition
            && self.commutators_central
            && self.crt != Some(false)
            && odd_exp
            && self.counted_order.is_none_or(|c| BigInt::from(c) == self.order)
    }
}

fn units(n: u64) -> Vec<u64> {
    (1..n).filter(|t| t.gcd(&n) == 1).collect()
}

fn is_central(g: &HeisElement) -> bool {
    g.a.iter().chain(&g.b).all(|&x| x == 0)
}

/// Checks group axioms, exponent, centre, exactness of
/// `0 -> Z/n -> Heis -> (Z/n)^(2d) -> 0`, the twist action and (for
/// composite squarefree-split `n`) the CRT decomposition.
pub fn check_axioms<R: Rng>(
    grp: HeisGroup,
    exhaustive: bool,
    samples: usize,
    rng: &mut R,
) -> AxiomReport {
    let n = grp.n;
    let e = grp.identity();
    let us = units(n);
    let mut associativity = true;
    let mut identity_and_inverse = true;
    let mut twist_automorphism = true;
    let mut twist_composition = true;
    let mut commutators_central = true;
    let mut exponent = 1u64;
    let (counted_order, center_order, exact_sequence, n_checked);

    let check_pair = |g: &HeisElement, h: &HeisElement, ok_t: &mut bool, ok_c: &mut bool| {
        let gh = g.mul(h).unwrap();
        for &t in &us {
            if gh.twist(t).unwrap() != g.twist(t).unwrap().mul(&h.twist(t).unwrap()).unwrap() {
                *ok_t = false;
            }
        }
        if !is_central(&g.commutator(h).unwrap()) {
            *ok_c = false;
        }
    };

    if exhaustive {
        let els: Vec<HeisElement> = grp.elements().collect();
        counted_order = Some(els.len() as u64);
        let mut centre = 0u64;
        for g in &els {
            if g.mul(&e).unwrap() != *g || e.mul(g).unwrap() != *g || !g.mul(&g.inv()).unwrap().is_identity() {
                identity_and_inverse = false;
            }
            exponent = exponent.lcm(&g.order());
            if els.iter().all(|h| g.mul(h).unwrap() == h.mul(g).unwrap()) {
                if !is_central(g) {
                    commutators_central = false;
                }
                centre += 1;
            }
            for h in &els {
                let gh = g.mul(h).unwrap();
                for k in &els {
                    if gh.mul(k).unwrap() != g.mul(&h.mul(k).unwrap()).unwrap() {
                        associativity = false;
                    }
                }
            }
        }
        // pair checks over all pairs are cheap next to the triple loop
        for g in &els {
            for h in &els {
                check_pair(g, h, &mut twist_automorphism, &mut commutators_central);
            }
        }
        center_order = Some(centre);
        // kernel of project = image of embed_center; project is onto
        let kernel: Vec<&HeisElement> = els.iter().filter(|g| g.project().iter().all(|&x| x == 0)).collect();
        let image: Vec<HeisElement> = (0..n as i64).map(|c| grp.embed_center(c)).collect();
        let mut proj: Vec<Vec<u64>> = els.iter().map(|g| g.project()).collect();
        proj.sort();
        proj.dedup();
        let distinct_image = {
            let mut v = image.clone();
            v.sort_by_key(|g| g.c);
            v.dedup();
            v.len() as u64 == n
        };
        exact_sequence = distinct_image
            && kernel.len() as u64 == n
            && image.iter().all(|g| kernel.contains(&g))
            && proj.len() as u64 == n.pow(2 * grp.d as u32);
        n_checked = els.len() * els.len() * els.len();
    } else {
        counted_order = None;
        center_order = None;
        let mut exact = true;
        for _ in 0..samples {
            let g = grp.random(rng);
            let h = grp.random(rng);
            let k = grp.random(rng);
            if g.mul(&h).unwrap().mul(&k).unwrap() != g.mul(&h.mul(&k).unwrap()).unwrap() {
                associativity = false;
            }
            if g.mul(&e).unwrap() != g || !g.mul(&g.inv()).unwrap().is_identity() {
                identity_and_inverse = false;
            }
            exponent = exponent.lcm(&g.order());
            check_pair(&g, &h, &mut twist_automorphism, &mut commutators_central);
            // project is a homomorphism and central elements commute with g
            let pg: Vec<u64> = g.project().iter().zip(h.project()).map(|(x, y)| (x + y) % n).collect();
            if g.mul(&h).unwrap().project() != pg {
                exact = false;
            }
            let z = grp.embed_center(k.c as i64);
            if z.mul(&g).unwrap() != g.mul(&z).unwrap() || z.project().iter().any(|&x| x != 0) {
                exact = false;
            }
        }
        exact_sequence = exact;
        n_checked = samples;
    }

    for &s in &us {
        for &t in &us {
            let g = grp.random(rng);
            if g.twist(s).unwrap().twist(t).unwrap() != g.twist((s * t) % n).unwrap() {
                twist_composition = false;
            }
        }
    }

    // the centre {(0,0,c)} is generated by (0,0,1), of order n
    let center_cyclic = grp.embed_center(1).order() == n
        && center_order.is_none_or(|c| c == n);

    let crt = composite_split(n).map(|(p, q)| {
        let gp = HeisGroup::new(p, grp.d).unwrap();
        let gq = HeisGroup::new(q, grp.d).unwrap();
        let roundtrip = |g: &HeisElement| {
            let (x, y) = crt_split(g, p, q).unwrap();
            crt_combine(&x, &y).unwrap() == *g
        };
        let mult = |g: &HeisElement, h: &HeisElement| {
            let (x, y) = crt_split(&g.mul(h).unwrap(), p, q).unwrap();
            let (x1, y1) = crt_split(g, p, q).unwrap();
            let (x2, y2) = crt_split(h, p, q).unwrap();
            x == x1.mul(&x2).unwrap() && y == y1.mul(&y2).unwrap()
        };
        let bijective = if grp.order() <= BigInt::from(100_000u32) {
            let mut seen = std::collections::HashSet::new();
            grp.elements().all(|g| roundtrip(&g) && seen.insert(crt_split(&g, p, q).unwrap()))
                && BigInt::from(seen.len()) == gp.order() * gq.order()
        } else {
            (0..samples.max(1)).all(|_| roundtrip(&grp.random(rng)))
        };
        bijective && (0..samples.max(1)).all(|_| mult(&grp.random(rng), &grp.random(rng)))
    });

    AxiomReport {
        n,
        d: grp.d,
        exhaustive,
        order: grp.order(),
        counted_order,
        exponent,
        center_order,
        center_cyclic,
        exact_sequence,
        associativity,
        identity_and_inverse,
        twist_automorphism,
        twist_composition,
        commutators_central,
        crt,
        samples: n_checked,
    }
}

/// `n = p q` with `gcd(p, q) = 1`, `p` the full power of the smallest prime.
fn composite_split(n: u64) -> Option<(u64, u64)> {
    let f = factor_u64(n);
    if f.len() < 2 {
        return None;
    }
    let p = f[0].0.pow(f[0].1);
    Some((p, n / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn matmul(x: &[Vec<u64>], y: &[Vec<u64>], n: u64) -> Vec<Vec<u64>> {
        let k = x.len();
        (0..k)
            .map(|i| (0..k).map(|j| (0..k).map(|l| x[i][l] * y[l][j]).sum::<u64>() % n).collect())
            .collect()
    }

    #[test]
    fn product_examples_match_matrix_oracle() {
        let g = HeisGroup::new(3, 1).unwrap();
        let x = g.element(&[1], &[0], 0).unwrap();
        let y = g.element(&[0], &[1], 0).unwrap();
        let xy = x.mul(&y).unwrap();
        assert_eq!(xy, g.element(&[1], &[1], 1).unwrap());
        assert_eq!(HeisElement::from_matrix(&matmul(&x.to_matrix(), &y.to_matrix(), 3), 3), xy);
        let z = g.element(&[2], &[2], 0).unwrap();
        assert!(xy.mul(&z).unwrap().is_identity());
        assert_eq!(xy.inv(), z);
        assert_eq!(x.commutator(&y).unwrap(), g.embed_center(1));
        assert_eq!(x.order(), 3);
    }

    #[test]
    fn matrix_oracle_exhaustive_small() {
        for (n, d) in [(3u64, 1usize), (2, 1), (3, 2)] {
            let g = HeisGroup::new(n, d).unwrap();
            let els: Vec<_> = g.elements().collect();
            for (i, x) in els.iter().enumerate() {
                let y = &els[(i * 7 + 3) % els.len()];
                let m = matmul(&x.to_matrix(), &y.to_matrix(), n);
                assert_eq!(HeisElement::from_matrix(&m, n), x.mul(y).unwrap());
            }
        }
    }

    #[test]
    fn twist_example_and_errors() {
        let g = HeisGroup::new(5, 1).unwrap();
        let x = g.element(&[1], &[1], 1).unwrap();
        assert_eq!(twist_apply(2, &x).unwrap(), g.element(&[2], &[2], 4).unwrap());
        assert_eq!(twist_apply(1, &x).unwrap(), x);
        assert!(twist_apply(5, &x).is_err());
        let h = HeisGroup::new(3, 1).unwrap().identity();
        assert_eq!(x.mul(&h), Err(HeisError::Mismatch));
    }

    #[test]
    fn group_order_formula() {
        assert_eq!(HeisGroup::new(3, 1).unwrap().order(), BigInt::from(27));
        assert_eq!(HeisGroup::new(3, 2).unwrap().order(), BigInt::from(243));
        assert_eq!(HeisGroup::new(2, 1).unwrap().order(), BigInt::from(8));
    }

    #[test]
    fn kernel_of_projection_has_order_n() {
        let g = HeisGroup::new(5, 1).unwrap();
        assert_eq!(g.elements().filter(|x| x.project() == vec![0, 0]).count(), 5);
    }

    #[test]
    fn crt_roundtrip_exhaustive_15() {
        let g = HeisGroup::new(15, 1).unwrap();
        assert!(crt_split(&g.identity(), 3, 5).unwrap().0.is_identity());
        for x in g.elements() {
            let (p, q) = crt_split(&x, 3, 5).unwrap();
            assert_eq!(crt_combine(&p, &q).unwrap(), x);
        }
        assert!(crt_split(&HeisGroup::new(9, 1).unwrap().identity(), 3, 3).is_err());
    }

    #[test]
    fn even_n_has_larger_exponent() {
        // (1,1,0)^2 = (2,2,1) in Heis_3(Z/2Z) = (0,0,1), so the exponent is 4
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = check_axioms(HeisGroup::new(2, 1).unwrap(), true, 0, &mut rng);
        assert_eq!(r.exponent, 4);
        assert!(r.all_pass());
    }

    /// Brute force over all 2x2 matrices: `M^T J M = m J` for a unit `m`.
    fn gsp2_brute(n: u64) -> u64 {
        let mut count = 0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        // for 2x2 matrices M^T J M = det(M) J
                        let det = (a * d + n * n - b * c % n) % n;
                        if det.gcd(&n) == 1 {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    /// Backtracking over columns of a 4x4 matrix mod the prime `p`:
    /// `omega(M e_i, M e_j) = m omega(e_i, e_j)` for a fixed multiplier `m`.
    fn gsp4_brute(p: u64) -> u64 {
        // omega(x, y) = x0 y2 + x1 y3 - x2 y0 - x3 y1
        let omega = |x: &[u64; 4], y: &[u64; 4]| {
            (x[0] * y[2] + x[1] * y[3] + 2 * p * p - x[2] * y[0] - x[3] * y[1]) % p
        };
        let std = |i: usize, j: usize| -> u64 {
            match (i, j) {
                (0, 2) | (1, 3) => 1,
                (2, 0) | (3, 1) => p - 1,
                _ => 0,
            }
        };
        let vecs: Vec<[u64; 4]> = (0..p.pow(4))
            .map(|k| [k % p, k / p % p, k / p / p % p, k / p / p / p % p])
            .collect();
        fn rec(
            cols: &mut Vec<[u64; 4]>,
            m: u64,
            p: u64,
            vecs: &[[u64; 4]],
            omega: &dyn Fn(&[u64; 4], &[u64; 4]) -> u64,
            std: &dyn Fn(usize, usize) -> u64,
        ) -> u64 {
            let j = cols.len();
            if j == 4 {
                return 1;
            }
            let mut total = 0;
            for v in vecs {
                if (0..j).all(|i| omega(&cols[i], v) == m * std(i, j) % p) {
                    cols.push(*v);
                    total += rec(cols, m, p, vecs, omega, std);
                    cols.pop();
                }
            }
            total
        }
        (1..p).map(|m| rec(&mut Vec::new(), m, p, &vecs, &omega, &std)).sum()
    }

    #[test]
    fn gsp_order_against_brute_force() {
        assert_eq!(gsp_order(1, 3), BigInt::from(gsp2_brute(3)));
        assert_eq!(gsp_order(1, 3), BigInt::from(48));
        assert_eq!(gsp_order(1, 2), BigInt::from(gsp2_brute(2)));
        assert_eq!(gsp_order(1, 2), BigInt::from(6));
        assert_eq!(gsp_order(1, 4), BigInt::from(gsp2_brute(4)));
        assert_eq!(gsp_order(1, 6), BigInt::from(gsp2_brute(6)));
        assert_eq!(gsp_order(2, 3), BigInt::from(gsp4_brute(3)));
        assert_eq!(gsp_order(2, 3), BigInt::from(103_680));
    }
}
