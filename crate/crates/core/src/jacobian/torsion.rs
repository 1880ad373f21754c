//! Good reduction, exact orders, and discovery of the rational `n`-torsion
//! of the family.

use num_bigint::BigInt;
use serde::Serialize;

use super::cantor::{Jacobian, Mumford};
use super::curve::{Family, HyperellipticCurve};
use super::JacobianError;
use crate::arith::int::factor_u64;
use crate::arith::{is_prime_u64, Fp, Poly, PrimeField, Rat};

fn bad(p: u64, reason: &str) -> JacobianError {
    JacobianError::BadPrime {
        p: BigInt::from(p),
        reason: reason.to_string(),
    }
}

/// Accepts `p` when `p` is an odd prime not dividing `n`, no coefficient
/// denominator, nor the leading coefficient, and `f mod p` is squarefree.
pub fn good_prime(f: &Poly<Rat>, p: u64, n: Option<u64>) -> Result<PrimeField, JacobianError> {
    if p == 2 {
        return Err(bad(p, "characteristic 2"));
    }
    if !is_prime_u64(p) {
        return Err(bad(p, "not prime"));
    }
    if let Some(n) = n {
        if n % p == 0 {
            return Err(bad(p, "p divides n"));
        }
    }
    let pf = PrimeField::new(p)?;
    let fp = f
        .try_map(|c| pf.from_rat(c))
        .ok_or_else(|| bad(p, "p divides a coefficient denominator"))?;
    if fp.degree() != f.degree() {
        return Err(bad(p, "leading coefficient vanishes mod p"));
    }
    if !fp.is_squarefree() {
        return Err(bad(p, "f mod p is not squarefree"));
    }
    Ok(pf)
}

pub fn reduce_curve(
    c: &HyperellipticCurve<Rat>,
    p: u64,
    n: Option<u64>,
) -> Result<HyperellipticCurve<Fp>, JacobianError> {
    let pf = good_prime(c.f(), p, n)?;
    HyperellipticCurve::new(c.f().map(|r| pf.from_rat(r).unwrap()))
}

pub fn reduce_divisor(d: &Mumford<Rat>, pf: &PrimeField) -> Result<Mumford<Fp>, JacobianError> {
    d.try_map(|r| pf.from_rat(r))
        .ok_or_else(|| bad(pf.p(), "class is not p-integral"))
}

/// Least `k <= bound` with `k D = 0`, or `None` when it exceeds the bound.
pub fn class_order<F: crate::arith::Field>(jac: &Jacobian<F>, d: &Mumford<F>, bound: u64) -> Option<u64> {
    jac.order_naive(d, bound)
}

/// `n D = 0` and `(n/q) D != 0` for every prime `q | n`.
pub fn has_exact_order<F: crate::arith::Field>(jac: &Jacobian<F>, d: &Mumford<F>, n: u64) -> bool {
    jac.mul_i(n as i64, d).is_zero()
        && factor_u64(n)
            .iter()
            .all(|&(q, _)| !jac.mul_i((n / q) as i64, d).is_zero())
}

/// Whether `sum k_i D_i = 0` with `0 <= k_i < n` forces every `k_i = 0`,
/// by walking all `n^m` combinations.
pub fn is_independent<F: crate::arith::Field>(jac: &Jacobian<F>, classes: &[Mumford<F>], n: u64) -> bool {
    let mut sums = vec![jac.zero()];
    for d in classes {
        let mut next = Vec::with_capacity(sums.len() * n as usize);
        for s in &sums {
            let mut acc = s.clone();
            for _ in 0..n {
                next.push(acc.clone());
                acc = jac.add(&acc, d);
            }
        }
        sums = next;
    }
    // index 0 is the trivial combination
    sums.iter().skip(1).all(|s| !s.is_zero())
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionClass {
    #[serde(skip)]
    pub class: Mumford<Rat>,
    pub order: u64,
    pub origin: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionSearch {
    pub classes: Vec<TorsionClass>,
    pub seed_identity_verified: bool,
    pub witness_prime: u64,
    pub candidates_tried: usize,
}

/// Smallest good prime above `from` at which every class reduces.
pub fn first_good_prime(
    fam: &Family,
    classes: &[Mumford<Rat>],
    from: u64,
    congruent_one_mod: Option<u64>,
) -> Option<PrimeField> {
    (from.max(3)..100_000).find_map(|p| {
        if congruent_one_mod.is_some_and(|m| p % m != 1) {
            return None;
        }
        let pf = good_prime(fam.curve.f(), p, Some(fam.n())).ok()?;
        good_prime(fam.model.odd().f(), p, Some(fam.n())).ok()?;
        classes.iter().all(|d| reduce_divisor(d, &pf).is_ok()).then_some(pf)
    })
}

fn candidates(fam: &Family, height: u64) -> Vec<(Mumford<Rat>, String)> {
    let jac = fam.jacobian();
    let mut out = Vec::new();
    if fam.seed_identity_holds() {
        out.push((fam.seed_class(), "oo+ - oo-".to_string()));
    }
    let inf_plus = jac.point(&Rat::from_integer(0.into()), &Rat::from_integer(1.into())).unwrap();
    out.push((inf_plus, "oo+ - P0".to_string()));
    for xw in fam.rational_weierstrass_points() {
        if let Some((z, w)) = fam.model.point_to_odd(&xw, &Rat::from_integer(0.into())) {
            out.push((jac.point(&z, &w).unwrap(), format!("({xw}, 0) - P0")));
        }
    }
    for (x, y) in fam.rational_points(height) {
        if y == Rat::from_integer(0.into()) {
            continue;
        }
        if let Some((z, w)) = fam.model.point_to_odd(&x, &y) {
            let p = jac.point(&z, &w).unwrap();
            out.push((jac.add(&p, &p), format!("({x}, {y}) - tau({x}, {y})")));
            out.push((p, format!("({x}, {y}) - P0")));
        }
    }
    out
}

/// Finds `want` classes of exact order `n` over `Q` that are independent,
/// the independence certified exhaustively modulo a good prime. Candidates
/// are tried in a fixed order: the class of `oo+ - oo-` (after checking the
/// identity `(x^n - s)^2 - f = t^2`), differences of points at infinity and
/// rational Weierstrass points with `P0`, then `P - tau(P)` and `P - P0` for
/// rational points `P` by increasing height.
pub fn torsion_search(fam: &Family, want: usize, height: u64) -> Result<TorsionSearch, JacobianError> {
    let jac = fam.jacobian();
    let n = fam.n();
    let mut accepted: Vec<TorsionClass> = Vec::new();
    let mut witness = 0u64;
    let mut tried = 0usize;
    for (d, origin) in candidates(fam, height) {
        if accepted.len() >= want {
            break;
        }
        tried += 1;
        if !has_exact_order(&jac, &d, n) {
            continue;
        }
        let mut all: Vec<Mumford<Rat>> = accepted.iter().map(|t| t.class.clone()).collect();
        all.push(d.clone());
        let Some(pf) = first_good_prime(fam, &all, 3, None) else {
            continue;
        };
        let jp = Jacobian::new(reduce_curve(fam.model.odd(), pf.p(), Some(n))?)?;
        let red: Vec<Mumford<Fp>> = all.iter().map(|c| reduce_divisor(c, &pf).unwrap()).collect();
        if is_independent(&jp, &red, n) {
            witness = pf.p();
            accepted.push(TorsionClass {
                class: d,
                order: n,
                origin,
            });
        }
    }
    if accepted.len() < want {
        return Err(JacobianError::SearchExhausted {
            tried,
            found: accepted.len(),
        });
    }
    Ok(TorsionSearch {
        classes: accepted,
        seed_identity_verified: fam.seed_identity_holds(),
        witness_prime: witness,
        candidates_tried: tried,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat as q;
    use crate::jacobian::curve::FamilyParams;

    fn fam(n: u64, l: Rat) -> Family {
        Family::new(FamilyParams::new(n, l).unwrap()).unwrap()
    }

    #[test]
    fn good_prime_policy() {
        let f = fam(3, q(2, 1));
        assert!(matches!(good_prime(f.curve.f(), 2, Some(3)), Err(JacobianError::BadPrime { .. })));
        let e = good_prime(f.curve.f(), 3, Some(3)).unwrap_err();
        assert!(e.to_string().contains("p divides n"));
        assert!(good_prime(f.curve.f(), 7, Some(3)).is_ok());
        // lambda = 2: lambda^2 = 1 mod 3 collapses the two factors
        assert!(good_prime(f.curve.f(), 3, None).unwrap_err().to_string().contains("squarefree"));
        let g = fam(3, q(1, 7));
        assert!(good_prime(g.curve.f(), 7, Some(3)).unwrap_err().to_string().contains("denominator"));
    }

    #[test]
    fn search_finds_two_classes() {
        for n in [3u64, 5] {
            let f = fam(n, q(2, 1));
            let r = torsion_search(&f, 2, 3).unwrap();
            assert!(r.seed_identity_verified);
            assert_eq!(r.classes.len(), 2);
            assert_eq!(r.classes[0].class, f.seed_class());
            assert_eq!(r.classes[1].class, f.second_class());
            let jac = f.jacobian();
            for c in &r.classes {
                assert!(jac.mul_i(n as i64, &c.class).is_zero());
                assert_eq!(class_order(&jac, &c.class, 100), Some(n));
            }
        }
    }

    #[test]
    fn independence_mod_7_all_nine_combinations() {
        let f = fam(3, q(2, 1));
        let pf = PrimeField::new(7).unwrap();
        let jp = Jacobian::new(reduce_curve(f.model.odd(), 7, Some(3)).unwrap()).unwrap();
        let a = reduce_divisor(&f.seed_class(), &pf).unwrap();
        let b = reduce_divisor(&f.second_class(), &pf).unwrap();
        assert!(is_independent(&jp, &[a.clone(), b], 3));
        assert!(!is_independent(&jp, &[a.clone(), a], 3));
    }
}
