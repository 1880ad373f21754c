//! Certificates for the existence of Heisenberg torsors: pairing products
//! at several good primes, independence of the classes, and the Kummer
//! functions of the abelian layer normalized to split at `P0`.
//!
//! All function-level work happens on the odd model, where `P0` is the
//! point at infinity.

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{parse_rat, Field, Fp, FromRat, Poly, Rat};
use crate::jacobian::function::{audit_divisor, DivisorAudit};
use crate::jacobian::torsion::{good_prime, is_independent};
use crate::jacobian::{
    reduce_curve, reduce_divisor, to_odd_model, EffectiveDivisor, Factor, Family, FamilyParams,
    HyperellipticCurve, Jacobian, JacobianError, MillerFunction, Mumford, OddModel,
};
use crate::pairing::{PairingContext, PairingError};

/// Exhaustive independence checks stop above this many combinations.
pub const COMBINATION_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("found {found} of {want} good primes p = 1 mod {n} below {bound}")]
    NoGoodPrimes { n: u64, want: usize, found: usize, bound: u64 },
    #[error("class {0} is not killed by n")]
    NotTorsion(String),
    #[error("spec needs d >= 1 classes in each list, of equal length")]
    BadClassLists,
    #[error("the family has no {0} independent classes of the required shape")]
    NotEnoughClasses(usize),
    #[error("Kummer function for {0} has a zero or pole at P0")]
    RepresentativeCollision(String),
    #[error("torsor refused: {0}")]
    Uncertified(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
}

/// How the Kummer function of a class is obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum Representative {
    /// Only the class is known: Miller's function of its Mumford form.
    Class,
    /// The class is `[P - tau(P)]` for an odd-model point `P`.
    PointPair(Rat, Rat),
    /// A known function with divisor `n (P - tau(P))`.
    Closed { h: MillerFunction<Rat>, point: (Rat, Rat) },
}

#[derive(Clone, Debug)]
pub struct ClassSpec {
    pub label: String,
    pub class: Mumford<Rat>,
    pub rep: Representative,
}

#[derive(Clone, Debug)]
pub struct TorsorSpec {
    pub model: OddModel<Rat>,
    pub n: u64,
    pub family: Option<FamilyParams>,
    pub l: Vec<ClassSpec>,
    pub l_prime: Vec<ClassSpec>,
}

impl TorsorSpec {
    /// Validates list shapes and that every class is `n`-torsion.
    pub fn new(
        model: OddModel<Rat>,
        n: u64,
        family: Option<FamilyParams>,
        l: Vec<ClassSpec>,
        l_prime: Vec<ClassSpec>,
    ) -> Result<Self, CertifyError> {
        if l.is_empty() || l.len() != l_prime.len() {
            return Err(CertifyError::BadClassLists);
        }
        let jac = model.jacobian();
        for c in l.iter().chain(&l_prime) {
            if !jac.is_valid(&c.class) || !jac.mul_i(n as i64, &c.class).is_zero() {
                return Err(CertifyError::NotTorsion(c.label.clone()));
            }
        }
        Ok(TorsorSpec {
            model,
            n,
            family,
            l,
            l_prime,
        })
    }

    /// The family with `L = [oo+ - oo-]` and `L' = [Q - tau(Q)]`; only
    /// `d = 1` is available.
    pub fn family(params: FamilyParams, d: usize) -> Result<Self, CertifyError> {
        if d != 1 {
            return Err(CertifyError::NotEnoughClasses(2 * d));
        }
        let fam = Family::new(params.clone())?;
        let (qz, qw) = fam.q_point();
        let l = ClassSpec {
            label: "L1".into(),
            class: fam.seed_class(),
            rep: Representative::Closed {
                h: seed_closed_form(&fam),
                point: (Rat::from_integer(0.into()), Rat::from_integer(1.into())),
            },
        };
        let lp = ClassSpec {
            label: "L1'".into(),
            class: fam.second_class(),
            rep: Representative::PointPair(qz, qw),
        };
        TorsorSpec::new(fam.model.clone(), fam.n(), Some(params), vec![l], vec![lp])
    }

    /// The same data with `L'_i = L_i`: the pairing product is trivially 1
    /// and the classes are dependent.
    pub fn with_dual_equal_to_primal(&self) -> Self {
        let mut s = self.clone();
        s.l_prime = s
            .l
            .iter()
            .map(|c| ClassSpec {
                label: format!("{}'", c.label),
                ..c.clone()
            })
            .collect();
        s
    }

    pub fn d(&self) -> usize {
        self.l.len()
    }

    pub fn p0(&self) -> (Rat, Rat) {
        (self.model.weierstrass_x().clone(), Rat::from_integer(0.into()))
    }

    fn all_classes(&self) -> impl Iterator<Item = &ClassSpec> {
        self.l.iter().chain(&self.l_prime)
    }
}

/// `((z+1)^n - s z^n - w) / z^n`: the odd-model form of `x^n - s - y`,
/// with divisor `n (0,1) - n (0,-1)`; unnormalized.
pub fn seed_closed_form(fam: &Family) -> MillerFunction<Rat> {
    let n = fam.n() as u32;
    let one = Rat::from_integer(1.into());
    let a = &Poly::new(vec![one.clone(), one.clone()]).pow(n) - &Poly::monomial(fam.s(), n as usize);
    MillerFunction::from_factors(
        vec![
            (Factor::new(a, Poly::constant(-one.clone())), 1),
            (Factor::vertical(Poly::monomial(one.clone(), 1)), -(n as i64)),
        ],
        one,
    )
}

/// `(lambda z^n - kappa' (z+1)^n - w) / (z+1)^n`: the odd-model form of
/// `lambda - kappa' x^n - y`, with divisor `n Q - n tau(Q)`; unnormalized.
pub fn second_closed_form(fam: &Family) -> MillerFunction<Rat> {
    let n = fam.n() as u32;
    let one = Rat::from_integer(1.into());
    let zp1 = Poly::new(vec![one.clone(), one.clone()]);
    let a = &Poly::monomial(fam.lambda().clone(), n as usize) - &zp1.pow(n).scale(&fam.kappa_prime());
    MillerFunction::from_factors(
        vec![(Factor::new(a, Poly::constant(-one.clone())), 1), (Factor::vertical(zp1), -(n as i64))],
        one,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KummerOrigin {
    ClosedForm,
    PointPairMiller,
    ClassMiller,
}

/// A function `h` with `div h = n (plus - minus)`, `[plus - minus] = L`,
/// and `h(P0) = 1`.
#[derive(Clone, Debug)]
pub struct KummerFunction {
    pub label: String,
    pub n: u64,
    pub h: MillerFunction<Rat>,
    /// The factor applied to reach `h(P0) = 1`.
    pub normalizer: Rat,
    pub plus: EffectiveDivisor<Rat>,
    pub minus: EffectiveDivisor<Rat>,
    pub origin: KummerOrigin,
    pub audit: DivisorAudit,
}

fn normalize(
    jac: &Jacobian<Rat>,
    label: &str,
    h: MillerFunction<Rat>,
) -> Result<(MillerFunction<Rat>, Rat), CertifyError> {
    let c = jac.f().leading().unwrap().clone();
    let v = h
        .value_at_infinity(&c, jac.genus())
        .ok_or_else(|| CertifyError::RepresentativeCollision(label.to_string()))?;
    let k = v.inv().expect("nonzero value at P0");
    Ok((h.scale(&k), k))
}

fn finish(
    jac: &Jacobian<Rat>,
    label: &str,
    n: u64,
    h: MillerFunction<Rat>,
    plus: EffectiveDivisor<Rat>,
    minus: EffectiveDivisor<Rat>,
    origin: KummerOrigin,
) -> Result<KummerFunction, CertifyError> {
    let (h, normalizer) = normalize(jac, label, h)?;
    let audit = audit_divisor(jac, &h, n, &plus, &minus);
    Ok(KummerFunction {
        label: label.to_string(),
        n,
        h,
        normalizer,
        plus,
        minus,
        origin,
        audit,
    })
}

fn point_pair(jac: &Jacobian<Rat>, z: &Rat, w: &Rat) -> Result<(Mumford<Rat>, Mumford<Rat>), CertifyError> {
    let p = jac.point(z, w).ok_or(JacobianError::CorruptDivisor)?;
    Ok((p.clone(), jac.neg(&p)))
}

/// For `L = [P - tau(P)]` of order `n`: `f_(2n,P) / (z - z_P)^n`, whose
/// divisor is `2n P - n (P + tau P) = n (P - tau P)`.
pub fn kummer_point_pair(
    jac: &Jacobian<Rat>,
    label: &str,
    z: &Rat,
    w: &Rat,
    n: u64,
) -> Result<KummerFunction, CertifyError> {
    let (p, tp) = point_pair(jac, z, w)?;
    let (f, rest) = jac.miller(&p, 2 * n);
    if !rest.is_zero() {
        return Err(CertifyError::NotTorsion(label.to_string()));
    }
    let h = f.mul(&MillerFunction::from_factors(
        vec![(Factor::vertical(Poly::linear_root(z.clone())), -(n as i64))],
        jac.one().clone(),
    ));
    finish(
        jac,
        label,
        n,
        h,
        EffectiveDivisor::from_mumford(jac, &p),
        EffectiveDivisor::from_mumford(jac, &tp),
        KummerOrigin::PointPairMiller,
    )
}

/// For any class `L = E - m oo` of order `n`: `f_(n,E) (z^g / w)^(n m)`.
/// Since `div(z^g / w) = g (0,+) + g (0,-) - W + oo` with `W` the affine
/// Weierstrass divisor, the result has divisor `n D` for the affine
/// representative `D = E + m g ((0,+) + (0,-)) - m W`.
pub fn kummer_function(
    jac: &Jacobian<Rat>,
    label: &str,
    l: &Mumford<Rat>,
    n: u64,
) -> Result<KummerFunction, CertifyError> {
    let (f, rest) = jac.miller(l, n);
    if !rest.is_zero() {
        return Err(CertifyError::NotTorsion(label.to_string()));
    }
    let one = jac.one().clone();
    let g = jac.genus() as i64;
    let m = l.degree() as i64;
    let nm = n as i64 * m;
    let h = f.mul(&MillerFunction::from_factors(
        vec![
            (Factor::vertical(Poly::monomial(one.clone(), 1)), g * nm),
            (Factor::new(Poly::zero(), Poly::constant(one.clone())), -nm),
        ],
        one.clone(),
    ));
    let z_mg = EffectiveDivisor {
        vertical: Poly::monomial(one.clone(), (m * g) as usize),
        part: jac.zero(),
    };
    let plus = EffectiveDivisor::from_mumford(jac, l).add(jac, &z_mg);
    let w = Mumford::new_unchecked(jac.f().monic(), Poly::zero());
    let minus = EffectiveDivisor::from_mumford(jac, &w).times(jac, m as u64);
    finish(jac, label, n, h, plus, minus, KummerOrigin::ClassMiller)
}

/// The Kummer function a spec prescribes for one of its classes.
pub fn kummer_for(jac: &Jacobian<Rat>, c: &ClassSpec, n: u64) -> Result<KummerFunction, CertifyError> {
    match &c.rep {
        Representative::Class => kummer_function(jac, &c.label, &c.class, n),
        Representative::PointPair(z, w) => kummer_point_pair(jac, &c.label, z, w, n),
        Representative::Closed { h, point } => {
            let (p, tp) = point_pair(jac, &point.0, &point.1)?;
            finish(
                jac,
                &c.label,
                n,
                h.clone(),
                EffectiveDivisor::from_mumford(jac, &p),
                EffectiveDivisor::from_mumford(jac, &tp),
                KummerOrigin::ClosedForm,
            )
        }
    }
}

impl KummerFunction {
    /// `h(P)` at a point of the odd model.
    pub fn eval_odd<E: FromRat>(&self, z: &E, w: &E) -> Option<E> {
        self.h.eval_point_in(z, w)
    }

    /// `h(P)` at a point `(x, y)` of the source model, `P != P0`.
    pub fn eval_source<E: FromRat>(&self, model: &OddModel<Rat>, x: &E, y: &E) -> Option<E> {
        let xw = x.from_rat_like(model.weierstrass_x())?;
        let z = (x.clone() - xw).inv()?;
        let w = y.clone() * z.pow(model.odd().genus() as u64 + 1);
        self.eval_odd(&z, &w)
    }

    /// `[plus - minus]` as a reduced class.
    pub fn class(&self, jac: &Jacobian<Rat>) -> Mumford<Rat> {
        jac.sub(&jac.reduce(&self.plus.part), &jac.reduce(&self.minus.part))
    }

    pub fn record(&self) -> KummerRecord {
        KummerRecord {
            label: self.label.clone(),
            origin: self.origin,
            factors: self
                .h
                .factors()
                .iter()
                .map(|(f, e)| FactorRecord {
                    a: poly_rec(&f.a),
                    b: poly_rec(&f.b),
                    e: *e,
                })
                .collect(),
            scalar: self.h.scalar().to_string(),
            normalizer: self.normalizer.to_string(),
            plus: divisor_rec(&self.plus),
            minus: divisor_rec(&self.minus),
            audit: self.audit.clone(),
        }
    }
}

// ---- serialized forms ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub e: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorRecord {
    pub vertical: Vec<String>,
    pub u: Vec<String>,
    pub v: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KummerRecord {
    pub label: String,
    pub origin: KummerOrigin,
    pub factors: Vec<FactorRecord>,
    /// Overall constant, normalization included.
    pub scalar: String,
    pub normalizer: String,
    pub plus: DivisorRecord,
    pub minus: DivisorRecord,
    pub audit: DivisorAudit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub n: u64,
    pub lambda: Option<String>,
    /// Coefficients of the source model, constant term first.
    pub f: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub label: String,
    /// Mumford form on the odd model at `P0`.
    pub u: Vec<String>,
    pub v: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCheck {
    pub p: u64,
    /// `log e_n(L_i, L_i')` for each `i`.
    pub logs: Vec<u64>,
    pub product_log: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceRecord {
    pub verdict: bool,
    pub witness_prime: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedConnected,
    /// The torsor exists but may be disconnected.
    Certified,
    Refused,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refusal {
    pub p: u64,
    pub product_log: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsorCertificate {
    pub curve: CurveRecord,
    pub p0: [String; 2],
    pub d: usize,
    /// `L_1..L_d` followed by `L_1'..L_d'`.
    pub classes: Vec<ClassRecord>,
    pub primes: Vec<PrimeCheck>,
    pub independent: IndependenceRecord,
    pub verdict: Verdict,
    pub refusal: Option<Refusal>,
    pub kummer: Vec<KummerRecord>,
}

fn poly_rec(p: &Poly<Rat>) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn divisor_rec(d: &EffectiveDivisor<Rat>) -> DivisorRecord {
    DivisorRecord {
        vertical: poly_rec(&d.vertical),
        u: poly_rec(d.part.u()),
        v: poly_rec(d.part.v()),
    }
}

fn parse_poly(cs: &[String]) -> Result<Poly<Rat>, CertifyError> {
    cs.iter()
        .map(|c| parse_rat(c).ok_or_else(|| CertifyError::Malformed(format!("bad rational {c:?}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(Poly::new)
}

fn parse_divisor(d: &DivisorRecord) -> Result<EffectiveDivisor<Rat>, CertifyError> {
    Ok(EffectiveDivisor {
        vertical: parse_poly(&d.vertical)?,
        part: Mumford::new_unchecked(parse_poly(&d.u)?, parse_poly(&d.v)?),
    })
}

impl KummerRecord {
    pub fn to_function(&self) -> Result<MillerFunction<Rat>, CertifyError> {
        let factors = self
            .factors
            .iter()
            .map(|f| Ok((Factor::new(parse_poly(&f.a)?, parse_poly(&f.b)?), f.e)))
            .collect::<Result<Vec<_>, CertifyError>>()?;
        let scalar = parse_rat(&self.scalar).ok_or_else(|| CertifyError::Malformed("scalar".into()))?;
        Ok(MillerFunction::from_factors(factors, scalar))
    }
}

// ---- certification ----

#[derive(Clone, Debug)]
pub struct CertifyConfig {
    /// Number of good primes `p = 1 mod n` to check.
    pub primes: usize,
    pub prime_bound: u64,
    pub seed: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            primes: 3,
            prime_bound: 100_000,
            seed: 0,
        }
    }
}

/// The first `count` good primes `p = 1 mod n` above `from` at which the
/// curve, its odd model, and every class reduce.
pub fn select_primes(
    model: &OddModel<Rat>,
    n: u64,
    classes: &[Mumford<Rat>],
    count: usize,
    from: u64,
    bound: u64,
) -> Result<Vec<u64>, CertifyError> {
    let mut out = Vec::new();
    let mut p = from.max(3);
    while out.len() < count && p < bound {
        if p % n == 1 {
            if let Ok(pf) = good_prime(model.source().f(), p, Some(n)) {
                if good_prime(model.odd().f(), p, Some(n)).is_ok()
                    && classes.iter().all(|c| reduce_divisor(c, &pf).is_ok())
                {
                    out.push(p);
                }
            }
        }
        p += 1;
    }
    if out.len() < count {
        return Err(CertifyError::NoGoodPrimes {
            n,
            want: count,
            found: out.len(),
            bound,
        });
    }
    Ok(out)
}

/// Pairing logs `log e_n(L_i, L_i')` modulo `p`.
fn prime_check(
    model: &OddModel<Rat>,
    n: u64,
    l: &[Mumford<Rat>],
    lp: &[Mumford<Rat>],
    p: u64,
    seed: u64,
) -> Result<PrimeCheck, CertifyError> {
    let ctx = PairingContext::new(reduce_curve(model.odd(), p, Some(n))?, n)?;
    let pf = crate::arith::PrimeField::new(p).map_err(JacobianError::from)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.rotate_left(17));
    let mut logs = Vec::with_capacity(l.len());
    for (a, b) in l.iter().zip(lp) {
        let a = reduce_divisor(a, &pf)?;
        let b = reduce_divisor(b, &pf)?;
        logs.push(ctx.weil_pairing(&a, &b, &mut rng)?.log);
    }
    let product_log = logs.iter().sum::<u64>() % n;
    Ok(PrimeCheck { p, logs, product_log })
}

fn independence_at(
    model: &OddModel<Rat>,
    n: u64,
    classes: &[Mumford<Rat>],
    p: u64,
) -> Result<bool, CertifyError> {
    let combos = (n as u128).checked_pow(classes.len() as u32).unwrap_or(u128::MAX);
    if combos > COMBINATION_BUDGET {
        return Err(PairingError::TooManyCombinations(combos).into());
    }
    let pf = crate::arith::PrimeField::new(p).map_err(JacobianError::from)?;
    let jac = Jacobian::new(reduce_curve(model.odd(), p, Some(n))?)?;
    let red = classes
        .iter()
        .map(|c| reduce_divisor(c, &pf))
        .collect::<Result<Vec<Mumford<Fp>>, _>>()?;
    Ok(is_independent(&jac, &red, n))
}

fn decide(primes: &[PrimeCheck], independent: bool) -> (Verdict, Option<Refusal>) {
    if let Some(bad) = primes.iter().find(|c| c.product_log != 0) {
        return (
            Verdict::Refused,
            Some(Refusal {
                p: bad.p,
                product_log: bad.product_log,
            }),
        );
    }
    if independent {
        (Verdict::CertifiedConnected, None)
    } else {
        (Verdict::Certified, None)
    }
}

/// Checks `prod e_n(L_i, L_i') = 1` at good primes `p = 1 mod n` (in
/// parallel, folded by prime) and independence of all `2d` classes at the
/// first of them, where reduction is injective on `n`-torsion.
pub fn certify(spec: &TorsorSpec, cfg: &CertifyConfig) -> Result<TorsorCertificate, CertifyError> {
    let n = spec.n;
    let l: Vec<Mumford<Rat>> = spec.l.iter().map(|c| c.class.clone()).collect();
    let lp: Vec<Mumford<Rat>> = spec.l_prime.iter().map(|c| c.class.clone()).collect();
    let all: Vec<Mumford<Rat>> = l.iter().chain(&lp).cloned().collect();
    let primes = select_primes(&spec.model, n, &all, cfg.primes, 3, cfg.prime_bound)?;
    let mut checks = primes
        .par_iter()
        .map(|&p| prime_check(&spec.model, n, &l, &lp, p, cfg.seed))
        .collect::<Result<Vec<_>, _>>()?;
    checks.sort_by_key(|c| c.p);
    let witness = primes[0];
    let independent = independence_at(&spec.model, n, &all, witness)?;
    let (verdict, refusal) = decide(&checks, independent);
    let jac = spec.model.jacobian();
    let kummer = spec
        .all_classes()
        .map(|c| kummer_for(&jac, c, n).map(|k| k.record()))
        .collect::<Result<Vec<_>, _>>()?;
    let (x0, y0) = spec.p0();
    Ok(TorsorCertificate {
        curve: CurveRecord {
            n,
            lambda: spec.family.as_ref().map(|f| f.lambda.to_string()),
            f: poly_rec(spec.model.source().f()),
        },
        p0: [x0.to_string(), y0.to_string()],
        d: spec.d(),
        classes: spec
            .all_classes()
            .map(|c| ClassRecord {
                label: c.label.clone(),
                u: poly_rec(c.class.u()),
                v: poly_rec(c.class.v()),
            })
            .collect(),
        primes: checks,
        independent: IndependenceRecord {
            verdict: independent,
            witness_prime: witness,
        },
        verdict,
        refusal,
        kummer,
    })
}

/// What re-verification of a certificate from its JSON found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub pairing_checks_reproduced: bool,
    pub independence_reproduced: bool,
    pub verdict_reproduced: bool,
    pub kummer_verified: bool,
    pub mismatches: Vec<String>,
}

impl ReplayReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Rebuilds the curve and classes from the certificate alone and repeats
/// every check it records.
pub fn replay(cert: &TorsorCertificate, seed: u64) -> Result<ReplayReport, CertifyError> {
    let n = cert.curve.n;
    let curve = HyperellipticCurve::new(parse_poly(&cert.curve.f)?)?;
    let xw = parse_rat(&cert.p0[0]).ok_or_else(|| CertifyError::Malformed("p0".into()))?;
    let model = to_odd_model(&curve, &xw)?;
    let jac = model.jacobian();
    let classes = cert
        .classes
        .iter()
        .map(|c| Ok(Mumford::new_unchecked(parse_poly(&c.u)?, parse_poly(&c.v)?)))
        .collect::<Result<Vec<_>, CertifyError>>()?;
    if classes.len() != 2 * cert.d || cert.d == 0 || cert.kummer.len() != classes.len() {
        return Err(CertifyError::Malformed("class list length".into()));
    }
    let mut mismatches = Vec::new();
    for (c, r) in classes.iter().zip(&cert.classes) {
        if !jac.is_reduced(c) || !jac.mul_i(n as i64, c).is_zero() {
            mismatches.push(format!("{} is not an n-torsion class", r.label));
        }
    }
    let (l, lp) = classes.split_at(cert.d);
    let mut pairing_ok = true;
    for rec in &cert.primes {
        let again = prime_check(&model, n, l, lp, rec.p, seed)?;
        if again != *rec {
            pairing_ok = false;
            mismatches.push(format!("pairing check at p = {} differs", rec.p));
        }
    }
    let indep = independence_at(&model, n, &classes, cert.independent.witness_prime)?;
    let indep_ok = indep == cert.independent.verdict;
    if !indep_ok {
        mismatches.push("independence verdict differs".into());
    }
    let enough = cert.primes.len() >= 3 && cert.primes.iter().all(|c| c.p % n == 1);
    let (verdict, refusal) = decide(&cert.primes, indep);
    let verdict_ok = verdict == cert.verdict && refusal == cert.refusal && (enough || verdict == Verdict::Refused);
    if !verdict_ok {
        mismatches.push("verdict does not follow from the checks".into());
    }
    let mut kummer_ok = true;
    let c = jac.f().leading().unwrap().clone();
    for (rec, class) in cert.kummer.iter().zip(&classes) {
        let h = rec.to_function()?;
        let plus = parse_divisor(&rec.plus)?;
        let minus = parse_divisor(&rec.minus)?;
        let audit = audit_divisor(&jac, &h, n, &plus, &minus);
        let in_class = jac.sub(&jac.reduce(&plus.part), &jac.reduce(&minus.part)) == *class;
        let split = h.value_at_infinity(&c, jac.genus()).is_some_and(|v| v.is_one());
        if !(audit.matches && in_class && split) {
            kummer_ok = false;
            mismatches.push(format!("Kummer function {} fails re-verification", rec.label));
        }
    }
    Ok(ReplayReport {
        pairing_checks_reproduced: pairing_ok,
        independence_reproduced: indep_ok,
        verdict_reproduced: verdict_ok,
        kummer_verified: kummer_ok,
        mismatches,
    })
}

// ---- abstract mode ----

/// Certification of classes supplied directly over `F_p`, for controls
/// that rational data cannot provide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbstractCertificate {
    pub p: u64,
    pub n: u64,
    pub logs: Vec<u64>,
    pub product_log: u64,
    pub independent: bool,
    pub verdict: Verdict,
}

pub fn certify_abstract(
    curve: HyperellipticCurve<Fp>,
    n: u64,
    l: &[Mumford<Fp>],
    l_prime: &[Mumford<Fp>],
    seed: u64,
) -> Result<AbstractCertificate, CertifyError> {
    if l.is_empty() || l.len() != l_prime.len() {
        return Err(CertifyError::BadClassLists);
    }
    let ctx = PairingContext::new(curve, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let logs = l
        .iter()
        .zip(l_prime)
        .map(|(a, b)| ctx.weil_pairing(a, b, &mut rng).map(|v| v.log))
        .collect::<Result<Vec<_>, _>>()?;
    let product_log = logs.iter().sum::<u64>() % n;
    let all: Vec<Mumford<Fp>> = l.iter().chain(l_prime).cloned().collect();
    let independent = is_independent(ctx.jacobian(), &all, n);
    let check = PrimeCheck {
        p: ctx.p(),
        logs: logs.clone(),
        product_log,
    };
    let (verdict, _) = decide(&[check], independent);
    Ok(AbstractCertificate {
        p: ctx.p(),
        n,
        logs,
        product_log,
        independent,
        verdict,
    })
}

// ---- the bundle ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeisDescriptor {
    pub n: u64,
    pub d: usize,
    /// `2d + 1`.
    pub dimension: usize,
    /// `n^(2d+1)`, as a decimal string.
    pub order: String,
}

/// Everything known about the torsor: the certificate, the `2d` Kummer
/// functions of its abelian quotient, and the group. Equations for the
/// Heisenberg cover itself are not produced.
#[derive(Clone, Debug)]
pub struct HeisBundle {
    pub certificate: TorsorCertificate,
    pub model: OddModel<Rat>,
    pub kummer: Vec<KummerFunction>,
    pub group: HeisDescriptor,
    pub cover_equations_produced: bool,
}

pub fn heis_data(spec: &TorsorSpec, cfg: &CertifyConfig) -> Result<HeisBundle, CertifyError> {
    let certificate = certify(spec, cfg)?;
    if certificate.verdict == Verdict::Refused {
        let r = certificate.refusal.as_ref().unwrap();
        return Err(CertifyError::Uncertified(format!(
            "pairing product log {} at p = {}",
            r.product_log, r.p
        )));
    }
    let jac = spec.model.jacobian();
    let kummer = spec
        .all_classes()
        .map(|c| kummer_for(&jac, c, spec.n))
        .collect::<Result<Vec<_>, _>>()?;
    let d = spec.d();
    Ok(HeisBundle {
        certificate,
        model: spec.model.clone(),
        kummer,
        group: HeisDescriptor {
            n: spec.n,
            d,
            dimension: 2 * d + 1,
            order: num_traits::pow(BigInt::from(spec.n), 2 * d + 1).to_string(),
        },
        cover_equations_produced: false,
    })
}
