use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use unram_core::arith::{parse_rat, Fp, Poly, Rat};
use unram_core::certifier::{
    certify as certify_spec, certify_abstract, heis_data, replay as replay_cert, CertifyConfig, HeisBundle,
    TorsorCertificate, TorsorSpec, Verdict,
};
use unram_core::heisenberg::{check_axioms, HeisGroup};
use unram_core::jacobian::{
    jacobian_order_mod_p, l_polynomial, reduce_curve, reduce_divisor, torsion_search, Family, FamilyParams,
    Mumford,
};
use unram_core::pairing::{full_torsion_toy, PairingContext};
use unram_core::specialization::{
    census as census_of, replay_record, specialize_points, SpecializationRecord, SpecializationRun,
    SpecializeConfig, Specializer,
};

use crate::error::CliError;
use crate::{CensusArgs, CertifyArgs, Control, CurveArgs, FamilyArgs, GroupArgs, PairingArgs, ReplayArgs, SpecializeArgs};

/// Largest group checked exhaustively; the triple loop is cubic in it.
const EXHAUSTIVE_LIMIT: u64 = 729;

pub struct Output {
    pub json: String,
    /// Set when the run completed but its verdict is negative.
    pub negative: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct Run<C> {
    tool: String,
    version: String,
    command: String,
    config: C,
}

fn run_info<C: Clone>(command: &str, config: &C) -> Run<C> {
    Run {
        tool: "unram".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        config: config.clone(),
    }
}

#[derive(Serialize)]
struct Report<C, T> {
    run: Run<C>,
    #[serde(flatten)]
    result: T,
}

fn pretty<T: Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Other(e.to_string()))
}

fn report<C: Serialize + Clone, T: Serialize>(command: &str, config: &C, result: T) -> Result<String, CliError> {
    pretty(&Report {
        run: run_info(command, config),
        result,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    let mut f = fs::File::create(path).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
    f.write_all(text.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

fn params(f: &FamilyArgs) -> Result<FamilyParams, CliError> {
    let lambda = parse_rat(&f.lambda).ok_or_else(|| CliError::Validation(format!("lambda {:?} is not a rational", f.lambda)))?;
    Ok(FamilyParams::new(f.n, lambda)?)
}

fn strs(p: &Poly<Rat>) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn fp_coeffs(p: &Poly<Fp>) -> Vec<u64> {
    p.coeffs().iter().map(|c| c.value()).collect()
}

// ---- group ----

pub fn group(a: &GroupArgs) -> Result<Output, CliError> {
    let grp = HeisGroup::new(a.n, a.d)?;
    let order = grp.order();
    if !a.check_axioms {
        let json = report(
            "group",
            a,
            serde_json::json!({ "order": order.to_string(), "dimension": 2 * a.d + 1, "center_order": a.n }),
        )?;
        return Ok(Output { json, negative: None });
    }
    if a.exhaustive && order > EXHAUSTIVE_LIMIT.into() {
        return Err(CliError::Validation(format!(
            "order {order} is above {EXHAUSTIVE_LIMIT}; drop --exhaustive to sample"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let r = check_axioms(grp, a.exhaustive, a.samples, &mut rng);
    let pass = r.all_pass();
    #[derive(Serialize)]
    struct Verdict<T> {
        #[serde(flatten)]
        report: T,
        all_pass: bool,
    }
    let json = report("group", a, Verdict { report: r, all_pass: pass })?;
    Ok(Output {
        json,
        negative: (!pass).then(|| "a group axiom check failed".to_string()),
    })
}

// ---- curve ----

#[derive(Serialize)]
struct TorsionOut {
    u: Vec<String>,
    v: Vec<String>,
    order: u64,
    origin: String,
}

#[derive(Serialize)]
struct ReductionOut {
    p: u64,
    jacobian_order: String,
    l_polynomial: Vec<String>,
}

pub fn curve(a: &CurveArgs) -> Result<Output, CliError> {
    let fam = Family::new(params(&a.family)?)?;
    let n = fam.n();
    let weierstrass: Vec<[String; 2]> = fam
        .rational_weierstrass_points()
        .into_iter()
        .map(|x| [x.to_string(), "0".to_string()])
        .collect();
    let torsion = if a.find_torsion {
        let s = torsion_search(&fam, 2, a.search_height)?;
        let classes: Vec<TorsionOut> = s
            .classes
            .iter()
            .map(|t| TorsionOut {
                u: strs(t.class.u()),
                v: strs(t.class.v()),
                order: t.order,
                origin: t.origin.clone(),
            })
            .collect();
        Some((classes, s.seed_identity_verified, s.witness_prime))
    } else {
        None
    };
    let reductions = a
        .primes
        .iter()
        .map(|&p| {
            let c = reduce_curve(&fam.curve, p, Some(n))?;
            Ok(ReductionOut {
                p,
                jacobian_order: jacobian_order_mod_p(&c)?.to_string(),
                l_polynomial: l_polynomial(&c)?.iter().map(|c| c.to_string()).collect(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let json = report(
        "curve",
        a,
        serde_json::json!({
            "f_coeffs": strs(fam.curve.f()),
            "genus": fam.genus(),
            "weierstrass_rational_points": weierstrass,
            "odd_model": {
                "f_coeffs": strs(fam.model.odd().f()),
                "substitution": "z = 1/(x - 1), w = y z^(g+1)",
            },
            "torsion_classes": torsion.as_ref().map(|t| &t.0),
            "seed_identity_verified": torsion.as_ref().map(|t| t.1),
            "independence_witness_prime": torsion.as_ref().map(|t| t.2),
            "reductions": reductions,
        }),
    )?;
    Ok(Output { json, negative: None })
}

// ---- pairing ----

#[derive(Serialize)]
struct FpClass {
    label: String,
    u: Vec<u64>,
    v: Vec<u64>,
}

pub fn pairing(a: &PairingArgs) -> Result<Output, CliError> {
    let fam = Family::new(params(&a.family)?)?;
    let n = fam.n();
    let c = reduce_curve(fam.model.odd(), a.prime, Some(n))?;
    let ctx = PairingContext::new(c, n)?.with_budget(a.budgets.random_budget);
    let pf = unram_core::jacobian::good_prime(fam.model.odd().f(), a.prime, Some(n))?;
    let classes: Vec<(String, Mumford<Fp>)> = [("L1", fam.seed_class()), ("L1'", fam.second_class())]
        .into_iter()
        .map(|(l, d)| Ok((l.to_string(), reduce_divisor(&d, &pf)?)))
        .collect::<Result<_, CliError>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.budgets.seed);
    let divs: Vec<Mumford<Fp>> = classes.iter().map(|c| c.1.clone()).collect();
    let prof = ctx.pairing_profile(&divs, &mut rng)?;
    let trivial = prof.logs.iter().flatten().all(|&l| l == 0);
    let json = report(
        "pairing",
        a,
        serde_json::json!({
            "p": prof.p,
            "n": n,
            "zeta": ctx.zeta().value(),
            "classes": classes.iter().map(|(l, d)| FpClass { label: l.clone(), u: fp_coeffs(d.u()), v: fp_coeffs(d.v()) }).collect::<Vec<_>>(),
            "pairing_matrix_logs": prof.logs,
            "trivial": trivial,
            "independent": prof.independent,
        }),
    )?;
    Ok(Output {
        json,
        negative: (!trivial).then(|| format!("nontrivial pairing at p = {}", prof.p)),
    })
}

// ---- certify ----

#[derive(Serialize, Deserialize)]
struct CertFile {
    #[serde(flatten)]
    certificate: TorsorCertificate,
    run: Run<CertifyArgs>,
}

fn certify_config(a: &CertifyArgs) -> CertifyConfig {
    CertifyConfig {
        primes: a.primes,
        prime_bound: a.budgets.prime_bound,
        seed: a.budgets.seed,
    }
}

fn certificate_for(a: &CertifyArgs) -> Result<TorsorCertificate, CliError> {
    let mut spec = TorsorSpec::family(params(&a.family)?, a.d)?;
    if a.control == Control::Dependent {
        spec = spec.with_dual_equal_to_primal();
    }
    Ok(certify_spec(&spec, &certify_config(a))?)
}

fn cert_text(a: &CertifyArgs, certificate: TorsorCertificate) -> Result<String, CliError> {
    pretty(&CertFile {
        certificate,
        run: run_info("certify", a),
    })
}

pub fn certify(a: &CertifyArgs) -> Result<Output, CliError> {
    if a.control == Control::Symplectic {
        return certify_symplectic(a);
    }
    let cert = certificate_for(a)?;
    let negative = (cert.verdict == Verdict::Refused).then(|| "pairing product is nontrivial".to_string());
    let json = cert_text(a, cert)?;
    if let Some(path) = &a.out {
        write_file(path, &json)?;
    }
    Ok(Output { json, negative })
}

/// Two classes with nontrivial pairing on an elliptic curve over `F_p` whose
/// rational points are exactly `(Z/n)^2`, for the least such `p = 1 mod n`.
fn certify_symplectic(a: &CertifyArgs) -> Result<Output, CliError> {
    let n = a.family.n;
    let (c, all) = (2..a.budgets.prime_bound)
        .filter(|p| p % n == 1 && unram_core::arith::is_prime_u64(*p))
        .find_map(|p| full_torsion_toy(p, n))
        .ok_or_else(|| CliError::Budget(format!("no curve with full rational {n}-torsion below the prime bound")))?;
    let ctx = PairingContext::new(c.clone(), n)?.with_budget(a.budgets.random_budget);
    let mut rng = ChaCha8Rng::seed_from_u64(a.budgets.seed);
    let mut pair = None;
    'search: for x in &all {
        for y in &all {
            if ctx.weil_pairing(x, y, &mut rng)?.log != 0 {
                pair = Some((x.clone(), y.clone()));
                break 'search;
            }
        }
    }
    let (x, y) = pair.ok_or_else(|| CliError::Other("the toy curve pairing is degenerate".into()))?;
    let cert = certify_abstract(c.clone(), n, std::slice::from_ref(&x), std::slice::from_ref(&y), a.budgets.seed)?;
    let negative = (cert.verdict == Verdict::Refused).then(|| format!("pairing product log {} at p = {}", cert.product_log, cert.p));
    let json = report(
        "certify",
        a,
        serde_json::json!({
            "control": "symplectic",
            "curve": { "p": cert.p, "f": fp_coeffs(c.f()) },
            "classes": [
                FpClass { label: "L1".into(), u: fp_coeffs(x.u()), v: fp_coeffs(x.v()) },
                FpClass { label: "L1'".into(), u: fp_coeffs(y.u()), v: fp_coeffs(y.v()) },
            ],
            "certificate": cert,
        }),
    )?;
    if let Some(path) = &a.out {
        write_file(path, &json)?;
    }
    Ok(Output { json, negative })
}

// ---- specialize / census ----

fn bundle(f: &FamilyArgs, prime_bound: u64, seed: u64) -> Result<HeisBundle, CliError> {
    let spec = TorsorSpec::family(params(f)?, 1)?;
    let cfg = CertifyConfig {
        prime_bound,
        seed,
        ..CertifyConfig::default()
    };
    Ok(heis_data(&spec, &cfg)?)
}

fn run_specialization(a: &SpecializeArgs) -> Result<(HeisBundle, SpecializationRun, usize), CliError> {
    let b = bundle(&a.family, a.budgets.prime_bound, a.budgets.seed)?;
    let cfg = SpecializeConfig {
        s: a.s.clone(),
        factor_budget: a.budgets.factor_budget,
        class_group_bound: a.class_group_bound,
        character_primes: a.character_primes,
    };
    let sp = Specializer::new(&b, cfg)?;
    let genus = sp.genus();
    let run = specialize_points(&sp, a.height);
    if let Some(path) = &a.out {
        let mut text = String::new();
        for r in &run.records {
            text.push_str(&serde_json::to_string(r)?);
            text.push('\n');
        }
        fs::write(path, text).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
    }
    Ok((b, run, genus))
}

#[derive(Serialize)]
struct ImaginaryPass {
    x0: String,
    d: String,
    discriminant: String,
    class_number: Option<String>,
    invariants: Option<Vec<String>>,
    rank_n: u32,
    rank_is_lower_bound: bool,
}

pub fn specialize(a: &SpecializeArgs) -> Result<Output, CliError> {
    let (_, run, _) = run_specialization(a)?;
    let count = |p: &dyn Fn(&SpecializationRecord) -> bool| run.records.iter().filter(|r| p(r)).count();
    let imaginary: Vec<ImaginaryPass> = run
        .records
        .iter()
        .filter(|r| r.passes() && r.is_imaginary())
        .filter_map(|r| {
            let cg = r.class_group.as_ref()?;
            Some(ImaginaryPass {
                x0: r.x0.clone(),
                d: r.field.as_ref()?.d.clone(),
                discriminant: cg.discriminant.clone(),
                class_number: cg.class_number.clone(),
                invariants: cg.invariants.clone(),
                rank_n: cg.rank_n,
                rank_is_lower_bound: cg.rank_is_lower_bound,
            })
        })
        .collect();
    let low: Vec<&str> = imaginary.iter().filter(|i| i.rank_n < 2).map(|i| i.x0.as_str()).collect();
    let negative = (!low.is_empty()).then(|| format!("n-rank below 2 at x0 = {}", low.join(", ")));
    let skipped: Vec<Value> = run
        .skipped
        .iter()
        .map(|(x, why)| serde_json::json!({ "x0": x, "reason": why }))
        .collect();
    let summary = serde_json::json!({
        "records": run.records.len(),
        "skipped": skipped,
        "unramified_outside_s": count(&|r| r.unramified_outside_s == Some(true)),
        "split_at_s": count(&|r| r.split_at_s == Some(true)),
        "connected": count(&|r| r.connected == Some(true)),
        "passing": count(&|r| r.passes()),
        "unknown": count(&|r| r.has_unknown()),
        "imaginary_passing": imaginary,
        "records_out": a.out.as_ref().map(|p| p.display().to_string()),
    });
    let json = report("specialize", a, summary)?;
    Ok(Output { json, negative })
}

pub fn census(a: &CensusArgs) -> Result<Output, CliError> {
    if a.grid.is_empty() {
        return Err(CliError::Validation("empty grid".into()));
    }
    let (_, run, genus) = run_specialization(&a.specialize)?;
    let rep = census_of(&run.records, a.specialize.height, genus, &a.grid);
    let json = report("census", a, rep)?;
    if let Some(path) = &a.report {
        write_file(path, &json)?;
    }
    Ok(Output { json, negative: None })
}

// ---- replay ----

pub fn replay(a: &ReplayArgs) -> Result<Output, CliError> {
    let text = fs::read_to_string(&a.file).map_err(|e| CliError::Validation(format!("{}: {e}", a.file.display())))?;
    let trimmed = text.trim_end();
    if let Ok(v) = serde_json::from_str::<Value>(trimmed) {
        if v.get("primes").is_some() {
            return replay_certificate(a, trimmed);
        }
        if v.get("run").is_some() {
            return Err(CliError::Validation("only certificates and record files can be replayed".into()));
        }
    }
    replay_records(a, trimmed)
}

fn replay_certificate(a: &ReplayArgs, text: &str) -> Result<Output, CliError> {
    let file: CertFile = serde_json::from_str(text)?;
    let checks = replay_cert(&file.certificate, a.seed)?;
    let args = &file.run.config;
    let fresh = cert_text(args, certificate_for(args)?)?;
    let byte_identical = fresh == text;
    let verified = checks.ok() && byte_identical;
    let json = report(
        "replay",
        a,
        serde_json::json!({
            "kind": "certificate",
            "verdict": file.certificate.verdict,
            "checks": checks,
            "byte_identical": byte_identical,
            "verified": verified,
        }),
    )?;
    let negative = (!verified).then(|| {
        let mut why = checks.mismatches.clone();
        if !byte_identical {
            why.push("re-certification differs from the file".into());
        }
        why.join("; ")
    });
    Ok(Output { json, negative })
}

fn replay_records(a: &ReplayArgs, text: &str) -> Result<Output, CliError> {
    let records = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            serde_json::from_str::<SpecializationRecord>(l)
                .map_err(|e| CliError::Validation(format!("line {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if records.is_empty() {
        return Err(CliError::Validation("no records".into()));
    }
    let mut bundles: BTreeMap<(u64, Option<String>), HeisBundle> = BTreeMap::new();
    let mut results = Vec::new();
    for r in &records {
        let key = (r.n, r.lambda.clone());
        if !bundles.contains_key(&key) {
            let lambda = r
                .lambda
                .clone()
                .ok_or_else(|| CliError::Validation("record without a family parameter".into()))?;
            let fa = FamilyArgs { n: r.n, lambda };
            bundles.insert(key.clone(), bundle(&fa, 100_000, a.seed)?);
        }
        results.push(replay_record(&bundles[&key], r)?);
    }
    let bad: Vec<&str> = results.iter().filter(|r| !r.reproduced).map(|r| r.x0.as_str()).collect();
    let unknown = results
        .iter()
        .filter(|r| r.unramified_outside_s.is_none() || r.split_at_s.is_none() || r.connected.is_none())
        .count();
    let json = report(
        "replay",
        a,
        serde_json::json!({
            "kind": "records",
            "records": results.len(),
            "reproduced": results.len() - bad.len(),
            "unknown": unknown,
            "verified": bad.is_empty(),
            "results": results,
        }),
    )?;
    let negative = (!bad.is_empty()).then(|| format!("records not reproduced at x0 = {}", bad.join(", ")));
    Ok(Output { json, negative })
}
