//! Acceptance run: one PASS/FAIL line per property, at desk scale
//! (at most 3 objects, truncation at most 4, dimensions at most 4).
//!
//! All comparisons are exact; the only tolerances are the time limits below.

use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cosegal::codec::{self, Document};
use cosegal_core::adjoints::{gamma, gamma_unit, psi_arrows, realize, unitalize, verify_levelwise, Unitalization, DEFAULT_CAP};
use cosegal_core::base::{
    chain_map_basis, coproduct_in, coproduct_pushout, crossing, degree_window, disk, generating_cofibrations, has_rlp,
    is_trivial_fibration, sphere, Backend, MMorphism, MObject,
};
use cosegal_core::fixtures::*;
use cosegal_core::homotopy::{
    cosegalify_two_constant, is_cosegal, is_two_constant, k_injectivity_report, two_constant_transfer, KInjectivityReport,
};
use cosegal_core::linalg::{unit_vec, Mat};
use cosegal_core::monoidal::{
    associator_s, check_isomorphism, nat_transform_object, symmetry_s, unit_laws, yoneda_module, yoneda_report,
};
use cosegal_core::precat::{Diagram, PrecatMorphism, Precategory};
use cosegal_core::shapes::{all_chains, degree};

const GAMMA_TIME_LIMIT: Duration = Duration::from_secs(10);
const SUITE_TIME_LIMIT: Duration = Duration::from_secs(300);
/// Exact arithmetic: every equality below is checked with zero tolerance.
const TOLERANCE: u32 = 0;

const GAMMA_INSTANCES: usize = 120;
const UNITALIZATION_INSTANCES: usize = 60;
const COLIMIT_LEMMA_INSTANCES: usize = 60;
const COSEGALIFICATION_INSTANCES: usize = 36;
const COSEGALIFICATION_TRUNCATION: usize = 4;
const MAX_TOTAL_DIM: usize = 6;
const MAX_BASIS_SUBSETS: usize = 8;

const BACKENDS: [Backend; 3] = [Backend::FinSet, Backend::VectQ, Backend::ChQ];

struct Line {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn line(name: &'static str, ok: bool, detail: String) -> Line {
    Line { name, ok, detail }
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
}

fn gamma_invariance(seed: u64) -> Line {
    let start = Instant::now();
    let mut r = rng(seed, 1);
    let mut mismatches = 0;
    for i in 0..GAMMA_INSTANCES {
        let backend = BACKENDS[i % 3];
        let n = r.gen_range(1..=3);
        let t = if n == 1 { r.gen_range(2..=4) } else { r.gen_range(2..=3) };
        let k = random_kobject(&mut r, backend, n, t, 2);
        let g = gamma(&k);
        let unit = gamma_unit(&k);
        for z in k.chains().into_iter().filter(|z| degree(z) == 1) {
            let same_value = g.value(&z) == k.value(&z);
            let u = &unit[&z];
            let identity = u.src == u.tgt && u.mat == Mat::identity(u.src.dim());
            if !(same_value && identity) {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    line(
        "gamma-keeps-(A,B)",
        mismatches == 0 && elapsed < GAMMA_TIME_LIMIT,
        format!("{} kobjects, {} mismatches, {:.2}s (limit {}s)", GAMMA_INSTANCES, mismatches, elapsed.as_secs_f64(), GAMMA_TIME_LIMIT.as_secs()),
    )
}

fn unitalizations(seed: u64) -> (Vec<(Arc<Precategory>, Result<Unitalization, String>)>, usize) {
    let mut r = rng(seed, 2);
    let mut out = Vec::new();
    let mut max_dim = 0;
    for i in 0..UNITALIZATION_INSTANCES {
        let backend = BACKENDS[i % 3];
        let (n, t) = if i % 10 == 9 { (3, 2) } else { (r.gen_range(1..=2), 3) };
        let f = random_pointed(&mut r, backend, n, t, 1);
        max_dim = max_dim.max(f.values.iter().filter(|(z, _)| degree(z) == 1).map(|(_, v)| v.dim()).max().unwrap_or(0));
        let u = unitalize(&f, DEFAULT_CAP).map_err(|e| e.to_string());
        out.push((f, u));
    }
    (out, max_dim)
}

fn unitalization_theorem(us: &[(Arc<Precategory>, Result<Unitalization, String>)], max_dim: usize) -> Line {
    let mut failures = Vec::new();
    let mut max_rounds = 0;
    for (k, (f, u)) in us.iter().enumerate() {
        let u = match u {
            Ok(u) => u,
            Err(e) => {
                failures.push(format!("#{}: {}", k, e));
                continue;
            }
        };
        max_rounds = max_rounds.max(u.trace.rounds.len());
        let unital = u.result.check_unital().is_ok() && u.result.validate().is_ok();
        let eta_iso = f.chains().into_iter().filter(|z| degree(z) == 1).all(|z| u.eta.components[&z].is_iso());
        let idempotent = unitalize(&u.result, DEFAULT_CAP).map(|v| v.trace.rounds.len() == 1).unwrap_or(false);
        if !(unital && eta_iso && idempotent) {
            failures.push(format!("#{}: unital {} eta-iso {} idempotent {}", k, unital, eta_iso, idempotent));
        }
    }
    line(
        "unitalization-is-strongly-unital-and-preserves-(A,B)",
        failures.is_empty(),
        format!(
            "{} pointed inputs (degree-1 dims <= {}), at most {} rounds (cap {}), failures {:?}",
            us.len(),
            max_dim,
            max_rounds,
            DEFAULT_CAP,
            failures
        ),
    )
}

fn levelwise_colimits(us: &[(Arc<Precategory>, Result<Unitalization, String>)]) -> Line {
    let mut rounds = 0;
    let mut bad = 0;
    for (_, u) in us {
        match u {
            Ok(u) => {
                rounds += u.trace.rounds.len();
                if !verify_levelwise(u).is_ok() {
                    bad += 1;
                }
            }
            Err(_) => bad += 1,
        }
    }
    line(
        "unitalization-levelwise-colimits",
        bad == 0,
        format!("{} unitalizations, {} rounds compared against slice colimits, {} mismatches", us.len(), rounds, bad),
    )
}

fn colimit_lemmas(seed: u64) -> Line {
    let mut r = rng(seed, 4);
    let (mut crossing_ok, mut pushout_ok) = (0, 0);
    for i in 0..COLIMIT_LEMMA_INSTANCES {
        let backend = BACKENDS[i % 3];
        let m = r.gen_range(2..=4);
        let (eta, eps) = crossing_tower(&mut r, backend, 4, m);
        if crossing(&eta, &eps).map(|c| c.is_inverse_pair()).unwrap_or(false) {
            crossing_ok += 1;
        }
        let k = r.gen_range(1..=3);
        let (b, data) = random_span_family(&mut r, backend, 3, k);
        if coproduct_pushout(&b, &data).map(|c| c.is_inverse_pair()).unwrap_or(false) {
            pushout_ok += 1;
        }
    }
    line(
        "crossing-and-coproduct-pushout-comparisons-are-inverse",
        crossing_ok == COLIMIT_LEMMA_INSTANCES && pushout_ok == COLIMIT_LEMMA_INSTANCES,
        format!(
            "crossing {}/{}, coproduct-pushout {}/{}",
            crossing_ok, COLIMIT_LEMMA_INSTANCES, pushout_ok, COLIMIT_LEMMA_INSTANCES
        ),
    )
}

/// Complexes built from `S^0`, `S^1` and `D^1`, up to the given dimension.
fn small_complexes(max_dim: usize) -> Vec<MObject> {
    let pieces = [sphere(0), sphere(1), disk(1)];
    let mut out = Vec::new();
    let mut counts = [0usize; 3];
    loop {
        let dim = counts[0] + counts[1] + 2 * counts[2];
        if dim <= max_dim {
            let parts: Vec<&MObject> = pieces.iter().zip(counts).flat_map(|(p, c)| std::iter::repeat(p).take(c)).collect();
            out.push(coproduct_in(Backend::ChQ, &parts).0);
        }
        let mut k = 0;
        loop {
            if k == 3 {
                return out;
            }
            counts[k] += 1;
            if counts[0] + counts[1] + 2 * counts[2] <= max_dim {
                break;
            }
            counts[k] = 0;
            k += 1;
        }
    }
}

fn lifting_characterization(seed: u64) -> Line {
    let objects = small_complexes(MAX_TOTAL_DIM);
    let (mut morphisms, mut disagreements, mut fibrations) = (0, 0, 0);
    for x in &objects {
        for y in &objects {
            if x.dim() + y.dim() > MAX_TOTAL_DIM {
                continue;
            }
            let basis = chain_map_basis(x, y);
            let used = basis.len().min(MAX_BASIS_SUBSETS);
            for mask in 0u32..(1 << used) {
                let mut m = Mat::zero(y.dim(), x.dim());
                for (k, b) in basis.iter().take(used).enumerate() {
                    if mask & (1 << k) != 0 {
                        m = m.add(b);
                    }
                }
                let f = MMorphism::new_unchecked(x.clone(), y.clone(), m);
                let gens = generating_cofibrations(Backend::ChQ, degree_window(&f));
                let lifts = gens.iter().all(|i| has_rlp(i, &f));
                let tf = is_trivial_fibration(&f);
                morphisms += 1;
                fibrations += tf as usize;
                disagreements += (lifts != tf) as usize;
            }
        }
    }
    let reports = k_injectivity_fixtures(seed);
    let routes = reports.iter().filter(|r| !r.routes_agree()).count();
    let chains: usize = reports.iter().map(|r| r.entries.len()).sum();
    line(
        "lifting-against-generators-iff-trivial-fibration",
        disagreements == 0 && routes == 0,
        format!(
            "{} chq morphisms over {} complexes (total dim <= {}), {} trivial fibrations, {} disagreements; \
             k-injectivity routes agree on {}/{} diagrams ({} chains)",
            morphisms,
            objects.len(),
            MAX_TOTAL_DIM,
            fibrations,
            disagreements,
            reports.len() - routes,
            reports.len(),
            chains
        ),
    )
}

fn fixture_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn k_injectivity_fixtures(seed: u64) -> Vec<KInjectivityReport> {
    let mut out = Vec::new();
    let mut paths: Vec<_> = std::fs::read_dir(fixture_dir()).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    for p in paths {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        match codec::decode(&v).map(|d| d.document) {
            Ok(Document::Precategory(f)) => out.push(k_injectivity_report(&f)),
            Ok(Document::KObject(k)) => out.push(k_injectivity_report(&k)),
            Ok(Document::Strict { category, truncation }) => {
                if let Ok(f) = Precategory::from_strict_category(&category, truncation.unwrap_or(3)) {
                    out.push(k_injectivity_report(&f));
                }
            }
            Ok(Document::TwoConstant { data, truncation }) => {
                if let Ok((f, _)) = two_constant_transfer(&data, truncation.unwrap_or(3)) {
                    out.push(k_injectivity_report(&*f));
                }
            }
            _ => {}
        }
    }
    let mut r = rng(seed, 5);
    for i in 0..12 {
        let f = random_pointed(&mut r, BACKENDS[i % 3], 2, 3, 2);
        out.push(k_injectivity_report(&*f));
        out.push(k_injectivity_report(&gamma(&random_kobject(&mut r, BACKENDS[i % 3], 2, 3, 2))));
    }
    out
}

fn cosegalification(seed: u64) -> Line {
    let mut r = rng(seed, 6);
    let mut failures = Vec::new();
    for k in 0..COSEGALIFICATION_INSTANCES {
        let c = random_strict(&mut r, Backend::ChQ);
        let d = random_two_constant_data(&mut r, &c);
        let result = two_constant_transfer(&d, COSEGALIFICATION_TRUNCATION).and_then(|(f, _)| {
            let s = cosegalify_two_constant(&f)?;
            let again = realize(&s.result)?;
            Ok((s, again))
        });
        let (s, again) = match result {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("#{}: {}", k, e));
                continue;
            }
        };
        let cosegal = is_cosegal(&*s.result) && is_two_constant(&s.result);
        let identities = s
            .eta
            .components
            .iter()
            .filter(|(z, _)| degree(z) >= 2)
            .all(|(_, m)| m.src == m.tgt && m.mat == Mat::identity(m.src.dim()));
        let (a, b) = (&s.realization.category, &again.category);
        let same_realization = a.homs == b.homs
            && a.comp.len() == b.comp.len()
            && a.comp.iter().all(|(key, m)| b.comp.get(key).is_some_and(|x| x.mat == m.mat));
        if !(cosegal && identities && same_realization) {
            failures.push(format!("#{}: cosegal {} identities {} realization {}", k, cosegal, identities, same_realization));
        }
    }
    line(
        "two-constant-cosegalification",
        failures.is_empty(),
        format!(
            "{} chq inputs at truncation {}, failures {:?}",
            COSEGALIFICATION_INSTANCES, COSEGALIFICATION_TRUNCATION, failures
        ),
    )
}

fn fundamental_factorization() -> Line {
    let names = object_names(2);
    let chains: Vec<Vec<usize>> = all_chains(2, 3).into_iter().filter(|s| degree(s) >= 2).collect();
    let (mut cases, mut failures) = (0, Vec::new());
    for backend in BACKENDS {
        for alpha in generating_cofibrations(backend, (0, 0)) {
            for s in &chains {
                cases += 1;
                let ok = match psi_arrows(&names, 3, s, &alpha, DEFAULT_CAP) {
                    Ok(pa) => {
                        pa.xi.then(&pa.ell).same_components(&pa.down)
                            && pa.ell.components.iter().filter(|(z, _)| degree(z) == 1).all(|(_, m)| m.is_iso())
                    }
                    Err(_) => false,
                };
                if !ok {
                    failures.push(format!("{} {:?} {}", backend.name(), s, alpha.payload_string()));
                }
            }
        }
    }
    line(
        "fundamental-factorization",
        failures.is_empty(),
        format!("{} (generator, chain) cases over 2 objects, chains of degree 2 and 3, failures {:?}", cases, failures),
    )
}

fn homotopy_transfer() -> Line {
    let c = arrow_category(Backend::ChQ);
    let d = cylinder_data(&c);
    let mut parts = Vec::new();
    let mut ok = d.check().is_ok();
    for t in [3, 4] {
        match two_constant_transfer(&d, t) {
            Ok((f, eps)) => {
                let v = f.validate().is_ok();
                let u = f.check_unital().is_ok();
                let cs = is_cosegal(&*f);
                let e = eps.check().is_ok() && eps.is_easy_weak_equivalence();
                ok &= v && u && cs && e;
                parts.push(format!("truncation {}: valid {} unital {} co-Segal {} counit-easy-weq {}", t, v, u, cs, e));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("truncation {}: {}", t, e));
            }
        }
    }
    line("homotopy-transfer-of-cylinder-data", ok, format!("2-object chq category; {}", parts.join("; ")))
}

fn yoneda(seed: u64) -> Line {
    let mut r = rng(seed, 9);
    let mut inputs: Vec<Arc<Precategory>> = Vec::new();
    for i in 0..18 {
        let n = r.gen_range(1..=2);
        inputs.push(random_pointed(&mut r, BACKENDS[i % 3], n, 3, 1));
    }
    for i in 0..9 {
        let c = random_strict(&mut r, BACKENDS[i % 3]);
        inputs.push(Arc::new(Precategory::from_strict_category(&c, 3).unwrap()));
    }
    for _ in 0..3 {
        let c = random_strict(&mut r, Backend::ChQ);
        inputs.push(two_constant_transfer(&random_two_constant_data(&mut r, &c), 3).unwrap().0);
    }
    let (mut modules, mut pairs, mut inherited, mut failures) = (0, 0, 0, Vec::new());
    for (k, f) in inputs.iter().enumerate() {
        let cosegal = is_cosegal(&**f);
        for a in 0..f.n() {
            modules += 1;
            let rep = yoneda_module(f, a).and_then(|fa| yoneda_report(f, &fa));
            match rep {
                Ok(y) => {
                    pairs += y.simplicial_pairs;
                    let inherits = !cosegal || y.cosegal == Some(true);
                    inherited += (cosegal && inherits) as usize;
                    if !(y.validate.is_ok() && y.simplicial_failures.is_empty() && inherits) {
                        failures.push(format!("#{} A={}", k, a));
                    }
                }
                Err(e) => failures.push(format!("#{} A={}: {}", k, a, e)),
            }
        }
    }
    line(
        "yoneda-module-is-precategory-and-inherits-cosegal",
        failures.is_empty(),
        format!(
            "{} modules, {} simplicial pairs compared, {} co-Segal inputs inherited, failures {:?}",
            modules, pairs, inherited, failures
        ),
    )
}

fn exhaustive_nat_object(sigmas: &[PrecatMorphism]) -> Result<(usize, usize), String> {
    let o = nat_transform_object(sigmas).map_err(|e| e.to_string())?;
    let mut members = 0;
    for p in 0..o.product.dim() {
        let v = unit_vec(p);
        let axiom = o.transform(&v).check().map_err(|e| e.to_string())?.is_ok();
        if axiom != o.contains(&v) {
            return Err(format!("element {} disagrees", p));
        }
        members += axiom as usize;
    }
    if members != o.object.dim() {
        return Err(format!("{} members, object of size {}", members, o.object.dim()));
    }
    Ok((o.product.dim(), members))
}

fn monoidal(seed: u64) -> Line {
    let mut r = rng(seed, 10);
    let mut failures = Vec::new();
    let mut iso_checks = 0;
    for i in 0..12 {
        let b = BACKENDS[i % 3];
        let n = r.gen_range(1..=2);
        let f = random_pointed(&mut r, b, n, 2, 1);
        let g = random_pointed(&mut r, b, 1, 2, 1);
        let h = Precategory::from_strict_category(&random_strict(&mut r, b), 2).unwrap();
        let units = unit_laws(&f).map(|(ru, lu)| ru.is_ok() && lu.is_ok()).unwrap_or(false);
        let assoc = associator_s(&f, &g, &h).map(|m| check_isomorphism(&m).is_ok()).unwrap_or(false);
        let sym = symmetry_s(&f, &g).map(|m| check_isomorphism(&m).is_ok()).unwrap_or(false);
        iso_checks += 4;
        if !(units && assoc && sym) {
            failures.push(format!("#{} {}: unit {} assoc {} sym {}", i, b.name(), units, assoc, sym));
        }
    }
    let mut instances: Vec<Arc<Precategory>> = Vec::new();
    for _ in 0..4 {
        let k = r.gen_range(2..=3);
        instances.push(Arc::new(Precategory::from_strict_category(&random_monoid(&mut r, k), 3).unwrap()));
    }
    instances.push(Arc::new(Precategory::from_strict_category(&arrow_category(Backend::FinSet), 3).unwrap()));
    for _ in 0..3 {
        instances.push(random_pointed(&mut r, Backend::FinSet, 1, 3, 1));
    }
    let (mut elements, mut members) = (0, 0);
    for (k, f) in instances.iter().enumerate() {
        for n in 2..=3 {
            let sigmas: Vec<PrecatMorphism> = (0..n).map(|_| f.identity_morphism()).collect();
            match exhaustive_nat_object(&sigmas) {
                Ok((e, m)) => {
                    elements += e;
                    members += m;
                }
                Err(e) => failures.push(format!("nat-object #{} n={}: {}", k, n, e)),
            }
        }
    }
    line(
        "monoidal-unit-associativity-symmetry-and-nat-object",
        failures.is_empty(),
        format!(
            "{} isomorphism checks; nat-object: {} finset elements enumerated, {} members; failures {:?}",
            iso_checks, elements, members, failures
        ),
    )
}

fn main() {
    let seed = std::env::var("COSEGAL_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(2024);
    let start = Instant::now();
    println!("acceptance: seed {}, exact comparisons (tolerance {})", seed, TOLERANCE);
    let mut lines = vec![gamma_invariance(seed)];
    let (us, max_dim) = unitalizations(seed);
    lines.push(unitalization_theorem(&us, max_dim));
    lines.push(levelwise_colimits(&us));
    lines.push(colimit_lemmas(seed));
    lines.push(lifting_characterization(seed));
    lines.push(cosegalification(seed));
    lines.push(fundamental_factorization());
    lines.push(homotopy_transfer());
    lines.push(yoneda(seed));
    lines.push(monoidal(seed));
    let elapsed = start.elapsed();
    for l in &lines {
        println!("{} {}: {}", if l.ok { "PASS" } else { "FAIL" }, l.name, l.detail);
    }
    let passed = lines.iter().filter(|l| l.ok).count();
    let in_time = elapsed < SUITE_TIME_LIMIT;
    println!(
        "{} suite-runtime: {:.1}s (limit {}s)",
        if in_time { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        SUITE_TIME_LIMIT.as_secs()
    );
    println!("acceptance: {}/{} properties hold", passed, lines.len());
    if passed != lines.len() || !in_time {
        std::process::exit(1);
    }
}
