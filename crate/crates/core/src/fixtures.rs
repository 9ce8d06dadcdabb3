//! Random and canonical test objects.
//!
//! Random functors on `S_X(A,B)^op` are built as sums of free functors on
//! seed chains, then quotiented by random relations pushed along the
//! structure maps, so functoriality holds by construction. Random
//! precategories are random congruence quotients of `Γ` of those.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::adjoints::{congruence_quotient, gamma, RelationSet};
use crate::base::{self as model, coproduct_in, Backend, MMorphism, MObject, Relations};
use crate::linalg::{q, unit_vec, Mat, SVec};
use crate::homotopy::TwoConstantData;
use crate::precat::{Diagram, KObject, Precategory, StrictCategory};
use crate::shapes::{all_chains, compose_deletions, degree, delete_at, hom_set, Chain, Deletion};

pub fn object_names(n: usize) -> Vec<String> {
    ["A", "B", "C", "D", "E"].iter().take(n).map(|s| String::from(*s)).collect()
}

/// A random object of dimension at most `maxdim`.
pub fn random_object<R: Rng>(rng: &mut R, backend: Backend, maxdim: usize) -> MObject {
    let d = rng.gen_range(0..=maxdim);
    match backend {
        Backend::FinSet => MObject::finset_n(d),
        Backend::VectQ => MObject::vectq(d),
        Backend::ChQ => {
            let mut parts = Vec::new();
            let mut left = d;
            while left > 0 {
                let n = rng.gen_range(0..=1);
                if left >= 2 && rng.gen_bool(0.4) {
                    parts.push(model::disk(n + 1));
                    left -= 2;
                } else {
                    parts.push(model::sphere(n + 1));
                    left -= 1;
                }
            }
            let refs: Vec<&MObject> = parts.iter().collect();
            coproduct_in(Backend::ChQ, &refs).0
        }
    }
}

/// A random morphism `a → b`, or `None` when there is none (a nonempty set into
/// the empty set).
pub fn random_morphism<R: Rng>(rng: &mut R, a: &MObject, b: &MObject) -> Option<MMorphism> {
    match a.backend() {
        Backend::FinSet => {
            if b.dim() == 0 && a.dim() > 0 {
                return None;
            }
            let f: Vec<usize> = (0..a.dim()).map(|_| rng.gen_range(0..b.dim())).collect();
            Some(MMorphism::from_function(a.clone(), b.clone(), &f))
        }
        Backend::VectQ => {
            let cols = (0..a.dim())
                .map(|_| (0..b.dim()).filter_map(|i| small(rng).map(|x| (i, x))).collect())
                .collect();
            Some(MMorphism::from_columns(a.clone(), b.clone(), cols))
        }
        Backend::ChQ => {
            let mut m = Mat::zero(b.dim(), a.dim());
            for basis in model::chain_map_basis(a, b) {
                if let Some(x) = small(rng) {
                    m = m.add(&basis.scale(&x));
                }
            }
            Some(MMorphism::new_unchecked(a.clone(), b.clone(), m))
        }
    }
}

fn small<R: Rng>(rng: &mut R) -> Option<crate::linalg::Q> {
    match rng.gen_range(0..4) {
        0 => Some(q(1)),
        1 => Some(q(-1)),
        2 => Some(q(2)),
        _ => None,
    }
}

/// The free functor on a seed object placed at chain `w`: copies of `v`
/// indexed by the deletions `z → w`.
pub fn free_on_seed(k: &KObject, w: &[usize], v: &MObject) -> (BTreeMap<Chain, MObject>, BTreeMap<(Chain, usize), MMorphism>) {
    let mut values = BTreeMap::new();
    let mut homs = BTreeMap::new();
    let mut injections = BTreeMap::new();
    let (a, b) = (w[0], w[w.len() - 1]);
    let chains: Vec<Chain> = all_chains(k.n(), k.truncation).into_iter().filter(|z| z[0] == a && z[z.len() - 1] == b).collect();
    for z in &chains {
        let hs = hom_set(z, w).unwrap_or_default();
        let copies: Vec<&MObject> = hs.iter().map(|_| v).collect();
        let (sum, inj) = coproduct_in(v.backend(), &copies);
        values.insert(z.clone(), sum);
        homs.insert(z.clone(), hs);
        injections.insert(z.clone(), inj);
    }
    let mut gens = BTreeMap::new();
    for z in &chains {
        for p in 1..degree(z) {
            let zp = delete_at(z, p);
            let e = Deletion { source: z.clone(), deleted: vec![p] };
            let mut cols: Vec<SVec> = Vec::new();
            for h in &homs[&zp] {
                let hh = compose_deletions(h, &e).expect("composable");
                let k2 = homs[z].iter().position(|d| *d == hh).expect("deletion");
                cols.extend(injections[z][k2].mat.data.iter().cloned());
            }
            gens.insert((z.clone(), p), MMorphism::from_columns(values[&zp].clone(), values[z].clone(), cols));
        }
    }
    (values, gens)
}

/// Sums the free functors on the given seeds, component by component.
pub fn kobject_from_seeds(backend: Backend, objects: Vec<String>, truncation: usize, seeds: &[(Chain, MObject)]) -> KObject {
    let mut k = KObject::new(backend, objects, truncation);
    let frees: Vec<_> = seeds.iter().map(|(w, v)| (w[0], w[w.len() - 1], free_on_seed(&k, w, v))).collect();
    for z in all_chains(k.n(), truncation) {
        let (a, b) = (z[0], z[z.len() - 1]);
        let here: Vec<&(BTreeMap<Chain, MObject>, BTreeMap<(Chain, usize), MMorphism>)> =
            frees.iter().filter(|(x, y, _)| *x == a && *y == b).map(|(_, _, f)| f).collect();
        let vals: Vec<&MObject> = here.iter().map(|f| &f.0[&z]).collect();
        let (sum, _) = coproduct_in(backend, &vals);
        k.values.insert(z.clone(), sum);
    }
    for z in all_chains(k.n(), truncation) {
        let (a, b) = (z[0], z[z.len() - 1]);
        let here: Vec<_> = frees.iter().filter(|(x, y, _)| *x == a && *y == b).map(|(_, _, f)| f).collect();
        for p in 1..degree(&z) {
            let zp = delete_at(&z, p);
            let mut cols = Vec::new();
            let mut off = 0;
            for f in &here {
                let g = &f.1[&(z.clone(), p)];
                for c in &g.mat.data {
                    cols.push(c.iter().map(|(i, x)| (i + off, x.clone())).collect());
                }
                off += f.0[&z].dim();
            }
            let g = MMorphism::from_columns(k.value(&zp), k.value(&z), cols);
            k.generators.insert((z.clone(), p), g);
        }
    }
    k
}

fn random_relation<R: Rng>(rng: &mut R, x: &MObject) -> Option<(SVec, SVec)> {
    if x.dim() < 2 {
        return None;
    }
    let i = rng.gen_range(0..x.dim());
    let j = rng.gen_range(0..x.dim());
    (i != j && x.degree(i) == x.degree(j)).then(|| (unit_vec(i), unit_vec(j)))
}

/// Quotients a functor by random relations closed under its structure maps.
pub fn random_quotient<R: Rng>(rng: &mut R, k: &KObject, rate: f64) -> KObject {
    let mut gens: BTreeMap<Chain, Vec<(SVec, SVec)>> = BTreeMap::new();
    let mut quots = BTreeMap::new();
    for z in k.chains() {
        let x = k.value(&z);
        let mut r = Relations::new(&x);
        for p in 1..degree(&z) {
            let g = k.generator(&z, p);
            for (u, w) in &gens[&delete_at(&z, p)] {
                r.relate(&x, &g.apply(u), &g.apply(w));
            }
        }
        if degree(&z) >= 2 && rng.gen_bool(rate) {
            if let Some((u, w)) = random_relation(rng, &x) {
                r.relate(&x, &u, &w);
            }
        }
        gens.insert(z.clone(), r.generators());
        quots.insert(z, r.quotient(&x));
    }
    let mut out = KObject::new(k.backend, k.objects.clone(), k.truncation);
    for (z, qz) in &quots {
        out.values.insert(z.clone(), qz.obj.clone());
    }
    for ((z, p), g) in &k.generators {
        let m = quots[z].proj.after(g).after(&quots[&delete_at(z, *p)].section);
        out.generators.insert((z.clone(), *p), m);
    }
    out
}

/// A random functor with one seed at every `(A,B)` and up to one seed at a
/// longer chain per component, then a random quotient.
pub fn random_kobject<R: Rng>(rng: &mut R, backend: Backend, n: usize, truncation: usize, maxdim: usize) -> KObject {
    let objects = object_names(n);
    let mut seeds = Vec::new();
    for a in 0..n {
        for b in 0..n {
            seeds.push((vec![a, b], random_object(rng, backend, maxdim)));
            if truncation >= 2 && rng.gen_bool(0.5) {
                let d = rng.gen_range(2..=truncation.min(3));
                let mut w = vec![a];
                for _ in 1..d {
                    w.push(rng.gen_range(0..n));
                }
                w.push(b);
                seeds.push((w, random_object(rng, backend, 1)));
            }
        }
    }
    let k = kobject_from_seeds(backend, objects, truncation, &seeds);
    random_quotient(rng, &k, 0.3)
}

/// A random precategory: `Γ` of a random functor, quotiented by random
/// relations closed into a congruence.
pub fn random_precategory<R: Rng>(rng: &mut R, backend: Backend, n: usize, truncation: usize, maxdim: usize) -> Precategory {
    let k = random_kobject(rng, backend, n, truncation, maxdim);
    let g = gamma(&k);
    let mut rels: RelationSet = BTreeMap::new();
    for z in g.chains() {
        if degree(&z) >= 2 && rng.gen_bool(0.3) {
            if let Some(r) = random_relation(rng, &g.value(&z)) {
                rels.entry(z).or_default().push(r);
            }
        }
    }
    congruence_quotient(&g, &rels).result
}

/// A random pointed precategory.
pub fn random_pointed<R: Rng>(rng: &mut R, backend: Backend, n: usize, truncation: usize, maxdim: usize) -> Arc<Precategory> {
    let f = Arc::new(random_precategory(rng, backend, n, truncation, maxdim));
    crate::adjoints::point(&f).result
}

/// The commutative algebra `Q[x]/(x^k)` as a one-object category.
pub fn truncated_polynomials(backend: Backend, k: usize) -> StrictCategory {
    assert!(backend.is_linear(), "truncated polynomials need a linear backend");
    let objects = object_names(1);
    let hom = match backend {
        Backend::ChQ => MObject::chq_graded(0, &[k]),
        _ => MObject::vectq(k),
    };
    let t = crate::base::tensor(&hom, &hom);
    let mut cols = Vec::new();
    for i in 0..k {
        for j in 0..k {
            cols.push(if i + j < k { unit_vec(i + j) } else { Vec::new() });
        }
    }
    let m = MMorphism::from_columns(t, hom.clone(), cols);
    let id = MMorphism::from_columns(MObject::unit(backend), hom.clone(), vec![unit_vec(0)]);
    let mut homs = BTreeMap::new();
    homs.insert((0, 0), hom);
    let mut comp = BTreeMap::new();
    comp.insert((0, 0, 0), m);
    StrictCategory { backend, objects, homs, comp, ids: Some(vec![id]) }
}

/// The free category on the arrow `A → B`, with `hom(A,B) = I` and `∅`/`0`
/// from `B` to `A`.
pub fn arrow_category(backend: Backend) -> StrictCategory {
    let objects = object_names(2);
    let unit = MObject::unit(backend);
    let empty = MObject::initial(backend);
    let mut homs = BTreeMap::new();
    for a in 0..2 {
        for b in 0..2 {
            homs.insert((a, b), if a <= b { unit.clone() } else { empty.clone() });
        }
    }
    let mut comp = BTreeMap::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let src = crate::base::tensor(&homs[&(a, b)], &homs[&(b, c)]);
                let tgt = homs[&(a, c)].clone();
                let m = if src.dim() == 0 { MMorphism::from_initial(&tgt) } else { MMorphism::identity(&tgt) };
                comp.insert((a, b, c), MMorphism::new_unchecked(src, tgt, m.mat));
            }
        }
    }
    let ids = Some((0..2).map(|_| MMorphism::identity(&unit)).collect());
    StrictCategory { backend, objects, homs, comp, ids }
}

/// A random finite monoid on `k` elements as a one-object category in sets:
/// multiplication tables of `max`, addition mod `k`, or `min` with `0` as identity.
pub fn random_monoid<R: Rng>(rng: &mut R, k: usize) -> StrictCategory {
    let kind = rng.gen_range(0..3);
    let names: Vec<String> = (0..k).map(|i| format!("m{}", i)).collect();
    let hom = MObject::finset_unchecked(names);
    let t = crate::base::tensor(&hom, &hom);
    let mut f = Vec::new();
    for i in 0..k {
        for j in 0..k {
            f.push(match kind {
                0 => i.max(j),
                1 => (i + j) % k,
                _ => if i == 0 { j } else if j == 0 { i } else { i.min(j) },
            });
        }
    }
    let mut homs = BTreeMap::new();
    homs.insert((0, 0), hom.clone());
    let mut comp = BTreeMap::new();
    comp.insert((0, 0, 0), MMorphism::from_function(t, hom.clone(), &f));
    let id = MMorphism::from_function(MObject::unit(Backend::FinSet), hom, &[0]);
    StrictCategory { backend: Backend::FinSet, objects: object_names(1), homs, comp, ids: Some(vec![id]) }
}

/// Two-constant data over `C` where `C̃(A,B) = R` for `A ≠ B` and
/// `C̃(A,A) = I ⊕ R`, with `R` random and a random map `R → C(A,B)`.
pub fn random_two_constant_data<R: Rng>(rng: &mut R, c: &StrictCategory) -> TwoConstantData {
    let n = c.objects.len();
    let ids = c.ids.clone().expect("category with identities");
    let unit = MObject::unit(c.backend);
    let mut replacements = BTreeMap::new();
    let mut units = vec![MMorphism::identity(&unit); n];
    for a in 0..n {
        for b in 0..n {
            let hom = c.hom(a, b);
            let extra = random_object(rng, c.backend, 2);
            let g = random_morphism(rng, &extra, hom);
            let (extra, g) = match g {
                Some(g) => (extra, g),
                None => {
                    let e = MObject::initial(c.backend);
                    (e.clone(), MMorphism::from_initial(hom))
                }
            };
            if a == b {
                let (sum, inj) = coproduct_in(c.backend, &[&unit, &extra]);
                let f = crate::base::copair(&sum, &[&ids[a], &g], hom);
                units[a] = inj[0].clone();
                replacements.insert((a, b), f);
            } else {
                replacements.insert((a, b), g);
            }
        }
    }
    TwoConstantData { category: c.clone(), replacements, units }
}

/// Two-constant data whose replacements are the mapping-cylinder trivial
/// fibrations `Cyl(id) → C(A,B)`.
pub fn cylinder_data(c: &StrictCategory) -> TwoConstantData {
    let n = c.objects.len();
    let ids = c.ids.clone().expect("category with identities");
    let mut replacements = BTreeMap::new();
    let mut units = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let (cof, tfib) = model::factorize(&MMorphism::identity(c.hom(a, b)));
            if a == b {
                units.push(cof.after(&ids[a]));
            }
            replacements.insert((a, b), tfib);
        }
    }
    TwoConstantData { category: c.clone(), replacements, units }
}

/// A small strict category chosen at random: a truncated polynomial algebra
/// (a small monoid for finite sets) or the arrow category.
pub fn random_strict<R: Rng>(rng: &mut R, backend: Backend) -> StrictCategory {
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=2);
        match backend {
            Backend::FinSet => random_monoid(rng, k),
            _ => truncated_polynomials(backend, k),
        }
    } else {
        arrow_category(backend)
    }
}

/// A crossing pair of sequences from a tower of quotients `X/U_0 → X/U_1 → …`
/// with `C_k = X/U_{2k}` and `D_k = X/U_{2k+1}`. Relations stop early enough
/// that both sequences stabilize. Returns `(η, ε)` with `m + 1` and `m` maps.
pub fn crossing_tower<R: Rng>(rng: &mut R, backend: Backend, maxdim: usize, m: usize) -> (Vec<MMorphism>, Vec<MMorphism>) {
    let x = random_object(rng, backend, maxdim);
    let mut rels = Relations::new(&x);
    let mut quotients = Vec::with_capacity(2 * m + 2);
    for j in 0..2 * m + 2 {
        if j > 0 && j + 2 < 2 * m && x.dim() > 0 && rng.gen_bool(0.6) {
            let (a, b) = (rng.gen_range(0..x.dim()), rng.gen_range(0..x.dim()));
            if x.degree(a) == x.degree(b) {
                rels.relate(&x, &unit_vec(a), &unit_vec(b));
            }
        }
        quotients.push(rels.quotient(&x));
    }
    let step = |j: usize| quotients[j + 1].proj.after(&quotients[j].section);
    let eta = (0..=m).map(|k| step(2 * k)).collect();
    let eps = (0..m).map(|k| step(2 * k + 1)).collect();
    (eta, eps)
}

/// A random family of at most `k` spans `C_i ← A_i → B` into one object `B`.
pub fn random_span_family<R: Rng>(rng: &mut R, backend: Backend, maxdim: usize, k: usize) -> (MObject, Vec<(MMorphism, MMorphism)>) {
    let b = random_object(rng, backend, maxdim);
    let mut data = Vec::new();
    let count = rng.gen_range(0..=k);
    while data.len() < count {
        let a = random_object(rng, backend, maxdim);
        let c = random_object(rng, backend, maxdim);
        if let (Some(p), Some(h)) = (random_morphism(rng, &a, &c), random_morphism(rng, &a, &b)) {
            data.push((p, h));
        }
    }
    (b, data)
}
