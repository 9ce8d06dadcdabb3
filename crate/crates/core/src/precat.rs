//! Truncated precategories, their morphisms, and the axiom checkers.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::base::{is_weak_equivalence, tensor, tensor_mor, Backend, MMorphism, MObject};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::shapes::{
    all_chains, chain_to_string, concat_unchecked, degree, delete_at, first, hom_set, last, Chain, Deletion,
};

/// One failed commuting diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: String,
    pub location: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, kind: &str, location: String, lhs: String, rhs: String) {
        self.violations.push(Violation { kind: kind.to_string(), location, lhs, rhs });
    }

    fn missing(&mut self, location: String) {
        self.push("missing", location, String::new(), String::new());
    }

    fn mismatch(&mut self, kind: &str, location: String, lhs: &MMorphism, rhs: &MMorphism) {
        self.push(kind, location, lhs.payload_string(), rhs.payload_string());
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }
}

/// A functor `S_X(A,B)^op → M` for every pair, truncated, without laxity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KObject {
    pub backend: Backend,
    pub objects: Vec<String>,
    pub truncation: usize,
    pub values: BTreeMap<Chain, MObject>,
    /// `(z, p)` ↦ the map `F(z∖p) → F(z)`.
    pub generators: BTreeMap<(Chain, usize), MMorphism>,
}

/// A truncated normal lax functor `S_X^op → M`, optionally pointed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precategory {
    pub backend: Backend,
    pub objects: Vec<String>,
    pub truncation: usize,
    pub values: BTreeMap<Chain, MObject>,
    /// `(z, p)` ↦ the map `F(z∖p) → F(z)`.
    pub generators: BTreeMap<(Chain, usize), MMorphism>,
    /// `(s, t)` ↦ `φ: F(s) ⊗ F(t) → F(s ⊗ t)`.
    pub laxity: BTreeMap<(Chain, Chain), MMorphism>,
    /// Unit points `I → F(A, A)`.
    pub units: Option<Vec<MMorphism>>,
}

/// Shared behavior of functors on `S_X^op` (with or without laxity).
pub trait Diagram {
    fn backend(&self) -> Backend;
    fn objects(&self) -> &[String];
    fn truncation(&self) -> usize;
    fn values(&self) -> &BTreeMap<Chain, MObject>;
    fn generators(&self) -> &BTreeMap<(Chain, usize), MMorphism>;

    fn n(&self) -> usize {
        self.objects().len()
    }

    fn name(&self, z: &[usize]) -> String {
        chain_to_string(self.objects(), z)
    }

    fn chains(&self) -> Vec<Chain> {
        all_chains(self.n(), self.truncation())
    }

    /// `F(z)`; degree-0 chains evaluate to the unit.
    fn value(&self, z: &[usize]) -> MObject {
        if degree(z) == 0 {
            return MObject::unit(self.backend());
        }
        self.values()
            .get(z)
            .cloned()
            .unwrap_or_else(|| panic!("no value at {}", self.name(z)))
    }

    fn generator(&self, z: &[usize], p: usize) -> &MMorphism {
        self.generators()
            .get(&(z.to_vec(), p))
            .unwrap_or_else(|| panic!("no generator at {} position {}", self.name(z), p))
    }

    /// `F(d): F(target) → F(source)` from the generator word of `d`.
    fn structure_map(&self, d: &Deletion) -> MMorphism {
        let steps = d.generator_steps();
        let mut m = MMorphism::identity(&self.value(&d.target()));
        for (z, p) in steps.iter().rev() {
            m = self.generator(z, *p).after(&m);
        }
        m
    }

    /// `F(u_s): F(A, B) → F(s)`.
    fn u_map(&self, s: &[usize]) -> MMorphism {
        self.structure_map(&Deletion::to_endpoints(s))
    }

    /// Completeness, typing and functoriality of the structure maps.
    fn validate_functor(&self, report: &mut Report) {
        let chains = self.chains();
        for z in &chains {
            match self.values().get(z) {
                None => report.missing(format!("value {}", self.name(z))),
                Some(x) => {
                    if x.backend() != self.backend() {
                        report.push("backend", self.name(z), x.backend().name().into(), self.backend().name().into());
                    } else if let Err(e) = x.check() {
                        report.push("invalid-object", self.name(z), e.to_string(), String::new());
                    }
                }
            }
        }
        if !report.is_ok() {
            return;
        }
        for z in &chains {
            for p in 1..degree(z) {
                let loc = format!("generator {} at {}", self.name(z), p);
                let Some(g) = self.generators().get(&(z.clone(), p)) else {
                    report.missing(loc);
                    continue;
                };
                if g.src != self.value(&delete_at(z, p)) || g.tgt != self.value(z) {
                    report.push("typing", loc, g.src.to_string(), g.tgt.to_string());
                } else if let Err(e) = g.check() {
                    report.push("invalid-morphism", loc, e.to_string(), String::new());
                }
            }
        }
        if !report.is_ok() {
            return;
        }
        for z in &chains {
            let d = degree(z);
            for q in 2..d {
                for p in 1..q {
                    let lhs = self.generator(z, q).after(self.generator(&delete_at(z, q), p));
                    let rhs = self.generator(z, p).after(self.generator(&delete_at(z, p), q - 1));
                    if lhs.mat != rhs.mat {
                        report.mismatch("functoriality", format!("{} positions {},{}", self.name(z), p, q), &lhs, &rhs);
                    }
                }
            }
        }
    }
}

impl Diagram for KObject {
    fn backend(&self) -> Backend {
        self.backend
    }
    fn objects(&self) -> &[String] {
        &self.objects
    }
    fn truncation(&self) -> usize {
        self.truncation
    }
    fn values(&self) -> &BTreeMap<Chain, MObject> {
        &self.values
    }
    fn generators(&self) -> &BTreeMap<(Chain, usize), MMorphism> {
        &self.generators
    }
}

impl Diagram for Precategory {
    fn backend(&self) -> Backend {
        self.backend
    }
    fn objects(&self) -> &[String] {
        &self.objects
    }
    fn truncation(&self) -> usize {
        self.truncation
    }
    fn values(&self) -> &BTreeMap<Chain, MObject> {
        &self.values
    }
    fn generators(&self) -> &BTreeMap<(Chain, usize), MMorphism> {
        &self.generators
    }
}

impl KObject {
    pub fn new(backend: Backend, objects: Vec<String>, truncation: usize) -> KObject {
        KObject { backend, objects, truncation, values: BTreeMap::new(), generators: BTreeMap::new() }
    }

    pub fn validate(&self) -> Report {
        let mut r = Report::default();
        self.validate_functor(&mut r);
        r
    }
}

/// Composable pairs `(s, t)` of positive degree with `deg s + deg t ≤ n`.
pub fn composable_pairs(objects: usize, n: usize) -> Vec<(Chain, Chain)> {
    let chains = all_chains(objects, n.saturating_sub(1));
    let mut out = Vec::new();
    for s in &chains {
        for t in &chains {
            if last(s) == first(t) && degree(s) + degree(t) <= n {
                out.push((s.clone(), t.clone()));
            }
        }
    }
    out
}

/// A strict (semi-)category enriched in a backend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictCategory {
    pub backend: Backend,
    pub objects: Vec<String>,
    pub homs: BTreeMap<(usize, usize), MObject>,
    /// `(a, b, c)` ↦ `C(a,b) ⊗ C(b,c) → C(a,c)`.
    pub comp: BTreeMap<(usize, usize, usize), MMorphism>,
    pub ids: Option<Vec<MMorphism>>,
}

impl StrictCategory {
    pub fn hom(&self, a: usize, b: usize) -> &MObject {
        &self.homs[&(a, b)]
    }

    pub fn check(&self) -> Report {
        let mut r = Report::default();
        let n = self.objects.len();
        let name = |v: &[usize]| chain_to_string(&self.objects, v);
        for a in 0..n {
            for b in 0..n {
                match self.homs.get(&(a, b)) {
                    None => r.missing(format!("hom {}", name(&[a, b]))),
                    Some(h) if h.backend() != self.backend => {
                        r.push("backend", format!("hom {}", name(&[a, b])), h.backend().name().into(), self.backend.name().into())
                    }
                    _ => {}
                }
            }
        }
        if !r.is_ok() {
            return r;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let loc = format!("composition {}", name(&[a, b, c]));
                    match self.comp.get(&(a, b, c)) {
                        None => r.missing(loc),
                        Some(m) => {
                            if m.src != tensor(self.hom(a, b), self.hom(b, c)) || m.tgt != *self.hom(a, c) {
                                r.push("typing", loc, m.src.to_string(), m.tgt.to_string());
                            } else if let Err(e) = m.check() {
                                r.push("invalid-morphism", loc, e.to_string(), String::new());
                            }
                        }
                    }
                }
            }
        }
        if !r.is_ok() {
            return r;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let ab = MMorphism::identity(self.hom(a, b));
                        let cd = MMorphism::identity(self.hom(c, d));
                        let lhs = self.comp[&(a, c, d)].after(&tensor_mor(&self.comp[&(a, b, c)], &cd));
                        let rhs = self.comp[&(a, b, d)].after(&tensor_mor(&ab, &self.comp[&(b, c, d)]));
                        if lhs.mat != rhs.mat {
                            r.mismatch("associativity", name(&[a, b, c, d]), &lhs, &rhs);
                        }
                    }
                }
            }
        }
        if let Some(ids) = &self.ids {
            if ids.len() != n {
                r.missing("identities".into());
                return r;
            }
            for a in 0..n {
                let u = MObject::unit(self.backend);
                if ids[a].src != u || ids[a].tgt != *self.hom(a, a) {
                    r.push("typing", format!("identity {}", self.objects[a]), ids[a].src.to_string(), ids[a].tgt.to_string());
                    continue;
                }
                for b in 0..n {
                    let x = self.hom(a, b);
                    let id = MMorphism::identity(x);
                    let left = self.comp[&(a, a, b)].after(&tensor_mor(&ids[a], &id));
                    if left.mat != Mat::identity(x.dim()) {
                        r.mismatch("left-unit", name(&[a, b]), &left, &id);
                    }
                    let y = self.hom(b, a);
                    let idy = MMorphism::identity(y);
                    let right = self.comp[&(b, a, a)].after(&tensor_mor(&idy, &ids[a]));
                    if right.mat != Mat::identity(y.dim()) {
                        r.mismatch("right-unit", name(&[b, a]), &right, &idy);
                    }
                }
            }
        }
        r
    }

    /// The discrete category on `objects`: `I` on the diagonal, `∅` elsewhere.
    pub fn discrete(backend: Backend, objects: Vec<String>) -> StrictCategory {
        let n = objects.len();
        let i = MObject::unit(backend);
        let e = MObject::initial(backend);
        let mut homs = BTreeMap::new();
        let mut comp = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                homs.insert((a, b), if a == b { i.clone() } else { e.clone() });
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let src = tensor(&homs[&(a, b)], &homs[&(b, c)]);
                    let tgt = &homs[&(a, c)];
                    comp.insert((a, b, c), MMorphism::new_unchecked(src.clone(), tgt.clone(), Mat::from_function(tgt.dim(), &(0..src.dim()).collect::<Vec<_>>())));
                }
            }
        }
        let ids = Some((0..n).map(|_| MMorphism::identity(&i)).collect());
        StrictCategory { backend, objects, homs, comp, ids }
    }
}

impl Precategory {
    pub fn new(backend: Backend, objects: Vec<String>, truncation: usize) -> Precategory {
        Precategory {
            backend,
            objects,
            truncation,
            values: BTreeMap::new(),
            generators: BTreeMap::new(),
            laxity: BTreeMap::new(),
            units: None,
        }
    }

    pub fn is_pointed(&self) -> bool {
        self.units.is_some()
    }

    pub fn unit_point(&self, a: usize) -> &MMorphism {
        &self.units.as_ref().expect("precategory is not pointed")[a]
    }

    /// `φ(s, t)`; the unitor when either chain has degree 0.
    pub fn phi(&self, s: &[usize], t: &[usize]) -> MMorphism {
        if degree(s) == 0 || degree(t) == 0 {
            let src = tensor(&self.value(s), &self.value(t));
            let tgt = self.value(&concat_unchecked(s, t));
            return MMorphism::new_unchecked(src, tgt.clone(), Mat::identity(tgt.dim()));
        }
        self.laxity
            .get(&(s.to_vec(), t.to_vec()))
            .cloned()
            .unwrap_or_else(|| panic!("no laxity at {} ⊗ {}", self.name(s), self.name(t)))
    }

    /// Iterated laxity `F(s_1) ⊗ … ⊗ F(s_k) → F(s_1 ⊗ … ⊗ s_k)`, bracketed from the left.
    pub fn phi_list(&self, parts: &[Chain]) -> MMorphism {
        let mut acc = MMorphism::identity(&self.value(&parts[0]));
        let mut chain = parts[0].clone();
        for t in &parts[1..] {
            let id_t = MMorphism::identity(&self.value(t));
            let next = self.phi(&chain, t);
            acc = next.after(&tensor_mor(&acc, &id_t));
            chain = concat_unchecked(&chain, t);
        }
        acc
    }

    pub fn underlying(&self) -> KObject {
        KObject {
            backend: self.backend,
            objects: self.objects.clone(),
            truncation: self.truncation,
            values: self.values.clone(),
            generators: self.generators.clone(),
        }
    }

    /// Checks completeness, typing, functoriality, naturality and associativity of the laxity.
    pub fn validate(&self) -> Report {
        let mut r = Report::default();
        self.validate_functor(&mut r);
        if !r.is_ok() {
            return r;
        }
        let pairs = composable_pairs(self.n(), self.truncation);
        for (s, t) in &pairs {
            let loc = format!("laxity {} ⊗ {}", self.name(s), self.name(t));
            match self.laxity.get(&(s.clone(), t.clone())) {
                None => r.missing(loc),
                Some(m) => {
                    let st = concat_unchecked(s, t);
                    if m.src != tensor(&self.value(s), &self.value(t)) || m.tgt != self.value(&st) {
                        r.push("typing", loc, m.src.to_string(), m.tgt.to_string());
                    } else if let Err(e) = m.check() {
                        r.push("invalid-morphism", loc, e.to_string(), String::new());
                    }
                }
            }
        }
        if let Some(units) = &self.units {
            if units.len() != self.n() {
                r.missing("unit points".into());
            } else {
                for (a, u) in units.iter().enumerate() {
                    if u.src != MObject::unit(self.backend) || u.tgt != self.value(&[a, a]) {
                        r.push("typing", format!("unit {}", self.objects[a]), u.src.to_string(), u.tgt.to_string());
                    } else if let Err(e) = u.check() {
                        r.push("invalid-morphism", format!("unit {}", self.objects[a]), e.to_string(), String::new());
                    }
                }
            }
        }
        if !r.is_ok() {
            return r;
        }
        for (s, t) in &pairs {
            let st = concat_unchecked(s, t);
            let phi = self.phi(s, t);
            let id_s = MMorphism::identity(&self.value(s));
            let id_t = MMorphism::identity(&self.value(t));
            for p in 1..degree(s) {
                let lhs = phi.after(&tensor_mor(self.generator(s, p), &id_t));
                let rhs = self.generator(&st, p).after(&self.phi(&delete_at(s, p), t));
                if lhs.mat != rhs.mat {
                    r.mismatch("laxity-naturality", format!("{} ⊗ {} left position {}", self.name(s), self.name(t), p), &lhs, &rhs);
                }
            }
            for p in 1..degree(t) {
                let lhs = phi.after(&tensor_mor(&id_s, self.generator(t, p)));
                let rhs = self.generator(&st, p + degree(s)).after(&self.phi(s, &delete_at(t, p)));
                if lhs.mat != rhs.mat {
                    r.mismatch("laxity-naturality", format!("{} ⊗ {} right position {}", self.name(s), self.name(t), p), &lhs, &rhs);
                }
            }
        }
        for (r1, s) in &pairs {
            for (s2, t) in &pairs {
                if s != s2 || degree(r1) + degree(s) + degree(t) > self.truncation {
                    continue;
                }
                let rs = concat_unchecked(r1, s);
                let st = concat_unchecked(s, t);
                let id_r = MMorphism::identity(&self.value(r1));
                let id_t = MMorphism::identity(&self.value(t));
                let lhs = self.phi(&rs, t).after(&tensor_mor(&self.phi(r1, s), &id_t));
                let rhs = self.phi(r1, &st).after(&tensor_mor(&id_r, &self.phi(s, t)));
                if lhs.mat != rhs.mat {
                    r.mismatch("associativity", format!("{} ⊗ {} ⊗ {}", self.name(r1), self.name(s), self.name(t)), &lhs, &rhs);
                }
            }
        }
        r
    }

    /// Left and right unit invariance for every `s` of degree at most `max_degree`
    /// and every 2-morphism `(A,A) ⊗ s → s`, `s ⊗ (B,B) → s`.
    pub fn check_unital_upto(&self, max_degree: usize) -> Report {
        let mut r = Report::default();
        let Some(units) = &self.units else {
            r.missing("unit points".into());
            return r;
        };
        let bound = max_degree.min(self.truncation.saturating_sub(1));
        for s in all_chains(self.n(), bound) {
            let (a, b) = (first(&s), last(&s));
            let id_s = MMorphism::identity(&self.value(&s));
            let left = concat_unchecked(&[a, a], &s);
            let via_phi = self.phi(&[a, a], &s).after(&tensor_mor(&units[a], &id_s));
            for sigma in hom_set(&left, &s).expect("same endpoints") {
                let lhs = self.structure_map(&sigma);
                if lhs.mat != via_phi.mat {
                    r.mismatch("left-unit", format!("{} via {:?}", self.name(&left), sigma.deleted), &lhs, &via_phi);
                }
            }
            let right = concat_unchecked(&s, &[b, b]);
            let via_phi = self.phi(&s, &[b, b]).after(&tensor_mor(&id_s, &units[b]));
            for sigma in hom_set(&right, &s).expect("same endpoints") {
                let lhs = self.structure_map(&sigma);
                if lhs.mat != via_phi.mat {
                    r.mismatch("right-unit", format!("{} via {:?}", self.name(&right), sigma.deleted), &lhs, &via_phi);
                }
            }
        }
        r
    }

    pub fn check_unital(&self) -> Report {
        self.check_unital_upto(self.truncation)
    }

    /// The precategory with constant components `C(A, B)`.
    pub fn from_strict_category(c: &StrictCategory, truncation: usize) -> Result<Precategory> {
        let rep = c.check();
        if !rep.is_ok() {
            let v = &rep.violations[0];
            return Err(Error::Precondition(format!("strict category: {} at {}", v.kind, v.location)));
        }
        Ok(Precategory::from_strict_category_unchecked(c, truncation))
    }

    /// As [`Precategory::from_strict_category`], without checking the axioms of `c`.
    pub fn from_strict_category_unchecked(c: &StrictCategory, truncation: usize) -> Precategory {
        let mut p = Precategory::new(c.backend, c.objects.clone(), truncation);
        for z in all_chains(c.objects.len(), truncation) {
            let v = c.hom(first(&z), last(&z)).clone();
            for pos in 1..degree(&z) {
                p.generators.insert((z.clone(), pos), MMorphism::identity(&v));
            }
            p.values.insert(z, v);
        }
        for (s, t) in composable_pairs(c.objects.len(), truncation) {
            let m = c.comp[&(first(&s), last(&s), last(&t))].clone();
            p.laxity.insert((s, t), m);
        }
        p.units = c.ids.clone();
        p
    }

    /// The discrete precategory `I_X`.
    pub fn discrete(backend: Backend, objects: Vec<String>, truncation: usize) -> Precategory {
        Precategory::from_strict_category(&StrictCategory::discrete(backend, objects), truncation)
            .expect("discrete category is valid")
    }

    pub fn identity_morphism(self: &Arc<Self>) -> PrecatMorphism {
        let components = self.chains().into_iter().map(|z| {
            let id = MMorphism::identity(&self.value(&z));
            (z, id)
        });
        PrecatMorphism {
            source: self.clone(),
            target: self.clone(),
            obj_map: (0..self.n()).collect(),
            components: components.collect(),
        }
    }
}

/// A morphism of precategories over a function of object sets.
#[derive(Debug, Clone)]
pub struct PrecatMorphism {
    pub source: Arc<Precategory>,
    pub target: Arc<Precategory>,
    pub obj_map: Vec<usize>,
    pub components: BTreeMap<Chain, MMorphism>,
}

impl PrecatMorphism {
    pub fn image(&self, z: &[usize]) -> Chain {
        z.iter().map(|a| self.obj_map[*a]).collect()
    }

    pub fn component(&self, z: &[usize]) -> MMorphism {
        if degree(z) == 0 {
            return MMorphism::identity(&MObject::unit(self.source.backend));
        }
        self.components[z].clone()
    }

    /// Naturality with respect to structure maps, laxity and unit points.
    pub fn check(&self) -> Report {
        let (f, g) = (&*self.source, &*self.target);
        let mut r = Report::default();
        if self.obj_map.len() != f.n() || self.obj_map.iter().any(|a| *a >= g.n()) {
            r.push("object-map", String::new(), format!("{:?}", self.obj_map), String::new());
            return r;
        }
        for z in f.chains() {
            let loc = f.name(&z);
            let Some(c) = self.components.get(&z) else {
                r.missing(format!("component {}", loc));
                continue;
            };
            if c.src != f.value(&z) || c.tgt != g.value(&self.image(&z)) {
                r.push("typing", loc, c.src.to_string(), c.tgt.to_string());
            } else if let Err(e) = c.check() {
                r.push("invalid-morphism", loc, e.to_string(), String::new());
            }
        }
        if !r.is_ok() {
            return r;
        }
        for z in f.chains() {
            let fz = self.image(&z);
            for p in 1..degree(&z) {
                let lhs = g.generator(&fz, p).after(&self.components[&delete_at(&z, p)]);
                let rhs = self.components[&z].after(f.generator(&z, p));
                if lhs.mat != rhs.mat {
                    r.mismatch("naturality", format!("{} at {}", f.name(&z), p), &lhs, &rhs);
                }
            }
        }
        for (s, t) in composable_pairs(f.n(), f.truncation) {
            let st = concat_unchecked(&s, &t);
            let lhs = self.components[&st].after(&f.phi(&s, &t));
            let rhs = g.phi(&self.image(&s), &self.image(&t)).after(&tensor_mor(&self.components[&s], &self.components[&t]));
            if lhs.mat != rhs.mat {
                r.mismatch("laxity", format!("{} ⊗ {}", f.name(&s), f.name(&t)), &lhs, &rhs);
            }
        }
        if let (Some(fu), Some(gu)) = (&f.units, &g.units) {
            for a in 0..f.n() {
                let lhs = self.components[&vec![a, a]].after(&fu[a]);
                let rhs = &gu[self.obj_map[a]];
                if lhs.mat != rhs.mat {
                    r.mismatch("unit", f.objects[a].clone(), &lhs, rhs);
                }
            }
        }
        r
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PrecatMorphism) -> PrecatMorphism {
        let components = self
            .components
            .iter()
            .map(|(z, c)| (z.clone(), other.components[&self.image(z)].after(c)))
            .collect();
        PrecatMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|a| other.obj_map[*a]).collect(),
            components,
        }
    }

    /// Components at every degree-1 chain are weak equivalences.
    pub fn is_easy_weak_equivalence(&self) -> bool {
        self.components.iter().filter(|(z, _)| degree(z) == 1).all(|(_, c)| is_weak_equivalence(c))
    }

    pub fn is_levelwise_weak_equivalence(&self) -> bool {
        self.components.values().all(is_weak_equivalence)
    }

    /// Every component is an isomorphism.
    pub fn is_iso(&self) -> bool {
        self.components.values().all(|c| c.is_iso())
    }

    pub fn same_components(&self, other: &PrecatMorphism) -> bool {
        self.obj_map == other.obj_map
            && self.components.len() == other.components.len()
            && self.components.iter().all(|(z, c)| other.components.get(z).map(|d| d.mat == c.mat).unwrap_or(false))
    }
}
