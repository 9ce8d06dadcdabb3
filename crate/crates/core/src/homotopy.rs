//! The co-Segal conditions, K-injectivity by lifting, and the 2-constant
//! constructions: homotopy transfer along replacements and co-Segalification.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::adjoints::{
    morphism, psi, psi_map, psi_transpose, pushout_unital, realize, two_constant_apex, Realization, DEFAULT_CAP,
};
use crate::base::{
    degree_window, factorize, generating_cofibrations, has_rlp, is_trivial_fibration, is_weak_equivalence, tensor_mor,
    MMorphism, MObject,
};
use crate::error::{Error, Result};
use crate::precat::{composable_pairs, Diagram, PrecatMorphism, Precategory, Report, StrictCategory};
use crate::shapes::{all_chains, degree, enumerate_chains, first, last, Chain};

/// Outcome of one check at one chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCheck {
    pub chain: Chain,
    pub check: &'static str,
    pub verdict: bool,
    /// Dimensions of the source and target of the map examined.
    pub dims: (usize, usize),
}

#[derive(Debug, Clone, Default)]
pub struct CosegalReport {
    pub entries: Vec<ChainCheck>,
}

impl CosegalReport {
    pub fn is_ok(&self) -> bool {
        self.entries.iter().all(|e| e.verdict)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ChainCheck> {
        self.entries.iter().filter(|e| !e.verdict)
    }
}

/// Checks that every `F(u_s): F(A,B) → F(s)`, `deg s ≥ 2`, is a weak equivalence.
pub fn cosegal_report<D: Diagram>(f: &D) -> CosegalReport {
    let entries = f
        .chains()
        .into_iter()
        .filter(|s| degree(s) >= 2)
        .map(|s| {
            let u = f.u_map(&s);
            ChainCheck { dims: (u.src.dim(), u.tgt.dim()), verdict: is_weak_equivalence(&u), chain: s, check: "weak-equivalence" }
        })
        .collect();
    CosegalReport { entries }
}

pub fn is_cosegal<D: Diagram>(f: &D) -> bool {
    cosegal_report(f).is_ok()
}

#[derive(Debug, Clone)]
pub struct KInjectivityEntry {
    pub chain: Chain,
    /// `F(u_s)` is a trivial fibration.
    pub predicate: bool,
    /// `F(u_s)` lifts against every generating cofibration.
    pub lifting: bool,
    pub dims: (usize, usize),
}

#[derive(Debug, Clone, Default)]
pub struct KInjectivityReport {
    pub entries: Vec<KInjectivityEntry>,
}

impl KInjectivityReport {
    pub fn is_ok(&self) -> bool {
        self.entries.iter().all(|e| e.predicate && e.lifting)
    }

    pub fn routes_agree(&self) -> bool {
        self.entries.iter().all(|e| e.predicate == e.lifting)
    }
}

/// Checks K-injectivity chain by chain, both by the trivial-fibration
/// predicate and by lifting against the generating cofibrations.
pub fn k_injectivity_report<D: Diagram>(f: &D) -> KInjectivityReport {
    let mut entries = Vec::new();
    for s in f.chains().into_iter().filter(|s| degree(s) >= 2) {
        let u = f.u_map(&s);
        let gens = generating_cofibrations(f.backend(), degree_window(&u));
        let lifting = gens.iter().all(|i| has_rlp(i, &u));
        entries.push(KInjectivityEntry { dims: (u.src.dim(), u.tgt.dim()), predicate: is_trivial_fibration(&u), lifting, chain: s });
    }
    KInjectivityReport { entries }
}

/// A strict category with replacements `f_{AB}: C̃(A,B) → C(A,B)` and units
/// `I → C̃(A,A)` lifting the identities of `C`.
#[derive(Debug, Clone)]
pub struct TwoConstantData {
    pub category: StrictCategory,
    pub replacements: BTreeMap<(usize, usize), MMorphism>,
    pub units: Vec<MMorphism>,
}

impl TwoConstantData {
    pub fn check(&self) -> Result<()> {
        let c = &self.category;
        let rep = c.check();
        if !rep.is_ok() {
            return Err(Error::Precondition(format!("underlying category: {:?}", rep.violations[0])));
        }
        let ids = c.ids.as_ref().ok_or_else(|| Error::Precondition("category without identities".into()))?;
        let n = c.objects.len();
        for a in 0..n {
            for b in 0..n {
                let f = self.replacements.get(&(a, b)).ok_or_else(|| Error::Missing(format!("replacement {}{}", a, b)))?;
                if f.tgt != *c.hom(a, b) {
                    return Err(Error::Shape(format!("replacement at ({}, {}) misses its target", c.objects[a], c.objects[b])));
                }
                f.check()?;
            }
            if self.units[a].tgt != self.replacements[&(a, a)].src || self.replacements[&(a, a)].after(&self.units[a]).mat != ids[a].mat {
                return Err(Error::Precondition(format!("unit of {} does not factor through its replacement", c.objects[a])));
            }
        }
        Ok(())
    }
}

/// The 2-constant precategory `C̃`: `C̃(A,B)` in degree 1, `C(A,B)` above,
/// with `f_{AB}` as the only non-identity structure maps.
pub fn two_constant_transfer(d: &TwoConstantData, truncation: usize) -> Result<(Arc<Precategory>, PrecatMorphism)> {
    d.check()?;
    let c = &d.category;
    let n = c.objects.len();
    let mut p = Precategory::new(c.backend, c.objects.clone(), truncation);
    let lift = |z: &[usize]| -> MMorphism {
        let (a, b) = (first(z), last(z));
        if degree(z) == 1 {
            d.replacements[&(a, b)].clone()
        } else {
            MMorphism::identity(c.hom(a, b))
        }
    };
    for z in all_chains(n, truncation) {
        let (a, b) = (first(&z), last(&z));
        let v = if degree(&z) == 1 { d.replacements[&(a, b)].src.clone() } else { c.hom(a, b).clone() };
        for pos in 1..degree(&z) {
            p.generators.insert((z.clone(), pos), lift(&crate::shapes::delete_at(&z, pos)));
        }
        p.values.insert(z, v);
    }
    for (s, t) in composable_pairs(n, truncation) {
        let m = c.comp[&(first(&s), last(&s), last(&t))].after(&tensor_mor(&lift(&s), &lift(&t)));
        p.laxity.insert((s, t), m);
    }
    p.units = Some(d.units.clone());
    let rep = p.validate();
    if !rep.is_ok() {
        return Err(Error::Precondition(format!("transfer is not a precategory: {:?}", rep.violations[0])));
    }
    let p = Arc::new(p);
    let target = Arc::new(Precategory::from_strict_category_unchecked(c, truncation));
    let comps = p.chains().into_iter().map(|z| {
        let m = lift(&z);
        (z, m)
    });
    let eps = morphism(&p, &target, (0..n).collect(), comps.collect());
    Ok((p, eps))
}

/// The shape of a 2-constant precategory: per pair, the common value `W` on
/// chains of degree ≥ 2 and the transition `F(A,B) → W`.
#[derive(Debug, Clone)]
pub struct TwoConstantShape {
    pub apex: BTreeMap<(usize, usize), MObject>,
    pub transition: BTreeMap<(usize, usize), MMorphism>,
}

pub fn two_constant_shape(f: &Precategory) -> Option<TwoConstantShape> {
    if f.truncation < 2 {
        return None;
    }
    let mut apex = BTreeMap::new();
    let mut transition = BTreeMap::new();
    for a in 0..f.n() {
        for b in 0..f.n() {
            let chains = enumerate_chains(f.n(), a, b, f.truncation).ok()?;
            let (w, t) = two_constant_apex(f, &chains)?;
            apex.insert((a, b), w);
            transition.insert((a, b), t);
        }
    }
    Some(TwoConstantShape { apex, transition })
}

pub fn is_two_constant(f: &Precategory) -> bool {
    two_constant_shape(f).is_some()
}

/// `F → F̃ → ι|F|`: the 2-constant precategory with the values of `F` in
/// degree 1 and of `|F|` above.
#[derive(Debug, Clone)]
pub struct AssociatedTwoConstant {
    pub realization: Realization,
    pub result: Arc<Precategory>,
    pub rho: PrecatMorphism,
    pub epsilon: PrecatMorphism,
}

pub fn associated_two_constant(f: &Arc<Precategory>) -> Result<AssociatedTwoConstant> {
    let units = f.units.clone().ok_or_else(|| Error::Precondition("associated 2-constant needs unit points".into()))?;
    let r = realize(f)?;
    let n = f.n();
    let mut replacements = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            replacements.insert((a, b), r.components[&(a, b)].legs[&vec![a, b]].clone());
        }
    }
    let data = TwoConstantData { category: r.category.clone(), replacements, units };
    let (result, epsilon) = two_constant_transfer(&data, f.truncation)?;
    let comps = f
        .chains()
        .into_iter()
        .map(|z| {
            let m = if degree(&z) == 1 { MMorphism::identity(&f.value(&z)) } else { r.eta.components[&z].clone() };
            (z, m)
        })
        .collect();
    let rho = morphism(f, &result, (0..n).collect(), comps);
    Ok(AssociatedTwoConstant { realization: r, result, rho, epsilon })
}

/// The 2-constant co-Segalification `F → S(F)`.
#[derive(Debug, Clone)]
pub struct Cosegalification {
    pub result: Arc<Precategory>,
    pub eta: PrecatMorphism,
    /// Per pair, the factorization `F(A,B) → S(F)(A,B) → |F|(A,B)`.
    pub factorizations: BTreeMap<(usize, usize), (MMorphism, MMorphism)>,
    pub realization: Realization,
}

pub fn cosegalify_two_constant(f: &Arc<Precategory>) -> Result<Cosegalification> {
    let shape = two_constant_shape(f).ok_or_else(|| Error::Precondition("input is not 2-constant".into()))?;
    let units = f.units.clone().ok_or_else(|| Error::Precondition("co-Segalification needs unit points".into()))?;
    let r = realize(f)?;
    let n = f.n();
    let mut factorizations = BTreeMap::new();
    let mut replacements = BTreeMap::new();
    for ((a, b), t) in &shape.transition {
        let (c, p) = factorize(t);
        replacements.insert((*a, *b), p.clone());
        factorizations.insert((*a, *b), (c, p));
    }
    let new_units: Vec<MMorphism> = units.iter().enumerate().map(|(a, u)| factorizations[&(a, a)].0.after(u)).collect();
    let data = TwoConstantData { category: r.category.clone(), replacements, units: new_units };
    let (result, _) = two_constant_transfer(&data, f.truncation)?;
    let comps = f
        .chains()
        .into_iter()
        .map(|z| {
            let m = if degree(&z) == 1 {
                factorizations[&(z[0], z[1])].0.clone()
            } else {
                MMorphism::identity(&f.value(&z))
            };
            (z, m)
        })
        .collect();
    let eta = morphism(f, &result, (0..n).collect(), comps);
    Ok(Cosegalification { result, eta, factorizations, realization: r })
}

/// Pushes out `Ψ_s(α↓): Ψ_s(α) → Ψ_s(id_V)` along the transpose of a square
/// `(a, b): α → G(u_s)` into a 2-constant `G`, and reports whether the
/// pushout is 2-constant and the map from `G` is an isomorphism at every
/// pair other than the endpoints of `s`.
pub fn single_cell_pushout_report(
    g: &Arc<Precategory>,
    s: &Chain,
    alpha: &MMorphism,
    a: &MMorphism,
    b: &MMorphism,
) -> Result<(Report, Arc<Precategory>)> {
    let id_v = MMorphism::identity(&alpha.tgt);
    let p_alpha = psi(&g.objects, g.truncation, s, alpha, DEFAULT_CAP)?;
    let p_id = psi(&g.objects, g.truncation, s, &id_v, DEFAULT_CAP)?;
    let down = psi_map(&p_alpha, &p_id, alpha, &id_v);
    let into = psi_transpose(&p_alpha, g, a, b)?;
    let po = pushout_unital(&down, &into, DEFAULT_CAP)?;
    let mut rep = Report::default();
    if !is_two_constant(&po.result) {
        rep.push("two-constant", String::from("pushout"), String::new(), String::new());
    }
    let (sa, sb) = (first(s), last(s));
    for z in g.chains() {
        if (first(&z), last(&z)) == (sa, sb) {
            continue;
        }
        let m = &po.right.components[&z];
        if !m.is_iso() {
            rep.push("component-iso", g.name(&z), m.src.to_string(), m.tgt.to_string());
        }
    }
    Ok((rep, po.result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoints::{arrow_squares_finset, gamma, point, unitalize};
    use crate::base::{Backend, MObject};
    use crate::fixtures::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn strict_categories_are_cosegal_and_k_injective() {
        for backend in [Backend::FinSet, Backend::VectQ, Backend::ChQ] {
            let f = Precategory::from_strict_category(&arrow_category(backend), 3).unwrap();
            assert!(is_cosegal(&f));
            let k = k_injectivity_report(&f);
            assert!(k.is_ok() && k.routes_agree());
        }
    }

    #[test]
    fn gamma_is_not_cosegal() {
        let k = kobject_from_seeds(Backend::VectQ, object_names(1), 2, &[(vec![0, 0], MObject::vectq(1))]);
        let g = gamma(&k);
        let r = cosegal_report(&g);
        assert!(!r.is_ok());
        assert_eq!(r.failures().next().unwrap().dims, (1, 2));
    }

    #[test]
    fn cylinder_transfer_is_cosegal() {
        let c = arrow_category(Backend::ChQ);
        let (f, eps) = two_constant_transfer(&cylinder_data(&c), 3).unwrap();
        assert!(f.validate().is_ok());
        assert!(f.check_unital().is_ok());
        assert!(is_cosegal(&*f));
        assert!(is_two_constant(&f));
        assert!(eps.check().is_ok());
        assert!(eps.is_easy_weak_equivalence());
        let k = k_injectivity_report(&*f);
        assert!(k.routes_agree());
        assert!(k.is_ok());
    }

    #[test]
    fn identity_transfer_is_strict() {
        let c = truncated_polynomials(Backend::VectQ, 2);
        let ids = c.ids.clone().unwrap();
        let replacements = [((0, 0), MMorphism::identity(c.hom(0, 0)))].into_iter().collect();
        let (f, _) = two_constant_transfer(&TwoConstantData { category: c.clone(), replacements, units: ids }, 3).unwrap();
        assert_eq!(*f, Precategory::from_strict_category(&c, 3).unwrap());
    }

    #[test]
    fn associated_two_constant_factors_eta() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut done = 0;
        for backend in [Backend::FinSet, Backend::VectQ, Backend::FinSet, Backend::VectQ] {
            let f = random_pointed(&mut rng, backend, 1, 2, 2);
            let u = unitalize(&f, DEFAULT_CAP).unwrap().result;
            let Ok(at) = associated_two_constant(&u) else { continue };
            done += 1;
            assert!(at.result.validate().is_ok());
            assert!(at.result.check_unital().is_ok());
            assert!(at.rho.check().is_ok());
            assert!(at.rho.is_easy_weak_equivalence());
            assert!(at.rho.then(&at.epsilon).same_components(&at.realization.eta));
        }
        assert!(done >= 2);
    }

    #[test]
    fn cosegalify_random_chq() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..6 {
            let c = random_strict(&mut rng, Backend::ChQ);
            let d = random_two_constant_data(&mut rng, &c);
            let (f, _) = two_constant_transfer(&d, 4).unwrap();
            let s = cosegalify_two_constant(&f).unwrap();
            assert!(s.result.validate().is_ok());
            assert!(s.result.check_unital().is_ok());
            assert!(is_two_constant(&s.result));
            assert!(is_cosegal(&*s.result));
            assert!(k_injectivity_report(&*s.result).is_ok());
            assert!(s.eta.check().is_ok());
            let rs = realize(&s.result).unwrap();
            for (k, m) in &s.realization.category.comp {
                assert!(rs.category.comp[k].mat == m.mat);
            }
        }
    }

    #[test]
    fn sphere_to_zero_is_contractible() {
        let c = StrictCategory::discrete(Backend::ChQ, object_names(1));
        let unit = MObject::unit(Backend::ChQ);
        let s0 = crate::base::sphere(0);
        let (sum, inj) = crate::base::coproduct_in(Backend::ChQ, &[&unit, &s0]);
        let f = MMorphism::from_columns(sum, unit.clone(), vec![vec![(0, crate::linalg::q(1))], vec![]]);
        let d = TwoConstantData { category: c, replacements: [((0, 0), f)].into_iter().collect(), units: vec![inj[0].clone()] };
        let (p, _) = two_constant_transfer(&d, 2).unwrap();
        assert!(!k_injectivity_report(&*p).is_ok());
        let s = cosegalify_two_constant(&p).unwrap();
        assert!(k_injectivity_report(&*s.result).is_ok());
    }

    #[test]
    fn single_cell_pushout_loops() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let alpha = MMorphism::from_function(MObject::finset_n(1), MObject::finset_n(2), &[0]);
        let s = vec![0, 0, 0];
        let c = random_monoid(&mut rng, 2);
        let g = Arc::new(Precategory::from_strict_category(&c, 2).unwrap());
        let (a, b) = arrow_squares_finset(&alpha, &g.u_map(&s)).into_iter().next().unwrap();
        let (rep, p) = single_cell_pushout_report(&g, &s, &alpha, &a, &b).unwrap();
        assert!(p.validate().is_ok());
        assert!(rep.is_ok(), "{:?}", rep);
        let _ = point;
    }
}
