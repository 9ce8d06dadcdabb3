//! Left adjoints and reflections: the free precategory on a family of
//! functors, pointing, coproducts and pushouts, unitalization, realization,
//! the localizing objects `Ψ_s(α)`, and pushforward along object maps.

mod congruence;
mod enumerate;
mod psi;
mod pushforward;
mod realize;
mod unitalize;
mod words;

pub use congruence::*;
pub use enumerate::*;
pub use psi::*;
pub use pushforward::*;
pub use realize::*;
pub use unitalize::*;
pub use words::*;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::unit_vec;
use crate::precat::{Diagram, KObject, PrecatMorphism, Precategory};
use crate::shapes::Chain;

/// The free precategory `Γ(G)`: words of `G`-values over all subdivisions.
pub fn gamma(g: &KObject) -> Precategory {
    WordSystem::new(g.backend, g.objects.clone(), g.truncation, vec![Source::K(g)]).precategory()
}

/// The unit `G → UΓ(G)` at chain `z`: inclusion of single-part words.
pub fn gamma_unit(g: &KObject) -> BTreeMap<Chain, crate::base::MMorphism> {
    let sys = WordSystem::new(g.backend, g.objects.clone(), g.truncation, vec![Source::K(g)]);
    g.chains().into_iter().map(|z| {
        let m = sys.inclusion(0, &z);
        (z, m)
    }).collect()
}

/// The counit `ΓU(F) → F`: words multiplied out with the laxity of `F`.
pub fn gamma_counit(f: &Arc<Precategory>) -> PrecatMorphism {
    let u = f.underlying();
    let sys = WordSystem::new(f.backend, f.objects.clone(), f.truncation, vec![Source::K(&u)]);
    let src = Arc::new(sys.precategory());
    let id: Vec<usize> = (0..f.n()).collect();
    let comps = sys.evaluate(f, &id, &|_, c| crate::base::MMorphism::identity(&f.value(c)));
    morphism(&src, f, id, comps)
}

/// `I_X ⊔ F` with its canonical unit points, and the inclusion of `F`.
pub struct Pointing {
    pub result: Arc<Precategory>,
    pub inclusion: PrecatMorphism,
}

pub fn point(f: &Arc<Precategory>) -> Pointing {
    let ix = Precategory::discrete(f.backend, f.objects.clone(), f.truncation);
    let sys = WordSystem::new(f.backend, f.objects.clone(), f.truncation, vec![Source::Lax(&ix), Source::Lax(f)]);
    let mut p = sys.precategory();
    let unit = crate::base::MObject::unit(f.backend);
    p.units = Some(
        (0..f.n())
            .map(|a| {
                let col = sys.inject(0, &[a, a], &unit_vec(0));
                crate::base::MMorphism::from_columns(unit.clone(), p.value(&[a, a]), vec![col])
            })
            .collect(),
    );
    let result = Arc::new(p);
    let components = f.chains().into_iter().map(|z| {
        let m = sys.inclusion(1, &z);
        (z, m)
    });
    let inclusion = morphism(f, &result, (0..f.n()).collect(), components.collect());
    Pointing { result, inclusion }
}

/// Coproduct in precategories over a fixed object set, with its injections.
pub struct Coproduct {
    pub result: Arc<Precategory>,
    pub injections: Vec<PrecatMorphism>,
}

pub fn coproduct(fs: &[Arc<Precategory>]) -> Result<Coproduct> {
    let first = fs.first().ok_or_else(|| Error::Precondition("empty coproduct of precategories".into()))?;
    for f in fs {
        if f.objects != first.objects || f.backend != first.backend || f.truncation != first.truncation {
            return Err(Error::Precondition("coproduct factors must share objects, backend and truncation".into()));
        }
    }
    let sources = fs.iter().map(|f| Source::Lax(f)).collect();
    let sys = WordSystem::new(first.backend, first.objects.clone(), first.truncation, sources);
    let result = Arc::new(sys.precategory());
    let injections = fs
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let comps = f.chains().into_iter().map(|z| {
                let m = sys.inclusion(k, &z);
                (z, m)
            });
            morphism(f, &result, (0..f.n()).collect(), comps.collect())
        })
        .collect();
    Ok(Coproduct { result, injections })
}

/// Pushout of `F ← H → G` over a fixed object set, with its two legs.
pub struct Pushout {
    pub result: Arc<Precategory>,
    pub left: PrecatMorphism,
    pub right: PrecatMorphism,
}

/// Pushout in precategories. When both targets carry unit points, the
/// unit points are identified, giving the pushout of pointed precategories.
pub fn pushout(h1: &PrecatMorphism, h2: &PrecatMorphism) -> Result<Pushout> {
    if !Arc::ptr_eq(&h1.source, &h2.source) && *h1.source != *h2.source {
        return Err(Error::Precondition("pushout legs must share a source".into()));
    }
    let n = h1.source.n();
    let id: Vec<usize> = (0..n).collect();
    if h1.obj_map != id || h2.obj_map != id {
        return Err(Error::Precondition("pushout legs must be the identity on objects".into()));
    }
    let (f, g) = (&h1.target, &h2.target);
    let cp = coproduct(&[f.clone(), g.clone()])?;
    let mut rels: RelationSet = BTreeMap::new();
    for (z, m1) in &h1.components {
        let m2 = &h2.components[z];
        let i1 = &cp.injections[0].components[z];
        let i2 = &cp.injections[1].components[z];
        let entry = rels.entry(z.clone()).or_default();
        for j in 0..m1.src.dim() {
            entry.push((i1.apply(m1.image_of(j)), i2.apply(m2.image_of(j))));
        }
    }
    let mut units = None;
    if let (Some(fu), Some(gu)) = (&f.units, &g.units) {
        let mut us = Vec::with_capacity(n);
        for a in 0..n {
            let z = vec![a, a];
            let u1 = cp.injections[0].components[&z].after(&fu[a]);
            let u2 = cp.injections[1].components[&z].after(&gu[a]);
            rels.entry(z).or_default().push((u1.image_of(0).clone(), u2.image_of(0).clone()));
            us.push(u1);
        }
        units = Some(us);
    }
    let mut base = (*cp.result).clone();
    base.units = units;
    let base = Arc::new(base);
    let cq = congruence_quotient(&base, &rels);
    let result = Arc::new(cq.result.clone());
    let proj = cq.projection(&base, &result);
    let left = cp.injections[0].then(&proj);
    let right = cp.injections[1].then(&proj);
    Ok(Pushout { result, left, right })
}

/// Pushout of strongly unital precategories: the pointed pushout, unitalized.
pub fn pushout_unital(h1: &PrecatMorphism, h2: &PrecatMorphism, cap: usize) -> Result<Pushout> {
    let p = pushout(h1, h2)?;
    let u = unitalize(&p.result, cap)?;
    Ok(Pushout { result: u.result.clone(), left: p.left.then(&u.eta), right: p.right.then(&u.eta) })
}

/// Identity-on-objects check for morphisms built in this module.
pub(crate) fn require_same_objects(a: &Precategory, b: &Precategory) -> Result<()> {
    if a.objects != b.objects || a.backend != b.backend || a.truncation != b.truncation {
        return Err(Error::Precondition(format!(
            "precategories differ in objects, backend or truncation ({:?} vs {:?})",
            a.objects, b.objects
        )));
    }
    Ok(())
}
