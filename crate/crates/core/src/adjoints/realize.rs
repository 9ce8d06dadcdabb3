//! Realization `|F|`: the strict (semi-)category whose hom-objects are the
//! colimits of the components of `F`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::base::{colimit_in, tensor, tensor_mor, tensor_vectors, Backend, FiniteDiagram, MMorphism, MObject};
use crate::error::{Error, Result};
use crate::linalg::{sv_add, unit_vec, Mat, SVec};
use crate::precat::{composable_pairs, Diagram, PrecatMorphism, Precategory, StrictCategory};
use crate::shapes::{concat_unchecked, degree, delete_at, enumerate_chains, Chain};

/// Colimit of one component with its cocone.
#[derive(Debug, Clone)]
pub struct ComponentColimit {
    pub apex: MObject,
    pub legs: BTreeMap<Chain, MMorphism>,
    /// Per apex basis vector, a representative as a sum of vectors on chains.
    pub representatives: Vec<Vec<(Chain, SVec)>>,
}

#[derive(Debug, Clone)]
pub struct Realization {
    pub category: StrictCategory,
    pub components: BTreeMap<(usize, usize), ComponentColimit>,
    /// The canonical map `F → ι|F|`.
    pub eta: PrecatMorphism,
    /// Whether chains of top degree add no identifications.
    pub stable_at_n: bool,
}

/// Whether a component is constant on chains of degree ≥ 2 with a single
/// transition map from `F(A,B)`.
pub(crate) fn two_constant_apex(f: &Precategory, chains: &[Chain]) -> Option<(MObject, MMorphism)> {
    let high: Vec<&Chain> = chains.iter().filter(|z| degree(z) >= 2).collect();
    let w = f.value(high.first()?);
    let mut trans: Option<MMorphism> = None;
    for z in &high {
        if f.value(z) != w {
            return None;
        }
        for p in 1..degree(z) {
            let g = f.generator(z, p);
            if degree(z) >= 3 {
                if g.mat != Mat::identity(w.dim()) {
                    return None;
                }
            } else {
                match &trans {
                    None => trans = Some(g.clone()),
                    Some(t) if t.mat == g.mat => {}
                    _ => return None,
                }
            }
        }
    }
    trans.map(|t| (w, t))
}

/// The colimit of the `(a, b)` component over chains of degree at most `maxdeg`.
pub fn component_colimit(f: &Precategory, a: usize, b: usize, maxdeg: usize) -> Result<ComponentColimit> {
    let chains = enumerate_chains(f.n(), a, b, maxdeg)?;
    if maxdeg >= 2 {
        if let Some((w, t)) = two_constant_apex(f, &chains) {
            let legs: BTreeMap<Chain, MMorphism> = chains
                .iter()
                .map(|z| (z.clone(), if degree(z) == 1 { t.clone() } else { MMorphism::identity(&w) }))
                .collect();
            return finish(f, w, legs, &chains);
        }
    }
    let pos: BTreeMap<&Chain, usize> = chains.iter().enumerate().map(|(i, z)| (z, i)).collect();
    let mut d = FiniteDiagram { nodes: chains.iter().map(|z| f.value(z)).collect(), edges: Vec::new() };
    for z in &chains {
        for p in 1..degree(z) {
            d.edges.push((pos[&delete_at(z, p)], pos[z], f.generator(z, p).clone()));
        }
    }
    let c = colimit_in(f.backend, &d)?;
    let legs = chains.iter().cloned().zip(c.legs.iter().cloned()).collect();
    finish(f, c.apex.clone(), legs, &chains)
}

/// Finds low-degree representatives of every apex basis vector.
fn finish(f: &Precategory, apex: MObject, legs: BTreeMap<Chain, MMorphism>, chains: &[Chain]) -> Result<ComponentColimit> {
    let mut reps: Vec<Option<Vec<(Chain, SVec)>>> = vec![None; apex.dim()];
    let maxdeg = chains.iter().map(|z| degree(z)).max().unwrap_or(0);
    for d in 1..=maxdeg {
        let used: Vec<&Chain> = chains.iter().filter(|z| degree(z) <= d).collect();
        if f.backend == Backend::FinSet {
            for z in &used {
                for (j, i) in legs[*z].func().into_iter().enumerate() {
                    if reps[i].is_none() {
                        reps[i] = Some(vec![((*z).clone(), unit_vec(j))]);
                    }
                }
            }
        } else {
            let mut cols = Vec::new();
            let mut owners = Vec::new();
            for z in &used {
                for j in 0..f.value(z).dim() {
                    cols.push(legs[*z].image_of(j).clone());
                    owners.push(((*z).clone(), j));
                }
            }
            let m = Mat::from_columns(apex.dim(), cols);
            for (i, r) in reps.iter_mut().enumerate() {
                if r.is_some() {
                    continue;
                }
                if let Some(sol) = m.solve(&unit_vec(i)) {
                    let mut by_chain: BTreeMap<Chain, SVec> = BTreeMap::new();
                    for (k, x) in sol {
                        let (z, j) = &owners[k];
                        let e = by_chain.entry(z.clone()).or_default();
                        *e = sv_add(e, &[(*j, x)]);
                    }
                    *r = Some(by_chain.into_iter().collect());
                }
            }
        }
        if reps.iter().all(|r| r.is_some()) {
            break;
        }
    }
    let representatives = reps
        .into_iter()
        .map(|r| r.ok_or_else(|| Error::InvalidObject("colimit element without representative".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComponentColimit { apex, legs, representatives })
}

/// Realizes `F` as a strict category, checking that the composition induced by
/// the laxity is well defined within the truncation.
pub fn realize(f: &Arc<Precategory>) -> Result<Realization> {
    let n = f.n();
    let nt = f.truncation;
    let mut components = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            components.insert((a, b), component_colimit(f, a, b, nt)?);
        }
    }
    let mut comp = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (x, y, z) = (&components[&(a, b)], &components[&(b, c)], &components[&(a, c)]);
                let src = tensor(&x.apex, &y.apex);
                let dims = [x.apex.dim(), y.apex.dim()];
                let mut cols = Vec::with_capacity(src.dim());
                for i in 0..dims[0] {
                    for j in 0..dims[1] {
                        let mut acc: SVec = Vec::new();
                        for (s, u) in &x.representatives[i] {
                            for (t, v) in &y.representatives[j] {
                                if degree(s) + degree(t) > nt {
                                    return Err(Error::Truncation(format!(
                                        "composing representatives of degrees {} and {} exceeds truncation {}",
                                        degree(s),
                                        degree(t),
                                        nt
                                    )));
                                }
                                let st = concat_unchecked(s, t);
                                let d2 = [f.value(s).dim(), f.value(t).dim()];
                                let img = f.phi(s, t).apply(&tensor_vectors(&d2, &[u, v]));
                                acc = sv_add(&acc, &z.legs[&st].apply(&img));
                            }
                        }
                        cols.push(acc);
                    }
                }
                comp.insert((a, b, c), MMorphism::from_columns(src, z.apex.clone(), cols));
            }
        }
    }
    for (s, t) in composable_pairs(n, nt) {
        let st = concat_unchecked(&s, &t);
        let (a, b, c) = (s[0], t[0], *t.last().expect("nonempty"));
        let lhs = components[&(a, c)].legs[&st].after(&f.phi(&s, &t));
        let rhs = comp[&(a, b, c)].after(&tensor_mor(&components[&(a, b)].legs[&s], &components[&(b, c)].legs[&t]));
        if lhs.mat != rhs.mat {
            return Err(Error::Truncation(format!(
                "induced composition is not well defined at {} ⊗ {}",
                f.name(&s),
                f.name(&t)
            )));
        }
    }
    let homs = components.iter().map(|(k, c)| (*k, c.apex.clone())).collect();
    let ids = f
        .units
        .as_ref()
        .map(|us| us.iter().enumerate().map(|(a, u)| components[&(a, a)].legs[&vec![a, a]].after(u)).collect());
    let category = StrictCategory { backend: f.backend, objects: f.objects.clone(), homs, comp, ids };
    let target = Arc::new(Precategory::from_strict_category_unchecked(&category, nt));
    let mut eta_comps = BTreeMap::new();
    for ((a, b), c) in &components {
        let _ = (a, b);
        for (z, l) in &c.legs {
            eta_comps.insert(z.clone(), MMorphism::new_unchecked(l.src.clone(), c.apex.clone(), l.mat.clone()));
        }
    }
    let eta = PrecatMorphism { source: f.clone(), target, obj_map: (0..n).collect(), components: eta_comps };
    let stable_at_n = nt < 2
        || (0..n).all(|a| {
            (0..n).all(|b| {
                component_colimit(f, a, b, nt - 1)
                    .map(|lower| {
                        let top = &components[&(a, b)];
                        lower.induced(&top.legs, &top.apex).is_iso()
                    })
                    .unwrap_or(false)
            })
        });
    Ok(Realization { category, components, eta, stable_at_n })
}

impl ComponentColimit {
    /// The map out of the colimit induced by a compatible family indexed like `legs`.
    pub fn induced(&self, family: &BTreeMap<Chain, MMorphism>, t: &MObject) -> MMorphism {
        let cols = (0..self.apex.dim())
            .map(|i| {
                let mut acc = Vec::new();
                for (z, v) in &self.representatives[i] {
                    acc = sv_add(&acc, &family[z].apply(v));
                }
                acc
            })
            .collect();
        MMorphism::from_columns(self.apex.clone(), t.clone(), cols)
    }
}
