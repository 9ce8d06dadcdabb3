//! Quotients of precategories by congruences: equivalence relations (or
//! subspaces) on every value that are closed under structure maps and laxity.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::base::{tensor_vectors, MMorphism, Quotient, Relations};
use crate::linalg::{unit_vec, SVec};
use crate::precat::{composable_pairs, Diagram, PrecatMorphism, Precategory};
use crate::shapes::{degree, delete_at, subdivisions, Chain};

/// Relation generators per chain: pairs `u ~ w` of vectors in the value.
pub type RelationSet = BTreeMap<Chain, Vec<(SVec, SVec)>>;

pub struct CongruenceQuotient {
    pub result: Precategory,
    pub quotients: BTreeMap<Chain, Quotient>,
}

impl CongruenceQuotient {
    pub fn is_trivial(&self) -> bool {
        self.quotients.values().all(|q| q.is_trivial())
    }

    /// The projection `p → result` as a morphism.
    pub fn projection(&self, source: &Arc<Precategory>, target: &Arc<Precategory>) -> PrecatMorphism {
        PrecatMorphism {
            source: source.clone(),
            target: target.clone(),
            obj_map: (0..source.n()).collect(),
            components: self.quotients.iter().map(|(z, q)| (z.clone(), q.proj.clone())).collect(),
        }
    }

    /// The map `result → t` induced by a morphism out of the original precategory
    /// that is constant on the congruence.
    pub fn descend(&self, f: &PrecatMorphism, source: &Arc<Precategory>) -> PrecatMorphism {
        PrecatMorphism {
            source: source.clone(),
            target: f.target.clone(),
            obj_map: f.obj_map.clone(),
            components: self.quotients.iter().map(|(z, q)| (z.clone(), q.descend(&f.components[z]))).collect(),
        }
    }
}

/// The smallest congruence containing `rels`, and the quotient precategory.
pub fn congruence_quotient(p: &Precategory, rels: &RelationSet) -> CongruenceQuotient {
    let mut closed: BTreeMap<Chain, Relations> = BTreeMap::new();
    let mut gens: BTreeMap<Chain, Vec<(SVec, SVec)>> = BTreeMap::new();
    for z in p.chains() {
        let x = p.value(&z);
        let mut r = Relations::new(&x);
        if let Some(given) = rels.get(&z) {
            for (u, w) in given {
                r.relate(&x, u, w);
            }
        }
        for pos in 1..degree(&z) {
            let g = p.generator(&z, pos);
            for (u, w) in &gens[&delete_at(&z, pos)] {
                r.relate(&x, &g.apply(u), &g.apply(w));
            }
        }
        for parts in subdivisions(&z).into_iter().filter(|s| s.len() == 2) {
            let (s, t) = (&parts[0], &parts[1]);
            let phi = p.phi(s, t);
            let dims = [p.value(s).dim(), p.value(t).dim()];
            for (u, w) in &gens[s] {
                for j in 0..dims[1] {
                    let e = unit_vec(j);
                    let a = phi.apply(&tensor_vectors(&dims, &[u, &e]));
                    let b = phi.apply(&tensor_vectors(&dims, &[w, &e]));
                    r.relate(&x, &a, &b);
                }
            }
            for (u, w) in &gens[t] {
                for i in 0..dims[0] {
                    let e = unit_vec(i);
                    let a = phi.apply(&tensor_vectors(&dims, &[&e, u]));
                    let b = phi.apply(&tensor_vectors(&dims, &[&e, w]));
                    r.relate(&x, &a, &b);
                }
            }
        }
        gens.insert(z.clone(), r.generators());
        closed.insert(z, r);
    }
    let quotients: BTreeMap<Chain, Quotient> =
        closed.iter().map(|(z, r)| (z.clone(), r.quotient(&p.value(z)))).collect();
    let mut out = Precategory::new(p.backend, p.objects.clone(), p.truncation);
    for (z, q) in &quotients {
        out.values.insert(z.clone(), q.obj.clone());
    }
    for ((z, pos), g) in &p.generators {
        let m = quotients[z].proj.after(g).after(&quotients[&delete_at(z, *pos)].section);
        out.generators.insert((z.clone(), *pos), m);
    }
    for (s, t) in composable_pairs(p.n(), p.truncation) {
        let st = crate::shapes::concat_unchecked(&s, &t);
        let sec = crate::base::tensor_mor(&quotients[&s].section, &quotients[&t].section);
        let m = quotients[&st].proj.after(&p.phi(&s, &t)).after(&sec);
        out.laxity.insert((s, t), m);
    }
    out.units = p
        .units
        .as_ref()
        .map(|us| us.iter().enumerate().map(|(a, u)| quotients[&alloc::vec![a, a]].proj.after(u)).collect());
    CongruenceQuotient { result: out, quotients }
}

/// Components of `g ∘ f` given by the induced maps between two quotients:
/// `proj_target ∘ f ∘ section_source`.
pub fn induced_between(
    f: &BTreeMap<Chain, MMorphism>,
    from: &CongruenceQuotient,
    to: &CongruenceQuotient,
    obj_map: &[usize],
) -> BTreeMap<Chain, MMorphism> {
    f.iter()
        .map(|(z, m)| {
            let fz: Chain = z.iter().map(|a| obj_map[*a]).collect();
            (z.clone(), to.quotients[&fz].proj.after(m).after(&from.quotients[z].section))
        })
        .collect()
}
