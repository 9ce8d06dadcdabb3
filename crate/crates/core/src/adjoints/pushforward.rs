//! Change of objects along a map `f: X → Y`: the pullback `f*` and its left
//! adjoint `f_!`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::congruence::{congruence_quotient, CongruenceQuotient, RelationSet};
use super::words::{morphism, Source, WordSystem};
use crate::base::{colimit_in, tensor_vectors, Colimit, FiniteDiagram, MMorphism};
use crate::error::{Error, Result};
use crate::linalg::unit_vec;
use crate::precat::{composable_pairs, Diagram, KObject, PrecatMorphism, Precategory};
use crate::shapes::{all_chains, concat_unchecked, degree, delete_at, subdivisions, Chain, Deletion};

/// A node of the comma category at `z`: a chain `w` over `X` and interior
/// positions `h` of `z` with `f(w) = z∖h`.
pub type CommaNode = (Chain, Vec<usize>);

/// `Lan_f` of the underlying functor of a precategory over `X`.
#[derive(Debug, Clone)]
pub struct LanAlong {
    pub nodes: BTreeMap<Chain, Vec<CommaNode>>,
    pub colimits: BTreeMap<Chain, Colimit>,
    pub kobject: KObject,
}

fn image(f: &[usize], w: &[usize]) -> Chain {
    w.iter().map(|a| f[*a]).collect()
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for x in items {
        let more: Vec<Vec<usize>> = out.iter().map(|s| {
            let mut t = s.clone();
            t.push(*x);
            t
        }).collect();
        out.extend(more);
    }
    for s in out.iter_mut() {
        s.sort_unstable();
    }
    out.sort();
    out
}

fn lifts(fibers: &[Vec<usize>], z: &[usize]) -> Vec<Chain> {
    let mut out = vec![Vec::new()];
    for y in z {
        let mut next = Vec::new();
        for w in &out {
            for a in &fibers[*y] {
                let mut v: Chain = w.clone();
                v.push(*a);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

impl LanAlong {
    pub fn new(g: &Precategory, f: &[usize], targets: &[String]) -> Result<LanAlong> {
        let ny = targets.len();
        let nt = g.truncation;
        let mut fibers = vec![Vec::new(); ny];
        for (a, y) in f.iter().enumerate() {
            fibers[*y].push(a);
        }
        let mut nodes = BTreeMap::new();
        let mut colimits = BTreeMap::new();
        let mut k = KObject::new(g.backend, targets.to_vec(), nt);
        for z in all_chains(ny, nt) {
            let interior: Vec<usize> = (1..degree(&z)).collect();
            let mut ns: Vec<CommaNode> = Vec::new();
            for h in subsets(&interior) {
                let zh = Deletion { source: z.clone(), deleted: h.clone() }.target();
                for w in lifts(&fibers, &zh) {
                    ns.push((w, h.clone()));
                }
            }
            let pos: BTreeMap<&CommaNode, usize> = ns.iter().enumerate().map(|(i, n)| (n, i)).collect();
            let mut d = FiniteDiagram { nodes: ns.iter().map(|(w, _)| g.value(w)).collect(), edges: Vec::new() };
            for (w, h) in &ns {
                let surv = Deletion { source: z.clone(), deleted: h.clone() }.surviving();
                for q in 1..degree(w) {
                    let mut h2 = h.clone();
                    h2.push(surv[q]);
                    h2.sort_unstable();
                    let from = (delete_at(w, q), h2);
                    d.edges.push((pos[&from], pos[&(w.clone(), h.clone())], g.generator(w, q).clone()));
                }
            }
            let c = colimit_in(g.backend, &d)?;
            k.values.insert(z.clone(), c.apex.clone());
            nodes.insert(z.clone(), ns);
            colimits.insert(z, c);
        }
        let mut lan = LanAlong { nodes, colimits, kobject: k };
        for z in all_chains(ny, nt) {
            for p in 1..degree(&z) {
                let m = lan.generator(&z, p);
                lan.kobject.generators.insert((z.clone(), p), m);
            }
        }
        Ok(lan)
    }

    pub fn node_index(&self, z: &[usize], n: &CommaNode) -> usize {
        self.nodes[z].iter().position(|m| m == n).expect("comma node")
    }

    fn generator(&self, z: &[usize], p: usize) -> MMorphism {
        let zp = delete_at(z, p);
        let (cz, cp) = (&self.colimits[z], &self.colimits[&zp]);
        let fam: Vec<MMorphism> = self.nodes[&zp]
            .iter()
            .map(|(w, h)| {
                let mut h2: Vec<usize> = h.iter().map(|i| if *i >= p { i + 1 } else { *i }).collect();
                h2.push(p);
                h2.sort_unstable();
                cz.legs[self.node_index(z, &(w.clone(), h2))].clone()
            })
            .collect();
        let refs: Vec<&MMorphism> = fam.iter().collect();
        cp.induced(&refs, &cz.apex)
    }
}

/// `f_! F` with the stages of its construction.
pub struct Pushforward {
    pub obj_map: Vec<usize>,
    pub lan: LanAlong,
    pub free: Arc<Precategory>,
    pub quotient: CongruenceQuotient,
    pub result: Arc<Precategory>,
}

/// The pushforward of `g` along `f`, given as the list of images of the
/// objects of `g` among `targets`. Unit points are transported when `f` is
/// a bijection.
pub fn pushforward(g: &Precategory, f: &[usize], targets: &[String]) -> Result<Pushforward> {
    if f.len() != g.n() || f.iter().any(|y| *y >= targets.len()) {
        return Err(Error::Precondition("object map does not fit".into()));
    }
    let lan = LanAlong::new(g, f, targets)?;
    let sys = WordSystem::new(g.backend, targets.to_vec(), g.truncation, vec![Source::K(&lan.kobject)]);
    let mut free = sys.precategory();
    let mut rels: RelationSet = BTreeMap::new();
    for (s, t) in composable_pairs(targets.len(), g.truncation) {
        let z = concat_unchecked(&s, &t);
        let (cs, ct, cz) = (&lan.colimits[&s], &lan.colimits[&t], &lan.colimits[&z]);
        for (i1, (w1, h1)) in lan.nodes[&s].iter().enumerate() {
            for (i2, (w2, h2)) in lan.nodes[&t].iter().enumerate() {
                if w1[w1.len() - 1] != w2[0] {
                    continue;
                }
                let w = concat_unchecked(w1, w2);
                let mut h = h1.clone();
                h.extend(h2.iter().map(|i| i + degree(&s)));
                let leg = &cz.legs[lan.node_index(&z, &(w, h))];
                let phi = g.phi(w1, w2);
                let dims = [g.value(w1).dim(), g.value(w2).dim()];
                let e = rels.entry(z.clone()).or_default();
                for x in 0..dims[0] {
                    for y in 0..dims[1] {
                        let (ex, ey) = (unit_vec(x), unit_vec(y));
                        let lhs = sys.embed(vec![
                            (0, s.clone(), cs.legs[i1].image_of(x).clone()),
                            (0, t.clone(), ct.legs[i2].image_of(y).clone()),
                        ]);
                        let rhs = sys.inject(0, &z, &leg.apply(&phi.apply(&tensor_vectors(&dims, &[&ex, &ey]))));
                        e.push((lhs, rhs));
                    }
                }
            }
        }
    }
    let bijective = targets.len() == g.n() && {
        let mut seen = vec![false; targets.len()];
        f.iter().all(|y| !core::mem::replace(&mut seen[*y], true))
    };
    if let (Some(us), true) = (&g.units, bijective) {
        let mut out = vec![None; targets.len()];
        for (a, u) in us.iter().enumerate() {
            let y = f[a];
            let z = vec![y, y];
            let leg = &lan.colimits[&z].legs[lan.node_index(&z, &(vec![a, a], Vec::new()))];
            out[y] = Some(sys.inclusion(0, &z).after(leg).after(u));
        }
        free.units = Some(out.into_iter().map(|u| u.expect("bijective object map")).collect());
    }
    let quotient = congruence_quotient(&free, &rels);
    let result = Arc::new(quotient.result.clone());
    Ok(Pushforward { obj_map: f.to_vec(), lan, free: Arc::new(free), quotient, result })
}

/// `f* H`: the precategory over `X` with `(f* H)(w) = H(f w)`.
pub fn pullback(h: &Precategory, f: &[usize], objects: &[String]) -> Result<Precategory> {
    if f.len() != objects.len() || f.iter().any(|y| *y >= h.n()) {
        return Err(Error::Precondition("object map does not fit".into()));
    }
    let mut out = Precategory::new(h.backend, objects.to_vec(), h.truncation);
    for z in all_chains(objects.len(), h.truncation) {
        let fz = image(f, &z);
        out.values.insert(z.clone(), h.value(&fz));
        for p in 1..degree(&z) {
            out.generators.insert((z.clone(), p), h.generator(&fz, p).clone());
        }
    }
    for (s, t) in composable_pairs(objects.len(), h.truncation) {
        let m = h.phi(&image(f, &s), &image(f, &t));
        out.laxity.insert((s, t), m);
    }
    out.units = h.units.as_ref().map(|us| f.iter().map(|y| us[*y].clone()).collect());
    Ok(out)
}

impl Pushforward {
    /// The unit `F → f* f_! F`.
    pub fn unit(&self, g: &Arc<Precategory>, pulled: &Arc<Precategory>) -> PrecatMorphism {
        let sys = WordSystem::new(g.backend, self.result.objects.clone(), g.truncation, vec![Source::K(&self.lan.kobject)]);
        let comps = g
            .chains()
            .into_iter()
            .map(|w| {
                let z = image(&self.obj_map, &w);
                let leg = &self.lan.colimits[&z].legs[self.lan.node_index(&z, &(w.clone(), Vec::new()))];
                let m = self.quotient.quotients[&z].proj.after(&sys.inclusion(0, &z)).after(leg);
                (w, m)
            })
            .collect();
        morphism(g, pulled, (0..g.n()).collect(), comps)
    }

    /// The morphism `f_! F → H` adjoint to `a: F → f* H`.
    pub fn transpose(&self, g: &Precategory, h: &Arc<Precategory>, a: &PrecatMorphism) -> PrecatMorphism {
        let kmap = |z: &[usize]| -> MMorphism {
            let c = &self.lan.colimits[z];
            let fam: Vec<MMorphism> = self.lan.nodes[z]
                .iter()
                .map(|(w, hs)| {
                    let d = Deletion { source: z.to_vec(), deleted: hs.clone() };
                    let comp = &a.components[w];
                    h.structure_map(&d).after(&MMorphism::new_unchecked(g.value(w), h.value(&d.target()), comp.mat.clone()))
                })
                .collect();
            let refs: Vec<&MMorphism> = fam.iter().collect();
            c.induced(&refs, &h.value(z))
        };
        let sys = WordSystem::new(g.backend, self.result.objects.clone(), g.truncation, vec![Source::K(&self.lan.kobject)]);
        let id: Vec<usize> = (0..h.n()).collect();
        let comps = sys.evaluate(h, &id, &|_, c| kmap(c));
        let through = morphism(&self.free, h, id, comps);
        self.quotient.descend(&through, &self.result)
    }
}

/// Helper for tests and the CLI: all binary splittings of `z`.
pub fn binary_splits(z: &[usize]) -> Vec<(Chain, Chain)> {
    subdivisions(z).into_iter().filter(|s| s.len() == 2).map(|s| (s[0].clone(), s[1].clone())).collect()
}
