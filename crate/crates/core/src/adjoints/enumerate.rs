//! Exhaustive enumeration of morphisms between finite-set precategories.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::base::{Backend, MMorphism};
use crate::error::{Error, Result};
use crate::precat::{Diagram, PrecatMorphism, Precategory};
use crate::shapes::{degree, delete_at, subdivisions, Chain};

enum Force {
    Gen { from: Chain, pos: usize, y: usize },
    Lax { s: Chain, t: Chain, y1: usize, y2: usize },
    Unit(usize),
}

struct Search<'a> {
    f: &'a Precategory,
    chains: Vec<Chain>,
    images: Vec<Chain>,
    /// Per chain, per element, the constraints pinning its image.
    forces: Vec<Vec<Vec<Force>>>,
    sizes: Vec<usize>,
    ftgt: BTreeMap<(Chain, usize), Vec<usize>>,
    flax: BTreeMap<(Chain, Chain), Vec<usize>>,
    funits: Vec<usize>,
    index: BTreeMap<Chain, usize>,
}

impl<'a> Search<'a> {
    fn forced(&self, k: usize, x: usize, assigned: &[Vec<usize>]) -> Option<Option<usize>> {
        let mut val: Option<usize> = None;
        let fz = &self.images[k];
        for c in &self.forces[k][x] {
            let v = match c {
                Force::Gen { from, pos, y } => {
                    let m = &assigned[self.index[from]];
                    self.ftgt[&(fz.clone(), *pos)][m[*y]]
                }
                Force::Lax { s, t, y1, y2 } => {
                    let (ks, kt) = (self.index[s], self.index[t]);
                    let dt = self.f.value(&self.images[kt]).dim();
                    let lin = assigned[ks][*y1] * dt + assigned[kt][*y2];
                    self.flax[&(self.images[ks].clone(), self.images[kt].clone())][lin]
                }
                Force::Unit(a) => self.funits[*a],
            };
            match val {
                None => val = Some(v),
                Some(w) if w == v => {}
                _ => return None,
            }
        }
        Some(val)
    }

    fn run(&self, k: usize, assigned: &mut Vec<Vec<usize>>, visit: &mut dyn FnMut(&[Vec<usize>]) -> bool) -> bool {
        if k == self.chains.len() {
            return visit(assigned);
        }
        let tdim = self.f.value(&self.images[k]).dim();
        let mut fixed = vec![None; self.sizes[k]];
        for (x, slot) in fixed.iter_mut().enumerate() {
            match self.forced(k, x, assigned) {
                None => return true,
                Some(v) => *slot = v,
            }
        }
        let free: Vec<usize> = (0..fixed.len()).filter(|x| fixed[*x].is_none()).collect();
        if !free.is_empty() && tdim == 0 {
            return true;
        }
        let mut cur: Vec<usize> = fixed.iter().map(|v| v.unwrap_or(0)).collect();
        let mut counter = vec![0usize; free.len()];
        loop {
            for (i, x) in free.iter().enumerate() {
                cur[*x] = counter[i];
            }
            assigned.push(cur.clone());
            let go_on = self.run(k + 1, assigned, visit);
            assigned.pop();
            if !go_on {
                return false;
            }
            let mut i = 0;
            while i < counter.len() {
                counter[i] += 1;
                if counter[i] < tdim {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
            if i == counter.len() {
                return true;
            }
        }
    }
}

/// Visits every morphism `p → f` over `obj_map` of finite-set precategories,
/// preserving unit points when `unital` is set. The visitor returns `false`
/// to stop early.
pub fn visit_morphisms(
    p: &Precategory,
    f: &Precategory,
    obj_map: &[usize],
    unital: bool,
    visit: &mut dyn FnMut(&BTreeMap<Chain, MMorphism>) -> bool,
) -> Result<()> {
    let chains = p.chains();
    let images: Vec<Chain> = chains.iter().map(|z| z.iter().map(|a| obj_map.get(*a).copied().unwrap_or(0)).collect()).collect();
    visit_raw(p, f, obj_map, unital, &mut |a| {
        let comps = chains
            .iter()
            .zip(&images)
            .zip(a)
            .map(|((z, fz), m)| (z.clone(), MMorphism::from_function(p.value(z), f.value(fz), m)))
            .collect();
        visit(&comps)
    })
}

fn visit_raw(
    p: &Precategory,
    f: &Precategory,
    obj_map: &[usize],
    unital: bool,
    visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) -> Result<()> {
    if p.backend != Backend::FinSet || f.backend != Backend::FinSet {
        return Err(Error::Backend("morphism enumeration needs the finset backend".into()));
    }
    if obj_map.len() != p.n() || obj_map.iter().any(|a| *a >= f.n()) || f.truncation < p.truncation {
        return Err(Error::Precondition("object map does not fit the precategories".into()));
    }
    let chains = p.chains();
    let images: Vec<Chain> = chains.iter().map(|z| z.iter().map(|a| obj_map[*a]).collect()).collect();
    let index: BTreeMap<Chain, usize> = chains.iter().enumerate().map(|(i, z)| (z.clone(), i)).collect();
    let mut forces: Vec<Vec<Vec<Force>>> = chains.iter().map(|z| (0..p.value(z).dim()).map(|_| Vec::new()).collect()).collect();
    let mut ftgt = BTreeMap::new();
    let mut flax = BTreeMap::new();
    for (k, z) in chains.iter().enumerate() {
        for pos in 1..degree(z) {
            let from = delete_at(z, pos);
            for (y, x) in p.generator(z, pos).func().into_iter().enumerate() {
                forces[k][x].push(Force::Gen { from: from.clone(), pos, y });
            }
            ftgt.entry((images[k].clone(), pos)).or_insert_with(|| f.generator(&images[k], pos).func());
        }
        for parts in subdivisions(z).into_iter().filter(|s| s.len() == 2) {
            let (s, t) = (&parts[0], &parts[1]);
            let dt = p.value(t).dim();
            for (lin, x) in p.phi(s, t).func().into_iter().enumerate() {
                forces[k][x].push(Force::Lax { s: s.clone(), t: t.clone(), y1: lin / dt.max(1), y2: lin % dt.max(1) });
            }
            let (fs, ft) = (&images[index[s]], &images[index[t]]);
            flax.entry((fs.clone(), ft.clone())).or_insert_with(|| f.phi(fs, ft).func());
        }
    }
    let mut funits = Vec::new();
    if unital {
        let (pu, fu) = match (&p.units, &f.units) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Precondition("unital enumeration needs unit points on both sides".into())),
        };
        for (a, u) in pu.iter().enumerate() {
            let x = u.func()[0];
            forces[index[&vec![a, a]]][x].push(Force::Unit(a));
        }
        funits = (0..p.n()).map(|a| fu[obj_map[a]].func()[0]).collect();
    }
    let sizes = chains.iter().map(|z| p.value(z).dim()).collect();
    let search = Search { f, chains, images, forces, sizes, ftgt, flax, funits, index };
    search.run(0, &mut Vec::new(), visit);
    Ok(())
}

/// All morphisms `p → f` over `obj_map`, up to `limit` of them.
pub fn enumerate_morphisms(
    p: &Arc<Precategory>,
    f: &Arc<Precategory>,
    obj_map: &[usize],
    unital: bool,
    limit: usize,
) -> Result<Vec<PrecatMorphism>> {
    let mut out = Vec::new();
    visit_morphisms(p, f, obj_map, unital, &mut |c| {
        out.push(PrecatMorphism { source: p.clone(), target: f.clone(), obj_map: obj_map.to_vec(), components: c.clone() });
        out.len() < limit
    })?;
    Ok(out)
}

/// The number of morphisms `p → f` over `obj_map`.
pub fn count_morphisms(p: &Precategory, f: &Precategory, obj_map: &[usize], unital: bool) -> Result<usize> {
    let mut n = 0;
    visit_raw(p, f, obj_map, unital, &mut |_| {
        n += 1;
        true
    })?;
    Ok(n)
}
