//! The precategories `Ψ_s(α)` freely generated by an arrow `α: U → V` placed
//! on the structure map `u_s: (A,B) → s`, and their functoriality in `α`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::unitalize::{unitalize, Unitalization};
use super::words::{morphism, Source, WordSystem};
use crate::base::{colimit, wide_pushout, Colimit, FiniteDiagram, MMorphism, MObject};
use crate::error::{Error, Result};
use crate::precat::{Diagram, KObject, PrecatMorphism, Precategory};
use crate::shapes::{all_chains, compose_deletions, degree, delete_at, hom_set, Chain, Deletion};

/// The left Kan extension of `α` along `u_s`, on the component of `s`.
#[derive(Debug, Clone)]
pub struct LanArrow {
    pub s: Chain,
    pub alpha: MMorphism,
    /// Per chain `w` of the component: the wide pushout of one copy of `α`
    /// per deletion `w → s`, listed in `deletions[w]`.
    pub colimits: BTreeMap<Chain, Colimit>,
    pub deletions: BTreeMap<Chain, Vec<Deletion>>,
}

impl LanArrow {
    pub fn new(n: usize, truncation: usize, s: &Chain, alpha: &MMorphism) -> Result<LanArrow> {
        let (a, b) = (s[0], s[s.len() - 1]);
        let mut colimits = BTreeMap::new();
        let mut deletions = BTreeMap::new();
        for w in crate::shapes::enumerate_chains(n, a, b, truncation)? {
            let hs = hom_set(&w, s)?;
            let legs: Vec<MMorphism> = hs.iter().map(|_| alpha.clone()).collect();
            colimits.insert(w.clone(), wide_pushout(&alpha.src, &legs)?);
            deletions.insert(w, hs);
        }
        Ok(LanArrow { s: s.clone(), alpha: alpha.clone(), colimits, deletions })
    }

    pub fn value(&self, w: &[usize]) -> MObject {
        self.colimits[w].apex.clone()
    }

    /// The structure map `Lan(w∖p) → Lan(w)`.
    pub fn generator(&self, w: &[usize], p: usize) -> MMorphism {
        let wp = delete_at(w, p);
        let e = Deletion { source: w.to_vec(), deleted: vec![p] };
        let (cw, cwp) = (&self.colimits[w], &self.colimits[&wp]);
        let mut fam = vec![cw.legs[0].clone()];
        for h in &self.deletions[&wp] {
            let hh = compose_deletions(h, &e).expect("composable deletions");
            let k = self.deletions[w].iter().position(|d| *d == hh).expect("deletion of the longer chain");
            fam.push(cw.legs[k + 1].clone());
        }
        let refs: Vec<&MMorphism> = fam.iter().collect();
        cwp.induced(&refs, &cw.apex)
    }

    /// The map `Lan(α)(w) → Lan(β)(w)` induced by a square `(a, b): α → β`.
    pub fn map_to(&self, other: &LanArrow, a: &MMorphism, b: &MMorphism, w: &[usize]) -> MMorphism {
        let (c, d) = (&self.colimits[w], &other.colimits[w]);
        let mut fam = vec![d.legs[0].after(a)];
        for k in 0..self.deletions[w].len() {
            fam.push(d.legs[k + 1].after(b));
        }
        let refs: Vec<&MMorphism> = fam.iter().collect();
        c.induced(&refs, &d.apex)
    }

    /// Extension by `∅` to all components: the functor `δ_{AB} Lan(α)`.
    pub fn kobject(&self, objects: &[String], truncation: usize) -> KObject {
        let backend = self.alpha.backend();
        let mut k = KObject::new(backend, objects.to_vec(), truncation);
        let empty = MObject::initial(backend);
        for z in all_chains(objects.len(), truncation) {
            let inside = self.colimits.contains_key(&z);
            for p in 1..degree(&z) {
                let g = if inside { self.generator(&z, p) } else { MMorphism::identity(&empty) };
                k.generators.insert((z.clone(), p), g);
            }
            k.values.insert(z.clone(), if inside { self.value(&z) } else { empty.clone() });
        }
        k
    }
}

/// `Ψ_s(α)` together with the stages of its construction.
#[derive(Debug, Clone)]
pub struct Psi {
    pub lan: LanArrow,
    pub kobject: KObject,
    pub gamma: Arc<Precategory>,
    pub pointed: Arc<Precategory>,
    pub unitalization: Unitalization,
}

impl Psi {
    pub fn result(&self) -> &Arc<Precategory> {
        &self.unitalization.result
    }
}

/// Builds `Ψ_s(α)` as unitalize ∘ point ∘ Γ ∘ δ ∘ Lan.
pub fn psi(objects: &[String], truncation: usize, s: &Chain, alpha: &MMorphism, cap: usize) -> Result<Psi> {
    if degree(s) < 2 || degree(s) > truncation {
        return Err(Error::Precondition(format!("Ψ_s needs 2 ≤ deg s ≤ {}, got {}", truncation, degree(s))));
    }
    alpha.check()?;
    let lan = LanArrow::new(objects.len(), truncation, s, alpha)?;
    let kobject = lan.kobject(objects, truncation);
    let gamma = Arc::new(super::gamma(&kobject));
    let pointed = super::point(&gamma).result;
    let unitalization = unitalize(&pointed, cap)?;
    Ok(Psi { lan, kobject, gamma, pointed, unitalization })
}

/// `Ψ_s` applied to a square `(a, b): α → β`.
pub fn psi_map(src: &Psi, tgt: &Psi, a: &MMorphism, b: &MMorphism) -> PrecatMorphism {
    let (ks, kt) = (&src.kobject, &tgt.kobject);
    let n = ks.n();
    let id: Vec<usize> = (0..n).collect();
    let kmap = |z: &[usize]| -> MMorphism {
        if src.lan.colimits.contains_key(z) {
            src.lan.map_to(&tgt.lan, a, b, z)
        } else {
            MMorphism::identity(&ks.value(z))
        }
    };
    let sys_s = WordSystem::new(ks.backend, ks.objects.clone(), ks.truncation, vec![Source::K(ks)]);
    let sys_t = WordSystem::new(kt.backend, kt.objects.clone(), kt.truncation, vec![Source::K(kt)]);
    let gmap = sys_s.map_into(&sys_t, &[0], &id, &|_, c| kmap(c));
    let ix = Precategory::discrete(ks.backend, ks.objects.clone(), ks.truncation);
    let ps = WordSystem::new(ks.backend, ks.objects.clone(), ks.truncation, vec![Source::Lax(&ix), Source::Lax(&src.gamma)]);
    let pt = WordSystem::new(ks.backend, ks.objects.clone(), ks.truncation, vec![Source::Lax(&ix), Source::Lax(&tgt.gamma)]);
    let pmap = ps.map_into(&pt, &[0, 1], &id, &|k, c| if k == 0 { MMorphism::identity(&ix.value(c)) } else { gmap[c].clone() });
    let pointed_map = morphism(&src.pointed, &tgt.pointed, id, pmap);
    let into = pointed_map.then(&tgt.unitalization.eta);
    src.unitalization.descend(&into)
}

/// The arrows `α↓ = (α, id_V): α → id_V`, `ξ_α = (α, i_0): α → i_1` and
/// `ℓ_α = (id_V, q): i_1 → id_V`, where `i_0, i_1: V → V ⊔_U V` are the
/// pushout inclusions and `q` is the codiagonal.
#[derive(Debug, Clone)]
pub struct ArrowMaps {
    pub i1: MMorphism,
    pub i0: MMorphism,
    pub codiagonal: MMorphism,
}

pub fn arrow_maps(alpha: &MMorphism) -> Result<ArrowMaps> {
    let id = MMorphism::identity(&alpha.tgt);
    let c = colimit(&FiniteDiagram {
        nodes: vec![alpha.src.clone(), alpha.tgt.clone(), alpha.tgt.clone()],
        edges: vec![(0, 1, alpha.clone()), (0, 2, alpha.clone())],
    })?;
    let codiagonal = c.induced(&[alpha, &id, &id], &alpha.tgt);
    Ok(ArrowMaps { i0: c.legs[1].clone(), i1: c.legs[2].clone(), codiagonal })
}

/// `Ψ_s(α↓)`, `Ψ_s(ξ_α)`, `Ψ_s(ℓ_α)` with the three precategories involved.
#[derive(Debug, Clone)]
pub struct PsiArrows {
    pub psi_alpha: Psi,
    pub psi_i1: Psi,
    pub psi_id: Psi,
    pub down: PrecatMorphism,
    pub xi: PrecatMorphism,
    pub ell: PrecatMorphism,
}

pub fn psi_arrows(objects: &[String], truncation: usize, s: &Chain, alpha: &MMorphism, cap: usize) -> Result<PsiArrows> {
    let am = arrow_maps(alpha)?;
    let id_v = MMorphism::identity(&alpha.tgt);
    let psi_alpha = psi(objects, truncation, s, alpha, cap)?;
    let psi_i1 = psi(objects, truncation, s, &am.i1, cap)?;
    let psi_id = psi(objects, truncation, s, &id_v, cap)?;
    let down = psi_map(&psi_alpha, &psi_id, alpha, &id_v);
    let xi = psi_map(&psi_alpha, &psi_i1, alpha, &am.i0);
    let ell = psi_map(&psi_i1, &psi_id, &id_v, &am.codiagonal);
    Ok(PsiArrows { psi_alpha, psi_i1, psi_id, down, xi, ell })
}

/// The morphism `Ψ_s(α) → F` corresponding to a square `(a, b): α → F(u_s)`,
/// for a strongly unital `F`.
pub fn psi_transpose(p: &Psi, f: &Arc<Precategory>, a: &MMorphism, b: &MMorphism) -> Result<PrecatMorphism> {
    let k = &p.kobject;
    super::require_same_objects(&p.gamma, f)?;
    let s = &p.lan.s;
    let fu = f.u_map(s);
    if fu.after(a).mat != b.after(&p.lan.alpha).mat {
        return Err(Error::Precondition("the square does not commute".into()));
    }
    let units = f.units.as_ref().ok_or_else(|| Error::Precondition("target needs unit points".into()))?;
    let kmap = |z: &[usize]| -> MMorphism {
        let Some(c) = p.lan.colimits.get(z) else {
            return MMorphism::from_initial(&f.value(z));
        };
        let mut fam = vec![f.structure_map(&Deletion::to_endpoints(z)).after(a)];
        for h in &p.lan.deletions[z] {
            fam.push(f.structure_map(h).after(b));
        }
        let refs: Vec<&MMorphism> = fam.iter().collect();
        c.induced(&refs, &f.value(z))
    };
    let id: Vec<usize> = (0..k.n()).collect();
    let sys = WordSystem::new(k.backend, k.objects.clone(), k.truncation, vec![Source::K(k)]);
    let gmap = sys.evaluate(f, &id, &|_, c| kmap(c));
    let ix = Precategory::discrete(k.backend, k.objects.clone(), k.truncation);
    let ps = WordSystem::new(k.backend, k.objects.clone(), k.truncation, vec![Source::Lax(&ix), Source::Lax(&p.gamma)]);
    let pmap = ps.evaluate(f, &id, &|src, c| {
        if src == 0 {
            f.u_map(c).after(&units[c[0]])
        } else {
            gmap[c].clone()
        }
    });
    let pm = morphism(&p.pointed, f, id, pmap);
    Ok(p.unitalization.descend(&pm))
}

/// Squares `(a, b): α → F(u_s)` in a finite-set backend, by enumeration.
pub fn arrow_squares_finset(alpha: &MMorphism, fu: &MMorphism) -> Vec<(MMorphism, MMorphism)> {
    let mut out = Vec::new();
    let fa = alpha.func();
    let fuf = fu.func();
    for av in functions(alpha.src.dim(), fu.src.dim()) {
        for bv in functions(alpha.tgt.dim(), fu.tgt.dim()) {
            if (0..fa.len()).all(|x| fuf[av[x]] == bv[fa[x]]) {
                out.push((
                    MMorphism::from_function(alpha.src.clone(), fu.src.clone(), &av),
                    MMorphism::from_function(alpha.tgt.clone(), fu.tgt.clone(), &bv),
                ));
            }
        }
    }
    out
}

pub(crate) fn functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * m);
        for f in &out {
            for v in 0..m {
                let mut g = f.clone();
                g.push(v);
                next.push(g);
            }
        }
        out = next;
    }
    out
}

/// Renders a chain list for reports.
pub fn chain_list(objects: &[String], zs: &[Chain]) -> String {
    let v: Vec<String> = zs.iter().map(|z| crate::shapes::chain_to_string(objects, z)).collect();
    v.join(",")
}
