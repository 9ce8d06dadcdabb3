//! Unitalization: the reflection of pointed precategories onto strongly
//! unital ones, computed by rounds of coequalizers of the unit constraints.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::congruence::{congruence_quotient, RelationSet};
use crate::base::{coequalizer, colimit, tensor_mor, FiniteDiagram, MMorphism, MObject};
use crate::error::{Error, Result};
use crate::precat::{Diagram, PrecatMorphism, Precategory, Report};
use crate::shapes::{all_chains, concat_unchecked, first, hom_set, last, Chain};

pub const DEFAULT_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One unit constraint `F(σ)` versus `φ ∘ (I ⊗ id)` at `target = (A,A) ⊗ s`
/// (or `s ⊗ (B,B)`), with the coequalizer `j: F(target) → m`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub side: Side,
    pub chain: Chain,
    pub target: Chain,
    pub sigma: Vec<usize>,
    pub lhs: MMorphism,
    pub rhs: MMorphism,
    pub j: MMorphism,
}

impl Constraint {
    pub fn m_dim(&self) -> usize {
        self.j.tgt.dim()
    }
}

#[derive(Debug, Clone)]
pub struct Round {
    pub input: Arc<Precategory>,
    pub constraints: Vec<Constraint>,
    pub map: PrecatMorphism,
    /// Chosen sections of the round map, `output(z) → input(z)`.
    pub sections: BTreeMap<Chain, MMorphism>,
    pub is_iso: bool,
}

#[derive(Debug, Clone)]
pub struct UnitalizationTrace {
    pub rounds: Vec<Round>,
    /// Index of the first round whose map is an isomorphism.
    pub stabilized_at: usize,
}

#[derive(Debug, Clone)]
pub struct Unitalization {
    pub result: Arc<Precategory>,
    pub eta: PrecatMorphism,
    pub trace: UnitalizationTrace,
}

impl Unitalization {
    /// A section `result(z) → input(z)` of `eta` at `z`.
    pub fn section(&self, z: &[usize]) -> MMorphism {
        let mut m = MMorphism::identity(&self.result.value(z));
        for r in self.trace.rounds.iter().rev().filter(|r| !r.is_iso) {
            m = r.sections[z].after(&m);
        }
        m
    }

    /// The map `result → t` induced by a morphism out of the input that is
    /// compatible with the unit relations.
    pub fn descend(&self, f: &PrecatMorphism) -> PrecatMorphism {
        let components = f.components.iter().map(|(z, c)| (z.clone(), c.after(&self.section(z)))).collect();
        PrecatMorphism { source: self.result.clone(), target: f.target.clone(), obj_map: f.obj_map.clone(), components }
    }
}

/// All unit constraints of a pointed precategory.
pub fn unit_constraints(f: &Precategory) -> Result<Vec<Constraint>> {
    let units = f.units.as_ref().ok_or_else(|| Error::Precondition("unitalization needs unit points".into()))?;
    let mut out = Vec::new();
    for s in all_chains(f.n(), f.truncation.saturating_sub(1)) {
        let (a, b) = (first(&s), last(&s));
        let id_s = MMorphism::identity(&f.value(&s));
        for (side, target, rhs) in [
            (Side::Left, concat_unchecked(&[a, a], &s), f.phi(&[a, a], &s).after(&tensor_mor(&units[a], &id_s))),
            (Side::Right, concat_unchecked(&s, &[b, b]), f.phi(&s, &[b, b]).after(&tensor_mor(&id_s, &units[b]))),
        ] {
            let rhs = MMorphism::new_unchecked(id_s.src.clone(), rhs.tgt.clone(), rhs.mat);
            for sigma in hom_set(&target, &s)? {
                let lhs = f.structure_map(&sigma);
                let j = coequalizer(&lhs, &rhs)?.proj;
                out.push(Constraint { side, chain: s.clone(), target: target.clone(), sigma: sigma.deleted, lhs, rhs: rhs.clone(), j });
            }
        }
    }
    Ok(out)
}

fn round(f: &Arc<Precategory>) -> Result<(Round, Arc<Precategory>)> {
    let constraints = unit_constraints(f)?;
    let mut rels: RelationSet = BTreeMap::new();
    for c in &constraints {
        let e = rels.entry(c.target.clone()).or_default();
        for x in 0..c.lhs.src.dim() {
            e.push((c.lhs.image_of(x).clone(), c.rhs.image_of(x).clone()));
        }
    }
    let cq = congruence_quotient(f, &rels);
    let next = Arc::new(cq.result.clone());
    let map = cq.projection(f, &next);
    let is_iso = cq.is_trivial();
    let sections = cq.quotients.iter().map(|(z, q)| (z.clone(), q.section.clone())).collect();
    Ok((Round { input: f.clone(), constraints, map, sections, is_iso }, next))
}

/// Unitalizes a pointed precategory, stopping at the first round whose map
/// is an isomorphism. Fails if no such round occurs within `cap` rounds.
pub fn unitalize(f: &Arc<Precategory>, cap: usize) -> Result<Unitalization> {
    let mut rounds = Vec::new();
    let mut cur = f.clone();
    let mut eta = f.identity_morphism();
    for k in 0..cap.max(1) {
        let (r, next) = round(&cur)?;
        let iso = r.is_iso;
        if !iso {
            eta = eta.then(&r.map);
            cur = next;
        }
        rounds.push(r);
        if iso {
            return Ok(Unitalization { result: cur, eta, trace: UnitalizationTrace { rounds, stabilized_at: k } });
        }
    }
    Err(Error::Unstabilized(format!("unitalization did not stabilize within {} rounds", cap)))
}

/// Checks every colimit computed by a unitalization against the backend
/// colimit of its degree-1 slices.
///
/// For each constraint the coequalizer `j` must factor the round map at its
/// chain. For each pair `(C, D)` the round output must be the backend pushout
/// of the slice span `F(C,D) ← Υ(C,D) → Υ'(C,D)`, where the freely generated
/// precategories `Υ` on an object placed at a chain of degree ≥ 2 are `I` on
/// loops and `∅` elsewhere in degree 1.
pub fn verify_levelwise(u: &Unitalization) -> Report {
    let mut rep = Report::default();
    for (k, r) in u.trace.rounds.iter().enumerate() {
        let f = &r.input;
        let out = &r.map.target;
        for c in &r.constraints {
            let proj = &r.map.components[&c.target];
            let q = coequalizer(&c.lhs, &c.rhs).expect("parallel constraint maps");
            let g = q.descend(proj);
            if g.after(&c.j).mat != proj.mat {
                rep.push(
                    "coequalizer-factorization",
                    format!("round {} at {}", k, f.name(&c.target)),
                    g.after(&c.j).payload_string(),
                    proj.payload_string(),
                );
            }
        }
        for a in 0..f.n() {
            for b in 0..f.n() {
                let z = vec![a, b];
                let fz = f.value(&z);
                let oz = out.value(&z);
                let ups = if a == b { MObject::unit(f.backend) } else { MObject::initial(f.backend) };
                let to_f = if a == b { f.unit_point(a).clone() } else { MMorphism::from_initial(&fz) };
                let to_m = MMorphism::identity(&ups);
                let to_out = if a == b { out.unit_point(a).clone() } else { MMorphism::from_initial(&oz) };
                let comp = &r.map.components[&z];
                let c = colimit(&FiniteDiagram {
                    nodes: vec![ups.clone(), fz.clone(), ups.clone()],
                    edges: vec![(0, 1, to_f.clone()), (0, 2, to_m.clone())],
                })
                .expect("slice span");
                let via = comp.after(&to_f);
                let induced = c.induced(&[&via, comp, &to_out], &oz);
                let ok = induced.is_iso()
                    && induced.after(&c.legs[1]).mat == comp.mat
                    && induced.after(&c.legs[2]).mat == to_out.mat;
                if !ok {
                    rep.push("levelwise-pushout", format!("round {} at {}", k, f.name(&z)), c.apex.to_string(), oz.to_string());
                }
            }
        }
    }
    rep
}
