//! The tensor product `⊗_S` of precategories, the unit `Un`, relative natural
//! transformations, Yoneda modules and distributors.

mod levels;
mod natural;
mod yoneda;

#[cfg(test)]
mod tests;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::adjoints::{morphism, pullback};
use crate::base::{left_unitor, right_unitor, symmetry, tensor, tensor_mor, tensor_mor_list, Backend, MMorphism, MObject};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::precat::{composable_pairs, Diagram, PrecatMorphism, Precategory, Report};
use crate::shapes::{all_chains, concat_unchecked, degree, Chain};

pub use levels::*;
pub use natural::*;
pub use yoneda::*;

/// Name of the single object of `Un` and of a marked point.
pub const STAR: &str = "*";

/// The pair of chains over `X` and `Y` of a chain over `X × Y` with `ny` objects in `Y`.
pub fn split_pair(z: &[usize], ny: usize) -> (Chain, Chain) {
    (z.iter().map(|p| p / ny).collect(), z.iter().map(|p| p % ny).collect())
}

/// The chain over `X × Y` pairing two chains of equal degree.
pub fn join_pair(zx: &[usize], zy: &[usize], ny: usize) -> Chain {
    zx.iter().zip(zy).map(|(x, y)| x * ny + y).collect()
}

fn retype(m: MMorphism, src: MObject, tgt: MObject) -> MMorphism {
    MMorphism::new_unchecked(src, tgt, m.mat)
}

/// `F ⊗_S G` over `X × Y`, with `(F ⊗_S G)(s, s') = F(s) ⊗ G(s')`.
pub fn tensor_s(f: &Precategory, g: &Precategory) -> Result<Precategory> {
    if f.backend != g.backend {
        return Err(Error::Backend(format!("{} against {}", f.backend.name(), g.backend.name())));
    }
    if f.truncation != g.truncation {
        return Err(Error::Truncation(format!("truncations {} and {} differ", f.truncation, g.truncation)));
    }
    let (nx, ny) = (f.n(), g.n());
    let objects: Vec<String> =
        (0..nx * ny).map(|p| format!("{}×{}", f.objects[p / ny], g.objects[p % ny])).collect();
    let mut out = Precategory::new(f.backend, objects, f.truncation);
    for z in all_chains(nx * ny, f.truncation) {
        let (zx, zy) = split_pair(&z, ny);
        out.values.insert(z.clone(), tensor(&f.value(&zx), &g.value(&zy)));
        for p in 1..degree(&z) {
            out.generators.insert((z.clone(), p), tensor_mor(f.generator(&zx, p), g.generator(&zy, p)));
        }
    }
    for (s, t) in composable_pairs(nx * ny, f.truncation) {
        let ((sx, sy), (tx, ty)) = (split_pair(&s, ny), split_pair(&t, ny));
        let shuffle = tensor_mor_list(&[
            &MMorphism::identity(&f.value(&sx)),
            &symmetry(&g.value(&sy), &f.value(&tx)),
            &MMorphism::identity(&g.value(&ty)),
        ]);
        let m = tensor_mor(&f.phi(&sx, &tx), &g.phi(&sy, &ty)).after(&shuffle);
        let st = concat_unchecked(&s, &t);
        out.laxity.insert((s.clone(), t.clone()), retype(m, tensor(&out.value(&s), &out.value(&t)), out.value(&st)));
    }
    if let (Some(fu), Some(gu)) = (&f.units, &g.units) {
        let unit = MObject::unit(f.backend);
        let us = (0..nx * ny)
            .map(|p| {
                let (a, b) = (p / ny, p % ny);
                retype(tensor_mor(&fu[a], &gu[b]), unit.clone(), out.value(&[p, p]))
            })
            .collect();
        out.units = Some(us);
    }
    Ok(out)
}

/// `f ⊗_S g` for precategory morphisms.
pub fn tensor_s_morphism(f: &PrecatMorphism, g: &PrecatMorphism) -> Result<PrecatMorphism> {
    let src = Arc::new(tensor_s(&f.source, &g.source)?);
    let tgt = Arc::new(tensor_s(&f.target, &g.target)?);
    let (ny, my) = (g.source.n(), g.target.n());
    let obj_map = (0..src.n()).map(|p| f.obj_map[p / ny] * my + g.obj_map[p % ny]).collect();
    let comps = src
        .chains()
        .into_iter()
        .map(|z| {
            let (zx, zy) = split_pair(&z, ny);
            let m = tensor_mor(&f.components[&zx], &g.components[&zy]);
            (z, m)
        })
        .collect();
    Ok(morphism(&src, &tgt, obj_map, comps))
}

/// The unit `Un`: one object, every value `I`, identity structure maps.
pub fn unit_precat(backend: Backend, truncation: usize) -> Precategory {
    Precategory::discrete(backend, alloc::vec![String::from(STAR)], truncation)
}

/// The right unitor `F ⊗_S Un → F`.
pub fn right_unitor_s(f: &Arc<Precategory>) -> Result<PrecatMorphism> {
    let src = Arc::new(tensor_s(f, &unit_precat(f.backend, f.truncation))?);
    let comps = src.chains().into_iter().map(|z| {
        let m = retype(right_unitor(&f.value(&z)), src.value(&z), f.value(&z));
        (z, m)
    });
    Ok(morphism(&src, f, (0..f.n()).collect(), comps.collect()))
}

/// The left unitor `Un ⊗_S F → F`.
pub fn left_unitor_s(f: &Arc<Precategory>) -> Result<PrecatMorphism> {
    let src = Arc::new(tensor_s(&unit_precat(f.backend, f.truncation), f)?);
    let comps = src.chains().into_iter().map(|z| {
        let m = retype(left_unitor(&f.value(&z)), src.value(&z), f.value(&z));
        (z, m)
    });
    Ok(morphism(&src, f, (0..f.n()).collect(), comps.collect()))
}

/// The associator `(F ⊗_S G) ⊗_S H → F ⊗_S (G ⊗_S H)`. Both sides index
/// `((x, y), z)` and `(x, (y, z))` by the same integer.
pub fn associator_s(f: &Precategory, g: &Precategory, h: &Precategory) -> Result<PrecatMorphism> {
    let left = Arc::new(tensor_s(&tensor_s(f, g)?, h)?);
    let right = Arc::new(tensor_s(f, &tensor_s(g, h)?)?);
    let comps = left.chains().into_iter().map(|z| {
        let m = MMorphism::new_unchecked(left.value(&z), right.value(&z), Mat::identity(left.value(&z).dim()));
        (z, m)
    });
    Ok(morphism(&left, &right, (0..left.n()).collect(), comps.collect()))
}

/// The symmetry `F ⊗_S G → G ⊗_S F`.
pub fn symmetry_s(f: &Precategory, g: &Precategory) -> Result<PrecatMorphism> {
    let src = Arc::new(tensor_s(f, g)?);
    let tgt = Arc::new(tensor_s(g, f)?);
    let (nx, ny) = (f.n(), g.n());
    let obj_map = (0..nx * ny).map(|p| (p % ny) * nx + p / ny).collect();
    let comps = src.chains().into_iter().map(|z| {
        let (zx, zy) = split_pair(&z, ny);
        (z, symmetry(&f.value(&zx), &g.value(&zy)))
    });
    Ok(morphism(&src, &tgt, obj_map, comps.collect()))
}

/// A precategory with a selected object.
#[derive(Debug, Clone)]
pub struct MarkedPrecategory {
    pub precat: Arc<Precategory>,
    pub mark: usize,
}

impl MarkedPrecategory {
    pub fn new(precat: Arc<Precategory>, mark: usize) -> Result<MarkedPrecategory> {
        if mark >= precat.n() {
            return Err(Error::Precondition(format!("marked object {} out of range", mark)));
        }
        Ok(MarkedPrecategory { precat, mark })
    }

    /// The marked tensor product, marked at the pair of marks.
    pub fn tensor(&self, other: &MarkedPrecategory) -> Result<MarkedPrecategory> {
        let p = tensor_s(&self.precat, &other.precat)?;
        Ok(MarkedPrecategory { mark: self.mark * other.precat.n() + other.mark, precat: Arc::new(p) })
    }
}

/// The one-object precategory pulled back along the mark.
pub fn endomorphism(m: &MarkedPrecategory) -> Result<Precategory> {
    pullback(&m.precat, &[m.mark], &[String::from(STAR)])
}

/// `End(m ⊗ m') → End(m) ⊗_S End(m')`, the identity on components.
pub fn endomorphism_comparison(m: &MarkedPrecategory, n: &MarkedPrecategory) -> Result<PrecatMorphism> {
    let left = Arc::new(endomorphism(&m.tensor(n)?)?);
    let right = Arc::new(tensor_s(&endomorphism(m)?, &endomorphism(n)?)?);
    let comps = left.chains().into_iter().map(|z| {
        let id = MMorphism::new_unchecked(left.value(&z), right.value(&z), Mat::identity(left.value(&z).dim()));
        (z, id)
    });
    Ok(morphism(&left, &right, alloc::vec![0], comps.collect()))
}

/// Checks that a comparison morphism is a valid isomorphism of precategories.
pub fn check_isomorphism(m: &PrecatMorphism) -> Report {
    let mut r = m.check();
    let bijective = m.source.n() == m.target.n() && {
        let mut seen = alloc::vec![false; m.target.n()];
        m.obj_map.iter().all(|b| !core::mem::replace(&mut seen[*b], true))
    };
    if !bijective {
        r.push("object-map", String::from("not a bijection"), format!("{:?}", m.obj_map), String::new());
    }
    for (z, c) in &m.components {
        if !c.is_iso() {
            r.push("not-iso", m.source.name(z), c.payload_string(), String::new());
        }
    }
    r
}

/// Literal equality of two precategories on the same chains, ignoring names.
pub fn compare_precategories(a: &Precategory, b: &Precategory) -> Report {
    let mut r = Report::default();
    if a.n() != b.n() || a.truncation != b.truncation || a.backend != b.backend {
        r.push("shape", String::new(), format!("{} objects", a.n()), format!("{} objects", b.n()));
        return r;
    }
    for z in a.chains() {
        if a.value(&z) != b.value(&z) {
            r.push("value", a.name(&z), a.value(&z).to_string(), b.value(&z).to_string());
            continue;
        }
        for p in 1..degree(&z) {
            if a.generator(&z, p).mat != b.generator(&z, p).mat {
                r.push("generator", format!("{} at {}", a.name(&z), p), String::new(), String::new());
            }
        }
    }
    if !r.is_ok() {
        return r;
    }
    for (s, t) in composable_pairs(a.n(), a.truncation) {
        if a.phi(&s, &t).mat != b.phi(&s, &t).mat {
            r.push("laxity", format!("{} ⊗ {}", a.name(&s), a.name(&t)), String::new(), String::new());
        }
    }
    match (&a.units, &b.units) {
        (None, None) => {}
        (Some(x), Some(y)) => {
            for (k, (u, v)) in x.iter().zip(y).enumerate() {
                if u.mat != v.mat {
                    r.push("unit", a.objects[k].clone(), u.payload_string(), v.payload_string());
                }
            }
        }
        _ => r.push("unit", String::from("pointedness differs"), String::new(), String::new()),
    }
    r
}

/// Convenience used by the unit law checks: `F ⊗_S Un ≅ F ≅ Un ⊗_S F`.
pub fn unit_laws(f: &Arc<Precategory>) -> Result<(Report, Report)> {
    Ok((check_isomorphism(&right_unitor_s(f)?), check_isomorphism(&left_unitor_s(f)?)))
}
