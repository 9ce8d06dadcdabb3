//! Relative natural transformations `σ_1 ⇝ σ_n` between morphisms `F → G`
//! and their classifying objects `∫`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::adjoints::{component_colimit, ComponentColimit};
use crate::base::{coproduct_in, lex_pos, lex_tuple, tensor_list, tensor_mor, tensor_vectors, Backend, MMorphism, MObject};
use crate::error::{Error, Result};
use crate::linalg::{q, sv_add, sv_scale, unit_vec, Mat, SVec};
use crate::precat::{Diagram, PrecatMorphism, Precategory, Report};
use crate::shapes::{concat_unchecked, degree, first, last, Chain};

/// Components `η_A: I → G(f_1 A, …, f_n A)` over a list `σ_1, …, σ_n`.
#[derive(Debug, Clone)]
pub struct RelativeNatTransform {
    pub sigmas: Vec<PrecatMorphism>,
    pub components: Vec<MMorphism>,
}

/// The chain `α_A = (f_1 A, …, f_n A)` for every object `A`.
pub fn alpha_chains(sigmas: &[PrecatMorphism]) -> Vec<Chain> {
    let n = sigmas[0].source.n();
    (0..n).map(|a| sigmas.iter().map(|s| s.obj_map[a]).collect()).collect()
}

struct Setting {
    f: Arc<Precategory>,
    g: Arc<Precategory>,
    first: PrecatMorphism,
    last: PrecatMorphism,
    alphas: Vec<Chain>,
    budget: usize,
    colimits: BTreeMap<(usize, usize), ComponentColimit>,
}

fn same_precat(a: &Arc<Precategory>, b: &Arc<Precategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Setting {
    fn new(sigmas: &[PrecatMorphism]) -> Result<Setting> {
        let s0 = sigmas.first().ok_or_else(|| Error::Precondition(String::from("empty list of morphisms")))?;
        for s in sigmas {
            if !same_precat(&s.source, &s0.source) || !same_precat(&s.target, &s0.target) {
                return Err(Error::Precondition(String::from("morphisms must share source and target")));
            }
            let r = s.check();
            if !r.is_ok() {
                return Err(Error::Precondition(format!("not a morphism: {} at {}", r.violations[0].kind, r.violations[0].location)));
            }
        }
        let (f, g) = (s0.source.clone(), s0.target.clone());
        let k = sigmas.len() - 1;
        if g.truncation < k + 1 {
            return Err(Error::Truncation(format!("chains of degree {} need truncation above {}", k, k)));
        }
        let budget = (g.truncation - k).min(f.truncation);
        let last_ = sigmas[k].clone();
        let mut colimits = BTreeMap::new();
        for a in 0..f.n() {
            for b in 0..f.n() {
                let key = (s0.obj_map[a], last_.obj_map[b]);
                if let alloc::collections::btree_map::Entry::Vacant(e) = colimits.entry(key) {
                    e.insert(component_colimit(&g, key.0, key.1, g.truncation)?);
                }
            }
        }
        for c in colimits.values() {
            for (z, leg) in &c.legs {
                for p in 1..degree(z) {
                    let zp = crate::shapes::delete_at(z, p);
                    if leg.after(g.generator(z, p)).mat != c.legs[&zp].mat {
                        return Err(Error::Precondition(format!("colimit legs disagree at {} position {}", g.name(z), p)));
                    }
                }
            }
        }
        Ok(Setting { alphas: alpha_chains(sigmas), f, g, first: s0.clone(), last: last_, budget, colimits })
    }

    fn chains(&self) -> Vec<Chain> {
        self.f.chains().into_iter().filter(|s| degree(s) <= self.budget).collect()
    }

    fn leg(&self, s: &[usize], z: &[usize]) -> &MMorphism {
        let key = (self.first.obj_map[first(s)], self.last.obj_map[last(s)]);
        &self.colimits[&key].legs[z]
    }

    fn left_chain(&self, s: &[usize]) -> (Chain, Chain) {
        let fs = self.first.image(s);
        let z = concat_unchecked(&fs, &self.alphas[last(s)]);
        (fs, z)
    }

    fn right_chain(&self, s: &[usize]) -> (Chain, Chain) {
        let fs = self.last.image(s);
        let z = concat_unchecked(&self.alphas[first(s)], &fs);
        (fs, z)
    }

    /// `x ⊗ e ↦ leg φ(σ_1 x ⊗ e)` with `e ∈ G(α_B)`.
    fn route_first(&self, s: &[usize], x: &SVec, e: &SVec) -> SVec {
        let (fs, z) = self.left_chain(s);
        let b = &self.alphas[last(s)];
        let y = self.first.components[s].apply(x);
        let dims = [self.g.value(&fs).dim(), self.g.value(b).dim()];
        let v = self.g.phi(&fs, b).apply(&tensor_vectors(&dims, &[&y, e]));
        self.leg(s, &z).apply(&v)
    }

    /// `e ⊗ x ↦ leg φ(e ⊗ σ_n x)` with `e ∈ G(α_A)`.
    fn route_last(&self, s: &[usize], x: &SVec, e: &SVec) -> SVec {
        let (fs, z) = self.right_chain(s);
        let a = &self.alphas[first(s)];
        let y = self.last.components[s].apply(x);
        let dims = [self.g.value(a).dim(), self.g.value(&fs).dim()];
        let v = self.g.phi(a, &fs).apply(&tensor_vectors(&dims, &[e, &y]));
        self.leg(s, &z).apply(&v)
    }
}

impl RelativeNatTransform {
    /// Checks typing of the components and the naturality axiom at every
    /// chain `s` whose composites fit in the truncation.
    pub fn check(&self) -> Result<Report> {
        let st = Setting::new(&self.sigmas)?;
        let mut r = Report::default();
        let unit = MObject::unit(st.g.backend);
        if self.components.len() != st.f.n() {
            r.push("missing", String::from("components"), format!("{}", self.components.len()), format!("{}", st.f.n()));
            return Ok(r);
        }
        for (a, eta) in self.components.iter().enumerate() {
            let want = st.g.value(&st.alphas[a]);
            if eta.src != unit || eta.tgt != want {
                r.push("typing", st.f.objects[a].clone(), eta.src.to_string(), eta.tgt.to_string());
            } else if let Err(e) = eta.check() {
                r.push("invalid-morphism", st.f.objects[a].clone(), e.to_string(), String::new());
            }
        }
        if !r.is_ok() {
            return Ok(r);
        }
        for s in st.chains() {
            let (a, b) = (first(&s), last(&s));
            let (fs1, z1) = st.left_chain(&s);
            let (fsn, zn) = st.right_chain(&s);
            let lhs = st
                .leg(&s, &z1)
                .after(&st.g.phi(&fs1, &st.alphas[b]))
                .after(&tensor_mor(&st.first.components[&s], &self.components[b]));
            let rhs = st
                .leg(&s, &zn)
                .after(&st.g.phi(&st.alphas[a], &fsn))
                .after(&tensor_mor(&self.components[a], &st.last.components[&s]));
            if lhs.mat != rhs.mat {
                r.push("naturality", st.f.name(&s), lhs.payload_string(), rhs.payload_string());
            }
        }
        Ok(r)
    }
}

/// The classifying object `∫` of transformations over `σ_1, …, σ_n`, as a
/// subobject of `Π_A G(α_A)`.
#[derive(Debug, Clone)]
pub struct NatTransformObject {
    pub sigmas: Vec<PrecatMorphism>,
    pub alphas: Vec<Chain>,
    pub factors: Vec<MObject>,
    pub product: MObject,
    pub object: MObject,
    pub inclusion: MMorphism,
    /// Largest degree of the chains `s` at which the axiom is imposed.
    pub budget: usize,
}

impl NatTransformObject {
    fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|o| o.dim()).collect()
    }

    /// The factors of a vector or element of the product.
    pub fn split(&self, v: &SVec) -> Vec<SVec> {
        let dims = self.dims();
        if self.product.backend() == Backend::FinSet {
            let t = lex_tuple(&dims, v[0].0);
            return t.into_iter().map(unit_vec).collect();
        }
        let mut out = vec![Vec::new(); dims.len()];
        let mut off = 0;
        for (k, d) in dims.iter().enumerate() {
            out[k] = v.iter().filter(|(i, _)| *i >= off && *i < off + d).map(|(i, x)| (i - off, x.clone())).collect();
            off += d;
        }
        out
    }

    /// Inverse of [`NatTransformObject::split`].
    pub fn assemble(&self, parts: &[SVec]) -> SVec {
        let dims = self.dims();
        if self.product.backend() == Backend::FinSet {
            let t: Vec<usize> = parts.iter().map(|p| p[0].0).collect();
            return unit_vec(lex_pos(&dims, &t));
        }
        let mut out = Vec::new();
        let mut off = 0;
        for (p, d) in parts.iter().zip(&dims) {
            out.extend(p.iter().map(|(i, x)| (i + off, x.clone())));
            off += d;
        }
        out
    }

    /// The transformation whose components are the factors of `v`.
    pub fn transform(&self, v: &SVec) -> RelativeNatTransform {
        let unit = MObject::unit(self.product.backend());
        let components = self
            .split(v)
            .into_iter()
            .zip(&self.factors)
            .map(|(p, o)| MMorphism::from_columns(unit.clone(), o.clone(), vec![p]))
            .collect();
        RelativeNatTransform { sigmas: self.sigmas.clone(), components }
    }

    /// Whether a vector of the product lies in `∫`.
    pub fn contains(&self, v: &SVec) -> bool {
        if v.is_empty() {
            return true;
        }
        self.inclusion.mat.solve(v).is_some()
    }
}

/// The equalizer `∫` of the two maps `Π_A G(α_A) ⇉ Π_s Hom(F(s), |G|)`,
/// imposed elementwise (finite sets) or basiswise (linear backends).
pub fn nat_transform_object(sigmas: &[PrecatMorphism]) -> Result<NatTransformObject> {
    let st = Setting::new(sigmas)?;
    let backend = st.g.backend;
    let factors: Vec<MObject> = st.alphas.iter().map(|a| st.g.value(a)).collect();
    let refs: Vec<&MObject> = factors.iter().collect();
    let dims: Vec<usize> = factors.iter().map(|o| o.dim()).collect();
    let chains = st.chains();
    let (product, object, cols) = if backend == Backend::FinSet {
        let product = tensor_list(&refs);
        let mut keep = Vec::new();
        'elements: for p in 0..product.dim() {
            let t = lex_tuple(&dims, p);
            for s in &chains {
                for x in 0..st.f.value(s).dim() {
                    let ex = unit_vec(x);
                    let lhs = st.route_first(s, &ex, &unit_vec(t[last(s)]));
                    let rhs = st.route_last(s, &ex, &unit_vec(t[first(s)]));
                    if lhs != rhs {
                        continue 'elements;
                    }
                }
            }
            keep.push(p);
        }
        let labels = keep.iter().map(|p| product.label(*p)).collect();
        let object = MObject::finset_unchecked(labels);
        let cols = keep.into_iter().map(unit_vec).collect();
        (product, object, cols)
    } else {
        let (product, _) = coproduct_in(backend, &refs);
        let mut blocks = Vec::new();
        let mut rows = 0;
        for s in &chains {
            let target = st.colimits[&(st.first.obj_map[first(s)], st.last.obj_map[last(s)])].apex.dim();
            for x in 0..st.f.value(s).dim() {
                blocks.push((s.clone(), x, rows));
                rows += target;
            }
        }
        let mut columns = Vec::with_capacity(product.dim());
        for (k, d) in dims.iter().enumerate() {
            for i in 0..*d {
                let e = unit_vec(i);
                let mut col: SVec = Vec::new();
                for (s, x, off) in &blocks {
                    let ex = unit_vec(*x);
                    let shift = |v: SVec| -> SVec { v.into_iter().map(|(j, c)| (j + off, c)).collect() };
                    if last(s) == k {
                        let parity = (factors[k].degree(i) * st.f.value(s).degree(*x)).rem_euclid(2);
                        let sign = if parity == 0 { q(1) } else { q(-1) };
                        col = sv_add(&col, &shift(sv_scale(&st.route_first(s, &ex, &e), &sign)));
                    }
                    if first(s) == k {
                        col = sv_add(&col, &shift(sv_scale(&st.route_last(s, &ex, &e), &q(-1))));
                    }
                }
                columns.push(col);
            }
        }
        let m = Mat::from_columns(rows, columns);
        let mut basis: Vec<SVec> = Vec::new();
        let mut degrees = Vec::new();
        for deg in product.degree_set() {
            let idx: Vec<usize> = (0..product.dim()).filter(|i| product.degree(*i) == deg).collect();
            let sub = Mat::from_columns(rows, idx.iter().map(|i| m.col(*i).clone()).collect());
            for kv in sub.kernel() {
                basis.push(kv.into_iter().map(|(j, c)| (idx[j], c)).collect());
                degrees.push(deg);
            }
        }
        let object = if backend == Backend::ChQ {
            let span = Mat::from_columns(product.dim(), basis.clone());
            let d = product.diff();
            let mut dcols = Vec::with_capacity(basis.len());
            for b in &basis {
                let db = d.apply(b);
                let y = if db.is_empty() { Vec::new() } else {
                    span.solve(&db).ok_or_else(|| Error::NotChainMap(String::from("equalizer is not a subcomplex")))?
                };
                dcols.push(y);
            }
            MObject::chq(degrees, Mat::from_columns(basis.len(), dcols))?
        } else {
            MObject::vectq(basis.len())
        };
        (product, object, basis)
    };
    let inclusion = MMorphism::from_columns(object.clone(), product.clone(), cols);
    Ok(NatTransformObject {
        sigmas: sigmas.to_vec(),
        alphas: st.alphas,
        factors,
        product,
        object,
        inclusion,
        budget: st.budget,
    })
}

/// Joins `σ_1, …, σ_n` and `σ_n, …, σ_k` along the shared morphism.
pub fn concat_lists(l1: &[PrecatMorphism], l2: &[PrecatMorphism]) -> Result<Vec<PrecatMorphism>> {
    let (a, b) = match (l1.last(), l2.first()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Precondition(String::from("empty list of morphisms"))),
    };
    if !a.same_components(b) {
        return Err(Error::Precondition(String::from("the lists do not share their end morphism")));
    }
    let mut out = l1.to_vec();
    out.extend(l2[1..].iter().cloned());
    Ok(out)
}

/// The composite with components `φ(η1_A ⊗ η2_A) ∈ G(α_A ⊗ β_A)`.
pub fn compose_nat_transforms(t1: &RelativeNatTransform, t2: &RelativeNatTransform) -> Result<RelativeNatTransform> {
    let sigmas = concat_lists(&t1.sigmas, &t2.sigmas)?;
    let g = sigmas[0].target.clone();
    let (a1, a2) = (alpha_chains(&t1.sigmas), alpha_chains(&t2.sigmas));
    let unit = MObject::unit(g.backend);
    let mut components = Vec::with_capacity(a1.len());
    for (a, (x, y)) in a1.iter().zip(&a2).enumerate() {
        if degree(x) + degree(y) > g.truncation {
            return Err(Error::Truncation(format!("composite chain at object {} has degree {}", a, degree(x) + degree(y))));
        }
        let m = g.phi(x, y).after(&tensor_mor(&t1.components[a], &t2.components[a]));
        components.push(MMorphism::new_unchecked(unit.clone(), g.value(&concat_unchecked(x, y)), m.mat));
    }
    Ok(RelativeNatTransform { sigmas, components })
}

/// The pairing `∫_1 ⊗ ∫_2 → ∫_12` induced by the laxity of `G`. Fails when
/// the image of a pair leaves `∫_12`.
pub fn pairing_map(o1: &NatTransformObject, o2: &NatTransformObject, o12: &NatTransformObject) -> Result<MMorphism> {
    let g = o1.sigmas[0].target.clone();
    let src = crate::base::tensor(&o1.object, &o2.object);
    let mut cols = Vec::with_capacity(src.dim());
    for i in 0..o1.object.dim() {
        for j in 0..o2.object.dim() {
            let (p1, p2) = (o1.split(o1.inclusion.image_of(i)), o2.split(o2.inclusion.image_of(j)));
            let parts: Vec<SVec> = (0..p1.len())
                .map(|a| {
                    let (x, y) = (&o1.alphas[a], &o2.alphas[a]);
                    let dims = [g.value(x).dim(), g.value(y).dim()];
                    g.phi(x, y).apply(&tensor_vectors(&dims, &[&p1[a], &p2[a]]))
                })
                .collect();
            let w = o12.assemble(&parts);
            let y = if w.is_empty() {
                Vec::new()
            } else {
                o12.inclusion.mat.solve(&w).ok_or_else(|| Error::Precondition(format!("pair ({}, {}) leaves the target", i, j)))?
            };
            cols.push(y);
        }
    }
    Ok(MMorphism::from_columns(src, o12.object.clone(), cols))
}

/// Compares the two bracketings `∫_1 ⊗ ∫_2 ⊗ ∫_3 → ∫_123` of the pairing.
pub fn pairing_associativity(l1: &[PrecatMorphism], l2: &[PrecatMorphism], l3: &[PrecatMorphism]) -> Result<bool> {
    let (l12, l23) = (concat_lists(l1, l2)?, concat_lists(l2, l3)?);
    let l123 = concat_lists(&l12, l3)?;
    let o = |l: &[PrecatMorphism]| nat_transform_object(l);
    let (o1, o2, o3) = (o(l1)?, o(l2)?, o(l3)?);
    let (o12, o23, o123) = (o(&l12)?, o(&l23)?, o(&l123)?);
    let lhs = pairing_map(&o12, &o3, &o123)?.after(&tensor_mor(&pairing_map(&o1, &o2, &o12)?, &MMorphism::identity(&o3.object)));
    let rhs = pairing_map(&o1, &o23, &o123)?.after(&tensor_mor(&MMorphism::identity(&o1.object), &pairing_map(&o2, &o3, &o23)?));
    Ok(lhs.mat == rhs.mat)
}
