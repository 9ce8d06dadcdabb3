//! Finite colimits: coproducts, quotients, coequalizers, pushouts, general
//! finite diagrams and stabilizing sequences.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{copair, sum_object, summand_injection, Backend, MMorphism, MObject};
use crate::error::{Error, Result};
use crate::linalg::{sv_sub, unit_vec, Echelon, Mat, SVec};

/// Coproduct with its injections. The empty coproduct is the initial object.
pub fn coproduct(objs: &[&MObject]) -> (MObject, Vec<MMorphism>) {
    let backend = objs.first().map_or(Backend::VectQ, |o| o.backend());
    coproduct_in(backend, objs)
}

pub fn coproduct_in(backend: Backend, objs: &[&MObject]) -> (MObject, Vec<MMorphism>) {
    let labels = (backend == Backend::FinSet).then(|| {
        let mut l = Vec::new();
        for (k, o) in objs.iter().enumerate() {
            for i in 0..o.dim() {
                l.push(format!("{}·{}", o.label(i), k));
            }
        }
        l
    });
    let sum = sum_object(objs, backend, labels);
    let mut inj = Vec::with_capacity(objs.len());
    let mut off = 0;
    for o in objs {
        inj.push(summand_injection(o, &sum, off));
        off += o.dim();
    }
    (sum, inj)
}

/// A quotient `X → X/R` with a chosen set-theoretic or linear section whose
/// image is the canonical set of representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub obj: MObject,
    pub proj: MMorphism,
    /// `obj → X`, choosing representatives; `proj ∘ section = id`.
    pub section: MMorphism,
}

impl Quotient {
    pub fn identity(x: &MObject) -> Quotient {
        Quotient { obj: x.clone(), proj: MMorphism::identity(x), section: MMorphism::identity(x) }
    }

    /// The map `X/R → T` induced by `f: X → T`, assuming `f` is constant on classes.
    pub fn descend(&self, f: &MMorphism) -> MMorphism {
        f.after(&self.section)
    }

    pub fn is_trivial(&self) -> bool {
        self.obj.dim() == self.proj.src.dim()
    }
}

/// Union-find with smallest-index representatives.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes; returns whether they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

/// Relation accumulator for quotients of a single object.
#[derive(Clone, Debug)]
pub enum Relations {
    Sets(UnionFind),
    Span(Echelon),
}

impl Relations {
    pub fn new(x: &MObject) -> Relations {
        if x.backend() == Backend::FinSet {
            Relations::Sets(UnionFind::new(x.dim()))
        } else {
            Relations::Span(Echelon::new(x.dim()))
        }
    }

    /// Imposes `u ~ w`; returns whether anything new was identified.
    /// For finite sets both vectors must be single basis elements.
    pub fn relate(&mut self, x: &MObject, u: &SVec, w: &SVec) -> bool {
        match self {
            Relations::Sets(uf) => {
                let (a, b) = (u[0].0, w[0].0);
                uf.union(a, b)
            }
            Relations::Span(e) => {
                let v = sv_sub(u, w);
                Self::insert_closed(e, x, v)
            }
        }
    }

    /// Inserts `v` and, for chain complexes, its iterated differentials.
    fn insert_closed(e: &mut Echelon, x: &MObject, v: SVec) -> bool {
        let grew = e.insert(v.clone());
        if grew && x.has_nonzero_diff() {
            let d = x.diff_ref().expect("differential");
            let dv = d.apply(&v);
            if !dv.is_empty() {
                Self::insert_closed(e, x, dv);
            }
        }
        grew
    }

    /// Whether `u ~ w` already holds.
    pub fn related(&mut self, u: &SVec, w: &SVec) -> bool {
        match self {
            Relations::Sets(uf) => uf.find(u[0].0) == uf.find(w[0].0),
            Relations::Span(e) => e.contains(&sv_sub(u, w)),
        }
    }

    /// Canonical representative of the class of `u` (finite sets) or the
    /// reduced form of `u` (linear).
    pub fn normal_form(&mut self, u: &SVec) -> SVec {
        match self {
            Relations::Sets(uf) => unit_vec(uf.find(u[0].0)),
            Relations::Span(e) => e.reduce(u),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Relations::Sets(uf) => {
                let mut uf = uf.clone();
                (0..uf.len()).all(|i| uf.find(i) == i)
            }
            Relations::Span(e) => e.rank() == 0,
        }
    }

    /// Basis of the relation subspace (linear) or pairs `(x, rep(x))` with
    /// `x ≠ rep(x)` (finite sets), each as a pair of vectors.
    pub fn generators(&self) -> Vec<(SVec, SVec)> {
        match self {
            Relations::Sets(uf) => {
                let mut uf = uf.clone();
                (0..uf.len())
                    .filter_map(|i| {
                        let r = uf.find(i);
                        (r != i).then(|| (unit_vec(i), unit_vec(r)))
                    })
                    .collect()
            }
            Relations::Span(e) => e.rows.iter().map(|r| (r.clone(), Vec::new())).collect(),
        }
    }

    pub fn quotient(&self, x: &MObject) -> Quotient {
        match self {
            Relations::Sets(uf) => {
                let mut uf = uf.clone();
                let n = uf.len();
                let reps: Vec<usize> = (0..n).filter(|i| uf.find(*i) == *i).collect();
                let mut idx = vec![0; n];
                for (k, r) in reps.iter().enumerate() {
                    idx[*r] = k;
                }
                let f: Vec<usize> = (0..n).map(|i| idx[uf.find(i)]).collect();
                let labels = reps.iter().map(|r| x.label(*r)).collect();
                let obj = MObject::finset_unchecked(labels);
                let proj = MMorphism::from_function(x.clone(), obj.clone(), &f);
                let section = MMorphism::from_function(obj.clone(), x.clone(), &reps);
                Quotient { obj, proj, section }
            }
            Relations::Span(e) => {
                if e.rank() == 0 {
                    return Quotient::identity(x);
                }
                let (m, pmat, free) = e.quotient();
                let degrees: Vec<i32> = free.iter().map(|i| x.degree(*i)).collect();
                let sec_mat = Mat::from_function(x.dim(), &free);
                let obj = match x.backend() {
                    Backend::ChQ => {
                        let d = pmat.mul(&x.diff()).mul(&sec_mat);
                        MObject::chq_unchecked(degrees, d)
                    }
                    _ => MObject::vectq(m),
                };
                let proj = MMorphism::new_unchecked(x.clone(), obj.clone(), pmat);
                let section = MMorphism::new_unchecked(obj.clone(), x.clone(), sec_mat);
                Quotient { obj, proj, section }
            }
        }
    }
}

/// Quotient of `x` by the congruence generated by the pairs `u_k ~ w_k`.
pub fn quotient_object(x: &MObject, rels: &[(SVec, SVec)]) -> Quotient {
    let mut r = Relations::new(x);
    for (u, w) in rels {
        r.relate(x, u, w);
    }
    r.quotient(x)
}

fn parallel(f: &MMorphism, g: &MMorphism) -> Result<()> {
    if f.src != g.src || f.tgt != g.tgt {
        return Err(Error::Shape("maps are not parallel".into()));
    }
    Ok(())
}

/// Coequalizer of `f, g: X ⇉ Y`.
pub fn coequalizer(f: &MMorphism, g: &MMorphism) -> Result<Quotient> {
    parallel(f, g)?;
    let rels: Vec<(SVec, SVec)> =
        (0..f.src.dim()).map(|j| (f.image_of(j).clone(), g.image_of(j).clone())).collect();
    Ok(quotient_object(&f.tgt, &rels))
}

/// A finite diagram: nodes with objects and edges with morphisms.
#[derive(Clone, Debug, Default)]
pub struct FiniteDiagram {
    pub nodes: Vec<MObject>,
    pub edges: Vec<(usize, usize, MMorphism)>,
}

/// Colimit of a finite diagram with its cocone and bookkeeping for induced maps.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub apex: MObject,
    pub legs: Vec<MMorphism>,
    pub coproduct: MObject,
    pub quotient: Quotient,
}

impl Colimit {
    /// The map out of the colimit induced by a compatible family `nodes → t`.
    pub fn induced(&self, family: &[&MMorphism], t: &MObject) -> MMorphism {
        let cp = copair(&self.coproduct, family, t);
        self.quotient.descend(&cp)
    }
}

impl FiniteDiagram {
    pub fn check(&self) -> Result<()> {
        for (s, t, f) in &self.edges {
            let (Some(a), Some(b)) = (self.nodes.get(*s), self.nodes.get(*t)) else {
                return Err(Error::Shape("edge endpoint outside the diagram".into()));
            };
            if &f.src != a || &f.tgt != b {
                return Err(Error::Shape(format!("edge {}→{} is ill-typed", s, t)));
            }
        }
        Ok(())
    }
}

/// Colimit as the quotient of the coproduct of the nodes by `f(x) ~ x` for every edge.
pub fn colimit_in(backend: Backend, d: &FiniteDiagram) -> Result<Colimit> {
    d.check()?;
    let refs: Vec<&MObject> = d.nodes.iter().collect();
    let (cp, inj) = coproduct_in(backend, &refs);
    let mut rels = Relations::new(&cp);
    for (s, t, f) in &d.edges {
        for j in 0..f.src.dim() {
            let u = inj[*s].image_of(j).clone();
            let w = inj[*t].apply(f.image_of(j));
            rels.relate(&cp, &w, &u);
        }
    }
    let quotient = rels.quotient(&cp);
    let legs = inj.iter().map(|i| quotient.proj.after(i)).collect();
    Ok(Colimit { apex: quotient.obj.clone(), legs, coproduct: cp, quotient })
}

pub fn colimit(d: &FiniteDiagram) -> Result<Colimit> {
    let backend = d.nodes.first().map_or(Backend::VectQ, |o| o.backend());
    colimit_in(backend, d)
}

/// Pushout of `left: A → B` and `right: A → C`: apex with maps from `B` and `C`.
pub fn pushout(left: &MMorphism, right: &MMorphism) -> Result<(MObject, MMorphism, MMorphism)> {
    if left.src != right.src {
        return Err(Error::Shape("pushout legs must share a source".into()));
    }
    let c = colimit(&FiniteDiagram {
        nodes: vec![left.src.clone(), left.tgt.clone(), right.tgt.clone()],
        edges: vec![(0, 1, left.clone()), (0, 2, right.clone())],
    })?;
    Ok((c.apex.clone(), c.legs[1].clone(), c.legs[2].clone()))
}

/// Colimit of a star diagram with the given legs out of `center`.
pub fn wide_pushout(center: &MObject, legs: &[MMorphism]) -> Result<Colimit> {
    for l in legs {
        if &l.src != center {
            return Err(Error::Shape("wide pushout legs must start at the center".into()));
        }
    }
    let mut nodes = vec![center.clone()];
    let mut edges = Vec::new();
    for (k, l) in legs.iter().enumerate() {
        nodes.push(l.tgt.clone());
        edges.push((0, k + 1, l.clone()));
    }
    colimit_in(center.backend(), &FiniteDiagram { nodes, edges })
}

/// Result of [`sequence_colimit_stabilized`].
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub value: MObject,
    pub index: usize,
}

/// Colimit of `X_0 → X_1 → …` given as the list of structure maps, detected
/// as the first index from which every remaining map is an isomorphism.
pub fn sequence_colimit_stabilized(seq: &[MMorphism]) -> Result<Stabilized> {
    for w in seq.windows(2) {
        if w[0].tgt != w[1].src {
            return Err(Error::Shape("sequence maps are not composable".into()));
        }
    }
    let isos: Vec<bool> = seq.iter().map(|f| f.is_iso()).collect();
    let mut k = seq.len();
    while k > 0 && isos[k - 1] {
        k -= 1;
    }
    if k == seq.len() {
        return Err(Error::Unstabilized(format!("last of {} maps is not an isomorphism", seq.len())));
    }
    Ok(Stabilized { value: seq[k].src.clone(), index: k })
}

/// The pushout along a coproduct `E = ∐C_i ∪^{∐A_i} B` against the wide
/// pushout `D̄` of the pushouts `D_i = C_i ∪^{A_i} B`, with the comparison
/// maps induced in both directions.
#[derive(Clone, Debug)]
pub struct CoproductPushout {
    pub e: MObject,
    pub gamma: MMorphism,
    pub dbar: MObject,
    pub delta: MMorphism,
    pub to_dbar: MMorphism,
    pub to_e: MMorphism,
}

impl CoproductPushout {
    /// The comparisons are mutually inverse and carry `γ` to `δ`.
    pub fn is_inverse_pair(&self) -> bool {
        let id_e = Mat::identity(self.e.dim());
        let id_d = Mat::identity(self.dbar.dim());
        self.to_e.after(&self.to_dbar).mat == id_e
            && self.to_dbar.after(&self.to_e).mat == id_d
            && self.to_dbar.after(&self.gamma).mat == self.delta.mat
    }
}

/// Builds both sides for the family `C_i ←p_i− A_i −h_i→ B`.
pub fn coproduct_pushout(b: &MObject, data: &[(MMorphism, MMorphism)]) -> Result<CoproductPushout> {
    let backend = b.backend();
    for (p, h) in data {
        if p.src != h.src || &h.tgt != b {
            return Err(Error::Shape("pushout data must be spans into the common object".into()));
        }
    }
    let a_objs: Vec<&MObject> = data.iter().map(|(p, _)| &p.src).collect();
    let c_objs: Vec<&MObject> = data.iter().map(|(p, _)| &p.tgt).collect();
    let (sa, _) = coproduct_in(backend, &a_objs);
    let (sc, inj_c) = coproduct_in(backend, &c_objs);
    let pc: Vec<MMorphism> = data.iter().zip(&inj_c).map(|((p, _), i)| i.after(p)).collect();
    let sum_p = copair(&sa, &pc.iter().collect::<Vec<_>>(), &sc);
    let sum_h = copair(&sa, &data.iter().map(|(_, h)| h).collect::<Vec<_>>(), b);
    let e = colimit_in(
        backend,
        &FiniteDiagram { nodes: vec![sa.clone(), sc.clone(), b.clone()], edges: vec![(0, 1, sum_p), (0, 2, sum_h.clone())] },
    )?;
    let d: Vec<Colimit> = data
        .iter()
        .map(|(p, h)| {
            colimit_in(
                backend,
                &FiniteDiagram {
                    nodes: vec![p.src.clone(), p.tgt.clone(), b.clone()],
                    edges: vec![(0, 1, p.clone()), (0, 2, h.clone())],
                },
            )
        })
        .collect::<Result<_>>()?;
    let etas: Vec<MMorphism> = d.iter().map(|c| c.legs[2].clone()).collect();
    let dbar = wide_pushout(b, &etas)?;
    let delta = dbar.legs[0].clone();
    let into_dbar: Vec<MMorphism> = d.iter().enumerate().map(|(i, c)| dbar.legs[i + 1].after(&c.legs[1])).collect();
    let c_to_dbar = copair(&sc, &into_dbar.iter().collect::<Vec<_>>(), &dbar.apex);
    let to_dbar = e.induced(&[&delta.after(&sum_h), &c_to_dbar, &delta], &dbar.apex);
    let gamma = e.legs[2].clone();
    let d_to_e: Vec<MMorphism> = d
        .iter()
        .zip(data)
        .zip(&inj_c)
        .map(|((c, (_, h)), i)| c.induced(&[&gamma.after(h), &e.legs[1].after(i), &gamma], &e.apex))
        .collect();
    let mut family = vec![&gamma];
    family.extend(d_to_e.iter());
    let to_e = dbar.induced(&family, &e.apex);
    Ok(CoproductPushout { e: e.apex.clone(), gamma, dbar: dbar.apex.clone(), delta, to_dbar, to_e })
}

/// Colimits of two crossing sequences `C_k → D_k → C_{k+1}` and the maps
/// between them induced by `η_k` and `ε_k`.
#[derive(Clone, Debug)]
pub struct Crossing {
    pub c_index: usize,
    pub d_index: usize,
    /// `C_M` and `D_M` at the first index `M` where both sequences are stable.
    pub c_colimit: MObject,
    pub d_colimit: MObject,
    pub eta_inf: MMorphism,
    pub eps_inf: MMorphism,
}

impl Crossing {
    pub fn is_inverse_pair(&self) -> bool {
        self.eps_inf.after(&self.eta_inf).mat == Mat::identity(self.c_colimit.dim())
            && self.eta_inf.after(&self.eps_inf).mat == Mat::identity(self.d_colimit.dim())
    }
}

/// Takes `η_0, …, η_m` with `η_k: C_k → D_k` and `ε_0, …, ε_{m-1}` with
/// `ε_k: D_k → C_{k+1}`; the structure maps are `ε_k η_k` and `η_{k+1} ε_k`.
pub fn crossing(eta: &[MMorphism], eps: &[MMorphism]) -> Result<Crossing> {
    if eta.len() != eps.len() + 1 || eps.is_empty() {
        return Err(Error::Shape(format!("{} η maps need {} ε maps, at least one", eta.len(), eta.len().saturating_sub(1))));
    }
    for (k, e) in eps.iter().enumerate() {
        if e.src != eta[k].tgt || e.tgt != eta[k + 1].src {
            return Err(Error::Shape(format!("ε_{} does not connect D_{} to C_{}", k, k, k + 1)));
        }
    }
    let m = eps.len();
    let cs: Vec<MMorphism> = (0..m).map(|k| eps[k].after(&eta[k])).collect();
    let ds: Vec<MMorphism> = (0..m).map(|k| eta[k + 1].after(&eps[k])).collect();
    let c = sequence_colimit_stabilized(&cs)?;
    let d = sequence_colimit_stabilized(&ds)?;
    let big = c.index.max(d.index);
    let back = cs[big].inverse().expect("stable structure map");
    Ok(Crossing {
        c_index: c.index,
        d_index: d.index,
        c_colimit: eta[big].src.clone(),
        d_colimit: eta[big].tgt.clone(),
        eta_inf: eta[big].clone(),
        eps_inf: back.after(&eps[big]),
    })
}

/// Renders a quotient's class sizes, for reports.
pub fn describe_quotient(q: &Quotient) -> String {
    format!("{} -> {}", q.proj.src, q.obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use alloc::string::ToString;

    #[test]
    fn empty_coproduct_is_initial() {
        let (c, inj) = coproduct(&[]);
        assert!(c.is_empty());
        assert!(inj.is_empty());
    }

    #[test]
    fn finset_coproduct_labels() {
        let a = MObject::finset(vec!["a".to_string()]).unwrap();
        let b = MObject::finset(vec!["b".to_string()]).unwrap();
        let (c, _) = coproduct(&[&a, &b]);
        assert_eq!(c.labels(), &["a·0".to_string(), "b·1".to_string()]);
    }

    #[test]
    fn coequalizer_examples() {
        let x = MObject::vectq(1);
        let f = MMorphism::identity(&x);
        let g = MMorphism::zero(&x, &x);
        assert_eq!(coequalizer(&f, &g).unwrap().obj.dim(), 0);
        let same = coequalizer(&f, &f).unwrap();
        assert_eq!(same.proj, MMorphism::identity(&x));
        let one = MObject::finset_n(1);
        let two = MObject::finset(vec!["a".to_string(), "b".to_string()]).unwrap();
        let fa = MMorphism::from_function(one.clone(), two.clone(), &[0]);
        let fb = MMorphism::from_function(one, two, &[1]);
        let c = coequalizer(&fa, &fb).unwrap();
        assert_eq!(c.obj.dim(), 1);
        assert_eq!(c.obj.labels()[0], "a");
    }

    #[test]
    fn pushout_of_zero_into_line() {
        let z = MObject::vectq(0);
        let l = MObject::vectq(1);
        let a = MMorphism::zero(&z, &l);
        let (p, i0, i1) = pushout(&a, &a).unwrap();
        assert_eq!(p.dim(), 2);
        assert_ne!(i0, i1);
        let id = MMorphism::identity(&l);
        assert_eq!(pushout(&id, &id).unwrap().0.dim(), 1);
    }

    #[test]
    fn wide_pushout_degenerate_cases() {
        let x = MObject::vectq(2);
        assert_eq!(wide_pushout(&x, &[]).unwrap().apex, x);
        let f = MMorphism::new(x.clone(), MObject::vectq(3), Mat::from_int_rows(&[&[1, 0], &[0, 1], &[0, 0]])).unwrap();
        assert_eq!(wide_pushout(&x, &[f.clone()]).unwrap().apex.dim(), 3);
    }

    #[test]
    fn sequence_stabilization() {
        let x = MObject::vectq(2);
        let id = MMorphism::identity(&x);
        let s = sequence_colimit_stabilized(&[id.clone(), id.clone()]).unwrap();
        assert_eq!(s.index, 0);
        let inc = |a: usize, b: usize| {
            let rows: Vec<Vec<crate::linalg::Q>> =
                (0..b).map(|i| (0..a).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect();
            MMorphism::new_unchecked(MObject::vectq(a), MObject::vectq(b), Mat::from_rows(&rows, a))
        };
        assert!(sequence_colimit_stabilized(&[inc(1, 2), inc(2, 3), inc(3, 4)]).is_err());
    }

    #[test]
    fn chq_quotient_keeps_d_squared_zero() {
        let d1 = MObject::chq(vec![1, 0], Mat::from_int_rows(&[&[0, 0], &[1, 0]])).unwrap();
        let x = crate::base::sum_mor(&[&MMorphism::identity(&d1), &MMorphism::identity(&d1)]).src;
        let q = quotient_object(&x, &[(unit_vec(0), unit_vec(2))]);
        assert_eq!(q.obj.dim(), 2);
        q.obj.check().unwrap();
        q.proj.check().unwrap();
    }

    #[test]
    fn coproduct_pushout_small_cases() {
        let b = MObject::vectq(2);
        let c = coproduct_pushout(&b, &[]).unwrap();
        assert_eq!(c.e.dim(), 2);
        assert!(c.is_inverse_pair());
        let a = MObject::vectq(1);
        let p = MMorphism::zero(&a, &MObject::vectq(0));
        let h = MMorphism::from_columns(a.clone(), b.clone(), vec![vec![(0, q(1))]]);
        let c = coproduct_pushout(&b, &[(p.clone(), h.clone()), (p, h)]).unwrap();
        assert_eq!(c.e.dim(), 1);
        assert_eq!(c.dbar.dim(), 1);
        assert!(c.is_inverse_pair());
    }

    #[test]
    fn crossing_of_identities_and_growth() {
        let x = MObject::vectq(2);
        let id = MMorphism::identity(&x);
        let c = crossing(&[id.clone(), id.clone()], &[id.clone()]).unwrap();
        assert_eq!((c.c_index, c.d_index), (0, 0));
        assert!(c.is_inverse_pair());
        let grow = |n: usize| MMorphism::from_function(MObject::vectq(n), MObject::vectq(n + 1), &(0..n).collect::<Vec<_>>());
        let err = crossing(&[grow(0), grow(2)], &[grow(1)]);
        assert!(matches!(err, Err(Error::Unstabilized(_))));
    }
}
