//! Exact base monoidal categories: finite sets, rational vector spaces and
//! bounded rational chain complexes.
//!
//! Every object is a finite basis whose elements carry a homological degree
//! (always 0 outside `ChQ`). Morphisms are sparse rational matrices whose
//! column `j` is the image of basis element `j`; for finite sets each column
//! is a single entry equal to 1.

mod colim;
mod model;

pub use colim::*;
pub use model::*;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{axpy, q, unit_vec, Mat, SVec, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Backend {
    FinSet,
    VectQ,
    ChQ,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::FinSet => "finset",
            Backend::VectQ => "vectq",
            Backend::ChQ => "chq",
        }
    }

    pub fn parse(s: &str) -> Option<Backend> {
        match s {
            "finset" => Some(Backend::FinSet),
            "vectq" => Some(Backend::VectQ),
            "chq" => Some(Backend::ChQ),
            _ => None,
        }
    }

    pub fn is_linear(self) -> bool {
        self != Backend::FinSet
    }
}

#[derive(Debug)]
pub struct ObjData {
    pub backend: Backend,
    pub degrees: Vec<i32>,
    /// Element names, only populated for finite sets.
    pub labels: Vec<String>,
    /// Differential (lowers degree by one), only for chain complexes.
    pub diff: Option<Mat>,
}

/// An object of a base category. Cheap to clone.
#[derive(Clone, Debug)]
pub struct MObject(pub Arc<ObjData>);

impl PartialEq for MObject {
    /// Structural equality; finite-set labels are names only and are ignored.
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.backend == other.0.backend
                && self.0.degrees == other.0.degrees
                && self.0.diff == other.0.diff)
    }
}
impl Eq for MObject {}

impl MObject {
    pub fn finset(labels: Vec<String>) -> Result<MObject> {
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::InvalidObject("finset labels must be distinct".into()));
        }
        Ok(Self::finset_unchecked(labels))
    }

    pub fn finset_unchecked(labels: Vec<String>) -> MObject {
        MObject(Arc::new(ObjData { backend: Backend::FinSet, degrees: vec![0; labels.len()], labels, diff: None }))
    }

    pub fn finset_n(n: usize) -> MObject {
        Self::finset_unchecked((0..n).map(|i| i.to_string()).collect())
    }

    pub fn vectq(n: usize) -> MObject {
        MObject(Arc::new(ObjData { backend: Backend::VectQ, degrees: vec![0; n], labels: Vec::new(), diff: None }))
    }

    /// Chain complex with the given basis degrees and differential.
    pub fn chq(degrees: Vec<i32>, diff: Mat) -> Result<MObject> {
        let n = degrees.len();
        if diff.rows != n || diff.cols != n {
            return Err(Error::InvalidObject("differential has wrong size".into()));
        }
        for (j, c) in diff.data.iter().enumerate() {
            for (i, _) in c {
                if degrees[*i] != degrees[j] - 1 {
                    return Err(Error::InvalidObject("differential must lower degree by one".into()));
                }
            }
        }
        if !diff.mul(&diff).is_zero() {
            return Err(Error::InvalidObject("d∘d ≠ 0".into()));
        }
        Ok(Self::chq_unchecked(degrees, diff))
    }

    pub fn chq_unchecked(degrees: Vec<i32>, diff: Mat) -> MObject {
        MObject(Arc::new(ObjData { backend: Backend::ChQ, degrees, labels: Vec::new(), diff: Some(diff) }))
    }

    /// Complex with zero differential and `dims[k]` basis vectors in degree `lo + k`.
    pub fn chq_graded(lo: i32, dims: &[usize]) -> MObject {
        let mut degrees = Vec::new();
        for (k, d) in dims.iter().enumerate() {
            degrees.extend(core::iter::repeat_n(lo + k as i32, *d));
        }
        let n = degrees.len();
        Self::chq_unchecked(degrees, Mat::zero(n, n))
    }

    /// Object of the given backend with the given degrees; labels and
    /// differential take default values.
    pub fn with_shape(backend: Backend, degrees: Vec<i32>, diff: Option<Mat>) -> MObject {
        match backend {
            Backend::FinSet => Self::finset_n(degrees.len()),
            Backend::VectQ => Self::vectq(degrees.len()),
            Backend::ChQ => {
                let n = degrees.len();
                Self::chq_unchecked(degrees, diff.unwrap_or_else(|| Mat::zero(n, n)))
            }
        }
    }

    /// The monoidal unit.
    pub fn unit(backend: Backend) -> MObject {
        match backend {
            Backend::FinSet => Self::finset_unchecked(vec!["*".to_string()]),
            Backend::VectQ => Self::vectq(1),
            Backend::ChQ => Self::chq_unchecked(vec![0], Mat::zero(1, 1)),
        }
    }

    /// The initial object.
    pub fn initial(backend: Backend) -> MObject {
        match backend {
            Backend::FinSet => Self::finset_unchecked(Vec::new()),
            Backend::VectQ => Self::vectq(0),
            Backend::ChQ => Self::chq_unchecked(Vec::new(), Mat::zero(0, 0)),
        }
    }

    pub fn backend(&self) -> Backend {
        self.0.backend
    }

    pub fn dim(&self) -> usize {
        self.0.degrees.len()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.0.degrees
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.0.degrees[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> String {
        match self.0.labels.get(i) {
            Some(l) => l.clone(),
            None => i.to_string(),
        }
    }

    /// Differential; the zero matrix outside chain complexes.
    pub fn diff(&self) -> Mat {
        match &self.0.diff {
            Some(d) => d.clone(),
            None => Mat::zero(self.dim(), self.dim()),
        }
    }

    pub fn diff_ref(&self) -> Option<&Mat> {
        self.0.diff.as_ref()
    }

    pub fn has_nonzero_diff(&self) -> bool {
        self.0.diff.as_ref().is_some_and(|d| !d.is_zero())
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    /// Sorted list of degrees that occur.
    pub fn degree_set(&self) -> Vec<i32> {
        let mut d = self.0.degrees.clone();
        d.sort();
        d.dedup();
        d
    }

    /// Number of basis elements in each degree, as `(degree, count)`.
    pub fn dims_by_degree(&self) -> Vec<(i32, usize)> {
        let mut out: Vec<(i32, usize)> = Vec::new();
        for d in self.degree_set() {
            out.push((d, self.0.degrees.iter().filter(|x| **x == d).count()));
        }
        out
    }

    pub fn same_backend(&self, other: &MObject) -> Result<()> {
        if self.backend() != other.backend() {
            return Err(Error::Backend(format!("{} vs {}", self.backend().name(), other.backend().name())));
        }
        Ok(())
    }

    /// Checks the object invariants.
    pub fn check(&self) -> Result<()> {
        match self.backend() {
            Backend::FinSet => {
                if self.0.labels.len() != self.dim() {
                    return Err(Error::InvalidObject("finset label count".into()));
                }
                let mut s = self.0.labels.clone();
                s.sort();
                s.dedup();
                if s.len() != self.dim() {
                    return Err(Error::InvalidObject("finset labels must be distinct".into()));
                }
                Ok(())
            }
            Backend::VectQ => Ok(()),
            Backend::ChQ => MObject::chq(self.0.degrees.clone(), self.diff()).map(|_| ()),
        }
    }
}

impl fmt::Display for MObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.backend() {
            Backend::FinSet => write!(f, "{{{}}}", self.0.labels.join(",")),
            Backend::VectQ => write!(f, "Q^{}", self.dim()),
            Backend::ChQ => {
                let parts: Vec<String> =
                    self.dims_by_degree().iter().map(|(d, n)| format!("{}:{}", d, n)).collect();
                write!(f, "Ch[{}]", parts.join(","))
            }
        }
    }
}

/// A morphism of a base category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MMorphism {
    pub src: MObject,
    pub tgt: MObject,
    pub mat: Mat,
}

impl MMorphism {
    /// Checked constructor: shape, backend, finite-set functionality, degree
    /// preservation and compatibility with differentials.
    pub fn new(src: MObject, tgt: MObject, mat: Mat) -> Result<MMorphism> {
        let m = MMorphism { src, tgt, mat };
        m.check()?;
        Ok(m)
    }

    pub fn new_unchecked(src: MObject, tgt: MObject, mat: Mat) -> MMorphism {
        debug_assert_eq!(mat.rows, tgt.dim());
        debug_assert_eq!(mat.cols, src.dim());
        MMorphism { src, tgt, mat }
    }

    /// Finite-set map from an index function.
    pub fn from_function(src: MObject, tgt: MObject, f: &[usize]) -> MMorphism {
        let mat = Mat::from_function(tgt.dim(), f);
        MMorphism::new_unchecked(src, tgt, mat)
    }

    pub fn from_columns(src: MObject, tgt: MObject, cols: Vec<SVec>) -> MMorphism {
        let rows = tgt.dim();
        MMorphism::new_unchecked(src, tgt, Mat::from_columns(rows, cols))
    }

    pub fn identity(x: &MObject) -> MMorphism {
        MMorphism::new_unchecked(x.clone(), x.clone(), Mat::identity(x.dim()))
    }

    pub fn zero(src: &MObject, tgt: &MObject) -> MMorphism {
        MMorphism::new_unchecked(src.clone(), tgt.clone(), Mat::zero(tgt.dim(), src.dim()))
    }

    /// The unique map out of the initial object.
    pub fn from_initial(tgt: &MObject) -> MMorphism {
        MMorphism::zero(&MObject::initial(tgt.backend()), tgt)
    }

    pub fn backend(&self) -> Backend {
        self.src.backend()
    }

    pub fn check(&self) -> Result<()> {
        self.src.same_backend(&self.tgt)?;
        if self.mat.rows != self.tgt.dim() || self.mat.cols != self.src.dim() {
            return Err(Error::Shape(format!(
                "matrix {}x{} for {} -> {}",
                self.mat.rows,
                self.mat.cols,
                self.src.dim(),
                self.tgt.dim()
            )));
        }
        for (j, c) in self.mat.data.iter().enumerate() {
            for (i, x) in c {
                if *i >= self.tgt.dim() {
                    return Err(Error::Shape("row index out of range".into()));
                }
                if self.tgt.degree(*i) != self.src.degree(j) {
                    return Err(Error::NotChainMap("morphism must preserve degree".into()));
                }
                if x.is_zero() {
                    return Err(Error::Shape("explicit zero entry".into()));
                }
            }
            if c.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::Shape("unsorted column".into()));
            }
            if self.backend() == Backend::FinSet && (c.len() != 1 || !c[0].1.is_one()) {
                return Err(Error::Shape("finset morphism must be a function".into()));
            }
        }
        if self.backend() == Backend::ChQ {
            let lhs = self.mat.mul(&self.src.diff());
            let rhs = self.tgt.diff().mul(&self.mat);
            if lhs != rhs {
                return Err(Error::NotChainMap("f∘d ≠ d∘f".into()));
            }
        }
        Ok(())
    }

    /// The element function of a finite-set map.
    pub fn func(&self) -> Vec<usize> {
        self.mat.data.iter().map(|c| c[0].0).collect()
    }

    pub fn apply(&self, v: &[(usize, Q)]) -> SVec {
        self.mat.apply(v)
    }

    pub fn image_of(&self, j: usize) -> &SVec {
        self.mat.col(j)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &MMorphism) -> Result<MMorphism> {
        if g.tgt != self.src {
            return Err(Error::Shape(format!("cannot compose {} -> {} after {} -> {}", self.src, self.tgt, g.src, g.tgt)));
        }
        Ok(self.after(g))
    }

    /// `self ∘ g` without the typing check.
    pub fn after(&self, g: &MMorphism) -> MMorphism {
        MMorphism::new_unchecked(g.src.clone(), self.tgt.clone(), self.mat.mul(&g.mat))
    }

    pub fn is_iso(&self) -> bool {
        self.src.dim() == self.tgt.dim() && self.mat.rank() == self.src.dim()
    }

    pub fn is_injective(&self) -> bool {
        self.mat.is_injective()
    }

    pub fn is_surjective(&self) -> bool {
        self.mat.is_surjective()
    }

    pub fn inverse(&self) -> Option<MMorphism> {
        let inv = self.mat.inverse()?;
        Some(MMorphism::new_unchecked(self.tgt.clone(), self.src.clone(), inv))
    }

    /// `self - other` (linear backends).
    pub fn sub(&self, other: &MMorphism) -> MMorphism {
        MMorphism::new_unchecked(self.src.clone(), self.tgt.clone(), self.mat.sub(&other.mat))
    }

    /// Short textual rendering of the payload, used in reports.
    pub fn payload_string(&self) -> String {
        if self.backend() == Backend::FinSet {
            let f: Vec<String> = self.func().iter().map(|i| i.to_string()).collect();
            return format!("[{}]", f.join(","));
        }
        let mut rows = Vec::new();
        for i in 0..self.mat.rows {
            let r: Vec<String> = (0..self.mat.cols).map(|j| crate::linalg::q_to_string(&self.mat.get(i, j))).collect();
            rows.push(format!("[{}]", r.join(",")));
        }
        format!("[{}]", rows.join(","))
    }
}

/// Position of a basis tuple in the lexicographic tensor basis.
pub fn lex_pos(dims: &[usize], tuple: &[usize]) -> usize {
    let mut p = 0;
    for (d, t) in dims.iter().zip(tuple) {
        p = p * d + t;
    }
    p
}

/// Inverse of [`lex_pos`].
pub fn lex_tuple(dims: &[usize], mut pos: usize) -> Vec<usize> {
    let mut t = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        t[k] = pos % dims[k];
        pos /= dims[k];
    }
    t
}

/// Tensor product of a list of objects. The basis is the lexicographically
/// ordered set of tuples, so the product is strictly associative and the
/// unit is strict.
pub fn tensor_list(objs: &[&MObject]) -> MObject {
    match objs.len() {
        0 => panic!("empty tensor list; use MObject::unit"),
        1 => return objs[0].clone(),
        _ => {}
    }
    let backend = objs[0].backend();
    let dims: Vec<usize> = objs.iter().map(|o| o.dim()).collect();
    let n: usize = dims.iter().product();
    let mut degrees = Vec::with_capacity(n);
    for p in 0..n {
        let t = lex_tuple(&dims, p);
        degrees.push(t.iter().zip(objs).map(|(i, o)| o.degree(*i)).sum());
    }
    match backend {
        Backend::FinSet => {
            let labels = (0..n)
                .map(|p| {
                    let t = lex_tuple(&dims, p);
                    let parts: Vec<String> = t.iter().zip(objs).map(|(i, o)| o.label(*i)).collect();
                    parts.join("⊗")
                })
                .collect();
            MObject::finset_unchecked(labels)
        }
        Backend::VectQ => MObject::vectq(n),
        Backend::ChQ => {
            let diffs: Vec<Mat> = objs.iter().map(|o| o.diff()).collect();
            let mut data = Vec::with_capacity(n);
            for p in 0..n {
                let t = lex_tuple(&dims, p);
                let mut col: SVec = Vec::new();
                let mut sign_deg = 0i32;
                for k in 0..objs.len() {
                    let s = if sign_deg % 2 == 0 { q(1) } else { q(-1) };
                    for (i, x) in diffs[k].col(t[k]) {
                        let mut t2 = t.clone();
                        t2[k] = *i;
                        col = axpy(&col, &(&s * x), &unit_vec(lex_pos(&dims, &t2)));
                    }
                    sign_deg += objs[k].degree(t[k]);
                }
                data.push(col);
            }
            MObject::chq_unchecked(degrees, Mat::from_columns(n, data))
        }
    }
}

pub fn tensor(a: &MObject, b: &MObject) -> MObject {
    tensor_list(&[a, b])
}

/// Tensor product of a list of (degree-0) morphisms.
pub fn tensor_mor_list(fs: &[&MMorphism]) -> MMorphism {
    if fs.len() == 1 {
        return fs[0].clone();
    }
    let srcs: Vec<&MObject> = fs.iter().map(|f| &f.src).collect();
    let tgts: Vec<&MObject> = fs.iter().map(|f| &f.tgt).collect();
    let src = tensor_list(&srcs);
    let tgt = tensor_list(&tgts);
    let sdims: Vec<usize> = srcs.iter().map(|o| o.dim()).collect();
    let tdims: Vec<usize> = tgts.iter().map(|o| o.dim()).collect();
    let cols = (0..src.dim())
        .map(|p| {
            let t = lex_tuple(&sdims, p);
            let vs: Vec<&SVec> = t.iter().zip(fs).map(|(i, f)| f.image_of(*i)).collect();
            tensor_vectors(&tdims, &vs)
        })
        .collect();
    MMorphism::from_columns(src, tgt, cols)
}

pub fn tensor_mor(f: &MMorphism, g: &MMorphism) -> MMorphism {
    tensor_mor_list(&[f, g])
}

/// Tensor product of vectors living in the factors with dimensions `dims`.
pub fn tensor_vectors(dims: &[usize], vs: &[&SVec]) -> SVec {
    let mut acc: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), Q::one())];
    for v in vs {
        let mut next = Vec::with_capacity(acc.len() * v.len());
        for (t, c) in &acc {
            for (i, x) in v.iter() {
                let mut t2 = t.clone();
                t2.push(*i);
                next.push((t2, c * x));
            }
        }
        acc = next;
    }
    let mut out: SVec = acc.into_iter().map(|(t, c)| (lex_pos(dims, &t), c)).collect();
    out.sort_by_key(|x| x.0);
    out
}

/// Symmetry `X ⊗ Y → Y ⊗ X`, `x⊗y ↦ (−1)^{|x||y|} y⊗x`.
pub fn symmetry(x: &MObject, y: &MObject) -> MMorphism {
    let src = tensor(x, y);
    let tgt = tensor(y, x);
    let (nx, ny) = (x.dim(), y.dim());
    let mut cols = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let s = if (x.degree(i) * y.degree(j)) % 2 == 0 { q(1) } else { q(-1) };
            cols.push(vec![(j * nx + i, s)]);
        }
    }
    MMorphism::from_columns(src, tgt, cols)
}

/// Left unitor `I ⊗ X → X`; the identity matrix by the strict unit.
pub fn left_unitor(x: &MObject) -> MMorphism {
    let src = tensor(&MObject::unit(x.backend()), x);
    MMorphism::new_unchecked(src, x.clone(), Mat::identity(x.dim()))
}

/// Right unitor `X ⊗ I → X`.
pub fn right_unitor(x: &MObject) -> MMorphism {
    let src = tensor(x, &MObject::unit(x.backend()));
    MMorphism::new_unchecked(src, x.clone(), Mat::identity(x.dim()))
}

/// Direct sum / disjoint union with the given finite-set labels.
pub(crate) fn sum_object(objs: &[&MObject], backend: Backend, labels: Option<Vec<String>>) -> MObject {
    let mut degrees = Vec::new();
    for o in objs {
        degrees.extend_from_slice(o.degrees());
    }
    let n = degrees.len();
    match backend {
        Backend::FinSet => MObject::finset_unchecked(labels.expect("labels for finset sum")),
        Backend::VectQ => MObject::vectq(n),
        Backend::ChQ => {
            let mut data = Vec::with_capacity(n);
            let mut off = 0;
            for o in objs {
                let d = o.diff();
                for c in &d.data {
                    data.push(c.iter().map(|(i, x)| (i + off, x.clone())).collect());
                }
                off += o.dim();
            }
            MObject::chq_unchecked(degrees, Mat::from_columns(n, data))
        }
    }
}

/// Inclusion of the `k`-th summand of a sum with the given offsets.
pub(crate) fn summand_injection(obj: &MObject, sum: &MObject, offset: usize) -> MMorphism {
    let f: Vec<usize> = (0..obj.dim()).map(|i| i + offset).collect();
    MMorphism::from_function(obj.clone(), sum.clone(), &f)
}

/// Copairing `[f_1, …, f_k]: X_1 ⊔ … ⊔ X_k → T` out of a sum.
pub fn copair(sum: &MObject, fs: &[&MMorphism], tgt: &MObject) -> MMorphism {
    let mut cols = Vec::with_capacity(sum.dim());
    for f in fs {
        cols.extend(f.mat.data.iter().cloned());
    }
    MMorphism::from_columns(sum.clone(), tgt.clone(), cols)
}

/// Direct sum of morphisms `f_1 ⊕ … ⊕ f_k`.
pub fn sum_mor(fs: &[&MMorphism]) -> MMorphism {
    let srcs: Vec<&MObject> = fs.iter().map(|f| &f.src).collect();
    let tgts: Vec<&MObject> = fs.iter().map(|f| &f.tgt).collect();
    let (s, _) = coproduct(&srcs);
    let (t, _) = coproduct(&tgts);
    let mut cols = Vec::new();
    let mut off = 0;
    for f in fs {
        for c in &f.mat.data {
            cols.push(c.iter().map(|(i, x)| (i + off, x.clone())).collect());
        }
        off += f.tgt.dim();
    }
    MMorphism::from_columns(s, t, cols)
}
