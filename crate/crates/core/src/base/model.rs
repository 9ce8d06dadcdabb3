//! Homotopical structure of the backends: weak equivalences, fibrations,
//! factorizations, generating cofibrations and lifting problems.
//!
//! `FinSet` and `VectQ` carry the trivial model structure (weak equivalences
//! are isomorphisms). `ChQ` carries the projective structure: quasi-isomorphisms,
//! degreewise surjections, and generating cofibrations `S^{n-1} → D^n`.

use alloc::vec;
use alloc::vec::Vec;

use super::{Backend, MMorphism, MObject};
use crate::linalg::{q, Echelon, Mat, SVec, Q};

/// Mapping cone of `f: X → Y`, basis `X ⊕ Y` with `X` shifted up by one.
pub fn mapping_cone(f: &MMorphism) -> MObject {
    let (x, y) = (&f.src, &f.tgt);
    let (nx, ny) = (x.dim(), y.dim());
    let mut degrees: Vec<i32> = x.degrees().iter().map(|d| d + 1).collect();
    degrees.extend_from_slice(y.degrees());
    let dx = x.diff();
    let dy = y.diff();
    let mut data = Vec::with_capacity(nx + ny);
    // d(a, b) = (-da, f(a) + db)
    for j in 0..nx {
        let mut c: SVec = dx.col(j).iter().map(|(i, v)| (*i, -v.clone())).collect();
        c.extend(f.image_of(j).iter().map(|(i, v)| (i + nx, v.clone())));
        data.push(c);
    }
    for j in 0..ny {
        data.push(dy.col(j).iter().map(|(i, v)| (i + nx, v.clone())).collect());
    }
    MObject::chq_unchecked(degrees, Mat::from_columns(nx + ny, data))
}

/// Homology dimensions `(degree, dim H_n)` over the degrees present.
pub fn homology_dims(x: &MObject) -> Vec<(i32, usize)> {
    let d = x.diff();
    let mut out = Vec::new();
    for deg in x.degree_set() {
        let src: Vec<usize> = (0..x.dim()).filter(|i| x.degree(*i) == deg).collect();
        let above: Vec<usize> = (0..x.dim()).filter(|i| x.degree(*i) == deg + 1).collect();
        let rank_out = rank_of_columns(&d, &src);
        let rank_in = rank_of_columns(&d, &above);
        out.push((deg, src.len() - rank_out - rank_in));
    }
    out
}

fn rank_of_columns(m: &Mat, cols: &[usize]) -> usize {
    let mut e = Echelon::new(m.rows);
    for c in cols {
        e.insert(m.col(*c).clone());
    }
    e.rank()
}

pub fn is_acyclic(x: &MObject) -> bool {
    homology_dims(x).iter().all(|(_, h)| *h == 0)
}

pub fn is_quasi_iso(f: &MMorphism) -> bool {
    is_acyclic(&mapping_cone(f))
}

pub fn is_weak_equivalence(f: &MMorphism) -> bool {
    match f.backend() {
        Backend::ChQ => is_quasi_iso(f),
        _ => f.is_iso(),
    }
}

pub fn is_fibration(f: &MMorphism) -> bool {
    match f.backend() {
        Backend::ChQ => f.is_surjective(),
        _ => true,
    }
}

pub fn is_trivial_fibration(f: &MMorphism) -> bool {
    is_fibration(f) && is_weak_equivalence(f) && f.is_surjective()
}

/// Factorization `f = tfib ∘ cof` with `tfib` a trivial fibration.
///
/// `ChQ` uses the mapping cylinder `M_n = X_n ⊕ X_{n-1} ⊕ Y_n`. The trivial
/// backends return `(f, id)`, since their trivial fibrations are the isomorphisms.
pub fn factorize(f: &MMorphism) -> (MMorphism, MMorphism) {
    if f.backend() != Backend::ChQ {
        return (f.clone(), MMorphism::identity(&f.tgt));
    }
    let (x, y) = (&f.src, &f.tgt);
    let (nx, ny) = (x.dim(), y.dim());
    let dx = x.diff();
    let dy = y.diff();
    let mut degrees: Vec<i32> = x.degrees().to_vec();
    degrees.extend(x.degrees().iter().map(|d| d + 1));
    degrees.extend_from_slice(y.degrees());
    let n = 2 * nx + ny;
    let mut data = Vec::with_capacity(n);
    // d(a, b, c) = (da − b, −db, dc + f(b))
    for j in 0..nx {
        data.push(dx.col(j).clone());
    }
    for j in 0..nx {
        let mut c: SVec = vec![(j, q(-1))];
        c.extend(dx.col(j).iter().map(|(i, v)| (i + nx, -v.clone())));
        c.extend(f.image_of(j).iter().map(|(i, v)| (i + 2 * nx, v.clone())));
        data.push(c);
    }
    for j in 0..ny {
        data.push(dy.col(j).iter().map(|(i, v)| (i + 2 * nx, v.clone())).collect());
    }
    let cyl = MObject::chq_unchecked(degrees, Mat::from_columns(n, data));
    let incl: Vec<usize> = (0..nx).collect();
    let cof = MMorphism::from_function(x.clone(), cyl.clone(), &incl);
    let mut cols = Vec::with_capacity(n);
    for j in 0..nx {
        cols.push(f.image_of(j).clone());
    }
    for _ in 0..nx {
        cols.push(Vec::new());
    }
    for j in 0..ny {
        cols.push(vec![(j, q(1))]);
    }
    let tfib = MMorphism::from_columns(cyl, y.clone(), cols);
    (cof, tfib)
}

/// Sphere `S^n`: one basis vector in degree `n`.
pub fn sphere(n: i32) -> MObject {
    MObject::chq_unchecked(vec![n], Mat::zero(1, 1))
}

/// Disk `D^n`: basis `(e_n, e_{n-1})` with `d e_n = e_{n-1}`.
pub fn disk(n: i32) -> MObject {
    MObject::chq_unchecked(vec![n, n - 1], Mat::from_int_rows(&[&[0, 0], &[1, 0]]))
}

/// Generating cofibrations of a backend. For `ChQ` the window `[lo, hi]`
/// selects `S^{n-1} → D^n` for `n` in `lo..=hi+1`.
pub fn generating_cofibrations(backend: Backend, window: (i32, i32)) -> Vec<MMorphism> {
    match backend {
        Backend::FinSet => {
            let one = MObject::finset_n(1);
            let two = MObject::finset_n(2);
            vec![
                MMorphism::from_initial(&one),
                MMorphism::from_function(two, one, &[0, 0]),
            ]
        }
        Backend::VectQ => {
            let l = MObject::vectq(1);
            vec![
                MMorphism::from_initial(&l),
                MMorphism::from_columns(MObject::vectq(2), l, vec![vec![(0, q(1))], vec![(0, q(1))]]),
            ]
        }
        Backend::ChQ => (window.0..=window.1 + 1)
            .map(|n| MMorphism::from_function(sphere(n - 1), disk(n), &[1]))
            .collect(),
    }
}

/// Generating trivial cofibrations `0 → D^n` (chain complexes only).
pub fn generating_trivial_cofibrations(backend: Backend, window: (i32, i32)) -> Vec<MMorphism> {
    match backend {
        Backend::ChQ => (window.0..=window.1 + 1).map(|n| MMorphism::from_initial(&disk(n))).collect(),
        _ => Vec::new(),
    }
}

/// Degree window spanned by the objects of a morphism, `(0, 0)` if empty.
pub fn degree_window(f: &MMorphism) -> (i32, i32) {
    let mut ds = f.src.degree_set();
    ds.extend(f.tgt.degree_set());
    let lo = ds.iter().min().copied().unwrap_or(0);
    let hi = ds.iter().max().copied().unwrap_or(0);
    (lo, hi)
}

/// Basis of the space of degree-preserving chain maps `a → b`, as matrices.
pub fn chain_map_basis(a: &MObject, b: &MObject) -> Vec<Mat> {
    let vars: Vec<(usize, usize)> = (0..b.dim())
        .flat_map(|i| (0..a.dim()).map(move |j| (i, j)))
        .filter(|(i, j)| b.degree(*i) == a.degree(*j))
        .collect();
    let (da, db) = (a.diff(), b.diff());
    let to_mat = |v: &SVec| {
        let mut m = Mat::zero(b.dim(), a.dim());
        for (k, x) in v {
            let (i, j) = vars[*k];
            m.data[j].push((i, x.clone()));
        }
        for c in m.data.iter_mut() {
            c.sort_by_key(|e| e.0);
        }
        m
    };
    if a.backend() != Backend::ChQ {
        return (0..vars.len()).map(|k| to_mat(&vec![(k, q(1))])).collect();
    }
    // constraint: db ∘ m − m ∘ da = 0, flattened
    let cons_cols: Vec<SVec> = (0..vars.len())
        .map(|k| {
            let m = to_mat(&vec![(k, q(1))]);
            flatten(&db.mul(&m).sub(&m.mul(&da)))
        })
        .collect();
    let cons = Mat::from_columns(b.dim() * a.dim(), cons_cols);
    cons.kernel().iter().map(to_mat).collect()
}

/// Row-major flattening of a matrix into a vector.
pub fn flatten(m: &Mat) -> SVec {
    let mut out: Vec<(usize, Q)> = Vec::new();
    for (j, c) in m.data.iter().enumerate() {
        for (i, x) in c {
            out.push((i * m.cols + j, x.clone()));
        }
    }
    out.sort_by_key(|e| e.0);
    out
}

fn all_functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
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

/// Solves one lifting problem: `k: B → X` with `k ∘ i = top` and `p ∘ k = bottom`.
pub fn lift(i: &MMorphism, p: &MMorphism, top: &MMorphism, bottom: &MMorphism) -> Option<MMorphism> {
    let (b, x) = (&i.tgt, &p.src);
    if i.backend() == Backend::FinSet {
        if x.is_empty() && !b.is_empty() {
            return None;
        }
        return all_functions(b.dim(), x.dim()).into_iter().find_map(|f| {
            let k = MMorphism::from_function(b.clone(), x.clone(), &f);
            (k.after(i) == *top && p.after(&k) == *bottom).then_some(k)
        });
    }
    let basis = chain_map_basis(b, x);
    let cols: Vec<SVec> = basis
        .iter()
        .map(|k| {
            let mut v = flatten(&k.mul(&i.mat));
            let off = i.src.dim() * x.dim();
            v.extend(flatten(&p.mat.mul(k)).into_iter().map(|(j, c)| (j + off, c)));
            v
        })
        .collect();
    let rows = i.src.dim() * x.dim() + b.dim() * p.tgt.dim();
    let sys = Mat::from_columns(rows, cols);
    let mut rhs = flatten(&top.mat);
    let off = i.src.dim() * x.dim();
    rhs.extend(flatten(&bottom.mat).into_iter().map(|(j, c)| (j + off, c)));
    let sol = sys.solve(&rhs)?;
    let mut m = Mat::zero(x.dim(), b.dim());
    for (k, c) in &sol {
        m = m.add(&basis[*k].scale(c));
    }
    Some(MMorphism::new_unchecked(b.clone(), x.clone(), m))
}

/// Whether every commuting square from `i` to `p` has a lift.
pub fn has_rlp(i: &MMorphism, p: &MMorphism) -> bool {
    let (a, b) = (&i.src, &i.tgt);
    let (x, y) = (&p.src, &p.tgt);
    if i.backend() == Backend::FinSet {
        for t in all_functions(a.dim(), x.dim()) {
            let top = MMorphism::from_function(a.clone(), x.clone(), &t);
            for bt in all_functions(b.dim(), y.dim()) {
                let bottom = MMorphism::from_function(b.clone(), y.clone(), &bt);
                if p.after(&top) == bottom.after(i) && lift(i, p, &top, &bottom).is_none() {
                    return false;
                }
            }
        }
        return true;
    }
    let tops = chain_map_basis(a, x);
    let bottoms = chain_map_basis(b, y);
    // square space: coefficients (s, t) with p∘Σ s_k T_k = (Σ t_l B_l)∘i
    let cond_cols: Vec<SVec> = tops
        .iter()
        .map(|t| flatten(&p.mat.mul(t)))
        .chain(bottoms.iter().map(|bm| flatten(&bm.mul(&i.mat).scale(&q(-1)))))
        .collect();
    let cond = Mat::from_columns(a.dim() * y.dim(), cond_cols);
    let square_dim = cond.kernel().len();
    let off = a.dim() * x.dim();
    let mut img = Echelon::new(off + b.dim() * y.dim());
    for k in chain_map_basis(b, x) {
        let mut v = flatten(&k.mul(&i.mat));
        v.extend(flatten(&p.mat.mul(&k)).into_iter().map(|(j, c)| (j + off, c)));
        img.insert(v);
    }
    img.rank() == square_dim
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_is_contractible() {
        let d = disk(1);
        d.check().unwrap();
        let to_zero = MMorphism::zero(&d, &MObject::initial(Backend::ChQ));
        assert!(is_weak_equivalence(&to_zero));
        assert!(is_trivial_fibration(&to_zero));
        let s0 = MMorphism::from_function(sphere(0), disk(1), &[1]);
        assert!(!is_weak_equivalence(&s0));
    }

    #[test]
    fn zero_into_sphere_is_not_a_trivial_fibration() {
        let f = MMorphism::from_initial(&sphere(0));
        assert!(!is_fibration(&f));
        assert!(!is_trivial_fibration(&f));
    }

    #[test]
    fn cylinder_factorization_contracts() {
        let f = MMorphism::zero(&sphere(0), &MObject::initial(Backend::ChQ));
        let (c, t) = factorize(&f);
        c.check().unwrap();
        t.check().unwrap();
        c.tgt.check().unwrap();
        assert_eq!(t.after(&c), f);
        assert!(is_trivial_fibration(&t));
        assert!(c.is_injective());
        let v = MObject::vectq(1);
        let z = MMorphism::zero(&v, &v);
        let (c, t) = factorize(&z);
        assert_eq!(t.after(&c), z);
        assert!(is_trivial_fibration(&t));
    }

    #[test]
    fn lifting_examples() {
        let gens = generating_cofibrations(Backend::ChQ, (0, 0));
        let p = MMorphism::zero(&disk(1), &MObject::initial(Backend::ChQ));
        for g in &gens {
            assert!(has_rlp(g, &p));
        }
        let l = MObject::vectq(1);
        let i = MMorphism::from_initial(&l);
        let p = MMorphism::from_initial(&l);
        let top = MMorphism::from_initial(&p.src);
        let bottom = MMorphism::identity(&l);
        assert!(lift(&i, &p, &top, &bottom).is_none());
        let iso = MMorphism::identity(&l);
        assert!(has_rlp(&i, &iso));
    }
}
