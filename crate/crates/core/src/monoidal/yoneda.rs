//! Yoneda modules and distributors over a split object set `X ⊔ Y`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{compare_precategories, STAR};
use crate::adjoints::pullback;
use crate::base::{tensor, MMorphism, MObject};
use crate::error::{Error, Result};
use crate::homotopy::is_cosegal;
use crate::linalg::Mat;
use crate::precat::{composable_pairs, Diagram, Precategory, Report};
use crate::shapes::{all_chains, concat_unchecked, degree, first, last, Chain, Deletion};

fn zero_map(src: MObject, tgt: MObject) -> MMorphism {
    MMorphism::new_unchecked(src, tgt.clone(), Mat::zero(tgt.dim(), 0))
}

fn identity_on(v: &MObject) -> MMorphism {
    MMorphism::identity(v)
}

/// The Yoneda module `F_A` over `X ⊔ {*}`.
///
/// On chains starting in `X` every `*` except a final one is dropped and the
/// final `*` reads as `A`; chains from `*` to `*` take `I` and chains from `*`
/// into `X` take the initial object.
pub fn yoneda_module(f: &Precategory, a: usize) -> Result<Precategory> {
    if a >= f.n() {
        return Err(Error::Precondition(format!("object {} is not in X", a)));
    }
    if f.objects.iter().any(|o| o == STAR) {
        return Err(Error::Precondition(String::from("X already contains the join marker")));
    }
    let n = f.n();
    let star = n;
    let collapse = |c: &[usize]| -> Option<Chain> {
        if c[0] == star {
            return None;
        }
        let mut w: Chain = c.iter().copied().filter(|x| *x != star).collect();
        if last(c) == star {
            w.push(a);
        }
        Some(w)
    };
    let mut objects = f.objects.clone();
    objects.push(String::from(STAR));
    let unit = MObject::unit(f.backend);
    let empty = MObject::initial(f.backend);
    let mut out = Precategory::new(f.backend, objects, f.truncation);
    for c in all_chains(n + 1, f.truncation) {
        let v = match collapse(&c) {
            Some(w) => f.value(&w),
            None if last(&c) == star => unit.clone(),
            None => empty.clone(),
        };
        for p in 1..degree(&c) {
            let m = match collapse(&c) {
                Some(w) if c[p] != star => {
                    let q = c[..p].iter().filter(|x| **x != star).count();
                    f.generator(&w, q).clone()
                }
                _ => identity_on(&v),
            };
            out.generators.insert((c.clone(), p), m);
        }
        out.values.insert(c, v);
    }
    for (s, t) in composable_pairs(n + 1, f.truncation) {
        let st = concat_unchecked(&s, &t);
        let src = tensor(&out.value(&s), &out.value(&t));
        let tgt = out.value(&st);
        let m = if src.dim() == 0 {
            zero_map(src, tgt)
        } else {
            match (collapse(&st), last(&s) == star) {
                (Some(_), false) => {
                    let (ws, wt) = (collapse(&s).expect("starts in X"), collapse(&t).expect("starts in X"));
                    MMorphism::new_unchecked(src, tgt, f.phi(&ws, &wt).mat)
                }
                (Some(w), true) => {
                    let ws = collapse(&s).expect("starts in X");
                    let deleted: Vec<usize> = (degree(&ws)..degree(&w)).collect();
                    let d = Deletion::new(w, deleted)?;
                    MMorphism::new_unchecked(src, tgt, f.structure_map(&d).mat)
                }
                (None, _) => MMorphism::new_unchecked(src, tgt.clone(), Mat::identity(tgt.dim())),
            }
        };
        out.laxity.insert((s, t), m);
    }
    if let Some(us) = &f.units {
        let mut us = us.clone();
        us.push(MMorphism::identity(&unit));
        out.units = Some(us);
    }
    Ok(out)
}

/// Outcome of the structural checks on a Yoneda module.
#[derive(Debug, Clone, Default)]
pub struct YonedaReport {
    pub validate: Report,
    /// Restriction to `X` against `F`.
    pub restriction: Report,
    /// Generators deleting a `*` that are not identities.
    pub star_deletions: Vec<(Chain, usize)>,
    /// Number of pairs `p < q` whose two generator composites were compared.
    pub simplicial_pairs: usize,
    pub simplicial_failures: Vec<(Chain, usize, usize)>,
    /// `None` when `F` is not co-Segal.
    pub cosegal: Option<bool>,
}

impl YonedaReport {
    pub fn is_ok(&self) -> bool {
        self.validate.is_ok()
            && self.restriction.is_ok()
            && self.star_deletions.is_empty()
            && self.simplicial_failures.is_empty()
            && self.cosegal != Some(false)
    }
}

/// Checks `F_A` against `F`: validity, restriction to `X`, identities on
/// `*`-deletions, every simplicial identity within the truncation and
/// inheritance of the co-Segal condition.
pub fn yoneda_report(f: &Precategory, fa: &Precategory) -> Result<YonedaReport> {
    let n = f.n();
    let star = n;
    let ids: Vec<usize> = (0..n).collect();
    let mut r = YonedaReport { validate: fa.validate(), ..Default::default() };
    if !r.validate.is_ok() {
        return Ok(r);
    }
    r.restriction = compare_precategories(&pullback(fa, &ids, &f.objects)?, f);
    for c in fa.chains() {
        let d = degree(&c);
        for p in 1..d {
            if c[p] == star && c[0] != star {
                let g = fa.generator(&c, p);
                if !g.is_iso() || g.mat != Mat::identity(g.tgt.dim()) {
                    r.star_deletions.push((c.clone(), p));
                }
            }
        }
        for q in 2..d {
            for p in 1..q {
                let lhs = fa.generator(&c, q).after(fa.generator(&crate::shapes::delete_at(&c, q), p));
                let rhs = fa.generator(&c, p).after(fa.generator(&crate::shapes::delete_at(&c, p), q - 1));
                r.simplicial_pairs += 1;
                if lhs.mat != rhs.mat {
                    r.simplicial_failures.push((c.clone(), p, q));
                }
            }
        }
    }
    if is_cosegal(f) {
        r.cosegal = Some(is_cosegal(fa));
    }
    Ok(r)
}

/// `F ⊔ G` over `X ⊔ Y` with every cross component initial.
pub fn disjoint_union(f: &Precategory, g: &Precategory) -> Result<Precategory> {
    if f.backend != g.backend || f.truncation != g.truncation {
        return Err(Error::Precondition(String::from("summands must share backend and truncation")));
    }
    let nx = f.n();
    let n = nx + g.n();
    let mut objects = f.objects.clone();
    objects.extend(g.objects.iter().cloned());
    let side = |x: usize| x >= nx;
    let restrict = |c: &[usize]| -> Option<(bool, Chain)> {
        let s = side(c[0]);
        if side(last(c)) != s {
            return None;
        }
        let w = c.iter().filter(|x| side(**x) == s).map(|x| if s { x - nx } else { *x }).collect();
        Some((s, w))
    };
    let value = |c: &[usize]| match restrict(c) {
        Some((false, w)) => f.value(&w),
        Some((true, w)) => g.value(&w),
        None => MObject::initial(f.backend),
    };
    let mut out = Precategory::new(f.backend, objects, f.truncation);
    for c in all_chains(n, f.truncation) {
        let v = value(&c);
        for p in 1..degree(&c) {
            let m = match restrict(&c) {
                Some((s, w)) if side(c[p]) == s => {
                    let q = c[..p].iter().filter(|x| side(**x) == s).count();
                    if s { g.generator(&w, q).clone() } else { f.generator(&w, q).clone() }
                }
                _ => identity_on(&v),
            };
            out.generators.insert((c.clone(), p), m);
        }
        out.values.insert(c, v);
    }
    for (s, t) in composable_pairs(n, f.truncation) {
        let st = concat_unchecked(&s, &t);
        let src = tensor(&out.value(&s), &out.value(&t));
        let tgt = out.value(&st);
        let m = match (restrict(&s), restrict(&t)) {
            (Some((false, ws)), Some((false, wt))) => MMorphism::new_unchecked(src, tgt, f.phi(&ws, &wt).mat),
            (Some((true, ws)), Some((true, wt))) => MMorphism::new_unchecked(src, tgt, g.phi(&ws, &wt).mat),
            _ => zero_map(src, tgt),
        };
        out.laxity.insert((s, t), m);
    }
    if let (Some(fu), Some(gu)) = (&f.units, &g.units) {
        out.units = Some(fu.iter().chain(gu.iter()).cloned().collect());
    }
    Ok(out)
}

/// Outcome of [`check_distributor`].
#[derive(Debug, Clone, Default)]
pub struct DistributorReport {
    pub validate: Report,
    pub restriction_x: Report,
    pub restriction_y: Report,
    /// Chains from `Y` into `X` with a nonzero value.
    pub forbidden: Vec<Chain>,
    /// Whether `E`, `F` and `G` are all co-Segal.
    pub cosegal: bool,
}

impl DistributorReport {
    pub fn is_ok(&self) -> bool {
        self.validate.is_ok() && self.restriction_x.is_ok() && self.restriction_y.is_ok() && self.forbidden.is_empty()
    }
}

/// Checks that `E` over `X ⊔ Y` (the first `nx` objects forming `X`)
/// restricts to `F` and `G` and vanishes on every chain from `Y` into `X`.
///
/// The vanishing direction follows the join shape `X < Y`: no morphism has
/// its source in `Y`. Chains from `X` into `Y` may be nonzero, as they are for
/// Yoneda modules.
pub fn check_distributor(e: &Precategory, f: &Precategory, g: &Precategory, nx: usize) -> Result<DistributorReport> {
    if nx > e.n() || nx != f.n() || e.n() - nx != g.n() {
        return Err(Error::Precondition(format!(
            "split {} + {} does not match {} objects",
            f.n(),
            g.n(),
            e.n()
        )));
    }
    let mut r = DistributorReport { validate: e.validate(), ..Default::default() };
    if !r.validate.is_ok() {
        return Ok(r);
    }
    let xs: Vec<usize> = (0..nx).collect();
    let ys: Vec<usize> = (nx..e.n()).collect();
    r.restriction_x = compare_precategories(&pullback(e, &xs, &f.objects)?, f);
    r.restriction_y = compare_precategories(&pullback(e, &ys, &g.objects)?, g);
    r.forbidden = e.chains().into_iter().filter(|c| first(c) >= nx && last(c) < nx && e.value(c).dim() > 0).collect();
    r.cosegal = is_cosegal(e) && is_cosegal(f) && is_cosegal(g);
    Ok(r)
}
