//! A checker for co-Segal monoids in precategories under `⊗_S`: levels
//! `F(1), …, F(m)` with coface morphisms and laxity morphisms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::tensor_s_morphism;
use crate::precat::{PrecatMorphism, Precategory};

/// Levels indexed from `1`: `levels[k - 1]` is `F(k)`.
#[derive(Debug, Clone)]
pub struct MonoidalLevels {
    pub levels: Vec<Arc<Precategory>>,
    /// `(k, p)` ↦ the morphism `F(k - 1) → F(k)` for the deletion at `p`, `1 ≤ p < k`.
    pub cofaces: BTreeMap<(usize, usize), PrecatMorphism>,
    /// `(i, j)` ↦ `F(i) ⊗_S F(j) → F(i + j)`.
    pub laxity: BTreeMap<(usize, usize), PrecatMorphism>,
}

/// One named check of [`check_monoidal_levels`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCheck {
    pub name: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Default)]
pub struct LevelsReport {
    pub checks: Vec<LevelCheck>,
}

impl LevelsReport {
    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    fn push(&mut self, name: String, ok: bool) {
        self.checks.push(LevelCheck { name, ok });
    }
}

impl MonoidalLevels {
    /// Every level equal to `f`, identity cofaces and the same multiplication
    /// at every pair of levels.
    pub fn constant(f: &Arc<Precategory>, mult: &PrecatMorphism, m: usize) -> MonoidalLevels {
        let levels = (0..m).map(|_| f.clone()).collect();
        let mut cofaces = BTreeMap::new();
        for k in 2..=m {
            for p in 1..k {
                cofaces.insert((k, p), f.identity_morphism());
            }
        }
        let mut laxity = BTreeMap::new();
        for i in 1..m {
            for j in 1..=m - i {
                laxity.insert((i, j), mult.clone());
            }
        }
        MonoidalLevels { levels, cofaces, laxity }
    }

    fn level(&self, k: usize) -> &Arc<Precategory> {
        &self.levels[k - 1]
    }

    fn coface(&self, k: usize, p: usize) -> &PrecatMorphism {
        &self.cofaces[&(k, p)]
    }

    /// The composite of cofaces `F(1) → F(k)`.
    pub fn u_map(&self, k: usize) -> PrecatMorphism {
        let mut m = self.level(1).identity_morphism();
        for j in 2..=k {
            m = m.then(self.coface(j, 1));
        }
        m
    }
}

fn agree(a: &PrecatMorphism, b: &PrecatMorphism) -> bool {
    a.same_components(b)
}

/// Checks validity of every level and morphism, the simplicial identities
/// among cofaces, naturality and associativity of the laxity, and that every
/// `F(1) → F(k)` is a levelwise weak equivalence.
pub fn check_monoidal_levels(d: &MonoidalLevels) -> LevelsReport {
    let m = d.levels.len();
    let mut r = LevelsReport::default();
    for (k, l) in d.levels.iter().enumerate() {
        r.push(format!("level {} valid", k + 1), l.validate().is_ok());
    }
    let mut missing = false;
    for k in 2..=m {
        for p in 1..k {
            match d.cofaces.get(&(k, p)) {
                Some(c) => {
                    let typed = Arc::ptr_eq(&c.source, d.level(k - 1)) || *c.source == **d.level(k - 1);
                    r.push(format!("coface ({}, {}) valid", k, p), typed && c.check().is_ok());
                }
                None => {
                    missing = true;
                    r.push(format!("coface ({}, {}) present", k, p), false);
                }
            }
        }
    }
    for i in 1..m {
        for j in 1..=m - i {
            match d.laxity.get(&(i, j)) {
                Some(c) => r.push(format!("laxity ({}, {}) valid", i, j), c.check().is_ok()),
                None => {
                    missing = true;
                    r.push(format!("laxity ({}, {}) present", i, j), false);
                }
            }
        }
    }
    if missing || !r.is_ok() {
        return r;
    }
    for k in 3..=m {
        for q in 2..k {
            for p in 1..q {
                let lhs = d.coface(k - 1, p).then(d.coface(k, q));
                let rhs = d.coface(k - 1, q - 1).then(d.coface(k, p));
                r.push(format!("simplicial identity at level {} positions {},{}", k, p, q), agree(&lhs, &rhs));
            }
        }
    }
    for i in 1..m {
        for j in 1..=m - i {
            let lax = &d.laxity[&(i, j)];
            for p in 1..i {
                let id = d.level(j).identity_morphism();
                let lhs = tensor_s_morphism(d.coface(i, p), &id).map(|t| t.then(lax));
                let rhs = d.laxity[&(i - 1, j)].then(d.coface(i + j, p));
                let ok = lhs.map(|l| agree(&l, &rhs)).unwrap_or(false);
                r.push(format!("laxity ({}, {}) natural at left position {}", i, j, p), ok);
            }
            for p in 1..j {
                let id = d.level(i).identity_morphism();
                let lhs = tensor_s_morphism(&id, d.coface(j, p)).map(|t| t.then(lax));
                let rhs = d.laxity[&(i, j - 1)].then(d.coface(i + j, p + i));
                let ok = lhs.map(|l| agree(&l, &rhs)).unwrap_or(false);
                r.push(format!("laxity ({}, {}) natural at right position {}", i, j, p), ok);
            }
        }
    }
    for i in 1..m {
        for j in 1..m {
            for k in 1..m {
                if i + j + k > m {
                    continue;
                }
                let idi = d.level(i).identity_morphism();
                let idk = d.level(k).identity_morphism();
                let lhs = tensor_s_morphism(&d.laxity[&(i, j)], &idk).map(|t| t.then(&d.laxity[&(i + j, k)]));
                let rhs = tensor_s_morphism(&idi, &d.laxity[&(j, k)]).map(|t| t.then(&d.laxity[&(i, j + k)]));
                let ok = match (lhs, rhs) {
                    (Ok(l), Ok(r)) => agree(&l, &r),
                    _ => false,
                };
                r.push(format!("laxity associative at ({}, {}, {})", i, j, k), ok);
            }
        }
    }
    for k in 2..=m {
        r.push(format!("F(1) → F({}) is a levelwise weak equivalence", k), d.u_map(k).is_levelwise_weak_equivalence());
    }
    r
}
