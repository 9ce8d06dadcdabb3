//! Chains over a finite object set and the deletions between them.
//!
//! Objects are indices `0..n`. A chain `(A_0, …, A_k)` has degree `k`; a
//! deletion removes interior letters while keeping both endpoints.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type Chain = Vec<usize>;

pub fn degree(z: &[usize]) -> usize {
    z.len().saturating_sub(1)
}

pub fn first(z: &[usize]) -> usize {
    z[0]
}

pub fn last(z: &[usize]) -> usize {
    z[z.len() - 1]
}

/// Concatenation `s ⊗ t`, gluing the last letter of `s` to the first of `t`.
pub fn concat(s: &[usize], t: &[usize]) -> Result<Chain> {
    if s.is_empty() || t.is_empty() || last(s) != first(t) {
        return Err(Error::Chain(format!("cannot concatenate {:?} and {:?}", s, t)));
    }
    let mut z = s.to_vec();
    z.extend_from_slice(&t[1..]);
    Ok(z)
}

pub fn concat_unchecked(s: &[usize], t: &[usize]) -> Chain {
    let mut z = s.to_vec();
    z.extend_from_slice(&t[1..]);
    z
}

/// Removes position `p` from `z`.
pub fn delete_at(z: &[usize], p: usize) -> Chain {
    let mut w = z.to_vec();
    w.remove(p);
    w
}

/// The chain `(A, B)` with the same endpoints as `z`.
pub fn endpoints(z: &[usize]) -> Chain {
    vec![first(z), last(z)]
}

/// A 2-morphism `source → target` removing the listed interior positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Deletion {
    pub source: Chain,
    pub deleted: Vec<usize>,
}

impl Deletion {
    pub fn new(source: Chain, mut deleted: Vec<usize>) -> Result<Deletion> {
        deleted.sort_unstable();
        deleted.dedup();
        let d = degree(&source);
        if source.is_empty() || deleted.iter().any(|p| *p == 0 || *p >= d) {
            return Err(Error::Chain(format!("positions {:?} are not interior to {:?}", deleted, source)));
        }
        Ok(Deletion { source, deleted })
    }

    pub fn identity(s: &[usize]) -> Deletion {
        Deletion { source: s.to_vec(), deleted: Vec::new() }
    }

    /// The deletion `s → (A, B)` removing every interior letter.
    pub fn to_endpoints(s: &[usize]) -> Deletion {
        Deletion { source: s.to_vec(), deleted: (1..degree(s)).collect() }
    }

    pub fn target(&self) -> Chain {
        self.source
            .iter()
            .enumerate()
            .filter(|(i, _)| self.deleted.binary_search(i).is_err())
            .map(|(_, a)| *a)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.deleted.is_empty()
    }

    /// Positions of `source` that survive, in order.
    pub fn surviving(&self) -> Vec<usize> {
        (0..self.source.len()).filter(|i| self.deleted.binary_search(i).is_err()).collect()
    }

    /// Increasing generator word; position `p` deletes the letter at `p`, and
    /// the word is applied from its last entry to its first.
    pub fn sigma_factorization(&self) -> Vec<usize> {
        self.deleted.clone()
    }

    /// Single-letter deletions `(chain, position)` in application order.
    pub fn generator_steps(&self) -> Vec<(Chain, usize)> {
        let mut z = self.source.clone();
        let mut out = Vec::with_capacity(self.deleted.len());
        for p in self.deleted.iter().rev() {
            out.push((z.clone(), *p));
            z.remove(*p);
        }
        out
    }

    /// Horizontal composite `self ⊗ other` on `concat(source, other.source)`.
    pub fn tensor(&self, other: &Deletion) -> Result<Deletion> {
        let source = concat(&self.source, &other.source)?;
        let off = degree(&self.source);
        let mut deleted = self.deleted.clone();
        deleted.extend(other.deleted.iter().map(|p| p + off));
        Ok(Deletion { source, deleted })
    }
}

/// `g ∘ f`: first apply `f`, then `g` on `f`'s target.
pub fn compose_deletions(g: &Deletion, f: &Deletion) -> Result<Deletion> {
    if g.source != f.target() {
        return Err(Error::Chain(format!("deletions not composable: {:?} after {:?}", g, f)));
    }
    let surv = f.surviving();
    let mut deleted = f.deleted.clone();
    deleted.extend(g.deleted.iter().map(|p| surv[*p]));
    deleted.sort_unstable();
    Ok(Deletion { source: f.source.clone(), deleted })
}

/// All deletions `s → t`.
pub fn hom_set(s: &[usize], t: &[usize]) -> Result<Vec<Deletion>> {
    if s.is_empty() || t.is_empty() || first(s) != first(t) || last(s) != last(t) {
        return Err(Error::Chain(format!("endpoints of {:?} and {:?} differ", s, t)));
    }
    let mut out = Vec::new();
    if t.len() > s.len() {
        return Ok(out);
    }
    let mut keep: Vec<usize> = Vec::new();
    embeddings(s, t, 0, 0, &mut keep, &mut out);
    Ok(out)
}

fn embeddings(s: &[usize], t: &[usize], i: usize, j: usize, keep: &mut Vec<usize>, out: &mut Vec<Deletion>) {
    if j == t.len() {
        if i == s.len() {
            let deleted = (0..s.len()).filter(|p| !keep.contains(p)).collect();
            out.push(Deletion { source: s.to_vec(), deleted });
        }
        return;
    }
    if i == s.len() || s.len() - i < t.len() - j {
        return;
    }
    let last_letter = j == t.len() - 1;
    let first_letter = j == 0;
    if s[i] == t[j] && (!first_letter || i == 0) && (!last_letter || i == s.len() - 1) {
        keep.push(i);
        embeddings(s, t, i + 1, j + 1, keep, out);
        keep.pop();
    }
    if i > 0 {
        embeddings(s, t, i + 1, j, keep, out);
    }
}

/// Ways of writing `z` as a concatenation of at least two chains of positive degree.
pub fn subdivisions(z: &[usize]) -> Vec<Vec<Chain>> {
    compositions(z).into_iter().filter(|p| p.len() >= 2).collect()
}

/// All splittings of `z` into chains of positive degree, the trivial one first.
pub fn compositions(z: &[usize]) -> Vec<Vec<Chain>> {
    let d = degree(z);
    if d == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 0..(1u64 << (d - 1)) {
        let mut parts = Vec::new();
        let mut start = 0;
        for cut in 1..d {
            if mask & (1 << (cut - 1)) != 0 {
                parts.push(z[start..=cut].to_vec());
                start = cut;
            }
        }
        parts.push(z[start..].to_vec());
        out.push(parts);
    }
    out.sort_by_key(|p: &Vec<Chain>| p.len());
    out
}

/// Chains from `a` to `b` of degree `1..=maxdeg` over `n` objects.
pub fn enumerate_chains(n: usize, a: usize, b: usize, maxdeg: usize) -> Result<Vec<Chain>> {
    if a >= n || b >= n {
        return Err(Error::Chain(format!("object index out of range for {} objects", n)));
    }
    let mut out = Vec::new();
    let mut layer: Vec<Chain> = vec![vec![a]];
    for _ in 1..=maxdeg {
        for z in &layer {
            let mut w = z.clone();
            w.push(b);
            out.push(w);
        }
        let mut next = Vec::with_capacity(layer.len() * n);
        for z in &layer {
            for x in 0..n {
                let mut w = z.clone();
                w.push(x);
                next.push(w);
            }
        }
        layer = next;
    }
    Ok(out)
}

/// Every chain of degree `1..=maxdeg`, ordered by degree and then lexicographically.
pub fn all_chains(n: usize, maxdeg: usize) -> Vec<Chain> {
    let mut out = Vec::new();
    let mut layer: Vec<Chain> = (0..n).map(|a| vec![a]).collect();
    for _ in 1..=maxdeg {
        let mut next = Vec::with_capacity(layer.len() * n);
        for z in &layer {
            for x in 0..n {
                let mut w = z.clone();
                w.push(x);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Collapses a trailing block of `star` letters to a single one.
pub fn support(c: &[usize], star: usize) -> Result<Chain> {
    let k = c.iter().position(|x| *x == star);
    match k {
        Some(k) if k > 0 && c[k..].iter().all(|x| *x == star) => Ok(c[..=k].to_vec()),
        _ => Err(Error::Chain(format!("{:?} is not of the form (B,…,C,*,…,*)", c))),
    }
}

pub fn chain_to_string(names: &[String], z: &[usize]) -> String {
    let parts: Vec<&str> = z.iter().map(|i| names[*i].as_str()).collect();
    parts.join(".")
}

pub fn parse_chain(names: &[String], s: &str) -> Result<Chain> {
    s.split('.')
        .map(|p| {
            names
                .iter()
                .position(|n| n == p)
                .ok_or_else(|| Error::Chain(format!("unknown object {:?} in chain {:?}", p, s)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concat_examples() {
        assert_eq!(concat(&[0, 1], &[1, 2]).unwrap(), vec![0, 1, 2]);
        assert_eq!(concat(&[0, 1, 0], &[0, 1]).unwrap(), vec![0, 1, 0, 1]);
        assert!(concat(&[0, 1], &[0, 1]).is_err());
    }

    #[test]
    fn hom_set_examples() {
        assert_eq!(hom_set(&[0, 1, 2], &[0, 1, 2]).unwrap(), vec![Deletion::identity(&[0, 1, 2])]);
        assert_eq!(hom_set(&[0, 0, 0, 0], &[0, 0, 0]).unwrap().len(), 2);
        assert!(hom_set(&[0, 1], &[0, 2, 1]).unwrap().is_empty());
    }

    #[test]
    fn compose_examples() {
        let f = Deletion::new(vec![0, 1, 2, 3], vec![1]).unwrap();
        let g = Deletion::new(f.target(), vec![1]).unwrap();
        assert_eq!(compose_deletions(&g, &f).unwrap().deleted, vec![1, 2]);
        let id = Deletion::identity(&f.target());
        assert_eq!(compose_deletions(&id, &f).unwrap(), f);
    }

    #[test]
    fn sigma_identity_exhaustive() {
        let z: Chain = vec![0, 1, 2, 3, 4, 5];
        for i in 1..4 {
            for j in i..4 {
                let si = Deletion::new(z.clone(), vec![i]).unwrap();
                let lhs = compose_deletions(&Deletion::new(si.target(), vec![j]).unwrap(), &si).unwrap();
                let sj1 = Deletion::new(z.clone(), vec![j + 1]).unwrap();
                let rhs = compose_deletions(&Deletion::new(sj1.target(), vec![i]).unwrap(), &sj1).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn subdivision_counts() {
        assert!(subdivisions(&[0, 1]).is_empty());
        assert_eq!(subdivisions(&[0, 1, 2]), vec![vec![vec![0, 1], vec![1, 2]]]);
        assert_eq!(subdivisions(&[0, 1, 2, 3]).len(), 3);
        for n in 1..=8usize {
            let z: Chain = (0..=n).collect();
            assert_eq!(subdivisions(&z).len(), (1 << (n - 1)) - 1);
        }
    }

    #[test]
    fn chain_enumeration() {
        assert_eq!(enumerate_chains(2, 0, 1, 1).unwrap(), vec![vec![0, 1]]);
        let d2: Vec<_> = enumerate_chains(2, 0, 1, 2).unwrap().into_iter().filter(|z| z.len() == 3).collect();
        assert_eq!(d2, vec![vec![0, 0, 1], vec![0, 1, 1]]);
        let d3 = enumerate_chains(3, 0, 2, 3).unwrap().into_iter().filter(|z| z.len() == 4).count();
        assert_eq!(d3, 9);
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&[0, 9], 9).unwrap(), vec![0, 9]);
        assert_eq!(support(&[0, 1, 9, 9, 9], 9).unwrap(), vec![0, 1, 9]);
        assert!(support(&[9, 0], 9).is_err());
    }
}
