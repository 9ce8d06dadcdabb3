//! Free lax functors presented by words.
//!
//! A word on a chain `z` is a splitting of `z` into parts of positive degree,
//! each tagged with a source. Its value is the tensor product of the part
//! values, and the value at `z` is the sum over all admissible words. Parts
//! coming from a lax source never sit next to a part of the same source,
//! since such a pair is merged by the source's laxity.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::base::{lex_pos, lex_tuple, sum_object, tensor, tensor_list, tensor_vectors, Backend, MMorphism, MObject};
use crate::linalg::{sv_add, unit_vec, SVec};
use crate::precat::{composable_pairs, Diagram, KObject, PrecatMorphism, Precategory};
use crate::shapes::{all_chains, compositions, concat_unchecked, degree, delete_at, Chain};

/// Where the parts of a word take their values.
#[derive(Clone, Copy)]
pub enum Source<'a> {
    /// A plain functor; adjacent parts stay separate.
    K(&'a KObject),
    /// A lax functor; adjacent parts merge through its laxity.
    Lax(&'a Precategory),
}

impl<'a> Source<'a> {
    pub fn value(&self, z: &[usize]) -> MObject {
        match self {
            Source::K(k) => k.value(z),
            Source::Lax(p) => p.value(z),
        }
    }

    pub fn generator(&self, z: &[usize], p: usize) -> &'a MMorphism {
        match self {
            Source::K(k) => k.generator(z, p),
            Source::Lax(f) => f.generator(z, p),
        }
    }

    pub fn is_lax(&self) -> bool {
        matches!(self, Source::Lax(_))
    }
}

pub type Word = Vec<(usize, Chain)>;

#[derive(Clone, Debug)]
pub struct Block {
    pub word: Word,
    pub dims: Vec<usize>,
    pub offset: usize,
    pub dim: usize,
}

/// The free lax functor on a family of sources.
pub struct WordSystem<'a> {
    pub backend: Backend,
    pub objects: Vec<String>,
    pub truncation: usize,
    pub sources: Vec<Source<'a>>,
    pub blocks: BTreeMap<Chain, Vec<Block>>,
    index: BTreeMap<Chain, BTreeMap<Word, usize>>,
    values: BTreeMap<Chain, MObject>,
}

fn word_name(objects: &[String], w: &Word) -> String {
    let parts: Vec<String> = w
        .iter()
        .map(|(s, c)| format!("{}:{}", s, crate::shapes::chain_to_string(objects, c)))
        .collect();
    parts.join("|")
}

impl<'a> WordSystem<'a> {
    pub fn new(backend: Backend, objects: Vec<String>, truncation: usize, sources: Vec<Source<'a>>) -> WordSystem<'a> {
        let mut sys = WordSystem {
            backend,
            objects,
            truncation,
            sources,
            blocks: BTreeMap::new(),
            index: BTreeMap::new(),
            values: BTreeMap::new(),
        };
        for z in all_chains(sys.objects.len(), truncation) {
            sys.build_chain(z);
        }
        sys
    }

    fn build_chain(&mut self, z: Chain) {
        let k = self.sources.len();
        let mut blocks = Vec::new();
        let mut parts_objs: Vec<MObject> = Vec::new();
        let mut offset = 0;
        for comp in compositions(&z) {
            let np = comp.len();
            let total = k.pow(np as u32);
            for code in 0..total {
                let mut tags = vec![0; np];
                let mut c = code;
                for t in tags.iter_mut().rev() {
                    *t = c % k;
                    c /= k;
                }
                if tags.windows(2).any(|w| w[0] == w[1] && self.sources[w[0]].is_lax()) {
                    continue;
                }
                let vals: Vec<MObject> = tags.iter().zip(&comp).map(|(s, p)| self.sources[*s].value(p)).collect();
                let dims: Vec<usize> = vals.iter().map(|v| v.dim()).collect();
                if dims.iter().any(|d| *d == 0) {
                    continue;
                }
                let refs: Vec<&MObject> = vals.iter().collect();
                let t = tensor_list(&refs);
                let word: Word = tags.iter().cloned().zip(comp.iter().cloned()).collect();
                let dim = t.dim();
                blocks.push(Block { word, dims, offset, dim });
                offset += dim;
                parts_objs.push(t);
            }
        }
        let refs: Vec<&MObject> = parts_objs.iter().collect();
        let labels = (self.backend == Backend::FinSet).then(|| {
            let mut l = Vec::new();
            for (b, o) in blocks.iter().zip(&parts_objs) {
                let wn = word_name(&self.objects, &b.word);
                for i in 0..o.dim() {
                    l.push(format!("{}⟨{}⟩", wn, o.label(i)));
                }
            }
            l
        });
        let value = sum_object(&refs, self.backend, labels);
        let idx = blocks.iter().enumerate().map(|(i, b)| (b.word.clone(), i)).collect();
        self.index.insert(z.clone(), idx);
        self.blocks.insert(z.clone(), blocks);
        self.values.insert(z, value);
    }

    pub fn value(&self, z: &[usize]) -> MObject {
        if degree(z) == 0 {
            return MObject::unit(self.backend);
        }
        self.values[z].clone()
    }

    pub fn block(&self, z: &[usize], w: &Word) -> Option<&Block> {
        let i = *self.index.get(z)?.get(w)?;
        Some(&self.blocks[z][i])
    }

    /// Locates basis vector `i` of the value at `z`: its block and coordinates.
    pub fn locate(&self, z: &[usize], i: usize) -> (&Block, Vec<usize>) {
        let blocks = &self.blocks[z];
        let k = blocks.partition_point(|b| b.offset + b.dim <= i);
        let b = &blocks[k];
        (b, lex_tuple(&b.dims, i - b.offset))
    }

    /// Merges adjacent lax parts of the same source and embeds the tensor of
    /// the part vectors into the value at the concatenated chain.
    pub fn embed(&self, entries: Vec<(usize, Chain, SVec)>) -> SVec {
        let mut merged: Vec<(usize, Chain, SVec)> = Vec::with_capacity(entries.len());
        for (s, c, v) in entries {
            if let Some(last) = merged.last_mut() {
                if last.0 == s {
                    if let Source::Lax(f) = self.sources[s] {
                        let phi = f.phi(&last.1, &c);
                        let dims = [f.value(&last.1).dim(), f.value(&c).dim()];
                        let t = tensor_vectors(&dims, &[&last.2, &v]);
                        last.2 = phi.apply(&t);
                        last.1 = concat_unchecked(&last.1, &c);
                        continue;
                    }
                }
            }
            merged.push((s, c, v));
        }
        let mut z = merged[0].1.clone();
        for (_, c, _) in &merged[1..] {
            z = concat_unchecked(&z, c);
        }
        let word: Word = merged.iter().map(|(s, c, _)| (*s, c.clone())).collect();
        let Some(b) = self.block(&z, &word) else {
            return Vec::new();
        };
        let vs: Vec<&SVec> = merged.iter().map(|e| &e.2).collect();
        tensor_vectors(&b.dims, &vs).into_iter().map(|(i, x)| (i + b.offset, x)).collect()
    }

    /// Single-part word vector: element `v` of source `s` at chain `z`.
    pub fn inject(&self, s: usize, z: &[usize], v: &SVec) -> SVec {
        self.embed(vec![(s, z.to_vec(), v.clone())])
    }

    pub fn generator(&self, z: &[usize], p: usize) -> MMorphism {
        let zp = delete_at(z, p);
        let src = self.value(&zp);
        let mut cols = Vec::with_capacity(src.dim());
        for b in &self.blocks[&zp] {
            let mut start = 0;
            let mut host = 0;
            for (j, (_, c)) in b.word.iter().enumerate() {
                let end = start + degree(c);
                if start < p && p <= end {
                    host = j;
                    break;
                }
                start = end;
            }
            let (hs, hc) = &b.word[host];
            let new_part: Chain = z[start..=start + degree(hc) + 1].to_vec();
            let g = self.sources[*hs].generator(&new_part, p - start);
            for a in 0..b.dim {
                let t = lex_tuple(&b.dims, a);
                let entries = b
                    .word
                    .iter()
                    .enumerate()
                    .map(|(j, (s, c))| {
                        if j == host {
                            (*s, new_part.clone(), g.image_of(t[j]).clone())
                        } else {
                            (*s, c.clone(), unit_vec(t[j]))
                        }
                    })
                    .collect();
                cols.push(self.embed(entries));
            }
        }
        MMorphism::from_columns(src, self.value(z), cols)
    }

    pub fn laxity(&self, s: &[usize], t: &[usize]) -> MMorphism {
        let (vs, vt) = (self.value(s), self.value(t));
        let src = tensor(&vs, &vt);
        let mut cols = Vec::with_capacity(src.dim());
        for i in 0..vs.dim() {
            let (bs, ts) = self.locate(s, i);
            for j in 0..vt.dim() {
                let (bt, tt) = self.locate(t, j);
                let entries = bs
                    .word
                    .iter()
                    .zip(&ts)
                    .chain(bt.word.iter().zip(&tt))
                    .map(|((src_idx, c), x)| (*src_idx, c.clone(), unit_vec(*x)))
                    .collect();
                cols.push(self.embed(entries));
            }
        }
        MMorphism::from_columns(src, self.value(&concat_unchecked(s, t)), cols)
    }

    /// The free lax functor as a precategory, without unit points.
    pub fn precategory(&self) -> Precategory {
        let mut p = Precategory::new(self.backend, self.objects.clone(), self.truncation);
        for (z, v) in &self.values {
            p.values.insert(z.clone(), v.clone());
            for pos in 1..degree(z) {
                p.generators.insert((z.clone(), pos), self.generator(z, pos));
            }
        }
        for (s, t) in composable_pairs(self.objects.len(), self.truncation) {
            let m = self.laxity(&s, &t);
            p.laxity.insert((s, t), m);
        }
        p
    }

    /// Inclusion of source `s` as single-part words, at chain `z`.
    pub fn inclusion(&self, s: usize, z: &[usize]) -> MMorphism {
        let src = self.sources[s].value(z);
        let cols = (0..src.dim()).map(|j| self.inject(s, z, &unit_vec(j))).collect();
        MMorphism::from_columns(src, self.value(z), cols)
    }

    /// The lax map out of the free functor determined by maps on the sources:
    /// `comps(source, part)` sends the part value into `h(f(part))`, and
    /// words are multiplied out with the laxity of `h`.
    pub fn evaluate(
        &self,
        h: &Precategory,
        obj_map: &[usize],
        comps: &dyn Fn(usize, &[usize]) -> MMorphism,
    ) -> BTreeMap<Chain, MMorphism> {
        let image = |c: &[usize]| -> Chain { c.iter().map(|a| obj_map[*a]).collect() };
        let mut out = BTreeMap::new();
        for (z, blocks) in &self.blocks {
            let tgt = h.value(&image(z));
            let mut cols = Vec::with_capacity(self.values[z].dim());
            for b in blocks {
                let maps: Vec<MMorphism> = b.word.iter().map(|(s, c)| comps(*s, c)).collect();
                for a in 0..b.dim {
                    let t = lex_tuple(&b.dims, a);
                    let mut acc = maps[0].image_of(t[0]).clone();
                    let mut chain = image(&b.word[0].1);
                    for (k, (_, c)) in b.word.iter().enumerate().skip(1) {
                        let fc = image(c);
                        let dims = [h.value(&chain).dim(), h.value(&fc).dim()];
                        let tv = tensor_vectors(&dims, &[&acc, maps[k].image_of(t[k])]);
                        acc = h.phi(&chain, &fc).apply(&tv);
                        chain = concat_unchecked(&chain, &fc);
                    }
                    cols.push(acc);
                }
            }
            out.insert(z.clone(), MMorphism::from_columns(self.values[z].clone(), tgt, cols));
        }
        out
    }

    /// Word-wise map into another word system with the same sources layout:
    /// `comps(source, part)` maps into the target source `src_map[source]`.
    pub fn map_into(
        &self,
        other: &WordSystem,
        src_map: &[usize],
        obj_map: &[usize],
        comps: &dyn Fn(usize, &[usize]) -> MMorphism,
    ) -> BTreeMap<Chain, MMorphism> {
        let image = |c: &[usize]| -> Chain { c.iter().map(|a| obj_map[*a]).collect() };
        let mut out = BTreeMap::new();
        for (z, blocks) in &self.blocks {
            let mut cols = Vec::with_capacity(self.values[z].dim());
            for b in blocks {
                let maps: Vec<MMorphism> = b.word.iter().map(|(s, c)| comps(*s, c)).collect();
                for a in 0..b.dim {
                    let t = lex_tuple(&b.dims, a);
                    let entries = b
                        .word
                        .iter()
                        .enumerate()
                        .map(|(k, (s, c))| (src_map[*s], image(c), maps[k].image_of(t[k]).clone()))
                        .collect();
                    cols.push(other.embed(entries));
                }
            }
            out.insert(z.clone(), MMorphism::from_columns(self.values[z].clone(), other.value(&image(z)), cols));
        }
        out
    }
}

/// Helper: a precategory morphism from explicit components.
pub fn morphism(
    source: &alloc::sync::Arc<Precategory>,
    target: &alloc::sync::Arc<Precategory>,
    obj_map: Vec<usize>,
    components: BTreeMap<Chain, MMorphism>,
) -> PrecatMorphism {
    PrecatMorphism { source: source.clone(), target: target.clone(), obj_map, components }
}

/// Sum of vectors, used when representatives spread over several chains.
pub fn sum_vectors(vs: &[SVec]) -> SVec {
    vs.iter().fold(Vec::new(), |acc, v| sv_add(&acc, v))
}

/// Position helper re-exported for the tensor layout of a block.
pub fn block_pos(b: &Block, t: &[usize]) -> usize {
    b.offset + lex_pos(&b.dims, t)
}
