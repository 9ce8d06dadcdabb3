//! JSON documents: objects, morphism payloads, precategories, functors on
//! chains, strict categories, 2-constant data, Ψ inputs and lists of
//! precategory morphisms.
//!
//! Chains are written as object names joined by `.`; laxity keys join two
//! chains with `|`. Rationals are strings `p/q` or `p`, or JSON integers.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use cosegal_core::adjoints::morphism;
use cosegal_core::base::{tensor, Backend, MMorphism, MObject};
use cosegal_core::homotopy::TwoConstantData;
use cosegal_core::linalg::{parse_q, q_to_string, Mat, Q};
use cosegal_core::precat::{Diagram, KObject, PrecatMorphism, Precategory, StrictCategory};
use cosegal_core::shapes::{
    chain_to_string, concat_unchecked, degree, delete_at, first, last, parse_chain, Chain,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{location}: {message}")]
pub struct SchemaError {
    pub location: String,
    pub message: String,
}

pub type Result<T> = std::result::Result<T, SchemaError>;

fn fail<T>(location: &str, message: impl Into<String>) -> Result<T> {
    Err(SchemaError { location: location.to_string(), message: message.into() })
}

fn key(loc: &str, k: &str) -> String {
    let plain = k.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && k.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-');
    if plain {
        format!("{}.{}", loc, k)
    } else {
        format!("{}[{:?}]", loc, k)
    }
}

fn idx(loc: &str, i: usize) -> String {
    format!("{}[{}]", loc, i)
}

/// A decoded Ψ input: the chain `s` and the arrow `α`.
#[derive(Debug, Clone)]
pub struct PsiInput {
    pub backend: Backend,
    pub objects: Vec<String>,
    pub truncation: usize,
    pub chain: Chain,
    pub alpha: MMorphism,
}

/// A list of morphisms of precategories sharing source and target.
#[derive(Debug, Clone)]
pub struct Transformations {
    pub source: Arc<Precategory>,
    pub target: Arc<Precategory>,
    pub sigmas: Vec<PrecatMorphism>,
}

#[derive(Debug, Clone)]
pub enum Document {
    Precategory(Precategory),
    KObject(KObject),
    Strict { category: StrictCategory, truncation: Option<usize> },
    TwoConstant { data: TwoConstantData, truncation: Option<usize> },
    Psi(PsiInput),
    Transformations(Transformations),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Precategory(_) => "precategory",
            Document::KObject(_) => "kobject",
            Document::Strict { .. } => "strict-category",
            Document::TwoConstant { .. } => "two-constant",
            Document::Psi(_) => "psi",
            Document::Transformations(_) => "transformations",
        }
    }
}

/// Optional annotations of a precategory document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Annotations {
    pub split: Option<(Vec<String>, Vec<String>)>,
    pub mark: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Decoded {
    pub document: Document,
    pub annotations: Annotations,
    pub warnings: Vec<String>,
}

/// Collects warnings while decoding.
#[derive(Debug, Default)]
pub struct Decoder {
    pub warnings: Vec<String>,
}

fn as_object<'a>(v: &'a Value, loc: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().map_or_else(|| fail(loc, "expected an object"), Ok)
}

fn as_array<'a>(v: &'a Value, loc: &str) -> Result<&'a Vec<Value>> {
    v.as_array().map_or_else(|| fail(loc, "expected an array"), Ok)
}

fn field<'a>(m: &'a Map<String, Value>, k: &str, loc: &str) -> Result<&'a Value> {
    m.get(k).map_or_else(|| fail(loc, format!("missing field {:?}", k)), Ok)
}

fn as_usize(v: &Value, loc: &str) -> Result<usize> {
    v.as_u64().map_or_else(|| fail(loc, "expected a non-negative integer"), |n| Ok(n as usize))
}

fn as_i32(v: &Value, loc: &str) -> Result<i32> {
    match v.as_i64() {
        Some(n) if i32::try_from(n).is_ok() => Ok(n as i32),
        _ => fail(loc, "expected an integer degree"),
    }
}

fn as_str<'a>(v: &'a Value, loc: &str) -> Result<&'a str> {
    v.as_str().map_or_else(|| fail(loc, "expected a string"), Ok)
}

fn names(v: &Value, loc: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for (i, x) in as_array(v, loc)?.iter().enumerate() {
        let s = as_str(x, &idx(loc, i))?;
        if s.is_empty() || s.contains('.') || s.contains('|') {
            return fail(&idx(loc, i), "object names must be nonempty and avoid '.' and '|'");
        }
        if out.iter().any(|o| o == s) {
            return fail(&idx(loc, i), format!("duplicate object {:?}", s));
        }
        out.push(s.to_string());
    }
    Ok(out)
}

struct Header {
    backend: Backend,
    objects: Vec<String>,
    truncation: usize,
}

fn chain_key(objects: &[String], k: &str, loc: &str) -> Result<Chain> {
    let z = parse_chain(objects, k).or_else(|e| fail(loc, e.to_string()))?;
    if z.len() < 2 {
        return fail(loc, "chains need at least two objects");
    }
    Ok(z)
}

impl Decoder {
    pub fn rational(&mut self, v: &Value, loc: &str) -> Result<Q> {
        let s = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
            _ => return fail(loc, "expected a rational as \"p/q\" or an integer"),
        };
        match parse_q(&s) {
            Some((x, true)) => Ok(x),
            Some((x, false)) => {
                self.warnings.push(format!("{}: {:?} is not in lowest terms; written as {}", loc, s, q_to_string(&x)));
                Ok(x)
            }
            None => fail(loc, format!("{:?} is not a rational", s)),
        }
    }

    pub fn object(&mut self, v: &Value, backend: Backend, loc: &str) -> Result<MObject> {
        let m = as_object(v, loc)?;
        if m.len() != 1 || !m.contains_key(backend.name()) {
            return fail(loc, format!("expected an object with the single key {:?}", backend.name()));
        }
        let inner_loc = key(loc, backend.name());
        let inner = &m[backend.name()];
        match backend {
            Backend::FinSet => {
                let mut labels = Vec::new();
                for (i, x) in as_array(inner, &inner_loc)?.iter().enumerate() {
                    labels.push(as_str(x, &idx(&inner_loc, i))?.to_string());
                }
                MObject::finset(labels).or_else(|e| fail(&inner_loc, e.to_string()))
            }
            Backend::VectQ => Ok(MObject::vectq(as_usize(inner, &inner_loc)?)),
            Backend::ChQ => {
                let c = as_object(inner, &inner_loc)?;
                let dloc = key(&inner_loc, "degrees");
                let degrees: Vec<i32> = as_array(field(c, "degrees", &inner_loc)?, &dloc)?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| as_i32(x, &idx(&dloc, i)))
                    .collect::<Result<_>>()?;
                let n = degrees.len();
                let diff = match c.get("diff") {
                    None | Some(Value::Null) => Mat::zero(n, n),
                    Some(d) => self.matrix(d, n, n, &key(&inner_loc, "diff"))?,
                };
                MObject::chq(degrees, diff).or_else(|e| fail(&inner_loc, e.to_string()))
            }
        }
    }

    fn matrix(&mut self, v: &Value, rows: usize, cols: usize, loc: &str) -> Result<Mat> {
        let rs = as_array(v, loc)?;
        if rs.len() != rows {
            return fail(loc, format!("expected {} rows, found {}", rows, rs.len()));
        }
        let mut data = Vec::with_capacity(rows);
        for (i, r) in rs.iter().enumerate() {
            let rloc = idx(loc, i);
            let entries = as_array(r, &rloc)?;
            if entries.len() != cols {
                return fail(&rloc, format!("expected {} entries, found {}", cols, entries.len()));
            }
            data.push(entries.iter().enumerate().map(|(j, x)| self.rational(x, &idx(&rloc, j))).collect::<Result<Vec<Q>>>()?);
        }
        Ok(Mat::from_rows(&data, cols))
    }

    /// A morphism `src → tgt` given as `{"function": [...]}` or `{"matrix": [[...]]}`.
    pub fn payload(&mut self, v: &Value, src: &MObject, tgt: &MObject, loc: &str) -> Result<MMorphism> {
        let m = as_object(v, loc)?;
        if src.backend() == Backend::FinSet {
            let floc = key(loc, "function");
            let f = as_array(field(m, "function", loc)?, &floc)?;
            if f.len() != src.dim() {
                return fail(&floc, format!("expected {} images, found {}", src.dim(), f.len()));
            }
            let mut images = Vec::with_capacity(f.len());
            for (i, x) in f.iter().enumerate() {
                let j = as_usize(x, &idx(&floc, i))?;
                if j >= tgt.dim() {
                    return fail(&idx(&floc, i), format!("image {} outside a set of size {}", j, tgt.dim()));
                }
                images.push(j);
            }
            return Ok(MMorphism::from_function(src.clone(), tgt.clone(), &images));
        }
        let mat = self.matrix(field(m, "matrix", loc)?, tgt.dim(), src.dim(), &key(loc, "matrix"))?;
        Ok(MMorphism::new_unchecked(src.clone(), tgt.clone(), mat))
    }

    fn header(&mut self, m: &Map<String, Value>, loc: &str) -> Result<Header> {
        let bloc = key(loc, "backend");
        let b = as_str(field(m, "backend", loc)?, &bloc)?;
        let backend = Backend::parse(b).map_or_else(|| fail(&bloc, format!("unknown backend {:?}", b)), Ok)?;
        let objects = names(field(m, "objects", loc)?, &key(loc, "objects"))?;
        if objects.is_empty() {
            return fail(&key(loc, "objects"), "at least one object is required");
        }
        let tloc = key(loc, "truncation");
        let truncation = as_usize(field(m, "truncation", loc)?, &tloc)?;
        if truncation == 0 {
            return fail(&tloc, "truncation must be positive");
        }
        Ok(Header { backend, objects, truncation })
    }

    fn values(&mut self, m: &Map<String, Value>, h: &Header, loc: &str) -> Result<BTreeMap<Chain, MObject>> {
        let vloc = key(loc, "values");
        let mut out = BTreeMap::new();
        for (k, v) in as_object(field(m, "values", loc)?, &vloc)? {
            let kloc = key(&vloc, k);
            let z = chain_key(&h.objects, k, &kloc)?;
            if degree(&z) > h.truncation {
                return fail(&kloc, format!("chain of degree {} exceeds the truncation {}", degree(&z), h.truncation));
            }
            out.insert(z, self.object(v, h.backend, &kloc)?);
        }
        Ok(out)
    }

    fn generators(
        &mut self,
        m: &Map<String, Value>,
        h: &Header,
        values: &BTreeMap<Chain, MObject>,
        loc: &str,
    ) -> Result<BTreeMap<(Chain, usize), MMorphism>> {
        let gloc = key(loc, "generators");
        let mut out = BTreeMap::new();
        let Some(g) = m.get("generators") else { return Ok(out) };
        for (k, per) in as_object(g, &gloc)? {
            let kloc = key(&gloc, k);
            let z = chain_key(&h.objects, k, &kloc)?;
            let Some(tgt) = values.get(&z) else { return fail(&kloc, "generator at a chain without a value") };
            for (p, v) in as_object(per, &kloc)? {
                let ploc = key(&kloc, p);
                let pos: usize = p.parse().or_else(|_| fail(&ploc, "positions are integers"))?;
                if pos == 0 || pos >= degree(&z) {
                    return fail(&ploc, format!("position must lie in 1..{}", degree(&z)));
                }
                let Some(src) = values.get(&delete_at(&z, pos)) else {
                    return fail(&ploc, "the deleted chain has no value");
                };
                out.insert((z.clone(), pos), self.payload(v, src, tgt, &ploc)?);
            }
        }
        Ok(out)
    }

    fn units(
        &mut self,
        m: &Map<String, Value>,
        field_name: &str,
        objects: &[String],
        loop_value: impl Fn(usize) -> Option<MObject>,
        backend: Backend,
        loc: &str,
    ) -> Result<Option<Vec<MMorphism>>> {
        let uloc = key(loc, field_name);
        let u = match m.get(field_name) {
            None | Some(Value::Null) => return Ok(None),
            Some(u) => as_object(u, &uloc)?,
        };
        for k in u.keys() {
            if !objects.contains(k) {
                return fail(&key(&uloc, k), "unknown object");
            }
        }
        let unit = MObject::unit(backend);
        let mut out = Vec::new();
        for (a, name) in objects.iter().enumerate() {
            let aloc = key(&uloc, name);
            let v = field(u, name, &uloc)?;
            let Some(tgt) = loop_value(a) else { return fail(&aloc, "unit into a missing value") };
            out.push(self.payload(v, &unit, &tgt, &aloc)?);
        }
        Ok(Some(out))
    }

    pub fn precategory(&mut self, v: &Value, loc: &str) -> Result<Precategory> {
        let m = as_object(v, loc)?;
        let h = self.header(m, loc)?;
        let values = self.values(m, &h, loc)?;
        let generators = self.generators(m, &h, &values, loc)?;
        let lloc = key(loc, "laxity");
        let mut laxity = BTreeMap::new();
        if let Some(l) = m.get("laxity") {
            for (k, v) in as_object(l, &lloc)? {
                let kloc = key(&lloc, k);
                let Some((a, b)) = k.split_once('|') else { return fail(&kloc, "laxity keys have the form s|t") };
                let (s, t) = (chain_key(&h.objects, a, &kloc)?, chain_key(&h.objects, b, &kloc)?);
                if last(&s) != first(&t) {
                    return fail(&kloc, "the chains are not composable");
                }
                let st = concat_unchecked(&s, &t);
                let (Some(vs), Some(vt), Some(vst)) = (values.get(&s), values.get(&t), values.get(&st)) else {
                    return fail(&kloc, "laxity between chains without values");
                };
                laxity.insert((s, t), self.payload(v, &tensor(vs, vt), vst, &kloc)?);
            }
        }
        let units = self.units(m, "units", &h.objects, |a| values.get(&vec![a, a]).cloned(), h.backend, loc)?;
        Ok(Precategory { backend: h.backend, objects: h.objects, truncation: h.truncation, values, generators, laxity, units })
    }

    pub fn kobject(&mut self, v: &Value, loc: &str) -> Result<KObject> {
        let m = as_object(v, loc)?;
        let h = self.header(m, loc)?;
        let values = self.values(m, &h, loc)?;
        let generators = self.generators(m, &h, &values, loc)?;
        Ok(KObject { backend: h.backend, objects: h.objects, truncation: h.truncation, values, generators })
    }

    pub fn strict(&mut self, v: &Value, loc: &str) -> Result<(StrictCategory, Option<usize>)> {
        let m = as_object(v, loc)?;
        let bloc = key(loc, "backend");
        let b = as_str(field(m, "backend", loc)?, &bloc)?;
        let backend = Backend::parse(b).map_or_else(|| fail(&bloc, format!("unknown backend {:?}", b)), Ok)?;
        let objects = names(field(m, "objects", loc)?, &key(loc, "objects"))?;
        let truncation = match m.get("truncation") {
            None | Some(Value::Null) => None,
            Some(t) => Some(as_usize(t, &key(loc, "truncation"))?).filter(|t| *t > 0),
        };
        let hloc = key(loc, "homs");
        let mut homs = BTreeMap::new();
        for (k, v) in as_object(field(m, "homs", loc)?, &hloc)? {
            let kloc = key(&hloc, k);
            let z = chain_key(&objects, k, &kloc)?;
            if z.len() != 2 {
                return fail(&kloc, "homs are indexed by pairs");
            }
            homs.insert((z[0], z[1]), self.object(v, backend, &kloc)?);
        }
        let cloc = key(loc, "comp");
        let mut comp = BTreeMap::new();
        for (k, v) in as_object(field(m, "comp", loc)?, &cloc)? {
            let kloc = key(&cloc, k);
            let z = chain_key(&objects, k, &kloc)?;
            if z.len() != 3 {
                return fail(&kloc, "compositions are indexed by triples");
            }
            let (Some(ab), Some(bc), Some(ac)) = (homs.get(&(z[0], z[1])), homs.get(&(z[1], z[2])), homs.get(&(z[0], z[2]))) else {
                return fail(&kloc, "composition between missing homs");
            };
            comp.insert((z[0], z[1], z[2]), self.payload(v, &tensor(ab, bc), ac, &kloc)?);
        }
        let ids = self.units(m, "ids", &objects, |a| homs.get(&(a, a)).cloned(), backend, loc)?;
        Ok((StrictCategory { backend, objects, homs, comp, ids }, truncation))
    }

    fn two_constant(&mut self, v: &Value, loc: &str) -> Result<(TwoConstantData, Option<usize>)> {
        let m = as_object(v, loc)?;
        let (category, _) = self.strict(field(m, "category", loc)?, &key(loc, "category"))?;
        let truncation = match m.get("truncation") {
            None | Some(Value::Null) => None,
            Some(t) => Some(as_usize(t, &key(loc, "truncation"))?),
        };
        let rloc = key(loc, "replacements");
        let mut replacements = BTreeMap::new();
        for (k, r) in as_object(field(m, "replacements", loc)?, &rloc)? {
            let kloc = key(&rloc, k);
            let z = chain_key(&category.objects, k, &kloc)?;
            if z.len() != 2 {
                return fail(&kloc, "replacements are indexed by pairs");
            }
            let Some(hom) = category.homs.get(&(z[0], z[1])) else { return fail(&kloc, "replacement of a missing hom") };
            let rm = as_object(r, &kloc)?;
            let src = self.object(field(rm, "source", &kloc)?, category.backend, &key(&kloc, "source"))?;
            let p = self.payload(field(rm, "payload", &kloc)?, &src, hom, &key(&kloc, "payload"))?;
            replacements.insert((z[0], z[1]), p);
        }
        let units = self
            .units(m, "units", &category.objects, |a| replacements.get(&(a, a)).map(|r: &MMorphism| r.src.clone()), category.backend, loc)?
            .map_or_else(|| fail(loc, "missing field \"units\""), Ok)?;
        Ok((TwoConstantData { category, replacements, units }, truncation))
    }

    fn psi(&mut self, v: &Value, loc: &str) -> Result<PsiInput> {
        let m = as_object(v, loc)?;
        let h = self.header(m, loc)?;
        let cloc = key(loc, "chain");
        let chain = chain_key(&h.objects, as_str(field(m, "chain", loc)?, &cloc)?, &cloc)?;
        if degree(&chain) < 2 || degree(&chain) > h.truncation {
            return fail(&cloc, "the chain needs degree between 2 and the truncation");
        }
        let aloc = key(loc, "alpha");
        let a = as_object(field(m, "alpha", loc)?, &aloc)?;
        let src = self.object(field(a, "source", &aloc)?, h.backend, &key(&aloc, "source"))?;
        let tgt = self.object(field(a, "target", &aloc)?, h.backend, &key(&aloc, "target"))?;
        let alpha = self.payload(field(a, "payload", &aloc)?, &src, &tgt, &key(&aloc, "payload"))?;
        Ok(PsiInput { backend: h.backend, objects: h.objects, truncation: h.truncation, chain, alpha })
    }

    /// A precategory, or a strict category converted at its own truncation or `default_truncation`.
    pub fn precategory_like(&mut self, v: &Value, loc: &str, default_truncation: usize) -> Result<Precategory> {
        let m = as_object(v, loc)?;
        match m.get("type").and_then(Value::as_str) {
            Some("strict-category") => {
                let (c, t) = self.strict(v, loc)?;
                strict_to_precategory(&c, t.unwrap_or(default_truncation), loc)
            }
            None | Some("precategory") => self.precategory(v, loc),
            Some(other) => fail(&key(loc, "type"), format!("expected a precategory, found {:?}", other)),
        }
    }

    fn transformations(&mut self, v: &Value, loc: &str) -> Result<Transformations> {
        let m = as_object(v, loc)?;
        let source = Arc::new(self.precategory_like(field(m, "source", loc)?, &key(loc, "source"), 3)?);
        let target = match m.get("target") {
            None | Some(Value::Null) => source.clone(),
            Some(t) => Arc::new(self.precategory_like(t, &key(loc, "target"), source.truncation)?),
        };
        let sloc = key(loc, "sigmas");
        let mut sigmas = Vec::new();
        for (i, s) in as_array(field(m, "sigmas", loc)?, &sloc)?.iter().enumerate() {
            let iloc = idx(&sloc, i);
            if s.as_str() == Some("identity") {
                if *source != *target {
                    return fail(&iloc, "\"identity\" needs equal source and target");
                }
                sigmas.push(morphism(&source, &target, (0..source.n()).collect(), identity_components(&source)));
                continue;
            }
            let sm = as_object(s, &iloc)?;
            let oloc = key(&iloc, "object_map");
            let mut obj_map = Vec::new();
            for (j, x) in as_array(field(sm, "object_map", &iloc)?, &oloc)?.iter().enumerate() {
                let name = as_str(x, &idx(&oloc, j))?;
                let Some(p) = target.objects.iter().position(|o| o == name) else {
                    return fail(&idx(&oloc, j), format!("unknown target object {:?}", name));
                };
                obj_map.push(p);
            }
            if obj_map.len() != source.n() {
                return fail(&oloc, format!("expected {} images", source.n()));
            }
            let cloc = key(&iloc, "components");
            let cm = as_object(field(sm, "components", &iloc)?, &cloc)?;
            let mut comps = BTreeMap::new();
            for z in source.chains() {
                let name = source.name(&z);
                let zloc = key(&cloc, &name);
                let img: Chain = z.iter().map(|a| obj_map[*a]).collect();
                let p = self.payload(field(cm, &name, &cloc)?, &source.value(&z), &target.value(&img), &zloc)?;
                comps.insert(z, p);
            }
            sigmas.push(morphism(&source, &target, obj_map, comps));
        }
        if sigmas.is_empty() {
            return fail(&sloc, "at least one morphism is required");
        }
        Ok(Transformations { source, target, sigmas })
    }

    fn annotations(&mut self, m: &Map<String, Value>, objects: &[String], loc: &str) -> Result<Annotations> {
        let mut a = Annotations::default();
        if let Some(s) = m.get("split") {
            let sloc = key(loc, "split");
            let parts = as_array(s, &sloc)?;
            if parts.len() != 2 {
                return fail(&sloc, "a split has two parts");
            }
            let x = names(&parts[0], &idx(&sloc, 0))?;
            let y = names(&parts[1], &idx(&sloc, 1))?;
            let joined: Vec<String> = x.iter().chain(y.iter()).cloned().collect();
            if joined != objects {
                return fail(&sloc, "the parts must list the objects in order");
            }
            a.split = Some((x, y));
        }
        if let Some(k) = m.get("mark") {
            let kloc = key(loc, "mark");
            let name = as_str(k, &kloc)?;
            if !objects.iter().any(|o| o == name) {
                return fail(&kloc, format!("unknown object {:?}", name));
            }
            a.mark = Some(name.to_string());
        }
        Ok(a)
    }

    pub fn document(&mut self, v: &Value) -> Result<Document> {
        self.document_with_annotations(v).map(|(d, _)| d)
    }

    fn document_with_annotations(&mut self, v: &Value) -> Result<(Document, Annotations)> {
        let loc = "$";
        let m = as_object(v, loc)?;
        let kind = match m.get("type") {
            None => "precategory",
            Some(t) => as_str(t, "$.type")?,
        };
        let doc = match kind {
            "precategory" => Document::Precategory(self.precategory(v, loc)?),
            "kobject" => Document::KObject(self.kobject(v, loc)?),
            "strict-category" => {
                let (category, truncation) = self.strict(v, loc)?;
                Document::Strict { category, truncation }
            }
            "two-constant" => {
                let (data, truncation) = self.two_constant(v, loc)?;
                Document::TwoConstant { data, truncation }
            }
            "psi" => Document::Psi(self.psi(v, loc)?),
            "transformations" => Document::Transformations(self.transformations(v, loc)?),
            other => return fail("$.type", format!("unknown document type {:?}", other)),
        };
        let ann = match &doc {
            Document::Precategory(p) => self.annotations(m, &p.objects, loc)?,
            Document::Strict { category, .. } => self.annotations(m, &category.objects, loc)?,
            _ => Annotations::default(),
        };
        Ok((doc, ann))
    }
}

pub fn strict_to_precategory(c: &StrictCategory, truncation: usize, loc: &str) -> Result<Precategory> {
    let r = c.check();
    if let Some(v) = r.violations.first() {
        return fail(loc, format!("not a strict category: {} at {}", v.kind, v.location));
    }
    Precategory::from_strict_category(c, truncation).or_else(|e| fail(loc, e.to_string()))
}

fn identity_components(p: &Precategory) -> BTreeMap<Chain, MMorphism> {
    p.chains().into_iter().map(|z| {
        let m = MMorphism::identity(&p.value(&z));
        (z, m)
    }).collect()
}

/// Decodes a whole document from a JSON value.
pub fn decode(v: &Value) -> Result<Decoded> {
    let mut d = Decoder::default();
    let (document, annotations) = d.document_with_annotations(v)?;
    Ok(Decoded { document, annotations, warnings: d.warnings })
}

pub fn encode_q(x: &Q) -> Value {
    Value::String(q_to_string(x))
}

pub fn encode_object(o: &MObject) -> Value {
    match o.backend() {
        Backend::FinSet => json!({ "finset": (0..o.dim()).map(|i| o.label(i)).collect::<Vec<_>>() }),
        Backend::VectQ => json!({ "vectq": o.dim() }),
        Backend::ChQ => {
            let mut c = Map::new();
            c.insert("degrees".into(), json!(o.degrees()));
            if o.has_nonzero_diff() {
                c.insert("diff".into(), encode_matrix(&o.diff()));
            }
            json!({ "chq": c })
        }
    }
}

fn encode_matrix(m: &Mat) -> Value {
    Value::Array((0..m.rows).map(|i| Value::Array((0..m.cols).map(|j| encode_q(&m.get(i, j))).collect())).collect())
}

pub fn encode_payload(f: &MMorphism) -> Value {
    if f.backend() == Backend::FinSet {
        json!({ "function": f.func() })
    } else {
        json!({ "matrix": encode_matrix(&f.mat) })
    }
}

fn encode_units(objects: &[String], units: &Option<Vec<MMorphism>>) -> Value {
    match units {
        None => Value::Null,
        Some(us) => Value::Object(objects.iter().cloned().zip(us.iter().map(encode_payload)).collect()),
    }
}

fn encode_values<D: Diagram>(d: &D) -> (Value, Value) {
    let mut values = Map::new();
    for (z, v) in d.values() {
        values.insert(d.name(z), encode_object(v));
    }
    let mut generators: BTreeMap<String, Map<String, Value>> = BTreeMap::new();
    for ((z, p), g) in d.generators() {
        generators.entry(d.name(z)).or_default().insert(p.to_string(), encode_payload(g));
    }
    (Value::Object(values), json!(generators))
}

pub fn encode_precategory(p: &Precategory, ann: &Annotations) -> Value {
    let (values, generators) = encode_values(p);
    let mut laxity = Map::new();
    for ((s, t), m) in &p.laxity {
        laxity.insert(format!("{}|{}", p.name(s), p.name(t)), encode_payload(m));
    }
    let mut out = json!({
        "type": "precategory",
        "backend": p.backend.name(),
        "objects": p.objects,
        "truncation": p.truncation,
        "values": values,
        "generators": generators,
        "laxity": laxity,
        "units": encode_units(&p.objects, &p.units),
    });
    annotate(&mut out, ann);
    out
}

fn annotate(out: &mut Value, ann: &Annotations) {
    if let Some((x, y)) = &ann.split {
        out["split"] = json!([x, y]);
    }
    if let Some(m) = &ann.mark {
        out["mark"] = json!(m);
    }
}

pub fn encode_kobject(k: &KObject) -> Value {
    let (values, generators) = encode_values(k);
    json!({
        "type": "kobject",
        "backend": k.backend.name(),
        "objects": k.objects,
        "truncation": k.truncation,
        "values": values,
        "generators": generators,
    })
}

pub fn encode_strict(c: &StrictCategory, truncation: Option<usize>, ann: &Annotations) -> Value {
    let name = |z: &[usize]| chain_to_string(&c.objects, z);
    let homs: Map<String, Value> = c.homs.iter().map(|((a, b), h)| (name(&[*a, *b]), encode_object(h))).collect();
    let comp: Map<String, Value> = c.comp.iter().map(|((a, b, d), m)| (name(&[*a, *b, *d]), encode_payload(m))).collect();
    let mut out = json!({
        "type": "strict-category",
        "backend": c.backend.name(),
        "objects": c.objects,
        "homs": homs,
        "comp": comp,
        "ids": encode_units(&c.objects, &c.ids),
    });
    if let Some(t) = truncation {
        out["truncation"] = json!(t);
    }
    annotate(&mut out, ann);
    out
}

pub fn encode_two_constant(d: &TwoConstantData, truncation: Option<usize>) -> Value {
    let c = &d.category;
    let reps: Map<String, Value> = d
        .replacements
        .iter()
        .map(|((a, b), f)| {
            let v = json!({ "source": encode_object(&f.src), "payload": encode_payload(f) });
            (chain_to_string(&c.objects, &[*a, *b]), v)
        })
        .collect();
    let mut out = json!({
        "type": "two-constant",
        "category": encode_strict(c, None, &Annotations::default()),
        "replacements": reps,
        "units": encode_units(&c.objects, &Some(d.units.clone())),
    });
    if let Some(t) = truncation {
        out["truncation"] = json!(t);
    }
    out
}

pub fn encode_psi(p: &PsiInput) -> Value {
    json!({
        "type": "psi",
        "backend": p.backend.name(),
        "objects": p.objects,
        "truncation": p.truncation,
        "chain": chain_to_string(&p.objects, &p.chain),
        "alpha": {
            "source": encode_object(&p.alpha.src),
            "target": encode_object(&p.alpha.tgt),
            "payload": encode_payload(&p.alpha),
        },
    })
}

pub fn encode_transformations(t: &Transformations) -> Value {
    let sigmas: Vec<Value> = t
        .sigmas
        .iter()
        .map(|s| {
            let comps: Map<String, Value> =
                s.components.iter().map(|(z, m)| (t.source.name(z), encode_payload(m))).collect();
            let obj_map: Vec<&String> = s.obj_map.iter().map(|b| &t.target.objects[*b]).collect();
            json!({ "object_map": obj_map, "components": comps })
        })
        .collect();
    let none = Annotations::default();
    json!({
        "type": "transformations",
        "source": encode_precategory(&t.source, &none),
        "target": encode_precategory(&t.target, &none),
        "sigmas": sigmas,
    })
}

pub fn encode(d: &Document, ann: &Annotations) -> Value {
    match d {
        Document::Precategory(p) => encode_precategory(p, ann),
        Document::KObject(k) => encode_kobject(k),
        Document::Strict { category, truncation } => encode_strict(category, *truncation, ann),
        Document::TwoConstant { data, truncation } => encode_two_constant(data, *truncation),
        Document::Psi(p) => encode_psi(p),
        Document::Transformations(t) => encode_transformations(t),
    }
}

/// Canonical text of a JSON value: sorted keys, two-space indentation and a
/// final newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Restricts a precategory to chains of degree at most `n`.
pub fn restrict_precategory(p: &Precategory, n: usize) -> Precategory {
    Precategory {
        backend: p.backend,
        objects: p.objects.clone(),
        truncation: n,
        values: p.values.iter().filter(|(z, _)| degree(z) <= n).map(|(z, v)| (z.clone(), v.clone())).collect(),
        generators: p.generators.iter().filter(|((z, _), _)| degree(z) <= n).map(|(k, v)| (k.clone(), v.clone())).collect(),
        laxity: p
            .laxity
            .iter()
            .filter(|((s, t), _)| degree(s) + degree(t) <= n)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
        units: p.units.clone(),
    }
}

pub fn restrict_kobject(k: &KObject, n: usize) -> KObject {
    KObject {
        backend: k.backend,
        objects: k.objects.clone(),
        truncation: n,
        values: k.values.iter().filter(|(z, _)| degree(z) <= n).map(|(z, v)| (z.clone(), v.clone())).collect(),
        generators: k.generators.iter().filter(|((z, _), _)| degree(z) <= n).map(|(k, v)| (k.clone(), v.clone())).collect(),
    }
}
