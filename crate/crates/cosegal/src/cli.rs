//! The `cosegal` command line.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0  | every check passed |
//! | 2  | at least one check failed |
//! | 3  | an input is not well-formed JSON |
//! | 4  | an input violates the document schema or is rejected by a construction |
//! | 5  | a construction did not stabilize within the iteration cap or truncation |
//! | 6  | reading an input or writing the output failed |
//! | 7  | an input does not meet the precondition of the command |
//! | 64 | bad command line, or an override inconsistent with a document header |

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use cosegal_core::adjoints::{self, gamma, point, psi_arrows, realize, unitalize, verify_levelwise, Unitalization, DEFAULT_CAP};
use cosegal_core::base::Backend;
use cosegal_core::fixtures;
use cosegal_core::homotopy::{
    cosegal_report, cosegalify_two_constant, is_two_constant, k_injectivity_report, two_constant_transfer,
};
use cosegal_core::linalg::unit_vec;
use cosegal_core::monoidal::{check_distributor, nat_transform_object, tensor_s, unit_precat, yoneda_module, yoneda_report};
use cosegal_core::precat::{Diagram, KObject, PrecatMorphism, Precategory};
use cosegal_core::shapes::{chain_to_string, degree};
use cosegal_core::Error as CoreError;

use crate::codec::{self, Annotations, Decoded, Document, SchemaError};
use crate::report::{cosegal_json, k_entry_json, violations_json, CommandReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKS_FAILED: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_SCHEMA: i32 = 4;
pub const EXIT_UNSTABLE: i32 = 5;
pub const EXIT_IO: i32 = 6;
pub const EXIT_PRECONDITION: i32 = 7;
pub const EXIT_USAGE: i32 = 64;

/// Truncation given to strict categories that do not state one.
pub const DEFAULT_TRUNCATION: usize = 3;

/// Largest finite product enumerated element by element by `nat-object`.
const ENUMERATION_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "cosegal", version, about = "Constructions and checks on co-Segal precategories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input document; repeat for commands taking several.
    #[arg(long, global = true)]
    pub input: Vec<PathBuf>,
    /// Where to write the constructed document, or the report for pure checks.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Lower the truncation of the input, or set it for strict categories.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    /// Round cap for unitalization.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Expected backend of every input.
    #[arg(long, global = true)]
    pub backend: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    Kobject,
    Pointed,
    Strict,
    TwoConstant,
    Cylinder,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the axioms of any document.
    Validate,
    /// Check strong unitality and the unit maps at every pair.
    CheckUnital,
    /// Strongly unital reflection of a pointed precategory.
    Unitalize,
    /// The strict category `|F|`.
    Realize,
    /// The precategory generated by a K-object.
    Gamma,
    /// Adjoin unit points.
    Point,
    /// Report the co-Segal comparison at every chain.
    CosegalCheck,
    /// Compare the trivial-fibration test with lifting against generators.
    KInject,
    /// Transfer 2-constant data into a precategory.
    Transfer,
    /// Co-Segal replacement of a 2-constant precategory.
    Cosegalify,
    /// The tensor product of two precategories.
    Tensor,
    /// The module `F_A` adjoining a point before `A`.
    Yoneda {
        /// The object `A` of `F_A`; defaults to the document's mark.
        #[arg(long)]
        object: Option<String>,
    },
    /// Check distributor composition over three precategories.
    DistributorCheck,
    /// The object of natural transformations between morphisms.
    NatObject,
    /// The arrows around a generator at a chain.
    Psi,
    /// Decode, encode and decode again.
    Roundtrip,
    /// Emit a random document seeded by `COSEGAL_SEED`.
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        #[arg(long, default_value_t = 2)]
        objects: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::CheckUnital => "check-unital",
            Command::Unitalize => "unitalize",
            Command::Realize => "realize",
            Command::Gamma => "gamma",
            Command::Point => "point",
            Command::CosegalCheck => "cosegal-check",
            Command::KInject => "k-inject",
            Command::Transfer => "transfer",
            Command::Cosegalify => "cosegalify",
            Command::Tensor => "tensor",
            Command::Yoneda { .. } => "yoneda",
            Command::DistributorCheck => "distributor-check",
            Command::NatObject => "nat-object",
            Command::Psi => "psi",
            Command::Roundtrip => "roundtrip",
            Command::Sample { .. } => "sample",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {source}")]
    Schema { path: String, source: SchemaError },
    #[error("{0}")]
    Core(CoreError),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Schema { .. } => EXIT_SCHEMA,
            CliError::Core(CoreError::Precondition(_)) => EXIT_PRECONDITION,
            CliError::Core(CoreError::Unstabilized(_) | CoreError::Truncation(_)) => EXIT_UNSTABLE,
            CliError::Core(_) => EXIT_SCHEMA,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Schema { .. } => "schema",
            CliError::Core(CoreError::Precondition(_)) => "precondition",
            CliError::Core(CoreError::Unstabilized(_) | CoreError::Truncation(_)) => "unstabilized",
            CliError::Core(_) => "invalid-input",
        }
    }

    fn to_json(&self, command: &str) -> Value {
        let mut e = json!({ "kind": self.kind(), "code": self.code(), "message": self.to_string() });
        match self {
            CliError::Parse { path, line, column, .. } => {
                e["location"] = json!({ "path": path, "line": line, "column": column });
            }
            CliError::Schema { path, source } => {
                e["location"] = json!({ "path": path, "pointer": source.location });
            }
            _ => {}
        }
        json!({ "command": command, "ok": false, "error": e })
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// A report together with the document a construction produced.
struct Outcome {
    report: CommandReport,
    artifact: Option<Value>,
}

struct Input {
    path: String,
    decoded: Decoded,
}

struct Context<'a> {
    cli: &'a Cli,
    inputs: Vec<Input>,
    warnings: Vec<String>,
}

fn read_document(path: &Path) -> Result<(String, Decoded)> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: p.clone(), message: e.to_string() })?;
    let v: Value = serde_json::from_str(&text).map_err(|e| {
        let mut message = e.to_string();
        if let Some(i) = message.rfind(" at line ") {
            message.truncate(i);
        }
        CliError::Parse { path: p.clone(), line: e.line(), column: e.column(), message }
    })?;
    let d = codec::decode(&v).map_err(|source| CliError::Schema { path: p.clone(), source })?;
    Ok((text, d))
}

fn document_backend(d: &Document) -> Backend {
    match d {
        Document::Precategory(p) => p.backend,
        Document::KObject(k) => k.backend,
        Document::Strict { category, .. } => category.backend,
        Document::TwoConstant { data, .. } => data.category.backend,
        Document::Psi(p) => p.backend,
        Document::Transformations(t) => t.source.backend,
    }
}

fn document_truncation(d: &Document) -> Option<usize> {
    match d {
        Document::Precategory(p) => Some(p.truncation),
        Document::KObject(k) => Some(k.truncation),
        Document::Strict { truncation, .. } | Document::TwoConstant { truncation, .. } => *truncation,
        Document::Psi(p) => Some(p.truncation),
        Document::Transformations(t) => Some(t.source.truncation),
    }
}

/// Applies `--backend` and `--truncation` to a decoded document.
fn apply_overrides(cli: &Cli, path: &str, d: &mut Document) -> Result<()> {
    if let Some(b) = &cli.backend {
        let want = Backend::parse(b).ok_or_else(|| CliError::Usage(format!("unknown backend {:?}", b)))?;
        if want != document_backend(d) {
            return Err(CliError::Usage(format!(
                "{}: --backend {} disagrees with the document backend {}",
                path,
                want.name(),
                document_backend(d).name()
            )));
        }
    }
    let Some(t) = cli.truncation else { return Ok(()) };
    if t == 0 {
        return Err(CliError::Usage("--truncation must be positive".into()));
    }
    match d {
        Document::Strict { truncation, .. } | Document::TwoConstant { truncation, .. } => *truncation = Some(t),
        Document::Psi(p) => {
            if t < degree(&p.chain) {
                return Err(CliError::Usage(format!("{}: --truncation {} is below the degree of the chain", path, t)));
            }
            p.truncation = t;
        }
        _ => {
            let have = document_truncation(d).unwrap_or(t);
            if t > have {
                return Err(CliError::Usage(format!(
                    "{}: --truncation {} exceeds the document truncation {}",
                    path, t, have
                )));
            }
            match d {
                Document::Precategory(p) => *p = codec::restrict_precategory(p, t),
                Document::KObject(k) => *k = codec::restrict_kobject(k, t),
                Document::Transformations(tr) => {
                    let s = Arc::new(codec::restrict_precategory(&tr.source, t));
                    let g = Arc::new(codec::restrict_precategory(&tr.target, t));
                    tr.sigmas = tr
                        .sigmas
                        .iter()
                        .map(|m| {
                            let comps = m.components.iter().filter(|(z, _)| degree(z) <= t).map(|(z, c)| (z.clone(), c.clone())).collect();
                            adjoints::morphism(&s, &g, m.obj_map.clone(), comps)
                        })
                        .collect();
                    tr.source = s;
                    tr.target = g;
                }
                _ => {}
            }
        }
    }
    Ok(())
}

impl<'a> Context<'a> {
    fn load(cli: &'a Cli) -> Result<Context<'a>> {
        let mut inputs = Vec::new();
        let mut warnings = Vec::new();
        for p in &cli.input {
            let (_, mut decoded) = read_document(p)?;
            let path = p.display().to_string();
            apply_overrides(cli, &path, &mut decoded.document)?;
            warnings.extend(decoded.warnings.iter().map(|w| format!("{}: {}", path, w)));
            inputs.push(Input { path, decoded });
        }
        Ok(Context { cli, inputs, warnings })
    }

    fn expect_inputs(&self, counts: &[usize]) -> Result<()> {
        if counts.contains(&self.inputs.len()) {
            return Ok(());
        }
        let want: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
        Err(CliError::Usage(format!(
            "{} expects {} --input document(s), found {}",
            self.cli.command.name(),
            want.join(" or "),
            self.inputs.len()
        )))
    }

    fn cap(&self) -> usize {
        self.cli.cap.unwrap_or(DEFAULT_CAP)
    }

    fn wrong_type(&self, i: usize, want: &str) -> CliError {
        let input = &self.inputs[i];
        CliError::Schema {
            path: input.path.clone(),
            source: SchemaError {
                location: "$.type".into(),
                message: format!("{} expects {}, found {}", self.cli.command.name(), want, input.decoded.document.kind()),
            },
        }
    }

    /// Input `i` as a precategory; strict categories are taken at their own
    /// truncation or the default.
    fn precategory(&self, i: usize) -> Result<Arc<Precategory>> {
        let input = &self.inputs[i];
        match &input.decoded.document {
            Document::Precategory(p) => Ok(Arc::new(p.clone())),
            Document::Strict { category, truncation } => {
                let t = truncation.unwrap_or(DEFAULT_TRUNCATION);
                codec::strict_to_precategory(category, t, "$")
                    .map(Arc::new)
                    .map_err(|source| CliError::Schema { path: input.path.clone(), source })
            }
            _ => Err(self.wrong_type(i, "a precategory or strict category")),
        }
    }

    fn annotations(&self, i: usize) -> &Annotations {
        &self.inputs[i].decoded.annotations
    }
}

fn pair_name(objects: &[String], a: usize, b: usize) -> String {
    chain_to_string(objects, &[a, b])
}

fn unitalization_json(u: &Unitalization) -> Value {
    let objects = &u.result.objects;
    let rounds: Vec<Value> = u
        .trace
        .rounds
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let constraints: Vec<Value> = r
                .constraints
                .iter()
                .map(|c| {
                    json!({
                        "side": format!("{:?}", c.side).to_lowercase(),
                        "chain": chain_to_string(objects, &c.chain),
                        "target": chain_to_string(objects, &c.target),
                        "coequalizer-dim": c.m_dim(),
                    })
                })
                .collect();
            let dims: serde_json::Map<String, Value> =
                r.map.components.iter().map(|(z, m)| (chain_to_string(objects, z), json!([m.src.dim(), m.tgt.dim()]))).collect();
            json!({ "round": k, "constraints": constraints, "is_iso": r.is_iso, "dims": dims })
        })
        .collect();
    json!({ "rounds": rounds, "stabilized_at": u.trace.stabilized_at })
}

/// Flags `unitalization-preserves-(A,B)` for every pair.
fn eta_pair_checks(rep: &mut CommandReport, f: &Precategory, eta: &PrecatMorphism) {
    for (z, m) in &eta.components {
        if degree(z) == 1 {
            let pair = pair_name(&f.objects, z[0], z[1]);
            rep.check("unitalization-preserves-(A,B)", m.is_iso(), json!({ "pair": pair, "dims": [m.src.dim(), m.tgt.dim()] }));
        }
    }
}

fn cmd_validate(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let mut rep = CommandReport::new("validate");
    let v = match &cx.inputs[0].decoded.document {
        Document::Precategory(p) => ("precategory-axioms", p.validate()),
        Document::KObject(k) => ("kobject-functoriality", k.validate()),
        Document::Strict { category, .. } => ("strict-category-axioms", category.check()),
        Document::TwoConstant { data, .. } => {
            let mut r = data.category.check();
            if let Err(e) = data.check() {
                r.push("two-constant-data", "replacements".into(), e.to_string(), String::new());
            }
            ("two-constant-data-axioms", r)
        }
        Document::Psi(p) => {
            let mut r = cosegal_core::precat::Report::default();
            if let Err(e) = p.alpha.check() {
                r.push("invalid-morphism", "alpha".into(), e.to_string(), String::new());
            }
            ("psi-arrow-is-morphism", r)
        }
        Document::Transformations(t) => {
            let mut r = t.source.validate();
            r.extend(t.target.validate());
            for s in &t.sigmas {
                r.extend(s.check());
            }
            ("precategory-morphisms-are-natural", r)
        }
    };
    rep.violations(v.0, &v.1);
    rep.set("violations", json!(violations_json(&v.1)));
    Ok(Outcome { report: rep, artifact: None })
}

fn cmd_check_unital(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let f = cx.precategory(0)?;
    let mut rep = CommandReport::new("check-unital");
    rep.check("unit-points-present", f.units.is_some(), json!({}));
    let v = f.check_unital();
    rep.violations("strongly-unital", &v);
    rep.set("violations", json!(violations_json(&v)));
    if f.units.is_some() && f.validate().is_ok() {
        let u = unitalize(&f, cx.cap())?;
        eta_pair_checks(&mut rep, &f, &u.eta);
    }
    Ok(Outcome { report: rep, artifact: None })
}

fn cmd_unitalize(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let f = cx.precategory(0)?;
    let u = unitalize(&f, cx.cap())?;
    let mut rep = CommandReport::new("unitalize");
    rep.check("unitalization-stabilizes", true, json!({ "rounds": u.trace.rounds.len(), "cap": cx.cap() }));
    rep.violations("unitalization-is-precategory", &u.result.validate());
    rep.violations("unitalization-is-strongly-unital", &u.result.check_unital());
    eta_pair_checks(&mut rep, &f, &u.eta);
    rep.violations("unitalization-levelwise-colimits", &verify_levelwise(&u));
    let again = unitalize(&u.result, cx.cap())?;
    rep.check("unitalization-idempotent", again.trace.rounds.len() == 1, json!({ "rounds": again.trace.rounds.len() }));
    rep.set("trace", unitalization_json(&u));
    let artifact = codec::encode_precategory(&u.result, cx.annotations(0));
    Ok(Outcome { report: rep, artifact: Some(artifact) })
}

fn cmd_realize(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let f = cx.precategory(0)?;
    let r = realize(&f)?;
    let mut rep = CommandReport::new("realize");
    rep.violations("realization-is-category", &r.category.check());
    rep.violations("realization-unit-is-morphism", &r.eta.check());
    rep.set("stable_at_truncation", json!(r.stable_at_n));
    let artifact = codec::encode_strict(&r.category, None, &Annotations::default());
    Ok(Outcome { report: rep, artifact: Some(artifact) })
}

fn cmd_gamma(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let k: KObject = match &cx.inputs[0].decoded.document {
        Document::KObject(k) => k.clone(),
        Document::Precategory(p) => p.underlying(),
        _ => return Err(cx.wrong_type(0, "a kobject or precategory")),
    };
    let g = gamma(&k);
    let mut rep = CommandReport::new("gamma");
    rep.violations("gamma-is-precategory", &g.validate());
    for z in k.chains().into_iter().filter(|z| degree(z) == 1) {
        let same = g.value(&z) == k.value(&z);
        rep.check("gamma-keeps-(A,B)", same, json!({ "pair": k.name(&z), "dim": k.value(&z).dim() }));
    }
    Ok(Outcome { report: rep, artifact: Some(codec::encode_precategory(&g, &Annotations::default())) })
}

fn cmd_point(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let mut f = (*cx.precategory(0)?).clone();
    f.units = None;
    let p = point(&Arc::new(f));
    let mut rep = CommandReport::new("point");
    rep.violations("pointing-is-precategory", &p.result.validate());
    rep.check("pointing-has-units", p.result.units.is_some(), json!({}));
    rep.violations("pointing-inclusion-is-morphism", &p.inclusion.check());
    Ok(Outcome { report: rep, artifact: Some(codec::encode_precategory(&p.result, cx.annotations(0))) })
}

fn diagram_checks<D: Diagram>(rep: &mut CommandReport, d: &D, k_inject: bool) {
    let objects = d.objects();
    if k_inject {
        let k = k_injectivity_report(d);
        for e in &k.entries {
            rep.check("k-injective", e.predicate && e.lifting, k_entry_json(objects, e));
        }
        rep.check("k-injectivity-routes-agree", k.routes_agree(), json!({}));
        rep.set("chains", json!(k.entries.iter().map(|e| k_entry_json(objects, e)).collect::<Vec<_>>()));
    } else {
        let c = cosegal_report(d);
        for e in &c.entries {
            rep.check("cosegal-condition", e.verdict, crate::report::chain_check_json(objects, e));
        }
        rep.set("chains", json!(cosegal_json(objects, &c)));
        let failures: Vec<String> = c.failures().map(|e| chain_to_string(objects, &e.chain)).collect();
        rep.set("failures", json!(failures));
    }
}

fn cmd_chain_checks(cx: &Context, k_inject: bool) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let mut rep = CommandReport::new(if k_inject { "k-inject" } else { "cosegal-check" });
    match &cx.inputs[0].decoded.document {
        Document::KObject(k) => diagram_checks(&mut rep, k, k_inject),
        _ => diagram_checks(&mut rep, &*cx.precategory(0)?, k_inject),
    }
    Ok(Outcome { report: rep, artifact: None })
}

fn cmd_transfer(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let Document::TwoConstant { data, truncation } = &cx.inputs[0].decoded.document else {
        return Err(cx.wrong_type(0, "two-constant data"));
    };
    let mut rep = CommandReport::new("transfer");
    let mut r = data.category.check();
    if let Err(e) = data.check() {
        r.push("two-constant-data", "replacements".into(), e.to_string(), String::new());
    }
    rep.violations("two-constant-data-valid", &r);
    if !r.is_ok() {
        return Ok(Outcome { report: rep, artifact: None });
    }
    let (f, eps) = two_constant_transfer(data, truncation.unwrap_or(DEFAULT_TRUNCATION))?;
    rep.violations("transfer-is-precategory", &f.validate());
    rep.violations("transfer-is-strongly-unital", &f.check_unital());
    rep.check("transfer-is-two-constant", is_two_constant(&f), json!({}));
    let c = cosegal_report(&*f);
    rep.check("transfer-is-cosegal", c.is_ok(), json!({ "chains": cosegal_json(&f.objects, &c) }));
    rep.violations("transfer-counit-is-morphism", &eps.check());
    rep.check("transfer-counit-is-easy-weak-equivalence", eps.is_easy_weak_equivalence(), json!({}));
    Ok(Outcome { report: rep, artifact: Some(codec::encode_precategory(&f, &Annotations::default())) })
}

fn cmd_cosegalify(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let f = match &cx.inputs[0].decoded.document {
        Document::TwoConstant { data, truncation } => two_constant_transfer(data, truncation.unwrap_or(DEFAULT_TRUNCATION))?.0,
        _ => cx.precategory(0)?,
    };
    let s = cosegalify_two_constant(&f)?;
    let mut rep = CommandReport::new("cosegalify");
    rep.violations("cosegalification-is-precategory", &s.result.validate());
    rep.check("cosegalification-is-two-constant", is_two_constant(&s.result), json!({}));
    let c = cosegal_report(&*s.result);
    rep.check("cosegalification-is-cosegal", c.is_ok(), json!({ "chains": cosegal_json(&s.result.objects, &c) }));
    rep.violations("cosegalification-unit-is-morphism", &s.eta.check());
    let ident: Vec<String> = s
        .eta
        .components
        .iter()
        .filter(|(z, m)| degree(z) >= 2 && (m.src != m.tgt || m.mat != cosegal_core::linalg::Mat::identity(m.src.dim())))
        .map(|(z, _)| f.name(z))
        .collect();
    rep.check("cosegalification-unit-is-identity-above-degree-one", ident.is_empty(), json!({ "non-identity": ident }));
    let again = realize(&s.result)?;
    let mut differ = Vec::new();
    for (k, h) in &s.realization.category.homs {
        if again.category.homs.get(k) != Some(h) {
            differ.push(pair_name(&f.objects, k.0, k.1));
        }
    }
    for (k, m) in &s.realization.category.comp {
        if again.category.comp.get(k).map(|x| &x.mat) != Some(&m.mat) {
            differ.push(chain_to_string(&f.objects, &[k.0, k.1, k.2]));
        }
    }
    rep.check("cosegalification-preserves-realization", differ.is_empty(), json!({ "differences": differ }));
    Ok(Outcome { report: rep, artifact: Some(codec::encode_precategory(&s.result, &Annotations::default())) })
}

fn cmd_tensor(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[2])?;
    let (f, g) = (cx.precategory(0)?, cx.precategory(1)?);
    let t = tensor_s(&f, &g)?;
    let mut rep = CommandReport::new("tensor");
    rep.violations("tensor-is-precategory", &t.validate());
    if f.units.is_some() && g.units.is_some() {
        rep.violations("tensor-is-strongly-unital", &t.check_unital());
    }
    Ok(Outcome { report: rep, artifact: Some(codec::encode_precategory(&t, &Annotations::default())) })
}

fn distributor_checks(rep: &mut CommandReport, e: &Precategory, f: &Precategory, g: &Precategory, nx: usize) -> Result<()> {
    let d = check_distributor(e, f, g, nx)?;
    rep.violations("distributor-is-precategory", &d.validate);
    rep.violations("distributor-restricts-to-X", &d.restriction_x);
    rep.violations("distributor-restricts-to-Y", &d.restriction_y);
    let forbidden: Vec<String> = d.forbidden.iter().map(|z| e.name(z)).collect();
    rep.check("distributor-vanishes-from-Y-to-X", forbidden.is_empty(), json!({ "chains": forbidden }));
    rep.set("cosegal", json!(d.cosegal));
    Ok(())
}

fn cmd_yoneda(cx: &Context, object: &Option<String>) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let f = cx.precategory(0)?;
    let name = object
        .clone()
        .or_else(|| cx.annotations(0).mark.clone())
        .ok_or_else(|| CliError::Usage("yoneda needs --object or a \"mark\" in the document".into()))?;
    let a = f.objects.iter().position(|o| *o == name).ok_or_else(|| CliError::Usage(format!("unknown object {:?}", name)))?;
    let fa = yoneda_module(&f, a)?;
    let y = yoneda_report(&f, &fa)?;
    let mut rep = CommandReport::new("yoneda");
    rep.violations("yoneda-module-is-precategory", &y.validate);
    rep.violations("yoneda-restricts-to-F", &y.restriction);
    let stars: Vec<String> = y.star_deletions.iter().map(|(z, p)| format!("{}@{}", fa.name(z), p)).collect();
    rep.check("yoneda-star-deletions-are-identities", stars.is_empty(), json!({ "failures": stars }));
    let simp: Vec<String> = y.simplicial_failures.iter().map(|(z, p, q)| format!("{}@{},{}", fa.name(z), p, q)).collect();
    rep.check(
        "yoneda-simplicial-identities",
        simp.is_empty(),
        json!({ "pairs-compared": y.simplicial_pairs, "failures": simp }),
    );
    if let Some(c) = y.cosegal {
        rep.check("yoneda-inherits-cosegal", c, json!({}));
    }
    distributor_checks(&mut rep, &fa, &f, &unit_precat(f.backend, f.truncation), f.n())?;
    let split = (f.objects.clone(), fa.objects[f.n()..].to_vec());
    let ann = Annotations { split: Some(split), mark: None };
    Ok(Outcome { report: rep, artifact: Some(codec::encode_precategory(&fa, &ann)) })
}

fn cmd_distributor(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1, 3])?;
    let e = cx.precategory(0)?;
    let Some((x, y)) = cx.annotations(0).split.clone() else {
        return Err(CliError::Schema {
            path: cx.inputs[0].path.clone(),
            source: SchemaError { location: "$".into(), message: "missing field \"split\"".into() },
        });
    };
    let nx = x.len();
    let (f, g) = if cx.inputs.len() == 3 {
        (cx.precategory(1)?, cx.precategory(2)?)
    } else {
        let xs: Vec<usize> = (0..nx).collect();
        let ys: Vec<usize> = (nx..nx + y.len()).collect();
        (Arc::new(adjoints::pullback(&e, &xs, &x)?), Arc::new(adjoints::pullback(&e, &ys, &y)?))
    };
    let mut rep = CommandReport::new("distributor-check");
    distributor_checks(&mut rep, &e, &f, &g, nx)?;
    Ok(Outcome { report: rep, artifact: None })
}

fn cmd_nat_object(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let Document::Transformations(t) = &cx.inputs[0].decoded.document else {
        return Err(cx.wrong_type(0, "transformations"));
    };
    let mut rep = CommandReport::new("nat-object");
    let mut typing = t.source.validate();
    typing.extend(t.target.validate());
    for s in &t.sigmas {
        typing.extend(s.check());
    }
    rep.violations("precategory-morphisms-are-natural", &typing);
    if !typing.is_ok() {
        return Ok(Outcome { report: rep, artifact: None });
    }
    let o = nat_transform_object(&t.sigmas)?;
    let mut bad = Vec::new();
    for j in 0..o.inclusion.src.dim() {
        let v = o.inclusion.image_of(j).clone();
        if !o.transform(&v).check()?.is_ok() {
            bad.push(j);
        }
    }
    rep.check("nat-object-members-satisfy-axiom", bad.is_empty(), json!({ "failing-basis-elements": bad }));
    if o.product.backend() == Backend::FinSet && o.product.dim() <= ENUMERATION_LIMIT {
        let mut mismatches = Vec::new();
        for p in 0..o.product.dim() {
            let v = unit_vec(p);
            if o.transform(&v).check()?.is_ok() != o.contains(&v) {
                mismatches.push(p);
            }
        }
        rep.check(
            "nat-object-is-axiom-exact",
            mismatches.is_empty(),
            json!({ "enumerated": o.product.dim(), "mismatches": mismatches }),
        );
    }
    let alphas: Vec<String> = o.alphas.iter().map(|a| chain_to_string(&t.target.objects, a)).collect();
    rep.set("alphas", json!(alphas));
    rep.set("product", codec::encode_object(&o.product));
    rep.set("object", codec::encode_object(&o.object));
    rep.set("inclusion", codec::encode_payload(&o.inclusion));
    rep.set("budget", json!(o.budget));
    Ok(Outcome { report: rep, artifact: None })
}

fn cmd_psi(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let Document::Psi(p) = &cx.inputs[0].decoded.document else {
        return Err(cx.wrong_type(0, "a psi document"));
    };
    let mut rep = CommandReport::new("psi");
    let mut r = cosegal_core::precat::Report::default();
    if let Err(e) = p.alpha.check() {
        r.push("invalid-morphism", "alpha".into(), e.to_string(), String::new());
    }
    rep.violations("psi-arrow-is-morphism", &r);
    if !r.is_ok() {
        return Ok(Outcome { report: rep, artifact: None });
    }
    let pa = psi_arrows(&p.objects, p.truncation, &p.chain, &p.alpha, cx.cap())?;
    let result = pa.psi_alpha.result();
    rep.violations("psi-is-precategory", &result.validate());
    rep.violations("psi-is-strongly-unital", &result.check_unital());
    let mut maps = pa.down.check();
    maps.extend(pa.xi.check());
    maps.extend(pa.ell.check());
    rep.violations("psi-maps-are-morphisms", &maps);
    rep.check("fundamental-factorization", pa.xi.then(&pa.ell).same_components(&pa.down), json!({}));
    let not_iso: Vec<String> = pa
        .ell
        .components
        .iter()
        .filter(|(z, m)| degree(z) == 1 && !m.is_iso())
        .map(|(z, _)| chain_to_string(&p.objects, z))
        .collect();
    rep.check("psi-ell-iso-at-degree-one", not_iso.is_empty(), json!({ "failures": not_iso }));
    rep.set("unitalization", unitalization_json(&pa.psi_alpha.unitalization));
    Ok(Outcome { report: rep, artifact: Some(codec::encode_precategory(result, &Annotations::default())) })
}

fn cmd_roundtrip(cx: &Context) -> Result<Outcome> {
    cx.expect_inputs(&[1])?;
    let path = &cx.cli.input[0];
    let (text, first) = read_document(path)?;
    let e1 = codec::encode(&first.document, &first.annotations);
    let second = codec::decode(&e1).map_err(|source| CliError::Schema { path: "re-encoded document".into(), source })?;
    let e2 = codec::encode(&second.document, &second.annotations);
    let s1 = codec::to_canonical_string(&e1);
    let mut rep = CommandReport::new("roundtrip");
    rep.check("roundtrip-decode-encode-decode", e1 == e2 && s1 == codec::to_canonical_string(&e2), json!({}));
    rep.set("canonical", json!(text == s1));
    Ok(Outcome { report: rep, artifact: Some(e1) })
}

/// `COSEGAL_SEED`, or 0 when unset.
pub fn seed_from_env() -> Result<u64> {
    match std::env::var("COSEGAL_SEED") {
        Err(_) => Ok(0),
        Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("COSEGAL_SEED must be an unsigned integer, found {:?}", s))),
    }
}

fn cmd_sample(cx: &Context, kind: SampleKind, objects: usize, dim: usize) -> Result<Outcome> {
    cx.expect_inputs(&[0])?;
    let seed = seed_from_env()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let backend = match &cx.cli.backend {
        None => Backend::VectQ,
        Some(b) => Backend::parse(b).ok_or_else(|| CliError::Usage(format!("unknown backend {:?}", b)))?,
    };
    let t = cx.cli.truncation.unwrap_or(DEFAULT_TRUNCATION);
    if objects == 0 || t == 0 {
        return Err(CliError::Usage("sample needs at least one object and a positive truncation".into()));
    }
    let none = Annotations::default();
    let doc = match kind {
        SampleKind::Kobject => codec::encode_kobject(&fixtures::random_kobject(&mut rng, backend, objects, t, dim)),
        SampleKind::Pointed => codec::encode_precategory(&fixtures::random_pointed(&mut rng, backend, objects, t, dim), &none),
        SampleKind::Strict => codec::encode_strict(&fixtures::random_strict(&mut rng, backend), Some(t), &none),
        SampleKind::TwoConstant | SampleKind::Cylinder => {
            if backend != Backend::ChQ {
                return Err(CliError::Usage("2-constant samples need --backend chq".into()));
            }
            let c = fixtures::random_strict(&mut rng, backend);
            let d = if kind == SampleKind::Cylinder {
                fixtures::cylinder_data(&c)
            } else {
                fixtures::random_two_constant_data(&mut rng, &c)
            };
            codec::encode_two_constant(&d, Some(t))
        }
    };
    let mut rep = CommandReport::new("sample");
    rep.set("seed", json!(seed));
    Ok(Outcome { report: rep, artifact: Some(doc) })
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let cx = Context::load(cli)?;
    let mut out = match &cli.command {
        Command::Validate => cmd_validate(&cx),
        Command::CheckUnital => cmd_check_unital(&cx),
        Command::Unitalize => cmd_unitalize(&cx),
        Command::Realize => cmd_realize(&cx),
        Command::Gamma => cmd_gamma(&cx),
        Command::Point => cmd_point(&cx),
        Command::CosegalCheck => cmd_chain_checks(&cx, false),
        Command::KInject => cmd_chain_checks(&cx, true),
        Command::Transfer => cmd_transfer(&cx),
        Command::Cosegalify => cmd_cosegalify(&cx),
        Command::Tensor => cmd_tensor(&cx),
        Command::Yoneda { object } => cmd_yoneda(&cx, object),
        Command::DistributorCheck => cmd_distributor(&cx),
        Command::NatObject => cmd_nat_object(&cx),
        Command::Psi => cmd_psi(&cx),
        Command::Roundtrip => cmd_roundtrip(&cx),
        Command::Sample { kind, objects, dim } => cmd_sample(&cx, *kind, *objects, *dim),
    }?;
    out.report.warnings.extend(cx.warnings);
    out.report.warnings.sort();
    out.report.warnings.dedup();
    Ok(out)
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| CliError::Io { path: path.display().to_string(), message: e.to_string() };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(io)?;
    }
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn render(report: &CommandReport, format: Format) -> String {
    match format {
        Format::Json => codec::to_canonical_string(&report.to_json()),
        Format::Text => report.to_text(),
    }
}

/// Runs one command and returns its exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", text);
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", text);
                    EXIT_USAGE
                }
            };
        }
    };
    let name = cli.command.name();
    let result = execute(&cli).and_then(|mut out| {
        if let Some(path) = &cli.output {
            let body = match out.artifact.take() {
                Some(doc) => codec::to_canonical_string(&doc),
                None => render(&out.report, cli.format),
            };
            write_atomic(path, &body)?;
        } else if let Some(doc) = out.artifact.take() {
            out.report.set("result", doc);
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            let _ = write!(stdout, "{}", render(&out.report, cli.format));
            if out.report.ok() {
                EXIT_OK
            } else {
                let mut failed: Vec<(&str, usize)> = Vec::new();
                for c in out.report.checks.iter().filter(|c| !c.ok) {
                    match failed.iter_mut().find(|(t, _)| *t == c.theorem) {
                        Some((_, n)) => *n += 1,
                        None => failed.push((&c.theorem, 1)),
                    }
                }
                for (t, n) in failed {
                    let _ = writeln!(stderr, "failed: theorem: {} ({} instance(s))", t, n);
                }
                EXIT_CHECKS_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e);
            let body = match cli.format {
                Format::Json => codec::to_canonical_string(&e.to_json(name)),
                Format::Text => format!("{}: error ({}): {}\n", name, e.kind(), e),
            };
            let _ = write!(stdout, "{}", body);
            e.code()
        }
    }
}
