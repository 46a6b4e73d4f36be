//! The JSON instance format and its loader.
//!
//! A document holds an optional `base` preorder, named objects tagged with
//! their category, and named morphisms referring to objects. Relations are
//! arrays of pairs; filtrations map base elements to element arrays;
//! anchors map elements to base elements. Reflexive-transitive closure is
//! implicit unless `strict` is set, in which case non-closed input is
//! rejected. Every object and morphism is validated for its tag right
//! after loading, with the offending location in the error.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use descent_core::cat::{Morphism, Obj, Tag};
use descent_core::order::Preorder;

/// Error carrying the exit-code class (input vs budget).
#[derive(Debug, Clone)]
pub enum CliError {
    Input(String),
    Budget(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Budget(m) => write!(f, "budget exceeded: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<descent_core::Error> for CliError {
    fn from(e: descent_core::Error) -> CliError {
        match e {
            descent_core::Error::Budget(m) => CliError::Budget(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

#[derive(Debug, Clone, Serialize, Deserialize, Default, PartialEq)]
pub struct DocPreorder {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub leq: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DocObject {
    pub tag: String,
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub leq: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DocMorphism {
    pub from: String,
    pub to: String,
    pub map: BTreeMap<String, String>,
}

/// One self-contained instance file.
#[derive(Debug, Clone, Serialize, Deserialize, Default, PartialEq)]
pub struct InstanceDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<DocPreorder>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub objects: BTreeMap<String, DocObject>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, DocMorphism>,
    /// Verified claims attached by `witness`; ignored on load.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<serde_json::Value>,
}

/// A morphism together with the object names it was declared between.
#[derive(Debug, Clone)]
pub struct NamedMorphism {
    pub from: String,
    pub to: String,
    pub morphism: Morphism,
}

/// A fully validated instance.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub base: Option<Arc<Preorder>>,
    pub objects: BTreeMap<String, Obj>,
    pub morphisms: BTreeMap<String, NamedMorphism>,
}

impl LoadedInstance {
    pub fn morphism(&self, name: &str) -> CliResult<&NamedMorphism> {
        self.morphisms
            .get(name)
            .ok_or_else(|| input(format!("no morphism named `{name}` in the document")))
    }
}

pub fn parse(text: &str) -> CliResult<InstanceDocument> {
    serde_json::from_str(text).map_err(|e| input(format!("JSON parse error: {e}")))
}

fn build_preorder(
    loc: &str,
    elements: &[String],
    leq: &[(String, String)],
    strict: bool,
) -> CliResult<Preorder> {
    if strict {
        let gaps = Preorder::diagnose(elements, leq);
        if !gaps.is_empty() {
            return Err(input(format!("{loc}: relation not closed in strict mode: {gaps:?}")));
        }
    }
    Preorder::close(elements.to_vec(), leq).map_err(|e| input(format!("{loc}: {e}")))
}

fn build_object(
    name: &str,
    doc: &DocObject,
    base: Option<&Arc<Preorder>>,
    strict: bool,
) -> CliResult<Obj> {
    let loc = format!("objects.{name}");
    let tag: Tag = doc.tag.parse().map_err(|e| input(format!("{loc}: {e}")))?;
    let base = match (tag.has_base(), base) {
        (false, _) => None,
        (true, Some(b)) => Some(b.clone()),
        (true, None) => return Err(input(format!("{loc}: tag {tag} needs a `base` preorder"))),
    };
    if tag.requires_discrete() && doc.leq.iter().any(|(a, b)| a != b) {
        return Err(input(format!("{loc}: C2 objects carry no order")));
    }
    let order = build_preorder(&loc, &doc.elements, &doc.leq, strict)?;

    let filt = if tag.has_filtration() {
        let base = base.as_ref().unwrap();
        let given = doc
            .filtration
            .as_ref()
            .ok_or_else(|| input(format!("{loc}: tag {tag} needs a `filtration`")))?;
        for x in given.keys() {
            base.position(x).map_err(|_| {
                input(format!("{loc}: filtration key `{x}` is not a base element"))
            })?;
        }
        let mut sets = vec![0u64; base.n()];
        for (x, members) in given {
            let xi = base.position(x).unwrap();
            let refs: Vec<&str> = members.iter().map(|s| s.as_str()).collect();
            sets[xi] = order
                .subset(&refs)
                .map_err(|e| input(format!("{loc}: filtration at `{x}`: {e}")))?;
        }
        Some(sets)
    } else {
        if doc.filtration.is_some() {
            return Err(input(format!("{loc}: tag {tag} does not take a filtration")));
        }
        None
    };

    let alpha = if tag.has_alpha() {
        let base = base.as_ref().unwrap();
        let given = doc
            .alpha
            .as_ref()
            .ok_or_else(|| input(format!("{loc}: tag {tag} needs an `alpha` map")))?;
        let mut vals = vec![usize::MAX; order.n()];
        for (a, x) in given {
            let ai = order
                .position(a)
                .map_err(|e| input(format!("{loc}: alpha: {e}")))?;
            vals[ai] = base
                .position(x)
                .map_err(|e| input(format!("{loc}: alpha at `{a}`: {e}")))?;
        }
        if vals.contains(&usize::MAX) {
            return Err(input(format!("{loc}: alpha is not total on the carrier")));
        }
        Some(vals)
    } else {
        if doc.alpha.is_some() {
            return Err(input(format!("{loc}: tag {tag} does not take an alpha map")));
        }
        None
    };

    let obj = Obj { tag, base, order, filt, alpha };
    let violations = obj.validate();
    if !violations.is_empty() {
        let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(input(format!("{loc}: {}", msgs.join("; "))));
    }
    Ok(obj)
}

/// Validate and assemble a parsed document.
pub fn load_document(doc: &InstanceDocument, strict: bool) -> CliResult<LoadedInstance> {
    let base = match &doc.base {
        Some(b) => Some(Arc::new(build_preorder("base", &b.elements, &b.leq, strict)?)),
        None => None,
    };
    let mut objects = BTreeMap::new();
    for (name, od) in &doc.objects {
        objects.insert(name.clone(), build_object(name, od, base.as_ref(), strict)?);
    }
    let mut morphisms = BTreeMap::new();
    for (name, md) in &doc.morphisms {
        let loc = format!("morphisms.{name}");
        let src = objects
            .get(&md.from)
            .ok_or_else(|| input(format!("{loc}: unresolved object `{}`", md.from)))?;
        let dst = objects
            .get(&md.to)
            .ok_or_else(|| input(format!("{loc}: unresolved object `{}`", md.to)))?;
        let mut map = vec![usize::MAX; src.carrier_len()];
        for (a, b) in &md.map {
            let ai = src
                .order
                .position(a)
                .map_err(|e| input(format!("{loc}: {e}")))?;
            map[ai] = dst
                .order
                .position(b)
                .map_err(|e| input(format!("{loc}: at `{a}`: {e}")))?;
        }
        if map.contains(&usize::MAX) {
            return Err(input(format!("{loc}: map is not total on `{}`", md.from)));
        }
        let morphism = Morphism::new(src.clone(), dst.clone(), map)
            .map_err(|e| input(format!("{loc}: {e}")))?;
        let violations = morphism.validate();
        if !violations.is_empty() {
            let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(input(format!("{loc}: {}", msgs.join("; "))));
        }
        morphisms.insert(
            name.clone(),
            NamedMorphism { from: md.from.clone(), to: md.to.clone(), morphism },
        );
    }
    Ok(LoadedInstance { base, objects, morphisms })
}

pub fn load_str(text: &str, strict: bool) -> CliResult<LoadedInstance> {
    load_document(&parse(text)?, strict)
}

pub fn load_path(path: &std::path::Path, strict: bool) -> CliResult<LoadedInstance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    load_str(&text, strict)
}

/// Serialize with a stable layout (sorted maps, carrier-order lists).
pub fn to_json(doc: &InstanceDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

pub fn preorder_to_doc(p: &Preorder) -> DocPreorder {
    DocPreorder { elements: p.elements().to_vec(), leq: p.pairs() }
}

pub fn obj_to_doc(obj: &Obj) -> DocObject {
    let order = &obj.order;
    DocObject {
        tag: obj.tag.to_string(),
        elements: order.elements().to_vec(),
        leq: if obj.tag.requires_discrete() { Vec::new() } else { order.pairs() },
        filtration: obj.filt.as_ref().map(|sets| {
            let base = obj.base();
            sets.iter()
                .enumerate()
                .map(|(x, &s)| (base.name(x).to_string(), order.subset_names(s)))
                .collect()
        }),
        alpha: obj.alpha.as_ref().map(|vals| {
            let base = obj.base();
            vals.iter()
                .enumerate()
                .map(|(i, &x)| (order.name(i).to_string(), base.name(x).to_string()))
                .collect()
        }),
    }
}

pub fn morphism_to_doc(from: &str, to: &str, m: &Morphism) -> DocMorphism {
    DocMorphism {
        from: from.to_string(),
        to: to.to_string(),
        map: m
            .map
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                (
                    m.source.order.name(i).to_string(),
                    m.target.order.name(j).to_string(),
                )
            })
            .collect(),
    }
}

/// Rebuild a document from a loaded instance (used by `gen` and tests for
/// round-trip checks).
pub fn document_of(instance: &LoadedInstance) -> InstanceDocument {
    InstanceDocument {
        base: instance.base.as_ref().map(|b| preorder_to_doc(b)),
        objects: instance
            .objects
            .iter()
            .map(|(n, o)| (n.clone(), obj_to_doc(o)))
            .collect(),
        morphisms: instance
            .morphisms
            .iter()
            .map(|(n, m)| (n.clone(), morphism_to_doc(&m.from, &m.to, &m.morphism)))
            .collect(),
        claims: Vec::new(),
    }
}
