//! The five concrete categories over a fixed base preorder `X` and the
//! functors between them.
//!
//! * `Ord`  — preorders and monotone maps (no base);
//! * `C2`   — carriers with an antitone family of subsets indexed by `X`,
//!            no order (represented here with a mandatory discrete order);
//! * `Prod` — preorders with an antitone family (the pullback of `Ord` and
//!            `C2` over sets);
//! * `OrdX` — filtered preorders: antitone families of *up-closed* subsets,
//!            equivalently profunctors `X → A`;
//! * `LaxX` — the lax comma category: preorders with a monotone anchor map
//!            `α : A → X`, morphisms satisfying `α ⩽ β ∘ f` pointwise.
//!
//! Pullbacks and coequalizers are chosen as for sets: the pullback carrier
//! is the lexicographically ordered list of matching pairs and the
//! coequalizer carrier is the list of earliest class representatives, so
//! repeated runs produce identical objects. In `LaxX` both constructions
//! are partial: the pullback anchor needs binary meets below a common
//! bound, the coequalizer anchor needs joins.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{compose_maps, iter_mask, Preorder};

/// Which of the five categories an object or morphism lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tag {
    Ord,
    C2,
    Prod,
    OrdX,
    LaxX,
}

impl Tag {
    pub fn has_base(self) -> bool {
        self != Tag::Ord
    }

    pub fn has_filtration(self) -> bool {
        matches!(self, Tag::C2 | Tag::Prod | Tag::OrdX)
    }

    pub fn requires_upclosed(self) -> bool {
        self == Tag::OrdX
    }

    pub fn has_alpha(self) -> bool {
        self == Tag::LaxX
    }

    /// Carriers of `C2` objects are unordered; we store them with the
    /// discrete order and validate that nothing else sneaks in.
    pub fn requires_discrete(self) -> bool {
        self == Tag::C2
    }

    pub const ALL: [Tag; 5] = [Tag::Ord, Tag::C2, Tag::Prod, Tag::OrdX, Tag::LaxX];
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tag::Ord => "Ord",
            Tag::C2 => "C2",
            Tag::Prod => "Prod",
            Tag::OrdX => "OrdX",
            Tag::LaxX => "LaxX",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Tag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Tag> {
        match s {
            "Ord" => Ok(Tag::Ord),
            "C2" => Ok(Tag::C2),
            "Prod" => Ok(Tag::Prod),
            "OrdX" => Ok(Tag::OrdX),
            "LaxX" => Ok(Tag::LaxX),
            other => Err(Error::input(format!("unknown category tag `{other}`"))),
        }
    }
}

/// An antitone family of subsets of a carrier, indexed by the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    pub base: Arc<Preorder>,
    /// `sets[x]` is the level at base element `x`, as a carrier mask.
    pub sets: Vec<u64>,
}

impl Filtration {
    /// First violation of `x′ ⩽ x ⇒ sets[x] ⊆ sets[x′]`, as
    /// `(x_lo, x_hi, escaping element)`.
    pub fn first_not_antitone(&self) -> Option<(usize, usize, usize)> {
        for lo in 0..self.base.n() {
            for hi in iter_mask(self.base.up_row(lo)).filter(|&h| h < self.base.n()) {
                let escape = self.sets[hi] & !self.sets[lo];
                if escape != 0 {
                    return Some((lo, hi, escape.trailing_zeros() as usize));
                }
            }
        }
        None
    }

    /// First level that is not up-closed in `order`, as `(x, lo, hi)`.
    pub fn first_not_upclosed(&self, order: &Preorder) -> Option<(usize, usize, usize)> {
        for x in 0..self.base.n() {
            let r = order.is_upclosed(self.sets[x]);
            if !r.passed {
                if let Some(crate::verdict::Witness::Pair { lo, hi }) = r.witness {
                    let lo = order.position(&lo).unwrap();
                    let hi = order.position(&hi).unwrap();
                    return Some((x, lo, hi));
                }
            }
        }
        None
    }
}

/// A profunctor `X → A` presented as a relation, one carrier mask per base
/// element. The bimodule law says rows shrink as `x` grows and each row is
/// up-closed in `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profunctor {
    pub base: Arc<Preorder>,
    pub carrier: Preorder,
    pub rel: Vec<u64>,
}

/// Read a filtration off a profunctor: level `x` is the row `a(x,−)`.
pub fn filtration_from_profunctor(pf: &Profunctor) -> Result<Filtration> {
    if pf.rel.len() != pf.base.n() {
        return Err(Error::input("profunctor relation has wrong base length"));
    }
    let ft = Filtration { base: pf.base.clone(), sets: pf.rel.clone() };
    if let Some((lo, hi, a)) = ft.first_not_antitone() {
        return Err(Error::input(format!(
            "bimodule law fails: ({}, {}) in the relation but ({}, {}) is not",
            pf.base.name(hi),
            pf.carrier.name(a),
            pf.base.name(lo),
            pf.carrier.name(a),
        )));
    }
    if let Some((x, lo, hi)) = ft.first_not_upclosed(&pf.carrier) {
        return Err(Error::input(format!(
            "bimodule law fails: ({}, {}) in the relation, {} ⩽ {}, but ({}, {}) is not",
            pf.base.name(x),
            pf.carrier.name(lo),
            pf.carrier.name(lo),
            pf.carrier.name(hi),
            pf.base.name(x),
            pf.carrier.name(hi),
        )));
    }
    Ok(ft)
}

/// Read a profunctor off an up-closed antitone family; inverse to
/// [`filtration_from_profunctor`].
pub fn profunctor_from_filtration(ft: &Filtration, order: &Preorder) -> Result<Profunctor> {
    if ft.sets.len() != ft.base.n() {
        return Err(Error::input("filtration has wrong base length"));
    }
    if let Some((lo, hi, a)) = ft.first_not_antitone() {
        return Err(Error::input(format!(
            "filtration not antitone: `{}` is in the level at `{}` but not at `{}`",
            order.name(a),
            ft.base.name(hi),
            ft.base.name(lo),
        )));
    }
    if let Some((x, lo, hi)) = ft.first_not_upclosed(order) {
        return Err(Error::input(format!(
            "filtration level at `{}` not upclosed: contains `{}` but not `{}`",
            ft.base.name(x),
            order.name(lo),
            order.name(hi),
        )));
    }
    Ok(Profunctor { base: ft.base.clone(), carrier: order.clone(), rel: ft.sets.clone() })
}

/// An object of one of the five categories. The carrier is the element list
/// of `order` (discrete for `C2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obj {
    pub tag: Tag,
    pub base: Option<Arc<Preorder>>,
    pub order: Preorder,
    /// Levels indexed by the base; present exactly for `C2`/`Prod`/`OrdX`.
    pub filt: Option<Vec<u64>>,
    /// Anchor map into the base; present exactly for `LaxX`.
    pub alpha: Option<Vec<usize>>,
}

/// A violation reported by [`Obj::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ObjViolation {
    ShapeMismatch { detail: String },
    OrderNotDiscrete { lo: String, hi: String },
    FiltrationNotAntitone { x_lo: String, x_hi: String, elem: String },
    FiltrationNotUpclosed { x: String, lo: String, hi: String },
    AlphaNotMonotone { lo: String, hi: String },
}

impl std::fmt::Display for ObjViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ObjViolation::ShapeMismatch { detail } => write!(f, "{detail}"),
            ObjViolation::OrderNotDiscrete { lo, hi } => {
                write!(f, "carrier must be unordered but `{lo}` ⩽ `{hi}`")
            }
            ObjViolation::FiltrationNotAntitone { x_lo, x_hi, elem } => write!(
                f,
                "filtration not antitone: `{elem}` in the level at `{x_hi}` but not at `{x_lo}`"
            ),
            ObjViolation::FiltrationNotUpclosed { x, lo, hi } => {
                write!(f, "filtration level at `{x}` not upclosed: witness (`{lo}`, `{hi}`)")
            }
            ObjViolation::AlphaNotMonotone { lo, hi } => {
                write!(f, "anchor not monotone on (`{lo}`, `{hi}`)")
            }
        }
    }
}

impl Obj {
    pub fn ord(order: Preorder) -> Obj {
        Obj { tag: Tag::Ord, base: None, order, filt: None, alpha: None }
    }

    pub fn c2(base: Arc<Preorder>, elements: Vec<String>, filt: Vec<u64>) -> Result<Obj> {
        let order = Preorder::discrete(elements)?;
        Obj::with_filtration(Tag::C2, base, order, filt)
    }

    pub fn prod(base: Arc<Preorder>, order: Preorder, filt: Vec<u64>) -> Result<Obj> {
        Obj::with_filtration(Tag::Prod, base, order, filt)
    }

    pub fn ordx(base: Arc<Preorder>, order: Preorder, filt: Vec<u64>) -> Result<Obj> {
        Obj::with_filtration(Tag::OrdX, base, order, filt)
    }

    fn with_filtration(
        tag: Tag,
        base: Arc<Preorder>,
        order: Preorder,
        filt: Vec<u64>,
    ) -> Result<Obj> {
        if filt.len() != base.n() {
            return Err(Error::input(format!(
                "filtration has {} levels for a base of size {}",
                filt.len(),
                base.n()
            )));
        }
        let full = order.full_mask();
        if filt.iter().any(|&s| s & !full != 0) {
            return Err(Error::input("filtration level mentions indices outside the carrier"));
        }
        Ok(Obj { tag, base: Some(base), order, filt: Some(filt), alpha: None })
    }

    pub fn laxx(base: Arc<Preorder>, order: Preorder, alpha: Vec<usize>) -> Result<Obj> {
        if alpha.len() != order.n() {
            return Err(Error::input("anchor map is not total on the carrier"));
        }
        if alpha.iter().any(|&x| x >= base.n()) {
            return Err(Error::input("anchor map hits an index outside the base"));
        }
        Ok(Obj { tag: Tag::LaxX, base: Some(base), order, filt: None, alpha: None }
            .with_alpha(alpha))
    }

    fn with_alpha(mut self, alpha: Vec<usize>) -> Obj {
        self.alpha = Some(alpha);
        self
    }

    pub fn carrier_len(&self) -> usize {
        self.order.n()
    }

    pub fn names(&self) -> &[String] {
        self.order.elements()
    }

    pub fn base(&self) -> &Arc<Preorder> {
        self.base.as_ref().expect("object tag carries a base")
    }

    pub fn filtration_at(&self, x: usize) -> u64 {
        self.filt.as_ref().expect("object tag carries a filtration")[x]
    }

    /// The effective level at `x` for checks that run on both presentations:
    /// the stored level for filtration tags, `{a | x ⩽ α(a)}` for `LaxX`.
    pub fn level(&self, x: usize) -> u64 {
        match (&self.filt, &self.alpha) {
            (Some(f), _) => f[x],
            (_, Some(alpha)) => {
                let base = self.base();
                let mut m = 0u64;
                for (a, &xa) in alpha.iter().enumerate() {
                    if base.leq(x, xa) {
                        m |= 1 << a;
                    }
                }
                m
            }
            _ => panic!("object has neither filtration nor anchor"),
        }
    }

    /// Every tag-dependent invariant, each violation carrying a witness.
    pub fn validate(&self) -> Vec<ObjViolation> {
        let mut out = Vec::new();
        let want_base = self.tag.has_base();
        if want_base != self.base.is_some()
            || self.tag.has_filtration() != self.filt.is_some()
            || self.tag.has_alpha() != self.alpha.is_some()
        {
            out.push(ObjViolation::ShapeMismatch {
                detail: format!("object fields do not match tag {}", self.tag),
            });
            return out;
        }
        if self.tag.requires_discrete() {
            for i in 0..self.order.n() {
                for j in iter_mask(self.order.up_row(i)).filter(|&j| j < self.order.n()) {
                    if i != j {
                        out.push(ObjViolation::OrderNotDiscrete {
                            lo: self.order.name(i).to_string(),
                            hi: self.order.name(j).to_string(),
                        });
                    }
                }
            }
        }
        if let Some(filt) = &self.filt {
            let base = self.base();
            if filt.len() != base.n() {
                out.push(ObjViolation::ShapeMismatch {
                    detail: "filtration length does not match the base".into(),
                });
                return out;
            }
            let ft = Filtration { base: base.clone(), sets: filt.clone() };
            if let Some((lo, hi, a)) = ft.first_not_antitone() {
                out.push(ObjViolation::FiltrationNotAntitone {
                    x_lo: base.name(lo).to_string(),
                    x_hi: base.name(hi).to_string(),
                    elem: self.order.name(a).to_string(),
                });
            }
            if self.tag.requires_upclosed() {
                if let Some((x, lo, hi)) = ft.first_not_upclosed(&self.order) {
                    out.push(ObjViolation::FiltrationNotUpclosed {
                        x: base.name(x).to_string(),
                        lo: self.order.name(lo).to_string(),
                        hi: self.order.name(hi).to_string(),
                    });
                }
            }
        }
        if let Some(alpha) = &self.alpha {
            let base = self.base();
            for i in 0..self.order.n() {
                for j in iter_mask(self.order.up_row(i)).filter(|&j| j < self.order.n()) {
                    if !base.leq(alpha[i], alpha[j]) {
                        out.push(ObjViolation::AlphaNotMonotone {
                            lo: self.order.name(i).to_string(),
                            hi: self.order.name(j).to_string(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Reinterpret under another filtration tag without touching the data
    /// (the implicit inclusions `OrdX → Prod → C2`-shaped retagging).
    pub fn retag(&self, tag: Tag) -> Result<Obj> {
        if !(self.tag.has_filtration() && tag.has_filtration()) {
            return Err(Error::input(format!("cannot retag {} as {}", self.tag, tag)));
        }
        Ok(Obj { tag, ..self.clone() })
    }

    /// Underlying `Ord` object (forgets base-indexed structure).
    pub fn forget(&self) -> Obj {
        Obj::ord(self.order.clone())
    }
}

/// A violation reported by [`Morphism::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum MorphismViolation {
    NotMonotone { lo: String, hi: String },
    FiltrationNotPreserved { x: String, a: String },
    LaxInequality { a: String },
}

impl std::fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MorphismViolation::NotMonotone { lo, hi } => {
                write!(f, "map not monotone on (`{lo}`, `{hi}`)")
            }
            MorphismViolation::FiltrationNotPreserved { x, a } => {
                write!(f, "level at `{x}` not preserved: image of `{a}` escapes")
            }
            MorphismViolation::LaxInequality { a } => {
                write!(f, "anchor inequality fails at `{a}`")
            }
        }
    }
}

/// A map between two objects of the same category over the same base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub source: Obj,
    pub target: Obj,
    pub map: Vec<usize>,
}

impl Morphism {
    pub fn new(source: Obj, target: Obj, map: Vec<usize>) -> Result<Morphism> {
        if source.tag != target.tag {
            return Err(Error::input(format!(
                "tag mismatch: {} vs {}",
                source.tag, target.tag
            )));
        }
        if source.base != target.base {
            return Err(Error::input("source and target live over different bases"));
        }
        if map.len() != source.carrier_len() {
            return Err(Error::input("map is not total on the source carrier"));
        }
        if map.iter().any(|&j| j >= target.carrier_len()) {
            return Err(Error::input("map hits an index outside the target carrier"));
        }
        Ok(Morphism { source, target, map })
    }

    pub fn by_names(source: Obj, target: Obj, assign: &[(&str, &str)]) -> Result<Morphism> {
        let mut map = vec![usize::MAX; source.carrier_len()];
        for (a, b) in assign {
            map[source.order.position(a)?] = target.order.position(b)?;
        }
        if map.contains(&usize::MAX) {
            return Err(Error::input("map is not total on the source carrier"));
        }
        Morphism::new(source, target, map)
    }

    pub fn identity(obj: &Obj) -> Morphism {
        Morphism {
            source: obj.clone(),
            target: obj.clone(),
            map: (0..obj.carrier_len()).collect(),
        }
    }

    pub fn tag(&self) -> Tag {
        self.source.tag
    }

    pub fn compose(&self, then: &Morphism) -> Result<Morphism> {
        if self.target != then.source {
            return Err(Error::input("composition mismatch"));
        }
        Morphism::new(
            self.source.clone(),
            then.target.clone(),
            compose_maps(&self.map, &then.map),
        )
    }

    /// Tag-dependent morphism axioms; assumes both endpoints are valid
    /// objects.
    pub fn validate(&self) -> Vec<MorphismViolation> {
        let mut out = Vec::new();
        let src = &self.source.order;
        let dst = &self.target.order;
        for i in 0..src.n() {
            for j in iter_mask(src.up_row(i)).filter(|&j| j < src.n()) {
                if !dst.leq(self.map[i], self.map[j]) {
                    out.push(MorphismViolation::NotMonotone {
                        lo: src.name(i).to_string(),
                        hi: src.name(j).to_string(),
                    });
                }
            }
        }
        if self.tag().has_filtration() {
            let base = self.source.base();
            for x in 0..base.n() {
                let ax = self.source.filtration_at(x);
                let bx = self.target.filtration_at(x);
                for a in iter_mask(ax).filter(|&a| a < src.n()) {
                    if bx >> self.map[a] & 1 == 0 {
                        out.push(MorphismViolation::FiltrationNotPreserved {
                            x: base.name(x).to_string(),
                            a: src.name(a).to_string(),
                        });
                    }
                }
            }
        }
        if self.tag().has_alpha() {
            let base = self.source.base();
            let alpha = self.source.alpha.as_ref().unwrap();
            let beta = self.target.alpha.as_ref().unwrap();
            for a in 0..src.n() {
                if !base.leq(alpha[a], beta[self.map[a]]) {
                    out.push(MorphismViolation::LaxInequality { a: src.name(a).to_string() });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn as_monotone(&self) -> crate::order::MonotoneMap {
        crate::order::MonotoneMap {
            source: self.source.order.clone(),
            target: self.target.order.clone(),
            map: self.map.clone(),
        }
    }

    /// Image of the map as a target mask.
    pub fn image_mask(&self) -> u64 {
        self.map.iter().fold(0u64, |m, &j| m | 1 << j)
    }

    /// Fiber over target index `b`, as a source mask.
    pub fn fiber(&self, b: usize) -> u64 {
        let mut m = 0u64;
        for (i, &j) in self.map.iter().enumerate() {
            if j == b {
                m |= 1 << i;
            }
        }
        m
    }
}

/// The chosen pullback of `p` and `f` (common target, same tag).
#[derive(Debug, Clone)]
pub struct Pullback {
    pub object: Obj,
    pub proj1: Morphism,
    pub proj2: Morphism,
    /// Pullback element `k` is the pair `(pairs[k].0, pairs[k].1)` of
    /// source indices of `p` and `f`.
    pub pairs: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl Pullback {
    pub fn pair_index(&self, e: usize, a: usize) -> Option<usize> {
        self.index.get(&(e, a)).copied()
    }
}

/// Compute the chosen pullback. Both morphisms must be valid, of the same
/// tag, with the same target. For `LaxX` the anchor of a pair is the largest
/// base element below both component anchors; a missing meet is an error.
pub fn pullback(p: &Morphism, f: &Morphism) -> Result<Pullback> {
    if p.tag() != f.tag() {
        return Err(Error::input("pullback of morphisms with different tags"));
    }
    if p.target != f.target {
        return Err(Error::input("pullback of morphisms with different targets"));
    }
    let e = &p.source;
    let a = &f.source;
    let mut pairs = Vec::new();
    for i in 0..e.carrier_len() {
        for j in 0..a.carrier_len() {
            if p.map[i] == f.map[j] {
                pairs.push((i, j));
            }
        }
    }
    if pairs.len() > crate::order::MAX_ELEMENTS {
        return Err(Error::CarrierTooLarge(pairs.len()));
    }
    let index: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &pr)| (pr, k)).collect();
    let names: Vec<String> = pairs
        .iter()
        .map(|&(i, j)| format!("({},{})", e.order.name(i), a.order.name(j)))
        .collect();
    let mut rel = Vec::new();
    for (k, &(i, j)) in pairs.iter().enumerate() {
        for (l, &(i2, j2)) in pairs.iter().enumerate() {
            if e.order.leq(i, i2) && a.order.leq(j, j2) {
                rel.push((k, l));
            }
        }
    }
    let order = Preorder::close_indices(names, &rel)?;

    let filt = if p.tag().has_filtration() {
        let base = e.base();
        let mut sets = Vec::with_capacity(base.n());
        for x in 0..base.n() {
            let ex = e.filtration_at(x);
            let ax = a.filtration_at(x);
            let mut m = 0u64;
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if ex >> i & 1 == 1 && ax >> j & 1 == 1 {
                    m |= 1 << k;
                }
            }
            sets.push(m);
        }
        Some(sets)
    } else {
        None
    };

    let alpha = if p.tag().has_alpha() {
        let base = e.base();
        let eps = e.alpha.as_ref().unwrap();
        let alf = a.alpha.as_ref().unwrap();
        let mut vals = Vec::with_capacity(pairs.len());
        for &(i, j) in &pairs {
            let lowers = base.downset(eps[i]) & base.downset(alf[j]);
            match base.largest_in(lowers) {
                Some(m) => vals.push(m),
                None => {
                    return Err(Error::input(format!(
                        "base not locally complete at ({}, {})",
                        base.name(eps[i]),
                        base.name(alf[j])
                    )))
                }
            }
        }
        Some(vals)
    } else {
        None
    };

    let object = Obj { tag: p.tag(), base: e.base.clone(), order, filt, alpha };
    let proj1 = Morphism::new(object.clone(), e.clone(), pairs.iter().map(|&(i, _)| i).collect())?;
    let proj2 = Morphism::new(object.clone(), a.clone(), pairs.iter().map(|&(_, j)| j).collect())?;
    Ok(Pullback { object, proj1, proj2, pairs, index })
}

/// The chosen coequalizer of a parallel pair `f, g : A ⇉ B`.
#[derive(Debug, Clone)]
pub struct Coequalizer {
    pub object: Obj,
    pub quotient: Morphism,
    /// Class index of every element of `B`.
    pub class_of: Vec<usize>,
}

/// Compute the chosen coequalizer: the quotient of the target by the
/// equivalence generated by `f(a) ∼ g(a)`, carrier listed by earliest
/// representative. The `LaxX` anchor of a class is the join of the anchors
/// mapping into its down-set; a missing join is an error (recoverable by
/// rerouting the question through `F1`).
pub fn coequalizer(f: &Morphism, g: &Morphism) -> Result<Coequalizer> {
    if f.tag() != g.tag() || f.source != g.source || f.target != g.target {
        return Err(Error::input("coequalizer needs a parallel pair"));
    }
    let b = &f.target;
    let n = b.carrier_len();
    // union-find over target indices
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for k in 0..f.map.len() {
        let (x, y) = (find(&mut parent, f.map[k]), find(&mut parent, g.map[k]));
        if x != y {
            // attach the larger representative under the smaller one
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            parent[hi] = lo;
        }
    }
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        let c = match reps.iter().position(|&q| q == r) {
            Some(c) => c,
            None => {
                reps.push(r);
                reps.len() - 1
            }
        };
        class_of[i] = c;
    }
    let names: Vec<String> = reps.iter().map(|&r| b.order.name(r).to_string()).collect();
    let mut rel = Vec::new();
    for i in 0..n {
        for j in iter_mask(b.order.up_row(i)).filter(|&j| j < n) {
            rel.push((class_of[i], class_of[j]));
        }
    }
    let order = Preorder::close_indices(names, &rel)?;

    let filt = if f.tag().has_filtration() {
        let base = b.base();
        let mut sets = Vec::with_capacity(base.n());
        for x in 0..base.n() {
            let mut m = 0u64;
            for i in iter_mask(b.filtration_at(x)).filter(|&i| i < n) {
                m |= 1 << class_of[i];
            }
            if f.tag().requires_upclosed() {
                m = order.up_closure(m);
            }
            sets.push(m);
        }
        Some(sets)
    } else {
        None
    };

    let alpha = if f.tag().has_alpha() {
        let base = b.base();
        let beta = b.alpha.as_ref().unwrap();
        let mut vals = Vec::with_capacity(reps.len());
        for c in 0..reps.len() {
            let mut anchors = 0u64;
            for i in 0..n {
                if order.leq(class_of[i], c) {
                    anchors |= 1 << beta[i];
                }
            }
            match base.join_global(anchors) {
                Some(j) => vals.push(j),
                None => {
                    return Err(Error::input(
                        "coequalizer does not exist in LaxX for this instance".to_string(),
                    ))
                }
            }
        }
        Some(vals)
    } else {
        None
    };

    let object = Obj { tag: f.tag(), base: b.base.clone(), order, filt, alpha };
    let quotient = Morphism::new(b.clone(), object.clone(), class_of.clone())?;
    Ok(Coequalizer { object, quotient, class_of })
}

/// The filtration functor: `(A, α) ↦ (A, (A_x)_x)` with
/// `A_x = {a | x ⩽ α(a)}`. Always lands in `OrdX`.
pub fn f1_object(l: &Obj) -> Result<Obj> {
    if l.tag != Tag::LaxX {
        return Err(Error::input("filtration functor applies to LaxX objects"));
    }
    let base = l.base().clone();
    let sets: Vec<u64> = (0..base.n()).map(|x| l.level(x)).collect();
    Obj::ordx(base, l.order.clone(), sets)
}

/// Transport of a `LaxX` morphism along [`f1_object`]; the underlying map
/// is unchanged.
pub fn f1_morphism(m: &Morphism) -> Result<Morphism> {
    Morphism::new(f1_object(&m.source)?, f1_object(&m.target)?, m.map.clone())
}

/// Witness that a filtered preorder is outside the image of the filtration
/// functor: the set `{x | a ∈ A_x}` for `elem` has no largest element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoLargestAnchor {
    pub elem: String,
    pub candidates: Vec<String>,
}

/// Partial inverse to [`f1_object`]: anchors each carrier element at the
/// largest base element whose level contains it (earliest in carrier order
/// inside the `∼`-class). Returns the offending element when some anchor
/// set has no largest element.
pub fn f1_inverse(a: &Obj) -> Result<std::result::Result<Obj, NoLargestAnchor>> {
    if a.tag != Tag::OrdX {
        return Err(Error::input("inverse filtration applies to OrdX objects"));
    }
    let base = a.base().clone();
    let mut alpha = Vec::with_capacity(a.carrier_len());
    for i in 0..a.carrier_len() {
        let mut anchors = 0u64;
        for x in 0..base.n() {
            if a.filtration_at(x) >> i & 1 == 1 {
                anchors |= 1 << x;
            }
        }
        match base.largest_in(anchors) {
            Some(x) => alpha.push(x),
            None => {
                return Ok(Err(NoLargestAnchor {
                    elem: a.order.name(i).to_string(),
                    candidates: base.subset_names(anchors),
                }))
            }
        }
    }
    Ok(Ok(Obj::laxx(base, a.order.clone(), alpha)?))
}

/// How to section the forgetful functor back from `Ord`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbedMode {
    /// Constant-full filtration `A_x = A`; lands in `C2`/`Prod`/`OrdX`.
    Full,
    /// Constant anchor at the bottom of the base; lands in `LaxX`.
    Bottom,
}

/// Embed a plain preorder into a structured category; a section of
/// [`Obj::forget`].
pub fn embed(a: &Obj, target: Tag, base: Arc<Preorder>, mode: EmbedMode) -> Result<Obj> {
    if a.tag != Tag::Ord {
        return Err(Error::input("embedding starts from an Ord object"));
    }
    match (mode, target) {
        (EmbedMode::Full, Tag::C2) => {
            let full = a.order.full_mask();
            Obj::c2(base.clone(), a.order.elements().to_vec(), vec![full; base.n()])
        }
        (EmbedMode::Full, Tag::Prod) => {
            let full = a.order.full_mask();
            Obj::prod(base.clone(), a.order.clone(), vec![full; base.n()])
        }
        (EmbedMode::Full, Tag::OrdX) => {
            let full = a.order.full_mask();
            Obj::ordx(base.clone(), a.order.clone(), vec![full; base.n()])
        }
        (EmbedMode::Bottom, Tag::LaxX) => {
            let bot = base.bottom().ok_or_else(|| {
                Error::precondition("bottom embedding needs a bottom element in the base")
            })?;
            Obj::laxx(base.clone(), a.order.clone(), vec![bot; a.carrier_len()])
        }
        _ => Err(Error::input(format!("no {mode:?} embedding into {target}"))),
    }
}
