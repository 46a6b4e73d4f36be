//! Finite preorders and monotone maps.
//!
//! A preorder is a finite carrier together with a reflexive transitive
//! relation `⩽`, stored as one bitmask row per element (`rows[i]` holds the
//! up-set of `i`). Carriers are capped at 64 elements so every subset is a
//! single `u64` mask; this covers desk-scale instances and keeps all the
//! subset algebra branch-free.
//!
//! Elements are opaque string tokens at the API boundary and plain indices
//! internally. `x ∼ y` abbreviates `x ⩽ y ∧ y ⩽ x`; `x < y` means
//! `x ⩽ y ∧ x ≁ y`. Every search in this module visits candidates in
//! carrier order, so results and witnesses are deterministic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::verdict::{CheckResult, Witness};

/// Largest supported carrier; subsets are single `u64` masks.
pub const MAX_ELEMENTS: usize = 64;

/// Iterate the element indices of a subset mask in ascending order.
pub fn iter_mask(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// Iterate the element indices of a subset mask in descending order.
pub fn iter_mask_desc(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).rev().filter(move |i| mask >> i & 1 == 1)
}

/// A finite preorder: named elements plus a reflexive transitive relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Preorder {
    elements: Vec<String>,
    /// `rows[i]` has bit `j` set iff `i ⩽ j`.
    rows: Vec<u64>,
}

/// A violation found by [`Preorder::diagnose`] on a raw relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum OrderViolation {
    UnknownName { name: String },
    MissingLoop { at: String },
    MissingComposite { x: String, y: String, z: String },
}

impl Preorder {
    /// Reflexive-transitive closure of `pairs` on `elements` (the smallest
    /// preorder containing them). Idempotent on already-closed input.
    pub fn close(elements: Vec<String>, pairs: &[(String, String)]) -> Result<Preorder> {
        let mut p = Preorder::discrete(elements)?;
        for (a, b) in pairs {
            let i = p.position(a)?;
            let j = p.position(b)?;
            p.rows[i] |= 1 << j;
        }
        p.transitive_close();
        Ok(p)
    }

    /// Closure over index pairs; used by builders that already resolved names.
    pub fn close_indices(elements: Vec<String>, pairs: &[(usize, usize)]) -> Result<Preorder> {
        let mut p = Preorder::discrete(elements)?;
        for &(i, j) in pairs {
            if i >= p.n() || j >= p.n() {
                return Err(Error::input(format!("pair index ({i},{j}) out of range")));
            }
            p.rows[i] |= 1 << j;
        }
        p.transitive_close();
        Ok(p)
    }

    /// The discrete preorder (only the forced loops).
    pub fn discrete(elements: Vec<String>) -> Result<Preorder> {
        if elements.len() > MAX_ELEMENTS {
            return Err(Error::CarrierTooLarge(elements.len()));
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(Error::DuplicateElement(e.clone()));
            }
        }
        let rows = (0..elements.len()).map(|i| 1u64 << i).collect();
        Ok(Preorder { elements, rows })
    }

    /// The chain `e0 ⩽ e1 ⩽ …` in the listed order.
    pub fn chain(elements: Vec<String>) -> Result<Preorder> {
        let pairs: Vec<(usize, usize)> =
            (1..elements.len()).map(|i| (i - 1, i)).collect();
        Preorder::close_indices(elements, &pairs)
    }

    /// Build from explicit rows that must already be closed.
    pub fn from_rows(elements: Vec<String>, rows: Vec<u64>) -> Result<Preorder> {
        let p = Preorder { elements, rows };
        if p.elements.len() > MAX_ELEMENTS {
            return Err(Error::CarrierTooLarge(p.elements.len()));
        }
        if p.rows.len() != p.elements.len() {
            return Err(Error::input("row count does not match carrier size"));
        }
        let mut closed = p.clone();
        closed.transitive_close();
        if closed.rows != p.rows {
            return Err(Error::input("relation is not reflexively/transitively closed"));
        }
        Ok(p)
    }

    fn transitive_close(&mut self) {
        let n = self.n();
        for i in 0..n {
            self.rows[i] |= 1 << i;
        }
        // Warshall on bitmask rows.
        for k in 0..n {
            for i in 0..n {
                if self.rows[i] >> k & 1 == 1 {
                    self.rows[i] |= self.rows[k];
                }
            }
        }
    }

    /// Report every reflexivity/transitivity gap of a raw relation without
    /// closing it. Empty output means `pairs` already form a preorder.
    pub fn diagnose(elements: &[String], pairs: &[(String, String)]) -> Vec<OrderViolation> {
        let mut out = Vec::new();
        let pos = |name: &String| elements.iter().position(|e| e == name);
        let n = elements.len();
        let mut rows = vec![0u64; n];
        for (a, b) in pairs {
            match (pos(a), pos(b)) {
                (Some(i), Some(j)) => rows[i] |= 1 << j,
                (None, _) => out.push(OrderViolation::UnknownName { name: a.clone() }),
                (_, None) => out.push(OrderViolation::UnknownName { name: b.clone() }),
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..n {
            if rows[i] >> i & 1 == 0 {
                out.push(OrderViolation::MissingLoop { at: elements[i].clone() });
            }
        }
        for x in 0..n {
            for y in iter_mask(rows[x]).filter(|&y| y < n) {
                for z in iter_mask(rows[y]).filter(|&z| z < n) {
                    if rows[x] >> z & 1 == 0 {
                        out.push(OrderViolation::MissingComposite {
                            x: elements[x].clone(),
                            y: elements[y].clone(),
                            z: elements[z].clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// `i ⩽ j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// `i ∼ j`: both `i ⩽ j` and `j ⩽ i`.
    pub fn equiv(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) && self.leq(j, i)
    }

    /// `i < j`: `i ⩽ j` and `i ≁ j`.
    pub fn strict(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) && !self.leq(j, i)
    }

    /// Up-set `{j | i ⩽ j}` as a mask.
    pub fn up_row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    /// All rows at once, for the raw enumeration paths.
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Down-set `{j | j ⩽ i}` as a mask; always contains `i`.
    pub fn downset(&self, i: usize) -> u64 {
        let mut m = 0u64;
        for j in 0..self.n() {
            if self.leq(j, i) {
                m |= 1 << j;
            }
        }
        m
    }

    pub fn full_mask(&self) -> u64 {
        if self.n() == 64 { u64::MAX } else { (1u64 << self.n()) - 1 }
    }

    /// All related pairs, in row-major carrier order. Includes the loops.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for i in 0..self.n() {
            for j in iter_mask(self.rows[i]).filter(|&j| j < self.n()) {
                out.push((self.elements[i].clone(), self.elements[j].clone()));
            }
        }
        out
    }

    /// Resolve a list of names to a subset mask.
    pub fn subset(&self, names: &[&str]) -> Result<u64> {
        let mut m = 0u64;
        for name in names {
            m |= 1 << self.position(name)?;
        }
        Ok(m)
    }

    pub fn subset_names(&self, mask: u64) -> Vec<String> {
        iter_mask(mask)
            .filter(|&i| i < self.n())
            .map(|i| self.elements[i].clone())
            .collect()
    }

    /// Does `s ∈ S, s ⩽ t` force `t ∈ S`? Witness is the first escaping pair.
    pub fn is_upclosed(&self, s: u64) -> CheckResult {
        for i in iter_mask(s).filter(|&i| i < self.n()) {
            let escape = self.rows[i] & !s & self.full_mask();
            if escape != 0 {
                let j = escape.trailing_zeros() as usize;
                return CheckResult::fail(Witness::Pair {
                    lo: self.elements[i].clone(),
                    hi: self.elements[j].clone(),
                });
            }
        }
        CheckResult::pass()
    }

    /// Smallest up-closed superset of `s`.
    pub fn up_closure(&self, s: u64) -> u64 {
        let mut m = s;
        for i in iter_mask(s).filter(|&i| i < self.n()) {
            m |= self.rows[i];
        }
        m & self.full_mask()
    }

    /// First element below everything, if any.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.n()).find(|&i| self.rows[i] == self.full_mask())
    }

    /// Least upper bound of `s` among `candidates`: a `j ∈ candidates` above
    /// every element of `s` and below every other such upper bound. First
    /// index of the `∼`-class wins.
    fn join_in(&self, s: u64, candidates: u64) -> Option<usize> {
        let uppers: Vec<usize> = iter_mask(candidates)
            .filter(|&j| j < self.n())
            .filter(|&j| iter_mask(s).filter(|&a| a < self.n()).all(|a| self.leq(a, j)))
            .collect();
        uppers
            .iter()
            .copied()
            .find(|&j| uppers.iter().all(|&u| self.leq(j, u)))
    }

    /// Greatest lower bound of `s` among `candidates`, dual to `join_in`.
    fn meet_in(&self, s: u64, candidates: u64) -> Option<usize> {
        let lowers: Vec<usize> = iter_mask(candidates)
            .filter(|&j| j < self.n())
            .filter(|&j| iter_mask(s).filter(|&a| a < self.n()).all(|a| self.leq(j, a)))
            .collect();
        lowers
            .iter()
            .copied()
            .find(|&j| lowers.iter().all(|&l| self.leq(l, j)))
    }

    /// Join of `s` inside the down-set of `bound`. `s` must lie in that
    /// down-set. Returns `None` when no join exists there.
    pub fn join_below(&self, s: u64, bound: usize) -> Result<Option<usize>> {
        let down = self.downset(bound);
        if s & !down != 0 {
            return Err(Error::precondition(format!(
                "subset is not contained in the down-set of `{}`",
                self.elements[bound]
            )));
        }
        Ok(self.join_in(s, down))
    }

    /// Meet of `s` inside the down-set of `bound`; dual contract to
    /// [`Preorder::join_below`].
    pub fn meet_below(&self, s: u64, bound: usize) -> Result<Option<usize>> {
        let down = self.downset(bound);
        if s & !down != 0 {
            return Err(Error::precondition(format!(
                "subset is not contained in the down-set of `{}`",
                self.elements[bound]
            )));
        }
        Ok(self.meet_in(s, down))
    }

    /// Global least upper bound over the whole carrier, if any.
    pub fn join_global(&self, s: u64) -> Option<usize> {
        self.join_in(s, self.full_mask())
    }

    /// Largest element *of* `s`: a member above every member. First index of
    /// the `∼`-class wins.
    pub fn largest_in(&self, s: u64) -> Option<usize> {
        iter_mask(s)
            .filter(|&i| i < self.n())
            .find(|&i| iter_mask(s).filter(|&j| j < self.n()).all(|j| self.leq(j, i)))
    }

    /// Least element of `s`, dual to [`Preorder::largest_in`].
    pub fn least_in(&self, s: u64) -> Option<usize> {
        iter_mask(s)
            .filter(|&i| i < self.n())
            .find(|&i| iter_mask(s).filter(|&j| j < self.n()).all(|j| self.leq(i, j)))
    }

    /// Per-element lattice facts used by the descent dispatcher: whether every
    /// down-set is a complete lattice up to `∼`, whether every down-set is a
    /// chain up to `∼`, and the global bottom.
    ///
    /// Finite criterion for local completeness: the down-set of `x` has a top
    /// (`x` itself), a least element, and all binary meets; all joins then
    /// exist automatically.
    pub fn lattice_report(&self) -> LatticeReport {
        let mut failures = Vec::new();
        let mut locally_complete = true;
        let mut downsets_are_chains = true;
        for x in 0..self.n() {
            let down = self.downset(x);
            if self.least_in(down).is_none() {
                locally_complete = false;
                failures.push(LatticeFailure::NoLeast { x: self.elements[x].clone() });
            }
            let members: Vec<usize> = iter_mask(down).filter(|&i| i < self.n()).collect();
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    if self.meet_in((1 << a) | (1 << b), down).is_none() {
                        locally_complete = false;
                        failures.push(LatticeFailure::MissingMeet {
                            x: self.elements[x].clone(),
                            a: self.elements[a].clone(),
                            b: self.elements[b].clone(),
                        });
                    }
                    if !self.leq(a, b) && !self.leq(b, a) {
                        downsets_are_chains = false;
                        failures.push(LatticeFailure::NotChain {
                            x: self.elements[x].clone(),
                            a: self.elements[a].clone(),
                            b: self.elements[b].clone(),
                        });
                    }
                }
            }
        }
        LatticeReport {
            locally_complete,
            downsets_are_chains,
            bottom: self.bottom().map(|i| self.elements[i].clone()),
            failures,
        }
    }
}

/// Lattice-shaped facts about a base preorder.
///
/// `failures` is empty in a given kind iff the corresponding boolean holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub locally_complete: bool,
    pub downsets_are_chains: bool,
    pub bottom: Option<String>,
    pub failures: Vec<LatticeFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum LatticeFailure {
    /// The down-set of `x` has no least element.
    NoLeast { x: String },
    /// `{a, b}` has no meet inside the down-set of `x`.
    MissingMeet { x: String, a: String, b: String },
    /// `a` and `b` are incomparable inside the down-set of `x`.
    NotChain { x: String, a: String, b: String },
}

/// Compose maps given as index vectors: `(snd ∘ fst)(i) = snd[fst[i]]`.
pub fn compose_maps(fst: &[usize], snd: &[usize]) -> Vec<usize> {
    fst.iter().map(|&i| snd[i]).collect()
}

/// A total map between preorder carriers, not necessarily monotone until
/// checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    pub source: Preorder,
    pub target: Preorder,
    pub map: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Preorder, target: Preorder, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.n() {
            return Err(Error::input("map is not total on the source carrier"));
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= target.n()) {
            return Err(Error::input(format!("map hits index {bad} outside the target")));
        }
        Ok(MonotoneMap { source, target, map })
    }

    pub fn by_names(
        source: Preorder,
        target: Preorder,
        assign: &[(&str, &str)],
    ) -> Result<Self> {
        let mut map = vec![usize::MAX; source.n()];
        for (a, b) in assign {
            map[source.position(a)?] = target.position(b)?;
        }
        if map.contains(&usize::MAX) {
            return Err(Error::input("map is not total on the source carrier"));
        }
        MonotoneMap::new(source, target, map)
    }

    pub fn identity(p: &Preorder) -> Self {
        MonotoneMap {
            source: p.clone(),
            target: p.clone(),
            map: (0..p.n()).collect(),
        }
    }

    /// Order preservation; witness is the first violating source pair.
    pub fn is_monotone(&self) -> CheckResult {
        for i in 0..self.source.n() {
            for j in iter_mask(self.source.up_row(i)).filter(|&j| j < self.source.n()) {
                if !self.target.leq(self.map[i], self.map[j]) {
                    return CheckResult::fail(Witness::Pair {
                        lo: self.source.name(i).to_string(),
                        hi: self.source.name(j).to_string(),
                    });
                }
            }
        }
        CheckResult::pass()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.n()];
        for &j in &self.map {
            hit[j] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Lift one ascending chain of the target through the map: returns the
    /// first (in lexicographic carrier order) ascending source chain mapping
    /// onto it, or `None`.
    pub fn lift_chain(&self, chain: &[usize]) -> Result<Option<Vec<usize>>> {
        for w in chain.windows(2) {
            if !self.target.leq(w[0], w[1]) {
                return Err(Error::precondition(format!(
                    "chain is not ascending at `{}` ⩽̸ `{}`",
                    self.target.name(w[0]),
                    self.target.name(w[1])
                )));
            }
        }
        let mut lift = Vec::with_capacity(chain.len());
        if self.search_lift(chain, &mut lift) {
            Ok(Some(lift))
        } else {
            Ok(None)
        }
    }

    fn search_lift(&self, chain: &[usize], lift: &mut Vec<usize>) -> bool {
        if lift.len() == chain.len() {
            return true;
        }
        let k = lift.len();
        for e in 0..self.source.n() {
            if self.map[e] != chain[k] {
                continue;
            }
            if let Some(&prev) = lift.last() {
                if !self.source.leq(prev, e) {
                    continue;
                }
            }
            lift.push(e);
            if self.search_lift(chain, lift) {
                return true;
            }
            lift.pop();
        }
        false
    }

    /// Do all ascending chains of length `n` in the target lift? Chains are
    /// scanned in lexicographic carrier order; the witness is the first one
    /// with no lift. `n = 1` is exactly surjectivity.
    pub fn lifts_all_chains(&self, n: usize) -> CheckResult {
        let mut chain = Vec::with_capacity(n);
        match self.search_failing_chain(n, &mut chain) {
            None => CheckResult::pass(),
            Some(chain) => CheckResult::fail(Witness::UnliftableChain {
                chain: chain.iter().map(|&b| self.target.name(b).to_string()).collect(),
            }),
        }
    }

    fn search_failing_chain(&self, n: usize, chain: &mut Vec<usize>) -> Option<Vec<usize>> {
        if chain.len() == n {
            let mut lift = Vec::with_capacity(n);
            if self.search_lift(chain, &mut lift) {
                return None;
            }
            return Some(chain.clone());
        }
        for b in 0..self.target.n() {
            if let Some(&prev) = chain.last() {
                if !self.target.leq(prev, b) {
                    continue;
                }
            }
            chain.push(b);
            let failing = self.search_failing_chain(n, chain);
            chain.pop();
            if failing.is_some() {
                return failing;
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn close_forces_reflexivity() {
        let p = Preorder::close(named(&["a"]), &[]).unwrap();
        assert!(p.leq(0, 0));
        assert_eq!(p.pairs(), vec![("a".to_string(), "a".to_string())]);
    }

    #[test]
    fn close_adds_transitive_composites() {
        let p = Preorder::close(
            named(&["a", "b", "c"]),
            &[("a".into(), "b".into()), ("b".into(), "c".into())],
        )
        .unwrap();
        assert!(p.leq(0, 2));
        assert!(p.leq(1, 1));
        assert!(!p.leq(2, 0));
    }

    #[test]
    fn close_generates_full_relation_on_a_cycle() {
        let p = Preorder::close(
            named(&["a", "b"]),
            &[("a".into(), "b".into()), ("b".into(), "a".into())],
        )
        .unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(p.leq(i, j));
            }
        }
        assert!(p.equiv(0, 1));
    }

    #[test]
    fn close_rejects_unknown_names() {
        let err = Preorder::close(named(&["a"]), &[("a".into(), "zz".into())]).unwrap_err();
        assert_eq!(err, Error::UnknownElement("zz".into()));
    }

    #[test]
    fn close_is_idempotent_and_monotone_in_pairs() {
        let pairs = vec![("a".to_string(), "b".to_string()), ("b".to_string(), "c".to_string())];
        let p = Preorder::close(named(&["a", "b", "c"]), &pairs).unwrap();
        let q = Preorder::close(p.elements().to_vec(), &p.pairs()).unwrap();
        assert_eq!(p, q);
        let fewer = Preorder::close(named(&["a", "b", "c"]), &pairs[..1]).unwrap();
        for i in 0..3 {
            assert_eq!(fewer.up_row(i) & !p.up_row(i), 0);
        }
    }

    #[test]
    fn diagnose_reports_every_gap() {
        let els = named(&["a", "b", "c"]);
        assert!(Preorder::diagnose(&els, &Preorder::chain(els.clone()).unwrap().pairs()).is_empty());

        let missing_loop: Vec<(String, String)> =
            vec![("a".into(), "b".into()), ("b".into(), "b".into()), ("c".into(), "c".into())];
        let d = Preorder::diagnose(&els, &missing_loop);
        assert!(d.contains(&OrderViolation::MissingLoop { at: "a".into() }));

        let loops: Vec<(String, String)> =
            els.iter().map(|e| (e.clone(), e.clone())).collect();
        let mut no_composite = loops;
        no_composite.push(("a".into(), "b".into()));
        no_composite.push(("b".into(), "c".into()));
        let d = Preorder::diagnose(&els, &no_composite);
        assert_eq!(
            d,
            vec![OrderViolation::MissingComposite { x: "a".into(), y: "b".into(), z: "c".into() }]
        );
    }

    #[test]
    fn equiv_and_strict() {
        let p = Preorder::chain(named(&["x0", "x1"])).unwrap();
        assert!(p.equiv(0, 0));
        assert!(!p.equiv(0, 1));
        assert!(p.strict(0, 1));
        assert!(!p.strict(1, 0));
        let c = Preorder::close(
            named(&["a", "b"]),
            &[("a".into(), "b".into()), ("b".into(), "a".into())],
        )
        .unwrap();
        assert!(c.equiv(0, 1));
        assert!(!c.strict(0, 1));
    }

    #[test]
    fn downsets() {
        let d = Preorder::discrete(named(&["x"])).unwrap();
        assert_eq!(d.downset(0), 0b1);
        let chain = Preorder::chain(named(&["x0", "x1"])).unwrap();
        assert_eq!(chain.downset(1), 0b11);
        let v = vee();
        assert_eq!(v.downset(2), 0b111);
    }

    /// xa ⩽ xt, xb ⩽ xt with xa, xb incomparable.
    fn vee() -> Preorder {
        Preorder::close(
            named(&["xa", "xb", "xt"]),
            &[("xa".into(), "xt".into()), ("xb".into(), "xt".into())],
        )
        .unwrap()
    }

    #[test]
    fn upclosed_and_closure() {
        let b = Preorder::chain(named(&["b1", "b0"])).unwrap(); // b1 ⩽ b0
        assert!(b.is_upclosed(0).passed);
        let r = b.is_upclosed(0b01); // {b1}
        assert!(!r.passed);
        assert_eq!(
            r.witness,
            Some(Witness::Pair { lo: "b1".into(), hi: "b0".into() })
        );
        assert_eq!(b.up_closure(0b01), 0b11);
        assert!(b.is_upclosed(0b10).passed); // {b0}
    }

    #[test]
    fn up_closure_laws_exhaustive_small() {
        // every preorder on ⩽ 4 of these carriers via random-ish seeds is
        // overkill here; the algebra is checked on all subsets of a mixed
        // fixture with a cycle, a chain and an isolated point.
        let p = Preorder::close(
            named(&["a", "b", "c", "d"]),
            &[("a".into(), "b".into()), ("b".into(), "a".into()), ("b".into(), "c".into())],
        )
        .unwrap();
        for s in 0..16u64 {
            let c = p.up_closure(s);
            assert_eq!(c & s, s);
            assert_eq!(p.up_closure(c), c);
            assert!(p.is_upclosed(c).passed);
            for t in 0..16u64 {
                if p.is_upclosed(s).passed && p.is_upclosed(t).passed {
                    assert!(p.is_upclosed(s & t).passed);
                }
            }
        }
    }

    #[test]
    fn join_below_basics() {
        let chain = Preorder::chain(named(&["x0", "x1"])).unwrap();
        assert_eq!(chain.join_below(0b10, 1).unwrap(), Some(1));
        assert_eq!(chain.join_below(0b11, 1).unwrap(), Some(1));
        let v = vee();
        assert_eq!(v.join_below(0b011, 2).unwrap(), Some(2)); // {xa,xb} -> xt
        assert_eq!(v.meet_below(0b011, 2).unwrap(), None);
        assert!(v.join_below(0b100, 0).is_err()); // xt outside downset(xa)
    }

    #[test]
    fn join_below_matches_exhaustive_scan() {
        // deterministic pool of base preorders on 5 elements
        let els = named(&["p", "q", "r", "s", "t"]);
        let pools: Vec<Vec<(String, String)>> = vec![
            vec![],
            vec![("p".into(), "q".into()), ("q".into(), "r".into()), ("s".into(), "r".into())],
            vec![("p".into(), "q".into()), ("p".into(), "r".into()), ("q".into(), "t".into()), ("r".into(), "t".into())],
            vec![("p".into(), "q".into()), ("q".into(), "p".into()), ("q".into(), "r".into())],
        ];
        for pairs in pools {
            let x = Preorder::close(els.clone(), &pairs).unwrap();
            for bound in 0..x.n() {
                let down = x.downset(bound);
                let mut sub = down;
                // iterate subsets of the downset
                loop {
                    let got = x.join_below(sub, bound).unwrap();
                    // oracle: scan all candidates in the downset
                    let uppers: Vec<usize> = iter_mask(down)
                        .filter(|&j| j < x.n())
                        .filter(|&j| iter_mask(sub).filter(|&a| a < x.n()).all(|a| x.leq(a, j)))
                        .collect();
                    let expect = uppers
                        .iter()
                        .copied()
                        .find(|&j| uppers.iter().all(|&u| x.leq(j, u)));
                    assert_eq!(got, expect);
                    if let Some(j) = got {
                        assert!(iter_mask(sub).filter(|&a| a < x.n()).all(|a| x.leq(a, j)));
                        for &u in &uppers {
                            assert!(x.leq(j, u));
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & down;
                }
            }
        }
    }

    #[test]
    fn lattice_report_fixtures() {
        let x1 = Preorder::discrete(named(&["*"])).unwrap();
        let r = x1.lattice_report();
        assert!(r.locally_complete && r.downsets_are_chains);
        assert_eq!(r.bottom.as_deref(), Some("*"));
        assert!(r.failures.is_empty());

        let x2 = Preorder::chain(named(&["x0", "x1"])).unwrap();
        let r = x2.lattice_report();
        assert!(r.locally_complete && r.downsets_are_chains);
        assert_eq!(r.bottom.as_deref(), Some("x0"));

        let r = vee().lattice_report();
        assert!(!r.locally_complete);
        assert!(!r.downsets_are_chains);
        assert_eq!(r.bottom, None);
        assert!(r.failures.iter().any(|f| matches!(f, LatticeFailure::MissingMeet { x, .. } if x == "xt")));
        assert!(r.failures.iter().any(|f| matches!(f, LatticeFailure::NotChain { x, .. } if x == "xt")));
    }

    #[test]
    fn monotone_checks() {
        let e = Preorder::chain(named(&["e1", "e0"])).unwrap();
        let b = Preorder::chain(named(&["b1", "b0"])).unwrap();
        let p = MonotoneMap::by_names(e.clone(), b.clone(), &[("e1", "b1"), ("e0", "b0")]).unwrap();
        assert!(p.is_monotone().passed);
        assert!(MonotoneMap::identity(&b).is_monotone().passed);

        let discrete = Preorder::discrete(named(&["u", "v"])).unwrap();
        let bad = MonotoneMap::by_names(e, discrete, &[("e1", "u"), ("e0", "v")]).unwrap();
        let r = bad.is_monotone();
        assert!(!r.passed);
        assert_eq!(r.witness, Some(Witness::Pair { lo: "e1".into(), hi: "e0".into() }));
    }

    #[test]
    fn lift_chain_identity_and_fixtures() {
        let b = Preorder::chain(named(&["b1", "b0"])).unwrap();
        let id = MonotoneMap::identity(&b);
        assert_eq!(id.lift_chain(&[0, 1]).unwrap(), Some(vec![0, 1]));

        // u, v discrete over the chain: the mixed chain has no lift
        let e = Preorder::discrete(named(&["u", "v"])).unwrap();
        let p = MonotoneMap::by_names(e, b.clone(), &[("u", "b1"), ("v", "b0")]).unwrap();
        assert_eq!(p.lift_chain(&[0, 1]).unwrap(), None);
        assert!(p.lift_chain(&[1, 0]).is_err()); // not ascending

        let e2 = Preorder::chain(named(&["e1", "e0"])).unwrap();
        let q = MonotoneMap::by_names(e2, b, &[("e1", "b1"), ("e0", "b0")]).unwrap();
        assert_eq!(q.lift_chain(&[0, 0, 1]).unwrap(), Some(vec![0, 0, 1]));
    }

    #[test]
    fn lifts_all_chains_witness_order() {
        let b = Preorder::chain(named(&["b1", "b0"])).unwrap();
        let e = Preorder::discrete(named(&["u", "v"])).unwrap();
        let p = MonotoneMap::by_names(e, b, &[("u", "b1"), ("v", "b0")]).unwrap();
        let r = p.lifts_all_chains(3);
        assert!(!r.passed);
        assert_eq!(
            r.witness,
            Some(Witness::UnliftableChain { chain: vec!["b1".into(), "b1".into(), "b0".into()] })
        );
    }

    #[test]
    fn length_one_lifting_is_surjectivity() {
        let b = Preorder::chain(named(&["b1", "b0"])).unwrap();
        let e = Preorder::discrete(named(&["u"])).unwrap();
        let p = MonotoneMap::by_names(e, b.clone(), &[("u", "b1")]).unwrap();
        assert!(!p.is_surjective());
        assert!(!p.lifts_all_chains(1).passed);
        let id = MonotoneMap::identity(&b);
        assert!(id.is_surjective());
        assert!(id.lifts_all_chains(1).passed);
    }
}
