//! Exhaustive enumeration of small structures, up to isomorphism.
//!
//! Everything here is deterministic: labeled structures are produced in a
//! fixed lexicographic order, isomorphism classes keep the representative
//! with the least canonical key, and hom-sets are listed in ascending map
//! order. Canonical keys are computed by brute force over all carrier
//! permutations, which is exactly right for the carrier sizes this crate
//! enumerates (⩽ 5).

use std::collections::HashSet;
use std::sync::{Arc, Mutex, OnceLock};

use crate::cat::{Morphism, Obj, Tag};
use crate::error::{Error, Result};
use crate::order::{iter_mask, Preorder};

/// Work-unit meter for the oracle's combinatorial sweeps. Exhaustion is
/// reported, never silently truncated.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    pub fn unlimited() -> Budget {
        Budget { limit: u64::MAX, used: 0 }
    }

    /// Record `units` of work; false once the limit is crossed.
    pub fn spend(&mut self, units: u64) -> bool {
        self.used = self.used.saturating_add(units);
        self.used <= self.limit
    }

    pub fn exhausted(&self) -> bool {
        self.used > self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

/// All permutations of `0..n`, lexicographically.
pub fn permutations(n: usize) -> Arc<Vec<Vec<usize>>> {
    static CACHE: OnceLock<Mutex<Vec<Option<Arc<Vec<Vec<usize>>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![None; 9]));
    assert!(n <= 8, "permutation table capped at 8 elements");
    let mut guard = cache.lock().unwrap();
    if let Some(p) = &guard[n] {
        return p.clone();
    }
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    // `out` holds value-permutations; normalize to lexicographic order
    out.sort();
    let arc = Arc::new(out);
    guard[n] = Some(arc.clone());
    arc
}

/// All reflexive-transitive relations on `n` labeled elements, each as row
/// masks, in ascending row order. Cached; sizes 0..=5.
pub fn preorders(n: usize) -> Arc<Vec<Vec<u64>>> {
    static CACHE: OnceLock<Mutex<Vec<Option<Arc<Vec<Vec<u64>>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![None; 6]));
    assert!(n <= 5, "labeled preorder enumeration capped at 5 elements");
    {
        let guard = cache.lock().unwrap();
        if let Some(p) = &guard[n] {
            return p.clone();
        }
    }
    let offdiag: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for choice in 0..(1u64 << offdiag.len()) {
        let mut rows: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for (k, &(i, j)) in offdiag.iter().enumerate() {
            if choice >> k & 1 == 1 {
                rows[i] |= 1 << j;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if rows[i] >> k & 1 == 1 {
                    rows[i] |= rows[k];
                }
            }
        }
        seen.insert(rows);
    }
    let mut all: Vec<Vec<u64>> = seen.into_iter().collect();
    all.sort();
    let arc = Arc::new(all);
    cache.lock().unwrap()[n] = Some(arc.clone());
    arc
}

/// Subset masks of `0..n` that are up-closed for the given rows, ascending.
pub fn upclosed_masks(rows: &[u64], n: usize) -> Vec<u64> {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0..=full)
        .filter(|&s| iter_mask(s).all(|i| rows[i] & full & !s == 0))
        .collect()
}

/// All masks over `0..n`, ascending.
pub fn all_masks(n: usize) -> Vec<u64> {
    (0..(1u64 << n)).collect()
}

/// Antitone families over the base, one level per base element drawn from
/// `pool`, satisfying `x′ ⩽ x ⇒ sets[x] ⊆ sets[x′]`.
pub fn antitone_families(base: &Preorder, pool: &[u64]) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut sets: Vec<u64> = Vec::with_capacity(base.n());
    fn rec(base: &Preorder, pool: &[u64], sets: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let x = sets.len();
        if x == base.n() {
            out.push(sets.clone());
            return;
        }
        'next: for &s in pool {
            for x2 in 0..x {
                if base.leq(x2, x) && s & !sets[x2] != 0 {
                    continue 'next;
                }
                if base.leq(x, x2) && sets[x2] & !s != 0 {
                    continue 'next;
                }
            }
            sets.push(s);
            rec(base, pool, sets, out);
            sets.pop();
        }
    }
    rec(base, pool, &mut sets, &mut out);
    out
}

/// Structure of an object without names: order rows plus the tag-dependent
/// part. The unit of enumeration and canonicalization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    pub n: usize,
    pub rows: Vec<u64>,
    pub filt: Option<Vec<u64>>,
    pub alpha: Option<Vec<usize>>,
}

fn permute_mask(m: u64, perm: &[usize]) -> u64 {
    let mut out = 0u64;
    for i in iter_mask(m).filter(|&i| i < perm.len()) {
        out |= 1 << perm[i];
    }
    out
}

impl Shape {
    pub fn of_obj(obj: &Obj) -> Shape {
        Shape {
            n: obj.carrier_len(),
            rows: (0..obj.carrier_len()).map(|i| obj.order.up_row(i)).collect(),
            filt: obj.filt.clone(),
            alpha: obj.alpha.clone(),
        }
    }

    pub fn to_obj(&self, tag: Tag, base: Option<Arc<Preorder>>, prefix: &str) -> Result<Obj> {
        let names: Vec<String> = (0..self.n).map(|i| format!("{prefix}{i}")).collect();
        let order = Preorder::from_rows(names, self.rows.clone())?;
        match tag {
            Tag::Ord => Ok(Obj::ord(order)),
            Tag::C2 => Obj::c2(
                base.ok_or_else(|| Error::input("tag needs a base"))?,
                order.elements().to_vec(),
                self.filt.clone().unwrap(),
            ),
            Tag::Prod => Obj::prod(
                base.ok_or_else(|| Error::input("tag needs a base"))?,
                order,
                self.filt.clone().unwrap(),
            ),
            Tag::OrdX => Obj::ordx(
                base.ok_or_else(|| Error::input("tag needs a base"))?,
                order,
                self.filt.clone().unwrap(),
            ),
            Tag::LaxX => Obj::laxx(
                base.ok_or_else(|| Error::input("tag needs a base"))?,
                order,
                self.alpha.clone().unwrap(),
            ),
        }
    }

    /// Relabel by `perm` (`perm[i]` is the new index of old `i`) and encode
    /// as a comparable word vector.
    pub fn encode(&self, perm: &[usize]) -> Vec<u64> {
        let mut inv = vec![0usize; self.n];
        for (i, &pi) in perm.iter().enumerate() {
            inv[pi] = i;
        }
        let mut out = Vec::with_capacity(2 + 2 * self.n);
        out.push(self.n as u64);
        for i_new in 0..self.n {
            out.push(permute_mask(self.rows[inv[i_new]], perm));
        }
        if let Some(filt) = &self.filt {
            out.push(u64::MAX); // section marker
            for &s in filt {
                out.push(permute_mask(s, perm));
            }
        }
        if let Some(alpha) = &self.alpha {
            out.push(u64::MAX - 1);
            for i_new in 0..self.n {
                out.push(alpha[inv[i_new]] as u64);
            }
        }
        out
    }

    pub fn canonical_key(&self) -> Vec<u64> {
        permutations(self.n)
            .iter()
            .map(|p| self.encode(p))
            .min()
            .unwrap_or_else(|| self.encode(&[]))
    }

    pub fn is_canonical(&self) -> bool {
        let id: Vec<usize> = (0..self.n).collect();
        self.encode(&id) == self.canonical_key()
    }

    /// Structure-preserving self-relabelings.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let id: Vec<usize> = (0..self.n).collect();
        let here = self.encode(&id);
        permutations(self.n)
            .iter()
            .filter(|p| self.encode(p) == here)
            .cloned()
            .collect()
    }
}

/// All labeled shapes of the given tag and carrier size, deterministic order.
pub fn shapes(tag: Tag, base: Option<&Preorder>, n: usize) -> Vec<Shape> {
    let orders: Vec<Vec<u64>> = if tag.requires_discrete() {
        vec![(0..n).map(|i| 1u64 << i).collect()]
    } else {
        preorders(n).as_ref().clone()
    };
    let mut out = Vec::new();
    for rows in orders {
        match tag {
            Tag::Ord => out.push(Shape { n, rows, filt: None, alpha: None }),
            Tag::C2 | Tag::Prod | Tag::OrdX => {
                let base = base.expect("tag needs a base");
                let pool = if tag.requires_upclosed() {
                    upclosed_masks(&rows, n)
                } else {
                    all_masks(n)
                };
                for filt in antitone_families(base, &pool) {
                    out.push(Shape { n, rows: rows.clone(), filt: Some(filt), alpha: None });
                }
            }
            Tag::LaxX => {
                let base = base.expect("tag needs a base");
                for alpha in monotone_maps_raw(&rows, n, base) {
                    out.push(Shape { n, rows: rows.clone(), filt: None, alpha: Some(alpha) });
                }
            }
        }
    }
    out
}

/// Canonical representatives of the labeled shapes, sorted by key.
pub fn shape_classes(tag: Tag, base: Option<&Preorder>, n: usize) -> Vec<Shape> {
    let mut reps: Vec<(Vec<u64>, Shape)> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for s in shapes(tag, base, n) {
        let key = s.canonical_key();
        if seen.insert(key.clone()) {
            reps.push((key, s));
        }
    }
    reps.sort();
    reps.into_iter().map(|(_, s)| s).collect()
}

/// Monotone maps from raw rows into a preorder, ascending.
fn monotone_maps_raw(rows: &[u64], n: usize, dst: &Preorder) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(n);
    fn rec(
        rows: &[u64],
        n: usize,
        dst: &Preorder,
        map: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = map.len();
        if i == n {
            out.push(map.clone());
            return;
        }
        'next: for t in 0..dst.n() {
            for j in 0..i {
                if rows[j] >> i & 1 == 1 && !dst.leq(map[j], t) {
                    continue 'next;
                }
                if rows[i] >> j & 1 == 1 && !dst.leq(t, map[j]) {
                    continue 'next;
                }
            }
            map.push(t);
            rec(rows, n, dst, map, out);
            map.pop();
        }
    }
    rec(rows, n, dst, &mut map, &mut out);
    out
}

/// All valid morphism maps `src → dst` in the shared tag, ascending map
/// order. Optionally constrained to commute with anchors into a common
/// object (`dst_anchor[map[i]] = src_anchor[i]`).
pub fn hom_maps(src: &Obj, dst: &Obj) -> Vec<Vec<usize>> {
    hom_maps_constrained(src, dst, None)
}

pub fn hom_maps_over(
    src: &Obj,
    dst: &Obj,
    src_anchor: &[usize],
    dst_anchor: &[usize],
) -> Vec<Vec<usize>> {
    hom_maps_constrained(src, dst, Some((src_anchor, dst_anchor)))
}

fn hom_maps_constrained(
    src: &Obj,
    dst: &Obj,
    over: Option<(&[usize], &[usize])>,
) -> Vec<Vec<usize>> {
    debug_assert_eq!(src.tag, dst.tag);
    maps_raw(
        src.tag,
        src.base.as_deref(),
        View::of_obj(src),
        View::of_obj(dst),
        over,
    )
}

/// Borrowed structure view shared by the `Obj` and `Shape` map enumerators.
#[derive(Clone, Copy)]
pub struct View<'a> {
    pub n: usize,
    pub rows: &'a [u64],
    pub filt: Option<&'a [u64]>,
    pub alpha: Option<&'a [usize]>,
}

impl<'a> View<'a> {
    pub fn of_obj(o: &'a Obj) -> View<'a> {
        View {
            n: o.carrier_len(),
            rows: o.order.rows(),
            filt: o.filt.as_deref(),
            alpha: o.alpha.as_deref(),
        }
    }

    pub fn of_shape(s: &'a Shape) -> View<'a> {
        View { n: s.n, rows: &s.rows, filt: s.filt.as_deref(), alpha: s.alpha.as_deref() }
    }

    fn leq(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }
}

/// Valid morphism maps between raw structures, ascending; the workhorse
/// behind [`hom_maps`] and the anchored enumerations.
pub fn maps_raw(
    tag: Tag,
    base: Option<&Preorder>,
    src: View<'_>,
    dst: View<'_>,
    over: Option<(&[usize], &[usize])>,
) -> Vec<Vec<usize>> {
    let n = src.n;
    let m = dst.n;
    // per-element admissible targets from filtration/anchor/over constraints
    let mut allowed: Vec<u64> = vec![if m == 64 { u64::MAX } else { (1u64 << m) - 1 }; n];
    if tag.has_filtration() {
        let base = base.expect("tag needs a base");
        let sf = src.filt.unwrap();
        let df = dst.filt.unwrap();
        for x in 0..base.n() {
            for i in iter_mask(sf[x]).filter(|&i| i < n) {
                allowed[i] &= df[x];
            }
        }
    }
    if tag.has_alpha() {
        let base = base.expect("tag needs a base");
        let sa = src.alpha.unwrap();
        let da = dst.alpha.unwrap();
        for i in 0..n {
            let mut mask = 0u64;
            for (t, &dt) in da.iter().enumerate() {
                if base.leq(sa[i], dt) {
                    mask |= 1 << t;
                }
            }
            allowed[i] &= mask;
        }
    }
    if let Some((sa, da)) = over {
        for i in 0..n {
            let mut mask = 0u64;
            for (t, &dt) in da.iter().enumerate() {
                if dt == sa[i] {
                    mask |= 1 << t;
                }
            }
            allowed[i] &= mask;
        }
    }
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(n);
    fn rec(
        src: &View<'_>,
        dst: &View<'_>,
        allowed: &[u64],
        map: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = map.len();
        if i == allowed.len() {
            out.push(map.clone());
            return;
        }
        'next: for t in iter_mask(allowed[i]).filter(|&t| t < dst.n) {
            for j in 0..i {
                if src.leq(j, i) && !dst.leq(map[j], t) {
                    continue 'next;
                }
                if src.leq(i, j) && !dst.leq(t, map[j]) {
                    continue 'next;
                }
            }
            map.push(t);
            rec(src, dst, allowed, map, out);
            map.pop();
        }
    }
    rec(&src, &dst, &allowed, &mut map, &mut out);
    out
}

/// An object anchored into a fixed target, up to relabeling of the source
/// only; `autos` are the relabelings fixing both structure and anchor.
#[derive(Debug, Clone)]
pub struct AnchoredClass {
    pub obj: Obj,
    pub anchor: Vec<usize>,
    pub autos: Vec<Vec<usize>>,
}

fn encode_anchored(shape: &Shape, anchor: &[usize], perm: &[usize]) -> Vec<u64> {
    let mut out = shape.encode(perm);
    out.push(u64::MAX - 2);
    let mut inv = vec![0usize; shape.n];
    for (i, &pi) in perm.iter().enumerate() {
        inv[pi] = i;
    }
    for i_new in 0..shape.n {
        out.push(anchor[inv[i_new]] as u64);
    }
    out
}

/// All `(A, f : A → target)` with `|A| = n`, up to isomorphism over the
/// fixed target, sorted by canonical key.
pub fn anchored_classes(
    tag: Tag,
    base: Option<&Arc<Preorder>>,
    n: usize,
    target: &Obj,
    prefix: &str,
) -> Result<Vec<AnchoredClass>> {
    let perms = permutations(n);
    let mut reps: Vec<(Vec<u64>, Shape, Vec<usize>)> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let tview = View::of_obj(target);
    for shape in shapes(tag, base.map(|b| b.as_ref()), n) {
        let sview = View::of_shape(&shape);
        for anchor in maps_raw(tag, base.map(|b| b.as_ref()), sview, tview, None) {
            let key = perms
                .iter()
                .map(|p| encode_anchored(&shape, &anchor, p))
                .min()
                .unwrap();
            if seen.insert(key.clone()) {
                reps.push((key, shape.clone(), anchor));
            }
        }
    }
    reps.sort();
    reps.into_iter()
        .map(|(_, shape, anchor)| {
            let id_key = encode_anchored(&shape, &anchor, &(0..n).collect::<Vec<_>>());
            let autos = perms
                .iter()
                .filter(|p| encode_anchored(&shape, &anchor, p) == id_key)
                .cloned()
                .collect();
            let obj = shape.to_obj(tag, base.cloned(), prefix)?;
            Ok(AnchoredClass { obj, anchor, autos })
        })
        .collect()
}

/// An isomorphism-class representative with its automorphism group.
#[derive(Debug, Clone)]
pub struct ObjClass {
    pub obj: Obj,
    pub autos: Vec<Vec<usize>>,
}

/// Object classes of one carrier size, canonical representatives.
pub fn object_classes(
    tag: Tag,
    base: Option<&Arc<Preorder>>,
    n: usize,
    prefix: &str,
) -> Result<Vec<ObjClass>> {
    shape_classes(tag, base.map(|b| b.as_ref()), n)
        .into_iter()
        .map(|s| {
            let autos = s.automorphisms();
            let obj = s.to_obj(tag, base.cloned(), prefix)?;
            Ok(ObjClass { obj, autos })
        })
        .collect()
}

/// Is `map` the lexicographic minimum of its orbit under source and target
/// automorphisms (`map′[σ(i)] = τ(map[i])`)?
pub fn map_orbit_min(map: &[usize], src_autos: &[Vec<usize>], dst_autos: &[Vec<usize>]) -> bool {
    let mut permuted = vec![0usize; map.len()];
    for sigma in src_autos {
        for tau in dst_autos {
            for (i, &mi) in map.iter().enumerate() {
                permuted[sigma[i]] = tau[mi];
            }
            if permuted.as_slice() < map {
                return false;
            }
        }
    }
    true
}

/// Every morphism between objects of the tag with source carrier
/// `⩽ max_src` and target carrier `⩽ max_dst`, up to isomorphism of the
/// whole diagram. Sources are named `e…`, targets `b…`.
pub fn morphism_instances(
    tag: Tag,
    base: Option<&Arc<Preorder>>,
    max_src: usize,
    max_dst: usize,
) -> Result<Vec<Morphism>> {
    let mut out = Vec::new();
    for nb in 0..=max_dst {
        for bclass in object_classes(tag, base, nb, "b")? {
            for ne in 0..=max_src {
                for eclass in object_classes(tag, base, ne, "e")? {
                    for map in hom_maps(&eclass.obj, &bclass.obj) {
                        if map_orbit_min(&map, &eclass.autos, &bclass.autos) {
                            out.push(Morphism::new(
                                eclass.obj.clone(),
                                bclass.obj.clone(),
                                map,
                            )?);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Relabel a whole object along `perm` (names move with their elements).
pub fn permute_obj(obj: &Obj, perm: &[usize]) -> Obj {
    let n = obj.carrier_len();
    let mut inv = vec![0usize; n];
    for (i, &pi) in perm.iter().enumerate() {
        inv[pi] = i;
    }
    let names: Vec<String> = (0..n).map(|i| obj.order.name(inv[i]).to_string()).collect();
    let rows: Vec<u64> =
        (0..n).map(|i| permute_mask(obj.order.up_row(inv[i]), perm)).collect();
    let order = Preorder::from_rows(names, rows).expect("permuted order stays closed");
    Obj {
        tag: obj.tag,
        base: obj.base.clone(),
        order,
        filt: obj
            .filt
            .as_ref()
            .map(|f| f.iter().map(|&s| permute_mask(s, perm)).collect()),
        alpha: obj
            .alpha
            .as_ref()
            .map(|a| (0..n).map(|i| a[inv[i]]).collect()),
    }
}

/// Relabel a morphism along permutations of its source and target.
pub fn permute_morphism(m: &Morphism, src_perm: &[usize], dst_perm: &[usize]) -> Morphism {
    let source = permute_obj(&m.source, src_perm);
    let target = permute_obj(&m.target, dst_perm);
    let mut map = vec![0usize; m.map.len()];
    for (i, &mi) in m.map.iter().enumerate() {
        map[src_perm[i]] = dst_perm[mi];
    }
    Morphism::new(source, target, map).expect("permuted morphism stays well-formed")
}

/// Iterator over all maps `0..from → 0..to` in lexicographic order.
pub struct AllMaps {
    from: usize,
    to: usize,
    next: Option<Vec<usize>>,
}

pub fn all_maps(from: usize, to: usize) -> AllMaps {
    let next = if to == 0 && from > 0 { None } else { Some(vec![0; from]) };
    AllMaps { from, to, next }
}

impl Iterator for AllMaps {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for i in (0..self.from).rev() {
            if succ[i] + 1 < self.to {
                succ[i] += 1;
                self.next = Some(succ);
                return Some(current);
            }
            succ[i] = 0;
        }
        self.next = None;
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn labeled_preorder_counts() {
        assert_eq!(preorders(0).len(), 1);
        assert_eq!(preorders(1).len(), 1);
        assert_eq!(preorders(2).len(), 4);
        assert_eq!(preorders(3).len(), 29);
        assert_eq!(preorders(4).len(), 355);
    }

    #[test]
    fn preorder_class_counts() {
        // unlabeled preorders: 1, 1, 3, 9, 33
        for (n, want) in [(0, 1), (1, 1), (2, 3), (3, 9), (4, 33)] {
            assert_eq!(shape_classes(Tag::Ord, None, n).len(), want, "n = {n}");
        }
    }

    #[test]
    fn upclosed_masks_on_chain() {
        let chain = Preorder::chain(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let rows: Vec<u64> = (0..3).map(|i| chain.up_row(i)).collect();
        assert_eq!(upclosed_masks(&rows, 3), vec![0b000, 0b100, 0b110, 0b111]);
    }

    #[test]
    fn antitone_families_respect_base_order() {
        let base = fixtures::x2();
        let fams = antitone_families(&base, &all_masks(1));
        // levels over x0 ⩽ x1 must be nested: sets[1] ⊆ sets[0]
        assert_eq!(fams, vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn canonical_key_is_permutation_invariant() {
        let base = fixtures::x2();
        for shape in shapes(Tag::OrdX, Some(&base), 3) {
            let key = shape.canonical_key();
            for perm in permutations(3).iter() {
                let obj = shape.to_obj(Tag::OrdX, Some(base.clone()), "v").unwrap();
                let relabeled = Shape::of_obj(&permute_obj(&obj, perm));
                assert_eq!(relabeled.canonical_key(), key);
            }
        }
    }

    #[test]
    fn hom_maps_are_exactly_the_valid_maps() {
        let f = fixtures::fix_f();
        let g = fixtures::fix_g();
        for (src, dst) in [(&f.source, &f.target), (&g.source, &g.target)] {
            let by_dfs = hom_maps(src, dst);
            let by_filter: Vec<Vec<usize>> = all_maps(src.carrier_len(), dst.carrier_len())
                .filter(|m| {
                    Morphism::new(src.clone(), dst.clone(), m.clone())
                        .map(|mm| mm.is_valid())
                        .unwrap_or(false)
                })
                .collect();
            assert_eq!(by_dfs, by_filter);
        }
    }

    #[test]
    fn morphism_instance_corpus_dedups() {
        let base = fixtures::x1();
        let all = morphism_instances(Tag::OrdX, Some(&base), 2, 2).unwrap();
        // every listed instance is canonical for its own orbit
        for m in &all {
            let e = Shape::of_obj(&m.source);
            let b = Shape::of_obj(&m.target);
            assert!(e.is_canonical());
            assert!(b.is_canonical());
            assert!(map_orbit_min(&m.map, &e.automorphisms(), &b.automorphisms()));
        }
        // relabeling any instance never yields a *different* listed instance
        let keys: HashSet<Vec<Vec<u64>>> = all
            .iter()
            .map(|m| {
                vec![
                    Shape::of_obj(&m.source).canonical_key(),
                    Shape::of_obj(&m.target).canonical_key(),
                    m.map.iter().map(|&v| v as u64).collect(),
                ]
            })
            .collect();
        assert_eq!(keys.len(), all.len());
    }

    #[test]
    fn all_maps_counts() {
        assert_eq!(all_maps(0, 0).count(), 1);
        assert_eq!(all_maps(2, 3).count(), 9);
        assert_eq!(all_maps(1, 0).count(), 0);
    }
}
