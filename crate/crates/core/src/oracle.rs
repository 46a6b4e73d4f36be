//! Independent ground truth at bounded size: the descent monad
//! `T = p* ∘ p_!` on objects over the source, enumeration of its algebras
//! up to isomorphism, and the two probes of the comparison functor
//! `K : (things over B) → (algebras over E)`.
//!
//! Nothing in this module consults the chain-lifting characterizations;
//! verdicts here come from raw monadicity. A refutation — a hom-set
//! mismatch under `K`, or an algebra whose canonical coequalizer does not
//! reconstruct it — is a machine-checkable proof of non-effectiveness. The
//! absence of refutations below a size bound is evidence only, and is
//! reported as bounds, never as "effective".
//!
//! `LaxX` questions are transported along the filtration functor `F1`
//! (fully faithful; preserves the relevant pullbacks over a locally
//! complete base) and answered in `OrdX`.

use std::collections::BTreeMap;

use crate::cat::{f1_morphism, pullback, Morphism, Obj, Tag};
use crate::enumerate::{anchored_classes, hom_maps_over, Budget, Shape};
use crate::error::{Error, Result};
use crate::order::iter_mask;

/// An object anchored over a fixed end of `p` (the source for algebras,
/// the target for the comparison probe).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverObj {
    pub obj: Obj,
    pub anchor: Vec<usize>,
}

impl OverObj {
    pub fn new(obj: Obj, anchor: Vec<usize>) -> OverObj {
        OverObj { obj, anchor }
    }

    pub fn identity(of: &Obj) -> OverObj {
        OverObj { obj: of.clone(), anchor: (0..of.carrier_len()).collect() }
    }

    /// The anchor as a checked morphism into `target`.
    pub fn anchor_morphism(&self, target: &Obj) -> Result<Morphism> {
        Morphism::new(self.obj.clone(), target.clone(), self.anchor.clone())
    }
}

/// One application of the descent monad: `T(D, d)` is the pullback of `p`
/// and `p ∘ d`, anchored back at the source by the first projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadApp {
    /// The carrier object of `T(D)`.
    pub object: Obj,
    /// First projection `T(D) → E`.
    pub anchor: Vec<usize>,
    /// Element `k` of `T(D)` is the pair `(pairs[k].0, pairs[k].1)` of a
    /// source index and a `D` index with equal images under `p` and `p∘d`.
    pub pairs: Vec<(usize, usize)>,
    /// Unit `η_D : D → T(D)`, `d0 ↦ (d(d0), d0)`.
    pub unit: Vec<usize>,
    index: BTreeMap<(usize, usize), usize>,
}

impl MonadApp {
    pub fn pair_index(&self, e: usize, d: usize) -> Option<usize> {
        self.index.get(&(e, d)).copied()
    }
}

/// Apply the descent monad of `p` to an object over its source.
pub fn monad_apply(p: &Morphism, over: &OverObj) -> Result<MonadApp> {
    let d_mor = over.anchor_morphism(&p.source)?;
    let pd = d_mor.compose(p)?;
    let pb = pullback(p, &pd)?;
    let pairs = pb.pairs.clone();
    let index: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &pr)| (pr, k)).collect();
    let unit: Vec<usize> = (0..over.obj.carrier_len())
        .map(|d0| {
            *index
                .get(&(over.anchor[d0], d0))
                .expect("unit pair is in the monad carrier")
        })
        .collect();
    Ok(MonadApp { object: pb.object, anchor: pb.proj1.map, pairs, unit, index })
}

/// The multiplication `μ_D : T(T(D)) → T(D)`, together with its carrier.
pub fn multiplication(p: &Morphism, tapp: &MonadApp) -> Result<(MonadApp, Vec<usize>)> {
    let t_over = OverObj::new(tapp.object.clone(), tapp.anchor.clone());
    let ttapp = monad_apply(p, &t_over)?;
    let mu = ttapp
        .pairs
        .iter()
        .map(|&(e, t)| {
            let (_, d0) = tapp.pairs[t];
            tapp.pair_index(e, d0).expect("multiplication lands in the monad carrier")
        })
        .collect();
    Ok((ttapp, mu))
}

/// An algebra for the descent monad: an object over the source with an
/// action satisfying the unit and associativity laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    pub over: OverObj,
    pub tapp: MonadApp,
    /// Action `T(D) → D` by carrier index.
    pub act: Vec<usize>,
}

/// A broken algebra law, with the offending indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraViolation {
    AnchorNotMorphism { detail: String },
    ActionNotMorphism { detail: String },
    ActionNotOverSource { t: usize },
    UnitLaw { d0: usize },
    AssocLaw { e: usize, t: usize },
}

impl Algebra {
    pub fn carrier_len(&self) -> usize {
        self.over.obj.carrier_len()
    }

    /// Re-check everything from scratch: the anchor and action are
    /// morphisms, the action lives over the source, and both laws hold.
    pub fn validate(&self, p: &Morphism) -> Result<Vec<AlgebraViolation>> {
        let mut out = Vec::new();
        let d_mor = self.over.anchor_morphism(&p.source)?;
        if !d_mor.is_valid() {
            out.push(AlgebraViolation::AnchorNotMorphism {
                detail: format!("{:?}", d_mor.validate()),
            });
            return Ok(out);
        }
        let tapp = monad_apply(p, &self.over)?;
        if tapp.pairs != self.tapp.pairs || tapp.object != self.tapp.object {
            return Err(Error::input("algebra carries a stale monad application"));
        }
        if self.act.len() != tapp.pairs.len() {
            return Err(Error::input("action is not total on the monad carrier"));
        }
        let act_mor =
            Morphism::new(tapp.object.clone(), self.over.obj.clone(), self.act.clone())?;
        if !act_mor.is_valid() {
            out.push(AlgebraViolation::ActionNotMorphism {
                detail: format!("{:?}", act_mor.validate()),
            });
        }
        for (t, &(e, _)) in tapp.pairs.iter().enumerate() {
            if self.over.anchor[self.act[t]] != e {
                out.push(AlgebraViolation::ActionNotOverSource { t });
            }
        }
        for d0 in 0..self.over.obj.carrier_len() {
            if self.act[tapp.unit[d0]] != d0 {
                out.push(AlgebraViolation::UnitLaw { d0 });
            }
        }
        for (t, &(_, d0)) in tapp.pairs.iter().enumerate() {
            // act(e, act(t)) = act(e, d0) whenever p(e) matches
            for e in 0..p.source.carrier_len() {
                if let Some(t_outer) = tapp.pair_index(e, self.act[t]) {
                    let t_direct =
                        tapp.pair_index(e, d0).expect("parallel pair is in the carrier");
                    if self.act[t_outer] != self.act[t_direct] {
                        out.push(AlgebraViolation::AssocLaw { e, t });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// A comparison algebra `K(A)` with the pullback pairs that define its
/// carrier, kept for transporting hom-sets.
#[derive(Debug, Clone)]
pub struct KAlgebra {
    pub algebra: Algebra,
    /// Carrier element `k` is the pair `(e, a)`.
    pub pairs: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl KAlgebra {
    pub fn pair_index(&self, e: usize, a: usize) -> Option<usize> {
        self.index.get(&(e, a)).copied()
    }

    /// Transport a morphism over the target along `K`:
    /// `(e, a) ↦ (e, t(a))`.
    pub fn transport_map(&self, other: &KAlgebra, t: &[usize]) -> Vec<usize> {
        self.pairs
            .iter()
            .map(|&(e, a)| {
                other
                    .pair_index(e, t[a])
                    .expect("transported pair is in the comparison carrier")
            })
            .collect()
    }
}

/// The comparison functor on objects: pull an object over the target back
/// along `p` and act by replacing the first coordinate.
pub fn comparison(p: &Morphism, over_b: &OverObj) -> Result<KAlgebra> {
    let g = over_b.anchor_morphism(&p.target)?;
    let pb = pullback(p, &g)?;
    let over = OverObj::new(pb.object.clone(), pb.proj1.map.clone());
    let tapp = monad_apply(p, &over)?;
    let act = tapp
        .pairs
        .iter()
        .map(|&(e, k)| {
            let (_, a) = pb.pairs[k];
            pb.pair_index(e, a).expect("comparison action lands in the carrier")
        })
        .collect();
    let pairs = pb.pairs.clone();
    let index = pairs.iter().enumerate().map(|(k, &pr)| (pr, k)).collect();
    Ok(KAlgebra { algebra: Algebra { over, tapp, act }, pairs, index })
}

/// Morphisms of algebras: maps over the source commuting with the actions,
/// in ascending map order.
pub fn algebra_homs(a1: &Algebra, a2: &Algebra) -> Vec<Vec<usize>> {
    hom_maps_over(&a1.over.obj, &a2.over.obj, &a1.over.anchor, &a2.over.anchor)
        .into_iter()
        .filter(|u| action_commutes(a1, a2, u))
        .collect()
}

fn action_commutes(a1: &Algebra, a2: &Algebra, u: &[usize]) -> bool {
    for (t, &(e, d0)) in a1.tapp.pairs.iter().enumerate() {
        let t2 = a2
            .tapp
            .pair_index(e, u[d0])
            .expect("transported monad pair exists over equal anchors");
        if u[a1.act[t]] != a2.act[t2] {
            return false;
        }
    }
    true
}

/// Are two algebras isomorphic (a bijection over the source, an isomorphism
/// of objects, commuting with the actions)?
pub fn algebras_isomorphic(a1: &Algebra, a2: &Algebra) -> bool {
    if a1.carrier_len() != a2.carrier_len() {
        return false;
    }
    algebra_homs(a1, a2).into_iter().any(|u| {
        let mut seen = vec![false; u.len()];
        for &v in &u {
            seen[v] = true;
        }
        if !seen.into_iter().all(|s| s) {
            return false;
        }
        let mut inv = vec![0usize; u.len()];
        for (i, &v) in u.iter().enumerate() {
            inv[v] = i;
        }
        Morphism::new(a2.over.obj.clone(), a1.over.obj.clone(), inv)
            .map(|m| m.is_valid())
            .unwrap_or(false)
    })
}

/// Result of the canonical-coequalizer descent test for one algebra.
#[derive(Debug, Clone)]
pub enum DescendsOutcome {
    /// The canonical comparison is an isomorphism; `canonical` is the
    /// recovered object over the target.
    Descends { canonical: OverObj },
    /// The canonical comparison fails; the algebra is not in the essential
    /// image of `K`.
    Fails { reason: String },
    /// The tag has no coequalizer for this instance (partial `LaxX` case).
    Undecidable { reason: String },
}

impl DescendsOutcome {
    pub fn descends(&self) -> bool {
        matches!(self, DescendsOutcome::Descends { .. })
    }
}

/// Decide whether an algebra is a comparison algebra: coequalize the action
/// against the second projection, anchor the quotient over the target, and
/// test the canonical map `d0 ↦ (d(d0), q(d0))` for being an isomorphism of
/// algebras.
pub fn algebra_descends(p: &Morphism, alg: &Algebra) -> Result<DescendsOutcome> {
    let td = &alg.tapp;
    let act_mor = Morphism::new(td.object.clone(), alg.over.obj.clone(), alg.act.clone())?;
    let proj2_map: Vec<usize> = td.pairs.iter().map(|&(_, d0)| d0).collect();
    let proj2_mor = Morphism::new(td.object.clone(), alg.over.obj.clone(), proj2_map)?;
    let ce = match crate::cat::coequalizer(&act_mor, &proj2_mor) {
        Ok(ce) => ce,
        Err(Error::Input(msg)) if msg.contains("coequalizer does not exist") => {
            return Ok(DescendsOutcome::Undecidable {
                reason: "undecidable in this tag for this instance: no coequalizer".into(),
            })
        }
        Err(e) => return Err(e),
    };
    // the quotient inherits a well-defined anchor over the target
    let classes = ce.object.carrier_len();
    let mut anchor = vec![usize::MAX; classes];
    for d0 in 0..alg.over.obj.carrier_len() {
        let c = ce.class_of[d0];
        let b = p.map[alg.over.anchor[d0]];
        debug_assert!(anchor[c] == usize::MAX || anchor[c] == b);
        anchor[c] = b;
    }
    let canonical = OverObj::new(ce.object.clone(), anchor);
    debug_assert!(canonical.anchor_morphism(&p.target).map(|m| m.is_valid()).unwrap_or(false));

    let k = match comparison(p, &canonical) {
        Ok(k) => k,
        Err(Error::Input(msg)) if msg.contains("not locally complete") => {
            return Ok(DescendsOutcome::Undecidable {
                reason: format!("undecidable in this tag for this instance: {msg}"),
            })
        }
        Err(e) => return Err(e),
    };
    let phi: Vec<usize> = (0..alg.over.obj.carrier_len())
        .map(|d0| {
            k.pair_index(alg.over.anchor[d0], ce.class_of[d0])
                .expect("canonical pair is in the comparison carrier")
        })
        .collect();

    let mut hit = vec![false; k.algebra.carrier_len()];
    for &v in &phi {
        hit[v] = true;
    }
    if phi.len() != k.algebra.carrier_len() || !hit.iter().all(|&h| h) {
        return Ok(DescendsOutcome::Fails {
            reason: "canonical comparison is not bijective".into(),
        });
    }
    let fwd = Morphism::new(alg.over.obj.clone(), k.algebra.over.obj.clone(), phi.clone())?;
    if !fwd.is_valid() {
        return Ok(DescendsOutcome::Fails {
            reason: "canonical comparison is not a morphism".into(),
        });
    }
    let mut inv = vec![0usize; phi.len()];
    for (i, &v) in phi.iter().enumerate() {
        inv[v] = i;
    }
    let bwd = Morphism::new(k.algebra.over.obj.clone(), alg.over.obj.clone(), inv)?;
    if !bwd.is_valid() {
        return Ok(DescendsOutcome::Fails {
            reason: "inverse of the canonical comparison is not a morphism".into(),
        });
    }
    if !action_commutes(alg, &k.algebra, &phi) {
        return Ok(DescendsOutcome::Fails {
            reason: "canonical comparison does not commute with the actions".into(),
        });
    }
    Ok(DescendsOutcome::Descends { canonical })
}

/// Outcome of [`enumerate_algebras`]: `complete = false` means the budget
/// ran out, never a silent truncation.
#[derive(Debug, Clone)]
pub struct AlgebraEnum {
    pub algebras: Vec<Algebra>,
    pub complete: bool,
}

/// Every algebra with carrier at most `max_size`, one representative per
/// isomorphism class, in deterministic order (sizes ascending, then
/// canonical object order, then ascending action).
pub fn enumerate_algebras(
    p: &Morphism,
    max_size: usize,
    budget: &mut Budget,
) -> Result<AlgebraEnum> {
    let mut algebras = Vec::new();
    for n in 0..=max_size {
        if !algebras_of_size(p, n, budget, &mut algebras)? {
            return Ok(AlgebraEnum { algebras, complete: false });
        }
    }
    Ok(AlgebraEnum { algebras, complete: true })
}

/// Append all algebras of carrier size exactly `n`; false if the budget ran
/// out mid-sweep.
fn algebras_of_size(
    p: &Morphism,
    n: usize,
    budget: &mut Budget,
    out: &mut Vec<Algebra>,
) -> Result<bool> {
    if p.tag() == Tag::LaxX {
        return Err(Error::input(
            "algebra enumeration runs in OrdX; transport LaxX morphisms along F1 first",
        ));
    }
    // fibers of p over each target element, as source masks
    let fibers: Vec<u64> = (0..p.target.carrier_len()).map(|b| p.fiber(b)).collect();
    let classes = anchored_classes(p.tag(), p.source.base.as_ref(), n, &p.source, "d")?;
    for class in classes {
        if !budget.spend(1) {
            return Ok(false);
        }
        // saturation: an action needs a preimage in every fiber the anchor
        // image touches
        let image = class.anchor.iter().fold(0u64, |m, &e| m | 1 << e);
        let saturated = class
            .anchor
            .iter()
            .all(|&e| fibers[p.map[e]] & !image == 0);
        if !saturated {
            continue;
        }
        let over = OverObj::new(class.obj.clone(), class.anchor.clone());
        let tapp = monad_apply(p, &over)?;
        let mut actions = Vec::new();
        if !enumerate_actions(p, &over, &tapp, budget, &mut actions)? {
            return Ok(false);
        }
        // dedup actions under automorphisms of the anchored object
        for act in actions {
            if !budget.spend(1) {
                return Ok(false);
            }
            let minimal = class.autos.iter().all(|sigma| {
                let mut permuted = vec![0usize; act.len()];
                for (t, &(e, d0)) in tapp.pairs.iter().enumerate() {
                    let t2 = tapp
                        .pair_index(e, sigma[d0])
                        .expect("automorphism preserves the monad carrier");
                    permuted[t2] = sigma[act[t]];
                }
                permuted.as_slice() >= act.as_slice()
            });
            if minimal {
                out.push(Algebra { over: over.clone(), tapp: tapp.clone(), act });
            }
        }
    }
    Ok(true)
}

/// DFS over the action table: unit slots are forced, each slot ranges over
/// the anchor fiber intersected with the filtration-compatible elements,
/// monotonicity prunes along the way, laws are checked at the leaves.
fn enumerate_actions(
    p: &Morphism,
    over: &OverObj,
    tapp: &MonadApp,
    budget: &mut Budget,
    out: &mut Vec<Vec<usize>>,
) -> Result<bool> {
    let d_obj = &over.obj;
    let nt = tapp.pairs.len();
    let mut allowed: Vec<u64> = Vec::with_capacity(nt);
    for (t, &(e, _)) in tapp.pairs.iter().enumerate() {
        // over the source: act[t] must lie in the anchor fiber of e
        let mut m = 0u64;
        for d1 in 0..d_obj.carrier_len() {
            if over.anchor[d1] == e {
                m |= 1 << d1;
            }
        }
        if d_obj.tag.has_filtration() {
            let base = d_obj.base();
            for x in 0..base.n() {
                if tapp.object.filtration_at(x) >> t & 1 == 1 {
                    m &= d_obj.filtration_at(x);
                }
            }
        }
        allowed.push(m);
    }
    let mut act = vec![usize::MAX; nt];
    for (d0, &u) in tapp.unit.iter().enumerate() {
        if allowed[u] >> d0 & 1 == 0 {
            return Ok(true); // the forced unit value is inadmissible
        }
        act[u] = d0;
    }
    let free: Vec<usize> = (0..nt).filter(|&t| act[t] == usize::MAX).collect();
    dfs_actions(p, over, tapp, &allowed, &free, 0, &mut act, budget, out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_actions(
    p: &Morphism,
    over: &OverObj,
    tapp: &MonadApp,
    allowed: &[u64],
    free: &[usize],
    k: usize,
    act: &mut Vec<usize>,
    budget: &mut Budget,
    out: &mut Vec<Vec<usize>>,
) -> Result<bool> {
    if !budget.spend(1) {
        return Ok(false);
    }
    if k == free.len() {
        if action_laws_hold(p, over, tapp, act) {
            out.push(act.clone());
        }
        return Ok(true);
    }
    let t = free[k];
    let d_order = &over.obj.order;
    let t_order = &tapp.object.order;
    'next: for cand in iter_mask(allowed[t]).filter(|&c| c < over.obj.carrier_len()) {
        for t2 in 0..tapp.pairs.len() {
            if act[t2] == usize::MAX || t2 == t {
                continue;
            }
            if t_order.leq(t, t2) && !d_order.leq(cand, act[t2]) {
                continue 'next;
            }
            if t_order.leq(t2, t) && !d_order.leq(act[t2], cand) {
                continue 'next;
            }
        }
        act[t] = cand;
        if !dfs_actions(p, over, tapp, allowed, free, k + 1, act, budget, out)? {
            act[t] = usize::MAX;
            return Ok(false);
        }
        act[t] = usize::MAX;
    }
    Ok(true)
}

fn action_laws_hold(p: &Morphism, over: &OverObj, tapp: &MonadApp, act: &[usize]) -> bool {
    // unit holds by construction; check associativity
    for (t, &(_, d0)) in tapp.pairs.iter().enumerate() {
        for e in 0..p.source.carrier_len() {
            if let Some(t_outer) = tapp.pair_index(e, act[t]) {
                let t_direct = match tapp.pair_index(e, d0) {
                    Some(t2) => t2,
                    None => return false,
                };
                if act[t_outer] != act[t_direct] {
                    return false;
                }
            }
        }
    }
    let _ = over;
    true
}

/// A machine-checkable refutation of (effective) descent.
#[derive(Debug, Clone)]
pub enum Refutation {
    /// An algebra morphism `K(A) → K(A′)` hit by no morphism `A → A′`.
    Fullness { a: OverObj, a_prime: OverObj, algebra_map: Vec<usize> },
    /// Two distinct morphisms `A → A′` with the same image under `K`.
    Faithfulness { a: OverObj, a_prime: OverObj, t1: Vec<usize>, t2: Vec<usize> },
    /// An algebra the canonical coequalizer does not reconstruct.
    NonDescending { algebra: Algebra },
}

impl Refutation {
    pub fn kind(&self) -> &'static str {
        match self {
            Refutation::Fullness { .. } => "FullnessFailure",
            Refutation::Faithfulness { .. } => "FaithfulnessFailure",
            Refutation::NonDescending { .. } => "NonDescendingAlgebra",
        }
    }

    /// Re-establish the refutation from scratch against `p` (already
    /// transported if the verdict was).
    pub fn revalidate(&self, p: &Morphism) -> Result<bool> {
        match self {
            Refutation::Fullness { a, a_prime, algebra_map } => {
                let ka = comparison(p, a)?;
                let kb = comparison(p, a_prime)?;
                let em = algebra_homs(&ka.algebra, &kb.algebra);
                if !em.contains(algebra_map) {
                    return Ok(false);
                }
                let homs = hom_maps_over(&a.obj, &a_prime.obj, &a.anchor, &a_prime.anchor);
                Ok(homs.iter().all(|t| &ka.transport_map(&kb, t) != algebra_map))
            }
            Refutation::Faithfulness { a, a_prime, t1, t2 } => {
                if t1 == t2 {
                    return Ok(false);
                }
                let homs = hom_maps_over(&a.obj, &a_prime.obj, &a.anchor, &a_prime.anchor);
                if !homs.contains(t1) || !homs.contains(t2) {
                    return Ok(false);
                }
                let ka = comparison(p, a)?;
                let kb = comparison(p, a_prime)?;
                Ok(ka.transport_map(&kb, t1) == ka.transport_map(&kb, t2))
            }
            Refutation::NonDescending { algebra } => {
                if !algebra.validate(p)?.is_empty() {
                    return Ok(false);
                }
                Ok(matches!(algebra_descends(p, algebra)?, DescendsOutcome::Fails { .. }))
            }
        }
    }
}

/// Verdict of the bounded sweep. `ff_ok_up_to`/`es_ok_up_to` record the
/// largest carrier size whose stage ran to completion; they are honest
/// bounds, not claims beyond them.
#[derive(Debug, Clone)]
pub struct BoundedVerdict {
    pub ff_ok_up_to: Option<usize>,
    pub es_ok_up_to: Option<usize>,
    pub refutation: Option<Refutation>,
    pub budget_exhausted: bool,
    pub work_used: u64,
    /// Whether the question was transported from `LaxX` into `OrdX`.
    pub via_f1: bool,
    pub objects_scanned: usize,
    pub algebras_scanned: usize,
}

impl BoundedVerdict {
    pub fn refuted(&self) -> bool {
        self.refutation.is_some()
    }

    /// Re-validate the refutation (if any) against the original morphism,
    /// transporting along `F1` when the sweep did.
    pub fn revalidate(&self, p: &Morphism) -> Result<bool> {
        match &self.refutation {
            None => Ok(true),
            Some(r) => {
                let p_eff = if self.via_f1 { f1_morphism(p)? } else { p.clone() };
                r.revalidate(&p_eff)
            }
        }
    }
}

/// Run both probes of the comparison functor up to `size_bound` under a
/// work budget:
///
/// 1. full faithfulness: for every ordered pair of objects over the target
///    (carriers ⩽ bound, up to isomorphism over the target), the hom-set
///    and the algebra-hom-set of their comparisons must match elementwise
///    along `K`;
/// 2. essential surjectivity: every algebra (carriers ⩽ bound, up to
///    isomorphism) must pass the canonical-coequalizer descent test.
///
/// Stages run in increasing carrier size, each probe recording the last
/// size it completed; the first refutation stops the sweep.
pub fn bounded_oracle(p: &Morphism, size_bound: usize, budget: &mut Budget) -> Result<BoundedVerdict> {
    if size_bound < 1 {
        return Err(Error::precondition("oracle size bound must be at least 1"));
    }
    if size_bound > 5 {
        return Err(Error::input("oracle size bound capped at 5"));
    }
    let via_f1 = p.tag() == Tag::LaxX;
    let p_eff;
    let p = if via_f1 {
        p_eff = f1_morphism(p)?;
        &p_eff
    } else {
        p
    };

    let mut verdict = BoundedVerdict {
        ff_ok_up_to: None,
        es_ok_up_to: None,
        refutation: None,
        budget_exhausted: false,
        work_used: 0,
        via_f1,
        objects_scanned: 0,
        algebras_scanned: 0,
    };
    let mut over_b: Vec<OverObj> = Vec::new();
    let mut ks: Vec<KAlgebra> = Vec::new();
    let mut algebras: Vec<Algebra> = Vec::new();

    'stages: for s in 0..=size_bound {
        // --- essential-surjectivity stage at size s ---
        // runs first: its per-size cost is linear in the algebra count,
        // while the faithfulness stage is quadratic in accumulated objects
        let start = algebras.len();
        if !algebras_of_size(p, s, budget, &mut algebras)? {
            verdict.budget_exhausted = true;
            break;
        }
        for alg in &algebras[start..] {
            if !budget.spend(4) {
                verdict.budget_exhausted = true;
                break 'stages;
            }
            verdict.algebras_scanned += 1;
            match algebra_descends(p, alg)? {
                DescendsOutcome::Descends { .. } => {}
                DescendsOutcome::Fails { .. } => {
                    verdict.refutation = Some(Refutation::NonDescending { algebra: alg.clone() });
                    break 'stages;
                }
                DescendsOutcome::Undecidable { .. } => {
                    // only reachable for direct partial-tag use; never counts
                    // as a completed stage
                    verdict.budget_exhausted = true;
                    break 'stages;
                }
            }
        }
        verdict.es_ok_up_to = Some(s);

        // --- full-faithfulness stage at size s ---
        let prev_len = over_b.len();
        for class in anchored_classes(p.tag(), p.source.base.as_ref(), s, &p.target, "a")? {
            if !budget.spend(4) {
                verdict.budget_exhausted = true;
                break 'stages;
            }
            let over = OverObj::new(class.obj, class.anchor);
            ks.push(comparison(p, &over)?);
            over_b.push(over);
            verdict.objects_scanned += 1;
        }
        for i in 0..over_b.len() {
            for j in 0..over_b.len() {
                if i < prev_len && j < prev_len {
                    continue;
                }
                if let Some(r) = compare_hom_sets(&over_b[i], &ks[i], &over_b[j], &ks[j], budget)
                {
                    match r {
                        Ok(refutation) => {
                            verdict.refutation = Some(refutation);
                            break 'stages;
                        }
                        Err(()) => {
                            verdict.budget_exhausted = true;
                            break 'stages;
                        }
                    }
                }
            }
        }
        verdict.ff_ok_up_to = Some(s);
    }
    verdict.work_used = budget.used();
    Ok(verdict)
}

/// `Some(Ok(refutation))` on a hom-set mismatch, `Some(Err(()))` when the
/// budget ran out, `None` when the pair agrees.
#[allow(clippy::type_complexity)]
fn compare_hom_sets(
    a: &OverObj,
    ka: &KAlgebra,
    b: &OverObj,
    kb: &KAlgebra,
    budget: &mut Budget,
) -> Option<std::result::Result<Refutation, ()>> {
    let homs = hom_maps_over(&a.obj, &b.obj, &a.anchor, &b.anchor);
    let em = algebra_homs(&ka.algebra, &kb.algebra);
    if !budget.spend(1 + homs.len() as u64 + em.len() as u64) {
        return Some(Err(()));
    }
    let images: Vec<Vec<usize>> = homs.iter().map(|t| ka.transport_map(kb, t)).collect();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] == images[j] {
                return Some(Ok(Refutation::Faithfulness {
                    a: a.clone(),
                    a_prime: b.clone(),
                    t1: homs[i].clone(),
                    t2: homs[j].clone(),
                }));
            }
        }
    }
    for u in &em {
        if !images.contains(u) {
            return Some(Ok(Refutation::Fullness {
                a: a.clone(),
                a_prime: b.clone(),
                algebra_map: u.clone(),
            }));
        }
    }
    debug_assert!(images.iter().all(|im| em.contains(im)));
    None
}

/// Canonical key of an algebra under relabelings of its carrier, for
/// uniqueness tests.
pub fn algebra_canonical_key(alg: &Algebra) -> Vec<u64> {
    let shape = Shape::of_obj(&alg.over.obj);
    let perms = crate::enumerate::permutations(alg.carrier_len());
    perms
        .iter()
        .map(|perm| {
            let n = alg.carrier_len();
            let mut inv = vec![0usize; n];
            for (i, &pi) in perm.iter().enumerate() {
                inv[pi] = i;
            }
            let mut key = shape.encode(perm);
            key.push(u64::MAX - 3);
            for i_new in 0..n {
                key.push(alg.over.anchor[inv[i_new]] as u64);
            }
            // action table keyed by permuted pairs
            let mut rows: Vec<(u64, u64, u64)> = alg
                .tapp
                .pairs
                .iter()
                .enumerate()
                .map(|(t, &(e, d0))| (e as u64, perm[d0] as u64, perm[alg.act[t]] as u64))
                .collect();
            rows.sort();
            for (e, d, v) in rows {
                key.push(e);
                key.push(d);
                key.push(v);
            }
            key
        })
        .min()
        .unwrap_or_default()
}
