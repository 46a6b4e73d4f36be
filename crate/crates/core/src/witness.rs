//! Constructive counterexamples and the join/largest-element constructions.
//!
//! * [`build_two_element_witness`] — from a failed pair-lifting condition,
//!   the two-element filtered object whose pullback is up-closed everywhere
//!   while the object itself is not: a direct certificate that the
//!   subcategory reflection fails along `p`.
//! * [`check_reflection`] — the bounded sweep behind the same idea: search
//!   all ambient morphisms up to a carrier bound for one whose pullback
//!   lands in the subcategory while its source does not.
//! * [`construct_alpha_by_join`] — rebuild an anchor map from a filtration
//!   by taking joins of anchor candidates below `β ∘ f`; its postconditions
//!   are verified mechanically and must never fail when the preconditions
//!   hold.
//! * [`construct_beta_doubleprime`] — the largest anchor among a fiber,
//!   with the `∼`-to-`β` flag.

use serde::Serialize;

use crate::cat::{f1_inverse, f1_morphism, f1_object, pullback, Morphism, Obj, Tag};
use crate::check::{fiberwise_surjectivity, pair_lifts_within};
use crate::enumerate::anchored_classes;
use crate::error::{Error, Result};
use crate::order::{iter_mask, Preorder};
use crate::verdict::Claim;

/// The two-element counterexample refuting pair lifting at `(x, b1, b0)`.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub at_x: String,
    pub b1: String,
    pub b0: String,
    /// The two-element object `A` with `a1 ⩽ a0`, filtered by the case split
    /// on the position of each base element relative to `x`. Valid in
    /// `Prod`, deliberately not in `OrdX`.
    pub witness_object: Obj,
    /// `f : A → B` sending `a_i` to `b_i`.
    pub witness_morphism: Morphism,
    /// The pullback of `p` and `f`, retagged as `OrdX` (claim 3 asserts it
    /// belongs there).
    pub pullback_object: Obj,
    pub claims: Vec<Claim>,
}

impl WitnessReport {
    pub fn all_claims_hold(&self) -> bool {
        self.claims.iter().all(|c| c.ok)
    }
}

fn all_levels_upclosed(obj: &Obj) -> bool {
    let base = obj.base();
    (0..base.n()).all(|x| obj.order.is_upclosed(obj.filtration_at(x)).passed)
}

/// Build the two-element witness for a pair `b1 ⩽ b0` in the level at `x`
/// that does not lift into the source level. `p` must be a valid `OrdX`
/// morphism and the pair must genuinely fail, otherwise the construction
/// certifies nothing and is refused.
pub fn build_two_element_witness(
    p: &Morphism,
    x: usize,
    b1: usize,
    b0: usize,
) -> Result<WitnessReport> {
    if p.tag() != Tag::OrdX {
        return Err(Error::input("two-element witness applies to OrdX morphisms"));
    }
    let base = p.source.base().clone();
    let b = &p.target;
    if !b.order.leq(b1, b0) {
        return Err(Error::precondition(format!(
            "`{}` ⩽̸ `{}` in the target",
            b.order.name(b1),
            b.order.name(b0)
        )));
    }
    let bx = b.filtration_at(x);
    if bx >> b1 & 1 == 0 || bx >> b0 & 1 == 0 {
        return Err(Error::precondition(format!(
            "pair is not inside the level at `{}`",
            base.name(x)
        )));
    }
    if pair_lifts_within(p, p.source.filtration_at(x), b1, b0) {
        return Err(Error::precondition(format!(
            "pair (`{}`, `{}`, `{}`) lifts, so the pullback would not certify anything",
            base.name(x),
            b.order.name(b1),
            b.order.name(b0)
        )));
    }

    // abstract carrier {a1 ⩽ a0}; this also covers b1 ∼ b0 and b1 = b0,
    // where a subset carrier would degenerate
    let a_order = Preorder::chain(vec!["a1".to_string(), "a0".to_string()])?;
    let filt: Vec<u64> = (0..base.n())
        .map(|x2| {
            if base.strict(x2, x) {
                0b11
            } else if base.equiv(x2, x) {
                0b01
            } else {
                0b00
            }
        })
        .collect();
    let a_obj = Obj::prod(base.clone(), a_order, filt)?;
    let f = Morphism::new(a_obj.clone(), b.retag(Tag::Prod)?, vec![b1, b0])?;
    let p_prod = Morphism::new(
        p.source.retag(Tag::Prod)?,
        p.target.retag(Tag::Prod)?,
        p.map.clone(),
    )?;
    let pb = pullback(&p_prod, &f)?;

    let mut claims = Vec::new();
    let valid_prod = a_obj.validate().is_empty();
    let mut exact = true;
    let mut off = Vec::new();
    for x2 in 0..base.n() {
        let fails = !a_obj.order.is_upclosed(a_obj.filtration_at(x2)).passed;
        if fails != base.equiv(x2, x) {
            exact = false;
            off.push(base.name(x2).to_string());
        }
    }
    claims.push(Claim::new(
        "witness_valid_prod_not_ordx_exactly_at_equiv",
        valid_prod && exact,
        if valid_prod && exact {
            format!("up-closure fails exactly at indices ∼ `{}`", base.name(x))
        } else {
            format!("valid_prod={valid_prod}, mismatched indices: {off:?}")
        },
    ));
    let f_ok = f.is_valid();
    claims.push(Claim::new(
        "witness_morphism_valid_prod",
        f_ok,
        if f_ok { "f(a_i) = b_i is a morphism".to_string() } else { format!("{:?}", f.validate()) },
    ));
    let pb_ok = all_levels_upclosed(&pb.object);
    claims.push(Claim::new(
        "pullback_fully_upclosed",
        pb_ok,
        if pb_ok {
            "every pullback level is up-closed".to_string()
        } else {
            "some pullback level is not up-closed".to_string()
        },
    ));

    Ok(WitnessReport {
        at_x: base.name(x).to_string(),
        b1: b.order.name(b1).to_string(),
        b0: b.order.name(b0).to_string(),
        witness_object: a_obj,
        witness_morphism: f,
        pullback_object: pb.object.retag(Tag::OrdX)?,
        claims,
    })
}

/// Name-based front end to [`build_two_element_witness`].
pub fn build_two_element_witness_named(
    p: &Morphism,
    x: &str,
    b1: &str,
    b0: &str,
) -> Result<WitnessReport> {
    let base = p.source.base();
    build_two_element_witness(
        p,
        base.position(x)?,
        p.target.order.position(b1)?,
        p.target.order.position(b0)?,
    )
}

/// Outcome of the bounded reflection sweep.
#[derive(Debug, Clone)]
pub enum ReflectionOutcome {
    /// First ambient morphism (in enumeration order) whose pullback lies in
    /// the subcategory while its source does not.
    Refuted { f: Morphism, pullback: Obj },
    NoCounterexample { size_bound: usize },
}

impl ReflectionOutcome {
    pub fn refuted(&self) -> bool {
        matches!(self, ReflectionOutcome::Refuted { .. })
    }
}

/// Search all ambient morphisms `f : A → B` with `|A| ⩽ size_bound`, up to
/// isomorphism over `B`, for a failure of `E×_BA ∈ sub ⇒ A ∈ sub`. Only
/// the pair `sub = OrdX` inside `ambient = Prod` is supported; there the
/// two-element witness makes `size_bound = 2` complete.
pub fn check_reflection(
    p: &Morphism,
    sub: Tag,
    ambient: Tag,
    size_bound: usize,
) -> Result<ReflectionOutcome> {
    if sub != Tag::OrdX || ambient != Tag::Prod {
        return Err(Error::input(format!(
            "unsupported reflection pair: {sub} inside {ambient}"
        )));
    }
    if p.tag() != Tag::OrdX {
        return Err(Error::input("reflection check starts from an OrdX morphism"));
    }
    if size_bound < 1 {
        return Err(Error::precondition("size bound must be at least 1"));
    }
    let base = p.source.base().clone();
    let b_prod = p.target.retag(Tag::Prod)?;
    let p_prod = Morphism::new(p.source.retag(Tag::Prod)?, b_prod.clone(), p.map.clone())?;
    for n in 0..=size_bound {
        for class in anchored_classes(Tag::Prod, Some(&base), n, &b_prod, "a")? {
            let f = Morphism::new(class.obj.clone(), b_prod.clone(), class.anchor.clone())?;
            let pb = pullback(&p_prod, &f)?;
            if all_levels_upclosed(&pb.object) && !all_levels_upclosed(&class.obj) {
                return Ok(ReflectionOutcome::Refuted { f, pullback: pb.object });
            }
        }
    }
    Ok(ReflectionOutcome::NoCounterexample { size_bound })
}

/// Rebuild a lax anchor on the source of `f` by joining, for each element,
/// the base elements whose level contains it, inside the down-set of its
/// image anchor. Preconditions (checked, each named on violation):
///
/// * the base is locally complete;
/// * `p` is a `LaxX` morphism whose filtration image is fiberwise
///   surjective;
/// * `f` is an `OrdX` morphism into the filtration image of the target of
///   `p`, and the pullback of the two lands in the image of the filtration
///   functor.
///
/// The postconditions — each element belongs to its own level, the anchor
/// is monotone, and the induced filtration reproduces the input — are
/// verified on the way out; a failure is a [`Error::Postcondition`] and
/// signals a bug, not bad input.
pub fn construct_alpha_by_join(f: &Morphism, p: &Morphism) -> Result<Obj> {
    if p.tag() != Tag::LaxX {
        return Err(Error::input("anchor construction needs a LaxX morphism `p`"));
    }
    if f.tag() != Tag::OrdX {
        return Err(Error::input("anchor construction needs an OrdX morphism `f`"));
    }
    let base = p.source.base().clone();
    if !base.lattice_report().locally_complete {
        return Err(Error::precondition("base is not locally complete"));
    }
    let p_f1 = f1_morphism(p)?;
    if f.target != p_f1.target {
        return Err(Error::precondition(
            "`f` does not land in the filtration image of the target of `p`",
        ));
    }
    let fs = fiberwise_surjectivity(&p_f1)?;
    if !fs.passed {
        return Err(Error::precondition("filtration image of `p` is not fiberwise surjective"));
    }
    let pb = pullback(&p_f1, f)?;
    if f1_inverse(&pb.object)?.is_err() {
        return Err(Error::precondition(
            "pullback is not in the image of the filtration functor",
        ));
    }

    let a = &f.source;
    let beta = p.target.alpha.as_ref().unwrap();
    let mut alpha = Vec::with_capacity(a.carrier_len());
    for i in 0..a.carrier_len() {
        let bound = beta[f.map[i]];
        let mut anchors = 0u64;
        for x in 0..base.n() {
            if a.filtration_at(x) >> i & 1 == 1 {
                anchors |= 1 << x;
            }
        }
        // every x with a ∈ A_x satisfies x ⩽ β(f(a)), so the join is bounded
        if anchors & !base.downset(bound) != 0 {
            return Err(Error::Postcondition(format!(
                "anchor candidates of `{}` escape the down-set of the image anchor",
                a.order.name(i)
            )));
        }
        match base.join_below(anchors, bound)? {
            Some(j) => alpha.push(j),
            None => {
                return Err(Error::Postcondition(format!(
                    "join of anchor candidates of `{}` does not exist",
                    a.order.name(i)
                )))
            }
        }
    }
    // each element must belong to its own level
    for i in 0..a.carrier_len() {
        if a.filtration_at(alpha[i]) >> i & 1 == 0 {
            return Err(Error::Postcondition(format!(
                "`{}` is not in the level of its constructed anchor",
                a.order.name(i)
            )));
        }
    }
    let lax = Obj::laxx(base, a.order.clone(), alpha)?;
    if !lax.is_valid() {
        return Err(Error::Postcondition("constructed anchor is not monotone".into()));
    }
    let back = f1_object(&lax)?;
    if back.filt != a.filt {
        return Err(Error::Postcondition(
            "induced filtration does not reproduce the input".into(),
        ));
    }
    Ok(lax)
}

/// The largest anchor over one fiber, with its factorization report.
#[derive(Debug, Clone, Serialize)]
pub struct BetaDoublePrime {
    pub b: String,
    /// `β″(b)`: a largest element of `{ε(e) | p(e) = b}`, earliest in its
    /// `∼`-class.
    pub value: String,
    /// Whether `ε(e) ⩽ β″(b) ⩽ β(b)` held for every fiber element (always
    /// true for a valid morphism; recorded for re-checking).
    pub bounds_ok: bool,
    /// Whether `β″(b) ∼ β(b)`.
    pub equiv_to_beta: bool,
    pub fiber_anchors: Vec<String>,
}

/// Compute `β″(b)` for a `LaxX` morphism: the largest anchor among the
/// preimages of `b`. The fiber must be nonempty and its anchor set must
/// have a largest element (guaranteed when every down-set of the base is a
/// chain).
pub fn construct_beta_doubleprime(p: &Morphism, b: usize) -> Result<BetaDoublePrime> {
    if p.tag() != Tag::LaxX {
        return Err(Error::input("β″ construction applies to LaxX morphisms"));
    }
    let base = p.source.base().clone();
    let eps = p.source.alpha.as_ref().unwrap();
    let beta = p.target.alpha.as_ref().unwrap();
    let fiber = p.fiber(b);
    if fiber == 0 {
        return Err(Error::precondition(format!(
            "fiber over `{}` is empty",
            p.target.order.name(b)
        )));
    }
    let mut anchors = 0u64;
    for e in iter_mask(fiber).filter(|&e| e < p.source.carrier_len()) {
        anchors |= 1 << eps[e];
    }
    let value = base.largest_in(anchors).ok_or_else(|| {
        Error::precondition(format!(
            "anchor set over `{}` has no largest element",
            p.target.order.name(b)
        ))
    })?;
    let bounds_ok = iter_mask(fiber)
        .filter(|&e| e < p.source.carrier_len())
        .all(|e| base.leq(eps[e], value))
        && base.leq(value, beta[b]);
    Ok(BetaDoublePrime {
        b: p.target.order.name(b).to_string(),
        value: base.name(value).to_string(),
        bounds_ok,
        equiv_to_beta: base.equiv(value, beta[b]),
        fiber_anchors: base.subset_names(anchors),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::condition_b;
    use crate::fixtures;

    #[test]
    fn witness_on_failing_fixture() {
        let p = fixtures::fix_f();
        let w = build_two_element_witness_named(&p, "*", "b1", "b0").unwrap();
        assert!(w.all_claims_hold(), "{:?}", w.claims);
        assert_eq!(w.witness_object.filtration_at(0), 0b01); // {a1} at the ∼-index
        // pullback carrier: (e1,a1) ⩽ (e0,a0) with the level at * empty
        assert_eq!(w.pullback_object.carrier_len(), 2);
        assert_eq!(w.pullback_object.filtration_at(0), 0);
        assert!(w.pullback_object.is_valid());
        assert!(!w.witness_object.retag(Tag::OrdX).unwrap().is_valid());
    }

    #[test]
    fn witness_degenerate_pair() {
        let p = fixtures::fix_f();
        let w = build_two_element_witness_named(&p, "*", "b1", "b1").unwrap();
        assert!(w.all_claims_hold(), "{:?}", w.claims);
        let f = &w.witness_morphism;
        assert_eq!(f.map, vec![0, 0]);
    }

    #[test]
    fn witness_guard_when_pair_lifts() {
        let p = fixtures::fix_g();
        let err = build_two_element_witness_named(&p, "*", "b1", "b0").unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn reflection_sweep_on_fixtures() {
        let refuted = check_reflection(&fixtures::fix_f(), Tag::OrdX, Tag::Prod, 2).unwrap();
        assert!(refuted.refuted());
        if let ReflectionOutcome::Refuted { f, pullback } = &refuted {
            assert!(all_levels_upclosed(pullback));
            assert!(!all_levels_upclosed(&f.source));
        }
        let ok = check_reflection(&fixtures::fix_g(), Tag::OrdX, Tag::Prod, 2).unwrap();
        assert!(!ok.refuted());

        let id = Morphism::identity(&fixtures::fix_g().target);
        assert!(!check_reflection(&id, Tag::OrdX, Tag::Prod, 3).unwrap().refuted());
    }

    #[test]
    fn reflection_matches_pair_lifting_failure() {
        // on the fixtures, a refutation at bound 2 appears exactly when the
        // pair-lifting condition fails
        for p in [fixtures::fix_f(), fixtures::fix_g()] {
            let refuted = check_reflection(&p, Tag::OrdX, Tag::Prod, 2).unwrap().refuted();
            assert_eq!(refuted, !condition_b(&p).unwrap().passed);
        }
    }

    #[test]
    fn alpha_by_join_on_identity_shaped_input() {
        // p = identity on the raised fixture target; f = its own filtration
        let l = fixtures::fix_l_raised();
        let p = Morphism::identity(&l.target);
        let f = Morphism::identity(&crate::cat::f1_object(&l.target).unwrap());
        let rebuilt = construct_alpha_by_join(&f, &p).unwrap();
        assert_eq!(rebuilt.alpha, l.target.alpha);
    }

    #[test]
    fn beta_doubleprime_on_fixtures() {
        let l = fixtures::fix_l();
        let id = Morphism::identity(&l.target);
        let r = construct_beta_doubleprime(&id, 0).unwrap();
        assert!(r.equiv_to_beta && r.bounds_ok);

        let r = construct_beta_doubleprime(&l, 0).unwrap();
        assert_eq!(r.value, "x0");
        assert!(!r.equiv_to_beta);
        assert!(r.bounds_ok);

        let r = construct_beta_doubleprime(&fixtures::fix_l_raised(), 0).unwrap();
        assert_eq!(r.value, "x1");
        assert!(r.equiv_to_beta);
    }
}
