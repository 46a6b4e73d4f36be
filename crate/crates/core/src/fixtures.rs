//! Canonical small instances used across the test suites.
//!
//! Naming follows the internal convention: `X1` a point, `X2` the two-chain
//! `x0 ⩽ x1`, `XV` the vee `xa ⩽ xt ⩾ xb`, `X3` the three-chain. `fix_f`
//! and `fix_g` differ only in the filtration of the source; `fix_h` is the
//! discrete double cover of the two-chain; `fix_l` is a lax-comma morphism
//! whose lower anchor breaks the lax pair-lifting condition.

use std::sync::Arc;

use crate::cat::{Morphism, Obj};
use crate::order::Preorder;

fn named(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// One-point base `{*}`.
pub fn x1() -> Arc<Preorder> {
    Arc::new(Preorder::discrete(named(&["*"])).unwrap())
}

/// Two-chain base `x0 ⩽ x1`.
pub fn x2() -> Arc<Preorder> {
    Arc::new(Preorder::chain(named(&["x0", "x1"])).unwrap())
}

/// Three-chain base `x0 ⩽ x1 ⩽ x2`.
pub fn x3() -> Arc<Preorder> {
    Arc::new(Preorder::chain(named(&["x0", "x1", "x2"])).unwrap())
}

/// Vee base: `xa ⩽ xt`, `xb ⩽ xt`, `xa` and `xb` incomparable.
pub fn xv() -> Arc<Preorder> {
    Arc::new(
        Preorder::close(
            named(&["xa", "xb", "xt"]),
            &[("xa".into(), "xt".into()), ("xb".into(), "xt".into())],
        )
        .unwrap(),
    )
}

/// Chain of the given length with elements `x0 ⩽ x1 ⩽ …`.
pub fn chain_base(len: usize) -> Arc<Preorder> {
    let names: Vec<String> = (0..len).map(|i| format!("x{i}")).collect();
    Arc::new(Preorder::chain(names).unwrap())
}

/// `p : E → B` over `X1` in `OrdX` with `B_* = {b1, b0}` and `E_* = ∅`:
/// surjective with all chain lifts, but the level at `*` lifts nothing.
pub fn fix_f() -> Morphism {
    let base = x1();
    let b = Obj::ordx(
        base.clone(),
        Preorder::chain(named(&["b1", "b0"])).unwrap(),
        vec![0b11],
    )
    .unwrap();
    let e = Obj::ordx(
        base,
        Preorder::chain(named(&["e1", "e0"])).unwrap(),
        vec![0b00],
    )
    .unwrap();
    Morphism::by_names(e, b, &[("e1", "b1"), ("e0", "b0")]).unwrap()
}

/// `fix_f` with the source level filled in: `E_* = {e1, e0}`.
pub fn fix_g() -> Morphism {
    let base = x1();
    let b = Obj::ordx(
        base.clone(),
        Preorder::chain(named(&["b1", "b0"])).unwrap(),
        vec![0b11],
    )
    .unwrap();
    let e = Obj::ordx(
        base,
        Preorder::chain(named(&["e1", "e0"])).unwrap(),
        vec![0b11],
    )
    .unwrap();
    Morphism::by_names(e, b, &[("e1", "b1"), ("e0", "b0")]).unwrap()
}

/// Discrete `{u, v}` over the chain `b1 ⩽ b0`; the mixed chains do not lift.
pub fn fix_h() -> crate::order::MonotoneMap {
    let e = Preorder::discrete(named(&["u", "v"])).unwrap();
    let b = Preorder::chain(named(&["b1", "b0"])).unwrap();
    crate::order::MonotoneMap::by_names(e, b, &[("u", "b1"), ("v", "b0")]).unwrap()
}

/// `LaxX` morphism over `X2`: `β ≡ x1`, `ε(e1) = x0`, `ε(e0) = x1`,
/// `p(ei) = bi`. The pair `(x1, b1, b0)` has no lax lift.
pub fn fix_l() -> Morphism {
    let base = x2();
    let b = Obj::laxx(
        base.clone(),
        Preorder::chain(named(&["b1", "b0"])).unwrap(),
        vec![1, 1],
    )
    .unwrap();
    let e = Obj::laxx(
        base,
        Preorder::chain(named(&["e1", "e0"])).unwrap(),
        vec![0, 1],
    )
    .unwrap();
    Morphism::by_names(e, b, &[("e1", "b1"), ("e0", "b0")]).unwrap()
}

/// `fix_l` with the lower anchor raised to `x1`, restoring every lax lift.
pub fn fix_l_raised() -> Morphism {
    let base = x2();
    let b = Obj::laxx(
        base.clone(),
        Preorder::chain(named(&["b1", "b0"])).unwrap(),
        vec![1, 1],
    )
    .unwrap();
    let e = Obj::laxx(
        base,
        Preorder::chain(named(&["e1", "e0"])).unwrap(),
        vec![1, 1],
    )
    .unwrap();
    Morphism::by_names(e, b, &[("e1", "b1"), ("e0", "b0")]).unwrap()
}
