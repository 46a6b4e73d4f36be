//! Seeded random instance generation.
//!
//! Identical configuration gives bit-identical documents: one ChaCha stream
//! drives every draw in a fixed order. Orders are random DAGs (edges only
//! from lower to higher index) closed reflexively-transitively, so the
//! index order is a linear extension; source orders keep only pairs the
//! morphism map respects, making the map monotone by construction.
//! Filtrations are built from random generator sets pushed up along the
//! base (and up-closed inside the carrier for `OrdX`), then clipped to the
//! preimage of the target level, so every generated document validates for
//! its tag without rejection sampling. Lax anchors are assigned in index
//! order from the always-nonempty candidate sets below the image anchor.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use descent_core::cat::{Morphism, Obj, Tag};
use descent_core::order::Preorder;

use crate::doc::{
    document_of, CliError, CliResult, InstanceDocument, LoadedInstance, NamedMorphism,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub tag: Tag,
    pub size_x: usize,
    pub size_b: usize,
    pub size_e: usize,
    /// Carrier size of the extra object `A` with `f : A → B`; generated
    /// only when `with_a` is set.
    pub size_a: usize,
    pub with_a: bool,
    pub edge_density: f64,
    pub filt_density: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            tag: Tag::OrdX,
            size_x: 2,
            size_b: 3,
            size_e: 3,
            size_a: 2,
            with_a: false,
            edge_density: 0.4,
            filt_density: 0.5,
        }
    }
}

/// A generated instance, both as core values and as its document.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub doc: InstanceDocument,
    pub base: Option<Arc<Preorder>>,
    pub p: Morphism,
    pub f: Option<Morphism>,
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn random_poset(rng: &mut ChaCha8Rng, prefix: &str, n: usize, density: f64) -> Preorder {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    Preorder::close_indices(names(prefix, n), &pairs).expect("generated order is well-formed")
}

/// Order on the source keeping only pairs the map respects.
fn compatible_poset(
    rng: &mut ChaCha8Rng,
    prefix: &str,
    n: usize,
    density: f64,
    map: &[usize],
    target: &Preorder,
) -> Preorder {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) && target.leq(map[i], map[j]) {
                pairs.push((i, j));
            }
        }
    }
    Preorder::close_indices(names(prefix, n), &pairs).expect("generated order is well-formed")
}

/// Antitone family from random generator sets: level at `x` is the union of
/// the generators at all `x′ ⩾ x`, optionally up-closed, clipped to `clip`.
fn random_filtration(
    rng: &mut ChaCha8Rng,
    base: &Preorder,
    order: &Preorder,
    density: f64,
    upclosed: bool,
    clip: Option<&Vec<u64>>,
    preimage: impl Fn(u64) -> u64,
) -> Vec<u64> {
    let n = order.n();
    let gens: Vec<u64> = (0..base.n())
        .map(|_| {
            let mut m = 0u64;
            for i in 0..n {
                if rng.gen_bool(density) {
                    m |= 1 << i;
                }
            }
            m
        })
        .collect();
    (0..base.n())
        .map(|x| {
            let mut level = 0u64;
            for x2 in 0..base.n() {
                if base.leq(x, x2) {
                    level |= gens[x2];
                }
            }
            if upclosed {
                level = order.up_closure(level);
            }
            if let Some(target_levels) = clip {
                level &= preimage(target_levels[x]);
            }
            level
        })
        .collect()
}

/// Monotone anchor into the base, assigned in index order; every candidate
/// set below the image anchor is nonempty, so no rejection is needed. For
/// the target object (`bound_by` absent) a draw can get stuck on a base
/// with incomparable picks, in which case the anchor falls back to a
/// constant map.
fn random_anchor(
    rng: &mut ChaCha8Rng,
    order: &Preorder,
    base: &Preorder,
    bound_by: Option<&dyn Fn(usize) -> usize>,
) -> Vec<usize> {
    let n = order.n();
    let mut vals: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let mut candidates: Vec<usize> = (0..base.n())
            .filter(|&x| {
                if let Some(bound) = bound_by {
                    if !base.leq(x, bound(i)) {
                        return false;
                    }
                }
                (0..i).all(|j| !order.leq(j, i) || base.leq(vals[j], x))
            })
            .collect();
        if candidates.is_empty() {
            // restart with a constant anchor, always monotone
            let c = rng.gen_range(0..base.n());
            return vec![c; n];
        }
        let pick = candidates.remove(rng.gen_range(0..candidates.len()));
        vals.push(pick);
    }
    vals
}

fn build_object(
    rng: &mut ChaCha8Rng,
    cfg: &GeneratorConfig,
    tag: Tag,
    base: Option<&Arc<Preorder>>,
    prefix: &str,
    n: usize,
    target: Option<(&Obj, &[usize])>,
) -> CliResult<Obj> {
    let order = match (tag.requires_discrete(), target) {
        (true, _) => Preorder::discrete(names(prefix, n)).expect("carrier is well-formed"),
        (false, None) => random_poset(rng, prefix, n, cfg.edge_density),
        (false, Some((t, map))) => {
            compatible_poset(rng, prefix, n, cfg.edge_density, map, &t.order)
        }
    };
    let obj = match tag {
        Tag::Ord => Obj::ord(order),
        Tag::C2 | Tag::Prod | Tag::OrdX => {
            let base = base.expect("tag needs a base").clone();
            let clip = target.map(|(t, _)| t.filt.as_ref().unwrap());
            let map = target.map(|(_, m)| m.to_vec());
            let filt = random_filtration(
                rng,
                &base,
                &order,
                cfg.filt_density,
                tag.requires_upclosed(),
                clip,
                |level| {
                    let mut m = 0u64;
                    if let Some(map) = &map {
                        for (i, &j) in map.iter().enumerate() {
                            if level >> j & 1 == 1 {
                                m |= 1 << i;
                            }
                        }
                    }
                    m
                },
            );
            Obj { tag, base: Some(base), order, filt: Some(filt), alpha: None }
        }
        Tag::LaxX => {
            let base = base.expect("tag needs a base").clone();
            let alpha = match target {
                None => random_anchor(rng, &order, &base, None),
                Some((t, map)) => {
                    let beta = t.alpha.clone().unwrap();
                    let map = map.to_vec();
                    random_anchor(rng, &order, &base, Some(&move |i| beta[map[i]]))
                }
            };
            Obj { tag, base: Some(base), order, filt: None, alpha: Some(alpha) }
        }
    };
    debug_assert!(obj.is_valid(), "generated object must validate: {:?}", obj.validate());
    Ok(obj)
}

/// Generate one instance: base `X`, objects `B` and `E`, morphism
/// `p : E → B`, and optionally `A` with `f : A → B`.
pub fn generate_instance(cfg: &GeneratorConfig) -> CliResult<GeneratedInstance> {
    if cfg.size_e > 0 && cfg.size_b == 0 {
        return Err(CliError::Input("a nonempty source needs a nonempty target".into()));
    }
    if cfg.with_a && cfg.size_a > 0 && cfg.size_b == 0 {
        return Err(CliError::Input("a nonempty `A` needs a nonempty target".into()));
    }
    if cfg.tag.has_base() && cfg.size_x == 0 {
        return Err(CliError::Input(format!("tag {} needs a nonempty base", cfg.tag)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let base = if cfg.tag.has_base() {
        Some(Arc::new(random_poset(&mut rng, "x", cfg.size_x, cfg.edge_density)))
    } else {
        None
    };
    let b = build_object(&mut rng, cfg, cfg.tag, base.as_ref(), "b", cfg.size_b, None)?;
    let p_map: Vec<usize> = (0..cfg.size_e).map(|_| rng.gen_range(0..cfg.size_b)).collect();
    let e = build_object(
        &mut rng,
        cfg,
        cfg.tag,
        base.as_ref(),
        "e",
        cfg.size_e,
        Some((&b, &p_map)),
    )?;
    let p = Morphism::new(e, b.clone(), p_map).map_err(|e| CliError::Input(e.to_string()))?;
    debug_assert!(p.is_valid(), "generated morphism must validate: {:?}", p.validate());

    let f = if cfg.with_a {
        let f_map: Vec<usize> =
            (0..cfg.size_a).map(|_| rng.gen_range(0..cfg.size_b)).collect();
        let a = build_object(
            &mut rng,
            cfg,
            cfg.tag,
            base.as_ref(),
            "a",
            cfg.size_a,
            Some((&b, &f_map)),
        )?;
        let f = Morphism::new(a, b.clone(), f_map).map_err(|e| CliError::Input(e.to_string()))?;
        debug_assert!(f.is_valid());
        Some(f)
    } else {
        None
    };

    let mut instance = LoadedInstance {
        base: base.clone(),
        objects: Default::default(),
        morphisms: Default::default(),
    };
    instance.objects.insert("B".into(), p.target.clone());
    instance.objects.insert("E".into(), p.source.clone());
    instance.morphisms.insert(
        "p".into(),
        NamedMorphism { from: "E".into(), to: "B".into(), morphism: p.clone() },
    );
    if let Some(f) = &f {
        instance.objects.insert("A".into(), f.source.clone());
        instance.morphisms.insert(
            "f".into(),
            NamedMorphism { from: "A".into(), to: "B".into(), morphism: f.clone() },
        );
    }
    Ok(GeneratedInstance { doc: document_of(&instance), base, p, f })
}

/// Document-only entry point for the CLI.
pub fn generate(cfg: &GeneratorConfig) -> CliResult<InstanceDocument> {
    Ok(generate_instance(cfg)?.doc)
}
