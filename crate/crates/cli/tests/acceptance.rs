//! Acceptance suite. One test per criterion; each prints a single
//! `criterion N (<name>): PASS/FAIL` line (visible with `--nocapture`)
//! and fails the build on FAIL.
//!
//! Oracle sweeps run at size bound 4 under work budgets: essential
//! surjectivity is driven to completion at size 4 for every positive
//! verdict (with a dedicated deepening pass when the interleaved sweep is
//! cut short), full faithfulness to at least size 2 (typically 3 — the
//! pair stage is quadratic and its completed depth is recorded, not
//! assumed). Refutation hunting for negative verdicts gets a much larger
//! budget; an uncertified negative verdict is a suite failure, never a
//! silent pass.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use descent_core::cat::{
    coequalizer, f1_inverse, f1_morphism, f1_object, pullback, Morphism, Obj, Tag,
};
use descent_core::check::{
    condition_b, condition_b_prime, decide_effective_descent, fiberwise_surjectivity,
    sim_preimage, unliftable_pairs,
};
use descent_core::enumerate::{
    hom_maps, morphism_instances, object_classes, shape_classes, Budget,
};
use descent_core::fixtures;
use descent_core::oracle::{algebra_descends, bounded_oracle, enumerate_algebras};
use descent_core::order::Preorder;
use descent_core::universal::{verify_coequalizer_universal, verify_pullback_universal};
use descent_core::verdict::{Status, Witness};
use descent_core::witness::{build_two_element_witness, construct_alpha_by_join};

use descent_kit::gen::{generate_instance, GeneratorConfig};
use descent_kit::report::{certify_negative, ReportOptions};

const ORACLE_BOUND: usize = 4;
const POSITIVE_BUDGET: u64 = 30_000;
const POSITIVE_ESCALATION: u64 = 600_000;
const ES_DEEPEN_BUDGET: u64 = 30_000_000;
const NEGATIVE_BUDGET: u64 = 30_000_000;

fn verdict_line(criterion: &str, pass: bool, detail: &str) {
    println!("criterion {criterion}: {} — {detail}", if pass { "PASS" } else { "FAIL" });
}

/// Confirm a positive verdict: no refutation at bound 4; essential
/// surjectivity completed through size 4 (deepening if needed); full
/// faithfulness completed through size ⩾ 2. Returns (ff, es) depths.
fn confirm_positive(p: &Morphism) -> Result<(usize, usize), String> {
    let v = bounded_oracle(p, ORACLE_BOUND, &mut Budget::new(POSITIVE_BUDGET))
        .map_err(|e| format!("oracle error: {e}"))?;
    if let Some(r) = &v.refutation {
        return Err(format!("oracle refutation {} against positive verdict", r.kind()));
    }
    let mut ff = v.ff_ok_up_to;
    let mut es = v.es_ok_up_to;
    if es < Some(ORACLE_BOUND) {
        let p_eff = if p.tag() == Tag::LaxX {
            f1_morphism(p).map_err(|e| e.to_string())?
        } else {
            p.clone()
        };
        let sweep = enumerate_algebras(&p_eff, ORACLE_BOUND, &mut Budget::new(ES_DEEPEN_BUDGET))
            .map_err(|e| format!("algebra sweep error: {e}"))?;
        if !sweep.complete {
            return Err("essential-surjectivity sweep exceeded its budget".into());
        }
        for alg in &sweep.algebras {
            let outcome = algebra_descends(&p_eff, alg).map_err(|e| e.to_string())?;
            if !outcome.descends() {
                return Err("non-descending algebra against positive verdict".into());
            }
        }
        es = Some(ORACLE_BOUND);
    }
    if ff < Some(2) {
        let v2 = bounded_oracle(p, ORACLE_BOUND, &mut Budget::new(POSITIVE_ESCALATION))
            .map_err(|e| format!("oracle error: {e}"))?;
        if let Some(r) = &v2.refutation {
            return Err(format!("oracle refutation {} against positive verdict", r.kind()));
        }
        ff = ff.max(v2.ff_ok_up_to);
        if ff < Some(2) {
            return Err("full-faithfulness probe below depth 2 after escalation".into());
        }
    }
    Ok((ff.unwrap(), es.unwrap()))
}

struct MicroStats {
    morphisms: usize,
    effective: usize,
    not_effective: usize,
    min_ff: usize,
    min_es: usize,
    failures: Vec<String>,
}

/// The shared protocol of criteria 1, 2 and 7: every instance either
/// oracle-confirmed (positive) or certified (negative).
fn run_micro(label: &str, items: &[(String, Morphism)], allow_unknown: bool) -> MicroStats {
    let opts = ReportOptions {
        max_size: ORACLE_BOUND,
        budget: POSITIVE_BUDGET,
        negative_budget: NEGATIVE_BUDGET,
        keep_rows: false,
    };
    let results: Vec<(usize, Status, Result<(usize, usize), String>)> = items
        .par_iter()
        .enumerate()
        .map(|(i, (_, p))| {
            let verdict = match decide_effective_descent(p) {
                Ok(v) => v,
                Err(e) => return (i, Status::Unknown, Err(format!("dispatcher error: {e}"))),
            };
            match verdict.status {
                Status::Effective | Status::EffectiveSufficient => {
                    (i, verdict.status, confirm_positive(p))
                }
                Status::NotEffective => {
                    let (cert, ok) = certify_negative(p, &verdict, &opts);
                    (i, verdict.status, if ok { Ok((0, 0)) } else { Err(cert) })
                }
                Status::Unknown => {
                    if allow_unknown {
                        (i, Status::Unknown, Ok((0, 0)))
                    } else {
                        (i, Status::Unknown, Err("verdict Unknown in a decided regime".into()))
                    }
                }
            }
        })
        .collect();

    let mut stats = MicroStats {
        morphisms: items.len(),
        effective: 0,
        not_effective: 0,
        min_ff: usize::MAX,
        min_es: usize::MAX,
        failures: Vec::new(),
    };
    for (i, status, res) in results {
        match status {
            Status::Effective | Status::EffectiveSufficient => stats.effective += 1,
            Status::NotEffective => stats.not_effective += 1,
            Status::Unknown => {}
        }
        match res {
            Ok((ff, es)) => {
                if matches!(status, Status::Effective | Status::EffectiveSufficient) {
                    stats.min_ff = stats.min_ff.min(ff);
                    stats.min_es = stats.min_es.min(es);
                }
            }
            Err(msg) => {
                if stats.failures.len() < 10 {
                    stats.failures.push(format!("{label} {}: {msg}", items[i].0));
                }
            }
        }
    }
    stats
}

fn micro_corpus(tag: Tag, base: &Arc<Preorder>, label: &str) -> Vec<(String, Morphism)> {
    morphism_instances(tag, Some(base), 3, 3)
        .unwrap()
        .into_iter()
        .enumerate()
        .map(|(i, p)| (format!("{label}#{i}"), p))
        .collect()
}

#[test]
fn criterion_1_micro_corpus_ordx() {
    let t0 = Instant::now();
    let mut items = micro_corpus(Tag::OrdX, &fixtures::x1(), "X1");
    items.extend(micro_corpus(Tag::OrdX, &fixtures::x2(), "X2"));
    let stats = run_micro("OrdX", &items, false);
    let pass = stats.failures.is_empty();
    verdict_line(
        "1 (micro-corpus consistency, OrdX over X1/X2, bound 4)",
        pass,
        &format!(
            "{} morphisms ({} effective, {} not), min depths ff {} es {}, {:?}",
            stats.morphisms, stats.effective, stats.not_effective, stats.min_ff, stats.min_es,
            t0.elapsed()
        ),
    );
    assert!(pass, "failures: {:#?}", stats.failures);
}

#[test]
fn criterion_2_micro_corpus_prod_and_c2() {
    let t0 = Instant::now();
    let mut items = micro_corpus(Tag::Prod, &fixtures::x1(), "Prod/X1");
    items.extend(micro_corpus(Tag::Prod, &fixtures::x2(), "Prod/X2"));
    items.extend(micro_corpus(Tag::C2, &fixtures::x1(), "C2/X1"));
    items.extend(micro_corpus(Tag::C2, &fixtures::x2(), "C2/X2"));
    let stats = run_micro("Prod/C2", &items, false);
    let pass = stats.failures.is_empty();
    verdict_line(
        "2 (micro-corpus consistency, Prod and C2, bound 4)",
        pass,
        &format!(
            "{} morphisms ({} effective, {} not), min depths ff {} es {}, {:?}",
            stats.morphisms, stats.effective, stats.not_effective, stats.min_ff, stats.min_es,
            t0.elapsed()
        ),
    );
    assert!(pass, "failures: {:#?}", stats.failures);
}

fn varied_config(rng: &mut ChaCha8Rng, tag: Tag, max_x: usize, max_b: usize, max_e: usize) -> GeneratorConfig {
    GeneratorConfig {
        seed: rng.gen(),
        tag,
        size_x: rng.gen_range(1..=max_x),
        size_b: rng.gen_range(1..=max_b),
        size_e: rng.gen_range(0..=max_e),
        size_a: 0,
        with_a: false,
        edge_density: [0.15, 0.3, 0.5, 0.7][rng.gen_range(0..4)],
        filt_density: [0.2, 0.4, 0.6, 0.8][rng.gen_range(0..4)],
    }
}

#[test]
fn criterion_3_witness_soundness() {
    let t0 = Instant::now();
    const INSTANCES: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0xDE5C_0003);
    let configs: Vec<GeneratorConfig> =
        (0..INSTANCES).map(|_| varied_config(&mut rng, Tag::OrdX, 4, 5, 5)).collect();
    let outcomes: Vec<Result<usize, String>> = configs
        .par_iter()
        .map(|cfg| {
            let inst = generate_instance(cfg).map_err(|e| e.to_string())?;
            let p = inst.p;
            let mut count = 0usize;
            for (x, b1, b0) in unliftable_pairs(&p).map_err(|e| e.to_string())? {
                let report =
                    build_two_element_witness(&p, x, b1, b0).map_err(|e| e.to_string())?;
                if !report.all_claims_hold() {
                    return Err(format!(
                        "claims failed at seed {} triple ({x},{b1},{b0}): {:?}",
                        cfg.seed, report.claims
                    ));
                }
                count += 1;
            }
            Ok(count)
        })
        .collect();
    let mut witnesses = 0usize;
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(k) => witnesses += k,
            Err(e) => failures.push(e),
        }
    }
    let pass = failures.is_empty() && witnesses >= 10_000;
    verdict_line(
        "3 (witness soundness on random corpus)",
        pass,
        &format!("{INSTANCES} instances, {witnesses} witnesses re-validated, {:?}", t0.elapsed()),
    );
    assert!(pass, "failures: {:#?}", failures.iter().take(5).collect::<Vec<_>>());
}

#[test]
fn criterion_4_f1_transport_identities() {
    let t0 = Instant::now();
    const INSTANCES: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0xDE5C_0004);
    let configs: Vec<GeneratorConfig> =
        (0..INSTANCES).map(|_| varied_config(&mut rng, Tag::LaxX, 4, 5, 5)).collect();
    let failures: Vec<String> = configs
        .par_iter()
        .filter_map(|cfg| {
            let p = match generate_instance(cfg) {
                Ok(inst) => inst.p,
                Err(e) => return Some(format!("seed {}: {e}", cfg.seed)),
            };
            let f1p = f1_morphism(&p).ok()?;
            let bp = condition_b_prime(&p).unwrap();
            let bb = condition_b(&f1p).unwrap();
            if bp.passed != bb.passed {
                return Some(format!("seed {}: (b′) vs (b) disagree", cfg.seed));
            }
            match (&bp.witness, &bb.witness) {
                (None, None) => {}
                (
                    Some(Witness::UnliftableLaxPair { x, b1, b0 }),
                    Some(Witness::UnliftablePairAt { x: x2, b1: c1, b0: c0 }),
                ) if x == x2 && b1 == c1 && b0 == c0 => {}
                other => return Some(format!("seed {}: witness mismatch {other:?}", cfg.seed)),
            }
            let sim = sim_preimage(&p).unwrap();
            let fs = fiberwise_surjectivity(&f1p).unwrap();
            if sim.passed != fs.passed {
                return Some(format!(
                    "seed {}: ∼-preimage vs fiberwise surjectivity disagree",
                    cfg.seed
                ));
            }
            None
        })
        .collect();
    let pass = failures.is_empty();
    verdict_line(
        "4 (transport identities along the filtration functor)",
        pass,
        &format!("{INSTANCES} random instances, zero mismatches required, {:?}", t0.elapsed()),
    );
    assert!(pass, "failures: {:#?}", failures.iter().take(5).collect::<Vec<_>>());
}

#[test]
fn criterion_5_filtration_functor_image() {
    let t0 = Instant::now();
    let mut bases: Vec<Arc<Preorder>> = Vec::new();
    for n in 1..=3 {
        for shape in shape_classes(Tag::Ord, None, n) {
            bases.push(Arc::new(shape.to_obj(Tag::Ord, None, "x").unwrap().order));
        }
    }
    let mut checked_objects = 0usize;
    let mut checked_pairs = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for base in &bases {
        // the partial inverse succeeds exactly when every anchor set has a
        // largest element, and then reproduces the filtration
        for n in 0..=3 {
            for class in object_classes(Tag::OrdX, Some(base), n, "a").unwrap() {
                checked_objects += 1;
                let a = &class.obj;
                let expect = (0..a.carrier_len()).all(|i| {
                    let candidates: Vec<usize> = (0..base.n())
                        .filter(|&x| a.filtration_at(x) >> i & 1 == 1)
                        .collect();
                    candidates
                        .iter()
                        .any(|&m| candidates.iter().all(|&x| base.leq(x, m)))
                });
                match f1_inverse(a).unwrap() {
                    Ok(lax) => {
                        if !expect {
                            failures.push("inverse succeeded unexpectedly".into());
                        }
                        let back = f1_object(&lax).unwrap();
                        if back.filt != a.filt {
                            failures.push("roundtrip changed the filtration".into());
                        }
                    }
                    Err(_) if !expect => {}
                    Err(w) => failures.push(format!("inverse failed unexpectedly at {}", w.elem)),
                }
            }
        }
        // full faithfulness: hom-sets agree elementwise with their images
        let mut lax_objs: Vec<Obj> = Vec::new();
        for n in 0..=3 {
            for class in object_classes(Tag::LaxX, Some(base), n, "a").unwrap() {
                lax_objs.push(class.obj);
            }
        }
        for l in &lax_objs {
            for l2 in &lax_objs {
                checked_pairs += 1;
                let direct = hom_maps(l, l2);
                let image = hom_maps(&f1_object(l).unwrap(), &f1_object(l2).unwrap());
                if direct != image {
                    failures.push(format!(
                        "hom-sets differ over base {:?}",
                        base.elements()
                    ));
                }
            }
        }
    }
    let pass = failures.is_empty();
    verdict_line(
        "5 (filtration-functor image and full faithfulness, exhaustive ⩽ 3)",
        pass,
        &format!(
            "{} bases, {checked_objects} objects, {checked_pairs} hom-set pairs, {:?}",
            bases.len(),
            t0.elapsed()
        ),
    );
    assert!(pass, "failures: {:#?}", failures.iter().take(5).collect::<Vec<_>>());
}

/// Random locally-complete base; the anchor assignment mirrors the
/// generator's topological sampler.
fn random_lax_object(rng: &mut ChaCha8Rng, base: &Arc<Preorder>, prefix: &str, n: usize) -> Obj {
    let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.4) {
                pairs.push((i, j));
            }
        }
    }
    let order = Preorder::close_indices(names, &pairs).unwrap();
    let mut alpha: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let candidates: Vec<usize> = (0..base.n())
            .filter(|&x| (0..i).all(|j| !order.leq(j, i) || base.leq(alpha[j], x)))
            .collect();
        if candidates.is_empty() {
            let c = rng.gen_range(0..base.n());
            alpha = vec![c; n];
            break;
        }
        alpha.push(candidates[rng.gen_range(0..candidates.len())]);
    }
    alpha.resize(n, alpha.first().copied().unwrap_or(0));
    Obj::laxx(base.clone(), order, alpha).unwrap()
}

/// Random filtered preorder: a random order with an antitone family of
/// up-closed levels built from generator sets pushed up along the base.
fn random_ordx_object(rng: &mut ChaCha8Rng, base: &Arc<Preorder>, prefix: &str, n: usize) -> Obj {
    let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.4) {
                pairs.push((i, j));
            }
        }
    }
    let order = Preorder::close_indices(names, &pairs).unwrap();
    let gens: Vec<u64> = (0..base.n())
        .map(|_| {
            let mut m = 0u64;
            for i in 0..n {
                if rng.gen_bool(0.5) {
                    m |= 1 << i;
                }
            }
            m
        })
        .collect();
    let filt: Vec<u64> = (0..base.n())
        .map(|x| {
            let mut level = 0u64;
            for x2 in 0..base.n() {
                if base.leq(x, x2) {
                    level |= gens[x2];
                }
            }
            order.up_closure(level)
        })
        .collect();
    let obj = Obj::ordx(base.clone(), order, filt).unwrap();
    assert!(obj.is_valid());
    obj
}

/// A fiberwise-surjective lax morphism onto `b`: a section anchored exactly
/// like the target plus random extra elements.
fn section_morphism(rng: &mut ChaCha8Rng, b: &Obj, extras: usize) -> Morphism {
    let base = b.base().clone();
    let beta = b.alpha.clone().unwrap();
    let nb = b.carrier_len();
    let ne = nb + extras;
    let mut names: Vec<String> = (0..nb).map(|i| format!("s{i}")).collect();
    names.extend((0..extras).map(|j| format!("t{j}")));
    let mut p_map: Vec<usize> = (0..nb).collect();
    let mut eps: Vec<usize> = beta.clone();
    for _ in 0..extras {
        let target = rng.gen_range(0..nb);
        p_map.push(target);
        let below: Vec<usize> =
            (0..base.n()).filter(|&x| base.leq(x, beta[target])).collect();
        eps.push(below[rng.gen_range(0..below.len())]);
    }
    let mut pairs = Vec::new();
    for i in 0..ne {
        for j in 0..ne {
            if i == j {
                continue;
            }
            let keep = if i < nb && j < nb {
                b.order.leq(i, j)
            } else {
                (i < j) && rng.gen_bool(0.3)
            };
            if keep && b.order.leq(p_map[i], p_map[j]) && base.leq(eps[i], eps[j]) {
                pairs.push((i, j));
            }
        }
    }
    let order = Preorder::close_indices(names, &pairs).unwrap();
    let e = Obj::laxx(base, order, eps).unwrap();
    let p = Morphism::new(e, b.clone(), p_map).unwrap();
    assert!(p.is_valid(), "section morphism must validate");
    p
}

#[test]
fn criterion_6_alpha_by_join() {
    let t0 = Instant::now();
    const TARGET: usize = 1_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0xDE5C_0006);
    let mut successes = 0usize;
    let mut image_built = 0usize;
    let mut conditioned = 0usize;
    let mut failures: Vec<String> = Vec::new();
    let mut attempts = 0usize;
    while successes < TARGET && attempts < 40_000 {
        attempts += 1;
        let nx = rng.gen_range(1..=4);
        let mut xpairs = Vec::new();
        for i in 0..nx {
            for j in i + 1..nx {
                if rng.gen_bool(0.5) {
                    xpairs.push((i, j));
                }
            }
        }
        let base = Arc::new(
            Preorder::close_indices((0..nx).map(|i| format!("x{i}")).collect(), &xpairs)
                .unwrap(),
        );
        if !base.lattice_report().locally_complete {
            continue;
        }
        let nb = rng.gen_range(1..=4);
        let b = random_lax_object(&mut rng, &base, "b", nb);
        let extras = rng.gen_range(0..=2);
        let p = section_morphism(&mut rng, &b, extras);
        let f1b = f1_object(&b).unwrap();
        let f1p = f1_morphism(&p).unwrap();

        let use_image = rng.gen_bool(0.5);
        let (a_obj, f_map) = if use_image {
            let na = rng.gen_range(1..=4);
            let a_lax = random_lax_object(&mut rng, &base, "a", na);
            let a = f1_object(&a_lax).unwrap();
            let homs = hom_maps(&a, &f1b);
            if homs.is_empty() {
                continue;
            }
            let pick = rng.gen_range(0..homs.len());
            (a, homs[pick].clone())
        } else {
            // unconstrained filtered object, conditioned on the pullback
            // landing in the functor image
            let n = rng.gen_range(1..=4);
            let a = random_ordx_object(&mut rng, &base, "a", n);
            let homs = hom_maps(&a, &f1b);
            if homs.is_empty() {
                continue;
            }
            let pick = rng.gen_range(0..homs.len());
            (a, homs[pick].clone())
        };
        let f = Morphism::new(a_obj, f1b.clone(), f_map).unwrap();
        if !use_image {
            let pb = pullback(&f1p, &f).unwrap();
            if f1_inverse(&pb.object).unwrap().is_err() {
                continue; // hypotheses not satisfied; not counted
            }
            conditioned += 1;
        } else {
            image_built += 1;
        }
        match construct_alpha_by_join(&f, &p) {
            Ok(_) => successes += 1,
            Err(e) => failures.push(format!("attempt {attempts}: {e}")),
        }
    }
    let pass = failures.is_empty() && successes >= TARGET;
    verdict_line(
        "6 (join-built anchor never fails under its hypotheses)",
        pass,
        &format!(
            "{successes} instances verified ({image_built} image-built, {conditioned} conditioned), {:?}",
            t0.elapsed()
        ),
    );
    assert!(pass, "successes {successes}, failures: {:#?}", failures.iter().take(5).collect::<Vec<_>>());
}

#[test]
fn criterion_7_chain_regime() {
    let t0 = Instant::now();
    let mut items = Vec::new();
    for len in 1..=3 {
        let base = fixtures::chain_base(len);
        items.extend(micro_corpus(Tag::LaxX, &base, &format!("chain{len}")));
    }
    // over chains the sharp rule must always apply
    let mut rule_failures = Vec::new();
    for (label, p) in &items {
        let v = decide_effective_descent(p).unwrap();
        if v.theorem != "Thm5.6" || matches!(v.status, Status::Unknown | Status::EffectiveSufficient)
        {
            rule_failures.push(format!("{label}: {:?} by {}", v.status, v.theorem));
        }
    }
    let stats = run_micro("LaxX", &items, false);
    let pass = stats.failures.is_empty() && rule_failures.is_empty();
    verdict_line(
        "7 (chain regime: never Unknown, matches the transported oracle)",
        pass,
        &format!(
            "{} morphisms over chains ⩽ 3 ({} effective, {} not), min depths ff {} es {}, {:?}",
            stats.morphisms, stats.effective, stats.not_effective, stats.min_ff, stats.min_es,
            t0.elapsed()
        ),
    );
    assert!(
        pass,
        "rule failures: {:#?}, consistency failures: {:#?}",
        rule_failures.iter().take(5).collect::<Vec<_>>(),
        stats.failures
    );
}

#[test]
fn criterion_8_universal_properties() {
    let t0 = Instant::now();
    let mut pullbacks = 0usize;
    let mut coequalizers = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for tag in Tag::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(0xDE5C_0008 ^ tag as u64);
        for round in 0..8 {
            let cfg = GeneratorConfig {
                seed: rng.gen(),
                tag,
                size_x: 2,
                size_b: rng.gen_range(1..=3),
                size_e: rng.gen_range(0..=3),
                size_a: rng.gen_range(0..=3),
                with_a: true,
                edge_density: 0.45,
                filt_density: 0.5,
            };
            let inst = match generate_instance(&cfg) {
                Ok(i) => i,
                Err(e) => {
                    failures.push(format!("{tag} round {round}: generator: {e}"));
                    continue;
                }
            };
            let p = inst.p;
            let f = inst.f.expect("generated with A");
            // apex pool: the three corners plus one 4-element object; the
            // same seed re-draws the same base, keeping everything in one
            // category
            let big = generate_instance(&GeneratorConfig {
                size_b: 4,
                size_e: 0,
                with_a: false,
                ..cfg.clone()
            })
            .unwrap();
            let apexes =
                vec![p.source.clone(), f.source.clone(), p.target.clone(), big.p.target.clone()];
            match verify_pullback_universal(&p, &f, &apexes) {
                Ok(()) => pullbacks += 1,
                Err(descent_core::Error::Input(msg)) if msg.contains("not locally complete") => {}
                Err(e) => failures.push(format!("{tag} round {round}: pullback: {e}")),
            }
            // parallel pairs out of the hom-set, plus the degenerate pair
            let homs = hom_maps(&f.source, &p.target);
            let mut picked: Vec<&Vec<usize>> = homs.iter().take(2).collect();
            picked.push(&f.map);
            for g_map in picked {
                let g = Morphism::new(f.source.clone(), p.target.clone(), g_map.clone()).unwrap();
                match verify_coequalizer_universal(&f, &g, &apexes) {
                    Ok(()) => coequalizers += 1,
                    Err(descent_core::Error::Input(msg))
                        if msg.contains("coequalizer does not exist") => {}
                    Err(e) => failures.push(format!("{tag} round {round}: coequalizer: {e}")),
                }
            }
        }
    }
    // the partial LaxX constructions fail loudly on the vee
    {
        let vee = fixtures::xv();
        let pt = |name: &str, anchor: usize| {
            Obj::laxx(
                vee.clone(),
                Preorder::discrete(vec![name.to_string()]).unwrap(),
                vec![anchor],
            )
            .unwrap()
        };
        let b = pt("b", 2);
        let p = Morphism::new(pt("e", 0), b.clone(), vec![0]).unwrap();
        let f = Morphism::new(pt("a", 1), b, vec![0]).unwrap();
        if pullback(&p, &f).is_ok() {
            failures.push("vee pullback should report a missing meet".into());
        }
        // collapsing two anchors with no upper bound has no quotient anchor
        let flat = Arc::new(
            Preorder::discrete(vec!["x0".to_string(), "x1".to_string()]).unwrap(),
        );
        let two = Obj::laxx(
            flat.clone(),
            Preorder::discrete(vec!["u".to_string(), "v".to_string()]).unwrap(),
            vec![0, 1],
        )
        .unwrap();
        let pt2 = Obj::laxx(
            flat,
            Preorder::discrete(vec!["t".to_string()]).unwrap(),
            vec![0],
        )
        .unwrap();
        let fu = Morphism::new(pt2.clone(), two.clone(), vec![0]).unwrap();
        let fv = Morphism::new(pt2, two, vec![1]).unwrap();
        if coequalizer(&fu, &fv).is_ok() {
            failures.push("discrete-base coequalizer should report a missing join".into());
        }
    }
    let pass = failures.is_empty() && pullbacks >= 30 && coequalizers >= 60;
    verdict_line(
        "8 (universal properties by exhaustive mediator search)",
        pass,
        &format!("{pullbacks} pullbacks, {coequalizers} coequalizers verified, {:?}", t0.elapsed()),
    );
    assert!(pass, "failures: {:#?}", failures.iter().take(5).collect::<Vec<_>>());
}

#[test]
fn criterion_9_determinism() {
    let t0 = Instant::now();
    let bin = env!("CARGO_BIN_EXE_descent-kit");
    let fixture = |name: &str| {
        format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    };
    let run = |args: &[&str]| {
        let out = std::process::Command::new(bin)
            .args(args)
            .output()
            .expect("binary runs");
        (out.status.code(), out.stdout)
    };
    let fixf = fixture("fixf.json");
    let fixl = fixture("fixl.json");
    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "--seed", "5", "--tag", "OrdX", "--size-x", "2", "--size-b", "3", "--size-e", "3"],
        vec!["gen", "--seed", "5", "--tag", "LaxX", "--size-x", "3", "--size-b", "4", "--size-e", "4"],
        vec!["check", &fixf, "--morphism", "p", "--json"],
        vec!["check", &fixl, "--morphism", "p", "--json"],
        vec!["witness", &fixf, "--morphism", "p", "--at", "*,b1,b0"],
        vec!["oracle", &fixf, "--morphism", "p", "--max-size", "2", "--json"],
        vec!["report", "--corpus", "gen:seed=11,count=12,tag=Prod,x=2,b=3,e=3", "--max-size", "2"],
    ];
    let mut failures = Vec::new();
    for args in &commands {
        let first = run(args);
        let second = run(args);
        if first != second {
            failures.push(format!("nondeterministic output: {args:?}"));
        }
        if first.1.is_empty() {
            failures.push(format!("no output: {args:?}"));
        }
    }
    let pass = failures.is_empty();
    verdict_line(
        "9 (byte-identical reruns of every command)",
        pass,
        &format!("{} commands run twice, {:?}", commands.len(), t0.elapsed()),
    );
    assert!(pass, "failures: {:#?}", failures);
}
