//! Corpus agreement runs: checker verdict × oracle outcome.
//!
//! For every morphism in the corpus the dispatcher verdict is confronted
//! with independent evidence:
//!
//! * positive verdicts must survive the bounded oracle with no refutation;
//! * `NotEffective` must be certified, either by a re-validated two-element
//!   witness (when the pair-lifting condition is the failing one) or by a
//!   re-validated oracle refutation;
//! * `Unknown` is recorded and exempt.
//!
//! Any uncertified row lands in the disagreement archive, which must stay
//! empty for a run to pass. Instances may be processed in parallel; rows
//! are reported in instance order regardless of completion order.

use rayon::prelude::*;
use serde::Serialize;

use descent_core::cat::{f1_morphism, Morphism, Tag};
use descent_core::check::decide_effective_descent;
use descent_core::enumerate::Budget;
use descent_core::oracle::bounded_oracle;
use descent_core::verdict::{Status, Witness};
use descent_core::witness::build_two_element_witness_named;

use crate::doc::{CliError, CliResult};
use crate::gen::{generate_instance, GeneratorConfig};

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub instance: String,
    pub morphism: String,
    pub status: Status,
    pub theorem: String,
    pub certificate: String,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Matrix {
    pub effective_confirmed: usize,
    pub effective_refuted: usize,
    pub not_effective_certified: usize,
    pub not_effective_uncertified: usize,
    pub sufficient_confirmed: usize,
    pub sufficient_refuted: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub morphisms: usize,
    pub matrix: Matrix,
    pub disagreements: Vec<ReportRow>,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub max_size: usize,
    /// Work budget for confirming positive verdicts (the sweep is cut off
    /// honestly once spent).
    pub budget: u64,
    /// Work budget for hunting refutations of `NotEffective` verdicts;
    /// refutations usually sit at tiny sizes, so the generous default is
    /// rarely consumed.
    pub negative_budget: u64,
    /// Keep every row in the report, not only the disagreements.
    pub keep_rows: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            max_size: 3,
            budget: 50_000,
            negative_budget: 20_000_000,
            keep_rows: false,
        }
    }
}

/// Certify one morphism against the oracle; returns the row.
pub fn certify(instance: &str, name: &str, p: &Morphism, opts: &ReportOptions) -> ReportRow {
    let verdict = match decide_effective_descent(p) {
        Ok(v) => v,
        Err(e) => {
            return ReportRow {
                instance: instance.to_string(),
                morphism: name.to_string(),
                status: Status::Unknown,
                theorem: String::new(),
                certificate: format!("dispatcher error: {e}"),
                agree: false,
            }
        }
    };
    let (certificate, agree) = match verdict.status {
        Status::Effective | Status::EffectiveSufficient => {
            match bounded_oracle(p, opts.max_size, &mut Budget::new(opts.budget)) {
                Ok(v) if !v.refuted() => (
                    format!(
                        "oracle: no refutation (ff ⩽ {:?}, es ⩽ {:?}{})",
                        v.ff_ok_up_to,
                        v.es_ok_up_to,
                        if v.budget_exhausted { ", budget exhausted" } else { "" }
                    ),
                    true,
                ),
                Ok(v) => {
                    let kind = v.refutation.as_ref().unwrap().kind();
                    (format!("oracle refutation against positive verdict: {kind}"), false)
                }
                Err(e) => (format!("oracle error: {e}"), false),
            }
        }
        Status::NotEffective => certify_negative(p, &verdict, opts),
        Status::Unknown => ("no rule applies".to_string(), true),
    };
    ReportRow {
        instance: instance.to_string(),
        morphism: name.to_string(),
        status: verdict.status,
        theorem: verdict.theorem,
        certificate,
        agree,
    }
}

pub fn certify_negative(
    p: &Morphism,
    verdict: &descent_core::verdict::Verdict,
    opts: &ReportOptions,
) -> (String, bool) {
    // a failing pair-lifting condition has a constructive certificate
    let pair_witness = verdict
        .check("condition_b")
        .and_then(|c| c.witness.clone())
        .or_else(|| verdict.check("condition_b_prime").and_then(|c| c.witness.clone()));
    if let Some(w) = pair_witness {
        let (x, b1, b0) = match &w {
            Witness::UnliftablePairAt { x, b1, b0 } => (x, b1, b0),
            Witness::UnliftableLaxPair { x, b1, b0 } => (x, b1, b0),
            _ => unreachable!("pair conditions fail with pair witnesses"),
        };
        let in_ordx = if p.tag() == Tag::LaxX {
            f1_morphism(p).expect("lax morphisms transport")
        } else {
            p.clone()
        };
        match build_two_element_witness_named(&in_ordx, x, b1, b0) {
            Ok(report) if report.all_claims_hold() => {
                return (format!("two-element witness at ({x}, {b1}, {b0})"), true)
            }
            Ok(_) => return ("two-element witness claims failed".to_string(), false),
            Err(e) => return (format!("witness construction failed: {e}"), false),
        }
    }
    match bounded_oracle(p, opts.max_size, &mut Budget::new(opts.negative_budget)) {
        Ok(v) => match &v.refutation {
            Some(r) => match v.revalidate(p) {
                Ok(true) => (format!("oracle refutation: {}", r.kind()), true),
                Ok(false) => ("oracle refutation failed re-validation".to_string(), false),
                Err(e) => (format!("re-validation error: {e}"), false),
            },
            None => (
                format!(
                    "UNCONFIRMED: no oracle refutation up to size {} (budget exhausted: {})",
                    opts.max_size, v.budget_exhausted
                ),
                false,
            ),
        },
        Err(e) => (format!("oracle error: {e}"), false),
    }
}

/// Run a corpus.
pub fn run_report(items: &[(String, String, Morphism)], opts: &ReportOptions) -> Report {
    let mut rows: Vec<(usize, ReportRow)> = items
        .par_iter()
        .enumerate()
        .map(|(i, (instance, name, p))| (i, certify(instance, name, p, opts)))
        .collect();
    rows.sort_by_key(|(i, _)| *i);
    let rows: Vec<ReportRow> = rows.into_iter().map(|(_, r)| r).collect();

    let mut matrix = Matrix::default();
    for row in &rows {
        match (row.status, row.agree) {
            (Status::Effective, true) => matrix.effective_confirmed += 1,
            (Status::Effective, false) => matrix.effective_refuted += 1,
            (Status::NotEffective, true) => matrix.not_effective_certified += 1,
            (Status::NotEffective, false) => matrix.not_effective_uncertified += 1,
            (Status::EffectiveSufficient, true) => matrix.sufficient_confirmed += 1,
            (Status::EffectiveSufficient, false) => matrix.sufficient_refuted += 1,
            (Status::Unknown, _) => matrix.unknown += 1,
        }
    }
    let disagreements: Vec<ReportRow> = rows.iter().filter(|r| !r.agree).cloned().collect();
    Report {
        morphisms: rows.len(),
        matrix,
        disagreements,
        rows: if opts.keep_rows { rows } else { Vec::new() },
    }
}

/// Parse a `gen:` corpus spec, e.g.
/// `gen:seed=1,count=50,tag=OrdX,x=2,b=3,e=3,edge=0.4,filt=0.5`.
pub fn parse_gen_spec(spec: &str) -> CliResult<(GeneratorConfig, usize)> {
    let body = spec
        .strip_prefix("gen:")
        .ok_or_else(|| CliError::Input("generator spec must start with `gen:`".into()))?;
    let mut cfg = GeneratorConfig::default();
    let mut count = 1usize;
    for part in body.split(',').filter(|s| !s.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("bad generator spec entry `{part}`")))?;
        let bad = |unit: &str| CliError::Input(format!("bad {unit} in generator spec: `{value}`"));
        match key {
            "seed" => cfg.seed = value.parse().map_err(|_| bad("seed"))?,
            "count" => count = value.parse().map_err(|_| bad("count"))?,
            "tag" => cfg.tag = value.parse().map_err(|_| bad("tag"))?,
            "x" => cfg.size_x = value.parse().map_err(|_| bad("size"))?,
            "b" => cfg.size_b = value.parse().map_err(|_| bad("size"))?,
            "e" => cfg.size_e = value.parse().map_err(|_| bad("size"))?,
            "a" => {
                cfg.size_a = value.parse().map_err(|_| bad("size"))?;
                cfg.with_a = true;
            }
            "edge" => cfg.edge_density = value.parse().map_err(|_| bad("density"))?,
            "filt" => cfg.filt_density = value.parse().map_err(|_| bad("density"))?,
            other => return Err(CliError::Input(format!("unknown generator key `{other}`"))),
        }
    }
    Ok((cfg, count))
}

/// Expand a corpus argument (a directory of instance files or a `gen:`
/// spec) into named morphisms.
pub fn collect_corpus(corpus: &str) -> CliResult<Vec<(String, String, Morphism)>> {
    let mut items = Vec::new();
    if corpus.starts_with("gen:") {
        let (base_cfg, count) = parse_gen_spec(corpus)?;
        for k in 0..count {
            let mut cfg = base_cfg.clone();
            cfg.seed = base_cfg.seed.wrapping_add(k as u64);
            let inst = generate_instance(&cfg)?;
            let name = format!("gen-{}", cfg.seed);
            items.push((name.clone(), "p".to_string(), inst.p));
            if let Some(f) = inst.f {
                items.push((name, "f".to_string(), f));
            }
        }
        return Ok(items);
    }
    let dir = std::path::Path::new(corpus);
    if !dir.is_dir() {
        return Err(CliError::Input(format!(
            "corpus `{corpus}` is neither a directory nor a gen: spec"
        )));
    }
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("cannot read {corpus}: {e}")))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
        .collect();
    paths.sort();
    for path in paths {
        let instance = crate::doc::load_path(&path, false)?;
        let label = path.file_name().unwrap().to_string_lossy().to_string();
        for (name, nm) in &instance.morphisms {
            items.push((label.clone(), name.clone(), nm.morphism.clone()));
        }
    }
    Ok(items)
}
