//! Command-line surface.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use descent_core::cat::Tag;
use descent_core::check::decide_effective_descent;
use descent_core::enumerate::Budget;
use descent_core::oracle::{bounded_oracle, BoundedVerdict, Refutation};
use descent_core::witness::{build_two_element_witness_named, WitnessReport};

use crate::doc::{
    self, obj_to_doc, morphism_to_doc, preorder_to_doc, CliError, CliResult, InstanceDocument,
};
use crate::gen::GeneratorConfig;
use crate::report::{collect_corpus, run_report, ReportOptions};
use crate::{EXIT_BUDGET, EXIT_DISAGREE, EXIT_INPUT, EXIT_OK};

const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Parser)]
#[command(
    name = "descent-kit",
    version,
    about = "Decide effective descent of finite filtered-preorder morphisms, build witnesses, and cross-check against a bounded monadicity oracle"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Load a document and report whether it validates.
    Validate {
        file: PathBuf,
        /// Reject relations that are not already reflexively/transitively
        /// closed instead of closing them.
        #[arg(long)]
        strict: bool,
    },
    /// Decide effective descent for one named morphism.
    Check {
        file: PathBuf,
        #[arg(long)]
        morphism: String,
        /// Emit the verdict as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Build the two-element counterexample at a failing triple `x,b1,b0`.
    Witness {
        file: PathBuf,
        #[arg(long)]
        morphism: String,
        /// Failing triple, comma-separated: base element, lower, upper.
        #[arg(long)]
        at: String,
        /// Write the witness document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the bounded monadicity oracle on one named morphism.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        morphism: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Generate a seeded random instance document.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "OrdX")]
        tag: String,
        #[arg(long, default_value_t = 2)]
        size_x: usize,
        #[arg(long, default_value_t = 3)]
        size_b: usize,
        #[arg(long, default_value_t = 3)]
        size_e: usize,
        /// Also generate an object `A` of this size with `f : A → B`.
        #[arg(long)]
        size_a: Option<usize>,
        #[arg(long, default_value_t = 0.4)]
        edge_density: f64,
        #[arg(long, default_value_t = 0.5)]
        filt_density: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a corpus (a directory of documents or a `gen:` spec) and emit
    /// the agreement report.
    Report {
        #[arg(long)]
        corpus: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Include every row in the output, not only disagreements.
        #[arg(long)]
        rows: bool,
    },
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("input error: {msg}");
            EXIT_INPUT
        }
        Err(CliError::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            EXIT_BUDGET
        }
    }
}

fn write_out(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cmd: Cmd) -> CliResult<i32> {
    match cmd {
        Cmd::Validate { file, strict } => match doc::load_path(&file, strict) {
            Ok(instance) => {
                println!(
                    "ok: {} objects, {} morphisms validate",
                    instance.objects.len(),
                    instance.morphisms.len()
                );
                Ok(EXIT_OK)
            }
            Err(e) => {
                eprintln!("{e}");
                Ok(EXIT_INPUT)
            }
        },
        Cmd::Check { file, morphism, json } => {
            let instance = doc::load_path(&file, false)?;
            let p = &instance.morphism(&morphism)?.morphism;
            let verdict = decide_effective_descent(p).map_err(CliError::from)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
            } else {
                println!("morphism `{morphism}`: {:?} by {}", verdict.status, verdict.theorem);
                for check in &verdict.checks {
                    match &check.result.witness {
                        None => println!("  {}: pass", check.name),
                        Some(w) => println!("  {}: FAIL {:?}", check.name, w),
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Cmd::Witness { file, morphism, at, out } => {
            let instance = doc::load_path(&file, false)?;
            let nm = instance.morphism(&morphism)?;
            let parts: Vec<&str> = at.split(',').map(|s| s.trim()).collect();
            if parts.len() != 3 {
                return Err(CliError::Input("--at needs `x,b1,b0`".into()));
            }
            let report =
                build_two_element_witness_named(&nm.morphism, parts[0], parts[1], parts[2])
                    .map_err(CliError::from)?;
            let doc = witness_document(nm, &report);
            write_out(out.as_ref(), &doc::to_json(&doc))?;
            Ok(EXIT_OK)
        }
        Cmd::Oracle { file, morphism, max_size, budget, json } => {
            let instance = doc::load_path(&file, false)?;
            let p = &instance.morphism(&morphism)?.morphism;
            let mut meter = Budget::new(budget);
            let verdict = bounded_oracle(p, max_size, &mut meter).map_err(CliError::from)?;
            let revalidated = verdict.revalidate(p).map_err(CliError::from)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&oracle_json(&verdict, revalidated)).unwrap()
                );
            } else {
                match &verdict.refutation {
                    Some(r) => println!(
                        "refutation: {} (re-validated: {revalidated})",
                        r.kind()
                    ),
                    None => println!(
                        "no refutation: ff ⩽ {:?}, es ⩽ {:?}{}",
                        verdict.ff_ok_up_to,
                        verdict.es_ok_up_to,
                        if verdict.budget_exhausted { " (budget exhausted)" } else { "" }
                    ),
                }
            }
            if verdict.budget_exhausted && verdict.refutation.is_none() {
                return Ok(EXIT_BUDGET);
            }
            Ok(EXIT_OK)
        }
        Cmd::Gen {
            seed,
            tag,
            size_x,
            size_b,
            size_e,
            size_a,
            edge_density,
            filt_density,
            out,
        } => {
            let cfg = GeneratorConfig {
                seed,
                tag: tag.parse::<Tag>().map_err(CliError::from)?,
                size_x,
                size_b,
                size_e,
                size_a: size_a.unwrap_or(0),
                with_a: size_a.is_some(),
                edge_density,
                filt_density,
            };
            let doc = crate::gen::generate(&cfg)?;
            write_out(out.as_ref(), &doc::to_json(&doc))?;
            Ok(EXIT_OK)
        }
        Cmd::Report { corpus, max_size, budget, rows } => {
            let items = collect_corpus(&corpus)?;
            let opts = ReportOptions {
                max_size,
                budget,
                negative_budget: budget.saturating_mul(10),
                keep_rows: rows,
            };
            let report = run_report(&items, &opts);
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            if report.disagreements.is_empty() {
                Ok(EXIT_OK)
            } else {
                Ok(EXIT_DISAGREE)
            }
        }
    }
}

/// Witness report as a re-loadable document: all four objects, the two
/// morphisms, and the claims.
fn witness_document(nm: &crate::doc::NamedMorphism, report: &WitnessReport) -> InstanceDocument {
    let p = &nm.morphism;
    let mut doc = InstanceDocument {
        base: Some(preorder_to_doc(p.source.base())),
        ..Default::default()
    };
    doc.objects.insert(nm.from.clone(), obj_to_doc(&p.source));
    doc.objects.insert(nm.to.clone(), obj_to_doc(&p.target));
    doc.objects.insert("witness_A".into(), obj_to_doc(&report.witness_object));
    doc.objects.insert("pullback".into(), obj_to_doc(&report.pullback_object));
    doc.morphisms.insert("p".into(), morphism_to_doc(&nm.from, &nm.to, p));
    doc.morphisms.insert(
        "f".into(),
        morphism_to_doc("witness_A", &nm.to, &report.witness_morphism),
    );
    doc.claims = report
        .claims
        .iter()
        .map(|c| serde_json::to_value(c).unwrap())
        .collect();
    doc
}

#[derive(Serialize)]
struct OracleJson {
    ff_ok_up_to: Option<usize>,
    es_ok_up_to: Option<usize>,
    refuted: bool,
    refutation: Option<RefutationJson>,
    revalidated: bool,
    budget_exhausted: bool,
    work_used: u64,
    via_f1: bool,
    objects_scanned: usize,
    algebras_scanned: usize,
}

#[derive(Serialize)]
struct RefutationJson {
    kind: String,
    a: Option<crate::doc::DocObject>,
    a_prime: Option<crate::doc::DocObject>,
    maps: Vec<Vec<usize>>,
    algebra_carrier: Option<crate::doc::DocObject>,
}

fn oracle_json(v: &BoundedVerdict, revalidated: bool) -> OracleJson {
    let refutation = v.refutation.as_ref().map(|r| match r {
        Refutation::Fullness { a, a_prime, algebra_map } => RefutationJson {
            kind: r.kind().to_string(),
            a: Some(obj_to_doc(&a.obj)),
            a_prime: Some(obj_to_doc(&a_prime.obj)),
            maps: vec![algebra_map.clone()],
            algebra_carrier: None,
        },
        Refutation::Faithfulness { a, a_prime, t1, t2 } => RefutationJson {
            kind: r.kind().to_string(),
            a: Some(obj_to_doc(&a.obj)),
            a_prime: Some(obj_to_doc(&a_prime.obj)),
            maps: vec![t1.clone(), t2.clone()],
            algebra_carrier: None,
        },
        Refutation::NonDescending { algebra } => RefutationJson {
            kind: r.kind().to_string(),
            a: None,
            a_prime: None,
            maps: vec![algebra.act.clone()],
            algebra_carrier: Some(obj_to_doc(&algebra.over.obj)),
        },
    });
    OracleJson {
        ff_ok_up_to: v.ff_ok_up_to,
        es_ok_up_to: v.es_ok_up_to,
        refuted: v.refuted(),
        refutation,
        revalidated,
        budget_exhausted: v.budget_exhausted,
        work_used: v.work_used,
        via_f1: v.via_f1,
        objects_scanned: v.objects_scanned,
        algebras_scanned: v.algebras_scanned,
    }
}
