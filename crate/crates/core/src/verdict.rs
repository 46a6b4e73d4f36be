//! Outcome types shared by the condition checkers and the theorem dispatcher.
//!
//! Every failed check carries a witness that can be re-validated without
//! trusting the checker that produced it: a chain with no lift, a pair that
//! escapes a filtration level, an uncovered fiber element. Verdicts bundle
//! the individual checks together with the rule that was applied.

use serde::{Deserialize, Serialize};

/// Result of a single decidable condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl CheckResult {
    pub fn pass() -> Self {
        CheckResult { passed: true, witness: None }
    }

    pub fn fail(witness: Witness) -> Self {
        CheckResult { passed: false, witness: Some(witness) }
    }
}

/// Failure datum attached to a failed check. All names refer to carrier
/// elements of the objects the check ran on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Witness {
    /// A pair `lo ⩽ hi` violating order preservation or up-closure.
    Pair { lo: String, hi: String },
    /// A reflexivity gap: the loop at `at` is missing.
    MissingLoop { at: String },
    /// A transitivity gap: `x ⩽ y ⩽ z` without `x ⩽ z`.
    MissingComposite { x: String, y: String, z: String },
    /// An ascending chain in the target with no lift through the map.
    UnliftableChain { chain: Vec<String> },
    /// A pair `b1 ⩽ b0` inside the filtration level at `x` with no lift
    /// staying inside the level.
    UnliftablePairAt { x: String, b1: String, b0: String },
    /// A pair `b1 ⩽ b0` with `x ⩽ β(b1)` and no lift `e1 ⩽ e0` with
    /// `x ⩽ ε(e1)`.
    UnliftableLaxPair { x: String, b1: String, b0: String },
    /// An element of the target not covered by the map; `x` names the
    /// filtration level, or is absent for plain surjectivity.
    Uncovered { x: Option<String>, b: String },
    /// No preimage of `b` has anchor equivalent to `β(b)`.
    NoEquivAnchoredPreimage { b: String },
    /// `a` and `b` are incomparable inside the down-set of `x`.
    Incomparable { x: String, a: String, b: String },
    /// `{a, b}` has no meet inside the down-set of `x`.
    MissingMeet { x: String, a: String, b: String },
    /// The down-set of `x` has no least element.
    NoLeastInDownset { x: String },
    /// The base has no bottom element.
    NoBottom,
}

/// Verdict status for an effective-descent question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    /// The applied rule is a characterization and all its conditions hold.
    Effective,
    /// The applied rule is a characterization (or gives a necessary
    /// condition) and some condition fails.
    NotEffective,
    /// Only a sufficiency rule applies and its conditions hold.
    EffectiveSufficient,
    /// No applicable rule decides the instance.
    Unknown,
}

/// A named condition evaluation recorded inside a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub result: CheckResult,
}

/// Outcome of the theorem dispatcher for one morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// Citation token for the rule that produced the status, e.g. `Thm4.2`.
    pub theorem: String,
    /// Every condition evaluated on the way to the status.
    pub checks: Vec<NamedCheck>,
}

impl Verdict {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.result)
    }
}

/// One verified statement inside a constructed witness report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Claim {
    pub fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Claim { name: name.to_string(), ok, detail: detail.into() }
    }
}
