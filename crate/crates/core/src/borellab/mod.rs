//! Experiment drivers: the constructive arguments about `P`-stable subspaces
//! executed on the compact-induction quotients and on principal series,
//! each producing a certificate that is re-checked independently.

mod generation;
mod give;
mod rep;
mod sequence;
mod transfer;

pub use generation::{generation_target, generation_trial, p_generation_evidence, p_generators, GenerationTrial};
pub use give::{lemma_next, prop_give, GiveOutcome, GiveVerification, NextBranch, NextOutcome};
pub use rep::{
    combine, fixed_in_span, hecke_sum, is_i1_fixed, iwahori_character, k_span, residuals, translate_span, twisted_sum,
    ut_translates, CindQuotientRep, KSpan, KSpanVerdict, PrincipalSeriesRep, RepHandle, TranslateCombination,
    TranslateSpan,
};
pub use sequence::{
    lemma_s_check, recursion, s_from_borel, s_reconstruction_elements, LemmaSOutcome, RecursionOutcome, DEFAULT_BOUND,
};
pub use transfer::{hom_transfer, TransferCase};

use serde::Serialize;
use serde_json::{json, Value};

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// One named check with its evidence and the truncation it was certified at.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: Value,
    pub certification: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, details: Value, certification: Value) -> Check {
        Check { name: name.into(), status, details, certification }
    }

    /// A check that could not run because a driver returned an error.
    pub fn errored(name: impl Into<String>, err: &crate::Error, certification: Value) -> Check {
        let status = if matches!(err, crate::Error::Inconclusive) { Status::Inconclusive } else { Status::Fail };
        Check::new(name, status, json!({ "error": err.to_string() }), certification)
    }
}

/// The evidence produced by one experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvidenceReport {
    pub experiment: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub seed: Option<u64>,
}

impl EvidenceReport {
    pub fn new(experiment: impl Into<String>, parameters: Value, seed: Option<u64>) -> EvidenceReport {
        EvidenceReport { experiment: experiment.into(), parameters, checks: Vec::new(), seed }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status != Status::Pass).collect()
    }
}
