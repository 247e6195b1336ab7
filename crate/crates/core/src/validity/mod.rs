//! Property-based soundness harness.
//!
//! Every suite samples random models and formulas from a [`SuiteConfig`],
//! checks a family of claims with the model checker and collects the
//! violations in a [`SuiteReport`]. Failure records carry the model
//! document and formula text so they can be replayed in isolation.

mod generator;
mod schemas;
mod suites;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use generator::{gen_formula, Generator};
pub use schemas::{
    axiom_instance, is_tautology, substitute, tautology_templates, Bindings, SchemaError, SchemaId,
};
pub use suites::{
    run_axiom_suite, run_axiom_suite_with, run_counterexample_repro, run_counterexample_repro_with,
    run_open_question_suite, run_quantifier_rule_suite, run_rule_suite, run_rule_suite_with,
    run_semantics_suite, run_suite, run_theorem_suite, run_translation_and_measure_suite, Premises,
    CONTEXT_FALSE, SUITE_NAMES,
};

use crate::checker::{CheckError, Checker};
use crate::model::DEFAULT_CAP;
use crate::parser::{parse_formula, ModelDocument};

/// Largest model size the suites accept.
pub const MAX_STATES_CEILING: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub model_count: usize,
    pub max_states: usize,
    pub n_agents: usize,
    pub n_atoms: usize,
    pub formula_depth: usize,
    pub enumeration_cap: usize,
    /// Random instantiations per schema and model.
    pub bindings_per_schema: usize,
    pub necessity_depth: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            model_count: 500,
            max_states: 5,
            n_agents: 3,
            n_atoms: 3,
            formula_depth: 3,
            enumeration_cap: DEFAULT_CAP,
            bindings_per_schema: 20,
            necessity_depth: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid suite configuration: {0}")]
pub struct ConfigError(pub String);

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("max_states", self.max_states),
            ("n_agents", self.n_agents),
            ("n_atoms", self.n_atoms),
            ("formula_depth", self.formula_depth),
            ("enumeration_cap", self.enumeration_cap),
            ("bindings_per_schema", self.bindings_per_schema),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(ConfigError(format!("{name} must be positive")));
        }
        if self.max_states > MAX_STATES_CEILING {
            return Err(ConfigError(format!(
                "max_states {} exceeds the ceiling of {MAX_STATES_CEILING}",
                self.max_states
            )));
        }
        if self.n_agents > 26 {
            return Err(ConfigError("at most 26 agents".into()));
        }
        Ok(())
    }
}

/// A violated claim with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub claim: String,
    /// Model document, with the failing state designated.
    pub model: Option<String>,
    pub state: Option<String>,
    pub formula: String,
    /// The verdict the claim required.
    pub expected: bool,
    pub witness: Option<String>,
    pub detail: Option<String>,
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("failure record has no model")]
    NoModel,
    #[error("model: {0}")]
    Model(#[from] crate::model::ModelError),
    #[error("formula: {0}")]
    Formula(#[from] crate::parser::ParseError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

impl Failure {
    /// Re-parses the record and evaluates the formula at its state.
    pub fn replay(&self, checker: &Checker) -> Result<bool, ReplayError> {
        let doc = self.model.as_deref().ok_or(ReplayError::NoModel)?;
        let m = ModelDocument::parse(doc)?.to_model()?;
        let state = self.state.as_deref().ok_or(ReplayError::NoModel)?;
        let w = Checker::state(&m, state)?;
        Ok(checker.eval(&m, w, &parse_formula(&self.formula)?)?)
    }

    /// True when replaying still contradicts the expected verdict.
    pub fn reproduces(&self, checker: &Checker) -> Result<bool, ReplayError> {
        Ok(self.replay(checker)? != self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    /// Cases abandoned because an enumeration exceeded the cap.
    pub skipped: usize,
    pub failures: Vec<Failure>,
    /// Informational results that never fail the suite.
    pub findings: Vec<Failure>,
    /// Per claim, the cases checked.
    pub per_claim: BTreeMap<String, usize>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            cases: 0,
            skipped: 0,
            failures: Vec::new(),
            findings: Vec::new(),
            per_claim: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn claim_cases(&self, claim: &str) -> usize {
        self.per_claim.get(claim).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {}: {} ({} cases, {} skipped, {} failures, {} findings)",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.skipped,
            self.failures.len(),
            self.findings.len()
        )?;
        for (claim, n) in &self.per_claim {
            writeln!(f, "  {claim}: {n}")?;
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        for fail in self.failures.iter().take(10) {
            writeln!(
                f,
                "  failure {}: {} at {}",
                fail.claim,
                fail.formula,
                fail.state.as_deref().unwrap_or("-")
            )?;
        }
        if self.failures.len() > 10 {
            writeln!(f, "  ... {} more", self.failures.len() - 10)?;
        }
        Ok(())
    }
}
