use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::generator::Generator;
use super::schemas::{
    axiom_instance, is_tautology, tautology_templates, Bindings, SchemaError, SchemaId,
};
use super::{ConfigError, Failure, SuiteConfig, SuiteReport};
use crate::checker::{CheckError, Checker, WitnessReport};
use crate::formula::{order_lt, Agent, Formula, Group, NecessityForm, Stratum};
use crate::model::fixtures::{FIGURE1, FIGURE2};
use crate::model::{
    agent_unions, contract, definable_formula, distinct_choices, random_model, EpistemicModel,
};
use crate::parser::{render_formula, ModelDocument};
use crate::translate::pal_to_el;

pub const SUITE_NAMES: [&str; 8] = [
    "axioms",
    "rules",
    "quantifier-rules",
    "theorems",
    "repro",
    "translation-measures",
    "open-questions",
    "semantics",
];

/// Runs a suite by name.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, ConfigError> {
    cfg.validate()?;
    Ok(match name {
        "axioms" => run_axiom_suite(cfg),
        "rules" => run_rule_suite(cfg),
        "quantifier-rules" => run_quantifier_rule_suite(cfg),
        "theorems" => run_theorem_suite(cfg),
        "repro" => run_counterexample_repro(),
        "translation-measures" => run_translation_and_measure_suite(cfg),
        "open-questions" => run_open_question_suite(cfg),
        "semantics" => run_semantics_suite(cfg),
        _ => {
            return Err(ConfigError(format!(
                "unknown suite `{name}` (expected one of {})",
                SUITE_NAMES.join(", ")
            )))
        }
    })
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn mix(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix(seed ^ splitmix(stream ^ splitmix(index)))
}

fn sample_model(cfg: &SuiteConfig, stream: u64, i: usize) -> EpistemicModel {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(cfg.seed, stream, i as u64));
    let n = rng.gen_range(1..=cfg.max_states);
    random_model(rng.gen(), n, cfg.n_agents, cfg.n_atoms)
}

fn case_generator(cfg: &SuiteConfig, stream: u64, i: usize, m: &EpistemicModel) -> Generator {
    Generator::new(
        mix(cfg.seed, stream.wrapping_add(1 << 32), i as u64),
        m.atoms(),
        m.agents(),
    )
}

fn all_agents(m: &EpistemicModel) -> Group {
    m.agents().iter().cloned().collect()
}

fn minus(all: &Group, g: &Group) -> Group {
    all.difference(g).cloned().collect()
}

fn union(g: &Group, h: &Group) -> Group {
    g.union(h).cloned().collect()
}

fn model_text(m: &EpistemicModel, w: usize) -> String {
    ModelDocument::from_model(m, Some(w)).render()
}

struct Ctx {
    checker: Checker,
    report: SuiteReport,
    skips: BTreeMap<String, usize>,
}

impl Ctx {
    fn new(name: &str, cfg: &SuiteConfig) -> Self {
        Ctx {
            checker: Checker::new(cfg.enumeration_cap),
            report: SuiteReport::new(name),
            skips: BTreeMap::new(),
        }
    }

    fn count(&mut self, claim: &str) {
        self.report.cases += 1;
        *self.report.per_claim.entry(claim.to_string()).or_default() += 1;
    }

    fn skip(&mut self, claim: &str) {
        self.report.skipped += 1;
        *self.skips.entry(claim.to_string()).or_default() += 1;
    }

    fn record(
        &mut self,
        claim: &str,
        at: Option<(&EpistemicModel, usize)>,
        f: &Formula,
        expected: bool,
        witness: Option<String>,
        detail: Option<String>,
    ) -> Failure {
        Failure {
            claim: claim.to_string(),
            model: at.map(|(m, w)| model_text(m, w)),
            state: at.map(|(m, w)| m.state_name(w).to_string()),
            formula: render_formula(f),
            expected,
            witness,
            detail,
        }
    }

    fn fail(
        &mut self,
        claim: &str,
        at: Option<(&EpistemicModel, usize)>,
        f: &Formula,
        expected: bool,
        detail: Option<String>,
    ) {
        let r = self.record(claim, at, f, expected, None, detail);
        self.report.failures.push(r);
    }

    /// Handles an evaluation error: cap overruns are skips, anything else
    /// is a failure of the claim.
    fn error(&mut self, claim: &str, m: &EpistemicModel, f: &Formula, e: CheckError) {
        if e.is_cap_exceeded() {
            self.skip(claim);
        } else {
            self.count(claim);
            self.fail(claim, Some((m, 0)), f, true, Some(e.to_string()));
        }
    }

    /// Checks that `f` holds at every state of `m`, returning the first
    /// state where it does not.
    fn valid_on(&mut self, claim: &str, m: &EpistemicModel, f: &Formula) -> Option<usize> {
        match self.checker.truth_set(m, f) {
            Ok(s) => {
                self.count(claim);
                let w = s.complement().first();
                if let Some(w) = w {
                    self.fail(claim, Some((m, w)), f, true, None);
                }
                w
            }
            Err(e) => {
                self.error(claim, m, f, e);
                None
            }
        }
    }

    fn finish(mut self) -> SuiteReport {
        for (claim, n) in &self.skips {
            self.report.notes.push(format!(
                "{claim}: {n} cases skipped (enumeration cap exceeded)"
            ));
        }
        self.report
    }
}

// ---------------------------------------------------------------------------
// Axioms

fn random_tautology(gen: &mut Generator) -> Formula {
    let vars: Vec<Formula> = ["x0", "x1", "x2"]
        .iter()
        .map(|v| Formula::atom(*v))
        .collect();
    for _ in 0..8 {
        let s = gen.propositional(&vars, 3);
        if is_tautology(&s) {
            return s;
        }
    }
    tautology_templates().choose(gen.rng()).unwrap().clone()
}

fn random_bindings(gen: &mut Generator, id: SchemaId, all: &Group, depth: usize) -> Bindings {
    let mut b = Bindings {
        all: Some(all.clone()),
        ..Bindings::default()
    };
    match id {
        SchemaId::A0 | SchemaId::C0 => {
            let skeleton = random_tautology(gen);
            b.substitution = (0..skeleton.atoms().len())
                .map(|_| gen.formula(Stratum::Corgal, depth))
                .collect();
            b.skeleton = Some(skeleton);
            return b;
        }
        SchemaId::A5 => {
            b.atom = match gen.atom() {
                Formula::Atom(p) => Some(p),
                _ => None,
            };
        }
        _ => {}
    }
    b.phi = Some(gen.formula(Stratum::Corgal, depth));
    b.psi = Some(gen.formula(Stratum::Corgal, depth));
    b.chi = Some(gen.formula(Stratum::Corgal, depth));
    b.agent = Some(gen.agent());
    let g = gen.group();
    b.psi_g = Some(gen.group_knowledge(&g, 2));
    let rest = minus(all, &g);
    b.h = Some(
        rest.into_iter()
            .filter(|_| gen.rng().gen_bool(0.5))
            .collect(),
    );
    b.g = Some(g);
    b
}

/// The schemas the axiom suite checks.
pub const AXIOM_SUITE_SCHEMAS: [SchemaId; 17] = [
    SchemaId::A0,
    SchemaId::A1,
    SchemaId::A2,
    SchemaId::A3,
    SchemaId::A4,
    SchemaId::A5,
    SchemaId::A6,
    SchemaId::A7,
    SchemaId::A8,
    SchemaId::A9,
    SchemaId::A10,
    SchemaId::A11,
    SchemaId::C1,
    SchemaId::C2,
    SchemaId::C3,
    SchemaId::C4,
    SchemaId::C5,
];

pub fn run_axiom_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_axiom_suite_with(cfg, axiom_instance)
}

/// The axiom suite with a replaceable instantiation function.
pub fn run_axiom_suite_with(
    cfg: &SuiteConfig,
    instance: impl Fn(SchemaId, &Bindings) -> Result<Formula, SchemaError>,
) -> SuiteReport {
    let mut ctx = Ctx::new("axioms", cfg);
    for i in 0..cfg.model_count {
        let m = sample_model(cfg, 1, i);
        let mut gen = case_generator(cfg, 1, i, &m);
        let all = all_agents(&m);
        for id in AXIOM_SUITE_SCHEMAS {
            for _ in 0..cfg.bindings_per_schema {
                let b = random_bindings(&mut gen, id, &all, cfg.formula_depth);
                match instance(id, &b) {
                    Ok(f) => {
                        ctx.valid_on(&id.to_string(), &m, &f);
                    }
                    Err(e) => {
                        ctx.count(&id.to_string());
                        ctx.fail(
                            &id.to_string(),
                            None,
                            &Formula::Top,
                            true,
                            Some(e.to_string()),
                        );
                    }
                }
            }
        }
    }
    ctx.finish()
}

// ---------------------------------------------------------------------------
// Rules

/// Where rule premises come from.
#[derive(Debug, Clone)]
pub enum Premises {
    /// Random axiom instances, valid by construction.
    Axioms,
    /// A fixed pool, used as given.
    Fixed(Vec<Formula>),
}

fn premise(gen: &mut Generator, premises: &Premises, all: &Group, depth: usize) -> Option<Formula> {
    match premises {
        Premises::Axioms => {
            let id = *AXIOM_SUITE_SCHEMAS.choose(gen.rng()).unwrap();
            let b = random_bindings(gen, id, all, depth);
            Some(axiom_instance(id, &b).expect("random bindings fit their schema"))
        }
        Premises::Fixed(pool) => pool.choose(gen.rng()).cloned(),
    }
}

/// Detail attached to rule failures where the relativising formula of
/// `[G,χ]` is false at the failing state.
pub const CONTEXT_FALSE: &str = "context false at the failing state";

pub fn run_rule_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_rule_suite_with(cfg, &Premises::Axioms)
}

pub fn run_rule_suite_with(cfg: &SuiteConfig, premises: &Premises) -> SuiteReport {
    let mut ctx = Ctx::new("rules", cfg);
    if matches!(premises, Premises::Fixed(p) if p.is_empty()) {
        ctx.report.notes.push("empty premise pool".into());
        return ctx.finish();
    }
    // premises are built from shallower formulas since rules wrap them
    let depth = cfg.formula_depth.saturating_sub(1).max(1);
    for i in 0..cfg.model_count {
        let m = sample_model(cfg, 2, i);
        let mut gen = case_generator(cfg, 2, i, &m);
        let all = all_agents(&m);
        for _ in 0..cfg.bindings_per_schema {
            let Some(phi) = premise(&mut gen, premises, &all, depth) else {
                continue;
            };
            // R0: from φ and φ → ψ infer ψ
            let psi = match gen.rng().gen_range(0..3) {
                0 => Formula::or(phi.clone(), gen.formula(Stratum::Corgal, depth)),
                1 => Formula::not(Formula::not(phi.clone())),
                _ => {
                    let other = premise(&mut gen, premises, &all, depth).unwrap();
                    Formula::and(phi.clone(), other)
                }
            };
            let bridge = Formula::imp(phi.clone(), psi.clone());
            if matches!(premises, Premises::Axioms) {
                ctx.valid_on("R0-premise", &m, &bridge);
            }
            ctx.valid_on("R0", &m, &psi);
            let a = gen.agent();
            ctx.valid_on("R1", &m, &Formula::know(a, phi.clone()));
            let ann = gen.formula(Stratum::Corgal, depth);
            ctx.valid_on("R2", &m, &Formula::ann(ann, phi.clone()));
            let (g, chi) = (gen.group(), gen.formula(Stratum::Pal, depth));
            let f = Formula::rel_group(g, chi.clone(), phi.clone());
            if let Some(w) = ctx.valid_on("R3", &m, &f) {
                if ctx.checker.eval(&m, w, &chi) == Ok(false) {
                    ctx.report.failures.last_mut().unwrap().detail = Some(CONTEXT_FALSE.into());
                }
            }
            let g = gen.group();
            ctx.valid_on("R4", &m, &Formula::coal(g, phi));
        }
    }
    ctx.finish()
}

// ---------------------------------------------------------------------------
// R5 / R6

enum Rule {
    R5,
    R6,
}

fn quantifier_case(
    ctx: &mut Ctx,
    rule: Rule,
    m: &EpistemicModel,
    eta: &NecessityForm,
    quantified: &Formula,
) -> Result<(), CheckError> {
    let claim = match rule {
        Rule::R5 => "R5",
        Rule::R6 => "R6",
    };
    let conclusion = eta.instantiate(quantified);
    let truth = ctx.checker.truth_set(m, &conclusion)?;
    let Some(w) = truth.complement().first() else {
        *ctx.report
            .per_claim
            .entry(format!("{claim}-conclusion-true"))
            .or_default() += 1;
        return Ok(());
    };
    ctx.count(claim);
    let Some((sub, u)) = ctx.checker.locate_hole_failure(m, w, eta, quantified)? else {
        ctx.fail(
            claim,
            Some((m, w)),
            &conclusion,
            false,
            Some("hole failure not located".into()),
        );
        return Ok(());
    };
    let report: WitnessReport = ctx.checker.eval_witness(&sub, u, quantified)?;
    let Some(witness) = &report.witness else {
        ctx.fail(
            claim,
            Some((m, w)),
            &conclusion,
            false,
            Some("no witness produced".into()),
        );
        return Ok(());
    };
    let psi = witness.announcement.denotation();
    let premise_body =
        WitnessReport::substituted(quantified, &psi, sub.agents()).expect("quantified formula");
    let premise = eta.instantiate(&premise_body);
    if ctx.checker.eval(m, w, &premise)? {
        let r = ctx.record(
            claim,
            Some((m, w)),
            &premise,
            false,
            Some(render_formula(&psi)),
            Some(format!("conclusion {}", render_formula(&conclusion))),
        );
        ctx.report.failures.push(r);
    }
    Ok(())
}

pub fn run_quantifier_rule_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut ctx = Ctx::new("quantifier-rules", cfg);
    let depth = cfg.formula_depth.saturating_sub(1).max(1);
    for i in 0..cfg.model_count {
        let m = sample_model(cfg, 3, i);
        let mut gen = case_generator(cfg, 3, i, &m);
        for _ in 0..cfg.bindings_per_schema {
            let eta = gen.necessity_form(Stratum::Pal, cfg.necessity_depth);
            let (g, chi, phi) = (
                gen.group(),
                gen.formula(Stratum::Pal, depth),
                gen.formula(Stratum::Corgal, depth),
            );
            let f = Formula::rel_group(g, chi, phi);
            if let Err(e) = quantifier_case(&mut ctx, Rule::R5, &m, &eta, &f) {
                ctx.error("R5", &m, &f, e);
            }
            let eta = gen.necessity_form(Stratum::Pal, cfg.necessity_depth);
            let f = Formula::coal(gen.group(), gen.formula(Stratum::Corgal, depth));
            if let Err(e) = quantifier_case(&mut ctx, Rule::R6, &m, &eta, &f) {
                ctx.error("R6", &m, &f, e);
            }
        }
    }
    ctx.finish()
}

// ---------------------------------------------------------------------------
// Theorems and open questions

struct Instance {
    g: Group,
    h: Group,
    all: Group,
    phi: Formula,
}

impl Instance {
    fn sample(gen: &mut Generator, m: &EpistemicModel, depth: usize) -> Instance {
        Instance {
            g: gen.group(),
            h: gen.group(),
            all: all_agents(m),
            phi: gen.formula(Stratum::Corgal, depth),
        }
    }
}

fn theorem_claims(x: &Instance) -> Vec<(&'static str, Formula)> {
    use Formula as F;
    let (g, h, phi) = (&x.g, &x.h, &x.phi);
    let able = |g: &Group, f: Formula| F::coal_dual(g.clone(), f);
    let can = |g: &Group, f: Formula| F::rel_group_dual(g.clone(), F::Top, f);
    vec![
        (
            "P3",
            F::imp(
                able(g, phi.clone()),
                can(g, F::rel_group(minus(&x.all, g), F::Top, phi.clone())),
            ),
        ),
        (
            "P4",
            F::imp(able(g, phi.clone()), able(&union(g, h), phi.clone())),
        ),
        (
            "P5",
            F::imp(
                able(g, able(g, phi.clone())),
                F::coal(minus(&x.all, g), phi.clone()),
            ),
        ),
        (
            "P6",
            F::imp(
                able(g, able(h, phi.clone())),
                F::coal(minus(&x.all, &union(g, h)), phi.clone()),
            ),
        ),
        (
            "GAL-iterate",
            F::iff(can(g, phi.clone()), can(g, can(g, phi.clone()))),
        ),
        (
            "GAL-merge",
            F::imp(can(g, can(h, phi.clone())), can(&union(g, h), phi.clone())),
        ),
    ]
}

pub fn run_theorem_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut ctx = Ctx::new("theorems", cfg);
    for i in 0..cfg.model_count {
        let m = sample_model(cfg, 4, i);
        let mut gen = case_generator(cfg, 4, i, &m);
        for _ in 0..cfg.bindings_per_schema {
            let x = Instance::sample(&mut gen, &m, cfg.formula_depth);
            for (claim, f) in theorem_claims(&x) {
                ctx.valid_on(claim, &m, &f);
            }
        }
    }
    ctx.finish()
}

/// Searches for countermodels to formulas whose validity is open. Hits are
/// reported as findings; the suite itself always passes.
pub fn run_open_question_suite(cfg: &SuiteConfig) -> SuiteReport {
    use Formula as F;
    const KEEP: usize = 5;
    let mut ctx = Ctx::new("open-questions", cfg);
    let mut hits: BTreeMap<&str, usize> = BTreeMap::new();
    for i in 0..cfg.model_count {
        let m = sample_model(cfg, 5, i);
        let mut gen = case_generator(cfg, 5, i, &m);
        for _ in 0..cfg.bindings_per_schema {
            let x = Instance::sample(&mut gen, &m, cfg.formula_depth);
            let (g, h, phi) = (&x.g, &x.h, &x.phi);
            let able = |g: &Group, f: Formula| F::coal_dual(g.clone(), f);
            let targets = [
                (
                    "converse-P3",
                    F::imp(
                        F::rel_group_dual(
                            g.clone(),
                            F::Top,
                            F::rel_group(minus(&x.all, g), F::Top, phi.clone()),
                        ),
                        able(g, phi.clone()),
                    ),
                ),
                (
                    "coalition-iterate",
                    F::imp(able(g, able(g, phi.clone())), able(g, phi.clone())),
                ),
                (
                    "coalition-merge",
                    F::imp(
                        able(g, able(h, phi.clone())),
                        able(&union(g, h), phi.clone()),
                    ),
                ),
            ];
            for (claim, f) in targets {
                match ctx.checker.truth_set(&m, &f) {
                    Ok(s) => {
                        ctx.count(claim);
                        if let Some(w) = s.complement().first() {
                            let n = hits.entry(claim).or_default();
                            *n += 1;
                            if *n <= KEEP {
                                let r = ctx.record(claim, Some((&m, w)), &f, true, None, None);
                                ctx.report.findings.push(r);
                            }
                        }
                    }
                    Err(e) if e.is_cap_exceeded() => ctx.skip(claim),
                    Err(e) => ctx.report.notes.push(format!("{claim}: {e}")),
                }
            }
        }
    }
    for claim in ["converse-P3", "coalition-iterate", "coalition-merge"] {
        ctx.report.notes.push(format!(
            "{claim}: {} countermodels in {} cases",
            hits.get(claim).copied().unwrap_or(0),
            ctx.report.claim_cases(claim)
        ));
    }
    ctx.finish()
}

// ---------------------------------------------------------------------------
// Worked examples

pub fn run_counterexample_repro() -> SuiteReport {
    run_counterexample_repro_with(FIGURE1, FIGURE2)
}

/// Checks the worked examples against the given model documents.
pub fn run_counterexample_repro_with(figure1: &str, figure2: &str) -> SuiteReport {
    let mut ctx = Ctx::new("repro", &SuiteConfig::default());
    let phi = "(K b (p & q & r) & ~K a (p & q & r) & ~K c (p & q & r))";
    let fig1 = [
        ("fig1-announce-not-p", "[! ~p] K c ~p", true),
        (
            "fig1-cath-stays-ignorant",
            "[{c}, top] (~K c ~p & ~K c p)",
            true,
        ),
        (
            "fig1-ann-bob-keep-cath-ignorant",
            "<[{a,b}]> (~K c ~p & ~K c p)",
            true,
        ),
        ("fig1-bob-can-inform", "[<{a,c}>] (K c ~p | K c p)", true),
    ];
    let merged = format!("<[{{a,b}}]> {phi}");
    let split = format!("<[{{a}}]> <[{{b}}]> {phi}");
    let fig2 = [
        ("fig2-joint", merged.clone(), true),
        (
            "fig2-split-fails",
            format!("[<{{a}}>] [<{{b}}>] ~{phi}"),
            true,
        ),
        ("fig2-cath", format!("[<{{c}}>] {phi}"), true),
        (
            "fig2-merge-not-split",
            format!("{merged} -> {split}"),
            false,
        ),
        (
            "fig2-cath-not-split",
            format!("[<{{c}}>] {phi} -> {split}"),
            false,
        ),
    ];
    let cases: Vec<(&str, &str, String, bool)> = fig1
        .iter()
        .map(|(c, f, v)| (*c, figure1, f.to_string(), *v))
        .chain(fig2.iter().map(|(c, f, v)| (*c, figure2, f.clone(), *v)))
        .collect();
    for (claim, doc, text, expected) in cases {
        ctx.count(claim);
        let parsed = ModelDocument::parse(doc).and_then(|d| {
            let m = d.to_model()?;
            let w = d
                .designated
                .as_deref()
                .and_then(|s| m.state_index(s))
                .unwrap_or(0);
            Ok((m, w))
        });
        let (m, w) = match parsed {
            Ok(x) => x,
            Err(e) => {
                ctx.fail(claim, None, &Formula::Top, expected, Some(e.to_string()));
                continue;
            }
        };
        let f = crate::parser::parse_formula(&text).expect("built-in formula parses");
        match ctx.checker.eval(&m, w, &f) {
            Ok(v) if v == expected => {}
            Ok(_) => ctx.fail(claim, Some((&m, w)), &f, expected, None),
            Err(e) => ctx.fail(claim, Some((&m, w)), &f, expected, Some(e.to_string())),
        }
    }
    // the witness for the joint ability is a's knowledge of q
    if let Ok(m) = crate::parser::parse_model(figure2) {
        ctx.count("fig2-witness");
        let f = crate::parser::parse_formula(&merged).unwrap();
        let want = crate::parser::parse_formula("K a q & K b top").unwrap();
        let ok = m.state_index("pqr").is_some_and(|w| {
            ctx.checker.eval_witness(&m, w, &f).is_ok_and(|r| {
                r.witness.is_some_and(|wit| {
                    ctx.checker
                        .truth_set(&m, &wit.announcement.denotation())
                        .ok()
                        == ctx.checker.truth_set(&m, &want).ok()
                })
            })
        });
        if !ok {
            ctx.fail(
                "fig2-witness",
                Some((&m, 0)),
                &f,
                true,
                Some("witness differs from K a q".into()),
            );
        }
    }
    ctx.finish()
}

// ---------------------------------------------------------------------------
// Translation and measures

pub fn run_translation_and_measure_suite(cfg: &SuiteConfig) -> SuiteReport {
    use Formula as F;
    let mut ctx = Ctx::new("translation-measures", cfg);
    let mut pool: Vec<Formula> = Vec::new();
    for i in 0..cfg.model_count {
        let m = sample_model(cfg, 6, i);
        let mut gen = case_generator(cfg, 6, i, &m);
        let all = all_agents(&m);
        for j in 0..cfg.bindings_per_schema {
            let stratum = if j % 5 == 0 {
                Stratum::El
            } else {
                Stratum::Pal
            };
            let f = gen.formula(stratum, cfg.formula_depth);
            let t = match pal_to_el(&f) {
                Ok(t) => t,
                Err(e) => {
                    ctx.count("translation");
                    ctx.fail("translation", None, &f, true, Some(e.to_string()));
                    continue;
                }
            };
            ctx.count("translation");
            if t.stratum() != Stratum::El {
                ctx.fail(
                    "translation",
                    None,
                    &f,
                    true,
                    Some(format!("output stratum {}", t.stratum())),
                );
            }
            match (ctx.checker.truth_set(&m, &f), ctx.checker.truth_set(&m, &t)) {
                (Ok(a), Ok(b)) => {
                    if let Some(w) = a.difference(&b).union(&b.difference(&a)).first() {
                        let expected = b.contains(w);
                        ctx.fail(
                            "translation",
                            Some((&m, w)),
                            &f,
                            expected,
                            Some(render_formula(&t)),
                        );
                    }
                }
                (Err(e), _) | (_, Err(e)) => {
                    ctx.fail("translation", Some((&m, 0)), &f, true, Some(e.to_string()))
                }
            }
            if stratum == Stratum::El {
                ctx.count("translation-identity");
                if t != f {
                    ctx.fail(
                        "translation-identity",
                        None,
                        &f,
                        true,
                        Some(render_formula(&t)),
                    );
                }
            }

            let tau = gen.formula(Stratum::Corgal, cfg.formula_depth);
            let chi = gen.formula(Stratum::Corgal, cfg.formula_depth);
            let phi = gen.formula(Stratum::Corgal, cfg.formula_depth);
            let g = gen.group();
            let psi = gen.group_knowledge(&g, 2).denotation();
            let instance = F::and(
                chi.clone(),
                F::ann(F::and(psi.clone(), chi.clone()), phi.clone()),
            );
            let group = F::rel_group(g.clone(), chi.clone(), phi.clone());
            let response = F::rel_group_dual(minus(&all, &g), psi.clone(), phi.clone());
            let coalition = F::coal(g.clone(), phi.clone());
            let items = [
                ("order-1", instance.clone(), group.clone()),
                (
                    "order-2",
                    F::ann(tau.clone(), instance),
                    F::ann(tau.clone(), group),
                ),
                ("order-3", response.clone(), coalition.clone()),
                (
                    "order-4",
                    F::ann(tau.clone(), response),
                    F::ann(tau, coalition),
                ),
            ];
            for (claim, lhs, rhs) in items {
                ctx.count(claim);
                if !order_lt(&lhs, &rhs) {
                    ctx.fail(
                        claim,
                        None,
                        &lhs,
                        true,
                        Some(format!("not below {}", render_formula(&rhs))),
                    );
                }
                pool.push(rhs);
            }
            pool.push(f);
        }
    }
    // order properties on the sampled formulas
    let mut rng = ChaCha8Rng::seed_from_u64(mix(cfg.seed, 6, u64::MAX));
    for x in &pool {
        ctx.count("order-irreflexive");
        if order_lt(x, x) {
            ctx.fail("order-irreflexive", None, x, true, None);
        }
    }
    if !pool.is_empty() {
        for _ in 0..pool.len() {
            let (a, b, c) = (
                pool.choose(&mut rng).unwrap(),
                pool.choose(&mut rng).unwrap(),
                pool.choose(&mut rng).unwrap(),
            );
            ctx.count("order-transitive");
            if order_lt(a, b) && order_lt(b, c) && !order_lt(a, c) {
                ctx.fail(
                    "order-transitive",
                    None,
                    a,
                    true,
                    Some(format!("{} / {}", b, c)),
                );
            }
            ctx.count("order-asymmetric");
            if order_lt(a, b) && order_lt(b, a) {
                ctx.fail("order-asymmetric", None, a, true, Some(b.to_string()));
            }
        }
    }
    ctx.finish()
}

// ---------------------------------------------------------------------------
// Semantic cross-checks

/// A copy of `m` with an extra state duplicating `s` (same valuation, same
/// classes), and the map from the new states to the old ones.
fn with_duplicate(m: &EpistemicModel, s: usize) -> (EpistemicModel, Vec<usize>) {
    let n = m.len();
    let mut states = m.state_names().to_vec();
    let mut name = format!("{}_copy", m.state_name(s));
    while states.contains(&name) {
        name.push('_');
    }
    states.push(name);
    let partitions = (0..m.agents().len())
        .map(|a| {
            m.blocks(a)
                .iter()
                .map(|b| {
                    let mut v: Vec<usize> = b.iter().collect();
                    if b.contains(s) {
                        v.push(n);
                    }
                    v
                })
                .collect()
        })
        .collect();
    let valuation = (0..m.atoms().len())
        .map(|p| {
            let mut v: Vec<usize> = m.atom_set(p).iter().collect();
            if m.atom_set(p).contains(s) {
                v.push(n);
            }
            v
        })
        .collect();
    let dup = EpistemicModel::new(
        states,
        m.agents().to_vec(),
        m.atoms().to_vec(),
        partitions,
        valuation,
    )
    .expect("duplicating a state keeps the model valid");
    let map = (0..n).chain([s]).collect();
    (dup, map)
}

fn quantified(gen: &mut Generator, depth: usize) -> Formula {
    let phi = gen.formula(Stratum::Corgal, depth);
    let g = gen.group();
    match gen.rng().gen_range(0..4) {
        0 => Formula::rel_group(g, gen.formula(Stratum::Pal, 1), phi),
        1 => Formula::rel_group_dual(g, gen.formula(Stratum::Pal, 1), phi),
        2 => Formula::coal(g, phi),
        _ => Formula::coal_dual(g, phi),
    }
}

pub fn run_semantics_suite(cfg: &SuiteConfig) -> SuiteReport {
    use Formula as F;
    let mut ctx = Ctx::new("semantics", cfg);
    let depth = cfg.formula_depth.saturating_sub(1).max(1);
    for i in 0..cfg.model_count {
        let m = sample_model(cfg, 7, i);
        let mut gen = case_generator(cfg, 7, i, &m);
        for _ in 0..cfg.bindings_per_schema.div_ceil(4) {
            let (phi, chi, g) = (
                gen.formula(Stratum::Corgal, depth),
                gen.formula(Stratum::Pal, depth),
                gen.group(),
            );
            let a = gen.agent();
            let dualities = [
                (
                    "dual-know",
                    F::know_dual(a.clone(), phi.clone()),
                    F::not(F::know(a, F::not(phi.clone()))),
                ),
                (
                    "dual-announcement",
                    F::ann_dual(chi.clone(), phi.clone()),
                    F::not(F::ann(chi.clone(), F::not(phi.clone()))),
                ),
                (
                    "dual-group",
                    F::rel_group_dual(g.clone(), chi.clone(), phi.clone()),
                    F::not(F::rel_group(g.clone(), chi.clone(), F::not(phi.clone()))),
                ),
                (
                    "dual-coalition",
                    F::coal_dual(g.clone(), phi.clone()),
                    F::not(F::coal(g.clone(), F::not(phi.clone()))),
                ),
            ];
            for (claim, l, r) in dualities {
                ctx.valid_on(claim, &m, &F::iff(l, r));
            }
            let sugar = crate::parser::parse_formula(&format!(
                "[{{{}}}] ({})",
                g.iter().map(|a| a.name()).collect::<Vec<_>>().join(","),
                render_formula(&phi)
            ))
            .expect("rendered formula parses");
            ctx.valid_on(
                "group-sugar",
                &m,
                &F::iff(sugar, F::rel_group(g.clone(), F::Top, phi.clone())),
            );

            // alternative coalition semantics
            let f = if gen.rng().gen_bool(0.5) {
                F::coal(g.clone(), phi.clone())
            } else {
                F::coal_dual(g.clone(), phi.clone())
            };
            let result = (|| -> Result<(), CheckError> {
                let t = ctx.checker.truth_set(&m, &f)?;
                for w in 0..m.len() {
                    let alt = ctx.checker.eval_coalition_alt(&m, w, &f)?;
                    ctx.count("coalition-alternative");
                    if alt != t.contains(w) {
                        ctx.fail(
                            "coalition-alternative",
                            Some((&m, w)),
                            &f,
                            t.contains(w),
                            None,
                        );
                    }
                }
                Ok(())
            })();
            if let Err(e) = result {
                ctx.error("coalition-alternative", &m, &f, e);
            }

            // contraction and isomorphism invariance
            let f = gen.formula(Stratum::Corgal, cfg.formula_depth);
            let s = gen.rng().gen_range(0..m.len());
            let (dup, map) = with_duplicate(&m, s);
            let mut order: Vec<usize> = (0..m.len()).collect();
            order.shuffle(gen.rng());
            let permuted = m.permute(&order);
            let result = (|| -> Result<(), CheckError> {
                let base = ctx.checker.truth_set(&m, &f)?;
                let grown = ctx.checker.truth_set(&dup, &f)?;
                ctx.count("contraction-invariance");
                if grown != base.preimage(&map) {
                    let w = (0..dup.len())
                        .find(|&w| grown.contains(w) != base.contains(map[w]))
                        .unwrap();
                    ctx.fail(
                        "contraction-invariance",
                        Some((&dup, w)),
                        &f,
                        base.contains(map[w]),
                        None,
                    );
                }
                let c = contract(&dup);
                let quotient = ctx.checker.truth_set(&c.model, &f)?;
                ctx.count("contraction-invariance");
                if quotient.preimage(&c.map) != grown {
                    ctx.fail(
                        "contraction-invariance",
                        Some((&c.model, 0)),
                        &f,
                        true,
                        Some("quotient disagrees".into()),
                    );
                }
                let p = ctx.checker.truth_set(&permuted, &f)?;
                ctx.count("isomorphism-invariance");
                for (k, &old) in order.iter().enumerate() {
                    if p.contains(k) != base.contains(old) {
                        ctx.fail(
                            "isomorphism-invariance",
                            Some((&permuted, k)),
                            &f,
                            base.contains(old),
                            None,
                        );
                        break;
                    }
                }
                Ok(())
            })();
            if let Err(e) = result {
                ctx.error("contraction-invariance", &m, &f, e);
            }

            // witnesses
            let f = quantified(&mut gen, depth);
            let result = (|| -> Result<(), CheckError> {
                let t = ctx.checker.truth_set(&m, &f)?;
                for w in 0..m.len() {
                    let r = ctx.checker.eval_witness(&m, w, &f)?;
                    ctx.count("witness");
                    let universal = matches!(f, F::RelGroup(..) | F::Coal(..));
                    let vacuous = match &f {
                        F::RelGroupDual(_, chi, _) => !ctx.checker.eval(&m, w, chi)?,
                        _ => false,
                    };
                    let admits = if universal {
                        !r.verdict
                    } else {
                        r.verdict && !vacuous
                    };
                    let ok = r.verdict == t.contains(w)
                        && r.witness.is_some() == admits
                        && r.recheck(&ctx.checker, &m, w, &f)?;
                    if !ok {
                        let wit = r
                            .witness
                            .as_ref()
                            .map(|x| render_formula(&x.announcement.denotation()));
                        let rec =
                            ctx.record("witness", Some((&m, w)), &f, t.contains(w), wit, None);
                        ctx.report.failures.push(rec);
                    }
                }
                Ok(())
            })();
            if let Err(e) = result {
                ctx.error("witness", &m, &f, e);
            }

            // definable formulas denote their choice sets
            let c = contract(&m);
            let g = gen.group();
            match distinct_choices(&c.model, &g, cfg.enumeration_cap) {
                Ok(choices) => {
                    for choice in choices.iter().take(8) {
                        ctx.count("definable-formula");
                        let psi = definable_formula(&c.model, choice)
                            .expect("contracted")
                            .denotation();
                        match ctx.checker.truth_set(&c.model, &psi) {
                            Ok(t) if t == choice.extension => {}
                            _ => {
                                ctx.fail("definable-formula", Some((&c.model, 0)), &psi, true, None)
                            }
                        }
                    }
                }
                Err(_) => ctx.skip("definable-formula"),
            }
        }
    }
    definability_oracle(&mut ctx, 4);
    ctx.finish()
}

/// Set partitions of `0..n` as block lists.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Compares, on every contracted model with up to `max_states` states, two
/// agents and two atoms, the sets `⟦K_a φ⟧` reachable by epistemic
/// formulas with the class unions the checker quantifies over.
fn definability_oracle(ctx: &mut Ctx, max_states: usize) {
    let agents = vec![Agent::new("a").unwrap(), Agent::new("b").unwrap()];
    let atoms = vec!["p".to_string(), "q".to_string()];
    let mut models = 0usize;
    for n in 1..=max_states {
        let partitions = set_partitions(n);
        let full: u32 = (1 << n) - 1;
        for pa in &partitions {
            for pb in &partitions {
                for vp in 0..=full {
                    for vq in 0..=full {
                        let bits =
                            |v: u32| (0..n).filter(|i| v & (1 << i) != 0).collect::<Vec<_>>();
                        let m = EpistemicModel::new(
                            (0..n).map(|i| format!("s{i}")).collect(),
                            agents.clone(),
                            atoms.clone(),
                            vec![pa.clone(), pb.clone()],
                            vec![bits(vp), bits(vq)],
                        )
                        .expect("enumerated model is valid");
                        if !contract(&m).is_identity() {
                            continue;
                        }
                        models += 1;
                        oracle_model(ctx, &m, &[pa, pb], &[vp, vq], n);
                    }
                }
            }
        }
    }
    ctx.report
        .notes
        .push(format!("definability oracle: {models} contracted models"));
}

fn oracle_model(
    ctx: &mut Ctx,
    m: &EpistemicModel,
    parts: &[&Vec<Vec<usize>>],
    vals: &[u32],
    n: usize,
) {
    let full: u32 = (1 << n) - 1;
    let mask = |b: &[usize]| b.iter().fold(0u32, |acc, &i| acc | (1 << i));
    let knows = |blocks: &Vec<Vec<usize>>, s: u32| -> u32 {
        blocks
            .iter()
            .map(|b| mask(b))
            .filter(|&b| b & !s == 0)
            .fold(0, |acc, b| acc | b)
    };
    let close = |family: &mut BTreeSet<u32>| loop {
        let items: Vec<u32> = family.iter().copied().collect();
        let before = family.len();
        for &x in &items {
            family.insert(full & !x);
            for &y in &items {
                family.insert(x & y);
            }
        }
        if family.len() == before {
            break;
        }
    };
    let mut family: BTreeSet<u32> = vals.iter().copied().chain([full]).collect();
    close(&mut family);
    for _ in 0..n {
        let items: Vec<u32> = family.iter().copied().collect();
        for blocks in parts {
            for &s in &items {
                family.insert(knows(blocks, s));
            }
        }
        close(&mut family);
    }
    for (a, blocks) in parts.iter().enumerate() {
        let definable: BTreeSet<u32> = family
            .iter()
            .map(|&s| knows(blocks, s))
            .filter(|&k| k != 0)
            .collect();
        let unions: BTreeSet<u32> = agent_unions(m, a, usize::MAX)
            .expect("small model")
            .iter()
            .map(|u| u.iter().fold(0u32, |acc, i| acc | (1 << i)))
            .collect();
        ctx.count("definability-oracle");
        if definable != unions {
            ctx.fail(
                "definability-oracle",
                Some((m, 0)),
                &Formula::Top,
                true,
                Some(format!(
                    "agent {}: definable {definable:?}, unions {unions:?}",
                    m.agents()[a]
                )),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            model_count: 6,
            bindings_per_schema: 3,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn set_partition_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52]);
    }

    #[test]
    fn duplicate_state_is_bisimilar() {
        let m = crate::model::fixtures::figure1();
        let (dup, map) = with_duplicate(&m, 1);
        assert_eq!(dup.len(), 3);
        assert_eq!(map, vec![0, 1, 1]);
        let c = contract(&dup);
        assert_eq!(c.model.len(), 2);
    }

    #[test]
    fn repro_passes_and_is_deterministic() {
        let a = run_counterexample_repro();
        assert!(a.passed(), "{a}");
        assert_eq!(a, run_counterexample_repro());
    }

    #[test]
    fn zero_models_is_an_empty_pass() {
        let cfg = SuiteConfig {
            model_count: 0,
            ..SuiteConfig::default()
        };
        let r = run_axiom_suite(&cfg);
        assert!(r.passed());
        assert_eq!(r.cases, 0);
    }

    #[test]
    fn small_suites_pass() {
        for name in [
            "axioms",
            "quantifier-rules",
            "theorems",
            "translation-measures",
        ] {
            let r = run_suite(name, &small()).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.cases > 0);
        }
    }

    #[test]
    fn rule_failures_are_false_contexts() {
        let r = run_rule_suite(&small());
        assert!(r.cases > 0);
        for f in &r.failures {
            assert_eq!(f.claim, "R3", "{r}");
            assert_eq!(f.detail.as_deref(), Some(CONTEXT_FALSE));
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", &small()).is_err());
    }
}
