//! Abstract syntax of the coalition and relativised group announcement
//! language, its strata, sugar expansion, necessity forms and the
//! complexity measures (size, box depth, coalition depth) with the
//! lexicographic order built from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An agent name, a token over `[a-z][a-z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(String);

impl Agent {
    pub fn new(name: impl Into<String>) -> Result<Self, FormulaError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Agent(name))
        } else {
            Err(FormulaError::InvalidName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A (possibly empty) set of agents.
pub type Group = BTreeSet<Agent>;

/// Builds a group from agent names. Panics on an invalid name; meant for
/// literals in tests and fixtures.
pub fn group<I, S>(names: I) -> Group
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    names
        .into_iter()
        .map(|n| Agent::new(n).expect("invalid agent name"))
        .collect()
}

/// True for names matching `[a-z][a-z0-9_]*` that are not reserved words.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && name != "top"
        && name != "bot"
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("invalid name `{0}`: expected [a-z][a-z0-9_]* (not `top`/`bot`)")]
    InvalidName(String),
    #[error("announcement component for agent {agent} is not purely epistemic: {formula}")]
    NotEpistemic { agent: Agent, formula: String },
}

/// A formula. Children are shared, so cloning is cheap and large formulas
/// built from repeated parts (characteristic formulas) stay compact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Iff(Arc<Formula>, Arc<Formula>),
    Know(Agent, Arc<Formula>),
    KnowDual(Agent, Arc<Formula>),
    /// `[announcement] body`
    Ann(Arc<Formula>, Arc<Formula>),
    /// `<announcement> body`
    AnnDual(Arc<Formula>, Arc<Formula>),
    /// `[G, context] body`
    RelGroup(Group, Arc<Formula>, Arc<Formula>),
    /// `<G, context> body`
    RelGroupDual(Group, Arc<Formula>, Arc<Formula>),
    /// `[<G>] body`: whatever G announces, the others have a response.
    Coal(Group, Arc<Formula>),
    /// `<[G]> body`: G has an announcement robust to any response.
    CoalDual(Group, Arc<Formula>),
}

/// Language strata, ordered by inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stratum {
    El,
    Pal,
    Rgal,
    Corgal,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stratum::El => "EL",
            Stratum::Pal => "PAL",
            Stratum::Rgal => "RGAL",
            Stratum::Corgal => "CoRGAL",
        })
    }
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Arc::new(l), Arc::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Arc::new(l), Arc::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Arc::new(l), Arc::new(r))
    }

    pub fn know(a: Agent, f: Formula) -> Formula {
        Formula::Know(a, Arc::new(f))
    }

    pub fn know_dual(a: Agent, f: Formula) -> Formula {
        Formula::KnowDual(a, Arc::new(f))
    }

    pub fn ann(announcement: Formula, body: Formula) -> Formula {
        Formula::Ann(Arc::new(announcement), Arc::new(body))
    }

    pub fn ann_dual(announcement: Formula, body: Formula) -> Formula {
        Formula::AnnDual(Arc::new(announcement), Arc::new(body))
    }

    pub fn rel_group(g: Group, context: Formula, body: Formula) -> Formula {
        Formula::RelGroup(g, Arc::new(context), Arc::new(body))
    }

    pub fn rel_group_dual(g: Group, context: Formula, body: Formula) -> Formula {
        Formula::RelGroupDual(g, Arc::new(context), Arc::new(body))
    }

    pub fn coal(g: Group, body: Formula) -> Formula {
        Formula::Coal(g, Arc::new(body))
    }

    pub fn coal_dual(g: Group, body: Formula) -> Formula {
        Formula::CoalDual(g, Arc::new(body))
    }

    /// Left-nested conjunction; `Top` for an empty iterator.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `Bot` for an empty iterator.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bot)
    }

    /// Least stratum containing the formula. Duals classify with their
    /// primitive operator.
    pub fn stratum(&self) -> Stratum {
        use Formula::*;
        match self {
            Atom(_) | Top | Bot => Stratum::El,
            Not(f) | Know(_, f) | KnowDual(_, f) => f.stratum(),
            And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r) => l.stratum().max(r.stratum()),
            Ann(l, r) | AnnDual(l, r) => Stratum::Pal.max(l.stratum()).max(r.stratum()),
            RelGroup(_, l, r) | RelGroupDual(_, l, r) => {
                Stratum::Rgal.max(l.stratum()).max(r.stratum())
            }
            Coal(_, _) | CoalDual(_, _) => Stratum::Corgal,
        }
    }

    /// Rewrites every abbreviation into the primitive constructors
    /// `Atom, Top, Not, And, Know, Ann, RelGroup, Coal`.
    pub fn desugar(&self) -> Formula {
        use Formula::*;
        let d = |f: &Arc<Formula>| f.desugar();
        match self {
            Atom(_) | Top => self.clone(),
            Bot => Formula::not(Top),
            Not(f) => Formula::not(d(f)),
            And(l, r) => Formula::and(d(l), d(r)),
            Or(l, r) => Formula::not(Formula::and(Formula::not(d(l)), Formula::not(d(r)))),
            Imp(l, r) => Formula::not(Formula::and(d(l), Formula::not(d(r)))),
            Iff(l, r) => {
                let (l, r) = (d(l), d(r));
                Formula::and(
                    Formula::not(Formula::and(l.clone(), Formula::not(r.clone()))),
                    Formula::not(Formula::and(r, Formula::not(l))),
                )
            }
            Know(a, f) => Formula::know(a.clone(), d(f)),
            KnowDual(a, f) => Formula::not(Formula::know(a.clone(), Formula::not(d(f)))),
            Ann(l, r) => Formula::ann(d(l), d(r)),
            AnnDual(l, r) => Formula::not(Formula::ann(d(l), Formula::not(d(r)))),
            RelGroup(g, c, f) => Formula::rel_group(g.clone(), d(c), d(f)),
            RelGroupDual(g, c, f) => {
                Formula::not(Formula::rel_group(g.clone(), d(c), Formula::not(d(f))))
            }
            Coal(g, f) => Formula::coal(g.clone(), d(f)),
            CoalDual(g, f) => Formula::not(Formula::coal(g.clone(), Formula::not(d(f)))),
        }
    }

    /// True if only primitive constructors occur.
    pub fn is_core(&self) -> bool {
        use Formula::*;
        match self {
            Atom(_) | Top => true,
            Not(f) | Know(_, f) | Coal(_, f) => f.is_core(),
            And(l, r) | Ann(l, r) | RelGroup(_, l, r) => l.is_core() && r.is_core(),
            _ => false,
        }
    }

    /// Number of constructor levels above the leaves (leaves have height 0).
    pub fn height(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn children(&self) -> Vec<&Arc<Formula>> {
        use Formula::*;
        match self {
            Atom(_) | Top | Bot => vec![],
            Not(f) | Know(_, f) | KnowDual(_, f) | Coal(_, f) | CoalDual(_, f) => vec![f],
            And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r) | Ann(l, r) | AnnDual(l, r) => {
                vec![l, r]
            }
            RelGroup(_, l, r) | RelGroupDual(_, l, r) => vec![l, r],
        }
    }

    /// Atoms occurring anywhere in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Agents occurring as knowledge indices or inside groups.
    pub fn agents(&self) -> BTreeSet<Agent> {
        use Formula::*;
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Know(a, _) | KnowDual(a, _) => {
                out.insert(a.clone());
            }
            RelGroup(g, _, _) | RelGroupDual(g, _, _) | Coal(g, _) | CoalDual(g, _) => {
                out.extend(g.iter().cloned());
            }
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }
}

// ---------------------------------------------------------------------------
// Measures. All of them are defined on the primitive constructors; the
// public functions expand sugar first, `Top` counts like an atom.

pub fn size(f: &Formula) -> usize {
    core_size(&f.desugar())
}

fn core_size(f: &Formula) -> usize {
    use Formula::*;
    match f {
        Atom(_) | Top => 1,
        Not(g) | Know(_, g) | RelGroup(_, _, g) | Coal(_, g) => core_size(g) + 1,
        And(l, r) => core_size(l) + core_size(r) + 1,
        Ann(l, r) => core_size(l) + 3 * core_size(r),
        _ => unreachable!("measure on non-core formula"),
    }
}

/// Nesting depth of relativised group operators.
pub fn depth_box(f: &Formula) -> usize {
    core_depth_box(&f.desugar())
}

fn core_depth_box(f: &Formula) -> usize {
    use Formula::*;
    match f {
        Atom(_) | Top => 0,
        Not(g) | Know(_, g) | Coal(_, g) => core_depth_box(g),
        And(l, r) => core_depth_box(l).max(core_depth_box(r)),
        Ann(l, r) => core_depth_box(l) + core_depth_box(r),
        RelGroup(_, c, g) => core_depth_box(c) + core_depth_box(g) + 1,
        _ => unreachable!("measure on non-core formula"),
    }
}

/// Nesting depth of coalition operators.
pub fn depth_coal(f: &Formula) -> usize {
    core_depth_coal(&f.desugar())
}

fn core_depth_coal(f: &Formula) -> usize {
    use Formula::*;
    match f {
        Atom(_) | Top => 0,
        Not(g) | Know(_, g) => core_depth_coal(g),
        Coal(_, g) => core_depth_coal(g) + 1,
        And(l, r) => core_depth_coal(l).max(core_depth_coal(r)),
        Ann(l, r) | RelGroup(_, l, r) => core_depth_coal(l) + core_depth_coal(r),
        _ => unreachable!("measure on non-core formula"),
    }
}

/// The well-founded order used by the truth-lemma induction: coalition
/// depth first, then box depth, then size.
pub fn order_lt(f: &Formula, g: &Formula) -> bool {
    let key = |x: &Formula| {
        let core = x.desugar();
        (
            core_depth_coal(&core),
            core_depth_box(&core),
            core_size(&core),
        )
    };
    key(f) < key(g)
}

// ---------------------------------------------------------------------------

/// A context with a single hole, built from implications, knowledge and
/// announcement boxes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NecessityForm {
    Hole,
    Imp(Formula, Box<NecessityForm>),
    Know(Agent, Box<NecessityForm>),
    Ann(Formula, Box<NecessityForm>),
}

impl NecessityForm {
    /// Replaces the hole with `f`.
    pub fn instantiate(&self, f: &Formula) -> Formula {
        match self {
            NecessityForm::Hole => f.clone(),
            NecessityForm::Imp(p, inner) => Formula::imp(p.clone(), inner.instantiate(f)),
            NecessityForm::Know(a, inner) => Formula::know(a.clone(), inner.instantiate(f)),
            NecessityForm::Ann(p, inner) => Formula::ann(p.clone(), inner.instantiate(f)),
        }
    }

    pub fn hole_count(&self) -> usize {
        match self {
            NecessityForm::Hole => 1,
            NecessityForm::Imp(_, inner)
            | NecessityForm::Know(_, inner)
            | NecessityForm::Ann(_, inner) => inner.hole_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            NecessityForm::Hole => 0,
            NecessityForm::Imp(_, inner)
            | NecessityForm::Know(_, inner)
            | NecessityForm::Ann(_, inner) => inner.depth() + 1,
        }
    }
}

/// `⋀_{i ∈ G} K_i φ_i` with every `φ_i` purely epistemic: the announcements
/// a group can make.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupKnowledgeFormula {
    bindings: BTreeMap<Agent, Formula>,
}

impl GroupKnowledgeFormula {
    pub fn new(bindings: BTreeMap<Agent, Formula>) -> Result<Self, FormulaError> {
        for (agent, formula) in &bindings {
            if formula.stratum() != Stratum::El {
                return Err(FormulaError::NotEpistemic {
                    agent: agent.clone(),
                    formula: crate::parser::render_formula(formula),
                });
            }
        }
        Ok(GroupKnowledgeFormula { bindings })
    }

    /// Every agent of the group announces `K_i ⊤`.
    pub fn silence(group: &Group) -> Self {
        GroupKnowledgeFormula {
            bindings: group.iter().map(|a| (a.clone(), Formula::Top)).collect(),
        }
    }

    pub fn group(&self) -> Group {
        self.bindings.keys().cloned().collect()
    }

    pub fn bindings(&self) -> &BTreeMap<Agent, Formula> {
        &self.bindings
    }

    /// The announced formula; `Top` for the empty group.
    pub fn denotation(&self) -> Formula {
        Formula::conjunction(
            self.bindings
                .iter()
                .map(|(a, f)| Formula::know(a.clone(), f.clone())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn stratum_examples() {
        assert_eq!(p("K a p").stratum(), Stratum::El);
        assert_eq!(p("[! p] K a p").stratum(), Stratum::Pal);
        assert_eq!(p("<! p> q").stratum(), Stratum::Pal);
        assert_eq!(p("[{a}, p] q").stratum(), Stratum::Rgal);
        assert_eq!(p("[<{a}>] p").stratum(), Stratum::Corgal);
        assert_eq!(p("K a <[{a}]> p").stratum(), Stratum::Corgal);
    }

    #[test]
    fn desugar_examples() {
        assert_eq!(p("<! p> q").desugar(), p("~[! p] ~q"));
        assert_eq!(p("<[{a,b}]> q").desugar(), p("~[<{a,b}>] ~q"));
        assert_eq!(p("<{a}, r> q").desugar(), p("~[{a}, r] ~q"));
        assert_eq!(p("p").desugar(), p("p"));
        assert!(p("(p -> q) <-> (p | ~K a q)").desugar().is_core());
    }

    #[test]
    fn size_examples() {
        assert_eq!(size(&p("p")), 1);
        assert_eq!(size(&p("[! p] q")), 4);
        assert_eq!(size(&p("p & q")), 3);
        // context of a relativised group operator does not count
        assert_eq!(size(&p("[{a}, p & q] r")), 2);
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth_box(&p("[{a}, p] q")), 1);
        assert_eq!(depth_box(&p("[<{a}>] p")), 0);
        assert_eq!(depth_box(&p("[! p] [{a}, q] r")), 1);
        assert_eq!(depth_coal(&p("[<{a}>] p")), 1);
        assert_eq!(depth_coal(&p("[{a}, p] q")), 0);
        assert_eq!(depth_coal(&p("K a [<{a}>] [<{b}>] p")), 2);
        assert_eq!(depth_box(&p("[{a}, [{b}, p] q] r")), 2);
    }

    #[test]
    fn order_examples() {
        assert!(order_lt(&p("p"), &p("K a p")));
        assert!(!order_lt(&p("K a p"), &p("p")));
        assert!(order_lt(&p("p & [! K a p & p] q"), &p("[{a}, p] q")));
        assert!(!order_lt(&p("p"), &p("p")));
    }

    #[test]
    fn necessity_form_instantiation() {
        let q = p("q");
        assert_eq!(NecessityForm::Hole.instantiate(&q), q);
        let eta = NecessityForm::Imp(
            p("p"),
            Box::new(NecessityForm::Know(
                Agent::new("a").unwrap(),
                Box::new(NecessityForm::Hole),
            )),
        );
        assert_eq!(eta.instantiate(&q), p("p -> K a q"));
        assert_eq!(eta.hole_count(), 1);
        let eta = NecessityForm::Ann(
            p("r"),
            Box::new(NecessityForm::Imp(p("p"), Box::new(NecessityForm::Hole))),
        );
        assert_eq!(eta.instantiate(&p("K b q")), p("[! r] (p -> K b q)"));
        assert_eq!(eta.depth(), 2);
    }

    #[test]
    fn group_knowledge_formula() {
        assert_eq!(GroupKnowledgeFormula::default().denotation(), Formula::Top);
        let mut b = BTreeMap::new();
        b.insert(Agent::new("a").unwrap(), p("q"));
        let psi = GroupKnowledgeFormula::new(b).unwrap();
        assert_eq!(psi.denotation(), p("K a q"));
        let mut bad = BTreeMap::new();
        bad.insert(Agent::new("a").unwrap(), p("[! q] q"));
        assert!(GroupKnowledgeFormula::new(bad).is_err());
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("p"));
        assert!(is_identifier("x_1"));
        assert!(!is_identifier("top"));
        assert!(!is_identifier("P"));
        assert!(!is_identifier("1a"));
        assert!(!is_identifier(""));
    }
}
