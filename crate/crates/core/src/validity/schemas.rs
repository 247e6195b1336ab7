use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::formula::{Agent, Formula, Group, GroupKnowledgeFormula};
use crate::parser::render_formula;

/// Axiom schemas: the epistemic, announcement and quantifier axioms
/// (`A0`..`A11`) and the coalition logic axioms (`C0`..`C5`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaId {
    A0,
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    A10,
    A11,
    C0,
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl SchemaId {
    pub const ALL: [SchemaId; 18] = [
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
        SchemaId::C0,
        SchemaId::C1,
        SchemaId::C2,
        SchemaId::C3,
        SchemaId::C4,
        SchemaId::C5,
    ];

    pub fn parse(s: &str) -> Option<SchemaId> {
        SchemaId::ALL.into_iter().find(|id| id.to_string() == s)
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("{schema} needs a binding for `{name}`")]
    MissingBinding {
        schema: SchemaId,
        name: &'static str,
    },
    #[error("groups {g:?} and {h:?} must be disjoint")]
    DisjointnessViolation { g: Vec<String>, h: Vec<String> },
    #[error("skeleton `{0}` is not a propositional tautology")]
    NotATautology(String),
    #[error("skeleton has {vars} variables but {given} substitutes were given")]
    SubstitutionMismatch { vars: usize, given: usize },
}

/// Values for a schema's metavariables. Unused fields are ignored.
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
    pub chi: Option<Formula>,
    /// The atom of `A5`.
    pub atom: Option<String>,
    pub agent: Option<Agent>,
    pub g: Option<Group>,
    pub h: Option<Group>,
    /// The full agent set `A`.
    pub all: Option<Group>,
    /// The announcement of `A10`/`A11`; its group is the schema's `G`.
    pub psi_g: Option<GroupKnowledgeFormula>,
    /// Propositional tautology for `A0`/`C0`, over atoms standing for
    /// `substitution` in sorted order.
    pub skeleton: Option<Formula>,
    pub substitution: Vec<Formula>,
}

fn need<'a, T>(
    v: &'a Option<T>,
    schema: SchemaId,
    name: &'static str,
) -> Result<&'a T, SchemaError> {
    v.as_ref()
        .ok_or(SchemaError::MissingBinding { schema, name })
}

fn minus(all: &Group, g: &Group) -> Group {
    all.difference(g).cloned().collect()
}

fn names(g: &Group) -> Vec<String> {
    g.iter().map(|a| a.name().to_string()).collect()
}

/// True if `f`, read propositionally over its atoms, holds under every
/// valuation. `f` must be built from atoms, constants and connectives.
pub fn is_tautology(f: &Formula) -> bool {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    assert!(atoms.len() < 20, "too many variables for a truth table");
    (0u32..1 << atoms.len()).all(|row| {
        let val: BTreeMap<&str, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), row & (1 << i) != 0))
            .collect();
        truth_value(f, &val)
    })
}

fn truth_value(f: &Formula, val: &BTreeMap<&str, bool>) -> bool {
    use Formula::*;
    match f {
        Atom(p) => val[p.as_str()],
        Top => true,
        Bot => false,
        Not(g) => !truth_value(g, val),
        And(l, r) => truth_value(l, val) && truth_value(r, val),
        Or(l, r) => truth_value(l, val) || truth_value(r, val),
        Imp(l, r) => !truth_value(l, val) || truth_value(r, val),
        Iff(l, r) => truth_value(l, val) == truth_value(r, val),
        _ => panic!("not propositional: {}", render_formula(f)),
    }
}

/// Replaces atoms by formulas.
pub fn substitute(f: &Formula, map: &BTreeMap<String, Formula>) -> Formula {
    use Formula::*;
    let s = |g: &Formula| substitute(g, map);
    match f {
        Atom(p) => map.get(p).cloned().unwrap_or_else(|| f.clone()),
        Top | Bot => f.clone(),
        Not(g) => Formula::not(s(g)),
        And(l, r) => Formula::and(s(l), s(r)),
        Or(l, r) => Formula::or(s(l), s(r)),
        Imp(l, r) => Formula::imp(s(l), s(r)),
        Iff(l, r) => Formula::iff(s(l), s(r)),
        Know(a, g) => Formula::know(a.clone(), s(g)),
        KnowDual(a, g) => Formula::know_dual(a.clone(), s(g)),
        Ann(l, r) => Formula::ann(s(l), s(r)),
        AnnDual(l, r) => Formula::ann_dual(s(l), s(r)),
        RelGroup(g, c, b) => Formula::rel_group(g.clone(), s(c), s(b)),
        RelGroupDual(g, c, b) => Formula::rel_group_dual(g.clone(), s(c), s(b)),
        Coal(g, b) => Formula::coal(g.clone(), s(b)),
        CoalDual(g, b) => Formula::coal_dual(g.clone(), s(b)),
    }
}

/// The closed instance of a schema.
pub fn axiom_instance(id: SchemaId, b: &Bindings) -> Result<Formula, SchemaError> {
    use Formula as F;
    use SchemaId::*;
    let phi = || need(&b.phi, id, "phi").cloned();
    let psi = || need(&b.psi, id, "psi").cloned();
    let chi = || need(&b.chi, id, "chi").cloned();
    let agent = || need(&b.agent, id, "agent").cloned();
    let g = || need(&b.g, id, "g").cloned();
    let all = || need(&b.all, id, "all").cloned();
    Ok(match id {
        A0 | C0 => {
            let skeleton = need(&b.skeleton, id, "skeleton")?;
            if !is_tautology(skeleton) {
                return Err(SchemaError::NotATautology(render_formula(skeleton)));
            }
            let vars = skeleton.atoms();
            if vars.len() != b.substitution.len() {
                return Err(SchemaError::SubstitutionMismatch {
                    vars: vars.len(),
                    given: b.substitution.len(),
                });
            }
            let map = vars
                .into_iter()
                .zip(b.substitution.iter().cloned())
                .collect();
            substitute(skeleton, &map)
        }
        A1 => {
            let (a, p, q) = (agent()?, phi()?, psi()?);
            F::imp(
                F::know(a.clone(), F::imp(p.clone(), q.clone())),
                F::imp(F::know(a.clone(), p), F::know(a, q)),
            )
        }
        A2 => {
            let (a, p) = (agent()?, phi()?);
            F::imp(F::know(a, p.clone()), p)
        }
        A3 => {
            let (a, p) = (agent()?, phi()?);
            F::imp(
                F::know(a.clone(), p.clone()),
                F::know(a.clone(), F::know(a, p)),
            )
        }
        A4 => {
            let (a, p) = (agent()?, phi()?);
            F::imp(
                F::not(F::know(a.clone(), p.clone())),
                F::know(a.clone(), F::not(F::know(a, p))),
            )
        }
        A5 => {
            let p = phi()?;
            let atom = F::atom(need(&b.atom, id, "atom")?.clone());
            F::iff(F::ann(p.clone(), atom.clone()), F::imp(p, atom))
        }
        A6 => {
            let (p, q) = (phi()?, psi()?);
            F::iff(
                F::ann(p.clone(), F::not(q.clone())),
                F::imp(p.clone(), F::not(F::ann(p, q))),
            )
        }
        A7 => {
            let (p, q, c) = (phi()?, psi()?, chi()?);
            F::iff(
                F::ann(p.clone(), F::and(q.clone(), c.clone())),
                F::and(F::ann(p.clone(), q), F::ann(p, c)),
            )
        }
        A8 => {
            let (a, p, q) = (agent()?, phi()?, psi()?);
            F::iff(
                F::ann(p.clone(), F::know(a.clone(), q.clone())),
                F::imp(p.clone(), F::know(a, F::ann(p, q))),
            )
        }
        A9 => {
            let (p, q, c) = (phi()?, psi()?, chi()?);
            F::iff(
                F::ann(p.clone(), F::ann(q.clone(), c.clone())),
                F::ann(F::and(p.clone(), F::ann(p, q)), c),
            )
        }
        A10 => {
            let (p, c) = (phi()?, chi()?);
            let psi_g = need(&b.psi_g, id, "psi_g")?;
            F::imp(
                F::rel_group(psi_g.group(), c.clone(), p.clone()),
                F::and(c.clone(), F::ann(F::and(psi_g.denotation(), c), p)),
            )
        }
        A11 => {
            let (p, all) = (phi()?, all()?);
            let psi_g = need(&b.psi_g, id, "psi_g")?;
            let group = psi_g.group();
            F::imp(
                F::coal(group.clone(), p.clone()),
                F::rel_group_dual(minus(&all, &group), psi_g.denotation(), p),
            )
        }
        C1 => F::not(F::coal_dual(g()?, F::Bot)),
        C2 => F::coal_dual(g()?, F::Top),
        C3 => {
            let p = phi()?;
            F::imp(
                F::not(F::coal_dual(Group::new(), F::not(p.clone()))),
                F::coal_dual(all()?, p),
            )
        }
        C4 => {
            let (g, p, q) = (g()?, phi()?, psi()?);
            F::imp(
                F::coal_dual(g.clone(), F::and(p.clone(), q)),
                F::coal_dual(g, p),
            )
        }
        C5 => {
            let (g, p, q) = (g()?, phi()?, psi()?);
            let h = need(&b.h, id, "h")?.clone();
            if !g.is_disjoint(&h) {
                return Err(SchemaError::DisjointnessViolation {
                    g: names(&g),
                    h: names(&h),
                });
            }
            let gh: Group = g.union(&h).cloned().collect();
            F::imp(
                F::and(F::coal_dual(g, p.clone()), F::coal_dual(h, q.clone())),
                F::coal_dual(gh, F::and(p, q)),
            )
        }
    })
}

/// Classical tautologies over `x0`, `x1`, `x2`.
pub fn tautology_templates() -> Vec<Formula> {
    [
        "x0 -> (x1 -> x0)",
        "(x0 -> (x1 -> x2)) -> ((x0 -> x1) -> (x0 -> x2))",
        "(~x1 -> ~x0) -> (x0 -> x1)",
        "((x0 -> x1) -> x0) -> x0",
        "x0 | ~x0",
        "(x0 & x1) -> x1",
        "~(x0 & x1) <-> (~x0 | ~x1)",
        "(x0 -> x2) -> ((x1 -> x2) -> ((x0 | x1) -> x2))",
    ]
    .iter()
    .map(|s| crate::parser::parse_formula(s).expect("template parses"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::group;
    use crate::parser::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn a5_example() {
        let b = Bindings {
            phi: Some(f("p & q")),
            atom: Some("p".into()),
            ..Bindings::default()
        };
        assert_eq!(
            axiom_instance(SchemaId::A5, &b).unwrap(),
            f("[! p & q] p <-> ((p & q) -> p)")
        );
    }

    #[test]
    fn a10_example() {
        let a = Agent::new("a").unwrap();
        let psi_g = GroupKnowledgeFormula::new([(a, f("q"))].into_iter().collect()).unwrap();
        let b = Bindings {
            phi: Some(f("p")),
            chi: Some(f("q")),
            psi_g: Some(psi_g),
            ..Bindings::default()
        };
        assert_eq!(
            axiom_instance(SchemaId::A10, &b).unwrap(),
            f("[{a}, q] p -> (q & [! K a q & q] p)")
        );
    }

    #[test]
    fn c3_example() {
        let b = Bindings {
            phi: Some(f("p")),
            all: Some(group(["a", "b", "c"])),
            ..Bindings::default()
        };
        assert_eq!(
            axiom_instance(SchemaId::C3, &b).unwrap(),
            f("~<[{}]> ~p -> <[{a,b,c}]> p")
        );
    }

    #[test]
    fn a11_uses_the_complement_group() {
        let a = Agent::new("a").unwrap();
        let psi_g = GroupKnowledgeFormula::new([(a, f("p"))].into_iter().collect()).unwrap();
        let b = Bindings {
            phi: Some(f("q")),
            all: Some(group(["a", "b", "c"])),
            psi_g: Some(psi_g),
            ..Bindings::default()
        };
        assert_eq!(
            axiom_instance(SchemaId::A11, &b).unwrap(),
            f("[<{a}>] q -> <{b,c}, K a p> q")
        );
    }

    #[test]
    fn errors() {
        assert_eq!(
            axiom_instance(SchemaId::A2, &Bindings::default()),
            Err(SchemaError::MissingBinding {
                schema: SchemaId::A2,
                name: "agent"
            })
        );
        let b = Bindings {
            g: Some(group(["a"])),
            h: Some(group(["a", "b"])),
            phi: Some(f("p")),
            psi: Some(f("q")),
            ..Bindings::default()
        };
        assert!(matches!(
            axiom_instance(SchemaId::C5, &b),
            Err(SchemaError::DisjointnessViolation { .. })
        ));
        let b = Bindings {
            skeleton: Some(f("x0 -> x1")),
            substitution: vec![f("p"), f("q")],
            ..Bindings::default()
        };
        assert!(matches!(
            axiom_instance(SchemaId::A0, &b),
            Err(SchemaError::NotATautology(_))
        ));
    }

    #[test]
    fn templates_are_tautologies() {
        for t in tautology_templates() {
            assert!(is_tautology(&t), "{t}");
        }
        assert!(!is_tautology(&f("x0 -> x1")));
    }

    #[test]
    fn a0_substitutes_in_sorted_order() {
        let b = Bindings {
            skeleton: Some(f("x0 -> (x1 -> x0)")),
            substitution: vec![f("K a p"), f("[{b}] q")],
            ..Bindings::default()
        };
        assert_eq!(
            axiom_instance(SchemaId::A0, &b).unwrap(),
            f("K a p -> ([{b}] q -> K a p)")
        );
    }

    #[test]
    fn schema_names_round_trip() {
        for id in SchemaId::ALL {
            assert_eq!(SchemaId::parse(&id.to_string()), Some(id));
        }
    }
}
