//! Reduction of public announcement formulas to epistemic ones.

use thiserror::Error;

use crate::formula::{Formula, Stratum};
use crate::parser::render_formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("cannot translate {stratum} formula `{formula}`: group and coalition operators have no epistemic equivalent")]
    StratumError { stratum: Stratum, formula: String },
}

/// Rewrites `f` into an equivalent formula without announcements.
///
/// Connectives and knowledge are translated homomorphically, so formulas
/// that are already epistemic come back unchanged. An announcement `[φ]ψ`
/// is pushed inwards by the reduction clauses on the shape of `ψ`:
///
/// ```text
/// t([φ]p)       = t(φ → p)
/// t([φ]¬ψ)      = t(φ → ¬[φ]ψ)
/// t([φ](ψ ∧ χ)) = t([φ]ψ ∧ [φ]χ)
/// t([φ]K_a ψ)   = t(φ → K_a [φ]ψ)
/// t([φ][ψ]χ)    = t([φ ∧ [φ]ψ]χ)
/// ```
///
/// `⊤` and `⊥` are treated like atoms, and abbreviations under an
/// announcement are unfolded one level first. `<φ>ψ` is read as `¬[φ]¬ψ`.
pub fn pal_to_el(f: &Formula) -> Result<Formula, TranslateError> {
    if f.stratum() > Stratum::Pal {
        return Err(TranslateError::StratumError {
            stratum: f.stratum(),
            formula: render_formula(f),
        });
    }
    Ok(t(f))
}

fn t(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Atom(_) | Top | Bot => f.clone(),
        Not(g) => Formula::not(t(g)),
        And(l, r) => Formula::and(t(l), t(r)),
        Or(l, r) => Formula::or(t(l), t(r)),
        Imp(l, r) => Formula::imp(t(l), t(r)),
        Iff(l, r) => Formula::iff(t(l), t(r)),
        Know(a, g) => Formula::know(a.clone(), t(g)),
        KnowDual(a, g) => Formula::know_dual(a.clone(), t(g)),
        Ann(phi, psi) => announce(phi, psi),
        AnnDual(phi, psi) => Formula::not(announce(phi, &Formula::not((**psi).clone()))),
        RelGroup(..) | RelGroupDual(..) | Coal(..) | CoalDual(..) => {
            unreachable!("stratum checked by pal_to_el")
        }
    }
}

/// `t([phi]psi)`.
fn announce(phi: &Formula, psi: &Formula) -> Formula {
    use Formula::*;
    let ann = |body: Formula| Formula::ann(phi.clone(), body);
    match psi {
        Atom(_) | Top | Bot => t(&Formula::imp(phi.clone(), psi.clone())),
        Not(g) => t(&Formula::imp(phi.clone(), Formula::not(ann((**g).clone())))),
        And(l, r) => t(&Formula::and(ann((**l).clone()), ann((**r).clone()))),
        Know(a, g) => t(&Formula::imp(
            phi.clone(),
            Formula::know(a.clone(), ann((**g).clone())),
        )),
        Ann(inner, body) => announce(
            &Formula::and(phi.clone(), Formula::ann(phi.clone(), (**inner).clone())),
            body,
        ),
        Or(..) | Imp(..) | Iff(..) | KnowDual(..) | AnnDual(..) => announce(phi, &unfold(psi)),
        RelGroup(..) | RelGroupDual(..) | Coal(..) | CoalDual(..) => {
            unreachable!("stratum checked by pal_to_el")
        }
    }
}

/// Unfolds the outermost abbreviation only.
fn unfold(f: &Formula) -> Formula {
    use Formula::*;
    let c = |g: &std::sync::Arc<Formula>| (**g).clone();
    match f {
        Or(l, r) => Formula::not(Formula::and(Formula::not(c(l)), Formula::not(c(r)))),
        Imp(l, r) => Formula::not(Formula::and(c(l), Formula::not(c(r)))),
        Iff(l, r) => Formula::and(Formula::imp(c(l), c(r)), Formula::imp(c(r), c(l))),
        KnowDual(a, g) => Formula::not(Formula::know(a.clone(), Formula::not(c(g)))),
        AnnDual(l, r) => Formula::not(Formula::ann(c(l), Formula::not(c(r)))),
        _ => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn tr(s: &str) -> String {
        render_formula(&pal_to_el(&parse_formula(s).unwrap()).unwrap())
    }

    #[test]
    fn atom_and_knowledge_clauses() {
        assert_eq!(tr("p"), "p");
        assert_eq!(tr("[! p] K a p"), "p -> K a (p -> p)");
    }

    #[test]
    fn composition_clause() {
        assert_eq!(tr("[! p] [! q] r"), "(p & (p -> q)) -> r");
    }

    #[test]
    fn epistemic_formulas_are_fixed() {
        for s in ["K a (p | ~q)", "~K b top", "(p <-> q) -> bot"] {
            let f = parse_formula(s).unwrap();
            assert_eq!(pal_to_el(&f).unwrap(), f);
        }
    }

    #[test]
    fn output_is_epistemic() {
        for s in [
            "[! p | q] ~(r -> K a p)",
            "<! p> <! K a p> (p <-> q)",
            "[! [! p] q] bot",
        ] {
            assert_eq!(
                pal_to_el(&parse_formula(s).unwrap()).unwrap().stratum(),
                Stratum::El
            );
        }
    }

    #[test]
    fn quantifiers_are_rejected() {
        assert!(matches!(
            pal_to_el(&parse_formula("[! p] [{a}] q").unwrap()),
            Err(TranslateError::StratumError {
                stratum: Stratum::Rgal,
                ..
            })
        ));
    }
}
