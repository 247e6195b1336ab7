//! Model checking.
//!
//! Truth sets are computed bottom-up and memoised per (model, subformula).
//! Group and coalition quantifiers are evaluated extensionally: the current
//! model is contracted, announcements of the group range over its choice
//! sets, and the result is pulled back along the contraction map.
//!
//! With `N` the contracted model, `v` the image of the evaluation point and
//! `U(S)` the update of `N` to `S`:
//!
//! * `[G,χ]φ`: `v ⊨ χ` and for every choice `c` of `G` with
//!   `v ∈ c ∩ ⟦χ⟧`, `(U(c ∩ ⟦χ⟧), v) ⊨ φ`.
//! * `<G,χ>φ`: if `v ⊨ χ` then some such `c` gives `(U(c ∩ ⟦χ⟧), v) ⊨ φ`.
//! * `[<G>]φ`: for every choice `c ∋ v` of `G` there is a choice `d ∋ v`
//!   of the other agents with `(U(c ∩ d), v) ⊨ φ`.
//! * `<[G]>φ`: some choice `c ∋ v` of `G` such that every `d ∋ v` of the
//!   other agents gives `(U(c ∩ d), v) ⊨ φ`.

use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use crate::formula::{Agent, Formula, Group, GroupKnowledgeFormula, NecessityForm};
use crate::model::{
    characteristic_formulas, contract, distinct_choices, ChoiceSet, EpistemicModel, ModelError,
    StateSet, DEFAULT_CAP,
};
use crate::parser::render_formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("undeclared {kind} `{name}`")]
    UndeclaredSymbol { kind: &'static str, name: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("outermost operator of `{0}` is not a group or coalition quantifier")]
    NotQuantified(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl CheckError {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            CheckError::Model(ModelError::EnumerationCapExceeded { .. })
        )
    }
}

/// A model with a designated state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedModel {
    pub model: EpistemicModel,
    pub point: usize,
}

impl PointedModel {
    pub fn new(model: EpistemicModel, point: &str) -> Result<Self, CheckError> {
        let point = model
            .state_index(point)
            .ok_or_else(|| CheckError::UnknownState(point.to_string()))?;
        Ok(PointedModel { model, point })
    }
}

/// One step of a quantifier evaluation: the announcement tried and whether
/// the quantified body came out true for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub operator: String,
    /// Per agent, the states of the union it chose.
    pub choice: Vec<(Agent, Vec<String>)>,
    pub extension: Vec<String>,
    pub verdict: bool,
}

/// A concrete announcement responsible for a quantifier's verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub announcement: GroupKnowledgeFormula,
    pub choice: Vec<(Agent, Vec<String>)>,
    /// Truth set of the announcement in the contracted model, by state name.
    pub extension: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub verdict: bool,
    /// Present when an existential quantifier holds or a universal one
    /// fails because of a particular announcement.
    pub witness: Option<Witness>,
    pub trace: Vec<TraceEntry>,
}

impl WitnessReport {
    /// The formula whose truth value the witness determines:
    ///
    /// * `[G,χ]φ` false: `χ ∧ [ψ ∧ χ]φ` is false,
    /// * `<G,χ>φ` true: `<ψ ∧ χ>φ` is true,
    /// * `[<G>]φ` false: `<A∖G, ψ>φ` is false,
    /// * `<[G]>φ` true: `[A∖G, ψ]φ` is true.
    pub fn substituted(f: &Formula, psi: &Formula, all_agents: &[Agent]) -> Option<Formula> {
        let others = |g: &Group| -> Group {
            all_agents
                .iter()
                .filter(|a| !g.contains(a))
                .cloned()
                .collect()
        };
        Some(match f {
            Formula::RelGroup(_, chi, phi) => Formula::and(
                (**chi).clone(),
                Formula::ann(Formula::and(psi.clone(), (**chi).clone()), (**phi).clone()),
            ),
            Formula::RelGroupDual(_, chi, phi) => {
                Formula::ann_dual(Formula::and(psi.clone(), (**chi).clone()), (**phi).clone())
            }
            Formula::Coal(g, phi) => {
                Formula::rel_group_dual(others(g), psi.clone(), (**phi).clone())
            }
            Formula::CoalDual(g, phi) => {
                Formula::rel_group(others(g), psi.clone(), (**phi).clone())
            }
            _ => return None,
        })
    }

    /// Re-evaluates the operator with the witness announcement substituted
    /// and checks it reproduces the verdict. Reports without a witness
    /// pass trivially.
    pub fn recheck(
        &self,
        checker: &Checker,
        m: &EpistemicModel,
        w: usize,
        f: &Formula,
    ) -> Result<bool, CheckError> {
        let Some(witness) = &self.witness else {
            return Ok(true);
        };
        let g = Self::substituted(f, &witness.announcement.denotation(), m.agents())
            .ok_or_else(|| CheckError::NotQuantified(render_formula(f)))?;
        Ok(checker.eval(m, w, &g)? == self.verdict)
    }
}

enum Quotient {
    Itself,
    Other { frame: Box<Frame>, map: Vec<usize> },
}

/// Evaluation state for one model: memoised truth sets keyed by subformula
/// address, the contraction, and enumerated choice sets.
struct Frame {
    model: EpistemicModel,
    memo: HashMap<*const Formula, StateSet>,
    quotient: Option<Quotient>,
    choices: HashMap<Group, Rc<Vec<ChoiceSet>>>,
}

impl Frame {
    fn new(model: EpistemicModel) -> Self {
        Frame {
            model,
            memo: HashMap::new(),
            quotient: None,
            choices: HashMap::new(),
        }
    }

    fn ensure_quotient(&mut self) {
        if self.quotient.is_none() {
            let c = contract(&self.model);
            self.quotient = Some(if c.is_identity() {
                Quotient::Itself
            } else {
                Quotient::Other {
                    frame: Box::new(Frame::new(c.model)),
                    map: c.map,
                }
            });
        }
    }

    fn choices(&mut self, g: &Group, cap: usize) -> Result<Rc<Vec<ChoiceSet>>, CheckError> {
        if let Some(c) = self.choices.get(g) {
            return Ok(c.clone());
        }
        let c = Rc::new(distinct_choices(&self.model, g, cap)?);
        self.choices.insert(g.clone(), c.clone());
        Ok(c)
    }

    fn others(&self, g: &Group) -> Group {
        self.model
            .agents()
            .iter()
            .filter(|a| !g.contains(a))
            .cloned()
            .collect()
    }
}

/// The model checker. `cap` bounds the announcements (or announcement
/// pairs, for coalitions) a single quantifier may enumerate.
#[derive(Debug, Clone, Copy)]
pub struct Checker {
    pub cap: usize,
}

impl Default for Checker {
    fn default() -> Self {
        Checker { cap: DEFAULT_CAP }
    }
}

impl Checker {
    pub fn new(cap: usize) -> Self {
        Checker { cap }
    }

    /// Resolves a state name.
    pub fn state(m: &EpistemicModel, name: &str) -> Result<usize, CheckError> {
        m.state_index(name)
            .ok_or_else(|| CheckError::UnknownState(name.to_string()))
    }

    /// Checks that every atom and agent of `f` is declared in `m`.
    pub fn check_symbols(m: &EpistemicModel, f: &Formula) -> Result<(), CheckError> {
        if let Some(p) = f.atoms().into_iter().find(|p| m.atom_index(p).is_none()) {
            return Err(CheckError::UndeclaredSymbol {
                kind: "atom",
                name: p,
            });
        }
        if let Some(a) = f.agents().into_iter().find(|a| m.agent_index(a).is_none()) {
            return Err(CheckError::UndeclaredSymbol {
                kind: "agent",
                name: a.name().to_string(),
            });
        }
        Ok(())
    }

    /// States of `m` where `f` holds.
    pub fn truth_set(&self, m: &EpistemicModel, f: &Formula) -> Result<StateSet, CheckError> {
        Self::check_symbols(m, f)?;
        let mut frame = Frame::new(m.clone());
        self.truth(&mut frame, f)
    }

    pub fn eval(&self, m: &EpistemicModel, w: usize, f: &Formula) -> Result<bool, CheckError> {
        if w >= m.len() {
            return Err(CheckError::UnknownState(format!("#{w}")));
        }
        Ok(self.truth_set(m, f)?.contains(w))
    }

    fn truth(&self, frame: &mut Frame, f: &Formula) -> Result<StateSet, CheckError> {
        let key = f as *const Formula;
        if let Some(s) = frame.memo.get(&key) {
            return Ok(s.clone());
        }
        use Formula::*;
        let n = frame.model.len();
        let out = match f {
            Atom(p) => {
                let i = frame
                    .model
                    .atom_index(p)
                    .ok_or_else(|| CheckError::UndeclaredSymbol {
                        kind: "atom",
                        name: p.clone(),
                    })?;
                frame.model.atom_set(i).clone()
            }
            Top => StateSet::full(n),
            Bot => StateSet::empty(n),
            Not(g) => self.truth(frame, g)?.complement(),
            And(l, r) => self.truth(frame, l)?.intersection(&self.truth(frame, r)?),
            Or(l, r) => self.truth(frame, l)?.union(&self.truth(frame, r)?),
            Imp(l, r) => self
                .truth(frame, l)?
                .complement()
                .union(&self.truth(frame, r)?),
            Iff(l, r) => {
                let (l, r) = (self.truth(frame, l)?, self.truth(frame, r)?);
                l.intersection(&r)
                    .union(&l.complement().intersection(&r.complement()))
            }
            Know(a, g) => {
                let t = self.truth(frame, g)?;
                frame.model.knows(agent_index(&frame.model, a)?, &t)
            }
            KnowDual(a, g) => {
                let t = self.truth(frame, g)?;
                frame
                    .model
                    .knows(agent_index(&frame.model, a)?, &t.complement())
                    .complement()
            }
            Ann(l, r) => {
                let s = self.truth(frame, l)?;
                let after = self.after_update(&frame.model, &s, r)?;
                s.complement().union(&after)
            }
            AnnDual(l, r) => {
                let s = self.truth(frame, l)?;
                self.after_update(&frame.model, &s, r)?
            }
            RelGroup(..) | RelGroupDual(..) | Coal(..) | CoalDual(..) => {
                self.quantifier(frame, f)?
            }
        };
        frame.memo.insert(key, out.clone());
        Ok(out)
    }

    /// The states of `keep` at which `f` holds after restricting to `keep`.
    fn after_update(
        &self,
        m: &EpistemicModel,
        keep: &StateSet,
        f: &Formula,
    ) -> Result<StateSet, CheckError> {
        if keep.is_empty() {
            return Ok(StateSet::empty(m.len()));
        }
        let mut sub = Frame::new(m.update(keep)?);
        Ok(self.truth(&mut sub, f)?.lift(keep))
    }

    fn quantifier(&self, frame: &mut Frame, f: &Formula) -> Result<StateSet, CheckError> {
        frame.ensure_quotient();
        if let Some(Quotient::Other { frame: q, map }) = frame.quotient.as_mut() {
            let t = self.quantifier_contracted(q, f)?;
            return Ok(t.preimage(map));
        }
        self.quantifier_contracted(frame, f)
    }

    fn quantifier_contracted(
        &self,
        frame: &mut Frame,
        f: &Formula,
    ) -> Result<StateSet, CheckError> {
        let n = frame.model.len();
        let mut cache: HashMap<StateSet, StateSet> = HashMap::new();
        let mut after =
            |this: &Self, model: &EpistemicModel, s: StateSet| -> Result<StateSet, CheckError> {
                if let Some(t) = cache.get(&s) {
                    return Ok(t.clone());
                }
                let t = this.after_update(model, &s, body_of(f))?;
                cache.insert(s, t.clone());
                Ok(t)
            };
        match f {
            Formula::RelGroup(g, chi, _) | Formula::RelGroupDual(g, chi, _) => {
                let boxed = matches!(f, Formula::RelGroup(..));
                let context = self.truth(frame, chi)?;
                let choices = frame.choices(g, self.cap)?;
                let mut result = if boxed {
                    context.clone()
                } else {
                    context.complement()
                };
                for c in choices.iter() {
                    let s = c.extension.intersection(&context);
                    if s.is_empty() {
                        continue;
                    }
                    let t = after(self, &frame.model, s.clone())?;
                    if boxed {
                        result.intersect_with(&s.complement().union(&t));
                    } else {
                        result.union_with(&t);
                    }
                }
                Ok(result)
            }
            Formula::Coal(g, _) | Formula::CoalDual(g, _) => {
                let boxed = matches!(f, Formula::Coal(..));
                let own = frame.choices(g, self.cap)?;
                let others = frame.choices(&frame.others(g), self.cap)?;
                self.check_pairs(own.len(), others.len())?;
                let mut result = if boxed {
                    StateSet::full(n)
                } else {
                    StateSet::empty(n)
                };
                for c in own.iter() {
                    if boxed {
                        // states of c with some response making the body true
                        let mut some = StateSet::empty(n);
                        for d in others.iter() {
                            let s = c.extension.intersection(&d.extension);
                            if !s.is_empty() {
                                some.union_with(&after(self, &frame.model, s)?);
                            }
                        }
                        result.intersect_with(&c.extension.complement().union(&some));
                    } else {
                        // states of c where every response keeps the body true
                        let mut every = c.extension.clone();
                        for d in others.iter() {
                            let s = c.extension.intersection(&d.extension);
                            if !s.is_empty() {
                                let t = after(self, &frame.model, s)?;
                                every.intersect_with(&d.extension.complement().union(&t));
                            }
                        }
                        result.union_with(&every);
                    }
                }
                Ok(result)
            }
            _ => unreachable!("quantifier_contracted on non-quantifier"),
        }
    }

    fn check_pairs(&self, own: usize, others: usize) -> Result<(), CheckError> {
        let pairs = own as u128 * others as u128;
        if pairs > self.cap as u128 {
            return Err(ModelError::EnumerationCapExceeded {
                needed: pairs,
                cap: self.cap,
            }
            .into());
        }
        Ok(())
    }

    // -----------------------------------------------------------------------
    // Witnesses

    /// Evaluates a formula whose outermost operator is a group or
    /// coalition quantifier, recording the announcements tried and the one
    /// responsible for the verdict when there is one.
    pub fn eval_witness(
        &self,
        m: &EpistemicModel,
        w: usize,
        f: &Formula,
    ) -> Result<WitnessReport, CheckError> {
        if !matches!(
            f,
            Formula::RelGroup(..)
                | Formula::RelGroupDual(..)
                | Formula::Coal(..)
                | Formula::CoalDual(..)
        ) {
            return Err(CheckError::NotQuantified(render_formula(f)));
        }
        Self::check_symbols(m, f)?;
        if w >= m.len() {
            return Err(CheckError::UnknownState(format!("#{w}")));
        }
        let c = contract(m);
        let v = c.map[w];
        let mut frame = Frame::new(c.model);
        let chars = characteristic_formulas(&frame.model)?;
        let mut trace = Vec::new();
        let names = |m: &EpistemicModel, s: &StateSet| -> Vec<String> {
            s.iter().map(|i| m.state_name(i).to_string()).collect()
        };
        let describe = |m: &EpistemicModel, c: &ChoiceSet| -> Vec<(Agent, Vec<String>)> {
            c.agents
                .iter()
                .cloned()
                .zip(c.components.iter().map(|u| names(m, u)))
                .collect()
        };
        let witness_of = |m: &EpistemicModel, c: &ChoiceSet| Witness {
            announcement: c.announcement(&chars),
            choice: describe(m, c),
            extension: names(m, &c.extension),
        };
        let label = operator_label(f);

        let (verdict, chosen) = match f {
            Formula::RelGroup(g, chi, phi) | Formula::RelGroupDual(g, chi, phi) => {
                let boxed = matches!(f, Formula::RelGroup(..));
                let context = self.truth(&mut frame, chi)?;
                let choices = frame.choices(g, self.cap)?;
                if !context.contains(v) {
                    // boxed: false whatever is announced; dual: vacuously true
                    let silent = choices[0].clone();
                    (!boxed, if boxed { Some(silent) } else { None })
                } else {
                    let mut found = None;
                    for c in choices.iter() {
                        let s = c.extension.intersection(&context);
                        if !s.contains(v) {
                            continue;
                        }
                        let t = self.after_update(&frame.model, &s, phi)?;
                        let sub = t.contains(v);
                        trace.push(TraceEntry {
                            operator: label.clone(),
                            choice: describe(&frame.model, c),
                            extension: names(&frame.model, &s),
                            verdict: sub,
                        });
                        if sub != boxed {
                            found = Some(c.clone());
                            break;
                        }
                    }
                    match found {
                        Some(c) => (!boxed, Some(c)),
                        None => (boxed, None),
                    }
                }
            }
            Formula::Coal(g, phi) | Formula::CoalDual(g, phi) => {
                let boxed = matches!(f, Formula::Coal(..));
                let own = frame.choices(g, self.cap)?;
                let others = frame.choices(&frame.others(g), self.cap)?;
                self.check_pairs(own.len(), others.len())?;
                let mut found = None;
                for c in own.iter().filter(|c| c.extension.contains(v)) {
                    // boxed: does some response work? dual: do all responses work?
                    let mut outcome = !boxed;
                    for d in others.iter().filter(|d| d.extension.contains(v)) {
                        let s = c.extension.intersection(&d.extension);
                        let sub = self.after_update(&frame.model, &s, phi)?.contains(v);
                        trace.push(TraceEntry {
                            operator: format!("{label} response"),
                            choice: describe(&frame.model, d),
                            extension: names(&frame.model, &s),
                            verdict: sub,
                        });
                        if sub == boxed {
                            outcome = boxed;
                            break;
                        }
                    }
                    trace.push(TraceEntry {
                        operator: label.clone(),
                        choice: describe(&frame.model, c),
                        extension: names(&frame.model, &c.extension),
                        verdict: outcome,
                    });
                    if outcome != boxed {
                        found = Some(c.clone());
                        break;
                    }
                }
                match found {
                    Some(c) => (!boxed, Some(c)),
                    None => (boxed, None),
                }
            }
            _ => unreachable!(),
        };
        Ok(WitnessReport {
            verdict,
            witness: chosen.map(|c| witness_of(&frame.model, &c)),
            trace,
        })
    }

    /// Evaluates `[<G>]φ` as "for every announcement ψ of G, `<A∖G, ψ>φ`"
    /// and `<[G]>φ` as "for some ψ, `[A∖G, ψ]φ`", with ψ ranging over the
    /// synthesised announcements of the contracted model.
    pub fn eval_coalition_alt(
        &self,
        m: &EpistemicModel,
        w: usize,
        f: &Formula,
    ) -> Result<bool, CheckError> {
        let (g, phi, boxed) = match f {
            Formula::Coal(g, phi) => (g, phi, true),
            Formula::CoalDual(g, phi) => (g, phi, false),
            _ => return Err(CheckError::NotQuantified(render_formula(f))),
        };
        Self::check_symbols(m, f)?;
        let c = contract(m);
        let (n, v) = (&c.model, c.map[w]);
        let chars = characteristic_formulas(n)?;
        let others: Group = n
            .agents()
            .iter()
            .filter(|a| !g.contains(a))
            .cloned()
            .collect();
        for choice in distinct_choices(n, g, self.cap)? {
            let psi = choice.announcement(&chars).denotation();
            let holds = if boxed {
                self.eval(
                    n,
                    v,
                    &Formula::rel_group_dual(others.clone(), psi, (**phi).clone()),
                )?
            } else {
                self.eval(
                    n,
                    v,
                    &Formula::rel_group(others.clone(), psi, (**phi).clone()),
                )?
            };
            if holds != boxed {
                return Ok(!boxed);
            }
        }
        Ok(boxed)
    }

    /// Follows a false necessity form `η(X)` at `(m, w)` down to a pointed
    /// model where the hole content `X` is false. `None` when `η(X)` holds.
    pub fn locate_hole_failure(
        &self,
        m: &EpistemicModel,
        w: usize,
        eta: &NecessityForm,
        hole: &Formula,
    ) -> Result<Option<(EpistemicModel, usize)>, CheckError> {
        match eta {
            NecessityForm::Hole => Ok(if self.eval(m, w, hole)? {
                None
            } else {
                Some((m.clone(), w))
            }),
            NecessityForm::Imp(tau, inner) => {
                if !self.eval(m, w, tau)? {
                    return Ok(None);
                }
                self.locate_hole_failure(m, w, inner, hole)
            }
            NecessityForm::Know(a, inner) => {
                let ai = agent_index(m, a)?;
                for u in m.class(ai, w).iter() {
                    if let Some(found) = self.locate_hole_failure(m, u, inner, hole)? {
                        return Ok(Some(found));
                    }
                }
                Ok(None)
            }
            NecessityForm::Ann(tau, inner) => {
                let s = self.truth_set(m, tau)?;
                if !s.contains(w) {
                    return Ok(None);
                }
                let rank = s.iter().position(|x| x == w).expect("w is in s");
                self.locate_hole_failure(&m.update(&s)?, rank, inner, hole)
            }
        }
    }
}

fn body_of(f: &Formula) -> &Formula {
    match f {
        Formula::RelGroup(_, _, phi)
        | Formula::RelGroupDual(_, _, phi)
        | Formula::Coal(_, phi)
        | Formula::CoalDual(_, phi) => phi,
        _ => unreachable!(),
    }
}

fn agent_index(m: &EpistemicModel, a: &Agent) -> Result<usize, CheckError> {
    m.agent_index(a)
        .ok_or_else(|| CheckError::UndeclaredSymbol {
            kind: "agent",
            name: a.name().to_string(),
        })
}

fn operator_label(f: &Formula) -> String {
    let text = render_formula(f);
    let body = render_formula(body_of(f));
    let body_at = text.len() - body.len();
    text[..body_at].trim_end().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{figure1, figure2};
    use crate::parser::parse_formula;

    fn holds(m: &EpistemicModel, w: &str, f: &str) -> bool {
        let c = Checker::default();
        c.eval(m, Checker::state(m, w).unwrap(), &parse_formula(f).unwrap())
            .unwrap()
    }

    fn names(m: &EpistemicModel, s: &StateSet) -> Vec<String> {
        let mut v: Vec<String> = s.iter().map(|i| m.state_name(i).to_string()).collect();
        v.sort();
        v
    }

    const PHI: &str = "(K b (p & q & r) & ~K a (p & q & r) & ~K c (p & q & r))";

    #[test]
    fn figure1_verdicts() {
        let m = figure1();
        assert!(holds(&m, "w", "[! ~p] K c ~p"));
        assert!(holds(&m, "w", "[{c}, top] (~K c ~p & ~K c p)"));
        assert!(holds(&m, "w", "<{a,b}, top> (~K c ~p & ~K c p)"));
        assert!(holds(&m, "w", "<[{a,b}]> (~K c ~p & ~K c p)"));
        assert!(holds(&m, "w", "[<{a,c}>] (K c ~p | K c p)"));
        assert!(!holds(&m, "w", "<[{a,c}]> (~K c ~p & ~K c p)"));
        assert!(holds(&m, "w", "[! bot] p"));
    }

    #[test]
    fn figure2_verdicts() {
        let m = figure2();
        assert!(holds(&m, "pqr", &format!("<[{{a,b}}]> {PHI}")));
        assert!(holds(&m, "pqr", &format!("[<{{a}}>] [<{{b}}>] ~{PHI}")));
        assert!(!holds(&m, "pqr", &format!("<[{{a}}]> <[{{b}}]> {PHI}")));
        assert!(holds(&m, "pqr", &format!("[<{{c}}>] {PHI}")));
    }

    #[test]
    fn truth_set_examples() {
        let c = Checker::default();
        let m = figure1();
        assert_eq!(
            names(&m, &c.truth_set(&m, &parse_formula("~p").unwrap()).unwrap()),
            vec!["w"]
        );
        assert!(c.truth_set(&m, &Formula::Top).unwrap().is_full());
        let m = figure2();
        assert_eq!(
            names(
                &m,
                &c.truth_set(&m, &parse_formula("K a q").unwrap()).unwrap()
            ),
            vec!["npqr", "pqnr", "pqr"]
        );
    }

    #[test]
    fn undeclared_symbols_are_reported() {
        let c = Checker::default();
        let m = figure1();
        assert!(matches!(
            c.truth_set(&m, &parse_formula("K z p").unwrap()),
            Err(CheckError::UndeclaredSymbol { kind: "agent", .. })
        ));
        assert!(matches!(
            c.truth_set(&m, &parse_formula("q").unwrap()),
            Err(CheckError::UndeclaredSymbol { kind: "atom", .. })
        ));
        assert!(matches!(
            c.truth_set(&m, &parse_formula("[{z}] p").unwrap()),
            Err(CheckError::UndeclaredSymbol { kind: "agent", .. })
        ));
    }

    #[test]
    fn cap_exceeded_propagates() {
        let m = figure2();
        let c = Checker::new(10);
        let err = c
            .eval(
                &m,
                0,
                &parse_formula(&format!("<[{{a,b}}]> {PHI}")).unwrap(),
            )
            .unwrap_err();
        assert!(err.is_cap_exceeded());
    }

    #[test]
    fn figure2_witness_is_ka_q() {
        let c = Checker::default();
        let m = figure2();
        let f = parse_formula(&format!("<[{{a,b}}]> {PHI}")).unwrap();
        let pqr = Checker::state(&m, "pqr").unwrap();
        let report = c.eval_witness(&m, pqr, &f).unwrap();
        assert!(report.verdict);
        let witness = report.witness.clone().unwrap();
        let got = c.truth_set(&m, &witness.announcement.denotation()).unwrap();
        let want = c
            .truth_set(&m, &parse_formula("K a q & K b top").unwrap())
            .unwrap();
        assert_eq!(got, want);
        assert!(report.recheck(&c, &m, pqr, &f).unwrap());
    }

    #[test]
    fn witness_absent_when_nothing_helps() {
        let c = Checker::default();
        let m = figure1();
        let f = parse_formula("<{c}, top> K c ~p").unwrap();
        let report = c.eval_witness(&m, 0, &f).unwrap();
        assert!(!report.verdict);
        assert!(report.witness.is_none());
        assert_eq!(report.trace.len(), 1);
    }

    #[test]
    fn silence_is_the_first_witness() {
        let c = Checker::default();
        for m in [figure1(), figure2()] {
            let f = parse_formula("<{a,b}, top> top").unwrap();
            let report = c.eval_witness(&m, 0, &f).unwrap();
            assert!(report.verdict);
            let w = report.witness.unwrap();
            assert_eq!(w.extension.len(), m.len());
            for (_, comp) in &w.choice {
                assert_eq!(comp.len(), m.len());
            }
        }
    }

    #[test]
    fn not_quantified_is_rejected() {
        let c = Checker::default();
        let m = figure1();
        assert!(matches!(
            c.eval_witness(&m, 0, &parse_formula("K a ~p").unwrap()),
            Err(CheckError::NotQuantified(_))
        ));
    }

    #[test]
    fn alternative_coalition_semantics_agree_on_examples() {
        let c = Checker::default();
        let m = figure2();
        let f = parse_formula(&format!("<[{{a,b}}]> {PHI}")).unwrap();
        assert!(c.eval_coalition_alt(&m, 0, &f).unwrap());
        let m = figure1();
        let f = parse_formula("[<{a,c}>] (K c ~p | K c p)").unwrap();
        assert!(c.eval_coalition_alt(&m, 0, &f).unwrap());
        let f = parse_formula("[<{}>] top").unwrap();
        assert!(c.eval_coalition_alt(&m, 0, &f).unwrap());
        assert!(c.eval(&m, 0, &f).unwrap());
    }

    #[test]
    fn characteristic_formulas_single_out_states() {
        let c = Checker::default();
        for m in [figure1(), figure2()] {
            let chars = characteristic_formulas(&m).unwrap();
            for (s, delta) in chars.iter().enumerate() {
                assert_eq!(
                    c.truth_set(&m, delta).unwrap(),
                    StateSet::singleton(m.len(), s)
                );
            }
        }
    }

    #[test]
    fn hole_failure_is_located_through_forms() {
        let c = Checker::default();
        let m = figure1();
        let a = Agent::new("c").unwrap();
        let eta = NecessityForm::Imp(
            Formula::Top,
            Box::new(NecessityForm::Know(a, Box::new(NecessityForm::Hole))),
        );
        let hole = parse_formula("~p").unwrap();
        let (model, point) = c.locate_hole_failure(&m, 0, &eta, &hole).unwrap().unwrap();
        assert_eq!(model.state_name(point), "v");
        assert!(c
            .locate_hole_failure(&m, 0, &NecessityForm::Hole, &hole)
            .unwrap()
            .is_none());
    }

    #[test]
    fn operator_labels() {
        assert_eq!(
            operator_label(&parse_formula("[<{a}>] p").unwrap()),
            "[<{a}>]"
        );
        assert_eq!(
            operator_label(&parse_formula("<{a,b}, q & r> p").unwrap()),
            "<{a,b}, q & r>"
        );
    }
}
