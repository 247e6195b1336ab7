use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{EpistemicModel, ModelError};
use crate::formula::Formula;

/// Class ids of every state after each round of partition refinement.
/// Round 0 groups states by valuation; each later round splits a class when
/// its members see different sets of classes through some agent. Only
/// rounds that split something are recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    rounds: Vec<Vec<usize>>,
}

impl Refinement {
    /// Number of splitting rounds after the valuation round.
    pub fn rounds_used(&self) -> usize {
        self.rounds.len() - 1
    }

    pub fn classes(&self, round: usize) -> &[usize] {
        &self.rounds[round]
    }

    pub fn final_classes(&self) -> &[usize] {
        self.rounds.last().expect("at least the valuation round")
    }

    pub fn class_count(&self, round: usize) -> usize {
        self.rounds[round].iter().max().map_or(0, |m| m + 1)
    }
}

fn dense_ids<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut ids = HashMap::new();
    keys.map(|k| {
        let next = ids.len();
        *ids.entry(k).or_insert(next)
    })
    .collect()
}

type Signature = (usize, Vec<BTreeSet<usize>>);

fn signature(m: &EpistemicModel, classes: &[usize], s: usize) -> Signature {
    let seen = (0..m.agents().len())
        .map(|a| m.class(a, s).iter().map(|t| classes[t]).collect())
        .collect();
    (classes[s], seen)
}

/// Partition refinement to the coarsest bisimulation.
pub fn refine(m: &EpistemicModel) -> Refinement {
    let n = m.len();
    let mut rounds = vec![dense_ids((0..n).map(|s| m.label(s)))];
    loop {
        let current = rounds.last().unwrap();
        let count = current.iter().max().map_or(0, |x| x + 1);
        let next = dense_ids((0..n).map(|s| signature(m, current, s)));
        let next_count = next.iter().max().map_or(0, |x| x + 1);
        if next_count == count {
            break;
        }
        rounds.push(next);
    }
    debug_assert!(rounds.len() <= n + 1);
    Refinement { rounds }
}

/// The quotient of a model by its largest bisimulation.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub model: EpistemicModel,
    /// `map[s]` is the quotient state of original state `s`.
    pub map: Vec<usize>,
    pub refinement: Refinement,
}

impl Contraction {
    /// True when no two states were merged.
    pub fn is_identity(&self) -> bool {
        self.model.len() == self.map.len()
    }
}

/// Contracts `m`. Quotient states are named after the first state of their
/// class and ordered by first occurrence.
pub fn contract(m: &EpistemicModel) -> Contraction {
    let refinement = refine(m);
    let map = refinement.final_classes().to_vec();
    let k = refinement.class_count(refinement.rounds_used());
    let mut reps = vec![usize::MAX; k];
    for (s, &c) in map.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = s;
        }
    }
    let partitions = (0..m.agents().len())
        .map(|a| {
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            for b in m.blocks(a) {
                let image: BTreeSet<usize> = b.iter().map(|s| map[s]).collect();
                let image: Vec<usize> = image.into_iter().collect();
                if !blocks.contains(&image) {
                    blocks.push(image);
                }
            }
            blocks
        })
        .collect();
    let valuation = (0..m.atoms().len())
        .map(|p| {
            (0..k)
                .filter(|&c| m.atom_set(p).contains(reps[c]))
                .collect()
        })
        .collect();
    let model = EpistemicModel::new(
        reps.iter().map(|&s| m.state_name(s).to_string()).collect(),
        m.agents().to_vec(),
        m.atoms().to_vec(),
        partitions,
        valuation,
    )
    .expect("quotient by a bisimulation of an S5 model is an S5 model");
    Contraction {
        model,
        map,
        refinement,
    }
}

fn disjunction(items: Vec<Arc<Formula>>) -> Arc<Formula> {
    items
        .into_iter()
        .reduce(|l, r| Arc::new(Formula::Or(l, r)))
        .unwrap_or_else(|| Arc::new(Formula::Bot))
}

fn conjunction(items: Vec<Arc<Formula>>) -> Arc<Formula> {
    items
        .into_iter()
        .reduce(|l, r| Arc::new(Formula::And(l, r)))
        .unwrap_or_else(|| Arc::new(Formula::Top))
}

/// One epistemic formula per state, true at exactly that state. The model
/// must be contracted.
///
/// Round 0 describes valuations; round k+1 conjoins, for every agent, a
/// `K̂` for each class the state sees and a `K` of their disjunction, over
/// the round-k formulas. As many rounds are built as refinement needed.
pub fn characteristic_formulas(m: &EpistemicModel) -> Result<Vec<Formula>, ModelError> {
    let refinement = refine(m);
    let last = refinement.final_classes();
    for s in 0..m.len() {
        if let Some(t) = (0..s).find(|&t| last[t] == last[s]) {
            return Err(ModelError::NotContracted(
                m.state_name(t).to_string(),
                m.state_name(s).to_string(),
            ));
        }
    }

    let representatives = |round: usize| {
        let count = refinement.class_count(round);
        let mut reps = vec![usize::MAX; count];
        for (s, &c) in refinement.classes(round).iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = s;
            }
        }
        reps
    };

    let mut current: Vec<Arc<Formula>> = representatives(0)
        .into_iter()
        .map(|s| {
            conjunction(
                m.atoms()
                    .iter()
                    .enumerate()
                    .map(|(p, name)| {
                        let atom = Arc::new(Formula::Atom(name.clone()));
                        if m.atom_set(p).contains(s) {
                            atom
                        } else {
                            Arc::new(Formula::Not(atom))
                        }
                    })
                    .collect(),
            )
        })
        .collect();

    for round in 1..=refinement.rounds_used() {
        let prev = refinement.classes(round - 1);
        current = representatives(round)
            .into_iter()
            .map(|s| {
                let mut parts = vec![current[prev[s]].clone()];
                for (a, agent) in m.agents().iter().enumerate() {
                    let seen: BTreeSet<usize> = m.class(a, s).iter().map(|t| prev[t]).collect();
                    for &c in &seen {
                        parts.push(Arc::new(Formula::KnowDual(
                            agent.clone(),
                            current[c].clone(),
                        )));
                    }
                    let all = disjunction(seen.iter().map(|&c| current[c].clone()).collect());
                    parts.push(Arc::new(Formula::Know(agent.clone(), all)));
                }
                conjunction(parts)
            })
            .collect();
    }

    Ok(last.iter().map(|&c| (*current[c]).clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Agent;
    use crate::model::fixtures::{figure1, figure2};

    fn two_twins() -> EpistemicModel {
        let agents = vec![Agent::new("a").unwrap(), Agent::new("b").unwrap()];
        EpistemicModel::new(
            vec!["s".into(), "t".into()],
            agents,
            vec!["p".into()],
            vec![vec![vec![0, 1]], vec![vec![0, 1]]],
            vec![vec![0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn distinct_valuations_do_not_merge() {
        for m in [figure1(), figure2()] {
            let c = contract(&m);
            assert!(c.is_identity());
            assert!(c.model.is_isomorphic(&m));
            assert_eq!(c.refinement.rounds_used(), 0);
        }
    }

    #[test]
    fn symmetric_duplicates_merge() {
        let c = contract(&two_twins());
        assert_eq!(c.model.len(), 1);
        assert_eq!(c.map, vec![0, 0]);
        assert_eq!(c.model.state_name(0), "s");
    }

    #[test]
    fn contraction_is_idempotent() {
        let c = contract(&two_twins());
        let again = contract(&c.model);
        assert!(again.is_identity());
        assert!(again.model.is_isomorphic(&c.model));
    }

    #[test]
    fn refinement_needs_a_round_when_views_differ() {
        // s0,s1 both satisfy p; only s0 is a-linked to the ¬p state s2.
        let m = EpistemicModel::new(
            vec!["s0".into(), "s1".into(), "s2".into()],
            vec![Agent::new("a").unwrap()],
            vec!["p".into()],
            vec![vec![vec![0, 2], vec![1]]],
            vec![vec![0, 1]],
        )
        .unwrap();
        let r = refine(&m);
        assert_eq!(r.rounds_used(), 1);
        assert!(contract(&m).is_identity());
        let chars = characteristic_formulas(&m).unwrap();
        assert_eq!(chars.len(), 3);
    }

    #[test]
    fn uncontracted_model_is_rejected() {
        assert!(matches!(
            characteristic_formulas(&two_twins()),
            Err(ModelError::NotContracted(_, _))
        ));
    }

    #[test]
    fn figure2_characteristic_formulas_are_valuation_descriptions() {
        let m = figure2();
        let chars = characteristic_formulas(&m).unwrap();
        let pqnr = m.state_index("pqnr").unwrap();
        assert_eq!(
            chars[pqnr],
            crate::parser::parse_formula("p & q & ~r").unwrap()
        );
    }

    #[test]
    fn single_state_model() {
        let m = contract(&two_twins()).model;
        let chars = characteristic_formulas(&m).unwrap();
        assert_eq!(chars, vec![Formula::atom("p")]);
    }
}
