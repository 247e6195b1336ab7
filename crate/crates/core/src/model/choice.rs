//! What a group can announce, extensionally.
//!
//! `K_i φ` is always true on a union of agent `i`'s equivalence classes,
//! and on a contracted finite model every such union is the truth set of
//! some `K_i φ` with `φ` epistemic. So an announcement `⋀_{i∈G} K_i φ_i`
//! is, up to equivalence, a choice of one class union per member of `G`,
//! and its truth set is their intersection.

use std::collections::HashMap;

use super::{characteristic_formulas, EpistemicModel, ModelError, StateSet};
use crate::formula::{Agent, Formula, Group, GroupKnowledgeFormula};

/// Default bound on the candidates one quantifier may enumerate.
pub const DEFAULT_CAP: usize = 1_000_000;

/// A joint announcement of a group: one union of classes per member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChoiceSet {
    pub agents: Vec<Agent>,
    /// Aligned with `agents`: the union of that agent's classes it picks.
    pub components: Vec<StateSet>,
    /// Intersection of the components; all states for the empty group.
    pub extension: StateSet,
}

impl ChoiceSet {
    pub fn silence(m: &EpistemicModel, agents: Vec<Agent>) -> ChoiceSet {
        let components = vec![m.all_states(); agents.len()];
        ChoiceSet {
            agents,
            components,
            extension: m.all_states(),
        }
    }

    /// The announcement `⋀ K_i (⋁_{s ∈ component_i} δ_s)` given the
    /// model's characteristic formulas `chars`.
    pub fn announcement(&self, chars: &[Formula]) -> GroupKnowledgeFormula {
        let bindings = self
            .agents
            .iter()
            .zip(&self.components)
            .map(|(a, comp)| {
                (
                    a.clone(),
                    Formula::disjunction(comp.iter().map(|s| chars[s].clone())),
                )
            })
            .collect();
        GroupKnowledgeFormula::new(bindings).expect("characteristic formulas are epistemic")
    }
}

fn cap_exceeded(needed: u128, cap: usize) -> ModelError {
    ModelError::EnumerationCapExceeded { needed, cap }
}

/// Every non-empty union of agent `a`'s classes, starting from the union of
/// all of them and counting down through the block subsets.
pub fn agent_unions(m: &EpistemicModel, a: usize, cap: usize) -> Result<Vec<StateSet>, ModelError> {
    let blocks = m.blocks(a);
    let k = blocks.len();
    let count: u128 = if k >= 127 {
        u128::MAX
    } else {
        (1u128 << k) - 1
    };
    if count > cap as u128 {
        return Err(cap_exceeded(count, cap));
    }
    let count = count as u64;
    Ok((1..=count)
        .rev()
        .map(|mask| {
            let mut u = StateSet::empty(m.len());
            for (i, b) in blocks.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    u.union_with(b);
                }
            }
            u
        })
        .collect())
}

fn group_indices(m: &EpistemicModel, g: &Group) -> Result<Vec<(Agent, usize)>, ModelError> {
    g.iter()
        .map(|a| {
            m.agent_index(a)
                .map(|i| (a.clone(), i))
                .ok_or_else(|| ModelError::UnknownAgent(a.name().to_string()))
        })
        .collect()
}

/// Every decomposition `(U_i)_{i ∈ G}` with its extension, in lexicographic
/// order over the members of `G` (sorted by name). Fails when the number
/// of decompositions exceeds `cap`.
pub fn choice_sets(
    m: &EpistemicModel,
    g: &Group,
    cap: usize,
) -> Result<Vec<ChoiceSet>, ModelError> {
    let members = group_indices(m, g)?;
    let mut total: u128 = 1;
    let mut unions = Vec::with_capacity(members.len());
    for (_, a) in &members {
        let u = agent_unions(m, *a, cap)?;
        total = total.saturating_mul(u.len() as u128);
        if total > cap as u128 {
            return Err(cap_exceeded(total, cap));
        }
        unions.push(u);
    }
    let agents: Vec<Agent> = members.into_iter().map(|(a, _)| a).collect();
    let mut out = vec![ChoiceSet::silence(m, Vec::new())];
    for (i, u) in unions.iter().enumerate() {
        let prefix = &agents[..=i];
        out = out
            .into_iter()
            .flat_map(|c| {
                u.iter().map(move |comp| {
                    let mut components = c.components.clone();
                    components.push(comp.clone());
                    ChoiceSet {
                        agents: prefix.to_vec(),
                        components,
                        extension: c.extension.intersection(comp),
                    }
                })
            })
            .collect();
    }
    Ok(out)
}

/// Choice sets with pairwise distinct extensions. Each extension keeps the
/// first decomposition that produces it in the order of [`choice_sets`];
/// extensions appear in order of first production. `cap` bounds the
/// candidates examined.
pub fn distinct_choices(
    m: &EpistemicModel,
    g: &Group,
    cap: usize,
) -> Result<Vec<ChoiceSet>, ModelError> {
    let members = group_indices(m, g)?;
    let agents: Vec<Agent> = members.iter().map(|(a, _)| a.clone()).collect();
    let mut partial = vec![(m.all_states(), Vec::<StateSet>::new())];
    let mut examined: u128 = 0;
    for (_, a) in &members {
        let unions = agent_unions(m, *a, cap)?;
        examined += (partial.len() * unions.len()) as u128;
        if examined > cap as u128 {
            return Err(cap_exceeded(examined, cap));
        }
        let mut seen: HashMap<StateSet, usize> = HashMap::new();
        let mut next = Vec::new();
        for (ext, comps) in &partial {
            for u in &unions {
                let e = ext.intersection(u);
                if seen.contains_key(&e) {
                    continue;
                }
                seen.insert(e.clone(), next.len());
                let mut c = comps.clone();
                c.push(u.clone());
                next.push((e, c));
            }
        }
        partial = next;
    }
    Ok(partial
        .into_iter()
        .map(|(extension, components)| ChoiceSet {
            agents: agents.clone(),
            components,
            extension,
        })
        .collect())
}

/// Converts a choice set over a contracted model into an announcement
/// whose truth set is the choice set's extension.
pub fn definable_formula(
    m: &EpistemicModel,
    c: &ChoiceSet,
) -> Result<GroupKnowledgeFormula, ModelError> {
    Ok(c.announcement(&characteristic_formulas(m)?))
}
