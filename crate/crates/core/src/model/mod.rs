//! Finite multi-agent S5 models: construction and validation, public
//! announcement updates, bisimulation contraction, characteristic
//! formulas, and the enumeration of what a group can announce.

mod choice;
mod contract;
pub mod fixtures;
mod random;
mod stateset;

use thiserror::Error;

use crate::formula::Agent;

pub use choice::{
    agent_unions, choice_sets, definable_formula, distinct_choices, ChoiceSet, DEFAULT_CAP,
};
pub use contract::{characteristic_formulas, contract, refine, Contraction, Refinement};
pub use random::random_model;
pub use stateset::StateSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{line}:{column}: malformed model document: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid name `{0}`: expected [a-z][a-z0-9_]*")]
    InvalidName(String),
    #[error("model has no states")]
    NoStates,
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("undeclared atom `{0}`")]
    UndeclaredAtom(String),
    #[error("no valuation given for state `{0}`")]
    MissingValuation(String),
    #[error("no partition given for agent `{0}`")]
    MissingPartition(String),
    #[error("partition of agent `{agent}` has an empty block")]
    EmptyBlock { agent: String },
    #[error("partition of agent `{agent}` has overlapping blocks at state `{state}`")]
    OverlappingBlocks { agent: String, state: String },
    #[error("partition of agent `{agent}` does not cover state `{state}`")]
    NotCovering { agent: String, state: String },
    #[error("announcement with an empty extension cannot be executed")]
    EmptyUpdate,
    #[error("enumeration cap exceeded: {needed} candidates needed, cap is {cap}")]
    EnumerationCapExceeded { needed: u128, cap: usize },
    #[error("model is not bisimulation-contracted: states `{0}` and `{1}` are bisimilar")]
    NotContracted(String, String),
}

/// A finite epistemic model: named states, one partition of the states per
/// agent, and a valuation. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpistemicModel {
    states: Vec<String>,
    agents: Vec<Agent>,
    atoms: Vec<String>,
    /// Per agent: blocks ordered by their least state.
    partitions: Vec<Vec<StateSet>>,
    /// Per agent, per state: index of the block containing it.
    block_of: Vec<Vec<usize>>,
    /// Per atom: states where it holds.
    valuation: Vec<StateSet>,
}

impl EpistemicModel {
    /// Builds and validates a model. `partitions[a]` lists agent `a`'s
    /// blocks as state indices; `valuation[p]` lists the states where atom
    /// `p` is true.
    pub fn new(
        states: Vec<String>,
        agents: Vec<Agent>,
        atoms: Vec<String>,
        partitions: Vec<Vec<Vec<usize>>>,
        valuation: Vec<Vec<usize>>,
    ) -> Result<Self, ModelError> {
        let n = states.len();
        if n == 0 {
            return Err(ModelError::NoStates);
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        for (i, a) in agents.iter().enumerate() {
            if agents[..i].contains(a) {
                return Err(ModelError::DuplicateAgent(a.name().to_string()));
            }
        }
        for (i, p) in atoms.iter().enumerate() {
            if atoms[..i].contains(p) {
                return Err(ModelError::DuplicateAtom(p.clone()));
            }
        }
        assert_eq!(partitions.len(), agents.len(), "one partition per agent");
        assert_eq!(valuation.len(), atoms.len(), "one truth set per atom");

        let mut blocks_out = Vec::with_capacity(agents.len());
        let mut block_of = Vec::with_capacity(agents.len());
        for (agent, blocks) in agents.iter().zip(partitions) {
            let agent_name = || agent.name().to_string();
            let mut owner = vec![usize::MAX; n];
            let mut sets = Vec::with_capacity(blocks.len());
            for block in blocks {
                if block.is_empty() {
                    return Err(ModelError::EmptyBlock {
                        agent: agent_name(),
                    });
                }
                let mut set = StateSet::empty(n);
                for s in block {
                    if s >= n {
                        return Err(ModelError::UnknownState(format!("#{s}")));
                    }
                    if owner[s] != usize::MAX || set.contains(s) {
                        return Err(ModelError::OverlappingBlocks {
                            agent: agent_name(),
                            state: states[s].clone(),
                        });
                    }
                    owner[s] = 0;
                    set.insert(s);
                }
                sets.push(set);
            }
            if let Some(s) = owner.iter().position(|&o| o == usize::MAX) {
                return Err(ModelError::NotCovering {
                    agent: agent_name(),
                    state: states[s].clone(),
                });
            }
            sets.sort_by_key(|b| b.first());
            for (bi, b) in sets.iter().enumerate() {
                for s in b.iter() {
                    owner[s] = bi;
                }
            }
            blocks_out.push(sets);
            block_of.push(owner);
        }
        let valuation = valuation
            .into_iter()
            .map(|v| {
                if let Some(&bad) = v.iter().find(|&&s| s >= n) {
                    return Err(ModelError::UnknownState(format!("#{bad}")));
                }
                Ok(StateSet::from_indices(n, v))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let m = EpistemicModel {
            states,
            agents,
            atoms,
            partitions: blocks_out,
            block_of,
            valuation,
        };
        debug_assert!(m.relations_are_equivalences());
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent_index(&self, a: &Agent) -> Option<usize> {
        self.agents.iter().position(|x| x == a)
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_index(&self, p: &str) -> Option<usize> {
        self.atoms.iter().position(|x| x == p)
    }

    pub fn atom_set(&self, p: usize) -> &StateSet {
        &self.valuation[p]
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.len())
    }

    /// Blocks of agent `a`'s partition, ordered by least member.
    pub fn blocks(&self, a: usize) -> &[StateSet] {
        &self.partitions[a]
    }

    pub fn block_index(&self, a: usize, s: usize) -> usize {
        self.block_of[a][s]
    }

    /// The equivalence class of `s` under agent `a`'s relation.
    pub fn class(&self, a: usize, s: usize) -> &StateSet {
        &self.partitions[a][self.block_of[a][s]]
    }

    pub fn related(&self, a: usize, s: usize, t: usize) -> bool {
        self.block_of[a][s] == self.block_of[a][t]
    }

    /// States all of whose `a`-alternatives lie in `set`.
    pub fn knows(&self, a: usize, set: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.len());
        for b in &self.partitions[a] {
            if b.is_subset(set) {
                out.union_with(b);
            }
        }
        out
    }

    /// Atoms true at `s`, as indices.
    pub fn label(&self, s: usize) -> Vec<bool> {
        self.valuation.iter().map(|v| v.contains(s)).collect()
    }

    fn relations_are_equivalences(&self) -> bool {
        let n = self.len();
        (0..self.agents.len()).all(|a| {
            (0..n).all(|s| {
                self.related(a, s, s)
                    && (0..n).all(|t| {
                        self.related(a, s, t) == self.related(a, t, s)
                            && (0..n).all(|u| {
                                !(self.related(a, s, t) && self.related(a, t, u))
                                    || self.related(a, s, u)
                            })
                    })
            })
        })
    }

    /// The model restricted to `keep`. State `k` of the result is the
    /// `k`-th member of `keep`; names are preserved.
    pub fn update(&self, keep: &StateSet) -> Result<EpistemicModel, ModelError> {
        if keep.is_empty() {
            return Err(ModelError::EmptyUpdate);
        }
        let members: Vec<usize> = keep.iter().collect();
        let m = members.len();
        let mut new_index = vec![usize::MAX; self.len()];
        for (k, &s) in members.iter().enumerate() {
            new_index[s] = k;
        }
        let restrict = |set: &StateSet| {
            let mut out = StateSet::empty(m);
            for s in set.intersection(keep).iter() {
                out.insert(new_index[s]);
            }
            out
        };
        let partitions: Vec<Vec<StateSet>> = self
            .partitions
            .iter()
            .map(|blocks| {
                blocks
                    .iter()
                    .map(&restrict)
                    .filter(|b| !b.is_empty())
                    .collect()
            })
            .collect();
        let block_of = partitions
            .iter()
            .map(|blocks: &Vec<StateSet>| {
                let mut owner = vec![0; m];
                for (bi, b) in blocks.iter().enumerate() {
                    for s in b.iter() {
                        owner[s] = bi;
                    }
                }
                owner
            })
            .collect();
        Ok(EpistemicModel {
            states: members.iter().map(|&s| self.states[s].clone()).collect(),
            agents: self.agents.clone(),
            atoms: self.atoms.clone(),
            partitions,
            block_of,
            valuation: self.valuation.iter().map(restrict).collect(),
        })
    }

    /// Same model with states renamed by `rename` (must be injective).
    pub fn rename_states(&self, rename: impl Fn(&str) -> String) -> EpistemicModel {
        let mut m = self.clone();
        m.states = self.states.iter().map(|s| rename(s)).collect();
        m
    }

    /// Reorders states: state `s` of the result is `order[s]` of `self`.
    pub fn permute(&self, order: &[usize]) -> EpistemicModel {
        assert_eq!(order.len(), self.len());
        let mut pos = vec![0; self.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let to_new =
            |set: &StateSet| StateSet::from_indices(self.len(), set.iter().map(|s| pos[s]));
        EpistemicModel::new(
            order.iter().map(|&s| self.states[s].clone()).collect(),
            self.agents.clone(),
            self.atoms.clone(),
            self.partitions
                .iter()
                .map(|blocks| blocks.iter().map(|b| to_new(b).iter().collect()).collect())
                .collect(),
            self.valuation
                .iter()
                .map(|v| to_new(v).iter().collect())
                .collect(),
        )
        .expect("permutation preserves validity")
    }

    /// Structural equality up to a bijection of states that preserves
    /// valuation and every agent's relation. Brute force; for small models.
    pub fn is_isomorphic(&self, other: &EpistemicModel) -> bool {
        if self.len() != other.len() || self.agents != other.agents || self.atoms != other.atoms {
            return false;
        }
        let n = self.len();
        let mut assignment = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_iso(other, 0, &mut assignment, &mut used)
    }

    fn extend_iso(
        &self,
        other: &EpistemicModel,
        s: usize,
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if s == self.len() {
            return true;
        }
        for t in 0..other.len() {
            if used[t] || self.label(s) != other.label(t) {
                continue;
            }
            let consistent = (0..s).all(|u| {
                (0..self.agents.len())
                    .all(|a| self.related(a, s, u) == other.related(a, t, assignment[u]))
            });
            if !consistent {
                continue;
            }
            assignment[s] = t;
            used[t] = true;
            if self.extend_iso(other, s + 1, assignment, used) {
                return true;
            }
            used[t] = false;
        }
        false
    }
}
