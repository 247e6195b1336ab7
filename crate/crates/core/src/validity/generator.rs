use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Agent, Formula, Group, GroupKnowledgeFormula, NecessityForm, Stratum};

/// Random formulas over fixed atoms and agents.
pub struct Generator {
    rng: ChaCha8Rng,
    atoms: Vec<String>,
    agents: Vec<Agent>,
}

/// A random formula of stratum at most `stratum` and height at most
/// `max_depth`. Deterministic in `seed`.
pub fn gen_formula(
    seed: u64,
    stratum: Stratum,
    max_depth: usize,
    atoms: &[String],
    agents: &[Agent],
) -> Formula {
    Generator::new(seed, atoms, agents).formula(stratum, max_depth)
}

#[derive(Clone, Copy)]
enum Op {
    Not,
    And,
    Or,
    Imp,
    Iff,
    Know,
    KnowDual,
    Ann,
    AnnDual,
    Group,
    GroupDual,
    RelGroup,
    RelGroupDual,
    Coal,
    CoalDual,
}

const EL_OPS: &[(Op, u32)] = &[
    (Op::Not, 4),
    (Op::And, 4),
    (Op::Or, 2),
    (Op::Imp, 2),
    (Op::Iff, 1),
    (Op::Know, 4),
    (Op::KnowDual, 2),
];
const PAL_OPS: &[(Op, u32)] = &[(Op::Ann, 3), (Op::AnnDual, 2)];
const RGAL_OPS: &[(Op, u32)] = &[
    (Op::Group, 1),
    (Op::GroupDual, 1),
    (Op::RelGroup, 1),
    (Op::RelGroupDual, 1),
];
const CORGAL_OPS: &[(Op, u32)] = &[(Op::Coal, 2), (Op::CoalDual, 2)];

impl Generator {
    pub fn new(seed: u64, atoms: &[String], agents: &[Agent]) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            atoms: atoms.to_vec(),
            agents: agents.to_vec(),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn atom(&mut self) -> Formula {
        if self.atoms.is_empty() {
            return Formula::Top;
        }
        Formula::atom(self.atoms.choose(&mut self.rng).unwrap().clone())
    }

    fn leaf(&mut self) -> Formula {
        match self.rng.gen_range(0..12) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => self.atom(),
        }
    }

    pub fn agent(&mut self) -> Agent {
        self.agents.choose(&mut self.rng).unwrap().clone()
    }

    /// A random subset of the agents, empty with small probability.
    pub fn group(&mut self) -> Group {
        if self.rng.gen_ratio(1, 20) {
            return Group::new();
        }
        loop {
            let g: Group = self
                .agents
                .iter()
                .filter(|_| self.rng.gen_bool(0.5))
                .cloned()
                .collect();
            if !g.is_empty() || self.agents.is_empty() {
                return g;
            }
        }
    }

    pub fn formula(&mut self, stratum: Stratum, max_depth: usize) -> Formula {
        if max_depth == 0 || self.rng.gen_ratio(1, 4) {
            return self.leaf();
        }
        let mut ops: Vec<(Op, u32)> = EL_OPS.to_vec();
        if stratum >= Stratum::Pal {
            ops.extend_from_slice(PAL_OPS);
        }
        if stratum >= Stratum::Rgal {
            ops.extend_from_slice(RGAL_OPS);
        }
        if stratum >= Stratum::Corgal {
            ops.extend_from_slice(CORGAL_OPS);
        }
        let op = ops.choose_weighted(&mut self.rng, |(_, w)| *w).unwrap().0;
        let d = max_depth - 1;
        // contexts stay quantifier-free
        let context = stratum.min(Stratum::Pal);
        match op {
            Op::Not => Formula::not(self.formula(stratum, d)),
            Op::And => Formula::and(self.formula(stratum, d), self.formula(stratum, d)),
            Op::Or => Formula::or(self.formula(stratum, d), self.formula(stratum, d)),
            Op::Imp => Formula::imp(self.formula(stratum, d), self.formula(stratum, d)),
            Op::Iff => Formula::iff(self.formula(stratum, d), self.formula(stratum, d)),
            Op::Know => {
                let a = self.agent();
                Formula::know(a, self.formula(stratum, d))
            }
            Op::KnowDual => {
                let a = self.agent();
                Formula::know_dual(a, self.formula(stratum, d))
            }
            Op::Ann => Formula::ann(self.formula(context, d), self.formula(stratum, d)),
            Op::AnnDual => Formula::ann_dual(self.formula(context, d), self.formula(stratum, d)),
            Op::Group => {
                let g = self.group();
                Formula::rel_group(g, Formula::Top, self.formula(stratum, d))
            }
            Op::GroupDual => {
                let g = self.group();
                Formula::rel_group_dual(g, Formula::Top, self.formula(stratum, d))
            }
            Op::RelGroup => {
                let g = self.group();
                let chi = self.formula(context, d);
                Formula::rel_group(g, chi, self.formula(stratum, d))
            }
            Op::RelGroupDual => {
                let g = self.group();
                let chi = self.formula(context, d);
                Formula::rel_group_dual(g, chi, self.formula(stratum, d))
            }
            Op::Coal => {
                let g = self.group();
                Formula::coal(g, self.formula(stratum, d))
            }
            Op::CoalDual => {
                let g = self.group();
                Formula::coal_dual(g, self.formula(stratum, d))
            }
        }
    }

    /// `⋀_{a ∈ g} K_a φ_a` with random epistemic `φ_a`.
    pub fn group_knowledge(&mut self, g: &Group, max_depth: usize) -> GroupKnowledgeFormula {
        let bindings: BTreeMap<Agent, Formula> = g
            .iter()
            .map(|a| (a.clone(), self.formula(Stratum::El, max_depth)))
            .collect();
        GroupKnowledgeFormula::new(bindings).expect("generated bindings are epistemic")
    }

    /// A necessity form of depth at most `max_depth`, with formulas in
    /// its context of stratum at most `stratum`.
    pub fn necessity_form(&mut self, stratum: Stratum, max_depth: usize) -> NecessityForm {
        if max_depth == 0 || self.rng.gen_ratio(1, 4) {
            return NecessityForm::Hole;
        }
        let inner = Box::new(self.necessity_form(stratum, max_depth - 1));
        match self.rng.gen_range(0..3) {
            0 => NecessityForm::Imp(self.formula(stratum, 2), inner),
            1 => NecessityForm::Know(self.agent(), inner),
            _ => NecessityForm::Ann(self.formula(stratum.min(Stratum::Pal), 2), inner),
        }
    }

    /// A propositional formula over `vars`.
    pub fn propositional(&mut self, vars: &[Formula], max_depth: usize) -> Formula {
        if max_depth == 0 || self.rng.gen_ratio(1, 3) {
            return vars.choose(&mut self.rng).unwrap().clone();
        }
        let d = max_depth - 1;
        match self.rng.gen_range(0..5) {
            0 => Formula::not(self.propositional(vars, d)),
            1 => Formula::and(self.propositional(vars, d), self.propositional(vars, d)),
            2 => Formula::or(self.propositional(vars, d), self.propositional(vars, d)),
            3 => Formula::imp(self.propositional(vars, d), self.propositional(vars, d)),
            _ => Formula::iff(self.propositional(vars, d), self.propositional(vars, d)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> (Vec<String>, Vec<Agent>) {
        (
            vec!["p".into(), "q".into()],
            vec![Agent::new("a").unwrap(), Agent::new("b").unwrap()],
        )
    }

    #[test]
    fn deterministic() {
        let (atoms, agents) = sig();
        for seed in 0..50 {
            assert_eq!(
                gen_formula(seed, Stratum::Corgal, 3, &atoms, &agents),
                gen_formula(seed, Stratum::Corgal, 3, &atoms, &agents)
            );
        }
    }

    #[test]
    fn stratum_and_depth_bounds() {
        let (atoms, agents) = sig();
        for stratum in [Stratum::El, Stratum::Pal, Stratum::Rgal, Stratum::Corgal] {
            for seed in 0..300 {
                let f = gen_formula(seed, stratum, 2, &atoms, &agents);
                assert!(f.stratum() <= stratum);
                assert!(f.height() <= 2);
            }
        }
    }

    #[test]
    fn every_stratum_is_reached() {
        let (atoms, agents) = sig();
        let seen: std::collections::BTreeSet<Stratum> = (0..500)
            .map(|s| gen_formula(s, Stratum::Corgal, 3, &atoms, &agents).stratum())
            .collect();
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn empty_group_occurs() {
        let (atoms, agents) = sig();
        let mut g = Generator::new(1, &atoms, &agents);
        assert!((0..500).any(|_| g.group().is_empty()));
    }

    #[test]
    fn necessity_forms_have_one_hole() {
        let (atoms, agents) = sig();
        let mut g = Generator::new(3, &atoms, &agents);
        for _ in 0..100 {
            let eta = g.necessity_form(Stratum::Pal, 2);
            assert_eq!(eta.hole_count(), 1);
            assert!(eta.depth() <= 2);
        }
    }
}
