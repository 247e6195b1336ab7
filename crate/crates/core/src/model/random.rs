use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EpistemicModel;
use crate::formula::Agent;

/// Default names: agents `a, b, c, ...`, atoms `p, q, r, ...`, states `s0, s1, ...`.
pub(crate) fn agent_name(i: usize) -> String {
    let letters = "abcdefghij";
    match letters.chars().nth(i) {
        Some(c) => c.to_string(),
        None => format!("ag{i}"),
    }
}

pub(crate) fn atom_name(i: usize) -> String {
    let letters = ["p", "q", "r", "s", "t", "u"];
    letters
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("p{i}"))
}

/// `completions[i][m]`: number of ways to finish a restricted growth string
/// at position `i` with `m` blocks already opened.
fn completion_counts(n: usize) -> Vec<Vec<f64>> {
    let mut t = vec![vec![0.0; n + 2]; n + 1];
    t[n].fill(1.0);
    for i in (0..n).rev() {
        for m in 0..=n {
            t[i][m] = m as f64 * t[i + 1][m] + t[i + 1][m + 1];
        }
    }
    t
}

/// A set partition of `0..n` drawn uniformly among all of them, as a
/// block id per element.
fn uniform_partition(rng: &mut impl Rng, n: usize, counts: &[Vec<f64>]) -> Vec<usize> {
    let mut ids = Vec::with_capacity(n);
    let mut opened = 0;
    for i in 0..n {
        let existing = opened as f64 * counts[i + 1][opened];
        let fresh = counts[i + 1][opened + 1];
        let x = rng.gen::<f64>() * (existing + fresh);
        if x < existing {
            ids.push(((x / counts[i + 1][opened]) as usize).min(opened - 1));
        } else {
            ids.push(opened);
            opened += 1;
        }
    }
    ids
}

/// A random model, deterministic in `seed`. Each agent's partition is
/// uniform over set partitions of the states; each atom's truth set is
/// uniform over subsets.
pub fn random_model(seed: u64, n_states: usize, n_agents: usize, n_atoms: usize) -> EpistemicModel {
    assert!(
        n_states >= 1 && n_agents >= 1 && n_atoms >= 1,
        "counts must be positive"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = completion_counts(n_states);
    let partitions = (0..n_agents)
        .map(|_| {
            let ids = uniform_partition(&mut rng, n_states, &counts);
            let k = ids.iter().max().unwrap() + 1;
            (0..k)
                .map(|b| (0..n_states).filter(|&s| ids[s] == b).collect())
                .collect()
        })
        .collect();
    let valuation = (0..n_atoms)
        .map(|_| (0..n_states).filter(|_| rng.gen::<bool>()).collect())
        .collect();
    EpistemicModel::new(
        (0..n_states).map(|s| format!("s{s}")).collect(),
        (0..n_agents)
            .map(|i| Agent::new(agent_name(i)).expect("generated names are valid"))
            .collect(),
        (0..n_atoms).map(atom_name).collect(),
        partitions,
        valuation,
    )
    .expect("generated models are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_model, render_model};
    use std::collections::HashMap;

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(random_model(7, 5, 3, 3), random_model(7, 5, 3, 3));
        assert_ne!(random_model(7, 5, 3, 3), random_model(8, 5, 3, 3));
    }

    #[test]
    fn one_state_model() {
        let m = random_model(3, 1, 1, 1);
        assert_eq!(m.len(), 1);
        assert_eq!(m.blocks(0).len(), 1);
    }

    #[test]
    fn round_trips_through_documents() {
        for seed in 0..20 {
            let m = random_model(seed, 5, 3, 3);
            assert_eq!(parse_model(&render_model(&m)).unwrap(), m);
        }
    }

    #[test]
    fn partitions_are_roughly_uniform() {
        // Bell(3) = 5 partitions of three states, each should appear ~1/5.
        let counts = completion_counts(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let draws = 20_000;
        for _ in 0..draws {
            *seen
                .entry(uniform_partition(&mut rng, 3, &counts))
                .or_default() += 1;
        }
        assert_eq!(seen.len(), 5);
        for (_, c) in seen {
            let frac = c as f64 / draws as f64;
            assert!((frac - 0.2).abs() < 0.02, "{frac}");
        }
    }
}
