use std::fmt;

use smallvec::SmallVec;

const WORD: usize = 64;

/// A set of state indices of one model, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    universe: usize,
    words: SmallVec<[u64; 2]>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet {
            universe,
            words: SmallVec::from_elem(0, universe.div_ceil(WORD)),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = StateSet::empty(universe);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * WORD;
            let n = (universe - lo).min(WORD);
            *w = if n == WORD { u64::MAX } else { (1u64 << n) - 1 };
        }
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = StateSet::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn singleton(universe: usize, i: usize) -> Self {
        StateSet::from_indices(universe, [i])
    }

    /// Number of states of the model this set lives in.
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.universe,
            "state {i} outside universe {}",
            self.universe
        );
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.universe {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / WORD] & (1 << (i % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> StateSet {
        StateSet::full(self.universe).difference(self)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    fn zip(&self, other: &StateSet, op: impl Fn(u64, u64) -> u64) -> StateSet {
        debug_assert_eq!(
            self.universe, other.universe,
            "state sets of different models"
        );
        StateSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + bit)
                }
            })
        })
    }

    /// Re-expresses `self`, a set over the states of a submodel whose
    /// states are the members of `within` (in order), as a set over the
    /// parent model.
    pub fn lift(&self, within: &StateSet) -> StateSet {
        debug_assert_eq!(self.universe, within.len());
        let mut out = StateSet::empty(within.universe);
        for (k, parent) in within.iter().enumerate() {
            if self.contains(k) {
                out.insert(parent);
            }
        }
        out
    }

    /// Pulls a set back along a state map `old -> new`.
    pub fn preimage(&self, map: &[usize]) -> StateSet {
        StateSet::from_indices(
            map.len(),
            map.iter()
                .enumerate()
                .filter(|(_, &img)| self.contains(img))
                .map(|(i, _)| i),
        )
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_algebra() {
        let a = StateSet::from_indices(5, [0, 2, 4]);
        let b = StateSet::from_indices(5, [2, 3]);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), vec![0, 2, 3, 4]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!(a.complement().iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(StateSet::full(5).len(), 5);
        assert!(StateSet::empty(5).is_empty());
        assert!(StateSet::from_indices(5, [2]).is_subset(&a));
    }

    #[test]
    fn wide_sets() {
        let full = StateSet::full(130);
        assert_eq!(full.len(), 130);
        assert!(full.contains(129));
        assert!(!full.contains(130));
        let s = StateSet::from_indices(130, [0, 64, 128]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 64, 128]);
        assert_eq!(s.complement().len(), 127);
    }

    #[test]
    fn lift_and_preimage() {
        let within = StateSet::from_indices(6, [1, 3, 4]);
        let sub = StateSet::from_indices(3, [0, 2]);
        assert_eq!(sub.lift(&within).iter().collect::<Vec<_>>(), vec![1, 4]);
        let map = [0, 0, 1, 2, 1];
        let img = StateSet::from_indices(3, [1]);
        assert_eq!(img.preimage(&map).iter().collect::<Vec<_>>(), vec![2, 4]);
    }
}
