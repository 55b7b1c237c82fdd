//! Complete deterministic automata over letters `0..num_letters`.

use std::collections::{BTreeSet, HashMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub num_letters: usize,
    pub start: usize,
    pub accepting: Vec<bool>,
    /// `delta[q][a]`, total.
    pub delta: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    /// Builds a complete automaton from a partial transition list; missing
    /// transitions go to a fresh rejecting state.
    pub fn from_partial(
        num_letters: usize,
        num_states: usize,
        start: usize,
        accepting: &[usize],
        transitions: &[(usize, usize, usize)],
    ) -> Dfa {
        let dead = num_states;
        let mut delta = vec![vec![dead; num_letters]; num_states + 1];
        for &(q, a, r) in transitions {
            delta[q][a] = r;
        }
        let mut acc = vec![false; num_states + 1];
        for &q in accepting {
            acc[q] = true;
        }
        Dfa {
            num_letters,
            start,
            accepting: acc,
            delta,
        }
    }

    /// The automaton accepting every word (`all = true`) or none.
    pub fn constant(num_letters: usize, all: bool) -> Dfa {
        Dfa {
            num_letters,
            start: 0,
            accepting: vec![all],
            delta: vec![vec![0; num_letters]],
        }
    }

    pub fn step(&self, q: usize, a: usize) -> usize {
        self.delta[q][a]
    }

    pub fn run_from(&self, q: usize, word: &[usize]) -> usize {
        word.iter().fold(q, |q, &a| self.delta[q][a])
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.accepting[self.run_from(self.start, word)]
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(q) = queue.pop_front() {
            for &r in &self.delta[q] {
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// States from which some accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for &r in &self.delta[q] {
                rev[r].push(q);
            }
        }
        let mut live = self.accepting.clone();
        let mut queue: VecDeque<usize> = (0..n).filter(|&q| live[q]).collect();
        while let Some(r) = queue.pop_front() {
            for &q in &rev[r] {
                if !live[q] {
                    live[q] = true;
                    queue.push_back(q);
                }
            }
        }
        live
    }

    pub fn is_empty(&self) -> bool {
        let reach = self.reachable();
        !(0..self.num_states()).any(|q| reach[q] && self.accepting[q])
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            accepting: self.accepting.iter().map(|a| !a).collect(),
            ..self.clone()
        }
    }

    /// Reachable part of the synchronous product, accepting by `f`.
    pub fn product(&self, other: &Dfa, f: impl Fn(bool, bool) -> bool) -> Dfa {
        assert_eq!(self.num_letters, other.num_letters, "alphabet mismatch");
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.start, other.start)];
        ids.insert((self.start, other.start), 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let mut row = Vec::with_capacity(self.num_letters);
            for a in 0..self.num_letters {
                let next = (self.delta[p][a], other.delta[q][a]);
                let n = ids.len();
                let id = *ids.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    n
                });
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| f(self.accepting[p], other.accepting[q]))
            .collect();
        Dfa {
            num_letters: self.num_letters,
            start: 0,
            accepting,
            delta,
        }
    }

    pub fn intersect(&self, other: &Dfa) -> Dfa {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Dfa {
        self.product(other, |a, b| a || b)
    }

    pub fn equivalent(&self, other: &Dfa) -> bool {
        self.product(other, |a, b| a != b).is_empty()
    }

    /// `L(self) ⊆ L(other)`.
    pub fn subset_of(&self, other: &Dfa) -> bool {
        self.product(other, |a, b| a && !b).is_empty()
    }

    /// Moore partition refinement on the reachable part.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable();
        let states: Vec<usize> = (0..self.num_states()).filter(|&q| reach[q]).collect();
        let mut class: HashMap<usize, usize> = states
            .iter()
            .map(|&q| (q, usize::from(self.accepting[q])))
            .collect();
        let mut count = class.values().collect::<BTreeSet<_>>().len();
        loop {
            let mut sig_ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next: HashMap<usize, usize> = HashMap::new();
            for &q in &states {
                let sig = (
                    class[&q],
                    self.delta[q].iter().map(|r| class[r]).collect::<Vec<_>>(),
                );
                let n = sig_ids.len();
                next.insert(q, *sig_ids.entry(sig).or_insert(n));
            }
            let new_count = sig_ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // renumber in BFS order from the start so equal languages give equal automata
        let mut order: HashMap<usize, usize> = HashMap::new();
        let mut reps: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([self.start]);
        order.insert(class[&self.start], 0);
        reps.push(self.start);
        while let Some(q) = queue.pop_front() {
            for &r in &self.delta[q] {
                let c = class[&r];
                if let std::collections::hash_map::Entry::Vacant(e) = order.entry(c) {
                    e.insert(reps.len());
                    reps.push(r);
                    queue.push_back(r);
                }
            }
        }
        let delta = reps
            .iter()
            .map(|&q| self.delta[q].iter().map(|r| order[&class[r]]).collect())
            .collect();
        Dfa {
            num_letters: self.num_letters,
            start: 0,
            accepting: reps.iter().map(|&q| self.accepting[q]).collect(),
            delta,
        }
    }

    /// Relabels letters: the new automaton reads letter `a` as `map(a)`.
    pub fn relabel(&self, num_letters: usize, map: impl Fn(usize) -> usize) -> Dfa {
        let table: Vec<usize> = (0..num_letters).map(map).collect();
        Dfa {
            num_letters,
            start: self.start,
            accepting: self.accepting.clone(),
            delta: self
                .delta
                .iter()
                .map(|row| table.iter().map(|&a| row[a]).collect())
                .collect(),
        }
    }

    /// Subset construction. `moves[q][a]` lists successors of NFA state `q`.
    pub fn determinize(
        num_letters: usize,
        starts: &[usize],
        moves: &[Vec<Vec<usize>>],
        accepting: &[bool],
    ) -> Dfa {
        let start: BTreeSet<usize> = starts.iter().copied().collect();
        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut sets = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let mut row = Vec::with_capacity(num_letters);
            for a in 0..num_letters {
                let next: BTreeSet<usize> =
                    sets[i].iter().flat_map(|&q| moves[q][a].iter().copied()).collect();
                let n = ids.len();
                let id = *ids.entry(next.clone()).or_insert_with(|| {
                    sets.push(next);
                    n
                });
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        Dfa {
            num_letters,
            start: 0,
            accepting: sets
                .iter()
                .map(|s| s.iter().any(|&q| accepting[q]))
                .collect(),
            delta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Words over {0,1} with an even number of 1s.
    fn even_ones() -> Dfa {
        Dfa::from_partial(2, 2, 0, &[0], &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)])
    }

    #[test]
    fn basic_runs() {
        let d = even_ones();
        assert!(d.accepts(&[]));
        assert!(d.accepts(&[1, 0, 1]));
        assert!(!d.accepts(&[1]));
    }

    #[test]
    fn complement_and_product() {
        let d = even_ones();
        assert!(d.intersect(&d.complement()).is_empty());
        assert!(d.union(&d.complement()).complement().is_empty());
        assert!(d.complement().complement().equivalent(&d));
    }

    #[test]
    fn minimize_merges_equivalent_states() {
        // same language with a redundant copy of each state
        let d = Dfa::from_partial(
            2,
            4,
            0,
            &[0, 2],
            &[(0, 0, 2), (0, 1, 1), (1, 0, 3), (1, 1, 2), (2, 0, 0), (2, 1, 3), (3, 0, 1), (3, 1, 0)],
        );
        let m = d.minimize();
        assert_eq!(m.num_states(), 2);
        assert!(m.equivalent(&even_ones()));
    }

    #[test]
    fn determinize_last_letter_is_one() {
        // NFA: 0 -a-> 0, 0 -1-> 1
        let moves = vec![vec![vec![0], vec![0, 1]], vec![vec![], vec![]]];
        let d = Dfa::determinize(2, &[0], &moves, &[false, true]);
        assert!(d.accepts(&[0, 1]));
        assert!(!d.accepts(&[1, 0]));
        assert_eq!(d.minimize().num_states(), 2);
    }
}
