//! Synchronous relations on words, read as automata over convolution letters.
//!
//! Symbols are `0..sigma`; `sigma` itself is the padding symbol. A letter of
//! an `arity`-track convolution is `Σ c_i · (sigma+1)^i`, and the all-padding
//! letter (the largest code) is never read, so there are `(sigma+1)^arity - 1`
//! letters. Every automaton here only accepts well-padded convolutions.

use std::collections::HashMap;

use super::dfa::Dfa;
use super::semiring::{Count, CountMode, CountSemiring};
use super::AutoError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationAutomaton {
    pub arity: usize,
    pub sigma: usize,
    pub dfa: Dfa,
}

pub fn num_letters(arity: usize, sigma: usize) -> usize {
    (sigma + 1).pow(arity as u32) - 1
}

pub fn encode(tracks: &[usize], sigma: usize) -> usize {
    tracks.iter().rev().fold(0, |acc, &c| acc * (sigma + 1) + c)
}

pub fn decode(mut letter: usize, arity: usize, sigma: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(arity);
    for _ in 0..arity {
        out.push(letter % (sigma + 1));
        letter /= sigma + 1;
    }
    out
}

/// Letters of the convolution of `words`, padded with `sigma`.
pub fn convolve(words: &[&[usize]], sigma: usize) -> Vec<usize> {
    let len = words.iter().map(|w| w.len()).max().unwrap_or(0);
    (0..len)
        .map(|i| {
            let tracks: Vec<usize> = words.iter().map(|w| w.get(i).copied().unwrap_or(sigma)).collect();
            encode(&tracks, sigma)
        })
        .collect()
}

/// Accepts exactly the well-padded convolutions: once a track reads padding
/// it reads nothing else.
pub fn padding_dfa(arity: usize, sigma: usize) -> Dfa {
    let letters = num_letters(arity, sigma);
    let states = 1usize << arity;
    let sink = states;
    let mut delta = vec![vec![sink; letters]; states + 1];
    for (mask, row) in delta.iter_mut().enumerate().take(states) {
        for (a, slot) in row.iter_mut().enumerate() {
            let tracks = decode(a, arity, sigma);
            let mut next = mask;
            let mut ok = true;
            for (i, &c) in tracks.iter().enumerate() {
                if c == sigma {
                    next |= 1 << i;
                } else if mask >> i & 1 == 1 {
                    ok = false;
                }
            }
            if ok {
                *slot = next;
            }
        }
    }
    let mut accepting = vec![true; states + 1];
    accepting[sink] = false;
    Dfa {
        num_letters: letters,
        start: 0,
        accepting,
        delta,
    }
}

impl RelationAutomaton {
    /// Wraps `dfa`, discarding badly padded words, and minimizes.
    pub fn new(arity: usize, sigma: usize, dfa: Dfa) -> Result<Self, AutoError> {
        let expected = num_letters(arity, sigma);
        if dfa.num_letters != expected {
            return Err(AutoError::ArityMismatch {
                expected,
                got: dfa.num_letters,
            });
        }
        let dfa = dfa.intersect(&padding_dfa(arity, sigma)).minimize();
        Ok(RelationAutomaton { arity, sigma, dfa })
    }

    pub fn universal(arity: usize, sigma: usize) -> Self {
        Self::new(arity, sigma, Dfa::constant(num_letters(arity, sigma), true)).unwrap()
    }

    pub fn empty(arity: usize, sigma: usize) -> Self {
        Self::new(arity, sigma, Dfa::constant(num_letters(arity, sigma), false)).unwrap()
    }

    /// `{(u, u)}`.
    pub fn diagonal(sigma: usize) -> Self {
        let letters = num_letters(2, sigma);
        let trans: Vec<(usize, usize, usize)> =
            (0..sigma).map(|c| (0, encode(&[c, c], sigma), 0)).collect();
        Self::new(2, sigma, Dfa::from_partial(letters, 1, 0, &[0], &trans)).unwrap()
    }

    /// `{(w, u) : w` precedes `u` in length-lexicographic order`}`.
    pub fn llex_less(sigma: usize) -> Self {
        const EQ: usize = 0;
        const LT: usize = 1;
        const GT: usize = 2;
        const SHORT: usize = 3;
        let letters = num_letters(2, sigma);
        let mut trans = Vec::new();
        for a in 0..letters {
            let t = decode(a, 2, sigma);
            let (w, u) = (t[0], t[1]);
            if w == sigma {
                for q in [EQ, LT, GT, SHORT] {
                    trans.push((q, a, SHORT));
                }
            } else if u != sigma {
                let from_eq = match w.cmp(&u) {
                    std::cmp::Ordering::Less => LT,
                    std::cmp::Ordering::Greater => GT,
                    std::cmp::Ordering::Equal => EQ,
                };
                trans.extend([(EQ, a, from_eq), (LT, a, LT), (GT, a, GT)]);
            }
        }
        Self::new(2, sigma, Dfa::from_partial(letters, 4, EQ, &[LT, SHORT], &trans)).unwrap()
    }

    pub fn accepts(&self, words: &[&[usize]]) -> bool {
        assert_eq!(words.len(), self.arity);
        self.dfa.accepts(&convolve(words, self.sigma))
    }

    fn check(&self, other: &Self) -> Result<(), AutoError> {
        if self.arity != other.arity || self.sigma != other.sigma {
            return Err(AutoError::ArityMismatch {
                expected: num_letters(self.arity, self.sigma),
                got: num_letters(other.arity, other.sigma),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, AutoError> {
        self.check(other)?;
        Ok(self.with(self.dfa.intersect(&other.dfa).minimize()))
    }

    pub fn union(&self, other: &Self) -> Result<Self, AutoError> {
        self.check(other)?;
        Ok(self.with(self.dfa.union(&other.dfa).minimize()))
    }

    pub fn complement(&self) -> Self {
        Self::new(self.arity, self.sigma, self.dfa.complement()).unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.is_empty()
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        self.check(other).is_ok() && self.dfa.equivalent(&other.dfa)
    }

    /// For arity 0: whether the empty tuple is in the relation.
    pub fn truth(&self) -> bool {
        self.dfa.accepting[self.dfa.start]
    }

    fn with(&self, dfa: Dfa) -> Self {
        RelationAutomaton {
            arity: self.arity,
            sigma: self.sigma,
            dfa,
        }
    }

    /// Reorders tracks: track `i` of the result is track `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.arity);
        let (n, s) = (self.arity, self.sigma);
        let dfa = self.dfa.relabel(num_letters(n, s), |a| {
            let new = decode(a, n, s);
            let mut old = vec![0; n];
            for (i, &p) in perm.iter().enumerate() {
                old[p] = new[i];
            }
            encode(&old, s)
        });
        self.with(dfa.minimize())
    }

    /// Moves track `pos` to the end, keeping the others in order.
    fn to_last(&self, pos: usize) -> Self {
        let mut perm: Vec<usize> = (0..self.arity).filter(|&i| i != pos).collect();
        perm.push(pos);
        self.permute(&perm)
    }

    /// Adds an unconstrained track at position `pos`.
    pub fn cylindrify(&self, pos: usize) -> Self {
        assert!(pos <= self.arity);
        let (n, s) = (self.arity, self.sigma);
        let old = &self.dfa;
        let q = old.num_states();
        let (done_acc, done_rej) = (q, q + 1);
        let stride = (s + 1).pow(n as u32);
        let all_pad = stride - 1;
        let letters = num_letters(n + 1, s);
        let mut delta = vec![vec![done_rej; letters]; q + 2];
        for (state, row) in delta.iter_mut().enumerate() {
            for (a, slot) in row.iter_mut().enumerate() {
                let rest = a % stride;
                *slot = match (rest == all_pad, state) {
                    (true, st) if st < q => {
                        if old.accepting[st] {
                            done_acc
                        } else {
                            done_rej
                        }
                    }
                    (true, st) => st,
                    (false, st) if st < q => old.delta[st][rest],
                    (false, _) => done_rej,
                };
            }
        }
        let mut accepting = old.accepting.clone();
        accepting.extend([true, false]);
        let last = Self::new(
            n + 1,
            s,
            Dfa {
                num_letters: letters,
                start: old.start,
                accepting,
                delta,
            },
        )
        .unwrap();
        // new track sits last; move it to `pos`
        let mut perm: Vec<usize> = (0..n).collect();
        perm.insert(pos, n);
        last.permute(&perm)
    }

    /// Last-track letters read after every other track has ended: codes
    /// `all_pad + c · stride` for each non-padding symbol `c`.
    fn tail_letters(&self) -> (usize, Vec<usize>) {
        let stride = (self.sigma + 1).pow(self.arity as u32 - 1);
        let tail = (0..self.sigma).map(|c| stride - 1 + c * stride).collect();
        (stride, tail)
    }

    /// States from which some tail word reaches acceptance.
    fn tail_accepting(&self, tail: &[usize]) -> Vec<bool> {
        let d = &self.dfa;
        let mut ok = d.accepting.clone();
        loop {
            let mut changed = false;
            for q in 0..d.num_states() {
                if !ok[q] && tail.iter().any(|&a| ok[d.delta[q][a]]) {
                    ok[q] = true;
                    changed = true;
                }
            }
            if !changed {
                return ok;
            }
        }
    }

    /// `∃ x_pos`.
    pub fn project_exists(&self, pos: usize) -> Self {
        let last = self.to_last(pos);
        let (stride, tail) = last.tail_letters();
        let d = &last.dfa;
        let accepting = last.tail_accepting(&tail);
        let letters = num_letters(self.arity - 1, self.sigma);
        let moves: Vec<Vec<Vec<usize>>> = (0..d.num_states())
            .map(|q| {
                (0..letters)
                    .map(|a| (0..=self.sigma).map(|c| d.delta[q][a + c * stride]).collect())
                    .collect()
            })
            .collect();
        let dfa = Dfa::determinize(letters, &[d.start], &moves, &accepting);
        Self::new(self.arity - 1, self.sigma, dfa).unwrap()
    }

    /// Number of accepted tail words from each state, in the semiring.
    fn tail_counts(&self, tail: &[usize], ring: &CountSemiring) -> Vec<Count> {
        let d = &self.dfa;
        let n = d.num_states();
        let useful = self.tail_accepting(tail);
        let succ = |q: usize| tail.iter().map(move |&a| d.delta[q][a]).filter(|&r| useful[r]);
        // a useful state on a cycle of useful states
        let on_cycle: Vec<bool> = (0..n)
            .map(|q| {
                if !useful[q] {
                    return false;
                }
                let mut seen = vec![false; n];
                let mut stack: Vec<usize> = succ(q).collect();
                while let Some(r) = stack.pop() {
                    if r == q {
                        return true;
                    }
                    if !seen[r] {
                        seen[r] = true;
                        stack.extend(succ(r));
                    }
                }
                false
            })
            .collect();
        let infinite: Vec<bool> = (0..n)
            .map(|q| {
                let mut seen = vec![false; n];
                let mut stack = vec![q];
                while let Some(r) = stack.pop() {
                    if !useful[r] || seen[r] {
                        continue;
                    }
                    if on_cycle[r] {
                        return true;
                    }
                    seen[r] = true;
                    stack.extend(succ(r));
                }
                false
            })
            .collect();
        let mut memo: Vec<Option<Count>> = vec![None; n];
        fn count(
            q: usize,
            d: &Dfa,
            tail: &[usize],
            useful: &[bool],
            infinite: &[bool],
            ring: &CountSemiring,
            memo: &mut Vec<Option<Count>>,
        ) -> Count {
            if !useful[q] {
                return ring.zero();
            }
            if infinite[q] {
                return Count::Infinite;
            }
            if let Some(c) = memo[q] {
                return c;
            }
            let mut total = if d.accepting[q] { ring.one() } else { ring.zero() };
            for &a in tail {
                let c = count(d.delta[q][a], d, tail, useful, infinite, ring, memo);
                total = ring.add(total, c);
            }
            memo[q] = Some(total);
            total
        }
        (0..n)
            .map(|q| count(q, d, tail, &useful, &infinite, ring, &mut memo))
            .collect()
    }

    /// Counting quantifier over the last track: keeps the tuples of the other
    /// tracks whose number of completions satisfies `mode`.
    pub fn counting_project(&self, pos: usize, mode: CountMode) -> Self {
        let ring = CountSemiring::new(mode.threshold());
        let last = self.to_last(pos);
        let (stride, tail) = last.tail_letters();
        let d = &last.dfa;
        let n = d.num_states();
        let live = d.coreachable();
        let tails = last.tail_counts(&tail, &ring);
        let letters = num_letters(self.arity - 1, self.sigma);

        let mut start = vec![ring.zero(); n];
        if live[d.start] {
            start[d.start] = ring.one();
        }
        let mut ids: HashMap<Vec<Count>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut vectors = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < vectors.len() {
            let mut row = Vec::with_capacity(letters);
            for a in 0..letters {
                let mut next = vec![ring.zero(); n];
                for q in 0..n {
                    let w = vectors[i][q];
                    if w == ring.zero() {
                        continue;
                    }
                    for c in 0..=self.sigma {
                        let r = d.delta[q][a + c * stride];
                        if live[r] {
                            next[r] = ring.add(next[r], w);
                        }
                    }
                }
                let k = ids.len();
                let id = *ids.entry(next.clone()).or_insert_with(|| {
                    vectors.push(next);
                    k
                });
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let accepting = vectors
            .iter()
            .map(|v| mode.accepts(ring.sum((0..n).map(|q| ring.mul(v[q], tails[q])))))
            .collect();
        let dfa = Dfa {
            num_letters: letters,
            start: 0,
            accepting,
            delta,
        };
        Self::new(self.arity - 1, self.sigma, dfa).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Unary successor relation on {1}*: (1^n, 1^{n+1}).
    fn succ() -> RelationAutomaton {
        let s = 1;
        let letters = num_letters(2, s);
        let both = encode(&[0, 0], s);
        let right = encode(&[s, 0], s);
        let dfa = Dfa::from_partial(letters, 2, 0, &[1], &[(0, both, 0), (0, right, 1)]);
        RelationAutomaton::new(2, s, dfa).unwrap()
    }

    fn ones(n: usize) -> Vec<usize> {
        vec![0; n]
    }

    #[test]
    fn letter_codes_round_trip() {
        for a in 0..num_letters(3, 2) {
            assert_eq!(encode(&decode(a, 3, 2), 2), a);
        }
        assert_eq!(convolve(&[&[0, 1], &[1]], 2), vec![encode(&[0, 1], 2), encode(&[1, 2], 2)]);
    }

    #[test]
    fn padding_rejects_resumed_tracks() {
        let p = padding_dfa(2, 1);
        let ok = convolve(&[&[0, 0], &[0]], 1);
        assert!(p.accepts(&ok));
        let bad = [encode(&[0, 1], 1), encode(&[0, 0], 1)];
        assert!(!p.accepts(&bad));
    }

    #[test]
    fn successor_and_projection() {
        let r = succ();
        assert!(r.accepts(&[&ones(2), &ones(3)]));
        assert!(!r.accepts(&[&ones(3), &ones(2)]));
        // every word has a successor; only nonempty words have a predecessor
        let has_succ = r.project_exists(1);
        assert!(has_succ.equivalent(&RelationAutomaton::universal(1, 1)));
        let has_pred = r.project_exists(0);
        assert!(!has_pred.accepts(&[&[]]));
        assert!(has_pred.accepts(&[&ones(4)]));
        // projecting both tracks gives a true sentence
        assert!(has_succ.project_exists(0).truth());
    }

    #[test]
    fn permute_swaps() {
        let r = succ().permute(&[1, 0]);
        assert!(r.accepts(&[&ones(3), &ones(2)]));
        assert!(!r.accepts(&[&ones(2), &ones(3)]));
    }

    #[test]
    fn cylindrify_adds_free_track() {
        let r = succ().cylindrify(1);
        assert_eq!(r.arity, 3);
        assert!(r.accepts(&[&ones(1), &ones(7), &ones(2)]));
        assert!(r.accepts(&[&ones(1), &[], &ones(2)]));
        assert!(!r.accepts(&[&ones(1), &ones(7), &ones(3)]));
        assert!(r.project_exists(1).equivalent(&succ()));
    }

    #[test]
    fn llex_order() {
        let lt = RelationAutomaton::llex_less(2);
        assert!(lt.accepts(&[&[1], &[0, 0]]));
        assert!(lt.accepts(&[&[0, 1], &[1, 0]]));
        assert!(!lt.accepts(&[&[1, 0], &[1, 0]]));
        assert!(!lt.accepts(&[&[0, 0, 0], &[1, 1]]));
    }

    #[test]
    fn counting() {
        let r = succ();
        // each word has exactly one successor
        let one = r.counting_project(1, CountMode::ExactlyOne);
        assert!(one.equivalent(&RelationAutomaton::universal(1, 1)));
        // number of predecessors is 0 at the empty word, 1 elsewhere
        let odd = r.counting_project(0, CountMode::Odd);
        assert!(!odd.accepts(&[&[]]));
        assert!(odd.accepts(&[&ones(3)]));
        // the universal binary relation has infinitely many completions
        let inf = RelationAutomaton::universal(2, 1).counting_project(1, CountMode::Infinite);
        assert!(inf.accepts(&[&ones(2)]));
    }
}
