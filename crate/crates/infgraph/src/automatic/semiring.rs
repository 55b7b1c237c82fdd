//! Counts in ℕ ∪ {∞} collapsed to what the counting quantifiers can see:
//! exact values up to a threshold, then only parity, then infinity.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Count {
    Exact(u64),
    /// Finite, above the threshold, even.
    BigEven,
    /// Finite, above the threshold, odd.
    BigOdd,
    Infinite,
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Exact(n) => write!(f, "{n}"),
            Count::BigEven => write!(f, "big-even"),
            Count::BigOdd => write!(f, "big-odd"),
            Count::Infinite => write!(f, "inf"),
        }
    }
}

/// The quotient of (ℕ ∪ {∞}, +, ·) with `0 · ∞ = 0` by the congruence that
/// keeps values up to `threshold` and only the parity of larger finite ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountSemiring {
    pub threshold: u64,
}

impl Default for CountSemiring {
    fn default() -> Self {
        CountSemiring { threshold: 2 }
    }
}

impl CountSemiring {
    pub fn new(threshold: u64) -> Self {
        CountSemiring { threshold }
    }

    pub fn zero(&self) -> Count {
        Count::Exact(0)
    }

    pub fn one(&self) -> Count {
        self.from_finite(1)
    }

    pub fn from_finite(&self, n: u128) -> Count {
        if n <= u128::from(self.threshold) {
            Count::Exact(n as u64)
        } else if n % 2 == 0 {
            Count::BigEven
        } else {
            Count::BigOdd
        }
    }

    /// Every element, for exhaustive checks.
    pub fn elements(&self) -> Vec<Count> {
        let mut out: Vec<Count> = (0..=self.threshold).map(Count::Exact).collect();
        out.extend([Count::BigEven, Count::BigOdd, Count::Infinite]);
        out
    }

    fn parity(c: Count) -> u64 {
        match c {
            Count::Exact(n) => n % 2,
            Count::BigEven => 0,
            Count::BigOdd => 1,
            Count::Infinite => unreachable!("infinite count has no parity"),
        }
    }

    fn big(p: u64) -> Count {
        if p == 0 {
            Count::BigEven
        } else {
            Count::BigOdd
        }
    }

    pub fn add(&self, a: Count, b: Count) -> Count {
        match (a, b) {
            (Count::Infinite, _) | (_, Count::Infinite) => Count::Infinite,
            (Count::Exact(x), Count::Exact(y)) => self.from_finite(u128::from(x) + u128::from(y)),
            _ => Self::big((Self::parity(a) + Self::parity(b)) % 2),
        }
    }

    pub fn mul(&self, a: Count, b: Count) -> Count {
        match (a, b) {
            (Count::Exact(0), _) | (_, Count::Exact(0)) => Count::Exact(0),
            (Count::Infinite, _) | (_, Count::Infinite) => Count::Infinite,
            (Count::Exact(x), Count::Exact(y)) => self.from_finite(u128::from(x) * u128::from(y)),
            _ => Self::big(Self::parity(a) * Self::parity(b)),
        }
    }

    pub fn sum(&self, items: impl IntoIterator<Item = Count>) -> Count {
        items.into_iter().fold(self.zero(), |acc, c| self.add(acc, c))
    }
}

/// What a counting quantifier asks of the number of witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    Even,
    Odd,
    Infinite,
    ExactlyOne,
}

impl CountMode {
    /// Smallest threshold whose quotient still decides the mode; a smaller
    /// semiring keeps weighted determinization small.
    pub fn threshold(self) -> u64 {
        match self {
            CountMode::ExactlyOne => 1,
            CountMode::Even | CountMode::Odd | CountMode::Infinite => 0,
        }
    }

    pub fn accepts(self, c: Count) -> bool {
        match self {
            CountMode::Even => matches!(c, Count::Exact(n) if n % 2 == 0) || c == Count::BigEven,
            CountMode::Odd => matches!(c, Count::Exact(n) if n % 2 == 1) || c == Count::BigOdd,
            CountMode::Infinite => c == Count::Infinite,
            CountMode::ExactlyOne => c == Count::Exact(1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapse_matches_integers() {
        let s = CountSemiring::default();
        for a in 0u128..12 {
            for b in 0u128..12 {
                let (x, y) = (s.from_finite(a), s.from_finite(b));
                assert_eq!(s.add(x, y), s.from_finite(a + b));
                assert_eq!(s.mul(x, y), s.from_finite(a * b));
            }
        }
    }

    #[test]
    fn zero_annihilates_infinity() {
        let s = CountSemiring::default();
        assert_eq!(s.mul(Count::Infinite, s.zero()), s.zero());
        assert_eq!(s.mul(Count::Infinite, Count::BigOdd), Count::Infinite);
        assert_eq!(s.add(Count::Infinite, s.zero()), Count::Infinite);
    }

    #[test]
    fn modes() {
        assert!(CountMode::Even.accepts(Count::Exact(0)));
        assert!(!CountMode::Even.accepts(Count::Infinite));
        assert!(CountMode::Odd.accepts(Count::BigOdd));
        assert!(CountMode::ExactlyOne.accepts(Count::Exact(1)));
        assert!(!CountMode::ExactlyOne.accepts(Count::BigOdd));
    }
}
