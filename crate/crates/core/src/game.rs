//! CHSH rules and classical strategies, in exact rational arithmetic.

use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact win rate.
pub type Rate = Ratio<i64>;

/// Best win rate reachable by any classical strategy.
pub fn classical_ceiling() -> Rate {
    Rate::new(3, 4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuestionPair {
    pub qa: bool,
    pub qb: bool,
}

impl QuestionPair {
    /// The four question pairs in the order (0,0), (0,1), (1,0), (1,1).
    pub const ALL: [QuestionPair; 4] = [
        QuestionPair { qa: false, qb: false },
        QuestionPair { qa: false, qb: true },
        QuestionPair { qa: true, qb: false },
        QuestionPair { qa: true, qb: true },
    ];

    pub const fn new(qa: bool, qb: bool) -> Self {
        Self { qa, qb }
    }

    /// Position in [`QuestionPair::ALL`].
    pub fn index(&self) -> usize {
        (usize::from(self.qa) << 1) | usize::from(self.qb)
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }
}

impl fmt::Display for QuestionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", u8::from(self.qa), u8::from(self.qb))
    }
}

/// Answers must differ exactly when both questions are 1.
pub fn win_predicate(q: QuestionPair, alice: bool, bob: bool) -> bool {
    (alice ^ bob) == (q.qa & q.qb)
}

/// A Strategy Card: each player's answer to each possible question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicStrategy {
    pub a0: bool,
    pub a1: bool,
    pub b0: bool,
    pub b1: bool,
}

impl DeterministicStrategy {
    pub const ALL_ZERO: Self = Self { a0: false, a1: false, b0: false, b1: false };

    /// Bits `a0 a1 b0 b1`, most significant first.
    pub fn from_index(i: u8) -> Self {
        Self { a0: i & 8 != 0, a1: i & 4 != 0, b0: i & 2 != 0, b1: i & 1 != 0 }
    }

    pub fn index(&self) -> u8 {
        (u8::from(self.a0) << 3) | (u8::from(self.a1) << 2) | (u8::from(self.b0) << 1) | u8::from(self.b1)
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..16).map(Self::from_index)
    }

    pub fn alice(&self, question: bool) -> bool {
        if question {
            self.a1
        } else {
            self.a0
        }
    }

    pub fn bob(&self, question: bool) -> bool {
        if question {
            self.b1
        } else {
            self.b0
        }
    }

    pub fn wins(&self, q: QuestionPair) -> bool {
        win_predicate(q, self.alice(q.qa), self.bob(q.qb))
    }

    /// Win rate under uniformly random questions.
    pub fn win_rate(&self) -> Rate {
        let wins = QuestionPair::ALL.iter().filter(|&&q| self.wins(q)).count();
        Rate::new(wins as i64, 4)
    }
}

impl fmt::Display for DeterministicStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |x: bool| u8::from(x);
        write!(f, "{}{}{}{}", b(self.a0), b(self.a1), b(self.b0), b(self.b1))
    }
}

/// Exhaustive scan of all 16 cards: the best rate and every card attaining it.
pub fn classical_optimum() -> (Rate, Vec<DeterministicStrategy>) {
    let rates: Vec<(DeterministicStrategy, Rate)> = DeterministicStrategy::all().map(|s| (s, s.win_rate())).collect();
    let best = rates.iter().map(|(_, r)| *r).max().expect("sixteen strategies");
    let argmax = rates.into_iter().filter(|(_, r)| *r == best).map(|(s, _)| s).collect();
    (best, argmax)
}

/// Win rate of a probabilistic mixture of cards, indexed by
/// [`DeterministicStrategy::index`].
pub fn mixed_strategy_rate(weights: &[Rate; 16]) -> Result<Rate> {
    if weights.iter().any(|w| *w < Rate::zero()) || weights.iter().sum::<Rate>() != Rate::one() {
        return Err(Error::InvalidDistribution);
    }
    let rate: Rate = DeterministicStrategy::all().zip(weights).map(|(s, w)| s.win_rate() * w).sum();
    assert!(rate <= classical_ceiling(), "a mixture beat the classical ceiling: {rate}");
    Ok(rate)
}
