use core::fmt;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Strength of belief in a single proposition on a 7-point scale.
///
/// 0 is strong disbelief, 3 is uncertainty and 6 is strong belief.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Belief(u8);

impl Belief {
    pub const LEVELS: usize = 7;
    pub const MIN: Belief = Belief(0);
    pub const MAX: Belief = Belief(6);

    pub fn new(value: u8) -> Result<Self> {
        if usize::from(value) < Self::LEVELS {
            Ok(Belief(value))
        } else {
            Err(Error::BeliefOutOfRange(i64::from(value)))
        }
    }

    #[inline]
    pub const fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    /// Absolute distance `|self - other|`, in `0..=6`.
    #[inline]
    pub const fn distance(self, other: Belief) -> u8 {
        self.0.abs_diff(other.0)
    }

    /// All seven levels in ascending order.
    pub fn all() -> impl DoubleEndedIterator<Item = Belief> + ExactSizeIterator + Clone {
        (0..Self::LEVELS as u8).map(Belief)
    }
}

impl TryFrom<u8> for Belief {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Belief::new(value)
    }
}

impl TryFrom<i64> for Belief {
    type Error = Error;

    fn try_from(value: i64) -> Result<Self> {
        u8::try_from(value)
            .ok()
            .and_then(|v| Belief::new(v).ok())
            .ok_or(Error::BeliefOutOfRange(value))
    }
}

impl From<Belief> for u8 {
    fn from(b: Belief) -> u8 {
        b.0
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Fraction of agents at each belief level.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Histogram(pub [f64; Belief::LEVELS]);

impl Histogram {
    pub fn from_beliefs(beliefs: &[Belief]) -> Self {
        let mut counts = [0usize; Belief::LEVELS];
        for b in beliefs {
            counts[b.index()] += 1;
        }
        Self::from_counts(&counts)
    }

    pub fn from_counts(counts: &[usize; Belief::LEVELS]) -> Self {
        let total: usize = counts.iter().sum();
        let mut out = [0.0; Belief::LEVELS];
        if total > 0 {
            for (o, &c) in out.iter_mut().zip(counts) {
                *o = c as f64 / total as f64;
            }
        }
        Histogram(out)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Level with the largest fraction; ties resolve to the lower level.
    pub fn dominant(&self) -> (Belief, f64) {
        let mut best = 0;
        for i in 1..Belief::LEVELS {
            if self.0[i] > self.0[best] {
                best = i;
            }
        }
        (Belief(best as u8), self.0[best])
    }

    pub fn as_array(&self) -> &[f64; Belief::LEVELS] {
        &self.0
    }
}

impl Index<Belief> for Histogram {
    type Output = f64;

    fn index(&self, b: Belief) -> &f64 {
        &self.0[b.index()]
    }
}

impl IndexMut<Belief> for Histogram {
    fn index_mut(&mut self, b: Belief) -> &mut f64 {
        &mut self.0[b.index()]
    }
}

/// Shorthand for building a [`Belief`] from a literal known to be in range.
///
/// Panics if `value > 6`; intended for constants and tests.
pub const fn b(value: u8) -> Belief {
    assert!(value < 7, "belief literal out of range");
    Belief(value)
}
