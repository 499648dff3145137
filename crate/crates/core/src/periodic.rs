//! Eventually periodic sequences indexed from 1.

use crate::error::{Error, Result};
use crate::rational::lcm;

/// A sequence `x_1, x_2, ...` given by a finite preperiod followed by the
/// infinite repetition of a nonempty period block.
///
/// The representation is kept as written; [`EventuallyPeriodic::canonical`]
/// computes the minimal form on demand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodic<T> {
    preperiod: Vec<T>,
    period: Vec<T>,
}

/// Minimal description of an eventually periodic sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical<T> {
    /// Smallest `s` such that `x_{n+m} = x_n` for all `n > s`.
    pub onset: usize,
    /// Smallest eventual period `m`.
    pub min_period: usize,
    pub representative: EventuallyPeriodic<T>,
}

impl<T> EventuallyPeriodic<T> {
    pub fn new(preperiod: Vec<T>, period: Vec<T>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(Self { preperiod, period })
    }

    pub fn periodic(period: Vec<T>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn preperiod(&self) -> &[T] {
        &self.preperiod
    }

    pub fn period(&self) -> &[T] {
        &self.period
    }

    /// Number of leading entries that, together with one period, determine
    /// the whole sequence.
    pub fn horizon(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }

    /// Joint horizon after which both sequences repeat together.
    pub fn joint_horizon<U>(&self, other: &EventuallyPeriodic<U>) -> usize {
        self.preperiod.len().max(other.preperiod.len()) + lcm(self.period.len(), other.period.len())
    }

    /// Index into the stored blocks for position `n` (1-based).
    fn slot(&self, n: usize) -> &T {
        assert!(n >= 1, "sequence positions start at 1");
        let a = self.preperiod.len();
        if n <= a {
            &self.preperiod[n - 1]
        } else {
            &self.period[(n - a - 1) % self.period.len()]
        }
    }

    /// The `n`-th term, `n >= 1`.
    pub fn at(&self, n: usize) -> &T {
        self.slot(n)
    }

    /// Every term that occurs anywhere in the sequence.
    pub fn terms(&self) -> impl Iterator<Item = &T> {
        self.preperiod.iter().chain(self.period.iter())
    }

    /// Position class after `n` terms have been consumed: two positions with
    /// the same phase have identical suffixes.
    pub fn phase(&self, n: usize) -> usize {
        let a = self.preperiod.len();
        if n <= a {
            n
        } else {
            a + (n - a) % self.period.len()
        }
    }

    /// Number of distinct phases.
    pub fn phase_count(&self) -> usize {
        self.horizon()
    }
}

impl<T: Clone> EventuallyPeriodic<T> {
    pub fn constant(value: T) -> Self {
        Self {
            preperiod: Vec::new(),
            period: vec![value],
        }
    }

    /// The sequence `x_{n+1}, x_{n+2}, ...`.
    pub fn suffix(&self, n: usize) -> Self {
        let a = self.preperiod.len();
        if n <= a {
            return Self {
                preperiod: self.preperiod[n..].to_vec(),
                period: self.period.clone(),
            };
        }
        let m = self.period.len();
        let k = (n - a) % m;
        let mut period = self.period[k..].to_vec();
        period.extend_from_slice(&self.period[..k]);
        Self {
            preperiod: Vec::new(),
            period,
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> EventuallyPeriodic<U> {
        EventuallyPeriodic {
            preperiod: self.preperiod.iter().map(&mut f).collect(),
            period: self.period.iter().map(&mut f).collect(),
        }
    }

    /// Term-wise combination, aligned on the longer preperiod and the lcm of
    /// the periods.
    pub fn zip_with<U: Clone, V>(
        &self,
        other: &EventuallyPeriodic<U>,
        mut f: impl FnMut(&T, &U) -> V,
    ) -> EventuallyPeriodic<V> {
        let a = self.preperiod.len().max(other.preperiod.len());
        let m = lcm(self.period.len(), other.period.len());
        EventuallyPeriodic {
            preperiod: (1..=a).map(|n| f(self.at(n), other.at(n))).collect(),
            period: (a + 1..=a + m).map(|n| f(self.at(n), other.at(n))).collect(),
        }
    }

    /// The first `len` terms.
    pub fn prefix(&self, len: usize) -> Vec<T> {
        (1..=len).map(|n| self.at(n).clone()).collect()
    }
}

impl<T: Clone + PartialEq> EventuallyPeriodic<T> {
    /// Minimal period and minimal onset.
    ///
    /// The period block is first reduced to its smallest cyclic period, then
    /// trailing preperiod entries equal to the periodic continuation are
    /// absorbed into the period by rotation.
    pub fn canonical(&self) -> Canonical<T> {
        let m = self.period.len();
        let min_period = (1..=m)
            .filter(|d| m.is_multiple_of(*d))
            .find(|&d| (0..m).all(|i| self.period[i] == self.period[(i + d) % m]))
            .unwrap_or(m);
        let mut preperiod = self.preperiod.clone();
        let mut period = self.period[..min_period].to_vec();
        while let Some(last) = preperiod.last() {
            if *last != period[min_period - 1] {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        Canonical {
            onset: preperiod.len(),
            min_period,
            representative: EventuallyPeriodic { preperiod, period },
        }
    }

    /// Extensional equality: the two sequences agree at every position.
    pub fn same_sequence(&self, other: &Self) -> bool {
        (1..=self.joint_horizon(other)).all(|n| self.at(n) == other.at(n))
    }
}
