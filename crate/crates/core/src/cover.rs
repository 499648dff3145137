//! Finite unions of closed rational intervals, and level-`k` cylinder covers.
//!
//! A cover stores integer endpoints over one common denominator so that the
//! large unions produced by prefix enumeration and IFS images can be merged
//! and compared without rational normalization on every step.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::system::{CantorSystem, DigitSet};

/// Default cap on enumerated cylinders (and on IFS image intervals).
pub const DEFAULT_MAX_CYLINDERS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Sorted, pairwise disjoint closed intervals; touching intervals are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalCover {
    depth: usize,
    denom: BigInt,
    spans: Vec<(BigInt, BigInt)>,
}

impl IntervalCover {
    /// Builds a cover from `[lo/denom, hi/denom]` pairs in any order.
    pub(crate) fn from_spans(depth: usize, denom: BigInt, mut spans: Vec<(BigInt, BigInt)>) -> Self {
        debug_assert!(denom.is_positive());
        // stable sort merges presorted runs, such as one run per affine image
        spans.sort();
        let mut merged: Vec<(BigInt, BigInt)> = Vec::with_capacity(spans.len());
        for (lo, hi) in spans {
            match merged.last_mut() {
                Some((_, last_hi)) if lo <= *last_hi => {
                    if hi > *last_hi {
                        *last_hi = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        Self {
            depth,
            denom,
            spans: merged,
        }
    }

    pub fn from_intervals(depth: usize, intervals: impl IntoIterator<Item = Interval>) -> Self {
        let intervals: Vec<Interval> = intervals.into_iter().collect();
        let denom = intervals.iter().fold(BigInt::one(), |acc, iv| {
            acc.lcm(iv.lo.denom()).lcm(iv.hi.denom())
        });
        let spans = intervals
            .iter()
            .map(|iv| (scale_to(&iv.lo, &denom), scale_to(&iv.hi, &denom)))
            .collect();
        Self::from_spans(depth, denom, spans)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn intervals(&self) -> Vec<Interval> {
        self.spans
            .iter()
            .map(|(lo, hi)| {
                Interval::new(
                    Rational::new(lo.clone(), self.denom.clone()),
                    Rational::new(hi.clone(), self.denom.clone()),
                )
            })
            .collect()
    }

    pub fn min(&self) -> Option<Rational> {
        self.spans.first().map(|(lo, _)| Rational::new(lo.clone(), self.denom.clone()))
    }

    pub fn max(&self) -> Option<Rational> {
        self.spans.last().map(|(_, hi)| Rational::new(hi.clone(), self.denom.clone()))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        // x = p/q lies in [lo/d, hi/d] iff lo·q <= p·d <= hi·q
        let p = x.numer() * &self.denom;
        let q = x.denom();
        let idx = self.spans.partition_point(|(_, hi)| hi * q < p);
        self.spans.get(idx).is_some_and(|(lo, _)| lo * q <= p)
    }

    fn rescaled(&self, denom: &BigInt) -> Vec<(BigInt, BigInt)> {
        let factor = denom / &self.denom;
        self.spans.iter().map(|(lo, hi)| (lo * &factor, hi * &factor)).collect()
    }

    /// `true` iff every interval of `self` lies inside some interval of `other`.
    pub fn is_subset_of(&self, other: &IntervalCover) -> bool {
        self.excess_over(other).is_zero()
    }

    /// `sup_{x ∈ self} dist(x, other)`, the one-sided Hausdorff excess.
    pub fn excess_over(&self, other: &IntervalCover) -> Rational {
        assert!(!other.is_empty(), "excess over an empty cover is unbounded");
        let denom = self.denom.lcm(&other.denom);
        // doubled coordinates keep gap midpoints integral
        let double = |v: Vec<(BigInt, BigInt)>| -> Vec<(BigInt, BigInt)> {
            v.into_iter().map(|(a, b)| (a * 2, b * 2)).collect()
        };
        let xs = double(self.rescaled(&denom));
        let ys = double(other.rescaled(&denom));
        let first_lo = &ys[0].0;
        let last_hi = &ys[ys.len() - 1].1;
        let mut worst = BigInt::zero();
        for (a, b) in &xs {
            if a < first_lo {
                worst = worst.max(first_lo - a);
            }
            if b > last_hi {
                worst = worst.max(b - last_hi);
            }
            // gap i lies between ys[i].1 and ys[i + 1].0
            let start = ys.partition_point(|(_, hi)| hi <= a).saturating_sub(1);
            for i in start..ys.len().saturating_sub(1) {
                let (g1, g2) = (&ys[i].1, &ys[i + 1].0);
                if g1 >= b {
                    break;
                }
                if g2 <= a {
                    continue;
                }
                let lo = a.max(g1);
                let hi = b.min(g2);
                let mid: BigInt = (g1 + g2) / 2;
                let x = mid.clamp(lo.clone(), hi.clone());
                let dist = (&x - g1).min(g2 - &x);
                worst = worst.max(dist);
            }
        }
        Rational::new(worst, denom * 2)
    }

    /// `self` enlarged by `eps` on both sides of every interval.
    pub fn fatten(&self, eps: &Rational) -> IntervalCover {
        let denom = self.denom.lcm(eps.denom());
        let e = scale_to(eps, &denom);
        let spans = self.rescaled(&denom).into_iter().map(|(lo, hi)| (lo - &e, hi + &e)).collect();
        Self::from_spans(self.depth, denom, spans)
    }

    /// Image under `x ↦ ratio·x + e` for every offset, merged. `ratio > 0`.
    pub(crate) fn affine_images(
        &self,
        ratio: &Rational,
        offsets: &[Rational],
        limit: usize,
    ) -> Result<IntervalCover> {
        debug_assert!(ratio.is_positive());
        let count = self.spans.len().saturating_mul(offsets.len());
        if count > limit {
            return Err(Error::ResourceLimit { count, limit });
        }
        let offset_denom = offsets.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        // (rn/rd)(x/L) + en/ED = (rn·ED·x + en·rd·L) / (rd·L·ED)
        let denom = ratio.denom() * &self.denom * &offset_denom;
        let scale = ratio.numer() * &offset_denom;
        let shifts: Vec<BigInt> = offsets
            .iter()
            .map(|e| scale_to(e, &offset_denom) * ratio.denom() * &self.denom)
            .collect();
        let scaled: Vec<(BigInt, BigInt)> =
            self.spans.iter().map(|(lo, hi)| (lo * &scale, hi * &scale)).collect();
        let mut spans = Vec::with_capacity(count);
        for shift in &shifts {
            for (lo, hi) in &scaled {
                spans.push((lo + shift, hi + shift));
            }
        }
        Ok(Self::from_spans(self.depth, denom, spans))
    }
}

impl fmt::Display for IntervalCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.intervals().iter().map(Interval::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn scale_to(x: &Rational, denom: &BigInt) -> BigInt {
    x.numer() * (denom / x.denom())
}

/// Distinct values `Σ_{n<=k} d_n β^n` over `d_n ∈ sets[n-1]`, as numerators
/// over `Q^k` where `β = P/Q`.
pub(crate) fn prefix_numerators<'a>(
    beta: &Rational,
    sets: impl IntoIterator<Item = &'a DigitSet>,
    limit: usize,
) -> Result<(Vec<BigInt>, BigInt)> {
    let (p, q) = (beta.numer(), beta.denom());
    let mut values = vec![BigInt::zero()];
    let mut denom = BigInt::one();
    let mut p_pow = BigInt::one();
    for set in sets {
        let count = values.len().saturating_mul(set.len());
        if count > limit {
            return Err(Error::ResourceLimit { count, limit });
        }
        p_pow *= p;
        denom *= q;
        let steps: Vec<BigInt> = set.iter().map(|d| &p_pow * d).collect();
        let mut next = Vec::with_capacity(count);
        for v in &values {
            let base = v * q;
            for s in &steps {
                next.push(&base + s);
            }
        }
        next.sort_unstable();
        next.dedup();
        values = next;
    }
    Ok((values, denom))
}

/// Union over all prefixes `d_1..d_k` of `[Σ d_n β^n + lo, Σ d_n β^n + hi]`.
pub(crate) fn prefix_box_cover(
    system: &CantorSystem,
    k: usize,
    lo: &Rational,
    hi: &Rational,
    limit: usize,
) -> Result<IntervalCover> {
    let sets = (1..=k).map(|n| system.digit_at(n));
    let (values, prefix_denom) = prefix_numerators(system.beta(), sets, limit)?;
    let denom = prefix_denom.lcm(lo.denom()).lcm(hi.denom());
    let factor = &denom / &prefix_denom;
    let (lo, hi) = (scale_to(lo, &denom), scale_to(hi, &denom));
    let spans = values
        .iter()
        .map(|v| {
            let base = v * &factor;
            (&base + &lo, base + &hi)
        })
        .collect();
    Ok(IntervalCover::from_spans(k, denom, spans))
}

/// Level-`k` cylinder cover with the exact per-position tail bounds.
pub fn attractor_cover(system: &CantorSystem, k: usize) -> Result<IntervalCover> {
    attractor_cover_with_limit(system, k, DEFAULT_MAX_CYLINDERS)
}

pub fn attractor_cover_with_limit(
    system: &CantorSystem,
    k: usize,
    limit: usize,
) -> Result<IntervalCover> {
    let (lo, hi) = system.tail_bounds(k);
    prefix_box_cover(system, k, &lo, &hi, limit)
}
