//! Homogeneous iterated function systems: synthesis from a SEP witness and
//! depth-bounded verification against a digit system.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cover::{attractor_cover_with_limit, prefix_numerators, IntervalCover, DEFAULT_MAX_CYLINDERS};
use crate::error::{Error, Result};
use crate::rational::{pow, Rational};
use crate::sep::SepDecomposition;
use crate::system::{CantorSystem, DigitSet};

/// `x ↦ ratio·x + offset` with `0 < |ratio| < 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Similitude {
    ratio: Rational,
    offset: Rational,
}

impl Similitude {
    pub fn new(ratio: Rational, offset: Rational) -> Result<Self> {
        if !is_contraction(&ratio) {
            return Err(Error::RatioOutOfRange(ratio));
        }
        Ok(Self { ratio, offset })
    }

    /// The digit map `φ_d(x) = β(x + d)`.
    pub fn digit_map(beta: &Rational, digit: i64) -> Result<Self> {
        Self::new(beta.clone(), beta * Rational::from_integer(BigInt::from(digit)))
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.ratio * x + &self.offset
    }

    pub fn compose(&self, inner: &Similitude) -> Similitude {
        Similitude {
            ratio: &self.ratio * &inner.ratio,
            offset: &self.ratio * &inner.offset + &self.offset,
        }
    }

    pub fn fixed_point(&self) -> Rational {
        &self.offset / (Rational::one() - &self.ratio)
    }
}

/// `0 < |r| < 1`.
fn is_contraction(r: &Rational) -> bool {
    !r.is_zero() && r.abs() < Rational::one()
}

/// A finite family of maps `x ↦ ratio·x + e` sharing one ratio in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousIfs {
    /// `q` when the ratio is known to be `β^q`.
    power: Option<usize>,
    ratio: Rational,
    offsets: Vec<Rational>,
}

impl HomogeneousIfs {
    /// Sorts and deduplicates the offsets. Negative ratios are refused; use
    /// [`HomogeneousIfs::from_signed_ratio`] to square such a system first.
    pub fn new(ratio: Rational, offsets: Vec<Rational>) -> Result<Self> {
        if !ratio.is_positive() || ratio >= Rational::one() {
            return Err(Error::RatioOutOfRange(ratio));
        }
        let mut offsets = offsets;
        offsets.sort();
        offsets.dedup();
        if offsets.is_empty() {
            return Err(Error::NoOffsets);
        }
        Ok(Self {
            power: None,
            ratio,
            offsets,
        })
    }

    /// Accepts `-1 < ratio < 0` by replacing the system with all two-fold
    /// compositions `g_i ∘ g_j`, which has the same attractor and ratio `ratio²`.
    pub fn from_signed_ratio(ratio: Rational, offsets: Vec<Rational>) -> Result<Self> {
        if !ratio.is_negative() {
            return Self::new(ratio, offsets);
        }
        if !is_contraction(&ratio) {
            return Err(Error::RatioOutOfRange(ratio));
        }
        let r = &ratio;
        let squared: Vec<Rational> = offsets
            .iter()
            .flat_map(|outer| offsets.iter().map(move |inner| r * inner + outer))
            .collect();
        Self::new(&ratio * &ratio, squared)
    }

    pub fn with_power(mut self, q: usize) -> Self {
        self.power = Some(q);
        self
    }

    pub fn power(&self) -> Option<usize> {
        self.power
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    pub fn maps(&self) -> Vec<Similitude> {
        self.offsets
            .iter()
            .map(|e| Similitude {
                ratio: self.ratio.clone(),
                offset: e.clone(),
            })
            .collect()
    }

    /// Conjugates by `x ↦ x + t`: the attractor moves by `t`, each offset by
    /// `(1 - ratio)·t`.
    pub fn translated(&self, t: &Rational) -> Self {
        let delta = (Rational::one() - &self.ratio) * t;
        Self {
            power: self.power,
            ratio: self.ratio.clone(),
            offsets: self.offsets.iter().map(|e| e + &delta).collect(),
        }
    }
}

impl fmt::Display for HomogeneousIfs {
    /// One map per line, sorted by offset.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (rn, rd) = (self.ratio.numer(), self.ratio.denom());
        for e in &self.offsets {
            writeln!(f, "g: x -> ({rn}/{rd}) * x + {}/{}", e.numer(), e.denom())?;
        }
        Ok(())
    }
}

/// Builds the IFS `{β^q x + e}` with
/// `e = Σ_{ℓ<=q} a_ℓ β^ℓ + Σ_{ℓ<=q} b_ℓ β^{q+ℓ}`, `a_ℓ ∈ A_ℓ`, `b_ℓ ∈ B_ℓ`.
pub fn sep_to_ifs(system: &CantorSystem, decomp: &SepDecomposition) -> Result<HomogeneousIfs> {
    if let Some((i, d)) = system.digits().terms().enumerate().find(|(_, d)| DigitSet::min(d) != 0) {
        return Err(Error::NotNormalized {
            position: i + 1,
            min: d.min(),
        });
    }
    decomp.validate(system.digits())?;
    let sets = decomp.a.iter().chain(decomp.b.iter());
    let (numerators, denom) = prefix_numerators(system.beta(), sets, usize::MAX)?;
    let offsets = numerators
        .into_iter()
        .map(|v| Rational::new(v, denom.clone()))
        .collect();
    Ok(HomogeneousIfs::new(pow(system.beta(), decomp.q), offsets)?.with_power(decomp.q))
}

/// Image of a cover under every map of the IFS, merged.
pub fn apply_ifs_cover(ifs: &HomogeneousIfs, cover: &IntervalCover) -> Result<IntervalCover> {
    apply_ifs_cover_with_limit(ifs, cover, DEFAULT_MAX_CYLINDERS)
}

pub fn apply_ifs_cover_with_limit(
    ifs: &HomogeneousIfs,
    cover: &IntervalCover,
    limit: usize,
) -> Result<IntervalCover> {
    cover.affine_images(&ifs.ratio, &ifs.offsets, limit)
}

/// `offset / (1 - ratio)` for each map.
pub fn fixed_points(ifs: &HomogeneousIfs) -> Vec<Rational> {
    ifs.maps().iter().map(Similitude::fixed_point).collect()
}

/// Outcome of comparing a system's cylinder cover with its image under an IFS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub depth: usize,
    /// Width of one cylinder interval at `depth`; the tolerance.
    pub epsilon: Rational,
    /// Excess of the IFS image over the cover.
    pub forward_excess: Rational,
    /// Excess of the cover over the IFS image.
    pub backward_excess: Rational,
    pub cover_intervals: usize,
    pub image_intervals: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.forward_excess <= self.epsilon && self.backward_excess <= self.epsilon
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            writeln!(f, "verification: consistent to depth {}", self.depth)?;
        } else {
            writeln!(f, "verification: refuted at depth {}", self.depth)?;
        }
        writeln!(f, "epsilon: {}", self.epsilon)?;
        writeln!(f, "forward_excess: {}", self.forward_excess)?;
        writeln!(f, "backward_excess: {}", self.backward_excess)?;
        writeln!(f, "cover_intervals: {}", self.cover_intervals)?;
        writeln!(f, "image_intervals: {}", self.image_intervals)
    }
}

/// Compares `C = attractor_cover(system, k)` with `C' = ∪ g(C)`.
///
/// Passes iff each is within the cylinder width `ε_k` of the other. An IFS
/// whose attractor is the set always passes; one with a different attractor
/// fails once `ε_k` drops below the Hausdorff distance. Passing is evidence
/// to depth `k`, not a proof.
pub fn verify_ifs(system: &CantorSystem, ifs: &HomogeneousIfs, k: usize) -> Result<VerificationReport> {
    verify_ifs_with_limit(system, ifs, k, DEFAULT_MAX_CYLINDERS)
}

pub fn verify_ifs_with_limit(
    system: &CantorSystem,
    ifs: &HomogeneousIfs,
    k: usize,
    limit: usize,
) -> Result<VerificationReport> {
    if k < 1 {
        return Err(Error::TooSmall("verification depth", 1));
    }
    let cover = attractor_cover_with_limit(system, k, limit)?;
    let image = apply_ifs_cover_with_limit(ifs, &cover, limit)?;
    let (lo, hi) = system.tail_bounds(k);
    Ok(VerificationReport {
        depth: k,
        epsilon: hi - lo,
        forward_excess: image.excess_over(&cover),
        backward_excess: cover.excess_over(&image),
        cover_intervals: cover.len(),
        image_intervals: image.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::Interval;
    use crate::rational::{int, ratio};
    use crate::sep::is_sep_sets;
    use crate::system::DigitSet;

    fn middle_third() -> CantorSystem {
        CantorSystem::from_lists(ratio(1, 3), &[], &[&[0, 2]]).unwrap()
    }

    fn ifs(r: Rational, offsets: &[Rational]) -> HomogeneousIfs {
        HomogeneousIfs::new(r, offsets.to_vec()).unwrap()
    }

    #[test]
    fn synthesis_examples() {
        let s = middle_third();
        let g = sep_to_ifs(&s, &is_sep_sets(s.digits()).unwrap()).unwrap();
        assert_eq!(g, ifs(ratio(1, 3), &[int(0), ratio(2, 3)]).with_power(1));
        assert_eq!(g.to_string(), "g: x -> (1/3) * x + 0/1\ng: x -> (1/3) * x + 2/3\n");

        let point = CantorSystem::from_lists(ratio(3, 7), &[], &[&[0]]).unwrap();
        let g = sep_to_ifs(&point, &is_sep_sets(point.digits()).unwrap()).unwrap();
        assert_eq!(g.offsets(), &[int(0)]);
        assert_eq!(g.ratio(), &ratio(3, 7));

        let s = CantorSystem::from_lists(ratio(1, 4), &[&[0]], &[&[0, 2]]).unwrap();
        let g = sep_to_ifs(&s, &is_sep_sets(s.digits()).unwrap()).unwrap();
        assert_eq!(g.offsets(), &[int(0), ratio(1, 8)]);
    }

    #[test]
    fn synthesis_rejects_unnormalized() {
        let s = CantorSystem::from_lists(ratio(1, 3), &[], &[&[1, 3]]).unwrap();
        let d = is_sep_sets(s.digits()).unwrap();
        assert_eq!(sep_to_ifs(&s, &d), Err(Error::NotNormalized { position: 1, min: 1 }));
    }

    #[test]
    fn apply_examples() {
        let unit = IntervalCover::from_intervals(0, [Interval::new(int(0), int(1))]);
        let half = ifs(ratio(1, 2), &[int(0)]);
        assert_eq!(apply_ifs_cover(&half, &unit).unwrap().intervals(), vec![Interval::new(int(0), ratio(1, 2))]);
        let mid = ifs(ratio(1, 3), &[int(0), ratio(2, 3)]);
        assert_eq!(
            apply_ifs_cover(&mid, &unit).unwrap().intervals(),
            vec![Interval::new(int(0), ratio(1, 3)), Interval::new(ratio(2, 3), int(1))]
        );
        let halves = ifs(ratio(1, 2), &[int(0), ratio(1, 2)]);
        assert_eq!(apply_ifs_cover(&halves, &unit).unwrap().intervals(), vec![Interval::new(int(0), int(1))]);
    }

    #[test]
    fn verify_examples() {
        let s = middle_third();
        let good = ifs(ratio(1, 3), &[int(0), ratio(2, 3)]);
        let r = verify_ifs(&s, &good, 8).unwrap();
        assert!(r.passed());
        assert!(r.forward_excess.is_zero());
        assert_eq!(r.backward_excess, ratio(1, 2 * 3i64.pow(9)));

        let bad = ifs(ratio(1, 3), &[int(0), ratio(1, 2)]);
        let r = verify_ifs(&s, &bad, 4).unwrap();
        assert!(!r.passed());
        assert!(r.forward_excess > r.epsilon || r.backward_excess > r.epsilon);
        assert_eq!(verify_ifs(&s, &good, 0), Err(Error::TooSmall("verification depth", 1)));
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(fixed_points(&ifs(ratio(1, 3), &[int(0)])), vec![int(0)]);
        assert_eq!(fixed_points(&ifs(ratio(1, 3), &[ratio(2, 3)])), vec![int(1)]);
        assert_eq!(fixed_points(&ifs(ratio(1, 4), &[ratio(1, 8)])), vec![ratio(1, 6)]);
    }

    #[test]
    fn negative_ratio_handling() {
        let err = HomogeneousIfs::new(ratio(-1, 3), vec![int(0)]).unwrap_err();
        assert!(err.to_string().contains("compose the system with itself"));
        // x ↦ -x/3 + 1/3 and x ↦ -x/3 + 1 generate the middle-third set
        let g = HomogeneousIfs::from_signed_ratio(ratio(-1, 3), vec![ratio(1, 3), int(1)]).unwrap();
        assert_eq!(g.ratio(), &ratio(1, 9));
        assert!(verify_ifs(&middle_third(), &g, 6).unwrap().passed());
        assert!(Similitude::new(int(1), int(0)).is_err());
        assert!(Similitude::new(int(0), int(0)).is_err());
    }

    #[test]
    fn digit_map_matches_coding() {
        let phi = Similitude::digit_map(&ratio(1, 5), 2).unwrap();
        assert_eq!(phi.apply(&int(0)), ratio(2, 5));
        let psi = Similitude::digit_map(&ratio(1, 5), 1).unwrap();
        // φ_2 ∘ φ_1 (0) = 2β + β²
        assert_eq!(phi.compose(&psi).apply(&int(0)), ratio(11, 25));
    }

    #[test]
    fn refutation_is_monotone_on_corpus() {
        let gap = CantorSystem::from_lists(ratio(1, 6), &[&[0], &[0, 4]], &[&[0, 1], &[0, 2, 4]]).unwrap();
        let good: Vec<Rational> = [0, 1, 2, 3, 72, 73, 74, 75].iter().map(|&n| ratio(n, 648)).collect();
        assert!(verify_ifs(&gap, &ifs(ratio(1, 36), &good), 8).unwrap().passed());
        let mut corpus = vec![
            (middle_third(), ifs(ratio(1, 3), &[int(0), ratio(1, 2)])),
            (middle_third(), ifs(ratio(1, 3), &[int(0), ratio(3, 5)])),
            (middle_third(), ifs(ratio(1, 9), &[int(0), ratio(2, 9), ratio(2, 3)])),
            (middle_third(), ifs(ratio(1, 4), &[int(0), ratio(3, 4)])),
        ];
        for (i, v) in [ratio(1, 600), ratio(1, 500), ratio(1, 700)].into_iter().enumerate() {
            let mut offsets = good.clone();
            offsets[i + 1] = v;
            corpus.push((gap.clone(), ifs(ratio(1, 36), &offsets)));
        }
        for (n, (system, maps)) in corpus.iter().enumerate() {
            let passes: Vec<bool> = (1..=8).map(|k| verify_ifs(system, maps, k).unwrap().passed()).collect();
            let first_fail = passes.iter().position(|p| !p).unwrap_or_else(|| panic!("case {n} never refuted"));
            assert!(passes[first_fail..].iter().all(|p| !p), "case {n}: {passes:?}");
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn shift_equivariance(
                pre in prop::collection::vec(prop::collection::btree_set(-3i64..=3, 1..=3), 0..=2),
                per in prop::collection::vec(prop::collection::btree_set(-3i64..=3, 1..=3), 1..=2),
                q in 4i64..=7,
                numerators in prop::collection::btree_set(-20i64..=20, 1..=4),
                k in 1usize..=5,
            ) {
                let sets = |v: Vec<std::collections::BTreeSet<i64>>| -> Vec<DigitSet> {
                    v.into_iter().map(|s| DigitSet::new(s).unwrap()).collect()
                };
                let seq = crate::system::DigitSequence::new(sets(pre), sets(per)).unwrap();
                let system = CantorSystem::new(ratio(1, q), seq).unwrap();
                let offsets: Vec<Rational> = numerators.iter().map(|&n| ratio(n, 4 * q)).collect();
                let maps = ifs(ratio(1, q), &offsets);
                let (normalized, shift) = system.normalize();
                let moved = maps.translated(&-shift);
                let a = verify_ifs(&system, &maps, k).unwrap();
                let b = verify_ifs(&normalized, &moved, k).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }
}
