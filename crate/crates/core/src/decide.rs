//! Self-similarity decision with certificates.
//!
//! Sufficiency holds for every `β`: a SEP normalized digit sequence yields an
//! explicit homogeneous IFS, which is checked here by [`verify_ifs`].
//! Necessity only holds for `β <= 1/⌊(3N-1)/2⌋`. A non-SEP system above that
//! bound gets [`Verdict::Unknown`], because non-SEP self-similar sets exist
//! in that range.

use std::fmt;

use num_bigint::BigInt;

use crate::cover::DEFAULT_MAX_CYLINDERS;
use crate::error::{Error, Result};
use crate::ifs::{sep_to_ifs, verify_ifs_with_limit, HomogeneousIfs, VerificationReport};
use crate::rational::Rational;
use crate::sep::{is_sep_sets, SepDecomposition};
use crate::system::CantorSystem;

pub const DEFAULT_DEPTH: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    /// Depth at which certificates are verified.
    pub depth: usize,
    pub max_cylinders: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        Self {
            depth: DEFAULT_DEPTH,
            max_cylinders: DEFAULT_MAX_CYLINDERS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    SelfSimilar,
    NotSelfSimilar,
    Unknown,
    TrivialPoint,
}

impl Verdict {
    /// Whether the verdict settles the question.
    pub fn is_definitive(self) -> bool {
        self != Verdict::Unknown
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::SelfSimilar => "SelfSimilar",
            Verdict::NotSelfSimilar => "NotSelfSimilar",
            Verdict::Unknown => "Unknown",
            Verdict::TrivialPoint => "TrivialPoint",
        })
    }
}

/// `1 / ⌊(3N - 1)/2⌋`, the largest `β` for which the SEP criterion is
/// necessary.
pub fn beta_bound(span: u64) -> Result<Rational> {
    if span < 2 {
        return Err(Error::TooSmall("span", 2));
    }
    let denom = (3 * span - 1) / 2;
    Ok(Rational::new(BigInt::from(1), BigInt::from(denom)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub beta: Rational,
    pub span: u64,
    /// Absent only for a single-point set.
    pub beta_bound: Option<Rational>,
    /// `Σ γ_n β^n`; the certificate describes the set translated by `-shift`.
    pub shift: Rational,
    pub sep: Option<SepDecomposition>,
    pub certificate: Option<HomogeneousIfs>,
    pub verification: Option<VerificationReport>,
}

impl Decision {
    /// The certificate translated back onto the original (unnormalized) set.
    pub fn certificate_for_original(&self) -> Option<HomogeneousIfs> {
        self.certificate.as_ref().map(|ifs| ifs.translated(&self.shift))
    }
}

pub fn decide_self_similarity(system: &CantorSystem) -> Result<Decision> {
    decide_with(system, &DecideOptions::default())
}

pub fn decide_with(system: &CantorSystem, options: &DecideOptions) -> Result<Decision> {
    let span = system.span();
    let (normalized, shift) = system.normalize();
    let mut decision = Decision {
        verdict: Verdict::TrivialPoint,
        beta: system.beta().clone(),
        span,
        beta_bound: None,
        shift,
        sep: None,
        certificate: None,
        verification: None,
    };
    if span == 1 {
        return Ok(decision);
    }
    let bound = beta_bound(span)?;
    decision.sep = is_sep_sets(normalized.digits());
    decision.verdict = match &decision.sep {
        Some(sep) => {
            let ifs = sep_to_ifs(&normalized, sep)?;
            let report = verify_ifs_with_limit(&normalized, &ifs, options.depth, options.max_cylinders)?;
            if !report.passed() {
                return Err(Error::CertificateRejected(options.depth));
            }
            decision.certificate = Some(ifs);
            decision.verification = Some(report);
            Verdict::SelfSimilar
        }
        None if system.beta() <= &bound => Verdict::NotSelfSimilar,
        None => Verdict::Unknown,
    };
    decision.beta_bound = Some(bound);
    Ok(decision)
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.verdict)?;
        writeln!(f, "beta: {}", self.beta)?;
        writeln!(f, "span: {}", self.span)?;
        match &self.beta_bound {
            Some(bound) => {
                writeln!(f, "beta_bound: {bound}")?;
                let within = if &self.beta <= bound { "yes" } else { "no" };
                writeln!(f, "beta_within_bound: {within}")?;
            }
            None => writeln!(f, "beta_bound: none")?,
        }
        writeln!(f, "shift: {}", self.shift)?;
        match &self.sep {
            Some(sep) => write!(f, "{sep}")?,
            None if self.verdict == Verdict::TrivialPoint => {}
            None => writeln!(f, "sep: no")?,
        }
        if let Some(ifs) = &self.certificate {
            writeln!(
                f,
                "certificate: {} maps with ratio {} for the normalized set (original = normalized + shift)",
                ifs.offsets().len(),
                ifs.ratio()
            )?;
            write!(f, "{ifs}")?;
        }
        if let Some(report) = &self.verification {
            write!(f, "{report}")?;
        }
        match self.verdict {
            Verdict::SelfSimilar => writeln!(
                f,
                "note: self-similarity follows from the SEP witness; the cover check is a consistency test, not a proof"
            ),
            Verdict::NotSelfSimilar => writeln!(
                f,
                "note: the negative verdict relies on the SEP characterization for beta <= beta_bound; \
                 it is not independently verified"
            ),
            Verdict::Unknown => writeln!(
                f,
                "note: not SEP and beta > beta_bound; the SEP characterization does not apply and \
                 non-SEP self-similar sets exist in this range"
            ),
            Verdict::TrivialPoint => writeln!(f, "note: every digit set is a singleton; the set is a single point"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn beta_bound_examples() {
        assert_eq!(beta_bound(5).unwrap(), ratio(1, 7));
        assert_eq!(beta_bound(2).unwrap(), ratio(1, 2));
        assert_eq!(beta_bound(3).unwrap(), ratio(1, 4));
        assert_eq!(beta_bound(1), Err(Error::TooSmall("span", 2)));
    }

    #[test]
    fn middle_third_is_self_similar() {
        let s = CantorSystem::from_lists(ratio(1, 3), &[], &[&[0, 2]]).unwrap();
        let d = decide_self_similarity(&s).unwrap();
        assert_eq!(d.verdict, Verdict::SelfSimilar);
        assert_eq!(d.certificate.as_ref().unwrap().offsets(), &[int(0), ratio(2, 3)]);
        assert_eq!(d.beta_bound, Some(ratio(1, 4)));
        assert!(d.verification.as_ref().unwrap().passed());
    }

    #[test]
    fn example_two_four_gap_and_below() {
        let digits: (&[&[i64]], &[&[i64]]) = (&[&[0], &[0, 4]], &[&[0, 1], &[0, 2, 4]]);
        let s = CantorSystem::from_lists(ratio(1, 6), digits.0, digits.1).unwrap();
        let d = decide_self_similarity(&s).unwrap();
        assert_eq!(d.verdict, Verdict::Unknown);
        assert_eq!((d.span, d.beta_bound.clone()), (5, Some(ratio(1, 7))));
        assert!(d.certificate.is_none() && d.sep.is_none());

        let s = CantorSystem::from_lists(ratio(1, 8), digits.0, digits.1).unwrap();
        assert_eq!(decide_self_similarity(&s).unwrap().verdict, Verdict::NotSelfSimilar);
        // the bound itself is inclusive
        let s = CantorSystem::from_lists(ratio(1, 7), digits.0, digits.1).unwrap();
        assert_eq!(decide_self_similarity(&s).unwrap().verdict, Verdict::NotSelfSimilar);
    }

    #[test]
    fn single_point() {
        let s = CantorSystem::from_lists(ratio(1, 2), &[&[3]], &[&[-1]]).unwrap();
        let d = decide_self_similarity(&s).unwrap();
        assert_eq!(d.verdict, Verdict::TrivialPoint);
        assert_eq!(d.beta_bound, None);
        assert!(d.to_string().contains("single point"));
    }

    #[test]
    fn original_certificate_verifies_on_original_set() {
        let s = CantorSystem::from_lists(ratio(1, 5), &[&[1, 3]], &[&[-1, 1, 3]]).unwrap();
        let d = decide_self_similarity(&s).unwrap();
        assert_eq!(d.verdict, Verdict::SelfSimilar);
        let g = d.certificate_for_original().unwrap();
        assert!(crate::ifs::verify_ifs(&s, &g, 6).unwrap().passed());
    }

    #[test]
    fn report_field_order() {
        let s = CantorSystem::from_lists(ratio(1, 3), &[], &[&[0, 2]]).unwrap();
        let text = decide_self_similarity(&s).unwrap().to_string();
        let keys: Vec<&str> = text.lines().map(|l| l.split(':').next().unwrap()).collect();
        assert_eq!(
            keys,
            vec![
                "verdict", "beta", "span", "beta_bound", "beta_within_bound", "shift", "sep_period",
                "A[1]", "B[1]", "certificate", "g", "g", "verification", "epsilon",
                "forward_excess", "backward_excess", "cover_intervals", "image_intervals", "note",
            ]
        );
    }

    mod properties {
        use super::*;
        use crate::ifs::verify_ifs;
        use crate::system::{DigitSequence, DigitSet};
        use proptest::prelude::*;

        fn system() -> impl Strategy<Value = CantorSystem> {
            let set = prop::collection::btree_set(-2i64..=3, 1..=3).prop_map(|s| DigitSet::new(s).unwrap());
            (3i64..=9, prop::collection::vec(set.clone(), 0..=2), prop::collection::vec(set, 1..=2))
                .prop_map(|(q, pre, per)| CantorSystem::new(ratio(1, q), DigitSequence::new(pre, per).unwrap()).unwrap())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn normalization_invariance(s in system()) {
                let d = decide_self_similarity(&s).unwrap();
                let (normalized, _) = s.normalize();
                let n = decide_self_similarity(&normalized).unwrap();
                prop_assert_eq!(d.verdict, n.verdict);
                if let Some(g) = d.certificate_for_original() {
                    prop_assert!(verify_ifs(&s, &g, 6).unwrap().passed());
                }
                if let Some(g) = &n.certificate {
                    prop_assert!(verify_ifs(&normalized, g, 6).unwrap().passed());
                }
            }

            #[test]
            fn global_shift_invariance(s in system(), c in -5i64..=5) {
                let moved = s.translate_digits(c);
                let (a, b) = (decide_self_similarity(&s).unwrap(), decide_self_similarity(&moved).unwrap());
                prop_assert_eq!(a.span, b.span);
                prop_assert_eq!(a.sep, b.sep);
                prop_assert_eq!(a.verdict, b.verdict);
            }

            #[test]
            fn certificates_and_gate(s in system()) {
                let d = decide_self_similarity(&s).unwrap();
                match d.verdict {
                    Verdict::SelfSimilar => {
                        let report = d.verification.as_ref().unwrap();
                        prop_assert_eq!(report.depth, DEFAULT_DEPTH);
                        prop_assert!(report.passed());
                    }
                    Verdict::NotSelfSimilar => prop_assert!(&d.beta <= d.beta_bound.as_ref().unwrap()),
                    Verdict::Unknown => prop_assert!(&d.beta > d.beta_bound.as_ref().unwrap()),
                    Verdict::TrivialPoint => prop_assert_eq!(d.span, 1),
                }
            }
        }
    }
}
