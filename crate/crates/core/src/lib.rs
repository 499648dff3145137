//! Generalized Cantor sets `Γ = { Σ_{n>=1} d_n β^n : d_n ∈ D_n }` with a
//! rational contraction `β` and an eventually periodic sequence of finite
//! integer digit sets.
//!
//! The crate decides whether such a set is self-similar through the SEP
//! (shifted eventually periodic) criterion, synthesizes explicit iterated
//! function systems, checks them against exact interval covers, and analyses
//! intersections and translations. All arithmetic is exact.

pub mod cover;
pub mod decide;
pub mod error;
pub mod ifs;
pub mod intersect;
pub mod periodic;
pub mod rational;
pub mod render;
pub mod sep;
pub mod spec_file;
pub mod system;

pub use cover::{attractor_cover, attractor_cover_with_limit, Interval, IntervalCover, DEFAULT_MAX_CYLINDERS};
pub use decide::{beta_bound, decide_self_similarity, decide_with, DecideOptions, Decision, Verdict, DEFAULT_DEPTH};
pub use error::{Error, Result};
pub use ifs::{
    apply_ifs_cover, apply_ifs_cover_with_limit, fixed_points, sep_to_ifs, verify_ifs, verify_ifs_with_limit,
    HomogeneousIfs, Similitude, VerificationReport,
};
pub use intersect::{
    difference_system, find_codes, find_codes_with, intersect_systems, intersection_decision, is_unique_code_criterion,
    translate_point, translation_analysis, CodeSearchOptions, CodeSearchResult, CodeStatus, IntersectionOutcome,
    TranslationReport, TranslationSearch,
};
pub use periodic::{Canonical, EventuallyPeriodic};
pub use rational::{fraction, int, parse_rational, pow, ratio, to_decimal, Rational};
pub use render::{generations, generations_with_limit, render_svg, render_text, Generations};
pub use sep::{canonicalize, is_sep_digits, is_sep_sets, sumset_divide, SepDecomposition, SepDigits};
pub use spec_file::{parse_system, to_spec_text};
pub use system::{parse_code, pi_value, series_value, CantorSystem, Code, DigitSequence, DigitSet};
