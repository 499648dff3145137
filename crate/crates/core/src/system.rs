//! Digit systems and the coding map.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::periodic::EventuallyPeriodic;
use crate::rational::{check_beta, int, pow, Rational};

/// A finite nonempty set of integer digits, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitSet(Vec<i64>);

impl DigitSet {
    pub fn new(digits: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut digits: Vec<i64> = digits.into_iter().collect();
        digits.sort_unstable();
        digits.dedup();
        if digits.is_empty() {
            return Err(Error::EmptyDigitSet);
        }
        Ok(Self(digits))
    }

    pub fn singleton(digit: i64) -> Self {
        Self(vec![digit])
    }

    pub fn digits(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }

    pub fn min(&self) -> i64 {
        self.0[0]
    }

    pub fn max(&self) -> i64 {
        self.0[self.0.len() - 1]
    }

    /// `1 + max - min`.
    pub fn width(&self) -> u64 {
        (self.max() - self.min()) as u64 + 1
    }

    pub fn contains(&self, digit: i64) -> bool {
        self.0.binary_search(&digit).is_ok()
    }

    pub fn is_subset(&self, other: &DigitSet) -> bool {
        self.iter().all(|d| other.contains(d))
    }

    pub fn translate(&self, by: i64) -> Self {
        Self(self.0.iter().map(|d| d + by).collect())
    }

    /// `{a + b : a in self, b in other}`.
    pub fn sumset(&self, other: &DigitSet) -> Self {
        Self::new(self.iter().flat_map(|a| other.iter().map(move |b| a + b)))
            .expect("sumset of nonempty sets is nonempty")
    }

    /// `{a - b : a, b in self}`.
    pub fn difference_set(&self) -> Self {
        Self::new(self.iter().flat_map(|a| self.iter().map(move |b| a - b)))
            .expect("difference set of a nonempty set is nonempty")
    }

    pub fn intersection(&self, other: &DigitSet) -> Option<Self> {
        let common: Vec<i64> = self.iter().filter(|&d| other.contains(d)).collect();
        (!common.is_empty()).then_some(Self(common))
    }

    pub fn union(&self, other: &DigitSet) -> Self {
        Self::new(self.iter().chain(other.iter())).expect("nonempty")
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("}")
    }
}

/// The sequence of digit sets `D_1, D_2, ...`.
pub type DigitSequence = EventuallyPeriodic<DigitSet>;

/// An integer digit sequence, e.g. a code of a point.
pub type Code = EventuallyPeriodic<i64>;

impl DigitSequence {
    /// `D_n` for `n >= 1`.
    pub fn digit_at(&self, n: usize) -> &DigitSet {
        self.at(n)
    }
}

impl fmt::Display for Code {
    /// `d,d,...(p,p,...)`; the parenthesised block repeats forever.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[i64]| xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{}({})", join(self.preperiod()), join(self.period()))
    }
}

/// Parses the `d,d,...(p,p,...)` code literal.
pub fn parse_code(text: &str) -> Option<Code> {
    let text = text.trim();
    let open = text.find('(')?;
    let body = text[open + 1..].trim_end();
    let period = body.strip_suffix(')')?;
    let digits = |s: &str| -> Option<Vec<i64>> {
        let s = s.trim();
        if s.is_empty() {
            return Some(Vec::new());
        }
        s.split(',').map(|d| d.trim().parse().ok()).collect()
    };
    Code::new(digits(&text[..open])?, digits(period)?).ok()
}

/// `Σ_{n>=1} c_n β^n` for an eventually periodic integer sequence, in closed form.
pub fn series_value(coefficients: &Code, beta: &Rational) -> Rational {
    let a = coefficients.preperiod().len();
    let mut head = Rational::zero();
    let mut power = Rational::one();
    for &c in coefficients.preperiod() {
        power *= beta;
        head += &power * int(c);
    }
    let mut block = Rational::zero();
    let mut inner = Rational::one();
    for &c in coefficients.period() {
        inner *= beta;
        block += &inner * int(c);
    }
    // inner == β^m now
    head + pow(beta, a) * block / (Rational::one() - inner)
}

/// `π(code) = Σ d_n β^n`.
pub fn pi_value(code: &Code, beta: &Rational) -> Rational {
    series_value(code, beta)
}

/// A generalized Cantor set: the values `Σ d_n β^n` with `d_n ∈ D_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorSystem {
    beta: Rational,
    digits: DigitSequence,
}

impl CantorSystem {
    pub fn new(beta: Rational, digits: DigitSequence) -> Result<Self> {
        check_beta(&beta)?;
        Ok(Self { beta, digits })
    }

    /// Convenience constructor from plain digit lists.
    pub fn from_lists(beta: Rational, preperiod: &[&[i64]], period: &[&[i64]]) -> Result<Self> {
        let sets = |xs: &[&[i64]]| -> Result<Vec<DigitSet>> {
            xs.iter().map(|d| DigitSet::new(d.iter().copied())).collect()
        };
        Self::new(beta, DigitSequence::new(sets(preperiod)?, sets(period)?)?)
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn digits(&self) -> &DigitSequence {
        &self.digits
    }

    pub fn digit_at(&self, n: usize) -> &DigitSet {
        self.digits.at(n)
    }

    pub fn with_digits(&self, digits: DigitSequence) -> Self {
        Self {
            beta: self.beta.clone(),
            digits,
        }
    }

    /// `N_D = max_n (1 + max D_n - min D_n)`.
    pub fn span(&self) -> u64 {
        self.digits.terms().map(DigitSet::width).max().expect("period nonempty")
    }

    /// `(γ_D, λ_D)`: the smallest and largest digit used anywhere.
    pub fn global_bounds(&self) -> (i64, i64) {
        let lo = self.digits.terms().map(DigitSet::min).min().expect("period nonempty");
        let hi = self.digits.terms().map(DigitSet::max).max().expect("period nonempty");
        (lo, hi)
    }

    /// The sequence of minima `γ_n`.
    pub fn minima(&self) -> Code {
        self.digits.map(DigitSet::min)
    }

    /// The sequence of maxima `λ_n`.
    pub fn maxima(&self) -> Code {
        self.digits.map(DigitSet::max)
    }

    pub fn is_normalized(&self) -> bool {
        self.digits.terms().all(|d| d.min() == 0)
    }

    /// Translates every `D_n` so that its minimum is 0.
    ///
    /// Returns the normalized system and `shift = Σ γ_n β^n`, with
    /// `Γ(normalized) = Γ(self) - shift`.
    pub fn normalize(&self) -> (CantorSystem, Rational) {
        let digits = self.digits.map(|d| d.translate(-d.min()));
        let shift = series_value(&self.minima(), &self.beta);
        (self.with_digits(digits), shift)
    }

    /// Exact bounds `(Σ_{m>n} γ_m β^m, Σ_{m>n} λ_m β^m)` on every tail after
    /// position `n`.
    pub fn tail_bounds(&self, n: usize) -> (Rational, Rational) {
        let scale = pow(&self.beta, n);
        let lo = series_value(&self.minima().suffix(n), &self.beta);
        let hi = series_value(&self.maxima().suffix(n), &self.beta);
        (&scale * lo, scale * hi)
    }

    /// Tail bounds divided by `β^n`; depends only on the phase of `n`.
    pub fn scaled_tail_bounds(&self, n: usize) -> (Rational, Rational) {
        (
            series_value(&self.minima().suffix(n), &self.beta),
            series_value(&self.maxima().suffix(n), &self.beta),
        )
    }

    /// First position `n` with `d_n ∉ D_n`, if any.
    pub fn code_violation(&self, code: &Code) -> Option<usize> {
        (1..=self.digits.joint_horizon(code)).find(|&n| !self.digits.at(n).contains(*code.at(n)))
    }

    /// `true` iff `d_n ∈ D_n` for all `n`.
    pub fn validate_code(&self, code: &Code) -> bool {
        self.code_violation(code).is_none()
    }

    /// The code choosing `min D_n` at every position.
    pub fn min_code(&self) -> Code {
        self.minima()
    }

    /// Adds `c` to every digit of every `D_n`.
    pub fn translate_digits(&self, c: i64) -> Self {
        self.with_digits(self.digits.map(|d| d.translate(c)))
    }
}
