//! Intersections of generalized Cantor sets and their translations.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::{One, ToPrimitive};

use crate::decide::{beta_bound, decide_with, DecideOptions, Decision};
use crate::error::{Error, Result};
use crate::periodic::EventuallyPeriodic;
use crate::rational::{integer_reciprocal, Rational};
use crate::system::{pi_value, CantorSystem, Code, DigitSequence, DigitSet};

/// Codewise intersection `C_n ∩ D_n`, or `None` when some position is empty.
///
/// Requires a common `β < 1/W`, where `W` is the widest window
/// `1 + max(C_n ∪ D_n) - min(C_n ∪ D_n)`. Below that bound every point of
/// either set has a unique code in the joint window, which is what makes the
/// intersection of the sets equal the set of the intersected digits.
pub fn intersect_systems(c: &CantorSystem, d: &CantorSystem) -> Result<Option<CantorSystem>> {
    if c.beta() != d.beta() {
        return Err(Error::BetaMismatch(Box::new(c.beta().clone()), Box::new(d.beta().clone())));
    }
    let window = c
        .digits()
        .zip_with(d.digits(), |x, y| x.union(y).width())
        .terms()
        .copied()
        .max()
        .expect("period nonempty");
    if c.beta() * Rational::from_integer(window.into()) >= Rational::one() {
        return Err(Error::Gate(format!(
            "codewise intersection needs beta < 1/{window} (widest joint digit window is {window}); \
             beta = {} is too large for codes to be unique",
            c.beta()
        )));
    }
    let joint = c.digits().zip_with(d.digits(), |x, y| x.intersection(y));
    Ok(collect_sets(&joint).map(|digits| c.with_digits(digits)))
}

fn collect_sets(seq: &EventuallyPeriodic<Option<DigitSet>>) -> Option<DigitSequence> {
    let pre = seq.preperiod().iter().cloned().collect::<Option<Vec<_>>>()?;
    let per = seq.period().iter().cloned().collect::<Option<Vec<_>>>()?;
    Some(DigitSequence::new(pre, per).expect("period nonempty"))
}

/// The system with digit sets `D_n - D_n`, whose set is `Γ - Γ`.
pub fn difference_system(system: &CantorSystem) -> CantorSystem {
    system.with_digits(system.digits().map(DigitSet::difference_set))
}

/// `false` iff the code ends in the repeated digit `⌊1/β⌋ - 1`, the only
/// shape with a second expansion over `{0, ..., ⌊1/β⌋ - 1}`.
pub fn is_unique_code_criterion(code: &Code, beta: &Rational) -> bool {
    let top = (Rational::one() / beta).floor().to_integer().to_i64().unwrap_or(i64::MAX) - 1;
    !code.canonical().representative.period().iter().all(|&d| d == top)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeStatus {
    UniqueCode,
    MultipleCodes,
    NoCode,
    InconclusiveAtDepth,
}

impl fmt::Display for CodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeStatus::UniqueCode => "UniqueCode",
            CodeStatus::MultipleCodes => "MultipleCodes",
            CodeStatus::NoCode => "NoCode",
            CodeStatus::InconclusiveAtDepth => "InconclusiveAtDepth",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSearchResult {
    pub status: CodeStatus,
    /// Exact codes: the unique code, or for several codes the
    /// lexicographically least and greatest ones.
    pub codes: Vec<Code>,
    /// Length-`depth` prefixes: of actual codes when `exact`, otherwise of
    /// every digit string surviving the tail-bound pruning.
    pub prefixes: Vec<Vec<i64>>,
    pub depth: usize,
    /// Whether the status was settled on the finite remainder automaton.
    pub exact: bool,
    /// Unique-form flag per exact code, present when `1/β` is an integer.
    pub unique_form: Option<Vec<bool>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeSearchOptions {
    /// Horizon for the depth-bounded fallback and for closing the automaton
    /// when `1/β` is not an integer.
    pub depth: usize,
    /// Cap on automaton states and on surviving prefixes.
    pub max_states: usize,
}

impl CodeSearchOptions {
    pub fn with_depth(depth: usize) -> Self {
        Self {
            depth,
            max_states: 1_000_000,
        }
    }
}

type State = (usize, Rational);

struct Automaton {
    states: Vec<State>,
    /// (digit, target) sorted by digit.
    edges: Vec<Vec<(i64, usize)>>,
}

struct Explorer<'a> {
    system: &'a CantorSystem,
    inv_beta: Rational,
    bounds: Vec<(Rational, Rational)>,
}

impl<'a> Explorer<'a> {
    fn new(system: &'a CantorSystem) -> Self {
        let bounds = (0..system.digits().phase_count())
            .map(|p| system.scaled_tail_bounds(p))
            .collect();
        Self {
            system,
            inv_beta: Rational::one() / system.beta(),
            bounds,
        }
    }

    fn admissible(&self, (phase, s): (usize, &Rational)) -> bool {
        let (lo, hi) = &self.bounds[phase];
        lo <= s && s <= hi
    }

    /// Successors `(digit, next state)` surviving the tail-bound pruning.
    fn successors(&self, (phase, s): (usize, &Rational)) -> Vec<(i64, State)> {
        let next_phase = self.system.digits().phase(phase + 1);
        let scaled = s * &self.inv_beta;
        self.system
            .digit_at(phase + 1)
            .iter()
            .filter_map(|d| {
                let next = &scaled - Rational::from_integer(d.into());
                self.admissible((next_phase, &next)).then_some((d, (next_phase, next)))
            })
            .collect()
    }

    /// Breadth-first exploration of the reachable state graph. Returns `None`
    /// when `max_level` is reached with unexplored states left.
    fn explore(&self, root: State, max_level: Option<usize>, max_states: usize) -> Result<Option<Automaton>> {
        let mut index: HashMap<State, usize> = HashMap::new();
        let mut states = vec![root.clone()];
        let mut edges: Vec<Vec<(i64, usize)>> = vec![Vec::new()];
        index.insert(root, 0);
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        while let Some((id, level)) = queue.pop_front() {
            if max_level.is_some_and(|m| level >= m) {
                return Ok(None);
            }
            let (phase, s) = &states[id];
            let succ = self.successors((*phase, s));
            let mut out = Vec::with_capacity(succ.len());
            for (digit, state) in succ {
                let target = match index.get(&state) {
                    Some(&t) => t,
                    None => {
                        let t = states.len();
                        if t >= max_states {
                            return Err(Error::ResourceLimit {
                                count: t + 1,
                                limit: max_states,
                            });
                        }
                        index.insert(state.clone(), t);
                        states.push(state);
                        edges.push(Vec::new());
                        queue.push_back((t, level + 1));
                        t
                    }
                };
                out.push((digit, target));
            }
            edges[id] = out;
        }
        Ok(Some(Automaton { states, edges }))
    }
}

impl Automaton {
    /// States from which an infinite path starts.
    fn live(&self) -> Vec<bool> {
        let n = self.states.len();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut out_live: Vec<usize> = vec![0; n];
        for (u, es) in self.edges.iter().enumerate() {
            out_live[u] = es.len();
            for &(_, v) in es {
                preds[v].push(u);
            }
        }
        let mut live = vec![true; n];
        let mut dead: Vec<usize> = (0..n).filter(|&u| out_live[u] == 0).collect();
        while let Some(v) = dead.pop() {
            if !live[v] {
                continue;
            }
            live[v] = false;
            for &u in &preds[v] {
                out_live[u] -= 1;
                if out_live[u] == 0 && live[u] {
                    dead.push(u);
                }
            }
        }
        live
    }

    fn live_edges<'s>(&'s self, u: usize, live: &'s [bool]) -> impl Iterator<Item = (i64, usize)> + 's {
        self.edges[u].iter().copied().filter(move |&(_, v)| live[v])
    }

    /// Digit strings of length `depth` along live paths from the root, in
    /// lexicographic order.
    fn live_prefixes(&self, live: &[bool], depth: usize, limit: usize) -> Result<Vec<Vec<i64>>> {
        let mut frontier: Vec<(Vec<i64>, usize)> = vec![(Vec::new(), 0)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (prefix, u) in &frontier {
                for (d, v) in self.live_edges(*u, live) {
                    let mut p = prefix.clone();
                    p.push(d);
                    next.push((p, v));
                }
            }
            if next.len() > limit {
                return Err(Error::ResourceLimit {
                    count: next.len(),
                    limit,
                });
            }
            frontier = next;
        }
        Ok(frontier.into_iter().map(|(p, _)| p).collect())
    }

    /// Follows the chosen live edge from the root until a state repeats.
    fn trace(&self, live: &[bool], pick_max: bool) -> Code {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut digits = Vec::new();
        let mut u = 0;
        loop {
            if let Some(&start) = seen.get(&u) {
                let period = digits.split_off(start);
                return Code::new(digits, period).expect("cycle is nonempty").canonical().representative;
            }
            seen.insert(u, digits.len());
            let mut choices = self.live_edges(u, live);
            let (d, v) = if pick_max { choices.last() } else { choices.next() }.expect("live state has a live successor");
            digits.push(d);
            u = v;
        }
    }
}

/// Searches for codes of `t` in `system`: sequences `t_n ∈ D_n` with
/// `Σ t_n β^n = t`.
///
/// The remainders `s_n = s_{n-1}/β - t_n` (with `s_0 = t`) must stay within
/// the tail bounds scaled by `β^{-n}`, which depend only on the phase of `n`.
/// When the reachable `(phase, s_n)` graph is finite (always the case for an
/// integer `1/β`, since remainders then share one denominator), infinite
/// paths through it are exactly the codes and the answer is exact. Otherwise
/// the search reports the prefixes surviving to `depth`.
pub fn find_codes(system: &CantorSystem, t: &Rational, depth: usize) -> Result<CodeSearchResult> {
    find_codes_with(system, t, &CodeSearchOptions::with_depth(depth))
}

pub fn find_codes_with(system: &CantorSystem, t: &Rational, options: &CodeSearchOptions) -> Result<CodeSearchResult> {
    if options.depth < 1 {
        return Err(Error::TooSmall("search depth", 1));
    }
    let explorer = Explorer::new(system);
    let integer_base = integer_reciprocal(system.beta()).is_some();
    let mut result = CodeSearchResult {
        status: CodeStatus::NoCode,
        codes: Vec::new(),
        prefixes: Vec::new(),
        depth: options.depth,
        exact: true,
        unique_form: None,
    };
    if !explorer.admissible((0, t)) {
        return Ok(result);
    }
    let max_level = (!integer_base).then_some(options.depth);
    match explorer.explore((0, t.clone()), max_level, options.max_states)? {
        Some(automaton) => {
            let live = automaton.live();
            if live[0] {
                let mut branching = false;
                let mut seen = vec![false; automaton.states.len()];
                let mut stack = vec![0];
                seen[0] = true;
                while let Some(u) = stack.pop() {
                    let next: Vec<usize> = automaton.live_edges(u, &live).map(|(_, v)| v).collect();
                    branching |= next.len() > 1;
                    for v in next {
                        if !seen[v] {
                            seen[v] = true;
                            stack.push(v);
                        }
                    }
                }
                result.prefixes = automaton.live_prefixes(&live, options.depth, options.max_states)?;
                let least = automaton.trace(&live, false);
                if branching {
                    result.status = CodeStatus::MultipleCodes;
                    result.codes = vec![least, automaton.trace(&live, true)];
                } else {
                    result.status = CodeStatus::UniqueCode;
                    result.codes = vec![least];
                }
            }
        }
        None => {
            result.exact = false;
            result.prefixes = surviving_prefixes(&explorer, t, options)?;
            result.status = if result.prefixes.is_empty() {
                CodeStatus::NoCode
            } else {
                CodeStatus::InconclusiveAtDepth
            };
        }
    }
    if integer_base {
        result.unique_form = Some(result.codes.iter().map(|c| is_unique_code_criterion(c, system.beta())).collect());
    }
    Ok(result)
}

fn surviving_prefixes(explorer: &Explorer<'_>, t: &Rational, options: &CodeSearchOptions) -> Result<Vec<Vec<i64>>> {
    let mut frontier: Vec<(Vec<i64>, State)> = vec![(Vec::new(), (0, t.clone()))];
    for _ in 0..options.depth {
        let mut next = Vec::new();
        for (prefix, (phase, s)) in &frontier {
            for (d, state) in explorer.successors((*phase, s)) {
                let mut p = prefix.clone();
                p.push(d);
                next.push((p, state));
            }
            if next.len() > options.max_states {
                return Err(Error::ResourceLimit {
                    count: next.len(),
                    limit: options.max_states,
                });
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    let mut prefixes: Vec<Vec<i64>> = frontier.into_iter().map(|(p, _)| p).collect();
    prefixes.sort();
    Ok(prefixes)
}

impl fmt::Display for CodeSearchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status: {}", self.status)?;
        writeln!(f, "exact: {}", if self.exact { "yes" } else { "no" })?;
        writeln!(f, "depth: {}", self.depth)?;
        for (i, code) in self.codes.iter().enumerate() {
            match self.unique_form.as_ref().map(|flags| flags[i]) {
                Some(true) => writeln!(f, "code: {code} (tail is not M-1 repeated, M = floor(1/beta))")?,
                Some(false) => writeln!(f, "code: {code} (tail is M-1 repeated, M = floor(1/beta))")?,
                None => writeln!(f, "code: {code}")?,
            }
        }
        if self.exact {
            if self.status == CodeStatus::MultipleCodes {
                writeln!(f, "code_prefixes: {}", self.prefixes.len())?;
            }
        } else if !self.prefixes.is_empty() {
            writeln!(f, "surviving_prefixes: {}", self.prefixes.len())?;
            for p in &self.prefixes {
                let digits: Vec<String> = p.iter().map(i64::to_string).collect();
                writeln!(f, "prefix: {}", digits.join(","))?;
            }
        }
        Ok(())
    }
}

/// Result of intersecting two systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntersectionOutcome {
    Empty,
    NonEmpty {
        system: CantorSystem,
        decision: Box<Decision>,
    },
}

impl IntersectionOutcome {
    pub fn decision(&self) -> Option<&Decision> {
        match self {
            IntersectionOutcome::Empty => None,
            IntersectionOutcome::NonEmpty { decision, .. } => Some(decision.as_ref()),
        }
    }
}

impl fmt::Display for IntersectionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntersectionOutcome::Empty => writeln!(f, "intersection: empty"),
            IntersectionOutcome::NonEmpty { system, decision } => {
                let canon = system.digits().canonical();
                writeln!(f, "intersection: nonempty")?;
                writeln!(f, "intersection_onset: {}", canon.onset)?;
                writeln!(f, "intersection_period: {}", canon.min_period)?;
                for (n, set) in canon.representative.terms().enumerate() {
                    writeln!(f, "D[{}]: {set}", n + 1)?;
                }
                write!(f, "{decision}")
            }
        }
    }
}

fn decide_outcome(system: Option<CantorSystem>, options: &DecideOptions) -> Result<IntersectionOutcome> {
    Ok(match system {
        None => IntersectionOutcome::Empty,
        Some(system) => {
            let decision = Box::new(decide_with(&system, options)?);
            IntersectionOutcome::NonEmpty { system, decision }
        }
    })
}

/// Self-similarity of `Γ_C ∩ Γ_D`.
pub fn intersection_decision(c: &CantorSystem, d: &CantorSystem, options: &DecideOptions) -> Result<IntersectionOutcome> {
    decide_outcome(intersect_systems(c, d)?, options)
}

/// Analysis of `Γ ∩ (Γ + t)` for `t` given by a code over `D_n - D_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationReport {
    pub t_code: Code,
    pub t_value: Rational,
    /// Uniqueness of the code as established by a search, if one was run.
    pub code_status: Option<CodeStatus>,
    pub original_span: u64,
    pub original_beta_bound: Option<Rational>,
    pub outcome: IntersectionOutcome,
}

/// Builds `D_n ∩ (D_n + t_n)` and decides its self-similarity.
///
/// The intersection equals `Γ ∩ (Γ + t)` when `t_code` is the only code of
/// `t`; that is the caller's responsibility and `code_status` is echoed.
pub fn translation_analysis(
    system: &CantorSystem,
    t_code: &Code,
    code_status: Option<CodeStatus>,
    options: &DecideOptions,
) -> Result<TranslationReport> {
    let diff = difference_system(system);
    if let Some(position) = diff.code_violation(t_code) {
        return Err(Error::InvalidCode(position));
    }
    let joint = system.digits().zip_with(t_code, |set, &t| set.intersection(&set.translate(t)));
    let span = system.span();
    Ok(TranslationReport {
        t_code: t_code.clone(),
        t_value: pi_value(t_code, system.beta()),
        code_status,
        original_span: span,
        original_beta_bound: beta_bound(span).ok(),
        outcome: decide_outcome(collect_sets(&joint).map(|d| system.with_digits(d)), options)?,
    })
}

/// Either a full translation analysis or the code search that blocked it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslationSearch {
    Analyzed(Box<TranslationReport>),
    Unresolved(CodeSearchResult),
}

/// Looks up the `D - D` code of `t` and proceeds only if it is unique.
pub fn translate_point(
    system: &CantorSystem,
    t: &Rational,
    search: &CodeSearchOptions,
    options: &DecideOptions,
) -> Result<TranslationSearch> {
    let codes = find_codes_with(&difference_system(system), t, search)?;
    if codes.status != CodeStatus::UniqueCode {
        return Ok(TranslationSearch::Unresolved(codes));
    }
    translation_analysis(system, &codes.codes[0], Some(CodeStatus::UniqueCode), options).map(|r| TranslationSearch::Analyzed(Box::new(r)))
}

impl fmt::Display for TranslationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "t: {}", self.t_value)?;
        writeln!(f, "t_code: {}", self.t_code)?;
        match self.code_status {
            Some(status) => writeln!(f, "code_status: {status}")?,
            None => writeln!(f, "code_status: asserted by caller")?,
        }
        writeln!(f, "original_span: {}", self.original_span)?;
        match &self.original_beta_bound {
            Some(b) => writeln!(f, "original_beta_bound: {b}")?,
            None => writeln!(f, "original_beta_bound: none")?,
        }
        write!(f, "{}", self.outcome)
    }
}
