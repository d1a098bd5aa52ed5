//! Executable checks of the structural lemmas about equations in normal form,
//! and the reduction chain built from them.
//!
//! Each lemma check separates three outcomes: the hypothesis is not met, the
//! conclusion holds, or the conclusion is violated. Only the last one is a
//! failure.

mod chain;

pub use chain::{
    build_reduction_chain, reduce_equation, run_chain_steps, Certificate, ChainOutcome, PrefixSumMap, ReductionTrace,
    StepCheck, TraceStep, Verdict,
};

use serde::Serialize;
use thiserror::Error;

use crate::equation::{AlignedEquation, EquationError, SolutionSet};
use crate::normalizer::{NormalFormEquation, NormalFormError};
use crate::solver::{classify, default_bound};
use crate::words::{serialize_value, serialize_values, Alphabet, Height, Value, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("equation is not in normal form (N1 {n1}, N2 {n2}, N3 {n3})")]
    NotNormalForm { n1: bool, n2: bool, n3: bool },
    #[error("cut index {k} is outside 1..={n}")]
    CutIndex { k: usize, n: usize },
    #[error("cut length {d} is negative")]
    NegativeCut { d: i64 },
    #[error("cut word '{y}' should have length {d}")]
    CutWordLength { y: Word, d: usize },
    #[error("no nonempty solution is known")]
    NoNonemptySolution,
    #[error("nonempty solution '{word}' is shorter than the cut length {d}")]
    SolutionTooShort { word: Word, d: usize },
    #[error("nonempty solutions do not share a prefix of length {d}")]
    NoCommonPrefix { d: usize },
    #[error("constant '{word}' is not a product of code words")]
    NotInCode { word: Word },
    #[error("compression needs more than 24 fresh letters")]
    AlphabetExhausted,
    #[error("block length must be positive")]
    ZeroBlockLength,
    #[error("'{0}' is not a nonempty primitive word")]
    NotPrimitive(Word),
    #[error("expected the solution set [{p}*], found {found}")]
    NotPeriodic { p: Word, found: String },
    #[error("the first left block and the last right block must be empty")]
    NotAnchored,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
}

/// Outcome of checking one lemma on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum LemmaCheck<T> {
    Unmet { reason: String },
    Holds { details: T },
    Violated { details: T, reason: String },
}

impl<T> LemmaCheck<T> {
    fn unmet(reason: impl Into<String>) -> Self {
        LemmaCheck::Unmet { reason: reason.into() }
    }

    fn verdict(ok: bool, details: T, reason: impl FnOnce() -> String) -> Self {
        if ok {
            LemmaCheck::Holds { details }
        } else {
            LemmaCheck::Violated { details, reason: reason() }
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, LemmaCheck::Holds { .. })
    }

    pub fn is_unmet(&self) -> bool {
        matches!(self, LemmaCheck::Unmet { .. })
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, LemmaCheck::Violated { .. })
    }

    pub fn details(&self) -> Option<&T> {
        match self {
            LemmaCheck::Unmet { .. } => None,
            LemmaCheck::Holds { details } | LemmaCheck::Violated { details, .. } => Some(details),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            LemmaCheck::Unmet { .. } => "unmet",
            LemmaCheck::Holds { .. } => "holds",
            LemmaCheck::Violated { .. } => "violated",
        }
    }
}

/// Classified solution set of `e` and its members up to the default bound,
/// shortest first.
pub fn known_solutions(e: &AlignedEquation) -> (SolutionSet, Vec<Word>) {
    let eq = e.to_equation();
    let set = classify(&eq);
    let members = set.members_up_to(default_bound(&eq));
    (set, members)
}

/// Number of nonempty solutions, `None` meaning infinitely many.
fn nonempty_count(set: &SolutionSet) -> Option<usize> {
    set.finite_len().map(|_| set.members_up_to(usize::MAX).iter().filter(|w| !w.is_empty()).count())
}

fn require_normal_form(e: &NormalFormEquation) -> Result<(), ReductionError> {
    let r = e.report();
    if r.all_hold() {
        Ok(())
    } else {
        Err(ReductionError::NotNormalForm { n1: r.n1, n2: r.n2, n3: r.n3 })
    }
}

fn signed(n: usize) -> i64 {
    n as i64
}

/// `s_i = σ(u_0 ⋯ u_{i-1})` for `i` in `1..=n`.
fn prefix_sums(blocks: &[Word], alphabet: &Alphabet) -> Result<Vec<Value>, WordError> {
    let mut acc = Value::from_integer(0);
    let mut out = Vec::with_capacity(blocks.len() - 1);
    for b in &blocks[..blocks.len() - 1] {
        acc += alphabet.sum(b)?;
        out.push(acc);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Zero-sum solutions and the area identity

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroSumEntry {
    pub word: Word,
    #[serde(serialize_with = "serialize_value")]
    pub sum: Value,
    #[serde(serialize_with = "serialize_value")]
    pub area_residual: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroSumCheck {
    pub all_zero_sum: bool,
    pub residuals_vanish: bool,
    pub entries: Vec<ZeroSumEntry>,
}

/// Closed form of `area(u_0 x ⋯ x u_n) − area(v_0 x ⋯ x v_n)`:
///
/// `area(u_0⋯u_n) − area(v_0⋯v_n) + σ(x)·Σ i(|u_i| − |v_i|) + |x|·Σ (s_i − t_i)`.
pub fn area_residual(e: &AlignedEquation, alphabet: &Alphabet, x: &Word) -> Result<Value, WordError> {
    let (u, v) = (e.u(), e.v());
    let base = alphabet.area(&e.u_concat())? - alphabet.area(&e.v_concat())?;
    let weighted: i64 = (0..=e.n()).map(|i| signed(i) * (signed(u[i].len()) - signed(v[i].len()))).sum();
    let s = prefix_sums(u, alphabet)?;
    let t = prefix_sums(v, alphabet)?;
    let drift: Value = s.iter().zip(&t).map(|(a, b)| a - b).sum();
    Ok(base + alphabet.sum(x)? * Value::from_integer(weighted) + Value::from_integer(signed(x.len())) * drift)
}

/// Every known solution of a normal-form equation is zero-sum, and the area
/// identity has zero residual on each of them.
pub fn check_zero_sum_solutions(e: &NormalFormEquation) -> Result<ZeroSumCheck, ReductionError> {
    require_normal_form(e)?;
    let (_, solutions) = known_solutions(&e.base);
    let mut entries = Vec::with_capacity(solutions.len());
    for word in solutions {
        let sum = e.alphabet.sum(&word)?;
        let area_residual = area_residual(&e.base, &e.alphabet, &word)?;
        entries.push(ZeroSumEntry { word, sum, area_residual });
    }
    Ok(ZeroSumCheck {
        all_zero_sum: entries.iter().all(|x| x.sum == Value::from_integer(0)),
        residuals_vanish: entries.iter().all(|x| x.area_residual == Value::from_integer(0)),
        entries,
    })
}

// ---------------------------------------------------------------------------
// Prefix sums of the constant blocks

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixSumProfile {
    #[serde(serialize_with = "serialize_values")]
    pub s: Vec<Value>,
    #[serde(serialize_with = "serialize_values")]
    pub t: Vec<Value>,
}

impl PrefixSumProfile {
    pub fn sorted_s(&self) -> Vec<Value> {
        let mut s = self.s.clone();
        s.sort();
        s
    }

    pub fn sorted_t(&self) -> Vec<Value> {
        let mut t = self.t.clone();
        t.sort();
        t
    }

    pub fn is_permutation(&self) -> bool {
        self.sorted_s() == self.sorted_t()
    }
}

pub fn prefix_profile(e: &AlignedEquation, alphabet: &Alphabet) -> Result<PrefixSumProfile, WordError> {
    Ok(PrefixSumProfile { s: prefix_sums(e.u(), alphabet)?, t: prefix_sums(e.v(), alphabet)? })
}

/// With at least two zero-sum solutions, `(s_1..s_n)` is a permutation of
/// `(t_1..t_n)`.
pub fn lemma_st(e: &AlignedEquation, alphabet: &Alphabet) -> Result<LemmaCheck<PrefixSumProfile>, ReductionError> {
    if e.is_trivial() {
        return Ok(LemmaCheck::unmet("trivial equation"));
    }
    let (_, solutions) = known_solutions(e);
    let mut zero_sum = 0;
    for x in &solutions {
        if alphabet.is_zero_sum(x)? {
            zero_sum += 1;
        }
    }
    if zero_sum < 2 {
        return Ok(LemmaCheck::unmet(format!("{zero_sum} zero-sum solutions")));
    }
    let profile = prefix_profile(e, alphabet)?;
    let ok = profile.is_permutation();
    Ok(LemmaCheck::verdict(ok, profile, || "s and t are not permutations of each other".into()))
}

// ---------------------------------------------------------------------------
// Heights of solutions

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionHeight {
    pub word: Word,
    pub height: Height,
    pub phi: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightAnalysis {
    #[serde(serialize_with = "serialize_value")]
    pub h: Value,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub phi_u: Word,
    pub phi_v: Word,
    /// Known nonempty solutions with their heights and highest prefixes.
    pub solutions: Vec<SolutionHeight>,
    /// Nonempty solution count, `None` for infinitely many.
    pub nonempty: Option<usize>,
}

impl HeightAnalysis {
    /// The degenerate alignment `k − 1 = j`, under which several solutions
    /// of height `h` can coexist.
    pub fn degenerate(&self) -> bool {
        self.k == self.j + 1
    }
}

/// Block index and in-block prefix at which the first maximum of the prefix
/// sums of `u_0 ⋯ u_n` is reached.
fn highest_block(blocks: &[Word], alphabet: &Alphabet) -> Result<(usize, Word), WordError> {
    let whole = Word::from_bytes(blocks.iter().flat_map(|b| b.as_bytes().iter().copied()).collect());
    let phi_len = alphabet.highest_prefix(&whole)?.len();
    let mut start = 0;
    for (i, b) in blocks.iter().enumerate() {
        if phi_len <= start + b.len() && phi_len > start {
            return Ok((i, b.prefix(phi_len - start)));
        }
        start += b.len();
    }
    Err(WordError::EmptyWord)
}

/// Smallest 1-based index attaining the maximum.
fn first_argmax(values: &[Value]) -> usize {
    let max = values.iter().copied().max().unwrap_or_default();
    values.iter().position(|&v| v == max).map_or(0, |p| p + 1)
}

pub fn height_analysis(e: &NormalFormEquation) -> Result<HeightAnalysis, ReductionError> {
    require_normal_form(e)?;
    let (base, alphabet) = (&e.base, &e.alphabet);
    let (i, phi_u) = highest_block(base.u(), alphabet)?;
    let (j, phi_v) = highest_block(base.v(), alphabet)?;
    let s = prefix_sums(base.u(), alphabet)?;
    let t = prefix_sums(base.v(), alphabet)?;
    let top = match alphabet.height(&base.u_concat())? {
        Height::Finite(v) => v,
        Height::NegInfinity => return Err(WordError::EmptyWord.into()),
    };
    // max over σ(u_0 ⋯ u_i) for i < n is max over s_1..s_n.
    let h = top - s.iter().copied().max().unwrap_or_default();
    let (set, known) = known_solutions(base);
    let mut solutions = Vec::new();
    for word in known.into_iter().filter(|w| !w.is_empty()) {
        let height = alphabet.height(&word)?;
        let phi = alphabet.highest_prefix(&word)?;
        solutions.push(SolutionHeight { word, height, phi });
    }
    Ok(HeightAnalysis {
        h,
        i,
        j,
        k: first_argmax(&s),
        l: first_argmax(&t),
        phi_u,
        phi_v,
        solutions,
        nonempty: nonempty_count(&set),
    })
}

/// With three or more nonempty solutions all of them have height `h`; with
/// exactly two, the shorter has height `h` and the longer at least `h`.
/// Also checks `i > j`.
pub fn lemma_height(e: &NormalFormEquation) -> Result<LemmaCheck<HeightAnalysis>, ReductionError> {
    let a = height_analysis(e)?;
    let h = Height::Finite(a.h);
    let ok = match a.nonempty {
        Some(count) if count < 2 => return Ok(LemmaCheck::unmet(format!("{count} nonempty solutions"))),
        Some(2) => a.solutions[0].height == h && a.solutions[1].height >= h,
        _ => a.solutions.iter().all(|s| s.height == h),
    };
    let order = a.i > a.j;
    Ok(LemmaCheck::verdict(ok && order, a, || {
        if order {
            "solution heights disagree with h".into()
        } else {
            "i > j fails".into()
        }
    }))
}

// ---------------------------------------------------------------------------
// Compression by a code

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum Code {
    /// Minimal zero-sum words under the given valuation.
    MinimalZeroSum { alphabet: Alphabet },
    /// All words of the given length.
    Blocks { length: usize },
}

impl Code {
    /// Unique factorization of `w` into code words, if `w` is in `Z*`.
    pub fn factorize(&self, w: &Word) -> Option<Vec<Word>> {
        match self {
            Code::MinimalZeroSum { alphabet } => alphabet.zero_sum_factorize(w).ok(),
            Code::Blocks { length } => (*length > 0 && w.len().is_multiple_of(*length))
                .then(|| w.as_bytes().chunks(*length).map(|c| Word::from_bytes(c.to_vec())).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub word: Word,
    pub letter: Word,
}

/// A compressed equation with the morphism that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Compression {
    #[serde(serialize_with = "crate::equation::serialize_display")]
    pub equation: AlignedEquation,
    pub code: Code,
    pub factors: Vec<Factor>,
}

const FRESH: std::ops::RangeInclusive<u8> = b'c'..=b'z';

impl Compression {
    /// Image of `w`, or `None` if `w` is not a product of the known factors.
    pub fn encode(&self, w: &Word) -> Option<Word> {
        let parts = self.code.factorize(w)?;
        parts
            .iter()
            .map(|p| self.factors.iter().find(|f| &f.word == p).map(|f| f.letter.as_bytes()[0]))
            .collect::<Option<Vec<u8>>>()
            .map(Word::from_bytes)
    }

    /// Preimage of `w`, or `None` if it uses a letter outside the image.
    pub fn decode(&self, w: &Word) -> Option<Word> {
        let mut out = Vec::new();
        for &c in w.as_bytes() {
            let f = self.factors.iter().find(|f| f.letter.as_bytes()[0] == c)?;
            out.extend_from_slice(f.word.as_bytes());
        }
        Some(Word::from_bytes(out))
    }
}

/// Rewrites every constant block over fresh letters `c, d, e, …`, one per
/// distinct code word in order of first appearance (left side, then right).
pub fn compress_by_code(e: &AlignedEquation, code: Code) -> Result<Compression, ReductionError> {
    if let Code::Blocks { length: 0 } = code {
        return Err(ReductionError::ZeroBlockLength);
    }
    let mut factors: Vec<Factor> = Vec::new();
    let mut fresh = FRESH;
    let mut compress_side = |blocks: &[Word]| -> Result<Vec<Word>, ReductionError> {
        let mut out = Vec::with_capacity(blocks.len());
        for b in blocks {
            let parts = code.factorize(b).ok_or_else(|| ReductionError::NotInCode { word: b.clone() })?;
            let mut letters = Vec::with_capacity(parts.len());
            for p in parts {
                let letter = match factors.iter().find(|f| f.word == p) {
                    Some(f) => f.letter.as_bytes()[0],
                    None => {
                        let c = fresh.next().ok_or(ReductionError::AlphabetExhausted)?;
                        factors.push(Factor { word: p, letter: Word::from_bytes(vec![c]) });
                        c
                    }
                };
                letters.push(letter);
            }
            out.push(Word::from_bytes(letters));
        }
        Ok(out)
    };
    let u = compress_side(e.u())?;
    let v = compress_side(e.v())?;
    Ok(Compression { equation: AlignedEquation::new(u, v)?, code, factors })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompressionCheck {
    /// Known solutions of the original that lie in `Z*`, with their images.
    pub encoded: Vec<(Word, Word)>,
    /// Known solutions of the compressed equation, with their preimages.
    pub decoded: Vec<(Word, Word)>,
}

/// Checks the solution correspondence in both directions on the known
/// solutions of `original` and of the compressed equation.
pub fn check_compression(original: &AlignedEquation, c: &Compression) -> LemmaCheck<CompressionCheck> {
    let (_, ours) = known_solutions(original);
    let (_, theirs) = known_solutions(&c.equation);
    let mut problems = Vec::new();
    let mut encoded = Vec::new();
    for x in ours.iter().filter(|x| c.code.factorize(x).is_some()) {
        match c.encode(x) {
            Some(y) if c.equation.substitute_check(&y) => encoded.push((x.clone(), y)),
            Some(y) => problems.push(format!("image '{y}' of '{x}' is not a solution")),
            None => problems.push(format!("'{x}' uses a code word absent from the constants")),
        }
    }
    let mut decoded = Vec::new();
    for y in &theirs {
        match c.decode(y) {
            Some(x) if original.substitute_check(&x) => decoded.push((y.clone(), x)),
            Some(x) => problems.push(format!("preimage '{x}' of '{y}' is not a solution")),
            None => problems.push(format!("'{y}' uses a letter outside the compressed alphabet")),
        }
    }
    let ok = problems.is_empty();
    LemmaCheck::verdict(ok, CompressionCheck { encoded, decoded }, || problems.join("; "))
}

// ---------------------------------------------------------------------------
// Cutting an equation

/// `|v_0 ⋯ v_{k-1}| − |u_0 ⋯ u_k|`.
pub fn cut_length(e: &AlignedEquation, k: usize) -> i64 {
    signed(e.prefix_v_before(k)) - signed(e.prefix_u(k))
}

/// `(u_0 X u_1 ⋯ X u_k y, v_0 X v_1 ⋯ v_{k-1} X)`.
pub fn cut_equation(e: &AlignedEquation, k: usize, y: &Word) -> Result<AlignedEquation, ReductionError> {
    if k == 0 || k > e.n() {
        return Err(ReductionError::CutIndex { k, n: e.n() });
    }
    let d = cut_length(e, k);
    if d < 0 {
        return Err(ReductionError::NegativeCut { d });
    }
    if y.len() as i64 != d {
        return Err(ReductionError::CutWordLength { y: y.clone(), d: d as usize });
    }
    let mut u = e.u()[..k].to_vec();
    u.push(e.u()[k].concat(y));
    let mut v = e.v()[..k].to_vec();
    v.push(Word::empty());
    Ok(AlignedEquation::new(u, v)?)
}

/// Cuts at `k` with `y` read off the given nonempty solutions, which must
/// all be at least as long as the cut and share its prefix.
pub fn cut_for_solutions(
    e: &AlignedEquation,
    k: usize,
    nonempty: &[Word],
) -> Result<(AlignedEquation, Word), ReductionError> {
    let d = cut_length(e, k);
    if d < 0 {
        return Err(ReductionError::NegativeCut { d });
    }
    let d = d as usize;
    let first = nonempty.iter().find(|w| !w.is_empty()).ok_or(ReductionError::NoNonemptySolution)?;
    if let Some(short) = nonempty.iter().find(|w| !w.is_empty() && w.len() < d) {
        return Err(ReductionError::SolutionTooShort { word: short.clone(), d });
    }
    let y = first.prefix(d);
    if nonempty.iter().any(|w| !w.is_empty() && !y.is_prefix_of(w)) {
        return Err(ReductionError::NoCommonPrefix { d });
    }
    Ok((cut_equation(e, k, &y)?, y))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutIndex {
    pub k: usize,
    pub d: i64,
    pub shortest_nonempty: usize,
}

/// Looks for `k ∈ 1..n` with `σ(u_0) = ⋯ = σ(u_{k-1}) = 0 ≠ σ(u_k)` on an
/// equation with at least three nonempty solutions, and checks that every
/// nonempty solution is longer than the cut length at `k`.
pub fn find_cut_index(e: &NormalFormEquation) -> Result<LemmaCheck<CutIndex>, ReductionError> {
    require_normal_form(e)?;
    let (set, known) = known_solutions(&e.base);
    if let Some(count) = nonempty_count(&set).filter(|&c| c < 3) {
        return Ok(LemmaCheck::unmet(format!("{count} nonempty solutions")));
    }
    let n = e.base.n();
    let mut k = None;
    for (i, b) in e.base.u()[..n].iter().enumerate() {
        if !e.alphabet.is_zero_sum(b)? {
            k = Some(i);
            break;
        }
    }
    let k = match k {
        Some(k) if k >= 1 => k,
        Some(_) => return Ok(LemmaCheck::unmet("the first block has nonzero sum")),
        None => return Ok(LemmaCheck::unmet("all left blocks before the last are zero-sum")),
    };
    let d = cut_length(&e.base, k);
    let shortest = known.iter().filter(|w| !w.is_empty()).map(Word::len).min().unwrap_or(0);
    let details = CutIndex { k, d, shortest_nonempty: shortest };
    Ok(LemmaCheck::verdict(signed(shortest) > d, details, || {
        format!("a nonempty solution of length {shortest} is not longer than {d}")
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicCut {
    pub j: usize,
    pub d: i64,
    pub period: usize,
}

/// For an equation with solution set `[p*]` and `u_0 = v_n = ε`, finds the
/// largest `j` such that `u_0..u_{j-1}` and `v_0..v_{j-1}` all have lengths
/// divisible by `|p|`, and checks `j > 0` and `|v_0 ⋯ v_{j-1}| − |u_0 ⋯ u_j| ≤ |p|`.
pub fn periodic_cut_index(e: &AlignedEquation, p: &Word) -> Result<LemmaCheck<PeriodicCut>, ReductionError> {
    if p.is_empty() || !p.is_primitive() {
        return Err(ReductionError::NotPrimitive(p.clone()));
    }
    let n = e.n();
    if !e.u()[0].is_empty() || !e.v()[n].is_empty() {
        return Err(ReductionError::NotAnchored);
    }
    let set = classify(&e.to_equation());
    let expected = SolutionSet::Infinite { p: Word::empty(), q: p.clone() };
    if set != expected {
        return Err(ReductionError::NotPeriodic { p: p.clone(), found: set.to_string() });
    }
    Ok(periodic_cut_unchecked(e, p))
}

fn periodic_cut_unchecked(e: &AlignedEquation, p: &Word) -> LemmaCheck<PeriodicCut> {
    let period = p.len();
    let j = (0..e.n())
        .take_while(|&i| e.u()[i].len().is_multiple_of(period) && e.v()[i].len().is_multiple_of(period))
        .count();
    let d = cut_length(e, j);
    let ok = j > 0 && d <= signed(period);
    LemmaCheck::verdict(ok, PeriodicCut { j, d, period }, || format!("j = {j}, cut length {d}, |p| = {period}"))
}

// ---------------------------------------------------------------------------
// Empty solution by abelian equivalence

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianSplit {
    /// `u_n = u·a^m` with `|u| = prefix_len`.
    pub prefix_len: usize,
    pub letter: Option<Word>,
    pub m: usize,
}

/// If the equation has a nonempty solution and `u_n = u·a^m` with
/// `u_0 ⋯ u_{n-1} u` a prefix of `v_0 ⋯ v_n`, then `ε` is a solution.
pub fn has_empty_by_abelian(e: &AlignedEquation) -> LemmaCheck<AbelianSplit> {
    let (_, known) = known_solutions(e);
    if !known.iter().any(|w| !w.is_empty()) {
        return LemmaCheck::unmet("no nonempty solution");
    }
    match abelian_split(e) {
        None => LemmaCheck::unmet("no split u·a^m of the last left block fits the right side"),
        Some(split) => {
            let ok = e.substitute_check(&Word::empty());
            LemmaCheck::verdict(ok, split, || "the empty word is not a solution".into())
        }
    }
}

fn abelian_split(e: &AlignedEquation) -> Option<AbelianSplit> {
    let n = e.n();
    let last = &e.u()[n];
    let v = e.v_concat();
    let head = Word::from_bytes(e.u()[..n].iter().flat_map(|b| b.as_bytes().iter().copied()).collect());
    let run = match last.as_bytes().last() {
        Some(&c) => last.as_bytes().iter().rev().take_while(|&&x| x == c).count(),
        None => 0,
    };
    (0..=run).rev().find_map(|m| {
        let u = last.prefix(last.len() - m);
        head.concat(&u).is_prefix_of(&v).then(|| AbelianSplit {
            prefix_len: u.len(),
            letter: (m > 0).then(|| last.suffix(1)),
            m,
        })
    })
}

#[cfg(test)]
mod tests;
