//! The reduction chain `E1 → E2 → E3 → E4 → E5`.
//!
//! Starting from an equation in normal form with at least three nonempty
//! solutions, each step cuts, re-letters or compresses the equation while
//! keeping those solutions. On a finite solution set the chain would end in
//! a strictly shorter equation with the same properties, so it can never
//! complete on a genuine instance; [`build_reduction_chain`] reports which
//! hypothesis fails instead. [`run_chain_steps`] runs the steps on any
//! normal-form equation, which exercises them on infinite families.

use serde::Serialize;

use super::*;
use crate::equation::OneVarEquation;
use crate::normalizer::normal_form_of;
use crate::words::serialize_value;

/// `f = g ∘ psw`: a letter becomes `b` where the running sum equals the
/// lowest running sum of the shortest nonempty solution, and `a` elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixSumMap {
    pub alphabet: Alphabet,
    #[serde(serialize_with = "serialize_value")]
    pub low: Value,
}

impl PrefixSumMap {
    pub fn new(alphabet: Alphabet, x1: &Word) -> Result<Self, ReductionError> {
        let low = alphabet.psw(x1, Value::from_integer(0))?.min().ok_or(ReductionError::NoNonemptySolution)?;
        Ok(PrefixSumMap { alphabet, low })
    }

    pub fn apply(&self, w: &Word) -> Result<Word, WordError> {
        let psw = self.alphabet.psw(w, Value::from_integer(0))?;
        Ok(Word::from_bytes(psw.values().iter().map(|&v| if v == self.low { b'b' } else { b'a' }).collect()))
    }
}

/// Which construction produced a step, with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Certificate {
    Start { alphabet: Alphabet },
    ZeroSumCompression { factors: Vec<Factor> },
    Cut { k: usize, d: usize, y: Word },
    PrefixSumMap { map: PrefixSumMap, negated: bool },
    PeriodicCut { p: Word, j: usize, z: Word },
    BlockCompression { block_length: usize, factors: Vec<Factor> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepCheck {
    pub name: String,
    pub outcome: String,
    pub detail: String,
}

impl StepCheck {
    fn from_lemma<T>(name: &str, check: &LemmaCheck<T>) -> Self {
        let detail = match check {
            LemmaCheck::Unmet { reason } | LemmaCheck::Violated { reason, .. } => reason.clone(),
            LemmaCheck::Holds { .. } => String::new(),
        };
        StepCheck { name: name.into(), outcome: check.label().into(), detail }
    }

    /// Like [`StepCheck::from_lemma`], but an unmet hypothesis counts as a
    /// violation: the chain construction guarantees it.
    fn required<T>(name: &str, check: &LemmaCheck<T>) -> Self {
        let mut c = StepCheck::from_lemma(name, check);
        if check.is_unmet() {
            c.outcome = "violated".into();
        }
        c
    }

    fn boolean(name: &str, ok: bool, detail: String) -> Self {
        let outcome = if ok { "holds" } else { "violated" };
        StepCheck { name: name.into(), outcome: outcome.into(), detail: if ok { String::new() } else { detail } }
    }

    pub fn is_violated(&self) -> bool {
        self.outcome == "violated"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub label: String,
    #[serde(serialize_with = "crate::equation::serialize_display")]
    pub equation: AlignedEquation,
    pub length: usize,
    pub shorter_than_start: bool,
    pub solutions: SolutionSet,
    pub certificate: Certificate,
    pub checks: Vec<StepCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
    /// Why the chain stopped after its last step.
    pub terminal: String,
    /// Structural error that stopped the chain early, if any.
    pub error: Option<String>,
}

impl ReductionTrace {
    pub fn violations(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .steps
            .iter()
            .flat_map(|s| {
                s.checks
                    .iter()
                    .filter(|c| c.is_violated())
                    .map(move |c| format!("{}: {}: {}", s.label, c.name, c.detail))
            })
            .collect();
        out.extend(self.error.iter().cloned());
        out
    }
}

/// Why the chain does not apply to an equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    NotNormalForm { n1: bool, n2: bool, n3: bool },
    NotFinite { solutions: SolutionSet },
    FewerThanThreeNonempty { nonempty: usize, solutions: SolutionSet },
}

impl Verdict {
    pub fn message(&self) -> &'static str {
        match self {
            Verdict::NotNormalForm { .. } => "not in normal form; chain not applicable",
            Verdict::NotFinite { .. } => "not a finite-set instance",
            Verdict::FewerThanThreeNonempty { .. } => "fewer than 3 nonempty solutions; chain not applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ChainOutcome {
    Verdict {
        verdict: Verdict,
        message: String,
    },
    /// The chain ran on an equation with the empty solution, three or more
    /// nonempty solutions and finitely many solutions.
    ConjectureViolation {
        trace: ReductionTrace,
    },
}

impl ChainOutcome {
    pub fn is_violation(&self) -> bool {
        matches!(self, ChainOutcome::ConjectureViolation { .. })
    }
}

pub fn build_reduction_chain(e1: &NormalFormEquation) -> ChainOutcome {
    let verdict = |v: Verdict| ChainOutcome::Verdict { message: v.message().into(), verdict: v };
    let r = e1.report();
    if !r.all_hold() {
        return verdict(Verdict::NotNormalForm { n1: r.n1, n2: r.n2, n3: r.n3 });
    }
    let solutions = classify(&e1.base.to_equation());
    let nonempty: Vec<Word> = match &solutions {
        SolutionSet::Finite { solutions } => solutions.iter().filter(|w| !w.is_empty()).cloned().collect(),
        _ => return verdict(Verdict::NotFinite { solutions }),
    };
    if nonempty.len() < 3 {
        return verdict(Verdict::FewerThanThreeNonempty { nonempty: nonempty.len(), solutions });
    }
    ChainOutcome::ConjectureViolation { trace: run_chain_steps(e1, &nonempty) }
}

/// Shifts `e` by its shortest solution, rewrites it into normal form and runs
/// [`build_reduction_chain`].
pub fn reduce_equation(e: &OneVarEquation, alphabet: &Alphabet) -> Result<ChainOutcome, ReductionError> {
    let verdict = |v: Verdict| ChainOutcome::Verdict { message: v.message().into(), verdict: v };
    let solutions = classify(e);
    match solutions.finite_len() {
        None => return Ok(verdict(Verdict::NotFinite { solutions })),
        Some(n) if n < 2 => {
            return Ok(verdict(Verdict::FewerThanThreeNonempty { nonempty: 0, solutions }));
        }
        Some(_) => {}
    }
    Ok(build_reduction_chain(&normal_form_of(e, alphabet)?))
}

struct Builder {
    start_length: usize,
    steps: Vec<TraceStep>,
}

impl Builder {
    fn push(&mut self, label: &str, equation: AlignedEquation, certificate: Certificate, checks: Vec<StepCheck>) {
        let solutions = classify(&equation.to_equation());
        self.steps.push(TraceStep {
            label: label.into(),
            length: equation.length(),
            shorter_than_start: equation.length() < self.start_length,
            equation,
            solutions,
            certificate,
            checks,
        });
    }

    fn finish(self, terminal: &str, error: Option<ReductionError>) -> ReductionTrace {
        ReductionTrace { steps: self.steps, terminal: terminal.into(), error: error.map(|e| e.to_string()) }
    }
}

fn keeps_solutions(name: &str, e: &AlignedEquation, words: &[Word]) -> StepCheck {
    let lost: Vec<String> = words.iter().filter(|w| !e.substitute_check(w)).map(Word::to_string).collect();
    StepCheck::boolean(name, lost.is_empty(), format!("lost {}", lost.join(", ")))
}

/// Runs the chain on `e1` using `nonempty` as its nonempty solutions.
pub fn run_chain_steps(e1: &NormalFormEquation, nonempty: &[Word]) -> ReductionTrace {
    let mut b = Builder { start_length: e1.base.length(), steps: Vec::new() };
    b.push("E1", e1.base.clone(), Certificate::Start { alphabet: e1.alphabet.clone() }, Vec::new());
    match chain_steps(e1, nonempty, &mut b) {
        Ok(terminal) => b.finish(terminal, None),
        Err(err) => b.finish("stopped on an error", Some(err)),
    }
}

fn chain_steps(e1: &NormalFormEquation, nonempty: &[Word], b: &mut Builder) -> Result<&'static str, ReductionError> {
    let base = &e1.base;
    let n = base.n();
    let mut nonempty: Vec<Word> = nonempty.iter().filter(|w| !w.is_empty()).cloned().collect();
    nonempty.sort_by(Word::shortlex_cmp);
    let x1 = nonempty.first().cloned().ok_or(ReductionError::NoNonemptySolution)?;

    let mut k = None;
    for (i, u) in base.u()[..n].iter().enumerate() {
        if !e1.alphabet.is_zero_sum(u)? {
            k = Some(i);
            break;
        }
    }
    let Some(k) = k else {
        let c = compress_by_code(base, Code::MinimalZeroSum { alphabet: e1.alphabet.clone() })?;
        let checks = vec![StepCheck::from_lemma("compression", &check_compression(base, &c))];
        b.push("E2", c.equation, Certificate::ZeroSumCompression { factors: c.factors }, checks);
        return Ok("all constants are zero-sum; compressed by minimal zero-sum words");
    };

    // Cut after u_k.
    let cut_check = find_cut_index(e1)?;
    let (e2, y) = cut_for_solutions(base, k, &nonempty)?;
    let checks = vec![
        StepCheck::from_lemma("cut index", &cut_check),
        keeps_solutions("cut keeps nonempty solutions", &e2, &nonempty),
    ];
    b.push("E2", e2.clone(), Certificate::Cut { k, d: y.len(), y: y.clone() }, checks);

    // Re-letter over {a, b}.
    let negated = e1.alphabet.sum(&base.u()[k])? < Value::from_integer(0);
    let alphabet = if negated { e1.alphabet.negated() } else { e1.alphabet.clone() };
    let f = PrefixSumMap::new(alphabet, &x1)?;
    let map_side = |blocks: &[Word]| -> Result<Vec<Word>, WordError> { blocks.iter().map(|w| f.apply(w)).collect() };
    let e3 = AlignedEquation::new(map_side(e2.u())?, map_side(e2.v())?)?;
    let images: Vec<Word> = nonempty.iter().map(|x| f.apply(x)).collect::<Result<_, _>>()?;
    let checks = vec![
        keeps_solutions("images of nonempty solutions solve", &e3, &images),
        StepCheck::required("empty solution by abelian equivalence", &has_empty_by_abelian(&e3)),
    ];
    b.push("E3", e3.clone(), Certificate::PrefixSumMap { map: f, negated }, checks);
    let p = match classify(&e3.to_equation()) {
        SolutionSet::Infinite { p, q } if p.is_empty() => q,
        SolutionSet::Finite { .. } => return Ok("E3 has finitely many solutions"),
        other => {
            return Err(ReductionError::NotPeriodic { p: Word::empty(), found: other.to_string() });
        }
    };

    // Cut again at a period-aligned index.
    let periodic = periodic_cut_index(&e3, &p)?;
    let j = periodic.details().map_or(0, |d| d.j);
    let (e4, z) = if j == k { (e2.clone(), y.clone()) } else { cut_for_solutions(base, j, &nonempty)? };
    let checks = vec![
        StepCheck::from_lemma("periodic cut index", &periodic),
        StepCheck::boolean("cut word no longer than the period", z.len() <= p.len(), format!("|z| = {}", z.len())),
        keeps_solutions("cut keeps nonempty solutions", &e4, &nonempty),
    ];
    b.push("E4", e4.clone(), Certificate::PeriodicCut { p: p.clone(), j, z }, checks);

    // Compress by blocks of length |p|.
    let c = compress_by_code(&e4, Code::Blocks { length: p.len() })?;
    let misaligned: Vec<String> = nonempty.iter().filter(|x| x.len() % p.len() != 0).map(Word::to_string).collect();
    let checks = vec![
        StepCheck::boolean(
            "solution lengths divisible by the period",
            misaligned.is_empty(),
            format!("not divisible: {}", misaligned.join(", ")),
        ),
        StepCheck::from_lemma("compression", &check_compression(&e4, &c)),
        StepCheck::required("empty solution by abelian equivalence", &has_empty_by_abelian(&c.equation)),
    ];
    b.push("E5", c.equation, Certificate::BlockCompression { block_length: p.len(), factors: c.factors }, checks);
    Ok("compressed by blocks of the period length")
}
