//! Exhaustive campaigns over small equations.
//!
//! Every equation with at most `occurrences` copies of `X` and at most
//! `max_const_len` constants per side (over the first `alphabet_size`
//! letters) is classified, cross-checked against brute force, and optionally
//! run through the normal-form and lemma suites. Rows of the instance table
//! are distributed over a worker pool and merged in index order, so the
//! report depends only on the configuration.

use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::equation::{OneVarEquation, SolutionSet, Token};
use crate::normalizer::{shift_to_empty, to_normal_form};
use crate::reduction::{
    build_reduction_chain, check_compression, check_zero_sum_solutions, compress_by_code, cut_for_solutions,
    cut_length, find_cut_index, has_empty_by_abelian, lemma_height, lemma_st, periodic_cut_index, run_chain_steps,
    ChainOutcome, Code, LemmaCheck, Verdict,
};
use crate::solver::{classify, default_bound, oracle};
use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CampaignError {
    #[error("invalid campaign configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CampaignConfig {
    pub alphabet_size: usize,
    pub max_const_len: usize,
    /// Maximal number of `X` per side.
    pub occurrences: usize,
    /// Brute-force oracle checks all words up to this length.
    pub oracle_len: usize,
    pub workers: usize,
    /// Echoed for reproducibility; the campaign itself is exhaustive.
    pub seed: u64,
    /// Run the normal-form and lemma suites as well.
    pub lemmas: bool,
    /// Maximal number of examples kept per failure list.
    pub example_cap: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            alphabet_size: 2,
            max_const_len: 6,
            occurrences: 2,
            oracle_len: 8,
            workers: 1,
            seed: 0,
            lemmas: false,
            example_cap: 20,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), CampaignError> {
        let bad = |m: &str| Err(CampaignError::InvalidConfig(m.into()));
        if !(1..=26).contains(&self.alphabet_size) {
            return bad("alphabet size must be between 1 and 26");
        }
        if self.max_const_len == 0 || self.occurrences == 0 || self.oracle_len == 0 {
            return bad("bounds must be positive");
        }
        if self.workers == 0 {
            return bad("worker count must be positive");
        }
        Ok(())
    }

    pub fn letters(&self) -> Vec<u8> {
        (b'a'..).take(self.alphabet_size).collect()
    }
}

/// All sides with at most `max_vars` variables and `max_const` constants,
/// ordered by length and then lexicographically with `X` first.
pub fn enumerate_sides(letters: &[u8], max_const: usize, max_vars: usize) -> Vec<Vec<Token>> {
    let tokens: Vec<Token> = std::iter::once(Token::Var).chain(letters.iter().map(|&c| Token::Letter(c))).collect();
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Token>> = vec![Vec::new()];
    for _ in 0..max_const + max_vars {
        let mut next = Vec::new();
        for side in &layer {
            let vars = side.iter().filter(|&&t| t == Token::Var).count();
            for &t in &tokens {
                let fits = if t == Token::Var { vars < max_vars } else { side.len() - vars < max_const };
                if fits {
                    let mut s = side.clone();
                    s.push(t);
                    next.push(s);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Example {
    pub equation: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HypothesisCount {
    /// Instances meeting the hypothesis.
    pub instances: u64,
    pub holds: u64,
    pub violated: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClassificationCounts {
    pub all: u64,
    pub infinite: u64,
    /// Finite solution sets by size.
    pub finite: BTreeMap<usize, u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub checked: u64,
    pub disagreements: u64,
    pub examples: Vec<Example>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaSummary {
    pub hypotheses: BTreeMap<String, HypothesisCount>,
    /// Informational counts that are not pass/fail checks.
    pub observations: BTreeMap<String, u64>,
    pub violations: u64,
    pub examples: Vec<Example>,
    /// Hypotheses with no instance at this scale.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub sides: usize,
    pub instances: u64,
    pub classification: ClassificationCounts,
    pub max_finite_size: usize,
    pub oracle: OracleSummary,
    /// Finite solution sets with more than three elements.
    pub over_three: u64,
    pub over_three_examples: Vec<Example>,
    pub lemmas: Option<LemmaSummary>,
    pub violations: u64,
}

impl CampaignReport {
    pub fn summary_line(&self) -> String {
        format!("max finite solution-set size observed: {}; violations: {}", self.max_finite_size, self.violations)
    }

    pub fn exit_code(&self) -> i32 {
        if self.violations > 0 {
            2
        } else {
            0
        }
    }
}

/// Every lemma check tallied by the suite, so that zero counts are reported.
pub const LEMMA_CHECKS: &[&str] = &[
    "normal_form",
    "zero_sum_solutions",
    "prefix_sum_permutation",
    "solution_heights",
    "cut_preserves_solutions",
    "compression_minimal_zero_sum",
    "compression_blocks",
    "cut_index",
    "periodic_cut_index",
    "empty_by_abelian",
    "chain_verdict",
    "chain_zero_sum_compression",
    "chain_cut",
    "chain_prefix_sum_map",
    "chain_periodic_cut",
    "chain_block_compression",
];

#[derive(Debug, Default)]
struct Tally {
    instances: u64,
    classification: ClassificationCounts,
    max_finite: usize,
    oracle: OracleSummary,
    over_three: u64,
    over_three_examples: Vec<Example>,
    lemmas: LemmaSummary,
}

fn push_capped(list: &mut Vec<Example>, cap: usize, example: Example) {
    if list.len() < cap {
        list.push(example);
    }
}

impl Tally {
    fn merge(&mut self, other: Tally, cap: usize) {
        self.instances += other.instances;
        self.classification.all += other.classification.all;
        self.classification.infinite += other.classification.infinite;
        for (k, v) in other.classification.finite {
            *self.classification.finite.entry(k).or_default() += v;
        }
        self.max_finite = self.max_finite.max(other.max_finite);
        self.oracle.checked += other.oracle.checked;
        self.oracle.disagreements += other.oracle.disagreements;
        for e in other.oracle.examples {
            push_capped(&mut self.oracle.examples, cap, e);
        }
        self.over_three += other.over_three;
        for e in other.over_three_examples {
            push_capped(&mut self.over_three_examples, cap, e);
        }
        for (k, v) in other.lemmas.hypotheses {
            let c = self.lemmas.hypotheses.entry(k).or_default();
            c.instances += v.instances;
            c.holds += v.holds;
            c.violated += v.violated;
        }
        for (k, v) in other.lemmas.observations {
            *self.lemmas.observations.entry(k).or_default() += v;
        }
        self.lemmas.violations += other.lemmas.violations;
        for e in other.lemmas.examples {
            push_capped(&mut self.lemmas.examples, cap, e);
        }
    }

    fn record(&mut self, name: &str, equation: &OneVarEquation, ok: bool, detail: impl FnOnce() -> String, cap: usize) {
        let c = self.lemmas.hypotheses.entry(name.to_string()).or_default();
        c.instances += 1;
        if ok {
            c.holds += 1;
        } else {
            c.violated += 1;
            self.lemmas.violations += 1;
            push_capped(
                &mut self.lemmas.examples,
                cap,
                Example { equation: equation.to_string(), detail: format!("{name}: {}", detail()) },
            );
        }
    }

    fn record_check<T>(&mut self, name: &str, equation: &OneVarEquation, check: &LemmaCheck<T>, cap: usize) {
        match check {
            LemmaCheck::Unmet { .. } => {}
            LemmaCheck::Holds { .. } => self.record(name, equation, true, String::new, cap),
            LemmaCheck::Violated { reason, .. } => self.record(name, equation, false, || reason.clone(), cap),
        }
    }

    fn observe(&mut self, name: &str) {
        *self.lemmas.observations.entry(name.to_string()).or_default() += 1;
    }
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport, CampaignError> {
    config.validate()?;
    let letters = config.letters();
    let sides = enumerate_sides(&letters, config.max_const_len, config.occurrences);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CampaignError::InvalidConfig(e.to_string()))?;
    let rows: Vec<Tally> = pool.install(|| {
        (0..sides.len())
            .into_par_iter()
            .map(|i| {
                let mut tally = Tally::default();
                for j in i + 1..sides.len() {
                    let eq = OneVarEquation::new(sides[i].clone(), sides[j].clone());
                    if eq.lhs_vars() + eq.rhs_vars() > 0 {
                        evaluate(&eq, config, &letters, &mut tally);
                    }
                }
                tally
            })
            .collect()
    });
    let mut total = Tally::default();
    for row in rows {
        total.merge(row, config.example_cap);
    }

    let lemmas = config.lemmas.then(|| {
        let mut summary = std::mem::take(&mut total.lemmas);
        for name in LEMMA_CHECKS {
            let count = summary.hypotheses.entry(name.to_string()).or_default();
            if count.instances == 0 {
                summary.warnings.push(format!("no instance meets the hypothesis of {name}"));
            }
        }
        summary
    });
    let violations = total.oracle.disagreements + total.over_three + lemmas.as_ref().map_or(0, |l| l.violations);
    Ok(CampaignReport {
        config: config.clone(),
        sides: sides.len(),
        instances: total.instances,
        classification: total.classification,
        max_finite_size: total.max_finite,
        oracle: total.oracle,
        over_three: total.over_three,
        over_three_examples: total.over_three_examples,
        lemmas,
        violations,
    })
}

fn evaluate(eq: &OneVarEquation, config: &CampaignConfig, letters: &[u8], tally: &mut Tally) {
    let cap = config.example_cap;
    tally.instances += 1;
    let set = classify(eq);
    match &set {
        SolutionSet::All => tally.classification.all += 1,
        SolutionSet::Infinite { .. } => tally.classification.infinite += 1,
        SolutionSet::Finite { solutions } => {
            *tally.classification.finite.entry(solutions.len()).or_default() += 1;
            tally.max_finite = tally.max_finite.max(solutions.len());
            if solutions.len() > 3 {
                tally.over_three += 1;
                push_capped(
                    &mut tally.over_three_examples,
                    cap,
                    Example { equation: eq.to_string(), detail: set.to_string() },
                );
            }
        }
    }
    tally.oracle.checked += 1;
    if let Err(d) = oracle::check(eq, &set, letters, config.oracle_len) {
        tally.oracle.disagreements += 1;
        let detail = format!(
            "'{}' is {}a solution by brute force; classified as {set}",
            d.word,
            if d.oracle_says_solution { "" } else { "not " }
        );
        push_capped(&mut tally.oracle.examples, cap, Example { equation: eq.to_string(), detail });
    }
    if config.lemmas {
        lemma_suite(eq, &set, letters, tally, cap);
    }
}

fn lemma_suite(eq: &OneVarEquation, set: &SolutionSet, letters: &[u8], tally: &mut Tally, cap: usize) {
    let Ok(aligned) = eq.align() else { return };
    if aligned.is_trivial() {
        return;
    }
    let members = set.members_up_to(default_bound(eq));
    if members.iter().any(|w| !w.is_empty()) {
        tally.record_check("empty_by_abelian", eq, &has_empty_by_abelian(&aligned), cap);
    }
    if members.len() < 2 {
        return;
    }

    let x0 = &members[0];
    let shifted = match shift_to_empty(&aligned, x0) {
        Ok(s) => s,
        Err(err) => return tally.record("normal_form", eq, false, || err.to_string(), cap),
    };
    let witness = x0.left_quotient(&members[1]).unwrap_or_default();
    let nf = match to_normal_form(&shifted, &witness, &Alphabet::default_for(letters.iter().copied())) {
        Ok(nf) => nf,
        Err(err) => return tally.record("normal_form", eq, false, || err.to_string(), cap),
    };
    let report = nf.report();
    let shorter = nf.base.length() <= shifted.length();
    tally.record("normal_form", eq, report.all_hold() && shorter, || format!("{report:?}, not longer: {shorter}"), cap);
    if !report.all_hold() {
        return;
    }
    let (base, alphabet) = (&nf.base, &nf.alphabet);

    match check_zero_sum_solutions(&nf) {
        Ok(c) => tally.record(
            "zero_sum_solutions",
            eq,
            c.all_zero_sum && c.residuals_vanish,
            || format!("{:?}", c.entries),
            cap,
        ),
        Err(err) => tally.record("zero_sum_solutions", eq, false, || err.to_string(), cap),
    }
    match lemma_st(base, alphabet) {
        Ok(c) => tally.record_check("prefix_sum_permutation", eq, &c, cap),
        Err(err) => tally.record("prefix_sum_permutation", eq, false, || err.to_string(), cap),
    }
    match lemma_height(&nf) {
        Ok(c) => {
            if c.details().is_some_and(|a| a.degenerate()) {
                tally.observe("height_alignment_k_minus_one_equals_j");
            }
            tally.record_check("solution_heights", eq, &c, cap);
        }
        Err(err) => tally.record("solution_heights", eq, false, || err.to_string(), cap),
    }

    let nf_set = classify(&base.to_equation());
    let nonempty: Vec<Word> = nf_set.sample(5).into_iter().filter(|w| !w.is_empty()).collect();
    let mut cut_ok = None;
    for k in 1..=base.n() {
        if cut_length(base, k) < 0 {
            continue;
        }
        if let Ok((cut, _)) = cut_for_solutions(base, k, &nonempty) {
            let all = nonempty.iter().all(|x| cut.substitute_check(x));
            cut_ok = Some(cut_ok.unwrap_or(true) && all);
        }
    }
    if let Some(ok) = cut_ok {
        tally.record("cut_preserves_solutions", eq, ok, || "a cut lost a nonempty solution".into(), cap);
    }

    let all_zero_sum = base.u().iter().chain(base.v()).all(|w| alphabet.is_zero_sum(w).unwrap_or(false));
    if all_zero_sum {
        let code = Code::MinimalZeroSum { alphabet: alphabet.clone() };
        match compress_by_code(base, code) {
            Ok(c) => tally.record_check("compression_minimal_zero_sum", eq, &check_compression(base, &c), cap),
            Err(err) => tally.record("compression_minimal_zero_sum", eq, false, || err.to_string(), cap),
        }
    }
    let block = base.u().iter().chain(base.v()).fold(0usize, |g, w| g.gcd(&w.len()));
    if block >= 2 {
        match compress_by_code(base, Code::Blocks { length: block }) {
            Ok(c) => tally.record_check("compression_blocks", eq, &check_compression(base, &c), cap),
            Err(err) => tally.record("compression_blocks", eq, false, || err.to_string(), cap),
        }
    }

    match find_cut_index(&nf) {
        Ok(c) => tally.record_check("cut_index", eq, &c, cap),
        Err(err) => tally.record("cut_index", eq, false, || err.to_string(), cap),
    }
    if let SolutionSet::Infinite { p, q } = &nf_set {
        if p.is_empty() {
            match periodic_cut_index(base, q) {
                Ok(c) => tally.record_check("periodic_cut_index", eq, &c, cap),
                Err(err) => tally.record("periodic_cut_index", eq, false, || err.to_string(), cap),
            }
        }
    }

    match build_reduction_chain(&nf) {
        ChainOutcome::Verdict { verdict, .. } => {
            tally.record("chain_verdict", eq, true, String::new, cap);
            tally.observe(match verdict {
                Verdict::NotNormalForm { .. } => "chain_verdict_not_normal_form",
                Verdict::NotFinite { .. } => "chain_verdict_not_finite",
                Verdict::FewerThanThreeNonempty { .. } => "chain_verdict_fewer_than_three",
            });
        }
        ChainOutcome::ConjectureViolation { trace } => {
            tally.record("chain_verdict", eq, false, || format!("completed trace: {:?}", trace.violations()), cap)
        }
    }
    if nf_set.is_infinite() {
        let trace = run_chain_steps(&nf, &nonempty);
        if let Some(err) = &trace.error {
            let failed_step = ["chain_cut", "chain_cut", "chain_prefix_sum_map", "chain_periodic_cut"]
                .get(trace.steps.len())
                .copied()
                .unwrap_or("chain_block_compression");
            tally.record(failed_step, eq, false, || err.clone(), cap);
        }
        for step in &trace.steps {
            let name = match step.label.as_str() {
                "E2" if step.checks.iter().any(|c| c.name == "compression") => "chain_zero_sum_compression",
                "E2" => "chain_cut",
                "E3" => "chain_prefix_sum_map",
                "E4" => "chain_periodic_cut",
                "E5" => "chain_block_compression",
                _ => continue,
            };
            let failed: Vec<String> =
                step.checks.iter().filter(|c| c.is_violated()).map(|c| format!("{}: {}", c.name, c.detail)).collect();
            tally.record(name, eq, failed.is_empty(), || failed.join("; "), cap);
        }
    }
}
