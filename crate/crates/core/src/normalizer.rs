//! Shifting equations so that the empty word is a solution, and rewriting
//! them into normal form.
//!
//! An aligned equation with blocks `u_0..u_n`, `v_0..v_n` is in normal form
//! when
//!
//! * (N1) `ε` and some nonempty zero-sum word are solutions,
//! * (N2) `|u_0 ⋯ u_i| < |v_0 ⋯ v_i|` for every `i < n`,
//! * (N3) `|u_0 ⋯ u_i| ≤ |v_0 ⋯ v_{i-1}|` for every `i ≤ n`.
//!
//! [`to_normal_form`] reaches N2 and N3 with three equivalence-preserving
//! rewrites: merging two blocks across an aligned cut, rotating the tail of
//! a block to the other side, and cancelling a common overlap.

use serde::Serialize;
use thiserror::Error;

use crate::equation::{AlignedEquation, EquationError, OneVarEquation};
use crate::solver::{classify, default_bound};
use crate::words::{normalize_alphabet, Alphabet, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("'{0}' is not a solution of the equation")]
    NotASolution(Word),
    #[error("the equation is trivial")]
    Trivial,
    #[error("the empty word is not a solution")]
    NoEmptySolution,
    #[error("the witness must be a nonempty solution")]
    EmptyWitness,
    #[error("block {index}: overlapping parts differ, so the equation has no solution")]
    OverlapMismatch { index: usize },
    #[error("the equation has fewer than two solutions")]
    TooFewSolutions,
    #[error("rewrite step broke its termination measure: {0}")]
    RewriteInvariant(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Equation(#[from] EquationError),
}

/// Replaces `X` by `x0 X`. The solutions of the result are exactly
/// `x0⁻¹ x` for the solutions `x` of `e`.
pub fn shift_to_empty(e: &AlignedEquation, x0: &Word) -> Result<AlignedEquation, NormalFormError> {
    if !e.substitute_check(x0) {
        return Err(NormalFormError::NotASolution(x0.clone()));
    }
    if x0.is_empty() {
        return Ok(e.clone());
    }
    let n = e.n();
    let shift = |blocks: &[Word]| -> Vec<Word> {
        blocks.iter().enumerate().map(|(i, b)| if i < n { b.concat(x0) } else { b.clone() }).collect()
    };
    Ok(AlignedEquation::new(shift(e.u()), shift(e.v()))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RewriteRule {
    /// Exchange the two sides.
    Swap,
    /// Drop the `X` pair after an aligned cut at `index`.
    Merge,
    /// Move the overhanging tail of `u_index` to the other side.
    Rotate,
    /// Cancel the common overlap of `u_index` and `v_index`.
    Overlap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub rule: RewriteRule,
    pub index: usize,
    pub before: String,
    pub after: String,
    pub length_before: usize,
    pub length_after: usize,
    /// Smallest `j` with `|u_0 ⋯ u_j| ≥ |v_0 ⋯ v_j|`, before and after.
    pub violating_before: usize,
    pub violating_after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormReport {
    pub n1: bool,
    pub n2: bool,
    pub n3: bool,
    pub n2_failure: Option<usize>,
    pub n3_failure: Option<usize>,
}

impl NormalFormReport {
    pub fn all_hold(&self) -> bool {
        self.n1 && self.n2 && self.n3
    }
}

/// An equation in normal form together with the valuation that makes its
/// witness zero-sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormEquation {
    #[serde(serialize_with = "crate::equation::serialize_display")]
    pub base: AlignedEquation,
    pub witness: Word,
    pub alphabet: Alphabet,
    pub rewrites: Vec<RewriteStep>,
}

impl NormalFormEquation {
    pub fn report(&self) -> NormalFormReport {
        check_normal_form(&self.base, &self.witness, &self.alphabet)
    }
}

/// Smallest `j` with `|u_0 ⋯ u_j| ≥ |v_0 ⋯ v_j|`; always exists since it holds
/// for `j = n`.
pub fn first_unbalanced(e: &AlignedEquation) -> usize {
    (0..=e.n()).find(|&j| e.prefix_u(j) >= e.prefix_v(j)).unwrap_or(e.n())
}

pub fn check_normal_form(e: &AlignedEquation, witness: &Word, alphabet: &Alphabet) -> NormalFormReport {
    let n1 = e.substitute_check(&Word::empty())
        && !witness.is_empty()
        && alphabet.is_zero_sum(witness).unwrap_or(false)
        && e.substitute_check(witness);
    let n2_failure = (0..e.n()).find(|&i| e.prefix_u(i) >= e.prefix_v(i));
    let n3_failure = (0..=e.n()).find(|&i| e.prefix_u(i) > e.prefix_v_before(i));
    NormalFormReport { n1, n2: n2_failure.is_none(), n3: n3_failure.is_none(), n2_failure, n3_failure }
}

/// Rewrites `e` into normal form.
///
/// `e` must be nontrivial, have the empty solution, and have `witness` as a
/// nonempty solution. The alphabet is first re-valued so that `witness` is
/// zero-sum. The result is equivalent to `e` and not longer than it.
pub fn to_normal_form(
    e: &AlignedEquation,
    witness: &Word,
    alphabet: &Alphabet,
) -> Result<NormalFormEquation, NormalFormError> {
    if e.is_trivial() {
        return Err(NormalFormError::Trivial);
    }
    if !e.substitute_check(&Word::empty()) {
        return Err(NormalFormError::NoEmptySolution);
    }
    if witness.is_empty() {
        return Err(NormalFormError::EmptyWitness);
    }
    if !e.substitute_check(witness) {
        return Err(NormalFormError::NotASolution(witness.clone()));
    }
    let covering = alphabet.extended_with(e.letters().into_iter().chain(witness.letters()));
    let alphabet = normalize_alphabet(witness, &covering)?;

    let mut current = e.clone();
    let mut rewrites = Vec::new();
    if current.u()[0].len() > current.v()[0].len() {
        let next = current.swapped();
        rewrites.push(step(RewriteRule::Swap, 0, &current, &next));
        current = next;
    }
    // Each merge or overlap shortens the equation; each rotation keeps the
    // length and pushes the first unbalanced index right.
    while let Some((rule, index, next)) = rewrite_once(&current)? {
        let s = step(rule, index, &current, &next);
        let ok = match rule {
            RewriteRule::Merge | RewriteRule::Overlap => s.length_after < s.length_before,
            RewriteRule::Rotate => s.length_after == s.length_before && s.violating_after > s.violating_before,
            RewriteRule::Swap => true,
        };
        if !ok {
            return Err(NormalFormError::RewriteInvariant(format!("{s:?}")));
        }
        rewrites.push(s);
        current = next;
    }

    if current.length() > e.length() {
        return Err(NormalFormError::RewriteInvariant("result is longer than the input".into()));
    }
    if !current.substitute_check(witness) || !current.substitute_check(&Word::empty()) {
        return Err(NormalFormError::RewriteInvariant("a known solution was lost".into()));
    }
    Ok(NormalFormEquation { base: current, witness: witness.clone(), alphabet, rewrites })
}

/// Normal form of `e` built from its own solutions: shifts by the shortest
/// solution and uses the next one as the witness.
pub fn normal_form_of(e: &OneVarEquation, alphabet: &Alphabet) -> Result<NormalFormEquation, NormalFormError> {
    let aligned = e.align()?;
    let members = classify(e).members_up_to(default_bound(e));
    let [x0, x1, ..] = members.as_slice() else {
        return Err(NormalFormError::TooFewSolutions);
    };
    let shifted = shift_to_empty(&aligned, x0)?;
    let witness = x0.left_quotient(x1).ok_or_else(|| NormalFormError::NotASolution(x1.clone()))?;
    to_normal_form(&shifted, &witness, alphabet)
}

fn step(rule: RewriteRule, index: usize, before: &AlignedEquation, after: &AlignedEquation) -> RewriteStep {
    RewriteStep {
        rule,
        index,
        before: before.to_string(),
        after: after.to_string(),
        length_before: before.length(),
        length_after: after.length(),
        violating_before: first_unbalanced(before),
        violating_after: first_unbalanced(after),
    }
}

/// Applies the first applicable rule in the order merge, overlap, rotate.
fn rewrite_once(e: &AlignedEquation) -> Result<Option<(RewriteRule, usize, AlignedEquation)>, NormalFormError> {
    let n = e.n();
    let (u, v) = (e.u(), e.v());
    let j = first_unbalanced(e);

    if j < n && e.prefix_u(j) == e.prefix_v(j) {
        if n == 1 {
            // Both halves would be constant: the equation is trivial.
            return Err(NormalFormError::Trivial);
        }
        let merge = |blocks: &[Word]| -> Vec<Word> {
            let mut out = blocks[..j].to_vec();
            out.push(blocks[j].concat(&blocks[j + 1]));
            out.extend_from_slice(&blocks[j + 2..]);
            out
        };
        return Ok(Some((RewriteRule::Merge, j, AlignedEquation::new(merge(u), merge(v))?)));
    }

    for i in 0..=n {
        let (before_u, before_v) = (e.prefix_u_before(i), e.prefix_v_before(i));
        let (through_u, through_v) = (e.prefix_u(i), e.prefix_v(i));
        if through_u > before_v && before_u <= before_v && through_u <= through_v {
            let p_len = before_v - before_u;
            let q = u[i].suffix(u[i].len() - p_len);
            if !q.is_prefix_of(&v[i]) {
                return Err(NormalFormError::OverlapMismatch { index: i });
            }
            let mut nu = u.to_vec();
            let mut nv = v.to_vec();
            nu[i] = u[i].prefix(p_len);
            nv[i] = v[i].suffix(v[i].len() - q.len());
            return Ok(Some((RewriteRule::Overlap, i, AlignedEquation::new(nu, nv)?)));
        }
    }

    if j < n && e.prefix_u(j) > e.prefix_v(j) {
        let p_len = e.prefix_v(j) - e.prefix_u_before(j);
        let (p, q) = (u[j].prefix(p_len), u[j].suffix(u[j].len() - p_len));
        let mut nu = u[..j].to_vec();
        nu.push(p);
        nu.extend_from_slice(&v[j + 1..]);
        let mut nv = v[..j].to_vec();
        nv.push(v[j].concat(&q));
        nv.extend_from_slice(&u[j + 1..]);
        return Ok(Some((RewriteRule::Rotate, j, AlignedEquation::new(nu, nv)?)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::classify;
    use crate::SolutionSet;

    fn aligned(s: &str) -> AlignedEquation {
        AlignedEquation::parse(s).unwrap()
    }

    fn pm() -> Alphabet {
        Alphabet::from_ints(&[('a', 1), ('b', -1)]).unwrap()
    }

    #[test]
    fn shifting_moves_solutions() {
        let e = aligned("XXbaaba = aabaXbX");
        let shifted = shift_to_empty(&e, &"a".into()).unwrap();
        assert_eq!(classify(&shifted.to_equation()), SolutionSet::finite(vec![Word::empty(), "aba".into()]));
        let e = aligned("Xab = abX");
        assert_eq!(shift_to_empty(&e, &Word::empty()).unwrap(), e);
        assert_eq!(shift_to_empty(&e, &"a".into()), Err(NormalFormError::NotASolution("a".into())));
    }

    #[test]
    fn condition_checks() {
        let r = check_normal_form(&aligned("XaXbab = abaXbX"), &"ab".into(), &pm());
        assert!(r.all_hold());
        let r = check_normal_form(&aligned("Xab = abX"), &"ab".into(), &pm());
        assert!(r.all_hold());
        let r = check_normal_form(&aligned("abX = Xab"), &"ab".into(), &pm());
        assert!(!r.n2);
        assert_eq!(r.n2_failure, Some(0));
    }

    #[test]
    fn already_normal_equations_are_kept() {
        let e = aligned("XaXbab = abaXbX");
        let nf = to_normal_form(&e, &"ab".into(), &pm()).unwrap();
        assert_eq!(nf.base, e);
        assert!(nf.rewrites.is_empty());
        assert_eq!(nf.alphabet, pm());

        let combined = aligned("X ab X abab X a X bab = ab X abab X aba X b X");
        let nf = to_normal_form(&combined, &"ab".into(), &Alphabet::default_for(*b"ab")).unwrap();
        assert_eq!(nf.base, combined);
        assert!(nf.report().all_hold());
        assert!(nf.alphabet.is_zero_sum(&"ab".into()).unwrap());
    }

    #[test]
    fn overlap_rule_undoes_an_inserted_overlap() {
        // (XaXbab, abaXbX) with q = ab inserted at block 2: u_2 = bab·ab, v_2 = ab.
        let e = aligned("XaXbabab = abaXbXab");
        let r = check_normal_form(&e, &"ab".into(), &pm());
        assert!(!r.n3);
        let nf = to_normal_form(&e, &"ab".into(), &pm()).unwrap();
        assert_eq!(nf.base, aligned("XaXbab = abaXbX"));
        assert!(nf.base.length() < e.length());
        assert_eq!(nf.rewrites[0].rule, RewriteRule::Overlap);
        assert_eq!(nf.rewrites[0].index, 2);
    }

    #[test]
    fn swapped_sides_are_reoriented() {
        let e = aligned("abaXbX = XaXbab");
        let nf = to_normal_form(&e, &"ab".into(), &pm()).unwrap();
        assert_eq!(nf.base, aligned("XaXbab = abaXbX"));
        assert_eq!(nf.rewrites[0].rule, RewriteRule::Swap);
    }

    #[test]
    fn merge_rule_on_the_worked_example() {
        let e = aligned("X ab X abab X a aba X b X = ab X X X abab a X a X bab");
        let nf = to_normal_form(&e, &"ab".into(), &pm()).unwrap();
        assert!(nf.report().all_hold(), "{}", nf.base);
        assert!(nf.base.length() <= e.length());
        assert!(nf.rewrites.iter().any(|s| s.rule == RewriteRule::Merge));
    }

    #[test]
    fn preconditions() {
        let e = aligned("XXbaaba = aabaXbX");
        assert_eq!(to_normal_form(&e, &"a".into(), &pm()), Err(NormalFormError::NoEmptySolution));
        let e = aligned("Xab = abX");
        assert_eq!(to_normal_form(&e, &Word::empty(), &pm()), Err(NormalFormError::EmptyWitness));
        assert_eq!(to_normal_form(&aligned("XaX = XaX"), &"a".into(), &pm()), Err(NormalFormError::Trivial));
    }
}
