//! Solving and classifying one-variable equations.
//!
//! For a fixed solution length `d` the two sides expand to the same number of
//! positions, and every aligned pair of positions must hold the same letter.
//! Propagating those equalities with a union-find over the `d` unknown slots
//! and the constant letters either forces a unique candidate word, or shows
//! that no solution of length `d` exists.

use serde::Serialize;
use thiserror::Error;

use crate::equation::{family_member, AlignedEquation, OneVarEquation, SolutionSet, Token};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("trivial equation: every word is a solution")]
    Trivial,
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FillStatus {
    Consistent,
    Contradictory,
    Underdetermined,
}

/// Result of propagating position equalities for one solution length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateFill {
    pub length: usize,
    pub slots: Vec<Option<u8>>,
    pub status: FillStatus,
}

impl CandidateFill {
    pub fn word(&self) -> Option<Word> {
        match self.status {
            FillStatus::Consistent => Some(Word::from_bytes(self.slots.iter().map(|s| s.unwrap_or(b'?')).collect())),
            _ => None,
        }
    }
}

const LETTERS: usize = 26;

/// Propagates the position constraints of `eq` for solutions of length `d`.
pub fn fill_for_length(eq: &OneVarEquation, d: usize) -> CandidateFill {
    let contradictory = || CandidateFill { length: d, slots: vec![None; d], status: FillStatus::Contradictory };
    let expanded = |side: &[Token]| -> usize { side.iter().map(|t| if *t == Token::Var { d } else { 1 }).sum() };
    if expanded(&eq.lhs) != expanded(&eq.rhs) {
        return contradictory();
    }

    // Nodes 0..d are the slots of x, nodes d..d+26 the letters.
    let mut uf = UnionFind::new(d + LETTERS);
    let nodes = |side: &[Token]| -> Vec<usize> {
        let mut out = Vec::new();
        for t in side {
            match t {
                Token::Var => out.extend(0..d),
                Token::Letter(c) => out.push(d + (c - b'a') as usize),
            }
        }
        out
    };
    for (a, b) in nodes(&eq.lhs).into_iter().zip(nodes(&eq.rhs)) {
        uf.union(a, b);
    }

    let mut class_letter: Vec<Option<u8>> = vec![None; d + LETTERS];
    for c in 0..LETTERS {
        let root = uf.find(d + c);
        match class_letter[root] {
            Some(prev) if prev != b'a' + c as u8 => return contradictory(),
            _ => class_letter[root] = Some(b'a' + c as u8),
        }
    }
    // Singleton letter classes above are harmless: a letter that never occurs
    // cannot share a class with a slot.
    let slots: Vec<Option<u8>> = (0..d).map(|i| class_letter[uf.find(i)]).collect();
    let status = if slots.iter().all(Option::is_some) { FillStatus::Consistent } else { FillStatus::Underdetermined };
    CandidateFill { length: d, slots, status }
}

/// The unique solution word of length `d`, if there is one.
pub fn candidate_for_length(eq: &OneVarEquation, d: usize) -> Option<Word> {
    fill_for_length(eq, d).word().filter(|x| eq.substitute_check(x))
}

/// All solution words of length at most `bound`, shortest first.
pub fn enumerate_solutions(e: &AlignedEquation, bound: usize) -> Result<Vec<Word>, SolverError> {
    if e.is_trivial() {
        return Err(SolverError::Trivial);
    }
    let eq = e.to_equation();
    Ok((0..=bound).filter_map(|d| candidate_for_length(&eq, d)).collect())
}

/// Default enumeration bound: the total token length of the equation.
pub fn default_bound(eq: &OneVarEquation) -> usize {
    eq.length()
}

/// Classifies the solution set of `eq` with the default enumeration bound.
pub fn classify(eq: &OneVarEquation) -> SolutionSet {
    classify_with_bound(eq, default_bound(eq))
}

pub fn classify_with_bound(eq: &OneVarEquation, bound: usize) -> SolutionSet {
    if eq.is_trivial() {
        return SolutionSet::All;
    }
    let (lv, rv) = (eq.lhs_vars(), eq.rhs_vars());
    let (lc, rc) = (eq.lhs_constants(), eq.rhs_constants());
    if lv != rv {
        // lc + lv·d = rc + rv·d has at most one solution d.
        let (num, den) = (rc as i64 - lc as i64, lv as i64 - rv as i64);
        let forced = (num % den == 0 && num / den >= 0).then(|| (num / den) as usize);
        let solutions = forced.and_then(|d| candidate_for_length(eq, d)).into_iter().collect();
        return SolutionSet::finite(solutions);
    }
    if lv == 0 || lc != rc {
        return SolutionSet::finite(Vec::new());
    }
    let solutions: Vec<Word> = (0..=bound).filter_map(|d| candidate_for_length(eq, d)).collect();
    match extract_family(eq, &solutions) {
        Some((p, q)) => SolutionSet::Infinite { p, q },
        None => SolutionSet::finite(solutions),
    }
}

/// Tries to read `[(pq)^* p]` off the two shortest solutions `p` and `pqp`.
///
/// The family is accepted when `pq` is primitive, `(pq)^i p` solves the
/// equation for `i ≤ 3`, and every enumerated solution is a family member.
/// Two members of `[(pq)^+ p]` force the whole of it.
fn extract_family(eq: &OneVarEquation, solutions: &[Word]) -> Option<(Word, Word)> {
    let (p, y) = match solutions {
        [p, y, ..] => (p, y),
        _ => return None,
    };
    if y.len() < 2 * p.len() || !p.is_prefix_of(y) || !p.is_suffix_of(y) {
        return None;
    }
    let q = Word::from_bytes(y.as_bytes()[p.len()..y.len() - p.len()].to_vec());
    let pq = p.concat(&q);
    if pq.is_empty() || !pq.is_primitive() {
        return None;
    }
    if !(0..=3).all(|i| eq.substitute_check(&family_member(p, &q, i))) {
        return None;
    }
    let family = SolutionSet::Infinite { p: p.clone(), q: q.clone() };
    solutions.iter().all(|s| family.contains(s)).then(|| (p.clone(), q))
}

/// Brute-force reference: checks every word over `letters` up to `max_len`.
pub mod oracle {
    use super::*;

    /// All solutions over `letters` of length at most `max_len`, shortlex.
    pub fn brute_force(eq: &OneVarEquation, letters: &[u8], max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let (lv, rv) = (eq.lhs_vars(), eq.rhs_vars());
        let (lc, rc) = (eq.lhs_constants(), eq.rhs_constants());
        for d in 0..=max_len {
            if lc + lv * d != rc + rv * d {
                continue;
            }
            for_each_word(letters, d, |x| {
                if crate::equation::sides_agree(&eq.lhs, &eq.rhs, x) {
                    out.push(Word::from_bytes(x.to_vec()));
                }
            });
        }
        out
    }

    /// Calls `f` on every word of length `d` over `letters`, in lexicographic
    /// order of `letters`.
    pub fn for_each_word(letters: &[u8], d: usize, mut f: impl FnMut(&[u8])) {
        if letters.is_empty() {
            if d == 0 {
                f(&[]);
            }
            return;
        }
        let mut idx = vec![0usize; d];
        let mut buf: Vec<u8> = vec![letters[0]; d];
        loop {
            f(&buf);
            let mut pos = d;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < letters.len() {
                    buf[pos] = letters[idx[pos]];
                    break;
                }
                idx[pos] = 0;
                buf[pos] = letters[0];
            }
        }
    }

    #[derive(Debug, Clone, PartialEq, Eq, Serialize)]
    pub struct Disagreement {
        pub word: Word,
        pub oracle_says_solution: bool,
    }

    /// Compares membership in `set` against brute force for every word over
    /// `letters` of length at most `max_len`.
    pub fn check(eq: &OneVarEquation, set: &SolutionSet, letters: &[u8], max_len: usize) -> Result<(), Disagreement> {
        let truth = brute_force(eq, letters, max_len);
        let over_letters = |w: &Word| w.as_bytes().iter().all(|c| letters.contains(c));
        match set {
            SolutionSet::All => {
                let total: usize = (0..=max_len).map(|d| letters.len().pow(d as u32)).sum();
                if truth.len() == total {
                    return Ok(());
                }
                let mut missing = None;
                'outer: for d in 0..=max_len {
                    let mut found = None;
                    for_each_word(letters, d, |x| {
                        if found.is_none() && !truth.iter().any(|t| t.as_bytes() == x) {
                            found = Some(Word::from_bytes(x.to_vec()));
                        }
                    });
                    if found.is_some() {
                        missing = found;
                        break 'outer;
                    }
                }
                Err(Disagreement { word: missing.unwrap_or_default(), oracle_says_solution: false })
            }
            _ => {
                let claimed: Vec<Word> = set.members_up_to(max_len).into_iter().filter(over_letters).collect();
                if let Some(w) = truth.iter().find(|w| !set.contains(w)) {
                    return Err(Disagreement { word: w.clone(), oracle_says_solution: true });
                }
                if let Some(w) = claimed.iter().find(|w| !truth.contains(w)) {
                    return Err(Disagreement { word: w.clone(), oracle_says_solution: false });
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(s: &str) -> OneVarEquation {
        s.parse().unwrap()
    }

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| Word::from(*w)).collect()
    }

    const THREE: &str = "X aXb X aabb ab aXb abaabbab = abaabbab aXb ab aabb X aXb X";

    #[test]
    fn candidates_per_length() {
        let e = eq("XaXbab = abaXbX");
        assert_eq!(candidate_for_length(&e, 2), Some("ab".into()));
        assert_eq!(candidate_for_length(&e, 1), None);
        // x = a is forced by the first column, which then clashes a with b.
        assert_eq!(fill_for_length(&e, 1).status, FillStatus::Contradictory);
        let e = eq("XXbaaba = aabaXbX");
        assert_eq!(candidate_for_length(&e, 4), Some("aaba".into()));
    }

    #[test]
    fn contradictory_fill() {
        let e = eq("Xab = Xba");
        assert_eq!(fill_for_length(&e, 3).status, FillStatus::Contradictory);
    }

    #[test]
    fn trivial_fill_is_underdetermined() {
        let e = eq("XaX = XaX");
        assert_eq!(fill_for_length(&e, 2).status, FillStatus::Underdetermined);
    }

    #[test]
    fn enumeration() {
        let e = eq("Xab = abX").align().unwrap();
        assert_eq!(enumerate_solutions(&e, 7).unwrap(), words(&["", "ab", "abab", "ababab"]));
        let e = eq("XaXbab = abaXbX").align().unwrap();
        assert_eq!(enumerate_solutions(&e, 20).unwrap(), words(&["", "ab"]));
        let t = eq("X = X").align().unwrap();
        assert_eq!(enumerate_solutions(&t, 2), Err(SolverError::Trivial));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&eq("Xab = abX")), SolutionSet::Infinite { p: Word::empty(), q: "ab".into() });
        assert_eq!(classify(&eq("XaXbab = abaXbX")), SolutionSet::finite(words(&["", "ab"])));
        assert_eq!(classify(&eq("XXbaaba = aabaXbX")), SolutionSet::finite(words(&["a", "aaba"])));
        assert_eq!(classify(&eq(THREE)), SolutionSet::finite(words(&["", "ab", "abaabbab"])));
        // Length forces |x| = 1; x = a gives "aa" ≠ "ab".
        assert_eq!(classify(&eq("Xa = ab")), SolutionSet::finite(vec![]));
        assert_eq!(classify(&eq("Xb = ab")), SolutionSet::finite(words(&["a"])));
        assert_eq!(classify(&eq("X = X")), SolutionSet::All);
        assert_eq!(classify(&eq("a = b")), SolutionSet::finite(vec![]));
        assert_eq!(classify(&eq("Xa = aXb")), SolutionSet::finite(vec![]));
    }

    #[test]
    fn families_with_nonempty_base() {
        // x = (ab)^i a
        let set = classify(&eq("Xba = abX"));
        assert_eq!(set, SolutionSet::Infinite { p: "a".into(), q: "b".into() });
        let set = classify(&eq("Xa = aX"));
        assert_eq!(set, SolutionSet::Infinite { p: Word::empty(), q: "a".into() });
    }

    #[test]
    fn oracle_agrees_on_examples() {
        for text in ["Xab = abX", "XaXbab = abaXbX", "XXbaaba = aabaXbX", "Xa = ab", "X = X", THREE] {
            let e = eq(text);
            let set = classify(&e);
            assert_eq!(oracle::check(&e, &set, b"ab", 8), Ok(()), "{text}");
        }
    }

    #[test]
    fn oracle_reports_disagreements() {
        let e = eq("Xab = abX");
        let wrong = SolutionSet::finite(words(&["", "ab"]));
        let err = oracle::check(&e, &wrong, b"ab", 8).unwrap_err();
        assert_eq!(err, oracle::Disagreement { word: "abab".into(), oracle_says_solution: true });
    }

    #[test]
    fn word_enumeration_order() {
        let mut seen = Vec::new();
        oracle::for_each_word(b"ab", 2, |w| seen.push(w.to_vec()));
        assert_eq!(seen, vec![b"aa".to_vec(), b"ab".to_vec(), b"ba".to_vec(), b"bb".to_vec()]);
    }
}
