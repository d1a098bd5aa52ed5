//! One-variable word equations with constants.
//!
//! Text syntax: `side = side`, where a side is a string over lowercase
//! letters and the variable `X`. Whitespace is ignored. The pair notation
//! `(side, side)` is accepted as well.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::Word;

pub const VARIABLE: u8 = b'X';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("parse error at column {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("sides have different numbers of X ({lhs} vs {rhs}); at most one solution")]
    UnequalOccurrences { lhs: usize, rhs: usize },
    #[error("sides have different constant lengths ({lhs} vs {rhs}); no solution")]
    UnequalConstantLength { lhs: usize, rhs: usize },
    #[error("equation has no occurrence of X")]
    NoVariable,
    #[error("aligned equation needs matching u and v blocks (got {u} and {v})")]
    BlockMismatch { u: usize, v: usize },
    #[error("constant parts disagree at token {position}; the equation has no solution")]
    ConstantMismatch { position: usize },
    #[error("cannot combine an empty system")]
    EmptySystem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Var,
    Letter(u8),
}

impl Token {
    fn as_char(self) -> char {
        match self {
            Token::Var => VARIABLE as char,
            Token::Letter(c) => c as char,
        }
    }
}

/// A pair of token sequences `(U, V)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneVarEquation {
    pub lhs: Vec<Token>,
    pub rhs: Vec<Token>,
}

/// Token sequence of a side, rendered as a string.
fn side_string(side: &[Token]) -> String {
    side.iter().map(|t| t.as_char()).collect()
}

fn var_count(side: &[Token]) -> usize {
    side.iter().filter(|t| matches!(t, Token::Var)).count()
}

/// Bytes of `side` with `X` replaced by `x`.
pub(crate) fn image(side: &[Token], x: &[u8]) -> Vec<u8> {
    Cursor::new(side, x).collect()
}

/// Compares the images of two sides under `X ↦ x` without allocating.
pub(crate) fn sides_agree(lhs: &[Token], rhs: &[Token], x: &[u8]) -> bool {
    let len = |side: &[Token]| {
        side.iter()
            .map(|t| match t {
                Token::Var => x.len(),
                Token::Letter(_) => 1,
            })
            .sum::<usize>()
    };
    if len(lhs) != len(rhs) {
        return false;
    }
    let mut left = Cursor::new(lhs, x);
    let mut right = Cursor::new(rhs, x);
    loop {
        match (left.next(), right.next()) {
            (None, None) => return true,
            (Some(a), Some(b)) if a == b => {}
            _ => return false,
        }
    }
}

/// Streaming reader over a side with `X` substituted.
struct Cursor<'a> {
    side: &'a [Token],
    x: &'a [u8],
    token: usize,
    inner: usize,
}

impl<'a> Cursor<'a> {
    fn new(side: &'a [Token], x: &'a [u8]) -> Self {
        Cursor { side, x, token: 0, inner: 0 }
    }
}

impl Iterator for Cursor<'_> {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        loop {
            match *self.side.get(self.token)? {
                Token::Letter(c) => {
                    self.token += 1;
                    return Some(c);
                }
                Token::Var => {
                    if self.inner < self.x.len() {
                        self.inner += 1;
                        return Some(self.x[self.inner - 1]);
                    }
                    self.inner = 0;
                    self.token += 1;
                }
            }
        }
    }
}

impl OneVarEquation {
    pub fn new(lhs: Vec<Token>, rhs: Vec<Token>) -> Self {
        OneVarEquation { lhs, rhs }
    }

    pub fn parse(text: &str) -> Result<Self, EquationError> {
        text.parse()
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn lhs_vars(&self) -> usize {
        var_count(&self.lhs)
    }

    pub fn rhs_vars(&self) -> usize {
        var_count(&self.rhs)
    }

    pub fn lhs_constants(&self) -> usize {
        self.lhs.len() - self.lhs_vars()
    }

    pub fn rhs_constants(&self) -> usize {
        self.rhs.len() - self.rhs_vars()
    }

    /// Total number of tokens on both sides.
    pub fn length(&self) -> usize {
        self.lhs.len() + self.rhs.len()
    }

    pub fn letters(&self) -> BTreeSet<u8> {
        self.lhs
            .iter()
            .chain(&self.rhs)
            .filter_map(|t| match t {
                Token::Letter(c) => Some(*c),
                Token::Var => None,
            })
            .collect()
    }

    pub fn substitute_lhs(&self, x: &Word) -> Word {
        Word::from_bytes(image(&self.lhs, x.as_bytes()))
    }

    pub fn substitute_rhs(&self, x: &Word) -> Word {
        Word::from_bytes(image(&self.rhs, x.as_bytes()))
    }

    /// Whether `[x]` is a solution.
    pub fn substitute_check(&self, x: &Word) -> bool {
        sides_agree(&self.lhs, &self.rhs, x.as_bytes())
    }

    pub fn swapped(&self) -> Self {
        OneVarEquation::new(self.rhs.clone(), self.lhs.clone())
    }

    /// Reads the equation in aligned form `(u_0 X u_1 ⋯ X u_n, v_0 X v_1 ⋯ X v_n)`.
    pub fn align(&self) -> Result<AlignedEquation, EquationError> {
        let (lv, rv) = (self.lhs_vars(), self.rhs_vars());
        if lv != rv {
            return Err(EquationError::UnequalOccurrences { lhs: lv, rhs: rv });
        }
        if lv == 0 {
            return Err(EquationError::NoVariable);
        }
        let (lc, rc) = (self.lhs_constants(), self.rhs_constants());
        if lc != rc {
            return Err(EquationError::UnequalConstantLength { lhs: lc, rhs: rc });
        }
        AlignedEquation::new(blocks(&self.lhs), blocks(&self.rhs))
    }
}

/// Splits a side at its `X` tokens into constant blocks.
fn blocks(side: &[Token]) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for t in side {
        match t {
            Token::Var => out.push(Vec::new()),
            Token::Letter(c) => out.last_mut().expect("nonempty").push(*c),
        }
    }
    out.into_iter().map(Word::from_bytes).collect()
}

fn join_blocks(blocks: &[Word]) -> Vec<Token> {
    let mut out = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            out.push(Token::Var);
        }
        out.extend(b.as_bytes().iter().map(|&c| Token::Letter(c)));
    }
    out
}

impl FromStr for OneVarEquation {
    type Err = EquationError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |position: usize, message: &str| EquationError::Parse { position, message: message.to_string() };
        // Column positions are 1-based character indices into the input.
        let chars: Vec<(usize, char)> =
            text.chars().enumerate().map(|(i, c)| (i + 1, c)).filter(|(_, c)| !c.is_whitespace()).collect();
        let mut body: &[(usize, char)] = &chars;
        if let (Some(&(_, '(')), Some(&(_, ')'))) = (body.first(), body.last()) {
            body = &body[1..body.len() - 1];
        }
        let separators: Vec<usize> =
            body.iter().enumerate().filter(|(_, (_, c))| *c == '=' || *c == ',').map(|(i, _)| i).collect();
        let split = match separators.as_slice() {
            [] => return Err(err(text.chars().count() + 1, "missing '='")),
            [one] => *one,
            [_, second, ..] => return Err(err(body[*second].0, "more than one '='")),
        };
        let side = |part: &[(usize, char)], sep_col: usize| -> Result<Vec<Token>, EquationError> {
            if part.is_empty() {
                return Err(err(sep_col, "empty side"));
            }
            part.iter()
                .map(|&(pos, c)| match c {
                    'X' => Ok(Token::Var),
                    c if c.is_ascii_lowercase() => Ok(Token::Letter(c as u8)),
                    _ => Err(err(pos, &format!("unexpected character '{c}'"))),
                })
                .collect()
        };
        let sep_col = body[split].0;
        Ok(OneVarEquation::new(side(&body[..split], sep_col)?, side(&body[split + 1..], sep_col)?))
    }
}

impl fmt::Display for OneVarEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", side_string(&self.lhs), side_string(&self.rhs))
    }
}

/// An equation `(u_0 X u_1 ⋯ X u_n, v_0 X v_1 ⋯ X v_n)` with `n ≥ 1` and
/// `|u_0 ⋯ u_n| = |v_0 ⋯ v_n|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlignedEquation {
    u: Vec<Word>,
    v: Vec<Word>,
}

impl AlignedEquation {
    pub fn new(u: Vec<Word>, v: Vec<Word>) -> Result<Self, EquationError> {
        if u.len() != v.len() {
            return Err(EquationError::BlockMismatch { u: u.len(), v: v.len() });
        }
        if u.len() < 2 {
            return Err(EquationError::NoVariable);
        }
        let lhs: usize = u.iter().map(Word::len).sum();
        let rhs: usize = v.iter().map(Word::len).sum();
        if lhs != rhs {
            return Err(EquationError::UnequalConstantLength { lhs, rhs });
        }
        Ok(AlignedEquation { u, v })
    }

    pub fn parse(text: &str) -> Result<Self, EquationError> {
        OneVarEquation::parse(text)?.align()
    }

    /// Number of `X` occurrences per side.
    pub fn n(&self) -> usize {
        self.u.len() - 1
    }

    pub fn u(&self) -> &[Word] {
        &self.u
    }

    pub fn v(&self) -> &[Word] {
        &self.v
    }

    pub fn into_blocks(self) -> (Vec<Word>, Vec<Word>) {
        (self.u, self.v)
    }

    /// Total token length `|U| + |V|`.
    pub fn length(&self) -> usize {
        2 * self.n() + 2 * self.constant_length()
    }

    /// `|u_0 ⋯ u_n|`, equal to `|v_0 ⋯ v_n|`.
    pub fn constant_length(&self) -> usize {
        self.u.iter().map(Word::len).sum()
    }

    /// `|u_0 ⋯ u_i|` for `i` in `0..=n`; `prefix_u(-1)` is spelled `0` by callers.
    pub fn prefix_u(&self, i: usize) -> usize {
        self.u[..=i].iter().map(Word::len).sum()
    }

    pub fn prefix_v(&self, i: usize) -> usize {
        self.v[..=i].iter().map(Word::len).sum()
    }

    /// `|u_0 ⋯ u_{i-1}|`, zero for `i = 0`.
    pub fn prefix_u_before(&self, i: usize) -> usize {
        self.u[..i].iter().map(Word::len).sum()
    }

    pub fn prefix_v_before(&self, i: usize) -> usize {
        self.v[..i].iter().map(Word::len).sum()
    }

    pub fn u_concat(&self) -> Word {
        Word::from_bytes(self.u.iter().flat_map(|w| w.as_bytes().iter().copied()).collect())
    }

    pub fn v_concat(&self) -> Word {
        Word::from_bytes(self.v.iter().flat_map(|w| w.as_bytes().iter().copied()).collect())
    }

    pub fn to_equation(&self) -> OneVarEquation {
        OneVarEquation::new(join_blocks(&self.u), join_blocks(&self.v))
    }

    pub fn is_trivial(&self) -> bool {
        self.u == self.v
    }

    pub fn substitute_check(&self, x: &Word) -> bool {
        let eq = self.to_equation();
        eq.substitute_check(x)
    }

    pub fn swapped(&self) -> Self {
        AlignedEquation { u: self.v.clone(), v: self.u.clone() }
    }

    pub fn letters(&self) -> BTreeSet<u8> {
        self.u.iter().chain(&self.v).flat_map(|w| w.as_bytes().iter().copied()).collect()
    }
}

impl fmt::Display for AlignedEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_equation().fmt(f)
    }
}

/// Serializes an equation through its `Display` text.
pub(crate) fn serialize_display<S: serde::Serializer>(e: &AlignedEquation, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

/// Splits an equation into the system of components obtained by cutting at
/// every position where both sides have consumed the same number of `X`s
/// and the same number of constants.
///
/// Trivial components are dropped and every remaining component is oriented
/// so that its right-hand side has the longer constant prefix before the
/// first `X`.
pub fn split_by_alignment(e: &AlignedEquation) -> Result<Vec<AlignedEquation>, EquationError> {
    let eq = e.to_equation();
    let (lhs, rhs) = (&eq.lhs, &eq.rhs);
    debug_assert_eq!(lhs.len(), rhs.len());
    let mut components = Vec::new();
    let (mut start, mut lx, mut rx) = (0, 0, 0);
    for t in 0..lhs.len() {
        lx += usize::from(lhs[t] == Token::Var);
        rx += usize::from(rhs[t] == Token::Var);
        if lx != rx {
            continue;
        }
        let (l, r) = (&lhs[start..=t], &rhs[start..=t]);
        if l != r {
            if var_count(l) == 0 {
                let offset = l.iter().zip(r).position(|(a, b)| a != b).unwrap_or(0);
                return Err(EquationError::ConstantMismatch { position: start + offset });
            }
            let lead = |s: &[Token]| s.iter().take_while(|t| **t != Token::Var).count();
            let piece = OneVarEquation::new(l.to_vec(), r.to_vec());
            let piece = if lead(l) > lead(r) { piece.swapped() } else { piece };
            components.push(piece.align()?);
        }
        start = t + 1;
    }
    Ok(components)
}

/// Concatenates the left-hand sides and the right-hand sides of a system.
pub fn combine_system(system: &[AlignedEquation]) -> Result<AlignedEquation, EquationError> {
    let (first, rest) = system.split_first().ok_or(EquationError::EmptySystem)?;
    let mut lhs = first.to_equation().lhs;
    let mut rhs = first.to_equation().rhs;
    for e in rest {
        let eq = e.to_equation();
        lhs.extend(eq.lhs);
        rhs.extend(eq.rhs);
    }
    OneVarEquation::new(lhs, rhs).align()
}

/// Classified solution set of a one-variable equation.
///
/// `Infinite { p, q }` denotes `{(pq)^i p : i ≥ 0}` with `pq` primitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SolutionSet {
    All,
    Finite { solutions: Vec<Word> },
    Infinite { p: Word, q: Word },
}

impl SolutionSet {
    /// Builds a finite set, sorting by (length, lexicographic) and removing
    /// duplicates.
    pub fn finite(mut solutions: Vec<Word>) -> Self {
        solutions.sort_by(Word::shortlex_cmp);
        solutions.dedup();
        SolutionSet::Finite { solutions }
    }

    pub fn contains(&self, x: &Word) -> bool {
        match self {
            SolutionSet::All => true,
            SolutionSet::Finite { solutions } => solutions.contains(x),
            SolutionSet::Infinite { p, q } => {
                let period = p.len() + q.len();
                if x.len() < p.len() || !(x.len() - p.len()).is_multiple_of(period) {
                    return false;
                }
                let i = (x.len() - p.len()) / period;
                &family_member(p, q, i) == x
            }
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, SolutionSet::Finite { .. })
    }

    /// Members of length at most `max_len` (for `All`, only `ε`).
    pub fn members_up_to(&self, max_len: usize) -> Vec<Word> {
        match self {
            SolutionSet::All => vec![Word::empty()],
            SolutionSet::Finite { solutions } => solutions.iter().filter(|w| w.len() <= max_len).cloned().collect(),
            SolutionSet::Infinite { p, q } => {
                (0..).map(|i| family_member(p, q, i)).take_while(|w| w.len() <= max_len).collect()
            }
        }
    }

    /// The first `count` members of an infinite family, or every member of a
    /// finite set. Used where lemma statements quantify over the solutions.
    pub fn sample(&self, count: usize) -> Vec<Word> {
        match self {
            SolutionSet::All => vec![Word::empty()],
            SolutionSet::Finite { solutions } => solutions.clone(),
            SolutionSet::Infinite { p, q } => (0..count).map(|i| family_member(p, q, i)).collect(),
        }
    }

    /// Number of solutions, if finite.
    pub fn finite_len(&self) -> Option<usize> {
        match self {
            SolutionSet::Finite { solutions } => Some(solutions.len()),
            _ => None,
        }
    }
}

/// `(pq)^i p`.
pub fn family_member(p: &Word, q: &Word, i: usize) -> Word {
    p.concat(q).pow(i).concat(p)
}

impl fmt::Display for SolutionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionSet::All => f.write_str("all words"),
            SolutionSet::Finite { solutions } => {
                let items: Vec<String> = solutions.iter().map(Word::to_string).collect();
                write!(f, "finite {{{}}}", items.join(", "))
            }
            SolutionSet::Infinite { p, q } => write!(f, "infinite family p={p}, q={q}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(s: &str) -> OneVarEquation {
        s.parse().unwrap()
    }

    fn aligned(s: &str) -> AlignedEquation {
        AlignedEquation::parse(s).unwrap()
    }

    #[test]
    fn parses_the_example_equations() {
        let e = eq("Xab = abX");
        assert_eq!(e.lhs, vec![Token::Var, Token::Letter(b'a'), Token::Letter(b'b')]);
        assert_eq!(e.rhs, vec![Token::Letter(b'a'), Token::Letter(b'b'), Token::Var]);
        let t = eq("X = X");
        assert!(t.is_trivial());
        let two = eq("XaXbab = abaXbX");
        assert_eq!((two.lhs_vars(), two.rhs_vars()), (2, 2));
        let paren = eq("(X aXb X aabb ab aXb abaabbab, abaabbab aXb ab aabb X aXb X)");
        assert_eq!(paren.lhs_vars(), 4);
        assert_eq!(paren.to_string(), "XaXbXaabbabaXbabaabbab = abaabbabaXbabaabbXaXbX");
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(
            "Xab abX".parse::<OneVarEquation>(),
            Err(EquationError::Parse { position: 8, message: "missing '='".into() })
        );
        assert_eq!(
            "Xa1 = aX".parse::<OneVarEquation>(),
            Err(EquationError::Parse { position: 3, message: "unexpected character '1'".into() })
        );
        assert_eq!(
            " = aX".parse::<OneVarEquation>(),
            Err(EquationError::Parse { position: 2, message: "empty side".into() })
        );
        assert!(matches!("X = X = X".parse::<OneVarEquation>(), Err(EquationError::Parse { position: 7, .. })));
    }

    #[test]
    fn substitution() {
        let e = eq("XaXbab = abaXbX");
        assert!(e.substitute_check(&"ab".into()));
        assert_eq!(e.substitute_lhs(&"ab".into()), Word::from("abaabbab"));
        assert!(!e.substitute_check(&"a".into()));
        assert_eq!(e.substitute_lhs(&"a".into()), Word::from("aaabab"));
        assert_eq!(e.substitute_rhs(&"a".into()), Word::from("abaaba"));
        assert!(eq("Xab = abX").substitute_check(&Word::empty()));
    }

    #[test]
    fn alignment() {
        let a = aligned("Xab = abX");
        assert_eq!(a.u(), &[Word::empty(), "ab".into()]);
        assert_eq!(a.v(), &["ab".into(), Word::empty()]);
        assert_eq!(a.n(), 1);
        let b = aligned("XXbaaba = aabaXbX");
        assert_eq!(b.u(), &[Word::empty(), Word::empty(), "baaba".into()]);
        assert_eq!(b.v(), &["aaba".into(), "b".into(), Word::empty()]);
        assert_eq!(eq("Xa = ab").align(), Err(EquationError::UnequalOccurrences { lhs: 1, rhs: 0 }));
        assert_eq!(eq("Xa = abX").align(), Err(EquationError::UnequalConstantLength { lhs: 1, rhs: 2 }));
    }

    #[test]
    fn splitting_the_worked_example() {
        let e = aligned("X ab X abab X a aba X b X = ab X X X abab a X a X bab");
        let parts = split_by_alignment(&e).unwrap();
        let texts: Vec<String> = parts.iter().map(ToString::to_string).collect();
        assert_eq!(texts, vec!["Xab = abX", "Xabab = ababX", "XaXbab = abaXbX"]);
        let combined = combine_system(&parts).unwrap();
        assert_eq!(combined, aligned("X ab X abab X a X bab = ab X abab X aba X b X"));
    }

    #[test]
    fn splitting_leaves_atomic_equations_alone() {
        let e = aligned("Xab = abX");
        assert_eq!(split_by_alignment(&e).unwrap(), vec![e.clone()]);
        let e = aligned("XaXbab = abaXbX");
        assert_eq!(split_by_alignment(&e).unwrap(), vec![e.clone()]);
    }

    #[test]
    fn splitting_detects_constant_clash() {
        let e = aligned("aX = bX");
        assert_eq!(split_by_alignment(&e), Err(EquationError::ConstantMismatch { position: 0 }));
    }

    #[test]
    fn combining() {
        let e = aligned("Xab = abX");
        assert_eq!(combine_system(std::slice::from_ref(&e)).unwrap(), e);
        let doubled = combine_system(&[e.clone(), e.clone()]).unwrap();
        assert_eq!(doubled, aligned("XabXab = abXabX"));
        for i in 0..4 {
            assert!(doubled.substitute_check(&Word::from("ab").pow(i)));
        }
        assert_eq!(combine_system(&[]), Err(EquationError::EmptySystem));
    }

    #[test]
    fn solution_set_json() {
        let inf = SolutionSet::Infinite { p: Word::empty(), q: "ab".into() };
        assert_eq!(serde_json::to_string(&inf).unwrap(), r#"{"kind":"infinite","p":"","q":"ab"}"#);
        let fin = SolutionSet::finite(vec!["ab".into(), Word::empty(), "ab".into()]);
        assert_eq!(serde_json::to_string(&fin).unwrap(), r#"{"kind":"finite","solutions":["","ab"]}"#);
        assert_eq!(serde_json::to_string(&SolutionSet::All).unwrap(), r#"{"kind":"all"}"#);
        let back: SolutionSet = serde_json::from_str(r#"{"kind":"infinite","p":"a","q":"b"}"#).unwrap();
        assert_eq!(back, SolutionSet::Infinite { p: "a".into(), q: "b".into() });
    }

    #[test]
    fn family_membership() {
        let fam = SolutionSet::Infinite { p: "a".into(), q: "b".into() };
        assert!(fam.contains(&"a".into()));
        assert!(fam.contains(&"aba".into()));
        assert!(fam.contains(&"ababa".into()));
        assert!(!fam.contains(&"ab".into()));
        assert!(!fam.contains(&"abb".into()));
        assert_eq!(fam.members_up_to(3), vec![Word::from("a"), Word::from("aba")]);
    }
}
