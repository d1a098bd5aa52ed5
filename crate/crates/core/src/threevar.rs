//! Constant-free equations over the variables `X, Y, Z`, their solutions as
//! morphisms into `{a, b}*`, independence of systems at a bounded image
//! length, and an exhaustive search for independent systems.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::words::Word;

pub const VARIABLES: [char; 3] = ['X', 'Y', 'Z'];
const LETTERS: [u8; 2] = *b"ab";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThreeVarError {
    #[error("parse error at column {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("equation '{0}' is trivial")]
    Trivial(String),
    #[error("equation '{0}' occurs twice")]
    Duplicate(String),
    #[error("morphism needs three images, got {0}")]
    ImageCount(usize),
    #[error("invalid image '{0}'")]
    InvalidImage(String),
}

/// A pair `(U, V)` of nonempty words over `X, Y, Z`, stored as indices 0..3.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstantFreeEquation {
    pub lhs: Vec<u8>,
    pub rhs: Vec<u8>,
}

fn var_word(side: &[u8]) -> String {
    side.iter().map(|&v| VARIABLES[v as usize]).collect()
}

impl ConstantFreeEquation {
    pub fn new(lhs: Vec<u8>, rhs: Vec<u8>) -> Self {
        ConstantFreeEquation { lhs, rhs }
    }

    /// Parses `XYZ = ZYX` or `(XYZ, ZYX)`; whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self, ThreeVarError> {
        let err = |position: usize, message: &str| ThreeVarError::Parse { position, message: message.into() };
        let trimmed = text.trim();
        let inner = match trimmed.strip_prefix('(') {
            Some(rest) => rest.strip_suffix(')').ok_or_else(|| err(trimmed.len(), "missing ')'"))?,
            None => trimmed,
        };
        let offset = text.find(inner).unwrap_or(0);
        let mut sides = vec![Vec::new()];
        for (i, c) in inner.char_indices() {
            match c {
                'X' | 'Y' | 'Z' => sides.last_mut().unwrap().push(c as u8 - b'X'),
                '=' | ',' if sides.len() == 1 => sides.push(Vec::new()),
                c if c.is_whitespace() => {}
                _ => return Err(err(offset + i + 1, &format!("unexpected '{c}'"))),
            }
        }
        let (Some(rhs), Some(lhs)) = (sides.pop(), sides.pop()) else {
            return Err(err(text.len(), "expected two sides"));
        };
        if lhs.is_empty() || rhs.is_empty() {
            return Err(err(text.len(), "sides must be nonempty"));
        }
        Ok(ConstantFreeEquation { lhs, rhs })
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn length(&self) -> usize {
        self.lhs.len() + self.rhs.len()
    }

    fn counts(side: &[u8]) -> [usize; 3] {
        let mut c = [0; 3];
        for &v in side {
            c[v as usize] += 1;
        }
        c
    }
}

impl fmt::Display for ConstantFreeEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", var_word(&self.lhs), var_word(&self.rhs))
    }
}

impl Serialize for ConstantFreeEquation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Images of `X, Y, Z`; serializes as `[x, y, z]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SolutionMorphism {
    pub images: [Word; 3],
}

impl SolutionMorphism {
    pub fn new(x: Word, y: Word, z: Word) -> Self {
        SolutionMorphism { images: [x, y, z] }
    }

    /// Parses `a,b,aba` or `(a, b, aba)`; `ε` or an empty field is the empty word.
    pub fn parse(text: &str) -> Result<Self, ThreeVarError> {
        let t = text.trim();
        let t = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t);
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(ThreeVarError::ImageCount(parts.len()));
        }
        let image = |s: &str| -> Result<Word, ThreeVarError> {
            if s == "ε" {
                return Ok(Word::empty());
            }
            Word::parse(s).map_err(|_| ThreeVarError::InvalidImage(s.to_string()))
        };
        Ok(SolutionMorphism::new(image(parts[0])?, image(parts[1])?, image(parts[2])?))
    }

    pub fn total_length(&self) -> usize {
        self.images.iter().map(Word::len).sum()
    }

    pub fn apply(&self, side: &[u8]) -> Word {
        let mut out = Vec::new();
        for &v in side {
            out.extend_from_slice(self.images[v as usize].as_bytes());
        }
        Word::from_bytes(out)
    }

    pub fn is_solution(&self, e: &ConstantFreeEquation) -> bool {
        let lens = self.images.each_ref().map(Word::len);
        let len = |side: &[u8]| -> usize {
            let c = ConstantFreeEquation::counts(side);
            (0..3).map(|i| c[i] * lens[i]).sum()
        };
        len(&e.lhs) == len(&e.rhs) && self.apply(&e.lhs) == self.apply(&e.rhs)
    }

    /// All images are powers of one word, checked by pairwise commutation.
    pub fn is_periodic(&self) -> bool {
        let [x, y, z] = &self.images;
        let commute = |p: &Word, q: &Word| p.concat(q) == q.concat(p);
        commute(x, y) && commute(x, z) && commute(y, z)
    }
}

impl fmt::Display for SolutionMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.images;
        write!(f, "({x}, {y}, {z})")
    }
}

/// `X ↦ (pq)^i p`, `Y ↦ (qp)^j q`, `Z ↦ (pq)^k p`, a solution of `XYZ = ZYX`.
pub fn xyz_zyx_family(p: &Word, q: &Word, i: usize, j: usize, k: usize) -> SolutionMorphism {
    let pq = p.concat(q);
    let qp = q.concat(p);
    SolutionMorphism::new(pq.pow(i).concat(p), qp.pow(j).concat(q), pq.pow(k).concat(p))
}

/// A set of distinct nontrivial equations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationSystem {
    pub equations: Vec<ConstantFreeEquation>,
}

impl EquationSystem {
    pub fn new(equations: Vec<ConstantFreeEquation>) -> Result<Self, ThreeVarError> {
        for (i, e) in equations.iter().enumerate() {
            if e.is_trivial() {
                return Err(ThreeVarError::Trivial(e.to_string()));
            }
            if equations[..i].contains(e) {
                return Err(ThreeVarError::Duplicate(e.to_string()));
            }
        }
        Ok(EquationSystem { equations })
    }

    pub fn is_solution(&self, h: &SolutionMorphism) -> bool {
        self.equations.iter().all(|e| h.is_solution(e))
    }
}

/// Every morphism into `{a, b}*` with total image length at most `max_total`,
/// ordered by total length, then by image lengths, then lexicographically
/// per variable.
pub fn morphisms_up_to(max_total: usize) -> Vec<SolutionMorphism> {
    let words_of = |len: usize| -> Vec<Word> {
        let mut out = Vec::with_capacity(1 << len);
        crate::solver::oracle::for_each_word(&LETTERS, len, |w| out.push(Word::from_bytes(w.to_vec())));
        out
    };
    let by_len: Vec<Vec<Word>> = (0..=max_total).map(words_of).collect();
    let mut out = Vec::new();
    for total in 0..=max_total {
        for lx in 0..=total {
            for ly in 0..=total - lx {
                let lz = total - lx - ly;
                for x in &by_len[lx] {
                    for y in &by_len[ly] {
                        for z in &by_len[lz] {
                            out.push(SolutionMorphism::new(x.clone(), y.clone(), z.clone()));
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub system: EquationSystem,
    pub image_len: usize,
    /// `witnesses[i]` solves every equation except the i-th, which it fails.
    pub witnesses: Vec<Option<SolutionMorphism>>,
    /// Every maximal proper subsystem has a witness. `false` only means
    /// that independence was not shown at this scale.
    pub independent: bool,
}

/// Looks for a witness against each maximal proper subsystem among the
/// morphisms of total image length at most `image_len`. A witness against
/// `S ∖ {e}` also separates every smaller subsystem from `S`.
pub fn independence_check(system: &EquationSystem, image_len: usize) -> IndependenceReport {
    let universe = morphisms_up_to(image_len);
    let witnesses: Vec<Option<SolutionMorphism>> = (0..system.equations.len())
        .map(|skip| {
            universe
                .iter()
                .find(|h| {
                    !h.is_solution(&system.equations[skip])
                        && system.equations.iter().enumerate().all(|(i, e)| i == skip || h.is_solution(e))
                })
                .cloned()
        })
        .collect();
    IndependenceReport {
        system: system.clone(),
        image_len,
        independent: witnesses.iter().all(Option::is_some),
        witnesses,
    }
}

/// Checks a given witness against the subsystem without equation `skip`.
pub fn is_witness(system: &EquationSystem, skip: usize, h: &SolutionMorphism) -> bool {
    !h.is_solution(&system.equations[skip])
        && system.equations.iter().enumerate().all(|(i, e)| i == skip || h.is_solution(e))
}

/// All nontrivial equations `(U, V)` with nonempty sides, `U` before `V` in
/// shortlex order, and `|U| + |V| ≤ max_len`.
pub fn enumerate_equations(max_len: usize) -> Vec<ConstantFreeEquation> {
    let mut words: Vec<Vec<u8>> = Vec::new();
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 1..max_len {
        layer = layer.iter().flat_map(|w| (0..3u8).map(move |v| [w.as_slice(), &[v]].concat())).collect();
        words.extend(layer.iter().cloned());
    }
    let mut out = Vec::new();
    for (i, u) in words.iter().enumerate() {
        for v in &words[i + 1..] {
            if u.len() + v.len() <= max_len {
                out.push(ConstantFreeEquation::new(u.clone(), v.clone()));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub max_eq_len: usize,
    pub max_size: usize,
    pub image_len: usize,
    /// Examples kept per system size.
    pub example_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemExample {
    pub equations: Vec<ConstantFreeEquation>,
    pub nonperiodic_solution: SolutionMorphism,
    pub witnesses: Vec<SolutionMorphism>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub equations: usize,
    pub morphisms: usize,
    /// Equations with a nonperiodic solution in the morphism universe.
    pub with_nonperiodic_solution: usize,
    /// Classes of equations with identical solutions in the universe.
    pub classes: usize,
    pub nonperiodic_classes: usize,
    /// Independent systems with a common nonperiodic solution, counted by
    /// size over classes.
    pub independent_by_size: Vec<(usize, u64)>,
    pub max_size: usize,
    pub examples: Vec<SystemExample>,
    /// Witnessed independent pairs whose common solutions in the universe
    /// are all periodic.
    pub periodic_only_pairs: u64,
}

impl SearchReport {
    /// 2 when a system larger than two is found: such a system would be a
    /// new record, and one larger than 17 would contradict the theorem.
    pub fn exit_code(&self) -> i32 {
        if self.max_size >= 3 {
            2
        } else {
            0
        }
    }
}

type Bits = Vec<u64>;

fn and(a: &[u64], b: &[u64]) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn first_set(bits: &[u64]) -> Option<usize> {
    bits.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn first_and_not(a: &[u64], b: &[u64]) -> Option<usize> {
    a.iter()
        .zip(b)
        .enumerate()
        .find(|(_, (x, y))| **x & !**y != 0)
        .map(|(i, (x, y))| i * 64 + (x & !y).trailing_zeros() as usize)
}

/// Result of [`search_independent_systems`], kept for follow-up queries.
pub struct IndependenceSearch {
    pub report: SearchReport,
    equations: Vec<ConstantFreeEquation>,
    class_of: Vec<usize>,
    pairs: std::collections::BTreeSet<(usize, usize)>,
}

impl IndependenceSearch {
    /// Whether the classes of `e` and `f` form one of the independent pairs.
    pub fn pair_found(&self, e: &ConstantFreeEquation, f: &ConstantFreeEquation) -> bool {
        let class = |g: &ConstantFreeEquation| self.equations.iter().position(|x| x == g).map(|i| self.class_of[i]);
        match (class(e), class(f)) {
            (Some(a), Some(b)) => self.pairs.contains(&(a.min(b), a.max(b))),
            _ => false,
        }
    }
}

/// Enumerates equations up to `max_eq_len`, computes their solutions among
/// the morphisms of total image length at most `image_len`, and grows
/// independent systems with a common nonperiodic solution up to `max_size`.
///
/// Equations with identical solutions in the universe are grouped first.
/// Every subsystem of an independent system with a nonperiodic solution is
/// again one, so systems are grown one class at a time from such pairs.
pub fn search_independent_systems(config: &SearchConfig) -> IndependenceSearch {
    let universe = morphisms_up_to(config.image_len);
    let words = universe.len().div_ceil(64);
    let mut nonperiodic: Bits = vec![0; words];
    for (i, h) in universe.iter().enumerate() {
        if !h.is_periodic() {
            nonperiodic[i / 64] |= 1 << (i % 64);
        }
    }
    let equations = enumerate_equations(config.max_eq_len);
    let solved: Vec<Bits> = equations
        .par_iter()
        .map(|e| {
            let mut bits = vec![0u64; words];
            for (i, h) in universe.iter().enumerate() {
                if h.is_solution(e) {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            bits
        })
        .collect();

    let mut class_index: HashMap<&Bits, usize> = HashMap::new();
    let mut classes: Vec<(usize, &Bits)> = Vec::new();
    let mut class_of = Vec::with_capacity(equations.len());
    for (i, bits) in solved.iter().enumerate() {
        let c = *class_index.entry(bits).or_insert_with(|| {
            classes.push((i, bits));
            classes.len() - 1
        });
        class_of.push(c);
    }
    let has_np = |bits: &Bits| bits.iter().zip(&nonperiodic).any(|(a, b)| a & b != 0);
    let with_nonperiodic_solution = solved.iter().filter(|b| has_np(b)).count();
    let np_classes: Vec<usize> = (0..classes.len()).filter(|&c| has_np(classes[c].1)).collect();

    // Pairs over all classes; those without a common nonperiodic solution
    // are counted separately.
    let pair_rows: Vec<(Vec<(usize, usize)>, u64)> = (0..classes.len())
        .into_par_iter()
        .map(|a| {
            let mut np_pairs = Vec::new();
            let mut periodic_only = 0;
            let bits_a = classes[a].1;
            for (b, &(_, bits_b)) in classes.iter().enumerate().skip(a + 1) {
                let separated = first_and_not(bits_a, bits_b).is_some() && first_and_not(bits_b, bits_a).is_some();
                if !separated {
                    continue;
                }
                if has_np(&and(bits_a, bits_b)) {
                    np_pairs.push((a, b));
                } else {
                    periodic_only += 1;
                }
            }
            (np_pairs, periodic_only)
        })
        .collect();
    let periodic_only_pairs = pair_rows.iter().map(|r| r.1).sum();
    let pairs: std::collections::BTreeSet<(usize, usize)> = pair_rows.into_iter().flat_map(|r| r.0).collect();

    let mut by_size: Vec<(usize, u64)> = Vec::new();
    let mut examples = Vec::new();
    let mut max_size = 0;
    let example = |system: &[usize]| -> SystemExample {
        let common = system.iter().fold(nonperiodic.clone(), |acc, &c| and(&acc, classes[c].1));
        let witnesses = (0..system.len())
            .map(|skip| {
                let rest = system
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .fold(vec![u64::MAX; words], |acc, (_, &c)| and(&acc, classes[c].1));
                let idx = first_and_not(&rest, classes[system[skip]].1).unwrap_or(0);
                universe[idx].clone()
            })
            .collect();
        SystemExample {
            equations: system.iter().map(|&c| equations[classes[c].0].clone()).collect(),
            nonperiodic_solution: universe[first_set(&common).unwrap_or(0)].clone(),
            witnesses,
        }
    };

    if config.max_size >= 1 && !np_classes.is_empty() {
        max_size = 1;
        by_size.push((1, np_classes.len() as u64));
        for &c in np_classes.iter().take(config.example_cap) {
            examples.push(example(&[c]));
        }
    }
    if config.max_size >= 2 && !pairs.is_empty() {
        max_size = 2;
        by_size.push((2, pairs.len() as u64));
        for &(a, b) in pairs.iter().take(config.example_cap) {
            examples.push(example(&[a, b]));
        }
    }

    let mut neighbours: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in &pairs {
        neighbours.entry(a).or_default().push(b);
    }
    let mut current: Vec<Vec<usize>> = pairs.iter().map(|&(a, b)| vec![a, b]).collect();
    for size in 3..=config.max_size {
        let mut next = Vec::new();
        for system in &current {
            let last = *system.last().unwrap_or(&0);
            let candidates = neighbours.get(&system[0]).map(Vec::as_slice).unwrap_or(&[]);
            for &c in candidates.iter().filter(|&&c| c > last) {
                if !system[1..].iter().all(|&s| pairs.contains(&(s, c))) {
                    continue;
                }
                let mut grown = system.clone();
                grown.push(c);
                if independent_with_nonperiodic(&grown, &classes, &nonperiodic, words) {
                    next.push(grown);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        max_size = size;
        by_size.push((size, next.len() as u64));
        for s in next.iter().take(config.example_cap) {
            examples.push(example(s));
        }
        current = next;
    }

    let report = SearchReport {
        config: config.clone(),
        equations: equations.len(),
        morphisms: universe.len(),
        with_nonperiodic_solution,
        classes: classes.len(),
        nonperiodic_classes: np_classes.len(),
        independent_by_size: by_size,
        max_size,
        examples,
        periodic_only_pairs,
    };
    IndependenceSearch { report, equations, class_of, pairs }
}

fn independent_with_nonperiodic(
    system: &[usize],
    classes: &[(usize, &Bits)],
    nonperiodic: &Bits,
    words: usize,
) -> bool {
    let common = system.iter().fold(nonperiodic.clone(), |acc, &c| and(&acc, classes[c].1));
    if first_set(&common).is_none() {
        return false;
    }
    (0..system.len()).all(|skip| {
        let rest = system
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .fold(vec![u64::MAX; words], |acc, (_, &c)| and(&acc, classes[c].1));
        first_and_not(&rest, classes[system[skip]].1).is_some()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(s: &str) -> ConstantFreeEquation {
        ConstantFreeEquation::parse(s).unwrap()
    }

    fn h(s: &str) -> SolutionMorphism {
        SolutionMorphism::parse(s).unwrap()
    }

    #[test]
    fn solutions_and_periodicity() {
        assert!(h("a,b,a").is_solution(&eq("XYZ = ZYX")));
        assert_eq!(h("a,b,a").apply(&eq("XYZ = ZYX").lhs).to_string(), "aba");
        assert!(h(",,").is_solution(&eq("XXY = ZYX")));
        assert!(!h("a,b,aba").is_solution(&eq("(XYYZ, ZYYX)")));
        assert!(!h("a,b,a").is_periodic());
        assert!(h("ab,abab,ε").is_periodic());
        assert!(h("aa,aaa,a").is_periodic());
    }

    #[test]
    fn the_xyz_family() {
        let (a, b): (Word, Word) = ("a".into(), "b".into());
        assert_eq!(xyz_zyx_family(&a, &b, 0, 0, 0), h("a,b,a"));
        assert_eq!(xyz_zyx_family(&a, &b, 0, 0, 1), h("a,b,aba"));
        let e = Word::empty();
        let trivial = xyz_zyx_family(&e, &e, 2, 1, 3);
        assert!(trivial.is_periodic() && trivial.total_length() == 0);
    }

    #[test]
    fn independence_of_the_reference_pair() {
        let s = EquationSystem::new(vec![eq("XYZ = ZYX"), eq("XYYZ = ZYYX")]).unwrap();
        assert!(s.is_solution(&h("a,b,a")));
        assert!(is_witness(&s, 1, &h("a,b,aba")));
        assert!(is_witness(&s, 0, &h("a,b,abba")));
        assert!(!independence_check(&s, 5).independent);
        assert!(independence_check(&s, 6).independent);

        let single = EquationSystem::new(vec![eq("XY = YX")]).unwrap();
        assert!(!independence_check(&single, 1).independent);
        assert!(independence_check(&single, 2).independent);

        let redundant = EquationSystem::new(vec![eq("XY = YX"), eq("XYY = YYX")]).unwrap();
        let r = independence_check(&redundant, 6);
        assert!(!r.independent);
        assert!(r.witnesses[1].is_none());
    }

    #[test]
    fn systems_reject_trivial_and_repeated_equations() {
        assert!(matches!(EquationSystem::new(vec![eq("XY = XY")]), Err(ThreeVarError::Trivial(_))));
        assert!(matches!(EquationSystem::new(vec![eq("XY = YX"), eq("XY = YX")]), Err(ThreeVarError::Duplicate(_))));
    }

    #[test]
    fn morphism_universe_size_and_order() {
        let m = morphisms_up_to(6);
        assert_eq!(m.len(), 2815);
        assert_eq!(m[0], h(",,"));
        assert_eq!(m[1], h(",,a"));
        assert!(m.windows(2).all(|w| w[0].total_length() <= w[1].total_length()));
    }

    #[test]
    fn small_search() {
        let cfg = SearchConfig { max_eq_len: 4, max_size: 1, image_len: 3, example_cap: 3 };
        let s = search_independent_systems(&cfg);
        assert_eq!(s.report.max_size, 1);
        assert_eq!(s.report.examples.len(), 3);
    }
}
