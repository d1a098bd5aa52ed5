use super::*;
use crate::normalizer::to_normal_form;

const THREE: &str = "X aXb X aabb ab aXb abaabbab = abaabbab aXb ab aabb X aXb X";

fn aligned(s: &str) -> AlignedEquation {
    AlignedEquation::parse(s).unwrap()
}

fn ab() -> Alphabet {
    Alphabet::from_ints(&[('a', 1), ('b', -1)]).unwrap()
}

fn normal(s: &str, witness: &str) -> NormalFormEquation {
    to_normal_form(&aligned(s), &witness.into(), &ab()).unwrap()
}

fn v(n: i64) -> Value {
    Value::from_integer(n)
}

fn words(ws: &[&str]) -> Vec<Word> {
    ws.iter().map(|&w| w.into()).collect()
}

#[test]
fn solutions_in_normal_form_are_zero_sum() {
    let e = normal("XaXbab = abaXbX", "ab");
    let check = check_zero_sum_solutions(&e).unwrap();
    assert!(check.all_zero_sum && check.residuals_vanish);
    assert_eq!(check.entries.iter().map(|x| x.word.clone()).collect::<Vec<_>>(), words(&["", "ab"]));

    let e = normal(THREE, "ab");
    let check = check_zero_sum_solutions(&e).unwrap();
    assert!(check.all_zero_sum && check.residuals_vanish);
    assert_eq!(check.entries.len(), 3);
}

#[test]
fn zero_sum_check_rejects_equations_outside_normal_form() {
    let e = NormalFormEquation {
        base: aligned("Xab = abX"),
        witness: "ab".into(),
        alphabet: Alphabet::from_ints(&[('a', 1), ('b', 2)]).unwrap(),
        rewrites: Vec::new(),
    };
    assert!(matches!(check_zero_sum_solutions(&e), Err(ReductionError::NotNormalForm { n1: false, .. })));
}

#[test]
fn area_residual_matches_the_direct_difference() {
    let e = aligned(THREE);
    let alphabet = Alphabet::from_ints(&[('a', 2), ('b', -3)]).unwrap();
    for x in ["", "a", "ab", "bba", "abaabbab"] {
        let x: Word = x.into();
        let eq = e.to_equation();
        let direct = alphabet.area(&eq.substitute_lhs(&x)).unwrap() - alphabet.area(&eq.substitute_rhs(&x)).unwrap();
        assert_eq!(area_residual(&e, &alphabet, &x).unwrap(), direct, "x = {x}");
    }
}

#[test]
fn prefix_profiles() {
    let p = prefix_profile(&aligned("XaXbab = abaXbX"), &ab()).unwrap();
    assert_eq!((p.s.clone(), p.t.clone()), (vec![v(0), v(1)], vec![v(1), v(0)]));
    assert!(p.is_permutation());
    assert!(lemma_st(&aligned("XaXbab = abaXbX"), &ab()).unwrap().holds());
    assert!(lemma_st(&aligned(THREE), &ab()).unwrap().holds());

    let p = prefix_profile(&aligned("Xab = abX"), &ab()).unwrap();
    assert_eq!((p.s, p.t), (vec![v(0)], vec![v(0)]));

    // Under a=1, b=2 only the empty solution is zero-sum.
    let a12 = Alphabet::from_ints(&[('a', 1), ('b', 2)]).unwrap();
    assert!(lemma_st(&aligned("XaXbab = abaXbX"), &a12).unwrap().is_unmet());
}

#[test]
fn heights_on_the_three_solution_equation() {
    let e = normal(THREE, "ab");
    let a = height_analysis(&e).unwrap();
    assert_eq!(a.h, v(1));
    assert_eq!((a.i, a.j, a.k, a.l), (3, 0, 2, 1));
    assert_eq!((a.phi_u.to_string(), a.phi_v.to_string()), ("aa".into(), "abaa".into()));
    let phis: Vec<String> = a.solutions.iter().map(|s| s.phi.to_string()).collect();
    assert_eq!(phis, ["a", "abaa"]);
    let heights: Vec<Height> = a.solutions.iter().map(|s| s.height).collect();
    assert_eq!(heights, [Height::Finite(v(1)), Height::Finite(v(2))]);
    assert_eq!(e.alphabet.height(&Word::empty()).unwrap(), Height::NegInfinity);
    assert_eq!(a.nonempty, Some(2));
    assert!(lemma_height(&e).unwrap().holds());
}

#[test]
fn compression_by_codes() {
    let e = aligned("Xabab = ababX");
    let c = compress_by_code(&e, Code::MinimalZeroSum { alphabet: ab() }).unwrap();
    assert_eq!(c.equation.to_string(), "Xcc = ccX");
    assert_eq!(c.factors, vec![Factor { word: "ab".into(), letter: "c".into() }]);
    assert!(check_compression(&e, &c).holds());
    assert_eq!(c.encode(&"abab".into()), Some("cc".into()));
    assert_eq!(c.decode(&"c".into()), Some("ab".into()));
    assert_eq!(c.decode(&"d".into()), None);

    let c = compress_by_code(&e, Code::Blocks { length: 2 }).unwrap();
    assert_eq!(c.equation.to_string(), "Xcc = ccX");
    assert!(check_compression(&e, &c).holds());

    let bad = aligned("Xaab = aabX");
    assert!(matches!(
        compress_by_code(&bad, Code::MinimalZeroSum { alphabet: ab() }),
        Err(ReductionError::NotInCode { .. })
    ));
    assert_eq!(compress_by_code(&e, Code::Blocks { length: 0 }), Err(ReductionError::ZeroBlockLength));
}

#[test]
fn cutting_keeps_nonempty_solutions() {
    let e = aligned("XaXbab = abaXbX");
    let cut = cut_equation(&e, 1, &"ab".into()).unwrap();
    assert_eq!(cut.to_string(), "Xaab = abaX");
    assert!(cut.substitute_check(&"ab".into()));
    assert_eq!(cut.to_equation().substitute_lhs(&"ab".into()).to_string(), "abaab");

    let (cut2, y) = cut_for_solutions(&e, 1, &words(&["ab"])).unwrap();
    assert_eq!((cut2, y.to_string()), (cut.clone(), "ab".to_string()));

    // At the last index the cut length is -|v_n| = 0 and nothing changes.
    assert_eq!(cut_equation(&e, 2, &Word::empty()).unwrap(), e);

    assert!(matches!(cut_for_solutions(&e, 1, &words(&["a"])), Err(ReductionError::SolutionTooShort { d: 2, .. })));
    assert!(matches!(cut_equation(&e, 1, &"a".into()), Err(ReductionError::CutWordLength { .. })));
    assert!(matches!(cut_equation(&e, 0, &"a".into()), Err(ReductionError::CutIndex { .. })));
}

#[test]
fn cut_index_hypotheses() {
    // Only two nonempty solutions.
    assert!(find_cut_index(&normal(THREE, "ab")).unwrap().is_unmet());
    // Every left block is zero-sum.
    assert!(find_cut_index(&normal("Xabab = ababX", "ab")).unwrap().is_unmet());
}

#[test]
fn periodic_cut_indices() {
    let c = periodic_cut_index(&aligned("Xab = abX"), &"ab".into()).unwrap();
    assert_eq!(c, LemmaCheck::Holds { details: PeriodicCut { j: 1, d: 0, period: 2 } });
    let c = periodic_cut_index(&aligned("Xabab = ababX"), &"ab".into()).unwrap();
    assert_eq!(c, LemmaCheck::Holds { details: PeriodicCut { j: 1, d: 0, period: 2 } });
    assert_eq!(
        periodic_cut_index(&aligned("Xabab = ababX"), &"abab".into()),
        Err(ReductionError::NotPrimitive("abab".into()))
    );
    assert!(matches!(
        periodic_cut_index(&aligned("XaXbab = abaXbX"), &"ab".into()),
        Err(ReductionError::NotPeriodic { .. })
    ));
}

#[test]
fn empty_solution_by_abelian_equivalence() {
    let c = has_empty_by_abelian(&aligned("Xab = abX"));
    assert_eq!(c, LemmaCheck::Holds { details: AbelianSplit { prefix_len: 1, letter: Some("b".into()), m: 1 } });
    // Empty last block: only m = 0 is possible.
    let c = has_empty_by_abelian(&aligned("XaX = aXX"));
    assert_eq!(c, LemmaCheck::Holds { details: AbelianSplit { prefix_len: 0, letter: None, m: 0 } });
    // No nonempty solution.
    assert!(has_empty_by_abelian(&aligned("Xa = bX")).is_unmet());
}

#[test]
fn chain_verdicts() {
    let out = build_reduction_chain(&normal(THREE, "ab"));
    match out {
        ChainOutcome::Verdict { verdict: Verdict::FewerThanThreeNonempty { nonempty: 2, .. }, message } => {
            assert_eq!(message, "fewer than 3 nonempty solutions; chain not applicable");
        }
        other => panic!("unexpected {other:?}"),
    }
    let out = build_reduction_chain(&normal("Xabab = ababX", "ab"));
    assert!(matches!(out, ChainOutcome::Verdict { verdict: Verdict::NotFinite { .. }, .. }));
}

#[test]
fn chain_steps_on_an_all_zero_sum_family() {
    let e = normal("Xabab = ababX", "ab");
    let trace = run_chain_steps(&e, &words(&["ab", "abab", "ababab"]));
    assert_eq!(trace.steps.len(), 2);
    assert_eq!(trace.steps[1].equation.to_string(), "Xcc = ccX");
    assert!(trace.steps[1].shorter_than_start);
    assert!(trace.violations().is_empty(), "{:?}", trace.violations());
}

#[test]
fn prefix_sum_map_is_a_morphism_after_zero_sum_words() {
    let f = PrefixSumMap::new(ab(), &"abaabbab".into()).unwrap();
    assert_eq!(f.low, v(0));
    assert_eq!(f.apply(&"abaabbab".into()).unwrap().to_string(), "abaaabab");
    for (w, w2) in [("ab", "ba"), ("ba", "aab"), ("aabb", "bbb")] {
        let (w, w2): (Word, Word) = (w.into(), w2.into());
        let whole = f.apply(&w.concat(&w2)).unwrap();
        assert_eq!(whole, f.apply(&w).unwrap().concat(&f.apply(&w2).unwrap()));
    }
}

#[test]
fn every_chain_step_runs_on_a_periodic_family() {
    let a = Alphabet::from_ints(&[('a', 1), ('b', -2)]).unwrap();
    let e = to_normal_form(&aligned("XabXaba = abaXbaX"), &"aba".into(), &a).unwrap();
    let nonempty: Vec<Word> = classify(&e.base.to_equation()).sample(5).into_iter().skip(1).collect();
    let trace = run_chain_steps(&e, &nonempty);
    let labels: Vec<&str> = trace.steps.iter().map(|s| s.label.as_str()).collect();
    assert_eq!(labels, ["E1", "E2", "E3", "E4", "E5"]);
    assert!(matches!(trace.steps[1].certificate, Certificate::Cut { .. }));
    assert!(matches!(trace.steps[2].certificate, Certificate::PrefixSumMap { .. }));
    assert!(matches!(trace.steps[3].certificate, Certificate::PeriodicCut { .. }));
    assert!(matches!(trace.steps[4].certificate, Certificate::BlockCompression { .. }));
    assert!(trace.violations().is_empty(), "{:?}", trace.violations());
}
