use super::*;
use crate::fixtures;
use crate::parser::{parse_module, parse_term};

fn t(th: &Theory, s: &str) -> Term {
    parse_term(s, th).unwrap()
}

fn labels(n: &Normalized) -> Vec<&str> {
    n.steps.iter().map(|s| s.label.as_str()).collect()
}

#[test]
fn two_steps_on_successor_plus_zero() {
    let th = fixtures::nat_variant();
    let n = normalize_trace(&th, &t(&th, "s(0) + 0"), Strategy::LeftmostInnermost, 100).unwrap();
    assert_eq!(th.show(&n.term), "s(0)");
    assert_eq!(labels(&n), vec!["2", "1"]);
    assert_eq!(n.steps[1].position, vec![0]);
    assert_eq!(n.steps[0].after, n.steps[1].before);
}

#[test]
fn irreducible_term_has_empty_trace() {
    let th = fixtures::nat_variant();
    let n = normalize_trace(&th, &t(&th, "0"), Strategy::LeftmostInnermost, 100).unwrap();
    assert!(n.steps.is_empty());
}

#[test]
fn exclusive_or_cancels_to_mt() {
    let th = fixtures::exclusive_or();
    assert_eq!(th.show(&normalize(&th, &t(&th, "(0 * s(0)) * (0 * s(0))")).unwrap()), "mt");
    assert_eq!(th.show(&normalize(&th, &t(&th, "0 * s(0) * 0")).unwrap()), "s(0)");
}

#[test]
fn symbolic_successor() {
    let th = fixtures::nat_variant();
    assert_eq!(th.show(&normalize(&th, &t(&th, "s(0) + W")).unwrap()), "s(W:Nat)");
}

#[test]
fn normal_forms_are_fixpoints() {
    let th = fixtures::exclusive_or();
    let once = normalize(&th, &t(&th, "X * X * s(0) * mt")).unwrap();
    let again = normalize_trace(&th, &once, Strategy::LeftmostInnermost, 100).unwrap();
    assert_eq!(again.term, once);
    assert!(again.steps.is_empty());
}

#[test]
fn strategies_agree() {
    let th = fixtures::nat_variant();
    let term = t(&th, "(s(0) + s(0)) + (0 + s(s(0)))");
    let a = normalize_trace(&th, &term, Strategy::LeftmostInnermost, 100).unwrap();
    let b = normalize_trace(&th, &term, Strategy::LeftmostOutermost, 100).unwrap();
    assert_eq!(a.term, b.term);
}

#[test]
fn step_limit_signals_nontermination() {
    let th = parse_module("fmod LOOP is sort S . op a : -> S . op f : S -> S . eq a = f(a) . endfm").unwrap();
    let err = normalize_trace(&th, &t(&th, "a"), Strategy::LeftmostInnermost, 50).unwrap_err();
    assert_eq!(err, Error::NonTermination { limit: 50 });
}

#[test]
fn assoc_segments_are_redexes() {
    let th = fixtures::assoc_set();
    let pat = [t(&th, "X * Y")];
    let rs = find_redexes(&th, &t(&th, "0 * X * Z"), &pat, RedexMode::Unify).unwrap();
    let shown: Vec<String> = rs.iter().map(|r| th.show(&r.term)).collect();
    assert_eq!(shown, vec!["0 * X:[NatSet] * Z:[NatSet]", "0 * X:[NatSet]", "X:[NatSet] * Z:[NatSet]"]);
    assert!(find_redexes(&th, &t(&th, "0"), &pat, RedexMode::Unify).unwrap().is_empty());
}

#[test]
fn ac_segments_are_sub_multisets() {
    let th = fixtures::exclusive_or();
    let pat = [t(&th, "X * Z")];
    let rs = find_redexes(&th, &t(&th, "0 * s(0) * s(s(0))"), &pat, RedexMode::Match).unwrap();
    assert_eq!(rs.iter().filter(|r| r.position.is_empty()).count(), 4);
    let rs = find_redexes(&th, &t(&th, "0 * 0 * s(0)"), &pat, RedexMode::Match).unwrap();
    assert_eq!(rs.len(), 3);
}

#[test]
fn assoc_rewriting_uses_segments() {
    let th = fixtures::assoc_set();
    let n = normalize_trace(&th, &t(&th, "0 * s(0) * 0"), Strategy::LeftmostInnermost, 100).unwrap();
    assert_eq!(labels(&n), vec!["pair", "pair"]);
}
