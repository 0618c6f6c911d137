use super::*;
use crate::analysis::renaming;
use crate::fixtures;
use crate::parser::parse_term;

fn tree(th: &Theory, t: &str) -> VariantTree {
    VariantTree::new(Arc::new(th.clone()), &parse_term(t, th).unwrap()).unwrap()
}

/// Whether some variant equals `(bindings, term)` modulo renaming; bindings
/// are given over the user variables in order of first occurrence.
fn has_variant(th: &Theory, vs: &[Variant], bindings: &[&str], term: &str) -> bool {
    let mut want: Vec<Term> = vec![parse_term(term, th).unwrap()];
    want.extend(bindings.iter().map(|b| parse_term(b, th).unwrap()));
    vs.iter().any(|v| {
        let mut got = vec![v.term.clone()];
        got.extend(v.subst.iter().map(|(_, t)| t.clone()));
        renaming(th, &want, &got).unwrap().is_some() && renaming(th, &got, &want).unwrap().is_some()
    })
}

#[test]
fn exclusive_or_has_seven_variants() {
    let th = fixtures::exclusive_or();
    let vs = get_variants(&th, &parse_term("X:[NatSet] * Y:[NatSet]", &th).unwrap(), None).unwrap();
    assert_eq!(vs.len(), 7);
    assert!(has_variant(&th, &vs, &["#1:[NatSet]", "#2:[NatSet]"], "#1:[NatSet] * #2:[NatSet]"));
    assert!(has_variant(&th, &vs, &["#1:[NatSet]", "#1:[NatSet]"], "mt"));
    assert!(has_variant(&th, &vs, &["#1:[NatSet]", "mt"], "#1:[NatSet]"));
}

#[test]
fn root_is_renamed() {
    let th = fixtures::exclusive_or();
    let t = tree(&th, "X:[NatSet] * Y:[NatSet]");
    assert_eq!(th.show(t.root_term()), "#1:[NatSet] * #2:[NatSet]");
    assert_eq!(th.show_subst(&t.user_subst(0)), "X --> #1:[NatSet]\nY --> #2:[NatSet]\n");
    assert!(t.nodes()[0].flags.narrowable);
}

#[test]
fn constant_root_is_unnarrowable() {
    let th = fixtures::nat_variant();
    let mut t = tree(&th, "0");
    assert_eq!(t.len(), 1);
    assert!(!t.nodes()[0].flags.narrowable);
    assert!(matches!(t.expand_node(0), Err(Error::InvalidExpansion(_))));
}

#[test]
fn input_is_normalized_into_root() {
    let th = fixtures::nat_variant();
    let t = tree(&th, "s(0) + 0");
    assert_eq!(th.show(t.input()), "s(0) + 0");
    assert_eq!(th.show(t.root_term()), "s(0)");
    assert_eq!(t.input_trace().len(), 2);
}

#[test]
fn zero_plus_successor_in_two_steps() {
    let th = fixtures::nat_variant();
    let mut t = tree(&th, "Z + 0");
    t.expand_variants(10, &ExpandOptions::default()).unwrap();
    let target = parse_term("s(0)", &th).unwrap();
    let n = t.nodes().iter().find(|n| n.term == target).expect("s(0) is reached");
    let labels: Vec<String> = t.branch(n.id)[1..].iter().map(|&i| t.nodes()[i].edge.as_ref().unwrap().equation.clone()).collect();
    assert_eq!(labels, vec!["2", "1"]);
    assert_eq!(th.show_subst(&t.user_subst(n.id)), "Z --> s(0)\n");
}

#[test]
fn bounded_nat_variants() {
    let th = fixtures::nat_variant();
    let vs = get_variants(&th, &parse_term("X:Nat + s(0)", &th).unwrap(), Some(10)).unwrap();
    assert_eq!(vs.len(), 10);
    assert!(has_variant(&th, &vs, &["#1:Nat"], "#1:Nat + s(0)"));
    assert!(has_variant(&th, &vs, &["s(s(s(s(0))))"], "s(s(s(s(s(0)))))"));
}

#[test]
fn expanding_twice_is_rejected() {
    let th = fixtures::exclusive_or();
    let mut t = tree(&th, "X:[NatSet] * Y:[NatSet]");
    assert_eq!(t.expand_node(0).unwrap().len(), 6);
    assert!(matches!(t.expand_node(0), Err(Error::InvalidExpansion(_))));
}

#[test]
fn more_flag_marks_all_but_last_sibling() {
    let th = fixtures::exclusive_or();
    let mut t = tree(&th, "X:[NatSet] * Y:[NatSet]");
    let kids = t.expand_node(0).unwrap();
    let flags: Vec<bool> = kids.iter().map(|&k| t.nodes()[k].more).collect();
    assert_eq!(flags, vec![true, true, true, true, true, false]);
    assert!(!t.nodes()[0].more);
}

#[test]
fn depth_zero_changes_nothing() {
    let th = fixtures::exclusive_or();
    let mut t = tree(&th, "X:[NatSet] * Y:[NatSet]");
    let r = t.expand_depth(0, &ExpandOptions::default()).unwrap();
    assert!(r.new_nodes.is_empty());
    assert_eq!(r.criterion, Criterion::Bound);
    assert_eq!(t.len(), 1);
}

#[test]
fn variant_count_strategy_exhausts() {
    let th = fixtures::exclusive_or();
    let mut t = tree(&th, "X:[NatSet] * Y:[NatSet]");
    let r = t.expand_variants(100, &ExpandOptions::default()).unwrap();
    assert_eq!(r.criterion, Criterion::Exhausted);
    assert_eq!(t.len(), 7);
}

#[test]
fn fresh_index_is_monotone() {
    let th = fixtures::nat_variant();
    let mut t = tree(&th, "X:Nat + s(0)");
    t.expand_variants(20, &ExpandOptions::default()).unwrap();
    for n in t.nodes() {
        if let Some(p) = n.parent {
            assert!(n.fresh_index >= t.nodes()[p].fresh_index);
        }
    }
}

#[test]
fn cancelled_expansion_times_out() {
    let th = fixtures::nat_variant();
    let mut t = tree(&th, "X:Nat + s(0)");
    let cancel = Arc::new(std::sync::atomic::AtomicBool::new(true));
    let r = t.expand_variants(10, &ExpandOptions { cancel: Some(cancel), ..Default::default() }).unwrap();
    assert_eq!(r.criterion, Criterion::Timeout);
    assert_eq!(t.len(), 1);
}

#[test]
fn whistle_stops_every_narrowable_branch() {
    let th = fixtures::exclusive_or_nofvp();
    let mut t = tree(&th, "X:[NatSet] * Y:[NatSet]");
    let r = t.expand_until_whistle(&ExpandOptions::default()).unwrap();
    assert_eq!(r.criterion, Criterion::Whistle);
    assert!(t.frontier().next().is_none());
    for b in &r.branches {
        let leaf = &t.nodes()[b.leaf];
        match b.criterion {
            Criterion::Whistle => assert!(leaf.flags.whistled && leaf.flags.narrowable),
            Criterion::Exhausted => assert!(!leaf.flags.narrowable),
            c => panic!("leaf {} stopped by {c:?}", b.leaf),
        }
    }
}

#[test]
fn whistle_chain_repeats_the_root_modulo_renaming() {
    let th = fixtures::exclusive_or_nofvp();
    let mut t = tree(&th, "X:[NatSet] * Y:[NatSet]");
    t.expand_until_whistle(&ExpandOptions::default()).unwrap();
    let leaf = t.nodes().iter().find(|n| n.flags.whistled).unwrap().id;
    let chain = t.branch(leaf);
    assert_eq!(chain.len(), 3);
    for w in chain.windows(2) {
        let (a, b) = (&t.nodes()[w[0]].term, &t.nodes()[w[1]].term);
        assert!(crate::analysis::embeds(&th, a, b));
        assert!(renaming(&th, std::slice::from_ref(a), std::slice::from_ref(b)).unwrap().is_some());
    }
    let cmp = crate::analysis::compare_nodes(&t, chain[1], chain[2]).unwrap();
    assert!(cmp.terms_equal_modulo_renaming);
    assert!(!cmp.substitutions_equal_modulo_renaming);
    assert!(!cmp.binding_diffs.is_empty());
}
