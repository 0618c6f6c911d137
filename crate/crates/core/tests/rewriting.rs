mod common;

use proptest::prelude::*;
use vnarrow::rewrite::{normalize_trace, Strategy as RewriteStrategy, DEFAULT_STEP_LIMIT};
use vnarrow::{fixtures, Theory};

use common::{term, term_text};

const NAT: &[&str] = &["0", "X", "Y"];
const XOR: &[&str] = &["0", "mt", "s(0)", "X:[NatSet]", "Z:[NatSet]"];
const BOOL: &[&str] = &["true", "false", "X", "Y"];

fn strategies_agree(th: &Theory, s: &str) -> Result<(), TestCaseError> {
    let t = term(th, s);
    let inner = normalize_trace(th, &t, RewriteStrategy::LeftmostInnermost, DEFAULT_STEP_LIMIT).unwrap();
    let outer = normalize_trace(th, &t, RewriteStrategy::LeftmostOutermost, DEFAULT_STEP_LIMIT).unwrap();
    prop_assert!(th.ax_equal(&inner.term, &outer.term), "{s}");
    for step in inner.steps.iter().chain(&outer.steps) {
        prop_assert_eq!(&th.canonical(&step.after), &step.after);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn canonical_form_is_idempotent(s in term_text(XOR, &[], &["*"], 3)) {
        let th = fixtures::exclusive_or();
        let once = th.canonical(&term(&th, &s));
        prop_assert_eq!(th.canonical(&once), once.clone());
        prop_assert!(th.ax_equal(&once, &term(&th, &s)));
    }

    #[test]
    fn reparsing_printed_terms(s in term_text(XOR, &[], &["*"], 3)) {
        let th = fixtures::exclusive_or_acu();
        let t = th.canonical(&term(&th, &s));
        prop_assert_eq!(th.canonical(&term(&th, &th.show(&t))), t);
    }

    #[test]
    fn nat_strategies_agree(s in term_text(NAT, &["s"], &["+"], 3)) {
        strategies_agree(&fixtures::nat_variant(), &s)?;
    }

    #[test]
    fn xor_strategies_agree(s in term_text(XOR, &[], &["*"], 3)) {
        strategies_agree(&fixtures::exclusive_or(), &s)?;
    }

    #[test]
    fn bool_strategies_agree(s in term_text(BOOL, &[], &["and", "or"], 3)) {
        strategies_agree(&fixtures::boolean(), &s)?;
    }
}
