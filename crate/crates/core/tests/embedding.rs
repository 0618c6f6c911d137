mod common;

use proptest::prelude::*;
use vnarrow::analysis::embeds;
use vnarrow::fixtures;

use common::oracle::{embedding_agrees, embeds_by_deletion, products};
use common::{term, term_text};

const FREE: &[&str] = &["0", "X", "Y"];
const AC: &[&str] = &["0", "mt", "X:[NatSet]", "Z:[NatSet]"];
const ASSOC: &[&str] = &["0", "mt", "X", "Y"];

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn free_and_comm_embedding(a in term_text(FREE, &["s"], &["+", "*"], 3), b in term_text(FREE, &["s"], &["+", "*"], 3)) {
        embedding_agrees(&fixtures::embedding_signature(), &a, &b)?;
    }

    #[test]
    fn ac_embedding(a in products(AC), b in products(AC)) {
        embedding_agrees(&fixtures::exclusive_or(), &a, &b)?;
    }

    #[test]
    fn assoc_embedding(a in products(ASSOC), b in products(ASSOC)) {
        embedding_agrees(&fixtures::assoc_set(), &a, &b)?;
    }

    #[test]
    fn embedding_is_reflexive(a in term_text(FREE, &["s"], &["+", "*"], 3)) {
        let th = fixtures::embedding_signature();
        let t = term(&th, &a);
        prop_assert!(embeds(&th, &t, &t));
    }
}

#[test]
fn oracle_agrees_on_known_cases() {
    let th = fixtures::embedding_signature();
    assert!(embeds_by_deletion(&th, &term(&th, "s(Y * (X + Y))"), &term(&th, "s(s(X + Y) * (s(X) + Y))")));
    let th = fixtures::exclusive_or();
    assert!(embeds_by_deletion(&th, &term(&th, "X:[NatSet] * X:[NatSet]"), &term(&th, "0 * X:[NatSet] * Z:[NatSet]")));
    assert!(!embeds_by_deletion(&th, &term(&th, "X:[NatSet] * Z:[NatSet]"), &term(&th, "0 * 0")));
}
