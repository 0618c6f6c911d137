#![allow(dead_code)]

pub mod oracle;

use std::sync::Arc;

use proptest::prelude::*;
use vnarrow::variant::VariantTree;
use vnarrow::{parse_term, Term, Theory};

/// Random term text over `leaves`, the prefix operators `unary` and the infix
/// operators `infix`, at most `depth` levels deep.
pub fn term_text(leaves: &'static [&'static str], unary: &'static [&'static str], infix: &'static [&'static str], depth: u32) -> BoxedStrategy<String> {
    let leaf = proptest::sample::select(leaves).prop_map(str::to_string);
    leaf.prop_recursive(depth, 16, 2, move |inner| {
        let mut alts: Vec<BoxedStrategy<String>> = Vec::new();
        if !unary.is_empty() {
            alts.push(
                (proptest::sample::select(unary), inner.clone())
                    .prop_map(|(f, a)| format!("{f}({a})"))
                    .boxed(),
            );
        }
        if !infix.is_empty() {
            alts.push(
                (proptest::sample::select(infix), inner.clone(), inner)
                    .prop_map(|(f, a, b)| format!("({a}) {f} ({b})"))
                    .boxed(),
            );
        }
        proptest::strategy::Union::new(alts)
    })
    .boxed()
}

pub fn term(th: &Theory, s: &str) -> Term {
    parse_term(s, th).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn tree(th: &Arc<Theory>, s: &str) -> VariantTree {
    VariantTree::new(Arc::clone(th), &term(th, s)).unwrap()
}

/// Symbol occurrences in the unflattened form: an assoc node with `n`
/// arguments stands for `n - 1` binary applications.
pub fn symbols(th: &Theory, t: &Term) -> usize {
    match t {
        Term::Var(_) => 1,
        Term::App(f, args) => {
            let own = if th.axioms(*f).assoc { args.len().saturating_sub(1).max(1) } else { 1 };
            own + args.iter().map(|a| symbols(th, a)).sum::<usize>()
        }
    }
}
