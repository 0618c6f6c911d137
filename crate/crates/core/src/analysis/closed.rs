//! Equational closedness of tree nodes with respect to the root.

use crate::error::Result;
use crate::rewrite::{find_redexes, Redex, RedexMode};
use crate::term::Term;
use crate::theory::Theory;
use crate::unify::match_term;
use crate::variant::VariantTree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closedness {
    pub closed: bool,
    pub redexes: Vec<Redex>,
}

/// A term is closed when every narrowing redex in it, assoc segments
/// included, is an instance of `root`.
pub fn is_closed(th: &Theory, term: &Term, root: &Term) -> Result<Closedness> {
    let lhss: Vec<Term> = th.variant_equations().map(|e| e.lhs.clone()).collect();
    let redexes = find_redexes(th, term, &lhss, RedexMode::Unify)?;
    let mut closed = true;
    for r in &redexes {
        if match_term(th, root, &r.term)?.is_empty() {
            closed = false;
            break;
        }
    }
    Ok(Closedness { closed, redexes })
}

/// Records closedness with respect to `V_0` on every node of `tree`.
pub fn annotate_closedness(tree: &mut VariantTree) -> Result<()> {
    let th = tree.theory().clone();
    let root = tree.root_term().clone();
    for id in 0..tree.len() {
        if tree.nodes()[id].flags.closed.is_none() {
            let c = is_closed(&th, &tree.nodes()[id].term, &root)?.closed;
            tree.flags_mut(id).closed = Some(c);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::parser::parse_term;

    fn closed(th: &Theory, t: &str, root: &str) -> Closedness {
        is_closed(th, &parse_term(t, th).unwrap(), &parse_term(root, th).unwrap()).unwrap()
    }

    #[test]
    fn three_segment_redexes_all_instances() {
        let th = fixtures::assoc_set();
        let c = closed(&th, "0 * X * Z", "X * Y");
        assert!(c.closed);
        assert_eq!(c.redexes.len(), 3);
    }

    #[test]
    fn ground_pair_is_closed() {
        let th = fixtures::assoc_set();
        assert!(closed(&th, "0 * 0", "X * Y").closed);
    }

    #[test]
    fn segment_outside_root_pattern() {
        let th = fixtures::assoc_set();
        assert!(!closed(&th, "0 * X * Y", "X * X").closed);
    }

    #[test]
    fn unnarrowable_leaf() {
        let th = fixtures::assoc_set();
        let c = closed(&th, "mt", "X * Y");
        assert!(c.closed);
        assert!(c.redexes.is_empty());
    }
}
