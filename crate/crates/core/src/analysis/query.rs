//! Filtering tree nodes with wildcard patterns.

use serde::Serialize;

use crate::error::Result;
use crate::parser::QueryPattern;
use crate::rewrite::{find_redexes, RedexMode};
use crate::subst::Substitution;
use crate::term::{Position, Term};
use crate::theory::Theory;
use crate::unify::match_term;
use crate::variant::VariantTree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Highlight {
    /// Position of the captured subterm, or of the assoc node whose
    /// arguments it spans.
    pub position: Position,
    pub term: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryHit {
    pub node: usize,
    pub position: Position,
    pub segment: Option<Vec<usize>>,
    pub highlights: Vec<Highlight>,
}

/// Matches `p` against `s` argument by argument in written order, ignoring
/// the axioms. Used first so that highlights follow the pattern's layout.
fn positional(th: &Theory, p: &Term, s: &Term, m: &mut Substitution) -> bool {
    match (p, s) {
        (Term::Var(x), _) => match m.get(x) {
            Some(b) => b == s,
            None => {
                let ok = th.sorts.kind_of_ref(x.sort) == th.kind_of_term(s)
                    && th.sorts.leq(th.least_sort(s), x.sort);
                if ok {
                    m.insert(x.clone(), s.clone());
                }
                ok
            }
        },
        (Term::App(f, pa), Term::App(g, sa)) => {
            f == g && pa.len() == sa.len() && pa.iter().zip(sa).all(|(a, b)| positional(th, a, b, m))
        }
        _ => false,
    }
}

pub fn query_tree(tree: &VariantTree, q: &QueryPattern) -> Result<Vec<QueryHit>> {
    let th = &**tree.theory();
    let mut hits = Vec::new();
    let lone = q.term.is_var();
    for node in tree.nodes() {
        if lone {
            let highlights = if q.captures.is_empty() {
                Vec::new()
            } else {
                vec![Highlight { position: Vec::new(), term: th.show(&node.term) }]
            };
            hits.push(QueryHit { node: node.id, position: Vec::new(), segment: None, highlights });
            continue;
        }
        for r in find_redexes(th, &node.term, std::slice::from_ref(&q.term), RedexMode::Match)? {
            let mut m = Substitution::new();
            let matcher = if positional(th, &q.written, &r.term, &mut m) {
                m
            } else {
                match match_term(th, &q.term, &r.term)?.into_iter().next() {
                    Some(m) => m,
                    None => continue,
                }
            };
            let mut highlights = Vec::new();
            for c in &q.captures {
                let captured = matcher.image(c);
                let position = locate(&node.term, &r.position, &captured).unwrap_or_else(|| r.position.clone());
                highlights.push(Highlight { position, term: th.show(&captured) });
            }
            hits.push(QueryHit { node: node.id, position: r.position, segment: r.segment, highlights });
        }
    }
    Ok(hits)
}

/// First position at or below `under` holding `target`.
fn locate(t: &Term, under: &Position, target: &Term) -> Option<Position> {
    let sub = t.subterm(under)?;
    let mut stack = vec![(under.clone(), sub)];
    while let Some((p, s)) = stack.pop() {
        if s == target {
            return Some(p);
        }
        for (i, a) in s.args().iter().enumerate().rev() {
            let mut q = p.clone();
            q.push(i);
            stack.push((q, a));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures;
    use crate::parser::{parse_query, parse_term};

    fn tree(th: &Theory, t: &str) -> VariantTree {
        VariantTree::new(Arc::new(th.clone()), &parse_term(t, th).unwrap()).unwrap()
    }

    #[test]
    fn capture_follows_written_order() {
        let th = fixtures::exclusive_or_nofvp();
        let tr = tree(&th, "X:[NatSet] * Y:[NatSet]");
        let hits = query_tree(&tr, &parse_query("_ * ?", &th).unwrap()).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].highlights[0].term, "#2:[NatSet]");
        assert_eq!(hits[0].highlights[0].position, vec![1]);
    }

    #[test]
    fn lone_capture_highlights_every_node() {
        let th = fixtures::exclusive_or();
        let mut tr = tree(&th, "X:[NatSet] * Y:[NatSet]");
        tr.expand_node(0).unwrap();
        let hits = query_tree(&tr, &parse_query("?", &th).unwrap()).unwrap();
        assert_eq!(hits.len(), tr.len());
        assert!(hits.iter().all(|h| h.highlights.len() == 1 && h.highlights[0].position.is_empty()));
    }

    #[test]
    fn constant_with_capture() {
        let th = fixtures::exclusive_or();
        let tr = tree(&th, "s(0) * 0 * s(s(0))");
        let hits = query_tree(&tr, &parse_query("0 * ?", &th).unwrap()).unwrap();
        let shown: Vec<&str> = hits.iter().map(|h| h.highlights[0].term.as_str()).collect();
        assert!(shown.contains(&"s(0)"));
    }
}
