//! Side-by-side comparison of two tree nodes.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::subst::Substitution;
use crate::term::Term;
use crate::theory::Theory;
use crate::unify::match_all;
use crate::variant::VariantTree;

/// A variable renaming `theta` with `theta(a[i]) =Ax b[i]` for every `i`.
pub fn renaming(th: &Theory, a: &[Term], b: &[Term]) -> Result<Option<Substitution>> {
    if a.len() != b.len() {
        return Ok(None);
    }
    let pairs: Vec<(Term, Term)> = a.iter().cloned().zip(b.iter().cloned()).collect();
    for m in match_all(th, &pairs, &Substitution::new())? {
        let mut targets = BTreeSet::new();
        let injective = m.iter().all(|(v, t)| match t {
            Term::Var(w) => w.sort == v.sort && targets.insert(w.clone()),
            _ => false,
        });
        let domain: BTreeSet<_> = m.domain().cloned().collect();
        // variables left unbound map to themselves and must not collide
        let mut vars = BTreeSet::new();
        for t in a {
            t.collect_vars(&mut vars);
        }
        let fixed_clash = vars.iter().any(|v| !domain.contains(v) && targets.contains(v));
        if injective && !fixed_clash {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BindingDiff {
    pub variable: String,
    pub left: Option<String>,
    pub right: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparisonReport {
    pub left: usize,
    pub right: usize,
    pub identical: bool,
    pub terms_equal_modulo_renaming: bool,
    pub terms_ax_equal: bool,
    pub substitutions_equal_modulo_renaming: bool,
    /// User variables whose bindings differ syntactically modulo Ax.
    pub binding_diffs: Vec<BindingDiff>,
    pub left_subsumes_right: bool,
    pub right_subsumes_left: bool,
}

pub fn compare_nodes(tree: &VariantTree, left: usize, right: usize) -> Result<ComparisonReport> {
    let th = &**tree.theory();
    let (a, b) = (&tree.nodes()[left], &tree.nodes()[right]);
    let (sa, sb) = (tree.user_subst(left), tree.user_subst(right));
    let terms_ax_equal = th.ax_equal(&a.term, &b.term);
    let terms_equal_modulo_renaming = renaming(th, std::slice::from_ref(&a.term), std::slice::from_ref(&b.term))?.is_some();
    let images = |s: &Substitution| -> Vec<Term> { tree.root_vars().iter().map(|(u, _)| s.image(u)).collect() };
    let substitutions_equal_modulo_renaming = renaming(th, &images(&sa), &images(&sb))?.is_some();
    let mut binding_diffs = Vec::new();
    for (u, _) in tree.root_vars() {
        let (l, r) = (sa.image(u), sb.image(u));
        if l != r {
            binding_diffs.push(BindingDiff { variable: u.label(), left: Some(th.show(&l)), right: Some(th.show(&r)) });
        }
    }
    let left_subsumes_right = tree.subsumes(&a.term, &a.subst, &b.term, &b.subst)?;
    let right_subsumes_left = tree.subsumes(&b.term, &b.subst, &a.term, &a.subst)?;
    let mut whole_a = vec![a.term.clone()];
    whole_a.extend(images(&sa));
    let mut whole_b = vec![b.term.clone()];
    whole_b.extend(images(&sb));
    let identical = renaming(th, &whole_a, &whole_b)?.is_some();
    Ok(ComparisonReport {
        left,
        right,
        identical,
        terms_equal_modulo_renaming,
        terms_ax_equal,
        substitutions_equal_modulo_renaming,
        binding_diffs,
        left_subsumes_right,
        right_subsumes_left,
    })
}
