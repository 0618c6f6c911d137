//! Order-sorted repair of kind-level unifiers.
//!
//! Unification runs at the kind level. Afterwards every binding `X -> t`
//! whose variable carries a proper sort must satisfy `leastSort(t) <= sort(X)`.
//! Variables in the range of the substitution may be specialized to smaller
//! sorts to achieve that; each maximal specialization yields one unifier.

use std::collections::BTreeSet;

use crate::sort::SortRef;
use crate::subst::Substitution;
use crate::term::{Term, Var, VarClass};
use crate::theory::Theory;

fn resort(t: &Term, assignment: &[(Var, SortRef)]) -> Term {
    t.map_vars(&mut |v| match assignment.iter().find(|(w, _)| w == v) {
        Some((_, s)) => Term::Var(v.with_sort(*s)),
        None => Term::Var(v.clone()),
    })
}

/// Returns the well-sorted instances of `sigma`, allocating specialized
/// variables as `#n` starting at `*next`.
pub(crate) fn repair(th: &Theory, sigma: Substitution, next: &mut u32) -> Vec<Substitution> {
    let constrained: Vec<(&Var, &Term)> =
        sigma.iter().filter(|(v, _)| matches!(v.sort, SortRef::Sort(_))).collect();
    let violated = |assignment: &[(Var, SortRef)]| {
        constrained.iter().any(|(v, t)| {
            let vars = t.vars();
            vars.iter().all(|w| assignment.iter().any(|(a, _)| a == w))
                && !th.sorts.leq(th.least_sort(&resort(t, assignment)), v.sort)
        })
    };
    if constrained.iter().all(|(v, t)| th.sorts.leq(th.least_sort(t), v.sort)) {
        return vec![sigma];
    }

    if violated(&[]) {
        return Vec::new();
    }
    let mut vars: BTreeSet<Var> = BTreeSet::new();
    for (_, t) in &constrained {
        t.collect_vars(&mut vars);
    }
    let vars: Vec<Var> = vars.into_iter().collect();
    let candidates: Vec<Vec<SortRef>> = vars.iter().map(|v| th.sorts.lower_candidates(v.sort)).collect();

    // backtracking over sort choices; a binding is checked as soon as all its
    // variables have been assigned
    let mut valid: Vec<Vec<SortRef>> = Vec::new();
    let mut assignment: Vec<(Var, SortRef)> = Vec::new();
    fn search(
        k: usize,
        vars: &[Var],
        candidates: &[Vec<SortRef>],
        assignment: &mut Vec<(Var, SortRef)>,
        violated: &dyn Fn(&[(Var, SortRef)]) -> bool,
        valid: &mut Vec<Vec<SortRef>>,
    ) {
        if k == vars.len() {
            valid.push(assignment.iter().map(|(_, s)| *s).collect());
            return;
        }
        for &s in &candidates[k] {
            assignment.push((vars[k].clone(), s));
            if !violated(assignment) {
                search(k + 1, vars, candidates, assignment, violated, valid);
            }
            assignment.pop();
        }
    }
    search(0, &vars, &candidates, &mut assignment, &violated, &mut valid);

    let below = |a: &[SortRef], b: &[SortRef]| a != b && a.iter().zip(b).all(|(&x, &y)| th.sorts.leq(x, y));
    let maximal: Vec<&Vec<SortRef>> = valid.iter().filter(|a| !valid.iter().any(|b| below(a, b))).collect();

    let mut out = Vec::new();
    for choice in maximal {
        let mut renaming = Substitution::new();
        for (v, &s) in vars.iter().zip(choice) {
            if s != v.sort {
                let fresh = Var::fresh(VarClass::Unif, *next, s);
                *next += 1;
                renaming.insert(v.clone(), Term::Var(fresh));
            }
        }
        let mut repaired = sigma.map_terms(|t| renaming.apply(th, t));
        for (v, t) in renaming.iter() {
            if !repaired.contains(v) {
                repaired.insert(v.clone(), t.clone());
            }
        }
        out.push(repaired);
    }
    out
}
